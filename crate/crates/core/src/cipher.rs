//! The symmetric pair `E_k` / `D_k`.
//!
//! Both constructions are length-preserving keystreams with no tag. The
//! session key is derived from fresh ephemerals and encrypts exactly one
//! message, so the ChaCha20 nonce is fixed at zero. **Never reuse a
//! [`SymmetricKey`] for a second message.** Integrity comes from the
//! scheme's `r_p = H1(c || k)` check, not from the cipher.

use chacha20::cipher::{KeyIvInit, StreamCipher};
use chacha20::ChaCha20;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CipherKind {
    /// XOR with the key repeated; test suites only.
    RepeatingXor,
    /// ChaCha20 (RFC 8439) with a 256-bit key and an all-zero nonce.
    ChaCha20,
}

#[derive(Clone, PartialEq, Eq)]
pub struct SymmetricKey(Vec<u8>);

impl SymmetricKey {
    pub fn new(bytes: Vec<u8>) -> Self {
        Self(bytes)
    }

    pub fn as_bytes(&self) -> &[u8] {
        &self.0
    }
}

impl std::fmt::Debug for SymmetricKey {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "SymmetricKey({} bytes)", self.0.len())
    }
}

impl CipherKind {
    pub fn key_len(self) -> usize {
        match self {
            CipherKind::RepeatingXor => 1,
            CipherKind::ChaCha20 => 32,
        }
    }

    fn check(self, key: &SymmetricKey) -> Result<()> {
        let expected = self.key_len();
        if key.0.len() != expected {
            return Err(Error::KeyLength { expected, found: key.0.len() });
        }
        Ok(())
    }

    fn apply(self, key: &SymmetricKey, data: &[u8]) -> Result<Vec<u8>> {
        self.check(key)?;
        let mut out = data.to_vec();
        match self {
            CipherKind::RepeatingXor => {
                for (b, k) in out.iter_mut().zip(key.0.iter().cycle()) {
                    *b ^= k;
                }
            }
            CipherKind::ChaCha20 => {
                let nonce = [0u8; 12];
                let mut stream = ChaCha20::new(key.0.as_slice().into(), &nonce.into());
                stream.apply_keystream(&mut out);
            }
        }
        Ok(out)
    }

    pub fn encrypt(self, key: &SymmetricKey, message: &[u8]) -> Result<Vec<u8>> {
        self.apply(key, message)
    }

    pub fn decrypt(self, key: &SymmetricKey, ciphertext: &[u8]) -> Result<Vec<u8>> {
        self.apply(key, ciphertext)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    const XOR: CipherKind = CipherKind::RepeatingXor;
    const CHACHA: CipherKind = CipherKind::ChaCha20;

    fn k(bytes: &[u8]) -> SymmetricKey {
        SymmetricKey::new(bytes.to_vec())
    }

    #[test]
    fn xor_vectors() {
        assert_eq!(0x41 ^ 0x03, 0x42);
        assert_eq!(XOR.encrypt(&k(&[3]), &[0x41]).unwrap(), vec![0x42]);
        assert_eq!(XOR.decrypt(&k(&[3]), &[0x42]).unwrap(), vec![0x41]);
        assert!(XOR.encrypt(&k(&[3]), &[]).unwrap().is_empty());
        assert!(XOR.decrypt(&k(&[3]), &[]).unwrap().is_empty());
    }

    #[test]
    fn wrong_key_length() {
        assert_eq!(XOR.encrypt(&k(&[1, 2]), b"m"), Err(Error::KeyLength { expected: 1, found: 2 }));
        assert!(matches!(CHACHA.decrypt(&k(&[0; 16]), b"m"), Err(Error::KeyLength { .. })));
    }

    #[test]
    fn wrong_toy_key_never_decrypts() {
        // Exhaustive over the one-byte key space.
        let m = [0x41u8, 0x00, 0xff];
        let c = XOR.encrypt(&k(&[3]), &m).unwrap();
        for other in (0..=255u8).filter(|&b| b != 3) {
            assert_ne!(XOR.decrypt(&k(&[other]), &c).unwrap(), m);
        }
    }

    #[test]
    fn chacha_rfc8439_keystream() {
        // RFC 8439 A.1 vector #1: zero key, zero nonce, block 0.
        let c = CHACHA.encrypt(&k(&[0; 32]), &[0; 16]).unwrap();
        assert_eq!(hex::encode(c), "76b8e0ada0f13d90405d6ae55386bd28");
    }

    #[test]
    fn chacha_wrong_key_differs() {
        let m = b"attack at dawn";
        let c = CHACHA.encrypt(&k(&[1; 32]), m).unwrap();
        assert_ne!(&c[..], &m[..]);
        assert_ne!(CHACHA.decrypt(&k(&[2; 32]), &c).unwrap(), m.to_vec());
    }

    proptest! {
        #[test]
        fn round_trip(key in any::<[u8; 32]>(), kb in any::<u8>(), m in proptest::collection::vec(any::<u8>(), 0..65536)) {
            let c = CHACHA.encrypt(&k(&key), &m).unwrap();
            prop_assert_eq!(c.len(), m.len());
            prop_assert_eq!(CHACHA.decrypt(&k(&key), &c).unwrap(), m.clone());
            let c = XOR.encrypt(&k(&[kb]), &m).unwrap();
            prop_assert_eq!(XOR.decrypt(&k(&[kb]), &c).unwrap(), m);
        }
    }
}
