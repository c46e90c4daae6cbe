//! BLS12-381 backend.
//!
//! The curve pairing is asymmetric, `G1 x G2 -> GT`. The symmetric
//! interface is realized by letting a source-group element carry an
//! optional G2 twin: multiples of the generator (public keys, `t P`) are
//! computed in both groups, while hash outputs and everything derived from
//! them (shares, proxy keys, `u_p`, `S`) live only in G1. `pair(a, b)` puts
//! whichever operand has a twin in the G2 slot, which is legal because
//! `e(aP, bP) = e(bP, aP)` for generator multiples.
//!
//! Equality and the group law are defined by the G1 component; the twin
//! is carried along when both operands have one.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use ark_bls12_381::{g1::Config as G1Config, Bls12_381, Fq12, Fr, G1Affine, G1Projective, G2Affine, G2Projective};
use ark_ec::hashing::curve_maps::wb::WBMap;
use ark_ec::hashing::map_to_curve_hasher::MapToCurveBasedHasher;
use ark_ec::hashing::HashToCurve;
use ark_ec::pairing::{Pairing, PairingOutput};
use ark_ec::{AdditiveGroup, CurveGroup, PrimeGroup};
use ark_ff::field_hashers::DefaultFieldHasher;
use ark_ff::{BigInteger, CyclotomicMultSubgroup, Field, One, PrimeField};
use ark_serialize::{CanonicalDeserialize, CanonicalSerialize};
use rand::RngCore;
use sha2::{Digest, Sha256, Sha512};

use super::{PairingSuite, ScalarField, SourceGroup, TargetGroup, DST_H1, DST_H2, DST_H3};
use crate::cipher::CipherKind;
use crate::error::{DecodeError, Error, Result};

const G1_LEN: usize = 48;
const G2_LEN: usize = 96;
const GT_LEN: usize = 576;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash)]
pub struct Bls12_381Suite;

pub type BlsScalar = Fr;

#[derive(Clone, Copy)]
pub struct BlsPoint {
    left: G1Projective,
    right: Option<G2Projective>,
}

#[derive(Clone, Copy, PartialEq, Eq)]
pub struct BlsGt(PairingOutput<Bls12_381>);

impl BlsPoint {
    pub fn g1(&self) -> G1Projective {
        self.left
    }

    pub fn g2(&self) -> Option<G2Projective> {
        self.right
    }

    /// G1-only element, e.g. a hash output.
    pub fn from_g1(left: G1Projective) -> Self {
        Self { left, right: None }
    }

    /// Drops the G2 twin.
    pub fn without_twin(self) -> Self {
        Self::from_g1(self.left)
    }
}

impl PartialEq for BlsPoint {
    fn eq(&self, other: &Self) -> bool {
        self.left == other.left
    }
}
impl Eq for BlsPoint {}

impl fmt::Debug for BlsPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let enc = Bls12_381Suite::encode_g1(&self.without_twin());
        write!(f, "BlsPoint({}…", hex::encode(&enc[..8]))?;
        if self.right.is_some() {
            write!(f, " +G2")?;
        }
        write!(f, ")")
    }
}

impl fmt::Debug for BlsGt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let enc = Bls12_381Suite::encode_gt(self);
        write!(f, "BlsGt({}…)", hex::encode(&enc[..8]))
    }
}

fn twin(
    a: Option<G2Projective>,
    b: Option<G2Projective>,
    op: impl Fn(G2Projective, G2Projective) -> G2Projective,
) -> Option<G2Projective> {
    Some(op(a?, b?))
}

impl Add for BlsPoint {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Self { left: self.left + rhs.left, right: twin(self.right, rhs.right, |a, b| a + b) }
    }
}
impl Sub for BlsPoint {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Self { left: self.left - rhs.left, right: twin(self.right, rhs.right, |a, b| a - b) }
    }
}
impl Neg for BlsPoint {
    type Output = Self;
    fn neg(self) -> Self {
        Self { left: -self.left, right: self.right.map(|r| -r) }
    }
}
impl Mul<Fr> for BlsPoint {
    type Output = Self;
    fn mul(self, rhs: Fr) -> Self {
        Self { left: self.left * rhs, right: self.right.map(|r| r * rhs) }
    }
}

impl SourceGroup<Fr> for BlsPoint {
    fn identity() -> Self {
        Self { left: G1Projective::ZERO, right: Some(G2Projective::ZERO) }
    }
}

impl ScalarField for Fr {
    fn zero() -> Self {
        Fr::ZERO
    }
    fn one() -> Self {
        Fr::ONE
    }
    fn from_u64(v: u64) -> Self {
        Fr::from(v)
    }
}

#[allow(clippy::suspicious_arithmetic_impl)]
impl Mul for BlsGt {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        // arkworks writes GT additively.
        Self(self.0 + rhs.0)
    }
}

impl TargetGroup<Fr> for BlsGt {
    fn identity() -> Self {
        Self(PairingOutput::ZERO)
    }
    fn pow(&self, e: Fr) -> Self {
        Self(self.0 * e)
    }
    fn inverse(&self) -> Self {
        Self(-self.0)
    }
}

/// Standard hash-to-curve, suite `BLS12381G1_XMD:SHA-256_SSWU_RO_`.
pub fn hash_to_g1(dst: &[u8], msg: &[u8]) -> G1Projective {
    let hasher = MapToCurveBasedHasher::<G1Projective, DefaultFieldHasher<Sha256, 128>, WBMap<G1Config>>::new(dst)
        .expect("valid hash-to-curve parameters");
    hasher.hash(msg).expect("map to curve is total").into()
}

/// Operands for the G1 and G2 slots of the pairing.
fn slots(a: &BlsPoint, b: &BlsPoint) -> Result<(G1Projective, G2Projective)> {
    match (a.right, b.right) {
        (_, Some(r)) => Ok((a.left, r)),
        (Some(r), None) => Ok((b.left, r)),
        (None, None) => Err(Error::NoRightSlot),
    }
}

/// Membership in the order-r subgroup of `Fq12^*`: first the cyclotomic
/// subgroup (`f^(p^4) f = f^(p^2)`), then `f^r = 1` with cyclotomic
/// arithmetic, which is only exact inside that subgroup.
fn in_target_group(f: &Fq12) -> bool {
    let mut p4 = *f;
    p4.frobenius_map_in_place(4);
    let mut p2 = *f;
    p2.frobenius_map_in_place(2);
    p4 * f == p2 && f.cyclotomic_exp(Fr::MODULUS).is_one()
}

fn frame<D: Digest>(h: &mut D, part: &[u8]) {
    h.update((part.len() as u32).to_be_bytes());
    h.update(part);
}

fn serialize<T: CanonicalSerialize>(v: &T, len: usize) -> Vec<u8> {
    let mut out = Vec::with_capacity(len);
    v.serialize_compressed(&mut out).expect("in-memory write");
    debug_assert_eq!(out.len(), len);
    out
}

fn check_len(bytes: &[u8], expected: usize) -> Result<(), DecodeError> {
    if bytes.len() != expected {
        return Err(DecodeError::WrongLength { expected, found: bytes.len() });
    }
    Ok(())
}

fn canonical<T>(bytes: &[u8], value: T, encode: impl Fn(&T) -> Vec<u8>) -> Result<T, DecodeError> {
    if encode(&value) != bytes {
        return Err(DecodeError::NonCanonical);
    }
    Ok(value)
}

impl PairingSuite for Bls12_381Suite {
    const ID: &'static str = "BLS12-381";
    const ORDER: &'static str = "52435875175126190479447740508185965837690552500527637822603658699938581184513";
    const SCALAR_LEN: usize = 32;
    const KEY_LEN: usize = 32;
    const CIPHER: CipherKind = CipherKind::ChaCha20;

    type Scalar = Fr;
    type G1 = BlsPoint;
    type Gt = BlsGt;

    fn generator() -> BlsPoint {
        BlsPoint { left: G1Projective::generator(), right: Some(G2Projective::generator()) }
    }

    fn pair(a: &BlsPoint, b: &BlsPoint) -> Result<BlsGt> {
        let (g1, g2) = slots(a, b)?;
        Ok(BlsGt(Bls12_381::pairing(g1, g2)))
    }

    fn pair_product(pairs: &[(BlsPoint, BlsPoint)]) -> Result<BlsGt> {
        let (g1s, g2s): (Vec<_>, Vec<_>) =
            pairs.iter().map(|(a, b)| slots(a, b)).collect::<Result<Vec<_>>>()?.into_iter().unzip();
        Ok(BlsGt(Bls12_381::multi_pairing(g1s, g2s)))
    }

    fn mul_left(p: &BlsPoint, s: Fr) -> BlsPoint {
        BlsPoint::from_g1(p.left * s)
    }

    fn h1(parts: &[&[u8]]) -> Fr {
        for counter in 0u32.. {
            let mut h = Sha512::new();
            frame(&mut h, DST_H1);
            h.update(counter.to_be_bytes());
            h.update((parts.len() as u32).to_be_bytes());
            for part in parts {
                frame(&mut h, part);
            }
            let s = Fr::from_be_bytes_mod_order(&h.finalize());
            if s != Fr::ZERO {
                return s;
            }
        }
        unreachable!("counter space exhausted")
    }

    fn h2(data: &[u8]) -> BlsPoint {
        let mut p = hash_to_g1(DST_H2, data);
        let mut counter = 0u32;
        while p == G1Projective::ZERO {
            counter += 1;
            let mut msg = data.to_vec();
            msg.extend_from_slice(&counter.to_be_bytes());
            p = hash_to_g1(DST_H2, &msg);
        }
        BlsPoint::from_g1(p)
    }

    fn h3(w: &BlsGt) -> Vec<u8> {
        let mut h = Sha256::new();
        frame(&mut h, DST_H3);
        h.update(Self::encode_gt(w));
        h.finalize().to_vec()
    }

    fn random_nonzero_scalar<R: RngCore + ?Sized>(rng: &mut R) -> Fr {
        loop {
            let mut wide = [0u8; 64];
            rng.fill_bytes(&mut wide);
            let s = Fr::from_le_bytes_mod_order(&wide);
            if s != Fr::ZERO {
                return s;
            }
        }
    }

    fn encode_scalar(s: &Fr) -> Vec<u8> {
        s.into_bigint().to_bytes_be()
    }

    fn decode_scalar(bytes: &[u8]) -> Result<Fr, DecodeError> {
        check_len(bytes, Self::SCALAR_LEN)?;
        let mut le = bytes.to_vec();
        le.reverse();
        Fr::deserialize_compressed(&le[..]).map_err(|_| DecodeError::NonCanonical)
    }

    fn encode_g1(p: &BlsPoint) -> Vec<u8> {
        let mut out = serialize(&p.left.into_affine(), G1_LEN);
        if let Some(r) = p.right {
            out.extend(serialize(&r.into_affine(), G2_LEN));
        }
        out
    }

    fn decode_g1(bytes: &[u8]) -> Result<BlsPoint, DecodeError> {
        if bytes.len() != G1_LEN && bytes.len() != G1_LEN + G2_LEN {
            return Err(DecodeError::WrongLength { expected: G1_LEN, found: bytes.len() });
        }
        let (l, r) = bytes.split_at(G1_LEN);
        let left: G1Projective = G1Affine::deserialize_compressed(l).map_err(|_| DecodeError::NotOnGroup)?.into();
        let right = if r.is_empty() {
            None
        } else {
            let right: G2Projective = G2Affine::deserialize_compressed(r).map_err(|_| DecodeError::NotOnGroup)?.into();
            let check =
                Bls12_381::multi_pairing([left, -G1Projective::generator()], [G2Projective::generator(), right]);
            if !check.0.is_one() {
                return Err(DecodeError::InconsistentRepresentation);
            }
            Some(right)
        };
        canonical(bytes, BlsPoint { left, right }, Self::encode_g1)
    }

    fn encode_gt(w: &BlsGt) -> Vec<u8> {
        serialize(&w.0, GT_LEN)
    }

    fn decode_gt(bytes: &[u8]) -> Result<BlsGt, DecodeError> {
        check_len(bytes, GT_LEN)?;
        let w =
            PairingOutput::<Bls12_381>::deserialize_compressed_unchecked(bytes).map_err(|_| DecodeError::NotOnGroup)?;
        if !in_target_group(&w.0) {
            return Err(DecodeError::NotOnGroup);
        }
        canonical(bytes, BlsGt(w), Self::encode_gt)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha20Rng;

    type B = Bls12_381Suite;

    fn rng() -> ChaCha20Rng {
        ChaCha20Rng::seed_from_u64(381)
    }

    #[test]
    fn hash_to_curve_rfc9380_vectors() {
        // Appendix J.9.1, x-coordinates; the top three bits are flags.
        const DST: &[u8] = b"QUUX-V01-CS02-with-BLS12381G1_XMD:SHA-256_SSWU_RO_";
        let cases: [(&[u8], &str); 2] = [
            (b"", "052926add2207b76ca4fa57a8734416c8dc95e24501772c814278700eed6d1e4e8cf62d9c09db0fac349612b759e79a1"),
            (
                b"abc",
                "03567bc5ef9c690c2ab2ecdf6a96ef1c139cc0b2f284dca0a9a7943388a49a3aee664ba5379a7655d3c68900be2f6903",
            ),
        ];
        for (msg, want_x) in cases {
            let mut enc = serialize(&hash_to_g1(DST, msg).into_affine(), G1_LEN);
            enc[0] &= 0x1f;
            assert_eq!(hex::encode(enc), want_x);
        }
    }

    #[test]
    fn bilinear_and_symmetric() {
        let mut rng = rng();
        let g = B::generator();
        for _ in 0..4 {
            let a = B::random_nonzero_scalar(&mut rng);
            let b = B::random_nonzero_scalar(&mut rng);
            let lhs = B::pair(&(g * a), &(g * b)).unwrap();
            let rhs = B::pair(&g, &g).unwrap().pow(a * b);
            assert_eq!(lhs, rhs);

            // Both slot assignments agree for twinned operands.
            let x = g * a;
            let h = B::h2(&a.into_bigint().to_bytes_be());
            assert_eq!(B::pair(&x, &h).unwrap(), B::pair(&h, &x).unwrap());
        }
    }

    #[test]
    fn hash_outputs_need_a_twinned_partner() {
        let h = B::h2(b"one");
        let k = B::h2(b"two");
        assert_eq!(B::pair(&h, &k), Err(Error::NoRightSlot));
        assert!(B::pair(&h, &B::generator()).is_ok());
    }

    #[test]
    fn non_degenerate() {
        let g = B::generator();
        assert_ne!(B::pair(&g, &g).unwrap(), BlsGt::identity());
    }

    #[test]
    fn group_order_matches_scalar_field() {
        assert_eq!(Fr::MODULUS.to_string(), B::ORDER);
        let q_minus_one = -Fr::ONE;
        let g = B::generator();
        assert!((g * q_minus_one + g).is_identity());
    }

    #[test]
    fn h3_length_and_determinism() {
        let w = B::pair(&B::generator(), &B::generator()).unwrap();
        assert_eq!(B::h3(&w).len(), B::KEY_LEN);
        assert_eq!(B::h3(&w), B::h3(&w));
        assert_ne!(B::h3(&w), B::h3(&w.pow(Fr::from(2u64))));
    }

    #[test]
    fn h1_is_framed() {
        assert_ne!(B::h1(&[b"ab", b"c"]), B::h1(&[b"a", b"bc"]));
        assert_eq!(B::h1(&[b"ab", b"c"]), B::h1(&[b"ab", b"c"]));
    }

    #[test]
    fn element_round_trips() {
        let mut rng = rng();
        let g = B::generator();
        assert_eq!(B::decode_g1(&B::encode_g1(&g)).unwrap(), g);
        assert_eq!(B::encode_g1(&g).len(), G1_LEN + G2_LEN);

        let h = B::h2(b"warrant");
        let enc = B::encode_g1(&h);
        assert_eq!(enc.len(), G1_LEN);
        assert_eq!(B::decode_g1(&enc).unwrap(), h);

        let s = B::random_nonzero_scalar(&mut rng);
        let enc = B::encode_scalar(&s);
        assert_eq!(enc.len(), 32);
        assert_eq!(B::decode_scalar(&enc).unwrap(), s);

        let w = B::pair(&g, &h).unwrap();
        let enc = B::encode_gt(&w);
        assert_eq!(B::decode_gt(&enc).unwrap(), w);
    }

    #[test]
    fn all_ff_is_rejected() {
        assert_eq!(B::decode_g1(&[0xff; G1_LEN]), Err(DecodeError::NotOnGroup));
        assert_eq!(B::decode_g1(&[0xff; G1_LEN + G2_LEN]), Err(DecodeError::NotOnGroup));
        assert_eq!(B::decode_gt(&[0xff; GT_LEN]), Err(DecodeError::NotOnGroup));
        assert_eq!(B::decode_scalar(&[0xff; 32]), Err(DecodeError::NonCanonical));
    }

    #[test]
    fn mismatched_twin_is_rejected() {
        let g = B::generator();
        let a = g * Fr::from(5u64);
        let b = g * Fr::from(6u64);
        let mut enc = B::encode_g1(&a.without_twin());
        enc.extend_from_slice(&B::encode_g1(&b)[G1_LEN..]);
        assert_eq!(B::decode_g1(&enc), Err(DecodeError::InconsistentRepresentation));
    }

    #[test]
    fn target_group_outside_subgroup_is_rejected() {
        // An arbitrary Fq12 element of the right length is almost never in
        // the order-r subgroup.
        let w = B::pair(&B::generator(), &B::generator()).unwrap();
        let mut enc = B::encode_gt(&w);
        enc[0] ^= 1;
        assert!(B::decode_gt(&enc).is_err());
    }
}
