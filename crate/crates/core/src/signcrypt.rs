//! Multi-proxy multi-signcryption generation.
//!
//! 1. Every proxy draws an ephemeral `t_j` and broadcasts
//!    `r_pj = e(P, y_c)^t_j`.
//! 2. Every proxy derives `k = H3(prod r_pj)`, `c = E_k(m)`,
//!    `r_p = H1(c || k)` and sends `u_pj = t_j P - r_p S_pj` to the clerk.
//! 3. The clerk sums `u_p = sum u_pj`, sets `S = l S_A` and emits
//!    `(m_w, S, c, r_p, u_p)`.

use std::collections::HashSet;
use std::fmt;

use rand::RngCore;

use crate::algebra::{product_gt, require_nonzero, sum_g1, PairingSuite, ScalarField, TargetGroup};
use crate::cipher::SymmetricKey;
use crate::delegation::{AggregatedDelegation, ProxyKey};
use crate::error::{Error, Result};
use crate::wire::{Reader, Writer};

/// Checks that `ids` holds exactly one entry per name in `expected`.
pub(crate) fn check_participants<'a>(
    what: &'static str,
    expected: &[String],
    ids: impl IntoIterator<Item = &'a str>,
) -> Result<()> {
    let allowed: HashSet<&str> = expected.iter().map(String::as_str).collect();
    let mut seen = HashSet::new();
    for id in ids {
        if !allowed.contains(id) {
            return Err(Error::Unexpected { what, id: id.into() });
        }
        if !seen.insert(id) {
            return Err(Error::Duplicate { what, id: id.into() });
        }
    }
    match expected.iter().find(|id| !seen.contains(id.as_str())) {
        Some(id) => Err(Error::Missing { what, id: id.clone() }),
        None => Ok(()),
    }
}

/// A proxy's broadcast `r_pj`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Commitment<S: PairingSuite> {
    pub proxy_id: String,
    pub value: S::Gt,
}

impl<S: PairingSuite> Commitment<S> {
    pub fn encode(&self) -> Vec<u8> {
        let mut w = Writer::with_header(S::ID);
        w.str(&self.proxy_id).bytes(&S::encode_gt(&self.value));
        w.finish()
    }

    pub fn decode(bytes: &[u8]) -> Result<Self> {
        let mut r = Reader::header(bytes, S::ID)?;
        let proxy_id = r.str("proxy id")?;
        let value = S::decode_gt(r.bytes()?)?;
        r.finish()?;
        Ok(Self { proxy_id, value })
    }
}

/// One signcryption session of one proxy.
///
/// Holds the ephemeral `t_j` until [`ProxySession::partial_signcrypt`]
/// consumes it. There is no way to serialize a session.
pub struct ProxySession<S: PairingSuite> {
    proxy_id: String,
    nonce: Option<S::Scalar>,
    commitment: S::Gt,
    public_nonce: S::G1,
}

impl<S: PairingSuite> fmt::Debug for ProxySession<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ProxySession")
            .field("proxy_id", &self.proxy_id)
            .field("commitment", &self.commitment)
            .field("consumed", &self.nonce.is_none())
            .finish_non_exhaustive()
    }
}

/// Draws `t_j` and computes `r_pj = e(P, y_c)^t_j`.
pub fn proxy_commit<S: PairingSuite, R: RngCore + ?Sized>(
    rng: &mut R,
    proxy_id: &str,
    recipient_pk: &S::G1,
) -> Result<ProxySession<S>> {
    ProxySession::with_nonce(proxy_id, S::random_nonzero_scalar(rng), recipient_pk)
}

impl<S: PairingSuite> ProxySession<S> {
    pub fn with_nonce(proxy_id: &str, nonce: S::Scalar, recipient_pk: &S::G1) -> Result<Self> {
        let nonce = require_nonzero::<S>(nonce, "ephemeral")?;
        // e(P, y_c)^t = e(tP, y_c)
        let public_nonce = S::mul_left(&S::generator(), nonce);
        Ok(Self {
            proxy_id: proxy_id.to_owned(),
            nonce: Some(nonce),
            commitment: S::pair(&public_nonce, recipient_pk)?,
            public_nonce,
        })
    }

    pub fn proxy_id(&self) -> &str {
        &self.proxy_id
    }

    pub fn commitment(&self) -> Commitment<S> {
        Commitment { proxy_id: self.proxy_id.clone(), value: self.commitment }
    }

    /// `v_pj = t_j P`, only broadcast when partials are to be checked.
    pub fn public_nonce(&self) -> S::G1 {
        self.public_nonce
    }

    pub fn is_consumed(&self) -> bool {
        self.nonce.is_none()
    }

    /// Encrypts `message` under the agreed session key and returns this
    /// proxy's partial. The ephemeral is destroyed; a second call fails.
    pub fn partial_signcrypt(
        &mut self,
        proxy_key: &ProxyKey<S>,
        message: &[u8],
        key: &SymmetricKey,
    ) -> Result<SigncryptOutput<S>> {
        if proxy_key.proxy_id != self.proxy_id {
            return Err(Error::Unexpected { what: "proxy key", id: proxy_key.proxy_id.clone() });
        }
        let ciphertext = S::CIPHER.encrypt(key, message)?;
        self.nonce.take().ok_or_else(|| Error::SessionConsumed(self.proxy_id.clone()))?;
        let r_p = S::h1(&[&ciphertext, key.as_bytes()]);
        let u = self.public_nonce - proxy_key.key * r_p;
        Ok(SigncryptOutput {
            ciphertext,
            r_p,
            partial: PartialSigncryption { proxy_id: self.proxy_id.clone(), r_p, u },
        })
    }
}

/// `k = H3(prod r_pj)` over exactly one commitment per warrant proxy.
pub fn derive_session_key<S: PairingSuite>(
    commitments: &[Commitment<S>],
    proxy_ids: &[String],
) -> Result<SymmetricKey> {
    check_participants("commitment", proxy_ids, commitments.iter().map(|c| c.proxy_id.as_str()))?;
    let product = product_gt::<S>(commitments.iter().map(|c| c.value));
    Ok(SymmetricKey::new(S::h3(&product)))
}

/// `u_pj` plus the `r_p` it was computed against.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartialSigncryption<S: PairingSuite> {
    pub proxy_id: String,
    pub r_p: S::Scalar,
    pub u: S::G1,
}

impl<S: PairingSuite> PartialSigncryption<S> {
    pub fn encode(&self) -> Vec<u8> {
        let mut w = Writer::with_header(S::ID);
        w.str(&self.proxy_id).bytes(&S::encode_scalar(&self.r_p)).bytes(&S::encode_g1(&self.u));
        w.finish()
    }

    pub fn decode(bytes: &[u8]) -> Result<Self> {
        let mut r = Reader::header(bytes, S::ID)?;
        let proxy_id = r.str("proxy id")?;
        let r_p = S::decode_scalar(r.bytes()?)?;
        let u = S::decode_g1(r.bytes()?)?;
        r.finish()?;
        Ok(Self { proxy_id, r_p, u })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SigncryptOutput<S: PairingSuite> {
    pub ciphertext: Vec<u8>,
    pub r_p: S::Scalar,
    pub partial: PartialSigncryption<S>,
}

/// The transmitted tuple `(m_w, S, c, r_p, u_p)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SigncryptionPackage<S: PairingSuite> {
    pub warrant_bytes: Vec<u8>,
    pub s: S::G1,
    pub ciphertext: Vec<u8>,
    pub r_p: S::Scalar,
    pub u_p: S::G1,
}

impl<S: PairingSuite> SigncryptionPackage<S> {
    /// Package file: header, then warrant bytes, `S`, `c`, `r_p`, `u_p`,
    /// each length-prefixed.
    pub fn encode(&self) -> Vec<u8> {
        let mut w = Writer::with_header(S::ID);
        w.bytes(&self.warrant_bytes)
            .bytes(&S::encode_g1(&self.s))
            .bytes(&self.ciphertext)
            .bytes(&S::encode_scalar(&self.r_p))
            .bytes(&S::encode_g1(&self.u_p));
        w.finish()
    }

    pub fn decode(bytes: &[u8]) -> Result<Self> {
        let mut r = Reader::header(bytes, S::ID)?;
        let warrant_bytes = r.bytes()?.to_vec();
        let s = S::decode_g1(r.bytes()?)?;
        let ciphertext = r.bytes()?.to_vec();
        let r_p = S::decode_scalar(r.bytes()?)?;
        let u_p = S::decode_g1(r.bytes()?)?;
        r.finish()?;
        if r_p.is_zero() {
            return Err(Error::ZeroScalar("r_p"));
        }
        Ok(Self { warrant_bytes, s, ciphertext, r_p, u_p })
    }
}

/// Clerk step: `u_p = sum u_pj`, `S = l S_A`.
pub fn clerk_aggregate<S: PairingSuite>(
    partials: &[PartialSigncryption<S>],
    agg: &AggregatedDelegation<S>,
    ciphertext: &[u8],
    r_p: S::Scalar,
) -> Result<SigncryptionPackage<S>> {
    let proxy_ids = &agg.warrant.proxy_ids;
    check_participants("partial", proxy_ids, partials.iter().map(|p| p.proxy_id.as_str()))?;
    if let Some(p) = partials.iter().find(|p| p.r_p != r_p) {
        return Err(Error::PartialMismatch(p.proxy_id.clone()));
    }
    let l = S::Scalar::from_u64(proxy_ids.len() as u64);
    Ok(SigncryptionPackage {
        warrant_bytes: agg.warrant_bytes.clone(),
        s: agg.aggregate * l,
        ciphertext: ciphertext.to_vec(),
        r_p,
        u_p: sum_g1::<S>(partials.iter().map(|p| p.u)),
    })
}

/// Optional clerk-side check of one partial. Requires the proxy to have
/// broadcast `v_pj = t_j P` next to `r_pj`.
///
/// Holds iff `e(v_pj, y_c) = r_pj` and
/// `e(u_pj, P) = e(v_pj, P) * (e(S_A, P) e(H2(m_w), y_pj))^-r_p`.
pub fn clerk_verify_partial<S: PairingSuite>(
    partial: &PartialSigncryption<S>,
    commitment: &Commitment<S>,
    public_nonce: &S::G1,
    proxy_pk: &S::G1,
    agg: &AggregatedDelegation<S>,
    r_p: S::Scalar,
    recipient_pk: &S::G1,
) -> bool {
    if partial.proxy_id != commitment.proxy_id || partial.r_p != r_p {
        return false;
    }
    let hashed = S::h2(&agg.warrant_bytes);
    let check = || -> Result<bool> {
        if S::pair(public_nonce, recipient_pk)? != commitment.value {
            return Ok(false);
        }
        // e(u_pj - v_pj + r_p S_A, P) e(r_p H2(m_w), y_pj) = 1
        let lhs = partial.u - *public_nonce + agg.aggregate * r_p;
        let w = S::pair_product(&[(lhs, S::generator()), (hashed * r_p, *proxy_pk)])?;
        Ok(w == S::Gt::identity())
    };
    check().unwrap_or(false)
}
