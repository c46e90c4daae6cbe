//! Proxy key generation.
//!
//! Each original signcrypter publishes `S_ai = x_ai H2(m_w)`. The proxy
//! group checks every share with `e(P, S_ai) = e(y_ai, H2(m_w))`, sums them
//! into `S_A`, and each proxy derives `S_pj = S_A + x_pj H2(m_w)`.

use std::collections::HashSet;

use crate::algebra::{require_nonzero, sum_g1, PairingSuite, TargetGroup};
use crate::error::{DecodeError, Error, Result};
use crate::parties::{KeyRegistry, Role, Warrant};
use crate::wire::{Reader, Writer};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DelegationShare<S: PairingSuite> {
    pub signer_id: String,
    pub share: S::G1,
}

impl<S: PairingSuite> DelegationShare<S> {
    pub fn encode(&self) -> Vec<u8> {
        let mut w = Writer::with_header(S::ID);
        w.str(&self.signer_id).bytes(&S::encode_g1(&self.share));
        w.finish()
    }

    pub fn decode(bytes: &[u8]) -> Result<Self> {
        let mut r = Reader::header(bytes, S::ID)?;
        let signer_id = r.str("signer id")?;
        let share = S::decode_g1(r.bytes()?)?;
        r.finish()?;
        Ok(Self { signer_id, share })
    }
}

pub fn make_delegation_share<S: PairingSuite>(
    signer_id: &str,
    sk: S::Scalar,
    warrant_bytes: &[u8],
) -> Result<DelegationShare<S>> {
    let sk = require_nonzero::<S>(sk, "secret key")?;
    Ok(DelegationShare { signer_id: signer_id.to_owned(), share: S::h2(warrant_bytes) * sk })
}

/// Checked as `e(S_ai, P) e(-H2(m_w), y_ai) = 1`.
fn share_holds<S: PairingSuite>(pk: &S::G1, hashed_warrant: &S::G1, share: &S::G1) -> bool {
    S::pair_product(&[(*share, S::generator()), (-*hashed_warrant, *pk)]).is_ok_and(|w| w == S::Gt::identity())
}

/// `e(P, S_ai) = e(y_ai, H2(m_w))`.
pub fn verify_delegation_share<S: PairingSuite>(pk: &S::G1, warrant_bytes: &[u8], share: &DelegationShare<S>) -> bool {
    share_holds::<S>(pk, &S::h2(warrant_bytes), &share.share)
}

/// `S_A` together with the warrant it was computed for.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AggregatedDelegation<S: PairingSuite> {
    pub aggregate: S::G1,
    pub originals: usize,
    pub warrant_bytes: Vec<u8>,
    pub warrant: Warrant,
}

/// Verifies one share per original in the warrant and sums them.
///
/// Aborts on the first missing, duplicate, unknown or invalid share, naming
/// the signer.
pub fn aggregate_delegation<S: PairingSuite>(
    shares: &[DelegationShare<S>],
    warrant_bytes: &[u8],
    reg: &KeyRegistry<S>,
) -> Result<AggregatedDelegation<S>> {
    let warrant = Warrant::decode(warrant_bytes)?;
    let expected: HashSet<&str> = warrant.original_ids.iter().map(String::as_str).collect();
    let mut seen = HashSet::new();
    for s in shares {
        let id = s.signer_id.as_str();
        if !expected.contains(id) {
            return Err(Error::Unexpected { what: "delegation share", id: id.into() });
        }
        if !seen.insert(id) {
            return Err(Error::Duplicate { what: "delegation share", id: id.into() });
        }
    }
    if let Some(id) = warrant.original_ids.iter().find(|id| !seen.contains(id.as_str())) {
        return Err(Error::Missing { what: "delegation share", id: id.clone() });
    }

    let hashed = S::h2(warrant_bytes);
    let mut ordered = Vec::with_capacity(shares.len());
    for id in &warrant.original_ids {
        let share = shares.iter().find(|s| &s.signer_id == id).expect("checked above");
        let pk = reg.resolve(id, Role::Original)?;
        if !share_holds::<S>(&pk, &hashed, &share.share) {
            return Err(Error::ShareVerification(id.clone()));
        }
        ordered.push(share.share);
    }

    Ok(AggregatedDelegation {
        aggregate: sum_g1::<S>(ordered),
        originals: warrant.original_ids.len(),
        warrant_bytes: warrant_bytes.to_vec(),
        warrant,
    })
}

/// A proxy's signcryption key `S_pj`, bound to the delegation it came from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProxyKey<S: PairingSuite> {
    pub proxy_id: String,
    pub key: S::G1,
    pub delegation: AggregatedDelegation<S>,
}

pub fn derive_proxy_key<S: PairingSuite>(
    agg: &AggregatedDelegation<S>,
    proxy_id: &str,
    sk: S::Scalar,
) -> Result<ProxyKey<S>> {
    let sk = require_nonzero::<S>(sk, "secret key")?;
    if !agg.warrant.proxy_ids.iter().any(|p| p == proxy_id) {
        return Err(Error::Unexpected { what: "proxy key", id: proxy_id.into() });
    }
    Ok(ProxyKey {
        proxy_id: proxy_id.to_owned(),
        key: agg.aggregate + S::h2(&agg.warrant_bytes) * sk,
        delegation: agg.clone(),
    })
}

impl<S: PairingSuite> ProxyKey<S> {
    /// Public restatement of the key relation:
    /// `e(S_pj, P) = e(S_A, P) * e(H2(m_w), y_pj)`.
    pub fn matches_public_key(&self, pk: &S::G1) -> bool {
        let hashed = S::h2(&self.delegation.warrant_bytes);
        let lhs = self.key - self.delegation.aggregate;
        S::pair_product(&[(lhs, S::generator()), (-hashed, *pk)]).is_ok_and(|w| w == S::Gt::identity())
    }

    /// Proxy key file: header, proxy id, `S_pj`, `S_A`, n, warrant bytes.
    pub fn encode(&self) -> Vec<u8> {
        let mut w = Writer::with_header(S::ID);
        w.str(&self.proxy_id)
            .bytes(&S::encode_g1(&self.key))
            .bytes(&S::encode_g1(&self.delegation.aggregate))
            .u32(self.delegation.originals as u32)
            .bytes(&self.delegation.warrant_bytes);
        w.finish()
    }

    pub fn decode(bytes: &[u8]) -> Result<Self> {
        let mut r = Reader::header(bytes, S::ID)?;
        let proxy_id = r.str("proxy id")?;
        let key = S::decode_g1(r.bytes()?)?;
        let aggregate = S::decode_g1(r.bytes()?)?;
        let originals = r.u32()? as usize;
        let warrant_bytes = r.bytes()?.to_vec();
        r.finish()?;
        let warrant = Warrant::decode(&warrant_bytes)?;
        if warrant.original_ids.len() != originals {
            return Err(DecodeError::Malformed("original count disagrees with warrant".into()).into());
        }
        if !warrant.proxy_ids.contains(&proxy_id) {
            return Err(Error::Unexpected { what: "proxy key", id: proxy_id });
        }
        Ok(Self { proxy_id, key, delegation: AggregatedDelegation { aggregate, originals, warrant_bytes, warrant } })
    }
}
