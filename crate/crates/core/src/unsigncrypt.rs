//! Recipient side: recover `k`, decrypt, accept iff `r_p = H1(c || k)`.

use crate::algebra::{require_nonzero, sum_g1, PairingSuite};
use crate::cipher::SymmetricKey;
use crate::error::Result;
use crate::parties::{KeyRegistry, Role, Violation, Warrant};
use crate::signcrypt::SigncryptionPackage;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnsigncryptResult {
    pub accepted: bool,
    /// Present iff `accepted`.
    pub plaintext: Option<Vec<u8>>,
    pub violations: Vec<Violation>,
    /// Delegating identities named by the warrant.
    pub originals: Vec<String>,
    /// Signcrypting identities named by the warrant.
    pub proxies: Vec<String>,
}

impl UnsigncryptResult {
    /// Accepted with no warrant findings.
    pub fn is_clean(&self) -> bool {
        self.accepted && self.violations.is_empty()
    }
}

/// `k = H3(e(u_p, y_c) e(S, y_c)^r_p e(H2(m_w), sum y_pj)^(r_p x_c))`.
///
/// The proxy keys `y_pj` are looked up in `reg` under the warrant's proxy ids.
pub fn recover_key<S: PairingSuite>(
    pkg: &SigncryptionPackage<S>,
    sk_c: S::Scalar,
    reg: &KeyRegistry<S>,
) -> Result<SymmetricKey> {
    let warrant = Warrant::decode(&pkg.warrant_bytes)?;
    recover_with(pkg, &warrant, sk_c, reg)
}

fn recover_with<S: PairingSuite>(
    pkg: &SigncryptionPackage<S>,
    warrant: &Warrant,
    sk_c: S::Scalar,
    reg: &KeyRegistry<S>,
) -> Result<SymmetricKey> {
    let sk_c = require_nonzero::<S>(sk_c, "secret key")?;
    let proxy_pks = warrant.proxy_ids.iter().map(|id| reg.resolve(id, Role::Proxy)).collect::<Result<Vec<_>>>()?;
    let hashed = S::h2(&pkg.warrant_bytes);

    // e(u_p, y_c) e(S, y_c)^r_p = e(x_c (u_p + r_p S), P) and
    // e(H2(m_w), sum y_pj)^(r_p x_c) = e(r_p x_c H2(m_w), sum y_pj).
    let first = S::mul_left(&(pkg.u_p + pkg.s * pkg.r_p), sk_c);
    let third = S::mul_left(&hashed, pkg.r_p * sk_c);
    let w = S::pair_product(&[(first, S::generator()), (third, sum_g1::<S>(proxy_pks))])?;
    Ok(SymmetricKey::new(S::h3(&w)))
}

/// Decrypts and verifies `pkg`.
///
/// A failed check is a rejecting result, not an error; errors are reserved
/// for malformed input and unresolved identities. Warrant findings are
/// reported alongside the decision, and the message digest is compared
/// only once the package has been accepted.
pub fn unsigncrypt<S: PairingSuite>(
    pkg: &SigncryptionPackage<S>,
    sk_c: S::Scalar,
    reg: &KeyRegistry<S>,
    now: u64,
) -> Result<UnsigncryptResult> {
    let warrant = Warrant::decode(&pkg.warrant_bytes)?;
    let k = recover_with(pkg, &warrant, sk_c, reg)?;
    let m = S::CIPHER.decrypt(&k, &pkg.ciphertext)?;
    let accepted = S::h1(&[&pkg.ciphertext, k.as_bytes()]) == pkg.r_p;

    let mut violations = warrant.validate(now, reg);
    if accepted && warrant.commits_to(&m) == Some(false) {
        violations.push(Violation::MessageDigestMismatch);
    }
    Ok(UnsigncryptResult {
        accepted,
        plaintext: accepted.then_some(m),
        violations,
        originals: warrant.original_ids,
        proxies: warrant.proxy_ids,
    })
}
