//! The pairing-suite contract and its two backends.
//!
//! Protocol code is written once against [`PairingSuite`], which exposes a
//! symmetric pairing `G1 x G1 -> Gt` together with the three hash functions
//! the scheme needs. [`Toy11_23`] is a tiny suite whose every value can be
//! checked by hand; [`Bls12_381Suite`] is the production backend.

use std::fmt::Debug;
use std::ops::{Add, Mul, Neg, Sub};

use rand::RngCore;

use crate::cipher::CipherKind;
use crate::error::{DecodeError, Result};

mod bls12;
mod toy;

pub use bls12::{hash_to_g1, Bls12_381Suite, BlsGt, BlsPoint, BlsScalar};
pub use toy::{Toy11_23, ToyGt, ToyPoint, ToyScalar};

/// Domain separation tags prefixed to hash inputs on real backends.
pub const DST_H1: &[u8] = b"MPMS/H1";
pub const DST_H2: &[u8] = b"MPMS/H2";
pub const DST_H3: &[u8] = b"MPMS/H3";

/// Residues modulo the group order.
pub trait ScalarField:
    Copy
    + Eq
    + Debug
    + Send
    + Sync
    + 'static
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
{
    fn zero() -> Self;
    fn one() -> Self;
    fn from_u64(v: u64) -> Self;

    fn is_zero(&self) -> bool {
        *self == Self::zero()
    }
}

/// The additive source group.
pub trait SourceGroup<F>:
    Copy
    + Eq
    + Debug
    + Send
    + Sync
    + 'static
    + Add<Output = Self>
    + Sub<Output = Self>
    + Neg<Output = Self>
    + Mul<F, Output = Self>
{
    fn identity() -> Self;

    fn is_identity(&self) -> bool {
        *self == Self::identity()
    }
}

/// The multiplicative target group.
pub trait TargetGroup<F>: Copy + Eq + Debug + Send + Sync + 'static + Mul<Output = Self> {
    fn identity() -> Self;
    fn pow(&self, e: F) -> Self;
    fn inverse(&self) -> Self;
}

/// An algebraic environment `(G1, Gt, P, q, e, H1, H2, H3, E/D)`.
///
/// Suites are zero-sized markers; everything is an associated function, so
/// values from two suites can never be mixed in one computation. Suite
/// mismatches surface only at the decode boundary, where every object
/// carries its suite id.
pub trait PairingSuite: Copy + Debug + Default + Send + Sync + 'static {
    const ID: &'static str;
    /// Decimal group order `q`.
    const ORDER: &'static str;
    /// Width of the fixed-width big-endian scalar encoding.
    const SCALAR_LEN: usize;
    /// Bytes produced by [`PairingSuite::h3`].
    const KEY_LEN: usize;
    const CIPHER: CipherKind;

    type Scalar: ScalarField;
    type G1: SourceGroup<Self::Scalar>;
    type Gt: TargetGroup<Self::Scalar>;

    fn generator() -> Self::G1;

    /// The symmetric pairing. Deterministic; fails only when the backend
    /// cannot place either operand in the right-hand slot.
    fn pair(a: &Self::G1, b: &Self::G1) -> Result<Self::Gt>;

    /// `prod e(a_i, b_i)`. Backends may share work across the factors.
    fn pair_product(pairs: &[(Self::G1, Self::G1)]) -> Result<Self::Gt> {
        pairs.iter().try_fold(Self::Gt::identity(), |acc, (a, b)| Ok(acc * Self::pair(a, b)?))
    }

    /// `s p` for use opposite an operand that fills the right-hand slot.
    /// Backends may skip the work only the right-hand slot needs.
    fn mul_left(p: &Self::G1, s: Self::Scalar) -> Self::G1 {
        *p * s
    }

    /// Hash of the framed concatenation of `parts` onto a nonzero scalar.
    fn h1(parts: &[&[u8]]) -> Self::Scalar;
    /// Hash onto a non-identity element of `G1`.
    fn h2(data: &[u8]) -> Self::G1;
    /// Key derivation from a target-group element; `KEY_LEN` bytes.
    fn h3(w: &Self::Gt) -> Vec<u8>;

    /// Uniform over `[1, q-1]`.
    fn random_nonzero_scalar<R: RngCore + ?Sized>(rng: &mut R) -> Self::Scalar;

    fn encode_scalar(s: &Self::Scalar) -> Vec<u8>;
    fn decode_scalar(bytes: &[u8]) -> Result<Self::Scalar, DecodeError>;
    fn encode_g1(p: &Self::G1) -> Vec<u8>;
    fn decode_g1(bytes: &[u8]) -> Result<Self::G1, DecodeError>;
    fn encode_gt(w: &Self::Gt) -> Vec<u8>;
    fn decode_gt(bytes: &[u8]) -> Result<Self::Gt, DecodeError>;
}

/// Sum over `G1`; the identity for an empty iterator.
pub fn sum_g1<S: PairingSuite>(items: impl IntoIterator<Item = S::G1>) -> S::G1 {
    items.into_iter().fold(S::G1::identity(), |acc, x| acc + x)
}

/// Product over `Gt`; the identity for an empty iterator.
pub fn product_gt<S: PairingSuite>(items: impl IntoIterator<Item = S::Gt>) -> S::Gt {
    items.into_iter().fold(S::Gt::identity(), |acc, x| acc * x)
}

/// Secret scalar that must not be zero.
pub(crate) fn require_nonzero<S: PairingSuite>(s: S::Scalar, what: &'static str) -> Result<S::Scalar> {
    if s.is_zero() {
        Err(crate::Error::ZeroScalar(what))
    } else {
        Ok(s)
    }
}
