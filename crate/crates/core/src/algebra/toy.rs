//! `TOY-11-23`: q = 11, G1 = (Z_11, +) with P = 1, Gt = <2> in Z_23^*,
//! e(a, b) = 2^(ab mod 11) mod 23.
//!
//! Hashes are byte sums mod 11 (0 remapped to 1), `h3` is the identity on
//! the single byte of a target element and the cipher is a one-byte XOR.
//! None of this is secure; it exists so protocol values can be checked by
//! hand.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use rand::{Rng, RngCore};

use super::{PairingSuite, ScalarField, SourceGroup, TargetGroup};
use crate::cipher::CipherKind;
use crate::error::{DecodeError, Result};

const Q: u8 = 11;
const MODULUS: u8 = 23;
const GT_GENERATOR: u8 = 2;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash)]
pub struct Toy11_23;

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ToyScalar(u8);

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ToyPoint(u8);

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ToyGt(u8);

fn reduce(v: u64) -> u8 {
    (v % Q as u64) as u8
}

fn pow_mod(base: u8, mut exp: u64) -> u8 {
    let m = MODULUS as u64;
    let mut acc = 1u64;
    let mut b = base as u64 % m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * b % m;
        }
        b = b * b % m;
        exp >>= 1;
    }
    acc as u8
}

impl ToyScalar {
    pub fn new(v: u64) -> Self {
        Self(reduce(v))
    }
    pub fn value(self) -> u8 {
        self.0
    }
}

impl ToyPoint {
    pub fn new(v: u64) -> Self {
        Self(reduce(v))
    }
    pub fn value(self) -> u8 {
        self.0
    }
}

impl ToyGt {
    /// `None` unless `v` lies in the order-11 subgroup of Z_23^*.
    pub fn new(v: u8) -> Option<Self> {
        (v != 0 && v < MODULUS && pow_mod(v, Q as u64) == 1).then_some(Self(v))
    }
    pub fn value(self) -> u8 {
        self.0
    }
}

macro_rules! show_value {
    ($($t:ty),*) => {$(
        impl fmt::Debug for $t {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                write!(f, "{}({})", stringify!($t), self.0)
            }
        }
        impl fmt::Display for $t {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                write!(f, "{}", self.0)
            }
        }
    )*};
}
show_value!(ToyScalar, ToyPoint, ToyGt);

impl Add for ToyScalar {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Self::new(self.0 as u64 + rhs.0 as u64)
    }
}
impl Sub for ToyScalar {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Self::new(self.0 as u64 + (Q - rhs.0) as u64)
    }
}
impl Mul for ToyScalar {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        Self::new(self.0 as u64 * rhs.0 as u64)
    }
}
impl Neg for ToyScalar {
    type Output = Self;
    fn neg(self) -> Self {
        Self::new((Q - self.0) as u64)
    }
}

impl ScalarField for ToyScalar {
    fn zero() -> Self {
        Self(0)
    }
    fn one() -> Self {
        Self(1)
    }
    fn from_u64(v: u64) -> Self {
        Self::new(v)
    }
}

impl Add for ToyPoint {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Self::new(self.0 as u64 + rhs.0 as u64)
    }
}
impl Sub for ToyPoint {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Self::new(self.0 as u64 + (Q - rhs.0) as u64)
    }
}
impl Neg for ToyPoint {
    type Output = Self;
    fn neg(self) -> Self {
        Self::new((Q - self.0) as u64)
    }
}
impl Mul<ToyScalar> for ToyPoint {
    type Output = Self;
    fn mul(self, rhs: ToyScalar) -> Self {
        Self::new(self.0 as u64 * rhs.0 as u64)
    }
}

impl SourceGroup<ToyScalar> for ToyPoint {
    fn identity() -> Self {
        Self(0)
    }
}

impl Mul for ToyGt {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        Self((self.0 as u16 * rhs.0 as u16 % MODULUS as u16) as u8)
    }
}

impl TargetGroup<ToyScalar> for ToyGt {
    fn identity() -> Self {
        Self(1)
    }
    fn pow(&self, e: ToyScalar) -> Self {
        Self(pow_mod(self.0, e.0 as u64))
    }
    fn inverse(&self) -> Self {
        // w^(q-1) = w^-1 in a group of order q.
        Self(pow_mod(self.0, (Q - 1) as u64))
    }
}

fn byte_sum(parts: &[&[u8]]) -> u8 {
    let total: u64 = parts.iter().flat_map(|p| p.iter()).map(|&b| b as u64).sum();
    match reduce(total) {
        0 => 1,
        v => v,
    }
}

fn single_byte(bytes: &[u8]) -> Result<u8, DecodeError> {
    match bytes {
        [b] => Ok(*b),
        _ => Err(DecodeError::WrongLength { expected: 1, found: bytes.len() }),
    }
}

impl PairingSuite for Toy11_23 {
    const ID: &'static str = "TOY-11-23";
    const ORDER: &'static str = "11";
    const SCALAR_LEN: usize = 1;
    const KEY_LEN: usize = 1;
    const CIPHER: CipherKind = CipherKind::RepeatingXor;

    type Scalar = ToyScalar;
    type G1 = ToyPoint;
    type Gt = ToyGt;

    fn generator() -> ToyPoint {
        ToyPoint(1)
    }

    fn pair(a: &ToyPoint, b: &ToyPoint) -> Result<ToyGt> {
        let exp = a.0 as u64 * b.0 as u64 % Q as u64;
        Ok(ToyGt(pow_mod(GT_GENERATOR, exp)))
    }

    // Toy hashes ignore framing and domain tags: the byte sum of the raw
    // parts is the whole definition.
    fn h1(parts: &[&[u8]]) -> ToyScalar {
        ToyScalar(byte_sum(parts))
    }

    fn h2(data: &[u8]) -> ToyPoint {
        ToyPoint(byte_sum(&[data]))
    }

    fn h3(w: &ToyGt) -> Vec<u8> {
        vec![w.0]
    }

    fn random_nonzero_scalar<R: RngCore + ?Sized>(rng: &mut R) -> ToyScalar {
        ToyScalar(rng.gen_range(1..Q))
    }

    fn encode_scalar(s: &ToyScalar) -> Vec<u8> {
        vec![s.0]
    }

    fn decode_scalar(bytes: &[u8]) -> Result<ToyScalar, DecodeError> {
        let b = single_byte(bytes)?;
        if b >= Q {
            return Err(DecodeError::NonCanonical);
        }
        Ok(ToyScalar(b))
    }

    fn encode_g1(p: &ToyPoint) -> Vec<u8> {
        vec![p.0]
    }

    fn decode_g1(bytes: &[u8]) -> Result<ToyPoint, DecodeError> {
        let b = single_byte(bytes)?;
        if b >= Q {
            return Err(DecodeError::NotOnGroup);
        }
        Ok(ToyPoint(b))
    }

    fn encode_gt(w: &ToyGt) -> Vec<u8> {
        vec![w.0]
    }

    fn decode_gt(bytes: &[u8]) -> Result<ToyGt, DecodeError> {
        ToyGt::new(single_byte(bytes)?).ok_or(DecodeError::NotOnGroup)
    }
}
