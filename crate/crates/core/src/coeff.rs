//! Exact coefficient fields: arbitrary-precision rationals and word-sized
//! prime fields.
//!
//! Both fields implement [`Field`]. A field element does not know how to
//! conjure constants by itself (a residue needs its modulus), so every
//! constructor takes the field's context value [`Field::Ctx`].

use std::fmt;
use std::hash::Hash;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CoeffError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("modulus {0} exceeds the supported range (p < 2^63)")]
    ModulusTooLarge(u64),
}

/// Which field a computation runs over.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum FieldTag {
    Rationals,
    PrimeField(u64),
}

impl FieldTag {
    pub fn characteristic(self) -> u64 {
        match self {
            FieldTag::Rationals => 0,
            FieldTag::PrimeField(p) => p,
        }
    }
}

impl fmt::Display for FieldTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldTag::Rationals => write!(f, "Q"),
            FieldTag::PrimeField(p) => write!(f, "F_{p}"),
        }
    }
}

/// An exact field whose elements are immutable values.
pub trait Field:
    Clone + PartialEq + Eq + Hash + fmt::Debug + fmt::Display + Send + Sync + 'static
{
    /// Runtime data needed to build constants (the modulus for `F_p`).
    type Ctx: Clone + fmt::Debug + PartialEq + Send + Sync + 'static;

    fn tag(ctx: &Self::Ctx) -> FieldTag;
    fn zero(ctx: &Self::Ctx) -> Self;
    fn one(ctx: &Self::Ctx) -> Self;
    fn from_i64(ctx: &Self::Ctx, v: i64) -> Self;
    fn from_bigint(ctx: &Self::Ctx, v: &BigInt) -> Self;

    fn is_zero(&self) -> bool;
    fn is_one(&self) -> bool;

    fn add(&self, rhs: &Self) -> Self;
    fn sub(&self, rhs: &Self) -> Self;
    fn mul(&self, rhs: &Self) -> Self;
    fn neg(&self) -> Self;
    fn inv(&self) -> Result<Self, CoeffError>;

    fn div(&self, rhs: &Self) -> Result<Self, CoeffError> {
        Ok(self.mul(&rhs.inv()?))
    }

    fn pow(&self, mut e: u64) -> Self {
        let mut base = self.clone();
        let mut acc = None::<Self>;
        while e > 0 {
            if e & 1 == 1 {
                acc = Some(match acc {
                    None => base.clone(),
                    Some(a) => a.mul(&base),
                });
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        match acc {
            Some(a) => a,
            // x^0 = 1; derive it from x itself so no context is needed.
            None => self.one_like(),
        }
    }

    /// The multiplicative identity of the field `self` lives in.
    fn one_like(&self) -> Self;

    /// Whether a printed form needs a leading `-` (only meaningful over Q).
    fn is_negative(&self) -> bool {
        false
    }
}

/// Arbitrary-precision rational number, always in lowest terms with a
/// positive denominator.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Rational(BigRational);

impl Rational {
    pub fn new(numer: BigInt, denom: BigInt) -> Result<Self, CoeffError> {
        if denom.is_zero() {
            return Err(CoeffError::DivisionByZero);
        }
        Ok(Rational(BigRational::new(numer, denom)))
    }

    pub fn from_integer(v: i64) -> Self {
        Rational(BigRational::from_integer(BigInt::from(v)))
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn as_big_rational(&self) -> &BigRational {
        &self.0
    }
}

impl From<BigRational> for Rational {
    fn from(v: BigRational) -> Self {
        Rational(v)
    }
}

impl fmt::Debug for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.denom().is_one() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl Field for Rational {
    type Ctx = ();

    fn tag(_: &()) -> FieldTag {
        FieldTag::Rationals
    }
    fn zero(_: &()) -> Self {
        Rational(BigRational::zero())
    }
    fn one(_: &()) -> Self {
        Rational(BigRational::one())
    }
    fn from_i64(_: &(), v: i64) -> Self {
        Rational::from_integer(v)
    }
    fn from_bigint(_: &(), v: &BigInt) -> Self {
        Rational(BigRational::from_integer(v.clone()))
    }
    fn is_zero(&self) -> bool {
        self.0.is_zero()
    }
    fn is_one(&self) -> bool {
        self.0.is_one()
    }
    fn add(&self, rhs: &Self) -> Self {
        Rational(&self.0 + &rhs.0)
    }
    fn sub(&self, rhs: &Self) -> Self {
        Rational(&self.0 - &rhs.0)
    }
    fn mul(&self, rhs: &Self) -> Self {
        Rational(&self.0 * &rhs.0)
    }
    fn neg(&self) -> Self {
        Rational(-&self.0)
    }
    fn inv(&self) -> Result<Self, CoeffError> {
        if self.0.is_zero() {
            Err(CoeffError::DivisionByZero)
        } else {
            Ok(Rational(self.0.recip()))
        }
    }
    fn one_like(&self) -> Self {
        Rational(BigRational::one())
    }
    fn is_negative(&self) -> bool {
        self.0.is_negative()
    }
}

/// A verified prime modulus `p < 2^63`; the context of [`Fp`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PrimeModulus(u64);

impl PrimeModulus {
    pub fn new(p: u64) -> Result<Self, CoeffError> {
        if p >= 1 << 63 {
            return Err(CoeffError::ModulusTooLarge(p));
        }
        if !is_prime(p) {
            return Err(CoeffError::NotPrime(p));
        }
        Ok(PrimeModulus(p))
    }

    pub fn get(self) -> u64 {
        self.0
    }

    pub fn elem(self, v: u64) -> Fp {
        Fp { value: v % self.0, modulus: self.0 }
    }
}

/// Residue class modulo a prime, canonical in `[0, p)`.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Fp {
    value: u64,
    modulus: u64,
}

impl Fp {
    pub fn value(self) -> u64 {
        self.value
    }

    pub fn modulus(self) -> u64 {
        self.modulus
    }

    #[inline]
    fn same_field(&self, rhs: &Fp) {
        assert_eq!(
            self.modulus, rhs.modulus,
            "mixed prime fields F_{} and F_{}",
            self.modulus, rhs.modulus
        );
    }
}

impl fmt::Debug for Fp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (mod {})", self.value, self.modulus)
    }
}

impl fmt::Display for Fp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

impl Field for Fp {
    type Ctx = PrimeModulus;

    fn tag(ctx: &PrimeModulus) -> FieldTag {
        FieldTag::PrimeField(ctx.0)
    }
    fn zero(ctx: &PrimeModulus) -> Self {
        Fp { value: 0, modulus: ctx.0 }
    }
    fn one(ctx: &PrimeModulus) -> Self {
        Fp { value: 1 % ctx.0, modulus: ctx.0 }
    }
    fn from_i64(ctx: &PrimeModulus, v: i64) -> Self {
        let p = ctx.0 as i128;
        Fp { value: (v as i128).rem_euclid(p) as u64, modulus: ctx.0 }
    }
    fn from_bigint(ctx: &PrimeModulus, v: &BigInt) -> Self {
        let r = v.mod_floor(&BigInt::from(ctx.0));
        Fp { value: r.to_u64().expect("residue fits in u64"), modulus: ctx.0 }
    }
    #[inline]
    fn is_zero(&self) -> bool {
        self.value == 0
    }
    #[inline]
    fn is_one(&self) -> bool {
        self.value == 1
    }
    #[inline]
    fn add(&self, rhs: &Self) -> Self {
        self.same_field(rhs);
        // p < 2^63 so the sum cannot overflow.
        let s = self.value + rhs.value;
        let value = if s >= self.modulus { s - self.modulus } else { s };
        Fp { value, modulus: self.modulus }
    }
    #[inline]
    fn sub(&self, rhs: &Self) -> Self {
        self.same_field(rhs);
        let value = if self.value >= rhs.value {
            self.value - rhs.value
        } else {
            self.value + self.modulus - rhs.value
        };
        Fp { value, modulus: self.modulus }
    }
    #[inline]
    fn mul(&self, rhs: &Self) -> Self {
        self.same_field(rhs);
        let value = ((self.value as u128 * rhs.value as u128) % self.modulus as u128) as u64;
        Fp { value, modulus: self.modulus }
    }
    #[inline]
    fn neg(&self) -> Self {
        let value = if self.value == 0 { 0 } else { self.modulus - self.value };
        Fp { value, modulus: self.modulus }
    }
    fn inv(&self) -> Result<Self, CoeffError> {
        if self.value == 0 {
            return Err(CoeffError::DivisionByZero);
        }
        // Extended Euclid on signed 128-bit values.
        let (mut r0, mut r1) = (self.modulus as i128, self.value as i128);
        let (mut s0, mut s1) = (0i128, 1i128);
        while r1 != 0 {
            let q = r0 / r1;
            (r0, r1) = (r1, r0 - q * r1);
            (s0, s1) = (s1, s0 - q * s1);
        }
        debug_assert_eq!(r0, 1);
        let value = s0.rem_euclid(self.modulus as i128) as u64;
        Ok(Fp { value, modulus: self.modulus })
    }
    fn one_like(&self) -> Self {
        Fp { value: 1 % self.modulus, modulus: self.modulus }
    }
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut a: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1 % m;
    a %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = mul_mod(r, a, m);
        }
        a = mul_mod(a, a, m);
        e >>= 1;
    }
    r
}

/// Deterministic Miller-Rabin for all `u64`.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    const SMALL: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    for p in SMALL {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    'witness: for a in SMALL {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}
