//! Dyadic rationals `m * 2^e`.
//!
//! Sums and products of dyadics stay dyadic, and normalizing only strips trailing zero
//! bits, so arithmetic is linear in the operand size. `BigRational` would run a gcd on
//! every operation, which is quadratic for the multi-megabit values the eta series needs.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use num_bigint::{BigInt, Sign};
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::Rational;

/// `mant * 2^exp` with `mant` odd, or zero with `exp = 0`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Dyadic {
    mant: BigInt,
    exp: i64,
}

impl Dyadic {
    pub fn new(mant: BigInt, exp: i64) -> Self {
        let mut d = Dyadic { mant, exp };
        d.normalize();
        d
    }

    pub fn zero() -> Self {
        Dyadic {
            mant: BigInt::zero(),
            exp: 0,
        }
    }

    pub fn one() -> Self {
        Dyadic::pow2(0)
    }

    pub fn is_one(&self) -> bool {
        self.exp == 0 && self.mant.is_one()
    }

    pub fn from_int(n: i64) -> Self {
        Dyadic::new(n.into(), 0)
    }

    /// `2^e`.
    pub fn pow2(e: i64) -> Self {
        Dyadic {
            mant: BigInt::one(),
            exp: e,
        }
    }

    /// `n / 2^k`.
    pub fn ratio(n: i64, k: u32) -> Self {
        Dyadic::new(n.into(), -(k as i64))
    }

    fn normalize(&mut self) {
        match self.mant.trailing_zeros() {
            None => self.exp = 0,
            Some(0) => {}
            Some(tz) => {
                self.mant >>= tz as usize;
                self.exp += tz as i64;
            }
        }
    }

    pub fn mantissa(&self) -> &BigInt {
        &self.mant
    }

    pub fn exponent(&self) -> i64 {
        self.exp
    }

    pub fn is_zero(&self) -> bool {
        self.mant.is_zero()
    }

    pub fn signum(&self) -> Ordering {
        match self.mant.sign() {
            Sign::Minus => Ordering::Less,
            Sign::NoSign => Ordering::Equal,
            Sign::Plus => Ordering::Greater,
        }
    }

    pub fn is_positive(&self) -> bool {
        self.mant.is_positive()
    }

    pub fn is_negative(&self) -> bool {
        self.mant.is_negative()
    }

    pub fn abs(&self) -> Self {
        Dyadic {
            mant: self.mant.abs(),
            exp: self.exp,
        }
    }

    /// Rough size in bits: mantissa length plus the magnitude of the exponent.
    pub fn bits(&self) -> u64 {
        self.mant.bits() + self.exp.unsigned_abs()
    }

    /// `floor(log2 |x|)`-scale magnitude as a float; `-inf` at zero.
    pub fn log2_abs(&self) -> f64 {
        if self.is_zero() {
            return f64::NEG_INFINITY;
        }
        let bits = self.mant.bits() as i64;
        let shift = (bits - 60).max(0);
        let top = (self.mant.abs() >> shift as usize).to_f64().unwrap_or(1.0);
        top.log2() + (shift + self.exp) as f64
    }

    pub fn to_f64(&self) -> f64 {
        if self.is_zero() {
            return 0.0;
        }
        let bits = self.mant.bits() as i64;
        let shift = (bits - 60).max(0);
        let top = (&self.mant >> shift as usize).to_f64().unwrap_or(0.0);
        let e = shift + self.exp;
        if e > 1100 {
            return top.signum() * f64::INFINITY;
        }
        if e < -1200 {
            return 0.0;
        }
        // split the scaling so intermediate powers stay finite
        let half = (e / 2) as i32;
        top * 2f64.powi(half) * 2f64.powi(e as i32 - half)
    }

    pub fn to_rational(&self) -> Rational {
        if self.exp >= 0 {
            Rational::from_integer(&self.mant << self.exp as usize)
        } else {
            // an odd numerator over a power of two is already in lowest terms
            Rational::new_raw(
                self.mant.clone(),
                BigInt::one() << self.exp.unsigned_abs() as usize,
            )
        }
    }

    /// `None` unless the denominator is a power of two.
    pub fn from_rational(x: &Rational) -> Option<Self> {
        let d = x.denom();
        let tz = d.trailing_zeros().unwrap_or(0);
        if d.bits() != tz + 1 {
            return None;
        }
        Some(Dyadic::new(x.numer().clone(), -(tz as i64)))
    }
}

impl fmt::Display for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.exp >= 0 {
            write!(f, "{}", &self.mant << self.exp as usize)
        } else {
            write!(
                f,
                "{}/{}",
                self.mant,
                BigInt::one() << self.exp.unsigned_abs() as usize
            )
        }
    }
}

impl Ord for Dyadic {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self.signum(), other.signum()) {
            (a, b) if a != b => a.cmp(&b),
            _ => (self - other).signum(),
        }
    }
}

impl PartialOrd for Dyadic {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

fn aligned(x: &Dyadic, y: &Dyadic, f: impl Fn(BigInt, BigInt) -> BigInt) -> Dyadic {
    if x.is_zero() {
        return Dyadic::new(f(BigInt::zero(), y.mant.clone()), y.exp);
    }
    if y.is_zero() {
        return Dyadic::new(f(x.mant.clone(), BigInt::zero()), x.exp);
    }
    let e = x.exp.min(y.exp);
    let xm = &x.mant << (x.exp - e) as usize;
    let ym = &y.mant << (y.exp - e) as usize;
    Dyadic::new(f(xm, ym), e)
}

impl Add for &Dyadic {
    type Output = Dyadic;
    fn add(self, rhs: &Dyadic) -> Dyadic {
        aligned(self, rhs, |a, b| a + b)
    }
}

impl Sub for &Dyadic {
    type Output = Dyadic;
    fn sub(self, rhs: &Dyadic) -> Dyadic {
        aligned(self, rhs, |a, b| a - b)
    }
}

impl Mul for &Dyadic {
    type Output = Dyadic;
    fn mul(self, rhs: &Dyadic) -> Dyadic {
        if self.is_zero() || rhs.is_zero() {
            return Dyadic::zero();
        }
        // both mantissas odd, so the product is odd and needs no normalization
        Dyadic {
            mant: &self.mant * &rhs.mant,
            exp: self.exp + rhs.exp,
        }
    }
}

impl Add for Dyadic {
    type Output = Dyadic;
    fn add(self, rhs: Dyadic) -> Dyadic {
        &self + &rhs
    }
}

impl Sub for Dyadic {
    type Output = Dyadic;
    fn sub(self, rhs: Dyadic) -> Dyadic {
        &self - &rhs
    }
}

impl Mul for Dyadic {
    type Output = Dyadic;
    fn mul(self, rhs: Dyadic) -> Dyadic {
        &self * &rhs
    }
}

impl AddAssign<&Dyadic> for Dyadic {
    fn add_assign(&mut self, rhs: &Dyadic) {
        *self = &*self + rhs;
    }
}

impl Neg for Dyadic {
    type Output = Dyadic;
    fn neg(self) -> Dyadic {
        Dyadic {
            mant: -self.mant,
            exp: self.exp,
        }
    }
}

impl Neg for &Dyadic {
    type Output = Dyadic;
    fn neg(self) -> Dyadic {
        -self.clone()
    }
}

impl std::iter::Sum for Dyadic {
    fn sum<I: Iterator<Item = Dyadic>>(iter: I) -> Dyadic {
        iter.fold(Dyadic::zero(), |acc, x| &acc + &x)
    }
}
