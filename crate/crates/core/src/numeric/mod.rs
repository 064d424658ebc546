//! Exact rational helpers.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

mod dyadic;

pub use dyadic::Dyadic;

pub type Rational = num_rational::BigRational;

pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(n.into(), d.into())
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(n.into())
}

/// `2^-p`.
pub fn pow2_neg(p: u64) -> Rational {
    Rational::new(BigInt::one(), BigInt::one() << p)
}

/// `2^p`.
pub fn pow2(p: u64) -> Rational {
    Rational::from_integer(BigInt::one() << p)
}

pub fn from_biguint_ratio(num: BigUint, den: BigUint) -> Rational {
    Rational::new(num.into(), den.into())
}

/// Nearest `f64`, also for numerators and denominators far outside the `f64` range.
pub fn to_f64(x: &Rational) -> f64 {
    if let (Some(n), Some(d)) = (x.numer().to_f64(), x.denom().to_f64()) {
        if n.is_finite() && d.is_finite() && d != 0.0 {
            return n / d;
        }
    }
    if x.is_zero() {
        return 0.0;
    }
    // scale both to ~60 significant bits before dividing
    let nb = x.numer().bits() as i64;
    let db = x.denom().bits() as i64;
    let shift_n = (nb - 60).max(0);
    let shift_d = (db - 60).max(0);
    let n = (x.numer() >> shift_n as usize).to_f64().unwrap_or(0.0);
    let d = (x.denom() >> shift_d as usize).to_f64().unwrap_or(1.0);
    n / d * 2f64.powi((shift_n - shift_d).clamp(-2000, 2000) as i32)
}

/// Decimal expansion truncated toward zero after `digits` places.
pub fn to_decimal(x: &Rational, digits: usize) -> String {
    let neg = x.is_negative();
    let abs = x.abs();
    let scale = BigInt::from(10u32).pow(digits as u32);
    let scaled = (abs.numer() * &scale).div_floor(abs.denom());
    let mut s = scaled.to_string();
    if s.len() <= digits {
        s = "0".repeat(digits + 1 - s.len()) + &s;
    }
    let split = s.len() - digits;
    let (whole, frac) = s.split_at(split);
    let mut out = String::new();
    if neg {
        out.push('-');
    }
    out.push_str(whole);
    if digits > 0 {
        out.push('.');
        out.push_str(frac);
    }
    out
}

/// `"p/q"`, or `"p"` for integers.
pub fn to_fraction_string(x: &Rational) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}
