//! Arbitrary-precision rational numbers.
//!
//! `Rat` is `num_rational::BigRational`: always reduced to lowest terms with a
//! positive denominator, so equality is structural and arithmetic is exact.
//! This module adds the handful of constructors and exact predicates the rest
//! of the crate needs (integer squares, exact square roots, parsing).

use crate::error::{AlgError, Result};
use alloc::string::ToString;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

pub type Rat = num_rational::BigRational;

/// The rational n/1.
pub fn rat_i64(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

/// The rational p/q. Panics if q = 0.
pub fn rat_frac(p: i64, q: i64) -> Rat {
    Rat::new(BigInt::from(p), BigInt::from(q))
}

/// Parse "p", "-p" or "p/q" into a rational.
pub fn rat_parse(s: &str) -> Result<Rat> {
    s.parse::<Rat>().map_err(|e| AlgError::BadInput {
        detail: e.to_string(),
    })
}

/// Exact square root of a nonnegative integer, if it is a perfect square.
fn int_sqrt_exact(n: &BigInt) -> Option<BigInt> {
    if n.is_negative() {
        return None;
    }
    let r = n.sqrt();
    if &(&r * &r) == n {
        Some(r)
    } else {
        None
    }
}

/// Exact positive square root of a rational, if one exists.
pub fn rat_sqrt_exact(x: &Rat) -> Option<Rat> {
    if x.is_negative() {
        return None;
    }
    if x.is_zero() {
        return Some(Rat::zero());
    }
    let p = int_sqrt_exact(x.numer())?;
    let q = int_sqrt_exact(x.denom())?;
    Some(Rat::new(p, q))
}

/// True when the rational is an integer.
pub fn rat_is_integer(x: &Rat) -> bool {
    x.denom().is_one()
}

/// The integer value, when `rat_is_integer` holds and it fits in i64.
pub fn rat_to_i64(x: &Rat) -> Option<i64> {
    if !rat_is_integer(x) {
        return None;
    }
    let n = x.numer();
    let (sign, digits) = n.to_u64_digits();
    match digits.len() {
        0 => Some(0),
        1 => {
            let d = digits[0];
            match sign {
                num_bigint::Sign::Plus if d <= i64::MAX as u64 => Some(d as i64),
                num_bigint::Sign::Minus if d <= i64::MAX as u64 + 1 => {
                    Some((d as i128 * -1) as i64)
                }
                _ => None,
            }
        }
        _ => None,
    }
}

/// Binomial coefficient as a rational (exact).
pub fn binomial(n: u32, k: u32) -> Rat {
    if k > n {
        return Rat::zero();
    }
    let mut num = BigInt::one();
    let mut den = BigInt::one();
    for i in 0..k {
        num *= BigInt::from(n - i);
        den *= BigInt::from(i + 1);
    }
    let g = num.gcd(&den);
    Rat::new(num / &g, den / g)
}

/// Factorial as a big integer.
pub fn factorial(n: u64) -> BigInt {
    let mut acc = BigInt::one();
    for i in 2..=n {
        acc *= BigInt::from(i);
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reduced_and_positive_denominator() {
        let x = rat_frac(6, -4);
        assert_eq!(x, rat_frac(-3, 2));
        assert!(x.denom().is_positive());
        assert_eq!(x.numer(), &BigInt::from(-3));
        assert_eq!(x.denom(), &BigInt::from(2));
    }

    #[test]
    fn display_p_over_q() {
        assert_eq!(alloc::format!("{}", rat_frac(3, 4)), "3/4");
        assert_eq!(alloc::format!("{}", rat_i64(5)), "5");
        assert_eq!(alloc::format!("{}", rat_frac(-1, 2)), "-1/2");
    }

    #[test]
    fn sqrt_exact_cases() {
        assert_eq!(rat_sqrt_exact(&rat_frac(9, 4)), Some(rat_frac(3, 2)));
        assert_eq!(rat_sqrt_exact(&rat_i64(2)), None);
        assert_eq!(rat_sqrt_exact(&rat_i64(-4)), None);
        assert_eq!(rat_sqrt_exact(&Rat::zero()), Some(Rat::zero()));
    }

    #[test]
    fn parse_and_errors() {
        assert_eq!(rat_parse("3/4").unwrap(), rat_frac(3, 4));
        assert_eq!(rat_parse("-7").unwrap(), rat_i64(-7));
        assert!(rat_parse("1/0").is_err());
        assert!(rat_parse("x").is_err());
    }

    #[test]
    fn binomial_and_factorial() {
        assert_eq!(binomial(6, 2), rat_i64(15));
        assert_eq!(binomial(3, 5), Rat::zero());
        assert_eq!(factorial(6), BigInt::from(720));
    }

    #[test]
    fn to_i64_roundtrip() {
        assert_eq!(rat_to_i64(&rat_i64(-12)), Some(-12));
        assert_eq!(rat_to_i64(&rat_frac(1, 2)), None);
    }
}
