//! Dense univariate polynomials over a ring context.
//!
//! Coefficients are stored in ascending degree order; the canonical form has
//! a nonzero last element (the zero polynomial is the empty vector). Zero
//! testing is delegated to the ring context, so "nonzero" means "not known to
//! vanish" when the coefficients are truncated series.

use crate::error::{AlgError, Result};
use crate::ring::Ring;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Poly<T> {
    pub coeffs: Vec<T>,
}

impl<T: Clone> Poly<T> {
    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn constant<C: Ring<T>>(ctx: &C, c: T) -> Self {
        Poly::from_vec(ctx, vec![c])
    }

    pub fn x<C: Ring<T>>(ctx: &C) -> Self {
        Poly {
            coeffs: vec![ctx.zero(), ctx.one()],
        }
    }

    pub fn monomial<C: Ring<T>>(ctx: &C, c: T, deg: usize) -> Self {
        let mut coeffs = vec![ctx.zero(); deg + 1];
        coeffs[deg] = c;
        Poly::from_vec(ctx, coeffs)
    }

    pub fn from_vec<C: Ring<T>>(ctx: &C, coeffs: Vec<T>) -> Self {
        let mut p = Poly { coeffs };
        p.normalize(ctx);
        p
    }

    fn normalize<C: Ring<T>>(&mut self, ctx: &C) {
        while self.coeffs.last().map_or(false, |c| ctx.is_zero(c)) {
            self.coeffs.pop();
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        if self.coeffs.is_empty() {
            None
        } else {
            Some(self.coeffs.len() - 1)
        }
    }

    pub fn lead(&self) -> Option<&T> {
        self.coeffs.last()
    }

    pub fn coeff<C: Ring<T>>(&self, ctx: &C, i: usize) -> T {
        self.coeffs.get(i).cloned().unwrap_or_else(|| ctx.zero())
    }

    pub fn neg<C: Ring<T>>(&self, ctx: &C) -> Self {
        Poly {
            coeffs: self.coeffs.iter().map(|c| ctx.neg(c)).collect(),
        }
    }

    pub fn add<C: Ring<T>>(&self, ctx: &C, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut coeffs = Vec::with_capacity(n);
        for i in 0..n {
            coeffs.push(ctx.add(&self.coeff(ctx, i), &other.coeff(ctx, i)));
        }
        Poly::from_vec(ctx, coeffs)
    }

    pub fn sub<C: Ring<T>>(&self, ctx: &C, other: &Self) -> Self {
        self.add(ctx, &other.neg(ctx))
    }

    pub fn mul<C: Ring<T>>(&self, ctx: &C, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
        }
        let mut coeffs = vec![ctx.zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if ctx.is_zero(a) {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                let t = ctx.mul(a, b);
                coeffs[i + j] = ctx.add(&coeffs[i + j], &t);
            }
        }
        Poly::from_vec(ctx, coeffs)
    }

    pub fn mul_scalar<C: Ring<T>>(&self, ctx: &C, c: &T) -> Self {
        Poly::from_vec(ctx, self.coeffs.iter().map(|a| ctx.mul(a, c)).collect())
    }

    pub fn eval<C: Ring<T>>(&self, ctx: &C, x: &T) -> T {
        let mut acc = ctx.zero();
        for c in self.coeffs.iter().rev() {
            acc = ctx.add(&ctx.mul(&acc, x), c);
        }
        acc
    }

    pub fn derivative<C: Ring<T>>(&self, ctx: &C) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| ctx.mul(&ctx.from_i64(i as i64), c))
            .collect();
        Poly::from_vec(ctx, coeffs)
    }

    /// Quotient and remainder; the divisor's leading coefficient must be a
    /// unit (monic divisors never fail).
    pub fn divmod<C: Ring<T>>(&self, ctx: &C, divisor: &Self) -> Result<(Self, Self)> {
        let d = divisor.degree().ok_or_else(|| AlgError::NotInvertible {
            detail: alloc::string::String::from("division by zero polynomial"),
        })?;
        let lead_inv = ctx.inv(divisor.lead().unwrap())?;
        let mut rem = self.clone();
        let mut quo = vec![ctx.zero(); self.coeffs.len().saturating_sub(d)];
        while let Some(n) = rem.degree() {
            if n < d {
                break;
            }
            let q = ctx.mul(rem.lead().unwrap(), &lead_inv);
            let shift = n - d;
            for i in 0..=d {
                let t = ctx.mul(&q, &divisor.coeffs[i]);
                rem.coeffs[shift + i] = ctx.sub(&rem.coeffs[shift + i], &t);
            }
            // the leading term cancels by construction; force it so truncated
            // coefficients cannot leave an unknown-zero residue behind
            rem.coeffs[n] = ctx.zero();
            rem.normalize(ctx);
            quo[shift] = ctx.add(&quo[shift], &q);
        }
        Ok((Poly::from_vec(ctx, quo), rem))
    }

    /// Monic normalization (divides by the leading coefficient).
    pub fn monic<C: Ring<T>>(&self, ctx: &C) -> Result<Self> {
        let lead = self.lead().ok_or_else(|| AlgError::NotInvertible {
            detail: alloc::string::String::from("monic normalization of zero polynomial"),
        })?;
        let lead_inv = ctx.inv(lead)?;
        Ok(self.mul_scalar(ctx, &lead_inv))
    }

    /// Monic gcd by the Euclidean algorithm. Needs unit leading coefficients
    /// along the way, which holds for the generic inputs this crate feeds it.
    pub fn gcd<C: Ring<T>>(ctx: &C, a: &Self, b: &Self) -> Result<Self> {
        let mut r0 = a.clone();
        let mut r1 = b.clone();
        while !r1.is_zero() {
            let (_, r) = r0.divmod(ctx, &r1)?;
            r0 = r1;
            r1 = r;
        }
        if r0.is_zero() {
            Ok(r0)
        } else {
            r0.monic(ctx)
        }
    }

    /// Exact-division test: Some(quotient) when `divisor` divides exactly.
    pub fn exact_div<C: Ring<T>>(&self, ctx: &C, divisor: &Self) -> Result<Option<Self>> {
        let (q, r) = self.divmod(ctx, divisor)?;
        if r.is_zero() {
            Ok(Some(q))
        } else {
            Ok(None)
        }
    }

    pub fn render(&self, var: &str) -> alloc::string::String
    where
        T: core::fmt::Display,
    {
        if self.coeffs.is_empty() {
            return alloc::string::String::from("0");
        }
        let mut parts = Vec::new();
        for (i, c) in self.coeffs.iter().enumerate() {
            parts.push(match i {
                0 => format!("({c})"),
                1 => format!("({c})*{var}"),
                _ => format!("({c})*{var}^{i}"),
            });
        }
        parts.join(" + ")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{rat_i64, Rat};
    use crate::ring::RatField;

    fn p(v: &[i64]) -> Poly<Rat> {
        Poly::from_vec(&RatField, v.iter().map(|&c| rat_i64(c)).collect())
    }

    #[test]
    fn canonical_form() {
        let q = Poly::from_vec(&RatField, vec![rat_i64(1), rat_i64(0), rat_i64(0)]);
        assert_eq!(q.degree(), Some(0));
        assert!(Poly::<Rat>::zero().degree().is_none());
    }

    #[test]
    fn arithmetic_and_eval() {
        let f = p(&[1, 2, 1]); // (1+x)^2
        let g = p(&[1, 1]);
        assert_eq!(g.mul(&RatField, &g), f);
        assert_eq!(f.eval(&RatField, &rat_i64(3)), rat_i64(16));
        assert_eq!(f.derivative(&RatField), p(&[2, 2]));
    }

    #[test]
    fn divmod_and_gcd() {
        let f = p(&[-1, 0, 0, 0, 1]); // x^4 - 1
        let g = p(&[-1, 0, 1]); // x^2 - 1
        let (q, r) = f.divmod(&RatField, &g).unwrap();
        assert_eq!(q, p(&[1, 0, 1]));
        assert!(r.is_zero());
        let h = Poly::gcd(&RatField, &f, &g).unwrap();
        assert_eq!(h, g);
        // non-monic division
        let f2 = p(&[1, 3, 2]);
        let g2 = p(&[1, 2]);
        let (q2, r2) = f2.divmod(&RatField, &g2).unwrap();
        assert_eq!(q2, p(&[1, 1]));
        assert!(r2.is_zero());
    }

    #[test]
    fn exact_division_detects_failure() {
        let f = p(&[1, 0, 1]);
        let g = p(&[1, 1]);
        assert!(f.exact_div(&RatField, &g).unwrap().is_none());
        let h = f.mul(&RatField, &g);
        assert_eq!(h.exact_div(&RatField, &g).unwrap(), Some(f));
    }
}
