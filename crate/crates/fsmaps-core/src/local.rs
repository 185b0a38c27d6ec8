//! Truncated local (Laurent) expansions in one local coordinate, generic
//! over the coefficient ring context.
//!
//! A `LocalSeries` knows its coefficients for every exponent below `known`;
//! `EXACT_ORDER` marks expansions that are exact (finite Laurent polynomials).
//! Every operation records the tightest sound order of its output, and
//! reading a coefficient at or beyond the known order is a hard error, never
//! a silent zero.

use crate::error::{AlgError, Result};
use crate::ring::Ring;
use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;

/// Sentinel order for exact expansions; far above anything reachable.
pub const EXACT_ORDER: i64 = i64::MAX / 4;

fn ord_add(a: i64, b: i64) -> i64 {
    a.saturating_add(b).min(EXACT_ORDER)
}

fn ord_scale(a: i64, k: i64) -> i64 {
    a.saturating_mul(k).min(EXACT_ORDER)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LocalSeries<T> {
    coeffs: BTreeMap<i64, T>,
    known: i64,
}

impl<T: Clone> LocalSeries<T> {
    pub fn zero(known: i64) -> Self {
        LocalSeries {
            coeffs: BTreeMap::new(),
            known,
        }
    }

    pub fn monomial<C: Ring<T>>(ctx: &C, c: T, k: i64, known: i64) -> Self {
        let mut s = LocalSeries::zero(known);
        if !ctx.is_zero(&c) && k < known {
            s.coeffs.insert(k, c);
        }
        s
    }

    pub fn from_coeffs<C: Ring<T>>(ctx: &C, coeffs: BTreeMap<i64, T>, known: i64) -> Self {
        let mut s = LocalSeries { coeffs, known };
        s.normalize(ctx);
        s
    }

    fn normalize<C: Ring<T>>(&mut self, ctx: &C) {
        let known = self.known;
        self.coeffs.retain(|k, v| *k < known && !ctx.is_zero(v));
    }

    pub fn known_order(&self) -> i64 {
        self.known
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn valuation(&self) -> Option<i64> {
        self.coeffs.keys().next().copied()
    }

    fn val_floor(&self) -> i64 {
        self.valuation().unwrap_or(self.known)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&i64, &T)> {
        self.coeffs.iter()
    }

    pub fn coeff<C: Ring<T>>(&self, ctx: &C, k: i64) -> Result<T> {
        if k >= self.known {
            return Err(AlgError::InsufficientLocalOrder {
                needed: k,
                known: self.known,
            });
        }
        Ok(self.coeffs.get(&k).cloned().unwrap_or_else(|| ctx.zero()))
    }

    pub fn truncate(&self, known: i64) -> Self
    where
        T: Clone,
    {
        let mut s = self.clone();
        s.known = s.known.min(known);
        s.coeffs.retain(|k, _| *k < s.known);
        s
    }

    pub fn neg<C: Ring<T>>(&self, ctx: &C) -> Self {
        LocalSeries {
            coeffs: self.coeffs.iter().map(|(k, v)| (*k, ctx.neg(v))).collect(),
            known: self.known,
        }
    }

    pub fn add<C: Ring<T>>(&self, ctx: &C, other: &Self) -> Self {
        let mut coeffs = self.coeffs.clone();
        for (k, v) in &other.coeffs {
            match coeffs.get_mut(k) {
                Some(e) => *e = ctx.add(e, v),
                None => {
                    coeffs.insert(*k, v.clone());
                }
            }
        }
        LocalSeries::from_coeffs(ctx, coeffs, self.known.min(other.known))
    }

    pub fn sub<C: Ring<T>>(&self, ctx: &C, other: &Self) -> Self {
        self.add(ctx, &other.neg(ctx))
    }

    pub fn mul<C: Ring<T>>(&self, ctx: &C, other: &Self) -> Self {
        // exact zero absorbs
        if self.is_zero() && self.known == EXACT_ORDER {
            return LocalSeries::zero(EXACT_ORDER);
        }
        if other.is_zero() && other.known == EXACT_ORDER {
            return LocalSeries::zero(EXACT_ORDER);
        }
        let known =
            ord_add(self.known, other.val_floor()).min(ord_add(other.known, self.val_floor()));
        let mut coeffs: BTreeMap<i64, T> = BTreeMap::new();
        for (ka, va) in &self.coeffs {
            for (kb, vb) in &other.coeffs {
                let k = ka + kb;
                if k >= known {
                    continue;
                }
                let t = ctx.mul(va, vb);
                match coeffs.get_mut(&k) {
                    Some(e) => *e = ctx.add(e, &t),
                    None => {
                        coeffs.insert(k, t);
                    }
                }
            }
        }
        LocalSeries::from_coeffs(ctx, coeffs, known)
    }

    pub fn mul_scalar<C: Ring<T>>(&self, ctx: &C, c: &T) -> Self {
        LocalSeries::from_coeffs(
            ctx,
            self.coeffs
                .iter()
                .map(|(k, v)| (*k, ctx.mul(v, c)))
                .collect(),
            self.known,
        )
    }

    /// Multiply by the k-th power of the local coordinate.
    pub fn shift(&self, k: i64) -> Self {
        LocalSeries {
            coeffs: self
                .coeffs
                .iter()
                .map(|(e, v)| (e + k, v.clone()))
                .collect(),
            known: ord_add(self.known, k),
        }
    }

    /// Multiplicative inverse (Laurent in the local coordinate); the leading
    /// coefficient must be a unit in the coefficient ring.
    pub fn invert<C: Ring<T>>(&self, ctx: &C) -> Result<Self> {
        let v = self.valuation().ok_or_else(|| AlgError::NotInvertible {
            detail: String::from("no nonzero known local coefficient"),
        })?;
        if self.known >= EXACT_ORDER && self.coeffs.len() > 1 {
            return Err(AlgError::BadInput {
                detail: String::from("inverse of exact local series is infinite; truncate first"),
            });
        }
        if self.known >= EXACT_ORDER {
            let c = ctx.inv(&self.coeffs[&v])?;
            return Ok(LocalSeries::monomial(ctx, c, -v, EXACT_ORDER));
        }
        let rel = self.known - v;
        let g0inv = ctx.inv(&self.coeffs[&v])?;
        let mut h: Vec<T> = Vec::with_capacity(rel as usize);
        h.push(g0inv.clone());
        for k in 1..rel {
            let mut acc = ctx.zero();
            for i in 1..=k {
                if let Some(gi) = self.coeffs.get(&(v + i)) {
                    let t = ctx.mul(gi, &h[(k - i) as usize]);
                    acc = ctx.add(&acc, &t);
                }
            }
            h.push(ctx.neg(&ctx.mul(&acc, &g0inv)));
        }
        let coeffs = h
            .into_iter()
            .enumerate()
            .map(|(i, c)| (-v + i as i64, c))
            .collect();
        Ok(LocalSeries::from_coeffs(ctx, coeffs, -v + rel))
    }

    /// f(g(s)) for g of positive valuation; f must have no pole (valuation
    /// >= 0) so the substitution is a plain power sum.
    pub fn compose<C: Ring<T>>(&self, ctx: &C, g: &Self) -> Result<Self> {
        if let Some(v) = self.valuation() {
            if v < 0 {
                return Err(AlgError::BadInput {
                    detail: String::from("compose requires nonnegative valuation outer series"),
                });
            }
        }
        let vg = match g.valuation() {
            Some(v) if v >= 1 => v,
            Some(_) => {
                return Err(AlgError::BadInput {
                    detail: String::from("compose requires positive valuation inner series"),
                })
            }
            // g is zero (to its known order): f(g) = f(0) to a sound order
            None => {
                let known = ord_scale(g.known, 1).min(ord_scale(self.known, g.known));
                let c0 = self.coeffs.get(&0).cloned().unwrap_or_else(|| ctx.zero());
                return Ok(LocalSeries::monomial(ctx, c0, 0, known));
            }
        };
        // Unknown tail of f enters at order known(f)*v(g); the unknown tail
        // of g enters through f'(g), which has valuation >= (v(f)-1)*v(g).
        let vf = self.val_floor().max(0);
        let known = ord_scale(self.known, vg).min(ord_add(g.known, ord_scale((vf - 1).max(0), vg)));
        let mut acc = LocalSeries::zero(known);
        if let Some(c0) = self.coeffs.get(&0) {
            acc = LocalSeries::monomial(ctx, c0.clone(), 0, known);
        }
        let mut gpow = g.truncate(known);
        let mut k = 1i64;
        loop {
            if ord_scale(vg, k) >= known {
                break;
            }
            if let Some(ck) = self.coeffs.get(&k) {
                acc = acc.add(ctx, &gpow.mul_scalar(ctx, ck));
            }
            k += 1;
            if k >= self.known {
                break;
            }
            gpow = gpow.mul(ctx, g).truncate(known);
        }
        Ok(acc.truncate(known))
    }

    /// Functional inverse of a series with valuation exactly 1: returns h
    /// with self(h(s)) = s to the known order.
    pub fn func_invert<C: Ring<T>>(&self, ctx: &C) -> Result<Self> {
        match self.valuation() {
            Some(1) => {}
            _ => return Err(AlgError::NonUnitLinearTerm),
        }
        let f1inv = ctx
            .inv(&self.coeffs[&1])
            .map_err(|_| AlgError::NonUnitLinearTerm)?;
        let known = self.known;
        let mut h = LocalSeries::monomial(ctx, f1inv.clone(), 1, known);
        let mut n = 2i64;
        while n < known {
            let e = self.compose(ctx, &h)?;
            // defect at order n
            let d = match e.coeffs.get(&n) {
                Some(d) => d.clone(),
                None => {
                    n += 1;
                    continue;
                }
            };
            let corr = ctx.neg(&ctx.mul(&d, &f1inv));
            h = h.add(ctx, &LocalSeries::monomial(ctx, corr, n, known));
            n += 1;
        }
        Ok(h)
    }

    pub fn derivative<C: Ring<T>>(&self, ctx: &C) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .filter(|(k, _)| **k != 0)
            .map(|(k, v)| (*k - 1, ctx.mul(&ctx.from_i64(*k), v)))
            .collect();
        LocalSeries::from_coeffs(ctx, coeffs, ord_add(self.known, -1))
    }

    /// Term-by-term primitive vanishing at the expansion point; errors if a
    /// residue term (exponent -1) is present.
    pub fn integrate<C: Ring<T>>(&self, ctx: &C) -> Result<Self> {
        let mut coeffs = BTreeMap::new();
        for (k, v) in &self.coeffs {
            if *k == -1 {
                return Err(AlgError::BadInput {
                    detail: String::from("primitive of a series with nonzero residue"),
                });
            }
            let inv = ctx.inv(&ctx.from_i64(k + 1))?;
            coeffs.insert(k + 1, ctx.mul(v, &inv));
        }
        Ok(LocalSeries::from_coeffs(
            ctx,
            coeffs,
            ord_add(self.known, 1),
        ))
    }

    pub fn map_coeffs<U: Clone, F: FnMut(&T) -> U>(&self, mut f: F) -> LocalSeries<U> {
        LocalSeries {
            coeffs: self.coeffs.iter().map(|(k, v)| (*k, f(v))).collect(),
            known: self.known,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{rat_i64, Rat};
    use crate::ring::RatField;

    type L = LocalSeries<Rat>;

    fn mono(k: i64, c: i64, known: i64) -> L {
        LocalSeries::monomial(&RatField, rat_i64(c), k, known)
    }

    /// Independent Lagrange-inversion oracle for the compositional inverse:
    /// [s^n] h = (1/n) [t^(n-1)] (t / f(t))^n.
    fn lagrange_inverse_coeff(f: &L, n: i64) -> Rat {
        let ctx = RatField;
        let tf = f.shift(-1).invert(&ctx).unwrap(); // t/f(t) has valuation 0
        let mut p = LocalSeries::monomial(&ctx, rat_i64(1), 0, f.known_order());
        for _ in 0..n {
            p = p.mul(&ctx, &tf);
        }
        p.coeff(&ctx, n - 1).unwrap() / rat_i64(n)
    }

    #[test]
    fn func_invert_matches_lagrange_oracle() {
        // f = t + t^2; inverse starts s - s^2 + 2 s^3 - 5 s^4 + ...
        let ctx = RatField;
        let f = mono(1, 1, 10).add(&ctx, &mono(2, 1, 10));
        let h = f.func_invert(&ctx).unwrap();
        assert_eq!(h.coeff(&ctx, 1).unwrap(), rat_i64(1));
        assert_eq!(h.coeff(&ctx, 2).unwrap(), rat_i64(-1));
        assert_eq!(h.coeff(&ctx, 3).unwrap(), rat_i64(2));
        assert_eq!(h.coeff(&ctx, 4).unwrap(), rat_i64(-5));
        for n in 1..10 {
            assert_eq!(
                h.coeff(&ctx, n).unwrap(),
                lagrange_inverse_coeff(&f, n),
                "order {n}"
            );
        }
        // round trip: f(h(s)) = s
        let round = f.compose(&ctx, &h).unwrap();
        let s = mono(1, 1, round.known_order());
        assert_eq!(round, s);
    }

    #[test]
    fn func_invert_identity_and_failure() {
        let ctx = RatField;
        let f = mono(1, 1, 8);
        assert_eq!(f.func_invert(&ctx).unwrap(), f);
        let g = mono(2, 1, 8);
        assert!(matches!(
            g.func_invert(&ctx),
            Err(AlgError::NonUnitLinearTerm)
        ));
    }

    #[test]
    fn invert_and_orders() {
        let ctx = RatField;
        // s^2 * (1 + s): inverse s^-2 (1 - s + s^2 ...)
        let f = mono(2, 1, 8).add(&ctx, &mono(3, 1, 8));
        let inv = f.invert(&ctx).unwrap();
        assert_eq!(inv.coeff(&ctx, -2).unwrap(), rat_i64(1));
        assert_eq!(inv.coeff(&ctx, -1).unwrap(), rat_i64(-1));
        assert_eq!(inv.known_order(), 4); // 8 - 2*2
        let prod = f.mul(&ctx, &inv);
        assert_eq!(prod.coeff(&ctx, 0).unwrap(), rat_i64(1));
        assert!(prod.sub(&ctx, &mono(0, 1, prod.known_order())).is_zero());
    }

    #[test]
    fn derivative_integrate_roundtrip() {
        let ctx = RatField;
        let f = mono(1, 3, 7).add(&ctx, &mono(4, 5, 7));
        let g = f.derivative(&ctx).integrate(&ctx).unwrap();
        assert!(g.sub(&ctx, &f.truncate(g.known_order())).is_zero());
        // residue term blocks integration
        let h = mono(-1, 1, 5);
        assert!(h.integrate(&ctx).is_err());
    }

    #[test]
    fn reading_past_known_order_fails() {
        let f = mono(1, 1, 3);
        assert!(matches!(
            f.coeff(&RatField, 3),
            Err(AlgError::InsufficientLocalOrder {
                needed: 3,
                known: 3
            })
        ));
    }
}
