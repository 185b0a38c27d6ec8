//! Sparse multivariate polynomials with a fixed number of slot variables.
//!
//! Exponent vectors are the keys; the coefficient ring is a context like
//! everywhere else. The numerators of multidifferentials live here, so the
//! module carries exactly the operations canonicalization needs: per-slot
//! univariate views, exact division by a monic univariate polynomial in one
//! slot, slot permutation, and partial derivatives.

use crate::poly::Poly;
use crate::ring::Ring;
use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MPoly<T> {
    pub arity: usize,
    pub terms: BTreeMap<Vec<u32>, T>,
}

impl<T: Clone> MPoly<T> {
    pub fn zero(arity: usize) -> Self {
        MPoly {
            arity,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant<C: Ring<T>>(ctx: &C, arity: usize, c: T) -> Self {
        let mut p = MPoly::zero(arity);
        if !ctx.is_zero(&c) {
            p.terms.insert(vec![0; arity], c);
        }
        p
    }

    pub fn monomial<C: Ring<T>>(ctx: &C, exps: Vec<u32>, c: T) -> Self {
        let arity = exps.len();
        let mut p = MPoly::zero(arity);
        if !ctx.is_zero(&c) {
            p.terms.insert(exps, c);
        }
        p
    }

    pub fn var<C: Ring<T>>(ctx: &C, arity: usize, i: usize) -> Self {
        let mut exps = vec![0u32; arity];
        exps[i] = 1;
        MPoly::monomial(ctx, exps, ctx.one())
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn insert_add<C: Ring<T>>(&mut self, ctx: &C, exps: Vec<u32>, c: T) {
        match self.terms.get_mut(&exps) {
            Some(e) => {
                *e = ctx.add(e, &c);
                if ctx.is_zero(e) {
                    self.terms.remove(&exps);
                }
            }
            None => {
                if !ctx.is_zero(&c) {
                    self.terms.insert(exps, c);
                }
            }
        }
    }

    pub fn neg<C: Ring<T>>(&self, ctx: &C) -> Self {
        MPoly {
            arity: self.arity,
            terms: self
                .terms
                .iter()
                .map(|(k, v)| (k.clone(), ctx.neg(v)))
                .collect(),
        }
    }

    pub fn add<C: Ring<T>>(&self, ctx: &C, other: &Self) -> Self {
        debug_assert_eq!(self.arity, other.arity);
        let mut out = self.clone();
        for (k, v) in &other.terms {
            out.insert_add(ctx, k.clone(), v.clone());
        }
        out
    }

    pub fn sub<C: Ring<T>>(&self, ctx: &C, other: &Self) -> Self {
        self.add(ctx, &other.neg(ctx))
    }

    pub fn mul<C: Ring<T>>(&self, ctx: &C, other: &Self) -> Self {
        debug_assert_eq!(self.arity, other.arity);
        let mut out = MPoly::zero(self.arity);
        for (ka, va) in &self.terms {
            for (kb, vb) in &other.terms {
                let k: Vec<u32> = ka.iter().zip(kb).map(|(a, b)| a + b).collect();
                out.insert_add(ctx, k, ctx.mul(va, vb));
            }
        }
        out
    }

    pub fn mul_scalar<C: Ring<T>>(&self, ctx: &C, c: &T) -> Self {
        let mut out = MPoly::zero(self.arity);
        for (k, v) in &self.terms {
            out.insert_add(ctx, k.clone(), ctx.mul(v, c));
        }
        out
    }

    pub fn degree_in(&self, var: usize) -> Option<u32> {
        self.terms.keys().map(|k| k[var]).max()
    }

    /// View as a univariate polynomial in `var`: exponent -> coefficient
    /// polynomial (with that slot's exponent cleared).
    pub fn split_var(&self, var: usize) -> BTreeMap<u32, MPoly<T>> {
        let mut out: BTreeMap<u32, MPoly<T>> = BTreeMap::new();
        for (k, v) in &self.terms {
            let e = k[var];
            let mut rest = k.clone();
            rest[var] = 0;
            out.entry(e)
                .or_insert_with(|| MPoly::zero(self.arity))
                .terms
                .insert(rest, v.clone());
        }
        out
    }

    pub fn from_split(arity: usize, var: usize, split: BTreeMap<u32, MPoly<T>>) -> Self {
        let mut out = MPoly::zero(arity);
        for (e, p) in split {
            for (k, v) in p.terms {
                let mut key = k;
                key[var] += e;
                out.terms.insert(key, v);
            }
        }
        out
    }

    /// Exact division by a monic univariate polynomial in one slot; `None`
    /// when the division leaves a remainder.
    pub fn exact_div_univar<C: Ring<T>>(&self, ctx: &C, var: usize, p: &Poly<T>) -> Option<Self> {
        let d = p.degree().expect("nonzero divisor") as u32;
        debug_assert!(
            ctx.is_zero(&ctx.sub(p.lead().unwrap(), &ctx.one())),
            "monic divisor"
        );
        let mut cols = self.split_var(var);
        let top = match cols.keys().next_back() {
            Some(t) => *t,
            None => return Some(MPoly::zero(self.arity)),
        };
        if top < d {
            return None;
        }
        let mut quo: BTreeMap<u32, MPoly<T>> = BTreeMap::new();
        let mut e = top;
        loop {
            let lead = cols.remove(&e).unwrap_or_else(|| MPoly::zero(self.arity));
            if e < d {
                if !lead.is_zero() {
                    return None;
                }
                if e == 0 {
                    break;
                }
                e -= 1;
                continue;
            }
            if !lead.is_zero() {
                for j in 0..d {
                    let pc = p.coeff(ctx, j as usize);
                    let t = lead.mul_scalar(ctx, &ctx.neg(&pc));
                    let slot = cols
                        .entry(e - d + j)
                        .or_insert_with(|| MPoly::zero(self.arity));
                    *slot = slot.add(ctx, &t);
                }
                quo.insert(e - d, lead);
            }
            if e == 0 {
                break;
            }
            e -= 1;
        }
        // anything left below degree d must vanish
        if cols.values().any(|c| !c.is_zero()) {
            return None;
        }
        Some(MPoly::from_split(self.arity, var, quo))
    }

    /// Exact division by (slot_i - slot_j), synthetic in slot i; None when a
    /// remainder survives.
    pub fn exact_div_linear_diff<C: Ring<T>>(&self, ctx: &C, i: usize, j: usize) -> Option<Self> {
        let split = self.split_var(i);
        let top = match split.keys().next_back() {
            Some(t) => *t,
            None => return Some(MPoly::zero(self.arity)),
        };
        if top == 0 {
            return if split.values().all(|p| p.is_zero()) {
                Some(MPoly::zero(self.arity))
            } else {
                None
            };
        }
        let vj = MPoly::var(ctx, self.arity, j);
        let mut quo: BTreeMap<u32, MPoly<T>> = BTreeMap::new();
        let mut carry = MPoly::zero(self.arity);
        for e in (0..=top).rev() {
            let c = split
                .get(&e)
                .cloned()
                .unwrap_or_else(|| MPoly::zero(self.arity));
            let q = c.add(ctx, &carry);
            if e == 0 {
                // remainder: the polynomial evaluated at slot_i = slot_j
                if !q.is_zero() {
                    return None;
                }
                break;
            }
            carry = q.mul(ctx, &vj);
            quo.insert(e - 1, q);
        }
        Some(MPoly::from_split(self.arity, i, quo))
    }

    /// Partial derivative in one slot.
    pub fn derivative<C: Ring<T>>(&self, ctx: &C, var: usize) -> Self {
        let mut out = MPoly::zero(self.arity);
        for (k, v) in &self.terms {
            if k[var] == 0 {
                continue;
            }
            let mut key = k.clone();
            key[var] -= 1;
            out.insert_add(ctx, key, ctx.mul(&ctx.from_i64(k[var] as i64), v));
        }
        out
    }

    /// Apply a permutation of the slots: exponent vector entry i moves to
    /// position perm[i].
    pub fn permute_slots(&self, perm: &[usize]) -> Self {
        let mut out = MPoly::zero(self.arity);
        for (k, v) in &self.terms {
            let mut key = vec![0u32; self.arity];
            for (i, e) in k.iter().enumerate() {
                key[perm[i]] = *e;
            }
            out.terms.insert(key, v.clone());
        }
        out
    }

    /// Substitute a ring value for one slot variable.
    pub fn eval_var<C: Ring<T>>(&self, ctx: &C, var: usize, x: &T) -> Self {
        let split = self.split_var(var);
        let mut out = MPoly::zero(self.arity);
        let mut xp = ctx.one();
        let mut prev = 0u32;
        for (e, p) in split {
            for _ in prev..e {
                xp = ctx.mul(&xp, x);
            }
            prev = e;
            out = out.add(ctx, &p.mul_scalar(ctx, &xp));
        }
        out
    }

    pub fn map_coeffs<U: Clone, F: FnMut(&T) -> U>(&self, mut f: F) -> MPoly<U> {
        MPoly {
            arity: self.arity,
            terms: self.terms.iter().map(|(k, v)| (k.clone(), f(v))).collect(),
        }
    }

    pub fn constant_term<C: Ring<T>>(&self, ctx: &C) -> T {
        self.terms
            .get(&vec![0u32; self.arity])
            .cloned()
            .unwrap_or_else(|| ctx.zero())
    }
}

/// Ring context over multivariate polynomials of a fixed arity; inversion is
/// only defined for constants (that is all the expansion pipeline needs).
#[derive(Clone, Debug)]
pub struct MPolyRing<C> {
    pub base: C,
    pub arity: usize,
}

impl<T: Clone, C: Ring<T>> Ring<MPoly<T>> for MPolyRing<C> {
    fn zero(&self) -> MPoly<T> {
        MPoly::zero(self.arity)
    }
    fn one(&self) -> MPoly<T> {
        MPoly::constant(&self.base, self.arity, self.base.one())
    }
    fn from_i64(&self, n: i64) -> MPoly<T> {
        MPoly::constant(&self.base, self.arity, self.base.from_i64(n))
    }
    fn is_zero(&self, a: &MPoly<T>) -> bool {
        a.is_zero()
    }
    fn neg(&self, a: &MPoly<T>) -> MPoly<T> {
        a.neg(&self.base)
    }
    fn add(&self, a: &MPoly<T>, b: &MPoly<T>) -> MPoly<T> {
        a.add(&self.base, b)
    }
    fn mul(&self, a: &MPoly<T>, b: &MPoly<T>) -> MPoly<T> {
        a.mul(&self.base, b)
    }
    fn inv(&self, a: &MPoly<T>) -> crate::error::Result<MPoly<T>> {
        if a.terms.len() == 1 {
            if let Some(c) = a.terms.get(&vec![0u32; self.arity]) {
                return Ok(MPoly::constant(&self.base, self.arity, self.base.inv(c)?));
            }
        }
        Err(crate::error::AlgError::NotInvertible {
            detail: alloc::string::String::from("non-constant multivariate polynomial"),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{rat_i64, Rat};
    use crate::ring::RatField;

    fn xvar(i: usize) -> MPoly<Rat> {
        MPoly::var(&RatField, 2, i)
    }

    #[test]
    fn mul_and_split() {
        let ctx = RatField;
        // (x + y)^2 = x^2 + 2xy + y^2
        let s = xvar(0).add(&ctx, &xvar(1));
        let sq = s.mul(&ctx, &s);
        assert_eq!(sq.terms.len(), 3);
        assert_eq!(sq.terms[&vec![1, 1]], rat_i64(2));
        let split = sq.split_var(0);
        assert_eq!(split.len(), 3);
        assert_eq!(MPoly::from_split(2, 0, split), sq);
    }

    #[test]
    fn exact_division_in_one_slot() {
        let ctx = RatField;
        // divisor x^2 - 3 (monic in slot 0)
        let p = Poly::from_vec(&ctx, vec![rat_i64(-3), rat_i64(0), rat_i64(1)]);
        let x2 = xvar(0).mul(&ctx, &xvar(0));
        let pm = x2.sub(&ctx, &MPoly::constant(&ctx, 2, rat_i64(3)));
        let f = pm.mul(&ctx, &xvar(1)).mul(&ctx, &pm);
        let q = f.exact_div_univar(&ctx, 0, &p).unwrap();
        assert_eq!(q, pm.mul(&ctx, &xvar(1)));
        assert!(f
            .add(&ctx, &xvar(0))
            .exact_div_univar(&ctx, 0, &p)
            .is_none());
    }

    #[test]
    fn permute_and_derive() {
        let ctx = RatField;
        let f = xvar(0).mul(&ctx, &xvar(0)).mul(&ctx, &xvar(1)); // x^2 y
        let g = f.permute_slots(&[1, 0]); // y^2 x
        assert_eq!(g.terms[&vec![1, 2]], rat_i64(1));
        let df = f.derivative(&ctx, 0); // 2 x y
        assert_eq!(df.terms[&vec![1, 1]], rat_i64(2));
    }

    #[test]
    fn divide_by_slot_difference() {
        let ctx = RatField;
        // (x - y)^2 * (x + 2y)
        let d = xvar(0).sub(&ctx, &xvar(1));
        let f = d.mul(&ctx, &d).mul(
            &ctx,
            &xvar(0).add(&ctx, &xvar(1).mul_scalar(&ctx, &rat_i64(2))),
        );
        let q = f.exact_div_linear_diff(&ctx, 0, 1).unwrap();
        let q2 = q.exact_div_linear_diff(&ctx, 0, 1).unwrap();
        assert_eq!(
            q2,
            xvar(0).add(&ctx, &xvar(1).mul_scalar(&ctx, &rat_i64(2)))
        );
        assert!(q2.exact_div_linear_diff(&ctx, 0, 1).is_none());
    }

    #[test]
    fn eval_var_substitutes() {
        let ctx = RatField;
        let f = xvar(0).mul(&ctx, &xvar(1)).add(&ctx, &xvar(0)); // xy + x
        let g = f.eval_var(&ctx, 0, &rat_i64(2)); // 2y + 2
        assert_eq!(g.terms[&vec![0, 1]], rat_i64(2));
        assert_eq!(g.terms[&vec![0, 0]], rat_i64(2));
    }
}
