//! Coefficient ring for residue extraction with symbolic spectator slots.
//!
//! During a recursion step the moving point is expanded locally around the
//! generic ramification root u while the output slots stay symbolic. A term
//! of this ring is a quotient-ring element times, per spectator slot i, a
//! power (theta_i - u)^m (negative m is a pole at the root) and a formal
//! denominator P(theta_i)^p. Keys multiply by adding exponents, so products
//! stay canonical, and the final trace over u turns each term into a
//! polynomial numerator over powers of P per slot:
//!
//!   sum_roots q(u) / (theta - u)^e = trace(q(u) Q_u(theta)^e) / P(theta)^e,
//!
//! with Q_u(x) = P(x)/(x - u) the synthetic quotient.

use crate::error::{AlgError, Result};
use crate::mpoly::MPoly;
use crate::poly::Poly;
use crate::quot::{QuotCtx, QuotElem, QuotRing};
use crate::ring::Ring;
use crate::series::{Series, SeriesRing};
use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

/// Per-spectator factor: ((theta_i - u)-exponent, P(theta_i)-denominator power).
pub type SpectKey = Vec<(i32, u32)>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Spect {
    pub terms: BTreeMap<SpectKey, QuotElem<Series>>,
}

#[derive(Debug)]
pub struct SpectCtx<'r> {
    pub ring: &'r QuotRing<Series, SeriesRing>,
    pub nspec: usize,
}

impl<'r> Clone for SpectCtx<'r> {
    fn clone(&self) -> Self {
        SpectCtx {
            ring: self.ring,
            nspec: self.nspec,
        }
    }
}

impl<'r> SpectCtx<'r> {
    pub fn new(ring: &'r QuotRing<Series, SeriesRing>, nspec: usize) -> Self {
        SpectCtx { ring, nspec }
    }

    fn key0(&self) -> SpectKey {
        vec![(0, 0); self.nspec]
    }

    /// A spectator-free element.
    pub fn scalar(&self, q: QuotElem<Series>) -> Spect {
        let mut terms = BTreeMap::new();
        if !self.ring.is_zero(&q) {
            terms.insert(self.key0(), q);
        }
        Spect { terms }
    }

    /// q * (theta_slot - u)^m * P(theta_slot)^{-p}.
    pub fn factor(&self, slot: usize, m: i32, p: u32, q: QuotElem<Series>) -> Spect {
        let mut key = self.key0();
        key[slot] = (m, p);
        let mut terms = BTreeMap::new();
        if !self.ring.is_zero(&q) {
            terms.insert(key, q);
        }
        Spect { terms }
    }

    /// The spectator variable theta_slot itself: (theta_slot - u) + u.
    pub fn spectator_var(&self, slot: usize) -> Spect {
        let mut s = self.factor(slot, 1, 0, self.ring.one());
        let u = self.ring.root();
        s = self.add(&s, &self.scalar(u));
        s
    }
}

impl<'r> Ring<Spect> for SpectCtx<'r> {
    fn zero(&self) -> Spect {
        Spect {
            terms: BTreeMap::new(),
        }
    }

    fn one(&self) -> Spect {
        self.scalar(self.ring.one())
    }

    fn from_i64(&self, n: i64) -> Spect {
        self.scalar(self.ring.embed(Series::from_i64(n)))
    }

    fn is_zero(&self, a: &Spect) -> bool {
        a.terms.is_empty()
    }

    fn neg(&self, a: &Spect) -> Spect {
        Spect {
            terms: a
                .terms
                .iter()
                .map(|(k, v)| (k.clone(), self.ring.neg(v)))
                .collect(),
        }
    }

    fn add(&self, a: &Spect, b: &Spect) -> Spect {
        let mut terms = a.terms.clone();
        for (k, v) in &b.terms {
            match terms.get_mut(k) {
                Some(e) => {
                    *e = self.ring.add(e, v);
                    if self.ring.is_zero(e) {
                        terms.remove(k);
                    }
                }
                None => {
                    terms.insert(k.clone(), v.clone());
                }
            }
        }
        Spect { terms }
    }

    fn mul(&self, a: &Spect, b: &Spect) -> Spect {
        let mut terms: BTreeMap<SpectKey, QuotElem<Series>> = BTreeMap::new();
        for (ka, va) in &a.terms {
            for (kb, vb) in &b.terms {
                let key: SpectKey = ka
                    .iter()
                    .zip(kb)
                    .map(|((m1, p1), (m2, p2))| (m1 + m2, p1 + p2))
                    .collect();
                let v = self.ring.mul(va, vb);
                match terms.get_mut(&key) {
                    Some(e) => {
                        *e = self.ring.add(e, &v);
                        if self.ring.is_zero(e) {
                            terms.remove(&key);
                        }
                    }
                    None => {
                        if !self.ring.is_zero(&v) {
                            terms.insert(key, v);
                        }
                    }
                }
            }
        }
        Spect { terms }
    }

    /// Only spectator-free elements are invertible here; that is all the
    /// recursion kernel needs.
    fn inv(&self, a: &Spect) -> Result<Spect> {
        if a.terms.len() != 1 {
            return Err(AlgError::NotInvertible {
                detail: String::from("spectator element is not a pure scalar"),
            });
        }
        let (k, v) = a.terms.iter().next().unwrap();
        if k.iter().any(|(m, p)| *m != 0 || *p != 0) {
            return Err(AlgError::NotInvertible {
                detail: String::from("spectator element carries slot factors"),
            });
        }
        Ok(self.scalar(self.ring.invert(v)?))
    }
}

/// Result of tracing a spectator element over the roots of the modulus: a
/// polynomial numerator per slot over P(theta_i)^dens[i].
pub struct TracedForm {
    pub num: MPoly<Series>,
    pub dens: Vec<u32>,
}

/// Sum the element over all roots of the ramification polynomial. Positive
/// (theta_i - u) powers expand binomially through Horner multiplication;
/// negative powers are cleared with the synthetic quotient before tracing.
pub fn trace_spect(ctx: &SpectCtx<'_>, a: &Spect) -> TracedForm {
    let ring = ctx.ring;
    let qctx = QuotCtx(ring);
    let nspec = ctx.nspec;
    let sctx = SeriesRing;
    // overall denominator exponent per slot
    let mut dens = vec![0u32; nspec];
    for key in a.terms.keys() {
        for (i, (m, p)) in key.iter().enumerate() {
            let e = p + (-*m).max(0) as u32;
            dens[i] = dens[i].max(e);
        }
    }
    // synthetic quotient Q_u as a univariate polynomial over the quotient ring
    let qu = Poly {
        coeffs: ring.synthetic_quotient(),
    };
    // P with quotient-ring coefficients for clearing exponent gaps
    let p_quot = Poly {
        coeffs: ring
            .modulus()
            .coeffs
            .iter()
            .map(|c| ring.embed(c.clone()))
            .collect::<Vec<_>>(),
    };
    let mut total = MPoly::zero(nspec);
    for (key, q) in &a.terms {
        // numerator polynomial over the quotient ring in the spectators
        let mut acc = MPoly::constant(&qctx, nspec, q.clone());
        for (i, (m, p)) in key.iter().enumerate() {
            let e_term = p + (-*m).max(0) as u32;
            let mut factor_in_slot = |poly: &Poly<QuotElem<Series>>, times: u32| {
                for _ in 0..times {
                    let lifted = univar_to_mpoly(&qctx, nspec, i, poly);
                    acc = acc.mul(&qctx, &lifted);
                }
            };
            if *m > 0 {
                // (theta_i - u)^m
                let lin = Poly {
                    coeffs: vec![qctx.neg(&ring.root()), ring.one()],
                };
                factor_in_slot(&lin, *m as u32);
            } else if *m < 0 {
                factor_in_slot(&qu, (-*m) as u32);
            }
            // close the gap to the slot's common denominator exponent
            factor_in_slot(&p_quot, dens[i] - e_term);
        }
        // trace coefficient by coefficient
        let traced = acc.map_coeffs(|c| ring.trace(c));
        let mut cleaned = MPoly::zero(nspec);
        for (k, v) in traced.terms {
            cleaned.insert_add(&sctx, k, v);
        }
        total = total.add(&sctx, &cleaned);
    }
    TracedForm { num: total, dens }
}

/// Lift a univariate polynomial into a multivariate one living in `slot`.
pub fn univar_to_mpoly<T: Clone, C: Ring<T>>(
    ctx: &C,
    arity: usize,
    slot: usize,
    p: &Poly<T>,
) -> MPoly<T> {
    let mut out = MPoly::zero(arity);
    for (e, c) in p.coeffs.iter().enumerate() {
        if ctx.is_zero(c) {
            continue;
        }
        let mut exps = vec![0u32; arity];
        exps[slot] = e as u32;
        out.insert_add(ctx, exps, c.clone());
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{rat_frac, rat_i64};

    fn test_ring() -> QuotRing<Series, SeriesRing> {
        // u^2 - 2 over series
        let m = Poly::from_vec(
            &SeriesRing,
            vec![Series::from_i64(-2), Series::zero(), Series::one()],
        );
        QuotRing::new(SeriesRing, m).unwrap()
    }

    #[test]
    fn ring_laws_and_inverse() {
        let ring = test_ring();
        let ctx = SpectCtx::new(&ring, 1);
        let x = ctx.spectator_var(0);
        let y = ctx.factor(0, -1, 0, ring.root());
        let z = ctx.add(&ctx.mul(&x, &y), &ctx.one());
        let w = ctx.mul(&ctx.mul(&x, &y), &z);
        let w2 = ctx.mul(&x, &ctx.mul(&y, &z));
        assert_eq!(ctx.mul(&w2, &ctx.one()), ctx.mul(&ctx.one(), &w2));
        assert_eq!(ctx.sub(&w, &ctx.mul(&y, &ctx.mul(&x, &z))), ctx.zero());
        assert!(ctx.inv(&x).is_err());
        let s = ctx.scalar(ring.root());
        let si = ctx.inv(&s).unwrap();
        assert_eq!(ctx.mul(&s, &si), ctx.one());
    }

    #[test]
    fn trace_of_simple_pole_matches_partial_fractions() {
        // sum over roots r of u^2 = 2 of 1/(x - r) = 2x / (x^2 - 2)
        let ring = test_ring();
        let ctx = SpectCtx::new(&ring, 1);
        let a = ctx.factor(0, -1, 0, ring.one());
        let t = trace_spect(&ctx, &a);
        assert_eq!(t.dens, vec![1]);
        // numerator should be 2x
        assert_eq!(t.num.terms.len(), 1);
        let c = &t.num.terms[&vec![1u32]];
        assert!(c.eq_on_common(&Series::from_i64(2)).unwrap());
    }

    #[test]
    fn trace_of_weighted_double_pole() {
        // sum over roots of u/(x-u)^2 for u^2 = 2:
        // explicit: r/(x-r)^2 + (-r)/(x+r)^2 with r = sqrt(2)
        //         = r[(x+r)^2 - (x-r)^2]/(x^2-2)^2 = 4sqrt2... careful: r*...
        // compute: r(x+r)^2 - r(x-r)^2 = r * 4xr = 4x r^2 = 8x.
        let ring = test_ring();
        let ctx = SpectCtx::new(&ring, 1);
        let a = ctx.factor(0, -2, 0, ring.root());
        let t = trace_spect(&ctx, &a);
        assert_eq!(t.dens, vec![2]);
        let c = &t.num.terms[&vec![1u32]];
        assert!(c.eq_on_common(&Series::from_i64(8)).unwrap());
        assert_eq!(t.num.terms.len(), 1);
    }

    #[test]
    fn trace_mixes_positive_powers_and_denominators() {
        // sum over roots of (theta0 - u) * P(theta1)^{-1}:
        // = [sum (theta0 - u)] / P(theta1) = 2*theta0 / P(theta1)
        let ring = test_ring();
        let ctx = SpectCtx::new(&ring, 2);
        let a = ctx.mul(
            &ctx.factor(0, 1, 0, ring.one()),
            &ctx.factor(1, 0, 1, ring.one()),
        );
        let t = trace_spect(&ctx, &a);
        assert_eq!(t.dens, vec![0, 1]);
        assert_eq!(t.num.terms.len(), 1);
        let c = &t.num.terms[&vec![1u32, 0]];
        assert!(c.eq_on_common(&Series::from_i64(2)).unwrap());
    }

    #[test]
    fn trace_aligns_mixed_denominator_exponents() {
        // 1/(x-u) + 1/(x-u)^2 summed over roots of u^2-2:
        // 2x/(x^2-2) + (2x^2+4)/(x^2-2)^2 = (2x^3 + 2x^2 - 4x + 4)/(x^2-2)^2
        let ring = test_ring();
        let ctx = SpectCtx::new(&ring, 1);
        let a = ctx.add(
            &ctx.factor(0, -1, 0, ring.one()),
            &ctx.factor(0, -2, 0, ring.one()),
        );
        let t = trace_spect(&ctx, &a);
        assert_eq!(t.dens, vec![2]);
        let expect = [
            (vec![0u32], rat_i64(4)),
            (vec![1], rat_i64(-4)),
            (vec![2], rat_i64(2)),
            (vec![3], rat_i64(2)),
        ];
        for (k, v) in expect {
            assert!(
                t.num.terms[&k]
                    .eq_on_common(&Series::from_rat(v.clone()))
                    .unwrap(),
                "coefficient at {k:?}"
            );
        }
        let _ = rat_frac(1, 2);
    }
}
