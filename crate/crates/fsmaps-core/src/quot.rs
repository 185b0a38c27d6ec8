//! Quotient rings R[u]/(P) for a monic squarefree modulus P.
//!
//! The roots of P are never named: an element is its reduced representative,
//! inversion is the extended Euclidean algorithm, and the sum of any element
//! over all roots of P is the trace, evaluated through Newton power sums of
//! the modulus coefficients. This is how residue sums over ramification
//! points stay inside the base ring.

use crate::error::{AlgError, Result};
use crate::poly::Poly;
use crate::ring::Ring;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuotElem<T> {
    pub rep: Poly<T>,
}

#[derive(Clone, Debug)]
pub struct QuotRing<T, C> {
    pub base: C,
    modulus: Poly<T>,
    power_sums: Vec<T>,
}

impl<T: Clone + core::fmt::Display, C: Ring<T>> QuotRing<T, C> {
    /// Build the ring, normalizing the modulus to monic form and enforcing
    /// squarefreeness by an exact gcd(P, P') check.
    pub fn new(base: C, modulus: Poly<T>) -> Result<Self> {
        let modulus = modulus.monic(&base)?;
        let d = modulus.degree().ok_or_else(|| AlgError::BadInput {
            detail: String::from("zero modulus"),
        })?;
        if d == 0 {
            return Err(AlgError::BadInput {
                detail: String::from("constant modulus"),
            });
        }
        let deriv = modulus.derivative(&base);
        let g = Poly::gcd(&base, &modulus, &deriv)?;
        if g.degree() != Some(0) {
            return Err(AlgError::NotSquarefree {
                detail: g.render("u"),
            });
        }
        // Newton identities: S_0 = d, and for 1 <= k < d
        //   S_k = -k p_{d-k} - sum_{i=1}^{k-1} p_{d-i} S_{k-i}
        let mut sums = vec![base.from_i64(d as i64)];
        for k in 1..d {
            let mut acc = base.mul(&base.from_i64(-(k as i64)), &modulus.coeff(&base, d - k));
            for i in 1..k {
                let t = base.mul(&modulus.coeff(&base, d - i), &sums[k - i]);
                acc = base.sub(&acc, &t);
            }
            sums.push(acc);
        }
        Ok(QuotRing {
            base,
            modulus,
            power_sums: sums,
        })
    }

    pub fn modulus(&self) -> &Poly<T> {
        &self.modulus
    }

    pub fn degree(&self) -> usize {
        self.modulus.degree().unwrap()
    }

    pub fn reduce(&self, p: &Poly<T>) -> QuotElem<T> {
        if p.degree().map_or(true, |n| n < self.degree()) {
            return QuotElem { rep: p.clone() };
        }
        let (_, r) = p
            .divmod(&self.base, &self.modulus)
            .expect("monic modulus division cannot fail");
        QuotElem { rep: r }
    }

    /// The image of the adjoined root symbol u.
    pub fn root(&self) -> QuotElem<T> {
        self.reduce(&Poly::x(&self.base))
    }

    pub fn embed(&self, t: T) -> QuotElem<T> {
        QuotElem {
            rep: Poly::constant(&self.base, t),
        }
    }

    pub fn zero(&self) -> QuotElem<T> {
        QuotElem { rep: Poly::zero() }
    }

    pub fn one(&self) -> QuotElem<T> {
        self.embed(self.base.one())
    }

    pub fn is_zero(&self, e: &QuotElem<T>) -> bool {
        e.rep.is_zero()
    }

    pub fn add(&self, a: &QuotElem<T>, b: &QuotElem<T>) -> QuotElem<T> {
        QuotElem {
            rep: a.rep.add(&self.base, &b.rep),
        }
    }

    pub fn sub(&self, a: &QuotElem<T>, b: &QuotElem<T>) -> QuotElem<T> {
        QuotElem {
            rep: a.rep.sub(&self.base, &b.rep),
        }
    }

    pub fn neg(&self, a: &QuotElem<T>) -> QuotElem<T> {
        QuotElem {
            rep: a.rep.neg(&self.base),
        }
    }

    pub fn mul(&self, a: &QuotElem<T>, b: &QuotElem<T>) -> QuotElem<T> {
        self.reduce(&a.rep.mul(&self.base, &b.rep))
    }

    pub fn mul_scalar(&self, a: &QuotElem<T>, c: &T) -> QuotElem<T> {
        QuotElem {
            rep: a.rep.mul_scalar(&self.base, c),
        }
    }

    /// Extended Euclidean inverse; reports the nontrivial gcd factor when the
    /// element is not a unit (degenerate parameters).
    pub fn invert(&self, e: &QuotElem<T>) -> Result<QuotElem<T>> {
        if e.rep.is_zero() {
            return Err(AlgError::NotInvertible {
                detail: String::from("zero element of quotient ring"),
            });
        }
        let ctx = &self.base;
        let mut r0 = self.modulus.clone();
        let mut s0 = Poly::zero();
        let mut r1 = e.rep.clone();
        let mut s1 = Poly::constant(ctx, ctx.one());
        while !r1.is_zero() {
            let (q, r) = r0.divmod(ctx, &r1)?;
            let s = s0.sub(ctx, &q.mul(ctx, &s1));
            r0 = r1;
            s0 = s1;
            r1 = r;
            s1 = s;
        }
        if r0.degree() != Some(0) {
            return Err(AlgError::NotInvertible {
                detail: r0.render("u"),
            });
        }
        let c = ctx.inv(&r0.coeffs[0])?;
        Ok(self.reduce(&s0.mul_scalar(ctx, &c)))
    }

    /// Sum of the element over all roots of the modulus, as a base-ring
    /// scalar, via the precomputed Newton power sums.
    pub fn trace(&self, e: &QuotElem<T>) -> T {
        let mut acc = self.base.zero();
        for (k, c) in e.rep.coeffs.iter().enumerate() {
            let t = self.base.mul(c, &self.power_sums[k]);
            acc = self.base.add(&acc, &t);
        }
        acc
    }

    /// Coefficients of P(x)/(x - u) as a polynomial in x over the quotient
    /// ring: q_{d-1} = 1 and q_{j} = p_{j+1} + u q_{j+1}. Used to clear a
    /// (x - root) denominator before tracing.
    pub fn synthetic_quotient(&self) -> Vec<QuotElem<T>> {
        let d = self.degree();
        let u = self.root();
        let mut q = vec![self.zero(); d];
        q[d - 1] = self.one();
        for j in (0..d - 1).rev() {
            let p = self.embed(self.modulus.coeff(&self.base, j + 1));
            q[j] = self.add(&p, &self.mul(&u, &q[j + 1]));
        }
        q
    }
}

/// Borrowed ring context over a quotient ring, so the generic polynomial /
/// local-series / multivariate layers can run with quotient coefficients.
#[derive(Debug)]
pub struct QuotCtx<'a, T, C>(pub &'a QuotRing<T, C>);

impl<'a, T, C> Clone for QuotCtx<'a, T, C> {
    fn clone(&self) -> Self {
        QuotCtx(self.0)
    }
}

impl<'a, T: Clone + core::fmt::Display, C: Ring<T>> Ring<QuotElem<T>> for QuotCtx<'a, T, C> {
    fn zero(&self) -> QuotElem<T> {
        self.0.zero()
    }
    fn one(&self) -> QuotElem<T> {
        self.0.one()
    }
    fn from_i64(&self, n: i64) -> QuotElem<T> {
        self.0.embed(self.0.base.from_i64(n))
    }
    fn is_zero(&self, a: &QuotElem<T>) -> bool {
        self.0.is_zero(a)
    }
    fn neg(&self, a: &QuotElem<T>) -> QuotElem<T> {
        self.0.neg(a)
    }
    fn add(&self, a: &QuotElem<T>, b: &QuotElem<T>) -> QuotElem<T> {
        self.0.add(a, b)
    }
    fn mul(&self, a: &QuotElem<T>, b: &QuotElem<T>) -> QuotElem<T> {
        self.0.mul(a, b)
    }
    fn inv(&self, a: &QuotElem<T>) -> Result<QuotElem<T>> {
        self.0.invert(a)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{rat_frac, rat_i64, Rat};
    use crate::ring::RatField;

    fn ring_u2_minus(c: i64) -> QuotRing<Rat, RatField> {
        // u^2 - c
        let m = Poly::from_vec(&RatField, vec![rat_i64(-c), rat_i64(0), rat_i64(1)]);
        QuotRing::new(RatField, m).unwrap()
    }

    #[test]
    fn invert_root() {
        // u^-1 = u/2 mod u^2 - 2
        let r = ring_u2_minus(2);
        let inv = r.invert(&r.root()).unwrap();
        assert_eq!(
            inv.rep,
            Poly::from_vec(&RatField, vec![rat_i64(0), rat_frac(1, 2)])
        );
    }

    #[test]
    fn invert_shifted_root() {
        // (u - 3)^-1 = -(u + 3)/7 mod u^2 - 2, since (u-3)(u+3) = -7
        let r = ring_u2_minus(2);
        let e = QuotElem {
            rep: Poly::from_vec(&RatField, vec![rat_i64(-3), rat_i64(1)]),
        };
        let inv = r.invert(&e).unwrap();
        assert_eq!(
            inv.rep,
            Poly::from_vec(&RatField, vec![rat_frac(-3, 7), rat_frac(-1, 7)])
        );
        assert_eq!(r.mul(&e, &inv), r.one());
        // trace of the inverse: 1/(sqrt2-3) + 1/(-sqrt2-3) = -6/7
        assert_eq!(r.trace(&inv), rat_frac(-6, 7));
    }

    #[test]
    fn nilpotent_modulus_rejected() {
        let m = Poly::from_vec(&RatField, vec![rat_i64(0), rat_i64(0), rat_i64(1)]);
        assert!(matches!(
            QuotRing::new(RatField, m),
            Err(AlgError::NotSquarefree { .. })
        ));
    }

    #[test]
    fn non_unit_reports_factor() {
        let r = ring_u2_minus(1); // u^2 - 1, squarefree
        let e = QuotElem {
            rep: Poly::from_vec(&RatField, vec![rat_i64(-1), rat_i64(1)]),
        };
        match r.invert(&e) {
            Err(AlgError::NotInvertible { detail }) => {
                assert!(detail.contains("u"), "factor reported: {detail}")
            }
            other => panic!("expected NotInvertible, got {other:?}"),
        }
    }

    #[test]
    fn traces_match_spec_examples() {
        let r = ring_u2_minus(2);
        assert_eq!(r.trace(&r.root()), rat_i64(0));
        let u2 = r.mul(&r.root(), &r.root());
        assert_eq!(r.trace(&u2), rat_i64(4));
    }

    #[test]
    fn trace_agrees_with_explicit_root_sum() {
        // moduli that split over Q: products of distinct linear factors
        let mut state = 9u64;
        let mut rnd = move || {
            state = state
                .wrapping_mul(6364136223846793005)
                .wrapping_add(1442695040888963407);
            ((state >> 33) % 19) as i64 - 9
        };
        for _ in 0..25 {
            let mut roots = alloc::vec::Vec::new();
            while roots.len() < 3 {
                let r = rnd();
                if !roots.contains(&r) {
                    roots.push(r);
                }
            }
            let mut m = Poly::constant(&RatField, rat_i64(1));
            for r in &roots {
                let lin = Poly::from_vec(&RatField, vec![rat_i64(-r), rat_i64(1)]);
                m = m.mul(&RatField, &lin);
            }
            let ring = QuotRing::new(RatField, m).unwrap();
            // random element of degree < 3
            let e = QuotElem {
                rep: Poly::from_vec(
                    &RatField,
                    vec![rat_i64(rnd()), rat_i64(rnd()), rat_i64(rnd())],
                ),
            };
            let newton = ring.trace(&e);
            let mut explicit = Rat::from_integer(0.into());
            for r in &roots {
                explicit += e.rep.eval(&RatField, &rat_i64(*r));
            }
            assert_eq!(newton, explicit);
        }
    }

    #[test]
    fn inverse_roundtrip_random() {
        let r = ring_u2_minus(2);
        let mut state = 5u64;
        let mut rnd = move || {
            state = state
                .wrapping_mul(6364136223846793005)
                .wrapping_add(1442695040888963407);
            ((state >> 33) % 21) as i64 - 10
        };
        let mut tested = 0;
        while tested < 100 {
            let e = QuotElem {
                rep: Poly::from_vec(&RatField, vec![rat_i64(rnd()), rat_i64(rnd())]),
            };
            if e.rep.is_zero() {
                continue;
            }
            let inv = r.invert(&e).unwrap();
            assert_eq!(r.mul(&e, &inv), r.one());
            tested += 1;
        }
    }

    #[test]
    fn synthetic_quotient_clears_linear_factor() {
        // P(x) = (x - u) * Q_u(x) identically in the quotient ring
        let r = ring_u2_minus(2);
        let q = r.synthetic_quotient();
        let ctx = QuotCtx(&r);
        let qu = Poly { coeffs: q };
        let lin = Poly::from_vec(&ctx, vec![ctx.neg(&r.root()), ctx.one()]);
        let prod = qu.mul(&ctx, &lin);
        // compare against the embedded modulus
        let want = Poly::from_vec(
            &ctx,
            r.modulus()
                .coeffs
                .iter()
                .map(|c| r.embed(c.clone()))
                .collect(),
        );
        assert_eq!(prod, want);
    }
}
