//! Ring-context trait for the generic algebra layers.
//!
//! Elements do not know their ring: a context object carries the structure
//! (a quotient-ring context holds its modulus, for instance), and polynomial,
//! local-series and multivariate layers are generic over the context. This
//! keeps element types plain data and lets the same tower run over rationals,
//! truncated series, or quotient-ring elements.

use crate::error::Result;

/// A commutative ring presented as a context acting on elements of type `T`.
///
/// `inv` is partial: it reports `NotInvertible` instead of guessing.
pub trait Ring<T: Clone>: Clone {
    fn zero(&self) -> T;
    fn one(&self) -> T;
    fn from_i64(&self, n: i64) -> T;
    fn is_zero(&self, a: &T) -> bool;
    fn neg(&self, a: &T) -> T;
    fn add(&self, a: &T, b: &T) -> T;
    fn mul(&self, a: &T, b: &T) -> T;
    fn inv(&self, a: &T) -> Result<T>;

    fn sub(&self, a: &T, b: &T) -> T {
        self.add(a, &self.neg(b))
    }

    fn add_assign(&self, a: &mut T, b: &T) {
        *a = self.add(a, b);
    }

    /// a/b via `inv`; errors when b is not a unit.
    fn div(&self, a: &T, b: &T) -> Result<T> {
        Ok(self.mul(a, &self.inv(b)?))
    }

    fn pow(&self, a: &T, mut e: u64) -> T {
        let mut base = a.clone();
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            e >>= 1;
            if e > 0 {
                base = self.mul(&base, &base);
            }
        }
        acc
    }
}

/// The field of rationals as a ring context.
#[derive(Clone, Copy, Debug, Default)]
pub struct RatField;

impl Ring<crate::rational::Rat> for RatField {
    fn zero(&self) -> crate::rational::Rat {
        num_traits::Zero::zero()
    }
    fn one(&self) -> crate::rational::Rat {
        num_traits::One::one()
    }
    fn from_i64(&self, n: i64) -> crate::rational::Rat {
        crate::rational::rat_i64(n)
    }
    fn is_zero(&self, a: &crate::rational::Rat) -> bool {
        num_traits::Zero::is_zero(a)
    }
    fn neg(&self, a: &crate::rational::Rat) -> crate::rational::Rat {
        -a
    }
    fn add(&self, a: &crate::rational::Rat, b: &crate::rational::Rat) -> crate::rational::Rat {
        a + b
    }
    fn mul(&self, a: &crate::rational::Rat, b: &crate::rational::Rat) -> crate::rational::Rat {
        a * b
    }
    fn inv(&self, a: &crate::rational::Rat) -> Result<crate::rational::Rat> {
        if self.is_zero(a) {
            Err(crate::error::AlgError::NotInvertible {
                detail: alloc::string::String::from("division by zero"),
            })
        } else {
            Ok(self.one() / a)
        }
    }
}
