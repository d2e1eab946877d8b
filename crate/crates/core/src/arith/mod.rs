//! Exact scalars: cyclotomic numbers, Laurent polynomials and rational
//! functions over them, Euler factors, and reduction modulo a prime `ell`.

pub mod cyclotomic;
pub mod expr;
pub mod int;
pub mod laurent;
pub mod ratfunc;
pub mod residue;
pub mod serial;

use std::fmt;

pub use cyclotomic::{cyc_embed_root, CycNumber};
pub use laurent::LaurentPoly;
pub use ratfunc::{euler_normalize, series_coefficients, EulerFactor, RationalFunction};
pub use residue::{reduce_mod_ell, ReductionMap, ResidueField, ResidueScalar};

/// Field elements that carry their own context (modulus, residue field), so
/// neutral elements are produced from an existing value.
pub trait Scalar: Clone + PartialEq + fmt::Debug + fmt::Display + Send + Sync {
    fn zero_like(&self) -> Self;
    fn one_like(&self) -> Self;
    fn is_zero(&self) -> bool;
    fn add_ref(&self, rhs: &Self) -> Self;
    fn sub_ref(&self, rhs: &Self) -> Self;
    fn mul_ref(&self, rhs: &Self) -> Self;
    fn neg_ref(&self) -> Self;
    fn inv(&self) -> Option<Self>;

    fn is_one(&self) -> bool {
        *self == self.one_like()
    }

    fn div_ref(&self, rhs: &Self) -> Option<Self> {
        rhs.inv().map(|r| self.mul_ref(&r))
    }

    fn pow_u(&self, mut e: u64) -> Self {
        let mut acc = self.one_like();
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul_ref(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul_ref(&base);
            }
        }
        acc
    }
}
