//! The character `psi_t` of `N` and its extension to `U = (N cap J) H^1`.

use std::sync::Arc;

use crate::arith::CycNumber;
use crate::error::{Error, Result};
use crate::padic::scalar::{self, rat, PadicScalar};
use crate::padic::{theta_eval, PadicMatrix};

use super::{Family, SimpleType};

/// `psi_t(u) = theta(sign * sum_i t_i u_{i,i+1})`.
#[derive(Clone, Debug)]
pub struct PsiT {
    t: Vec<PadicScalar>,
    p: u64,
    sign: i64,
    cap: u32,
}

impl PsiT {
    pub fn new(t: Vec<PadicScalar>, p: u64, sign: i64, cap: u32) -> Self {
        Self { t, p, sign, cap }
    }

    pub fn sign(&self) -> i64 {
        self.sign
    }

    pub fn t(&self) -> &[PadicScalar] {
        &self.t
    }

    pub fn inverse(&self) -> Self {
        Self {
            sign: -self.sign,
            ..self.clone()
        }
    }

    /// The argument of `theta`; `u` must be upper unipotent.
    pub fn argument(&self, u: &PadicMatrix) -> PadicScalar {
        self.t
            .iter()
            .enumerate()
            .fold(rat(0), |acc, (i, t)| acc + t * u.get(i, i + 1))
            * rat(self.sign)
    }

    pub fn eval(&self, u: &PadicMatrix) -> Result<CycNumber> {
        if !u.is_upper_unipotent() {
            return Err(Error::InvalidParameter(
                "psi_t needs an upper unipotent matrix".into(),
            ));
        }
        theta_eval(&self.argument(u), self.p, self.cap)
    }
}

fn in_n_cap_j(ty: &SimpleType, n: &PadicMatrix) -> bool {
    n.is_upper_unipotent() && ty.in_j(n)
}

/// `psi_t(n) theta_beta(h)` for `u = n h` with `n` in `N cap J` and `h` in
/// `H^1`.
pub fn extended_psi_factored(
    ty: &SimpleType,
    sign: i64,
    n: &PadicMatrix,
    h: &PadicMatrix,
) -> Result<CycNumber> {
    if !in_n_cap_j(ty, n) || !ty.in_j1(h) {
        return Err(Error::NotInU);
    }
    if !ty.compatible_with(sign) {
        return Err(Error::NondegeneracyFailure(format!(
            "type is not compatible with psi^{sign}"
        )));
    }
    Ok(ty.psi_t(sign).eval(n)? * ty.theta_beta(h)?)
}

/// The extended character on `u` in `U`, through a canonical factorization:
/// `U = H^1` for the ramified family and `U = N(Z_p) K^1` for depth zero.
pub fn extended_psi_on_u(ty: &Arc<SimpleType>, sign: i64, u: &PadicMatrix) -> Result<CycNumber> {
    match ty.family() {
        Family::Ramified => extended_psi_factored(ty, sign, &PadicMatrix::identity(2), u),
        Family::DepthZero => {
            let p = ty.p();
            if !u.in_k(p) {
                return Err(Error::NotInU);
            }
            let (a, b, c, d) = (u.get(0, 0), u.get(0, 1), u.get(1, 0), u.get(1, 1));
            let one = rat(1);
            let unipotent_mod_p = scalar::in_ideal(&(a - &one), p, 1)
                && scalar::in_ideal(&(d - &one), p, 1)
                && scalar::in_ideal(c, p, 1);
            if !unipotent_mod_p {
                return Err(Error::NotInU);
            }
            let n = PadicMatrix::unipotent(2, std::slice::from_ref(b));
            let h = n.inverse().expect("unipotent").mul(u);
            extended_psi_factored(ty, sign, &n, &h)
        }
    }
}
