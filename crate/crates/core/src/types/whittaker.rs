//! Explicit Whittaker functions supported on `N bold J`.

use std::sync::Arc;

use crate::arith::CycNumber;
use crate::error::{Error, Result};
use crate::padic::scalar::{self, p_pow};
use crate::padic::{iwasawa_nak, PadicMatrix};

use super::{pow_matrix, Family, SimpleType};

/// `g = u varpi_E^i j0` with `u` in `N` and `j0` in `J`.
#[derive(Clone, Debug, PartialEq)]
pub struct Support {
    pub u: PadicMatrix,
    pub i: i64,
    pub j0: PadicMatrix,
}

/// Decomposes `g` along `N bold J`, or `None` if `g` lies outside.
pub fn support_decompose(ty: &SimpleType, g: &PadicMatrix) -> Result<Option<Support>> {
    let p = ty.p();
    if g.size() != ty.n() {
        return Err(Error::InvalidParameter(
            "matrix size does not match the type".into(),
        ));
    }
    let i = g.val_det(p).ok_or(Error::Singular)?;
    match ty.family() {
        Family::DepthZero => {
            let d = iwasawa_nak(g, p);
            let a = d.valuations[0];
            if d.valuations.iter().any(|&v| v != a) {
                return Ok(None);
            }
            Ok(Some(Support {
                u: d.n,
                i: a,
                j0: d.k,
            }))
        }
        Family::Ramified => {
            let s = i.div_euclid(2);
            let (num, den) = if i % 2 == 0 {
                (g.get(0, 1), g.get(1, 1))
            } else {
                (g.get(0, 0), g.get(1, 0))
            };
            if scalar::val(den, p).is_none() {
                return Ok(None);
            }
            let x0 = num / den;
            let u = PadicMatrix::unipotent(2, std::slice::from_ref(&x0));
            let mut h = PadicMatrix::unipotent(2, &[-x0])
                .mul(g)
                .scale(&p_pow(p, -s));
            if i % 2 != 0 {
                h = ty.varpi_e().inverse().ok_or(Error::Singular)?.mul(&h);
            }
            if !ty.in_j(&h) {
                return Ok(None);
            }
            let i = if i % 2 == 0 { 2 * s } else { 2 * s + 1 };
            Ok(Some(Support { u, i, j0: h }))
        }
    }
}

/// A Whittaker function of the type: either the `psi^sign` model
/// `W(u j) = psi_t^sign(u) J(j)`, or the contragredient function
/// `W(u j) = psi_t^-sign(u) J(j^-1)`, optionally twisted by
/// `c^{v(det g)}`.
#[derive(Clone, Debug)]
pub struct WhittakerEvaluator {
    ty: Arc<SimpleType>,
    sign: i64,
    dual: bool,
    twist: Option<CycNumber>,
}

impl WhittakerEvaluator {
    pub fn model(ty: Arc<SimpleType>, sign: i64) -> Result<Self> {
        Self::build(ty, sign, false)
    }

    /// Whittaker function for `psi^-sign` of the contragredient, built from
    /// the `psi^sign` Bessel function of `ty`.
    pub fn contragredient(ty: Arc<SimpleType>, sign: i64) -> Result<Self> {
        Self::build(ty, sign, true)
    }

    fn build(ty: Arc<SimpleType>, sign: i64, dual: bool) -> Result<Self> {
        if sign != 1 && sign != -1 {
            return Err(Error::InvalidParameter("sign must be 1 or -1".into()));
        }
        if !ty.compatible_with(sign) {
            return Err(Error::NondegeneracyFailure(format!(
                "type with beta sign {} has no psi^{sign} model",
                ty.beta_sign()
            )));
        }
        Ok(Self {
            ty,
            sign,
            dual,
            twist: None,
        })
    }

    pub fn with_twist(mut self, c: CycNumber) -> Self {
        self.twist = Some(c);
        self
    }

    pub fn simple_type(&self) -> &Arc<SimpleType> {
        &self.ty
    }

    /// The sign `s` with `W(ug) = psi^s(u) W(g)`.
    pub fn psi_sign(&self) -> i64 {
        if self.dual {
            -self.sign
        } else {
            self.sign
        }
    }

    pub fn is_contragredient(&self) -> bool {
        self.dual
    }

    pub fn twist(&self) -> Option<&CycNumber> {
        self.twist.as_ref()
    }

    /// `W` is right invariant under `K^level`.
    pub fn level(&self) -> u32 {
        self.ty.level()
    }

    /// `W(p g) = omega(p) W(g)`: `A^e` for the model, `A^-e` for the
    /// contragredient, times `c^n` for a twist.
    pub fn central_at_p(&self) -> CycNumber {
        let e = self.ty.e() as i64;
        let mut w = self.ty.a().pow(if self.dual { -e } else { e });
        if let Some(c) = &self.twist {
            w = w * c.pow(self.ty.n() as i64);
        }
        w
    }

    pub fn eval(&self, g: &PadicMatrix) -> Result<CycNumber> {
        let Some(s) = support_decompose(&self.ty, g)? else {
            return Ok(CycNumber::zero());
        };
        let psi = self.ty.psi_t(self.psi_sign()).eval(&s.u)?;
        let bessel = if self.dual {
            let (i, j0) = self.ty.invert_in_bold_j(s.i, &s.j0)?;
            self.ty.bessel(self.sign, i, &j0)?
        } else {
            self.ty.bessel(self.sign, s.i, &s.j0)?
        };
        let mut w = psi * bessel;
        if let Some(c) = &self.twist {
            w = w * c.pow(g.val_det(self.ty.p()).ok_or(Error::Singular)?);
        }
        Ok(w)
    }
}

/// `psi^sign` model of `ty` at `g`.
pub fn whittaker_eval(ty: &Arc<SimpleType>, sign: i64, g: &PadicMatrix) -> Result<CycNumber> {
    WhittakerEvaluator::model(ty.clone(), sign)?.eval(g)
}

/// `varpi_E^i`.
pub fn varpi_power(ty: &SimpleType, i: i64) -> PadicMatrix {
    pow_matrix(ty.varpi_e(), i).expect("varpi_E is invertible")
}
