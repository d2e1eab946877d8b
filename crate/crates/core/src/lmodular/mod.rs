//! Reduction modulo `ell` of the test-vector identity.

use std::sync::Arc;

use serde::Serialize;

use crate::arith::int::{is_prime, lcm};
use crate::arith::{
    euler_normalize, CycNumber, EulerFactor, LaurentPoly, RationalFunction, ReductionMap,
    ResidueScalar, Scalar,
};
use crate::error::{Error, Result};
use crate::rankin::{
    is_dual_up_to_twist, l_factor, pair_evaluators, rankin_selberg_i, EngineConfig, Phi,
};
use crate::types::SimpleType;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BanalityVerdict {
    pub ell: u64,
    pub q: u64,
    pub n: usize,
    pub e: usize,
    pub banal: bool,
    /// `(q - 1)(q^{n/e} - 1) mod ell`.
    pub witness: u64,
}

pub fn banal_check(ty: &SimpleType, ell: u64) -> Result<BanalityVerdict> {
    if !is_prime(ell) {
        return Err(Error::BadEll(ell));
    }
    let q = ty.q();
    if ell == q {
        return Err(Error::EllEqualsP(ell));
    }
    let (n, e) = (ty.n(), ty.e());
    let qm = q % ell;
    let mut qne = 1;
    for _ in 0..n / e {
        qne = qne * qm % ell;
    }
    let witness = (qm + ell - 1) % ell * ((qne + ell - 1) % ell) % ell;
    Ok(BanalityVerdict {
        ell,
        q,
        n,
        e,
        banal: witness != 0,
        witness,
    })
}

fn modulus_of<'a>(xs: impl IntoIterator<Item = &'a CycNumber>) -> u64 {
    xs.into_iter().fold(1, |m, x| lcm(m, x.compact().modulus()))
}

fn poly_modulus(p: &LaurentPoly<CycNumber>) -> u64 {
    modulus_of(p.terms().map(|(_, c)| c))
}

/// The reduction of `L` for the factor `choice` of the cyclotomic
/// polynomial modulo `ell`.
pub fn reduce_euler_factor(
    l: &EulerFactor<CycNumber>,
    ell: u64,
    choice: usize,
) -> Result<EulerFactor<ResidueScalar>> {
    let map = ReductionMap::new(poly_modulus(l.inverse_poly()), ell, choice)?;
    reduce_factor_with(l, &map)
}

fn reduce_factor_with(
    l: &EulerFactor<CycNumber>,
    map: &ReductionMap,
) -> Result<EulerFactor<ResidueScalar>> {
    l.try_map(|c| map.reduce(c))
}

#[derive(Clone, Debug, Serialize)]
pub struct CorollaryReport {
    pub ell: u64,
    pub banal: bool,
    pub witness: u64,
    pub reduced_factor: String,
    #[serde(rename = "match")]
    pub matches: bool,
    pub integral_values: bool,
    pub commutes: bool,
    pub cells: usize,
    pub reduced_integral: String,
    pub reduced_scalar: String,
    pub scalar_nonzero: bool,
    pub notes: Vec<String>,
}

/// The corollary `L(X, r(pi1), r(pi2)) = r(L(X, pi1, pi2))` for a banal pair
/// dual up to twist.
pub fn verify_corollary(
    t1: &Arc<SimpleType>,
    t2: &Arc<SimpleType>,
    ell: u64,
    choice: usize,
    twist: Option<&CycNumber>,
    cfg: &EngineConfig,
) -> Result<CorollaryReport> {
    let v1 = banal_check(t1, ell)?;
    let v2 = banal_check(t2, ell)?;
    if !v1.banal || !v2.banal {
        return Err(Error::NonBanal {
            ell,
            witness: v1.witness,
        });
    }
    if !is_dual_up_to_twist(t1, t2)? {
        return Err(Error::InvalidParameter(
            "the corollary needs a pair dual up to an unramified twist".into(),
        ));
    }
    let (w1, w2) = pair_evaluators(t1, t2, twist)?;
    let rs = rankin_selberg_i(&w1, &w2, Phi::LatticeIndicator, cfg)?;
    let l = l_factor(t1, t2, twist)?;
    let k = &rs.k_integral;
    let mut notes = Vec::new();

    let modulus = [
        modulus_of(k.points.iter().flat_map(|p| [&p.w1, &p.w2])),
        poly_modulus(rs.value.numerator()),
        poly_modulus(rs.value.denominator()),
        poly_modulus(l.inverse_poly()),
        rs.omega.compact().modulus(),
    ]
    .into_iter()
    .fold(1, lcm);
    let map = ReductionMap::new(modulus, ell, choice)?;
    let r = |x: &CycNumber| map.reduce(x);
    let rq = |x: &num_rational::BigRational| map.reduce(&CycNumber::from_rational(x));

    let integral_values = k
        .points
        .iter()
        .all(|p| p.w1.is_integral_at(ell) && p.w2.is_integral_at(ell));
    if !integral_values {
        notes.push("a Whittaker value is not ell-integral".into());
    }

    // Cellwise: the sum of reduced terms against the reduced sum.
    let mut reduced_terms: Vec<(i64, ResidueScalar)> = Vec::new();
    for p in &k.points {
        let prod = r(&p.w1)?.mul_ref(&r(&p.w2)?);
        if !prod.is_zero() {
            reduced_terms.push((p.l, prod.mul_ref(&rq(&p.weight)?)));
        }
    }
    let cellwise = LaurentPoly::from_terms(reduced_terms);
    let reduced_poly = k.poly.try_map(|c| r(c))?;
    let mut commutes = cellwise == reduced_poly;

    let one = map.from_int(1);
    let z_red = RationalFunction::new(
        LaurentPoly::constant(map.from_int(k.p as i64 - 1)),
        LaurentPoly::from_terms([(0, one.clone()), (k.n as i64, r(&rs.omega)?.neg_ref())]),
    )?;
    let i_red = z_red.mul(&RationalFunction::from_laurent(cellwise, &one));
    match rs.value.try_map(|c| r(c)) {
        Ok(ri) => {
            if ri != i_red {
                commutes = false;
                notes.push("reduced integral differs from the reduction of the integral".into());
            }
        }
        Err(e) => {
            commutes = false;
            notes.push(format!("integral does not reduce: {e}"));
        }
    }

    let expected = reduce_factor_with(&l, &map)?;
    let (matches, reduced_scalar, scalar_nonzero) = match euler_normalize(&i_red) {
        Ok((factor, c, 0)) => {
            let nz = !c.is_zero();
            let scalar_ok = match euler_normalize(&rs.value) {
                Ok((_, c0, 0)) => r(&c0)? == c,
                _ => false,
            };
            if !scalar_ok {
                notes.push("reduced scalar is not the reduction of the scalar".into());
            }
            (factor == expected && nz && scalar_ok, c.to_string(), nz)
        }
        Ok((_, c, m)) => {
            notes.push(format!("reduced integral has a shift X^{m}"));
            (false, c.to_string(), !c.is_zero())
        }
        Err(e) => {
            notes.push(format!(
                "reduced integral is not an Euler factor multiple: {e}"
            ));
            (false, "0".into(), false)
        }
    };
    Ok(CorollaryReport {
        ell,
        banal: true,
        witness: v1.witness,
        reduced_factor: expected.to_string(),
        matches: matches && commutes && integral_values,
        integral_values,
        commutes,
        cells: k.points.len(),
        reduced_integral: i_red.to_string(),
        reduced_scalar,
        scalar_nonzero,
        notes,
    })
}

#[cfg(test)]
mod tests;
