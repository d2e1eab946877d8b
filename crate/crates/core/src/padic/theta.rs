//! The additive character `theta` of `Q_p`, trivial on `pZ_p` and
//! nontrivial on `Z_p`.

use super::scalar::{self, PadicScalar};
use crate::arith::CycNumber;
use crate::error::{Error, Result};

/// `theta(x) = zeta_{p^(m+1)}^(p^m x mod p^(m+1))` with `m = max(0, -v_p(x))`.
/// Arguments with `-v_p(x) > cap` are refused.
pub fn theta_eval(x: &PadicScalar, p: u64, cap: u32) -> Result<CycNumber> {
    let Some(v) = scalar::val(x, p) else {
        return Ok(CycNumber::one());
    };
    let m = (-v).max(0);
    if m > cap as i64 {
        return Err(Error::DepthExceeded { valuation: v, cap });
    }
    let y = x * scalar::p_pow(p, m);
    let modulus = p.pow(m as u32 + 1);
    let r = scalar::residue(&y, p, m as u32 + 1).expect("p^m x is integral");
    Ok(CycNumber::zeta(modulus, r as i64))
}
