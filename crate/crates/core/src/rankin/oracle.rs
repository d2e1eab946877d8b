//! Direct summation of `c_k = int_{N \ G^(k)} W1 W2 Phi(eta g) dg` over the
//! cells `N a_v kappa K^m`, independent of the mirabolic splitting.

use rayon::prelude::*;
use serde::Serialize;

use super::engine::{pair_shape, rankin_selberg_i, EngineConfig, Phi};
use crate::arith::{series_coefficients, CycNumber};
use crate::error::{Error, Result};
use crate::padic::scalar::{p_pow, rat};
use crate::padic::PadicMatrix;
use crate::types::WhittakerEvaluator;

const ORACLE_LIMIT: u64 = 1 << 20;

/// `GL_2(Z / p^m)` as integer lifts.
fn gl2_mod(p: u64, m: u32) -> Result<Vec<PadicMatrix>> {
    let pm = p.pow(m);
    let total = pm.pow(4);
    if total > ORACLE_LIMIT {
        return Err(Error::TooLarge(total as u128));
    }
    let mut out = Vec::new();
    for idx in 0..total {
        let e = [
            idx % pm,
            idx / pm % pm,
            idx / pm / pm % pm,
            idx / pm / pm / pm,
        ];
        let det = (e[0] * e[3]) as i64 - (e[1] * e[2]) as i64;
        if det.rem_euclid(p as i64) != 0 {
            out.push(PadicMatrix::from_ints(2, &e.map(|x| x as i64)));
        }
    }
    Ok(out)
}

/// The torus exponents `(v1, v2)` with `v1 + v2 = k`, `v2 >= 0` (so that
/// `Phi(eta g) = 1`) and `|v1 - v2| <= w`.
pub fn torus_exponents(k: i64, w: i64) -> Vec<(i64, i64)> {
    (0..=k.abs() + w)
        .map(|v2| (k - v2, v2))
        .filter(|(v1, v2)| (v1 - v2).abs() <= w)
        .collect()
}

pub fn c_k_bruteforce(
    w1: &WhittakerEvaluator,
    w2: &WhittakerEvaluator,
    phi: Phi,
    k: i64,
    m: u32,
    cfg: &EngineConfig,
) -> Result<CycNumber> {
    let Phi::LatticeIndicator = phi;
    let shape = pair_shape(w1, w2)?;
    if m < shape.m {
        return Err(Error::InvalidParameter(format!(
            "level {m} is below the level {} of the Whittaker functions",
            shape.m
        )));
    }
    let p = shape.p;
    let one = PadicMatrix::identity(2);
    w1.eval(&one)?;
    w2.eval(&one)?;
    let group = gl2_mod(p, m)?;
    let w = shape.e as i64 * cfg.window as i64;
    let mut total = CycNumber::zero();
    for (v1, v2) in torus_exponents(k, w) {
        let a = PadicMatrix::diag(&[p_pow(p, v1), p_pow(p, v2)]);
        let sum: CycNumber = group
            .par_iter()
            .map(|kappa| {
                let g = a.mul(kappa);
                let x = w1.eval(&g)?;
                if x.is_zero() {
                    return Ok(CycNumber::zero());
                }
                Ok(x * w2.eval(&g)?)
            })
            .collect::<Result<Vec<_>>>()?
            .into_iter()
            .sum();
        // vol_G(K^m) / (vol_N(N cap a K^m a^-1) * [N cap a^-1 K a : N cap a^-1 K^m a]).
        let m = m as i64;
        let weight = p_pow(p, -4 * (m - 1)) / p_pow(p, 1 - (m + v1 - v2)) / p_pow(p, m);
        total = total + sum.scale(&weight);
    }
    Ok(total)
}

#[derive(Clone, Debug, Serialize)]
pub struct OracleRow {
    pub k: i64,
    pub engine: CycNumber,
    pub oracle: CycNumber,
    pub agree: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct OracleReport {
    /// The engine uses `dp dz dk`, which is `(q - 1) dg`.
    pub measure_factor: i64,
    pub rows: Vec<OracleRow>,
    pub all_agree: bool,
}

/// Compares `c_k` from the engine with `(q - 1)` times the oracle for
/// `k` in `kmin..=kmax`.
pub fn oracle_check(
    w1: &WhittakerEvaluator,
    w2: &WhittakerEvaluator,
    cfg: &EngineConfig,
    kmin: i64,
    kmax: i64,
) -> Result<OracleReport> {
    let shape = pair_shape(w1, w2)?;
    let i = rankin_selberg_i(w1, w2, Phi::LatticeIndicator, cfg)?;
    let engine = series_coefficients(&i.value, kmin, kmax)?;
    let factor = shape.p as i64 - 1;
    let mut rows = Vec::new();
    for (k, e) in (kmin..=kmax).zip(engine) {
        let o = c_k_bruteforce(w1, w2, Phi::LatticeIndicator, k, shape.m, cfg)?;
        let agree = e == o.scale(&rat(factor));
        rows.push(OracleRow {
            k,
            engine: e,
            oracle: o,
            agree,
        });
    }
    let all_agree = rows.iter().all(|r| r.agree);
    Ok(OracleReport {
        measure_factor: factor,
        rows,
        all_agree,
    })
}
