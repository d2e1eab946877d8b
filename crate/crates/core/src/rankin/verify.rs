//! L-factors of pairs and the end-to-end check of the test-vector identity
//! `I = mu (q - 1)(q^{n/e} - 1) L(X, pi1, pi2)`.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use super::engine::{rankin_selberg_i, CellPoint, EngineConfig, KIntegral, Phi, RsIntegral};
use super::oracle::{oracle_check, OracleReport};
use crate::arith::{euler_normalize, CycNumber, EulerFactor, RationalFunction};
use crate::error::{Error, Result};
use crate::padic::scalar::{self, p_pow, rat};
use crate::padic::PadicMatrix;
use crate::types::{support_decompose, Family, SimpleType, WhittakerEvaluator};

fn same_shape(t1: &SimpleType, t2: &SimpleType) -> Result<()> {
    if t1.family() != t2.family() || t1.q() != t2.q() || t1.n() != t2.n() {
        return Err(Error::FamilyMismatch);
    }
    Ok(())
}

/// `type2` is an unramified twist of the contragredient of `type1`.
pub fn is_dual_up_to_twist(t1: &SimpleType, t2: &SimpleType) -> Result<bool> {
    same_shape(t1, t2)?;
    Ok(match t1.family() {
        Family::DepthZero => {
            let q = t1.q() as i64;
            let order = q * q - 1;
            let k1 = t1.theta().unwrap().index() as i64;
            let k2 = t2.theta().unwrap().index() as i64;
            (k1 + k2).rem_euclid(order) == 0 || (q * k1 + k2).rem_euclid(order) == 0
        }
        Family::Ramified => {
            let order = t1.q() as i64 - 1;
            (t1.sigma().unwrap() + t2.sigma().unwrap()).rem_euclid(order) == 0
        }
    })
}

/// The value `chi(p)^{n/e}` for the unramified `chi` with
/// `pi2 = chi pi1^dual`, after twisting `pi2` by `c`.
fn twist_constant(
    t1: &SimpleType,
    t2: &SimpleType,
    twist: Option<&CycNumber>,
) -> Result<CycNumber> {
    let t2n = t2.normalized_for(-t1.beta_sign())?;
    let mut a = t1.a() * t2n.a();
    if let Some(c) = twist {
        a = a * c.pow((t1.n() / t1.e()) as i64);
    }
    Ok(a)
}

/// `L(X, pi1, pi2 twisted by c)`: trivial unless the pair is dual up to an
/// unramified twist, else `1 / (1 - a X^{n/e})`.
pub fn l_factor(
    t1: &SimpleType,
    t2: &SimpleType,
    twist: Option<&CycNumber>,
) -> Result<EulerFactor<CycNumber>> {
    if !is_dual_up_to_twist(t1, t2)? {
        return Ok(EulerFactor::trivial(&CycNumber::one()));
    }
    let a = twist_constant(t1, t2, twist)?;
    Ok(EulerFactor::simple(a, (t1.n() / t1.e()) as i64))
}

/// The evaluators used for a pair: the `psi`-model of `type1` and the
/// `psi^-1`-model of `type2`, optionally twisted.
pub fn pair_evaluators(
    t1: &Arc<SimpleType>,
    t2: &Arc<SimpleType>,
    twist: Option<&CycNumber>,
) -> Result<(WhittakerEvaluator, WhittakerEvaluator)> {
    same_shape(t1, t2)?;
    let s = t1.beta_sign();
    let w1 = WhittakerEvaluator::model(t1.clone(), s)?;
    let mut w2 = WhittakerEvaluator::model(t2.normalized_for(-s)?, -s)?;
    if let Some(c) = twist {
        w2 = w2.with_twist(c.clone());
    }
    Ok((w1, w2))
}

/// `r = q^k` for an integer `k`.
pub fn q_power(r: &BigRational, q: u64) -> Option<i64> {
    if !r.is_positive() {
        return None;
    }
    let v = scalar::val(r, q)?;
    (*r == p_pow(q, v)).then_some(v)
}

#[derive(Clone, Debug, Serialize)]
pub struct SupportChecks {
    pub points: usize,
    pub violations_1: usize,
    pub violations_2: usize,
    pub violations_3: usize,
}

impl SupportChecks {
    pub fn passed(&self) -> bool {
        self.violations_1 + self.violations_2 + self.violations_3 == 0
    }
}

/// The index `i` in `0..e` with `row` a bottom row of `k_i J`.
fn support_index(ty: &SimpleType, row: (u64, u64)) -> Option<i64> {
    let p = ty.p();
    match ty.family() {
        Family::DepthZero => Some(0),
        Family::Ramified => {
            if !row.1.is_multiple_of(p) {
                Some(0)
            } else if !row.0.is_multiple_of(p) {
                Some(1)
            } else {
                None
            }
        }
    }
}

/// `kappa = p_kappa k_i j_kappa` with `p_kappa` in `P cap K`.
fn k_i_witness(ty: &SimpleType, kappa: &PadicMatrix, i: i64) -> (PadicMatrix, PadicMatrix) {
    let (c, d) = (kappa.get(1, 0).clone(), kappa.get(1, 1).clone());
    let zero = rat(0);
    let (k_i, j) = match (ty.family(), i) {
        (Family::DepthZero, _) => (PadicMatrix::identity(2), kappa.clone()),
        (_, 0) => (
            PadicMatrix::identity(2),
            PadicMatrix::new(2, vec![d.clone(), zero, c, d]),
        ),
        _ => (
            PadicMatrix::from_ints(2, &[0, 1, 1, 0]),
            PadicMatrix::new(2, vec![c.clone(), d, zero, c]),
        ),
    };
    let p_kappa = kappa.mul(&k_i.mul(&j).inverse().expect("invertible"));
    (p_kappa, j)
}

fn check_point(
    ty: &SimpleType,
    kappa: &PadicMatrix,
    pt: &CellPoint,
    checks: &mut SupportChecks,
) -> Result<()> {
    let p = ty.p();
    let ne = (ty.n() / ty.e()) as i64;
    let g = PadicMatrix::diag(&[p_pow(p, pt.l) * rat(pt.eps as i64), rat(1)]).mul(kappa);
    let Some(sd) = support_decompose(ty, &g)? else {
        checks.violations_1 += 1;
        return Ok(());
    };
    let i = sd.i;
    if !(0..ty.e() as i64).contains(&i) || pt.l != i * ne {
        checks.violations_1 += 1;
        return Ok(());
    }
    if support_index(ty, pt.row) != Some(i) {
        checks.violations_2 += 1;
        return Ok(());
    }
    let (p_kappa, _) = k_i_witness(ty, kappa, i);
    let p_i = match (ty.family(), i) {
        (Family::Ramified, 1) => PadicMatrix::diag(&[rat(p as i64), rat(1)]),
        _ => PadicMatrix::identity(2),
    };
    let m = PadicMatrix::diag(&[p_pow(p, pt.l) * rat(pt.eps as i64), rat(1)])
        .mul(&p_kappa)
        .mul(&p_i.inverse().unwrap());
    let mirabolic = m.get(1, 0).is_zero() && m.get(1, 1).is_one();
    let torus = PadicMatrix::diag(&[m.get(0, 0).clone(), rat(1)]);
    if !mirabolic || !ty.in_j(&torus) {
        checks.violations_3 += 1;
    }
    Ok(())
}

/// The three support conditions on every evaluation point with a nonzero value.
pub fn support_checks(t1: &SimpleType, t2: &SimpleType, k: &KIntegral) -> Result<SupportChecks> {
    let kappas: BTreeMap<(u64, u64), &PadicMatrix> =
        k.cells.iter().map(|c| (c.row, &c.kappa)).collect();
    let mut checks = SupportChecks {
        points: 0,
        violations_1: 0,
        violations_2: 0,
        violations_3: 0,
    };
    for pt in &k.points {
        let kappa = kappas[&pt.row];
        if !pt.w1.is_zero() {
            checks.points += 1;
            check_point(t1, kappa, pt, &mut checks)?;
        }
        if !pt.w2.is_zero() {
            checks.points += 1;
            check_point(t2, kappa, pt, &mut checks)?;
        }
    }
    Ok(checks)
}

/// Representatives of `J^1 / K^m` as integer matrices.
fn j1_reps(ty: &SimpleType, m: u32) -> Vec<[u64; 4]> {
    let p = ty.p();
    let pm = p.pow(m);
    let mut out = Vec::new();
    match ty.family() {
        Family::DepthZero => {
            let step = p;
            let r: Vec<u64> = (0..pm).step_by(step as usize).collect();
            for &a in &r {
                for &b in &r {
                    for &c in &r {
                        for &d in &r {
                            out.push([(1 + a) % pm, b, c, (1 + d) % pm]);
                        }
                    }
                }
            }
        }
        Family::Ramified => {
            let pp: Vec<u64> = (0..pm).step_by(p as usize).collect();
            for &a in &pp {
                for &b in &pp {
                    for c in 0..pm {
                        for &d in &pp {
                            out.push([(1 + a) % pm, b, c, (1 + d) % pm]);
                        }
                    }
                }
            }
        }
    }
    out
}

#[derive(Clone, Debug, Serialize)]
pub struct CoefficientRow {
    pub i: i64,
    pub c_i: CycNumber,
    pub q_power: String,
    pub volume: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct Diagnostics {
    /// `a = W1(varpi_E) W2(varpi_E)`.
    pub a: CycNumber,
    pub lambda_vol: Option<String>,
    pub f_i_constant: bool,
    pub mu: Option<String>,
    pub c_i_shape: bool,
    pub u: Option<String>,
    pub volume_identity: bool,
    pub rows: Vec<CoefficientRow>,
}

fn as_q_power(x: &CycNumber, q: u64) -> Option<BigRational> {
    let r = x.as_rational()?;
    q_power(&r, q).map(|_| r)
}

/// Constancy of `F_i`, the shape of `c_i` and the coset volumes for a dual pair.
pub fn diagnostics(
    t1: &SimpleType,
    w1: &WhittakerEvaluator,
    w2: &WhittakerEvaluator,
    k: &KIntegral,
) -> Result<Diagnostics> {
    let p = k.p;
    let q = p;
    let e = k.e as i64;
    let ne = (k.n / k.e) as i64;
    let m = k.level;
    let pm = p.pow(m);
    let varpi = t1.varpi_e();
    let a = w1.eval(varpi)? * w2.eval(varpi)?;
    let qne1 = rat(q.pow(ne as u32) as i64 - 1);
    let vol_km = p_pow(p, -((m as i64 - 1) * (k.n * k.n) as i64));
    let reps = j1_reps(t1, m);
    let zero = CycNumber::zero();

    let mut lambda: Option<BigRational> = None;
    let mut f_ok = true;
    for i in 0..e {
        let l = i * ne;
        let expect_scale = a.pow(i);
        for cell in &k.cells {
            let (c, d) = cell.row;
            let f: CycNumber = reps
                .iter()
                .map(|j| {
                    let r = ((c * j[0] + d * j[2]) % pm, (c * j[1] + d * j[3]) % pm);
                    k.b.get(&r).and_then(|b| b.get(&l)).unwrap_or(&zero).clone()
                })
                .sum::<CycNumber>()
                .scale(&vol_km);
            if support_index(t1, cell.row) == Some(i) {
                let Some(lv) = f
                    .clone()
                    .div_checked(&expect_scale)
                    .and_then(|x| as_q_power(&x, q))
                else {
                    f_ok = false;
                    continue;
                };
                match &lambda {
                    None => lambda = Some(lv),
                    Some(l0) if *l0 != lv => f_ok = false,
                    _ => {}
                }
            } else if !f.is_zero() {
                f_ok = false;
            }
        }
    }

    let mut mu: Option<BigRational> = None;
    let mut u: Option<BigRational> = None;
    let mut c_ok = true;
    let mut v_ok = true;
    let mut rows = Vec::new();
    for i in 0..e {
        let c_i = k.slice_integral(i * ne);
        let qi = p_pow(q, i * ne);
        let mu_i = c_i
            .scale(&(&qi / &qne1))
            .div_checked(&a.pow(i))
            .and_then(|x| as_q_power(&x, q));
        match (&mu, mu_i) {
            (_, None) => c_ok = false,
            (None, Some(x)) => mu = Some(x),
            (Some(m0), Some(x)) if *m0 != x => c_ok = false,
            _ => {}
        }
        let volume: BigRational = k
            .cells
            .iter()
            .filter(|c| support_index(t1, c.row) == Some(i))
            .map(|c| c.volume.clone())
            .sum();
        let u_i = &volume * &qi / &qne1;
        match (&u, q_power(&u_i, q)) {
            (_, None) => v_ok = false,
            (None, Some(_)) => u = Some(u_i),
            (Some(u0), Some(_)) if *u0 != u_i => v_ok = false,
            _ => {}
        }
        rows.push(CoefficientRow {
            i,
            c_i,
            q_power: qi.to_string(),
            volume: volume.to_string(),
        });
    }
    // c_i vanishes for i outside 0..e.
    for l in k.poly.terms().map(|(d, _)| d) {
        if l < 0 || l >= e * ne || l % ne != 0 {
            c_ok = false;
        }
    }
    Ok(Diagnostics {
        a,
        lambda_vol: lambda.as_ref().map(|x| x.to_string()),
        f_i_constant: f_ok && lambda.is_some(),
        mu: mu.as_ref().map(|x| x.to_string()),
        c_i_shape: c_ok && mu.is_some(),
        u: u.as_ref().map(|x| x.to_string()),
        volume_identity: v_ok && u.is_some(),
        rows,
    })
}

#[derive(Clone, Debug, Default)]
pub struct VerifyConfig {
    pub engine: EngineConfig,
    pub twist: Option<CycNumber>,
    /// Compare `c_k` with the brute-force oracle for `k` in this range.
    pub oracle: Option<(i64, i64)>,
    pub bessel_pairs: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct Checks {
    pub bessel_identities: bool,
    pub support: bool,
    pub f_i_constant: Option<bool>,
    pub c_i_shape: Option<bool>,
    pub coset_volumes: Option<bool>,
    pub main_identity: Option<bool>,
    pub oracle: Option<bool>,
}

#[derive(Clone, Debug, Serialize)]
pub struct VerificationReport {
    pub type1: serde_json::Value,
    pub type2: serde_json::Value,
    pub twist: Option<CycNumber>,
    pub window: u32,
    pub integral: RationalFunction<CycNumber>,
    pub integral_text: String,
    pub expected_factor: String,
    pub applicable: bool,
    /// `I / ((q - 1)(q^{n/e} - 1) L)` when it is a power of `q`.
    pub mu: Option<String>,
    pub u: Option<String>,
    #[serde(rename = "lambdaVol")]
    pub lambda_vol: Option<String>,
    pub checks: Checks,
    pub support: SupportChecks,
    pub diagnostics: Option<Diagnostics>,
    pub oracle: Option<OracleReport>,
    pub notes: Vec<String>,
    pub passed: bool,
}

impl VerificationReport {
    /// CSV of `(i, c_i, q^{in/e})`.
    pub fn coefficient_csv(&self) -> String {
        let mut s = String::from("i,c_i,q_pow\n");
        if let Some(d) = &self.diagnostics {
            for r in &d.rows {
                s.push_str(&format!("{},\"{}\",{}\n", r.i, r.c_i, r.q_power));
            }
        }
        s
    }
}

/// Runs the engine on the pair and checks every identity on the way.
pub fn verify_main_theorem(
    t1: &Arc<SimpleType>,
    t2: &Arc<SimpleType>,
    cfg: &VerifyConfig,
) -> Result<VerificationReport> {
    let twist = cfg.twist.as_ref();
    let (w1, w2) = pair_evaluators(t1, t2, twist)?;
    let expected = l_factor(t1, t2, twist)?;
    let applicable = !expected.is_trivial();
    let RsIntegral {
        value, k_integral, ..
    } = rankin_selberg_i(&w1, &w2, Phi::LatticeIndicator, &cfg.engine)?;
    let q = t1.q();
    let ne = (t1.n() / t1.e()) as u32;
    let mut notes = Vec::new();

    let pairs = cfg.bessel_pairs.max(1);
    let b1 = t1.bessel_suite(pairs, 17)?;
    let b2 = w2.simple_type().bessel_suite(pairs, 19)?;
    let bessel_ok = b1.passed() && b2.passed();

    let support = support_checks(t1, w2.simple_type(), &k_integral)?;

    let mut mu = None;
    let mut theorem = None;
    let mut diag = None;
    if applicable {
        let scalar = CycNumber::from_integer(((q - 1) * (q.pow(ne) - 1)) as i64);
        let ok = match euler_normalize(&value) {
            Ok((factor, c, 0)) if factor == expected => {
                let m = (c / scalar).as_rational();
                match m.as_ref().and_then(|r| q_power(r, q)) {
                    Some(_) => {
                        mu = m;
                        true
                    }
                    None => {
                        notes.push("scalar is not (q-1)(q^{n/e}-1) times a power of q".into());
                        false
                    }
                }
            }
            Ok((factor, _, shift)) => {
                notes.push(format!(
                    "Euler part {factor} with shift {shift}, expected {expected}"
                ));
                false
            }
            Err(e) => {
                notes.push(format!("integral is not c X^m times an Euler factor: {e}"));
                false
            }
        };
        theorem = Some(ok);
        diag = Some(diagnostics(t1, &w1, &w2, &k_integral)?);
    } else if !value.is_zero() {
        notes.push("non-dual pair with a nonzero integral".into());
    } else {
        notes.push("L = 1: the identity does not apply and I = 0".into());
    }
    if let (Some(d), Some(m)) = (&diag, &mu) {
        if d.mu.as_deref() != Some(m.to_string().as_str()) {
            notes.push("mu from c_0 differs from mu of the integral".into());
        }
    }

    let oracle = match cfg.oracle {
        Some((lo, hi)) => Some(oracle_check(&w1, &w2, &cfg.engine, lo, hi)?),
        None => None,
    };
    let checks = Checks {
        bessel_identities: bessel_ok,
        support: support.passed(),
        f_i_constant: diag.as_ref().map(|d| d.f_i_constant),
        c_i_shape: diag.as_ref().map(|d| d.c_i_shape),
        coset_volumes: diag.as_ref().map(|d| d.volume_identity),
        main_identity: theorem,
        oracle: oracle.as_ref().map(|o| o.all_agree),
    };
    let mu_consistent = match (&diag, &mu) {
        (Some(d), Some(m)) => d.mu.as_deref() == Some(m.to_string().as_str()),
        _ => true,
    };
    let passed = checks.bessel_identities
        && checks.support
        && checks.f_i_constant.unwrap_or(true)
        && checks.c_i_shape.unwrap_or(true)
        && checks.coset_volumes.unwrap_or(true)
        && checks.main_identity.unwrap_or(value.is_zero())
        && checks.oracle.unwrap_or(true)
        && mu_consistent;
    Ok(VerificationReport {
        type1: t1.to_json(),
        type2: t2.to_json(),
        twist: cfg.twist.clone(),
        window: cfg.engine.window,
        integral_text: value.to_string(),
        integral: value,
        expected_factor: expected.to_string(),
        applicable,
        mu: mu.map(|m| m.to_string()),
        u: diag.as_ref().and_then(|d| d.u.clone()),
        lambda_vol: diag.as_ref().and_then(|d| d.lambda_vol.clone()),
        checks,
        support,
        diagnostics: diag,
        oracle,
        notes,
        passed,
    })
}
