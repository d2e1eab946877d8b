//! The Rankin-Selberg integral through the mirabolic/centre/`K` splitting.

use std::collections::BTreeMap;

use num_rational::BigRational;
use rayon::prelude::*;

use crate::arith::{CycNumber, LaurentPoly, RationalFunction};
use crate::error::{Error, Result};
use crate::padic::iwasawa::complete_row;
use crate::padic::scalar::{p_pow, rat};
use crate::padic::PadicMatrix;
use crate::types::WhittakerEvaluator;

/// The only test function supported: the indicator of `o^n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Phi {
    LatticeIndicator,
}

impl Phi {
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "1" | "1_o^n" | "lattice" => Ok(Phi::LatticeIndicator),
            _ => Err(Error::UnsupportedPhi),
        }
    }
}

/// A coset of `(K cap P) \ K` modulo `K^m`, given by its bottom row.
#[derive(Clone, Debug)]
pub struct IntegralCell {
    pub level: u32,
    pub row: (u64, u64),
    pub kappa: PadicMatrix,
    pub volume: BigRational,
}

/// Primitive rows modulo `p^m`; each cell has volume `q^{-(m-1)n}`.
pub fn k_cells(p: u64, m: u32) -> Vec<IntegralCell> {
    let pm = p.pow(m);
    let volume = p_pow(p, -2 * (m as i64 - 1));
    let mut out = Vec::new();
    for c in 0..pm {
        for d in 0..pm {
            if c % p == 0 && d % p == 0 {
                continue;
            }
            let kappa = complete_row(&[rat(c as i64), rat(d as i64)], p).expect("primitive");
            out.push(IntegralCell {
                level: m,
                row: (c, d),
                kappa,
                volume: volume.clone(),
            });
        }
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EngineConfig {
    /// Torus slices `l` range over `[-e N, e N]`.
    pub window: u32,
}

impl Default for EngineConfig {
    fn default() -> Self {
        Self { window: 2 }
    }
}

/// One evaluation point `diag(p^l eps, 1) kappa` with a nonzero value.
#[derive(Clone, Debug)]
pub struct CellPoint {
    pub row: (u64, u64),
    pub l: i64,
    pub eps: u64,
    pub w1: CycNumber,
    pub w2: CycNumber,
    /// Contribution of `w1 w2` to the coefficient of `X^l`.
    pub weight: BigRational,
}

pub(crate) struct PairShape {
    pub p: u64,
    pub n: usize,
    pub e: usize,
    pub m: u32,
}

pub(crate) fn pair_shape(w1: &WhittakerEvaluator, w2: &WhittakerEvaluator) -> Result<PairShape> {
    let (t1, t2) = (w1.simple_type(), w2.simple_type());
    if t1.p() != t2.p() || t1.n() != t2.n() {
        return Err(Error::FamilyMismatch);
    }
    if w1.psi_sign() != -w2.psi_sign() {
        return Err(Error::InvalidParameter(
            "the second Whittaker function must be for the inverse character".into(),
        ));
    }
    Ok(PairShape {
        p: t1.p(),
        n: t1.n(),
        e: t1.e().max(t2.e()),
        m: w1.level().max(w2.level()),
    })
}

fn units_mod(p: u64, m: u32) -> impl Iterator<Item = u64> {
    (1..p.pow(m)).filter(move |x| x % p != 0)
}

fn torus(p: u64, l: i64, eps: u64) -> PadicMatrix {
    PadicMatrix::diag(&[p_pow(p, l) * rat(eps as i64), rat(1)])
}

/// `b_l(rho(kappa) W1, rho(kappa) W2)` at one cell, returning the points
/// with a nonzero value of either function.
fn slice_points(
    w1: &WhittakerEvaluator,
    w2: &WhittakerEvaluator,
    shape: &PairShape,
    cell: &IntegralCell,
    l: i64,
) -> Result<Vec<CellPoint>> {
    let p = shape.p;
    let m = shape.m;
    let weight = &cell.volume * p_pow(p, l - (m as i64 - 1));
    let mut out = Vec::new();
    for eps in units_mod(p, m) {
        let g = torus(p, l, eps).mul(&cell.kappa);
        let v1 = w1.eval(&g)?;
        let v2 = w2.eval(&g)?;
        if !v1.is_zero() || !v2.is_zero() {
            out.push(CellPoint {
                row: cell.row,
                l,
                eps,
                w1: v1,
                w2: v2,
                weight: weight.clone(),
            });
        }
    }
    Ok(out)
}

/// `b_k(W1, W2)`: the integral over `N \ P^(k)`.
pub fn b_k(w1: &WhittakerEvaluator, w2: &WhittakerEvaluator, k: i64) -> Result<CycNumber> {
    let shape = pair_shape(w1, w2)?;
    let p = shape.p;
    let scale = p_pow(p, -(shape.m as i64 - 1));
    let mut acc = CycNumber::zero();
    for eps in units_mod(p, shape.m) {
        let g = torus(p, k, eps);
        acc = acc + w1.eval(&g)? * w2.eval(&g)?;
    }
    Ok(acc.scale(&scale))
}

/// `I_(0)(X, W1, W2) = sum_k b_k q^k X^k` over the window.
pub fn i0(
    w1: &WhittakerEvaluator,
    w2: &WhittakerEvaluator,
    cfg: &EngineConfig,
) -> Result<RationalFunction<CycNumber>> {
    let shape = pair_shape(w1, w2)?;
    let r = (shape.e as i64) * cfg.window as i64;
    let mut terms = Vec::new();
    for k in -r..=r {
        let b = b_k(w1, w2, k)?;
        if !b.is_zero() {
            terms.push((k, b.scale(&p_pow(shape.p, k))));
        }
    }
    Ok(RationalFunction::from_laurent(
        LaurentPoly::from_terms(terms),
        &CycNumber::one(),
    ))
}

/// `Z(X, 1_{o^n}) = (q - 1) / (1 - X^n)`.
pub fn z_factor(phi: Phi, n: usize, q: u64) -> RationalFunction<CycNumber> {
    z_factor_central(phi, n, q, &CycNumber::one())
}

/// The centre integral when `W1 W2 (z g) = omega(z) W1 W2 (g)`:
/// `(q - 1) / (1 - omega(p) X^n)`.
pub fn z_factor_central(
    phi: Phi,
    n: usize,
    q: u64,
    omega: &CycNumber,
) -> RationalFunction<CycNumber> {
    let Phi::LatticeIndicator = phi;
    let num = LaurentPoly::constant(CycNumber::from_integer(q as i64 - 1));
    let den = LaurentPoly::from_terms([(0, CycNumber::one()), (n as i64, -omega.clone())]);
    RationalFunction::new(num, den).expect("nonzero denominator")
}

/// The integral over `(K cap P) \ K` of `I_(0)(X, rho(k) W1, rho(k) W2)`.
#[derive(Clone, Debug)]
pub struct KIntegral {
    pub p: u64,
    pub n: usize,
    pub e: usize,
    pub level: u32,
    pub window: u32,
    pub cells: Vec<IntegralCell>,
    /// `b_l` per cell row, nonzero values only.
    pub b: BTreeMap<(u64, u64), BTreeMap<i64, CycNumber>>,
    pub points: Vec<CellPoint>,
    pub poly: LaurentPoly<CycNumber>,
}

impl KIntegral {
    /// `c_i`: the integral of `b_{in/e}` over `(K cap P) \ K`.
    pub fn slice_integral(&self, l: i64) -> CycNumber {
        self.cells
            .iter()
            .filter_map(|c| {
                self.b
                    .get(&c.row)
                    .and_then(|b| b.get(&l))
                    .map(|v| v.scale(&c.volume))
            })
            .sum()
    }
}

pub fn integrate_over_k(
    w1: &WhittakerEvaluator,
    w2: &WhittakerEvaluator,
    cfg: &EngineConfig,
) -> Result<KIntegral> {
    let shape = pair_shape(w1, w2)?;
    // Fill lazily built tables before going parallel.
    let one = PadicMatrix::identity(shape.n);
    w1.eval(&one)?;
    w2.eval(&one)?;
    let cells = k_cells(shape.p, shape.m);
    let r = (shape.e as i64) * cfg.window as i64;
    let per_cell: Vec<Vec<CellPoint>> = cells
        .par_iter()
        .map(|cell| {
            let mut pts = Vec::new();
            for l in -r..=r {
                pts.extend(slice_points(w1, w2, &shape, cell, l)?);
            }
            Ok(pts)
        })
        .collect::<Result<_>>()?;
    let points: Vec<CellPoint> = per_cell.into_iter().flatten().collect();
    let p = shape.p;
    let mut b: BTreeMap<(u64, u64), BTreeMap<i64, CycNumber>> = BTreeMap::new();
    let scale = p_pow(p, -(shape.m as i64 - 1));
    let mut coeffs: BTreeMap<i64, CycNumber> = BTreeMap::new();
    for pt in &points {
        let prod = &pt.w1 * &pt.w2;
        if prod.is_zero() {
            continue;
        }
        let slot = b
            .entry(pt.row)
            .or_default()
            .entry(pt.l)
            .or_insert_with(CycNumber::zero);
        *slot = &*slot + &prod.scale(&scale);
        let c = coeffs.entry(pt.l).or_insert_with(CycNumber::zero);
        *c = &*c + &prod.scale(&pt.weight);
    }
    for row in b.values_mut() {
        row.retain(|_, v| !v.is_zero());
    }
    b.retain(|_, v| !v.is_empty());
    Ok(KIntegral {
        p,
        n: shape.n,
        e: shape.e,
        level: shape.m,
        window: cfg.window,
        cells,
        b,
        points,
        poly: LaurentPoly::from_terms(coeffs),
    })
}

/// The full integral `I(X, W1, W2, 1_{o^n})` with its `K`-part.
#[derive(Clone, Debug)]
pub struct RsIntegral {
    pub omega: CycNumber,
    pub z: RationalFunction<CycNumber>,
    pub k_integral: KIntegral,
    pub value: RationalFunction<CycNumber>,
}

pub fn rankin_selberg_i(
    w1: &WhittakerEvaluator,
    w2: &WhittakerEvaluator,
    phi: Phi,
    cfg: &EngineConfig,
) -> Result<RsIntegral> {
    let k_integral = integrate_over_k(w1, w2, cfg)?;
    let omega = w1.central_at_p() * w2.central_at_p();
    let z = z_factor_central(phi, k_integral.n, k_integral.p, &omega);
    let value = z.mul(&RationalFunction::from_laurent(
        k_integral.poly.clone(),
        &CycNumber::one(),
    ));
    Ok(RsIntegral {
        omega,
        z,
        k_integral,
        value,
    })
}
