//! Extended maximal simple types `(bold J, Lambda)` for two families of
//! cuspidal representations of `GL_n(Q_p)`, with their Bessel functions and
//! explicit Whittaker functions.
//!
//! * depth zero: `J = GL_n(Z_p)`, `bold J = <p> J`, `Lambda` inflated from the
//!   cuspidal representation of `GL_2(F_p)` attached to a regular character
//!   `Theta` of `F_{p^2}^x`, and `Lambda(p) = A`;
//! * ramified `GL_2`, `p` odd: `varpi_E = [[0, p], [1, 0]]`,
//!   `J = o_E^x (1 + P)` and `Lambda(varpi_E^i z (1 + y)) =
//!   A^i sigma(z) theta(s tr(varpi_E^-1 y))`.

pub mod psi;
pub mod whittaker;

use std::sync::{Arc, OnceLock};

use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::arith::CycNumber;
use crate::cuspidal::{
    bessel_convolution_check, cuspidal_character, finite_bessel, CuspidalClassFunction,
    FiniteAdditiveCharacter, FiniteBessel, RegularCharacter,
};
use crate::error::{Error, Result};
use crate::finite::{enumerate_group, FiniteField, FiniteMatrix};
use crate::padic::scalar::{self, rat};
use crate::padic::{theta_eval, LatticeChain, PadicMatrix};

pub use psi::{extended_psi_factored, extended_psi_on_u, PsiT};
pub use whittaker::{support_decompose, varpi_power, whittaker_eval, Support, WhittakerEvaluator};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Family {
    DepthZero,
    Ramified,
}

impl Family {
    pub fn name(&self) -> &'static str {
        match self {
            Family::DepthZero => "depth-zero",
            Family::Ramified => "ramified",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "depth-zero" | "depth0" | "dz" => Ok(Family::DepthZero),
            "ramified" | "ramified-gl2" | "ram" => Ok(Family::Ramified),
            _ => Err(Error::Parse(format!("unknown family {s:?}"))),
        }
    }
}

/// Parameters of a type; the JSON form of a [`SimpleType`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TypeParams {
    pub family: Family,
    pub q: u64,
    pub n: usize,
    /// Depth zero: `Theta(g) = zeta_{q^2-1}^theta` for the fixed generator `g`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub theta: Option<i64>,
    /// Ramified: `sigma(g) = zeta_{p-1}^sigma` on `F_p^x`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sigma: Option<i64>,
    /// Ramified: `beta = beta_sign * varpi_E^-1`.
    #[serde(default = "plus_one")]
    pub beta_sign: i64,
    #[serde(rename = "A")]
    pub a: CycNumber,
}

fn plus_one() -> i64 {
    1
}

impl TypeParams {
    pub fn depth_zero(q: u64, theta: i64, a: CycNumber) -> Self {
        Self {
            family: Family::DepthZero,
            q,
            n: 2,
            theta: Some(theta),
            sigma: None,
            beta_sign: 1,
            a,
        }
    }

    pub fn ramified(p: u64, sigma: i64, a: CycNumber) -> Self {
        Self {
            family: Family::Ramified,
            q: p,
            n: 2,
            theta: None,
            sigma: Some(sigma),
            beta_sign: 1,
            a,
        }
    }

    pub fn with_beta_sign(mut self, s: i64) -> Self {
        self.beta_sign = s;
        self
    }
}

/// A constructed type with all build-time checks passed.
pub struct SimpleType {
    params: TypeParams,
    p: u64,
    chain: LatticeChain,
    residue_field: Arc<FiniteField>,
    theta: Option<RegularCharacter>,
    chi: Option<CuspidalClassFunction>,
    bessel_plus: OnceLock<FiniteBessel>,
    bessel_minus: OnceLock<FiniteBessel>,
}

impl std::fmt::Debug for SimpleType {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("SimpleType")
            .field("params", &self.params)
            .finish()
    }
}

pub fn make_type(params: &TypeParams) -> Result<Arc<SimpleType>> {
    let p = params.q;
    if !crate::arith::int::is_prime(p) {
        return Err(Error::InvalidParameter(format!(
            "q = {p} must be prime: the local field is Q_p"
        )));
    }
    if params.a.is_zero() {
        return Err(Error::InvalidParameter("A must be nonzero".into()));
    }
    if params.beta_sign != 1 && params.beta_sign != -1 {
        return Err(Error::InvalidParameter("beta_sign must be 1 or -1".into()));
    }
    let residue_field = FiniteField::new(p as u32, 1)?;
    let ty = match params.family {
        Family::DepthZero => {
            if params.n != 2 {
                return Err(Error::InvalidParameter(format!(
                    "depth-zero types are available for n = 2, got n = {}",
                    params.n
                )));
            }
            let k = params
                .theta
                .ok_or_else(|| Error::InvalidParameter("depth-zero type needs theta".into()))?;
            let theta = RegularCharacter::new(p as u32, 2, k)?;
            let chi = cuspidal_character(&theta)?;
            SimpleType {
                params: TypeParams {
                    sigma: None,
                    beta_sign: 1,
                    ..params.clone()
                },
                p,
                chain: LatticeChain::depth_zero(2, p),
                residue_field,
                theta: Some(theta),
                chi: Some(chi),
                bessel_plus: OnceLock::new(),
                bessel_minus: OnceLock::new(),
            }
        }
        Family::Ramified => {
            if p == 2 {
                return Err(Error::EvenResidualCharacteristic);
            }
            if params.n != 2 {
                return Err(Error::InvalidParameter(
                    "ramified types are for n = 2".into(),
                ));
            }
            let sigma = params
                .sigma
                .ok_or_else(|| Error::InvalidParameter("ramified type needs sigma".into()))?;
            SimpleType {
                params: TypeParams {
                    theta: None,
                    sigma: Some(sigma.rem_euclid(p as i64 - 1)),
                    ..params.clone()
                },
                p,
                chain: LatticeChain::ramified_gl2(p),
                residue_field,
                theta: None,
                chi: None,
                bessel_plus: OnceLock::new(),
                bessel_minus: OnceLock::new(),
            }
        }
    };
    ty.chain.check(p)?;
    ty.check()?;
    Ok(Arc::new(ty))
}

impl SimpleType {
    pub fn params(&self) -> &TypeParams {
        &self.params
    }

    pub fn family(&self) -> Family {
        self.params.family
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn q(&self) -> u64 {
        self.p
    }

    pub fn n(&self) -> usize {
        self.params.n
    }

    /// Ramification index of `E/F`.
    pub fn e(&self) -> usize {
        self.chain.period()
    }

    /// `[E : F]`.
    pub fn d(&self) -> usize {
        match self.family() {
            Family::DepthZero => 1,
            Family::Ramified => 2,
        }
    }

    /// `A = Lambda(varpi_E)`.
    pub fn a(&self) -> &CycNumber {
        &self.params.a
    }

    pub fn chain(&self) -> &LatticeChain {
        &self.chain
    }

    pub fn varpi_e(&self) -> &PadicMatrix {
        self.chain.varpi_e()
    }

    pub fn theta(&self) -> Option<&RegularCharacter> {
        self.theta.as_ref()
    }

    pub fn sigma(&self) -> Option<i64> {
        self.params.sigma
    }

    /// The sign `s` such that the type is compatible with `psi^s`. Depth-zero
    /// types are compatible with both signs and report `+1`.
    pub fn beta_sign(&self) -> i64 {
        self.params.beta_sign
    }

    pub fn compatible_with(&self, sign: i64) -> bool {
        match self.family() {
            Family::DepthZero => true,
            Family::Ramified => self.params.beta_sign == sign,
        }
    }

    /// Level `m` with `Lambda` trivial on `K^m`: every Whittaker function
    /// of the type is right `K^m`-invariant.
    pub fn level(&self) -> u32 {
        match self.family() {
            Family::DepthZero => 1,
            Family::Ramified => 2,
        }
    }

    /// Depth cap for `theta` arguments in `psi_t`.
    pub fn theta_cap(&self) -> u32 {
        self.level()
    }

    pub fn psi_t(&self, sign: i64) -> PsiT {
        PsiT::new(self.chain.t(self.p), self.p, sign, self.theta_cap())
    }

    /// `sigma` on a `p`-adic unit, through its residue.
    pub fn sigma_of(&self, x: &BigRational) -> CycNumber {
        let s = self.params.sigma.unwrap_or(0);
        let r = scalar::residue(x, self.p, 1).expect("unit") as u32;
        let l = self.residue_field.log(r).expect("unit") as i64;
        CycNumber::zeta(self.p - 1, s * l)
    }

    /// `j0` lies in `J`.
    pub fn in_j(&self, j0: &PadicMatrix) -> bool {
        let p = self.p;
        match self.family() {
            Family::DepthZero => j0.in_k(p),
            Family::Ramified => {
                let (a, b, c, d) = (j0.get(0, 0), j0.get(0, 1), j0.get(1, 0), j0.get(1, 1));
                scalar::is_unit(a, p)
                    && scalar::is_unit(d, p)
                    && scalar::in_ideal(&(a - d), p, 1)
                    && scalar::in_ideal(b, p, 1)
                    && scalar::is_integral(c, p)
            }
        }
    }

    /// `J^1`: `K^1` for depth zero, `1 + P` for the ramified family.
    pub fn in_j1(&self, j: &PadicMatrix) -> bool {
        let p = self.p;
        match self.family() {
            Family::DepthZero => j.in_k_level(p, 1),
            Family::Ramified => {
                let one = rat(1);
                let (a, b, c, d) = (j.get(0, 0), j.get(0, 1), j.get(1, 0), j.get(1, 1));
                scalar::in_ideal(&(a - &one), p, 1)
                    && scalar::in_ideal(&(d - &one), p, 1)
                    && scalar::in_ideal(b, p, 1)
                    && scalar::is_integral(c, p)
            }
        }
    }

    /// `theta_beta(1 + y) = theta(s tr(varpi_E^-1 y))` on `H^1`; trivial for
    /// depth zero.
    pub fn theta_beta(&self, h: &PadicMatrix) -> Result<CycNumber> {
        match self.family() {
            Family::DepthZero => Ok(CycNumber::one()),
            Family::Ramified => {
                // tr([[0, 1], [1/p, 0]] (h - 1)) = h_21 + h_12 / p.
                let arg = h.get(1, 0) + h.get(0, 1) / rat(self.p as i64);
                theta_eval(&(arg * rat(self.beta_sign())), self.p, self.theta_cap())
            }
        }
    }

    /// `Lambda` on `J` for the ramified family.
    fn lambda_ramified(&self, j0: &PadicMatrix) -> Result<CycNumber> {
        let (a, b, c) = (j0.get(0, 0), j0.get(0, 1), j0.get(1, 0));
        let x = (c + b / rat(self.p as i64)) / a;
        let x = x * rat(self.beta_sign());
        Ok(self.sigma_of(a) * theta_eval(&x, self.p, self.theta_cap())?)
    }

    fn finite_bessel(&self, sign: i64) -> &FiniteBessel {
        let cell = if sign > 0 {
            &self.bessel_plus
        } else {
            &self.bessel_minus
        };
        cell.get_or_init(|| {
            let chi = self.chi.as_ref().expect("depth-zero type");
            let psi = FiniteAdditiveCharacter::with_sign(self.residue_field.clone(), sign);
            finite_bessel(chi, &psi).expect("GL_2(F_p) is enumerable")
        })
    }

    /// Residue of `k` in `GL_n(F_p)`.
    pub fn reduce(&self, k: &PadicMatrix) -> Result<FiniteMatrix> {
        let r = k.residues(self.p, 1).ok_or(Error::NotInJ)?;
        let g = FiniteMatrix::new(
            self.residue_field.clone(),
            k.size(),
            r.into_iter().map(|x| x as u32).collect(),
        );
        if !g.is_invertible() {
            return Err(Error::NotInJ);
        }
        Ok(g)
    }

    /// The Bessel function of the type with respect to `psi^sign`, at
    /// `varpi_E^i j0`.
    pub fn bessel(&self, sign: i64, i: i64, j0: &PadicMatrix) -> Result<CycNumber> {
        if !self.in_j(j0) {
            return Err(Error::NotInJ);
        }
        let ai = self.a().pow(i);
        match self.family() {
            Family::DepthZero => {
                let k = self.reduce(j0)?;
                Ok(ai * self.finite_bessel(sign).value(&k).clone())
            }
            Family::Ramified => {
                if !self.compatible_with(sign) {
                    return Err(Error::NondegeneracyFailure(format!(
                        "type with beta sign {} has no psi^{sign} Bessel function",
                        self.beta_sign()
                    )));
                }
                Ok(ai * self.lambda_ramified(j0)?)
            }
        }
    }

    /// `bold J` element `varpi_E^i j0` to its inverse `varpi_E^{-i} j0'`.
    pub fn invert_in_bold_j(&self, i: i64, j0: &PadicMatrix) -> Result<(i64, PadicMatrix)> {
        let w = self.varpi_e();
        let wi = pow_matrix(w, i)?;
        let inv = wi.mul(j0).inverse().ok_or(Error::Singular)?;
        let j0inv = pow_matrix(w, i)?.mul(&inv);
        Ok((-i, j0inv))
    }

    fn check(&self) -> Result<()> {
        let fail = |s: String| Err(Error::NondegeneracyFailure(s));
        let p = self.p;
        match self.family() {
            Family::DepthZero => {
                let chi = self.chi.as_ref().unwrap();
                chi.check_invariants()?;
                for sign in [1, -1] {
                    let one = FiniteMatrix::identity(self.residue_field.clone(), 2);
                    if *self.finite_bessel(sign).value(&one) != CycNumber::one() {
                        return fail(format!("Bessel function at 1 is not 1 for psi^{sign}"));
                    }
                }
            }
            Family::Ramified => {
                let w = self.varpi_e();
                if w.mul(w) != PadicMatrix::scalar(2, rat(p as i64)) {
                    return fail("varpi_E^2 != p".into());
                }
                // tr(beta P^2) lies in p: theta_beta is a character of 1 + P.
                let beta = w.inverse().ok_or(Error::Singular)?;
                let gens = [
                    PadicMatrix::from_ints(2, &[p as i64, 0, 0, 0]),
                    PadicMatrix::from_ints(2, &[0, p as i64, 0, 0]),
                    PadicMatrix::from_ints(2, &[0, 0, 1, 0]),
                    PadicMatrix::from_ints(2, &[0, 0, 0, p as i64]),
                ];
                for y1 in &gens {
                    for y2 in &gens {
                        let m = beta.mul(y1).mul(y2);
                        let tr = m.get(0, 0) + m.get(1, 1);
                        if !scalar::in_ideal(&tr, p, 1) {
                            return fail("tr(beta P^2) is not in p".into());
                        }
                    }
                }
                // psi_t and Lambda agree on N cap J, checked modulo p^2.
                let psi = self.psi_t(self.beta_sign());
                for x in 0..p * p {
                    let b = rat((p * x) as i64);
                    let u = PadicMatrix::unipotent(2, std::slice::from_ref(&b));
                    if psi.eval(&u)? != self.lambda_ramified(&u)? {
                        return fail(format!("psi_t and Lambda differ at n({b})"));
                    }
                }
            }
        }
        Ok(())
    }

    /// Parameters of the contragredient type: `Theta^-1` (resp. `sigma^-1`,
    /// `-beta`) and `A^-1`.
    pub fn dual_params(&self) -> TypeParams {
        let mut d = self.params.clone();
        d.a = self.a().inverse().expect("A is nonzero");
        match self.family() {
            Family::DepthZero => {
                d.theta = Some(-(self.theta.as_ref().unwrap().index() as i64));
            }
            Family::Ramified => {
                d.sigma = Some(-self.params.sigma.unwrap());
                d.beta_sign = -self.params.beta_sign;
            }
        }
        d
    }

    /// An equivalent type compatible with `psi^sign`. For the ramified family,
    /// conjugation by `diag(-1, 1)` flips `beta` and sends `A` to
    /// `sigma(-1) A`.
    pub fn normalized_for(&self, sign: i64) -> Result<Arc<SimpleType>> {
        let mut params = self.params.clone();
        if !self.compatible_with(sign) {
            params.beta_sign = sign;
            params.a = self.sigma_of(&rat(-1)) * params.a.clone();
        }
        make_type(&params)
    }

    /// JSON description, including the order of `Theta` for depth zero.
    pub fn to_json(&self) -> serde_json::Value {
        let mut v = serde_json::to_value(&self.params).expect("serializable");
        if let Some(t) = &self.theta {
            v["theta_order"] = serde_json::json!(t.order());
        }
        v
    }
}

/// Outcome of the Bessel identities on a finite quotient of `J`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BesselSuite {
    pub identity: bool,
    pub duality: bool,
    pub convolution: bool,
    pub elements: usize,
    pub pairs: usize,
}

impl BesselSuite {
    pub fn passed(&self) -> bool {
        self.identity && self.duality && self.convolution
    }
}

impl SimpleType {
    /// Representatives of `J / K^level` as integer matrices.
    pub fn j_reps(&self) -> Vec<PadicMatrix> {
        let p = self.p;
        match self.family() {
            Family::DepthZero => enumerate_group(2, p as u32)
                .expect("GL_2(F_p) is enumerable")
                .map(|g| {
                    PadicMatrix::from_ints(
                        2,
                        &g.entries().iter().map(|&x| x as i64).collect::<Vec<_>>(),
                    )
                })
                .collect(),
            Family::Ramified => {
                let p2 = p * p;
                let mut out = Vec::new();
                for a in (1..p2).filter(|a| a % p != 0) {
                    for t in 0..p {
                        for s in 0..p {
                            for c in 0..p2 {
                                let d = (a + p * t) % p2;
                                out.push(PadicMatrix::from_ints(
                                    2,
                                    &[a as i64, (p * s) as i64, c as i64, d as i64],
                                ));
                            }
                        }
                    }
                }
                out
            }
        }
    }

    /// The Bessel function for `psi^sign` on [`SimpleType::j_reps`].
    pub fn bessel_table(&self, sign: i64) -> Result<Vec<(PadicMatrix, CycNumber)>> {
        self.j_reps()
            .into_iter()
            .map(|j| {
                let v = self.bessel(sign, 0, &j)?;
                Ok((j, v))
            })
            .collect()
    }

    /// `J(1) = 1`, `J^dual(j) = J(j^-1)` on every representative, and the
    /// convolution identity on all pairs when there are at most
    /// `max_pairs` of them, else on `max_pairs` random pairs.
    pub fn bessel_suite(&self, max_pairs: usize, seed: u64) -> Result<BesselSuite> {
        let s = self.beta_sign();
        let one = PadicMatrix::identity(2);
        let identity = self.bessel(s, 0, &one)? == CycNumber::one();
        let reps = self.j_reps();
        let dual = make_type(&self.dual_params())?;
        let mut duality = true;
        for j in &reps {
            let inv = j.inverse().ok_or(Error::Singular)?;
            if dual.bessel(-s, 0, j)? != self.bessel(s, 0, &inv)? {
                duality = false;
                break;
            }
        }
        let n = reps.len();
        let pairs: Vec<(usize, usize)> = if n * n <= max_pairs {
            (0..n).flat_map(|a| (0..n).map(move |b| (a, b))).collect()
        } else {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            (0..max_pairs)
                .map(|_| (rng.gen_range(0..n), rng.gen_range(0..n)))
                .collect()
        };
        let mut convolution = true;
        match self.family() {
            Family::DepthZero => {
                let b = self.finite_bessel(s);
                for &(a, c) in &pairs {
                    let (g1, g2) = (self.reduce(&reps[a])?, self.reduce(&reps[c])?);
                    if !bessel_convolution_check(b, &g1, &g2)? {
                        convolution = false;
                        break;
                    }
                }
            }
            Family::Ramified => {
                // U \ M is trivial here, so the identity is multiplicativity.
                for &(a, c) in &pairs {
                    let lhs = self.bessel(s, 0, &reps[a])? * self.bessel(s, 0, &reps[c])?;
                    if lhs != self.bessel(s, 0, &reps[a].mul(&reps[c]))? {
                        convolution = false;
                        break;
                    }
                }
            }
        }
        Ok(BesselSuite {
            identity,
            duality,
            convolution,
            elements: n,
            pairs: pairs.len(),
        })
    }
}

/// `m^i` for any integer `i`.
pub fn pow_matrix(m: &PadicMatrix, i: i64) -> Result<PadicMatrix> {
    let base = if i < 0 {
        m.inverse().ok_or(Error::Singular)?
    } else {
        m.clone()
    };
    let mut out = PadicMatrix::identity(m.size());
    for _ in 0..i.unsigned_abs() {
        out = out.mul(&base);
    }
    Ok(out)
}
