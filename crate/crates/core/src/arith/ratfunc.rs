//! Rational functions in `X`, Euler factors and power-series expansion.

use std::fmt;

use super::{LaurentPoly, Scalar};
use crate::error::{Error, Result};

/// `num / den` in lowest terms. The denominator is an ordinary polynomial
/// with nonzero, unit-normalized constant term; all powers of `X` live in
/// the numerator, which may carry negative exponents.
#[derive(Clone, Debug, PartialEq)]
pub struct RationalFunction<S> {
    num: LaurentPoly<S>,
    den: LaurentPoly<S>,
}

impl<S: Scalar> RationalFunction<S> {
    pub fn zero(witness: &S) -> Self {
        Self {
            num: LaurentPoly::zero(),
            den: LaurentPoly::constant(witness.one_like()),
        }
    }

    pub fn from_laurent(p: LaurentPoly<S>, witness: &S) -> Self {
        Self {
            num: p,
            den: LaurentPoly::constant(witness.one_like()),
        }
    }

    pub fn constant(c: S) -> Self {
        let one = c.one_like();
        Self {
            num: LaurentPoly::constant(c),
            den: LaurentPoly::constant(one),
        }
    }

    pub fn new(num: LaurentPoly<S>, den: LaurentPoly<S>) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::InvalidParameter("zero denominator".into()));
        }
        Ok(Self::canonical(num, den))
    }

    fn canonical(num: LaurentPoly<S>, den: LaurentPoly<S>) -> Self {
        let one = den.sample().expect("nonzero denominator").one_like();
        if num.is_zero() {
            return Self {
                num,
                den: LaurentPoly::constant(one),
            };
        }
        let dl = den.low_degree().unwrap();
        let nl = num.low_degree().unwrap();
        let den = den.shift(-dl);
        let num_poly = num.shift(-nl);
        let g = num_poly.poly_gcd(&den);
        let (num_poly, den) = if g.high_degree() == Some(0) {
            (num_poly, den)
        } else {
            (num_poly.poly_divrem(&g).0, den.poly_divrem(&g).0)
        };
        let c0 = den.coeff(0).expect("constant term after shift").clone();
        let c0inv = c0.inv().expect("nonzero constant term");
        Self {
            num: num_poly.shift(nl - dl).scale(&c0inv),
            den: den.scale(&c0inv),
        }
    }

    pub fn numerator(&self) -> &LaurentPoly<S> {
        &self.num
    }

    pub fn denominator(&self) -> &LaurentPoly<S> {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_laurent(&self) -> bool {
        self.den.high_degree() == Some(0)
    }

    fn one(&self) -> S {
        self.den.coeff(0).unwrap().one_like()
    }

    pub fn add(&self, rhs: &Self) -> Self {
        if self.den == rhs.den {
            return Self::canonical(self.num.add(&rhs.num), self.den.clone());
        }
        Self::canonical(
            self.num.mul(&rhs.den).add(&rhs.num.mul(&self.den)),
            self.den.mul(&rhs.den),
        )
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        self.add(&rhs.neg())
    }

    pub fn neg(&self) -> Self {
        Self {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        Self::canonical(self.num.mul(&rhs.num), self.den.mul(&rhs.den))
    }

    pub fn div(&self, rhs: &Self) -> Result<Self> {
        if rhs.is_zero() {
            return Err(Error::InvalidParameter(
                "division by zero rational function".into(),
            ));
        }
        Ok(Self::canonical(
            self.num.mul(&rhs.den),
            self.den.mul(&rhs.num),
        ))
    }

    pub fn scale(&self, c: &S) -> Self {
        if c.is_zero() {
            return Self::zero(c);
        }
        Self {
            num: self.num.scale(c),
            den: self.den.clone(),
        }
    }

    /// `f(X) -> f(cX)`.
    pub fn substitute_scaled(&self, c: &S) -> Self {
        Self::canonical(self.num.substitute_scaled(c), self.den.substitute_scaled(c))
    }

    /// Coefficientwise image under a ring map. Fails when the denominator
    /// collapses to zero.
    pub fn try_map<T: Scalar>(&self, f: impl Fn(&S) -> Result<T>) -> Result<RationalFunction<T>> {
        let num = self.num.try_map(&f)?;
        let den = self.den.try_map(&f)?;
        RationalFunction::new(num, den)
    }

    pub fn series(&self, kmin: i64, kmax: i64) -> Result<Vec<S>> {
        series_coefficients(self, kmin, kmax)
    }
}

impl<S: Scalar> fmt::Display for RationalFunction<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_laurent() && self.den.coeff(0).is_some_and(|c| c.is_one()) {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({}) / ({})", self.num, self.den)
        }
    }
}

/// `1 / Q(X)` with `Q(0) = 1`.
#[derive(Clone, Debug, PartialEq)]
pub struct EulerFactor<S> {
    inverse: LaurentPoly<S>,
}

impl<S: Scalar> EulerFactor<S> {
    pub fn new(inverse: LaurentPoly<S>) -> Result<Self> {
        let ok = inverse.low_degree() == Some(0) && inverse.coeff(0).is_some_and(Scalar::is_one);
        if !ok {
            return Err(Error::InvalidParameter(
                "Euler factor needs a polynomial with constant term 1".into(),
            ));
        }
        Ok(Self { inverse })
    }

    pub fn trivial(witness: &S) -> Self {
        Self {
            inverse: LaurentPoly::constant(witness.one_like()),
        }
    }

    /// `1 / (1 - a X^d)`.
    pub fn simple(a: S, d: i64) -> Self {
        let one = a.one_like();
        let inverse = LaurentPoly::from_terms([(0, one), (d, a.neg_ref())]);
        Self { inverse }
    }

    pub fn inverse_poly(&self) -> &LaurentPoly<S> {
        &self.inverse
    }

    pub fn is_trivial(&self) -> bool {
        self.inverse.high_degree() == Some(0)
    }

    pub fn to_rational(&self) -> RationalFunction<S> {
        let one = self.inverse.coeff(0).unwrap().clone();
        RationalFunction::canonical(LaurentPoly::constant(one), self.inverse.clone())
    }

    pub fn try_map<T: Scalar>(&self, f: impl Fn(&S) -> Result<T>) -> Result<EulerFactor<T>> {
        EulerFactor::new(self.inverse.try_map(f)?)
    }
}

impl<S: Scalar> fmt::Display for EulerFactor<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "1 / ({})", self.inverse)
    }
}

/// Splits `f = c X^m / Q(X)` with `Q(0) = 1`.
pub fn euler_normalize<S: Scalar>(f: &RationalFunction<S>) -> Result<(EulerFactor<S>, S, i64)> {
    let mut terms = f.num.terms();
    let (m, c) = match (terms.next(), terms.next()) {
        (Some((m, c)), None) => (m, c.clone()),
        _ => return Err(Error::NotMonomialMultiple),
    };
    Ok((EulerFactor::new(f.den.clone())?, c, m))
}

/// Laurent coefficients of `f` at `X = 0` for degrees `kmin..=kmax`.
pub fn series_coefficients<S: Scalar>(
    f: &RationalFunction<S>,
    kmin: i64,
    kmax: i64,
) -> Result<Vec<S>> {
    let one = f.one();
    let zero = one.zero_like();
    if kmax < kmin {
        return Ok(Vec::new());
    }
    let d0 = f.den.coeff(0).cloned().unwrap_or_else(|| zero.clone());
    let d0inv = d0.inv().ok_or(Error::NotExpandable)?;
    let Some(nlow) = f.num.low_degree() else {
        return Ok(vec![zero; (kmax - kmin + 1) as usize]);
    };
    // Inverse series of the denominator up to the needed order.
    let order = (kmax - nlow).max(-1);
    let mut inv: Vec<S> = Vec::new();
    for k in 0..=order {
        let mut acc = if k == 0 { one.clone() } else { zero.clone() };
        for j in 1..=k {
            if let Some(dj) = f.den.coeff(j) {
                acc = acc.sub_ref(&dj.mul_ref(&inv[(k - j) as usize]));
            }
        }
        inv.push(acc.mul_ref(&d0inv));
    }
    let out = (kmin..=kmax)
        .map(|k| {
            let mut acc = zero.clone();
            for (d, c) in f.num.terms() {
                if d > k {
                    break;
                }
                acc = acc.add_ref(&c.mul_ref(&inv[(k - d) as usize]));
            }
            acc
        })
        .collect();
    Ok(out)
}
