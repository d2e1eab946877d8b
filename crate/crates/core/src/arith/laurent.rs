//! Laurent polynomials `sum_k c_k X^k` with finitely many nonzero terms.

use std::fmt;

use super::Scalar;

/// Stored as a lowest exponent plus a dense coefficient run with nonzero ends.
/// The zero polynomial has an empty run.
#[derive(Clone, Debug, PartialEq)]
pub struct LaurentPoly<S> {
    low: i64,
    coeffs: Vec<S>,
}

impl<S: Scalar> LaurentPoly<S> {
    pub fn zero() -> Self {
        Self {
            low: 0,
            coeffs: Vec::new(),
        }
    }

    pub fn constant(c: S) -> Self {
        Self::monomial(c, 0)
    }

    pub fn monomial(c: S, deg: i64) -> Self {
        Self::from_coeffs(deg, vec![c])
    }

    /// `coeffs[i]` is the coefficient of `X^(low + i)`.
    pub fn from_coeffs(low: i64, coeffs: Vec<S>) -> Self {
        let mut p = Self { low, coeffs };
        p.trim();
        p
    }

    /// Builds from `(degree, coefficient)` pairs; repeated degrees add up.
    pub fn from_terms<I: IntoIterator<Item = (i64, S)>>(terms: I) -> Self {
        let mut terms: Vec<(i64, S)> = terms.into_iter().collect();
        if terms.is_empty() {
            return Self::zero();
        }
        terms.sort_by_key(|(d, _)| *d);
        let low = terms[0].0;
        let high = terms[terms.len() - 1].0;
        let zero = terms[0].1.zero_like();
        let mut coeffs = vec![zero; (high - low + 1) as usize];
        for (d, c) in terms {
            let slot = &mut coeffs[(d - low) as usize];
            *slot = slot.add_ref(&c);
        }
        Self::from_coeffs(low, coeffs)
    }

    fn trim(&mut self) {
        while self.coeffs.last().is_some_and(Scalar::is_zero) {
            self.coeffs.pop();
        }
        let lead = self.coeffs.iter().take_while(|c| c.is_zero()).count();
        if lead > 0 {
            self.coeffs.drain(..lead);
            self.low += lead as i64;
        }
        if self.coeffs.is_empty() {
            self.low = 0;
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Lowest exponent with nonzero coefficient (`None` for zero).
    pub fn low_degree(&self) -> Option<i64> {
        (!self.is_zero()).then_some(self.low)
    }

    pub fn high_degree(&self) -> Option<i64> {
        (!self.is_zero()).then(|| self.low + self.coeffs.len() as i64 - 1)
    }

    pub fn coeff(&self, k: i64) -> Option<&S> {
        if k < self.low {
            return None;
        }
        self.coeffs.get((k - self.low) as usize)
    }

    /// Nonzero terms in increasing degree.
    pub fn terms(&self) -> impl Iterator<Item = (i64, &S)> {
        let low = self.low;
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(move |(i, c)| (low + i as i64, c))
    }

    pub fn dense(&self) -> &[S] {
        &self.coeffs
    }

    /// Any coefficient, used as a context witness for neutral elements.
    pub fn sample(&self) -> Option<&S> {
        self.coeffs.first()
    }

    pub fn shift(&self, by: i64) -> Self {
        Self {
            low: if self.is_zero() { 0 } else { self.low + by },
            coeffs: self.coeffs.clone(),
        }
    }

    pub fn add(&self, rhs: &Self) -> Self {
        self.combine(rhs, |a, b| a.add_ref(b), |b| b.clone())
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        self.combine(rhs, |a, b| a.sub_ref(b), |b| b.neg_ref())
    }

    fn combine(
        &self,
        rhs: &Self,
        both: impl Fn(&S, &S) -> S,
        right_only: impl Fn(&S) -> S,
    ) -> Self {
        if rhs.is_zero() {
            return self.clone();
        }
        if self.is_zero() {
            return Self::from_coeffs(rhs.low, rhs.coeffs.iter().map(&right_only).collect());
        }
        let low = self.low.min(rhs.low);
        let high = self.high_degree().unwrap().max(rhs.high_degree().unwrap());
        let zero = self.coeffs[0].zero_like();
        let coeffs = (low..=high)
            .map(|k| match (self.coeff(k), rhs.coeff(k)) {
                (Some(a), Some(b)) => both(a, b),
                (Some(a), None) => a.clone(),
                (None, Some(b)) => right_only(b),
                (None, None) => zero.clone(),
            })
            .collect();
        Self::from_coeffs(low, coeffs)
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        if self.is_zero() || rhs.is_zero() {
            return Self::zero();
        }
        let zero = self.coeffs[0].zero_like();
        let mut out = vec![zero; self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    out[i + j] = out[i + j].add_ref(&a.mul_ref(b));
                }
            }
        }
        Self::from_coeffs(self.low + rhs.low, out)
    }

    pub fn scale(&self, c: &S) -> Self {
        Self::from_coeffs(self.low, self.coeffs.iter().map(|a| a.mul_ref(c)).collect())
    }

    pub fn neg(&self) -> Self {
        Self::from_coeffs(self.low, self.coeffs.iter().map(Scalar::neg_ref).collect())
    }

    /// Substitutes `X -> c X`, i.e. multiplies the degree-`k` coefficient by `c^k`.
    pub fn substitute_scaled(&self, c: &S) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let cinv = c.inv().expect("substitution scalar must be invertible");
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(i, a)| {
                let k = self.low + i as i64;
                let f = if k >= 0 {
                    c.pow_u(k as u64)
                } else {
                    cinv.pow_u((-k) as u64)
                };
                a.mul_ref(&f)
            })
            .collect();
        Self::from_coeffs(self.low, coeffs)
    }

    /// Applies a coefficient map (e.g. reduction modulo `ell`).
    pub fn map<T: Scalar>(&self, f: impl Fn(&S) -> T) -> LaurentPoly<T> {
        LaurentPoly::from_coeffs(self.low, self.coeffs.iter().map(f).collect())
    }

    pub fn try_map<T: Scalar, E>(
        &self,
        f: impl Fn(&S) -> Result<T, E>,
    ) -> Result<LaurentPoly<T>, E> {
        let coeffs = self.coeffs.iter().map(f).collect::<Result<Vec<_>, E>>()?;
        Ok(LaurentPoly::from_coeffs(self.low, coeffs))
    }

    /// Ordinary-polynomial Euclidean division of `X^-low`-normalized parts.
    /// Both operands must have `low_degree() == Some(0)` or be zero.
    pub(crate) fn poly_divrem(&self, rhs: &Self) -> (Self, Self) {
        assert!(!rhs.is_zero(), "polynomial division by zero");
        debug_assert!(self.is_zero() || self.low >= 0);
        debug_assert_eq!(rhs.low, 0);
        if self.is_zero() {
            return (Self::zero(), Self::zero());
        }
        let mut rem: Vec<S> = {
            let zero = self.coeffs[0].zero_like();
            let mut v = vec![zero; self.low as usize];
            v.extend(self.coeffs.iter().cloned());
            v
        };
        let dd = rhs.coeffs.len() - 1;
        if rem.len() <= dd {
            return (Self::zero(), self.clone());
        }
        let lead_inv = rhs.coeffs[dd]
            .inv()
            .expect("leading coefficient invertible");
        let zero = rem[0].zero_like();
        let mut quot = vec![zero; rem.len() - dd];
        for k in (0..quot.len()).rev() {
            let c = rem[k + dd].mul_ref(&lead_inv);
            if c.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                rem[k + j] = rem[k + j].sub_ref(&c.mul_ref(b));
            }
            quot[k] = c;
        }
        rem.truncate(dd);
        (Self::from_coeffs(0, quot), Self::from_coeffs(0, rem))
    }

    /// Monic gcd of ordinary polynomials (both with nonnegative low degree).
    pub(crate) fn poly_gcd(&self, rhs: &Self) -> Self {
        let mut a = self.shift(0);
        let mut b = rhs.shift(0);
        // Work with genuine polynomials: bring low degree to the representation.
        a = a.as_poly();
        b = b.as_poly();
        while !b.is_zero() {
            let (_, r) = a.poly_divrem(&b);
            a = b;
            b = r.as_poly();
        }
        a.monic()
    }

    /// Re-expresses with `low = 0` (prepending explicit zeros). Only for
    /// nonnegative low degree.
    fn as_poly(&self) -> Self {
        if self.is_zero() || self.low == 0 {
            return self.clone();
        }
        assert!(self.low > 0, "negative powers in ordinary polynomial");
        let zero = self.coeffs[0].zero_like();
        let mut v = vec![zero; self.low as usize];
        v.extend(self.coeffs.iter().cloned());
        Self { low: 0, coeffs: v }
    }

    pub(crate) fn monic(&self) -> Self {
        match self.coeffs.last() {
            None => Self::zero(),
            Some(lead) => self.scale(&lead.inv().expect("nonzero leading coefficient")),
        }
    }
}

impl<S: Scalar> fmt::Display for LaurentPoly<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.terms() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match k {
                0 => write!(f, "({})", c)?,
                1 => write!(f, "({})*X", c)?,
                _ => write!(f, "({})*X^{}", c, k)?,
            }
        }
        Ok(())
    }
}
