//! Regular characters of `F_{q^2}^x`, the cuspidal characters of `GL_2(F_q)`
//! they parameterize, and additive characters of `F_q`.

use std::collections::HashMap;
use std::sync::Arc;

use crate::arith::CycNumber;
use crate::error::{Error, Result};
use crate::finite::{
    enumerate_group, ConjClassLabel, Elem, FiniteField, FiniteMatrix, Gl2Classifier,
};

/// `Theta(g^i) = zeta_{q^n - 1}^{k i}` for the fixed generator `g` of
/// `F_{q^n}^x`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RegularCharacter {
    q: u32,
    n: u32,
    k: u64,
}

impl RegularCharacter {
    pub fn new(q: u32, n: u32, k: i64) -> Result<Self> {
        if n != 2 {
            return Err(Error::InvalidParameter(format!(
                "regular characters are implemented for n = 2 only, got n = {n}"
            )));
        }
        FiniteField::of_order(q)?;
        let order = (q as u64).pow(n) - 1;
        let k = k.rem_euclid(order as i64) as u64;
        let theta = Self { q, n, k };
        if (k * q as u64) % order == k {
            return Err(Error::NotRegular);
        }
        Ok(theta)
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    /// The exponent `k` with `Theta(g) = zeta^k`.
    pub fn index(&self) -> u64 {
        self.k
    }

    pub fn group_order(&self) -> u64 {
        (self.q as u64).pow(self.n) - 1
    }

    /// Multiplicative order of `Theta`.
    pub fn order(&self) -> u64 {
        let m = self.group_order();
        m / crate::arith::int::gcd(m, self.k)
    }

    /// `Theta` at `g^i`.
    pub fn at_log(&self, i: u64) -> CycNumber {
        let m = self.group_order();
        CycNumber::zeta(m, ((self.k as u128 * i as u128) % m as u128) as i64)
    }

    pub fn inverse(&self) -> Self {
        Self {
            k: (self.group_order() - self.k) % self.group_order(),
            ..self.clone()
        }
    }

    /// `Theta^q`.
    pub fn frobenius(&self) -> Self {
        Self {
            k: (self.k * self.q as u64) % self.group_order(),
            ..self.clone()
        }
    }

    /// `Theta'` lies in the Frobenius orbit of `Theta`.
    pub fn same_orbit(&self, other: &Self) -> bool {
        self.q == other.q && (self.k == other.k || self.frobenius().k == other.k)
    }
}

/// The cuspidal character `chi_Theta` of `GL_2(F_q)`.
pub struct CuspidalClassFunction {
    theta: RegularCharacter,
    classifier: Arc<Gl2Classifier>,
    values: HashMap<ConjClassLabel, CycNumber>,
}

/// Character of the cuspidal representation attached to a regular `Theta`.
pub fn cuspidal_character(theta: &RegularCharacter) -> Result<CuspidalClassFunction> {
    let field = FiniteField::of_order(theta.q)?;
    let classifier = Arc::new(Gl2Classifier::new(field)?);
    CuspidalClassFunction::with_classifier(theta, classifier)
}

impl CuspidalClassFunction {
    pub fn with_classifier(
        theta: &RegularCharacter,
        classifier: Arc<Gl2Classifier>,
    ) -> Result<Self> {
        if theta.n != 2 {
            return Err(Error::InvalidParameter(
                "only GL_2 characters are available".into(),
            ));
        }
        if theta.frobenius() == *theta {
            return Err(Error::NotRegular);
        }
        let ext = classifier.extension();
        let e = &ext.ext;
        let q = theta.q as i64;
        let th = |x: Elem| theta.at_log(e.log(x).expect("nonzero") as u64);
        let values = classifier
            .labels()
            .into_iter()
            .map(|l| {
                let v = match l {
                    ConjClassLabel::Central(z) => th(ext.embed(z)) * CycNumber::from(q - 1),
                    ConjClassLabel::CentralUnipotent(z) => -th(ext.embed(z)),
                    ConjClassLabel::SplitRegular(..) => CycNumber::zero(),
                    ConjClassLabel::Elliptic(x) => -(th(x) + th(ext.frobenius(x))),
                };
                (l, v)
            })
            .collect();
        Ok(Self {
            theta: theta.clone(),
            classifier,
            values,
        })
    }

    pub fn theta(&self) -> &RegularCharacter {
        &self.theta
    }

    pub fn q(&self) -> u32 {
        self.theta.q
    }

    pub fn field(&self) -> &Arc<FiniteField> {
        self.classifier.base()
    }

    pub fn classifier(&self) -> &Arc<Gl2Classifier> {
        &self.classifier
    }

    pub fn value(&self, g: &FiniteMatrix) -> CycNumber {
        self.values[&self.classifier.classify(g)].clone()
    }

    pub fn value_on_label(&self, l: &ConjClassLabel) -> Option<&CycNumber> {
        self.values.get(l)
    }

    /// `chi(g^-1)`: the character of the contragredient.
    pub fn contragredient(&self) -> Result<Self> {
        Self::with_classifier(&self.theta.inverse(), self.classifier.clone())
    }

    pub fn degree(&self) -> CycNumber {
        self.values[&ConjClassLabel::Central(1)].clone()
    }

    /// `<chi, other>` computed by summing over every group element.
    pub fn inner_product(&self, other: &Self) -> Result<CycNumber> {
        let mut acc = CycNumber::zero();
        let mut count = 0i64;
        for g in enumerate_group(2, self.q())? {
            acc = acc + self.value(&g) * other.value(&g).conj();
            count += 1;
        }
        Ok(acc * CycNumber::from_ratio(1, count))
    }

    /// `sum_{u in N(F_q)} chi(u)`.
    pub fn unipotent_sum(&self) -> CycNumber {
        let f = self.field();
        f.elements()
            .map(|x| self.value(&FiniteMatrix::unipotent(f.clone(), 2, &[x])))
            .sum()
    }

    /// Irreducibility, cuspidality and the degree formula, checked exactly.
    pub fn check_invariants(&self) -> Result<()> {
        let fail = |what: &str| Err(Error::NondegeneracyFailure(what.to_string()));
        if self.inner_product(self)? != CycNumber::one() {
            return fail("<chi, chi> != 1");
        }
        if !self.unipotent_sum().is_zero() {
            return fail("chi does not vanish in sum over N(F_q)");
        }
        if self.degree() != CycNumber::from(self.q() as i64 - 1) {
            return fail("chi(1) != q - 1");
        }
        Ok(())
    }
}

/// `x -> zeta_p^(s Tr(x))` on `F_q`, with `s = +-1`.
#[derive(Clone, Debug)]
pub struct FiniteAdditiveCharacter {
    field: Arc<FiniteField>,
    sign: i64,
}

impl FiniteAdditiveCharacter {
    pub fn standard(field: Arc<FiniteField>) -> Self {
        Self { field, sign: 1 }
    }

    pub fn with_sign(field: Arc<FiniteField>, sign: i64) -> Self {
        assert!(sign == 1 || sign == -1);
        Self { field, sign }
    }

    pub fn sign(&self) -> i64 {
        self.sign
    }

    pub fn field(&self) -> &Arc<FiniteField> {
        &self.field
    }

    pub fn inverse(&self) -> Self {
        Self {
            field: self.field.clone(),
            sign: -self.sign,
        }
    }

    pub fn value(&self, x: Elem) -> CycNumber {
        let p = self.field.characteristic();
        CycNumber::zeta(p as u64, self.sign * self.field.trace_to_prime(x) as i64)
    }

    /// `psi(u_12 + u_23 + ...)` for an upper unipotent `u`.
    pub fn on_unipotent(&self, u: &FiniteMatrix) -> CycNumber {
        let f = &self.field;
        let s = (0..u.size() - 1).fold(0, |acc, i| f.add(acc, u.get(i, i + 1)));
        self.value(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn regularity() {
        assert_eq!(RegularCharacter::new(2, 2, 3), Err(Error::NotRegular));
        assert_eq!(RegularCharacter::new(3, 2, 4), Err(Error::NotRegular));
        assert!(RegularCharacter::new(3, 2, 1).is_ok());
        assert_eq!(RegularCharacter::new(3, 2, 1).unwrap().order(), 8);
        assert!(matches!(
            RegularCharacter::new(2, 3, 1),
            Err(Error::InvalidParameter(_))
        ));
    }

    #[test]
    fn q2_values() {
        let theta = RegularCharacter::new(2, 2, 1).unwrap();
        let chi = cuspidal_character(&theta).unwrap();
        let f = chi.field().clone();
        assert_eq!(chi.degree(), CycNumber::one());
        let u = FiniteMatrix::from_ints(f.clone(), 2, &[1, 1, 0, 1]);
        assert_eq!(chi.value(&u), CycNumber::from(-1));
        let e = FiniteMatrix::from_ints(f, 2, &[0, 1, 1, 1]);
        assert_eq!(chi.value(&e), CycNumber::one());
        assert_eq!(chi.unipotent_sum(), CycNumber::zero());
    }

    #[test]
    fn all_regular_characters_pass_invariants() {
        for q in [2u32, 3, 4, 5] {
            for k in 0..(q * q - 1) as i64 {
                let Ok(theta) = RegularCharacter::new(q, 2, k) else {
                    continue;
                };
                let chi = cuspidal_character(&theta).unwrap();
                chi.check_invariants().unwrap();
            }
        }
    }

    #[test]
    fn orthogonality_between_orbits() {
        let a = cuspidal_character(&RegularCharacter::new(3, 2, 1).unwrap()).unwrap();
        let b = cuspidal_character(&RegularCharacter::new(3, 2, 3).unwrap()).unwrap();
        let c = cuspidal_character(&RegularCharacter::new(3, 2, 2).unwrap()).unwrap();
        assert_eq!(a.inner_product(&b).unwrap(), CycNumber::one());
        assert_eq!(a.inner_product(&c).unwrap(), CycNumber::zero());
    }

    #[test]
    fn additive_character() {
        let f = FiniteField::new(2, 2).unwrap();
        let psi = FiniteAdditiveCharacter::standard(f.clone());
        let mut nontrivial = false;
        for x in f.elements() {
            for y in f.elements() {
                assert_eq!(psi.value(f.add(x, y)), psi.value(x) * psi.value(y));
            }
            nontrivial |= psi.value(x) != CycNumber::one();
        }
        assert!(nontrivial);
    }
}
