//! Bessel functions of cuspidal characters of `GL_2(F_q)`:
//! `J(g) = |N|^-1 sum_{u in N} psi(u)^-1 chi(g u)`.

use std::collections::HashMap;
use std::io::Write;
use std::sync::Arc;

use super::character::{CuspidalClassFunction, FiniteAdditiveCharacter};
use crate::arith::CycNumber;
use crate::error::Result;
use crate::finite::mirabolic::unipotent_elements;
use crate::finite::{enumerate_group, unipotent_mirabolic_reps, FiniteField, FiniteMatrix};

/// Bessel values of one `(chi, psi)` pair on all of `GL_2(F_q)`, computed once.
pub struct FiniteBessel {
    field: Arc<FiniteField>,
    psi: FiniteAdditiveCharacter,
    table: HashMap<u64, CycNumber>,
}

/// The Bessel function of `chi` with respect to `psi`.
pub fn finite_bessel(
    chi: &CuspidalClassFunction,
    psi: &FiniteAdditiveCharacter,
) -> Result<FiniteBessel> {
    let field = chi.field().clone();
    let unis = unipotent_elements(field.clone(), 2);
    let weights: Vec<CycNumber> = unis.iter().map(|u| psi.on_unipotent(u).conj()).collect();
    let scale = CycNumber::from_ratio(1, unis.len() as i64);
    let table = enumerate_group(2, field.order())?
        .map(|g| {
            let sum: CycNumber = unis
                .iter()
                .zip(&weights)
                .map(|(u, w)| w * chi.value(&g.mul(u)))
                .sum();
            (g.index(), sum * &scale)
        })
        .collect();
    Ok(FiniteBessel {
        field,
        psi: psi.clone(),
        table,
    })
}

impl FiniteBessel {
    pub fn field(&self) -> &Arc<FiniteField> {
        &self.field
    }

    pub fn psi(&self) -> &FiniteAdditiveCharacter {
        &self.psi
    }

    /// `J(g)`; `g` must be invertible.
    pub fn value(&self, g: &FiniteMatrix) -> &CycNumber {
        &self.table[&g.index()]
    }

    /// Rows `(g, J(g))` in enumeration order.
    pub fn rows(&self) -> Result<Vec<(FiniteMatrix, CycNumber)>> {
        Ok(enumerate_group(2, self.field.order())?
            .map(|g| {
                let v = self.value(&g).clone();
                (g, v)
            })
            .collect())
    }

    /// CSV with columns `g11,g12,g21,g22,value`.
    pub fn write_csv<W: Write>(&self, mut out: W) -> Result<()> {
        let io = |e: std::io::Error| crate::Error::InvalidParameter(e.to_string());
        writeln!(out, "g11,g12,g21,g22,value").map_err(io)?;
        for (g, v) in self.rows()? {
            let e = g.entries();
            writeln!(out, "{},{},{},{},\"{}\"", e[0], e[1], e[2], e[3], v).map_err(io)?;
        }
        Ok(())
    }

    /// `J(u g) = J(g u) = psi(u) J(g)` for every unipotent `u`.
    pub fn check_transformation_law(&self) -> Result<bool> {
        let unis = unipotent_elements(self.field.clone(), 2);
        for g in enumerate_group(2, self.field.order())? {
            let jg = self.value(&g);
            for u in &unis {
                let expect = self.psi.on_unipotent(u) * jg.clone();
                if *self.value(&u.mul(&g)) != expect || *self.value(&g.mul(u)) != expect {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }
}

/// `sum_{m in N\P} J(g1 m^-1) J(m g2) == J(g1 g2)`.
pub fn bessel_convolution_check(
    bessel: &FiniteBessel,
    g1: &FiniteMatrix,
    g2: &FiniteMatrix,
) -> Result<bool> {
    let reps = unipotent_mirabolic_reps(2, bessel.field.order())?;
    let lhs: CycNumber = reps
        .iter()
        .map(|m| {
            let mi = m.inverse().expect("invertible");
            bessel.value(&g1.mul(&mi)) * bessel.value(&m.mul(g2))
        })
        .sum();
    Ok(lhs == *bessel.value(&g1.mul(g2)))
}

/// The Bessel function of the contragredient with respect to `psi^-1`
/// agrees with `g -> J(g^-1)`.
pub fn bessel_duality_check(
    chi: &CuspidalClassFunction,
    psi: &FiniteAdditiveCharacter,
) -> Result<bool> {
    let j = finite_bessel(chi, psi)?;
    let jd = finite_bessel(&chi.contragredient()?, &psi.inverse())?;
    for g in enumerate_group(2, chi.q())? {
        if jd.value(&g) != j.value(&g.inverse().expect("invertible")) {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cuspidal::{cuspidal_character, RegularCharacter};

    fn setup(q: u32, k: i64) -> (CuspidalClassFunction, FiniteAdditiveCharacter) {
        let chi = cuspidal_character(&RegularCharacter::new(q, 2, k).unwrap()).unwrap();
        let psi = FiniteAdditiveCharacter::standard(chi.field().clone());
        (chi, psi)
    }

    #[test]
    fn q2_examples() {
        let (chi, psi) = setup(2, 1);
        let j = finite_bessel(&chi, &psi).unwrap();
        let f = chi.field().clone();
        let m = |e: &[i64]| FiniteMatrix::from_ints(f.clone(), 2, e);
        assert_eq!(*j.value(&m(&[1, 0, 0, 1])), CycNumber::one());
        assert_eq!(*j.value(&m(&[1, 1, 0, 1])), CycNumber::from(-1));
        assert_eq!(*j.value(&m(&[0, 1, 1, 0])), CycNumber::from(-1));
        assert_eq!(j.rows().unwrap().len(), 6);
    }

    #[test]
    fn laws_hold_exhaustively() {
        for (q, k) in [(2u32, 1i64), (3, 1), (3, 2), (4, 1), (5, 1), (5, 2)] {
            let (chi, psi) = setup(q, k);
            let j = finite_bessel(&chi, &psi).unwrap();
            let one = FiniteMatrix::identity(chi.field().clone(), 2);
            assert_eq!(*j.value(&one), CycNumber::one());
            assert!(j.check_transformation_law().unwrap(), "q={q} k={k}");
            assert!(bessel_duality_check(&chi, &psi).unwrap(), "q={q} k={k}");
        }
    }

    #[test]
    fn convolution_exhaustive_small() {
        for q in [2u32, 3] {
            let (chi, psi) = setup(q, 1);
            let j = finite_bessel(&chi, &psi).unwrap();
            let group: Vec<_> = enumerate_group(2, q).unwrap().collect();
            for g1 in &group {
                for g2 in &group {
                    assert!(bessel_convolution_check(&j, g1, g2).unwrap());
                }
            }
        }
    }

    #[test]
    fn csv_dump() {
        let (chi, psi) = setup(2, 1);
        let j = finite_bessel(&chi, &psi).unwrap();
        let mut buf = Vec::new();
        j.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text.lines().count(), 7);
    }
}
