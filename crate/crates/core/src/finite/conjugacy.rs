//! Conjugacy classes of `GL_2(F_q)` by label, and a complete conjugacy
//! invariant for `n <= 3`.

use std::sync::Arc;

use super::field::{Elem, FieldExtension, FiniteField};
use super::matrix::FiniteMatrix;
use crate::error::{Error, Result};

/// Class of an element of `GL_2(F_q)`. Eigenvalues of elliptic classes live in
/// `F_{q^2}` and are stored as the smaller encoding of the pair `{x, x^q}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ConjClassLabel {
    Central(Elem),
    CentralUnipotent(Elem),
    SplitRegular(Elem, Elem),
    Elliptic(Elem),
}

impl ConjClassLabel {
    pub fn class_size(&self, q: u64) -> u64 {
        match self {
            Self::Central(_) => 1,
            Self::CentralUnipotent(_) => q * q - 1,
            Self::SplitRegular(..) => q * (q + 1),
            Self::Elliptic(_) => q * (q - 1),
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Self::Central(_) => "central",
            Self::CentralUnipotent(_) => "central-unipotent",
            Self::SplitRegular(..) => "split-regular",
            Self::Elliptic(_) => "elliptic",
        }
    }
}

enum Roots {
    Repeated(Elem),
    Split(Elem, Elem),
    Elliptic(Elem),
}

/// Classifies elements of `GL_2(F_q)`. The root structure of every
/// characteristic polynomial `t^2 - s t + d` is tabulated once.
pub struct Gl2Classifier {
    ext: FieldExtension,
    roots: Vec<Roots>,
}

impl Gl2Classifier {
    pub fn new(base: Arc<FiniteField>) -> Result<Self> {
        let ext = FieldExtension::new(base.clone(), 2)?;
        let q = base.order();
        let e = ext.ext.clone();
        let mut roots = Vec::with_capacity((q * q) as usize);
        for s in 0..q {
            for d in 0..q {
                let (se, de) = (ext.embed(s), ext.embed(d));
                let found: Vec<Elem> = e
                    .elements()
                    .filter(|&x| e.add(e.sub(e.mul(x, x), e.mul(se, x)), de) == 0)
                    .collect();
                let r = match found.as_slice() {
                    [x] => Roots::Repeated(ext.restrict(*x).expect("double root is rational")),
                    [x, y] => match (ext.restrict(*x), ext.restrict(*y)) {
                        (Some(a), Some(b)) => Roots::Split(a.min(b), a.max(b)),
                        _ => Roots::Elliptic((*x).min(*y)),
                    },
                    _ => unreachable!("a quadratic has one or two roots in F_q^2"),
                };
                roots.push(r);
            }
        }
        Ok(Self { ext, roots })
    }

    pub fn base(&self) -> &Arc<FiniteField> {
        &self.ext.base
    }

    pub fn extension(&self) -> &FieldExtension {
        &self.ext
    }

    pub fn classify(&self, g: &FiniteMatrix) -> ConjClassLabel {
        assert_eq!(g.size(), 2);
        let q = self.base().order();
        match self.roots[(g.trace() * q + g.det()) as usize] {
            Roots::Repeated(z) => {
                if g.is_scalar().is_some() {
                    ConjClassLabel::Central(z)
                } else {
                    ConjClassLabel::CentralUnipotent(z)
                }
            }
            Roots::Split(a, b) => ConjClassLabel::SplitRegular(a, b),
            Roots::Elliptic(x) => ConjClassLabel::Elliptic(x),
        }
    }

    /// All labels of `GL_2(F_q)`.
    pub fn labels(&self) -> Vec<ConjClassLabel> {
        let b = self.base();
        let e = &self.ext.ext;
        let units: Vec<Elem> = b.elements().skip(1).collect();
        let mut out: Vec<ConjClassLabel> =
            units.iter().map(|&z| ConjClassLabel::Central(z)).collect();
        out.extend(units.iter().map(|&z| ConjClassLabel::CentralUnipotent(z)));
        for (i, &a) in units.iter().enumerate() {
            for &c in &units[i + 1..] {
                out.push(ConjClassLabel::SplitRegular(a, c));
            }
        }
        for x in e.elements().skip(1) {
            let xq = self.ext.frobenius(x);
            if xq != x && x < xq {
                out.push(ConjClassLabel::Elliptic(x));
            }
        }
        out
    }
}

/// `(characteristic polynomial, minimal polynomial)`: a complete invariant of
/// conjugacy in `GL_n(F_q)` for `n <= 3`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ConjInvariant {
    pub charpoly: Vec<Elem>,
    pub minpoly: Vec<Elem>,
}

pub fn conjugacy_invariant(g: &FiniteMatrix) -> Result<ConjInvariant> {
    if g.size() > 3 {
        return Err(Error::InvalidParameter(
            "conjugacy invariants are only complete for n <= 3".into(),
        ));
    }
    Ok(ConjInvariant {
        charpoly: g.charpoly(),
        minpoly: g.minpoly(),
    })
}

/// Convenience wrapper for one-off classification of a `GL_2` element.
pub fn classify_conjugacy(g: &FiniteMatrix) -> Result<ConjClassLabel> {
    if g.size() != 2 {
        return Err(Error::InvalidParameter(
            "labels are defined for n = 2".into(),
        ));
    }
    Ok(Gl2Classifier::new(g.field().clone())?.classify(g))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::finite::matrix::{enumerate_group, group_order};
    use std::collections::{HashMap, HashSet};

    #[test]
    fn examples() {
        let f2 = FiniteField::new(2, 1).unwrap();
        let id = FiniteMatrix::identity(f2.clone(), 2);
        assert_eq!(classify_conjugacy(&id).unwrap(), ConjClassLabel::Central(1));
        let u = FiniteMatrix::from_ints(f2.clone(), 2, &[1, 1, 0, 1]);
        assert_eq!(
            classify_conjugacy(&u).unwrap(),
            ConjClassLabel::CentralUnipotent(1)
        );
        let e = FiniteMatrix::from_ints(f2, 2, &[0, 1, 1, 1]);
        assert_eq!(classify_conjugacy(&e).unwrap().kind(), "elliptic");
    }

    #[test]
    fn class_equation() {
        for q in [2u32, 3, 4, 5] {
            let field = FiniteField::of_order(q).unwrap();
            let cl = Gl2Classifier::new(field).unwrap();
            let mut counts: HashMap<ConjClassLabel, u64> = HashMap::new();
            for g in enumerate_group(2, q).unwrap() {
                *counts.entry(cl.classify(&g)).or_default() += 1;
            }
            let labels = cl.labels();
            assert_eq!(labels.len(), counts.len());
            let mut total = 0;
            for l in labels {
                assert_eq!(counts[&l], l.class_size(q as u64), "q={q} {l:?}");
                total += l.class_size(q as u64);
            }
            assert_eq!(total as u128, group_order(2, q as u64));
        }
    }

    #[test]
    fn labels_are_conjugation_invariant() {
        let field = FiniteField::of_order(3).unwrap();
        let cl = Gl2Classifier::new(field).unwrap();
        let group: Vec<_> = enumerate_group(2, 3).unwrap().collect();
        for g in &group {
            let l = cl.classify(g);
            for h in group.iter().step_by(5) {
                let c = h.mul(g).mul(&h.inverse().unwrap());
                assert_eq!(cl.classify(&c), l);
            }
        }
    }

    #[test]
    fn elliptic_eigenvalues_form_frobenius_orbits() {
        let field = FiniteField::of_order(5).unwrap();
        let cl = Gl2Classifier::new(field).unwrap();
        for l in cl.labels() {
            if let ConjClassLabel::Elliptic(x) = l {
                let ext = cl.extension();
                assert!(ext.restrict(x).is_none());
                assert_ne!(ext.frobenius(x), x);
            }
        }
    }

    #[test]
    fn invariant_counts_classes_for_gl3() {
        for q in [2u32, 3] {
            let mut sizes: HashMap<ConjInvariant, u64> = HashMap::new();
            for g in enumerate_group(3, q).unwrap() {
                *sizes.entry(conjugacy_invariant(&g).unwrap()).or_default() += 1;
            }
            // Number of classes of GL_3(F_q) is q^3 - q.
            assert_eq!(sizes.len() as u64, (q * q * q - q) as u64);
            let group: Vec<_> = enumerate_group(3, 2).unwrap().collect();
            if q == 2 {
                let mut seen = HashSet::new();
                for g in &group {
                    let inv = conjugacy_invariant(g).unwrap();
                    for h in group.iter().step_by(17) {
                        let c = h.mul(g).mul(&h.inverse().unwrap());
                        assert_eq!(conjugacy_invariant(&c).unwrap(), inv);
                    }
                    seen.insert(inv);
                }
                assert_eq!(seen.len(), 6);
            }
        }
    }
}
