//! Square matrices over `Q_p` with exact rational entries.

use std::fmt;

use num_rational::BigRational;
use num_traits::{One, Zero};

use super::scalar::{self, rat, PadicScalar};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PadicMatrix {
    n: usize,
    e: Vec<PadicScalar>,
}

impl PadicMatrix {
    pub fn new(n: usize, entries: Vec<PadicScalar>) -> Self {
        assert_eq!(entries.len(), n * n);
        Self { n, e: entries }
    }

    pub fn from_ints(n: usize, entries: &[i64]) -> Self {
        Self::new(n, entries.iter().map(|&x| rat(x)).collect())
    }

    pub fn identity(n: usize) -> Self {
        Self::scalar(n, BigRational::one())
    }

    pub fn scalar(n: usize, z: PadicScalar) -> Self {
        Self::diag(&vec![z; n])
    }

    pub fn diag(d: &[PadicScalar]) -> Self {
        let n = d.len();
        let mut e = vec![BigRational::zero(); n * n];
        for (i, x) in d.iter().enumerate() {
            e[i * n + i] = x.clone();
        }
        Self { n, e }
    }

    /// Upper unipotent with the given strictly-upper entries, row by row.
    pub fn unipotent(n: usize, upper: &[PadicScalar]) -> Self {
        let mut m = Self::identity(n);
        let mut it = upper.iter();
        for i in 0..n {
            for j in i + 1..n {
                m.e[i * n + j] = it.next().expect("n(n-1)/2 entries").clone();
            }
        }
        m
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> &PadicScalar {
        &self.e[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, x: PadicScalar) {
        self.e[i * self.n + j] = x;
    }

    pub fn entries(&self) -> &[PadicScalar] {
        &self.e
    }

    pub fn row(&self, i: usize) -> &[PadicScalar] {
        &self.e[i * self.n..(i + 1) * self.n]
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        let n = self.n;
        let mut e = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                let mut acc = BigRational::zero();
                for k in 0..n {
                    let (a, b) = (self.get(i, k), rhs.get(k, j));
                    if !a.is_zero() && !b.is_zero() {
                        acc += a * b;
                    }
                }
                e.push(acc);
            }
        }
        Self { n, e }
    }

    pub fn scale(&self, c: &PadicScalar) -> Self {
        Self {
            n: self.n,
            e: self.e.iter().map(|x| x * c).collect(),
        }
    }

    pub fn det(&self) -> PadicScalar {
        let n = self.n;
        match n {
            1 => self.e[0].clone(),
            2 => &self.e[0] * &self.e[3] - &self.e[1] * &self.e[2],
            _ => {
                let mut a = self.e.clone();
                let mut det = BigRational::one();
                for c in 0..n {
                    let Some(p) = (c..n).find(|&r| !a[r * n + c].is_zero()) else {
                        return BigRational::zero();
                    };
                    if p != c {
                        for j in 0..n {
                            a.swap(p * n + j, c * n + j);
                        }
                        det = -det;
                    }
                    let d = a[c * n + c].clone();
                    det *= &d;
                    for r in c + 1..n {
                        let f = &a[r * n + c] / &d;
                        if !f.is_zero() {
                            for j in c..n {
                                let t = &f * &a[c * n + j];
                                a[r * n + j] -= t;
                            }
                        }
                    }
                }
                det
            }
        }
    }

    pub fn inverse(&self) -> Option<Self> {
        let n = self.n;
        if n == 2 {
            let d = self.det();
            if d.is_zero() {
                return None;
            }
            let e = &self.e;
            return Some(Self {
                n,
                e: vec![&e[3] / &d, -&e[1] / &d, -&e[2] / &d, &e[0] / &d],
            });
        }
        let mut a = self.e.clone();
        let mut inv = Self::identity(n).e;
        for c in 0..n {
            let p = (c..n).find(|&r| !a[r * n + c].is_zero())?;
            if p != c {
                for j in 0..n {
                    a.swap(p * n + j, c * n + j);
                    inv.swap(p * n + j, c * n + j);
                }
            }
            let s = a[c * n + c].recip();
            for j in 0..n {
                a[c * n + j] *= &s;
                inv[c * n + j] *= &s;
            }
            for r in 0..n {
                if r == c || a[r * n + c].is_zero() {
                    continue;
                }
                let f = a[r * n + c].clone();
                for j in 0..n {
                    let (t1, t2) = (&f * &a[c * n + j], &f * &inv[c * n + j]);
                    a[r * n + j] -= t1;
                    inv[r * n + j] -= t2;
                }
            }
        }
        Some(Self { n, e: inv })
    }

    pub fn val_det(&self, p: u64) -> Option<i64> {
        scalar::val(&self.det(), p)
    }

    /// All entries in `p^k Z_p`.
    pub fn entries_in_ideal(&self, p: u64, k: i64) -> bool {
        self.e.iter().all(|x| scalar::in_ideal(x, p, k))
    }

    /// Membership in `K = GL_n(Z_p)`.
    pub fn in_k(&self, p: u64) -> bool {
        self.entries_in_ideal(p, 0) && self.val_det(p) == Some(0)
    }

    /// Membership in the principal congruence subgroup `K^m = 1 + p^m M_n(Z_p)`.
    pub fn in_k_level(&self, p: u64, m: i64) -> bool {
        self.e.iter().enumerate().all(|(idx, x)| {
            let d = if idx / self.n == idx % self.n {
                x - BigRational::one()
            } else {
                x.clone()
            };
            scalar::in_ideal(&d, p, m)
        })
    }

    pub fn is_upper_unipotent(&self) -> bool {
        (0..self.n).all(|i| {
            (0..self.n).all(|j| {
                let x = self.get(i, j);
                if i == j {
                    x.is_one()
                } else if i > j {
                    x.is_zero()
                } else {
                    true
                }
            })
        })
    }

    /// Entries reduced modulo `p^m`, for a matrix with integral entries.
    pub fn residues(&self, p: u64, m: u32) -> Option<Vec<u64>> {
        self.e.iter().map(|x| scalar::residue(x, p, m)).collect()
    }
}

impl fmt::Debug for PadicMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for PadicMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.n {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "[")?;
            for j in 0..self.n {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", self.get(i, j))?;
            }
            write!(f, "]")?;
        }
        write!(f, "]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::padic::scalar::ratio;

    #[test]
    fn inverse_and_det() {
        let g = PadicMatrix::new(
            3,
            vec![
                rat(2),
                rat(1),
                rat(0),
                ratio(1, 3),
                rat(3),
                rat(1),
                rat(0),
                rat(5),
                rat(9),
            ],
        );
        let h = g.inverse().unwrap();
        assert_eq!(g.mul(&h), PadicMatrix::identity(3));
        let a = PadicMatrix::from_ints(2, &[0, 3, 1, 0]);
        assert_eq!(a.val_det(3), Some(1));
        assert_eq!(a.mul(&a), PadicMatrix::scalar(2, rat(3)));
    }

    #[test]
    fn valuation_of_det_is_additive() {
        let a = PadicMatrix::from_ints(2, &[9, 1, 3, 2]);
        let b = PadicMatrix::new(2, vec![ratio(1, 3), rat(1), rat(0), rat(6)]);
        assert_eq!(
            a.mul(&b).val_det(3),
            Some(a.val_det(3).unwrap() + b.val_det(3).unwrap())
        );
    }

    #[test]
    fn congruence_levels() {
        let k = PadicMatrix::from_ints(2, &[10, 9, 0, 1]);
        assert!(k.in_k_level(3, 2));
        assert!(!k.in_k_level(3, 3));
        assert!(k.in_k(3));
    }
}
