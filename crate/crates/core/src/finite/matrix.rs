//! Square matrices over a finite field and enumeration of `GL_n(F_q)`.

use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::Range;
use std::sync::Arc;

use super::field::{Elem, FiniteField};
use crate::error::{Error, Result};

/// Enumeration refuses groups whose ambient matrix space exceeds this size.
pub const ENUMERATION_LIMIT: u128 = 100_000_000;

#[derive(Clone)]
pub struct FiniteMatrix {
    field: Arc<FiniteField>,
    n: usize,
    entries: Vec<Elem>,
    det: Elem,
}

impl FiniteMatrix {
    /// Row-major entries. Singular matrices are accepted here; group
    /// operations check invertibility where it matters.
    pub fn new(field: Arc<FiniteField>, n: usize, entries: Vec<Elem>) -> Self {
        assert_eq!(entries.len(), n * n, "expected {} entries", n * n);
        let det = determinant(&field, n, &entries);
        Self {
            field,
            n,
            entries,
            det,
        }
    }

    pub fn from_ints(field: Arc<FiniteField>, n: usize, entries: &[i64]) -> Self {
        let e = entries.iter().map(|&x| field.from_int(x)).collect();
        Self::new(field, n, e)
    }

    pub fn identity(field: Arc<FiniteField>, n: usize) -> Self {
        Self::scalar(field, n, 1)
    }

    pub fn scalar(field: Arc<FiniteField>, n: usize, z: Elem) -> Self {
        let mut e = vec![0; n * n];
        for i in 0..n {
            e[i * n + i] = z;
        }
        Self::new(field, n, e)
    }

    /// Upper unipotent matrix with the given strictly-upper entries, row by row.
    pub fn unipotent(field: Arc<FiniteField>, n: usize, upper: &[Elem]) -> Self {
        let mut e = vec![0; n * n];
        let mut it = upper.iter();
        for i in 0..n {
            e[i * n + i] = 1;
            for j in i + 1..n {
                e[i * n + j] = *it.next().expect("n(n-1)/2 upper entries");
            }
        }
        Self::new(field, n, e)
    }

    pub fn field(&self) -> &Arc<FiniteField> {
        &self.field
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn entries(&self) -> &[Elem] {
        &self.entries
    }

    pub fn get(&self, i: usize, j: usize) -> Elem {
        self.entries[i * self.n + j]
    }

    pub fn row(&self, i: usize) -> &[Elem] {
        &self.entries[i * self.n..(i + 1) * self.n]
    }

    pub fn det(&self) -> Elem {
        self.det
    }

    pub fn is_invertible(&self) -> bool {
        self.det != 0
    }

    pub fn trace(&self) -> Elem {
        (0..self.n).fold(0, |acc, i| self.field.add(acc, self.get(i, i)))
    }

    pub fn is_scalar(&self) -> Option<Elem> {
        let z = self.get(0, 0);
        let ok =
            (0..self.n).all(|i| (0..self.n).all(|j| self.get(i, j) == if i == j { z } else { 0 }));
        ok.then_some(z)
    }

    /// Index of this matrix in the enumeration order of all `n x n` matrices.
    pub fn index(&self) -> u64 {
        let q = self.field.order() as u64;
        self.entries.iter().fold(0, |acc, &x| acc * q + x as u64)
    }

    pub fn from_index(field: Arc<FiniteField>, n: usize, mut idx: u64) -> Self {
        let q = field.order() as u64;
        let mut e = vec![0; n * n];
        for slot in e.iter_mut().rev() {
            *slot = (idx % q) as Elem;
            idx /= q;
        }
        Self::new(field, n, e)
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        let n = self.n;
        let f = &self.field;
        let mut e = vec![0; n * n];
        for i in 0..n {
            for j in 0..n {
                let mut acc = 0;
                for k in 0..n {
                    acc = f.add(acc, f.mul(self.get(i, k), rhs.get(k, j)));
                }
                e[i * n + j] = acc;
            }
        }
        Self {
            field: self.field.clone(),
            n,
            entries: e,
            det: f.mul(self.det, rhs.det),
        }
    }

    pub fn inverse(&self) -> Option<Self> {
        let n = self.n;
        let f = &self.field;
        if self.det == 0 {
            return None;
        }
        let mut a = self.entries.clone();
        let mut inv = Self::identity(f.clone(), n).entries;
        for col in 0..n {
            let piv = (col..n).find(|&r| a[r * n + col] != 0)?;
            if piv != col {
                for j in 0..n {
                    a.swap(piv * n + j, col * n + j);
                    inv.swap(piv * n + j, col * n + j);
                }
            }
            let s = f.inv(a[col * n + col])?;
            for j in 0..n {
                a[col * n + j] = f.mul(a[col * n + j], s);
                inv[col * n + j] = f.mul(inv[col * n + j], s);
            }
            for r in 0..n {
                let c = a[r * n + col];
                if r == col || c == 0 {
                    continue;
                }
                for j in 0..n {
                    a[r * n + j] = f.sub(a[r * n + j], f.mul(c, a[col * n + j]));
                    inv[r * n + j] = f.sub(inv[r * n + j], f.mul(c, inv[col * n + j]));
                }
            }
        }
        Some(Self {
            field: f.clone(),
            n,
            entries: inv,
            det: f.inv(self.det)?,
        })
    }

    /// Characteristic polynomial `det(t - g)`, lowest coefficient first, monic.
    pub fn charpoly(&self) -> Vec<Elem> {
        let f = &self.field;
        let n = self.n;
        let m: Vec<Vec<Vec<Elem>>> = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        let c = f.neg(self.get(i, j));
                        if i == j {
                            vec![c, 1]
                        } else {
                            vec![c]
                        }
                    })
                    .collect()
            })
            .collect();
        poly_det(f, m)
    }

    /// Minimal polynomial, lowest coefficient first, monic.
    pub fn minpoly(&self) -> Vec<Elem> {
        let f = &self.field;
        let n = self.n;
        let mut powers: Vec<Vec<Elem>> = vec![Self::identity(f.clone(), n).entries];
        let mut cur = Self::identity(f.clone(), n);
        for d in 1..=n {
            cur = cur.mul(self);
            powers.push(cur.entries.clone());
            if let Some(rel) = linear_relation(f, &powers) {
                debug_assert_eq!(rel.len(), d + 1);
                return rel;
            }
        }
        unreachable!("Cayley-Hamilton bounds the degree")
    }
}

/// Monic relation `sum c_i v_i = 0` with `c_last = 1`, if the last vector is a
/// combination of the earlier ones.
fn linear_relation(f: &FiniteField, vecs: &[Vec<Elem>]) -> Option<Vec<Elem>> {
    let k = vecs.len() - 1;
    let dim = vecs[0].len();
    // Solve sum_{i<k} x_i v_i = -v_k by elimination on the dim x (k+1) system.
    let mut rows: Vec<Vec<Elem>> = (0..dim)
        .map(|r| {
            let mut row: Vec<Elem> = (0..k).map(|i| vecs[i][r]).collect();
            row.push(f.neg(vecs[k][r]));
            row
        })
        .collect();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..k {
        let Some(p) = (r..dim).find(|&i| rows[i][c] != 0) else {
            continue;
        };
        rows.swap(r, p);
        let s = f.inv(rows[r][c]).unwrap();
        for x in rows[r].iter_mut() {
            *x = f.mul(*x, s);
        }
        for i in 0..dim {
            if i != r && rows[i][c] != 0 {
                let m = rows[i][c];
                for j in 0..=k {
                    rows[i][j] = f.sub(rows[i][j], f.mul(m, rows[r][j]));
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    if rows[r..].iter().any(|row| row[k] != 0) {
        return None;
    }
    let mut sol = vec![0; k + 1];
    for (i, &c) in pivots.iter().enumerate() {
        sol[c] = rows[i][k];
    }
    sol[k] = 1;
    Some(sol)
}

fn poly_add(f: &FiniteField, a: &[Elem], b: &[Elem]) -> Vec<Elem> {
    let n = a.len().max(b.len());
    let mut out: Vec<Elem> = (0..n)
        .map(|i| f.add(*a.get(i).unwrap_or(&0), *b.get(i).unwrap_or(&0)))
        .collect();
    while out.len() > 1 && *out.last().unwrap() == 0 {
        out.pop();
    }
    out
}

fn poly_mul(f: &FiniteField, a: &[Elem], b: &[Elem]) -> Vec<Elem> {
    let mut out = vec![0; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = f.add(out[i + j], f.mul(x, y));
        }
    }
    while out.len() > 1 && *out.last().unwrap() == 0 {
        out.pop();
    }
    out
}

/// Laplace expansion along the first row; only used for `n <= 4`.
fn poly_det(f: &FiniteField, m: Vec<Vec<Vec<Elem>>>) -> Vec<Elem> {
    let n = m.len();
    if n == 1 {
        return m[0][0].clone();
    }
    let mut acc = vec![0];
    for j in 0..n {
        let minor: Vec<Vec<Vec<Elem>>> = m[1..]
            .iter()
            .map(|row| {
                row.iter()
                    .enumerate()
                    .filter(|(c, _)| *c != j)
                    .map(|(_, x)| x.clone())
                    .collect()
            })
            .collect();
        let mut term = poly_mul(f, &m[0][j], &poly_det(f, minor));
        if j % 2 == 1 {
            term = term.iter().map(|&x| f.neg(x)).collect();
        }
        acc = poly_add(f, &acc, &term);
    }
    acc
}

fn determinant(f: &FiniteField, n: usize, e: &[Elem]) -> Elem {
    match n {
        1 => e[0],
        2 => f.sub(f.mul(e[0], e[3]), f.mul(e[1], e[2])),
        3 => {
            let t1 = f.mul(e[0], f.sub(f.mul(e[4], e[8]), f.mul(e[5], e[7])));
            let t2 = f.mul(e[1], f.sub(f.mul(e[3], e[8]), f.mul(e[5], e[6])));
            let t3 = f.mul(e[2], f.sub(f.mul(e[3], e[7]), f.mul(e[4], e[6])));
            f.add(f.sub(t1, t2), t3)
        }
        _ => {
            let mut a = e.to_vec();
            let mut det = 1;
            for col in 0..n {
                let Some(piv) = (col..n).find(|&r| a[r * n + col] != 0) else {
                    return 0;
                };
                if piv != col {
                    for j in 0..n {
                        a.swap(piv * n + j, col * n + j);
                    }
                    det = f.neg(det);
                }
                let d = a[col * n + col];
                det = f.mul(det, d);
                let dinv = f.inv(d).unwrap();
                for r in col + 1..n {
                    let c = f.mul(a[r * n + col], dinv);
                    if c != 0 {
                        for j in col..n {
                            a[r * n + j] = f.sub(a[r * n + j], f.mul(c, a[col * n + j]));
                        }
                    }
                }
            }
            det
        }
    }
}

impl PartialEq for FiniteMatrix {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && Arc::ptr_eq(&self.field, &other.field) && self.entries == other.entries
    }
}

impl Eq for FiniteMatrix {}

impl Hash for FiniteMatrix {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.n.hash(state);
        self.entries.hash(state);
    }
}

impl fmt::Debug for FiniteMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for FiniteMatrix {
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

/// `|GL_n(F_q)| = prod_{i<n} (q^n - q^i)`.
pub fn group_order(n: usize, q: u64) -> u128 {
    let qn = (q as u128).pow(n as u32);
    (0..n as u32).map(|i| qn - (q as u128).pow(i)).product()
}

fn space_size(n: usize, q: u32) -> Result<u64> {
    let size = (q as u128).checked_pow((n * n) as u32).unwrap_or(u128::MAX);
    if size > ENUMERATION_LIMIT {
        return Err(Error::TooLarge(size));
    }
    Ok(size as u64)
}

/// Every element of `GL_n(F_q)` exactly once, in increasing [`index`] order.
///
/// [`index`]: FiniteMatrix::index
pub fn enumerate_group(n: usize, q: u32) -> Result<impl Iterator<Item = FiniteMatrix>> {
    let field = FiniteField::of_order(q)?;
    let size = space_size(n, q)?;
    Ok(enumerate_range_unchecked(field, n, 0..size))
}

/// The part of [`enumerate_group`] whose matrix indices fall in `range`; used
/// to split enumeration across workers.
pub fn enumerate_group_range(
    n: usize,
    q: u32,
    range: Range<u64>,
) -> Result<impl Iterator<Item = FiniteMatrix>> {
    let field = FiniteField::of_order(q)?;
    let size = space_size(n, q)?;
    Ok(enumerate_range_unchecked(
        field,
        n,
        range.start.min(size)..range.end.min(size),
    ))
}

/// Number of matrix indices to split with [`enumerate_group_range`].
pub fn enumeration_space(n: usize, q: u32) -> Result<u64> {
    space_size(n, q)
}

fn enumerate_range_unchecked(
    field: Arc<FiniteField>,
    n: usize,
    range: Range<u64>,
) -> impl Iterator<Item = FiniteMatrix> {
    range
        .map(move |i| FiniteMatrix::from_index(field.clone(), n, i))
        .filter(FiniteMatrix::is_invertible)
}
