//! Iwasawa-type decompositions `g = n a k` and `g = p z k` over `Q_p`.

use num_rational::BigRational;
use num_traits::Zero;

use super::matrix::PadicMatrix;
use super::scalar::{self, p_pow};

#[derive(Clone, Debug)]
pub struct Nak {
    pub n: PadicMatrix,
    pub a: PadicMatrix,
    pub k: PadicMatrix,
    /// `v_p` of the diagonal of `a`; independent of the choices made.
    pub valuations: Vec<i64>,
}

/// `g = n a k` with `n` upper unipotent, `a = diag(p^v_i)` and `k` in
/// `GL_n(Z_p)`, by integral column reduction starting from the bottom row.
pub fn iwasawa_nak(g: &PadicMatrix, p: u64) -> Nak {
    let n = g.size();
    let mut b = g.clone();
    let mut c = PadicMatrix::identity(n);
    let mut valuations = vec![0; n];
    for r in (0..n).rev() {
        let (j, v) = (0..=r)
            .filter_map(|j| scalar::val(b.get(r, j), p).map(|v| (j, v)))
            .min_by_key(|&(j, v)| (v, std::cmp::Reverse(j)))
            .expect("g must be invertible");
        if j != r {
            swap_cols(&mut b, j, r);
            swap_cols(&mut c, j, r);
        }
        let pivot = b.get(r, r).clone();
        for jj in 0..r {
            let f = b.get(r, jj) / &pivot;
            if !f.is_zero() {
                col_axpy(&mut b, jj, r, &f);
                col_axpy(&mut c, jj, r, &f);
            }
        }
        let u = &pivot * p_pow(p, -v);
        let uinv = u.recip();
        scale_col(&mut b, r, &uinv);
        scale_col(&mut c, r, &uinv);
        valuations[r] = v;
    }
    let a = PadicMatrix::diag(&valuations.iter().map(|&v| p_pow(p, v)).collect::<Vec<_>>());
    let ainv = PadicMatrix::diag(&valuations.iter().map(|&v| p_pow(p, -v)).collect::<Vec<_>>());
    let nn = b.mul(&ainv);
    let k = c.inverse().expect("column operations are invertible");
    Nak {
        n: nn,
        a,
        k,
        valuations,
    }
}

fn swap_cols(m: &mut PadicMatrix, a: usize, b: usize) {
    for i in 0..m.size() {
        let (x, y) = (m.get(i, a).clone(), m.get(i, b).clone());
        m.set(i, a, y);
        m.set(i, b, x);
    }
}

/// `col_dst -= f * col_src`.
fn col_axpy(m: &mut PadicMatrix, dst: usize, src: usize, f: &BigRational) {
    for i in 0..m.size() {
        let v = m.get(i, dst) - f * m.get(i, src);
        m.set(i, dst, v);
    }
}

fn scale_col(m: &mut PadicMatrix, c: usize, f: &BigRational) {
    for i in 0..m.size() {
        let v = m.get(i, c) * f;
        m.set(i, c, v);
    }
}

#[derive(Clone, Debug)]
pub struct Pzk {
    /// In the mirabolic subgroup: last row `(0, ..., 0, 1)`.
    pub p: PadicMatrix,
    /// `z = p^l Id`.
    pub z: PadicMatrix,
    pub l: i64,
    pub k: PadicMatrix,
}

/// Completes a primitive integral row to an element of `GL_n(Z_p)` with that
/// last row; the rows above are unit vectors avoiding the last unit position.
pub fn complete_row(row: &[BigRational], p: u64) -> Option<PadicMatrix> {
    let n = row.len();
    let j = (0..n).rev().find(|&i| scalar::is_unit(&row[i], p))?;
    let mut e = Vec::with_capacity(n * n);
    for i in (0..n).filter(|&i| i != j) {
        e.extend((0..n).map(|c| scalar::rat((c == i) as i64)));
    }
    e.extend_from_slice(row);
    Some(PadicMatrix::new(n, e))
}

/// `g = p z k` with `p` mirabolic, `z = p^l Id` and `k` in `GL_n(Z_p)`; `l` is
/// the least valuation in the last row of `g`. `None` only for singular `g`.
pub fn iwasawa_pzk(g: &PadicMatrix, p: u64) -> Option<Pzk> {
    let n = g.size();
    let last = g.row(n - 1);
    let l = last.iter().filter_map(|x| scalar::val(x, p)).min()?;
    let scale = p_pow(p, -l);
    let r: Vec<BigRational> = last.iter().map(|x| x * &scale).collect();
    let k = complete_row(&r, p)?;
    let z = PadicMatrix::scalar(n, p_pow(p, l));
    let pm = g.mul(&k.inverse()?).scale(&scale);
    Some(Pzk { p: pm, z, l, k })
}
