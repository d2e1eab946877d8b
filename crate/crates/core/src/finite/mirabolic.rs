//! Coset representatives for the mirabolic subgroup `P_n(F_q)` (last row
//! `(0, ..., 0, 1)`) and for `N_n(F_q)\P_n(F_q)`.

use std::collections::BTreeMap;
use std::sync::Arc;

use super::field::{Elem, FiniteField};
use super::matrix::{enumerate_group, FiniteMatrix};
use crate::error::Result;

/// Completes a nonzero row `v` to an invertible matrix with last row `v`:
/// the rows above are the unit vectors `e_i` for `i` different from the last
/// nonzero position of `v`.
pub fn complete_bottom_row(field: Arc<FiniteField>, v: &[Elem]) -> Option<FiniteMatrix> {
    let n = v.len();
    let j = (0..n).rev().find(|&i| v[i] != 0)?;
    let mut e = Vec::with_capacity(n * n);
    for i in (0..n).filter(|&i| i != j) {
        e.extend((0..n).map(|c| Elem::from(c == i)));
    }
    e.extend_from_slice(v);
    Some(FiniteMatrix::new(field, n, e))
}

/// Representatives of `P_n(F_q)\GL_n(F_q)`, one per nonzero bottom row, in
/// increasing order of the row read as a base-`q` number.
pub fn mirabolic_coset_reps(n: usize, q: u32) -> Result<Vec<FiniteMatrix>> {
    let field = FiniteField::of_order(q)?;
    let total = (q as u64).pow(n as u32);
    Ok((1..total)
        .map(|mut idx| {
            let mut v = vec![0; n];
            for slot in v.iter_mut().rev() {
                *slot = (idx % q as u64) as Elem;
                idx /= q as u64;
            }
            complete_bottom_row(field.clone(), &v).expect("nonzero row")
        })
        .collect())
}

pub fn is_mirabolic(g: &FiniteMatrix) -> bool {
    let n = g.size();
    g.row(n - 1)
        .iter()
        .enumerate()
        .all(|(j, &x)| x == Elem::from(j == n - 1))
}

/// Representatives of `N_n(F_q)\P_n(F_q)`, embedded as `diag(h, 1)` with `h`
/// running over `N_{n-1}\GL_{n-1}`; each orbit is represented by its element
/// of least enumeration index.
pub fn unipotent_mirabolic_reps(n: usize, q: u32) -> Result<Vec<FiniteMatrix>> {
    let field = FiniteField::of_order(q)?;
    if n == 1 {
        return Ok(vec![FiniteMatrix::identity(field, 1)]);
    }
    let m = n - 1;
    let unis = unipotent_elements(field.clone(), m);
    let mut reps: BTreeMap<u64, FiniteMatrix> = BTreeMap::new();
    for h in enumerate_group(m, q)? {
        let min = unis
            .iter()
            .map(|u| u.mul(&h))
            .min_by_key(FiniteMatrix::index)
            .unwrap();
        reps.entry(min.index()).or_insert(min);
    }
    Ok(reps
        .into_values()
        .map(|h| {
            let mut e = vec![0; n * n];
            for i in 0..m {
                for j in 0..m {
                    e[i * n + j] = h.get(i, j);
                }
            }
            e[n * n - 1] = 1;
            FiniteMatrix::new(field.clone(), n, e)
        })
        .collect())
}

/// All of `N_n(F_q)`.
pub fn unipotent_elements(field: Arc<FiniteField>, n: usize) -> Vec<FiniteMatrix> {
    let k = n * (n - 1) / 2;
    let q = field.order() as u64;
    (0..q.pow(k as u32))
        .map(|mut idx| {
            let mut upper = vec![0; k];
            for slot in upper.iter_mut().rev() {
                *slot = (idx % q) as Elem;
                idx /= q;
            }
            FiniteMatrix::unipotent(field.clone(), n, &upper)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    #[test]
    fn coset_counts() {
        assert_eq!(mirabolic_coset_reps(2, 2).unwrap().len(), 3);
        assert_eq!(mirabolic_coset_reps(2, 3).unwrap().len(), 8);
        assert_eq!(mirabolic_coset_reps(1, 5).unwrap().len(), 4);
    }

    #[test]
    fn bottom_row_bijection() {
        for q in [2u32, 3] {
            let reps = mirabolic_coset_reps(2, q).unwrap();
            let inv: Vec<_> = reps.iter().map(|r| r.inverse().unwrap()).collect();
            let rows: HashSet<Vec<Elem>> = reps.iter().map(|r| r.row(1).to_vec()).collect();
            assert_eq!(rows.len(), reps.len());
            for g in enumerate_group(2, q).unwrap() {
                let hits = inv.iter().filter(|ri| is_mirabolic(&g.mul(ri))).count();
                assert_eq!(hits, 1, "q={q} g={g}");
            }
        }
    }

    #[test]
    fn unipotent_mirabolic_counts() {
        assert_eq!(unipotent_mirabolic_reps(2, 3).unwrap().len(), 2);
        assert_eq!(unipotent_mirabolic_reps(2, 5).unwrap().len(), 4);
        // |N_2\GL_2(F_2)| = 6 / 2.
        assert_eq!(unipotent_mirabolic_reps(3, 2).unwrap().len(), 3);
        for r in unipotent_mirabolic_reps(3, 3).unwrap() {
            assert!(is_mirabolic(&r));
        }
    }
}
