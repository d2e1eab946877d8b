//! Lattice chains `L_k` in `Q_p^n` with `varpi_E L_k = L_{k+1}`.
//!
//! Exponents are stored in the basis `B` where `psi` is standard, so
//! `L_k = sum_i p^{a_i(k)} v_i`. Matrices act in the rescaled basis
//! `w_i = p^{a_i(0)} v_i` where `L_0 = Z_p^n`.

use num_traits::Zero;

use super::matrix::PadicMatrix;
use super::scalar::{self, p_pow, rat, PadicScalar};
use crate::error::{Error, Result};

#[derive(Clone, Debug)]
pub struct LatticeChain {
    n: usize,
    e: usize,
    /// `a[k][i]` for `k` in `0..e`.
    a: Vec<Vec<i64>>,
    varpi_e: PadicMatrix,
}

impl LatticeChain {
    /// `L_k = p^k Z_p^n`, `varpi_E = p Id`.
    pub fn depth_zero(n: usize, p: u64) -> Self {
        Self {
            n,
            e: 1,
            a: vec![vec![0; n]],
            varpi_e: PadicMatrix::scalar(n, rat(p as i64)),
        }
    }

    /// `varpi_E = [[0, p], [1, 0]]` with period 2.
    pub fn ramified_gl2(p: u64) -> Self {
        Self {
            n: 2,
            e: 2,
            a: vec![vec![-1, 0], vec![0, 0]],
            varpi_e: PadicMatrix::from_ints(2, &[0, p as i64, 1, 0]),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn period(&self) -> usize {
        self.e
    }

    pub fn varpi_e(&self) -> &PadicMatrix {
        &self.varpi_e
    }

    /// `a_i(k)` with `i` in `1..=n` and any integer `k`.
    pub fn a(&self, i: usize, k: i64) -> i64 {
        let e = self.e as i64;
        self.a[k.rem_euclid(e) as usize][i - 1] + k.div_euclid(e)
    }

    /// `t_i = p^{a_i(0) - a_{i+1}(0)}` for `i` in `1..n`.
    pub fn t(&self, p: u64) -> Vec<PadicScalar> {
        (1..self.n)
            .map(|i| p_pow(p, self.a(i, 0) - self.a(i + 1, 0)))
            .collect()
    }

    /// `v` lies in `L_k`, coordinates in the working basis.
    pub fn contains(&self, k: i64, v: &[PadicScalar], p: u64) -> bool {
        v.iter()
            .enumerate()
            .all(|(i, x)| scalar::in_ideal(x, p, self.a(i + 1, k) - self.a(i + 1, 0)))
    }

    fn generators(&self, k: i64, p: u64) -> Vec<Vec<PadicScalar>> {
        (0..self.n)
            .map(|i| {
                let mut v = vec![rat(0); self.n];
                v[i] = p_pow(p, self.a(i + 1, k) - self.a(i + 1, 0));
                v
            })
            .collect()
    }

    fn apply(m: &PadicMatrix, v: &[PadicScalar]) -> Vec<PadicScalar> {
        (0..m.size())
            .map(|i| {
                (0..m.size())
                    .map(|j| m.get(i, j) * &v[j])
                    .fold(rat(0), |a, b| a + b)
            })
            .collect()
    }

    /// Periodicity, monotonicity, normalization, `varpi_E L_k = L_{k+1}` and
    /// the primitivity of the last rows of `varpi_E^i`, `0 <= i < e`.
    pub fn check(&self, p: u64) -> Result<()> {
        let fail = |s: &str| Err(Error::InvalidParameter(format!("lattice chain: {s}")));
        let n = self.n;
        for k in -2 * self.e as i64..2 * self.e as i64 {
            for i in 1..=n {
                if self.a(i, k + self.e as i64) != self.a(i, k) + 1 {
                    return fail("period");
                }
                if self.a(i, k + 1) < self.a(i, k) {
                    return fail("monotonicity");
                }
            }
        }
        if self.a(n, 0) != 0 || self.a(n, -1) != -1 {
            return fail("normalization");
        }
        let inv = self.varpi_e.inverse().ok_or(Error::Singular)?;
        for k in -(self.e as i64)..=self.e as i64 {
            for g in self.generators(k, p) {
                if !self.contains(k + 1, &Self::apply(&self.varpi_e, &g), p) {
                    return fail("varpi_E L_k not inside L_(k+1)");
                }
            }
            for g in self.generators(k + 1, p) {
                if !self.contains(k, &Self::apply(&inv, &g), p) {
                    return fail("L_(k+1) not inside varpi_E L_k");
                }
            }
        }
        let mut pw = PadicMatrix::identity(n);
        for _ in 0..self.e {
            let last = pw.row(n - 1);
            let integral = last.iter().all(|x| scalar::is_integral(x, p));
            let primitive = last.iter().any(|x| !x.is_zero() && scalar::is_unit(x, p));
            if !integral || !primitive {
                return fail("last row of varpi_E^i is not primitive");
            }
            pw = pw.mul(&self.varpi_e);
        }
        if pw != PadicMatrix::scalar(n, rat(p as i64)) {
            return fail("varpi_E^e != p");
        }
        Ok(())
    }
}
