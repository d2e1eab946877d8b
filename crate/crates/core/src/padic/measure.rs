//! Haar measures on `G = GL_n(Q_p)`, the mirabolic `P`, the centre `Z`, the
//! unipotent radical `N` and the quotient `(P cap K)\K`.
//!
//! Normalizations: `K^1`, `P cap K^1`, `Z cap K^1`, `N cap K^1` and the image
//! of `K^1` in `(P cap K)\K` all have volume 1. Finite-level subsets are
//! unions of cosets of the level-`m` congruence subgroup, given by residues
//! modulo `p^m`.

use std::collections::HashSet;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;

use super::scalar::p_pow;
use crate::arith::int::{gcd, ipow};
use crate::error::{Error, Result};
use crate::finite::{enumerate_group, group_order};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Ambient {
    G,
    P,
    Z,
    N,
    /// `(P cap K)\K`, cells indexed by primitive bottom rows.
    MirabolicQuotient,
}

/// A finite union of level-`m` cells, each named by its residues mod `p^m`:
/// `n^2` entries for `G` and `P`, one for `Z`, the strictly upper entries for
/// `N`, a bottom row for the quotient. `level = None` stands for a set that
/// is not of finite level.
#[derive(Clone, Debug)]
pub struct Subset {
    pub ambient: Ambient,
    pub level: Option<u32>,
    pub reps: Vec<Vec<u64>>,
}

#[derive(Clone, Copy, Debug)]
pub struct MeasureContext {
    pub n: usize,
    pub q: u64,
}

impl MeasureContext {
    pub fn new(n: usize, q: u64) -> Self {
        Self { n, q }
    }

    fn dim(&self, ambient: Ambient) -> i64 {
        let n = self.n as i64;
        match ambient {
            Ambient::G => n * n,
            Ambient::P => n * n - n,
            Ambient::Z => 1,
            Ambient::N => n * (n - 1) / 2,
            Ambient::MirabolicQuotient => n,
        }
    }

    /// Volume of one level-`m` cell, `q^{-(m-1) dim}`.
    pub fn cell_volume(&self, ambient: Ambient, m: u32) -> BigRational {
        p_pow(self.q, -(m as i64 - 1) * self.dim(ambient))
    }

    pub fn volume(&self, s: &Subset) -> Result<BigRational> {
        let m = match s.level {
            Some(m) if m >= 1 => m,
            _ => return Err(Error::UnsupportedDescriptor),
        };
        let pm = ipow(self.q, m);
        let mut seen = HashSet::new();
        for r in &s.reps {
            let r: Vec<u64> = r.iter().map(|x| x % pm).collect();
            if !self.valid(s.ambient, &r)? {
                return Err(Error::InvalidParameter(format!(
                    "{r:?} is not a cell of {:?}",
                    s.ambient
                )));
            }
            seen.insert(r);
        }
        Ok(self.cell_volume(s.ambient, m) * BigInt::from(seen.len()))
    }

    fn valid(&self, ambient: Ambient, r: &[u64]) -> Result<bool> {
        let n = self.n;
        let q = self.q;
        let unit = |x: u64| gcd(x, q) == 1;
        let len_ok = r.len() as i64
            == match ambient {
                Ambient::G | Ambient::P => (n * n) as i64,
                _ => self.dim(ambient),
            };
        if !len_ok {
            return Ok(false);
        }
        Ok(match ambient {
            Ambient::G => unit(det_mod(n, r, q)),
            Ambient::P => {
                let last = &r[n * (n - 1)..];
                let pm_ok = last[..n - 1].iter().all(|&x| x == 0) && last[n - 1] == 1;
                pm_ok && unit(det_mod(n, r, q))
            }
            Ambient::Z => unit(r[0]),
            Ambient::N => true,
            Ambient::MirabolicQuotient => r.iter().any(|&x| unit(x)),
        })
    }

    /// `vol_G(K) = |GL_n(F_q)|`.
    pub fn vol_k(&self) -> BigRational {
        BigRational::from_integer(BigInt::from(group_order(self.n, self.q)))
    }

    /// `vol_Z(Z cap K) = q - 1`: the factor by which the product measure
    /// `dp dz dk` exceeds `dg`.
    pub fn split_factor(&self) -> BigRational {
        BigRational::from_integer(BigInt::from(self.q - 1))
    }

    /// `vol_N(N cap a K^m a^-1)` for `a = diag(p^{v_1}, ..., p^{v_n})`.
    pub fn vol_n_conjugate(&self, v: &[i64], m: u32) -> BigRational {
        let mut out = BigRational::one();
        for i in 0..self.n {
            for j in i + 1..self.n {
                out *= p_pow(self.q, 1 - (m as i64 + v[i] - v[j]));
            }
        }
        out
    }
}

/// Determinant modulo `q` of an `n x n` residue matrix (entries reduced).
fn det_mod(n: usize, r: &[u64], q: u64) -> u64 {
    let mut a: Vec<i128> = r.iter().map(|&x| (x % q) as i128).collect();
    let q = q as i128;
    let mut det: i128 = 1;
    for c in 0..n {
        let Some(p) = (c..n).find(|&i| a[i * n + c] % q != 0) else {
            return 0;
        };
        if p != c {
            for j in 0..n {
                a.swap(p * n + j, c * n + j);
            }
            det = -det;
        }
        let d = a[c * n + c];
        det = (det * d).rem_euclid(q);
        let dinv = crate::arith::int::inv_mod(d, q).expect("q is prime");
        for i in c + 1..n {
            let f = (a[i * n + c] * dinv).rem_euclid(q);
            for j in c..n {
                a[i * n + j] = (a[i * n + j] - f * a[c * n + j]).rem_euclid(q);
            }
        }
    }
    det.rem_euclid(q) as u64
}

/// Exact checks of the measure normalizations on `K` for `GL_n(Q_q)`.
#[derive(Clone, Debug)]
pub struct SplittingReport {
    pub n: usize,
    pub q: u64,
    /// `vol_G(K)` from level-1 cells of `K`.
    pub vol_g_k: BigRational,
    pub group_order: u128,
    /// `vol_P(P cap K)`, `vol_Z(Z cap K)`, `vol((P cap K)\K)` from level-1 cells.
    pub vol_p: BigRational,
    pub vol_z: BigRational,
    pub vol_quotient: BigRational,
    /// Level-2 volumes of `K^1` in each factor; all equal to 1.
    pub k1_volumes: [BigRational; 4],
    /// `vol_G(K) == vol_P(P cap K) vol((P cap K)\K)`.
    pub pk_splitting: bool,
    /// `vol_P(P cap K) vol_Z(Z cap K) vol((P cap K)\K) / vol_G(K)`.
    pub pzk_ratio: BigRational,
}

impl SplittingReport {
    /// `dg = dp dz dk` holds on `K`.
    pub fn pzk_splitting(&self) -> bool {
        self.pzk_ratio.is_one()
    }
}

pub fn splitting_report(n: usize, q: u64) -> Result<SplittingReport> {
    let ctx = MeasureContext::new(n, q);
    let group: Vec<Vec<u64>> = enumerate_group(n, q as u32)?
        .map(|g| g.entries().iter().map(|&x| x as u64).collect())
        .collect();
    let mirabolic: Vec<Vec<u64>> = group
        .iter()
        .filter(|e| {
            let last = &e[n * (n - 1)..];
            last[..n - 1].iter().all(|&x| x == 0) && last[n - 1] == 1
        })
        .cloned()
        .collect();
    let rows: Vec<Vec<u64>> = group.iter().map(|e| e[n * (n - 1)..].to_vec()).collect();
    let vol = |ambient, reps: Vec<Vec<u64>>, level| {
        ctx.volume(&Subset {
            ambient,
            level: Some(level),
            reps,
        })
    };
    let vol_g_k = vol(Ambient::G, group, 1)?;
    let vol_p = vol(Ambient::P, mirabolic, 1)?;
    let vol_z = vol(Ambient::Z, (1..q).map(|z| vec![z]).collect(), 1)?;
    let vol_quotient = vol(Ambient::MirabolicQuotient, rows, 1)?;

    // K^1 at level 2: residues congruent to the identity (resp. the bottom
    // row (0, ..., 0, 1)) modulo p.
    let q2 = q * q;
    let lifts = |len: usize, base: &dyn Fn(usize) -> u64| -> Vec<Vec<u64>> {
        let count = ipow(q, len as u32);
        (0..count)
            .map(|mut idx| {
                (0..len)
                    .map(|i| {
                        let d = idx % q;
                        idx /= q;
                        (base(i) + d * q) % q2
                    })
                    .collect()
            })
            .collect()
    };
    let ident = |i: usize| u64::from(i / n == i % n);
    let k1_g = lifts(n * n, &ident);
    let k1_p: Vec<Vec<u64>> = k1_g
        .iter()
        .filter(|e| {
            let last = &e[n * (n - 1)..];
            last[..n - 1].iter().all(|&x| x == 0) && last[n - 1] == 1
        })
        .cloned()
        .collect();
    let k1_z = lifts(1, &|_| 1);
    let k1_row = lifts(n, &|i| u64::from(i == n - 1));
    let k1_volumes = [
        vol(Ambient::G, k1_g, 2)?,
        vol(Ambient::P, k1_p, 2)?,
        vol(Ambient::Z, k1_z, 2)?,
        vol(Ambient::MirabolicQuotient, k1_row, 2)?,
    ];
    let pk_splitting = vol_g_k == &vol_p * &vol_quotient;
    let pzk_ratio = &vol_p * &vol_z * &vol_quotient / &vol_g_k;
    Ok(SplittingReport {
        n,
        q,
        vol_g_k,
        group_order: group_order(n, q),
        vol_p,
        vol_z,
        vol_quotient,
        k1_volumes,
        pk_splitting,
        pzk_ratio,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::padic::scalar::rat;

    #[test]
    fn examples() {
        let ctx = MeasureContext::new(2, 2);
        assert_eq!(ctx.cell_volume(Ambient::G, 1), rat(1));
        let k = Subset {
            ambient: Ambient::G,
            level: Some(1),
            reps: enumerate_group(2, 2)
                .unwrap()
                .map(|g| g.entries().iter().map(|&x| x as u64).collect())
                .collect(),
        };
        assert_eq!(ctx.volume(&k).unwrap(), rat(6));
        let quotient = Subset {
            ambient: Ambient::MirabolicQuotient,
            level: Some(1),
            reps: vec![vec![0, 1], vec![1, 0], vec![1, 1]],
        };
        assert_eq!(ctx.volume(&quotient).unwrap(), rat(3));
        let bad = Subset {
            ambient: Ambient::G,
            level: None,
            reps: vec![],
        };
        assert_eq!(ctx.volume(&bad), Err(Error::UnsupportedDescriptor));
    }

    #[test]
    fn pro_p_volumes_are_powers_of_q() {
        let ctx = MeasureContext::new(2, 3);
        assert_eq!(
            ctx.cell_volume(Ambient::G, 2),
            crate::padic::scalar::ratio(1, 81)
        );
        assert_eq!(
            ctx.cell_volume(Ambient::MirabolicQuotient, 3),
            crate::padic::scalar::ratio(1, 81)
        );
    }

    #[test]
    fn report_q3() {
        let r = splitting_report(2, 3).unwrap();
        assert_eq!(r.vol_g_k, rat(48));
        assert!(r.k1_volumes.iter().all(|v| v.is_one()));
        assert!(r.pk_splitting);
        assert_eq!(r.pzk_ratio, rat(2));
        assert!(!r.pzk_splitting());
    }

    #[test]
    fn conjugation_scales_by_abs_det() {
        // P cap K^m conjugated by diag(p^l, 1), counted at level m + l.
        let (q, m, l) = (3u64, 1u32, 2u32);
        let ctx = MeasureContext::new(2, q);
        let pm = ipow(q, m);
        let ml = ipow(q, m + l);
        let mut reps = Vec::new();
        for a in 0..ml {
            for c in 0..ml {
                let a_ok = (a + ml - 1).is_multiple_of(pm);
                let c_ok = c % ipow(q, m + l) == 0;
                if a_ok && c_ok {
                    reps.push(vec![a, c, 0, 1]);
                }
            }
        }
        let conj = ctx
            .volume(&Subset {
                ambient: Ambient::P,
                level: Some(m + l),
                reps,
            })
            .unwrap();
        let base = ctx.cell_volume(Ambient::P, m);
        assert_eq!(conj, base * p_pow(q, -(l as i64)));
    }
}
