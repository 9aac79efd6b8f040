//! Banded LU factorization without pivoting.
//!
//! The implicit Euler step couples displacement and pressure nodes into a
//! block system that, with unknowns interleaved per node, has bandwidth 3.
//! Scaling the mass-balance rows by `dt` makes the symmetric part of the
//! matrix positive definite, so every leading principal minor is
//! nonsingular and the unpivoted factorization exists; fill-in then stays
//! inside the band. The factorization is computed once per solver and
//! reused by every time step, both for the forward sweep and (via the
//! transpose solves) for the adjoint sweep.

use crate::{Error, Result};

/// Row-major band storage: entry `(i, j)` with `-ku <= i - j <= kl` lives
/// at `data[(ku + i - j) * n + j]`.
#[derive(Debug, Clone)]
pub(crate) struct BandMatrix {
    n: usize,
    kl: usize,
    ku: usize,
    data: Vec<f64>,
}

impl BandMatrix {
    pub fn zeros(n: usize, kl: usize, ku: usize) -> Self {
        Self { n, kl, ku, data: vec![0.0; (kl + ku + 1) * n] }
    }

    #[inline]
    fn idx(&self, i: usize, j: usize) -> usize {
        debug_assert!(i + self.ku >= j && j + self.kl >= i);
        (self.ku + i - j) * self.n + j
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[self.idx(i, j)]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        let at = self.idx(i, j);
        self.data[at] = v;
    }

    #[inline]
    pub fn add(&mut self, i: usize, j: usize, v: f64) {
        let at = self.idx(i, j);
        self.data[at] += v;
    }

    /// Factor in place; `L` has unit diagonal and is stored below it.
    pub fn factorize(mut self) -> Result<BandLu> {
        let (n, kl, ku) = (self.n, self.kl, self.ku);
        for col in 0..n {
            let pivot = self.get(col, col);
            if pivot.abs() < 1e-300 {
                return Err(Error::SingularSystem { column: col, pivot });
            }
            let i_end = (col + kl).min(n - 1);
            let j_end = (col + ku).min(n - 1);
            for i in col + 1..=i_end {
                let l = self.get(i, col) / pivot;
                self.set(i, col, l);
                for j in col + 1..=j_end {
                    let u = self.get(col, j);
                    if u != 0.0 {
                        self.add(i, j, -l * u);
                    }
                }
            }
        }
        Ok(BandLu { band: self })
    }
}

/// Factored band matrix supporting `A x = b` and `A^T x = b` solves.
#[derive(Debug, Clone)]
pub(crate) struct BandLu {
    band: BandMatrix,
}

impl BandLu {
    pub fn solve_in_place(&self, b: &mut [f64]) {
        let a = &self.band;
        let (n, kl, ku) = (a.n, a.kl, a.ku);
        debug_assert_eq!(b.len(), n);
        for k in 0..n {
            let bk = b[k];
            if bk != 0.0 {
                for i in k + 1..=(k + kl).min(n - 1) {
                    b[i] -= a.get(i, k) * bk;
                }
            }
        }
        for k in (0..n).rev() {
            let mut s = b[k];
            for j in k + 1..=(k + ku).min(n - 1) {
                s -= a.get(k, j) * b[j];
            }
            b[k] = s / a.get(k, k);
        }
    }

    /// Solve `A^T x = b` using the same factors (`A^T = U^T L^T`).
    pub fn solve_transpose_in_place(&self, b: &mut [f64]) {
        let a = &self.band;
        let (n, kl, ku) = (a.n, a.kl, a.ku);
        debug_assert_eq!(b.len(), n);
        // U^T is lower triangular with the diagonal of U.
        for i in 0..n {
            let mut s = b[i];
            for j in i.saturating_sub(ku)..i {
                s -= a.get(j, i) * b[j];
            }
            b[i] = s / a.get(i, i);
        }
        // L^T is unit upper triangular.
        for i in (0..n).rev() {
            let mut s = b[i];
            for j in i + 1..=(i + kl).min(n - 1) {
                s -= a.get(j, i) * b[j];
            }
            b[i] = s;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    fn dense_matvec(a: &[Vec<f64>], x: &[f64]) -> Vec<f64> {
        a.iter().map(|row| row.iter().zip(x).map(|(r, v)| r * v).sum()).collect()
    }

    fn random_band_system(n: usize, kl: usize, ku: usize, seed: u64) -> (BandMatrix, Vec<Vec<f64>>) {
        let mut rng = StdRng::seed_from_u64(seed);
        let mut band = BandMatrix::zeros(n, kl, ku);
        let mut dense = vec![vec![0.0; n]; n];
        for i in 0..n {
            for j in 0..n {
                if i + ku >= j && j + kl >= i {
                    // Diagonally dominant so the unpivoted factorization is stable.
                    let v = if i == j { 8.0 + rng.gen_range(0.0..2.0) } else { rng.gen_range(-1.0..1.0) };
                    band.set(i, j, v);
                    dense[i][j] = v;
                }
            }
        }
        (band, dense)
    }

    #[test]
    fn solves_match_dense_residuals() {
        for (n, kl, ku, seed) in [(1, 0, 0, 1), (5, 1, 2, 2), (40, 3, 3, 3), (173, 3, 3, 4)] {
            let (band, dense) = random_band_system(n, kl, ku, seed);
            let lu = band.factorize().unwrap();
            let mut rng = StdRng::seed_from_u64(seed + 100);
            let b: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();

            let mut x = b.clone();
            lu.solve_in_place(&mut x);
            let r = dense_matvec(&dense, &x);
            for (ri, bi) in r.iter().zip(&b) {
                assert!((ri - bi).abs() < 1e-10, "residual {}", ri - bi);
            }

            let mut y = b.clone();
            lu.solve_transpose_in_place(&mut y);
            let mut rt = vec![0.0; n];
            for i in 0..n {
                for j in 0..n {
                    rt[j] += dense[i][j] * y[i];
                }
            }
            for (ri, bi) in rt.iter().zip(&b) {
                assert!((ri - bi).abs() < 1e-10, "transpose residual {}", ri - bi);
            }
        }
    }

    #[test]
    fn zero_pivot_is_reported() {
        let mut band = BandMatrix::zeros(2, 1, 1);
        band.set(0, 0, 0.0);
        band.set(0, 1, 1.0);
        band.set(1, 0, 1.0);
        band.set(1, 1, 1.0);
        assert!(matches!(band.factorize(), Err(Error::SingularSystem { column: 0, .. })));
    }
}
