//! Discrete control-input smoothing by mollification.
//!
//! The smoothing operator convolves a control with the standard bump
//! kernel of support half-width `epsilon`, after extending the control by
//! zero outside `(0,T)`, and restricts the result back to `(0,T)`. On the
//! cell grid it becomes an `N x N` matrix of double cell integrals
//!
//! ```text
//!     K[i][j] = (1/dt) * Int_{cell i} Int_{cell j} eta_eps(t - s) ds dt,
//! ```
//!
//! so that `K w` holds the cell averages of the mollified control. The
//! adjoint is the plain transpose: with the uniform-weight discrete inner
//! product `(f,g) = dt * sum f_i g_i`, the identity `(K f, g) = (f, K^T g)`
//! is exact, which the adjoint-gradient chain rule relies on.
//!
//! No mass is added near the endpoints: the zero extension means boundary
//! rows sum to less than one, exactly as in the continuous operator.

use crate::control::TimeGrid;
use crate::quad::integrate;
use crate::{Error, Result};
use ndarray::{Array1, Array2};
use std::sync::OnceLock;

/// Normalization constant of the bump kernel, `1 / Int_{-1}^{1} exp(1/(s^2-1)) ds`.
fn bump_norm_const() -> f64 {
    static C: OnceLock<f64> = OnceLock::new();
    *C.get_or_init(|| {
        let mass = integrate(|s| (1.0 / (s * s - 1.0)).exp(), -1.0, 1.0, 1e-14);
        1.0 / mass
    })
}

/// Unnormalized bump profile `exp(1/(s^2-1))` on `|s| < 1`, zero outside.
fn bump(s: f64) -> f64 {
    if s.abs() < 1.0 {
        (1.0 / (s * s - 1.0)).exp()
    } else {
        0.0
    }
}

/// The standard mollifier `eta_eps(t) = (1/eps) * C * exp(1/((t/eps)^2 - 1))`
/// for `|t| < eps`, zero outside, with `C` chosen so the kernel has unit mass.
pub fn standard_mollifier(t: f64, epsilon: f64) -> Result<f64> {
    if !(epsilon > 0.0) {
        return Err(Error::Invalid(format!("mollifier needs epsilon > 0, got {epsilon}")));
    }
    Ok(bump_norm_const() / epsilon * bump(t / epsilon))
}

/// Configuration of the discrete smoothing operator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MollifierConfig {
    /// Support half-width of the kernel; `0` means the identity operator.
    pub epsilon: f64,
    /// Minimum number of quadrature panels per kernel weight.
    pub quadrature_subsamples: usize,
}

impl MollifierConfig {
    pub fn new(epsilon: f64, quadrature_subsamples: usize) -> Result<Self> {
        if !(epsilon.is_finite() && epsilon >= 0.0) {
            return Err(Error::Invalid(format!("epsilon must be >= 0, got {epsilon}")));
        }
        if quadrature_subsamples == 0 {
            return Err(Error::Invalid("quadrature_subsamples must be positive".into()));
        }
        Ok(Self { epsilon, quadrature_subsamples })
    }

    /// Identity operator (no smoothing).
    pub fn identity() -> Self {
        Self { epsilon: 0.0, quadrature_subsamples: 8 }
    }

    pub fn with_epsilon(self, epsilon: f64) -> Result<Self> {
        Self::new(epsilon, self.quadrature_subsamples)
    }
}

impl Default for MollifierConfig {
    fn default() -> Self {
        Self { epsilon: 0.0, quadrature_subsamples: 8 }
    }
}

/// Discrete smoothing operator and its adjoint on a fixed time grid.
///
/// Immutable after construction; `apply`/`apply_adjoint` are pure.
#[derive(Debug, Clone)]
pub struct MollifierOp {
    grid: TimeGrid,
    epsilon: f64,
    k: Array2<f64>,
    k_adj: Array2<f64>,
}

/// Kernel weight for cell offset `r = i - j`.
///
/// The double cell integral reduces exactly to a single convolution
/// integral against the tent-shaped overlap function,
/// `kappa_r = (1/dt) * Int eta_eps(tau) * max(0, dt - |tau - r*dt|) dtau`,
/// which is then integrated adaptively on `subsamples` panels. A fixed
/// midpoint product rule cannot reach the accuracy the gradient and
/// objective checks need once `epsilon` drops below the cell width.
fn kernel_weight(dt: f64, epsilon: f64, r: i64, subsamples: usize) -> f64 {
    let center = r as f64 * dt;
    let lo = (center - dt).max(-epsilon);
    let hi = (center + dt).min(epsilon);
    if lo >= hi {
        return 0.0;
    }
    let c = bump_norm_const() / epsilon;
    let mut total = 0.0;
    let step = (hi - lo) / subsamples as f64;
    for p in 0..subsamples {
        let a = lo + p as f64 * step;
        let b = if p + 1 == subsamples { hi } else { a + step };
        total += integrate(
            |tau| c * bump(tau / epsilon) * (dt - (tau - center).abs()).max(0.0),
            a,
            b,
            1e-14,
        );
    }
    total / dt
}

/// Build the discrete operator for `grid`. `epsilon == 0` yields the exact
/// identity matrix.
pub fn build_operator(grid: &TimeGrid, cfg: &MollifierConfig) -> MollifierOp {
    let n = grid.n_cells();
    let k = if cfg.epsilon == 0.0 {
        Array2::eye(n)
    } else {
        let dt = grid.dt();
        let reach = (cfg.epsilon / dt).ceil() as i64 + 1;
        let kappa: Vec<f64> = (0..=reach)
            .map(|r| kernel_weight(dt, cfg.epsilon, r, cfg.quadrature_subsamples))
            .collect();
        let mut k = Array2::zeros((n, n));
        for i in 0..n {
            for r in -reach..=reach {
                let j = i as i64 - r;
                if (0..n as i64).contains(&j) {
                    k[[i, j as usize]] = kappa[r.unsigned_abs() as usize];
                }
            }
        }
        k
    };
    let k_adj = k.t().to_owned();
    MollifierOp { grid: *grid, epsilon: cfg.epsilon, k, k_adj }
}

impl MollifierOp {
    pub fn grid(&self) -> &TimeGrid {
        &self.grid
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn matrix(&self) -> &Array2<f64> {
        &self.k
    }

    pub fn adjoint_matrix(&self) -> &Array2<f64> {
        &self.k_adj
    }

    /// Cell averages of the mollified control, `K w`.
    pub fn apply(&self, w: &[f64]) -> Result<Vec<f64>> {
        self.matvec(&self.k, w)
    }

    /// Adjoint application, `K^T g`.
    pub fn apply_adjoint(&self, g: &[f64]) -> Result<Vec<f64>> {
        self.matvec(&self.k_adj, g)
    }

    fn matvec(&self, m: &Array2<f64>, v: &[f64]) -> Result<Vec<f64>> {
        if v.len() != self.grid.n_cells() {
            return Err(Error::LengthMismatch { expected: self.grid.n_cells(), got: v.len() });
        }
        let x = Array1::from_iter(v.iter().copied());
        Ok(m.dot(&x).to_vec())
    }
}
