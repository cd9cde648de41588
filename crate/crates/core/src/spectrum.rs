//! Discrete-spectrum oracle: the semi-discrete upwind operator with the
//! boundary closure eliminated, and its eigenvalues.

use serde::Serialize;

use crate::eigen::{eigenvalues, DenseMatrix};
use crate::error::{Error, Result};
use crate::linear::{operator_at, LinearizedSystem, Stencil};
use crate::model::StateVector;
use crate::sim::close_boundaries;

/// Grid-size cap for dense assembly.
pub const MAX_DENSE_POINTS: usize = 1000;

#[derive(Debug, Clone, Serialize)]
pub struct SpectrumReport {
    pub eigenvalues: Vec<(f64, f64)>,
    pub max_real: f64,
    pub n_used: usize,
}

/// Interior unknowns are ordered `[h_1..h_{n-2}, v_1..v_{n-2}]`.
pub fn extend_interior(sys: &LinearizedSystem, u: &[f64]) -> StateVector {
    let n = sys.n();
    let m = n - 2;
    let mut y = StateVector::zeros(n);
    y.h[1..n - 1].copy_from_slice(&u[..m]);
    y.v[1..n - 1].copy_from_slice(&u[m..]);
    close_boundaries(sys, &mut y);
    y
}

/// Matrix of `y -> -(A y_xx + B y_x + C y)` on interior unknowns, with
/// boundary values supplied by the simulation closure.
pub fn assemble_discrete_operator(sys: &LinearizedSystem) -> Result<DenseMatrix> {
    let n = sys.n();
    if n > MAX_DENSE_POINTS {
        return Err(Error::Budget(format!(
            "dense spectrum limited to {MAX_DENSE_POINTS} grid points, got {n}"
        )));
    }
    if n < 5 {
        return Err(Error::Contract("spectrum needs at least 5 grid points".into()));
    }
    let m = n - 2;
    let dim = 2 * m;
    let mut mat = DenseMatrix::zeros(dim);
    let mut u = vec![0.0; dim];
    for j in 0..dim {
        u[j] = 1.0;
        let y = extend_interior(sys, &u);
        u[j] = 0.0;
        // A unit vector only reaches rows within the stencil width, plus the
        // rows next to the boundaries through the closure.
        let col = j % m + 1;
        let rows = (col.saturating_sub(3).max(1)..=(col + 3).min(n - 2))
            .chain(1..=3.min(n - 2))
            .chain((n - 4).max(1)..=n - 2);
        for i in rows {
            let r = operator_at(sys, &y, i, Stencil::Upwind);
            mat.set(i - 1, j, r[0]);
            mat.set(m + i - 1, j, r[1]);
        }
    }
    Ok(mat)
}

pub fn spectrum(sys: &LinearizedSystem) -> Result<SpectrumReport> {
    let mat = assemble_discrete_operator(sys)?;
    let eig = eigenvalues(&mat)?;
    let max_real = eig.iter().map(|e| e.0).fold(f64::NEG_INFINITY, f64::max);
    Ok(SpectrumReport { eigenvalues: eig, max_real, n_used: sys.n() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linear::{apply_operator, build_linear_system};
    use crate::lyapunov::auto_boundary_coeffs;
    use crate::model::{Grid, PhysicalParams};
    use crate::steady::solve_steady;

    fn nearcritical(n: usize) -> LinearizedSystem {
        let p = PhysicalParams::new(9.81, 1e-4, 2e-3, 10.0).unwrap();
        let grid = Grid::new(n, 10.0).unwrap();
        let s = solve_steady(&p, 0.2, 1.0, &grid).unwrap();
        let bc = auto_boundary_coeffs(&s, &p).unwrap();
        build_linear_system(&s, &p, bc).unwrap()
    }

    #[test]
    fn matrix_reproduces_operator() {
        let sys = nearcritical(61);
        let mat = assemble_discrete_operator(&sys).unwrap();
        let m = 59;
        assert_eq!(mat.n, 2 * m);
        let mut seed = 7u64;
        for _ in 0..10 {
            let u: Vec<f64> = (0..2 * m)
                .map(|_| {
                    seed = seed.wrapping_mul(6364136223846793005).wrapping_add(1);
                    ((seed >> 11) as f64 / (1u64 << 53) as f64) - 0.5
                })
                .collect();
            let y = extend_interior(&sys, &u);
            let full = apply_operator(&sys, &y, Stencil::Upwind).unwrap();
            let mu = mat.mul_vec(&u);
            let scale = mu.iter().fold(0.0_f64, |a, b| a.max(b.abs()));
            for i in 0..m {
                assert!((mu[i] - full.h[i + 1]).abs() <= 1e-12 * scale);
                assert!((mu[m + i] - full.v[i + 1]).abs() <= 1e-12 * scale);
            }
        }
    }

    #[test]
    fn budget_is_enforced() {
        let sys = nearcritical(1001);
        assert!(matches!(assemble_discrete_operator(&sys), Err(Error::Budget(_))));
    }

    #[test]
    fn certified_configuration_is_stable() {
        let sys = nearcritical(101);
        let rep = spectrum(&sys).unwrap();
        assert_eq!(rep.eigenvalues.len(), 2 * 99);
        assert!(rep.max_real < 0.0);
    }
}
