//! Linearization `y_t + A y_xx + B(x) y_x + C(x) y = 0` around a steady state.

use crate::error::{contract, domain, Result};
use crate::mat2::{self, Mat2};
use crate::model::{friction_unchecked, BoundaryCoeffs, PhysicalParams, StateVector};
use crate::steady::SteadyState;

/// Eigen-decomposition of `B(x_i)`: `B = R diag(lam) L`, `L = R^{-1}`.
#[derive(Debug, Clone, Copy)]
pub struct Characteristics {
    /// Ascending: `lam[0] < 0 < lam[1]` in subcritical flow.
    pub lam: [f64; 2],
    /// Right eigenvectors as columns.
    pub r: Mat2,
    /// Left eigenvectors as rows.
    pub l: Mat2,
}

impl Characteristics {
    pub fn of(b: &Mat2) -> Option<Self> {
        let (lo, hi) = mat2::real_eigenvalues(b)?;
        if b[0][1] == 0.0 || lo == hi {
            return None;
        }
        // (B01, lam - B00) is a right eigenvector for lam.
        let r = [[b[0][1], b[0][1]], [lo - b[0][0], hi - b[0][0]]];
        let l = mat2::inverse(&r)?;
        Some(Self { lam: [lo, hi], r, l })
    }
}

#[derive(Debug, Clone)]
pub struct LinearizedSystem {
    pub a: Mat2,
    pub b: Vec<Mat2>,
    pub c: Vec<Mat2>,
    pub bc: BoundaryCoeffs,
    pub steady: SteadyState,
    pub params: PhysicalParams,
    /// Friction `f(H*, V*)` per grid point.
    pub f: Vec<f64>,
    pub chars: Vec<Characteristics>,
}

impl LinearizedSystem {
    pub fn n(&self) -> usize {
        self.steady.grid.n
    }

    pub fn dx(&self) -> f64 {
        self.steady.grid.dx
    }

    /// Largest characteristic speed over the grid.
    pub fn max_speed(&self) -> f64 {
        self.chars
            .iter()
            .map(|c| c.lam[0].abs().max(c.lam[1].abs()))
            .fold(0.0, f64::max)
    }

    /// Largest stable explicit step, `0.9 dx / max |lam|`.
    pub fn cfl_dt(&self) -> f64 {
        0.9 * self.dx() / self.max_speed()
    }
}

pub fn build_linear_system(
    s: &SteadyState,
    p: &PhysicalParams,
    bc: BoundaryCoeffs,
) -> Result<LinearizedSystem> {
    if !(p.mu > 0.0) {
        return domain("linearization needs mu > 0");
    }
    p.validate()?;
    let (g, mu) = (p.g, p.mu);
    let n = s.grid.n;
    let mut b = Vec::with_capacity(n);
    let mut c = Vec::with_capacity(n);
    let mut f = Vec::with_capacity(n);
    let mut chars = Vec::with_capacity(n);
    for i in 0..n {
        let (h, v, vx, hx) = (s.h[i], s.v[i], s.vx[i], s.hx[i]);
        let fi = friction_unchecked(h, v, p);
        let bi = [[v, h], [g - 4.0 * mu * vx / h, v - 4.0 * mu * hx / h]];
        let ci = [
            [vx, hx],
            [
                (4.0 * mu * hx * vx - fi) / (h * h) - fi * fi / (3.0 * mu * h * v),
                vx + fi / (h * v),
            ],
        ];
        let ch = Characteristics::of(&bi).ok_or_else(|| {
            crate::Error::Domain(format!("B(x) is not strictly hyperbolic at grid index {i}"))
        })?;
        b.push(bi);
        c.push(ci);
        f.push(fi);
        chars.push(ch);
    }
    Ok(LinearizedSystem {
        a: [[0.0, 0.0], [0.0, -4.0 * mu]],
        b,
        c,
        bc,
        steady: s.clone(),
        params: *p,
        f,
        chars,
    })
}

/// Spatial stencil used for the transport term `B y_x`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Stencil {
    /// Centered differences inside, one-sided second order at the ends.
    #[default]
    Centered,
    /// Second-order one-sided differences per characteristic field, taken
    /// from the upwind side; centered where the upwind stencil would leave
    /// the grid.
    Upwind,
}

/// Second-order first derivative at `i` with one-sided stencils at the ends.
pub(crate) fn d1(u: &[f64], i: usize, dx: f64) -> f64 {
    let n = u.len();
    if i == 0 {
        (-3.0 * u[0] + 4.0 * u[1] - u[2]) / (2.0 * dx)
    } else if i == n - 1 {
        (3.0 * u[n - 1] - 4.0 * u[n - 2] + u[n - 3]) / (2.0 * dx)
    } else {
        (u[i + 1] - u[i - 1]) / (2.0 * dx)
    }
}

/// Second-order second derivative; four-point one-sided at the ends.
pub(crate) fn d2(u: &[f64], i: usize, dx: f64) -> f64 {
    let n = u.len();
    let dx2 = dx * dx;
    if n < 4 && (i == 0 || i == n - 1) {
        return (u[0] - 2.0 * u[1] + u[2]) / dx2;
    }
    if i == 0 {
        (2.0 * u[0] - 5.0 * u[1] + 4.0 * u[2] - u[3]) / dx2
    } else if i == n - 1 {
        (2.0 * u[n - 1] - 5.0 * u[n - 2] + 4.0 * u[n - 3] - u[n - 4]) / dx2
    } else {
        (u[i + 1] - 2.0 * u[i] + u[i - 1]) / dx2
    }
}

/// `B(x_i) y_x(x_i)` with per-characteristic upwinding.
fn upwind_transport(sys: &LinearizedSystem, y: &StateVector, i: usize) -> [f64; 2] {
    let n = y.len();
    let dx = sys.dx();
    let ch = &sys.chars[i];
    let w = |k: usize, j: usize| ch.l[k][0] * y.h[j] + ch.l[k][1] * y.v[j];
    let mut out = [0.0; 2];
    for k in 0..2 {
        let lam = ch.lam[k];
        let d = if lam > 0.0 {
            if i >= 2 {
                (3.0 * w(k, i) - 4.0 * w(k, i - 1) + w(k, i - 2)) / (2.0 * dx)
            } else if i == 1 {
                (w(k, 2) - w(k, 0)) / (2.0 * dx)
            } else {
                (-3.0 * w(k, 0) + 4.0 * w(k, 1) - w(k, 2)) / (2.0 * dx)
            }
        } else if i + 2 < n {
            (-3.0 * w(k, i) + 4.0 * w(k, i + 1) - w(k, i + 2)) / (2.0 * dx)
        } else if i + 2 == n {
            (w(k, n - 1) - w(k, n - 3)) / (2.0 * dx)
        } else {
            (3.0 * w(k, n - 1) - 4.0 * w(k, n - 2) + w(k, n - 3)) / (2.0 * dx)
        };
        out[0] += lam * ch.r[0][k] * d;
        out[1] += lam * ch.r[1][k] * d;
    }
    out
}

/// `y_t = -(A y_xx + B y_x + C y)` evaluated at one grid point.
pub(crate) fn operator_at(sys: &LinearizedSystem, y: &StateVector, i: usize, stencil: Stencil) -> [f64; 2] {
    let dx = sys.dx();
    let by = match stencil {
        Stencil::Centered => {
            let yx = [d1(&y.h, i, dx), d1(&y.v, i, dx)];
            mat2::mul_vec(&sys.b[i], &yx)
        }
        Stencil::Upwind => upwind_transport(sys, y, i),
    };
    let cy = mat2::mul_vec(&sys.c[i], &y.at(i));
    let ayxx = sys.a[1][1] * d2(&y.v, i, dx);
    [-(by[0] + cy[0]), -(ayxx + by[1] + cy[1])]
}

pub fn apply_operator(sys: &LinearizedSystem, y: &StateVector, stencil: Stencil) -> Result<StateVector> {
    let n = sys.n();
    y.check_grid(&sys.steady.grid)?;
    if n < 4 {
        return contract("operator needs at least 4 grid points");
    }
    let mut out = StateVector::zeros(n);
    for i in 0..n {
        let r = operator_at(sys, y, i, stencil);
        out.h[i] = r[0];
        out.v[i] = r[1];
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::Grid;
    use crate::steady::solve_steady;

    fn section(mu: f64, kappa: f64, n: usize) -> (PhysicalParams, SteadyState) {
        let p = PhysicalParams::new(9.81, mu, kappa, 1000.0).unwrap();
        let grid = Grid::new(n, 1000.0).unwrap();
        let s = solve_steady(&p, 4.0, 1.0, &grid).unwrap();
        (p, s)
    }

    fn bc() -> BoundaryCoeffs {
        BoundaryCoeffs::new(9.81, 9.6, -4.1).unwrap()
    }

    #[test]
    fn structure_of_a_and_b() {
        let (p, s) = section(1e-3, 2e-3, 501);
        let sys = build_linear_system(&s, &p, bc()).unwrap();
        assert_eq!(sys.a, [[0.0, 0.0], [0.0, -4e-3]]);
        for i in 0..s.grid.n {
            assert_eq!(sys.b[i][0][0], s.v[i]);
            assert_eq!(sys.b[i][0][1], s.h[i]);
            let diff = sys.c[i][1][1] - sys.c[i][0][0];
            let expect = sys.f[i] / (s.h[i] * s.v[i]);
            assert!((diff - expect).abs() <= 1e-13 * expect.abs());
            let ch = &sys.chars[i];
            assert!(ch.lam[0] < 0.0 && ch.lam[1] > 0.0);
        }
        assert_eq!(sys.b[0][1][0], 9.81);
    }

    #[test]
    fn frictionless_coefficients() {
        let (p, s) = section(1e-3, 0.0, 101);
        let sys = build_linear_system(&s, &p, bc()).unwrap();
        for i in 0..s.grid.n {
            assert_eq!(sys.c[i], [[0.0; 2]; 2]);
            assert_eq!(sys.b[i], [[1.0, 4.0], [9.81, 1.0]]);
        }
    }

    #[test]
    fn inviscid_limit_of_b() {
        let (p, s) = section(1e-7, 2e-3, 201);
        let sys = build_linear_system(&s, &p, bc()).unwrap();
        for bi in &sys.b {
            let lim = [[1.0, 4.0], [9.81, 1.0]];
            assert!(mat2::max_abs(&mat2::sub(bi, &lim)) < 1e-4);
        }
    }

    #[test]
    fn characteristic_speeds_near_inviscid_values() {
        let (p, s) = section(1e-3, 2e-3, 201);
        let sys = build_linear_system(&s, &p, bc()).unwrap();
        for (i, ch) in sys.chars.iter().enumerate() {
            let c = (p.g * s.h[i]).sqrt();
            assert!((ch.lam[0] - (s.v[i] - c)).abs() < 1e-2);
            assert!((ch.lam[1] - (s.v[i] + c)).abs() < 1e-2);
            let rec = mat2::mul(&ch.r, &mat2::mul(&[[ch.lam[0], 0.0], [0.0, ch.lam[1]]], &ch.l));
            assert!(mat2::max_abs(&mat2::sub(&rec, &sys.b[i])) < 1e-12);
        }
    }

    #[test]
    fn zero_maps_to_zero() {
        let (p, s) = section(1e-3, 2e-3, 101);
        let sys = build_linear_system(&s, &p, bc()).unwrap();
        for st in [Stencil::Centered, Stencil::Upwind] {
            let out = apply_operator(&sys, &StateVector::zeros(101), st).unwrap();
            assert!(out.h.iter().chain(&out.v).all(|&x| x == 0.0));
        }
        assert!(apply_operator(&sys, &StateVector::zeros(7), Stencil::Centered).is_err());
    }

    #[test]
    fn transport_of_cosine() {
        let (p, _) = section(1e-3, 0.0, 11);
        let kk = 2.0 * std::f64::consts::PI / 250.0;
        let mut errs = Vec::new();
        for &n in &[201usize, 401, 801] {
            let grid = Grid::new(n, 1000.0).unwrap();
            let s = solve_steady(&p, 4.0, 1.0, &grid).unwrap();
            let sys = build_linear_system(&s, &p, bc()).unwrap();
            let y = StateVector::from_fn(&grid, |x| (kk * x).cos(), |_| 0.0);
            for st in [Stencil::Centered, Stencil::Upwind] {
                let out = apply_operator(&sys, &y, st).unwrap();
                let e = (0..n)
                    .map(|i| (out.h[i] - kk * (kk * grid.x[i]).sin()).abs())
                    .fold(0.0, f64::max);
                if st == Stencil::Centered {
                    errs.push(e);
                }
                assert!(e < 1e-2 * kk, "n={n} {st:?} err {e}");
            }
        }
        for w in errs.windows(2) {
            assert!((w[0] / w[1]) > 3.5);
        }
    }

    #[test]
    fn operator_converges_at_second_order() {
        // Reference from a doubled grid; compare at shared points.
        let p = PhysicalParams::new(9.81, 1e-2, 5e-3, 1.0).unwrap();
        let hf = |x: f64| (3.0 * x).sin() + 0.3 * x * x;
        let vf = |x: f64| (2.0 * x).cos() - x;
        let eval = |n: usize| {
            let grid = Grid::new(n, 1.0).unwrap();
            let s = solve_steady(&p, 0.2, 1.0, &grid).unwrap();
            let sys = build_linear_system(&s, &p, bc()).unwrap();
            let y = StateVector::from_fn(&grid, hf, vf);
            apply_operator(&sys, &y, Stencil::Centered).unwrap()
        };
        let (a, b, c) = (eval(101), eval(201), eval(401));
        let diff = |coarse: &StateVector, fine: &StateVector| {
            (0..coarse.len())
                .map(|i| (coarse.h[i] - fine.h[2 * i]).abs().max((coarse.v[i] - fine.v[2 * i]).abs()))
                .fold(0.0, f64::max)
        };
        let ratio = diff(&a, &b) / diff(&b, &c);
        assert!(ratio > 3.4 && ratio < 4.6, "ratio {ratio}");
    }
}
