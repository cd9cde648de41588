#![allow(dead_code)]

use svstab_core::{
    auto_boundary_coeffs, build_linear_system, solve_steady, BoundaryCoeffs, Grid, LinearizedSystem,
    PhysicalParams, StateVector, SteadyState,
};
use svstab_core::sim::ImexStepper;

pub const G: f64 = 9.81;

pub fn steady(mu: f64, kappa: f64, l: f64, h0: f64, v0: f64, n: usize) -> (PhysicalParams, SteadyState) {
    let p = PhysicalParams::new(G, mu, kappa, l).unwrap();
    let grid = Grid::new(n, l).unwrap();
    let s = solve_steady(&p, h0, v0, &grid).unwrap();
    (p, s)
}

/// Reference channel: 1 km, 4 m deep, 1 m/s.
pub fn reference(n: usize) -> (PhysicalParams, SteadyState) {
    steady(1e-3, 2e-3, 1000.0, 4.0, 1.0, n)
}

/// Shallow fast channel inside the near-critical window.
pub fn nearcritical(mu: f64, n: usize) -> (PhysicalParams, SteadyState) {
    steady(mu, 2e-3, 10.0, 0.2, 1.0, n)
}

/// Gains of the reference experiment: `b0 = g / V(0)`, outlet gains from the outlet state.
pub fn reference_gains(p: &PhysicalParams, s: &SteadyState) -> BoundaryCoeffs {
    let n = s.grid.n;
    let (vl, hl) = (s.v[n - 1], s.h[n - 1]);
    let b1 = p.g * (1.0 / (vl * vl) - 1.0 / (p.g * hl)).sqrt();
    let c1 = 4.0 * (vl + b1 * hl) / (vl * vl - p.g * hl);
    BoundaryCoeffs::new(p.g / s.v[0], b1, c1).unwrap()
}

pub fn auto_system(p: &PhysicalParams, s: &SteadyState) -> LinearizedSystem {
    let bc = auto_boundary_coeffs(s, p).unwrap();
    build_linear_system(s, p, bc).unwrap()
}

/// `h = 0.01 cos(20x + 15)`, `v = 0.01 cos(x)`.
pub fn cosine_initial(grid: &Grid) -> StateVector {
    StateVector::from_fn(grid, |x| 0.01 * (20.0 * x + 15.0).cos(), |x| 0.01 * x.cos())
}

/// Smooth solution compatible with all three boundary relations:
/// `y(t, x) = cos(t) Phi(x) + 0.5 sin(2t) Psi(x)`.
pub struct Manufactured {
    l: f64,
    b0: f64,
    alpha: f64,
    beta: f64,
}

impl Manufactured {
    pub fn new(sys: &LinearizedSystem) -> Self {
        let l = sys.steady.grid.length();
        let mu = sys.params.mu;
        let bc = sys.bc;
        Self {
            l,
            b0: bc.b0,
            alpha: (bc.b1 + 3.0 * bc.b0) / (l * l - 2.0 * mu * bc.c1 * l),
            beta: (2.0 * bc.b1 + bc.b0) / (l * l * l - 3.0 * mu * bc.c1 * l * l),
        }
    }

    /// Value, first and second space derivatives of `(Phi, Psi)` at `x`.
    fn modes(&self, x: f64) -> [[[f64; 2]; 3]; 2] {
        use std::f64::consts::PI;
        let (l, b0, a, b) = (self.l, self.b0, self.alpha, self.beta);
        let k = PI / l;
        let phi = [
            [2.0 + (k * x).cos(), -3.0 * b0 + a * x * x],
            [-k * (k * x).sin(), 2.0 * a * x],
            [-k * k * (k * x).cos(), 2.0 * a],
        ];
        let k2 = 0.5 * k;
        let psi = [
            [1.0 + (k2 * x).sin(), -b0 + b * x * x * x],
            [k2 * (k2 * x).cos(), 3.0 * b * x * x],
            [-k2 * k2 * (k2 * x).sin(), 6.0 * b * x],
        ];
        [phi, psi]
    }

    pub fn exact(&self, grid: &Grid, t: f64) -> StateVector {
        let (a, b) = (t.cos(), 0.5 * (2.0 * t).sin());
        let mut y = StateVector::zeros(grid.n);
        for (i, &x) in grid.x.iter().enumerate() {
            let [phi, psi] = self.modes(x);
            y.h[i] = a * phi[0][0] + b * psi[0][0];
            y.v[i] = a * phi[0][1] + b * psi[0][1];
        }
        y
    }

    /// `y_t + A y_xx + B y_x + C y` at time `t`.
    pub fn forcing(&self, sys: &LinearizedSystem, t: f64) -> StateVector {
        let grid = &sys.steady.grid;
        let (a, b) = (t.cos(), 0.5 * (2.0 * t).sin());
        let (da, db) = (-t.sin(), (2.0 * t).cos());
        let mut f = StateVector::zeros(grid.n);
        for (i, &x) in grid.x.iter().enumerate() {
            let [phi, psi] = self.modes(x);
            let comb = |k: usize, c: usize, s: f64, r: f64| s * phi[k][c] + r * psi[k][c];
            let y = [comb(0, 0, a, b), comb(0, 1, a, b)];
            let yt = [comb(0, 0, da, db), comb(0, 1, da, db)];
            let yx = [comb(1, 0, a, b), comb(1, 1, a, b)];
            let yxx = [comb(2, 0, a, b), comb(2, 1, a, b)];
            let (bm, cm) = (&sys.b[i], &sys.c[i]);
            for r in 0..2 {
                let val = yt[r]
                    + sys.a[r][0] * yxx[0]
                    + sys.a[r][1] * yxx[1]
                    + bm[r][0] * yx[0]
                    + bm[r][1] * yx[1]
                    + cm[r][0] * y[0]
                    + cm[r][1] * y[1];
                if r == 0 {
                    f.h[i] = val;
                } else {
                    f.v[i] = val;
                }
            }
        }
        f
    }

    /// Max-norm error at `t_end` of the forced scheme started from the exact data.
    pub fn error(&self, sys: &LinearizedSystem, dt: f64, t_end: f64) -> f64 {
        let grid = &sys.steady.grid;
        let steps = (t_end / dt).round() as usize;
        let mut stepper = ImexStepper::new(sys, dt).unwrap();
        let mut y = self.exact(grid, 0.0);
        for k in 0..steps {
            let f = self.forcing(sys, k as f64 * dt);
            stepper.step(&mut y, Some(&f)).unwrap();
        }
        let e = self.exact(grid, steps as f64 * dt);
        y.h.iter()
            .zip(&e.h)
            .chain(y.v.iter().zip(&e.v))
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }
}

pub fn orders(errors: &[f64]) -> Vec<f64> {
    errors.windows(2).map(|w| (w[0] / w[1]).log2()).collect()
}
