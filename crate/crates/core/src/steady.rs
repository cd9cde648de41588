//! Boundary-layer steady states.
//!
//! With `y = V*`, `z = V*_x` and constant flux `Q0 = H0 V0` the steady
//! equations reduce to
//!
//! ```text
//! y' = z
//! mu z' = z (y - g Q0 / y^2) / 4 + (3/4) mu f~(y) y / Q0 + mu z^2 / y
//! ```
//!
//! with `y(0) = V0`, `z(0) = 0`. The `1/mu` factor makes the system stiff near
//! `x = 0`, where `z` rises through a layer of width `O(mu)`.

use crate::error::{domain, Error, OmegaBound, Result};
use crate::mat2::{Mat2, Vec2};
use crate::model::{friction_tilde_unchecked, friction_unchecked, Grid, PhysicalParams};
use crate::ode::{hermite, integrate, PlanarSystem, TrapezoidOptions};

#[derive(Debug, Clone)]
pub struct SteadyState {
    pub grid: Grid,
    pub h: Vec<f64>,
    pub v: Vec<f64>,
    pub vx: Vec<f64>,
    pub vxx: Vec<f64>,
    pub hx: Vec<f64>,
    pub hxx: Vec<f64>,
    pub q0: f64,
    pub c0: f64,
    /// `Gamma = g H / V - V`, positive in subcritical flow.
    pub gamma: Vec<f64>,
    pub h0: f64,
    pub v0: f64,
}

/// Constants describing the admissible region of the steady-state ODE.
#[derive(Debug, Clone, Copy)]
pub struct OmegaRegion {
    pub eps: f64,
    pub c_y: f64,
    /// Positive root of `g Q0 - y^3 - eps y^2`.
    pub y_crit: f64,
    pub c1: f64,
    pub c_z: f64,
}

impl OmegaRegion {
    pub fn new(p: &PhysicalParams, h0: f64, v0: f64) -> Self {
        let q0 = h0 * v0;
        let eps = (p.g * q0 / (v0 * v0) - v0) / 4.0;
        let c_y = v0 / 2.0;
        let y_crit = critical_root(p.g * q0, eps);
        // f~(y) y is increasing in y, so its max over [c_y, y_crit] sits at y_crit.
        let source = 0.75 * friction_tilde_unchecked(y_crit, q0, p) * y_crit / q0;
        let c_z = 10.0 * source * (4.0 * p.mu / eps) + 1.0;
        let c1 = source + c_z * c_z / c_y;
        Self { eps, c_y, y_crit, c1, c_z }
    }

    /// Duhamel bound on `|V*_x(x)|` for zero initial slope.
    pub fn slope_bound(&self, mu: f64, x: f64) -> f64 {
        let k = 4.0 * mu / self.eps;
        self.c1 * k * (1.0 - (-x / k).exp())
    }
}

/// Positive root of `a - y^3 - e y^2` for `a > 0`, `e > 0`.
fn critical_root(a: f64, e: f64) -> f64 {
    let (mut lo, mut hi) = (0.0, a.cbrt());
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if a - mid * mid * mid - e * mid * mid > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

struct SteadyOde {
    g: f64,
    mu: f64,
    kappa: f64,
    q0: f64,
}

impl SteadyOde {
    fn zprime(&self, y: f64, z: f64) -> f64 {
        let ft_y = y * y * y * self.kappa / (3.0 * self.mu * y + self.kappa * self.q0);
        z * (y - self.g * self.q0 / (y * y)) / (4.0 * self.mu) + 0.75 * ft_y / self.q0 + z * z / y
    }
}

impl PlanarSystem for SteadyOde {
    fn rhs(&self, _x: f64, u: Vec2) -> Vec2 {
        [u[1], self.zprime(u[0], u[1])]
    }

    fn jacobian(&self, _x: f64, u: Vec2) -> Mat2 {
        let (y, z) = (u[0], u[1]);
        let den = 3.0 * self.mu * y + self.kappa * self.q0;
        let dft_y = self.kappa * (6.0 * self.mu * y * y * y + 3.0 * self.kappa * self.q0 * y * y) / (den * den);
        let dy = z * (1.0 + 2.0 * self.g * self.q0 / (y * y * y)) / (4.0 * self.mu)
            + 0.75 * dft_y / self.q0
            - z * z / (y * y);
        let dz = (y - self.g * self.q0 / (y * y)) / (4.0 * self.mu) + 2.0 * z / y;
        [[0.0, 1.0], [dy, dz]]
    }
}

/// Right-hand side of the `z` equation, `z' = F(y, z)`.
pub fn slope_rhs(p: &PhysicalParams, q0: f64, y: f64, z: f64) -> f64 {
    SteadyOde { g: p.g, mu: p.mu, kappa: p.kappa, q0 }.zprime(y, z)
}

/// Solve for the steady state with `H*(0) = h0`, `V*(0) = v0`, `V*_x(0) = 0`.
pub fn solve_steady(p: &PhysicalParams, h0: f64, v0: f64, grid: &Grid) -> Result<SteadyState> {
    p.validate()?;
    if !(h0 > 0.0 && v0 > 0.0) {
        return domain(format!("H0 and V0 must be positive, got H0={h0}, V0={v0}"));
    }
    let margin0 = p.g * h0 - v0 * v0;
    if !(margin0 > 0.0) {
        return domain(format!(
            "initial state is not subcritical: g H0 - V0^2 = {margin0}"
        ));
    }
    if (grid.length() - p.length).abs() > 1e-12 * p.length {
        return Err(Error::Contract(format!(
            "grid length {} does not match L = {}",
            grid.length(),
            p.length
        )));
    }
    let q0 = h0 * v0;
    let ode = SteadyOde { g: p.g, mu: p.mu, kappa: p.kappa, q0 };
    let omega = OmegaRegion::new(p, h0, v0);
    let layer = 4.0 * p.mu / (p.g * h0 / v0 - v0);
    let opts = TrapezoidOptions {
        h_init: (1e-3 * layer).min(p.length * 1e-3),
        h_max: p.length / 200.0,
        ..TrapezoidOptions::default()
    };
    let nodes = integrate(&ode, 0.0, [v0, 0.0], p.length, &opts, |x, u| {
        if u[0] >= omega.y_crit {
            Err(Error::OmegaExit { bound: OmegaBound::CriticalRoot, x })
        } else if u[0] <= omega.c_y {
            Err(Error::OmegaExit { bound: OmegaBound::LowerSpeed, x })
        } else if u[1].abs() >= omega.c_z {
            Err(Error::OmegaExit { bound: OmegaBound::Slope, x })
        } else {
            Ok(())
        }
    })?;

    let n = grid.n;
    let mut v = Vec::with_capacity(n);
    let mut vx = Vec::with_capacity(n);
    let mut k = 0usize;
    for &x in &grid.x {
        while k + 2 < nodes.len() && nodes[k + 1].x < x {
            k += 1;
        }
        let (a, b) = (&nodes[k], &nodes[k + 1]);
        if x == a.x {
            v.push(a.u[0]);
            vx.push(a.u[1]);
        } else if x == b.x {
            v.push(b.u[0]);
            vx.push(b.u[1]);
        } else {
            v.push(hermite(a.x, a.u[0], a.du[0], b.x, b.u[0], b.du[0], x));
            vx.push(hermite(a.x, a.u[1], a.du[1], b.x, b.u[1], b.du[1], x));
        }
    }
    // The initial slope is exactly zero.
    vx[0] = 0.0;
    let vxx: Vec<f64> = v.iter().zip(&vx).map(|(&y, &z)| ode.zprime(y, z)).collect();
    let h: Vec<f64> = v.iter().map(|&y| q0 / y).collect();
    let hx: Vec<f64> = v.iter().zip(&vx).map(|(&y, &z)| -q0 * z / (y * y)).collect();
    let hxx: Vec<f64> = (0..n)
        .map(|i| {
            let (y, z, zz) = (v[i], vx[i], vxx[i]);
            -q0 * (zz / (y * y) - 2.0 * z * z / (y * y * y))
        })
        .collect();
    let gamma: Vec<f64> = h.iter().zip(&v).map(|(&hh, &vv)| p.g * hh / vv - vv).collect();
    let c0 = v0 * friction_unchecked(h0, v0, p) / (p.mu * h0 * margin0);
    Ok(SteadyState {
        grid: grid.clone(),
        h,
        v,
        vx,
        vxx,
        hx,
        hxx,
        q0,
        c0,
        gamma,
        h0,
        v0,
    })
}

/// Sup-norm residuals of the small-viscosity expansion.
#[derive(Debug, Clone, Copy)]
pub struct AsymptoticResiduals {
    /// `sup |V* - V0|`
    pub r1: f64,
    /// `sup |V*_x - (V f / (H (gH - V^2)) - C0 mu e^{-int Gamma / 4 mu})|`
    pub r2: f64,
    /// `sup |V*_xx - C0 (gH - V^2) e^{-int Gamma / 4 mu} / (4 V)|`
    pub r3: f64,
}

pub fn verify_asymptotics(s: &SteadyState, p: &PhysicalParams) -> Result<AsymptoticResiduals> {
    p.validate()?;
    let int_gamma = s.grid.cumtrapz(&s.gamma);
    let (mut r1, mut r2, mut r3) = (0.0_f64, 0.0_f64, 0.0_f64);
    for i in 0..s.grid.n {
        let (h, v) = (s.h[i], s.v[i]);
        let margin = p.g * h - v * v;
        let e = (-int_gamma[i] / (4.0 * p.mu)).exp();
        let outer = v * friction_unchecked(h, v, p) / (h * margin);
        r1 = r1.max((v - s.v0).abs());
        r2 = r2.max((s.vx[i] - (outer - s.c0 * p.mu * e)).abs());
        r3 = r3.max((s.vxx[i] - s.c0 * margin * e / (4.0 * v)).abs());
    }
    Ok(AsymptoticResiduals { r1, r2, r3 })
}

/// Minimum over the grid of `g H* - V*^2`.
pub fn check_subcritical(s: &SteadyState, g: f64) -> f64 {
    s.h.iter()
        .zip(&s.v)
        .map(|(&h, &v)| g * h - v * v)
        .fold(f64::INFINITY, f64::min)
}

/// `g H*(0) < (2 + sqrt 2) V*(0)^2`.
pub fn check_assumption_nearcritical(s: &SteadyState, g: f64) -> bool {
    nearcritical(g, s.h[0], s.v[0])
}

pub fn nearcritical(g: f64, h0: f64, v0: f64) -> bool {
    g * h0 < (2.0 + std::f64::consts::SQRT_2) * v0 * v0
}
