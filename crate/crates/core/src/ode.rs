//! Adaptive implicit trapezoidal integrator for stiff planar systems.
//!
//! Local error is estimated by step doubling: one step of size `h` against
//! two steps of size `h/2`; the difference divided by 3 estimates the error
//! of the half-step solution, which is the one kept.

use crate::error::{Error, Result};
use crate::mat2::{self, Mat2, Vec2};

pub trait PlanarSystem {
    fn rhs(&self, x: f64, u: Vec2) -> Vec2;
    fn jacobian(&self, x: f64, u: Vec2) -> Mat2;
}

#[derive(Debug, Clone, Copy)]
pub struct TrapezoidOptions {
    pub atol: f64,
    pub rtol: f64,
    pub h_init: f64,
    pub h_max: f64,
    pub h_min: f64,
    pub max_steps: usize,
}

impl Default for TrapezoidOptions {
    fn default() -> Self {
        Self {
            atol: 1e-12,
            rtol: 1e-10,
            h_init: 1e-6,
            h_max: f64::INFINITY,
            h_min: 1e-300,
            max_steps: 10_000_000,
        }
    }
}

/// Accepted solution point with its derivative (for Hermite interpolation).
#[derive(Debug, Clone, Copy)]
pub struct Node {
    pub x: f64,
    pub u: Vec2,
    pub du: Vec2,
}

fn trapezoid_step<S: PlanarSystem>(sys: &S, x: f64, u: Vec2, f0: Vec2, h: f64) -> Option<(Vec2, Vec2)> {
    let x1 = x + h;
    // Explicit Euler predictor.
    let mut w = [u[0] + h * f0[0], u[1] + h * f0[1]];
    for _ in 0..25 {
        let f1 = sys.rhs(x1, w);
        let g = [
            w[0] - u[0] - 0.5 * h * (f0[0] + f1[0]),
            w[1] - u[1] - 0.5 * h * (f0[1] + f1[1]),
        ];
        let j = sys.jacobian(x1, w);
        let m = [
            [1.0 - 0.5 * h * j[0][0], -0.5 * h * j[0][1]],
            [-0.5 * h * j[1][0], 1.0 - 0.5 * h * j[1][1]],
        ];
        let d = mat2::solve(&m, &g)?;
        w = [w[0] - d[0], w[1] - d[1]];
        if !(w[0].is_finite() && w[1].is_finite()) {
            return None;
        }
        let small = |k: usize| d[k].abs() <= 1e-15 * w[k].abs() + 1e-18;
        if small(0) && small(1) {
            let f1 = sys.rhs(x1, w);
            return Some((w, f1));
        }
    }
    None
}

/// Integrate from `x0` to `x_end`. `guard` is called at each accepted node and
/// may abort the integration with an error.
pub fn integrate<S, G>(
    sys: &S,
    x0: f64,
    u0: Vec2,
    x_end: f64,
    opts: &TrapezoidOptions,
    mut guard: G,
) -> Result<Vec<Node>>
where
    S: PlanarSystem,
    G: FnMut(f64, Vec2) -> Result<()>,
{
    let mut x = x0;
    let mut u = u0;
    let mut f = sys.rhs(x, u);
    let mut nodes = vec![Node { x, u, du: f }];
    let mut h = opts.h_init.min(opts.h_max).min(x_end - x0);
    let mut steps = 0usize;
    while x < x_end {
        steps += 1;
        if steps > opts.max_steps {
            return Err(Error::Numerical(format!(
                "trapezoid integrator exceeded {} steps at x = {x}",
                opts.max_steps
            )));
        }
        let last = x + h >= x_end || (x_end - (x + h)) < 1e-12 * h;
        if last {
            h = x_end - x;
        }
        let attempt = (|| {
            let (full, _) = trapezoid_step(sys, x, u, f, h)?;
            let (mid, fmid) = trapezoid_step(sys, x, u, f, 0.5 * h)?;
            let (end, fend) = trapezoid_step(sys, x + 0.5 * h, mid, fmid, 0.5 * h)?;
            Some((full, mid, fmid, end, fend))
        })();
        let Some((full, mid, fmid, end, fend)) = attempt else {
            h *= 0.25;
            if h < opts.h_min {
                return Err(Error::Numerical(format!("Newton failed to converge at x = {x}")));
            }
            continue;
        };
        let mut err = 0.0_f64;
        for k in 0..2 {
            let sc = opts.atol + opts.rtol * u[k].abs().max(end[k].abs());
            err = err.max(((end[k] - full[k]) / 3.0).abs() / sc);
        }
        if err <= 1.0 {
            let xm = x + 0.5 * h;
            let x1 = if last { x_end } else { x + h };
            nodes.push(Node { x: xm, u: mid, du: fmid });
            guard(xm, mid)?;
            nodes.push(Node { x: x1, u: end, du: fend });
            guard(x1, end)?;
            x = x1;
            u = end;
            f = fend;
        }
        let factor = if err == 0.0 { 4.0 } else { (0.9 * err.powf(-1.0 / 3.0)).clamp(0.2, 4.0) };
        h = (h * factor).min(opts.h_max);
        if err > 1.0 && h < opts.h_min {
            return Err(Error::Numerical(format!("step size underflow at x = {x}")));
        }
    }
    Ok(nodes)
}

/// Cubic Hermite interpolation of one component between two nodes.
pub fn hermite(x0: f64, y0: f64, d0: f64, x1: f64, y1: f64, d1: f64, x: f64) -> f64 {
    let h = x1 - x0;
    let t = (x - x0) / h;
    let t2 = t * t;
    let t3 = t2 * t;
    let h00 = 2.0 * t3 - 3.0 * t2 + 1.0;
    let h10 = t3 - 2.0 * t2 + t;
    let h01 = -2.0 * t3 + 3.0 * t2;
    let h11 = t3 - t2;
    h00 * y0 + h10 * h * d0 + h01 * y1 + h11 * h * d1
}
