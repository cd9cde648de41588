//! IMEX time stepping of the linearized system.
//!
//! Each step advances transport and source explicitly (Beam-Warming on each
//! local characteristic field of `B`, forward Euler on `C y`), then diffuses
//! `v` implicitly with backward Euler. Boundary values are recomputed from
//! the interior after each stage.

use crate::error::{contract, Error, Result};
use crate::linear::LinearizedSystem;
use crate::lyapunov::{build_weights, evaluate_w_unchecked};
use crate::mat2;
use crate::model::{l2_norm_unchecked, StateVector};

/// Below this `|b0|` the inlet closure switches to characteristic extrapolation.
const B0_MIN: f64 = 1e-8;

/// Fill `h, v` at both ends from the interior values.
///
/// Inlet: `v_x(0) = 0` (second-order one-sided) and `v = -b0 h`. When `b0`
/// vanishes, `h(0)` comes from extrapolating the outgoing characteristic
/// instead. Outlet: extrapolate the outgoing characteristic and impose
/// `v = b1 h + mu c1 v_x`.
pub fn close_boundaries(sys: &LinearizedSystem, y: &mut StateVector) {
    let n = sys.n();
    let dx = sys.dx();
    let bc = sys.bc;
    if bc.b0.abs() > B0_MIN {
        let v0 = (4.0 * y.v[1] - y.v[2]) / 3.0;
        y.v[0] = v0;
        y.h[0] = -v0 / bc.b0;
    } else {
        let l = sys.chars[0].l[0];
        let w = l[0] * (2.0 * y.h[1] - y.h[2]) + l[1] * (2.0 * y.v[1] - y.v[2]);
        let sol = mat2::solve(&[[l[0], l[1]], [bc.b0, 1.0]], &[w, 0.0]).unwrap_or([0.0, 0.0]);
        y.h[0] = sol[0];
        y.v[0] = sol[1];
    }
    let l = sys.chars[n - 1].l[1];
    let w = l[0] * (2.0 * y.h[n - 2] - y.h[n - 3]) + l[1] * (2.0 * y.v[n - 2] - y.v[n - 3]);
    let k = sys.params.mu * bc.c1 / (2.0 * dx);
    let m = [[l[0], l[1]], [-bc.b1, 1.0 - 3.0 * k]];
    let rhs = [w, k * (-4.0 * y.v[n - 2] + y.v[n - 3])];
    let sol = mat2::solve(&m, &rhs).unwrap_or([f64::NAN, f64::NAN]);
    y.h[n - 1] = sol[0];
    y.v[n - 1] = sol[1];
}

/// Reusable stepper holding the tridiagonal workspace.
pub struct ImexStepper<'a> {
    sys: &'a LinearizedSystem,
    dt: f64,
    work: StateVector,
    sub: Vec<f64>,
    diag: Vec<f64>,
    sup: Vec<f64>,
    rhs: Vec<f64>,
}

impl<'a> ImexStepper<'a> {
    pub fn new(sys: &'a LinearizedSystem, dt: f64) -> Result<Self> {
        let n = sys.n();
        if n < 5 {
            return contract("IMEX stepping needs at least 5 grid points");
        }
        if !(dt > 0.0 && dt.is_finite()) {
            return contract(format!("time step must be positive, got {dt}"));
        }
        let m = n - 2;
        Ok(Self {
            sys,
            dt,
            work: StateVector::zeros(n),
            sub: vec![0.0; m],
            diag: vec![0.0; m],
            sup: vec![0.0; m],
            rhs: vec![0.0; m],
        })
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    /// Advance `y` in place by one step; `forcing` is added to the explicit stage.
    pub fn step(&mut self, y: &mut StateVector, forcing: Option<&StateVector>) -> Result<()> {
        self.explicit_stage(y, forcing);
        close_boundaries(self.sys, &mut self.work);
        self.implicit_stage()?;
        close_boundaries(self.sys, &mut self.work);
        std::mem::swap(y, &mut self.work);
        Ok(())
    }

    fn explicit_stage(&mut self, y: &StateVector, forcing: Option<&StateVector>) {
        let sys = self.sys;
        let n = sys.n();
        let dt = self.dt;
        let ratio = dt / sys.dx();
        let out = &mut self.work;
        for i in 1..n - 1 {
            let ch = &sys.chars[i];
            let mut dy = [0.0; 2];
            for k in 0..2 {
                let l = ch.l[k];
                let w = |j: usize| l[0] * y.h[j] + l[1] * y.v[j];
                let nu = ch.lam[k] * ratio;
                let (w0, wm1, wp1) = (w(i), w(i - 1), w(i + 1));
                let dw = if ch.lam[k] > 0.0 && i >= 2 {
                    let wm2 = w(i - 2);
                    -0.5 * nu * (3.0 * w0 - 4.0 * wm1 + wm2) + 0.5 * nu * nu * (w0 - 2.0 * wm1 + wm2)
                } else if ch.lam[k] <= 0.0 && i + 2 < n {
                    let wp2 = w(i + 2);
                    -0.5 * nu * (-3.0 * w0 + 4.0 * wp1 - wp2) + 0.5 * nu * nu * (w0 - 2.0 * wp1 + wp2)
                } else {
                    // Lax-Wendroff next to the boundary.
                    -0.5 * nu * (wp1 - wm1) + 0.5 * nu * nu * (wp1 - 2.0 * w0 + wm1)
                };
                dy[0] += ch.r[0][k] * dw;
                dy[1] += ch.r[1][k] * dw;
            }
            let c = &sys.c[i];
            let (h, v) = (y.h[i], y.v[i]);
            out.h[i] = h + dy[0] - dt * (c[0][0] * h + c[0][1] * v);
            out.v[i] = v + dy[1] - dt * (c[1][0] * h + c[1][1] * v);
            if let Some(f) = forcing {
                out.h[i] += dt * f.h[i];
                out.v[i] += dt * f.v[i];
            }
        }
    }

    fn implicit_stage(&mut self) -> Result<()> {
        let sys = self.sys;
        let n = sys.n();
        let m = n - 2;
        let dx = sys.dx();
        let mu = sys.params.mu;
        let bc = sys.bc;
        let r = 4.0 * mu * self.dt / (dx * dx);
        let y = &mut self.work;
        for j in 0..m {
            self.sub[j] = -r;
            self.diag[j] = 1.0 + 2.0 * r;
            self.sup[j] = -r;
            self.rhs[j] = y.v[j + 1];
        }
        if bc.b0.abs() > B0_MIN {
            // v0 = (4 v1 - v2) / 3 folded into the first row.
            self.diag[0] -= 4.0 * r / 3.0;
            self.sup[0] += r / 3.0;
        } else {
            self.rhs[0] += r * y.v[0];
        }
        // Outlet: with h frozen, eliminate h(L) between the characteristic
        // extrapolation and the Robin condition to get
        // v(L) = e0 + e1 v[n-2] + e2 v[n-3].
        let l = sys.chars[n - 1].l[1];
        let q = l[1] / l[0];
        let k = mu * bc.c1 / (2.0 * dx);
        let den = 1.0 - 3.0 * k + bc.b1 * q;
        let h_ext = 2.0 * y.h[n - 2] - y.h[n - 3];
        let e0 = bc.b1 * h_ext / den;
        let e1 = (2.0 * bc.b1 * q - 4.0 * k) / den;
        let e2 = (k - bc.b1 * q) / den;
        self.diag[m - 1] -= r * e1;
        self.sub[m - 1] -= r * e2;
        self.rhs[m - 1] += r * e0;
        thomas(&self.sub, &mut self.diag, &self.sup, &mut self.rhs)?;
        y.v[1..n - 1].copy_from_slice(&self.rhs);
        Ok(())
    }
}

/// Solve a tridiagonal system in place; `sub[0]` and `sup[m-1]` are ignored.
/// The solution overwrites `rhs`.
fn thomas(sub: &[f64], diag: &mut [f64], sup: &[f64], rhs: &mut [f64]) -> Result<()> {
    let m = diag.len();
    for j in 1..m {
        if diag[j - 1] == 0.0 || !diag[j - 1].is_finite() {
            return Err(Error::Numerical(format!("tridiagonal solve: zero pivot at row {}", j - 1)));
        }
        let f = sub[j] / diag[j - 1];
        diag[j] -= f * sup[j - 1];
        rhs[j] -= f * rhs[j - 1];
    }
    if diag[m - 1] == 0.0 || !diag[m - 1].is_finite() {
        return Err(Error::Numerical(format!("tridiagonal solve: zero pivot at row {}", m - 1)));
    }
    rhs[m - 1] /= diag[m - 1];
    for j in (0..m - 1).rev() {
        rhs[j] = (rhs[j] - sup[j] * rhs[j + 1]) / diag[j];
    }
    Ok(())
}

/// One IMEX step from `y`.
pub fn imex_step(sys: &LinearizedSystem, y: &StateVector, dt: f64) -> Result<StateVector> {
    y.check_grid(&sys.steady.grid)?;
    let mut out = y.clone();
    ImexStepper::new(sys, dt)?.step(&mut out, None)?;
    Ok(out)
}

#[derive(Debug, Clone)]
pub struct SimulationConfig {
    pub dt: f64,
    pub t_end: f64,
    /// Keep every `snapshot_stride`-th state; 0 disables snapshots.
    pub snapshot_stride: usize,
    pub initial: StateVector,
}

#[derive(Debug, Clone)]
pub struct Snapshot {
    pub t: f64,
    pub state: StateVector,
}

#[derive(Debug, Clone)]
pub struct SimulationTrace {
    pub times: Vec<f64>,
    pub l2: Vec<f64>,
    pub w: Vec<f64>,
    /// Decay rate from a least-squares fit of `ln l2` over the second half.
    pub gamma_fit: Option<f64>,
    /// Coefficient of determination of that fit.
    pub fit_r2: Option<f64>,
    pub snapshots: Vec<Snapshot>,
}

pub fn simulate(sys: &LinearizedSystem, cfg: &SimulationConfig) -> Result<SimulationTrace> {
    let grid = &sys.steady.grid;
    cfg.initial.check_grid(grid)?;
    if !(cfg.t_end >= 0.0 && cfg.t_end.is_finite()) {
        return contract(format!("final time must be nonnegative, got {}", cfg.t_end));
    }
    let limit = sys.cfl_dt();
    if cfg.dt > limit * (1.0 + 1e-12) {
        return contract(format!(
            "time step {} violates the advective CFL limit {limit}",
            cfg.dt
        ));
    }
    let w = build_weights(&sys.steady, &sys.params)?;
    let mut stepper = ImexStepper::new(sys, cfg.dt)?;
    let steps = (cfg.t_end / cfg.dt).round() as usize;
    let mut y = cfg.initial.clone();
    close_boundaries(sys, &mut y);
    let mut trace = SimulationTrace {
        times: Vec::with_capacity(steps + 1),
        l2: Vec::with_capacity(steps + 1),
        w: Vec::with_capacity(steps + 1),
        gamma_fit: None,
        fit_r2: None,
        snapshots: Vec::new(),
    };
    let record = |k: usize, y: &StateVector, trace: &mut SimulationTrace| -> Result<()> {
        let t = k as f64 * cfg.dt;
        let l2 = l2_norm_unchecked(y, grid);
        if !l2.is_finite() || l2 > 1e150 {
            return Err(Error::Diverged { step: k });
        }
        trace.times.push(t);
        trace.l2.push(l2);
        trace.w.push(evaluate_w_unchecked(y, &w, grid));
        if cfg.snapshot_stride > 0 && k % cfg.snapshot_stride == 0 {
            trace.snapshots.push(Snapshot { t, state: y.clone() });
        }
        Ok(())
    };
    record(0, &y, &mut trace)?;
    for k in 1..=steps {
        stepper.step(&mut y, None)?;
        record(k, &y, &mut trace)?;
    }
    if let Some((g, r2)) = fit_decay(&trace.times, &trace.l2) {
        trace.gamma_fit = Some(g);
        trace.fit_r2 = Some(r2);
    }
    Ok(trace)
}

/// `(-slope, R^2)` of the least-squares line through `(t, ln l2)` over the
/// second half of the time window.
pub fn fit_decay(times: &[f64], l2: &[f64]) -> Option<(f64, f64)> {
    let t_end = *times.last()?;
    let pts: Vec<(f64, f64)> = times
        .iter()
        .zip(l2)
        .filter(|(&t, _)| t >= 0.5 * t_end)
        .map(|(&t, &v)| (t, v))
        .collect();
    if pts.len() < 2 || pts.iter().any(|&(_, v)| !(v > 0.0)) {
        return None;
    }
    let m = pts.len() as f64;
    let mt = pts.iter().map(|p| p.0).sum::<f64>() / m;
    let my = pts.iter().map(|p| p.1.ln()).sum::<f64>() / m;
    let (mut stt, mut sty, mut syy) = (0.0, 0.0, 0.0);
    for &(t, v) in &pts {
        let (dt, dy) = (t - mt, v.ln() - my);
        stt += dt * dt;
        sty += dt * dy;
        syy += dy * dy;
    }
    if stt == 0.0 {
        return None;
    }
    let slope = sty / stt;
    let r2 = if syy == 0.0 { 1.0 } else { sty * sty / (stt * syy) };
    Some((-slope, r2))
}

/// Steps after the first 5% where `W` grew by more than `1e-8` relative.
pub fn lyapunov_monotonicity(trace: &SimulationTrace) -> usize {
    weighted_monotonicity(trace, 0.0, 1e-8)
}

/// Steps after the first 5% where `W(t) e^{gamma t}` grew by more than `rel`.
pub fn weighted_monotonicity(trace: &SimulationTrace, gamma: f64, rel: f64) -> usize {
    let n = trace.w.len();
    let start = n / 20;
    (start.max(1)..n)
        .filter(|&k| {
            let growth = (gamma * (trace.times[k] - trace.times[k - 1])).exp();
            trace.w[k] * growth > trace.w[k - 1] * (1.0 + rel)
        })
        .count()
}
