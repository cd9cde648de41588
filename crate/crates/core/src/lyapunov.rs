//! Diagonal quadratic Lyapunov certificate `W(y) = int y^T Q y dx` with
//! `Q = diag(g + mu q~1, H* + mu q~2)`, its interior and boundary
//! negativity conditions, and the explicit gain intervals.

use serde::Serialize;

use crate::error::{contract, domain, Error, Result};
use crate::linear::{build_linear_system, d1, LinearizedSystem, Stencil};
use crate::mat2::{self, Mat2};
use crate::model::{BoundaryCoeffs, Grid, PhysicalParams, StateVector};
use crate::steady::{check_assumption_nearcritical, check_subcritical, SteadyState};

#[derive(Debug, Clone)]
pub struct LyapunovWeights {
    pub mu: f64,
    pub q1: Vec<f64>,
    pub q2: Vec<f64>,
    pub qt1: Vec<f64>,
    pub qt2: Vec<f64>,
    pub qt1x: Vec<f64>,
    pub q1x: Vec<f64>,
    pub q2x: Vec<f64>,
    pub q2xx: Vec<f64>,
}

impl LyapunovWeights {
    pub fn q(&self, i: usize) -> Mat2 {
        [[self.q1[i], 0.0], [0.0, self.q2[i]]]
    }

    pub fn is_positive(&self) -> bool {
        self.q1.iter().chain(&self.q2).all(|&q| q > 0.0)
    }

    pub fn bounds(&self) -> (f64, f64) {
        self.q1
            .iter()
            .chain(&self.q2)
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &q| (lo.min(q), hi.max(q)))
    }
}

pub fn build_weights(s: &SteadyState, p: &PhysicalParams) -> Result<LyapunovWeights> {
    if !(p.mu > 0.0) {
        return domain("weights need mu > 0");
    }
    let (g, mu) = (p.g, p.mu);
    let n = s.grid.n;
    let mut w = LyapunovWeights {
        mu,
        q1: Vec::with_capacity(n),
        q2: Vec::with_capacity(n),
        qt1: Vec::with_capacity(n),
        qt2: Vec::with_capacity(n),
        qt1x: Vec::with_capacity(n),
        q1x: Vec::with_capacity(n),
        q2x: Vec::with_capacity(n),
        q2xx: Vec::with_capacity(n),
    };
    for i in 0..n {
        let (h, vx, vxx, hx, hxx) = (s.h[i], s.vx[i], s.vxx[i], s.hx[i], s.hxx[i]);
        let qt1 = g - 4.0 * (1.0 + mu) * vx / h;
        let qt1x = -4.0 * (1.0 + mu) * (vxx * h - vx * hx) / (h * h);
        w.qt1.push(qt1);
        w.qt2.push(h);
        w.q1.push(g + mu * qt1);
        w.q2.push(h + mu * h);
        w.qt1x.push(qt1x);
        w.q1x.push(mu * qt1x);
        w.q2x.push((1.0 + mu) * hx);
        w.q2xx.push((1.0 + mu) * hxx);
    }
    Ok(w)
}

/// `int (q1 h^2 + q2 v^2) dx`
pub fn evaluate_w(y: &StateVector, w: &LyapunovWeights, grid: &Grid) -> Result<f64> {
    y.check_grid(grid)?;
    if w.q1.len() != grid.n {
        return contract("weights do not match grid");
    }
    Ok(evaluate_w_unchecked(y, w, grid))
}

pub(crate) fn evaluate_w_unchecked(y: &StateVector, w: &LyapunovWeights, grid: &Grid) -> f64 {
    let n = grid.n;
    let e = |i: usize| w.q1[i] * y.h[i] * y.h[i] + w.q2[i] * y.v[i] * y.v[i];
    let inner: f64 = (1..n - 1).map(e).sum();
    grid.dx * (inner + 0.5 * (e(0) + e(n - 1)))
}

pub fn qb(sys: &LinearizedSystem, w: &LyapunovWeights, i: usize) -> Mat2 {
    mat2::mul(&w.q(i), &sys.b[i])
}

/// Analytic `d/dx (Q B)` at grid index `i`.
pub fn qb_x(sys: &LinearizedSystem, w: &LyapunovWeights, i: usize) -> Mat2 {
    let s = &sys.steady;
    let mu = sys.params.mu;
    let (h, v, vx, vxx, hx, hxx) = (s.h[i], s.v[i], s.vx[i], s.vxx[i], s.hx[i], s.hxx[i]);
    let b = &sys.b[i];
    let b10x = -4.0 * mu * (vxx * h - vx * hx) / (h * h);
    let b11x = vx - 4.0 * mu * (hxx * h - hx * hx) / (h * h);
    [
        [w.q1x[i] * v + w.q1[i] * vx, w.q1x[i] * h + w.q1[i] * hx],
        [w.q2x[i] * b[1][0] + w.q2[i] * b10x, w.q2x[i] * b[1][1] + w.q2[i] * b11x],
    ]
}

/// `phi(gamma) = gamma Q - (QC + (QC)^T) - Q_xx A + (QB)_x` at grid index `i`.
pub fn compute_phi(sys: &LinearizedSystem, w: &LyapunovWeights, gamma: f64, i: usize) -> Result<Mat2> {
    let q = w.q(i);
    let qc = mat2::mul(&q, &sys.c[i]);
    let sym = mat2::add(&qc, &mat2::transpose(&qc));
    let qxx_a = [[0.0, 0.0], [0.0, w.q2xx[i] * sys.a[1][1]]];
    let dqb = qb_x(sys, w, i);
    let phi = mat2::add(&mat2::sub(&mat2::sub(&mat2::scale(&q, gamma), &sym), &qxx_a), &dqb);
    let asym = (phi[0][1] - phi[1][0]).abs();
    let scale = mat2::max_abs(&phi)
        .max(mat2::max_abs(&dqb))
        .max(mat2::max_abs(&sym));
    if asym > 1e-12 * scale {
        return Err(Error::Numerical(format!(
            "phi is not symmetric at index {i}: |phi01 - phi10| = {asym:e}"
        )));
    }
    let off = 0.5 * (phi[0][1] + phi[1][0]);
    Ok([[phi[0][0], off], [off, phi[1][1]]])
}

/// Result of the pointwise interior check.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct InteriorCertificate {
    pub gamma_cert: Option<f64>,
    #[serde(rename = "detD_min")]
    pub det_d_min: f64,
    pub negative_definite: bool,
}

fn negative_definite(m: &Mat2, tol: f64, scale: f64) -> bool {
    m[0][0] <= -tol && mat2::det(m) >= tol * scale
}

pub fn certify_interior(sys: &LinearizedSystem, w: &LyapunovWeights) -> Result<InteriorCertificate> {
    let n = sys.n();
    let d: Vec<Mat2> = (0..n).map(|i| compute_phi(sys, w, 0.0, i)).collect::<Result<_>>()?;
    let det_d_min = d.iter().map(mat2::det).fold(f64::INFINITY, f64::min);
    let scale = d.iter().map(mat2::max_abs).fold(0.0, f64::max);
    let tol = 1e-14 * scale;
    let all_nd = |gamma: f64| {
        (0..n).all(|i| {
            let m = mat2::add(&d[i], &mat2::scale(&w.q(i), gamma));
            negative_definite(&m, tol, scale)
        })
    };
    if scale == 0.0 || !all_nd(0.0) {
        return Ok(InteriorCertificate { gamma_cert: None, det_d_min, negative_definite: false });
    }
    let gamma = if all_nd(1.0) {
        1.0
    } else {
        let (mut lo, mut hi) = (0.0, 1.0);
        for _ in 0..50 {
            let mid = 0.5 * (lo + hi);
            if all_nd(mid) {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        lo
    };
    Ok(InteriorCertificate {
        gamma_cert: (gamma > 0.0).then_some(gamma),
        det_d_min,
        negative_definite: true,
    })
}

/// Admissible gain intervals.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct CoefficientIntervals {
    pub b0_lo: f64,
    pub b0_hi: f64,
    pub b1_lo: f64,
    pub b1_hi: f64,
    pub c1_lo: Option<f64>,
    pub c1_hi: Option<f64>,
    pub c1mu_lo: Option<f64>,
    pub c1mu_hi: Option<f64>,
}

pub fn coefficient_intervals(s: &SteadyState, p: &PhysicalParams, b1: f64) -> Result<CoefficientIntervals> {
    let g = p.g;
    let n = s.grid.n;
    let (v0, h0) = (s.v[0], s.h[0]);
    let (vl, hl) = (s.v[n - 1], s.h[n - 1]);
    let r0 = 1.0 / (v0 * v0) - 1.0 / (g * h0);
    let rl = 1.0 / (vl * vl) - 1.0 / (g * hl);
    if r0 < 0.0 || rl < 0.0 {
        return domain("flow is supercritical at a boundary; gain intervals undefined");
    }
    let (c0, w0) = (g / v0, g * r0.sqrt());
    let (cl, wl) = (-g / vl, g * rl.sqrt());
    let margin = g * hl - vl * vl;
    let rad = vl * (hl * vl * b1 * b1 / g + 2.0 * hl * b1 + vl);
    let (c1_lo, c1_hi) = if rad >= 0.0 {
        let mid = -vl - b1 * hl;
        let a = 4.0 * (mid - rad.sqrt()) / margin;
        let b = 4.0 * (mid + rad.sqrt()) / margin;
        (Some(a.min(b)), Some(a.max(b)))
    } else {
        (None, None)
    };
    let w = build_weights(s, p)?;
    let (d1, d2, d3) = pd_coefficients(s, p, &w, b1);
    let disc = d2 * d2 - 4.0 * d1 * d3;
    let (c1mu_lo, c1mu_hi) = if d1 > 0.0 && disc > 0.0 {
        let sq = disc.sqrt();
        // Stable quadratic roots.
        let qq = -0.5 * (d2 + d2.signum() * sq);
        let (ra, rb) = if qq != 0.0 { (qq / d1, d3 / qq) } else { (0.0, 0.0) };
        (Some(ra.min(rb)), Some(ra.max(rb)))
    } else {
        (None, None)
    };
    Ok(CoefficientIntervals {
        b0_lo: c0 - w0,
        b0_hi: c0 + w0,
        b1_lo: cl - wl,
        b1_hi: cl + wl,
        c1_lo,
        c1_hi,
        c1mu_lo,
        c1mu_hi,
    })
}

/// Coefficients of `Delta_h / mu^2 = d1 c1^2 + d2 c1 + d3`.
fn pd_coefficients(s: &SteadyState, p: &PhysicalParams, w: &LyapunovWeights, b1: f64) -> (f64, f64, f64) {
    let (alpha, beta, gamma, q2, q2x) = qb_at_outlet(s, p, w);
    let mu = p.mu;
    let d1 = 4.0 * beta * beta - 4.0 * alpha * gamma - 16.0 * alpha * mu * q2x;
    let d2 = 32.0 * q2 * (alpha + beta * b1);
    let d3 = 64.0 * b1 * b1 * q2 * q2;
    (d1, d2, d3)
}

/// `(alpha, beta, gamma, q2, q2x)` with `QB(L) = [[alpha, beta], [beta, gamma]]`.
fn qb_at_outlet(s: &SteadyState, p: &PhysicalParams, w: &LyapunovWeights) -> (f64, f64, f64, f64, f64) {
    let i = s.grid.n - 1;
    let (h, v, hx) = (s.h[i], s.v[i], s.hx[i]);
    let alpha = w.q1[i] * v;
    let beta = w.q1[i] * h;
    let gamma = w.q2[i] * (v - 4.0 * p.mu * hx / h);
    (alpha, beta, gamma, w.q2[i], w.q2x[i])
}

/// The boundary term expressed as a quadratic form in `h(0), h(L), v_x(L)`.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct BoundaryForm {
    pub a1: f64,
    pub a2: f64,
    pub a3: f64,
    pub a4: f64,
    pub delta_h: f64,
    pub d1: f64,
    pub d2: f64,
    pub d3: f64,
    pub delta_d: f64,
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
}

impl BoundaryForm {
    pub fn negative(&self) -> bool {
        self.a1 < 0.0 && self.a2 < 0.0 && self.delta_h < 0.0
    }
}

pub fn boundary_form(sys: &LinearizedSystem, w: &LyapunovWeights) -> BoundaryForm {
    let mu = sys.params.mu;
    let BoundaryCoeffs { b0, b1, c1 } = sys.bc;
    let qb0 = qb(sys, w, 0);
    let a1 = mat2::quad(&[1.0, -b0], &qb0, &[1.0, -b0]) + 4.0 * mu * b0 * b0 * w.q2x[0];
    let (alpha, beta, gamma, q2, q2x) = qb_at_outlet(&sys.steady, &sys.params, w);
    let a2 = -alpha - 2.0 * beta * b1 - gamma * b1 * b1 - 4.0 * mu * b1 * b1 * q2x;
    let a3 = mu * mu * (-gamma * c1 * c1 + 8.0 * c1 * q2 - 4.0 * mu * c1 * c1 * q2x);
    let a4 = mu * (-2.0 * beta * c1 - 2.0 * gamma * b1 * c1 + 8.0 * b1 * q2 - 8.0 * mu * b1 * c1 * q2x);
    let (d1, d2, d3) = pd_coefficients(&sys.steady, &sys.params, w, b1);
    BoundaryForm {
        a1,
        a2,
        a3,
        a4,
        delta_h: a4 * a4 - 4.0 * a2 * a3,
        d1,
        d2,
        d3,
        delta_d: d2 * d2 - 4.0 * d1 * d3,
        alpha,
        beta,
        gamma,
    }
}

/// Default gains: `b0 = g / V*(0)`, `b1` just outside the forbidden interval,
/// `c1` at the midpoint of its admissible interval.
pub fn auto_boundary_coeffs(s: &SteadyState, p: &PhysicalParams) -> Result<BoundaryCoeffs> {
    let n = s.grid.n;
    let iv = coefficient_intervals(s, p, 0.0)?;
    let b0 = p.g / s.v[0];
    let b1 = iv.b1_hi + 0.1 * iv.b1_hi.abs();
    let (vl, hl) = (s.v[n - 1], s.h[n - 1]);
    let c1 = 4.0 * (-vl - b1 * hl) / (p.g * hl - vl * vl);
    BoundaryCoeffs::new(b0, b1, c1)
}

/// `-2 (gH)^2 + 8 gH V^2 - 4 V^4 > 0`, the small-viscosity sign condition for `det D`.
pub fn polynomial_window(gh: f64, v2: f64) -> bool {
    -2.0 * gh * gh + 8.0 * gh * v2 - 4.0 * v2 * v2 > 0.0
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct StabilityFlags {
    pub assumption_nearcritical: bool,
    pub subcritical: bool,
    pub q_positive: bool,
    pub b0_in_interval: bool,
    pub b1_outside_interval: bool,
    pub c1_in_interval: bool,
    pub c1_in_mu_interval: bool,
    pub interior_negative_definite: bool,
    pub a1_negative: bool,
    pub a2_negative: bool,
    pub delta_h_negative: bool,
    pub boundary_negative: bool,
    pub certified: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct StabilityReport {
    pub mu: f64,
    pub b0: f64,
    pub b1: f64,
    pub c1: f64,
    pub b0_lo: f64,
    pub b0_hi: f64,
    pub b1_lo: f64,
    pub b1_hi: f64,
    pub c1_lo: Option<f64>,
    pub c1_hi: Option<f64>,
    pub c1mu_lo: Option<f64>,
    pub c1mu_hi: Option<f64>,
    pub gamma_cert: Option<f64>,
    pub gamma_interior: Option<f64>,
    #[serde(rename = "detD_min")]
    pub det_d_min: f64,
    pub subcritical_margin: f64,
    pub a1: f64,
    pub a2: f64,
    pub a3: f64,
    pub a4: f64,
    pub delta_h: f64,
    pub flags: StabilityFlags,
}

fn inside(x: f64, lo: Option<f64>, hi: Option<f64>) -> bool {
    matches!((lo, hi), (Some(a), Some(b)) if a < x && x < b)
}

/// Full certificate: intervals, interior negativity and boundary negativity.
pub fn check_stability(s: &SteadyState, p: &PhysicalParams, bc: BoundaryCoeffs) -> Result<StabilityReport> {
    let sys = build_linear_system(s, p, bc)?;
    let w = build_weights(s, p)?;
    let iv = coefficient_intervals(s, p, bc.b1)?;
    let interior = certify_interior(&sys, &w)?;
    let bf = boundary_form(&sys, &w);
    let margin = check_subcritical(s, p.g);
    let subcritical = margin > 0.0;
    let q_positive = w.is_positive();
    let boundary_negative = bf.negative();
    let certified = subcritical && q_positive && interior.negative_definite && boundary_negative;
    let flags = StabilityFlags {
        assumption_nearcritical: check_assumption_nearcritical(s, p.g),
        subcritical,
        q_positive,
        b0_in_interval: iv.b0_lo < bc.b0 && bc.b0 < iv.b0_hi,
        b1_outside_interval: bc.b1 < iv.b1_lo || bc.b1 > iv.b1_hi,
        c1_in_interval: inside(bc.c1, iv.c1_lo, iv.c1_hi),
        c1_in_mu_interval: inside(bc.c1, iv.c1mu_lo, iv.c1mu_hi),
        interior_negative_definite: interior.negative_definite,
        a1_negative: bf.a1 < 0.0,
        a2_negative: bf.a2 < 0.0,
        delta_h_negative: bf.delta_h < 0.0,
        boundary_negative,
        certified: certified && interior.gamma_cert.is_some(),
    };
    Ok(StabilityReport {
        mu: p.mu,
        b0: bc.b0,
        b1: bc.b1,
        c1: bc.c1,
        b0_lo: iv.b0_lo,
        b0_hi: iv.b0_hi,
        b1_lo: iv.b1_lo,
        b1_hi: iv.b1_hi,
        c1_lo: iv.c1_lo,
        c1_hi: iv.c1_hi,
        c1mu_lo: iv.c1mu_lo,
        c1mu_hi: iv.c1mu_hi,
        gamma_cert: if flags.certified { interior.gamma_cert } else { None },
        gamma_interior: interior.gamma_cert,
        det_d_min: interior.det_d_min,
        subcritical_margin: margin,
        a1: bf.a1,
        a2: bf.a2,
        a3: bf.a3,
        a4: bf.a4,
        delta_h: bf.delta_h,
        flags,
    })
}

/// Terms of `dW/dt + gamma W = I + B`.
#[derive(Debug, Clone, Copy)]
pub struct EnergyBalance {
    pub dwdt: f64,
    pub w: f64,
    pub interior: f64,
    pub boundary: f64,
    pub residual: f64,
}

pub fn energy_balance(
    sys: &LinearizedSystem,
    w: &LyapunovWeights,
    y: &StateVector,
    gamma: f64,
) -> Result<EnergyBalance> {
    let grid = &sys.steady.grid;
    y.check_grid(grid)?;
    let n = grid.n;
    let dx = grid.dx;
    let mu = sys.params.mu;
    let yt = crate::linear::apply_operator(sys, y, Stencil::Centered)?;
    let vx: Vec<f64> = (0..n).map(|i| d1(&y.v, i, dx)).collect();
    let mut e_dw = Vec::with_capacity(n);
    let mut e_i = Vec::with_capacity(n);
    for i in 0..n {
        let yi = y.at(i);
        e_dw.push(2.0 * (w.q1[i] * yi[0] * yt.h[i] + w.q2[i] * yi[1] * yt.v[i]));
        let phi = compute_phi(sys, w, gamma, i)?;
        // y_x^T Q A y_x = -4 mu q2 v_x^2
        e_i.push(mat2::quad(&yi, &phi, &yi) - 8.0 * mu * w.q2[i] * vx[i] * vx[i]);
    }
    let dwdt = grid.trapz(&e_dw);
    let interior = grid.trapz(&e_i);
    let wv = evaluate_w_unchecked(y, w, grid);
    let edge = |i: usize| {
        let yi = y.at(i);
        let qxa = [[0.0, 0.0], [0.0, w.q2x[i] * sys.a[1][1]]];
        let m = mat2::sub(&qxa, &qb(sys, w, i));
        mat2::quad(&yi, &m, &yi) - 2.0 * yi[1] * w.q2[i] * sys.a[1][1] * vx[i]
    };
    let boundary = edge(n - 1) - edge(0);
    Ok(EnergyBalance {
        dwdt,
        w: wv,
        interior,
        boundary,
        residual: (dwdt + gamma * wv - interior - boundary).abs(),
    })
}

#[derive(Debug, Clone, Copy)]
pub struct CounterexampleOptions {
    /// `h^n ~ n^{-h_exponent}`
    pub h_exponent: f64,
    /// `v^n ~ n^{-v_exponent}`
    pub v_exponent: f64,
    /// Minimum grid points per oscillation period at the largest mode.
    pub min_points_per_period: f64,
}

impl Default for CounterexampleOptions {
    fn default() -> Self {
        Self { h_exponent: 0.0, v_exponent: 1.25, min_points_per_period: 8.0 }
    }
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct GrowthRow {
    pub n: u32,
    pub i_yx: f64,
    pub w: f64,
}

/// Oscillating sequence `h = phi sin(n w x) n^{-a}`, `v = -sign(q3) phi sin(n w x) n^{-b}`
/// supported where `q3 != 0`. Returns the diffusion cross term
/// `-8 mu int (q3 h_x v_x + q2 v_x^2) dx` and `W` for each mode.
pub fn offdiagonal_counterexample(
    w: &LyapunovWeights,
    grid: &Grid,
    q3: &[f64],
    modes: &[u32],
    opts: &CounterexampleOptions,
) -> Result<Vec<GrowthRow>> {
    if q3.len() != grid.n || w.q1.len() != grid.n {
        return contract("q3 profile and weights must match the grid");
    }
    let (imax, qmax) = q3
        .iter()
        .enumerate()
        .fold((0, 0.0_f64), |(bi, bq), (i, &q)| if q.abs() > bq { (i, q.abs()) } else { (bi, bq) });
    if qmax == 0.0 {
        return contract("q3 vanishes identically; there is nothing to demonstrate");
    }
    let sign = q3[imax].signum();
    let (mut ia, mut ib) = (imax, imax);
    while ia > 0 && q3[ia - 1] * sign > 0.0 {
        ia -= 1;
    }
    while ib + 1 < grid.n && q3[ib + 1] * sign > 0.0 {
        ib += 1;
    }
    let (a, b) = (grid.x[ia], grid.x[ib]);
    if ib <= ia + 2 {
        return contract("support of q3 is too narrow");
    }
    let omega = 2.0 * std::f64::consts::PI / (b - a);
    let n_max = modes.iter().copied().max().unwrap_or(0) as f64;
    let points_per_period = (b - a) / n_max.max(1.0) / grid.dx;
    if points_per_period < opts.min_points_per_period {
        return contract(format!(
            "grid too coarse: {points_per_period:.1} points per period at mode {n_max}, need {}",
            opts.min_points_per_period
        ));
    }
    let mid = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let bump = |x: f64| -> (f64, f64) {
        let t = (x - mid) / half;
        if t.abs() >= 1.0 {
            return (0.0, 0.0);
        }
        let s = 1.0 - t * t;
        let phi = (-1.0 / s).exp();
        (phi, phi * (-2.0 * t / (s * s)) / half)
    };
    let mut rows = Vec::with_capacity(modes.len());
    for &m in modes {
        if m == 0 {
            return contract("modes must be positive");
        }
        let nf = m as f64;
        let sh = nf.powf(-opts.h_exponent);
        let sv = -sign * nf.powf(-opts.v_exponent);
        let mut integrand = Vec::with_capacity(grid.n);
        let mut y = StateVector::zeros(grid.n);
        for (i, &x) in grid.x.iter().enumerate() {
            let (phi, dphi) = bump(x);
            let (sn, cs) = (nf * omega * x).sin_cos();
            let base = phi * sn;
            let dbase = dphi * sn + phi * nf * omega * cs;
            y.h[i] = sh * base;
            y.v[i] = sv * base;
            let (hx, vx) = (sh * dbase, sv * dbase);
            integrand.push(q3[i] * hx * vx + w.q2[i] * vx * vx);
        }
        let i_yx = -8.0 * w.mu * grid.trapz(&integrand);
        rows.push(GrowthRow { n: m, i_yx, w: evaluate_w_unchecked(&y, w, grid) });
    }
    Ok(rows)
}

/// Piecewise-constant `q3`: `value` on `[L/4, 3L/4]`, zero elsewhere.
pub fn central_plateau(grid: &Grid, value: f64) -> Vec<f64> {
    let l = grid.length();
    grid.x
        .iter()
        .map(|&x| if x >= 0.25 * l && x <= 0.75 * l { value } else { 0.0 })
        .collect()
}
