//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits with
//! a nonzero status if any criterion fails.

mod common;

use std::time::{Duration, Instant};

use common::*;
use svstab_core::linear::build_linear_system;
use svstab_core::lyapunov::{
    boundary_form, build_weights, central_plateau, certify_interior, check_stability, coefficient_intervals,
    compute_phi, energy_balance, offdiagonal_counterexample, polynomial_window, qb, CounterexampleOptions,
};
use svstab_core::mat2;
use svstab_core::sim::{lyapunov_monotonicity, weighted_monotonicity};
use svstab_core::steady::{check_subcritical, verify_asymptotics};
use svstab_core::{simulate, spectrum, SimulationConfig, StateVector};

struct Outcome {
    pass: bool,
    detail: String,
}

fn sci(v: &[f64]) -> String {
    let parts: Vec<String> = v.iter().map(|x| format!("{x:.3e}")).collect();
    format!("[{}]", parts.join(", "))
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

fn reference_decay() -> Outcome {
    let (p, s) = reference(2001);
    let sys = build_linear_system(&s, &p, reference_gains(&p, &s)).unwrap();
    let cfg = SimulationConfig { dt: 0.033, t_end: 3500.0, snapshot_stride: 0, initial: cosine_initial(&s.grid) };
    let tr = simulate(&sys, &cfg).unwrap();
    let ratio = tr.l2.last().unwrap() / tr.l2[0];
    let (gamma, r2) = (tr.gamma_fit.unwrap_or(f64::NAN), tr.fit_r2.unwrap_or(f64::NAN));
    outcome(
        ratio < 0.5 && gamma > 0.0 && r2 > 0.95,
        format!("l2(T)/l2(0) = {ratio:.3e}, gamma_fit = {gamma:.4e}, R^2 = {r2:.4}"),
    )
}

fn steady_invariants() -> Outcome {
    let mut pass = true;
    let mut parts = Vec::new();
    for (name, (p, s)) in [("reference", reference(2001)), ("near-critical", nearcritical(1e-4, 2001))] {
        let flux = (0..s.grid.n).map(|i| (s.h[i] * s.v[i] - s.q0).abs() / s.q0).fold(0.0, f64::max);
        let margin = check_subcritical(&s, p.g);
        let vx_min = s.vx.iter().copied().fold(f64::INFINITY, f64::min);
        pass &= flux <= 1e-10 && margin > 0.0 && vx_min >= -1e-12;
        parts.push(format!("{name}: flux err {flux:.1e}, margin {margin:.4}, min Vx {vx_min:.1e}"));
    }
    outcome(pass, parts.join("; "))
}

fn asymptotic_scaling() -> Outcome {
    let mus = [2e-4, 1e-4, 5e-5];
    let res: Vec<_> = mus
        .iter()
        .map(|&mu| {
            let (p, s) = steady(mu, 0.05, 1.0, 0.2, 1.0, 4001);
            verify_asymptotics(&s, &p).unwrap()
        })
        .collect();
    let r1: Vec<f64> = res.windows(2).map(|w| w[0].r1 / w[1].r1).collect();
    let r2: Vec<f64> = res.windows(2).map(|w| w[0].r2 / w[1].r2).collect();
    let pass = r1.iter().all(|r| (1.6..=2.4).contains(r)) && r2.iter().all(|r| (3.0..=5.5).contains(r));
    outcome(pass, format!("sup|V-V0| ratios {r1:.3?}, two-term residual ratios {r2:.3?}"))
}

fn certificate_construction() -> Outcome {
    let (p, s) = nearcritical(1e-4, 2001);
    let sys = auto_system(&p, &s);
    let w = build_weights(&s, &p).unwrap();
    let sym = (0..s.grid.n)
        .map(|i| {
            let m = qb(&sys, &w, i);
            (m[0][1] - m[1][0]).abs() / mat2::max_abs(&m)
        })
        .fold(0.0, f64::max);
    let det_ok = (0..s.grid.n).all(|i| mat2::det(&compute_phi(&sys, &w, 0.0, i).unwrap()) > 0.0);
    let r = check_stability(&s, &p, sys.bc).unwrap();
    let gamma = r.gamma_cert.unwrap_or(0.0);
    let point = sym <= 1e-12 && det_ok && gamma > 0.0 && r.a1 < 0.0 && r.a2 < 0.0 && r.delta_h < 0.0;

    let scaled: Vec<f64> = [1e-3, 5e-4, 2.5e-4]
        .iter()
        .map(|&mu| {
            let (p, s) = steady(mu, 0.05, 1.0, 0.2, 1.0, 2001);
            let sys = auto_system(&p, &s);
            let w = build_weights(&s, &p).unwrap();
            certify_interior(&sys, &w).unwrap().det_d_min / (mu * mu)
        })
        .collect();
    let bounded = scaled.iter().all(|&d| d > 0.0)
        && scaled.windows(2).all(|w| (w[0] - w[1]).abs() < 0.5 * w[0].min(w[1]));
    outcome(
        point && bounded,
        format!(
            "QB asymmetry {sym:.1e}, det D > 0: {det_ok}, gamma_cert {gamma:.4e}, a1 {:.3e}, a2 {:.3e}, delta_h {:.3e}, min det D / mu^2 {scaled:.1?}",
            r.a1, r.a2, r.delta_h
        ),
    )
}

fn interval_formulas() -> Outcome {
    let (p, s) = reference(2001);
    let gains = reference_gains(&p, &s);
    let iv = coefficient_intervals(&s, &p, gains.b1).unwrap();
    let b0_mid = 0.5 * (iv.b0_lo + iv.b0_hi);
    let b0_err = (b0_mid - p.g / s.v[0]).abs() / b0_mid;
    let c1_mid = 0.5 * (iv.c1_lo.unwrap() + iv.c1_hi.unwrap());
    let c1_err = (c1_mid - gains.c1).abs() / gains.c1.abs();

    let (pn, sn) = nearcritical(1e-4, 2001);
    let sys = auto_system(&pn, &sn);
    let w = build_weights(&sn, &pn).unwrap();
    let bf = boundary_form(&sys, &w);
    let q2 = w.q2[sn.grid.n - 1];
    let rhs = -1024.0 * q2 * q2 * bf.alpha * bf.a2;
    let dd_err = (bf.delta_d - rhs).abs() / rhs.abs();

    let (lo, hi) = (2.0 - std::f64::consts::SQRT_2, 2.0 + std::f64::consts::SQRT_2);
    let mismatches = (0..350)
        .filter(|&k| {
            let r = 0.5 + 3.5 * k as f64 / 349.0;
            polynomial_window(r, 1.0) != (lo < r && r < hi)
        })
        .count();
    outcome(
        b0_err <= 2.0 * f64::EPSILON && c1_err <= 1e-10 && dd_err <= 1e-8 && mismatches == 0,
        format!("b0 midpoint err {b0_err:.1e}, c1 midpoint err {c1_err:.1e}, delta_d err {dd_err:.1e}, window mismatches {mismatches}/350"),
    )
}

fn nearcritical_run() -> (svstab_core::LinearizedSystem, svstab_core::SimulationTrace) {
    let (p, s) = nearcritical(1e-4, 201);
    let sys = auto_system(&p, &s);
    let cfg = SimulationConfig { dt: sys.cfl_dt(), t_end: 200.0, snapshot_stride: 0, initial: cosine_initial(&s.grid) };
    let tr = simulate(&sys, &cfg).unwrap();
    (sys, tr)
}

fn lyapunov_decay() -> Outcome {
    let (sys, tr) = nearcritical_run();
    let r = check_stability(&sys.steady, &sys.params, sys.bc).unwrap();
    let Some(gamma) = r.gamma_cert else {
        return outcome(false, "configuration not certified".into());
    };
    let plain = lyapunov_monotonicity(&tr);
    let weighted = weighted_monotonicity(&tr, gamma, 1e-6);
    outcome(
        plain == 0 && weighted == 0,
        format!("W increases: {plain}, W e^(gamma_cert t) increases: {weighted} over {} steps (gamma_cert {gamma:.4e})", tr.w.len() - 1),
    )
}

fn spectrum_oracle() -> Outcome {
    let maxes: Vec<f64> = [101, 201, 401]
        .iter()
        .map(|&n| {
            let (p, s) = nearcritical(1e-4, n);
            spectrum(&auto_system(&p, &s)).unwrap().max_real
        })
        .collect();
    let (_, tr) = nearcritical_run();
    let gamma = tr.gamma_fit.unwrap_or(f64::NAN);
    let lam = maxes[1];
    let ratio = lam.abs() / gamma;
    let diffs = [(maxes[1] - maxes[0]).abs(), (maxes[2] - maxes[1]).abs()];
    outcome(
        maxes.iter().all(|&m| m < 0.0) && (0.5..=2.0).contains(&ratio) && diffs[1] < diffs[0],
        format!("max Re {maxes:.5?}, successive diffs {}, gamma_fit {gamma:.4e}, |max Re|/gamma_fit {ratio:.3}", sci(&diffs)),
    )
}

fn energy_identity() -> Outcome {
    let mut res = Vec::new();
    for n in [101, 201, 401, 801] {
        let (p, s) = steady(1e-2, 5e-3, 1.0, 0.2, 1.0, n);
        let sys = auto_system(&p, &s);
        let w = build_weights(&s, &p).unwrap();
        let y = StateVector::from_fn(&s.grid, |x| 0.5 + (2.0 * x).sin(), |x| x * (3.0 * x).cos());
        res.push(energy_balance(&sys, &w, &y, 0.01).unwrap().residual);
    }
    let ord = orders(&res);
    let (p, s) = nearcritical(1e-4, 401);
    let sys = auto_system(&p, &s);
    let w = build_weights(&s, &p).unwrap();
    let (a, b) = (2.0, 8.0);
    let bump = |x: f64| {
        if x > a && x < b {
            (-1.0 / (1.0 - ((2.0 * x - a - b) / (b - a)).powi(2))).exp()
        } else {
            0.0
        }
    };
    let y = StateVector::from_fn(&s.grid, |x| bump(x) * (2.0 * x).sin(), |x| bump(x) * x.cos());
    let boundary = energy_balance(&sys, &w, &y, 0.1).unwrap().boundary;
    outcome(
        ord.iter().all(|&o| o >= 1.7) && boundary == 0.0,
        format!("residuals {}, orders {ord:.3?}, boundary term for compact support {boundary:e}", sci(&res)),
    )
}

fn offdiagonal_demo() -> Outcome {
    let (p, s) = nearcritical(1e-4, 2049);
    let w = build_weights(&s, &p).unwrap();
    let q3 = central_plateau(&s.grid, 1.0);
    let modes = [4, 8, 16, 32, 64];
    let rows = offdiagonal_counterexample(&w, &s.grid, &q3, &modes, &CounterexampleOptions::default()).unwrap();
    let i: Vec<f64> = rows.iter().map(|r| r.i_yx).collect();
    let increasing = i.windows(2).all(|w| w[1] > w[0]);
    let ratio = i[4 - 1] / i[2];
    let (wmin, wmax) = rows.iter().fold((f64::INFINITY, 0.0_f64), |(lo, hi), r| (lo.min(r.w), hi.max(r.w)));
    outcome(
        increasing && (1.45..=1.9).contains(&ratio) && wmax / wmin < 3.0,
        format!("I(n) {}, I(32)/I(16) {ratio:.4}, W max/min {:.4}", sci(&i), wmax / wmin),
    )
}

fn scheme_orders() -> Outcome {
    let (p, s) = steady(0.05, 2e-3, 1.0, 0.2, 1.0, 1601);
    let sys = auto_system(&p, &s);
    let m = Manufactured::new(&sys);
    let cfl = sys.cfl_dt();
    let et: Vec<f64> = [1.0, 0.5, 0.25].iter().map(|&c| m.error(&sys, c * cfl, 1.0)).collect();
    let ex: Vec<f64> = [101, 201, 401]
        .iter()
        .map(|&n| {
            let (p, s) = steady(0.05, 2e-3, 1.0, 0.2, 1.0, n);
            let sys = auto_system(&p, &s);
            let dx = s.grid.dx;
            Manufactured::new(&sys).error(&sys, dx * dx, 1.0)
        })
        .collect();
    let (ot, ox) = (orders(&et), orders(&ex));
    outcome(
        ot.iter().all(|o| (0.8..=1.2).contains(o)) && ox.iter().all(|o| (1.7..=2.3).contains(o)),
        format!("time errors {} orders {ot:.3?}; space errors {} orders {ox:.3?}", sci(&et), sci(&ex)),
    )
}

fn main() {
    let criteria: [(&str, Duration, fn() -> Outcome); 10] = [
        ("reference-channel decay", Duration::from_secs(120), reference_decay),
        ("steady-state invariants", Duration::from_secs(10), steady_invariants),
        ("small-viscosity scaling", Duration::from_secs(30), asymptotic_scaling),
        ("certificate construction", Duration::from_secs(30), certificate_construction),
        ("interval formulas", Duration::from_secs(10), interval_formulas),
        ("Lyapunov decay in simulation", Duration::from_secs(60), lyapunov_decay),
        ("spectrum oracle", Duration::from_secs(60), spectrum_oracle),
        ("energy-balance identity", Duration::from_secs(30), energy_identity),
        ("diagonal-weight necessity", Duration::from_secs(10), offdiagonal_demo),
        ("scheme convergence orders", Duration::from_secs(120), scheme_orders),
    ];
    let mut failed = 0;
    for (k, (name, budget, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let out = run();
        let elapsed = start.elapsed();
        let in_budget = elapsed <= *budget;
        let pass = out.pass && in_budget;
        if !pass {
            failed += 1;
        }
        println!(
            "criterion {:>2} {name}: {} ({}) [{:.2} s of {} s budget]",
            k + 1,
            if pass { "PASS" } else { "FAIL" },
            out.detail,
            elapsed.as_secs_f64(),
            budget.as_secs()
        );
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
