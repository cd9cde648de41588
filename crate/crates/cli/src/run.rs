//! Command implementations. Each writes its files into the output directory
//! and prints a short summary to stdout.

use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::Path;

use anyhow::{Context, Result};
use rayon::prelude::*;
use serde_json::json;
use svstab_core::io::{fmt_f64, write_snapshot_csv, write_spectrum_csv, write_steady_csv, write_trace_csv};
use svstab_core::lyapunov::{build_weights, central_plateau, offdiagonal_counterexample, CounterexampleOptions};
use svstab_core::sim::lyapunov_monotonicity;
use svstab_core::steady::{check_assumption_nearcritical, check_subcritical};
use svstab_core::{
    auto_boundary_coeffs, build_linear_system, check_stability, simulate, solve_steady, spectrum, BoundaryCoeffs,
    Grid, PhysicalParams, SimulationConfig, SimulationTrace, StabilityReport, SteadyState,
};

use crate::config::{BcPolicy, RunConfig, TimeStep};
use crate::svg::{decay_plot, Series};

pub const OFFDIAG_MODES: [u32; 5] = [4, 8, 16, 32, 64];

fn create(dir: &Path, name: &str) -> Result<BufWriter<File>> {
    fs::create_dir_all(dir).with_context(|| format!("cannot create output directory {}", dir.display()))?;
    let path = dir.join(name);
    Ok(BufWriter::new(File::create(&path).with_context(|| format!("cannot create {}", path.display()))?))
}

fn write_json(dir: &Path, name: &str, value: &impl serde::Serialize) -> Result<()> {
    let mut f = create(dir, name)?;
    serde_json::to_writer_pretty(&mut f, value)?;
    writeln!(f)?;
    f.flush()?;
    Ok(())
}

fn gains(cfg: &RunConfig, s: &SteadyState, p: &PhysicalParams) -> svstab_core::Result<BoundaryCoeffs> {
    match cfg.bc {
        BcPolicy::Auto => auto_boundary_coeffs(s, p),
        BcPolicy::Manual(bc) => Ok(bc),
    }
}

pub fn steady(cfg: &RunConfig) -> Result<()> {
    let p = cfg.physical;
    let s = solve_steady(&p, cfg.h0, cfg.v0, &cfg.grid())?;
    let mut f = create(&cfg.out, "steady.csv")?;
    write_steady_csv(&mut f, &s)?;
    f.flush()?;
    let n = s.grid.n;
    let margin = check_subcritical(&s, p.g);
    let summary = json!({
        "Q0": s.q0,
        "C0": s.c0,
        "H0": s.h0,
        "V0": s.v0,
        "H_L": s.h[n - 1],
        "V_L": s.v[n - 1],
        "min_Vx": s.vx.iter().copied().fold(f64::INFINITY, f64::min),
        "subcritical_margin": margin,
        "assumption_nearcritical": check_assumption_nearcritical(&s, p.g),
        "params": p,
        "n": n,
    });
    write_json(&cfg.out, "steady_summary.json", &summary)?;
    println!("steady state: Q0 = {}, V(L) = {}, subcritical margin = {margin}", s.q0, s.v[n - 1]);
    Ok(())
}

fn report_for(cfg: &RunConfig) -> Result<StabilityReport> {
    let p = cfg.physical;
    let s = solve_steady(&p, cfg.h0, cfg.v0, &cfg.grid())?;
    let bc = gains(cfg, &s, &p)?;
    Ok(check_stability(&s, &p, bc)?)
}

pub fn check(cfg: &RunConfig) -> Result<()> {
    let r = report_for(cfg)?;
    write_json(&cfg.out, "report.json", &r)?;
    match r.gamma_cert {
        Some(g) => println!("certified: gamma_cert = {g}"),
        None => println!("not certified (see report.json flags)"),
    }
    Ok(())
}

struct Run {
    label: String,
    trace: SimulationTrace,
    dt: f64,
}

fn simulate_one(cfg: &RunConfig, p: PhysicalParams) -> Result<Run> {
    let grid = cfg.grid();
    let s = solve_steady(&p, cfg.h0, cfg.v0, &grid)?;
    let bc = gains(cfg, &s, &p)?;
    let sys = build_linear_system(&s, &p, bc)?;
    let dt = match cfg.dt {
        TimeStep::Auto => sys.cfl_dt(),
        TimeStep::Fixed(dt) => dt,
    };
    let sc = SimulationConfig {
        dt,
        t_end: cfg.t_end,
        snapshot_stride: cfg.snapshot_stride,
        initial: cfg.initial_state(&grid),
    };
    let trace = simulate(&sys, &sc)?;
    Ok(Run { label: format!("mu = {}", p.mu), trace, dt })
}

pub fn simulate_cmd(cfg: &RunConfig) -> Result<()> {
    let mus = if cfg.mu_list.is_empty() { vec![cfg.physical.mu] } else { cfg.mu_list.clone() };
    let runs: Vec<Run> = mus
        .par_iter()
        .map(|&mu| simulate_one(cfg, cfg.physical.with_mu(mu)))
        .collect::<Result<_>>()?;
    let single = runs.len() == 1;
    let grid = cfg.grid();
    let mut summaries = Vec::new();
    for (k, run) in runs.iter().enumerate() {
        let tr = &run.trace;
        let suffix = if single { String::new() } else { format!("_{k}") };
        let mut f = create(&cfg.out, &format!("trace{suffix}.csv"))?;
        write_trace_csv(&mut f, &tr.times, &tr.l2, &tr.w)?;
        f.flush()?;
        for snap in &tr.snapshots {
            let step = (snap.t / run.dt).round() as u64;
            let mut f = create(&cfg.out, &format!("snapshot{suffix}_{step:08}.csv"))?;
            write_snapshot_csv(&mut f, &grid, &snap.state)?;
            f.flush()?;
        }
        summaries.push(json!({
            "mu": mus[k],
            "dt": run.dt,
            "steps": tr.times.len() - 1,
            "l2_initial": tr.l2[0],
            "l2_final": tr.l2.last(),
            "gamma_fit": tr.gamma_fit,
            "fit_r2": tr.fit_r2,
            "w_increases": lyapunov_monotonicity(tr),
        }));
        let ratio = tr.l2.last().unwrap() / tr.l2[0];
        match tr.gamma_fit {
            Some(g) => println!("{}: l2(T)/l2(0) = {ratio:e}, gamma_fit = {g}", run.label),
            None => println!("{}: l2(T)/l2(0) = {ratio:e}, no decay fit", run.label),
        }
    }
    let series: Vec<Series> = runs
        .iter()
        .map(|r| Series { label: r.label.clone(), t: &r.trace.times, y: &r.trace.l2 })
        .collect();
    let mut f = create(&cfg.out, "trace.svg")?;
    f.write_all(decay_plot(&series).as_bytes())?;
    f.flush()?;
    write_json(&cfg.out, "simulation_summary.json", &summaries)?;
    Ok(())
}

pub fn spectrum_cmd(cfg: &RunConfig) -> Result<()> {
    let p = cfg.physical;
    let s = solve_steady(&p, cfg.h0, cfg.v0, &cfg.grid())?;
    let bc = gains(cfg, &s, &p)?;
    let rep = spectrum(&build_linear_system(&s, &p, bc)?)?;
    let mut f = create(&cfg.out, "spectrum.csv")?;
    write_spectrum_csv(&mut f, &rep.eigenvalues)?;
    f.flush()?;
    write_json(
        &cfg.out,
        "spectrum_summary.json",
        &json!({ "max_real": rep.max_real, "n_used": rep.n_used, "count": rep.eigenvalues.len() }),
    )?;
    println!("max Re lambda = {} ({} eigenvalues)", rep.max_real, rep.eigenvalues.len());
    Ok(())
}

/// One sweep point; `None` gains come from the configured policy.
#[derive(Debug, Clone, Copy)]
struct Point {
    h0: f64,
    v0: f64,
    mu: f64,
    b0: Option<f64>,
    b1: Option<f64>,
    c1: Option<f64>,
}

struct Row {
    point: Point,
    bc: Option<BoundaryCoeffs>,
    outcome: std::result::Result<(StabilityReport, Option<f64>), String>,
}

const SWEEP_FLAGS: [&str; 13] = [
    "assumption_nearcritical",
    "subcritical",
    "q_positive",
    "b0_in_interval",
    "b1_outside_interval",
    "c1_in_interval",
    "c1_in_mu_interval",
    "interior_negative_definite",
    "a1_negative",
    "a2_negative",
    "delta_h_negative",
    "boundary_negative",
    "certified",
];

fn axis(values: &Option<Vec<f64>>, base: Option<f64>) -> Vec<Option<f64>> {
    match values {
        Some(v) => v.iter().map(|&x| Some(x)).collect(),
        None => vec![base],
    }
}

fn sweep_points(cfg: &RunConfig) -> Vec<Point> {
    let r = &cfg.sweep;
    let (b0, b1, c1) = match cfg.bc {
        BcPolicy::Manual(bc) => (Some(bc.b0), Some(bc.b1), Some(bc.c1)),
        BcPolicy::Auto => (None, None, None),
    };
    let mut pts = Vec::new();
    for h0 in axis(&r.h0, Some(cfg.h0)) {
        for v0 in axis(&r.v0, Some(cfg.v0)) {
            for mu in axis(&r.mu, Some(cfg.physical.mu)) {
                for b0 in axis(&r.b0, b0) {
                    for b1 in axis(&r.b1, b1) {
                        for c1 in axis(&r.c1, c1) {
                            pts.push(Point { h0: h0.unwrap(), v0: v0.unwrap(), mu: mu.unwrap(), b0, b1, c1 });
                        }
                    }
                }
            }
        }
    }
    pts
}

fn sweep_row(cfg: &RunConfig, pt: Point) -> Row {
    let mut bc_used = None;
    let outcome = (|| -> Result<(StabilityReport, Option<f64>)> {
        let p = PhysicalParams::new(cfg.physical.g, pt.mu, cfg.physical.kappa, cfg.physical.length)?;
        let s = solve_steady(&p, pt.h0, pt.v0, &cfg.grid())?;
        let need_auto = pt.b0.is_none() || pt.b1.is_none() || pt.c1.is_none();
        let auto = if need_auto { Some(auto_boundary_coeffs(&s, &p)?) } else { None };
        let pick = |v: Option<f64>, f: fn(&BoundaryCoeffs) -> f64| v.unwrap_or_else(|| f(auto.as_ref().unwrap()));
        let bc = BoundaryCoeffs::new(pick(pt.b0, |b| b.b0), pick(pt.b1, |b| b.b1), pick(pt.c1, |b| b.c1))?;
        bc_used = Some(bc);
        let report = check_stability(&s, &p, bc)?;
        let max_real = if cfg.sweep.spectrum {
            Some(spectrum(&build_linear_system(&s, &p, bc)?)?.max_real)
        } else {
            None
        };
        Ok((report, max_real))
    })()
    .map_err(|e| format!("{e:#}"));
    Row { point: pt, bc: bc_used, outcome }
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn opt(x: Option<f64>) -> String {
    x.map(fmt_f64).unwrap_or_default()
}

fn write_sweep<W: Write>(out: &mut W, rows: &[Row], with_spectrum: bool) -> Result<()> {
    let mut header = vec!["H0", "V0", "mu", "b0", "b1", "c1", "status", "error"];
    header.extend(SWEEP_FLAGS);
    header.extend(["gamma_cert", "gamma_interior", "detD_min", "subcritical_margin", "a1", "a2", "delta_h"]);
    if with_spectrum {
        header.push("max_real");
    }
    writeln!(out, "{}", header.join(","))?;
    for row in rows {
        let pt = row.point;
        let mut f = vec![fmt_f64(pt.h0), fmt_f64(pt.v0), fmt_f64(pt.mu)];
        match row.bc {
            Some(bc) => f.extend([fmt_f64(bc.b0), fmt_f64(bc.b1), fmt_f64(bc.c1)]),
            None => f.extend([opt(pt.b0), opt(pt.b1), opt(pt.c1)]),
        }
        match &row.outcome {
            Ok((r, max_real)) => {
                f.push("ok".into());
                f.push(String::new());
                let fl = r.flags;
                let flags = [
                    fl.assumption_nearcritical,
                    fl.subcritical,
                    fl.q_positive,
                    fl.b0_in_interval,
                    fl.b1_outside_interval,
                    fl.c1_in_interval,
                    fl.c1_in_mu_interval,
                    fl.interior_negative_definite,
                    fl.a1_negative,
                    fl.a2_negative,
                    fl.delta_h_negative,
                    fl.boundary_negative,
                    fl.certified,
                ];
                f.extend(flags.iter().map(|b| b.to_string()));
                f.extend([
                    opt(r.gamma_cert),
                    opt(r.gamma_interior),
                    fmt_f64(r.det_d_min),
                    fmt_f64(r.subcritical_margin),
                    fmt_f64(r.a1),
                    fmt_f64(r.a2),
                    fmt_f64(r.delta_h),
                ]);
                if with_spectrum {
                    f.push(opt(*max_real));
                }
            }
            Err(msg) => {
                f.push("error".into());
                f.push(csv_field(msg));
                let blanks = SWEEP_FLAGS.len() + 7 + usize::from(with_spectrum);
                f.extend(std::iter::repeat(String::new()).take(blanks));
            }
        }
        writeln!(out, "{}", f.join(","))?;
    }
    Ok(())
}

pub fn sweep(cfg: &RunConfig) -> Result<()> {
    let points = sweep_points(cfg);
    let rows: Vec<Row> = points.par_iter().map(|&pt| sweep_row(cfg, pt)).collect();
    let mut f = create(&cfg.out, "sweep.csv")?;
    write_sweep(&mut f, &rows, cfg.sweep.spectrum)?;
    f.flush()?;
    let ok = rows.iter().filter(|r| r.outcome.is_ok()).count();
    let certified = rows
        .iter()
        .filter(|r| matches!(&r.outcome, Ok((rep, _)) if rep.flags.certified))
        .count();
    println!("sweep: {} rows, {ok} evaluated, {certified} certified", rows.len());
    Ok(())
}

/// Grid size with at least `per_period` points per period of the highest
/// mode on the central half of the channel, doubling the resolution as needed.
pub fn offdiag_grid_size(n: usize, per_period: f64) -> usize {
    let max_mode = *OFFDIAG_MODES.iter().max().unwrap() as f64;
    let mut n = n;
    // 10% headroom for the discrete support being slightly shorter than L/2.
    while 0.5 * (n - 1) as f64 / max_mode < 1.1 * per_period {
        n = 2 * (n - 1) + 1;
    }
    n
}

pub fn demo_offdiag(cfg: &RunConfig) -> Result<()> {
    let p = cfg.physical;
    let opts = CounterexampleOptions::default();
    let n = offdiag_grid_size(cfg.n, opts.min_points_per_period);
    let grid = Grid::new(n, p.length)?;
    let s = solve_steady(&p, cfg.h0, cfg.v0, &grid)?;
    let w = build_weights(&s, &p)?;
    let q3 = central_plateau(&grid, cfg.q3_value);
    let rows = offdiagonal_counterexample(&w, &grid, &q3, &OFFDIAG_MODES, &opts)?;
    let mut f = create(&cfg.out, "offdiag.csv")?;
    writeln!(f, "n,I_yx,W")?;
    for r in &rows {
        writeln!(f, "{},{},{}", r.n, fmt_f64(r.i_yx), fmt_f64(r.w))?;
    }
    f.flush()?;
    let i = |m: u32| rows.iter().find(|r| r.n == m).map(|r| r.i_yx).unwrap();
    println!("grid n = {n}; I(32)/I(16) = {}", i(32) / i(16));
    Ok(())
}
