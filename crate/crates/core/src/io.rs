//! Plain-text output helpers. Floats are written with 17 significant digits.

use std::io::{self, Write};

use crate::model::{Grid, StateVector};
use crate::steady::SteadyState;

pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

fn write_rows<W: Write>(out: &mut W, header: &str, rows: impl Iterator<Item = Vec<f64>>) -> io::Result<()> {
    writeln!(out, "{header}")?;
    for row in rows {
        let line: Vec<String> = row.into_iter().map(fmt_f64).collect();
        writeln!(out, "{}", line.join(","))?;
    }
    Ok(())
}

/// Columns `x,H,V,Vx,Vxx,Hx`.
pub fn write_steady_csv<W: Write>(out: &mut W, s: &SteadyState) -> io::Result<()> {
    write_rows(
        out,
        "x,H,V,Vx,Vxx,Hx",
        (0..s.grid.n).map(|i| vec![s.grid.x[i], s.h[i], s.v[i], s.vx[i], s.vxx[i], s.hx[i]]),
    )
}

/// Columns `t,l2,W`.
pub fn write_trace_csv<W: Write>(out: &mut W, times: &[f64], l2: &[f64], w: &[f64]) -> io::Result<()> {
    write_rows(out, "t,l2,W", (0..times.len()).map(|k| vec![times[k], l2[k], w[k]]))
}

/// Columns `x,h,v`.
pub fn write_snapshot_csv<W: Write>(out: &mut W, grid: &Grid, y: &StateVector) -> io::Result<()> {
    write_rows(out, "x,h,v", (0..grid.n).map(|i| vec![grid.x[i], y.h[i], y.v[i]]))
}

/// Columns `re,im`.
pub fn write_spectrum_csv<W: Write>(out: &mut W, eig: &[(f64, f64)]) -> io::Result<()> {
    write_rows(out, "re,im", eig.iter().map(|&(re, im)| vec![re, im]))
}
