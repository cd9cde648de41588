//! Flat `key = value` run configuration.
//!
//! Sources are layered: built-in defaults, then the config file, then
//! `--set` pairs in order, then the `--mu` / `--n` shortcuts.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use svstab_core::{BoundaryCoeffs, Grid, PhysicalParams, StateVector};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BcPolicy {
    Auto,
    Manual(BoundaryCoeffs),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Initial {
    Cosine { h: [f64; 3], v: [f64; 3] },
    Zero,
    /// Independent uniform samples in `[-amp, amp]` at every grid point.
    Random { h_amp: f64, v_amp: f64 },
}

/// Time step: the advective CFL limit, or a fixed value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TimeStep {
    Auto,
    Fixed(f64),
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub physical: PhysicalParams,
    pub h0: f64,
    pub v0: f64,
    pub n: usize,
    pub bc: BcPolicy,
    pub dt: TimeStep,
    pub t_end: f64,
    pub snapshot_stride: usize,
    pub initial: Initial,
    pub seed: u64,
    pub out: PathBuf,
    pub mu_list: Vec<f64>,
    pub q3_value: f64,
    pub sweep: SweepRanges,
}

/// Value lists for the sweep axes; `None` means "use the base value".
#[derive(Debug, Clone, Default, PartialEq)]
pub struct SweepRanges {
    pub h0: Option<Vec<f64>>,
    pub v0: Option<Vec<f64>>,
    pub mu: Option<Vec<f64>>,
    pub b0: Option<Vec<f64>>,
    pub b1: Option<Vec<f64>>,
    pub c1: Option<Vec<f64>>,
    pub spectrum: bool,
}

pub const KEYS: &[&str] = &[
    "g", "mu", "kappa", "L", "H0", "V0", "n", "bc", "b0", "b1", "c1", "dt", "T", "snapshot_stride", "init",
    "init_h_amp", "init_h_k", "init_h_phase", "init_v_amp", "init_v_k", "init_v_phase", "seed", "out",
    "mu_list", "q3_value", "sweep_H0", "sweep_V0", "sweep_mu", "sweep_b0", "sweep_b1", "sweep_c1",
    "sweep_spectrum",
];

fn defaults() -> BTreeMap<String, String> {
    [
        ("g", "9.81"),
        ("mu", "0.001"),
        ("kappa", "0.002"),
        ("L", "1000"),
        ("H0", "4"),
        ("V0", "1"),
        ("n", "2001"),
        ("bc", "auto"),
        ("dt", "auto"),
        ("T", "3500"),
        ("snapshot_stride", "0"),
        ("init", "cosine"),
        ("init_h_amp", "0.01"),
        ("init_h_k", "20"),
        ("init_h_phase", "15"),
        ("init_v_amp", "0.01"),
        ("init_v_k", "1"),
        ("init_v_phase", "0"),
        ("seed", "0"),
        ("out", "."),
        ("q3_value", "1"),
        ("sweep_spectrum", "false"),
    ]
    .into_iter()
    .map(|(k, v)| (k.to_string(), v.to_string()))
    .collect()
}

/// Parse `key = value` lines; `#` starts a comment.
pub fn parse_pairs(text: &str, origin: &str) -> Result<Vec<(String, String)>> {
    let mut out = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .with_context(|| format!("{origin}:{}: expected `key = value`, got `{line}`", lineno + 1))?;
        out.push((k.trim().to_string(), v.trim().to_string()));
    }
    Ok(out)
}

pub fn parse_set(pair: &str) -> Result<(String, String)> {
    let (k, v) = pair.split_once('=').with_context(|| format!("--set expects key=value, got `{pair}`"))?;
    Ok((k.trim().to_string(), v.trim().to_string()))
}

/// A comma list `a,b,c` or an inclusive linear range `start:stop:count`.
pub fn parse_range(text: &str) -> Result<Vec<f64>> {
    let text = text.trim();
    if text.is_empty() {
        return Ok(Vec::new());
    }
    let parts: Vec<&str> = text.split(':').collect();
    match parts.as_slice() {
        [start, stop, count] => {
            let (a, b) = (parse_f64("range start", start)?, parse_f64("range stop", stop)?);
            let count: usize = count.trim().parse().with_context(|| format!("bad range count `{count}`"))?;
            Ok(match count {
                0 => Vec::new(),
                1 => vec![a],
                _ => (0..count).map(|k| a + (b - a) * k as f64 / (count - 1) as f64).collect(),
            })
        }
        [_] => text.split(',').map(|s| parse_f64("range value", s)).collect(),
        _ => bail!("range must be `a,b,c` or `start:stop:count`, got `{text}`"),
    }
}

fn parse_f64(key: &str, v: &str) -> Result<f64> {
    let x: f64 = v.trim().parse().with_context(|| format!("{key}: `{v}` is not a number"))?;
    if !x.is_finite() {
        bail!("{key}: value must be finite");
    }
    Ok(x)
}

fn parse_bool(key: &str, v: &str) -> Result<bool> {
    match v {
        "true" | "yes" | "1" => Ok(true),
        "false" | "no" | "0" => Ok(false),
        _ => bail!("{key}: expected true or false, got `{v}`"),
    }
}

impl RunConfig {
    /// Build from layered sources.
    pub fn load(
        file: Option<&Path>,
        sets: &[String],
        mu: Option<f64>,
        n: Option<usize>,
        out: Option<&Path>,
    ) -> Result<Self> {
        let mut map = defaults();
        let mut apply = |pairs: Vec<(String, String)>| -> Result<()> {
            for (k, v) in pairs {
                if !KEYS.contains(&k.as_str()) {
                    bail!("unknown configuration key `{k}`");
                }
                map.insert(k, v);
            }
            Ok(())
        };
        if let Some(path) = file {
            let text = std::fs::read_to_string(path)
                .with_context(|| format!("cannot read config file {}", path.display()))?;
            apply(parse_pairs(&text, &path.display().to_string())?)?;
        }
        apply(sets.iter().map(|s| parse_set(s)).collect::<Result<_>>()?)?;
        if let Some(mu) = mu {
            map.insert("mu".into(), mu.to_string());
        }
        if let Some(n) = n {
            map.insert("n".into(), n.to_string());
        }
        if let Some(out) = out {
            map.insert("out".into(), out.display().to_string());
        }
        Self::from_map(&map)
    }

    fn from_map(map: &BTreeMap<String, String>) -> Result<Self> {
        let num = |k: &str| parse_f64(k, &map[k]);
        let opt_num = |k: &str| map.get(k).map(|v| parse_f64(k, v)).transpose();
        let int = |k: &str| -> Result<u64> { map[k].parse().with_context(|| format!("{k}: `{}` is not a nonnegative integer", map[k])) };
        let range = |k: &str| map.get(k).map(|v| parse_range(v).with_context(|| format!("{k}"))).transpose();

        let physical = PhysicalParams::new(num("g")?, num("mu")?, num("kappa")?, num("L")?)?;
        let bc = match map["bc"].as_str() {
            "auto" => BcPolicy::Auto,
            "manual" => {
                let get = |k: &str| opt_num(k)?.with_context(|| format!("bc = manual requires {k}"));
                BcPolicy::Manual(BoundaryCoeffs::new(get("b0")?, get("b1")?, get("c1")?)?)
            }
            other => bail!("bc must be auto or manual, got `{other}`"),
        };
        let dt = match map["dt"].as_str() {
            "auto" => TimeStep::Auto,
            v => {
                let dt = parse_f64("dt", v)?;
                if dt <= 0.0 {
                    bail!("dt must be positive");
                }
                TimeStep::Fixed(dt)
            }
        };
        let t_end = num("T")?;
        if t_end < 0.0 {
            bail!("T must be nonnegative");
        }
        let initial = match map["init"].as_str() {
            "cosine" => Initial::Cosine {
                h: [num("init_h_amp")?, num("init_h_k")?, num("init_h_phase")?],
                v: [num("init_v_amp")?, num("init_v_k")?, num("init_v_phase")?],
            },
            "zero" => Initial::Zero,
            "random" => Initial::Random { h_amp: num("init_h_amp")?, v_amp: num("init_v_amp")? },
            other => bail!("init must be cosine, zero or random, got `{other}`"),
        };
        let n = int("n")? as usize;
        Grid::new(n, physical.length)?;
        let mu_list = range("mu_list")?.unwrap_or_default();
        if mu_list.iter().any(|&m| m <= 0.0) {
            bail!("mu_list entries must be positive");
        }
        Ok(Self {
            physical,
            h0: num("H0")?,
            v0: num("V0")?,
            n,
            bc,
            dt,
            t_end,
            snapshot_stride: int("snapshot_stride")? as usize,
            initial,
            seed: int("seed")?,
            out: PathBuf::from(&map["out"]),
            mu_list,
            q3_value: num("q3_value")?,
            sweep: SweepRanges {
                h0: range("sweep_H0")?,
                v0: range("sweep_V0")?,
                mu: range("sweep_mu")?,
                b0: range("sweep_b0")?,
                b1: range("sweep_b1")?,
                c1: range("sweep_c1")?,
                spectrum: parse_bool("sweep_spectrum", &map["sweep_spectrum"])?,
            },
        })
    }

    pub fn grid(&self) -> Grid {
        Grid::new(self.n, self.physical.length).expect("grid validated at load time")
    }

    pub fn initial_state(&self, grid: &Grid) -> StateVector {
        match self.initial {
            Initial::Cosine { h, v } => StateVector::from_fn(
                grid,
                |x| h[0] * (h[1] * x + h[2]).cos(),
                |x| v[0] * (v[1] * x + v[2]).cos(),
            ),
            Initial::Zero => StateVector::zeros(grid.n),
            Initial::Random { h_amp, v_amp } => {
                use rand::{Rng, SeedableRng};
                let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(self.seed);
                let h = (0..grid.n).map(|_| h_amp * rng.gen_range(-1.0..=1.0)).collect();
                let v = (0..grid.n).map(|_| v_amp * rng.gen_range(-1.0..=1.0)).collect();
                StateVector::new(h, v).expect("lengths match")
            }
        }
    }
}
