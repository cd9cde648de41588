use serde::{Deserialize, Serialize};

use crate::error::{contract, domain, Result};

/// Physical constants of the channel.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhysicalParams {
    pub g: f64,
    pub mu: f64,
    pub kappa: f64,
    #[serde(rename = "L")]
    pub length: f64,
}

impl PhysicalParams {
    pub fn new(g: f64, mu: f64, kappa: f64, length: f64) -> Result<Self> {
        let p = Self { g, mu, kappa, length };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        let all_finite = [self.g, self.mu, self.kappa, self.length]
            .iter()
            .all(|v| v.is_finite());
        if !all_finite {
            return domain("physical parameters must be finite");
        }
        if self.g <= 0.0 {
            return domain(format!("g must be positive, got {}", self.g));
        }
        if self.mu <= 0.0 {
            return domain(format!("mu must be positive, got {}", self.mu));
        }
        if self.kappa < 0.0 {
            return domain(format!("kappa must be nonnegative, got {}", self.kappa));
        }
        if self.length <= 0.0 {
            return domain(format!("L must be positive, got {}", self.length));
        }
        Ok(())
    }

    pub fn with_mu(&self, mu: f64) -> Self {
        Self { mu, ..*self }
    }
}

/// Uniform grid on `[0, L]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid {
    pub n: usize,
    pub dx: f64,
    pub x: Vec<f64>,
}

impl Grid {
    pub fn new(n: usize, length: f64) -> Result<Self> {
        if n < 3 {
            return contract(format!("grid needs at least 3 points, got {n}"));
        }
        if !(length > 0.0 && length.is_finite()) {
            return domain(format!("grid length must be positive, got {length}"));
        }
        let dx = length / (n - 1) as f64;
        let mut x: Vec<f64> = (0..n).map(|i| i as f64 * dx).collect();
        x[n - 1] = length;
        Ok(Self { n, dx, x })
    }

    pub fn length(&self) -> f64 {
        self.x[self.n - 1]
    }

    /// Composite trapezoid of sampled values.
    pub fn trapz(&self, f: &[f64]) -> f64 {
        assert_eq!(f.len(), self.n, "trapz: sample count does not match grid");
        let inner: f64 = f[1..self.n - 1].iter().sum();
        self.dx * (inner + 0.5 * (f[0] + f[self.n - 1]))
    }

    /// Running trapezoid integral, starting at 0 at `x[0]`.
    pub fn cumtrapz(&self, f: &[f64]) -> Vec<f64> {
        assert_eq!(f.len(), self.n, "cumtrapz: sample count does not match grid");
        let mut out = Vec::with_capacity(self.n);
        let mut acc = 0.0;
        out.push(0.0);
        for i in 1..self.n {
            acc += 0.5 * self.dx * (f[i - 1] + f[i]);
            out.push(acc);
        }
        out
    }
}

/// Perturbation `(h, v)` sampled on a grid.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    pub h: Vec<f64>,
    pub v: Vec<f64>,
}

impl StateVector {
    pub fn new(h: Vec<f64>, v: Vec<f64>) -> Result<Self> {
        if h.len() != v.len() {
            return contract(format!(
                "h and v lengths differ ({} vs {})",
                h.len(),
                v.len()
            ));
        }
        Ok(Self { h, v })
    }

    pub fn zeros(n: usize) -> Self {
        Self { h: vec![0.0; n], v: vec![0.0; n] }
    }

    pub fn from_fn(grid: &Grid, h: impl Fn(f64) -> f64, v: impl Fn(f64) -> f64) -> Self {
        Self {
            h: grid.x.iter().map(|&x| h(x)).collect(),
            v: grid.x.iter().map(|&x| v(x)).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.h.len()
    }

    pub fn is_empty(&self) -> bool {
        self.h.is_empty()
    }

    pub fn at(&self, i: usize) -> [f64; 2] {
        [self.h[i], self.v[i]]
    }

    pub fn check_grid(&self, grid: &Grid) -> Result<()> {
        if self.h.len() != grid.n || self.v.len() != grid.n {
            return contract(format!(
                "state has {} points but grid has {}",
                self.h.len(),
                grid.n
            ));
        }
        Ok(())
    }

    pub fn is_finite(&self) -> bool {
        self.h.iter().chain(self.v.iter()).all(|x| x.is_finite())
    }
}

/// Linear boundary gains: `v(0) = -b0 h(0)`, `v(L) = b1 h(L) + mu c1 v_x(L)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundaryCoeffs {
    pub b0: f64,
    pub b1: f64,
    pub c1: f64,
}

impl BoundaryCoeffs {
    pub fn new(b0: f64, b1: f64, c1: f64) -> Result<Self> {
        if !(b0.is_finite() && b1.is_finite() && c1.is_finite()) {
            return domain("boundary coefficients must be finite");
        }
        Ok(Self { b0, b1, c1 })
    }
}

/// Modified friction `f(H, V) = kappa V / (1 + kappa H / (3 mu))`.
pub fn friction(h: f64, v: f64, p: &PhysicalParams) -> Result<f64> {
    if !(h > 0.0) {
        return domain(format!("friction needs H > 0, got {h}"));
    }
    if !(p.mu > 0.0) {
        return domain(format!("friction needs mu > 0, got {}", p.mu));
    }
    Ok(friction_unchecked(h, v, p))
}

#[inline]
pub(crate) fn friction_unchecked(h: f64, v: f64, p: &PhysicalParams) -> f64 {
    // Multiplied through by 3 mu to stay accurate when kappa H >> mu.
    3.0 * p.mu * p.kappa * v / (3.0 * p.mu + p.kappa * h)
}

/// `f~(V) = V^2 kappa / (3 mu V + kappa Q0)`, the friction term written along
/// a constant-flux profile (`f(Q0/V, V) = 3 mu f~(V)`).
pub fn friction_tilde(v: f64, q0: f64, p: &PhysicalParams) -> Result<f64> {
    if !(v > 0.0) || !(q0 > 0.0) {
        return domain(format!("friction_tilde needs V > 0 and Q0 > 0, got V={v}, Q0={q0}"));
    }
    Ok(friction_tilde_unchecked(v, q0, p))
}

#[inline]
pub(crate) fn friction_tilde_unchecked(v: f64, q0: f64, p: &PhysicalParams) -> f64 {
    v * v * p.kappa / (3.0 * p.mu * v + p.kappa * q0)
}

/// `sqrt(int (h^2 + v^2) dx)` by the trapezoid rule.
pub fn l2_norm(y: &StateVector, grid: &Grid) -> Result<f64> {
    y.check_grid(grid)?;
    Ok(l2_norm_unchecked(y, grid))
}

pub(crate) fn l2_norm_unchecked(y: &StateVector, grid: &Grid) -> f64 {
    let n = grid.n;
    let sq = |i: usize| y.h[i] * y.h[i] + y.v[i] * y.v[i];
    let inner: f64 = (1..n - 1).map(sq).sum();
    (grid.dx * (inner + 0.5 * (sq(0) + sq(n - 1)))).sqrt()
}
