//! Tiny fixed-size 2x2 helpers. Everything in the linearized system is 2x2,
//! so a general matrix type would only add noise.

pub type Mat2 = [[f64; 2]; 2];
pub type Vec2 = [f64; 2];

pub const ZERO: Mat2 = [[0.0; 2]; 2];

pub fn mul(a: &Mat2, b: &Mat2) -> Mat2 {
    let mut c = ZERO;
    for i in 0..2 {
        for j in 0..2 {
            c[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
        }
    }
    c
}

pub fn mul_vec(a: &Mat2, v: &Vec2) -> Vec2 {
    [a[0][0] * v[0] + a[0][1] * v[1], a[1][0] * v[0] + a[1][1] * v[1]]
}

pub fn transpose(a: &Mat2) -> Mat2 {
    [[a[0][0], a[1][0]], [a[0][1], a[1][1]]]
}

pub fn add(a: &Mat2, b: &Mat2) -> Mat2 {
    [
        [a[0][0] + b[0][0], a[0][1] + b[0][1]],
        [a[1][0] + b[1][0], a[1][1] + b[1][1]],
    ]
}

pub fn sub(a: &Mat2, b: &Mat2) -> Mat2 {
    [
        [a[0][0] - b[0][0], a[0][1] - b[0][1]],
        [a[1][0] - b[1][0], a[1][1] - b[1][1]],
    ]
}

pub fn scale(a: &Mat2, s: f64) -> Mat2 {
    [[a[0][0] * s, a[0][1] * s], [a[1][0] * s, a[1][1] * s]]
}

pub fn det(a: &Mat2) -> f64 {
    a[0][0] * a[1][1] - a[0][1] * a[1][0]
}

pub fn max_abs(a: &Mat2) -> f64 {
    a.iter().flatten().fold(0.0_f64, |m, x| m.max(x.abs()))
}

/// x^T a y
pub fn quad(x: &Vec2, a: &Mat2, y: &Vec2) -> f64 {
    let ay = mul_vec(a, y);
    x[0] * ay[0] + x[1] * ay[1]
}

pub fn dot(a: &Vec2, b: &Vec2) -> f64 {
    a[0] * b[0] + a[1] * b[1]
}

pub fn inverse(a: &Mat2) -> Option<Mat2> {
    let d = det(a);
    if d == 0.0 || !d.is_finite() {
        return None;
    }
    Some([[a[1][1] / d, -a[0][1] / d], [-a[1][0] / d, a[0][0] / d]])
}

pub fn solve(a: &Mat2, b: &Vec2) -> Option<Vec2> {
    inverse(a).map(|inv| mul_vec(&inv, b))
}

/// Real eigenvalues in ascending order, or `None` when the pair is complex.
pub fn real_eigenvalues(a: &Mat2) -> Option<(f64, f64)> {
    let half_tr = 0.5 * (a[0][0] + a[1][1]);
    let half_diff = 0.5 * (a[0][0] - a[1][1]);
    let disc = half_diff * half_diff + a[0][1] * a[1][0];
    if disc < 0.0 {
        return None;
    }
    let r = disc.sqrt();
    Some((half_tr - r, half_tr + r))
}
