//! Cone kernels: Jordan products, Nesterov-Todd scalings and step lengths
//! for the nonnegative ray and the three-dimensional second-order cone.
//!
//! A 2x2 symmetric matrix `[[p, q], [q, r]]` is stored in cone coordinates
//! `((p + r)/sqrt2, (p - r)/sqrt2, sqrt2 q)`; this map is an isometry for the
//! trace inner product and sends the PSD cone onto the Lorentz cone.

use std::f64::consts::SQRT_2;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Cone {
    Ray,
    Lorentz3,
}

impl Cone {
    pub(crate) fn dim(self) -> usize {
        match self {
            Cone::Ray => 1,
            Cone::Lorentz3 => 3,
        }
    }
}

/// `(p, q, r)` matrix entries to cone coordinates.
#[cfg(test)]
pub(crate) fn entries_to_cone([p, q, r]: [f64; 3]) -> [f64; 3] {
    [(p + r) / SQRT_2, (p - r) / SQRT_2, SQRT_2 * q]
}

/// Inverse of [`entries_to_cone`] for the dual side: a cone-coordinate
/// vector `z` corresponds to the matrix `Z` with `<Z, S> = z . s`.
pub(crate) fn cone_to_matrix([a, b, c]: [f64; 3]) -> [[f64; 2]; 2] {
    let p = (a + b) / SQRT_2;
    let r = (a - b) / SQRT_2;
    let q = c / SQRT_2;
    [[p, q], [q, r]]
}

/// Rows of the linear map from entries `(p, q, r)` to cone coordinates.
pub(crate) const ENTRY_MAP: [[f64; 3]; 3] = [
    [1.0 / SQRT_2, 0.0, 1.0 / SQRT_2],
    [1.0 / SQRT_2, 0.0, -1.0 / SQRT_2],
    [0.0, SQRT_2, 0.0],
];

/// Distance to the boundary: `x` for a ray, `x0 - |x1|` for a Lorentz cone.
pub(crate) fn margin(cone: Cone, x: &[f64]) -> f64 {
    match cone {
        Cone::Ray => x[0],
        Cone::Lorentz3 => x[0] - (x[1] * x[1] + x[2] * x[2]).sqrt(),
    }
}

/// `u o v`.
pub(crate) fn jordan_product(cone: Cone, u: &[f64], v: &[f64], out: &mut [f64]) {
    match cone {
        Cone::Ray => out[0] = u[0] * v[0],
        Cone::Lorentz3 => {
            out[0] = u[0] * v[0] + u[1] * v[1] + u[2] * v[2];
            out[1] = u[0] * v[1] + v[0] * u[1];
            out[2] = u[0] * v[2] + v[0] * u[2];
        }
    }
}

/// Solves `lambda o x = r` for `x`.
pub(crate) fn jordan_divide(cone: Cone, lambda: &[f64], r: &[f64], out: &mut [f64]) {
    match cone {
        Cone::Ray => out[0] = r[0] / lambda[0],
        Cone::Lorentz3 => {
            let det = lambda[0] * lambda[0] - lambda[1] * lambda[1] - lambda[2] * lambda[2];
            let x0 = (lambda[0] * r[0] - lambda[1] * r[1] - lambda[2] * r[2]) / det;
            out[0] = x0;
            out[1] = (r[1] - x0 * lambda[1]) / lambda[0];
            out[2] = (r[2] - x0 * lambda[2]) / lambda[0];
        }
    }
}

/// Nesterov-Todd scaling `W` (symmetric) with `W z = W^{-1} s = lambda`.
#[derive(Debug, Clone, Copy)]
pub(crate) struct NtScaling {
    pub(crate) w: [[f64; 3]; 3],
    pub(crate) w_inv: [[f64; 3]; 3],
    pub(crate) lambda: [f64; 3],
}

impl NtScaling {
    pub(crate) fn new(cone: Cone, s: &[f64], z: &[f64]) -> Self {
        let mut w = [[0.0; 3]; 3];
        let mut w_inv = [[0.0; 3]; 3];
        let mut lambda = [0.0; 3];
        match cone {
            Cone::Ray => {
                w[0][0] = (s[0] / z[0]).sqrt();
                w_inv[0][0] = 1.0 / w[0][0];
                lambda[0] = (s[0] * z[0]).sqrt();
            }
            Cone::Lorentz3 => {
                let s_norm = lorentz_norm(s);
                let z_norm = lorentz_norm(z);
                let sh = [s[0] / s_norm, s[1] / s_norm, s[2] / s_norm];
                let zh = [z[0] / z_norm, z[1] / z_norm, z[2] / z_norm];
                let dot = sh[0] * zh[0] + sh[1] * zh[1] + sh[2] * zh[2];
                let gamma = ((1.0 + dot) / 2.0).sqrt();
                let wb = [
                    (sh[0] + zh[0]) / (2.0 * gamma),
                    (sh[1] - zh[1]) / (2.0 * gamma),
                    (sh[2] - zh[2]) / (2.0 * gamma),
                ];
                let eta = (s_norm / z_norm).sqrt();
                let denom = 1.0 + wb[0];
                for (sign, target, factor) in [(1.0, &mut w, eta), (-1.0, &mut w_inv, 1.0 / eta)] {
                    target[0][0] = factor * wb[0];
                    for i in 1..3 {
                        target[0][i] = factor * sign * wb[i];
                        target[i][0] = factor * sign * wb[i];
                        for j in 1..3 {
                            let delta = if i == j { 1.0 } else { 0.0 };
                            target[i][j] = factor * (delta + wb[i] * wb[j] / denom);
                        }
                    }
                }
                lambda = mat_vec(&w, z);
            }
        }
        Self { w, w_inv, lambda }
    }

    pub(crate) fn apply(&self, cone: Cone, x: &[f64], out: &mut [f64]) {
        apply(cone, &self.w, x, out)
    }

    pub(crate) fn apply_inv(&self, cone: Cone, x: &[f64], out: &mut [f64]) {
        apply(cone, &self.w_inv, x, out)
    }

    /// `W^{-2}`, the block of the normal matrix contributed by this cone.
    pub(crate) fn inv_squared(&self, cone: Cone) -> [[f64; 3]; 3] {
        let d = cone.dim();
        let mut out = [[0.0; 3]; 3];
        for i in 0..d {
            for j in 0..d {
                out[i][j] = (0..d).map(|k| self.w_inv[i][k] * self.w_inv[k][j]).sum();
            }
        }
        out
    }
}

fn lorentz_norm(x: &[f64]) -> f64 {
    ((x[0] - x[1]) * (x[0] + x[1]) - x[2] * x[2]).max(f64::MIN_POSITIVE).sqrt()
}

fn mat_vec(m: &[[f64; 3]; 3], x: &[f64]) -> [f64; 3] {
    let mut out = [0.0; 3];
    for i in 0..3 {
        out[i] = m[i][0] * x[0] + m[i][1] * x[1] + m[i][2] * x[2];
    }
    out
}

fn apply(cone: Cone, m: &[[f64; 3]; 3], x: &[f64], out: &mut [f64]) {
    let d = cone.dim();
    for i in 0..d {
        out[i] = (0..d).map(|k| m[i][k] * x[k]).sum();
    }
}

/// Largest `alpha` with `x + alpha dx` in the cone, capped at `f64::MAX`.
/// `x` must be strictly interior.
pub(crate) fn max_step(cone: Cone, x: &[f64], dx: &[f64]) -> f64 {
    match cone {
        Cone::Ray => {
            if dx[0] < 0.0 {
                -x[0] / dx[0]
            } else {
                f64::MAX
            }
        }
        Cone::Lorentz3 => {
            let mut limit = if dx[0] < 0.0 { -x[0] / dx[0] } else { f64::MAX };
            let a = dx[0] * dx[0] - dx[1] * dx[1] - dx[2] * dx[2];
            let b = x[0] * dx[0] - x[1] * dx[1] - x[2] * dx[2];
            let c = (x[0] - x[1]) * (x[0] + x[1]) - x[2] * x[2];
            // first positive root of a t^2 + 2 b t + c with c > 0
            let root = if a == 0.0 {
                if b < 0.0 {
                    -c / (2.0 * b)
                } else {
                    f64::MAX
                }
            } else {
                let disc = b * b - a * c;
                if disc < 0.0 {
                    f64::MAX
                } else {
                    let q = -(b + b.signum() * disc.sqrt());
                    let roots = [q / a, if q != 0.0 { c / q } else { f64::MAX }];
                    roots.into_iter().filter(|r| *r > 0.0).fold(f64::MAX, f64::min)
                }
            };
            limit = limit.min(root);
            limit
        }
    }
}
