//! Quadrature routines: periodic trapezoid sums with resolution doubling and
//! tanh-sinh panels for integrands with integrable endpoint singularities.

use crate::{Error, Result};
use num_complex::Complex64;

/// Mean of `f` over [0, 2π), i.e. (1/2π)∫f dθ, by trapezoid sums on
/// equispaced grids doubled until two consecutive resolutions agree to `tol`.
/// Spectrally accurate for smooth periodic integrands.
pub fn periodic_mean(
    f: impl Fn(f64) -> Complex64,
    start_n: usize,
    max_n: usize,
    tol: f64,
) -> Result<Complex64> {
    let mut n = start_n.max(4);
    let mut prev = trapezoid_mean(&f, n);
    loop {
        n *= 2;
        if n > max_n {
            return Err(Error::PrecisionFailure(format!(
                "periodic mean did not stabilize to {tol:.1e} within {max_n} points"
            )));
        }
        let cur = trapezoid_mean(&f, n);
        if (cur - prev).norm() <= tol * (1.0 + cur.norm()) {
            return Ok(cur);
        }
        prev = cur;
    }
}

fn trapezoid_mean(f: &impl Fn(f64) -> Complex64, n: usize) -> Complex64 {
    let mut acc = Complex64::new(0.0, 0.0);
    for g in 0..n {
        acc += f(std::f64::consts::TAU * g as f64 / n as f64);
    }
    acc / n as f64
}

/// ∫_a^b f dx by tanh-sinh quadrature. Tolerates integrable singularities at
/// the endpoints provided `f` itself evaluates finitely there (power-type
/// factors with positive exponent vanish at the endpoint, so they do).
pub fn tanh_sinh(
    f: impl Fn(f64) -> Complex64,
    a: f64,
    b: f64,
    tol: f64,
) -> Result<Complex64> {
    let c = 0.5 * (a + b);
    let d = 0.5 * (b - a);
    let t_max = 4.0;
    let node = |t: f64| -> Complex64 {
        let u = std::f64::consts::FRAC_PI_2 * t.sinh();
        let x = c + d * u.tanh();
        let w = d * std::f64::consts::FRAC_PI_2 * t.cosh() / u.cosh().powi(2);
        if w == 0.0 || !w.is_finite() {
            return Complex64::new(0.0, 0.0);
        }
        f(x) * w
    };
    let mut prev = Complex64::new(0.0, 0.0);
    let mut agreed = false;
    for level in 2..=11u32 {
        let h = 0.5f64.powi(level as i32);
        let steps = (t_max / h).ceil() as i64;
        let mut acc = node(0.0);
        for k in 1..=steps {
            let t = k as f64 * h;
            acc += node(t) + node(-t);
        }
        let cur = acc * h;
        if level > 2 && (cur - prev).norm() <= tol * (1.0 + cur.norm()) {
            if agreed {
                return Ok(cur);
            }
            agreed = true;
        } else {
            agreed = false;
        }
        prev = cur;
    }
    Ok(prev)
}

/// (1/2π)∫₀^{2π} f(θ) e^{-ijθ} dθ with integrable power singularities of the
/// integrand at the angles in `singular_angles`. The circle is split into
/// panels between consecutive singular angles and each panel is handled by
/// [`tanh_sinh`]; with no singular angles the periodic trapezoid sum is used.
pub fn fourier_coefficient(
    f: impl Fn(f64) -> Complex64,
    singular_angles: &[f64],
    j: i64,
    tol: f64,
) -> Result<Complex64> {
    let g = |theta: f64| f(theta) * Complex64::from_polar(1.0, -(j as f64) * theta);
    if singular_angles.is_empty() {
        return periodic_mean(g, 64, 1 << 20, tol);
    }
    let mut cuts: Vec<f64> = singular_angles
        .iter()
        .map(|&u| u.rem_euclid(std::f64::consts::TAU))
        .collect();
    cuts.sort_by(f64::total_cmp);
    cuts.dedup_by(|a, b| (*a - *b).abs() < 1e-13);
    let mut acc = Complex64::new(0.0, 0.0);
    for i in 0..cuts.len() {
        let a = cuts[i];
        let b = if i + 1 < cuts.len() {
            cuts[i + 1]
        } else {
            cuts[0] + std::f64::consts::TAU
        };
        acc += tanh_sinh(&g, a, b, tol)?;
    }
    Ok(acc / std::f64::consts::TAU)
}
