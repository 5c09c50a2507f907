//! The Gaussian comparison field and its barrier events.
//!
//! X^{(M)}(θ) = Re Σ_{j=1}^{M} (Z_j/√j) e^{-ijθ} with i.i.d. standard complex
//! Gaussians Z_j shares its covariance Σ^{(M)}(θ-θ') = Σ_{j≤M} cos(j(θ-θ'))/(2j)
//! with the truncated CUE field in the large-N limit. Exponentiating it gives
//! the reference multiplicative-chaos mass, exactly normalizable because the
//! field is Gaussian.

use crate::cue::{FieldGrid, FieldKind};
use crate::rng::standard_complex_gaussian;
use crate::{fft, invalid, Result};
use num_complex::Complex64;
use rand::Rng;

/// Σ^{(m)}(δ) = Σ_{j=1}^{m} cos(jδ)/(2j), the covariance of the degree-m field
/// at angular separation δ. At δ = 0 this is half the m-th harmonic number.
pub fn covariance_sigma(m: usize, delta: f64) -> f64 {
    (1..=m).map(|j| (j as f64 * delta).cos() / (2.0 * j as f64)).sum()
}

/// Fourier coefficients Z_1..Z_m of one Gaussian field draw.
pub fn sample_gaussian_coeffs<R: Rng>(m: usize, rng: &mut R) -> Vec<Complex64> {
    (0..m).map(|_| standard_complex_gaussian(rng)).collect()
}

/// Field value at one angle by direct summation.
pub fn gaussian_field_at(coeffs: &[Complex64], theta: f64) -> f64 {
    let mut acc = Complex64::new(0.0, 0.0);
    for (j, &z) in coeffs.iter().enumerate() {
        let k = (j + 1) as f64;
        acc += z / k.sqrt() * Complex64::from_polar(1.0, -k * theta);
    }
    acc.re
}

/// Field values on all grid angles with one fast transform. The grid must be
/// a power of two with at least 2m points so every mode is resolved.
pub fn sample_gaussian_field<R: Rng>(
    m: usize,
    grid_size: usize,
    rng: &mut R,
) -> Result<FieldGrid> {
    if !grid_size.is_power_of_two() {
        return Err(invalid("grid size must be a power of two"));
    }
    if grid_size < 2 * m {
        return Err(invalid(format!(
            "grid size {grid_size} cannot resolve {m} modes; need at least {}",
            2 * m
        )));
    }
    let coeffs = sample_gaussian_coeffs(m, rng);
    Ok(gaussian_field_on_grid(&coeffs, grid_size))
}

/// Grid evaluation of a field with given coefficients (grid size already
/// validated by the caller or known to be large enough).
pub fn gaussian_field_on_grid(coeffs: &[Complex64], grid_size: usize) -> FieldGrid {
    let a: Vec<Complex64> = coeffs
        .iter()
        .enumerate()
        .map(|(j, &z)| z / ((j + 1) as f64).sqrt())
        .collect();
    let vals = fft::eval_negative_modes(&a, grid_size);
    FieldGrid {
        grid_size,
        values: vals.iter().map(|v| v.re).collect(),
        kind: FieldKind::Gaussian { m: coeffs.len() },
    }
}

/// Total mass of the normalized Gaussian chaos measure for one draw:
/// (1/G) Σ_g e^{βX(θ_g)} / E e^{βX}, with the exact Gaussian normalizer
/// E e^{βX} = e^{β²Σ^{(m)}(0)/2}. Unit expectation for every β in (0, 2).
pub fn gaussian_mass(field: &FieldGrid, beta: f64) -> Result<f64> {
    if !(0.0 < beta && beta < 2.0) {
        return Err(invalid(format!("beta = {beta} is outside the L² chaos phase (0, 2)")));
    }
    let m = match field.kind {
        FieldKind::Gaussian { m } => m,
        _ => return Err(invalid("gaussian_mass needs a Gaussian field grid")),
    };
    let normalizer = (beta * beta * covariance_sigma(m, 0.0) / 2.0).exp();
    let sum: f64 = field.values.iter().map(|&x| (beta * x).exp()).sum();
    Ok(sum / field.grid_size as f64 / normalizer)
}

/// A multi-scale barrier: at every dyadic scale 2^k for k in l..=top the field
/// must stay below gamma·Σ^{(2^k)}(0) + offsets[k-l].
#[derive(Debug, Clone)]
pub struct BarrierSpec {
    pub gamma: f64,
    pub l: usize,
    pub top: usize,
    /// One additive offset per scale, indexed k-l.
    pub offsets: Vec<f64>,
}

impl BarrierSpec {
    pub fn new(gamma: f64, l: usize, top: usize, offsets: Vec<f64>) -> Result<Self> {
        if top < l {
            return Err(invalid("barrier range is empty"));
        }
        if offsets.len() != top - l + 1 {
            return Err(invalid(format!(
                "need {} offsets for scales {l}..={top}, got {}",
                top - l + 1,
                offsets.len()
            )));
        }
        Ok(BarrierSpec { gamma, l, top, offsets })
    }

    /// Barrier height at scale 2^k.
    pub fn threshold(&self, k: usize) -> f64 {
        self.gamma * covariance_sigma(1usize << k, 0.0) + self.offsets[k - self.l]
    }
}

/// Offsets that pin a two-point barrier at separation δ:
/// Y_{2^k} = (γ-β)Σ^{(2^k)}(0) - βΣ^{(2^k)}(δ).
pub fn two_point_offsets(gamma: f64, beta: f64, l: usize, top: usize, delta: f64) -> Vec<f64> {
    (l..=top)
        .map(|k| {
            let m = 1usize << k;
            (gamma - beta) * covariance_sigma(m, 0.0) - beta * covariance_sigma(m, delta)
        })
        .collect()
}

/// True when the field stays below the barrier at every required scale.
/// `values` pairs each scale exponent k with the field value X_{·,2^k}(θ);
/// a missing scale is an error.
pub fn barrier_indicator(values: &[(usize, f64)], spec: &BarrierSpec) -> Result<bool> {
    for k in spec.l..=spec.top {
        let x = values
            .iter()
            .find(|&&(kk, _)| kk == k)
            .map(|&(_, x)| x)
            .ok_or_else(|| invalid(format!("missing field value at scale 2^{k}")))?;
        if x > spec.threshold(k) {
            return Ok(false);
        }
    }
    Ok(true)
}
