//! Normalized random measures built from the log-characteristic-polynomial
//! fields: total masses, the barrier decomposition of the mass into a main
//! term and two error terms, and self-normalized biased-measure estimators.

use crate::cue::{field_on_grid, CueSample, FieldGrid, FieldKind, FieldMode};
use crate::gaussian::{covariance_sigma, BarrierSpec};
use crate::symbol::{fourier_coefficients, singular_coeff, Symbol};
use crate::toeplitz::opuc_from_coeffs;
use crate::{invalid, Complex64, Error, Result};
use statrs::function::gamma::ln_gamma;
use std::f64::consts::TAU;

/// An exponential-moment denominator E e^{βX} tied to the field it
/// normalizes, so masses cannot be formed with a mismatched denominator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Normalizer {
    pub kind: FieldKind,
    pub beta: f64,
    pub value: f64,
}

/// One total-mass observation, optionally split into main and error terms.
#[derive(Debug, Clone)]
pub struct MassSample {
    pub seed: u64,
    pub stream: u64,
    pub n: usize,
    /// Truncation degree; 0 for the full field.
    pub m: usize,
    pub beta: f64,
    pub grid_size: usize,
    pub mass: f64,
    pub decomposition: Option<Decomposition>,
}

/// Main term and error terms of one decomposed mass: mass = g + e1 + e2.
#[derive(Debug, Clone, Copy)]
pub struct Decomposition {
    pub g: f64,
    pub e1: f64,
    pub e2: f64,
}

/// Nonnegative test function φ integrated against the measures.
#[derive(Debug, Clone)]
pub enum TestFn {
    One,
    OnePlusCos,
    Grid(Vec<f64>),
}

impl TestFn {
    /// Values of φ at θ_g = 2πg/G.
    pub fn values(&self, grid_size: usize) -> Result<Vec<f64>> {
        match self {
            TestFn::One => Ok(vec![1.0; grid_size]),
            TestFn::OnePlusCos => Ok((0..grid_size)
                .map(|g| 1.0 + (TAU * g as f64 / grid_size as f64).cos())
                .collect()),
            TestFn::Grid(values) => {
                if values.len() != grid_size {
                    return Err(invalid(format!(
                        "test function has {} values but the grid has {grid_size}",
                        values.len()
                    )));
                }
                if values.iter().any(|&v| !v.is_finite() || v < 0.0) {
                    return Err(invalid("test function must be finite and nonnegative"));
                }
                Ok(values.clone())
            }
        }
    }
}

/// E e^{βX_N(θ)} = D_{n-1}(|z-1|^β), computed by the orthogonal-polynomial
/// recursion on the exact Fourier coefficients and cross-checked against the
/// product Π_{j≤n} Γ(j)Γ(j+β)/Γ(j+β/2)². Rotation invariance makes the
/// probe angle irrelevant.
pub fn normalizer_exact(n: usize, beta: f64) -> Result<Normalizer> {
    if n == 0 {
        return Err(invalid("need at least one eigenvalue"));
    }
    if beta < 0.0 {
        return Err(invalid("the field weight exponent must be nonnegative"));
    }
    let kind = FieldKind::Full { n };
    if beta == 0.0 {
        return Ok(Normalizer { kind, beta, value: 1.0 });
    }
    let window: Vec<Complex64> = (-(n as i64)..=n as i64)
        .map(|j| Complex64::new(singular_coeff(beta, j), 0.0))
        .collect();
    let log_det = opuc_from_coeffs(&window, n)?.log_det();
    let log_product: f64 = (1..=n)
        .map(|j| {
            let jf = j as f64;
            ln_gamma(jf) + ln_gamma(jf + beta) - 2.0 * ln_gamma(jf + beta / 2.0)
        })
        .sum();
    if (log_det - log_product).abs() > 1e-8 * log_product.abs().max(1.0) {
        return Err(Error::PrecisionFailure(format!(
            "log-determinant {log_det} disagrees with the product formula {log_product}"
        )));
    }
    Ok(Normalizer { kind, beta, value: log_det.exp() })
}

/// E e^{βX_{N,m}(θ)} = D_{n-1}(e^V) with V the degree-m truncation of
/// β·log|z-1|, i.e. V_j = -β/(2j) for 1 ≤ j ≤ m. An exact determinant, not
/// a Gaussian surrogate.
pub fn truncated_normalizer(n: usize, m: usize, beta: f64) -> Result<Normalizer> {
    if n == 0 {
        return Err(invalid("need at least one eigenvalue"));
    }
    if m == 0 {
        return Err(invalid("truncation degree must be positive"));
    }
    if beta < 0.0 {
        return Err(invalid("the field weight exponent must be nonnegative"));
    }
    let kind = FieldKind::Truncated { n, m };
    if beta == 0.0 {
        return Ok(Normalizer { kind, beta, value: 1.0 });
    }
    let v: Vec<Complex64> =
        (1..=m).map(|j| Complex64::new(-beta / (2.0 * j as f64), 0.0)).collect();
    let sym = Symbol::smooth(0.0, v);
    let window = fourier_coefficients(&sym, n)?;
    let log_det = opuc_from_coeffs(&window, n)?.log_det();
    Ok(Normalizer { kind, beta, value: log_det.exp() })
}

/// E e^{βX^{(m)}(θ)} = e^{β²Σ^{(m)}(0)/2} for the Gaussian comparison field.
pub fn gaussian_normalizer(m: usize, beta: f64) -> Result<Normalizer> {
    if m == 0 {
        return Err(invalid("truncation degree must be positive"));
    }
    if beta < 0.0 {
        return Err(invalid("the field weight exponent must be nonnegative"));
    }
    Ok(Normalizer {
        kind: FieldKind::Gaussian { m },
        beta,
        value: (beta * beta * covariance_sigma(m, 0.0) / 2.0).exp(),
    })
}

/// Grid integral (1/G)Σ_g φ(θ_g)·e^{βX(θ_g)}/normalizer of the normalized
/// measure built from `field`. Field values of -∞ contribute zero weight.
pub fn mass_from_field(
    field: &FieldGrid,
    beta: f64,
    normalizer: &Normalizer,
    phi: &TestFn,
) -> Result<MassSample> {
    if normalizer.kind != field.kind {
        return Err(invalid(format!(
            "normalizer for {:?} cannot weight a {:?} field",
            normalizer.kind, field.kind
        )));
    }
    if normalizer.beta != beta {
        return Err(invalid(format!(
            "normalizer was built for β = {} but the mass uses β = {beta}",
            normalizer.beta
        )));
    }
    let phi_values = phi.values(field.grid_size)?;
    let mut mass = 0.0;
    for (x, p) in field.values.iter().zip(&phi_values) {
        if *x > f64::NEG_INFINITY {
            mass += p * (beta * x).exp();
        }
    }
    mass /= field.grid_size as f64 * normalizer.value;
    let (n, m) = match field.kind {
        FieldKind::Full { n } => (n, 0),
        FieldKind::Truncated { n, m } => (n, m),
        FieldKind::Gaussian { m } => (0, m),
    };
    Ok(MassSample {
        seed: 0,
        stream: 0,
        n,
        m,
        beta,
        grid_size: field.grid_size,
        mass,
        decomposition: None,
    })
}

/// Largest k with 2^k ≤ n^{1-delta}: the deepest scale the barrier events
/// may probe.
pub fn top_scale(n: usize, delta: f64) -> Result<usize> {
    if n == 0 {
        return Err(invalid("need at least one eigenvalue"));
    }
    if !(0.0 < delta && delta < 1.0) {
        return Err(invalid("the scale-cutoff exponent must lie in (0, 1)"));
    }
    let k = ((1.0 - delta) * (n as f64).log2()).floor();
    if k < 1.0 {
        return Err(invalid(format!(
            "matrix size {n} leaves no dyadic scales below n^(1-{delta})"
        )));
    }
    Ok(k as usize)
}

/// Splits the mass ∫φ dμ_{N,β} of one draw into (G, E⁽¹⁾, E⁽²⁾):
/// E⁽¹⁾ collects the mass where some dyadic-scale truncated field exceeds its
/// barrier, the comparison term G integrates φ against the degree-m measure
/// on the event that scales up to ⌊log₂ m⌋ stay below, and E⁽²⁾ is the
/// remainder making mass = G + E⁽¹⁾ + E⁽²⁾ exact.
///
/// The barrier must span scales l..=⌊log₂ n^{1-delta}⌋ and satisfy
/// 2^l ≤ m with ⌊log₂ m⌋ inside the barrier range.
pub fn decompose_mass(
    sample: &mut CueSample,
    beta: f64,
    spec: &BarrierSpec,
    delta: f64,
    m: usize,
    phi: &TestFn,
    grid_size: usize,
) -> Result<MassSample> {
    let n = sample.n;
    let k_n = top_scale(n, delta)?;
    if spec.top != k_n {
        return Err(invalid(format!(
            "barrier spans scales {}..={} but size {n} at cutoff {delta} needs top scale {k_n}",
            spec.l, spec.top
        )));
    }
    if (1usize << spec.l) > m {
        return Err(invalid(format!(
            "coarsest barrier scale 2^{} exceeds the comparison degree {m}",
            spec.l
        )));
    }
    let g_top = floor_log2(m);
    if g_top > spec.top {
        return Err(invalid(format!(
            "comparison degree {m} probes scale {g_top} beyond the barrier top {}",
            spec.top
        )));
    }

    sample.ensure_traces((1usize << spec.top).max(m));
    let full = field_on_grid(sample, grid_size, FieldMode::Full)?;
    let comparison = field_on_grid(sample, grid_size, FieldMode::Truncated(m))?;
    let scales: Vec<Vec<f64>> = (spec.l..=spec.top)
        .map(|k| Ok(field_on_grid(sample, grid_size, FieldMode::Truncated(1usize << k))?.values))
        .collect::<Result<_>>()?;
    let thresholds: Vec<f64> = (spec.l..=spec.top).map(|k| spec.threshold(k)).collect();

    let norm_full = normalizer_exact(n, beta)?.value;
    let norm_comparison = truncated_normalizer(n, m, beta)?.value;
    let phi_values = phi.values(grid_size)?;

    let mut mass = 0.0;
    let mut below_mass = 0.0;
    let mut e1 = 0.0;
    let mut g_term = 0.0;
    for g in 0..grid_size {
        let below_all = (0..scales.len()).all(|i| scales[i][g] <= thresholds[i]);
        let below_coarse = (0..=g_top - spec.l).all(|i| scales[i][g] <= thresholds[i]);
        let x = full.values[g];
        let w = if x > f64::NEG_INFINITY { phi_values[g] * (beta * x).exp() / norm_full } else { 0.0 };
        mass += w;
        if below_all {
            below_mass += w;
        } else {
            e1 += w;
        }
        if below_coarse {
            g_term += phi_values[g] * (beta * comparison.values[g]).exp() / norm_comparison;
        }
    }
    let scale = grid_size as f64;
    mass /= scale;
    below_mass /= scale;
    e1 /= scale;
    g_term /= scale;

    Ok(MassSample {
        seed: 0,
        stream: 0,
        n,
        m,
        beta,
        grid_size,
        mass,
        decomposition: Some(Decomposition { g: g_term, e1, e2: below_mass - g_term }),
    })
}

/// One draw's contribution to a self-normalized two-point estimator: the
/// full-field values at the two probe angles and whether the event under
/// study occurred.
#[derive(Debug, Clone, Copy)]
pub struct BiasedDraw {
    pub x_theta: f64,
    pub x_theta_prime: f64,
    pub event: bool,
}

/// Self-normalized estimate with its jackknife standard error.
#[derive(Debug, Clone, Copy)]
pub struct WeightedEstimate {
    pub value: f64,
    pub std_error: f64,
    /// (Σw)²/Σw²: the number of unit-weight draws carrying equal information.
    pub ess: f64,
    pub reliable: bool,
    pub draws: usize,
}

/// Probability of the per-draw event under the measure reweighted by
/// e^{β(X_N(θ)+X_N(θ'))}: Σ w_i 1_i / Σ w_i with w_i the exponential weight.
/// Estimates with effective sample size below 30 are flagged unreliable.
pub fn biased_probability_mc(draws: &[BiasedDraw], beta: f64) -> Result<WeightedEstimate> {
    if draws.len() < 2 {
        return Err(invalid("need at least two draws to estimate a standard error"));
    }
    let weights: Vec<f64> = draws
        .iter()
        .map(|d| {
            if d.x_theta > f64::NEG_INFINITY && d.x_theta_prime > f64::NEG_INFINITY {
                (beta * (d.x_theta + d.x_theta_prime)).exp()
            } else {
                0.0
            }
        })
        .collect();
    let sum_w: f64 = weights.iter().sum();
    let sum_w2: f64 = weights.iter().map(|w| w * w).sum();
    if sum_w <= 0.0 {
        return Err(invalid("all draws carry zero weight"));
    }
    let sum_wb: f64 =
        weights.iter().zip(draws).map(|(w, d)| if d.event { *w } else { 0.0 }).sum();
    let value = sum_wb / sum_w;

    let n = draws.len() as f64;
    let leave_outs: Vec<f64> = weights
        .iter()
        .zip(draws)
        .map(|(w, d)| {
            let rest_w = sum_w - w;
            if rest_w <= 0.0 {
                return value;
            }
            (sum_wb - if d.event { *w } else { 0.0 }) / rest_w
        })
        .collect();
    let mean_loo = leave_outs.iter().sum::<f64>() / n;
    let var = leave_outs.iter().map(|r| (r - mean_loo).powi(2)).sum::<f64>() * (n - 1.0) / n;
    let ess = sum_w * sum_w / sum_w2;

    Ok(WeightedEstimate {
        value,
        std_error: var.sqrt(),
        ess,
        reliable: ess >= 30.0,
        draws: draws.len(),
    })
}

fn floor_log2(x: usize) -> usize {
    (usize::BITS - 1 - x.leading_zeros()) as usize
}
