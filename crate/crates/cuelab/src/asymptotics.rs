//! Closed-form large-N predictions for exponential moments of the
//! log-characteristic-polynomial fields, and the Fyodorov–Bouchaud law of the
//! limiting total mass.
//!
//! All predictions are finite explicit sums, so they can be frozen and
//! compared against brute-force Toeplitz determinants and Monte Carlo
//! estimates at equality-level tolerances.

use crate::symbol::SymbolParams;
use crate::{invalid, Result};
use num_complex::Complex64;
use rand::Rng;
use rand_distr::Exp1;
use statrs::function::gamma::gamma;
use std::f64::consts::TAU;

/// H(k) = Σ_{j=1}^k 1/j.
pub fn harmonic(k: usize) -> f64 {
    (1..=k).map(|j| 1.0 / j as f64).sum()
}

/// C(k, δ) = Σ_{j=1}^k cos(jδ)/j.
pub fn cosine_sum(k: usize, delta: f64) -> f64 {
    (1..=k).map(|j| (j as f64 * delta).cos() / j as f64).sum()
}

/// Arc distance d(θ, θ') = min(|θ-θ'|, 2π-|θ-θ'|).
pub fn arc_distance(theta: f64, theta_prime: f64) -> f64 {
    let x = (theta - theta_prime).rem_euclid(TAU);
    x.min(TAU - x)
}

/// The predicted ratio
/// E exp(β₁X_N(θ) + β₂X_N(θ') + α₁X_{N,K₁}(θ) + α₂X_{N,K₂}(θ) + Tr𝒯(U)) /
/// E exp(β₁X_N(θ) + β₂X_N(θ')) in the N → ∞ limit:
/// exp[ (α₁²+2α₁α₂+2α₁β₁)/4·H(K₁) + (α₂²+2α₂β₁)/4·H(K₂)
///    + (α₁β₂/2)·C(K₁,Δ) + (α₂β₂/2)·C(K₂,Δ)
///    + Σ_k k𝒯_k𝒯_{-k} - (α₁/2)Σ_{k≤min(K₁,m)}2Re(𝒯_k e^{ikθ})
///    - (α₂/2)Σ_{k≤min(K₂,m)}2Re(𝒯_k e^{ikθ}) - (β₁/2)𝒯(e^{iθ}) - (β₂/2)𝒯(e^{iθ'}) ]
/// with Δ = θ-θ'. Requires K₁ ≤ K₂ and nonnegative β's.
pub fn predict_testimate(p: &SymbolParams) -> Result<f64> {
    if p.k1 > p.k2 {
        return Err(invalid(format!(
            "the first truncation K₁ = {} must not exceed K₂ = {}",
            p.k1, p.k2
        )));
    }
    if p.beta1 < 0.0 || p.beta2 < 0.0 {
        return Err(invalid("singular exponents must be nonnegative"));
    }
    let delta = p.theta - p.theta_prime;
    let mut expo = (p.alpha1 * p.alpha1 + 2.0 * p.alpha1 * p.alpha2 + 2.0 * p.alpha1 * p.beta1)
        / 4.0
        * harmonic(p.k1)
        + (p.alpha2 * p.alpha2 + 2.0 * p.alpha2 * p.beta1) / 4.0 * harmonic(p.k2)
        + p.alpha1 * p.beta2 / 2.0 * cosine_sum(p.k1, delta)
        + p.alpha2 * p.beta2 / 2.0 * cosine_sum(p.k2, delta);

    let t_at = |angle: f64| -> f64 {
        p.t_coeffs
            .iter()
            .enumerate()
            .map(|(i, &t)| 2.0 * (t * Complex64::from_polar(1.0, (i + 1) as f64 * angle)).re)
            .sum()
    };
    for (i, &t) in p.t_coeffs.iter().enumerate() {
        expo += (i + 1) as f64 * t.norm_sqr();
    }
    let probe = |kmax: usize| -> f64 {
        p.t_coeffs
            .iter()
            .enumerate()
            .take(kmax)
            .map(|(i, &t)| 2.0 * (t * Complex64::from_polar(1.0, (i + 1) as f64 * p.theta)).re)
            .sum()
    };
    expo -= p.alpha1 / 2.0 * probe(p.k1);
    expo -= p.alpha2 / 2.0 * probe(p.k2);
    expo -= p.beta1 / 2.0 * t_at(p.theta);
    expo -= p.beta2 / 2.0 * t_at(p.theta_prime);
    Ok(expo.exp())
}

/// The three ready-made specializations of the moment prediction.
#[derive(Debug, Clone, Copy)]
pub enum Corollary {
    /// E e^{αX_{N,K}(θ) + βX_N(θ)} / E e^{βX_N(θ)} → exp((α²/2 + αβ)·H(K)/2).
    OnePoint { alpha: f64, beta: f64, k: usize },
    /// Both biasing points present, the second one truncated at degree m.
    TwoPointMixed {
        alpha1: f64,
        alpha2: f64,
        beta: f64,
        k1: usize,
        k2: usize,
        m: usize,
        delta: f64,
    },
    /// Both biasing points at full depth.
    TwoPointFull { alpha1: f64, alpha2: f64, beta: f64, k1: usize, k2: usize, delta: f64 },
}

pub fn predict_corollary(c: &Corollary) -> Result<f64> {
    match *c {
        Corollary::OnePoint { alpha, beta, k } => {
            Ok(((alpha * alpha / 2.0 + alpha * beta) * harmonic(k) / 2.0).exp())
        }
        Corollary::TwoPointMixed { alpha1, alpha2, beta, k1, k2, m, delta } => {
            if k1 > k2 {
                return Err(invalid("the first truncation must not exceed the second"));
            }
            let expo = (alpha1 * alpha1 / 4.0 + alpha1 * beta / 2.0 + alpha1 * alpha2 / 2.0)
                * harmonic(k1)
                + (alpha2 * alpha2 / 4.0 + alpha2 * beta / 2.0) * harmonic(k2)
                + alpha1 * beta / 2.0 * cosine_sum(k1.min(m), delta)
                + alpha2 * beta / 2.0 * cosine_sum(k2.min(m), delta);
            Ok(expo.exp())
        }
        Corollary::TwoPointFull { alpha1, alpha2, beta, k1, k2, delta } => {
            if k1 > k2 {
                return Err(invalid("the first truncation must not exceed the second"));
            }
            let mut expo = 0.0;
            for j in 1..=k1 {
                let jf = j as f64;
                expo += (alpha1 * alpha1 / 4.0
                    + alpha1 * beta / 2.0 * ((jf * delta).cos() + 1.0)
                    + alpha1 * alpha2 / 2.0)
                    / jf;
            }
            for j in 1..=k2 {
                let jf = j as f64;
                expo += (alpha2 * alpha2 / 4.0 + alpha2 * beta / 2.0 * ((jf * delta).cos() + 1.0))
                    / jf;
            }
            Ok(expo.exp())
        }
    }
}

/// Limiting biased Laplace transform of the rescaled traces: for real weight
/// sequences (s_j), (t_j) of length L and distinct probe angles,
/// E e^{Σ_j [s_j/√j (TrU^j + TrU^{-j}) + i t_j/√j (TrU^j - TrU^{-j})]} under
/// the β-biased measure tends to
/// exp(-β Σ_j Re[(s_j+it_j)(e^{ijθ}+e^{ijθ'})]/√j) · exp(Σ_j (s_j²+t_j²)).
pub fn widom_limit(
    s: &[f64],
    t: &[f64],
    beta: f64,
    theta: f64,
    theta_prime: f64,
) -> Result<f64> {
    if s.len() != t.len() {
        return Err(invalid("weight sequences must have equal length"));
    }
    if arc_distance(theta, theta_prime) == 0.0 {
        return Err(invalid("probe angles must be distinct"));
    }
    let mut expo = 0.0;
    for (idx, (&sj, &tj)) in s.iter().zip(t).enumerate() {
        let j = (idx + 1) as f64;
        let w = Complex64::new(sj, tj);
        let phases = Complex64::from_polar(1.0, j * theta) + Complex64::from_polar(1.0, j * theta_prime);
        expo -= beta * (w * phases).re / j.sqrt();
        expo += sj * sj + tj * tj;
    }
    Ok(expo.exp())
}

/// Limiting two-point to one-point moment ratio
/// E e^{β₁X(θ)+β₂X(θ')} / (E e^{β₁X(θ)} E e^{β₂X(θ')}).
/// `truncation: None` is the full-field limit |e^{iθ}-e^{iθ'}|^{-β₁β₂/2},
/// valid only for distinct angles; `Some(m)` is the degree-m truncated-field
/// limit exp((β₁β₂/2)·C(m, θ-θ')), valid everywhere.
pub fn dik_limit(
    beta1: f64,
    beta2: f64,
    theta: f64,
    theta_prime: f64,
    truncation: Option<usize>,
) -> Result<f64> {
    match truncation {
        Some(m) => Ok((beta1 * beta2 / 2.0 * cosine_sum(m, theta - theta_prime)).exp()),
        None => {
            let d = arc_distance(theta, theta_prime);
            if d == 0.0 {
                return Err(invalid("full-field limit diverges at coinciding angles"));
            }
            let gap = (Complex64::from_polar(1.0, theta) - Complex64::from_polar(1.0, theta_prime))
                .norm();
            Ok(gap.powf(-beta1 * beta2 / 2.0))
        }
    }
}

/// The cosine log-sum and its distance to the profile it tracks:
/// returns (C(m, δ), C(m, δ) - min(log⁺ 1/d, log m)) where d is the arc
/// distance of δ from 0. The remainder stays bounded uniformly in m and δ.
pub fn logsum(m: usize, delta: f64) -> (f64, f64) {
    let sum = cosine_sum(m, delta);
    let d = arc_distance(delta, 0.0);
    let log_m = (m as f64).ln();
    let reference = if d == 0.0 { log_m } else { (1.0 / d).ln().max(0.0).min(log_m) };
    (sum, sum - reference)
}

/// CDF of the limiting normalized total mass: with a = β²/4,
/// the mass is distributed as Y^{-a}/Γ(1-a) for Y standard exponential, so
/// P(W ≤ w) = exp(-(Γ(1-a)·w)^{-1/a}). Defined for β in (0, 2).
pub fn fb_cdf(beta: f64, w: f64) -> Result<f64> {
    let a = fb_exponent(beta)?;
    if w <= 0.0 {
        return Ok(0.0);
    }
    Ok((-(gamma(1.0 - a) * w).powf(-1.0 / a)).exp())
}

/// One draw from the limiting mass law.
pub fn fb_sample<R: Rng>(beta: f64, rng: &mut R) -> Result<f64> {
    let a = fb_exponent(beta)?;
    let y: f64 = rng.sample(Exp1);
    Ok(y.powf(-a) / gamma(1.0 - a))
}

fn fb_exponent(beta: f64) -> Result<f64> {
    if !(0.0 < beta && beta < 2.0) {
        return Err(invalid(format!(
            "mass law is defined for β in (0, 2); got {beta}"
        )));
    }
    Ok(beta * beta / 4.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::Streams;
    use approx::assert_relative_eq;

    #[test]
    fn harmonic_and_cosine_sums() {
        assert_eq!(harmonic(0), 0.0);
        assert_relative_eq!(harmonic(4), 1.0 + 0.5 + 1.0 / 3.0 + 0.25, epsilon = 1e-15);
        assert_relative_eq!(cosine_sum(3, 0.0), harmonic(3), epsilon = 1e-15);
        let delta = 0.9f64;
        let direct = delta.cos() + (2.0 * delta).cos() / 2.0;
        assert_relative_eq!(cosine_sum(2, delta), direct, epsilon = 1e-15);
    }

    #[test]
    fn one_point_specializes_the_full_prediction() {
        let (alpha, beta, k) = (1.0, 1.0, 2usize);
        let general = predict_testimate(&SymbolParams {
            theta: 0.0,
            theta_prime: 3.0,
            alpha1: alpha,
            alpha2: 0.0,
            k1: k,
            k2: k,
            t_coeffs: vec![],
            beta1: beta,
            beta2: 0.0,
        })
        .unwrap();
        let special = predict_corollary(&Corollary::OnePoint { alpha, beta, k }).unwrap();
        assert_relative_eq!(general, special, epsilon = 1e-12);
        // α = β = 1, K = 2: exponent (1/2 + 1)·(1 + 1/2)/2 = 9/8.
        assert_relative_eq!(special, (9.0f64 / 8.0).exp(), epsilon = 1e-12);
    }

    #[test]
    fn two_point_full_specializes_the_full_prediction() {
        let (theta, theta_prime) = (0.7, 2.9);
        let (alpha1, alpha2, beta) = (0.8, -0.5, 1.2);
        let (k1, k2) = (3usize, 5usize);
        let general = predict_testimate(&SymbolParams {
            theta,
            theta_prime,
            alpha1,
            alpha2,
            k1,
            k2,
            t_coeffs: vec![],
            beta1: beta,
            beta2: beta,
        })
        .unwrap();
        let special = predict_corollary(&Corollary::TwoPointFull {
            alpha1,
            alpha2,
            beta,
            k1,
            k2,
            delta: theta - theta_prime,
        })
        .unwrap();
        assert_relative_eq!(general, special, epsilon = 1e-12, max_relative = 1e-12);
    }

    #[test]
    fn mixed_two_point_matches_full_once_truncation_covers_both_cutoffs() {
        let (alpha1, alpha2, beta) = (0.6, 0.4, 1.0);
        let (k1, k2) = (2usize, 4usize);
        let delta = 1.3;
        let full = predict_corollary(&Corollary::TwoPointFull {
            alpha1,
            alpha2,
            beta,
            k1,
            k2,
            delta,
        })
        .unwrap();
        for m in [4usize, 6, 100] {
            let mixed = predict_corollary(&Corollary::TwoPointMixed {
                alpha1,
                alpha2,
                beta,
                k1,
                k2,
                m,
                delta,
            })
            .unwrap();
            assert_relative_eq!(mixed, full, epsilon = 1e-12, max_relative = 1e-12);
        }
        // A short truncation clips both cosine sums.
        let m = 1;
        let mixed = predict_corollary(&Corollary::TwoPointMixed {
            alpha1,
            alpha2,
            beta,
            k1,
            k2,
            m,
            delta,
        })
        .unwrap();
        let expo = (alpha1 * alpha1 / 4.0 + alpha1 * beta / 2.0 + alpha1 * alpha2 / 2.0)
            * harmonic(k1)
            + (alpha2 * alpha2 / 4.0 + alpha2 * beta / 2.0) * harmonic(k2)
            + (alpha1 + alpha2) * beta / 2.0 * delta.cos();
        assert_relative_eq!(mixed, expo.exp(), epsilon = 1e-12, max_relative = 1e-12);
    }

    #[test]
    fn smooth_statistic_shifts_the_prediction() {
        // A single mode 𝒯₁: variance k|𝒯₁|² and explicit probe shifts.
        let t1 = Complex64::new(0.2, -0.1);
        let p = SymbolParams {
            theta: 1.1,
            theta_prime: 4.4,
            alpha1: 0.5,
            alpha2: 0.0,
            k1: 2,
            k2: 3,
            t_coeffs: vec![t1],
            beta1: 0.7,
            beta2: 0.9,
        };
        let with_t = predict_testimate(&p).unwrap();
        let without_t = predict_testimate(&SymbolParams { t_coeffs: vec![], ..p.clone() }).unwrap();
        let t_at = |angle: f64| 2.0 * (t1 * Complex64::from_polar(1.0, angle)).re;
        let expected_shift = t1.norm_sqr() - 0.25 * t_at(p.theta)
            - 0.35 * t_at(p.theta)
            - 0.45 * t_at(p.theta_prime);
        assert_relative_eq!(
            (with_t / without_t).ln(),
            expected_shift,
            epsilon = 1e-12,
            max_relative = 1e-12
        );
    }

    #[test]
    fn truncation_order_is_enforced() {
        let p = SymbolParams {
            theta: 0.0,
            theta_prime: 1.0,
            alpha1: 1.0,
            alpha2: 1.0,
            k1: 5,
            k2: 3,
            t_coeffs: vec![],
            beta1: 0.0,
            beta2: 0.0,
        };
        assert!(predict_testimate(&p).is_err());
    }

    #[test]
    fn widom_limit_reduces_to_pure_gaussian_at_zero_bias() {
        let s = [0.3, -0.2];
        let t = [0.1, 0.4];
        let v = widom_limit(&s, &t, 0.0, 0.5, 2.5).unwrap();
        let want: f64 = s.iter().zip(&t).map(|(a, b)| a * a + b * b).sum();
        assert_relative_eq!(v, want.exp(), epsilon = 1e-12);
        assert!(widom_limit(&s, &t, 1.0, 0.5, 0.5).is_err());
        assert!(widom_limit(&s, &t[..1], 1.0, 0.5, 2.5).is_err());
    }

    #[test]
    fn dik_limits_are_consistent_for_well_separated_angles() {
        let (beta1, beta2) = (1.0, 0.8);
        let (theta, theta_prime) = (0.4, 2.4);
        let full = dik_limit(beta1, beta2, theta, theta_prime, None).unwrap();
        let gap = 2.0 * ((theta - theta_prime) / 2.0).sin().abs();
        assert_relative_eq!(full, gap.powf(-beta1 * beta2 / 2.0), epsilon = 1e-13);
        // A deep truncation approximates the full limit away from the diagonal.
        let truncated = dik_limit(beta1, beta2, theta, theta_prime, Some(1 << 16)).unwrap();
        assert!(
            (truncated / full - 1.0).abs() < 0.02,
            "deep truncation {truncated} vs full {full}"
        );
        assert!(dik_limit(beta1, beta2, 1.0, 1.0, None).is_err());
    }

    #[test]
    fn logsum_tracks_the_distance_profile() {
        // At δ = 0 the sum is harmonic, and the remainder tends to the
        // Euler–Mascheroni constant.
        let (_, rem) = logsum(10_000, 0.0);
        assert!((rem - 0.577_215_664_901_532_9).abs() < 1e-3);
        for &(m, delta) in &[(16usize, 0.5f64), (1024, 0.01), (4096, 3.0), (2, 1.0)] {
            let (sum, rem) = logsum(m, delta);
            assert_relative_eq!(sum, cosine_sum(m, delta), epsilon = 1e-14);
            assert!(rem.abs() <= 3.0, "remainder {rem} out of band at m = {m}, δ = {delta}");
        }
    }

    #[test]
    fn mass_law_cdf_is_a_distribution_with_unit_mean() {
        let beta = 1.0;
        assert_eq!(fb_cdf(beta, -1.0).unwrap(), 0.0);
        let mut last = 0.0;
        for i in 1..=60 {
            let w = i as f64 * 0.25;
            let c = fb_cdf(beta, w).unwrap();
            assert!((0.0..=1.0).contains(&c));
            assert!(c >= last, "CDF must be nondecreasing");
            last = c;
        }
        assert!(fb_cdf(beta, 1e9).unwrap() > 0.999);
        assert!(fb_cdf(2.0, 1.0).is_err());
        assert!(fb_cdf(0.0, 1.0).is_err());

        let streams = Streams::new(5);
        let mut rng = streams.stream(0);
        let draws = 50_000;
        let mean: f64 =
            (0..draws).map(|_| fb_sample(beta, &mut rng).unwrap()).sum::<f64>() / draws as f64;
        assert!((mean - 1.0).abs() < 0.02, "sample mean {mean} should be 1");
    }

    #[test]
    fn sample_quantiles_match_the_cdf() {
        let beta = 1.2;
        let streams = Streams::new(6);
        let mut rng = streams.stream(0);
        let mut xs: Vec<f64> =
            (0..20_000).map(|_| fb_sample(beta, &mut rng).unwrap()).collect();
        xs.sort_by(f64::total_cmp);
        for q in [0.1, 0.5, 0.9] {
            let x = xs[(20_000.0 * q) as usize];
            let c = fb_cdf(beta, x).unwrap();
            assert!((c - q).abs() < 0.02, "quantile {q} maps to CDF {c}");
        }
    }
}
