use cuelab::cue::{field_on_grid, CueSample, FieldMode};
use cuelab::par::mc_fold;
use cuelab::rng::Streams;
use cuelab::Complex64;
use std::f64::consts::FRAC_PI_2;

/// Roots of a monic polynomial (ascending coefficients, leading 1) by
/// simultaneous Weierstrass iteration.
fn polynomial_roots(coeffs: &[Complex64]) -> Vec<Complex64> {
    let n = coeffs.len() - 1;
    let eval = |z: Complex64| coeffs.iter().rev().fold(Complex64::new(0.0, 0.0), |a, &c| a * z + c);
    let seed = Complex64::new(0.4, 0.9);
    let mut roots: Vec<Complex64> = (0..n).map(|i| seed.powu(i as u32 + 1)).collect();
    for _ in 0..200 {
        let mut shift = 0.0f64;
        for i in 0..n {
            let mut denom = Complex64::new(1.0, 0.0);
            for j in 0..n {
                if j != i {
                    denom *= roots[i] - roots[j];
                }
            }
            let step = eval(roots[i]) / denom;
            roots[i] -= step;
            shift = shift.max(step.norm());
        }
        if shift < 1e-13 {
            break;
        }
    }
    roots
}

#[test]
fn trace_moments_match_the_kronecker_min_rule() {
    let n = 8;
    let draws = 20_000u64;
    let k_max = 4usize;
    let streams = Streams::new(101);
    let dim = k_max * k_max;
    let init = (vec![Complex64::new(0.0, 0.0); dim], vec![0.0f64; dim]);
    let (sums, sq_sums) = mc_fold(
        draws,
        init,
        |i, (mut sums, mut sqs)| {
            let mut rng = streams.stream(i);
            let mut sample = CueSample::generate(n, &mut rng).expect("positive size");
            sample.ensure_traces(k_max);
            for j in 1..=k_max {
                for k in 1..=k_max {
                    let prod = sample.traces[j - 1] * sample.traces[k - 1].conj();
                    let idx = (j - 1) * k_max + (k - 1);
                    sums[idx] += prod;
                    sqs[idx] += prod.norm_sqr();
                }
            }
            (sums, sqs)
        },
        |(mut a, mut a2), (b, b2)| {
            for i in 0..dim {
                a[i] += b[i];
                a2[i] += b2[i];
            }
            (a, a2)
        },
    );
    for j in 1..=k_max {
        for k in 1..=k_max {
            let idx = (j - 1) * k_max + (k - 1);
            let mean = sums[idx] / draws as f64;
            let target = if j == k { j.min(n) as f64 } else { 0.0 };
            let variance = (sq_sums[idx] / draws as f64 - mean.norm_sqr()).max(0.0);
            let se = (variance / draws as f64).sqrt();
            assert!(
                (mean.re - target).abs() <= 4.0 * se && mean.im.abs() <= 4.0 * se,
                "E Tr U^{j} conj(Tr U^{k}) = {mean} should be {target} (4se = {})",
                4.0 * se
            );
        }
    }
}

#[test]
fn two_point_covariance_emerges_at_large_size() {
    let n = 128;
    let draws = 100_000u64;
    let (theta, theta_prime) = (0.3, 0.3 + FRAC_PI_2);
    let streams = Streams::new(102);
    let stats = mc_fold(
        draws,
        [0.0f64; 5],
        |i, mut acc| {
            let mut rng = streams.stream(i);
            let sample = CueSample::generate(n, &mut rng).expect("positive size");
            let x = sample.x_full_at(theta);
            let y = sample.x_full_at(theta_prime);
            acc[0] += x;
            acc[1] += y;
            acc[2] += x * y;
            acc[3] += x * x;
            acc[4] += y * y;
            acc
        },
        |mut a, b| {
            for i in 0..5 {
                a[i] += b[i];
            }
            a
        },
    );
    let nf = draws as f64;
    let (mx, my) = (stats[0] / nf, stats[1] / nf);
    let cov = stats[2] / nf - mx * my;
    let (vx, vy) = (stats[3] / nf - mx * mx, stats[4] / nf - my * my);
    // Asymptotic variance of the sample covariance of a bivariate Gaussian.
    let se = ((vx * vy + cov * cov) / nf).sqrt();
    let gap = (Complex64::from_polar(1.0, theta) - Complex64::from_polar(1.0, theta_prime)).norm();
    let target = -0.5 * gap.ln();
    assert!(
        (cov - target).abs() <= 4.0 * se,
        "covariance {cov} should approach {target} (4se = {})",
        4.0 * se
    );
}

#[test]
fn truncated_fields_close_in_on_the_full_field() {
    let n = 64usize;
    let grid = 256;
    let draws = 20;
    let streams = Streams::new(103);
    let mut mean_err = [0.0f64; 3];
    for d in 0..draws {
        let mut rng = streams.stream(d);
        let mut sample = CueSample::generate(n, &mut rng).expect("positive size");
        sample.ensure_traces(n);
        let full = field_on_grid(&sample, grid, FieldMode::Full).expect("grid fits");
        for (slot, m) in [n / 4, n / 2, n].into_iter().enumerate() {
            let truncated = field_on_grid(&sample, grid, FieldMode::Truncated(m)).expect("grid fits");
            let err: f64 = full
                .values
                .iter()
                .zip(&truncated.values)
                .map(|(a, b)| (a - b).abs())
                .sum::<f64>()
                / grid as f64;
            mean_err[slot] += err / draws as f64;
        }
    }
    assert!(
        mean_err[0] > mean_err[1] && mean_err[1] > mean_err[2],
        "grid distance to the full field should shrink as the truncation deepens: {mean_err:?}"
    );
}

#[test]
fn secular_roots_are_unimodular_and_reproduce_the_field() {
    let n = 16;
    let streams = Streams::new(104);
    for s in 0..3 {
        let mut rng = streams.stream(s);
        let sample = CueSample::generate(n, &mut rng).expect("positive size");
        let roots = polynomial_roots(&sample.secular);
        for r in &roots {
            assert!(
                (r.norm() - 1.0).abs() < 1e-8,
                "eigenvalue {r} strayed from the unit circle"
            );
        }
        for g in 0..24 {
            let theta = g as f64 * 0.26;
            let z = Complex64::from_polar(1.0, theta);
            let from_roots: f64 = roots.iter().map(|r| (z - r).norm().ln()).sum();
            assert!(
                (from_roots - sample.x_full_at(theta)).abs() < 1e-8,
                "root product and Horner evaluation disagree at θ = {theta}"
            );
        }
    }
}
