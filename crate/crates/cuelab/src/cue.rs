//! CUE spectra without dense eigensolvers.
//!
//! A Haar-unitary spectrum is generated through its Verblunsky coefficients:
//! independent rotationally-invariant coefficients whose squared moduli are
//! Beta(1, n-k-1) distributed, the last one uniform on the circle. The Szegő
//! recursion turns them into the monic secular polynomial Φ_n(z) = det(zI - U)
//! in O(n²), Newton's identities recover the power sums Tr U^k, and one FFT
//! evaluates the log-characteristic-polynomial field on a grid.

use crate::rng::{standard_complex_gaussian, uniform_phase};
use crate::{fft, invalid, Result};
use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;

/// Growth factor beyond which Newton's identities are flagged as unstable.
pub const TRACE_INSTABILITY_FACTOR: f64 = 1e12;

/// One CUE draw: Verblunsky coefficients plus the derived secular polynomial
/// and as many traces as have been materialized.
#[derive(Debug, Clone)]
pub struct CueSample {
    pub n: usize,
    /// n coefficients; the first n-1 lie strictly inside the unit disk and the
    /// last has unit modulus.
    pub alphas: Vec<Complex64>,
    /// Monic coefficients of Φ_n in ascending degree order (length n+1).
    pub secular: Vec<Complex64>,
    /// traces[k-1] = Tr U^k for k = 1..=len; Tr U^{-k} is its conjugate.
    pub traces: Vec<Complex64>,
    /// Set when extending the traces tripped the instability sentinel.
    pub trace_instability: bool,
}

impl CueSample {
    /// Draws a sample and materializes the secular polynomial.
    pub fn generate<R: Rng>(n: usize, rng: &mut R) -> Result<Self> {
        let alphas = sample_verblunsky(n, rng)?;
        let secular = secular_coefficients(&alphas);
        Ok(CueSample { n, alphas, secular, traces: Vec::new(), trace_instability: false })
    }

    /// Extends the materialized traces to cover k = 1..=k_max.
    pub fn ensure_traces(&mut self, k_max: usize) {
        if self.traces.len() >= k_max {
            return;
        }
        let (traces, unstable) = traces_from_secular(&self.secular, k_max);
        self.traces = traces;
        self.trace_instability |= unstable;
    }

    /// log|Φ_n(e^{iθ})| (the full field) at one angle, by Horner evaluation.
    pub fn x_full_at(&self, theta: f64) -> f64 {
        let z = Complex64::from_polar(1.0, theta);
        let val = self
            .secular
            .iter()
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, &c| acc * z + c);
        val.norm().ln()
    }

    /// The truncated field -(1/2)Σ_{k≤m}(1/k)[e^{-ikθ}Tr U^k + c.c.] at one
    /// angle. Requires traces up to m.
    pub fn x_truncated_at(&self, theta: f64, m: usize) -> f64 {
        assert!(self.traces.len() >= m, "traces up to {m} must be materialized");
        let mut acc = Complex64::new(0.0, 0.0);
        for k in 1..=m {
            acc += self.traces[k - 1] / k as f64 * Complex64::from_polar(1.0, -(k as f64) * theta);
        }
        -acc.re
    }
}

/// Values of a field on a uniform angular grid θ_g = 2πg/G.
#[derive(Debug, Clone)]
pub struct FieldGrid {
    pub grid_size: usize,
    /// May contain -infinity where the full field hits an eigenvalue angle.
    pub values: Vec<f64>,
    pub kind: FieldKind,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FieldKind {
    Full { n: usize },
    Truncated { n: usize, m: usize },
    Gaussian { m: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FieldMode {
    Full,
    Truncated(usize),
}

/// Verblunsky coefficients of one CUE draw: |α_k|² ~ Beta(1, n-k-1) sampled
/// by inverse CDF, rotationally invariant phases, last coefficient uniform on
/// the circle.
pub fn sample_verblunsky<R: Rng>(n: usize, rng: &mut R) -> Result<Vec<Complex64>> {
    if n == 0 {
        return Err(invalid("matrix size must be positive"));
    }
    let mut alphas = Vec::with_capacity(n);
    for k in 0..n - 1 {
        let m = (n - k - 1) as f64;
        let u: f64 = rng.gen();
        let r2 = 1.0 - (1.0 - u).powf(1.0 / m);
        let phase = uniform_phase(rng);
        alphas.push(phase * r2.sqrt());
    }
    alphas.push(uniform_phase(rng));
    Ok(alphas)
}

/// Szegő recursion Φ_{k+1}(z) = zΦ_k(z) - conj(α_k)Φ*_k(z): monic secular
/// polynomial coefficients in ascending degree order.
pub fn secular_coefficients(alphas: &[Complex64]) -> Vec<Complex64> {
    let n = alphas.len();
    let mut phi = vec![Complex64::new(1.0, 0.0)];
    let mut phistar = vec![Complex64::new(1.0, 0.0)];
    for (k, &alpha) in alphas.iter().enumerate() {
        let mut next = vec![Complex64::new(0.0, 0.0); k + 2];
        next[1..].copy_from_slice(&phi);
        for (j, &ps) in phistar.iter().enumerate() {
            next[j] -= alpha.conj() * ps;
        }
        let mut next_star = vec![Complex64::new(0.0, 0.0); k + 2];
        next_star[..=k].copy_from_slice(&phistar);
        for (j, &p) in phi.iter().enumerate() {
            next_star[j + 1] -= alpha * p;
        }
        phi = next;
        phistar = next_star;
    }
    debug_assert_eq!(phi.len(), n + 1);
    phi
}

/// Power sums of the roots of a monic polynomial via Newton's identities.
/// Returns the traces and whether intermediate growth exceeded the
/// instability sentinel (the caller may then prefer the dense backend).
pub fn traces_from_secular(secular: &[Complex64], k_max: usize) -> (Vec<Complex64>, bool) {
    let n = secular.len() - 1;
    let cap = secular.iter().map(|c| c.norm()).fold(1.0f64, f64::max) * TRACE_INSTABILITY_FACTOR;
    let mut s = Vec::with_capacity(k_max);
    let mut unstable = false;
    for k in 1..=k_max {
        let mut acc = if k <= n {
            -(k as f64) * secular[n - k]
        } else {
            Complex64::new(0.0, 0.0)
        };
        for i in 1..k.min(n + 1) {
            acc -= secular[n - i] * s[k - i - 1];
        }
        if acc.norm() > cap {
            unstable = true;
        }
        s.push(acc);
    }
    (s, unstable)
}

/// Evaluates the full or truncated field on all G grid angles with one fast
/// transform. Full mode needs G > n; truncated mode needs traces up to m.
pub fn field_on_grid(sample: &CueSample, grid_size: usize, mode: FieldMode) -> Result<FieldGrid> {
    if !grid_size.is_power_of_two() {
        return Err(invalid("grid size must be a power of two"));
    }
    match mode {
        FieldMode::Full => {
            if grid_size <= sample.n {
                return Err(invalid(format!(
                    "grid size {grid_size} must exceed the matrix size {}",
                    sample.n
                )));
            }
            let vals = fft::eval_on_roots_of_unity(&sample.secular, grid_size);
            Ok(FieldGrid {
                grid_size,
                values: vals.iter().map(|v| v.norm().ln()).collect(),
                kind: FieldKind::Full { n: sample.n },
            })
        }
        FieldMode::Truncated(m) => {
            assert!(sample.traces.len() >= m, "traces up to {m} must be materialized");
            if grid_size < m + 1 {
                return Err(invalid("grid size must resolve every truncated mode"));
            }
            let a: Vec<Complex64> =
                (1..=m).map(|k| sample.traces[k - 1] / k as f64).collect();
            let vals = fft::eval_negative_modes(&a, grid_size);
            Ok(FieldGrid {
                grid_size,
                values: vals.iter().map(|v| -v.re).collect(),
                kind: FieldKind::Truncated { n: sample.n, m },
            })
        }
    }
}

/// Haar-distributed dense unitary matrix: QR of a complex Ginibre matrix with
/// the phases of R's diagonal absorbed into Q, which makes the factor unique
/// and Haar. Cross-check backend only.
pub fn sample_haar_qr<R: Rng>(n: usize, rng: &mut R) -> Result<DMatrix<Complex64>> {
    if n == 0 {
        return Err(invalid("matrix size must be positive"));
    }
    let g = DMatrix::from_fn(n, n, |_, _| standard_complex_gaussian(rng));
    let qr = g.qr();
    let r = qr.r();
    let mut q = qr.q();
    for j in 0..n {
        let d = r[(j, j)];
        let phase = if d.norm() == 0.0 { Complex64::new(1.0, 0.0) } else { d / d.norm() };
        for i in 0..n {
            q[(i, j)] *= phase;
        }
    }
    Ok(q)
}

/// ‖U*U − I‖_max, the unitarity defect of a dense matrix.
pub fn unitarity_defect(u: &DMatrix<Complex64>) -> f64 {
    let n = u.nrows();
    let prod = u.adjoint() * u;
    let mut defect = 0.0f64;
    for i in 0..n {
        for j in 0..n {
            let want = if i == j { Complex64::new(1.0, 0.0) } else { Complex64::new(0.0, 0.0) };
            defect = defect.max((prod[(i, j)] - want).norm());
        }
    }
    defect
}

/// Tr U^k for k = 1..=k_max by repeated multiplication (dense backend).
pub fn traces_dense(u: &DMatrix<Complex64>, k_max: usize) -> Vec<Complex64> {
    let mut power = u.clone();
    let mut out = Vec::with_capacity(k_max);
    for k in 1..=k_max {
        out.push(power.diagonal().sum());
        if k < k_max {
            power = &power * u;
        }
    }
    out
}

/// log|det(U − e^{iθ}I)| for the dense backend.
pub fn log_abs_char_dense(u: &DMatrix<Complex64>, theta: f64) -> f64 {
    let n = u.nrows();
    let shifted = u - DMatrix::<Complex64>::identity(n, n) * Complex64::from_polar(1.0, theta);
    shifted.lu().determinant().norm().ln()
}
