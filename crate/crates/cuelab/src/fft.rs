//! Thin wrappers over rustfft with a per-thread plan cache.
//!
//! Conventions: `forward` computes X[k] = sum_n x[n] e^{-2πi kn/N} and
//! `inverse` computes X[k] = sum_n x[n] e^{+2πi kn/N} (unnormalized), matching
//! the analysis/synthesis split used to evaluate Fourier sums on grids.

use num_complex::Complex64;
use rustfft::FftPlanner;
use std::cell::RefCell;

thread_local! {
    static PLANNER: RefCell<FftPlanner<f64>> = RefCell::new(FftPlanner::new());
}

pub fn forward(buf: &mut [Complex64]) {
    PLANNER.with(|p| p.borrow_mut().plan_fft_forward(buf.len()).process(buf));
}

pub fn inverse(buf: &mut [Complex64]) {
    PLANNER.with(|p| p.borrow_mut().plan_fft_inverse(buf.len()).process(buf));
}

/// Inverse transform scaled by 1/N, i.e. the exact inverse of [`forward`].
pub fn inverse_normalized(buf: &mut [Complex64]) {
    inverse(buf);
    let scale = 1.0 / buf.len() as f64;
    for v in buf.iter_mut() {
        *v *= scale;
    }
}

/// Evaluates the polynomial with `coeffs` (ascending powers) at all G-th
/// roots of unity e^{2πi g/G}, G = `grid_size`. Requires G >= coeffs.len().
pub fn eval_on_roots_of_unity(coeffs: &[Complex64], grid_size: usize) -> Vec<Complex64> {
    assert!(grid_size >= coeffs.len(), "grid must resolve every coefficient");
    let mut buf = vec![Complex64::new(0.0, 0.0); grid_size];
    buf[..coeffs.len()].copy_from_slice(coeffs);
    inverse(&mut buf);
    buf
}

/// Evaluates sum_{k=1..a.len()} a[k-1] e^{-ik θ_g} at θ_g = 2πg/G for all g.
pub fn eval_negative_modes(a: &[Complex64], grid_size: usize) -> Vec<Complex64> {
    assert!(grid_size >= a.len() + 1, "grid must resolve every mode");
    let mut buf = vec![Complex64::new(0.0, 0.0); grid_size];
    buf[1..=a.len()].copy_from_slice(a);
    forward(&mut buf);
    buf
}

/// Full linear convolution: out[k] = Σ_i a[i]·b[k-i], length a.len()+b.len()-1.
/// Padded to the next power of two so circular wraparound never aliases.
pub fn convolve(a: &[Complex64], b: &[Complex64]) -> Vec<Complex64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let out_len = a.len() + b.len() - 1;
    if a.len().min(b.len()) <= 32 {
        let mut out = vec![Complex64::new(0.0, 0.0); out_len];
        for (i, &x) in a.iter().enumerate() {
            for (j, &y) in b.iter().enumerate() {
                out[i + j] += x * y;
            }
        }
        return out;
    }
    let p = out_len.next_power_of_two();
    let mut fa = vec![Complex64::new(0.0, 0.0); p];
    fa[..a.len()].copy_from_slice(a);
    let mut fb = vec![Complex64::new(0.0, 0.0); p];
    fb[..b.len()].copy_from_slice(b);
    forward(&mut fa);
    forward(&mut fb);
    for (x, y) in fa.iter_mut().zip(&fb) {
        *x *= y;
    }
    inverse_normalized(&mut fa);
    fa.truncate(out_len);
    fa
}
