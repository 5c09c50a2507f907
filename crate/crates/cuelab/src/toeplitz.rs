//! Toeplitz determinants and the orthogonal-polynomial (Levinson) route.
//!
//! D_{n-1}(f) = det(f̂_{j-k})_{j,k=0}^{n-1} is computed two independent ways:
//! pivoted Gaussian elimination on the filled matrix, and the Szegő/Levinson
//! recursion through the prediction errors e_j, which also yields the
//! orthonormal-polynomial normalizations χ_j = e_j^{-1/2} and the monic
//! polynomial data entering the Riemann–Hilbert Y matrix.

use crate::quad;
use crate::symbol::{deform_symbol, deformation_rate, fourier_coefficients, Symbol};
use crate::{invalid, Error, Result};
use num_complex::Complex64;

/// Determinant value plus a degeneracy flag raised when elimination met an
/// exactly zero pivot column (the value is then an exact zero).
#[derive(Debug, Clone, Copy)]
pub struct ToeplitzDet {
    pub value: Complex64,
    pub degenerate: bool,
}

/// Output of the Levinson recursion on a positive symbol: Verblunsky
/// coefficients of the measure, prediction errors e_j > 0 with
/// D_{n-1} = Π_j e_j, the normalizations χ_j = 1/√e_j, the monic Φ_n, and
/// Φ*_{n-1} for the Y-matrix second row.
#[derive(Debug, Clone)]
pub struct OpucData {
    pub alphas: Vec<Complex64>,
    pub e: Vec<f64>,
    pub chi: Vec<f64>,
    pub phi: Vec<Complex64>,
    pub phistar_prev: Vec<Complex64>,
}

impl OpucData {
    pub fn log_det(&self) -> f64 {
        self.e.iter().map(|x| x.ln()).sum()
    }

    pub fn det(&self) -> f64 {
        self.e.iter().product()
    }
}

/// D_{size-1}(f) by pivoted elimination on the Toeplitz matrix of the
/// symbol's Fourier coefficients.
pub fn toeplitz_det(sym: &Symbol, size: usize) -> Result<ToeplitzDet> {
    if size == 0 {
        return Err(invalid("matrix size must be positive"));
    }
    let window = fourier_coefficients(sym, size - 1)?;
    toeplitz_det_from_coeffs(&window, size)
}

/// Same elimination on a caller-supplied centered window
/// [f̂_{-(size-1)}, .., f̂_{size-1}].
pub fn toeplitz_det_from_coeffs(window: &[Complex64], size: usize) -> Result<ToeplitzDet> {
    if window.len() < 2 * size - 1 {
        return Err(invalid(format!(
            "need {} coefficients for size {size}, got {}",
            2 * size - 1,
            window.len()
        )));
    }
    let center = window.len() / 2;
    let coef = |j: i64| window[(center as i64 + j) as usize];
    let mut m: Vec<Vec<Complex64>> = (0..size)
        .map(|r| (0..size).map(|c| coef(r as i64 - c as i64)).collect())
        .collect();
    let mut det = Complex64::new(1.0, 0.0);
    for k in 0..size {
        let pivot_row = (k..size)
            .max_by(|&a, &b| m[a][k].norm().total_cmp(&m[b][k].norm()))
            .unwrap();
        if m[pivot_row][k].norm() == 0.0 {
            return Ok(ToeplitzDet { value: Complex64::new(0.0, 0.0), degenerate: true });
        }
        if pivot_row != k {
            m.swap(pivot_row, k);
            det = -det;
        }
        let pivot = m[k][k];
        det *= pivot;
        for r in k + 1..size {
            let factor = m[r][k] / pivot;
            for c in k..size {
                let sub = factor * m[k][c];
                m[r][c] -= sub;
            }
        }
    }
    Ok(ToeplitzDet { value: det, degenerate: false })
}

/// Levinson recursion from the symbol's Fourier coefficients. Fails with a
/// precision error when a prediction error leaves the positive-definite
/// range, which for an honest nonnegative symbol signals coefficient noise.
pub fn opuc_chi(sym: &Symbol, n: usize) -> Result<OpucData> {
    if n == 0 {
        return Err(invalid("need at least one orthogonal polynomial"));
    }
    let window = fourier_coefficients(sym, n)?;
    opuc_from_coeffs(&window, n)
}

/// Levinson recursion on a caller-supplied centered coefficient window
/// covering at least [f̂_{-n}, .., f̂_{n}].
pub fn opuc_from_coeffs(window: &[Complex64], n: usize) -> Result<OpucData> {
    if window.len() < 2 * n + 1 {
        return Err(invalid(format!(
            "need {} coefficients for {n} recursion steps, got {}",
            2 * n + 1,
            window.len()
        )));
    }
    let center = window.len() / 2;
    let coef = |j: i64| window[(center as i64 + j) as usize];
    let e0 = coef(0);
    if e0.im.abs() > 1e-8 * e0.norm().max(1.0) {
        return Err(Error::PrecisionFailure(format!(
            "zeroth coefficient {e0} of a real symbol must be real"
        )));
    }
    if e0.re <= 0.0 {
        return Err(Error::PrecisionFailure(format!("leading minor {} is not positive", e0.re)));
    }
    let mut e = vec![e0.re];
    let mut alphas: Vec<Complex64> = Vec::with_capacity(n);
    let mut phi = vec![Complex64::new(1.0, 0.0)];
    let mut phistar = vec![Complex64::new(1.0, 0.0)];
    let mut phistar_prev = phistar.clone();
    for step in 0..n {
        let num: Complex64 = phi
            .iter()
            .enumerate()
            .map(|(a, &c)| c * coef(-(a as i64) - 1))
            .sum();
        let alpha_conj = num / e[step];
        let alpha = alpha_conj.conj();
        let norm2 = alpha.norm_sqr();
        if norm2 >= 1.0 {
            return Err(Error::PrecisionFailure(format!(
                "recursion coefficient left the unit disk at step {step} (|α|² = {norm2})"
            )));
        }
        if step + 1 < n {
            let next_e = e[step] * (1.0 - norm2);
            if next_e <= 0.0 {
                return Err(Error::PrecisionFailure(format!(
                    "prediction error collapsed at step {}",
                    step + 1
                )));
            }
            e.push(next_e);
        }
        phistar_prev = phistar.clone();
        let mut next = vec![Complex64::new(0.0, 0.0); step + 2];
        next[1..].copy_from_slice(&phi);
        for (j, &ps) in phistar.iter().enumerate() {
            next[j] -= alpha_conj * ps;
        }
        let mut next_star = vec![Complex64::new(0.0, 0.0); step + 2];
        next_star[..=step].copy_from_slice(&phistar);
        for (j, &p) in phi.iter().enumerate() {
            next_star[j + 1] -= alpha * p;
        }
        phi = next;
        phistar = next_star;
        alphas.push(alpha);
    }
    let chi = e.iter().map(|x| 1.0 / x.sqrt()).collect();
    Ok(OpucData { alphas, e, chi, phi, phistar_prev })
}

/// First column of the Riemann–Hilbert matrix Y(z, n; f) as coefficient
/// vectors in ascending degree: Y₁₁ = Φ_n (monic) and Y₂₁ = -Φ*_{n-1}/e_{n-1}.
pub fn y_first_column(sym: &Symbol, n: usize) -> Result<(Vec<Complex64>, Vec<Complex64>)> {
    let data = opuc_chi(sym, n)?;
    let scale = -1.0 / data.e[n - 1];
    let y21 = data.phistar_prev.iter().map(|&c| c * scale).collect();
    Ok((data.phi, y21))
}

/// One check of the determinant deformation identity at parameter t:
/// lhs = ∂_t log D_{n-1}(f_t) by Richardson-extrapolated finite differences,
/// rhs = (1/2π)∫ e^{i(1-n)θ}(Y₁₁Y₂₁' - Y₂₁Y₁₁')(e^{iθ}) ∂_t f_t(e^{iθ}) dθ
/// with Y built from f_t itself.
#[derive(Debug, Clone, Copy)]
pub struct IdentityCheck {
    pub t: f64,
    pub lhs: f64,
    pub rhs: f64,
}

impl IdentityCheck {
    pub fn gap(&self) -> f64 {
        (self.lhs - self.rhs).abs()
    }
}

pub fn differential_identity_check(sym: &Symbol, n: usize, t: f64) -> Result<IdentityCheck> {
    if n == 0 || n > 32 {
        return Err(invalid(format!("matrix size {n} must lie in 1..=32")));
    }
    if !(0.0..=1.0).contains(&t) {
        return Err(invalid(format!("deformation parameter t = {t} is outside [0, 1]")));
    }
    let log_det_at = |tv: f64| -> Result<f64> {
        let ft = deform_symbol(sym, tv)?;
        Ok(opuc_chi(&ft, n)?.log_det())
    };
    let h = 1e-3;
    let lhs = if t - h >= 0.0 && t + h <= 1.0 {
        let central = |hh: f64| -> Result<f64> {
            Ok((log_det_at(t + hh)? - log_det_at(t - hh)?) / (2.0 * hh))
        };
        let c1 = central(h)?;
        let c2 = central(h / 2.0)?;
        (4.0 * c2 - c1) / 3.0
    } else {
        let dir = if t - h < 0.0 { 1.0 } else { -1.0 };
        let base = log_det_at(t)?;
        let one_sided = |hh: f64| -> Result<f64> {
            let l1 = log_det_at(t + dir * hh)?;
            let l2 = log_det_at(t + dir * 2.0 * hh)?;
            Ok(dir * (-3.0 * base + 4.0 * l1 - l2) / (2.0 * hh))
        };
        let c1 = one_sided(h)?;
        let c2 = one_sided(h / 2.0)?;
        (4.0 * c2 - c1) / 3.0
    };

    let ft = deform_symbol(sym, t)?;
    let (y11, y21) = y_first_column(&ft, n)?;
    let d11 = differentiate(&y11);
    let d21 = differentiate(&y21);
    let integrand = |theta: f64| -> Complex64 {
        let z = Complex64::from_polar(1.0, theta);
        let wronskian = horner(&y11, z) * horner(&d21, z) - horner(&y21, z) * horner(&d11, z);
        let phase = Complex64::from_polar(1.0, (1.0 - n as f64) * theta);
        phase * wronskian * deformation_rate(sym, theta)
    };
    let cuts: Vec<f64> = sym.singularities.iter().map(|s| s.angle).collect();
    let rhs = quad::fourier_coefficient(integrand, &cuts, 0, 1e-8)?;
    if rhs.im.abs() > 1e-6 * rhs.norm().max(1.0) {
        return Err(Error::PrecisionFailure(format!(
            "deformation integral has a spurious imaginary part {}",
            rhs.im
        )));
    }
    Ok(IdentityCheck { t, lhs, rhs: rhs.re })
}

fn horner(coeffs: &[Complex64], z: Complex64) -> Complex64 {
    coeffs.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, &c| acc * z + c)
}

fn differentiate(coeffs: &[Complex64]) -> Vec<Complex64> {
    coeffs
        .iter()
        .enumerate()
        .skip(1)
        .map(|(k, &c)| c * k as f64)
        .collect()
}

/// log D_{n-1} over a range of sizes in one recursion pass: returns
/// [log D_0, log D_1, .., log D_{n-1}].
pub fn log_det_profile(sym: &Symbol, n: usize) -> Result<Vec<f64>> {
    let data = opuc_chi(sym, n)?;
    let mut acc = 0.0;
    Ok(data
        .e
        .iter()
        .map(|x| {
            acc += x.ln();
            acc
        })
        .collect())
}
