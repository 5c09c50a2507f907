//! Fisher–Hartwig symbols on the unit circle.
//!
//! A symbol here is f(z) = e^{V(z)} Π_i |z - e^{iu_i}|^{β_i} with a smooth
//! exponent V that is real on the circle (V_{-j} = conj(V_j), V_0 real) and at
//! most two root-type singular factors. Fourier coefficients combine three
//! exact ingredients: the hypergeometric-ratio family of each singular factor,
//! an FFT convolution of the two families when both are present, and a
//! resolution-doubled FFT sampling of the smooth factor.

use crate::quad;
use crate::{fft, invalid, Error, Result};
use num_complex::Complex64;
use statrs::function::gamma::{gamma, ln_gamma};
use std::f64::consts::{PI, TAU};

/// One-sided truncation length of a singular Fourier family when two factors
/// must be convolved; the resulting error is a product of two tails,
/// O(L^{-(1+β₁+β₂)}).
const SINGULAR_FAMILY_LEN: usize = 1 << 17;
/// Resolution cap for smooth-factor sampling before giving up.
const MAX_SMOOTH_GRID: usize = 1 << 20;
/// Relative floor below which trailing smooth coefficients are dropped.
const TRIM_FLOOR: f64 = 1e-16;
/// Angular separations below this merge two singularities into one factor.
const MERGE_TOL: f64 = 1e-12;

/// A root-type factor |z - e^{i·angle}|^{exponent}.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Singularity {
    pub angle: f64,
    pub exponent: f64,
}

/// Symbol data: V_0, the coefficients V_j for j ≥ 1 (negative modes are their
/// conjugates, so the symbol is real and nonnegative on the circle), and the
/// singular factors.
#[derive(Debug, Clone)]
pub struct Symbol {
    pub v0: f64,
    pub v: Vec<Complex64>,
    pub singularities: Vec<Singularity>,
}

/// Geometry of a two-point construction: the half-separation u, the rotation
/// φ, the exponents attached to e^{+iu} and e^{-iu}, and whether the two
/// probe angles coincided.
#[derive(Debug, Clone, Copy)]
pub struct PairGeometry {
    pub u: f64,
    pub phi: f64,
    pub beta_tilde: (f64, f64),
    pub merged: bool,
}

/// Inputs of the two-point symbol: probe angles, truncated-field couplings
/// α_i with cutoffs K_i (both probes at θ), Fourier coefficients 𝒯_1..𝒯_m of
/// a real trigonometric polynomial, and the singular exponents β_i at θ, θ'.
#[derive(Debug, Clone, PartialEq)]
pub struct SymbolParams {
    pub theta: f64,
    pub theta_prime: f64,
    pub alpha1: f64,
    pub alpha2: f64,
    pub k1: usize,
    pub k2: usize,
    pub t_coeffs: Vec<Complex64>,
    pub beta1: f64,
    pub beta2: f64,
}

/// Which side of the unit circle a Szegő-function evaluation refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Inside,
    Outside,
}

impl Symbol {
    /// Purely smooth symbol e^{V}.
    pub fn smooth(v0: f64, v: Vec<Complex64>) -> Symbol {
        Symbol { v0, v, singularities: Vec::new() }
    }

    /// Attaches singular factors: angles are normalized to [0, 2π), factors
    /// closer than the merge tolerance coalesce by adding exponents, zero
    /// exponents drop out. At most two distinct factors are supported and
    /// exponents must be nonnegative.
    pub fn with_singularities(mut self, sings: &[Singularity]) -> Result<Symbol> {
        let mut merged: Vec<Singularity> = Vec::new();
        for s in sings {
            if s.exponent < 0.0 {
                return Err(invalid(format!(
                    "singular exponent {} must be nonnegative",
                    s.exponent
                )));
            }
            if s.exponent == 0.0 {
                continue;
            }
            let angle = s.angle.rem_euclid(TAU);
            match merged.iter_mut().find(|t| {
                let d = (t.angle - angle).rem_euclid(TAU);
                d < MERGE_TOL || TAU - d < MERGE_TOL
            }) {
                Some(t) => t.exponent += s.exponent,
                None => merged.push(Singularity { angle, exponent: s.exponent }),
            }
        }
        if merged.len() > 2 {
            return Err(invalid("at most two singular factors are supported"));
        }
        self.singularities = merged;
        Ok(self)
    }

    /// V(e^{iθ}), real by the Hermitian coefficient structure.
    pub fn log_smooth_at(&self, theta: f64) -> f64 {
        let mut acc = self.v0;
        for (j, &vj) in self.v.iter().enumerate() {
            let ph = Complex64::from_polar(1.0, (j + 1) as f64 * theta);
            acc += 2.0 * (vj * ph).re;
        }
        acc
    }

    /// V(z) off the circle (Laurent polynomial, z ≠ 0).
    pub fn log_smooth_at_point(&self, z: Complex64) -> Complex64 {
        let mut acc = Complex64::new(self.v0, 0.0);
        let zinv = 1.0 / z;
        let mut zp = Complex64::new(1.0, 0.0);
        let mut zn = Complex64::new(1.0, 0.0);
        for &vj in &self.v {
            zp *= z;
            zn *= zinv;
            acc += vj * zp + vj.conj() * zn;
        }
        acc
    }

    /// Π_i |e^{iθ} - e^{iu_i}|^{β_i}.
    pub fn singular_part_at(&self, theta: f64) -> f64 {
        self.singularities
            .iter()
            .map(|s| (2.0 * ((theta - s.angle) / 2.0).sin()).abs().powf(s.exponent))
            .product()
    }

    /// f(e^{iθ}) ≥ 0.
    pub fn evaluate(&self, theta: f64) -> f64 {
        self.log_smooth_at(theta).exp() * self.singular_part_at(theta)
    }

    /// Laurent window of the smooth factor e^{V}: (lowest index, coefficients).
    fn smooth_laurent(&self) -> Result<(i64, Vec<Complex64>)> {
        if self.v.is_empty() {
            return Ok((0, vec![Complex64::new(self.v0.exp(), 0.0)]));
        }
        let start = (4 * (self.v.len() + 1)).next_power_of_two().max(64);
        laurent_from_samples(|theta| Ok(self.log_smooth_at(theta).exp()), start, 1e-10)
    }
}

/// j-th Fourier coefficient of |z - 1|^β (real, symmetric in j). The head
/// regime uses the Γ-ratio directly; past the Γ pole the reflection form
/// takes over, with c_j ~ j^{-(1+β)} decay.
pub fn singular_coeff(beta: f64, j: i64) -> f64 {
    if beta == 0.0 {
        return if j == 0 { 1.0 } else { 0.0 };
    }
    let ja = j.unsigned_abs() as f64;
    let tail = 1.0 + beta / 2.0 - ja;
    if tail > 0.0 {
        let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
        sign * gamma(1.0 + beta) / (gamma(1.0 + beta / 2.0 + ja) * gamma(1.0 + beta / 2.0 - ja))
    } else if tail == tail.floor() {
        // The reciprocal Γ factor sits exactly on a pole.
        0.0
    } else {
        let s = (PI * beta / 2.0).sin();
        -(s / PI)
            * (ln_gamma(1.0 + beta) + ln_gamma(ja - beta / 2.0) - ln_gamma(1.0 + ja + beta / 2.0))
                .exp()
    }
}

/// Fourier coefficients f̂_{-count}..f̂_{count} (index j + count). Exact
/// families for the singular factors, FFT-sampled smooth factor, exact
/// discrete convolutions; the only truncation loss is the tail product of two
/// singular families.
pub fn fourier_coefficients(sym: &Symbol, count: usize) -> Result<Vec<Complex64>> {
    let (smin, smooth) = sym.smooth_laurent()?;
    let smax = smin + smooth.len() as i64 - 1;
    let margin = (-smin).max(smax).max(0);
    let need = count as i64 + margin;

    // Singular-part window (fmin, fam): fam[i] is the coefficient at fmin + i.
    let (fmin, fam): (i64, Vec<Complex64>) = match sym.singularities.len() {
        0 => (0, vec![Complex64::new(1.0, 0.0)]),
        1 => {
            let s = &sym.singularities[0];
            let lo = -need;
            let coeffs = (lo..=need)
                .map(|j| {
                    Complex64::from_polar(1.0, -(j as f64) * s.angle)
                        * singular_coeff(s.exponent, j)
                })
                .collect();
            (lo, coeffs)
        }
        2 => {
            let l = SINGULAR_FAMILY_LEN as i64;
            assert!(need <= 2 * l, "requested window exceeds the convolution support");
            let family = |s: &Singularity| -> Vec<Complex64> {
                (-l..=l)
                    .map(|j| {
                        Complex64::from_polar(1.0, -(j as f64) * s.angle)
                            * singular_coeff(s.exponent, j)
                    })
                    .collect()
            };
            let a = family(&sym.singularities[0]);
            let b = family(&sym.singularities[1]);
            let conv = fft::convolve(&a, &b);
            (-2 * l, conv)
        }
        _ => return Err(invalid("at most two singular factors are supported")),
    };
    let fam_at = |idx: i64| -> Complex64 {
        let off = idx - fmin;
        if off < 0 || off >= fam.len() as i64 {
            Complex64::new(0.0, 0.0)
        } else {
            fam[off as usize]
        }
    };

    let mut out = vec![Complex64::new(0.0, 0.0); 2 * count + 1];
    for j in -(count as i64)..=count as i64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for (k, &sv) in smooth.iter().enumerate() {
            acc += sv * fam_at(j - (smin + k as i64));
        }
        out[(j + count as i64) as usize] = acc;
    }
    Ok(out)
}

/// Builds the rotated two-point symbol. Writing Δ = θ - θ' the rotation is
/// φ = (θ+θ')/2 for |Δ| ≤ π and (θ+θ'+2π)/2 otherwise, u = d(θ,θ')/2 is the
/// half arc-distance, and for Δ in (0,π] ∪ (-2π,-π) the exponent β₁ sits at
/// e^{+iu} with α-phases e^{-iju} on z^j, while the complementary region
/// swaps both. Coinciding probe angles merge the factors into one of exponent
/// β₁+β₂. The smooth exponent is
/// V(z) = 𝒯(e^{iφ}z) - Σ_{j≤K₁} (α₁/2j)(z^j e^{∓iju} + z^{-j} e^{±iju})
///                  - Σ_{j≤K₂} (α₂/2j)(z^j e^{∓iju} + z^{-j} e^{±iju}).
pub fn build_symbol(p: &SymbolParams) -> Result<(Symbol, PairGeometry)> {
    for (name, b) in [("beta1", p.beta1), ("beta2", p.beta2)] {
        if b < 0.0 {
            return Err(invalid(format!("{name} = {b} must be nonnegative")));
        }
    }
    let theta = p.theta.rem_euclid(TAU);
    let theta_prime = p.theta_prime.rem_euclid(TAU);
    let delta = theta - theta_prime;
    let d = delta.abs().min(TAU - delta.abs());
    let u = d / 2.0;
    let phi = if delta.abs() <= PI {
        (theta + theta_prime) / 2.0
    } else {
        (theta + theta_prime + TAU) / 2.0
    };
    let merged = d < MERGE_TOL;
    let region_a1 = if delta > 0.0 { delta <= PI } else { delta < -PI };
    // Sign of the exponent in the z^j phase e^{i·s·j·u}.
    let s = if region_a1 { -1.0 } else { 1.0 };

    let m = p.t_coeffs.len();
    let jmax = m
        .max(if p.alpha1 != 0.0 { p.k1 } else { 0 })
        .max(if p.alpha2 != 0.0 { p.k2 } else { 0 });
    let mut v = vec![Complex64::new(0.0, 0.0); jmax];
    for j in 1..=jmax {
        let mut vj = Complex64::new(0.0, 0.0);
        if j <= m {
            vj += p.t_coeffs[j - 1] * Complex64::from_polar(1.0, j as f64 * phi);
        }
        let alpha_phase = Complex64::from_polar(1.0, s * j as f64 * u);
        if j <= p.k1 {
            vj -= p.alpha1 / (2.0 * j as f64) * alpha_phase;
        }
        if j <= p.k2 {
            vj -= p.alpha2 / (2.0 * j as f64) * alpha_phase;
        }
        v[j - 1] = vj;
    }

    let beta_tilde = if region_a1 || merged { (p.beta1, p.beta2) } else { (p.beta2, p.beta1) };
    let sings = if merged {
        vec![Singularity { angle: 0.0, exponent: p.beta1 + p.beta2 }]
    } else {
        vec![
            Singularity { angle: u, exponent: beta_tilde.0 },
            Singularity { angle: (-u).rem_euclid(TAU), exponent: beta_tilde.1 },
        ]
    };
    let symbol = Symbol::smooth(0.0, v).with_singularities(&sings)?;
    Ok((symbol, PairGeometry { u, phi, beta_tilde, merged }))
}

/// Argument of w with the branch cut along the ray {r e^{iu} : r ≥ 0}:
/// returns arg w ∈ (u, u + 2π), failing on the cut itself.
fn arg_cut(w: Complex64, u: f64) -> Result<f64> {
    if w.norm() == 0.0 {
        return Err(Error::BranchCut("argument of zero is undefined".into()));
    }
    let rotated = w * Complex64::from_polar(1.0, -u);
    let mut a = rotated.arg();
    if a.abs() < 1e-12 && rotated.re > 0.0 {
        return Err(Error::BranchCut(format!("point lies on the branch ray at angle {u}")));
    }
    if a < 0.0 {
        a += TAU;
    }
    Ok(u + a)
}

/// The Szegő function of the symbol. Inside:
/// 𝒟(z) = e^{Σ_{j≥0} V_j z^j} Π_i (z - e^{iu_i})^{β_i/2} e^{-iβ_i(u_i+π)/2},
/// each power cut along the outward ray through its singularity, so 𝒟(0) =
/// e^{V_0}. Outside: 𝒟(z) = [e^{Σ_{j≤-1} V_j z^j} Π_i (1 - e^{iu_i}/z)^{β_i/2}]^{-1}
/// with principal logarithms, cut along the inward segments, so 𝒟(∞) = 1.
/// Their boundary values on the circle multiply as 𝒟_in(e^{iθ})/𝒟_out(e^{iθ})
/// = f(e^{iθ}).
pub fn szego_function(sym: &Symbol, z: Complex64, side: Side) -> Result<Complex64> {
    match side {
        Side::Inside => {
            let mut acc = Complex64::new(sym.v0, 0.0);
            let mut zp = Complex64::new(1.0, 0.0);
            for &vj in &sym.v {
                zp *= z;
                acc += vj * zp;
            }
            for s in &sym.singularities {
                let w = z - Complex64::from_polar(1.0, s.angle);
                if w.norm() < 1e-14 {
                    return Err(Error::BranchCut(format!(
                        "evaluation at the singular point angle {}",
                        s.angle
                    )));
                }
                let a = arg_cut(w, s.angle)?;
                acc += s.exponent / 2.0
                    * Complex64::new(w.norm().ln(), a - s.angle - PI);
            }
            Ok(acc.exp())
        }
        Side::Outside => {
            if z.norm() == 0.0 {
                return Err(invalid("outside evaluation requires z != 0"));
            }
            let zinv = 1.0 / z;
            let mut acc = Complex64::new(0.0, 0.0);
            let mut zn = Complex64::new(1.0, 0.0);
            for &vj in &sym.v {
                zn *= zinv;
                acc += vj.conj() * zn;
            }
            for s in &sym.singularities {
                let w = Complex64::new(1.0, 0.0) - Complex64::from_polar(1.0, s.angle) * zinv;
                if w.im.abs() < 1e-12 * w.norm() && w.re <= 0.0 {
                    return Err(Error::BranchCut(format!(
                        "point lies on the inward cut at angle {}",
                        s.angle
                    )));
                }
                acc += s.exponent / 2.0 * w.ln();
            }
            Ok((-acc).exp())
        }
    }
}

/// Deformed symbol f_t = (1 - t + t e^{V}) Π |z - e^{iu_i}|^{β_i}: the smooth
/// factor's logarithm is resampled into a fresh Laurent window. t = 0 gives
/// the bare singular symbol, t = 1 returns the original.
pub fn deform_symbol(sym: &Symbol, t: f64) -> Result<Symbol> {
    if !(0.0..=1.0).contains(&t) {
        return Err(invalid(format!("deformation parameter t = {t} is outside [0, 1]")));
    }
    if sym.v.is_empty() {
        let g0 = 1.0 - t + t * sym.v0.exp();
        if g0 <= 0.0 {
            return Err(Error::InvalidSymbol("deformed symbol is nonpositive".into()));
        }
        return Ok(Symbol {
            v0: g0.ln(),
            v: Vec::new(),
            singularities: sym.singularities.clone(),
        });
    }
    let start = (4 * (sym.v.len() + 1)).next_power_of_two().max(64);
    let (lo, coeffs) = laurent_from_samples(
        |theta| {
            let g = 1.0 - t + t * sym.log_smooth_at(theta).exp();
            if g <= 0.0 {
                return Err(Error::InvalidSymbol(format!(
                    "deformed symbol is nonpositive at angle {theta}"
                )));
            }
            Ok(g.ln())
        },
        start,
        1e-12,
    )?;
    // Hermitian by realness; read V_0 and the positive modes off the window.
    let at = |j: i64| -> Complex64 {
        let off = j - lo;
        if off < 0 || off >= coeffs.len() as i64 {
            Complex64::new(0.0, 0.0)
        } else {
            coeffs[off as usize]
        }
    };
    let hi = lo + coeffs.len() as i64 - 1;
    let v: Vec<Complex64> = (1..=hi.max(0)).map(at).collect();
    Ok(Symbol { v0: at(0).re, v, singularities: sym.singularities.clone() })
}

/// ∂_t f_t at fixed z = e^{iθ}: (e^{V} - 1) Π |z - e^{iu_i}|^{β_i}, expressed
/// through the undeformed symbol and independent of t.
pub fn deformation_rate(sym: &Symbol, theta: f64) -> f64 {
    (sym.log_smooth_at(theta).exp() - 1.0) * sym.singular_part_at(theta)
}

/// Fourier coefficient of the symbol by adaptive quadrature, the slow
/// reference for the exact pipeline.
pub fn fourier_coefficient_quadrature(sym: &Symbol, j: i64, tol: f64) -> Result<Complex64> {
    let angles: Vec<f64> = sym.singularities.iter().map(|s| s.angle).collect();
    quad::fourier_coefficient(|theta| Complex64::new(sym.evaluate(theta), 0.0), &angles, j, tol)
}

/// Samples a real periodic function on power-of-two grids, doubling until two
/// consecutive coefficient windows agree within tol, then trims the window to
/// the significant entries. Returns (lowest index, coefficients).
fn laurent_from_samples(
    f: impl Fn(f64) -> Result<f64>,
    start: usize,
    tol: f64,
) -> Result<(i64, Vec<Complex64>)> {
    let mut g = start.next_power_of_two();
    let mut prev: Option<Vec<Complex64>> = None;
    loop {
        let mut buf: Vec<Complex64> = Vec::with_capacity(g);
        for idx in 0..g {
            let theta = TAU * idx as f64 / g as f64;
            buf.push(Complex64::new(f(theta)?, 0.0));
        }
        fft::forward(&mut buf);
        let scale = 1.0 / g as f64;
        for x in buf.iter_mut() {
            *x *= scale;
        }
        if let Some(p) = &prev {
            let half = p.len();
            let window = (half / 4).max(1);
            let coef = |v: &Vec<Complex64>, j: i64| -> Complex64 {
                let n = v.len() as i64;
                v[j.rem_euclid(n) as usize]
            };
            let mut worst = 0.0f64;
            for j in -(window as i64)..=window as i64 {
                worst = worst.max((coef(&buf, j) - coef(p, j)).norm());
            }
            if worst < tol {
                return Ok(trim_window(&buf));
            }
        }
        if g >= MAX_SMOOTH_GRID {
            return Err(Error::PrecisionFailure(format!(
                "smooth factor did not stabilize at {MAX_SMOOTH_GRID} samples"
            )));
        }
        prev = Some(buf);
        g *= 2;
    }
}

/// Centers an FFT coefficient buffer into a trimmed window around index 0.
fn trim_window(buf: &[Complex64]) -> (i64, Vec<Complex64>) {
    let g = buf.len() as i64;
    let coef = |j: i64| buf[j.rem_euclid(g) as usize];
    let top = buf.iter().map(|c| c.norm()).fold(0.0f64, f64::max).max(1e-300);
    let floor = top * TRIM_FLOOR;
    let mut lo = 0i64;
    let mut hi = 0i64;
    for j in 1..=g / 2 {
        if coef(-j).norm() > floor {
            lo = -j;
        }
        if coef(j).norm() > floor {
            hi = j;
        }
    }
    (lo, (lo..=hi).map(coef).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn singular_coeff_matches_closed_forms() {
        // c_0(β) = Γ(1+β)/Γ(1+β/2)².
        for beta in [0.5, 1.0, 1.5, 2.0] {
            let want = gamma(1.0 + beta) / gamma(1.0 + beta / 2.0).powi(2);
            assert_relative_eq!(singular_coeff(beta, 0), want, epsilon = 1e-13);
        }
        // |z-1|² = 2 - z - z^{-1}.
        assert_relative_eq!(singular_coeff(2.0, 0), 2.0, epsilon = 1e-13);
        assert_relative_eq!(singular_coeff(2.0, 1), -1.0, epsilon = 1e-13);
        assert_eq!(singular_coeff(2.0, 2), 0.0);
        assert_eq!(singular_coeff(2.0, 5), 0.0);
        // c_1(1) = -4/(3π).
        assert_relative_eq!(singular_coeff(1.0, 1), -4.0 / (3.0 * PI), epsilon = 1e-13);
        // β = 0 is no singularity at all.
        assert_eq!(singular_coeff(0.0, 0), 1.0);
        assert_eq!(singular_coeff(0.0, 3), 0.0);
        // Symmetric in j.
        assert_eq!(singular_coeff(0.8, -4), singular_coeff(0.8, 4));
    }

    #[test]
    fn singular_coeff_regimes_agree_where_both_apply() {
        // For β near 2 both the Γ-ratio and the reflection form are valid at
        // j = 1; they must coincide.
        for beta in [1.9f64, 1.99, 1.5] {
            let direct = -gamma(1.0 + beta) / (gamma(2.0 + beta / 2.0) * gamma(beta / 2.0));
            assert_relative_eq!(singular_coeff(beta, 1), direct, epsilon = 1e-12);
            let s = (PI * beta / 2.0).sin();
            let refl = -(s / PI)
                * (ln_gamma(1.0 + beta) + ln_gamma(1.0 - beta / 2.0) - ln_gamma(2.0 + beta / 2.0))
                    .exp();
            assert_relative_eq!(singular_coeff(beta, 1), refl, epsilon = 1e-12);
        }
    }

    #[test]
    fn singular_coeff_tail_decays_algebraically() {
        let beta = 0.7;
        let r = singular_coeff(beta, 4096) / singular_coeff(beta, 2048);
        assert!(
            (r.abs() - 0.5f64.powf(1.0 + beta)).abs() < 0.01,
            "tail ratio {r} should track j^-(1+β)"
        );
    }

    #[test]
    fn smooth_symbol_coefficients_match_quadrature() {
        let sym = Symbol::smooth(
            0.1,
            vec![Complex64::new(0.2, -0.1), Complex64::new(0.0, 0.05)],
        );
        let coeffs = fourier_coefficients(&sym, 4).unwrap();
        for j in -4i64..=4 {
            let want = fourier_coefficient_quadrature(&sym, j, 1e-12).unwrap();
            let got = coeffs[(j + 4) as usize];
            assert!(
                (got - want).norm() < 1e-9,
                "smooth coefficient {j}: pipeline {got}, quadrature {want}"
            );
        }
    }

    #[test]
    fn single_singularity_coefficients_match_quadrature() {
        let sym = Symbol::smooth(0.0, vec![Complex64::new(0.15, 0.1)])
            .with_singularities(&[Singularity { angle: 1.1, exponent: 0.9 }])
            .unwrap();
        let coeffs = fourier_coefficients(&sym, 3).unwrap();
        for j in -3i64..=3 {
            let want = fourier_coefficient_quadrature(&sym, j, 1e-11).unwrap();
            let got = coeffs[(j + 3) as usize];
            assert!(
                (got - want).norm() < 5e-9,
                "one-singularity coefficient {j}: pipeline {got}, quadrature {want}"
            );
        }
    }

    #[test]
    fn two_singularity_coefficients_match_quadrature() {
        let sym = Symbol::smooth(0.0, vec![Complex64::new(-0.1, 0.2)])
            .with_singularities(&[
                Singularity { angle: 0.8, exponent: 1.0 },
                Singularity { angle: 4.0, exponent: 0.6 },
            ])
            .unwrap();
        let coeffs = fourier_coefficients(&sym, 2).unwrap();
        for j in -2i64..=2 {
            let want = fourier_coefficient_quadrature(&sym, j, 1e-11).unwrap();
            let got = coeffs[(j + 2) as usize];
            assert!(
                (got - want).norm() < 5e-9,
                "two-singularity coefficient {j}: pipeline {got}, quadrature {want}"
            );
        }
    }

    #[test]
    fn coefficients_are_hermitian_for_real_symbols() {
        let sym = Symbol::smooth(0.0, vec![Complex64::new(0.3, -0.2)])
            .with_singularities(&[Singularity { angle: 2.0, exponent: 1.2 }])
            .unwrap();
        let c = fourier_coefficients(&sym, 5).unwrap();
        for j in 0..=5i64 {
            let plus = c[(j + 5) as usize];
            let minus = c[(5 - j) as usize];
            assert!(
                (plus - minus.conj()).norm() < 1e-12,
                "Hermitian symmetry violated at mode {j}"
            );
        }
    }

    #[test]
    fn built_symbol_equals_the_unrotated_product() {
        // f(z) must coincide with the pre-rotation symbol evaluated at
        // e^{iφ}z, regardless of which region θ-θ' falls in.
        let cases = [
            (0.7f64, 2.3f64),  // Δ < 0, |Δ| < π
            (2.3, 0.7),        // Δ > 0, |Δ| < π
            (0.5, 4.8),        // Δ < -π
            (4.8, 0.5),        // Δ > π
        ];
        for (theta, theta_prime) in cases {
            let p = SymbolParams {
                theta,
                theta_prime,
                alpha1: 0.6,
                alpha2: -0.4,
                k1: 2,
                k2: 3,
                t_coeffs: vec![Complex64::new(0.15, 0.1)],
                beta1: 1.0,
                beta2: 0.5,
            };
            let (sym, geo) = build_symbol(&p).unwrap();
            assert!(!geo.merged);
            for w in [0.3f64, 1.9, 3.3, 5.5] {
                let got = sym.evaluate(w);
                let lab = geo.phi + w;
                let mut expo = 0.0;
                for j in 1..=3usize {
                    let tj = if j == 1 { Complex64::new(0.15, 0.1) } else { Complex64::new(0.0, 0.0) };
                    expo += 2.0 * (tj * Complex64::from_polar(1.0, j as f64 * lab)).re;
                    let probe = 2.0 * (j as f64 * (lab - theta)).cos() / (2.0 * j as f64);
                    if j <= 2 {
                        expo -= 0.6 * probe;
                    }
                    expo -= -0.4 * probe;
                }
                let sing1 = (Complex64::from_polar(1.0, lab) - Complex64::from_polar(1.0, theta))
                    .norm()
                    .powf(1.0);
                let sing2 = (Complex64::from_polar(1.0, lab)
                    - Complex64::from_polar(1.0, theta_prime))
                .norm()
                .powf(0.5);
                let want = expo.exp() * sing1 * sing2;
                assert_relative_eq!(got, want, epsilon = 1e-10, max_relative = 1e-10);
            }
        }
    }

    #[test]
    fn merged_probes_build_one_singularity() {
        let p = SymbolParams {
            theta: 1.3,
            theta_prime: 1.3,
            alpha1: 0.5,
            alpha2: 0.0,
            k1: 2,
            k2: 0,
            t_coeffs: vec![],
            beta1: 0.6,
            beta2: 0.9,
        };
        let (sym, geo) = build_symbol(&p).unwrap();
        assert!(geo.merged);
        assert_eq!(sym.singularities.len(), 1);
        assert_relative_eq!(sym.singularities[0].exponent, 1.5, epsilon = 1e-14);
        assert_relative_eq!(sym.singularities[0].angle, 0.0, epsilon = 1e-14);
    }

    #[test]
    fn negative_exponents_are_rejected() {
        let p = SymbolParams {
            theta: 0.0,
            theta_prime: 1.0,
            alpha1: 0.0,
            alpha2: 0.0,
            k1: 0,
            k2: 0,
            t_coeffs: vec![],
            beta1: -0.5,
            beta2: 0.0,
        };
        assert!(build_symbol(&p).is_err());
    }

    #[test]
    fn szego_factorization_holds_on_the_circle() {
        let sym = Symbol::smooth(0.2, vec![Complex64::new(0.1, -0.3)])
            .with_singularities(&[
                Singularity { angle: 0.9, exponent: 0.8 },
                Singularity { angle: 5.1, exponent: 1.3 },
            ])
            .unwrap();
        for theta in [0.1f64, 1.7, 2.9, 4.2, 6.0] {
            let z = Complex64::from_polar(1.0, theta);
            let din = szego_function(&sym, z, Side::Inside).unwrap();
            let dout = szego_function(&sym, z, Side::Outside).unwrap();
            let product = din / dout;
            let f = sym.evaluate(theta);
            assert!(
                (product - f).norm() < 1e-10 * f.max(1.0),
                "factorization failed at θ = {theta}: 𝒟in/𝒟out = {product}, f = {f}"
            );
        }
    }

    #[test]
    fn szego_function_normalizations() {
        let sym = Symbol::smooth(0.35, vec![Complex64::new(0.1, 0.05)])
            .with_singularities(&[Singularity { angle: 2.2, exponent: 1.0 }])
            .unwrap();
        let at_zero = szego_function(&sym, Complex64::new(0.0, 0.0), Side::Inside).unwrap();
        assert_relative_eq!(at_zero.re, 0.35f64.exp(), epsilon = 1e-12);
        assert!(at_zero.im.abs() < 1e-12);
        let far = szego_function(&sym, Complex64::new(7.2e7, 3.0e7), Side::Outside).unwrap();
        assert!((far - Complex64::new(1.0, 0.0)).norm() < 1e-6);
    }

    #[test]
    fn szego_function_reports_branch_cuts() {
        let sym = Symbol::smooth(0.0, vec![])
            .with_singularities(&[Singularity { angle: 1.0, exponent: 0.7 }])
            .unwrap();
        // Outward ray from the singularity: inside formula's cut.
        let outward = Complex64::from_polar(1.5, 1.0);
        assert!(matches!(
            szego_function(&sym, outward, Side::Inside),
            Err(Error::BranchCut(_))
        ));
        // Inward segment: outside formula's cut.
        let inward = Complex64::from_polar(0.5, 1.0);
        assert!(matches!(
            szego_function(&sym, inward, Side::Outside),
            Err(Error::BranchCut(_))
        ));
        // The singular point itself.
        assert!(szego_function(&sym, Complex64::from_polar(1.0, 1.0), Side::Inside).is_err());
    }

    #[test]
    fn deformation_endpoints_are_exact() {
        let sym = Symbol::smooth(0.0, vec![Complex64::new(0.25, -0.15), Complex64::new(0.05, 0.0)])
            .with_singularities(&[Singularity { angle: 0.4, exponent: 1.1 }])
            .unwrap();
        let f0 = deform_symbol(&sym, 0.0).unwrap();
        assert!(f0.v0.abs() < 1e-12);
        assert!(f0.v.iter().all(|c| c.norm() < 1e-12));
        assert_eq!(f0.singularities.len(), 1);
        let f1 = deform_symbol(&sym, 1.0).unwrap();
        assert!(f1.v0.abs() < 1e-11, "t = 1 must recover V_0 = 0, got {}", f1.v0);
        for (j, &vj) in sym.v.iter().enumerate() {
            assert!(
                (f1.v[j] - vj).norm() < 1e-11,
                "t = 1 must recover V_{}, got {} want {vj}",
                j + 1,
                f1.v[j]
            );
        }
        assert!(deform_symbol(&sym, 1.5).is_err());
        assert!(deform_symbol(&sym, -0.1).is_err());
    }

    #[test]
    fn deformed_symbol_interpolates_pointwise() {
        let sym = Symbol::smooth(0.0, vec![Complex64::new(0.3, 0.2)])
            .with_singularities(&[Singularity { angle: 3.0, exponent: 0.9 }])
            .unwrap();
        let t = 0.4;
        let ft = deform_symbol(&sym, t).unwrap();
        for theta in [0.2f64, 1.5, 3.3, 5.9] {
            let want = (1.0 - t + t * sym.log_smooth_at(theta).exp())
                * sym.singular_part_at(theta);
            assert_relative_eq!(ft.evaluate(theta), want, epsilon = 1e-10, max_relative = 1e-10);
        }
    }

    #[test]
    fn deformation_rate_matches_difference_quotient() {
        let sym = Symbol::smooth(0.0, vec![Complex64::new(0.2, -0.1)])
            .with_singularities(&[Singularity { angle: 1.8, exponent: 0.7 }])
            .unwrap();
        let theta = 2.6;
        let h = 1e-6;
        let fplus = deform_symbol(&sym, 0.5 + h).unwrap().evaluate(theta);
        let fminus = deform_symbol(&sym, 0.5 - h).unwrap().evaluate(theta);
        let quotient = (fplus - fminus) / (2.0 * h);
        assert_relative_eq!(deformation_rate(&sym, theta), quotient, epsilon = 1e-6);
    }
}
