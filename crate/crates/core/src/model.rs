//! Closed-form pieces of the construction.
//!
//! Everything here is an explicit formula: the triangular characteristic
//! function, its Cauchy-damped product `Λ`, the odd phase `φ` and its first two
//! derivatives, the function `χ = exp(-|t| + iφ(t))`, the density `q` with
//! `Λ = ∫ e^{itx} q(x) dx`, and the principal characteristic function `f₁` with
//! its distinguished logarithm. All functions are pure.

use std::f64::consts::{E, PI};

use num_complex::Complex64;

use crate::error::{QidError, Result};

/// Largest supported phase degree parameter; `(4n)! = 16!` is still exact in f64.
pub const MAX_N: u32 = 4;

/// `k!` by exact integer accumulation. Panics for `k > 20`.
pub fn factorial(k: u32) -> u64 {
    assert!(k <= 20, "factorial overflow");
    (1..=k as u64).product()
}

/// `(2n)! + (4n)!`, the value of the constant `K`.
pub fn k_constant(n: u32) -> Result<f64> {
    check_n(n)?;
    Ok((factorial(2 * n) + factorial(4 * n)) as f64)
}

fn check_n(n: u32) -> Result<()> {
    if (1..=MAX_N).contains(&n) {
        Ok(())
    } else {
        Err(QidError::UnsupportedN(n))
    }
}

/// Largest admissible mixing weight, `1 / (e + (2n)! + (4n)!)`.
pub fn max_delta(n: u32) -> Result<f64> {
    Ok(1.0 / (E + k_constant(n)?))
}

/// The pair `(n, δ)` that fixes the whole construction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelParams {
    n: u32,
    delta: f64,
}

impl ModelParams {
    pub fn new(n: u32, delta: f64) -> Result<Self> {
        let max = max_delta(n)?;
        // δ·(e + K) ≤ 1 is checked in the multiplied form to avoid a spurious
        // rejection of δ = max_delta(n) by rounding in the reciprocal.
        if !(delta > 0.0) || !delta.is_finite() || delta * (E + k_constant(n)?) > 1.0 {
            return Err(QidError::InadmissibleDelta { n, delta, max });
        }
        Ok(Self { n, delta })
    }

    /// `δ = max_delta(n) / 2`.
    pub fn with_default_delta(n: u32) -> Result<Self> {
        Self::new(n, max_delta(n)? / 2.0)
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    /// `e + (2n)! + (4n)!`.
    pub fn h_bound_numerator(&self) -> f64 {
        E + (factorial(2 * self.n) + factorial(4 * self.n)) as f64
    }

    pub fn envelope(&self) -> EnvelopeConstants {
        EnvelopeConstants::new(self)
    }
}

/// Coefficients of the explicit `1/(π(1+x²))`-shaped envelopes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnvelopeConstants {
    /// `q(x) ≤ q_upper / (π(1+x²))`.
    pub q_upper: f64,
    /// `|h(x)| ≤ h_upper / (π(1+x²))`.
    pub h_upper: f64,
    /// `p₁(x) ≤ p1_envelope / (π(1+x²))`.
    pub p1_envelope: f64,
    /// `p₁(x) ≥ p1_lower / (π(1+x²))`.
    pub p1_lower: f64,
}

impl EnvelopeConstants {
    fn new(p: &ModelParams) -> Self {
        let q_upper = (2.0 * E + 2.0) / E;
        let h_upper = p.h_bound_numerator() / E;
        let d = p.delta;
        Self {
            q_upper,
            h_upper,
            p1_envelope: (q_upper + d * h_upper) / (1.0 + d),
            p1_lower: (1.0 - d * p.h_bound_numerator()) / (E * (1.0 + d)),
        }
    }
}

/// Triangular characteristic function `max(0, 1 - |t|)`.
pub fn triangle(t: f64) -> f64 {
    (1.0 - t.abs()).max(0.0)
}

/// `Λ(t) = triangle(t)·e^{-|t|}`.
pub fn lambda_cf(t: f64) -> f64 {
    triangle(t) * (-t.abs()).exp()
}

/// Phase value and first two derivatives `(φ, φ′, φ″)` at `t`.
pub fn phase(params: &ModelParams, t: f64) -> (f64, f64, f64) {
    if t.abs() <= 1.0 {
        return (0.0, 0.0, 0.0);
    }
    let n = params.n as i32;
    let s = t - t.signum();
    let m = 2 * n + 1;
    (s.powi(m) / m as f64, s.powi(2 * n), 2.0 * n as f64 * s.powi(2 * n - 1))
}

/// `φ(t)` only.
pub fn phi(params: &ModelParams, t: f64) -> f64 {
    phase(params, t).0
}

/// `φ′(t)`.
pub fn phi_rate(params: &ModelParams, t: f64) -> f64 {
    phase(params, t).1
}

/// `χ(t) = exp(-|t| + iφ(t))`.
pub fn chi(params: &ModelParams, t: f64) -> Complex64 {
    Complex64::from_polar((-t.abs()).exp(), phi(params, t))
}

/// Real form `ℓ(x) = (e-1)(1-x²) + (1-cos x)(1-x²) + 2x sin x`.
pub fn ell(x: f64) -> f64 {
    let one_minus_sq = 1.0 - x * x;
    (E - 1.0) * one_minus_sq + (1.0 - x.cos()) * one_minus_sq + 2.0 * x * x.sin()
}

/// Density of `Λ`: `q(x) = (e - ℓ(x)/(1+x²)) / (eπ(1+x²))`.
pub fn q_density(x: f64) -> f64 {
    let w = 1.0 + x * x;
    (E - ell(x) / w) / (E * PI * w)
}

/// `q(x)·eπ(1+x²)`, which lies in `[1, 2e+2]`.
pub fn q_scaled(x: f64) -> f64 {
    E - ell(x) / (1.0 + x * x)
}

/// `p₁(x) = (q(x) + δ·h(x)) / (1+δ)` given a value of `h(x)`.
///
/// Values down to `-1e-10` are tolerated (and returned unclamped); anything
/// lower means the supplied `h` is wrong.
pub fn p1_density(params: &ModelParams, x: f64, h_value: f64) -> Result<f64> {
    let v = (q_density(x) + params.delta * h_value) / (1.0 + params.delta);
    if v < -1e-10 {
        return Err(QidError::NegativeDensity { x, value: v });
    }
    Ok(v)
}

/// Principal characteristic function `f₁(t) = (Λ(t) + δχ(t)) / (1+δ)`.
pub fn f1_cf(params: &ModelParams, t: f64) -> Complex64 {
    let d = params.delta;
    if t.abs() <= 1.0 {
        Complex64::new((triangle(t) + d) * (-t.abs()).exp() / (1.0 + d), 0.0)
    } else {
        Complex64::from_polar(d / (1.0 + d) * (-t.abs()).exp(), phi(params, t))
    }
}

/// `|f₁(t)| = (triangle(t) + δ)e^{-|t|} / (1+δ)`.
pub fn abs_f1(params: &ModelParams, t: f64) -> f64 {
    let d = params.delta;
    (triangle(t) + d) / (1.0 + d) * (-t.abs()).exp()
}

/// Distinguished logarithm `ln((triangle(t)+δ)/(1+δ)) - |t| + iφ(t)`.
pub fn ln_f1_closed(params: &ModelParams, t: f64) -> Complex64 {
    let d = params.delta;
    Complex64::new(((triangle(t) + d) / (1.0 + d)).ln() - t.abs(), phi(params, t))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn p1() -> ModelParams {
        ModelParams::new(1, 0.03).unwrap()
    }

    #[test]
    fn triangle_and_lambda() {
        assert_eq!(triangle(0.0), 1.0);
        assert_eq!(triangle(0.5), 0.5);
        assert_eq!(triangle(2.0), 0.0);
        assert_eq!(lambda_cf(0.0), 1.0);
        assert_eq!(lambda_cf(1.0), 0.0);
        assert_abs_diff_eq!(lambda_cf(0.5), 0.5 * (-0.5f64).exp(), epsilon = 1e-16);
    }

    #[test]
    fn phase_examples() {
        assert_eq!(phase(&p1(), 0.7), (0.0, 0.0, 0.0));
        let (a, b, c) = phase(&p1(), 2.0);
        assert_abs_diff_eq!(a, 1.0 / 3.0, epsilon = 1e-15);
        assert_eq!((b, c), (1.0, 2.0));
        let p2 = ModelParams::with_default_delta(2).unwrap();
        let (a, b, c) = phase(&p2, -2.0);
        assert_abs_diff_eq!(a, -0.2, epsilon = 1e-15);
        assert_eq!((b, c), (1.0, -4.0));
    }

    #[test]
    fn phase_is_continuous_at_kinks() {
        for n in 1..=4 {
            let p = ModelParams::with_default_delta(n).unwrap();
            for &k in &[-1.0f64, 1.0] {
                let l = phase(&p, k - 1e-13 * k.signum());
                let r = phase(&p, k + 1e-13 * k.signum());
                assert!((l.0 - r.0).abs() < 1e-12);
                assert!((l.1 - r.1).abs() < 1e-12);
                assert!((l.2 - r.2).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn chi_examples() {
        assert_eq!(chi(&p1(), 0.0), Complex64::new(1.0, 0.0));
        let c1 = chi(&p1(), 1.0);
        assert_abs_diff_eq!(c1.re, (-1.0f64).exp(), epsilon = 1e-16);
        assert_eq!(c1.im, 0.0);
        let c2 = chi(&p1(), 2.0);
        let want = Complex64::from_polar((-2.0f64).exp(), 1.0 / 3.0);
        assert!((c2 - want).norm() < 1e-16);
    }

    #[test]
    fn ell_examples() {
        assert_abs_diff_eq!(ell(0.0), E - 1.0, epsilon = 1e-15);
        // cos π = -1, sin π = 0 (up to rounding of π): (e-1+2)(1-π²)
        let want = (E + 1.0) * (1.0 - PI * PI);
        assert_abs_diff_eq!(ell(PI), want, epsilon = 1e-13);
        assert_eq!(ell(PI), ell(-PI));
    }

    #[test]
    fn q_at_origin_is_the_lower_bound() {
        assert_abs_diff_eq!(q_density(0.0), 1.0 / (E * PI), epsilon = 1e-16);
        assert_abs_diff_eq!(q_density(0.0), 0.117_099_663_048_638_3, epsilon = 1e-15);
        assert_abs_diff_eq!(q_scaled(0.0), 1.0, epsilon = 1e-15);
    }

    #[test]
    fn max_delta_values() {
        assert_abs_diff_eq!(max_delta(1).unwrap(), 1.0 / (E + 26.0), epsilon = 1e-18);
        assert_abs_diff_eq!(max_delta(2).unwrap(), 1.0 / (E + 40344.0), epsilon = 1e-20);
        assert_eq!(max_delta(5), Err(QidError::UnsupportedN(5)));
        assert_eq!(max_delta(0), Err(QidError::UnsupportedN(0)));
        assert_eq!(k_constant(3).unwrap(), 720.0 + 479_001_600.0);
        assert_eq!(k_constant(4).unwrap(), (40_320u64 + 20_922_789_888_000) as f64);
    }

    #[test]
    fn params_validation() {
        assert!(ModelParams::new(1, 0.9).is_err());
        assert!(ModelParams::new(1, 0.0).is_err());
        assert!(ModelParams::new(1, f64::NAN).is_err());
        assert!(ModelParams::new(1, max_delta(1).unwrap()).is_ok());
        let p = ModelParams::with_default_delta(1).unwrap();
        assert_abs_diff_eq!(p.delta(), 0.5 / (E + 26.0), epsilon = 1e-18);
    }

    #[test]
    fn envelope_constants() {
        let env = p1().envelope();
        assert_eq!(env.q_upper, (2.0 * E + 2.0) / E);
        assert_abs_diff_eq!(env.h_upper, (E + 26.0) / E, epsilon = 1e-15);
        assert_abs_diff_eq!(env.p1_envelope, (env.q_upper + 0.03 * env.h_upper) / 1.03, epsilon = 1e-15);
        assert!(env.p1_lower > 0.0);
    }

    #[test]
    fn p1_linear_in_h() {
        let p = p1();
        assert_abs_diff_eq!(p1_density(&p, 0.3, 0.0).unwrap(), q_density(0.3) / 1.03, epsilon = 1e-16);
        assert!(matches!(p1_density(&p, 0.0, -100.0), Err(QidError::NegativeDensity { .. })));
    }

    #[test]
    fn f1_examples() {
        let p = p1();
        assert_eq!(f1_cf(&p, 0.0), Complex64::new(1.0, 0.0));
        let v = f1_cf(&p, 1.0);
        assert_abs_diff_eq!(v.re, 0.03 / 1.03 * (-1.0f64).exp(), epsilon = 1e-17);
        assert_eq!(v.im, 0.0);
        let v = f1_cf(&p, 2.0);
        let want = Complex64::from_polar(0.03 / 1.03 * (-2.0f64).exp(), 1.0 / 3.0);
        assert!((v - want).norm() < 1e-17);
    }

    #[test]
    fn ln_f1_examples() {
        let p = p1();
        assert_eq!(ln_f1_closed(&p, 0.0), Complex64::new(0.0, 0.0));
        let v = ln_f1_closed(&p, 2.0);
        assert_abs_diff_eq!(v.re, (0.03f64 / 1.03).ln() - 2.0, epsilon = 1e-14);
        assert_abs_diff_eq!(v.im, 1.0 / 3.0, epsilon = 1e-15);
        for &t in &[-3.0, -1.0, 0.5, 1.0, 3.0] {
            let back = ln_f1_closed(&p, t).exp();
            assert!((back - f1_cf(&p, t)).norm() < 1e-14);
        }
    }
}
