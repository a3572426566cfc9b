//! `g_m`, its remainder `ε`, and the spectral densities built from them.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{QidError, Result};
use crate::model::ModelParams;
use crate::quadrature::{evaluate_gm_integral, integrate_breakpoints, QuadratureConfig};
use crate::special::ci_si_shifted;

/// Below this `|x|` the closed form loses accuracy (it divides by `x²`).
pub const X_SWITCH: f64 = 0.5;

/// `ε(x) = ∫₀¹ cos(tx)/(δ+1-t)² dt` by adaptive quadrature.
pub fn epsilon_remainder(delta: f64, x: f64, cfg: &QuadratureConfig) -> Result<f64> {
    check_delta(delta)?;
    let mut breaks: Vec<f64> = {
        let panels = ((x.abs() + 1.0) / PI).ceil() as usize;
        (0..=panels).map(|i| i as f64 / panels as f64).collect()
    };
    // Resolve the peak of width δ at t = 1.
    for k in 0..8 {
        let b = 1.0 - delta * 2f64.powi(k);
        if b > 0.0 {
            breaks.push(b);
        }
    }
    breaks.sort_by(f64::total_cmp);
    breaks.dedup_by(|a, b| (*a - *b).abs() < 1e-14);
    let r = integrate_breakpoints(|t| Complex64::new((t * x).cos() / (delta + 1.0 - t).powi(2), 0.0), &breaks, cfg)?;
    Ok(r.value.re)
}

/// `ε(x)` in closed form through sine and cosine integrals.
///
/// Substituting `u = δ+1-t` gives `ε = cos(bX)·A + sin(bX)·B` with `a = δ`,
/// `b = 1+δ`, `A = ∫_a^b cos(uX)/u² du`, `B = ∫_a^b sin(uX)/u² du`.
pub fn epsilon_exact(delta: f64, x: f64) -> f64 {
    let a = delta;
    let b = 1.0 + delta;
    let big_x = x.abs();
    if big_x == 0.0 {
        return 1.0 / a - 1.0 / b;
    }
    let prim = |u: f64| {
        let (ci, si_shift) = ci_si_shifted(u * big_x);
        let (s, c) = (u * big_x).sin_cos();
        (-c / u - big_x * si_shift, -s / u + big_x * ci)
    };
    let (pa, qa) = prim(a);
    let (pb, qb) = prim(b);
    let (s, c) = (b * big_x).sin_cos();
    c * (pb - pa) + s * (qb - qa)
}

/// `g_m(x) = (δ/(1+δ) - cos x + δε(x)) / (πδx²)` for `|x| ≥ 1/2`.
pub fn gm_closed(delta: f64, x: f64) -> Result<f64> {
    check_delta(delta)?;
    if x.abs() < X_SWITCH {
        return Err(QidError::DomainError(format!("closed form of g_m needs |x| >= {X_SWITCH}, got {x}")));
    }
    Ok(gm_numerator(delta, x) / (PI * delta * x * x))
}

/// `δ/(1+δ) - cos x + δε(x)`, which equals `πδx²g_m(x)`.
fn gm_numerator(delta: f64, x: f64) -> f64 {
    delta / (1.0 + delta) - x.cos() + delta * epsilon_exact(delta, x)
}

/// `g_m(x)` by whichever form is well conditioned at `x`.
pub fn gm(delta: f64, x: f64, cfg: &QuadratureConfig) -> Result<f64> {
    if x.abs() < X_SWITCH {
        Ok(evaluate_gm_integral(delta, x, cfg)?.value)
    } else {
        gm_closed(delta, x)
    }
}

/// `πu²g_m(u) + 1`, the signed factor of the `G_{1,a}` density.
pub fn signed_factor(delta: f64, u: f64, cfg: &QuadratureConfig) -> Result<f64> {
    if u.abs() < X_SWITCH {
        Ok(PI * u * u * evaluate_gm_integral(delta, u, cfg)?.value + 1.0)
    } else {
        Ok(gm_numerator(delta, u) / delta + 1.0)
    }
}

/// Density of `G_C`: `1/(π(1+u²))`.
pub fn spectral_density_gc(u: f64) -> f64 {
    1.0 / (PI * (1.0 + u * u))
}

/// Density of `G_m`: `u²g_m(u)/(1+u²)`.
pub fn spectral_density_gm(params: &ModelParams, u: f64, cfg: &QuadratureConfig) -> Result<f64> {
    let d = params.delta();
    if u.abs() < X_SWITCH {
        Ok(u * u * gm(d, u, cfg)? / (1.0 + u * u))
    } else {
        Ok(gm_numerator(d, u) / (PI * d * (1.0 + u * u)))
    }
}

/// Density of `G_{1,a} = G_m + G_C`: `(πu²g_m(u) + 1)/(π(1+u²))`.
pub fn spectral_density_g1a(params: &ModelParams, u: f64, cfg: &QuadratureConfig) -> Result<f64> {
    Ok(signed_factor(params.delta(), u, cfg)? / (PI * (1.0 + u * u)))
}

/// Hahn–Jordan parts `(g₊, g₋)` of `πu²g_m(u) + 1`.
pub fn hahn_jordan(params: &ModelParams, u: f64, cfg: &QuadratureConfig) -> Result<(f64, f64)> {
    let s = signed_factor(params.delta(), u, cfg)?;
    Ok((s.max(0.0), (-s).max(0.0)))
}

fn check_delta(delta: f64) -> Result<()> {
    if delta > 0.0 && delta.is_finite() {
        Ok(())
    } else {
        Err(QidError::DomainError(format!("delta must be positive, got {delta}")))
    }
}

/// Mean and Fourier coefficients of the periodic pieces that describe the
/// negative part of `πu²g_m(u) + 1` for large `u`.
///
/// With `c = δ(1 + 1/(1+δ))` and `β = arccos c`:
/// `max(0, cos x - c)/δ = Σ a_k cos(kx)` and `sin x·1{cos x > c} = Σ b_k sin(kx)`.
#[derive(Debug, Clone, PartialEq)]
pub struct NegativePartSeries {
    pub threshold: f64,
    pub beta: f64,
    pub cos_coeffs: Vec<f64>,
    pub sin_coeffs: Vec<f64>,
}

impl NegativePartSeries {
    pub fn new(delta: f64, modes: usize) -> Self {
        let c = delta * (1.0 + 1.0 / (1.0 + delta));
        let beta = c.clamp(-1.0, 1.0).acos();
        let mut cos_coeffs = vec![(beta.sin() - c * beta) / (PI * delta)];
        let mut sin_coeffs = vec![0.0];
        for k in 1..=modes {
            let kf = k as f64;
            let (int_cc, int_ss) = if k == 1 {
                (0.5 * (beta + (2.0 * beta).sin() / 2.0), 0.5 * (beta - (2.0 * beta).sin() / 2.0))
            } else {
                let m = ((kf - 1.0) * beta).sin() / (kf - 1.0);
                let p = ((kf + 1.0) * beta).sin() / (kf + 1.0);
                (0.5 * (m + p), 0.5 * (m - p))
            };
            cos_coeffs.push(2.0 / (PI * delta) * (int_cc - c * (kf * beta).sin() / kf));
            sin_coeffs.push(2.0 / PI * int_ss);
        }
        NegativePartSeries { threshold: c, beta, cos_coeffs, sin_coeffs }
    }

    pub fn modes(&self) -> usize {
        self.cos_coeffs.len() - 1
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn cfg() -> QuadratureConfig {
        QuadratureConfig::default().with_abs_tol(1e-12)
    }

    #[test]
    fn epsilon_forms_agree() {
        for &d in &[0.03, 0.0174, 1e-3] {
            for &x in &[0.0, 0.5, 1.0, 5.0, 37.0, 250.0, 1e3] {
                let q = epsilon_remainder(d, x, &cfg()).unwrap();
                let e = epsilon_exact(d, x);
                assert_abs_diff_eq!(q, e, epsilon = 1e-9 * (1.0 / d));
            }
        }
    }

    #[test]
    fn epsilon_bounds_and_decay() {
        let d = 0.03;
        let bound = 1.0 / d - 1.0 / (1.0 + d);
        assert_abs_diff_eq!(epsilon_remainder(d, 0.0, &cfg()).unwrap(), bound, epsilon = 1e-10);
        for i in 0..200 {
            let x = i as f64 * 0.731;
            assert!(epsilon_exact(d, x).abs() <= bound + 1e-12);
        }
        assert!(epsilon_remainder(d, 1e3, &cfg()).unwrap().abs() < 0.1 / d);
    }

    #[test]
    fn closed_form_matches_integral() {
        let d = 0.03;
        for i in 0..=40 {
            let x = 0.5 + i as f64 * 2.4;
            let a = gm_closed(d, x).unwrap();
            let b = evaluate_gm_integral(d, x, &cfg()).unwrap().value;
            assert_abs_diff_eq!(a, b, epsilon = 1e-10);
            assert_abs_diff_eq!(gm_closed(d, -x).unwrap(), a, epsilon = 0.0);
        }
        assert!(gm_closed(d, 0.3).is_err());
    }

    #[test]
    fn witness_sign_at_multiples_of_two_pi() {
        let d = 0.03;
        let x = 2.0 * PI * 10.0;
        let num = gm_closed(d, x).unwrap() * PI * d * x * x;
        assert!(num < 0.0);
        let p = ModelParams::new(1, d).unwrap();
        assert!(spectral_density_g1a(&p, x, &cfg()).unwrap() < 0.0);
    }

    #[test]
    fn densities() {
        let p = ModelParams::new(1, 0.03).unwrap();
        assert_abs_diff_eq!(spectral_density_gc(0.0), 1.0 / PI, epsilon = 0.0);
        assert_abs_diff_eq!(spectral_density_gc(1.0), 0.5 / PI, epsilon = 0.0);
        assert_abs_diff_eq!(spectral_density_gm(&p, 0.0, &cfg()).unwrap(), 0.0, epsilon = 0.0);
        let g1 = evaluate_gm_integral(0.03, 1.0, &cfg()).unwrap().value;
        assert_abs_diff_eq!(spectral_density_gm(&p, 1.0, &cfg()).unwrap(), g1 / 2.0, epsilon = 1e-12);
        assert_abs_diff_eq!(spectral_density_g1a(&p, 0.0, &cfg()).unwrap(), 1.0 / PI, epsilon = 1e-15);
        for i in -50..50 {
            let u = i as f64 * 0.77;
            let sum = spectral_density_gm(&p, u, &cfg()).unwrap() + spectral_density_gc(u);
            assert_abs_diff_eq!(spectral_density_g1a(&p, u, &cfg()).unwrap(), sum, epsilon = 1e-12);
        }
    }

    #[test]
    fn hahn_jordan_parts() {
        let p = ModelParams::new(1, 0.03).unwrap();
        assert_eq!(hahn_jordan(&p, 0.0, &cfg()).unwrap(), (1.0, 0.0));
        let (gp, gn) = hahn_jordan(&p, 20.0 * PI, &cfg()).unwrap();
        assert_eq!(gp, 0.0);
        assert!(gn > 0.0);
        for i in 0..300 {
            let u = i as f64 * 0.37;
            let (gp, gn) = hahn_jordan(&p, u, &cfg()).unwrap();
            assert!(gp >= 0.0 && gn >= 0.0 && gp * gn == 0.0);
            assert_abs_diff_eq!(gp - gn, signed_factor(0.03, u, &cfg()).unwrap(), epsilon = 1e-12);
        }
    }

    #[test]
    fn g1a_not_monotone_near_twenty_pi() {
        let p = ModelParams::new(1, 0.03).unwrap();
        let r =
            crate::spectral::monotonicity_scan(|u| spectral_density_g1a(&p, u, &cfg()), (55.0, 70.0), 0.05).unwrap();
        assert!(r.negative_intervals().any(|i| i.start < 20.0 * PI && i.end > 20.0 * PI));
    }

    #[test]
    fn negative_part_series_reconstructs() {
        let d = 0.03;
        let s = NegativePartSeries::new(d, 4000);
        for i in 0..20 {
            let x = -3.0 + i as f64 * 0.31;
            let p: f64 = s.cos_coeffs.iter().enumerate().map(|(k, a)| a * (k as f64 * x).cos()).sum();
            assert_abs_diff_eq!(p, (x.cos() - s.threshold).max(0.0) / d, epsilon = 1e-2);
            let q: f64 = s.sin_coeffs.iter().enumerate().map(|(k, b)| b * (k as f64 * x).sin()).sum();
            let inside = if x.cos() > s.threshold { x.sin() } else { 0.0 };
            if (x.abs() - s.beta).abs() > 0.05 {
                assert_abs_diff_eq!(q, inside, epsilon = 2e-2);
            }
        }
    }
}
