use std::f64::consts::PI;

use num_complex::Complex64;

use super::engine::{integrate_breakpoints, IntegralResult, QuadratureConfig};
use crate::error::{QidError, Result};
use crate::model::{k_constant, phase, ModelParams};

/// `g_m(x) = (1/π)∫₀¹ cos(tx)·ln(1 + (1-t)/δ) dt`.
pub fn evaluate_gm_integral(delta: f64, x: f64, cfg: &QuadratureConfig) -> Result<IntegralResult<f64>> {
    if !(delta > 0.0) {
        return Err(QidError::DomainError(format!("delta must be positive, got {delta}")));
    }
    let panels = ((x.abs() + 1.0) / PI).ceil().max(2.0) as usize;
    let breaks: Vec<f64> = (0..=panels).map(|i| i as f64 / panels as f64).collect();
    let r = integrate_breakpoints(|t| Complex64::new((t * x).cos() * ((1.0 - t) / delta).ln_1p(), 0.0), &breaks, cfg)?;
    Ok(IntegralResult {
        value: r.value.re / PI,
        error_estimate: r.error_estimate / PI,
        subdivisions_used: r.subdivisions_used,
        truncation_point: 1.0,
    })
}

/// Smallest `T ≥ 10` with `(1 + (T-1)^{4n})·e^{1-T} ≤ tail_mass`, to `1e-9`.
pub fn truncation_point(n: u32, tail_mass: f64) -> f64 {
    let g = |t: f64| (1.0 + (t - 1.0).powi(4 * n as i32)) * (1.0 - t).exp();
    if g(10.0) <= tail_mass {
        return 10.0;
    }
    // g decreases beyond its maximum at t - 1 ≈ 4n; bracket from there.
    let mut lo = 10.0f64.max(1.0 + 4.0 * n as f64);
    let mut hi = lo + 1.0;
    while g(hi) > tail_mass {
        lo = hi;
        hi *= 2.0;
    }
    while hi - lo > 1e-9 {
        let mid = 0.5 * (lo + hi);
        if g(mid) > tail_mass {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    hi
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KEvaluation {
    /// `(1/2)∫_{|t|>1}(|φ″| + φ′²)e^{1-|t|} dt`.
    pub value: f64,
    /// `∫_{t>1}` alone; equals `value` by evenness of the integrand.
    pub one_sided: f64,
    /// `(2n)! + (4n)!`.
    pub closed_form: f64,
    pub error_estimate: f64,
    pub truncation_point: f64,
}

pub fn evaluate_k(n: u32, cfg: &QuadratureConfig) -> Result<KEvaluation> {
    let closed_form = k_constant(n)?;
    let params = ModelParams::new(n, f64::MIN_POSITIVE)?;
    let t_max = truncation_point(n, cfg.truncation_tail_mass);
    let f = |t: f64| {
        let (_, d1, d2) = phase(&params, t);
        Complex64::new((d2.abs() + d1 * d1) * (1.0 - t.abs()).exp(), 0.0)
    };
    let steps = (t_max - 1.0).ceil() as usize;
    let right: Vec<f64> = (0..=steps).map(|i| (1.0 + i as f64).min(t_max)).collect::<Vec<_>>();
    let mut right = right;
    right.dedup();
    let left: Vec<f64> = right.iter().rev().map(|t| -t).collect();
    let r = integrate_breakpoints(f, &right, cfg)?;
    let l = integrate_breakpoints(f, &left, cfg)?;
    Ok(KEvaluation {
        value: 0.5 * (r.value.re + l.value.re),
        one_sided: r.value.re,
        closed_form,
        error_estimate: 0.5 * (r.error_estimate + l.error_estimate),
        truncation_point: t_max,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::{assert_abs_diff_eq, assert_relative_eq};

    #[test]
    fn gm_at_origin() {
        // antiderivative of ln(1 + u/δ) is (δ+u)ln(1+u/δ) - u
        let cfg = QuadratureConfig::default().with_abs_tol(1e-12);
        for &d in &[0.03f64, 0.2] {
            let exact = ((1.0 + d) * (1.0 + 1.0 / d).ln() - 1.0) / PI;
            let r = evaluate_gm_integral(d, 0.0, &cfg).unwrap();
            assert_abs_diff_eq!(r.value, exact, epsilon = 1e-12);
        }
    }

    #[test]
    fn gm_even_and_bounded() {
        let cfg = QuadratureConfig::default();
        let d = 0.03;
        for i in 0..50 {
            let x = i as f64 * 1.7;
            let a = evaluate_gm_integral(d, x, &cfg).unwrap().value;
            let b = evaluate_gm_integral(d, -x, &cfg).unwrap().value;
            assert_abs_diff_eq!(a, b, epsilon = 1e-14);
            assert!(a.abs() <= 1.0 / (2.0 * PI * d));
        }
        assert!(evaluate_gm_integral(0.0, 1.0, &cfg).is_err());
    }

    #[test]
    fn truncation_rule() {
        let t = truncation_point(1, 1e-9);
        let g = |t: f64| (1.0 + (t - 1.0).powi(4)) * (1.0 - t).exp();
        assert!(g(t) <= 1e-9);
        assert!(g(t - 1e-6) > 1e-9);
        assert_eq!(truncation_point(1, 1.0), 10.0);
    }

    #[test]
    fn k_matches_factorials() {
        let cfg = QuadratureConfig::default();
        for (n, k) in [(1, 26.0), (2, 40344.0), (3, 720.0 + 479_001_600.0)] {
            let r = evaluate_k(n, &cfg).unwrap();
            assert_relative_eq!(r.value, k, max_relative = 1e-9);
            assert_relative_eq!(r.one_sided, r.value, max_relative = 1e-12);
        }
        assert!(evaluate_k(5, &cfg).is_err());
    }
}
