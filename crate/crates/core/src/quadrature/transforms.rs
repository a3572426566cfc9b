use std::f64::consts::{E, PI};

use num_complex::Complex64;

use super::engine::{integrate_breakpoints, QuadratureConfig};
use super::h_kernel::HRemainder;
use super::panels::SampledPanels;
use crate::error::Result;
use crate::model::ModelParams;
use crate::par::Exec;

/// `(1/2π)∫ e^{-itx} cf(t) dt` for `|cf(t)| ≤ e^{-|t|}`.
///
/// Truncated at `T` with `e^{-T}/π ≤ truncation_tail_mass`; panels break at
/// every integer and have width at most `π/(|x|+1)`.
pub fn fourier_inverse_cf<F: Fn(f64) -> Complex64>(cf: F, x: f64, cfg: &QuadratureConfig) -> Result<Complex64> {
    fourier_inverse_cf_with_rate(cf, |_| 0.0, x, cfg)
}

/// As [`fourier_inverse_cf`], with panel widths also shrunk by the phase
/// rate of `cf`: width ≤ `π/(|x| + rate(t) + 1)`.
pub fn fourier_inverse_cf_with_rate<F: Fn(f64) -> Complex64, R: Fn(f64) -> f64>(
    cf: F,
    rate: R,
    x: f64,
    cfg: &QuadratureConfig,
) -> Result<Complex64> {
    let t_max = (1.0 / (PI * cfg.truncation_tail_mass)).ln().ceil().max(1.0);
    let mut breaks = vec![0.0];
    let mut t: f64 = 0.0;
    while t < t_max {
        let next = (t + PI / (x.abs() + rate(t + 1.0) + 1.0)).min(t.floor() + 1.0);
        t = if t_max - next < 1e-12 { t_max } else { next };
        breaks.push(t);
    }
    let mut all: Vec<f64> = breaks.iter().rev().map(|t| -t).collect();
    all.extend_from_slice(&breaks[1..]);
    let c = QuadratureConfig { abs_tol: cfg.abs_tol * 2.0 * PI, ..*cfg };
    let r = integrate_breakpoints(|t| Complex64::new(0.0, -t * x).exp() * cf(t), &all, &c)?;
    Ok(r.value / (2.0 * PI))
}

/// A kernel with closed-form Fourier transform, scaled by `amplitude`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CosineKernelTail {
    /// `cos(ωx)/(1+x²)`
    Cos1 { amplitude: f64, omega: f64 },
    /// `cos(ωx)/(1+x²)²`
    Cos2 { amplitude: f64, omega: f64 },
    /// `x·sin(ωx)/(1+x²)²`
    XSin2 { amplitude: f64, omega: f64 },
}

impl CosineKernelTail {
    pub fn eval(&self, x: f64) -> f64 {
        let w = 1.0 + x * x;
        match *self {
            Self::Cos1 { amplitude, omega } => amplitude * (omega * x).cos() / w,
            Self::Cos2 { amplitude, omega } => amplitude * (omega * x).cos() / (w * w),
            Self::XSin2 { amplitude, omega } => amplitude * x * (omega * x).sin() / (w * w),
        }
    }

    /// `∫ e^{itx}·kernel(x) dx`; real since every kernel is even.
    pub fn transform(&self, t: f64) -> f64 {
        let e = |s: f64| (-s.abs()).exp();
        match *self {
            Self::Cos1 { amplitude, omega } => amplitude * 0.5 * PI * (e(t - omega) + e(t + omega)),
            Self::Cos2 { amplitude, omega } => {
                let g = |s: f64| (1.0 + s.abs()) * e(s);
                amplitude * 0.25 * PI * (g(t - omega) + g(t + omega))
            }
            Self::XSin2 { amplitude, omega } => {
                let g = |s: f64| s * e(s);
                amplitude * 0.25 * PI * (g(t + omega) - g(t - omega))
            }
        }
    }
}

/// Sum of kernels approximating a density, with an optional bound on the
/// residual: `|density(x) - model(x)| ≤ scale·R̄(x)` where `R̄` is the
/// remainder bound of `h`.
#[derive(Debug, Clone, PartialEq)]
pub struct TailModel {
    pub terms: Vec<CosineKernelTail>,
    pub residual: Option<(f64, HRemainder)>,
}

impl TailModel {
    /// Exact expansion of the density of `Λ`.
    pub fn q_density() -> Self {
        let c = 1.0 / (E * PI);
        TailModel {
            terms: vec![
                CosineKernelTail::Cos1 { amplitude: 2.0 * E * c, omega: 0.0 },
                CosineKernelTail::Cos1 { amplitude: -c, omega: 1.0 },
                CosineKernelTail::Cos2 { amplitude: -2.0 * E * c, omega: 0.0 },
                CosineKernelTail::Cos2 { amplitude: 2.0 * c, omega: 1.0 },
                CosineKernelTail::XSin2 { amplitude: -2.0 * c, omega: 1.0 },
            ],
            residual: None,
        }
    }

    /// `p₁`: the `q` expansion plus the leading Cauchy term of `h`.
    pub fn p1_density(params: &ModelParams) -> Self {
        let d = params.delta();
        let mut terms: Vec<CosineKernelTail> =
            Self::q_density().terms.into_iter().map(|t| t.scaled(1.0 / (1.0 + d))).collect();
        terms.push(CosineKernelTail::Cos1 { amplitude: d / (PI * (1.0 + d)), omega: 0.0 });
        TailModel { terms, residual: Some((d / (1.0 + d), HRemainder::new(params))) }
    }

    /// Bound on `∫_{|x|>X} |density - model|`.
    pub fn residual_mass(&self, big_x: f64) -> f64 {
        match &self.residual {
            None => 0.0,
            Some((scale, r)) => scale * r.tail_mass(big_x),
        }
    }

    /// Smallest `X ≥ 1` (to within 1%) with residual mass beyond `±X` at most `tol`.
    pub fn truncation(&self, tol: f64) -> f64 {
        if self.residual_mass(1.0) <= tol {
            return 1.0;
        }
        let mut hi = 2.0;
        while self.residual_mass(hi) > tol {
            hi *= 2.0;
        }
        let mut lo = hi / 2.0;
        while hi - lo > 0.01 * lo {
            let mid = 0.5 * (lo + hi);
            if self.residual_mass(mid) > tol {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        hi
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.terms.iter().map(|k| k.eval(x)).sum()
    }

    pub fn transform(&self, t: f64) -> f64 {
        self.terms.iter().map(|k| k.transform(t)).sum()
    }

    pub fn max_omega(&self) -> f64 {
        self.terms.iter().map(|k| k.omega()).fold(0.0, f64::max)
    }
}
impl CosineKernelTail {
    fn omega(&self) -> f64 {
        match *self {
            Self::Cos1 { omega, .. } | Self::Cos2 { omega, .. } | Self::XSin2 { omega, .. } => omega,
        }
    }

    fn scaled(self, c: f64) -> Self {
        match self {
            Self::Cos1 { amplitude, omega } => Self::Cos1 { amplitude: amplitude * c, omega },
            Self::Cos2 { amplitude, omega } => Self::Cos2 { amplitude: amplitude * c, omega },
            Self::XSin2 { amplitude, omega } => Self::XSin2 { amplitude: amplitude * c, omega },
        }
    }
}

/// Reusable forward transform `t ↦ ∫ e^{itx} p(x) dx` for `|t| ≤ t_max`.
///
/// The residual `p - model` is sampled once on fixed panels over `[-X, X]`;
/// the model contributes its exact transform.
#[derive(Debug, Clone)]
pub struct ForwardPlan {
    tail: TailModel,
    panels: SampledPanels,
    truncation: f64,
    truncation_error: f64,
}

impl ForwardPlan {
    pub fn new<F: Fn(f64) -> f64 + Sync + Send>(
        density: F,
        tail: TailModel,
        t_max: f64,
        cfg: &QuadratureConfig,
        exec: Exec,
    ) -> Self {
        let x_max = tail.truncation(cfg.truncation_tail_mass).max(20.0);
        let truncation_error = tail.residual_mass(x_max);
        let width = (PI / (t_max.abs() + tail.max_omega() + 1.0)).min(0.5);
        let mut breaks = SampledPanels::graded_breaks(0.0, x_max, |_| width);
        let right = breaks.clone();
        breaks = right.iter().rev().map(|x| -x).collect();
        breaks.extend_from_slice(&right[1..]);
        let tail_ref = &tail;
        let panels = SampledPanels::sample(&breaks, exec, |x| density(x) - tail_ref.eval(x));
        ForwardPlan { tail, panels, truncation: x_max, truncation_error }
    }

    /// Transform value and its error bound (quadrature estimate plus truncation).
    pub fn eval(&self, t: f64) -> (Complex64, f64) {
        let (v, err) = self.panels.integrate(|x, r| Complex64::new(0.0, t * x).exp() * r);
        (v + self.tail.transform(t), err + self.truncation_error)
    }

    pub fn truncation(&self) -> f64 {
        self.truncation
    }

    pub fn panels(&self) -> &SampledPanels {
        &self.panels
    }
}

/// Single-point forward transform; builds a plan for `t` only.
pub fn fourier_forward_density<F: Fn(f64) -> f64 + Sync + Send>(
    density: F,
    tail: TailModel,
    t: f64,
    cfg: &QuadratureConfig,
) -> Complex64 {
    ForwardPlan::new(density, tail, t, cfg, Exec::available()).eval(t).0
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{lambda_cf, q_density};
    use approx::assert_abs_diff_eq;

    #[test]
    fn inverse_of_lambda_is_q() {
        let cfg = QuadratureConfig::default();
        for &x in &[0.0, 0.7, 3.0, -12.5, 40.0] {
            let v = fourier_inverse_cf(|t| Complex64::new(lambda_cf(t), 0.0), x, &cfg).unwrap();
            assert_abs_diff_eq!(v.re, q_density(x), epsilon = 1e-10);
            assert_abs_diff_eq!(v.im, 0.0, epsilon = 1e-10);
        }
    }

    #[test]
    fn q_expansion_is_exact() {
        let m = TailModel::q_density();
        for i in -40..40 {
            let x = i as f64 * 0.37;
            assert_abs_diff_eq!(m.eval(x), q_density(x), epsilon = 1e-15);
        }
        assert_abs_diff_eq!(m.transform(0.0), 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(m.transform(0.5), lambda_cf(0.5), epsilon = 1e-15);
        assert_abs_diff_eq!(m.transform(2.0), 0.0, epsilon = 1e-15);
    }

    #[test]
    fn kernel_transforms_match_quadrature() {
        let cfg = QuadratureConfig::default().with_abs_tol(1e-12);
        let kernels = [
            CosineKernelTail::Cos1 { amplitude: 1.0, omega: 1.0 },
            CosineKernelTail::Cos2 { amplitude: 1.0, omega: 1.0 },
            CosineKernelTail::XSin2 { amplitude: 1.0, omega: 1.0 },
        ];
        for k in kernels {
            for &t in &[0.0, 0.4, 2.5] {
                // Compare against the inverse direction: (1/2π)∫e^{-itx}K̂(t)dt = K(x)
                let x = t;
                let v = fourier_inverse_cf(|s| Complex64::new(k.transform(s), 0.0), x, &cfg).unwrap();
                assert_abs_diff_eq!(v.re, k.eval(x), epsilon = 1e-9);
            }
        }
    }

    #[test]
    fn forward_of_q_is_lambda() {
        let cfg = QuadratureConfig::default();
        let plan = ForwardPlan::new(q_density, TailModel::q_density(), 3.0, &cfg, Exec::Sequential);
        for &t in &[0.0, 0.5, 1.0, 2.0] {
            let (v, err) = plan.eval(t);
            assert_abs_diff_eq!(v.re, lambda_cf(t), epsilon = 1e-12);
            assert!(err < 1e-10);
        }
        let v = fourier_forward_density(q_density, TailModel::q_density(), 0.5, &cfg);
        assert_abs_diff_eq!(v.re, 0.5 * (-0.5f64).exp(), epsilon = 1e-12);
    }
}
