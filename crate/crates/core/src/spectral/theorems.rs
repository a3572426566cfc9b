//! Certificate pipelines for the two main statements.
//!
//! Theorem 1: `F = F₁ * F̄₁` (characteristic function `|f₁|²`) is
//! quasi-infinitely divisible with a non-monotone spectral function, while
//! `F₁` is not. Theorem 2: with the Hahn–Jordan parts of that spectral
//! function, `F₊ = F * F₋` with `F₊`, `F₋` infinitely divisible.

use std::f64::consts::PI;

use num_complex::Complex64;

use super::certificate::{Certificate, CertificateConfig, Check, Witness};
use super::gm::signed_factor;
use super::lk::{split_cutoff, LkPlan, SpectralPair};
use super::scan::monotonicity_scan;
use crate::defaults;
use crate::distinguished_log::{qid_growth_test, refine_grid, unwrap_phase};
use crate::error::{QidError, Result};
use crate::model::{abs_f1, f1_cf, phi_rate, ModelParams};
use crate::par::Exec;
use crate::quadrature::QuadratureConfig;

/// Knobs shared by the certificate pipelines.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CertificateOptions {
    pub exec: Exec,
    /// Replace the spectral density of `F` by its positive part (a
    /// deliberately broken input that must fail the reconstruction check).
    pub tamper: bool,
    pub seed: u64,
}

impl Default for CertificateOptions {
    fn default() -> Self {
        CertificateOptions { exec: Exec::available(), tamper: false, seed: defaults::SEED }
    }
}

pub mod names {
    pub const THM1_PRODUCT: &str = "theorem1.conjugate_product";
    pub const THM1_LK: &str = "theorem1.lk_reconstruction";
    pub const THM1_NEGATIVE: &str = "theorem1.negative_spectral_interval";
    pub const THM1_GROWTH: &str = "theorem1.growth_obstruction";
    pub const THM2_RATIO: &str = "theorem2.ratio_identity";
    pub const THM2_NONNEG: &str = "theorem2.split_nonnegative";
    pub const THM2_CONVOLUTION: &str = "theorem2.convolution_identity";
}

fn config(cfg: &QuadratureConfig, opts: &CertificateOptions) -> CertificateConfig {
    CertificateConfig { abs_tol: cfg.abs_tol, seed: opts.seed }
}

/// Largest `|a(t) - b(t)|` over `ts`, with the worst `t`.
fn max_gap<I: IntoIterator<Item = (f64, f64)>>(pairs: I) -> (f64, Witness) {
    let mut worst = (0.0f64, 0.0);
    for (t, gap) in pairs {
        if !worst.0.is_nan() && !(gap <= worst.0) {
            worst = (gap, t);
        }
    }
    (worst.0, Witness::Point(worst.1))
}

/// Window `[2πk - π, 2πk + π]` around the first `k ≥ 10` where the signed
/// factor is below the witness level at `2πk`.
pub fn negativity_window(delta: f64, cfg: &QuadratureConfig) -> Result<(f64, f64)> {
    for k in 10..2_000_000u64 {
        let u = 2.0 * PI * k as f64;
        if signed_factor(delta, u, cfg)? < defaults::SCAN_WITNESS_LEVEL {
            return Ok((u - PI, u + PI));
        }
    }
    Err(QidError::DomainError(format!("no negativity found for delta = {delta}")))
}

/// Most negative signed factor among the negative intervals of a scan of the
/// spectral density of `scale·G_{1,a}` over `range`.
pub fn negativity_witness(params: &ModelParams, range: (f64, f64), cfg: &QuadratureConfig) -> Result<(f64, Witness)> {
    let d = params.delta();
    let density = |u: f64| Ok(signed_factor(d, u, cfg)? / (PI * (1.0 + u * u)));
    let report = monotonicity_scan(density, range, defaults::SCAN_STEP)?;
    let mut best = (f64::INFINITY, Witness::Point(range.0));
    for w in &report.witnesses {
        let s = signed_factor(d, w.u, cfg)?;
        if s < best.0 {
            best = (s, Witness::Point(w.u));
        }
    }
    Ok(best)
}

pub fn theorem1_certificate(params: &ModelParams, cfg: &QuadratureConfig) -> Certificate {
    theorem1_certificate_with(params, cfg, &CertificateOptions::default())
}

pub fn theorem1_certificate_with(
    params: &ModelParams,
    cfg: &QuadratureConfig,
    opts: &CertificateOptions,
) -> Certificate {
    let ts = defaults::grid(defaults::THM1_RANGE);
    let f = |t: f64| abs_f1(params, t).powi(2);

    let product = Check::run(names::THM1_PRODUCT, defaults::THM1_PRODUCT_TOL, || {
        Ok(max_gap(ts.iter().map(|&t| {
            let v = f1_cf(params, t);
            (t, (v * v.conj() - f(t)).norm())
        })))
    });

    let lk = Check::run(names::THM1_LK, defaults::THM1_LK_TOL, || {
        let pair = if opts.tamper { SpectralPair::tampered(params) } else { SpectralPair::doubled(params) };
        let t_max = defaults::THM1_RANGE.1;
        let plan = LkPlan::new(&pair, t_max, defaults::G1A_CUTOFF, cfg, opts.exec)?;
        let vals = plan.eval_many(&ts, opts.exec)?;
        Ok(max_gap(vals.iter().map(|v| (v.t, (v.value - f(v.t)).norm()))))
    });

    let negative = Check::run(names::THM1_NEGATIVE, defaults::SCAN_WITNESS_LEVEL, || {
        let window = negativity_window(params.delta(), cfg)?;
        negativity_witness(params, window, cfg)
    });

    let growth = Check::run(names::THM1_GROWTH, 1.0, || {
        let t_max = defaults::growth_probe_max(params.n());
        let probes: Vec<f64> = (1..=10).map(|k| t_max * k as f64 / 10.0).collect();
        let grid = refine_grid(|t| f1_cf(params, t), t_max, |t| phi_rate(params, t) + 1.0);
        let v = qid_growth_test(&unwrap_phase(&grid)?, &probes)?;
        // Non-membership evidence iff upper ≥ 2·lower.
        Ok((2.0 * v.lower_max / v.upper_max, Witness::Point(v.witness_t)))
    });

    Certificate::new(params, config(cfg, opts), vec![product, lk, negative, growth])
}

pub fn theorem2_certificate(params: &ModelParams, cfg: &QuadratureConfig) -> Certificate {
    theorem2_certificate_with(params, cfg, &CertificateOptions::default())
}

pub fn theorem2_certificate_with(
    params: &ModelParams,
    cfg: &QuadratureConfig,
    opts: &CertificateOptions,
) -> Certificate {
    let ts = defaults::grid(defaults::THM2_RANGE);
    let t_max = defaults::THM2_RANGE.1;
    let f = |t: f64| abs_f1(params, t).powi(2);
    let cutoff = split_cutoff(params.delta(), 2.0, t_max, defaults::THM2_TOL);
    let plans = LkPlan::split_family(params, 2.0, t_max, cutoff, cfg, opts.exec);
    let values = plans
        .as_ref()
        .map_err(Clone::clone)
        .and_then(|[_, plus, minus]| Ok((plus.eval_many(&ts, opts.exec)?, minus.eval_many(&ts, opts.exec)?)));

    let ratio = Check::run(names::THM2_RATIO, defaults::THM2_TOL, || {
        let (p, m) = values.as_ref().map_err(Clone::clone)?;
        Ok(max_gap(p.iter().zip(m).map(|(a, b)| (a.t, (a.value / b.value - f(a.t)).norm()))))
    });

    let nonneg = Check::run(names::THM2_NONNEG, 0.0, || {
        let [_, plus, minus] = plans.as_ref().map_err(Clone::clone)?;
        let mut worst = (0.0f64, 0.0);
        for (x, v) in plus.samples().chain(minus.samples()) {
            if -v > worst.0 || v.is_nan() {
                worst = (if v.is_nan() { f64::NAN } else { -v }, x);
            }
        }
        Ok((worst.0, Witness::Point(worst.1)))
    });

    let convolution = Check::run(names::THM2_CONVOLUTION, defaults::THM2_TOL, || {
        let (p, m) = values.as_ref().map_err(Clone::clone)?;
        Ok(max_gap(p.iter().zip(m).map(|(a, b)| (a.t, (a.value - Complex64::from(f(a.t)) * b.value).norm()))))
    });

    Certificate::new(params, config(cfg, opts), vec![ratio, nonneg, convolution])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn negativity_window_contains_twenty_pi_for_small_delta() {
        let cfg = QuadratureConfig::default();
        let (a, b) = negativity_window(0.03, &cfg).unwrap();
        assert!(a < 20.0 * PI && 20.0 * PI < b);
    }

    #[test]
    fn max_gap_reports_nan() {
        let (v, _) = max_gap([(0.0, 1.0), (1.0, f64::NAN), (2.0, 3.0)]);
        assert!(v.is_nan());
    }
}
