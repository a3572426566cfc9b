//! The standing checks of the construction, and the full certificate that
//! combines them with the two theorem pipelines.
//!
//! Checks that depend only on `n` (the bound on `h`, the constant `K`) run
//! for every order listed in [`defaults`], so one certificate covers them
//! regardless of the requested parameters.

use std::f64::consts::{E, PI};

use num_complex::Complex64;

use crate::defaults;
use crate::distinguished_log::{growth_ratio, qid_growth_test, refine_grid, unwrap_phase, FunctionGrid};
use crate::error::{QidError, Result};
use crate::model::{abs_f1, f1_cf, lambda_cf, phi, phi_rate, q_density, q_scaled, triangle, ModelParams};
use crate::par;
use crate::quadrature::{
    evaluate_gm_integral, evaluate_h, evaluate_k, fourier_inverse_cf, ForwardPlan, QuadratureConfig, TailModel,
};
use crate::sampling::{cf_distance_report, sample_p1_with};
use crate::spectral::{
    gm, gm_closed, monotonicity_scan, signed_factor, spectral_density_g1a, theorem1_certificate_with,
    theorem2_certificate_with, Certificate, CertificateConfig, CertificateOptions, Check, LkPlan, SpectralPair,
    Witness,
};

/// Largest `gap` with its point; NaN counts as the worst possible value.
fn worst<I: IntoIterator<Item = (f64, f64)>>(pairs: I) -> (f64, Witness) {
    let mut w = (f64::NEG_INFINITY, 0.0);
    for (x, gap) in pairs {
        if !w.0.is_nan() && !(gap <= w.0) {
            w = (gap, x);
        }
    }
    (w.0, Witness::Point(w.1))
}

fn collect<T>(v: Vec<Result<T>>) -> Result<Vec<T>> {
    v.into_iter().collect()
}

/// Inversion of `Λ` and the two-sided bound on `q`.
pub fn q_checks(cfg: &QuadratureConfig, opts: &CertificateOptions) -> Vec<Check> {
    let xs = defaults::grid(defaults::INVERSION_RANGE);
    let inversion = Check::run("inversion.lambda_to_q", defaults::INVERSION_TOL, || {
        let v = collect(par::map(opts.exec, &xs, |&x| {
            fourier_inverse_cf(|t| Complex64::new(lambda_cf(t), 0.0), x, cfg).map(|v| (x, (v - q_density(x)).norm()))
        }))?;
        Ok(worst(v))
    });
    let lower = Check::new(
        "bound.q_lower",
        defaults::Q_BOUND_TOL,
        worst(xs.iter().map(|&x| (x, 1.0 - q_scaled(x))).chain([(0.0, (q_scaled(0.0) - 1.0).abs())])).0,
        worst(xs.iter().map(|&x| (x, 1.0 - q_scaled(x)))).1,
    );
    let (v, w) = worst(xs.iter().map(|&x| (x, q_scaled(x) - (2.0 * E + 2.0))));
    let upper = Check::new("bound.q_upper", 0.0, v, w);
    vec![inversion, lower, upper]
}

/// `|h|·eπ(1+x²) ≤ e + (2n)! + (4n)!` and realness of `h`, for order `n`.
pub fn h_checks(n: u32, cfg: &QuadratureConfig, opts: &CertificateOptions) -> Vec<Check> {
    let bound_name = format!("bound.h_envelope.n{n}");
    let imag_name = format!("h.imaginary_residue.n{n}");
    let xs = defaults::grid(defaults::H_RANGE);
    let values = ModelParams::with_default_delta(n)
        .and_then(|p| collect(par::map(opts.exec, &xs, |&x| evaluate_h(&p, x, cfg).map(|h| (p, x, h)))));
    match values {
        Ok(v) => {
            let cap = v[0].0.h_bound_numerator();
            let (b, bw) = worst(v.iter().map(|(_, x, h)| (*x, h.value.abs() * E * PI * (1.0 + x * x) - cap)));
            let (i, iw) = worst(v.iter().map(|(_, x, h)| (*x, h.imag_residue.abs())));
            vec![
                Check::new(bound_name, defaults::H_BOUND_SLACK, b, bw),
                Check::new(imag_name, defaults::H_IMAG_TOL, i, iw),
            ]
        }
        Err(_) => {
            vec![Check::failed(bound_name, defaults::H_BOUND_SLACK), Check::failed(imag_name, defaults::H_IMAG_TOL)]
        }
    }
}

/// Relative error of `K(n)` against `(2n)! + (4n)!`.
pub fn k_check(n: u32, cfg: &QuadratureConfig) -> Check {
    Check::run(&format!("constant.k.n{n}"), defaults::K_REL_TOL, || {
        let k = evaluate_k(n, cfg)?;
        Ok(((k.value - k.closed_form).abs() / k.closed_form, Witness::Point(k.truncation_point)))
    })
}

/// Forward transform of `p₁` against `f₁`, its mass and its minimum.
///
/// The transform is only affordable for `n = 1`; for larger `n` only the
/// minimum of `p₁` on the `h` grid is checked.
pub fn density_checks(params: &ModelParams, cfg: &QuadratureConfig, opts: &CertificateOptions) -> Vec<Check> {
    let mut out = Vec::new();
    if params.n() == 1 {
        let ts = defaults::grid(defaults::ROUND_TRIP_RANGE);
        let p = *params;
        let hcfg = *cfg;
        let density = move |x: f64| match evaluate_h(&p, x, &hcfg) {
            Ok(h) => (q_density(x) + p.delta() * h.value) / (1.0 + p.delta()),
            Err(_) => f64::NAN,
        };
        let plan =
            ForwardPlan::new(density, TailModel::p1_density(params), defaults::ROUND_TRIP_RANGE.1, cfg, opts.exec);
        out.push(Check::run("round_trip.cf", defaults::ROUND_TRIP_TOL, || {
            Ok(worst(par::map(opts.exec, &ts, |&t| (t, (plan.eval(t).0 - f1_cf(params, t)).norm()))))
        }));
        out.push(Check::run("round_trip.mass", defaults::MASS_TOL, || {
            Ok(((plan.eval(0.0).0 - 1.0).norm(), Witness::Point(0.0)))
        }));
    }
    out.push(Check::run("density.minimum", -defaults::DENSITY_FLOOR, || {
        let xs = defaults::grid(defaults::H_RANGE);
        let v = collect(par::map(opts.exec, &xs, |&x| {
            evaluate_h(params, x, cfg).map(|h| (x, -(q_density(x) + params.delta() * h.value) / (1.0 + params.delta())))
        }))?;
        Ok(worst(v))
    }));
    out
}

/// Unwrapped logarithm of `f₁` against `ln((Δ+δ)/(1+δ)) - |t| + iφ`.
///
/// For `n = 1` the grid values are computed by the forward transform of
/// `p₁`; for larger `n` the closed form of `f₁` is sampled.
pub fn log_checks(params: &ModelParams, cfg: &QuadratureConfig, opts: &CertificateOptions) -> Vec<Check> {
    let t_max = defaults::LOG_RANGE.1;
    let grid = (|| -> Result<_> {
        let coarse = refine_grid(|t| f1_cf(params, t), t_max, |t| phi_rate(params, t) + 1.0);
        let ts = coarse.ts().to_vec();
        let g = if params.n() == 1 {
            let p = *params;
            let hcfg = *cfg;
            let density = move |x: f64| match evaluate_h(&p, x, &hcfg) {
                Ok(h) => (q_density(x) + p.delta() * h.value) / (1.0 + p.delta()),
                Err(_) => f64::NAN,
            };
            let plan = ForwardPlan::new(density, TailModel::p1_density(params), t_max, cfg, opts.exec);
            FunctionGrid::sample(ts, opts.exec, |t| plan.eval(t).0)?
        } else {
            coarse
        };
        unwrap_phase(&g)
    })();
    let d = params.delta();
    let arg = Check::run("log.arg", defaults::LOG_TOL, || {
        let l = grid.as_ref().map_err(Clone::clone)?;
        Ok(worst(l.ts.iter().zip(&l.arg).map(|(&t, &a)| (t, (a - phi(params, t)).abs()))))
    });
    let ln_abs = Check::run("log.ln_abs", defaults::LOG_TOL, || {
        let l = grid.as_ref().map_err(Clone::clone)?;
        Ok(worst(
            l.ts.iter()
                .zip(&l.ln_abs)
                .map(|(&t, &a)| (t, (a - (((triangle(t) + d) / (1.0 + d)).ln() - t.abs())).abs())),
        ))
    });
    vec![arg, ln_abs]
}

/// Growth ratio at a large `t` and the Cauchy control of the growth test.
pub fn growth_checks(params: &ModelParams) -> Vec<Check> {
    let ratio = Check::run("growth.ratio", defaults::GROWTH_RATIO_TOL, || {
        let r = growth_ratio(params, defaults::GROWTH_RATIO_T)?;
        Ok(((r - 1.0).abs(), Witness::Point(defaults::GROWTH_RATIO_T)))
    });
    // The control must be a candidate: upper < 2·lower.
    let control = Check::run("growth.cauchy_control", 1.0 - 1e-12, || {
        let probes: Vec<f64> = (1..=10).map(|k| 10.0 * k as f64).collect();
        let g = refine_grid(|t| Complex64::new((-t.abs()).exp(), 0.0), 100.0, |_| 1.0);
        let v = qid_growth_test(&unwrap_phase(&g)?, &probes)?;
        Ok((v.upper_max / (2.0 * v.lower_max), Witness::Point(v.witness_t)))
    });
    vec![ratio, control]
}

/// Closed form of `g_m` against its integral, and `|g_m| ≤ 1/(2πδ)`.
pub fn gm_checks(params: &ModelParams, cfg: &QuadratureConfig, opts: &CertificateOptions) -> Vec<Check> {
    let d = params.delta();
    let xs = defaults::grid(defaults::GM_RANGE);
    let cross = Check::run("gm.cross_form", defaults::GM_TOL, || {
        let v = collect(par::map(opts.exec, &xs, |&x| {
            Ok((x, (gm_closed(d, x)? - evaluate_gm_integral(d, x, cfg)?.value).abs()))
        }))?;
        Ok(worst(v))
    });
    let bound = Check::run("gm.bound", 0.0, || {
        let all = defaults::grid((0.0, defaults::GM_RANGE.1, defaults::GM_RANGE.2));
        let v = collect(par::map(opts.exec, &all, |&x| Ok((x, gm(d, x, cfg)?.abs() - 1.0 / (2.0 * PI * d)))))?;
        Ok(worst(v))
    });
    vec![cross, bound]
}

/// Reconstruction of `|f₁|` from `G_{1,a}` and of `e^{-|t|}` from `G_C`.
pub fn lk_checks(params: &ModelParams, cfg: &QuadratureConfig, opts: &CertificateOptions) -> Vec<Check> {
    let ts = defaults::grid(defaults::LK_RANGE);
    let values = LkPlan::new(&SpectralPair::g1a(params), defaults::LK_RANGE.1, defaults::G1A_CUTOFF, cfg, opts.exec)
        .and_then(|p| p.eval_many(&ts, opts.exec));
    let modulus = Check::run("lk.g1a_modulus", defaults::LK_TOL, || {
        let v = values.as_ref().map_err(Clone::clone)?;
        Ok(worst(v.iter().map(|v| (v.t, (v.value.norm() - abs_f1(params, v.t)).abs()))))
    });
    let arg = Check::run("lk.g1a_arg", defaults::LK_ARG_TOL, || {
        let v = values.as_ref().map_err(Clone::clone)?;
        Ok(worst(v.iter().map(|v| {
            let bad = if v.value.re > 0.0 { v.value.arg().abs() } else { f64::INFINITY };
            (v.t, bad)
        })))
    });
    let cauchy = Check::run("lk.cauchy", defaults::CAUCHY_TOL, || {
        let ts = defaults::grid(defaults::CAUCHY_RANGE);
        let plan = LkPlan::new(&SpectralPair::cauchy(), defaults::CAUCHY_RANGE.1, 50.0, cfg, opts.exec)?;
        let v = plan.eval_many(&ts, opts.exec)?;
        Ok(worst(v.iter().map(|v| (v.t, (v.value - (-v.t.abs()).exp()).norm()))))
    });
    vec![modulus, arg, cauchy]
}

/// Negative interval of the `G_{1,a}` density near `20π`, and the level of
/// its witness.
pub fn scan_checks(params: &ModelParams, cfg: &QuadratureConfig) -> Vec<Check> {
    let target = 20.0 * PI;
    let report = monotonicity_scan(|u| spectral_density_g1a(params, u, cfg), defaults::SCAN_RANGE, defaults::SCAN_STEP);
    let near = Check::run("scan.interval_near_20pi", defaults::SCAN_WITNESS_RADIUS, || {
        let r = report.as_ref().map_err(Clone::clone)?;
        let best = r
            .negative_intervals()
            .map(|i| ((i.start - target).max(target - i.end).max(0.0), i))
            .min_by(|a, b| a.0.total_cmp(&b.0))
            .ok_or_else(|| QidError::DomainError("no negative interval".into()))?;
        Ok((best.0, Witness::Pair([best.1.start, best.1.end])))
    });
    let level = Check::run("scan.witness_level", defaults::SCAN_WITNESS_LEVEL, || {
        let r = report.as_ref().map_err(Clone::clone)?;
        let w = r
            .witnesses
            .iter()
            .min_by(|a, b| (a.u - target).abs().total_cmp(&(b.u - target).abs()))
            .ok_or_else(|| QidError::DomainError("no negativity witness".into()))?;
        Ok((signed_factor(params.delta(), w.u, cfg)?, Witness::Point(w.u)))
    });
    vec![near, level]
}

/// Acceptance rate, characteristic-function distance and reproducibility of
/// the sampler.
pub fn sampler_checks(params: &ModelParams, cfg: &QuadratureConfig, opts: &CertificateOptions) -> Vec<Check> {
    let n = defaults::SAMPLE_COUNT;
    let first = sample_p1_with(params, n, opts.seed, cfg, opts.exec);
    let oracle = 1.0 / params.envelope().p1_envelope;
    let rate = Check::run("sampler.acceptance_rate", defaults::ACCEPTANCE_TOL, || {
        let b = first.as_ref().map_err(Clone::clone)?;
        Ok(((b.acceptance_rate - oracle).abs(), Witness::Point(b.acceptance_rate)))
    });
    let radius = defaults::CF_RADIUS / (n as f64).sqrt();
    let cf = Check::run("sampler.cf_distance", radius, || {
        let b = first.as_ref().map_err(Clone::clone)?;
        let r = cf_distance_report(b, |t| f1_cf(params, t), &defaults::CF_PROBES)?;
        Ok(worst(r.per_probe))
    });
    let rerun = Check::run("sampler.reproducible", 0.0, || {
        let b = first.as_ref().map_err(Clone::clone)?;
        let again = sample_p1_with(params, n, opts.seed, cfg, opts.exec)?;
        Ok((if again.to_csv() == b.to_csv() { 0.0 } else { 1.0 }, Witness::Point(opts.seed as f64)))
    });
    vec![rate, cf, rerun]
}

/// Every standing check, in a fixed order.
pub fn standing_suite(params: &ModelParams, cfg: &QuadratureConfig, opts: &CertificateOptions) -> Certificate {
    let mut checks = q_checks(cfg, opts);
    for n in defaults::H_ORDERS {
        checks.extend(h_checks(n, cfg, opts));
    }
    for n in defaults::K_ORDERS {
        checks.push(k_check(n, cfg));
    }
    checks.extend(density_checks(params, cfg, opts));
    checks.extend(log_checks(params, cfg, opts));
    checks.extend(growth_checks(params));
    checks.extend(gm_checks(params, cfg, opts));
    checks.extend(lk_checks(params, cfg, opts));
    checks.extend(scan_checks(params, cfg));
    checks.extend(sampler_checks(params, cfg, opts));
    Certificate::new(params, CertificateConfig { abs_tol: cfg.abs_tol, seed: opts.seed }, checks)
}

/// Standing suite followed by the Theorem 1 and Theorem 2 certificates.
pub fn full_certificate(params: &ModelParams, cfg: &QuadratureConfig, opts: &CertificateOptions) -> Certificate {
    let mut c = standing_suite(params, cfg, opts);
    c.extend(theorem1_certificate_with(params, cfg, opts));
    c.extend(theorem2_certificate_with(params, cfg, opts));
    c
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn worst_prefers_nan() {
        let (v, w) = worst([(1.0, 0.5), (2.0, f64::NAN), (3.0, 0.7)]);
        assert!(v.is_nan());
        assert_eq!(w, Witness::Point(2.0));
    }

    #[test]
    fn growth_checks_pass_for_order_one() {
        let p = ModelParams::with_default_delta(1).unwrap();
        assert!(growth_checks(&p).iter().all(|c| c.pass));
    }
}
