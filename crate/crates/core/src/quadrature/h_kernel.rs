//! The kernel `h(x) = (1/2π)∫ e^{-itx} χ(t) dt`.
//!
//! The pieces `∫_1^∞` are evaluated along deformed contours in `s = t - 1`.
//! For moderate `x` the path leaves the real axis at `s₀` (with
//! `s₀^{2n} ≥ 2x + 2`) on a ray of angle `π/(2(2n+1))`, where `e^{i s^{2n+1}}`
//! decays super-exponentially. For large positive `x` it passes the saddle
//! `s* = x^{1/(2n)}` along the steepest-descent direction. The `t < -1` half
//! uses the mirrored path.

use std::f64::consts::{FRAC_PI_2, PI};

use num_complex::Complex64;

use super::engine::{integrate_breakpoints, QuadratureConfig};
use crate::error::{QidError, Result};
use crate::model::ModelParams;

/// Which representation of `h` to evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HForm {
    /// Defining integral.
    Direct,
    /// `1/(π(1+x²))` plus the twice integrated-by-parts remainder.
    ByParts,
    /// `Direct` for `|x| ≤ 2`, `ByParts` otherwise.
    Auto,
}

const FORM_SWITCH: f64 = 2.0;
const SADDLE_SWITCH: f64 = 50.0;
const SADDLE_DEPTH: f64 = 40.0;
const PATH_TOL_FACTOR: f64 = 1e-3;
const COMPLEX_PANELS: usize = 32;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HValue {
    pub value: f64,
    /// Imaginary part of the computed sum; zero in exact arithmetic.
    pub imag_residue: f64,
    pub error_estimate: f64,
}

/// `h(x)` with automatic choice of representation.
pub fn evaluate_h(params: &ModelParams, x: f64, cfg: &QuadratureConfig) -> Result<HValue> {
    evaluate_h_with_form(params, x, cfg, HForm::Auto)
}

pub fn evaluate_h_with_form(params: &ModelParams, x: f64, cfg: &QuadratureConfig, form: HForm) -> Result<HValue> {
    let form = match form {
        HForm::Auto if x.abs() <= FORM_SWITCH => HForm::Direct,
        HForm::Auto => HForm::ByParts,
        f => f,
    };
    // The by-parts integrand is divided by |1+ix|² afterwards.
    let scale = if form == HForm::ByParts { 1.0 + x * x } else { 1.0 };
    let path_cfg = QuadratureConfig { abs_tol: cfg.abs_tol * PATH_TOL_FACTOR * scale, rel_tol: 1e-15, ..*cfg };
    let n = params.n();
    let segments = build_path(n, x);
    let mut total = Complex64::new(0.0, 0.0);
    let mut err = 0.0;
    for sigma in [1.0, -1.0] {
        let z = Complex64::new(1.0, sigma * x);
        let (integral, e) = path_integral(n, x, sigma, form, &segments, &path_cfg)?;
        let shift = Complex64::new(-1.0, -sigma * x).exp();
        match form {
            HForm::Direct => {
                total += (1.0 - (-z).exp()) / z + shift * integral;
                err += e;
            }
            _ => {
                let z2 = z * z;
                total += shift * integral / z2;
                err += e / z2.norm();
            }
        }
    }
    total /= 2.0 * PI;
    err /= 2.0 * PI;
    if form == HForm::ByParts {
        total += 1.0 / (PI * (1.0 + x * x));
    }
    let limit = 10.0 * cfg.abs_tol;
    if total.im.abs() > limit {
        return Err(QidError::RealityViolation { x, residue: total.im, limit });
    }
    Ok(HValue { value: total.re, imag_residue: total.im, error_estimate: err })
}

/// Straight piece `start + r·dir`, `r ∈ [0, len]`; `len = None` for the final ray.
#[derive(Debug, Clone, Copy)]
struct Segment {
    start: Complex64,
    dir: Complex64,
    len: Option<f64>,
    /// On the real axis, where the integrand oscillates at rate `|s^{2n} - x|`.
    real_axis: bool,
}

fn segment(a: Complex64, b: Complex64) -> Segment {
    let d = b - a;
    Segment { start: a, dir: d / d.norm(), len: Some(d.norm()), real_axis: a.im == 0.0 && b.im == 0.0 }
}

/// Path for the `t > 1` half in `s = t - 1`.
fn build_path(n: u32, x: f64) -> Vec<Segment> {
    let theta = FRAC_PI_2 / (2 * n + 1) as f64;
    let ray_dir = Complex64::from_polar(1.0, theta);
    let two_n = (2 * n) as f64;
    if x > SADDLE_SWITCH {
        let s_star = x.powf(1.0 / two_n);
        let curvature = two_n * s_star.powf(two_n - 1.0);
        let d = (SADDLE_DEPTH / curvature).sqrt();
        if d < 0.5 * s_star {
            let p0 = Complex64::new(0.0, 0.0);
            let p1 = Complex64::new(0.0, -d);
            let p2 = Complex64::new(s_star - d, -d);
            let p3 = Complex64::new(s_star + d, d);
            return vec![
                segment(p0, p1),
                segment(p1, p2),
                segment(p2, p3),
                Segment { start: p3, dir: ray_dir, len: None, real_axis: false },
            ];
        }
    }
    let s0 = if x <= 0.0 { 0.0 } else { (2.0 * x + 2.0).powf(1.0 / two_n) };
    let origin = Complex64::new(0.0, 0.0);
    let turn = Complex64::new(s0, 0.0);
    let mut out = Vec::with_capacity(2);
    if s0 > 0.0 {
        out.push(segment(origin, turn));
    }
    out.push(Segment { start: turn, dir: ray_dir, len: None, real_axis: false });
    out
}

fn integrand(n: u32, x: f64, sigma: f64, form: HForm, s: Complex64) -> Complex64 {
    let k = 2 * n as i32;
    let s_km1 = s.powi(k - 1);
    let s_k = s_km1 * s;
    let s_m = s_k * s;
    let i_sigma = Complex64::new(0.0, sigma);
    let e = (-s + i_sigma * (s_m / (k + 1) as f64 - s * x)).exp();
    match form {
        HForm::Direct => e,
        _ => e * (i_sigma * (k as f64) * s_km1 - s_k * s_k),
    }
}

fn path_integral(
    n: u32,
    x: f64,
    sigma: f64,
    form: HForm,
    segments: &[Segment],
    cfg: &QuadratureConfig,
) -> Result<(Complex64, f64)> {
    let mirror = |z: Complex64| if sigma > 0.0 { z } else { z.conj() };
    let two_n = (2 * n) as i32;
    let mut total = Complex64::new(0.0, 0.0);
    let mut err = 0.0;
    for seg in segments {
        let start = mirror(seg.start);
        let dir = mirror(seg.dir);
        let g = |r: f64| integrand(n, x, sigma, form, start + dir * r) * dir;
        let len = match seg.len {
            Some(l) => l,
            None => ray_length(&g, cfg.abs_tol),
        };
        let breaks = if seg.real_axis {
            // Panel widths on the real axis follow the phase rate |s^{2n} - x|.
            let rate = |r: f64| x.abs() + (start + dir * r).norm().powi(two_n) + 1.0;
            let mut b = vec![0.0];
            let mut r = 0.0;
            while r < len {
                r = (r + PI / rate(r)).min(len);
                if len - r < 1e-9 * len {
                    r = len;
                }
                b.push(r);
            }
            b
        } else {
            (0..=COMPLEX_PANELS).map(|i| len * i as f64 / COMPLEX_PANELS as f64).collect()
        };
        let res = integrate_breakpoints(g, &breaks, cfg)?;
        total += res.value;
        err += res.error_estimate;
    }
    Ok((total, err))
}

/// Length after which the ray integrand is negligible against `tol`.
fn ray_length<G: Fn(f64) -> Complex64>(g: &G, tol: f64) -> f64 {
    let threshold = tol * 1e-6;
    let mut r = 1.0;
    while r < 1e4 {
        if g(r).norm() * (1.0 + r) < threshold && g(0.75 * r).norm() * (1.0 + r) < threshold {
            return r;
        }
        r *= 1.5;
    }
    r
}

/// Bounds on `R(x) = h(x) - 1/(π(1+x²))` from repeated integration by parts.
///
/// With `ψ(t) = e^{-t}(iφ″ - φ′²)e^{iφ}` on `t > 1` and `ψ(1) = 0`,
/// `|R(x)| ≤ (Σ_{j<k} |ψ^{(j)}(1)|/|x|^{j+3} + ‖ψ^{(k)}‖₁/|x|^{k+2}) / π`
/// for every `k ≥ 2`. Each `ψ^{(k)}` is `e^{-t}e^{iφ}` times a polynomial in
/// `t - 1`, so both quantities are exact up to rounding.
#[derive(Debug, Clone, PartialEq)]
pub struct HRemainder {
    /// `|ψ^{(j)}(1)|` for `j = 0..=K`.
    pub boundary: Vec<f64>,
    /// Upper bounds on `‖ψ^{(k)}‖₁` for `k = 0..=K`.
    pub norms: Vec<f64>,
}

const REMAINDER_ORDER: usize = 10;

impl HRemainder {
    pub fn new(params: &ModelParams) -> Self {
        let k = 2 * params.n() as usize;
        let i = Complex64::new(0.0, 1.0);
        let mut q = vec![Complex64::new(0.0, 0.0); 2 * k + 1];
        q[k - 1] = i * k as f64;
        q[2 * k] = Complex64::new(-1.0, 0.0);
        let e_inv = (-1.0f64).exp();
        let mut boundary = Vec::with_capacity(REMAINDER_ORDER + 1);
        let mut norms = Vec::with_capacity(REMAINDER_ORDER + 1);
        for _ in 0..=REMAINDER_ORDER {
            boundary.push(e_inv * q[0].norm());
            let mut fact = 1.0;
            let mut l1 = 0.0;
            for (p, c) in q.iter().enumerate() {
                if p > 0 {
                    fact *= p as f64;
                }
                l1 += c.norm() * fact;
            }
            norms.push(e_inv * l1);
            // Q ↦ Q′ − Q + i s^{2n} Q
            let mut next = vec![Complex64::new(0.0, 0.0); q.len() + k];
            for (p, c) in q.iter().enumerate() {
                if p > 0 {
                    next[p - 1] += c * p as f64;
                }
                next[p] -= c;
                next[p + k] += i * c;
            }
            q = next;
        }
        HRemainder { boundary, norms }
    }

    fn terms(&self, order: usize) -> impl Iterator<Item = (f64, i32)> + '_ {
        (1..order)
            .map(|j| (self.boundary[j], j as i32 + 3))
            .chain(std::iter::once((self.norms[order], order as i32 + 2)))
    }

    /// Bound on `|R(x')|` for all `|x'| ≥ |x|`.
    pub fn pointwise(&self, x: f64) -> f64 {
        let x = x.abs();
        (2..=REMAINDER_ORDER)
            .map(|k| self.terms(k).map(|(c, p)| c / x.powi(p)).sum::<f64>())
            .fold(f64::INFINITY, f64::min)
            / PI
    }

    /// Bound on `∫_{|x|>X} |R(x)| dx`.
    pub fn tail_mass(&self, big_x: f64) -> f64 {
        (2..=REMAINDER_ORDER)
            .map(|k| self.terms(k).map(|(c, p)| c / ((p - 1) as f64 * big_x.powi(p - 1))).sum::<f64>())
            .fold(f64::INFINITY, f64::min)
            * 2.0
            / PI
    }
}
