//! Lévy–Khinchine reconstruction
//! `exp{itγ + ∫(e^{itx} - 1 - it sin x)(1+x²)/x² dG(x)}` for absolutely
//! continuous spectral functions.
//!
//! Every density handled here is written as `m(x)/(1+x²)` with a bounded
//! weight `m`, so the integrand is `F(t,x)·m(x)/x²` with
//! `F = e^{itx} - 1 - it sin x`. The range `|x| ≤ X` is integrated on
//! sampled GK15 panels; beyond `X` the weight is replaced by an explicit
//! model whose transform is known in closed form.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::gm::{signed_factor, NegativePartSeries, X_SWITCH};
use super::scan::sign_changes;
use crate::error::{QidError, Result};
use crate::model::ModelParams;
use crate::par::{self, Exec};
use crate::quadrature::{integrate_breakpoints, QuadratureConfig, SampledPanels, NODES_PER_PANEL};
use crate::special::{cos_over_sq_tail, sin_over_cube_tail};

/// Below this `|x|` the kernel uses its Taylor expansion.
pub const X_TAYLOR: f64 = 1e-3;

/// Weight families with a closed-form tail model.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum SpectralDensity {
    Zero,
    /// `1/(π(1+u²))`.
    Cauchy,
    /// `u²g_m(u)/(1+u²)`.
    Gm {
        delta: f64,
    },
    /// `scale·(πu²g_m(u)+1)/(π(1+u²))`.
    G1a {
        delta: f64,
        scale: f64,
    },
    /// `scale·g₊(u)/(π(1+u²))`.
    SplitPlus {
        delta: f64,
        scale: f64,
    },
    /// `scale·g₋(u)/(π(1+u²))`.
    SplitMinus {
        delta: f64,
        scale: f64,
    },
}

impl SpectralDensity {
    /// `m(u) = (1+u²)·density(u)`.
    pub fn weight(&self, u: f64, cfg: &QuadratureConfig) -> Result<f64> {
        Ok(match *self {
            SpectralDensity::Zero => 0.0,
            SpectralDensity::Cauchy => 1.0 / PI,
            SpectralDensity::Gm { delta } => (signed_factor(delta, u, cfg)? - 1.0) / PI,
            SpectralDensity::G1a { delta, scale } => scale * signed_factor(delta, u, cfg)? / PI,
            SpectralDensity::SplitPlus { delta, scale } => scale * signed_factor(delta, u, cfg)?.max(0.0) / PI,
            SpectralDensity::SplitMinus { delta, scale } => scale * (-signed_factor(delta, u, cfg)?).max(0.0) / PI,
        })
    }

    pub fn density(&self, u: f64, cfg: &QuadratureConfig) -> Result<f64> {
        Ok(self.weight(u, cfg)? / (1.0 + u * u))
    }

    fn delta(&self) -> Option<f64> {
        match *self {
            SpectralDensity::Zero | SpectralDensity::Cauchy => None,
            SpectralDensity::Gm { delta }
            | SpectralDensity::G1a { delta, .. }
            | SpectralDensity::SplitPlus { delta, .. }
            | SpectralDensity::SplitMinus { delta, .. } => Some(delta),
        }
    }

    fn is_split(&self) -> bool {
        matches!(self, SpectralDensity::SplitPlus { .. } | SpectralDensity::SplitMinus { .. })
    }

    /// Integration range used by [`lk_reconstruct`].
    pub fn default_cutoff(&self, t_max: f64, cfg: &QuadratureConfig) -> f64 {
        match *self {
            SpectralDensity::Zero | SpectralDensity::Cauchy => 50.0,
            SpectralDensity::Gm { .. } | SpectralDensity::G1a { .. } => 200.0,
            SpectralDensity::SplitPlus { delta, scale } | SpectralDensity::SplitMinus { delta, scale } => {
                split_cutoff(delta, scale, t_max, cfg.abs_tol)
            }
        }
    }
}

/// Shift plus spectral density.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectralPair {
    pub gamma: f64,
    pub density: SpectralDensity,
    pub description: String,
}

impl SpectralPair {
    pub fn new(gamma: f64, density: SpectralDensity, description: impl Into<String>) -> Self {
        SpectralPair { gamma, density, description: description.into() }
    }

    pub fn zero() -> Self {
        Self::new(0.0, SpectralDensity::Zero, "zero")
    }

    pub fn cauchy() -> Self {
        Self::new(0.0, SpectralDensity::Cauchy, "G_C")
    }

    pub fn gm(params: &ModelParams) -> Self {
        Self::new(0.0, SpectralDensity::Gm { delta: params.delta() }, "G_m")
    }

    /// Pair of `|f₁|`.
    pub fn g1a(params: &ModelParams) -> Self {
        Self::new(0.0, SpectralDensity::G1a { delta: params.delta(), scale: 1.0 }, "G_1a")
    }

    /// Pair of `|f₁|²`, the law of `F₁` convolved with its conjugate.
    pub fn doubled(params: &ModelParams) -> Self {
        Self::new(0.0, SpectralDensity::G1a { delta: params.delta(), scale: 2.0 }, "2 G_1a")
    }

    /// `2·G_{1,a}` with its negative part clamped to zero.
    pub fn tampered(params: &ModelParams) -> Self {
        Self::new(0.0, SpectralDensity::SplitPlus { delta: params.delta(), scale: 2.0 }, "2 G_1a clamped at 0")
    }

    /// Non-negative part of the density.
    pub fn positive_part(&self) -> Self {
        let d = match self.density {
            SpectralDensity::G1a { delta, scale } => SpectralDensity::SplitPlus { delta, scale },
            other => other,
        };
        Self::new(self.gamma, d, format!("{} (+)", self.description))
    }

    /// Non-positive part of the density, negated.
    pub fn negative_part(&self) -> Self {
        let d = match self.density {
            SpectralDensity::G1a { delta, scale } => SpectralDensity::SplitMinus { delta, scale },
            _ => SpectralDensity::Zero,
        };
        Self::new(0.0, d, format!("{} (-)", self.description))
    }
}

/// One reconstructed value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LkValue {
    pub t: f64,
    /// The exponent `itγ + ∫…`.
    pub log: Complex64,
    pub value: Complex64,
    /// Summed per-panel Kronrod–Gauss gap of the sampled part.
    pub quad_error: f64,
    /// Error bound of the tail model; zero when the tail is exact.
    pub tail_bound: f64,
}

/// Tail of the weight beyond the cutoff:
/// `Σ a·cos(ωx) + Σ b·sin(ωx)/x + Σ c·cos(ωx)/x² + e·ε(x)`.
#[derive(Debug, Clone, Default)]
struct TailModel {
    cos_terms: Vec<(f64, f64)>,
    sin_terms: Vec<(f64, f64)>,
    cos2_terms: Vec<(f64, f64)>,
    eps_weight: f64,
    delta: f64,
    /// Bound on the error of the asymptotic terms standing in for `ε`.
    eps_bound: f64,
    bound: Option<SplitBound>,
}

/// Error bound for the series model of `g₋`.
#[derive(Debug, Clone, Copy)]
struct SplitBound {
    /// Pointwise model error integrated against `1/x²`, before the kernel factor.
    pointwise: f64,
    /// Mode truncation, already including the kernel.
    modes: f64,
}

const SPLIT_MODES: usize = 2000;
const SPLIT_BOUND_MODES: usize = 20000;
const SPLIT_CUTOFF_CAP: f64 = 3e4;
const SPLIT_CUTOFF_FALLBACK: f64 = 2000.0;

impl TailModel {
    /// When the cutoff is large, `ε` is replaced by
    /// `sin x/(δ²x) + (2cos x/δ³ - 2/(1+δ)³)/x²`, whose remainder is below
    /// `12/(δ⁴x³)`; otherwise its tail is integrated exactly.
    fn g1a(delta: f64, scale: f64, cutoff: f64, tol: f64) -> Self {
        let k = scale / PI;
        let c0 = 1.0 + 1.0 / (1.0 + delta);
        let mut m = TailModel { cos_terms: vec![(0.0, k * c0), (1.0, -k / delta)], delta, ..Default::default() };
        let asym_bound = k * 12.0 / (delta.powi(4) * cutoff.powi(4));
        if asym_bound <= tol * 1e-3 {
            m.sin_terms.push((1.0, k / (delta * delta)));
            m.cos2_terms.push((1.0, 2.0 * k / delta.powi(3)));
            m.cos2_terms.push((0.0, -2.0 * k / (1.0 + delta).powi(3)));
            m.eps_bound = asym_bound;
        } else {
            m.eps_weight = k;
        }
        m
    }

    fn split_minus(delta: f64, scale: f64, cutoff: f64, t_max: f64) -> Result<Self> {
        let k = scale / PI;
        let series = NegativePartSeries::new(delta, SPLIT_MODES);
        let cos_terms = series.cos_coeffs.iter().enumerate().map(|(j, a)| (j as f64, k * a)).collect();
        let sin_terms =
            series.sin_coeffs.iter().enumerate().skip(1).map(|(j, b)| (j as f64, -k * b / (delta * delta))).collect();
        let bound = split_bound(delta, scale, cutoff, t_max, &series)?;
        if !bound.pointwise.is_finite() {
            // The expansion behind the model does not hold yet at this cutoff;
            // leave the tail out rather than add a meaningless number.
            return Ok(TailModel { delta, bound: Some(bound), ..Default::default() });
        }
        Ok(TailModel { cos_terms, sin_terms, delta, bound: Some(bound), ..Default::default() })
    }

    fn add(mut self, other: TailModel) -> Self {
        self.cos_terms.extend(other.cos_terms);
        self.sin_terms.extend(other.sin_terms);
        self.cos2_terms.extend(other.cos2_terms);
        self.eps_weight += other.eps_weight;
        self.eps_bound += other.eps_bound;
        if self.delta == 0.0 {
            self.delta = other.delta;
        }
        self.bound = self.bound.or(other.bound);
        self
    }

    /// `∫_{|x|>X} (cos tx - 1)·model(x)/x² dx`; the odd part vanishes since
    /// the model is even.
    fn value(&self, t: f64, cutoff: f64, cfg: &QuadratureConfig) -> Result<(f64, f64)> {
        let tc = |a: f64| cos_over_sq_tail(a, cutoff);
        let s3 = |a: f64| sin_over_cube_tail(a, cutoff);
        let mut v = 0.0;
        for &(w, a) in &self.cos_terms {
            v += a * (tc(t + w) + tc(t - w) - 2.0 * tc(w));
        }
        for &(w, b) in &self.sin_terms {
            v += b * (s3(w + t) + s3(w - t) - 2.0 * s3(w));
        }
        for &(w, c) in &self.cos2_terms {
            v += c
                * (cos_over_quartic_tail(t + w, cutoff) + cos_over_quartic_tail(t - w, cutoff)
                    - 2.0 * cos_over_quartic_tail(w, cutoff));
        }
        let mut err = self.eps_bound;
        if self.eps_weight != 0.0 {
            let (e, ee) = epsilon_tail(self.delta, t, cutoff, cfg)?;
            v += self.eps_weight * e;
            err += self.eps_weight.abs() * ee;
        }
        if let Some(b) = self.bound {
            err += 2.0 * (2.0 + t.abs()) * b.pointwise + b.modes;
        }
        Ok((v, err))
    }
}

/// `∫_X^∞ cos(au)/u⁴ du`.
fn cos_over_quartic_tail(a: f64, big_x: f64) -> f64 {
    (a * big_x).cos() / (3.0 * big_x.powi(3)) - a / 3.0 * sin_over_cube_tail(a, big_x)
}

/// `∫_{|x|>X} (cos tx - 1)·ε(x)/x² dx`, computed exactly by swapping the
/// order of integration: `∫₀¹ w(s)[Tc(t+s) + Tc(t-s) - 2Tc(s)] ds` with
/// `w(s) = (δ+1-s)^{-2}` and `Tc(a) = ∫_X^∞ cos(au)/u² du`.
fn epsilon_tail(delta: f64, t: f64, cutoff: f64, cfg: &QuadratureConfig) -> Result<(f64, f64)> {
    let panels = ((cutoff / PI).ceil() as usize).max(8);
    let mut breaks: Vec<f64> = (0..=panels).map(|i| i as f64 / panels as f64).collect();
    for k in 0..12 {
        let b = 1.0 - delta * 2f64.powi(k);
        if b > 0.0 {
            breaks.push(b);
        }
    }
    breaks.sort_by(f64::total_cmp);
    breaks.dedup_by(|a, b| (*a - *b).abs() < 1e-14);
    let tc = |a: f64| cos_over_sq_tail(a, cutoff);
    let inner = QuadratureConfig { abs_tol: cfg.abs_tol * 1e-2, ..*cfg };
    let r = integrate_breakpoints(
        |s| {
            let w = (delta + 1.0 - s).powi(-2);
            Complex64::new(w * (tc(t + s) + tc(t - s) - 2.0 * tc(s)), 0.0)
        },
        &breaks,
        &inner,
    )?;
    Ok((r.value.re, r.error_estimate))
}

/// Bound on the `g₋` model error beyond `X`, valid for `|t| ≤ t_max`.
///
/// On the tail `-(πu²g_m+1) = (cos x - c)/δ - ε(x)` with
/// `ε = sin x/(δ²x) + R`, `|R| ≤ (4/δ³+2)/x²`. The model replaces `ε` by its
/// leading term and the indicator of `{cos x - c > δε}` by that of
/// `{cos x > c}`; they differ on a set of measure `≤ 4δE/√(1-(c+δE)²)` per
/// period where `E = 1/(δ²x) + (4/δ³+2)/x²` bounds `|ε|`.
fn split_bound(delta: f64, scale: f64, cutoff: f64, t_max: f64, series: &NegativePartSeries) -> Result<SplitBound> {
    let k = scale / PI;
    let r_coef = 4.0 / delta.powi(3) + 2.0;
    let env = |x: f64| 1.0 / (delta * delta * x) + r_coef / (x * x);
    let c = series.threshold;
    let reach = c + delta * env(cutoff);
    if reach >= 1.0 || cutoff <= t_max + 1.0 {
        return Ok(SplitBound { pointwise: f64::INFINITY, modes: f64::INFINITY });
    }
    let remainder = r_coef / (3.0 * cutoff.powi(3));
    let e = env(cutoff);
    let per_period = 4.0 * delta * e / (1.0 - reach * reach).sqrt() * e / (cutoff * cutoff);
    let crossing = per_period * (1.0 + cutoff / (6.0 * PI));

    let far = NegativePartSeries::new(delta, SPLIT_BOUND_MODES);
    let x2 = cutoff * cutoff;
    let x3 = x2 * cutoff;
    let mut modes = 0.0;
    for j in (SPLIT_MODES + 1)..=SPLIT_BOUND_MODES {
        let gap = j as f64 - t_max;
        modes += far.cos_coeffs[j].abs() * 8.0 / (gap * x2);
        modes += far.sin_coeffs[j].abs() / (delta * delta) * 8.0 / (gap * x3);
    }
    let gap = SPLIT_BOUND_MODES as f64 - 1.0 - t_max;
    modes += 32.0 / (PI * delta * x2 * gap) + 16.0 / (PI * delta * delta * x3 * gap);
    Ok(SplitBound { pointwise: k * (remainder + crossing), modes: k * modes })
}

/// Cutoff at which the split tail bound at `t_max` drops below `tol/10`.
/// If no cutoff up to a few ten thousand achieves it, a fixed moderate one.
pub fn split_cutoff(delta: f64, scale: f64, t_max: f64, tol: f64) -> f64 {
    let series = NegativePartSeries::new(delta, 0);
    let ok = |x: f64| match split_bound_estimate(delta, scale, x, t_max, series.threshold) {
        Some(b) => b <= tol / 10.0,
        None => false,
    };
    let mut x = 200.0f64.max(2.0 * t_max);
    while x < SPLIT_CUTOFF_CAP && !ok(x) {
        x *= 1.25;
    }
    if x >= SPLIT_CUTOFF_CAP && !ok(SPLIT_CUTOFF_CAP) {
        // The bound is out of reach; the ratio identities do not depend on
        // the negative-part tail, so stay cheap.
        return SPLIT_CUTOFF_FALLBACK;
    }
    x.round()
}

/// Leading part of [`split_bound`] without the mode sums.
fn split_bound_estimate(delta: f64, scale: f64, x: f64, t_max: f64, c: f64) -> Option<f64> {
    let r_coef = 4.0 / delta.powi(3) + 2.0;
    let e = 1.0 / (delta * delta * x) + r_coef / (x * x);
    let reach = c + delta * e;
    if reach >= 1.0 {
        return None;
    }
    let crossing = 4.0 * delta * e * e / ((1.0 - reach * reach).sqrt() * x * x) * (1.0 + x / (6.0 * PI));
    Some(2.0 * (2.0 + t_max) * scale / PI * (r_coef / (3.0 * x.powi(3)) + crossing))
}

/// `F(t,x) = e^{itx} - 1 - it sin x` given `sin x`.
#[inline]
fn kernel_numerator(t: f64, x: f64, sin_x: f64) -> Complex64 {
    let (s, c) = (0.5 * t * x).sin_cos();
    let re = -2.0 * s * s;
    let im = if x.abs() < X_TAYLOR {
        let x2 = x * x;
        x2 * (-(t.powi(3) - t) * x / 6.0 + (t.powi(5) - t) * x2 * x / 120.0)
    } else {
        2.0 * s * c - t * sin_x
    };
    Complex64::new(re, im)
}

/// Per-node data that does not depend on `t`.
#[derive(Debug, Clone, Copy)]
struct Node {
    x: f64,
    sin_x: f64,
    /// Kronrod and Gauss weights times `m(x)/x²`.
    wk: f64,
    wg: f64,
}

/// `F(t,x)/x²` with `F = e^{itx} - 1 - it sin x`.
#[cfg(test)]
fn kernel(t: f64, x: f64) -> Complex64 {
    let half = 0.5 * t * x;
    let re = -2.0 * half.sin().powi(2) / (x * x);
    let im = if x.abs() < X_TAYLOR {
        let x3 = x * x * x;
        -(t.powi(3) - t) * x / 6.0 + (t.powi(5) - t) * x3 / 120.0
    } else {
        ((t * x).sin() - t * x.sin()) / (x * x)
    };
    Complex64::new(re, im)
}

/// Reconstruction with the weight sampled once, reusable for many `t`.
#[derive(Debug, Clone)]
pub struct LkPlan {
    gamma: f64,
    panels: SampledPanels,
    nodes: Vec<Node>,
    tail: TailModel,
    cutoff: f64,
    t_max: f64,
    cfg: QuadratureConfig,
}

impl LkPlan {
    /// Plan valid for `|t| ≤ t_max`, integrating `|x| ≤ cutoff` on panels.
    pub fn new(pair: &SpectralPair, t_max: f64, cutoff: f64, cfg: &QuadratureConfig, exec: Exec) -> Result<Self> {
        cfg.validate()?;
        let d = pair.density;
        let breaks = plan_breaks(&d, t_max, cutoff, cfg)?;
        let panels = SampledPanels::try_sample(&breaks, exec, |x| d.weight(x, cfg))?;
        let tail = tail_for(&d, cutoff, t_max, cfg.abs_tol)?;
        Ok(Self::assemble(pair.gamma, panels, tail, cutoff, t_max, cfg))
    }

    /// Plans for `scale·G_{1,a}` and its two Hahn–Jordan parts on shared
    /// nodes, in the order (signed, positive, negative).
    pub fn split_family(
        params: &ModelParams,
        scale: f64,
        t_max: f64,
        cutoff: f64,
        cfg: &QuadratureConfig,
        exec: Exec,
    ) -> Result<[LkPlan; 3]> {
        cfg.validate()?;
        let delta = params.delta();
        let minus_d = SpectralDensity::SplitMinus { delta, scale };
        let breaks = plan_breaks(&minus_d, t_max, cutoff, cfg)?;
        let k = scale / PI;
        let signed = SampledPanels::try_sample(&breaks, exec, |x| Ok(k * signed_factor(delta, x, cfg)?))?;
        let plus = signed.map_values(|_, v| v.max(0.0));
        let minus = signed.map_values(|_, v| (-v).max(0.0));
        let build = |panels, d: SpectralDensity| -> Result<LkPlan> {
            let tail = tail_for(&d, cutoff, t_max, cfg.abs_tol)?;
            Ok(Self::assemble(0.0, panels, tail, cutoff, t_max, cfg))
        };
        Ok([
            build(signed, SpectralDensity::G1a { delta, scale })?,
            build(plus, SpectralDensity::SplitPlus { delta, scale })?,
            build(minus, minus_d)?,
        ])
    }

    fn assemble(
        gamma: f64,
        panels: SampledPanels,
        tail: TailModel,
        cutoff: f64,
        t_max: f64,
        cfg: &QuadratureConfig,
    ) -> Self {
        let nodes = panels
            .nodes()
            .iter()
            .zip(panels.weights())
            .zip(panels.values())
            .map(|((&x, &(wk, wg)), &m)| {
                let f = m / (x * x);
                Node { x, sin_x: x.sin(), wk: wk * f, wg: wg * f }
            })
            .collect();
        LkPlan { gamma, panels, nodes, tail, cutoff, t_max, cfg: *cfg }
    }

    pub fn cutoff(&self) -> f64 {
        self.cutoff
    }

    /// Sampled weights, `(x, m(x))`.
    pub fn samples(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.panels.nodes().iter().copied().zip(self.panels.values().iter().copied())
    }

    pub fn eval(&self, t: f64) -> Result<LkValue> {
        if t.abs() > self.t_max * (1.0 + 1e-12) {
            return Err(QidError::DomainError(format!("plan built for |t| <= {}, got {t}", self.t_max)));
        }
        let mut body = Complex64::new(0.0, 0.0);
        let mut quad_error = 0.0;
        for panel in self.nodes.chunks(NODES_PER_PANEL) {
            let mut k = Complex64::new(0.0, 0.0);
            let mut g = Complex64::new(0.0, 0.0);
            for n in panel {
                let f = kernel_numerator(t, n.x, n.sin_x);
                k += f * n.wk;
                g += f * n.wg;
            }
            body += k;
            quad_error += (k - g).norm();
        }
        let (tail, tail_bound) = self.tail.value(t, self.cutoff, &self.cfg)?;
        let log = body + Complex64::new(tail, t * self.gamma);
        Ok(LkValue { t, log, value: log.exp(), quad_error, tail_bound })
    }

    pub fn eval_many(&self, ts: &[f64], exec: Exec) -> Result<Vec<LkValue>> {
        par::map(exec, ts, |&t| self.eval(t)).into_iter().collect()
    }
}

fn tail_for(d: &SpectralDensity, cutoff: f64, t_max: f64, tol: f64) -> Result<TailModel> {
    Ok(match *d {
        SpectralDensity::Zero => TailModel::default(),
        SpectralDensity::Cauchy => TailModel { cos_terms: vec![(0.0, 1.0 / PI)], ..Default::default() },
        SpectralDensity::Gm { delta } => {
            let mut m = TailModel::g1a(delta, 1.0, cutoff, tol);
            m.cos_terms[0].1 -= 1.0 / PI;
            m
        }
        SpectralDensity::G1a { delta, scale } => TailModel::g1a(delta, scale, cutoff, tol),
        SpectralDensity::SplitMinus { delta, scale } => TailModel::split_minus(delta, scale, cutoff, t_max)?,
        SpectralDensity::SplitPlus { delta, scale } => {
            TailModel::g1a(delta, scale, cutoff, tol).add(TailModel::split_minus(delta, scale, cutoff, t_max)?)
        }
    })
}

/// Symmetric breakpoints with panels narrow enough for frequency `t_max`,
/// plus the sign changes of split weights.
fn plan_breaks(d: &SpectralDensity, t_max: f64, cutoff: f64, cfg: &QuadratureConfig) -> Result<Vec<f64>> {
    if !(cutoff > X_SWITCH) || !t_max.is_finite() || t_max < 0.0 {
        return Err(QidError::DomainError(format!("bad plan range: t_max {t_max}, cutoff {cutoff}")));
    }
    let width = (PI / (t_max + 2.0)).min(1.0);
    let mut marks = vec![-cutoff, -X_SWITCH, 0.0, X_SWITCH, cutoff];
    if d.is_split() {
        let delta = d.delta().unwrap_or(1.0);
        let f = |x: f64| signed_factor(delta, x, cfg);
        marks.extend(sign_changes(&f, X_SWITCH, cutoff, 0.05, 1e-12)?);
        marks.extend(sign_changes(&f, -cutoff, -X_SWITCH, 0.05, 1e-12)?);
    }
    marks.sort_by(f64::total_cmp);
    marks.dedup_by(|a, b| (*a - *b).abs() < 1e-13);
    let mut breaks = vec![marks[0]];
    for w in marks.windows(2) {
        let seg = SampledPanels::graded_breaks(w[0], w[1], |_| width);
        breaks.extend_from_slice(&seg[1..]);
    }
    Ok(breaks)
}

/// `exp{itγ + ∫(e^{itx} - 1 - it sin x)(1+x²)/x² dG(x)}` at a single `t`.
pub fn lk_reconstruct(pair: &SpectralPair, t: f64, cfg: &QuadratureConfig) -> Result<Complex64> {
    let t_max = t.abs().max(1.0);
    let cutoff = pair.density.default_cutoff(t_max, cfg);
    let plan = LkPlan::new(pair, t_max, cutoff, cfg, Exec::available())?;
    Ok(plan.eval(t)?.value)
}
