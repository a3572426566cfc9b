use std::cmp::Ordering;
use std::collections::BinaryHeap;

use num_complex::Complex64;

use crate::error::{QidError, Result};

/// Kronrod abscissae on `[0, 1]`, outermost first; `XGK[7] = 0`.
pub(crate) const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
pub(crate) const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
/// Gauss weights attached to `XGK[1], XGK[3], XGK[5], XGK[7]`.
pub(crate) const WG: [f64; 4] =
    [0.129_484_966_168_869_7, 0.279_705_391_489_276_7, 0.381_830_050_505_118_9, 0.417_959_183_673_469_4];

/// Gauss weight for Kronrod node `j`, zero for nodes not in the Gauss rule.
pub(crate) fn gauss_weight(j: usize) -> f64 {
    if j % 2 == 1 {
        WG[j / 2]
    } else {
        0.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureConfig {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_subdivisions: usize,
    pub truncation_tail_mass: f64,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        QuadratureConfig { abs_tol: 1e-8, rel_tol: 1e-12, max_subdivisions: 200_000, truncation_tail_mass: 1e-9 }
    }
}

impl QuadratureConfig {
    /// Sets `abs_tol` and keeps the tail mass at a tenth of it.
    pub fn with_abs_tol(mut self, abs_tol: f64) -> Self {
        self.abs_tol = abs_tol;
        self.truncation_tail_mass = abs_tol / 10.0;
        self
    }

    pub fn with_rel_tol(mut self, rel_tol: f64) -> Self {
        self.rel_tol = rel_tol;
        self
    }

    pub fn validate(&self) -> Result<()> {
        let ok = self.abs_tol > 0.0
            && self.rel_tol > 0.0
            && self.max_subdivisions > 0
            && self.truncation_tail_mass > 0.0
            && self.truncation_tail_mass <= self.abs_tol / 10.0 * (1.0 + 1e-12);
        if ok {
            Ok(())
        } else {
            Err(QidError::InvalidConfig(format!("{self:?}")))
        }
    }

    pub(crate) fn target(&self, value: f64) -> f64 {
        self.abs_tol.max(self.rel_tol * value)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntegralResult<V = Complex64> {
    pub value: V,
    pub error_estimate: f64,
    pub subdivisions_used: usize,
    pub truncation_point: f64,
}

/// One GK15 panel: (Kronrod value, |Kronrod − Gauss|).
pub(crate) fn gk15<F: Fn(f64) -> Complex64>(f: &F, a: f64, b: f64) -> (Complex64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let mut k = Complex64::new(0.0, 0.0);
    let mut g = Complex64::new(0.0, 0.0);
    for j in 0..7 {
        let dx = h * XGK[j];
        let s = f(c - dx) + f(c + dx);
        k += s * WGK[j];
        g += s * gauss_weight(j);
    }
    let fc = f(c);
    k += fc * WGK[7];
    g += fc * WG[3];
    (k * h, ((k - g) * h).norm())
}

struct Segment {
    a: f64,
    b: f64,
    value: Complex64,
    error: f64,
    order: usize,
}

impl PartialEq for Segment {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}
impl Eq for Segment {}
impl PartialOrd for Segment {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Segment {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error).then_with(|| other.order.cmp(&self.order))
    }
}

/// Globally adaptive GK15 on `[a, b]`.
pub fn integrate_adaptive<F: Fn(f64) -> Complex64>(
    f: F,
    a: f64,
    b: f64,
    cfg: &QuadratureConfig,
) -> Result<IntegralResult> {
    integrate_breakpoints(f, &[a, b], cfg)
}

/// Globally adaptive GK15 starting from the panels delimited by `breaks`.
///
/// The worst panel is bisected until the summed Kronrod–Gauss discrepancy is
/// below `max(abs_tol, rel_tol·|I|)`.
pub fn integrate_breakpoints<F: Fn(f64) -> Complex64>(
    f: F,
    breaks: &[f64],
    cfg: &QuadratureConfig,
) -> Result<IntegralResult> {
    if breaks.len() < 2 || breaks.windows(2).any(|w| !(w[0] < w[1])) {
        return Err(QidError::DomainError("integration limits must be strictly increasing".into()));
    }
    let mut heap = BinaryHeap::with_capacity(breaks.len() * 2);
    let mut order = 0usize;
    let mut total = Complex64::new(0.0, 0.0);
    let mut err = 0.0;
    let mut frozen_err = 0.0;
    for w in breaks.windows(2) {
        let (value, error) = gk15(&f, w[0], w[1]);
        total += value;
        err += error;
        heap.push(Segment { a: w[0], b: w[1], value, error, order });
        order += 1;
    }
    let mut subdivisions = 0;
    loop {
        if err + frozen_err <= cfg.target(total.norm()) {
            break;
        }
        if subdivisions >= cfg.max_subdivisions {
            return Err(QidError::ToleranceNotReached {
                tolerance: cfg.abs_tol,
                estimate: err + frozen_err,
                subdivisions,
            });
        }
        let Some(seg) = heap.pop() else { break };
        let mid = 0.5 * (seg.a + seg.b);
        total -= seg.value;
        err -= seg.error;
        if !(seg.a < mid && mid < seg.b) {
            // Panel at floating-point resolution; keep its estimate as is.
            total += seg.value;
            frozen_err += seg.error;
            continue;
        }
        for (lo, hi) in [(seg.a, mid), (mid, seg.b)] {
            let (value, error) = gk15(&f, lo, hi);
            total += value;
            err += error;
            heap.push(Segment { a: lo, b: hi, value, error, order });
            order += 1;
        }
        subdivisions += 1;
        if subdivisions % 1024 == 0 {
            err = heap.iter().map(|s| s.error).sum();
        }
    }
    // Recompute sums from scratch to shed accumulated rounding.
    let mut segs: Vec<Segment> = heap.into_vec();
    segs.sort_by(|x, y| x.a.total_cmp(&y.a));
    let value = segs.iter().fold(Complex64::new(0.0, 0.0), |acc, s| acc + s.value);
    let error = segs.iter().map(|s| s.error).sum::<f64>() + frozen_err;
    Ok(IntegralResult {
        value,
        error_estimate: error,
        subdivisions_used: subdivisions,
        truncation_point: *breaks.last().unwrap(),
    })
}
