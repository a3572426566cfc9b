//! Sign structure of sampled functions.

use serde::{Deserialize, Serialize};

use crate::error::Result;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Sign {
    Positive,
    Negative,
    Zero,
}

impl Sign {
    fn of(v: f64) -> Self {
        if v > 0.0 {
            Sign::Positive
        } else if v < 0.0 {
            Sign::Negative
        } else {
            Sign::Zero
        }
    }
}

/// Maximal sampled interval of constant sign; endpoints are refined sign
/// changes (or the scan limits).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SignInterval {
    pub start: f64,
    pub end: f64,
    pub sign: Sign,
}

/// Point where the scanned function is negative.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NegativityWitness {
    pub u: f64,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MonotonicityReport {
    pub intervals: Vec<SignInterval>,
    /// Most negative sampled point of each negative interval.
    pub witnesses: Vec<NegativityWitness>,
}

impl MonotonicityReport {
    pub fn negative_intervals(&self) -> impl Iterator<Item = &SignInterval> {
        self.intervals.iter().filter(|i| i.sign == Sign::Negative)
    }
}

/// Bisects a sign change of `f` inside `[a, b]` down to width `tol`.
pub fn bisect<F: Fn(f64) -> Result<f64>>(f: &F, mut a: f64, mut b: f64, tol: f64) -> Result<f64> {
    let mut fa = f(a)?;
    while b - a > tol {
        let m = 0.5 * (a + b);
        if m <= a || m >= b {
            break;
        }
        let fm = f(m)?;
        if (fm > 0.0) == (fa > 0.0) {
            a = m;
            fa = fm;
        } else {
            b = m;
        }
    }
    Ok(0.5 * (a + b))
}

/// Samples `f` on `[a, b]` with the given step, splits the range into sign
/// intervals, and refines every sign change by bisection to width `tol`.
pub fn sign_scan<F: Fn(f64) -> Result<f64>>(f: &F, a: f64, b: f64, step: f64, tol: f64) -> Result<MonotonicityReport> {
    let count = ((b - a) / step).ceil().max(1.0) as usize;
    let mut intervals = Vec::new();
    let mut witnesses = Vec::new();
    let mut prev_u = a;
    let first = f(a)?;
    let mut start = a;
    let mut sign = Sign::of(first);
    let mut worst = NegativityWitness { u: a, value: first };
    for i in 1..=count {
        let u = if i == count { b } else { a + i as f64 * step };
        let v = f(u)?;
        let s = Sign::of(v);
        if s != sign {
            let cut = if sign == Sign::Zero || s == Sign::Zero {
                if s == Sign::Zero {
                    u
                } else {
                    prev_u
                }
            } else {
                bisect(f, prev_u, u, tol)?
            };
            intervals.push(SignInterval { start, end: cut, sign });
            if sign == Sign::Negative {
                witnesses.push(worst);
            }
            start = cut;
            sign = s;
            worst = NegativityWitness { u, value: v };
        }
        if v < worst.value {
            worst = NegativityWitness { u, value: v };
        }
        prev_u = u;
    }
    intervals.push(SignInterval { start, end: b, sign });
    if sign == Sign::Negative {
        witnesses.push(worst);
    }
    Ok(MonotonicityReport { intervals, witnesses })
}

/// Sign-change refinement width used by [`monotonicity_scan`].
pub const SCAN_REFINE_WIDTH: f64 = 1e-6;

/// Sign intervals of a spectral density; any negative interval certifies that
/// the spectral function is not monotone.
pub fn monotonicity_scan<F: Fn(f64) -> Result<f64>>(
    density: F,
    range: (f64, f64),
    step: f64,
) -> Result<MonotonicityReport> {
    if !(step > 0.0) || !(range.1 > range.0) {
        return Err(crate::error::QidError::DomainError(format!(
            "scan needs step > 0 and a < b, got step {step}, range {range:?}"
        )));
    }
    sign_scan(&density, range.0, range.1, step, SCAN_REFINE_WIDTH)
}

/// Sign changes only.
pub fn sign_changes<F: Fn(f64) -> Result<f64>>(f: &F, a: f64, b: f64, step: f64, tol: f64) -> Result<Vec<f64>> {
    let r = sign_scan(f, a, b, step, tol)?;
    Ok(r.intervals.iter().skip(1).map(|i| i.start).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn cosine_sign_structure() {
        let f = |u: f64| Ok(u.cos());
        let r = sign_scan(&f, 0.0, 10.0, 0.05, 1e-12).unwrap();
        assert_eq!(r.intervals.len(), 4);
        assert_abs_diff_eq!(r.intervals[0].end, std::f64::consts::FRAC_PI_2, epsilon = 1e-11);
        assert_eq!(r.intervals[1].sign, Sign::Negative);
        assert_eq!(r.witnesses.len(), 2);
        assert!((r.witnesses[0].u - std::f64::consts::PI).abs() < 0.05);
        let c = sign_changes(&f, 0.0, 10.0, 0.05, 1e-12).unwrap();
        assert_eq!(c.len(), 3);
    }

    #[test]
    fn cauchy_density_is_positive() {
        let r = monotonicity_scan(|u| Ok(1.0 / (std::f64::consts::PI * (1.0 + u * u))), (-10.0, 10.0), 0.05).unwrap();
        assert_eq!(r.intervals.len(), 1);
        assert_eq!(r.intervals[0].sign, Sign::Positive);
        assert!(monotonicity_scan(|_| Ok(1.0), (0.0, 1.0), 0.0).is_err());
    }

    #[test]
    fn zero_function() {
        let f = |_: f64| Ok(0.0);
        let r = sign_scan(&f, 0.0, 1.0, 0.1, 1e-6).unwrap();
        assert_eq!(r.intervals.len(), 1);
        assert!(r.witnesses.is_empty());
    }
}
