//! Distinguished logarithm by continuous phase unwrapping, and the growth
//! obstruction test.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{QidError, Result};
use crate::model::{ln_f1_closed, ModelParams};
use crate::par::{self, Exec};

/// Complex samples on a strictly increasing grid containing `0`.
#[derive(Debug, Clone, PartialEq)]
pub struct FunctionGrid {
    ts: Vec<f64>,
    values: Vec<Complex64>,
}

impl FunctionGrid {
    pub fn new(ts: Vec<f64>, values: Vec<Complex64>) -> Result<Self> {
        if ts.len() != values.len() || ts.is_empty() {
            return Err(QidError::InvalidGrid("nodes and values differ in length".into()));
        }
        if ts.windows(2).any(|w| !(w[0] < w[1])) {
            return Err(QidError::InvalidGrid("nodes must be strictly increasing".into()));
        }
        if ts.binary_search_by(|t| t.total_cmp(&0.0)).is_err() {
            return Err(QidError::InvalidGrid("grid must contain t = 0".into()));
        }
        Ok(FunctionGrid { ts, values })
    }

    /// Samples `f` on `ts`.
    pub fn sample<F: Fn(f64) -> Complex64 + Sync + Send>(ts: Vec<f64>, exec: Exec, f: F) -> Result<Self> {
        let values = par::map(exec, &ts, |&t| f(t));
        Self::new(ts, values)
    }

    pub fn ts(&self) -> &[f64] {
        &self.ts
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn origin_index(&self) -> usize {
        self.ts.binary_search_by(|t| t.total_cmp(&0.0)).expect("grid contains 0")
    }
}

/// `ln|f|` and the unwrapped argument of `f` on a grid.
#[derive(Debug, Clone, PartialEq)]
pub struct LogCfGrid {
    pub ts: Vec<f64>,
    pub ln_abs: Vec<f64>,
    pub arg: Vec<f64>,
}

impl LogCfGrid {
    /// `ln_abs + i·arg` at node `k`.
    pub fn log_at(&self, k: usize) -> Complex64 {
        Complex64::new(self.ln_abs[k], self.arg[k])
    }

    /// Linear interpolation of the logarithm at `t` inside the grid.
    pub fn interpolate(&self, t: f64) -> Option<Complex64> {
        let last = self.ts.len() - 1;
        if t < self.ts[0] || t > self.ts[last] {
            return None;
        }
        let k = self.ts.partition_point(|&s| s <= t).min(last).max(1) - 1;
        let (t0, t1) = (self.ts[k], self.ts[k + 1]);
        let w = (t - t0) / (t1 - t0);
        Some(self.log_at(k) * (1.0 - w) + self.log_at(k + 1) * w)
    }
}

/// Principal value of `arg(b/a)`.
fn principal_step(a: Complex64, b: Complex64) -> f64 {
    (b * a.conj()).arg()
}

/// Unwraps the argument outward from `t = 0`:
/// `arg(t_{k±1}) = arg(t_k) + Arg(f(t_{k±1})/f(t_k))`.
///
/// The starting value is the principal argument at `0` (zero for
/// characteristic functions).
pub fn unwrap_phase(grid: &FunctionGrid) -> Result<LogCfGrid> {
    let ts = grid.ts();
    let vs = grid.values();
    if let Some(k) = vs.iter().position(|v| v.norm() == 0.0) {
        return Err(QidError::ZeroCrossing(ts[k]));
    }
    let origin = grid.origin_index();
    let mut arg = vec![0.0; ts.len()];
    arg[origin] = vs[origin].arg();
    let limit = PI * (1.0 - 1e-12);
    for k in origin + 1..ts.len() {
        let step = principal_step(vs[k - 1], vs[k]);
        if step.abs() >= limit {
            return Err(QidError::UnresolvablePhaseJump { t0: ts[k - 1], t1: ts[k] });
        }
        arg[k] = arg[k - 1] + step;
    }
    for k in (0..origin).rev() {
        let step = principal_step(vs[k + 1], vs[k]);
        if step.abs() >= limit {
            return Err(QidError::UnresolvablePhaseJump { t0: ts[k], t1: ts[k + 1] });
        }
        arg[k] = arg[k + 1] + step;
    }
    Ok(LogCfGrid { ts: ts.to_vec(), ln_abs: vs.iter().map(|v| v.norm().ln()).collect(), arg })
}

/// Symmetric nodes on `[-t_max, t_max]` with `0` and `±1` as nodes and steps
/// at most `π/(2·rate)`, the rate taken at the far end of each step.
pub fn grid_nodes<R: Fn(f64) -> f64>(t_max: f64, phase_rate_bound: R) -> Vec<f64> {
    let mut right = vec![0.0];
    let mut t = 0.0;
    let marks = [1.0f64, t_max];
    while t < t_max {
        let mut h = PI / (2.0 * phase_rate_bound(t).max(1e-300));
        h = h.min(PI / (2.0 * phase_rate_bound(t + h).max(1e-300)));
        let mut next = t + h;
        for &m in &marks {
            if t < m && next > m {
                next = m;
            }
        }
        t = next.min(t_max);
        right.push(t);
    }
    let mut out: Vec<f64> = right.iter().rev().map(|t| -t).collect();
    out.pop();
    out.extend(right);
    out
}

/// Samples `cf` on [`grid_nodes`].
pub fn refine_grid<F, R>(cf: F, t_max: f64, phase_rate_bound: R) -> FunctionGrid
where
    F: Fn(f64) -> Complex64 + Sync + Send,
    R: Fn(f64) -> f64,
{
    let ts = grid_nodes(t_max, phase_rate_bound);
    FunctionGrid::sample(ts, Exec::available(), cf).expect("nodes are valid by construction")
}

/// `|Ln f₁(t)|·(2n+1)/(t-1)^{2n+1}`, which tends to 1.
pub fn growth_ratio(params: &ModelParams, t: f64) -> Result<f64> {
    if !(t > 1.0) {
        return Err(QidError::DomainError(format!("growth ratio needs t > 1, got {t}")));
    }
    let m = 2 * params.n() as i32 + 1;
    Ok(ln_f1_closed(params, t).norm() * m as f64 / (t - 1.0).powi(m))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GrowthVerdict {
    /// `false` is evidence of non-membership; `true` is never a membership claim.
    pub is_candidate_qid: bool,
    pub max_ratio: f64,
    pub witness_t: f64,
    /// Largest `|Ln f(t)|/t²` over the lower and upper half of the probes.
    pub lower_max: f64,
    pub upper_max: f64,
}

pub const MIN_PROBES: usize = 10;

/// Tracks `|Ln f(t)|/t²` over the probes. A characteristic function of a law
/// in the rational class has this ratio bounded; the verdict flags growth
/// when the largest ratio over the upper half of the probes is at least
/// twice the largest over the lower half.
pub fn qid_growth_test(log_grid: &LogCfGrid, probes: &[f64]) -> Result<GrowthVerdict> {
    if probes.len() < MIN_PROBES || probes.windows(2).any(|w| !(w[0] < w[1])) {
        return Err(QidError::DomainError(format!("need at least {MIN_PROBES} increasing probes")));
    }
    let mut ratios = Vec::with_capacity(probes.len());
    for &t in probes {
        let v = log_grid.interpolate(t).ok_or_else(|| QidError::DomainError(format!("probe {t} outside grid")))?;
        ratios.push(v.norm() / (t * t));
    }
    let half = probes.len() / 2;
    let lower = ratios[..half].iter().cloned().fold(0.0, f64::max);
    let upper = ratios[half..].iter().cloned().fold(0.0, f64::max);
    let (k, &max_ratio) = ratios.iter().enumerate().max_by(|a, b| a.1.total_cmp(b.1)).expect("non-empty");
    Ok(GrowthVerdict {
        is_candidate_qid: upper < 2.0 * lower,
        max_ratio,
        witness_t: probes[k],
        lower_max: lower,
        upper_max: upper,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{f1_cf, phi, phi_rate, triangle};
    use approx::assert_abs_diff_eq;

    fn p1() -> ModelParams {
        ModelParams::new(1, 0.03).unwrap()
    }

    #[test]
    fn positive_function_has_zero_arg() {
        let g = refine_grid(|t| Complex64::new((-t.abs()).exp(), 0.0), 5.0, |_| 1.0);
        let l = unwrap_phase(&g).unwrap();
        assert!(l.arg.iter().all(|&a| a == 0.0));
    }

    #[test]
    fn linear_phase_crosses_branch_cut() {
        let g = refine_grid(|t| Complex64::new(0.0, 3.0 * t).exp(), 5.0, |_| 3.0);
        let l = unwrap_phase(&g).unwrap();
        for (t, a) in l.ts.iter().zip(&l.arg) {
            assert_abs_diff_eq!(*a, 3.0 * t, epsilon = 1e-12);
        }
    }

    #[test]
    fn f1_arg_is_phi() {
        for n in [1, 2] {
            let p = ModelParams::with_default_delta(n).unwrap();
            let g = refine_grid(|t| f1_cf(&p, t), 5.0, |t| phi_rate(&p, t) + 1.0);
            let l = unwrap_phase(&g).unwrap();
            let d = p.delta();
            for (k, &t) in l.ts.iter().enumerate() {
                assert_abs_diff_eq!(l.arg[k], phi(&p, t), epsilon = 1e-9);
                let expect = ((triangle(t) + d) / (1.0 + d)).ln() - t.abs();
                assert_abs_diff_eq!(l.ln_abs[k], expect, epsilon = 1e-12);
                let back = Complex64::new(l.ln_abs[k], l.arg[k]).exp();
                assert!((back - g.values()[k]).norm() <= 1e-12);
            }
            let k = l.ts.iter().position(|&t| t == 2.0);
            if let (1, Some(k)) = (n, k) {
                assert_abs_diff_eq!(l.arg[k], 1.0 / 3.0, epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn hermitian_grid_gives_odd_arg() {
        let p = p1();
        let g = refine_grid(|t| f1_cf(&p, t), 6.0, |t| phi_rate(&p, t) + 1.0);
        let l = unwrap_phase(&g).unwrap();
        let m = l.ts.len();
        for k in 0..m {
            assert_eq!(l.ts[k], -l.ts[m - 1 - k]);
            assert_eq!(l.arg[k], -l.arg[m - 1 - k]);
            assert_eq!(l.ln_abs[k], l.ln_abs[m - 1 - k]);
        }
    }

    #[test]
    fn step_rule_and_marks() {
        let p = p1();
        let ts = grid_nodes(5.0, |t| phi_rate(&p, t) + 1.0);
        for m in [-1.0, 0.0, 1.0, -5.0, 5.0] {
            assert!(ts.contains(&m));
        }
        for w in ts.windows(2) {
            let far = w[0].abs().max(w[1].abs());
            assert!(w[1] - w[0] <= PI / (2.0 * (phi_rate(&p, far) + 1.0)) + 1e-15);
        }
        let last = ts[ts.len() - 1] - ts[ts.len() - 2];
        assert!(last <= PI / 34.0 + 1e-15);
        let flat = grid_nodes(10.0, |_| 1.0);
        assert!(flat.windows(2).all(|w| w[1] - w[0] <= PI / 2.0 + 1e-15));
    }

    #[test]
    fn refinement_is_stable() {
        let p = p1();
        let coarse = unwrap_phase(&refine_grid(|t| f1_cf(&p, t), 4.0, |t| phi_rate(&p, t) + 1.0)).unwrap();
        let fine = unwrap_phase(&refine_grid(|t| f1_cf(&p, t), 4.0, |t| 2.0 * (phi_rate(&p, t) + 1.0))).unwrap();
        for (k, &t) in coarse.ts.iter().enumerate() {
            if let Ok(j) = fine.ts.binary_search_by(|s| s.total_cmp(&t)) {
                assert!((coarse.arg[k] - fine.arg[j]).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn errors() {
        let g =
            FunctionGrid::new(vec![-1.0, 0.0, 1.0], vec![Complex64::new(0.0, 0.0), 1.0.into(), 1.0.into()]).unwrap();
        assert_eq!(unwrap_phase(&g).unwrap_err(), QidError::ZeroCrossing(-1.0));
        let g = FunctionGrid::new(vec![0.0, 1.0], vec![1.0.into(), Complex64::new(-1.0, 0.0)]).unwrap();
        assert!(matches!(unwrap_phase(&g), Err(QidError::UnresolvablePhaseJump { .. })));
        assert!(FunctionGrid::new(vec![1.0, 2.0], vec![1.0.into(), 1.0.into()]).is_err());
        assert!(FunctionGrid::new(vec![0.0, 0.0], vec![1.0.into(), 1.0.into()]).is_err());
        assert!(growth_ratio(&p1(), 1.0).is_err());
    }

    #[test]
    fn growth_ratio_values() {
        let p = p1();
        assert_abs_diff_eq!(growth_ratio(&p, 200.0).unwrap(), 1.0, epsilon = 1e-6);
        let v = Complex64::new((0.03f64 / 1.03).ln() - 2.0, 1.0 / 3.0).norm() * 3.0;
        assert_abs_diff_eq!(growth_ratio(&p, 2.0).unwrap(), v, epsilon = 1e-14);
        let r100 = growth_ratio(&p, 100.0).unwrap();
        let r400 = growth_ratio(&p, 400.0).unwrap();
        assert!((r400 - 1.0).abs() < (r100 - 1.0).abs());
    }

    #[test]
    fn growth_test_verdicts() {
        let p = p1();
        let probes: Vec<f64> = (1..=10).map(|k| 10.0 * k as f64).collect();
        let f1 = unwrap_phase(&refine_grid(|t| f1_cf(&p, t), 100.0, |t| phi_rate(&p, t) + 1.0)).unwrap();
        let v = qid_growth_test(&f1, &probes).unwrap();
        assert!(!v.is_candidate_qid);
        assert_eq!(v.witness_t, 100.0);
        let cauchy = unwrap_phase(&refine_grid(|t| Complex64::new((-t.abs()).exp(), 0.0), 100.0, |_| 1.0)).unwrap();
        assert!(qid_growth_test(&cauchy, &probes).unwrap().is_candidate_qid);
        let sq = unwrap_phase(&refine_grid(|t| f1_cf(&p, t) * f1_cf(&p, t).conj(), 100.0, |_| 1.0)).unwrap();
        assert!(qid_growth_test(&sq, &probes).unwrap().is_candidate_qid);
        assert!(qid_growth_test(&sq, &probes[..5]).is_err());
    }
}
