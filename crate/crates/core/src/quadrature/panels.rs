use num_complex::Complex64;

use super::engine::{gauss_weight, WGK, XGK};
use crate::error::Result;
use crate::par::{self, Exec};

/// Fixed GK15 panels with a function sampled once at every node.
///
/// Used when many transforms of the same function are needed: the function
/// values are reused and only the kernel is re-evaluated.
#[derive(Debug, Clone)]
pub struct SampledPanels {
    nodes: Vec<f64>,
    weights: Vec<(f64, f64)>,
    values: Vec<f64>,
}

pub const NODES_PER_PANEL: usize = 15;

impl SampledPanels {
    /// Breakpoints on `[start, end]` with local width at most `width(x)`,
    /// evaluated at the left end of each panel.
    pub fn graded_breaks<W: Fn(f64) -> f64>(start: f64, end: f64, width: W) -> Vec<f64> {
        let mut out = vec![start];
        let mut x = start;
        while x < end {
            let w = width(x).max(1e-12);
            x = if x + w >= end || end - (x + w) < 1e-3 * w { end } else { x + w };
            out.push(x);
        }
        out
    }

    /// Node layout for the given breakpoints; values are left empty.
    pub fn layout(breaks: &[f64]) -> Self {
        let panels = breaks.len().saturating_sub(1);
        let mut nodes = Vec::with_capacity(panels * NODES_PER_PANEL);
        let mut weights = Vec::with_capacity(panels * NODES_PER_PANEL);
        for w in breaks.windows(2) {
            let c = 0.5 * (w[0] + w[1]);
            let h = 0.5 * (w[1] - w[0]);
            for j in 0..7 {
                for s in [-1.0, 1.0] {
                    nodes.push(c + s * h * XGK[j]);
                    weights.push((h * WGK[j], h * gauss_weight(j)));
                }
            }
            nodes.push(c);
            weights.push((h * WGK[7], h * gauss_weight(7)));
        }
        SampledPanels { nodes, weights, values: Vec::new() }
    }

    /// Samples `f` at every node.
    pub fn sample<F: Fn(f64) -> f64 + Sync + Send>(breaks: &[f64], exec: Exec, f: F) -> Self {
        let mut p = Self::layout(breaks);
        p.values = par::map(exec, &p.nodes, |&x| f(x));
        p
    }

    /// Samples a fallible `f` at every node; the first error wins.
    pub fn try_sample<F: Fn(f64) -> Result<f64> + Sync + Send>(breaks: &[f64], exec: Exec, f: F) -> Result<Self> {
        let mut p = Self::layout(breaks);
        p.values = par::map(exec, &p.nodes, |&x| f(x)).into_iter().collect::<Result<_>>()?;
        Ok(p)
    }

    /// Replaces the node values with `g(x, old_value)`.
    pub fn map_values<G: Fn(f64, f64) -> f64>(&self, g: G) -> Self {
        let values = self.nodes.iter().zip(&self.values).map(|(&x, &v)| g(x, v)).collect();
        SampledPanels { nodes: self.nodes.clone(), weights: self.weights.clone(), values }
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    /// `(Kronrod, Gauss)` weight of every node.
    pub fn weights(&self) -> &[(f64, f64)] {
        &self.weights
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn panel_count(&self) -> usize {
        self.nodes.len() / NODES_PER_PANEL
    }

    /// `Σ kernel(x, f(x))·w` with the summed per-panel Kronrod–Gauss gap.
    pub fn integrate<K: Fn(f64, f64) -> Complex64>(&self, kernel: K) -> (Complex64, f64) {
        let mut total = Complex64::new(0.0, 0.0);
        let mut err = 0.0;
        for p in 0..self.panel_count() {
            let mut k = Complex64::new(0.0, 0.0);
            let mut g = Complex64::new(0.0, 0.0);
            for i in p * NODES_PER_PANEL..(p + 1) * NODES_PER_PANEL {
                let v = kernel(self.nodes[i], self.values[i]);
                k += v * self.weights[i].0;
                g += v * self.weights[i].1;
            }
            total += k;
            err += (k - g).norm();
        }
        (total, err)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn breaks_cover_interval() {
        let b = SampledPanels::graded_breaks(0.0, 10.0, |x| 0.5 + 0.1 * x);
        assert_eq!(b[0], 0.0);
        assert_eq!(*b.last().unwrap(), 10.0);
        assert!(b.windows(2).all(|w| w[1] > w[0] && w[1] - w[0] <= 0.5 + 0.1 * w[0] + 1e-12));
    }

    #[test]
    fn integrates_gaussian_moments() {
        let b = SampledPanels::graded_breaks(-12.0, 12.0, |_| 0.5);
        let p = SampledPanels::sample(&b, Exec::Sequential, |x| (-x * x / 2.0).exp());
        let (mass, err) = p.integrate(|_, v| Complex64::new(v, 0.0));
        assert_abs_diff_eq!(mass.re, (2.0 * std::f64::consts::PI).sqrt(), epsilon = 1e-12);
        assert!(err < 1e-10);
        let (cf, _) = p.integrate(|x, v| Complex64::new(0.0, 1.5 * x).exp() * v);
        assert_abs_diff_eq!(cf.re, (2.0 * std::f64::consts::PI).sqrt() * (-1.125f64).exp(), epsilon = 1e-12);
        assert_abs_diff_eq!(cf.im, 0.0, epsilon = 1e-12);
    }

    #[test]
    fn parallel_sampling_matches() {
        let b = SampledPanels::graded_breaks(0.0, 3.0, |_| 0.1);
        let a = SampledPanels::sample(&b, Exec::Sequential, f64::sin);
        let c = SampledPanels::sample(&b, Exec::Parallel, f64::sin);
        assert_eq!(a.values(), c.values());
    }
}
