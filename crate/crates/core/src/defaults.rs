//! Every numeric default used by the verification pipelines, in one place.
//!
//! Ranges are `(start, end, step)` and include both ends.

/// Absolute tolerance of the quadrature engine.
pub const ABS_TOL: f64 = 1e-8;
/// Seed of the sampler and the certificate fingerprint.
pub const SEED: u64 = 42;

/// Inversion of `Λ` against `q`.
pub const INVERSION_RANGE: (f64, f64, f64) = (-50.0, 50.0, 0.25);
pub const INVERSION_TOL: f64 = 1e-8;

/// Two-sided bound `1 ≤ q·eπ(1+x²) ≤ 2e+2`, checked on [`INVERSION_RANGE`].
pub const Q_BOUND_TOL: f64 = 1e-12;

/// Bound `|h|·eπ(1+x²) ≤ e + (2n)! + (4n)!`.
pub const H_RANGE: (f64, f64, f64) = (-30.0, 30.0, 0.5);
pub const H_BOUND_SLACK: f64 = 1e-6;
/// Largest accepted imaginary residue of `h`.
pub const H_IMAG_TOL: f64 = 1e-8;
pub const H_ORDERS: [u32; 2] = [1, 2];

/// Relative accuracy of `K` against `(2n)! + (4n)!`.
pub const K_REL_TOL: f64 = 1e-6;
pub const K_ORDERS: [u32; 3] = [1, 2, 3];

/// Density/characteristic-function round trip for `p₁`.
pub const ROUND_TRIP_RANGE: (f64, f64, f64) = (-10.0, 10.0, 0.1);
pub const ROUND_TRIP_TOL: f64 = 1e-6;
pub const MASS_TOL: f64 = 1e-8;
/// Most negative accepted value of the sampled `p₁`.
pub const DENSITY_FLOOR: f64 = -1e-10;

/// Distinguished logarithm against the closed form.
pub const LOG_RANGE: (f64, f64, f64) = (-5.0, 5.0, 0.05);
pub const LOG_TOL: f64 = 1e-6;

/// Growth obstruction.
pub const GROWTH_RATIO_T: f64 = 200.0;
pub const GROWTH_RATIO_TOL: f64 = 1e-6;
/// Largest probe for order `n`; probes are `T/10, 2T/10, …, T`. Chosen so
/// the unwrapping grid (step `~1/t^{2n}`) stays below a few million points.
pub fn growth_probe_max(n: u32) -> f64 {
    match n {
        1 => 100.0,
        2 => 10.0,
        _ => 5.0,
    }
}

/// Closed form of `g_m` against its integral.
pub const GM_RANGE: (f64, f64, f64) = (0.5, 100.0, 0.25);
pub const GM_TOL: f64 = 1e-8;

/// Lévy–Khinchine reconstruction of `|f₁|`.
pub const LK_RANGE: (f64, f64, f64) = (-5.0, 5.0, 0.05);
pub const LK_TOL: f64 = 1e-6;
pub const LK_ARG_TOL: f64 = 1e-8;
/// Cauchy baseline `e^{-|t|}`.
pub const CAUCHY_RANGE: (f64, f64, f64) = (-10.0, 10.0, 0.05);
pub const CAUCHY_TOL: f64 = 1e-8;
/// Integration cutoff for `G_{1,a}`; its tail beyond is exact.
pub const G1A_CUTOFF: f64 = 200.0;

/// Non-monotonicity scan.
pub const SCAN_STEP: f64 = 0.05;
pub const SCAN_DELTA: f64 = 0.03;
pub const SCAN_RANGE: (f64, f64) = (0.0, 100.0);
/// The witness must lie within this distance of `20π`.
pub const SCAN_WITNESS_RADIUS: f64 = 0.5;
/// A certified witness has `πu²g_m(u) + 1` below this.
pub const SCAN_WITNESS_LEVEL: f64 = -1e-4;

/// Theorem 1: product identity and reconstruction of `|f₁|²`.
pub const THM1_RANGE: (f64, f64, f64) = (-5.0, 5.0, 0.05);
pub const THM1_PRODUCT_TOL: f64 = 1e-12;
pub const THM1_LK_TOL: f64 = 1e-6;

/// Theorem 2: Hahn–Jordan split.
pub const THM2_RANGE: (f64, f64, f64) = (-3.0, 3.0, 0.05);
pub const THM2_TOL: f64 = 1e-6;

/// Sampler.
pub const SAMPLE_COUNT: usize = 100_000;
pub const ACCEPTANCE_TOL: f64 = 0.02;
pub const CF_PROBES: [f64; 3] = [0.5, 1.0, 2.0];
/// Radius multiplier: `|empirical - exact| ≤ CF_RADIUS/√N`.
pub const CF_RADIUS: f64 = 4.0;

/// Tabulation ranges when none is given: densities in `x`, characteristic
/// functions in `t`.
pub const TABULATE_X_RANGE: (f64, f64, f64) = (-10.0, 10.0, 0.1);
pub const TABULATE_T_RANGE: (f64, f64, f64) = (-5.0, 5.0, 0.01);

/// Points of a `(start, end, step)` range, both ends included.
pub fn grid(range: (f64, f64, f64)) -> Vec<f64> {
    let (a, b, step) = range;
    let count = ((b - a) / step + 1e-9).floor() as usize;
    (0..=count).map(|i| a + i as f64 * step).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_includes_ends() {
        let g = grid(INVERSION_RANGE);
        assert_eq!(g.len(), 401);
        assert_eq!(g[0], -50.0);
        assert_eq!(*g.last().unwrap(), 50.0);
        assert_eq!(grid(THM2_RANGE).len(), 121);
    }
}
