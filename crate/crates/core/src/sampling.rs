//! Rejection sampler for `p₁` under the envelope `c/(π(1+x²))`, and
//! empirical characteristic-function diagnostics.
//!
//! Stream: shard `k` of seed `s` draws uniforms from `ChaCha8Rng` seeded with
//! `seed_from_u64(s)` on stream `k`. Each proposal consumes two uniforms
//! `(U, V)`: the proposal is `tan(π(U - 1/2))` and it is accepted iff
//! `V·c ≤ p₁(x)·π(1+x²)`. Shards produce fixed shares of the batch and are
//! concatenated in shard order, so batches do not depend on the thread count.

use std::collections::HashMap;
use std::f64::consts::{E, PI};
use std::io::Write;
use std::sync::Mutex;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{QidError, Result};
use crate::model::{q_scaled, ModelParams};
use crate::par::{self, Exec};
use crate::quadrature::{evaluate_h, HRemainder, QuadratureConfig};

/// Number of independent streams a batch is split into.
pub const SHARDS: usize = 8;

#[derive(Debug, Clone, PartialEq)]
pub struct SampleBatch {
    pub values: Vec<f64>,
    pub seed: u64,
    pub proposals_used: u64,
    pub acceptance_rate: f64,
    pub params: ModelParams,
    /// Proposals that needed a full evaluation of `h`.
    pub h_evaluations: u64,
}

impl SampleBatch {
    /// One value per line under a single header cell naming the parameters.
    pub fn write_csv<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        writeln!(out, "value (n={}; delta={:.16e}; seed={})", self.params.n(), self.params.delta(), self.seed)?;
        for v in &self.values {
            writeln!(out, "{v:.16e}")?;
        }
        Ok(())
    }

    pub fn to_csv(&self) -> String {
        let mut buf = Vec::new();
        self.write_csv(&mut buf).expect("writing to memory");
        String::from_utf8(buf).expect("ascii")
    }
}

/// `h(x)` memoized on the bit pattern of `x`.
struct HCache<'a> {
    params: &'a ModelParams,
    cfg: QuadratureConfig,
    map: Mutex<HashMap<u64, f64>>,
}

impl HCache<'_> {
    fn get(&self, x: f64) -> Result<f64> {
        if let Some(&v) = self.map.lock().expect("cache lock").get(&x.to_bits()) {
            return Ok(v);
        }
        let v = evaluate_h(self.params, x, &self.cfg)?.value;
        self.map.lock().expect("cache lock").insert(x.to_bits(), v);
        Ok(v)
    }
}

/// Draws `count` values from `p₁`.
pub fn sample_p1(params: &ModelParams, count: usize, seed: u64, cfg: &QuadratureConfig) -> Result<SampleBatch> {
    sample_p1_with(params, count, seed, cfg, Exec::available())
}

pub fn sample_p1_with(
    params: &ModelParams,
    count: usize,
    seed: u64,
    cfg: &QuadratureConfig,
    exec: Exec,
) -> Result<SampleBatch> {
    if count == 0 {
        return Err(QidError::DomainError("sample count must be at least 1".into()));
    }
    cfg.validate()?;
    let h_cfg = QuadratureConfig { abs_tol: cfg.abs_tol.min(1e-8), ..*cfg };
    let cache = HCache { params, cfg: h_cfg, map: Mutex::new(HashMap::new()) };
    let remainder = HRemainder::new(params);
    let shares: Vec<usize> = (0..SHARDS).map(|k| count / SHARDS + usize::from(k < count % SHARDS)).collect();
    let shards = par::map_range(exec, SHARDS, |k| run_shard(params, shares[k], seed, k as u64, &cache, &remainder));
    let mut values = Vec::with_capacity(count);
    let mut proposals = 0;
    let mut h_evaluations = 0;
    for s in shards {
        let (v, p, h) = s?;
        values.extend(v);
        proposals += p;
        h_evaluations += h;
    }
    Ok(SampleBatch {
        acceptance_rate: values.len() as f64 / proposals as f64,
        values,
        seed,
        proposals_used: proposals,
        params: *params,
        h_evaluations,
    })
}

fn run_shard(
    params: &ModelParams,
    share: usize,
    seed: u64,
    stream: u64,
    cache: &HCache,
    remainder: &HRemainder,
) -> Result<(Vec<f64>, u64, u64)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    let d = params.delta();
    let env = params.envelope();
    let c = env.p1_envelope;
    let h_cap = env.h_upper;
    let mut out = Vec::with_capacity(share);
    let (mut proposals, mut h_evals) = (0u64, 0u64);
    while out.len() < share {
        let u: f64 = rng.gen();
        let v: f64 = rng.gen();
        proposals += 1;
        let x = (PI * (u - 0.5)).tan();
        let level = v * c;
        // Scaled q and a bracket for the scaled h: |hπ(1+x²)| ≤ h_upper and
        // |hπ(1+x²) - 1| ≤ π(1+x²)·(remainder bound).
        let qs = q_scaled(x) / E;
        let spread = PI * (1.0 + x * x) * remainder.pointwise(x);
        let h_lo = (1.0 - spread).max(-h_cap);
        let h_hi = (1.0 + spread).min(h_cap);
        let lo = (qs + d * h_lo) / (1.0 + d);
        let hi = (qs + d * h_hi) / (1.0 + d);
        let accept = if level <= lo {
            true
        } else if level > hi {
            false
        } else {
            h_evals += 1;
            let scaled = (qs + d * cache.get(x)? * PI * (1.0 + x * x)) / (1.0 + d);
            if scaled > c {
                return Err(QidError::EnvelopeViolation { x, scaled, envelope: c });
            }
            level <= scaled
        };
        if accept {
            out.push(x);
        }
    }
    Ok((out, proposals, h_evals))
}

/// Sample mean of `e^{itx}`.
pub fn empirical_cf(batch: &SampleBatch, t: f64) -> Complex64 {
    let mut acc = Complex64::new(0.0, 0.0);
    for &x in &batch.values {
        let (s, c) = (t * x).sin_cos();
        acc += Complex64::new(c, s);
    }
    acc / batch.values.len() as f64
}

#[derive(Debug, Clone, PartialEq)]
pub struct CfDistanceReport {
    /// `(t, |empirical(t) - cf(t)|)`.
    pub per_probe: Vec<(f64, f64)>,
    pub max_diff: f64,
    pub radius: f64,
    pub pass: bool,
}

/// Compares the empirical characteristic function with `cf` at `probes`;
/// passes when every difference is within `4/√N`.
pub fn cf_distance_report<F: Fn(f64) -> Complex64>(
    batch: &SampleBatch,
    cf: F,
    probes: &[f64],
) -> Result<CfDistanceReport> {
    if probes.is_empty() {
        return Err(QidError::DomainError("cf_distance_report needs at least one probe".into()));
    }
    let per_probe: Vec<(f64, f64)> = probes.iter().map(|&t| (t, (empirical_cf(batch, t) - cf(t)).norm())).collect();
    let max_diff = per_probe.iter().map(|p| p.1).fold(0.0, f64::max);
    let radius = crate::defaults::CF_RADIUS / (batch.values.len() as f64).sqrt();
    Ok(CfDistanceReport { per_probe, max_diff, radius, pass: max_diff <= radius })
}
