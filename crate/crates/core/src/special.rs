//! Sine and cosine integrals.
//!
//! `Si(x) = ∫₀ˣ sin(u)/u du`, `Ci(x) = γ + ln x + ∫₀ˣ (cos u - 1)/u du`.
//! Power series below `x = 2`, Lentz continued fraction for `E₁(ix)` above.

use std::f64::consts::FRAC_PI_2;

use num_complex::Complex64;

const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;
const EPS: f64 = 1e-16;
const MAX_ITER: usize = 1000;
const SERIES_LIMIT: f64 = 2.0;

/// `(Ci(t), Si(t) - π/2)` for `t > 0`.
///
/// The second component is returned directly from the continued fraction for
/// large `t`, so differences `Si(a) - Si(b)` of large arguments keep their
/// relative accuracy.
pub fn ci_si_shifted(t: f64) -> (f64, f64) {
    debug_assert!(t > 0.0);
    if t > SERIES_LIMIT {
        let mut b = Complex64::new(1.0, t);
        let mut c = Complex64::new(1.0 / f64::MIN_POSITIVE, 0.0);
        let mut d = b.inv();
        let mut h = d;
        for i in 2..MAX_ITER {
            let a = -(((i - 1) * (i - 1)) as f64);
            b += 2.0;
            d = (d * a + b).inv();
            c = b + c.inv() * a;
            let del = c * d;
            h *= del;
            if (del.re - 1.0).abs() + del.im.abs() < EPS {
                break;
            }
        }
        h *= Complex64::new(t.cos(), -t.sin());
        (-h.re, h.im)
    } else {
        let (ci, si) = series(t);
        (ci, si - FRAC_PI_2)
    }
}

fn series(t: f64) -> (f64, f64) {
    let mut sum = 0.0;
    let mut sums = 0.0;
    let mut sumc = 0.0;
    let mut sign = 1.0;
    let mut fact = 1.0;
    let mut odd = true;
    for k in 1..MAX_ITER {
        fact *= t / k as f64;
        let term = fact / k as f64;
        sum += sign * term;
        let err = term / sum.abs();
        if odd {
            sign = -sign;
            sums = sum;
            sum = sumc;
        } else {
            sumc = sum;
            sum = sums;
        }
        if err < EPS {
            break;
        }
        odd = !odd;
    }
    (sumc + t.ln() + EULER_GAMMA, sums)
}

/// Sine integral, odd in `x`.
pub fn si(x: f64) -> f64 {
    if x == 0.0 {
        return 0.0;
    }
    let t = x.abs();
    let v = if t > SERIES_LIMIT { ci_si_shifted(t).1 + FRAC_PI_2 } else { series(t).1 };
    v.copysign(x)
}

/// Cosine integral for `x > 0`.
pub fn ci(x: f64) -> f64 {
    assert!(x > 0.0, "Ci is defined for positive arguments");
    ci_si_shifted(x).0
}

/// `∫_X^∞ cos(a u)/u² du` for `X > 0`.
pub fn cos_over_sq_tail(a: f64, big_x: f64) -> f64 {
    let a_abs = a.abs();
    if a_abs == 0.0 {
        return 1.0 / big_x;
    }
    (a * big_x).cos() / big_x + a_abs * ci_si_shifted(a_abs * big_x).1
}

/// `∫_X^∞ sin(a u)/u³ du` for `X > 0`.
pub fn sin_over_cube_tail(a: f64, big_x: f64) -> f64 {
    (a * big_x).sin() / (2.0 * big_x * big_x) + 0.5 * a * cos_over_sq_tail(a, big_x)
}
