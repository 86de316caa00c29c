//! Grid estimators for the continuous and discrete Muckenhoupt conditions
//! and the continuous and discrete Hilbert transforms.
//!
//! Both Muckenhoupt estimators only see finitely many intervals, so a
//! `Bounded` verdict is a lower-bound heuristic, not a certificate.

use alloc::string::String;
use alloc::vec::Vec;
use core::f64::consts::PI;

use num_traits::Float;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::POLE_THRESHOLD;
use crate::quadrature::exp_sinh;
use crate::Complex;

/// Successive per-scale maxima growing by more than this factor count as
/// divergence.
pub const GROWTH_THRESHOLD: f64 = 1.25;
/// Smallest relative increment that still counts as growth.
pub const MIN_INCREMENT: f64 = 0.01;
/// Increments shrinking faster than this factor are read as convergence.
pub const INCREMENT_DECAY: f64 = 0.8;
/// Weight samples below this are rejected.
pub const WEIGHT_FLOOR: f64 = 1e-300;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ApVerdict {
    Bounded,
    Growing,
    Inconclusive,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScaleMax {
    pub scale: f64,
    pub max_ratio: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ApReport {
    pub estimate: f64,
    pub per_scale: Vec<ScaleMax>,
    pub verdict: ApVerdict,
    pub p: f64,
    pub grid: String,
}

/// Classifies the per-scale maxima (in increasing scale order).
///
/// Growing when the last three maxima increase and either both steps exceed
/// [`GROWTH_THRESHOLD`], or both relative increments are at least
/// [`MIN_INCREMENT`] and the second is not below [`INCREMENT_DECAY`] times
/// the first. Logarithmic blow-up shows up in the second branch.
pub fn ap_verdict(per_scale: &[ScaleMax]) -> ApVerdict {
    if per_scale.len() < 3 || per_scale.iter().any(|s| !s.max_ratio.is_finite()) {
        return ApVerdict::Inconclusive;
    }
    let n = per_scale.len();
    let (a, b, c) = (
        per_scale[n - 3].max_ratio,
        per_scale[n - 2].max_ratio,
        per_scale[n - 1].max_ratio,
    );
    if !(a < b && b < c) {
        return ApVerdict::Bounded;
    }
    let (r1, r2) = (b / a, c / b);
    if r1 > GROWTH_THRESHOLD && r2 > GROWTH_THRESHOLD {
        return ApVerdict::Growing;
    }
    let (i1, i2) = (r1 - 1.0, r2 - 1.0);
    if i1 >= MIN_INCREMENT && i2 >= MIN_INCREMENT && i2 >= INCREMENT_DECAY * i1 {
        ApVerdict::Growing
    } else {
        ApVerdict::Bounded
    }
}

fn finish(per_scale: Vec<ScaleMax>, p: f64, grid: String) -> ApReport {
    let estimate = per_scale.iter().map(|s| s.max_ratio).fold(0.0, f64::max);
    let verdict = ap_verdict(&per_scale);
    ApReport {
        estimate,
        per_scale,
        verdict,
        p,
        grid,
    }
}

fn check_p(p: f64) -> Result<()> {
    if p > 1.0 && p.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParameter("p must lie in (1, inf)"))
    }
}

fn check_weights(w: &[f64]) -> Result<()> {
    for (index, &value) in w.iter().enumerate() {
        if !(value >= WEIGHT_FLOOR) || !value.is_finite() {
            return Err(Error::NonPositiveWeight { index, value });
        }
    }
    Ok(())
}

/// Compensated running sum.
#[derive(Clone, Copy, Default)]
struct TwoSum {
    hi: f64,
    lo: f64,
}

impl TwoSum {
    fn add(&mut self, x: f64) {
        let s = self.hi + x;
        let bp = s - self.hi;
        let err = (self.hi - (s - bp)) + (x - bp);
        self.hi = s;
        self.lo += err;
    }

    fn minus(self, other: TwoSum) -> f64 {
        (self.hi - other.hi) + (self.lo - other.lo)
    }
}

fn prefix_trapezoid(xs: &[f64], v: &[f64]) -> Vec<TwoSum> {
    let mut out = Vec::with_capacity(xs.len());
    let mut acc = TwoSum::default();
    out.push(acc);
    for i in 1..xs.len() {
        acc.add(0.5 * (v[i - 1] + v[i]) * (xs[i] - xs[i - 1]));
        out.push(acc);
    }
    out
}

/// `sup_I (avg_I w)(avg_I w^(-1/(p-1)))^(p-1)` over grid-aligned intervals of
/// the given lengths inside `window`, averages by the trapezoid rule.
pub fn continuous_ap(
    xs: &[f64],
    w: &[f64],
    p: f64,
    scales: &[f64],
    window: (f64, f64),
) -> Result<ApReport> {
    check_p(p)?;
    if xs.len() != w.len() {
        return Err(Error::ValueCountMismatch {
            expected: xs.len(),
            got: w.len(),
        });
    }
    if xs.windows(2).any(|s| !(s[1] > s[0])) {
        return Err(Error::InvalidParameter("grid must be strictly increasing"));
    }
    let lo = xs.partition_point(|&x| x < window.0);
    let hi = xs.partition_point(|&x| x <= window.1);
    let (xs, w) = (&xs[lo..hi], &w[lo..hi]);
    if xs.len() < 2 {
        return Err(Error::EmptyGrid);
    }
    check_weights(w)?;
    let q = 1.0 / (p - 1.0);
    let v: Vec<f64> = w.iter().map(|&x| x.powf(-q)).collect();
    let ones = alloc::vec![1.0; xs.len()];
    let tw = prefix_trapezoid(xs, w);
    let tv = prefix_trapezoid(xs, &v);
    let t1 = prefix_trapezoid(xs, &ones);

    let mut sorted: Vec<f64> = scales.iter().copied().filter(|s| *s > 0.0).collect();
    sorted.sort_by(f64::total_cmp);
    let mut per_scale = Vec::new();
    for &ell in &sorted {
        let mut best: Option<f64> = None;
        let mut j = 0;
        for i in 0..xs.len() {
            let target = xs[i] + ell * (1.0 - 1e-9);
            if j <= i {
                j = i + 1;
            }
            while j < xs.len() && xs[j] < target {
                j += 1;
            }
            if j >= xs.len() {
                break;
            }
            let len = t1[j].minus(t1[i]);
            let aw = tw[j].minus(tw[i]) / len;
            let av = tv[j].minus(tv[i]) / len;
            let r = aw * av.powf(p - 1.0);
            best = Some(best.map_or(r, |b: f64| b.max(r)));
        }
        if let Some(m) = best {
            per_scale.push(ScaleMax {
                scale: ell,
                max_ratio: m,
            });
        }
    }
    let grid = alloc::format!(
        "{} samples on [{}, {}], {} scales",
        xs.len(),
        xs[0],
        xs[xs.len() - 1],
        per_scale.len()
    );
    Ok(finish(per_scale, p, grid))
}

/// Exhaustive `max (avg w)(avg w^(-1/(p-1)))^(p-1)` over index windows of
/// length at most `max_window`. Scales are dyadic window-length buckets
/// `(2^(j-1), 2^j]`.
pub fn discrete_ap(w: &[f64], p: f64, max_window: usize) -> Result<ApReport> {
    check_p(p)?;
    if w.is_empty() || max_window == 0 {
        return Err(Error::EmptyGrid);
    }
    check_weights(w)?;
    let q = 1.0 / (p - 1.0);
    let v: Vec<f64> = w.iter().map(|&x| x.powf(-q)).collect();
    let max_len = max_window.min(w.len());
    let buckets = usize::BITS - (max_len - 1).leading_zeros();
    let mut best = alloc::vec![0.0f64; buckets as usize + 1];
    for start in 0..w.len() {
        let (mut sw, mut sv) = (0.0, 0.0);
        for len in 1..=max_len.min(w.len() - start) {
            sw += w[start + len - 1];
            sv += v[start + len - 1];
            let l = len as f64;
            let r = (sw / l) * (sv / l).powf(p - 1.0);
            let b = (usize::BITS - (len - 1).leading_zeros()) as usize;
            if r > best[b] {
                best[b] = r;
            }
        }
    }
    let per_scale = best
        .iter()
        .enumerate()
        .map(|(b, &m)| ScaleMax {
            scale: (1u64 << b) as f64,
            max_ratio: m,
        })
        .collect();
    let grid = alloc::format!("{} weights, windows up to {}", w.len(), max_len);
    Ok(finish(per_scale, p, grid))
}

/// `H f(z) = int f(t) / (t - z) dt`, a principal value when `z` is real.
///
/// The integral is folded around `x = Re z` and the constant part
/// `i pi sign(Im z) f(x)` is added back in closed form; the remainder is
/// integrated with exp-sinh quadrature. `f` must be continuous near `x` and
/// decay at infinity.
pub fn hilbert_pv<F>(f: F, z: Complex) -> Result<Complex>
where
    F: Fn(f64) -> Complex,
{
    if !z.re.is_finite() || !z.im.is_finite() {
        return Err(Error::NonFinite);
    }
    let (x, y) = (z.re, z.im);
    let fx = f(x);
    let iy = Complex::new(0.0, y);
    let body = exp_sinh(
        |s| (f(x + s) - fx) / (s - iy) - (f(x - s) - fx) / (s + iy),
        1e-12,
    )?;
    let sign = if y > 0.0 {
        1.0
    } else if y < 0.0 {
        -1.0
    } else {
        0.0
    };
    Ok(body + fx * Complex::new(0.0, PI * sign))
}

/// `(H a)_n = sum_j a_j / (gamma_j - sigma_n)`.
pub fn discrete_hilbert(gamma: &[Complex], sigma: &[Complex], a: &[Complex]) -> Result<Vec<Complex>> {
    if a.len() != gamma.len() {
        return Err(Error::ValueCountMismatch {
            expected: gamma.len(),
            got: a.len(),
        });
    }
    sigma
        .iter()
        .map(|&s| {
            let mut acc = Complex::new(0.0, 0.0);
            for (&g, &aj) in gamma.iter().zip(a) {
                let d = g - s;
                if d.norm() < POLE_THRESHOLD {
                    return Err(Error::CoincidentPoint(s));
                }
                acc += aj / d;
            }
            Ok(acc)
        })
        .collect()
}
