//! The generating function `S(z) = prod (1 - z/lambda)`, its derivative at
//! the nodes, the weight `d_N`, the group weights `omega_n` and the
//! `alpha(x)` weight interpolation.

use alloc::vec::Vec;
use core::ops::Mul;

use num_traits::Float;
use serde::{Deserialize, Serialize};

use crate::clustering::{NodeSequence, Partition};
use crate::error::{Error, Result};
use crate::Complex;

/// `|S(x)|` below `S_ZERO_REL * (1 + |x|)` counts as a zero of `S`.
pub const S_ZERO_REL: f64 = 1e-12;

const RESCALE_HI: f64 = 1e100;
const RESCALE_LO: f64 = 1e-100;

pub(crate) trait Magnitude: Copy + Mul<Output = Self> {
    fn magnitude(&self) -> f64;
    fn scaled(self, f: f64) -> Self;
}

impl Magnitude for f64 {
    fn magnitude(&self) -> f64 {
        self.abs()
    }
    fn scaled(self, f: f64) -> Self {
        self * f
    }
}

impl Magnitude for Complex {
    fn magnitude(&self) -> f64 {
        self.norm()
    }
    fn scaled(self, f: f64) -> Self {
        self * f
    }
}

/// Running product kept as `mantissa * 2^exp` so long products neither
/// overflow nor underflow before the end.
#[derive(Debug, Clone, Copy)]
pub(crate) struct ScaledProduct<T> {
    m: T,
    e: i32,
}

impl<T: Magnitude> ScaledProduct<T> {
    pub(crate) fn new(one: T) -> Self {
        ScaledProduct { m: one, e: 0 }
    }

    pub(crate) fn push(&mut self, factor: T) {
        self.m = self.m * factor;
        let mag = self.m.magnitude();
        if !(RESCALE_LO..=RESCALE_HI).contains(&mag) && mag > 0.0 && mag.is_finite() {
            let k = mag.log2().floor() as i32;
            self.m = self.m.scaled(2.0.powi(-k));
            self.e += k;
        }
    }

    pub(crate) fn is_zero(&self) -> bool {
        self.m.magnitude() == 0.0
    }

    pub(crate) fn value(&self) -> T {
        let half = self.e / 2;
        self.m.scaled(2.0.powi(half)).scaled(2.0.powi(self.e - half))
    }

    #[cfg(test)]
    pub(crate) fn ln_abs(&self) -> f64 {
        self.m.magnitude().ln() + self.e as f64 * core::f64::consts::LN_2
    }
}

/// Symmetric truncation: the nodes with `|lambda| < radius`.
pub(crate) fn within(seq: &NodeSequence, radius: f64) -> impl Iterator<Item = Complex> + '_ {
    seq.nodes().iter().copied().filter(move |l| l.norm() < radius)
}

/// `prod_{|lambda| < radius} (1 - z/lambda)`.
pub fn eval_s(seq: &NodeSequence, z: Complex, radius: f64) -> Complex {
    let mut acc = ScaledProduct::new(Complex::new(1.0, 0.0));
    for l in within(seq, radius) {
        acc.push(Complex::new(1.0, 0.0) - z / l);
        if acc.is_zero() {
            return Complex::new(0.0, 0.0);
        }
    }
    acc.value()
}

/// `S'(lambda) = -(1/lambda) prod_{mu != lambda, |mu| < radius} (1 - lambda/mu)`.
pub fn eval_s_prime(seq: &NodeSequence, lam: Complex, radius: f64) -> Result<Complex> {
    if seq.index_of(lam).is_none() {
        return Err(Error::NodeNotInSequence(lam));
    }
    let mut acc = ScaledProduct::new(Complex::new(1.0, 0.0));
    for mu in within(seq, radius) {
        if mu != lam {
            acc.push(Complex::new(1.0, 0.0) - lam / mu);
        }
    }
    Ok(-acc.value() / lam)
}

/// `d_N(x) = min_n prod_{lambda in tau_n} |x - lambda|` with the minimizing
/// cluster index.
pub fn d_n_eval(partition: &Partition, x: f64) -> Result<(f64, usize)> {
    if partition.is_empty() {
        return Err(Error::EmptyCluster);
    }
    let z = Complex::new(x, 0.0);
    let mut best = (f64::INFINITY, 0);
    for (i, c) in partition.clusters().iter().enumerate() {
        let v: f64 = c.points().iter().map(|l| (z - l).norm()).product();
        if v < best.0 {
            best = (v, i);
        }
    }
    Ok(best)
}

/// `|S(x)| / prod_{lambda in group} |x - lambda|` with the vanishing factors
/// cancelled, so the value stays finite at the nodes of `group`.
pub fn s_over_group(seq: &NodeSequence, group: &[Complex], x: f64, radius: f64) -> f64 {
    let z = Complex::new(x, 0.0);
    let mut acc = ScaledProduct::new(1.0);
    for &l in seq.nodes() {
        let inside = l.norm() < radius;
        let in_group = group.contains(&l);
        let f = match (inside, in_group) {
            (true, false) => (Complex::new(1.0, 0.0) - z / l).norm(),
            (true, true) => 1.0 / l.norm(),
            (false, true) => 1.0 / (z - l).norm(),
            (false, false) => continue,
        };
        acc.push(f);
    }
    acc.value()
}

/// `|S(x)| / d_N(x)` in the cancelled form of [`s_over_group`].
pub fn s_over_dn(seq: &NodeSequence, partition: &Partition, x: f64, radius: f64) -> Result<f64> {
    let (_, n) = d_n_eval(partition, x)?;
    Ok(s_over_group(seq, partition.clusters()[n].points(), x, radius))
}

/// `omega_n = |S'(gamma_n)| / prod_{lambda in tau, lambda != gamma_n} |gamma_n - lambda|`,
/// `tau` the cluster of the partition containing `gamma_n`.
pub fn weights_omega(
    seq: &NodeSequence,
    gamma: &[Complex],
    partition: &Partition,
    radius: f64,
) -> Result<Vec<f64>> {
    gamma
        .iter()
        .map(|&g| {
            let idx = seq.index_of(g).ok_or(Error::NodeNotInSequence(g))?;
            let sp = eval_s_prime(seq, g, radius)?.norm();
            let cluster = &partition.clusters()[partition.cluster_of(idx)];
            let den: f64 = cluster
                .points()
                .iter()
                .filter(|&&l| l != g)
                .map(|l| (g - l).norm())
                .product();
            Ok(sp / den)
        })
        .collect()
}

/// Result of [`weight_ratio_alpha`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AlphaFit {
    pub alpha: f64,
    /// `omega_n^alpha omega_{n+1}^(1-alpha) d_N(x) / |S(x)|`.
    pub ratio: f64,
    /// `x` sits on a node; the ratio is the cancelled limit.
    pub at_node: bool,
}

/// The `alpha in [0, 1]` that best matches `omega_n^alpha omega_{n+1}^(1-alpha)`
/// to `|S(x)| / d_N(x)`.
pub fn weight_ratio_alpha(
    x: f64,
    omega_n: f64,
    omega_next: f64,
    seq: &NodeSequence,
    partition: &Partition,
    radius: f64,
) -> Result<AlphaFit> {
    let (dn, _) = d_n_eval(partition, x)?;
    let target = s_over_dn(seq, partition, x, radius)?;
    let tol = 1e-8 * (1.0 + x.abs());
    let near_node = seq
        .nodes()
        .iter()
        .any(|l| (Complex::new(x, 0.0) - l).norm() <= tol);
    let s = eval_s(seq, Complex::new(x, 0.0), radius).norm();
    if s < S_ZERO_REL * (1.0 + x.abs()) && !near_node {
        return Err(Error::SZero(x));
    }
    if !(omega_n > 0.0 && omega_next > 0.0) || !(target > 0.0) {
        return Err(Error::InvalidParameter("weights must be positive"));
    }
    // log(omega_n^a omega_{n+1}^(1-a) / target) is linear in a
    let (ln, ln1, lt) = (omega_n.ln(), omega_next.ln(), target.ln());
    let slope = ln - ln1;
    let alpha = if slope == 0.0 {
        0.5
    } else {
        ((lt - ln1) / slope).clamp(0.0, 1.0)
    };
    let ratio = (alpha * ln + (1.0 - alpha) * ln1 - lt).exp();
    Ok(AlphaFit {
        alpha,
        ratio,
        at_node: near_node || dn == 0.0,
    })
}

/// Samples of `|S|`, `d_N` and the weight `(|S| / d_N)^p` on a real grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WeightProfile {
    pub grid: Vec<f64>,
    pub s_values: Vec<f64>,
    pub dn_values: Vec<f64>,
    /// Infinite where `d_N` vanishes.
    pub ratio: Vec<f64>,
}

/// One profile row `(|S(x)|, d_N(x), (|S(x)|/d_N(x))^p)`.
pub fn profile_point(
    seq: &NodeSequence,
    partition: &Partition,
    x: f64,
    p: f64,
    radius: f64,
) -> Result<(f64, f64, f64)> {
    let s = eval_s(seq, Complex::new(x, 0.0), radius).norm();
    let (dn, _) = d_n_eval(partition, x)?;
    let w = if dn == 0.0 { f64::INFINITY } else { (s / dn).powf(p) };
    Ok((s, dn, w))
}

impl WeightProfile {
    pub fn from_rows(grid: Vec<f64>, rows: Vec<(f64, f64, f64)>) -> Self {
        let (mut s_values, mut dn_values, mut ratio) = (Vec::new(), Vec::new(), Vec::new());
        for (s, d, w) in rows {
            s_values.push(s);
            dn_values.push(d);
            ratio.push(w);
        }
        WeightProfile {
            grid,
            s_values,
            dn_values,
            ratio,
        }
    }

    pub fn compute(
        seq: &NodeSequence,
        partition: &Partition,
        grid: Vec<f64>,
        p: f64,
        radius: f64,
    ) -> Result<Self> {
        let rows = grid
            .iter()
            .map(|&x| profile_point(seq, partition, x, p, radius))
            .collect::<Result<Vec<_>>>()?;
        Ok(WeightProfile::from_rows(grid, rows))
    }

    pub fn len(&self) -> usize {
        self.grid.len()
    }

    pub fn is_empty(&self) -> bool {
        self.grid.is_empty()
    }
}

/// Strip Blaschke product `prod (z - lambda) / (z - conj(lambda) + 3 i eps)`
/// over the nodes with `|Im lambda| < eps` (unnormalized factors).
pub fn strip_blaschke(seq: &NodeSequence, eps: f64, z: Complex) -> Complex {
    let shift = Complex::new(0.0, 3.0 * eps);
    let mut acc = ScaledProduct::new(Complex::new(1.0, 0.0));
    for &l in seq.nodes() {
        if l.im.abs() < eps {
            acc.push((z - l) / (z - l.conj() + shift));
        }
    }
    acc.value()
}
