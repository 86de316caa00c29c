//! Traces of band-limited functions on node sets: the restriction operator,
//! the three trace-space norms, the cardinal and sinc interpolants and the
//! numerical checks on Paley–Wiener functions.

use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec::Vec;
use core::fmt;

use num_traits::Float;
use serde::{Deserialize, Serialize};

use crate::clustering::{neighbor_groups, NodeSequence, Partition, Rect};
use crate::divided::{newton_coefficients, Cluster, Flavor};
use crate::error::{Error, Result};
use crate::generating::{eval_s, eval_s_prime, within, ScaledProduct};
use crate::geometry::{cmp_re_im, HalfPlane, POLE_THRESHOLD};
use crate::quadrature::{contour_integral, trapezoid};
use crate::Complex;

/// Exponential type, integrability exponent and clustering scale.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpaceParams {
    pub tau: f64,
    pub p: f64,
    /// `None` picks the empirical density radius.
    pub epsilon: Option<f64>,
    pub capacity: usize,
}

impl SpaceParams {
    pub fn new(tau: f64, p: f64, epsilon: Option<f64>, capacity: usize) -> Result<Self> {
        let s = SpaceParams {
            tau,
            p,
            epsilon,
            capacity,
        };
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.tau > 0.0) || !self.tau.is_finite() {
            return Err(Error::InvalidParameter("tau must be positive"));
        }
        if !(self.p > 1.0) || !self.p.is_finite() {
            return Err(Error::InvalidParameter("p must lie in (1, inf)"));
        }
        if let Some(e) = self.epsilon {
            if !(e > 0.0) || !e.is_finite() {
                return Err(Error::InvalidParameter("epsilon must be positive"));
            }
        }
        if self.capacity == 0 {
            return Err(Error::InvalidParameter("capacity must be at least 1"));
        }
        Ok(())
    }
}

impl Default for SpaceParams {
    fn default() -> Self {
        SpaceParams {
            tau: core::f64::consts::PI,
            p: 2.0,
            epsilon: None,
            capacity: 1,
        }
    }
}

/// Values `a(lambda)` in the order of the sequence nodes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TraceData {
    #[serde(with = "crate::serde_point::vec")]
    pub values: Vec<Complex>,
}

impl TraceData {
    pub fn new(values: Vec<Complex>) -> Self {
        TraceData { values }
    }

    pub fn zeros(n: usize) -> Self {
        TraceData {
            values: alloc::vec![Complex::new(0.0, 0.0); n],
        }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    fn check_len(&self, expected: usize) -> Result<()> {
        if self.values.len() != expected {
            return Err(Error::MissingTraceValue {
                expected,
                got: self.values.len(),
            });
        }
        Ok(())
    }
}

type Evaluator = dyn Fn(Complex) -> Complex + Send + Sync;

/// An entire function given by an evaluator, with its declared exponential type.
#[derive(Clone)]
pub struct BandlimitedFunction {
    eval: Arc<Evaluator>,
    pub declared_type: f64,
    pub tag: String,
}

impl fmt::Debug for BandlimitedFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("BandlimitedFunction")
            .field("declared_type", &self.declared_type)
            .field("tag", &self.tag)
            .finish()
    }
}

impl BandlimitedFunction {
    pub fn new<F>(declared_type: f64, tag: impl Into<String>, f: F) -> Self
    where
        F: Fn(Complex) -> Complex + Send + Sync + 'static,
    {
        BandlimitedFunction {
            eval: Arc::new(f),
            declared_type,
            tag: tag.into(),
        }
    }

    pub fn zero() -> Self {
        BandlimitedFunction::new(0.0, "zero", |_| Complex::new(0.0, 0.0))
    }

    pub fn eval(&self, z: Complex) -> Complex {
        (self.eval)(z)
    }

    /// `c * f`.
    pub fn scaled(&self, c: Complex) -> Self {
        let inner = self.eval.clone();
        BandlimitedFunction {
            eval: Arc::new(move |z| c * inner(z)),
            declared_type: self.declared_type,
            tag: alloc::format!("({c}) * {}", self.tag),
        }
    }
}

/// `R_Lambda f = (f(lambda))_lambda`.
pub fn restrict(f: &BandlimitedFunction, seq: &NodeSequence) -> TraceData {
    TraceData::new(seq.nodes().iter().map(|&z| f.eval(z)).collect())
}

/// Contribution of one group to a trace norm.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GroupTerm {
    #[serde(with = "crate::serde_point")]
    pub base_point: Complex,
    pub weight: f64,
    /// `|Delta^(k-1)|^p` for `k = 1..=len`.
    pub differences: Vec<f64>,
    /// `weight * sum(differences)`.
    pub contribution: f64,
}

/// A trace norm together with its per-group terms.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NormBreakdown {
    pub norm: f64,
    pub p: f64,
    pub terms: Vec<GroupTerm>,
}

impl NormBreakdown {
    fn from_terms(terms: Vec<GroupTerm>, p: f64) -> Self {
        let total: f64 = terms.iter().map(|t| t.contribution).sum();
        NormBreakdown {
            norm: total.powf(1.0 / p),
            p,
            terms,
        }
    }
}

fn group_term(
    cluster: &Cluster,
    values: &[Complex],
    tau: Option<f64>,
    p: f64,
    weight: f64,
) -> Result<GroupTerm> {
    let adjusted: Vec<Complex> = match tau {
        Some(t) => values
            .iter()
            .zip(cluster.points())
            .map(|(&v, &l)| v * cluster.exp_sign().factor(t, l))
            .collect(),
        None => values.to_vec(),
    };
    let differences: Vec<f64> = newton_coefficients(cluster, &adjusted)?
        .iter()
        .map(|d| d.norm().powf(p))
        .collect();
    let contribution = weight * differences.iter().sum::<f64>();
    Ok(GroupTerm {
        base_point: cluster.base_point(),
        weight,
        differences,
        contribution,
    })
}

fn check_p(p: f64) -> Result<()> {
    if p >= 1.0 && p.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParameter("p must be at least 1"))
    }
}

/// `sum_n (1 + |Im lambda_{n,0}|) sum_k |D^(k-1)(a e^(+-i tau .))|^p` over the
/// clusters of the partition, `D` the divided difference of each cluster's
/// flavor and the sign that of the cluster.
pub fn trace_norm_partition_terms(
    a: &TraceData,
    partition: &Partition,
    tau: f64,
    p: f64,
) -> Result<NormBreakdown> {
    check_p(p)?;
    a.check_len(partition.node_count())?;
    let mut terms = Vec::with_capacity(partition.len());
    for (ci, cluster) in partition.clusters().iter().enumerate() {
        let vals: Vec<Complex> = partition.members(ci).iter().map(|&i| a.values[i]).collect();
        let w = 1.0 + cluster.base_point().im.abs();
        terms.push(group_term(cluster, &vals, Some(tau), p, w)?);
    }
    Ok(NormBreakdown::from_terms(terms, p))
}

pub fn trace_norm_partition(a: &TraceData, partition: &Partition, params: &SpaceParams) -> Result<f64> {
    trace_norm_partition_terms(a, partition, params.tau, params.p).map(|b| b.norm)
}

/// The norm over the neighbor groups `sigma_lambda` of every node, weighted by
/// `1 + |Im lambda|` of the center node.
pub fn trace_norm_neighbors_terms(
    a: &TraceData,
    seq: &NodeSequence,
    params: &SpaceParams,
    eta: f64,
) -> Result<NormBreakdown> {
    check_p(params.p)?;
    a.check_len(seq.len())?;
    let groups = neighbor_groups(seq, params.capacity, eta)?;
    let mut terms = Vec::with_capacity(groups.len());
    for g in &groups {
        let vals: Vec<Complex> = g.members.iter().map(|&i| a.values[i]).collect();
        let w = 1.0 + seq.nodes()[g.center].im.abs();
        let mut t = group_term(&g.cluster, &vals, Some(params.tau), params.p, w)?;
        t.base_point = seq.nodes()[g.center];
        terms.push(t);
    }
    Ok(NormBreakdown::from_terms(terms, params.p))
}

pub fn trace_norm_neighbors(a: &TraceData, seq: &NodeSequence, params: &SpaceParams, eta: f64) -> Result<f64> {
    trace_norm_neighbors_terms(a, seq, params, eta).map(|b| b.norm)
}

/// `sum_n |Im lambda_{n,0} - a| sum_k |Delta^(k-1) a|^p` for a partition whose
/// clusters all use the pseudohyperbolic differences of `hp`.
pub fn trace_norm_halfplane_terms(
    a: &TraceData,
    partition: &Partition,
    hp: HalfPlane,
    p: f64,
) -> Result<NormBreakdown> {
    check_p(p)?;
    a.check_len(partition.node_count())?;
    let mut terms = Vec::with_capacity(partition.len());
    for (ci, cluster) in partition.clusters().iter().enumerate() {
        if cluster.flavor() != Flavor::Pseudohyperbolic(hp) {
            return Err(Error::FlavorMismatch(ci));
        }
        let vals: Vec<Complex> = partition.members(ci).iter().map(|&i| a.values[i]).collect();
        let w = hp.boundary_distance(cluster.base_point());
        terms.push(group_term(cluster, &vals, None, p, w)?);
    }
    Ok(NormBreakdown::from_terms(terms, p))
}

pub fn trace_norm_halfplane(a: &TraceData, partition: &Partition, hp: HalfPlane, p: f64) -> Result<f64> {
    trace_norm_halfplane_terms(a, partition, hp, p).map(|b| b.norm)
}

/// `|z - lambda| < NEAR_NODE_REL * (1 + |lambda|)` switches the cardinal
/// interpolant to the cancelled form of the `lambda` term.
pub const NEAR_NODE_REL: f64 = 1e-8;

struct Cardinal {
    nodes: Vec<Complex>,
    by_re: Vec<Complex>,
    // (lambda, a(lambda), S'(lambda))
    support: Vec<(Complex, Complex, Complex)>,
    radius: f64,
}

impl Cardinal {
    fn nearest(&self, z: Complex) -> Option<Complex> {
        if self.by_re.is_empty() {
            return None;
        }
        let start = self.by_re.partition_point(|l| l.re < z.re);
        let mut best = (f64::INFINITY, self.by_re[0]);
        for l in &self.by_re[start..] {
            if l.re - z.re >= best.0 {
                break;
            }
            let d = (z - l).norm();
            if d < best.0 {
                best = (d, *l);
            }
        }
        for l in self.by_re[..start].iter().rev() {
            if z.re - l.re >= best.0 {
                break;
            }
            let d = (z - l).norm();
            if d < best.0 {
                best = (d, *l);
            }
        }
        Some(best.1)
    }

    // prod_{mu != lam, |mu| < R} (1 - z/mu)
    fn s_without(&self, lam: Complex, z: Complex) -> Complex {
        let mut acc = ScaledProduct::new(Complex::new(1.0, 0.0));
        for &mu in &self.nodes {
            if mu != lam && mu.norm() < self.radius {
                acc.push(Complex::new(1.0, 0.0) - z / mu);
            }
        }
        acc.value()
    }

    fn s(&self, z: Complex) -> Complex {
        let mut acc = ScaledProduct::new(Complex::new(1.0, 0.0));
        for &mu in &self.nodes {
            if mu.norm() < self.radius {
                acc.push(Complex::new(1.0, 0.0) - z / mu);
            }
        }
        acc.value()
    }

    fn eval(&self, z: Complex) -> Complex {
        if self.support.is_empty() {
            return Complex::new(0.0, 0.0);
        }
        let near = self
            .nearest(z)
            .filter(|l| (z - l).norm() < NEAR_NODE_REL * (1.0 + l.norm()));
        let s = self.s(z);
        let mut sum = Complex::new(0.0, 0.0);
        for &(lam, a, sp) in &self.support {
            if Some(lam) == near {
                sum += a * self.s_without(lam, z) / self.s_without(lam, lam);
            } else {
                sum += a * s / (sp * (z - lam));
            }
        }
        sum
    }
}

/// `f(z) = sum_lambda a(lambda) S(z) / (S'(lambda)(z - lambda))` over the
/// nonzero entries of `a`, with `S` truncated at `radius`. The declared type
/// is the density estimate `pi n / (2 max|lambda|)`.
pub fn cardinal_interpolant(a: &TraceData, seq: &NodeSequence, radius: f64) -> Result<BandlimitedFunction> {
    a.check_len(seq.len())?;
    let mut support = Vec::new();
    for (&lam, &v) in seq.nodes().iter().zip(&a.values) {
        if v == Complex::new(0.0, 0.0) {
            continue;
        }
        if !(lam.norm() < radius) {
            return Err(Error::InvalidParameter("support node outside the truncation radius"));
        }
        let sp = eval_s_prime(seq, lam, radius)?;
        if sp.norm() == 0.0 || !sp.re.is_finite() || !sp.im.is_finite() {
            return Err(Error::DerivativeZero(lam));
        }
        support.push((lam, v, sp));
    }
    let nodes: Vec<Complex> = within(seq, radius).collect();
    let mut by_re = nodes.clone();
    by_re.sort_by(cmp_re_im);
    let w = seq.max_modulus();
    let declared = if w > 0.0 {
        core::f64::consts::PI * seq.len() as f64 / (2.0 * w)
    } else {
        0.0
    };
    let card = Cardinal {
        nodes,
        by_re,
        support,
        radius,
    };
    Ok(BandlimitedFunction::new(declared, "cardinal", move |z| card.eval(z)))
}

/// `sin(tau (z - x0)) / (tau (z - x0))`.
pub fn sinc_kernel(x0: f64, tau: f64) -> Result<BandlimitedFunction> {
    if !(tau > 0.0) || !tau.is_finite() {
        return Err(Error::InvalidParameter("tau must be positive"));
    }
    Ok(BandlimitedFunction::new(tau, alloc::format!("sinc({x0}, {tau})"), move |z| {
        let w = (z - x0) * tau;
        if w.norm() < 1e-8 {
            Complex::new(1.0, 0.0) - w * w / 6.0
        } else {
            w.sin() / w
        }
    }))
}

fn lp_integral(f: &BandlimitedFunction, p: f64, y: f64, window: f64, step: f64) -> Result<f64> {
    if !(window > 0.0) || !(step > 0.0) || !(p > 0.0) {
        return Err(Error::InvalidParameter("window, step and p must be positive"));
    }
    let n = ((2.0 * window / step).round() as usize).max(1);
    Ok(trapezoid(-window, window, n, |x| f.eval(Complex::new(x, y)).norm().powf(p)))
}

/// `(int_{-T}^{T} |f(x)|^p dx)^(1/p)` by the trapezoid rule.
pub fn pw_lp_norm(f: &BandlimitedFunction, p: f64, window: f64, step: f64) -> Result<f64> {
    lp_integral(f, p, 0.0, window, step).map(|v| v.powf(1.0 / p))
}

/// A ratio that is set to zero, and flagged, on the zero function.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FlaggedRatio {
    pub value: f64,
    pub zero_norm: bool,
}

/// `int |f(x + i a)|^p dx / (e^(tau p |a|) int |f(x)|^p dx)` on `[-T, T]`.
pub fn plancherel_polya_ratio(
    f: &BandlimitedFunction,
    p: f64,
    a: f64,
    tau: f64,
    window: f64,
    step: f64,
) -> Result<FlaggedRatio> {
    let base = lp_integral(f, p, 0.0, window, step)?;
    if base == 0.0 {
        return Ok(FlaggedRatio {
            value: 0.0,
            zero_norm: true,
        });
    }
    let shifted = lp_integral(f, p, a, window, step)?;
    let value = if a == 0.0 {
        shifted / base
    } else {
        shifted / ((tau * p * a.abs()).exp() * base)
    };
    Ok(FlaggedRatio {
        value,
        zero_norm: false,
    })
}

/// `|f(z)| (1 + |Im z|)^(1/p) e^(-tau |Im z|) / norm`.
pub fn pointwise_bound_ratio(f: &BandlimitedFunction, p: f64, tau: f64, z: Complex, norm: f64) -> Result<f64> {
    if !(norm > 0.0) {
        return Err(Error::ZeroNorm);
    }
    let y = z.im.abs();
    Ok(f.eval(z).norm() * (1.0 + y).powf(1.0 / p) * (-tau * y).exp() / norm)
}

/// Panels per rectangle side for [`residue_identity_gap`].
pub const RESIDUE_PANELS: usize = 1024;

/// Relative gap between the contour integral of `numerator / denominator`
/// around `rect` and `2 pi i` times the sum of the residues at the cluster
/// points inside `rect`, each simple residue taken as
/// `numerator(lambda) / denominator'(lambda)`.
pub fn residue_identity_gap<N, D>(rect: &Rect, numerator: N, denominator: D, cluster: &Cluster) -> Result<f64>
where
    N: Fn(Complex) -> Complex,
    D: Fn(Complex) -> Complex,
{
    let tol = 1e-12 * (1.0 + rect.center.norm() + rect.width + rect.height);
    let mut residues = Complex::new(0.0, 0.0);
    for &l in cluster.points() {
        let dx = (l.re - rect.center.re).abs() - rect.width / 2.0;
        let dy = (l.im - rect.center.im).abs() - rect.height / 2.0;
        if dx.abs() < tol && dy <= tol || dy.abs() < tol && dx <= tol {
            return Err(Error::PoleOnContour(l));
        }
        if !rect.contains_strictly(l) {
            continue;
        }
        let h = 1e-3 * (1.0 + l.norm()).min(rect.width.min(rect.height));
        let d = |k: f64| denominator(l + h * k);
        let dprime = (d(-2.0) - d(-1.0) * 8.0 + d(1.0) * 8.0 - d(2.0)) / (12.0 * h);
        if dprime.norm() < POLE_THRESHOLD {
            return Err(Error::DerivativeZero(l));
        }
        residues += numerator(l) / dprime;
    }
    let expected = residues * Complex::new(0.0, 2.0 * core::f64::consts::PI);
    let integral = contour_integral(&rect.corners(), RESIDUE_PANELS, |z| {
        let den = denominator(z);
        if den.norm() < POLE_THRESHOLD {
            return Err(Error::PoleOnContour(z));
        }
        let v = numerator(z) / den;
        if v.re.is_finite() && v.im.is_finite() {
            Ok(v)
        } else {
            Err(Error::PoleOnContour(z))
        }
    })?;
    Ok((integral - expected).norm() / (1.0 + expected.norm()))
}

/// `S` restricted to the nodes inside `radius`, as a band-limited function.
pub fn generating_function(seq: &NodeSequence, radius: f64) -> BandlimitedFunction {
    let s = seq.clone();
    let w = seq.max_modulus();
    let declared = if w > 0.0 {
        core::f64::consts::PI * seq.len() as f64 / (2.0 * w)
    } else {
        0.0
    };
    BandlimitedFunction::new(declared, "S", move |z| eval_s(&s, z, radius))
}
