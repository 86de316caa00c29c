//! Condition reports: finite-sample evidence for the relative density,
//! Carleson, convergence and Muckenhoupt clauses of the (LS) and (H_N)
//! conditions.
//!
//! Every clause gets exactly one entry. Failures of a sub-estimator are
//! recorded as `inconclusive` entries with a note rather than returned.

use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::f64::consts::PI;

use num_traits::Float;
use serde::{Deserialize, Serialize};

use crate::clustering::{adapted_partition, density_radius, log_carleson_constant_probed, NodeSequence, Partition};
use crate::divided::Flavor;
use crate::error::Result;
use crate::generating::{eval_s, eval_s_prime, s_over_dn, weights_omega};
use crate::geometry::HalfPlane;
use crate::muckenhoupt::{continuous_ap, discrete_ap, ApReport, ApVerdict};
use crate::trace::SpaceParams;
use crate::Complex;

pub const RELATIVE_DENSITY: &str = "relative_density";
pub const CARLESON: &str = "carleson_per_halfplane";
pub const S_TREND: &str = "S_convergence_trend";
pub const AP_PROFILE: &str = "Ap_profile";
pub const DISCRETE_AP_PROFILE: &str = "discrete_Ap_profile";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
    Inconclusive,
}

impl From<ApVerdict> for Verdict {
    fn from(v: ApVerdict) -> Self {
        match v {
            ApVerdict::Bounded => Verdict::Pass,
            ApVerdict::Growing => Verdict::Fail,
            ApVerdict::Inconclusive => Verdict::Inconclusive,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CheckMode {
    Ls,
    Hn,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConditionEntry {
    pub name: String,
    pub verdict: Verdict,
    pub evidence: BTreeMap<String, f64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub profile: Option<ApReport>,
    pub notes: Vec<String>,
}

impl ConditionEntry {
    fn new(name: &str) -> Self {
        ConditionEntry {
            name: name.to_string(),
            verdict: Verdict::Inconclusive,
            evidence: BTreeMap::new(),
            profile: None,
            notes: Vec::new(),
        }
    }

    fn put(&mut self, key: &str, v: f64) {
        self.evidence.insert(key.to_string(), v);
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConditionReport {
    pub mode: CheckMode,
    pub params: SpaceParams,
    pub entries: Vec<ConditionEntry>,
}

impl ConditionReport {
    pub fn entry(&self, name: &str) -> Option<&ConditionEntry> {
        self.entries.iter().find(|e| e.name == name)
    }

    pub fn verdict(&self, name: &str) -> Option<Verdict> {
        self.entry(name).map(|e| e.verdict)
    }

    pub fn all_pass(&self) -> bool {
        self.entries.iter().all(|e| e.verdict == Verdict::Pass)
    }
}

/// Tunables for [`check_ls`] and [`check_hn`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckOptions {
    /// Truncation radius of `S`; defaults to just above the largest modulus.
    pub radius: Option<f64>,
    /// Relative density passes when `r <= density_factor * pi / tau`.
    pub density_factor: f64,
    /// Offsets `a` of the half-planes `Im z > a` and `Im z < a`.
    pub carleson_offsets: Vec<f64>,
    /// Smallest acceptable truncated Carleson constant.
    pub carleson_floor: f64,
    /// Grid step of the continuous Muckenhoupt profile.
    pub ap_step: f64,
    /// Half-width of the profile window; defaults to `sqrt(W) / 4`.
    pub ap_half_width: Option<f64>,
    /// Points where the truncation trend of `S` is measured.
    #[serde(with = "crate::serde_point::vec")]
    pub s_test_points: Vec<Complex>,
}

impl Default for CheckOptions {
    fn default() -> Self {
        CheckOptions {
            radius: None,
            density_factor: 4.0,
            carleson_offsets: alloc::vec![-1.0, -0.5, 0.0, 0.5, 1.0],
            carleson_floor: 1e-6,
            ap_step: 1.0 / 256.0,
            ap_half_width: None,
            s_test_points: alloc::vec![
                Complex::new(0.25, 0.0),
                Complex::new(0.75, 0.5),
                Complex::new(-1.3, 0.2),
                Complex::new(0.0, 0.5),
            ],
        }
    }
}

struct Setup {
    w: f64,
    radius: f64,
    r: f64,
    epsilon: f64,
    half_width: f64,
}

fn setup(seq: &NodeSequence, params: &SpaceParams, opts: &CheckOptions) -> Setup {
    let w = seq.max_modulus();
    let radius = opts.radius.unwrap_or(w * (1.0 + 1e-9));
    let r = density_radius(seq);
    let epsilon = params.epsilon.unwrap_or(r);
    let half_width = opts
        .ap_half_width
        .unwrap_or_else(|| (0.25 * w.sqrt()).max(4.0 * opts.ap_step));
    Setup {
        w,
        radius,
        r,
        epsilon,
        half_width,
    }
}

fn relative_density_entry(st: &Setup, params: &SpaceParams, opts: &CheckOptions) -> ConditionEntry {
    let mut e = ConditionEntry::new(RELATIVE_DENSITY);
    let threshold = opts.density_factor * PI / params.tau;
    e.put("density_radius", st.r);
    e.put("threshold", threshold);
    e.put("max_modulus", st.w);
    e.verdict = if !st.r.is_finite() {
        Verdict::Inconclusive
    } else if st.r <= threshold {
        Verdict::Pass
    } else {
        Verdict::Fail
    };
    e.notes
        .push("largest distance from a point of [-W, W] to the sequence".to_string());
    e
}

fn carleson_entry(classes: &[Vec<Complex>], st: &Setup, opts: &CheckOptions) -> ConditionEntry {
    let mut e = ConditionEntry::new(CARLESON);
    let probe_reach = st.half_width.max(0.1 * st.w);
    let mut worst = 0.0f64;
    let mut failed = false;
    for &a in &opts.carleson_offsets {
        for (label, hp) in [("upper", HalfPlane::upper(a)), ("lower", HalfPlane::lower(a))] {
            let mut class_min = 0.0f64;
            for class in classes {
                let sub: Vec<Complex> = class.iter().copied().filter(|&z| hp.contains(z)).collect();
                if sub.len() < 2 {
                    continue;
                }
                let sub = NodeSequence::new(sub).expect("subsequence of a valid sequence");
                match log_carleson_constant_probed(&sub, hp, |z| z.re.abs() <= probe_reach) {
                    Ok(v) => class_min = class_min.min(v),
                    Err(err) => {
                        failed = true;
                        e.notes.push(alloc::format!("{label} a={a}: {err}"));
                    }
                }
            }
            e.put(&alloc::format!("log10_constant_{label}_{a}"), class_min / core::f64::consts::LN_10);
            worst = worst.min(class_min);
        }
    }
    e.put("min_constant", worst.exp());
    e.put("floor", opts.carleson_floor);
    e.put("classes", classes.len() as f64);
    e.put("probe_half_width", probe_reach);
    e.verdict = if failed {
        Verdict::Inconclusive
    } else if worst.exp() >= opts.carleson_floor {
        Verdict::Pass
    } else {
        Verdict::Fail
    };
    e
}

fn s_trend_entry(seq: &NodeSequence, st: &Setup, opts: &CheckOptions) -> ConditionEntry {
    let mut e = ConditionEntry::new(S_TREND);
    let radii: Vec<f64> = (0..5).map(|k| st.radius / f64::from(1u32 << (4 - k))).collect();
    let mut gaps = Vec::with_capacity(4);
    for k in 0..4 {
        let mut g = 0.0f64;
        for &z in &opts.s_test_points {
            let a = eval_s(seq, z, radii[k]);
            let b = eval_s(seq, z, radii[k + 1]);
            g = g.max((a - b).norm() / (1.0 + b.norm()));
        }
        e.put(&alloc::format!("gap_{k}"), g);
        gaps.push(g);
    }
    e.put("radius", st.radius);
    let y = st.w.sqrt().clamp(1.0, 20.0);
    let ty = eval_s(seq, Complex::new(0.0, y), st.radius).norm().ln() / y;
    e.put("type_estimate", ty);
    e.verdict = if gaps.iter().any(|g| !g.is_finite()) {
        Verdict::Inconclusive
    } else if gaps.windows(2).all(|w| w[1] < w[0]) {
        Verdict::Pass
    } else {
        Verdict::Fail
    };
    e.notes
        .push("gaps between truncations at R/16, R/8, R/4, R/2, R must shrink".to_string());
    e
}

fn ap_entry(seq: &NodeSequence, partition: &Partition, params: &SpaceParams, st: &Setup, opts: &CheckOptions) -> ConditionEntry {
    let mut e = ConditionEntry::new(AP_PROFILE);
    let h = opts.ap_step;
    let hw = st.half_width;
    let n = (2.0 * hw / h).floor() as usize;
    let xs: Vec<f64> = (0..n).map(|i| -hw + (i as f64 + 0.5) * h).collect();
    let mut ws = Vec::with_capacity(n);
    for &x in &xs {
        match s_over_dn(seq, partition, x, st.radius) {
            Ok(v) => ws.push(v.powf(params.p)),
            Err(err) => {
                e.notes.push(err.to_string());
                return e;
            }
        }
    }
    let top = hw.log2().floor() as i32;
    let scales: Vec<f64> = (-4..=top).map(|j| 2f64.powi(j)).collect();
    e.put("half_width", hw);
    e.put("step", h);
    match continuous_ap(&xs, &ws, params.p, &scales, (-hw, hw)) {
        Ok(rep) => {
            e.put("estimate", rep.estimate);
            e.verdict = rep.verdict.into();
            e.profile = Some(rep);
        }
        Err(err) => e.notes.push(err.to_string()),
    }
    e
}

fn thin(mut gamma: Vec<Complex>, gap: f64) -> Vec<Complex> {
    gamma.sort_by(|a, b| a.re.total_cmp(&b.re));
    let mut out: Vec<Complex> = Vec::with_capacity(gamma.len());
    for g in gamma {
        if out.last().is_none_or(|l| g.re - l.re >= gap) {
            out.push(g);
        }
    }
    out
}

fn discrete_entry(gamma: Vec<Complex>, weights: Result<Vec<f64>>, params: &SpaceParams) -> ConditionEntry {
    let mut e = ConditionEntry::new(DISCRETE_AP_PROFILE);
    e.put("points", gamma.len() as f64);
    let ws = match weights {
        Ok(w) => w,
        Err(err) => {
            e.notes.push(err.to_string());
            return e;
        }
    };
    let ws: Vec<f64> = ws.iter().map(|w| w.powf(params.p)).collect();
    match discrete_ap(&ws, params.p, ws.len().max(1)) {
        Ok(rep) => {
            e.put("estimate", rep.estimate);
            e.verdict = rep.verdict.into();
            e.profile = Some(rep);
        }
        Err(err) => e.notes.push(err.to_string()),
    }
    e
}

fn empty_report(mode: CheckMode, params: &SpaceParams) -> ConditionReport {
    let entries = [RELATIVE_DENSITY, CARLESON, S_TREND, AP_PROFILE, DISCRETE_AP_PROFILE]
        .iter()
        .map(|n| {
            let mut e = ConditionEntry::new(n);
            e.notes.push("empty sequence".to_string());
            e
        })
        .collect();
    ConditionReport {
        mode,
        params: *params,
        entries,
    }
}

/// Evidence for the (LS) conditions: relative density, Carleson constants of
/// `Lambda` in the half-planes `Im z > a` and `Im z < a`, the truncation
/// trend of `S`, the Muckenhoupt profile of `(|S| / dist(., Lambda))^p` and
/// the discrete profile of `|S'(gamma)|^p` on a separated subsequence near
/// the real axis.
pub fn check_ls(seq: &NodeSequence, params: &SpaceParams, opts: &CheckOptions) -> ConditionReport {
    if seq.is_empty() {
        return empty_report(CheckMode::Ls, params);
    }
    let st = setup(seq, params, opts);
    let singles = Partition::singletons(seq).expect("singletons always partition");
    let classes = alloc::vec![seq.nodes().to_vec()];
    let gamma: Vec<Complex> = seq
        .nodes()
        .iter()
        .copied()
        .filter(|z| z.im.abs() < st.epsilon && z.re.abs() <= st.half_width)
        .collect();
    let gamma = thin(gamma, st.epsilon / 4.0);
    let weights: Result<Vec<f64>> = gamma
        .iter()
        .map(|&g| eval_s_prime(seq, g, st.radius).map(|d| d.norm()))
        .collect();
    let mut resolved = *params;
    resolved.epsilon = Some(st.epsilon);
    ConditionReport {
        mode: CheckMode::Ls,
        params: resolved,
        entries: alloc::vec![
            relative_density_entry(&st, params, opts),
            carleson_entry(&classes, &st, opts),
            s_trend_entry(seq, &st, opts),
            ap_entry(seq, &singles, params, &st, opts),
            discrete_entry(gamma, weights, params),
        ],
    }
}

/// Evidence for the (H_N) conditions on the adapted partition at
/// `(epsilon, capacity)`. Carleson constants are taken per color class (the
/// `k`-th point of every cluster), the continuous profile uses
/// `(|S| / d_N)^p` and the discrete profile `omega_n^p` on the base points of
/// the strip clusters. Fails only when the partition cannot be built.
pub fn check_hn(seq: &NodeSequence, params: &SpaceParams, opts: &CheckOptions) -> Result<ConditionReport> {
    if seq.is_empty() {
        return Ok(empty_report(CheckMode::Hn, params));
    }
    let st = setup(seq, params, opts);
    let partition = adapted_partition(seq, st.epsilon, params.capacity)?;
    let mut classes: Vec<Vec<Complex>> = Vec::new();
    for c in partition.clusters() {
        for (k, &z) in c.points().iter().enumerate() {
            if classes.len() <= k {
                classes.push(Vec::new());
            }
            classes[k].push(z);
        }
    }
    let gamma: Vec<Complex> = partition
        .clusters()
        .iter()
        .filter(|c| c.flavor() == Flavor::Euclidean)
        .map(|c| c.base_point())
        .filter(|z| z.re.abs() <= st.half_width)
        .collect();
    let gamma = thin(gamma, st.epsilon / 4.0);
    let weights = weights_omega(seq, &gamma, &partition, st.radius);
    let mut resolved = *params;
    resolved.epsilon = Some(st.epsilon);
    let mut carleson = carleson_entry(&classes, &st, opts);
    carleson.put("rho0", partition.rho0());
    if let Some(d) = partition.delta0_prime() {
        carleson.put("delta0_prime", d);
    }
    Ok(ConditionReport {
        mode: CheckMode::Hn,
        params: resolved,
        entries: alloc::vec![
            relative_density_entry(&st, params, opts),
            carleson,
            s_trend_entry(seq, &st, opts),
            ap_entry(seq, &partition, params, &st, opts),
            discrete_entry(gamma, weights, params),
        ],
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn half_integers(k: i32) -> NodeSequence {
        let xs: Vec<f64> = (1..=k)
            .flat_map(|j| [j as f64 - 0.5, -(j as f64 - 0.5)])
            .collect();
        NodeSequence::from_reals(&xs).unwrap()
    }

    #[test]
    fn lattice_passes_everything() {
        let s = half_integers(400);
        let rep = check_ls(&s, &SpaceParams::default(), &CheckOptions::default());
        for e in &rep.entries {
            assert_eq!(e.verdict, Verdict::Pass, "{e:?}");
        }
    }

    #[test]
    fn every_clause_has_one_entry() {
        let s = half_integers(50);
        let rep = check_ls(&s, &SpaceParams::default(), &CheckOptions::default());
        let names: Vec<&str> = rep.entries.iter().map(|e| e.name.as_str()).collect();
        assert_eq!(names, [RELATIVE_DENSITY, CARLESON, S_TREND, AP_PROFILE, DISCRETE_AP_PROFILE]);
    }

    #[test]
    fn vertical_sequence_is_not_dense() {
        let s = NodeSequence::new((1..=100).map(|k| Complex::new(0.0, k as f64)).collect()).unwrap();
        let rep = check_ls(&s, &SpaceParams::default(), &CheckOptions::default());
        assert_eq!(rep.verdict(RELATIVE_DENSITY), Some(Verdict::Fail));
    }

    #[test]
    fn hn_with_capacity_one_matches_ls() {
        let s = half_integers(200);
        let params = SpaceParams::default();
        let ls = check_ls(&s, &params, &CheckOptions::default());
        let hn = check_hn(&s, &params, &CheckOptions::default()).unwrap();
        for (a, b) in ls.entries.iter().zip(&hn.entries) {
            assert_eq!(a.name, b.name);
            assert_eq!(a.verdict, b.verdict);
        }
    }
}
