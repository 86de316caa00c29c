use pwtrace_core::clustering::{adapted_partition, axis, density_radius, halfplane_partition, neighbor_groups};
use pwtrace_core::divided::{ExpSign, Flavor};
use pwtrace_core::generating::{profile_point, WeightProfile};
use pwtrace_core::geometry::{cmp_re_im, Side};
use pwtrace_core::serde_point::PointRepr;
use pwtrace_core::trace::{
    cardinal_interpolant, trace_norm_halfplane_terms, trace_norm_neighbors_terms, trace_norm_partition_terms,
    NormBreakdown,
};
use pwtrace_core::{check_hn, check_ls, CheckOptions, Complex, HalfPlane, NodeSequence, Partition, SpaceParams};
use rayon::prelude::*;
use serde::Serialize;

use crate::cli::{CheckArgs, Common, Grouping, InterpolateArgs, Mode, NormArgs, PartitionArgs, ProfileArgs, SideArg, Space};
use crate::error::{CliError, CliResult};
use crate::format::{emit, load, parse_grid, profile_csv, read_json, to_json, Input};

fn resolve(common: &Common) -> CliResult<Input> {
    let mut input = load(&common.input)?;
    let p = &mut input.params;
    if let Some(c) = common.capacity {
        p.capacity = c;
    }
    if let Some(e) = common.epsilon {
        p.epsilon = Some(e);
    }
    if let Some(t) = common.tau {
        p.tau = t;
    }
    if let Some(x) = common.p {
        p.p = x;
    }
    p.validate()?;
    Ok(input)
}

fn epsilon(seq: &NodeSequence, params: &SpaceParams) -> f64 {
    params.epsilon.unwrap_or_else(|| density_radius(seq))
}

fn radius(seq: &NodeSequence, common: &Common) -> f64 {
    common.radius.unwrap_or(seq.max_modulus() * (1.0 + 1e-9))
}

fn halfplane(g: &Grouping) -> HalfPlane {
    let side = match g.side {
        SideArg::Upper => Side::Upper,
        SideArg::Lower => Side::Lower,
    };
    HalfPlane::new(side, g.offset)
}

fn grid_axis(spec: &str) -> CliResult<Vec<f64>> {
    let (lo, hi, step) = parse_grid(spec).map_err(CliError::Input)?;
    Ok(axis(lo, hi, step)?)
}

#[derive(Serialize)]
struct ClusterOut {
    members: Vec<usize>,
    points: Vec<PointRepr>,
    flavor: Flavor,
    exp_sign: ExpSign,
    base_point: PointRepr,
    #[serde(skip_serializing_if = "Option::is_none")]
    center: Option<usize>,
}

#[derive(Serialize)]
struct Separation {
    /// Largest pseudohyperbolic diameter of a half-plane cluster.
    rho0: f64,
    /// Smallest Euclidean gap between two strip clusters.
    delta0_prime: Option<f64>,
    /// Smallest Euclidean distance between points of different clusters.
    min_gap: Option<f64>,
}

#[derive(Serialize)]
struct PartitionOut {
    space: &'static str,
    epsilon: f64,
    capacity: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    halfplane: Option<HalfPlane>,
    cluster_count: usize,
    separation: Option<Separation>,
    clusters: Vec<ClusterOut>,
}

fn cluster_out(partition: &Partition, ci: usize) -> ClusterOut {
    let c = &partition.clusters()[ci];
    ClusterOut {
        members: partition.members(ci).to_vec(),
        points: c.points().iter().map(|&z| z.into()).collect(),
        flavor: c.flavor(),
        exp_sign: c.exp_sign(),
        base_point: c.base_point().into(),
        center: None,
    }
}

/// Smallest `|z - w|` with `z`, `w` in different clusters, by a sweep in `Re`.
fn min_gap(partition: &Partition) -> Option<f64> {
    let mut pts: Vec<(Complex, usize)> = partition
        .clusters()
        .iter()
        .enumerate()
        .flat_map(|(ci, c)| c.points().iter().map(move |&z| (z, ci)))
        .collect();
    pts.sort_by(|a, b| cmp_re_im(&a.0, &b.0));
    let mut best = f64::INFINITY;
    for i in 0..pts.len() {
        for j in i + 1..pts.len() {
            if pts[j].0.re - pts[i].0.re >= best {
                break;
            }
            if pts[i].1 != pts[j].1 {
                best = best.min((pts[j].0 - pts[i].0).norm());
            }
        }
    }
    best.is_finite().then_some(best)
}

fn build_partition(input: &Input, g: &Grouping) -> CliResult<Partition> {
    let eps = epsilon(&input.seq, &input.params);
    let cap = input.params.capacity;
    Ok(match g.space {
        Space::Halfplane => halfplane_partition(&input.seq, halfplane(g), eps, cap)?,
        _ => adapted_partition(&input.seq, eps, cap)?,
    })
}

pub fn partition(args: &PartitionArgs) -> CliResult<()> {
    let input = resolve(&args.common)?;
    let g = &args.grouping;
    let eps = epsilon(&input.seq, &input.params);
    let out = if g.space == Space::Neighbors {
        let groups = neighbor_groups(&input.seq, input.params.capacity, g.eta)?;
        PartitionOut {
            space: "neighbors",
            epsilon: eps,
            capacity: input.params.capacity,
            halfplane: None,
            cluster_count: groups.len(),
            separation: None,
            clusters: groups
                .iter()
                .map(|n| ClusterOut {
                    members: n.members.clone(),
                    points: n.cluster.points().iter().map(|&z| z.into()).collect(),
                    flavor: n.cluster.flavor(),
                    exp_sign: n.cluster.exp_sign(),
                    base_point: n.cluster.base_point().into(),
                    center: Some(n.center),
                })
                .collect(),
        }
    } else {
        let part = build_partition(&input, g)?;
        PartitionOut {
            space: if g.space == Space::Halfplane { "halfplane" } else { "partition" },
            epsilon: part.epsilon(),
            capacity: part.capacity(),
            halfplane: (g.space == Space::Halfplane).then(|| halfplane(g)),
            cluster_count: part.len(),
            separation: Some(Separation {
                rho0: part.rho0(),
                delta0_prime: part.delta0_prime(),
                min_gap: min_gap(&part),
            }),
            clusters: (0..part.len()).map(|ci| cluster_out(&part, ci)).collect(),
        }
    };
    emit(&to_json(&out)?, args.common.out.as_ref())
}

pub fn check(args: &CheckArgs) -> CliResult<()> {
    let input = resolve(&args.common)?;
    let mut opts = CheckOptions {
        radius: args.common.radius,
        ..CheckOptions::default()
    };
    if let Some(spec) = &args.grid {
        let (lo, hi, step) = parse_grid(spec).map_err(CliError::Input)?;
        if !(step > 0.0) || !(hi > lo) {
            return Err(CliError::Input(format!("empty grid {spec:?}")));
        }
        opts.ap_step = step;
        opts.ap_half_width = Some(lo.abs().max(hi.abs()));
    }
    let report = match args.mode {
        Mode::Ls => check_ls(&input.seq, &input.params, &opts),
        Mode::Hn => check_hn(&input.seq, &input.params, &opts)?,
    };
    emit(&to_json(&report)?, args.common.out.as_ref())
}

#[derive(Serialize)]
struct NormOut {
    space: &'static str,
    #[serde(flatten)]
    breakdown: NormBreakdown,
}

pub fn norm(args: &NormArgs) -> CliResult<()> {
    let input = resolve(&args.common)?;
    let trace = input
        .trace
        .as_ref()
        .ok_or_else(|| CliError::Input("the input file has no trace".into()))?;
    let g = &args.grouping;
    let p = input.params.p;
    let (space, breakdown) = match g.space {
        Space::Partition => {
            let part = build_partition(&input, g)?;
            ("partition", trace_norm_partition_terms(trace, &part, input.params.tau, p)?)
        }
        Space::Neighbors => ("neighbors", trace_norm_neighbors_terms(trace, &input.seq, &input.params, g.eta)?),
        Space::Halfplane => {
            let part = build_partition(&input, g)?;
            ("halfplane", trace_norm_halfplane_terms(trace, &part, halfplane(g), p)?)
        }
    };
    emit(&to_json(&NormOut { space, breakdown })?, args.common.out.as_ref())
}

pub fn profile(args: &ProfileArgs) -> CliResult<()> {
    let input = resolve(&args.common)?;
    let grid = grid_axis(&args.grid)?;
    let part = adapted_partition(&input.seq, epsilon(&input.seq, &input.params), input.params.capacity)?;
    let r = radius(&input.seq, &args.common);
    let p = input.params.p;
    let rows = grid
        .par_iter()
        .map(|&x| profile_point(&input.seq, &part, x, p, r))
        .collect::<Result<Vec<_>, _>>()?;
    let profile = WeightProfile::from_rows(grid, rows);
    emit(&profile_csv(&profile), args.common.out.as_ref())
}

#[derive(Serialize)]
struct Evaluation {
    z: PointRepr,
    value: PointRepr,
}

pub fn interpolate(args: &InterpolateArgs) -> CliResult<()> {
    let input = resolve(&args.common)?;
    let trace = input
        .trace
        .as_ref()
        .ok_or_else(|| CliError::Input("the input file has no trace".into()))?;
    let points: Vec<PointRepr> = read_json(&args.eval)?;
    let f = cardinal_interpolant(trace, &input.seq, radius(&input.seq, &args.common))?;
    let out: Vec<Evaluation> = points
        .par_iter()
        .map(|&z| Evaluation {
            z,
            value: f.eval(z.into()).into(),
        })
        .collect();
    emit(&to_json(&out)?, args.common.out.as_ref())
}
