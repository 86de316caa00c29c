//! Sequence decomposition: node sequences, the Carleson constant, the
//! generalized Carleson margin, the adapted partition into separated groups,
//! the delta-neighbor groups and the enclosing rectangles of half-plane groups.

use alloc::vec;
use alloc::vec::Vec;

use num_traits::Float;
use serde::{Deserialize, Serialize};

use crate::divided::{Cluster, ExpSign, Flavor};
use crate::error::{check_finite, Error, Result};
use crate::geometry::{blaschke_factor, cmp_re_im, delta_distance, pseudo_distance, HalfPlane, Side};
use crate::Complex;

/// A finite list of distinct, nonzero, finite nodes.
#[derive(Debug, Clone, PartialEq)]
pub struct NodeSequence {
    nodes: Vec<Complex>,
    // indices sorted by (Re, Im), for lookups
    order: Vec<usize>,
}

impl NodeSequence {
    pub fn new(nodes: Vec<Complex>) -> Result<Self> {
        for &z in &nodes {
            check_finite(z)?;
            if z == Complex::new(0.0, 0.0) {
                return Err(Error::ZeroNode);
            }
        }
        let mut order: Vec<usize> = (0..nodes.len()).collect();
        order.sort_by(|&a, &b| cmp_re_im(&nodes[a], &nodes[b]));
        if let Some(w) = order.windows(2).find(|w| nodes[w[0]] == nodes[w[1]]) {
            return Err(Error::DuplicatePoints(nodes[w[0]]));
        }
        Ok(NodeSequence { nodes, order })
    }

    pub fn from_reals(xs: &[f64]) -> Result<Self> {
        NodeSequence::new(xs.iter().map(|&x| Complex::new(x, 0.0)).collect())
    }

    pub fn nodes(&self) -> &[Complex] {
        &self.nodes
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn index_of(&self, z: Complex) -> Option<usize> {
        self.order
            .binary_search_by(|&i| cmp_re_im(&self.nodes[i], &z))
            .ok()
            .map(|k| self.order[k])
    }

    /// Largest modulus among the nodes.
    pub fn max_modulus(&self) -> f64 {
        self.nodes.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Subsequence of the nodes for which `keep` holds.
    pub fn filter(&self, keep: impl Fn(Complex) -> bool) -> NodeSequence {
        let nodes: Vec<Complex> = self.nodes.iter().copied().filter(|&z| keep(z)).collect();
        NodeSequence::new(nodes).expect("subsequence of a valid sequence")
    }
}

/// Rectangular evaluation grid `[x_min, x_max] x [y_min, y_max]` with a
/// common step.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub x_min: f64,
    pub x_max: f64,
    pub y_min: f64,
    pub y_max: f64,
    pub step: f64,
}

impl GridSpec {
    pub fn points(&self) -> Result<Vec<Complex>> {
        let xs = axis(self.x_min, self.x_max, self.step)?;
        let ys = axis(self.y_min, self.y_max, self.step)?;
        let mut out = Vec::with_capacity(xs.len() * ys.len());
        for &y in &ys {
            for &x in &xs {
                out.push(Complex::new(x, y));
            }
        }
        Ok(out)
    }
}

/// Uniform points `min, min + step, ..` up to `max` (inclusive, up to rounding).
pub fn axis(min: f64, max: f64, step: f64) -> Result<Vec<f64>> {
    if !(step > 0.0) || !min.is_finite() || !max.is_finite() || max < min {
        return Err(Error::EmptyGrid);
    }
    let n = ((max - min) / step + 1e-9).floor() as usize + 1;
    Ok((0..n).map(|i| min + i as f64 * step).collect())
}

fn log_carleson_at(nodes: &[Complex], i: usize, hp: HalfPlane) -> Result<f64> {
    let mut s = 0.0;
    for (j, &mu) in nodes.iter().enumerate() {
        if j != i {
            s += pseudo_distance(nodes[i], mu, hp)?.ln();
        }
    }
    Ok(s)
}

fn check_inside(seq: &NodeSequence, hp: HalfPlane) -> Result<()> {
    for &z in seq.nodes() {
        if !hp.contains(z) {
            return Err(if hp.contains_closed(z) {
                Error::NodeOnBoundary(z)
            } else {
                Error::OutsideHalfPlane(z)
            });
        }
    }
    Ok(())
}

/// `inf_lambda prod_{mu != lambda} rho(lambda, mu)` over the finite sequence,
/// returned as a natural logarithm. Empty and one-point sequences give 0.
pub fn log_carleson_constant(seq: &NodeSequence, hp: HalfPlane) -> Result<f64> {
    check_inside(seq, hp)?;
    let nodes = seq.nodes();
    let mut best = 0.0f64;
    for i in 0..nodes.len() {
        best = best.min(log_carleson_at(nodes, i, hp)?);
    }
    Ok(best)
}

/// Like [`log_carleson_constant`], but the infimum only runs over the probe
/// nodes (every product still runs over the whole sequence).
pub fn log_carleson_constant_probed(
    seq: &NodeSequence,
    hp: HalfPlane,
    probe: impl Fn(Complex) -> bool,
) -> Result<f64> {
    check_inside(seq, hp)?;
    let nodes = seq.nodes();
    let mut best = 0.0f64;
    for i in 0..nodes.len() {
        if probe(nodes[i]) {
            best = best.min(log_carleson_at(nodes, i, hp)?);
        }
    }
    Ok(best)
}

/// The truncated Carleson constant `inf_lambda prod_{mu != lambda} |b_mu(lambda)|`.
pub fn carleson_constant(seq: &NodeSequence, hp: HalfPlane) -> Result<f64> {
    log_carleson_constant(seq, hp).map(f64::exp)
}

/// A decomposition of a node sequence into disjoint clusters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Partition {
    clusters: Vec<Cluster>,
    /// Sequence indices of each cluster, in cluster point order.
    members: Vec<Vec<usize>>,
    /// Cluster index of every node.
    membership: Vec<usize>,
    epsilon: f64,
    capacity: usize,
    /// Largest pseudohyperbolic diameter among half-plane clusters.
    rho0: f64,
    /// Smallest Euclidean gap between two strip clusters.
    delta0_prime: Option<f64>,
}

impl Partition {
    /// Builds a partition from explicit groups of sequence indices.
    pub fn from_groups(
        seq: &NodeSequence,
        groups: Vec<(Vec<usize>, Flavor)>,
        epsilon: f64,
        capacity: usize,
    ) -> Result<Self> {
        let n = seq.len();
        let mut membership = vec![usize::MAX; n];
        let mut keyed = Vec::with_capacity(groups.len());
        for (mut idx, flavor) in groups {
            idx.sort_by(|&a, &b| cmp_re_im(&seq.nodes()[a], &seq.nodes()[b]));
            let pts: Vec<Complex> = idx.iter().map(|&i| seq.nodes()[i]).collect();
            let cluster = Cluster::new(pts, flavor, ExpSign::for_points(&idx_points(seq, &idx)))?;
            keyed.push((cluster, idx));
        }
        keyed.sort_by(|a, b| cmp_re_im(&a.0.points()[0], &b.0.points()[0]));
        let mut clusters = Vec::with_capacity(keyed.len());
        let mut members = Vec::with_capacity(keyed.len());
        for (ci, (cluster, idx)) in keyed.into_iter().enumerate() {
            for &i in &idx {
                if i >= n {
                    return Err(Error::InvalidParameter("group index out of range"));
                }
                if membership[i] != usize::MAX {
                    return Err(Error::OverlappingClusters(seq.nodes()[i]));
                }
                membership[i] = ci;
            }
            clusters.push(cluster);
            members.push(idx);
        }
        if membership.contains(&usize::MAX) {
            return Err(Error::InvalidParameter("groups do not cover the sequence"));
        }
        let rho0 = clusters
            .iter()
            .filter_map(|c| match c.flavor() {
                Flavor::Pseudohyperbolic(hp) => Some(rho_diameter(c.points(), hp)),
                Flavor::Euclidean => None,
            })
            .fold(0.0, f64::max);
        let delta0_prime = strip_gap(&clusters);
        Ok(Partition {
            clusters,
            members,
            membership,
            epsilon,
            capacity,
            rho0,
            delta0_prime,
        })
    }

    /// Every node in its own Euclidean cluster.
    pub fn singletons(seq: &NodeSequence) -> Result<Self> {
        let groups = (0..seq.len()).map(|i| (vec![i], Flavor::Euclidean)).collect();
        Partition::from_groups(seq, groups, f64::INFINITY, 1)
    }

    pub fn clusters(&self) -> &[Cluster] {
        &self.clusters
    }

    pub fn members(&self, cluster: usize) -> &[usize] {
        &self.members[cluster]
    }

    pub fn cluster_of(&self, node_index: usize) -> usize {
        self.membership[node_index]
    }

    pub fn len(&self) -> usize {
        self.clusters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.clusters.is_empty()
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn capacity(&self) -> usize {
        self.capacity
    }

    pub fn rho0(&self) -> f64 {
        self.rho0
    }

    pub fn delta0_prime(&self) -> Option<f64> {
        self.delta0_prime
    }

    pub fn node_count(&self) -> usize {
        self.membership.len()
    }
}

fn idx_points(seq: &NodeSequence, idx: &[usize]) -> Vec<Complex> {
    idx.iter().map(|&i| seq.nodes()[i]).collect()
}

fn rho_diameter(points: &[Complex], hp: HalfPlane) -> f64 {
    let mut d = 0.0f64;
    for (i, &a) in points.iter().enumerate() {
        for &b in &points[i + 1..] {
            d = d.max(pseudo_distance(a, b, hp).unwrap_or(1.0));
        }
    }
    d
}

fn euclid_diameter(points: &[Complex]) -> f64 {
    let mut d = 0.0f64;
    for (i, &a) in points.iter().enumerate() {
        for &b in &points[i + 1..] {
            d = d.max((a - b).norm());
        }
    }
    d
}

fn strip_gap(clusters: &[Cluster]) -> Option<f64> {
    let mut pts: Vec<(Complex, usize)> = clusters
        .iter()
        .enumerate()
        .filter(|(_, c)| c.flavor() == Flavor::Euclidean)
        .flat_map(|(ci, c)| c.points().iter().map(move |&z| (z, ci)))
        .collect();
    pts.sort_by(|a, b| a.0.re.total_cmp(&b.0.re));
    let mut best = f64::INFINITY;
    for i in 0..pts.len() {
        for j in i + 1..pts.len() {
            if pts[j].0.re - pts[i].0.re >= best {
                break;
            }
            if pts[i].1 != pts[j].1 {
                best = best.min((pts[i].0 - pts[j].0).norm());
            }
        }
    }
    best.is_finite().then_some(best)
}

struct DisjointSets(Vec<usize>);

impl DisjointSets {
    fn new(n: usize) -> Self {
        DisjointSets((0..n).collect())
    }

    fn find(&mut self, mut i: usize) -> usize {
        while self.0[i] != i {
            self.0[i] = self.0[self.0[i]];
            i = self.0[i];
        }
        i
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.0[ra.max(rb)] = ra.min(rb);
        }
    }
}

/// Single-linkage groups of `idx` under `dist < threshold`. Pairs whose real
/// parts differ by `reach` or more are never compared.
fn single_linkage(
    nodes: &[Complex],
    idx: &[usize],
    threshold: f64,
    reach: f64,
    dist: impl Fn(Complex, Complex) -> f64,
) -> Vec<Vec<usize>> {
    let mut sorted = idx.to_vec();
    sorted.sort_by(|&a, &b| cmp_re_im(&nodes[a], &nodes[b]));
    let mut sets = DisjointSets::new(sorted.len());
    for i in 0..sorted.len() {
        for j in i + 1..sorted.len() {
            let (a, b) = (nodes[sorted[i]], nodes[sorted[j]]);
            if b.re - a.re >= reach {
                break;
            }
            if dist(a, b) < threshold {
                sets.union(i, j);
            }
        }
    }
    let mut groups: Vec<Vec<usize>> = vec![Vec::new(); sorted.len()];
    for (i, &node) in sorted.iter().enumerate() {
        let r = sets.find(i);
        groups[r].push(node);
    }
    groups.retain(|g| !g.is_empty());
    groups
}

fn halfplane_groups(nodes: &[Complex], idx: &[usize], hp: HalfPlane, threshold: f64) -> Vec<Vec<usize>> {
    let height = idx
        .iter()
        .map(|&i| hp.boundary_distance(nodes[i]))
        .fold(0.0, f64::max);
    // rho(z, w) < t forces |z - w| < 2 t h / (1 - t) with h the larger height
    let reach = if threshold < 1.0 {
        2.0 * threshold * height / (1.0 - threshold) + f64::EPSILON
    } else {
        f64::INFINITY
    };
    single_linkage(nodes, idx, threshold, reach, |a, b| {
        pseudo_distance(a, b, hp).unwrap_or(1.0)
    })
}

fn check_group(
    seq: &NodeSequence,
    group: &[usize],
    capacity: usize,
    diameter: f64,
    limit: f64,
) -> Result<()> {
    if group.len() > capacity {
        return Err(Error::CapacityExceeded {
            group: idx_points(seq, group),
            capacity,
        });
    }
    if diameter >= limit {
        return Err(Error::DiameterExceeded {
            group: idx_points(seq, group),
            diameter,
            limit,
        });
    }
    Ok(())
}

/// Groups the nodes of a single half-plane by single linkage at `epsilon / 4`
/// in the pseudohyperbolic metric of `hp`.
pub fn halfplane_partition(
    seq: &NodeSequence,
    hp: HalfPlane,
    epsilon: f64,
    capacity: usize,
) -> Result<Partition> {
    validate_scale(epsilon, capacity)?;
    check_inside(seq, hp)?;
    let idx: Vec<usize> = (0..seq.len()).collect();
    let groups = halfplane_groups(seq.nodes(), &idx, hp, epsilon / 4.0);
    let mut out = Vec::with_capacity(groups.len());
    for g in groups {
        let d = rho_diameter(&idx_points(seq, &g), hp);
        check_group(seq, &g, capacity, d, epsilon / 2.0)?;
        out.push((g, Flavor::Pseudohyperbolic(hp)));
    }
    Partition::from_groups(seq, out, epsilon, capacity)
}

fn validate_scale(epsilon: f64, capacity: usize) -> Result<()> {
    if !(epsilon > 0.0) || !epsilon.is_finite() {
        return Err(Error::InvalidParameter("epsilon must be positive and finite"));
    }
    if capacity == 0 {
        return Err(Error::InvalidParameter("capacity must be at least 1"));
    }
    Ok(())
}

/// The adapted partition of the whole sequence.
///
/// Nodes off the real axis are first grouped in their own half-plane
/// (`Im z > 0` or `Im z < 0`) by single linkage at `epsilon / 4` in the
/// pseudohyperbolic metric. Groups that avoid the strip `|Im z| < epsilon`
/// stay as pseudohyperbolic clusters. Everything else, together with the
/// real nodes, is regrouped by Euclidean single linkage at `epsilon / 4`.
/// Groups larger than `capacity` or with diameter `>= epsilon / 2` are
/// reported as errors.
pub fn adapted_partition(seq: &NodeSequence, epsilon: f64, capacity: usize) -> Result<Partition> {
    validate_scale(epsilon, capacity)?;
    let nodes = seq.nodes();
    let link = epsilon / 4.0;
    let mut strip: Vec<usize> = Vec::new();
    let mut out: Vec<(Vec<usize>, Flavor)> = Vec::new();
    for hp in [HalfPlane::UPPER, HalfPlane::LOWER] {
        let idx: Vec<usize> = (0..nodes.len()).filter(|&i| hp.contains(nodes[i])).collect();
        for g in halfplane_groups(nodes, &idx, hp, link) {
            if g.iter().all(|&i| nodes[i].im.abs() >= epsilon) {
                let d = rho_diameter(&idx_points(seq, &g), hp);
                check_group(seq, &g, capacity, d, epsilon / 2.0)?;
                out.push((g, Flavor::Pseudohyperbolic(hp)));
            } else {
                strip.extend(g);
            }
        }
    }
    strip.extend((0..nodes.len()).filter(|&i| nodes[i].im == 0.0));
    for g in single_linkage(nodes, &strip, link, link, |a, b| (a - b).norm()) {
        let d = euclid_diameter(&idx_points(seq, &g));
        check_group(seq, &g, capacity, d, epsilon / 2.0)?;
        out.push((g, Flavor::Euclidean));
    }
    Partition::from_groups(seq, out, epsilon, capacity)
}

/// Supremum over the grid `xs` of the distance from `x` to the sequence.
pub fn density_radius_on(seq: &NodeSequence, xs: &[f64]) -> f64 {
    let mut by_re: Vec<Complex> = seq.nodes().to_vec();
    by_re.sort_by(|a, b| a.re.total_cmp(&b.re));
    let mut r = 0.0f64;
    for &x in xs {
        r = r.max(distance_to_sorted(&by_re, x));
    }
    r
}

pub(crate) fn distance_to_sorted(by_re: &[Complex], x: f64) -> f64 {
    let start = by_re.partition_point(|z| z.re < x);
    let mut best = f64::INFINITY;
    for z in by_re[start..].iter() {
        if z.re - x >= best {
            break;
        }
        best = best.min((z - Complex::new(x, 0.0)).norm());
    }
    for z in by_re[..start].iter().rev() {
        if x - z.re >= best {
            break;
        }
        best = best.min((z - Complex::new(x, 0.0)).norm());
    }
    best
}

/// Empirical relative-density radius: the largest distance from a point of
/// `[-W, W]` to the sequence, with `W` the largest node modulus.
pub fn density_radius(seq: &NodeSequence) -> f64 {
    let w = seq.max_modulus();
    if w == 0.0 {
        return f64::INFINITY;
    }
    let n = 1usize << 18;
    let step = 2.0 * w / n as f64;
    let xs: Vec<f64> = (0..=n).map(|i| -w + i as f64 * step).collect();
    density_radius_on(seq, &xs)
}

/// `min_z |B(z)| / min_n |B_n(z)|` over the grid points inside `hp`, where
/// `B_n` is the Blaschke product of cluster `n` and `B` that of all nodes.
pub fn generalized_carleson_margin(partition: &Partition, hp: HalfPlane, grid: &GridSpec) -> Result<f64> {
    for c in partition.clusters() {
        for &z in c.points() {
            if !hp.contains(z) {
                return Err(Error::OutsideHalfPlane(z));
            }
        }
    }
    let pts: Vec<Complex> = grid.points()?.into_iter().filter(|&z| hp.contains(z)).collect();
    if pts.is_empty() {
        return Err(Error::EmptyGrid);
    }
    let mut best = f64::INFINITY;
    let mut mods = Vec::with_capacity(partition.len());
    for z in pts {
        mods.clear();
        for c in partition.clusters() {
            let mut m = 1.0;
            for &mu in c.points() {
                m *= blaschke_factor(z, mu, hp)?.norm();
            }
            mods.push(m);
        }
        let arg = argmin(&mods);
        // |B| / min |B_n| is the product of the remaining factors
        let ratio: f64 = mods
            .iter()
            .enumerate()
            .filter(|&(i, _)| Some(i) != arg)
            .map(|(_, &m)| m)
            .product();
        best = best.min(ratio);
    }
    Ok(best)
}

fn argmin(v: &[f64]) -> Option<usize> {
    let mut best: Option<usize> = None;
    for (i, &x) in v.iter().enumerate() {
        if best.is_none_or(|b| x < v[b]) {
            best = Some(i);
        }
    }
    best
}

/// The group `sigma_lambda` of one node: its `N` delta-nearest neighbors that
/// lie within delta-distance `eta`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NeighborGroup {
    pub center: usize,
    /// Sequence indices in cluster point order.
    pub members: Vec<usize>,
    pub cluster: Cluster,
}

/// One group per node; Euclidean flavor when the group meets `|Im z| < 1`,
/// pseudohyperbolic in the node's half-plane otherwise.
pub fn neighbor_groups(seq: &NodeSequence, capacity: usize, eta: f64) -> Result<Vec<NeighborGroup>> {
    if !(eta > 0.0 && eta < 0.5) {
        return Err(Error::EtaOutOfRange(eta));
    }
    if capacity == 0 {
        return Err(Error::InvalidParameter("capacity must be at least 1"));
    }
    let nodes = seq.nodes();
    let mut by_re: Vec<usize> = (0..nodes.len()).collect();
    by_re.sort_by(|&a, &b| nodes[a].re.total_cmp(&nodes[b].re));
    let height = nodes.iter().map(|z| z.im.abs()).fold(0.0, f64::max);
    // delta < eta < 1/2 forces |Re(lambda - mu)| < eta (1 + 2h) / (1 - eta)
    let reach = eta * (1.0 + 2.0 * height) / (1.0 - eta) + f64::EPSILON;

    let mut out = Vec::with_capacity(nodes.len());
    let mut cands: Vec<(f64, usize)> = Vec::new();
    for (pos, &i) in by_re.iter().enumerate() {
        let lam = nodes[i];
        cands.clear();
        cands.push((0.0, i));
        for &j in by_re[pos + 1..].iter() {
            if nodes[j].re - lam.re >= reach {
                break;
            }
            push_if_close(&mut cands, lam, nodes[j], j, eta);
        }
        for &j in by_re[..pos].iter().rev() {
            if lam.re - nodes[j].re >= reach {
                break;
            }
            push_if_close(&mut cands, lam, nodes[j], j, eta);
        }
        cands.sort_by(|a, b| a.0.total_cmp(&b.0).then(cmp_re_im(&nodes[a.1], &nodes[b.1])));
        let mut members: Vec<usize> = cands.iter().take(capacity).map(|c| c.1).collect();
        members.sort_by(|&a, &b| cmp_re_im(&nodes[a], &nodes[b]));
        let pts = idx_points(seq, &members);
        let flavor = if pts.iter().any(|z| z.im.abs() < 1.0) {
            Flavor::Euclidean
        } else {
            match HalfPlane::side_of(lam) {
                Side::Upper => Flavor::Pseudohyperbolic(HalfPlane::UPPER),
                Side::Lower => Flavor::Pseudohyperbolic(HalfPlane::LOWER),
            }
        };
        let sign = ExpSign::for_points(&pts);
        let cluster = Cluster::new(pts, flavor, sign)?;
        out.push(NeighborGroup {
            center: i,
            members,
            cluster,
        });
    }
    out.sort_by_key(|g| g.center);
    Ok(out)
}

fn push_if_close(cands: &mut Vec<(f64, usize)>, lam: Complex, mu: Complex, j: usize, eta: f64) {
    let d = delta_distance(lam, mu);
    if d < eta {
        cands.push((d, j));
    }
}

/// Axis-parallel rectangle `|x - x_c| <= width/2, |y - y_c| <= height/2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Rect {
    #[serde(with = "crate::serde_point")]
    pub center: Complex,
    pub width: f64,
    pub height: f64,
}

impl Rect {
    pub fn contains_strictly(&self, z: Complex) -> bool {
        (z.re - self.center.re).abs() < self.width / 2.0
            && (z.im - self.center.im).abs() < self.height / 2.0
    }

    /// Corners in counter-clockwise order starting bottom-left.
    pub fn corners(&self) -> [Complex; 4] {
        let (hw, hh) = (self.width / 2.0, self.height / 2.0);
        let c = self.center;
        [
            c + Complex::new(-hw, -hh),
            c + Complex::new(hw, -hh),
            c + Complex::new(hw, hh),
            c + Complex::new(-hw, hh),
        ]
    }

    /// `per_side` equispaced points on each side of the boundary.
    pub fn boundary_samples(&self, per_side: usize) -> Vec<Complex> {
        let k = self.corners();
        let mut out = Vec::with_capacity(4 * per_side);
        for s in 0..4 {
            let (a, b) = (k[s], k[(s + 1) % 4]);
            for i in 0..per_side {
                let t = i as f64 / per_side as f64;
                out.push(a + (b - a) * t);
            }
        }
        out
    }

    fn overlaps(&self, other: &Rect) -> bool {
        (self.center.re - other.center.re).abs() <= (self.width + other.width) / 2.0
            && (self.center.im - other.center.im).abs() <= (self.height + other.height) / 2.0
    }
}

/// Rectangles around the half-plane clusters of a partition.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RectangleCover {
    pub halfplane: HalfPlane,
    /// `(cluster index, rectangle)` for every cluster inside the half-plane.
    pub rects: Vec<(usize, Rect)>,
    /// Clusters not strictly inside the half-plane.
    pub skipped: Vec<usize>,
    /// `width / |y_c - a|` (identical for every rectangle).
    pub side_ratio: f64,
    /// `dist(boundary of R, boundary line) / |y_c - a|`.
    pub boundary_ratio: f64,
    /// Smallest and largest `rho(lambda, boundary of R)` over cluster points.
    pub rho_margin_min: f64,
    pub rho_margin_max: f64,
    /// Smallest sampled `rho` distance between two distinct rectangles.
    pub rho_gap_min: f64,
}

const RECT_SAMPLES: usize = 32;

/// Square around each cluster centroid with side `|Im(centroid) - a|`.
pub fn enclosing_rectangles(partition: &Partition, hp: HalfPlane) -> Result<RectangleCover> {
    let mut rects = Vec::new();
    let mut skipped = Vec::new();
    let mut margin_min = f64::INFINITY;
    let mut margin_max = 0.0f64;
    for (ci, c) in partition.clusters().iter().enumerate() {
        if !c.points().iter().all(|&z| hp.contains(z)) {
            skipped.push(ci);
            continue;
        }
        let centroid = c.points().iter().sum::<Complex>() / c.len() as f64;
        let side = hp.boundary_distance(centroid);
        let rect = Rect {
            center: centroid,
            width: side,
            height: side,
        };
        if !c.points().iter().all(|&z| rect.contains_strictly(z)) {
            return Err(Error::ContainmentFailed(ci));
        }
        let boundary = rect.boundary_samples(RECT_SAMPLES * 4);
        for &z in c.points() {
            let m = boundary
                .iter()
                .map(|&w| pseudo_distance(z, w, hp).unwrap_or(1.0))
                .fold(f64::INFINITY, f64::min);
            margin_min = margin_min.min(m);
            margin_max = margin_max.max(m);
        }
        rects.push((ci, rect));
    }

    let mut order: Vec<usize> = (0..rects.len()).collect();
    order.sort_by(|&a, &b| rects[a].1.center.re.total_cmp(&rects[b].1.center.re));
    let max_width = rects.iter().map(|r| r.1.width).fold(0.0, f64::max);
    let mut gap = f64::INFINITY;
    for (p, &a) in order.iter().enumerate() {
        let ra = rects[a].1;
        let sa = ra.boundary_samples(RECT_SAMPLES);
        for (q, &b) in order[p + 1..].iter().enumerate() {
            let rb = rects[b].1;
            let dx = rb.center.re - ra.center.re;
            // neighbors in x order always, then anything that could touch
            if q >= 2 && dx > max_width {
                break;
            }
            if ra.overlaps(&rb) {
                return Err(Error::ClustersTooClose(rects[a].0, rects[b].0));
            }
            for &w in &rb.boundary_samples(RECT_SAMPLES) {
                for &z in &sa {
                    gap = gap.min(pseudo_distance(z, w, hp).unwrap_or(1.0));
                }
            }
        }
    }
    Ok(RectangleCover {
        halfplane: hp,
        rects,
        skipped,
        side_ratio: 1.0,
        boundary_ratio: 0.5,
        rho_margin_min: margin_min,
        rho_margin_max: margin_max,
        rho_gap_min: gap,
    })
}
