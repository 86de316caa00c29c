//! Pseudohyperbolic and Euclidean divided differences over a cluster of
//! nodes, the Newton-type interpolant they generate and the local bound on
//! divided differences of bounded holomorphic functions.

use alloc::vec::Vec;

use num_traits::Float;
use serde::{Deserialize, Serialize};

use crate::error::{check_finite, Error, Result};
use crate::geometry::{blaschke_factor, cmp_re_im, HalfPlane};
use crate::Complex;

/// Which difference quotient a cluster uses.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Flavor {
    /// Denominators `mu_{k+1} - mu_k`.
    Euclidean,
    /// Denominators `b_{mu_k}(mu_{k+1})` in the given half-plane.
    Pseudohyperbolic(HalfPlane),
}

/// Sign of the exponential factor `exp(+-i tau lambda)` attached to a cluster.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ExpSign {
    Plus,
    Minus,
}

impl ExpSign {
    /// `+` when some point has `Im >= 0`.
    pub fn for_points(points: &[Complex]) -> ExpSign {
        if points.iter().any(|z| z.im >= 0.0) {
            ExpSign::Plus
        } else {
            ExpSign::Minus
        }
    }

    /// `exp(i tau lambda)` for `Plus`, `exp(-i tau lambda)` for `Minus`.
    pub fn factor(self, tau: f64, lambda: Complex) -> Complex {
        let arg = Complex::new(0.0, tau) * lambda;
        match self {
            ExpSign::Plus => arg.exp(),
            ExpSign::Minus => (-arg).exp(),
        }
    }
}

/// An ordered group of distinct nodes with its divided-difference flavor.
///
/// Points are kept sorted by `(Re, Im)`; the base point `lambda_{n,0}` is the
/// last one in that order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Cluster {
    #[serde(with = "crate::serde_point::vec")]
    points: Vec<Complex>,
    flavor: Flavor,
    base_index: usize,
    exp_sign: ExpSign,
}

impl Cluster {
    pub fn new(mut points: Vec<Complex>, flavor: Flavor, exp_sign: ExpSign) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::EmptyCluster);
        }
        for &z in &points {
            check_finite(z)?;
            if let Flavor::Pseudohyperbolic(hp) = flavor {
                if !hp.contains(z) {
                    return Err(Error::OutsideHalfPlane(z));
                }
            }
        }
        points.sort_by(cmp_re_im);
        if let Some(w) = points.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::DuplicatePoints(w[0]));
        }
        let base_index = points.len() - 1;
        Ok(Cluster {
            points,
            flavor,
            base_index,
            exp_sign,
        })
    }

    /// Euclidean cluster with the sign rule applied to its points.
    pub fn euclidean(points: Vec<Complex>) -> Result<Self> {
        let sign = ExpSign::for_points(&points);
        Cluster::new(points, Flavor::Euclidean, sign)
    }

    /// Pseudohyperbolic cluster in `hp` with the sign rule applied.
    pub fn pseudohyperbolic(points: Vec<Complex>, hp: HalfPlane) -> Result<Self> {
        let sign = ExpSign::for_points(&points);
        Cluster::new(points, Flavor::Pseudohyperbolic(hp), sign)
    }

    pub fn points(&self) -> &[Complex] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn flavor(&self) -> Flavor {
        self.flavor
    }

    pub fn exp_sign(&self) -> ExpSign {
        self.exp_sign
    }

    pub fn base_index(&self) -> usize {
        self.base_index
    }

    pub fn base_point(&self) -> Complex {
        self.points[self.base_index]
    }

    pub fn contains(&self, z: Complex) -> bool {
        self.points.contains(&z)
    }

    /// Newton basis factor attached to `node`, evaluated at `z`.
    fn basis(&self, node: Complex, z: Complex) -> Result<Complex> {
        match self.flavor {
            Flavor::Euclidean => Ok(z - node),
            Flavor::Pseudohyperbolic(hp) => blaschke_factor(z, node, hp),
        }
    }
}

/// All Newton coefficients `Delta^0(a_1), Delta^1(a_1, a_2), ..., Delta^{m-1}(a_1..a_m)`
/// for the first `values.len()` points of the cluster.
pub fn newton_coefficients(cluster: &Cluster, values: &[Complex]) -> Result<Vec<Complex>> {
    let m = values.len();
    if m == 0 || m > cluster.len() {
        return Err(Error::ValueCountMismatch {
            expected: cluster.len(),
            got: m,
        });
    }
    let pts = cluster.points();
    let mut d = values.to_vec();
    // d[i] holds Delta^{j}(a_1, .., a_j, a_i) after level j.
    for j in 1..m {
        let anchor = d[j - 1];
        for i in j..m {
            let denom = cluster.basis(pts[j - 1], pts[i])?;
            if denom == Complex::new(0.0, 0.0) {
                return Err(Error::DuplicatePoints(pts[i]));
            }
            d[i] = (d[i] - anchor) / denom;
        }
    }
    Ok(d)
}

/// `Delta^k` (or its Euclidean analogue) of the values attached to the first
/// `k + 1` points of the cluster.
pub fn divided_difference(cluster: &Cluster, values: &[Complex], order: usize) -> Result<Complex> {
    if order >= cluster.len() {
        return Err(Error::OrderOutOfRange {
            order,
            len: cluster.len(),
        });
    }
    if values.len() != order + 1 {
        return Err(Error::ValueCountMismatch {
            expected: order + 1,
            got: values.len(),
        });
    }
    let coeffs = newton_coefficients(cluster, values)?;
    Ok(coeffs[order])
}

/// The Newton-type interpolant `P(z) = sum_k Delta^{k-1} prod_{l<k} b_{mu_l}(z)`
/// (with `z - mu_l` in place of `b_{mu_l}` for Euclidean clusters).
pub fn newton_eval(cluster: &Cluster, values: &[Complex], z: Complex) -> Result<Complex> {
    if values.len() != cluster.len() {
        return Err(Error::ValueCountMismatch {
            expected: cluster.len(),
            got: values.len(),
        });
    }
    let coeffs = newton_coefficients(cluster, values)?;
    let mut sum = Complex::new(0.0, 0.0);
    let mut prod = Complex::new(1.0, 0.0);
    for (k, c) in coeffs.iter().enumerate() {
        if k > 0 {
            prod *= cluster.basis(cluster.points()[k - 1], z)?;
        }
        sum += c * prod;
    }
    Ok(sum)
}

/// Upper bound `(2/eta)^j prod_{k=0}^{j} (1 - k/(2M))^{-1} * sup_norm` on
/// `|Delta^j(f(mu_1..mu_{j+1}))|`, with `M` the cluster size.
pub fn dd_bound(cluster: &Cluster, eta: f64, sup_norm: f64, order: usize) -> Result<f64> {
    if !(eta > 0.0) {
        return Err(Error::EtaNonPositive);
    }
    let m = cluster.len();
    if order >= m {
        return Err(Error::OrderOutOfRange { order, len: m });
    }
    let mut c = (2.0 / eta).powi(order as i32);
    for k in 0..=order {
        let f = 1.0 - k as f64 / (2.0 * m as f64);
        if f <= 0.0 {
            return Err(Error::BoundDegenerate(k));
        }
        c /= f;
    }
    Ok(c * sup_norm)
}
