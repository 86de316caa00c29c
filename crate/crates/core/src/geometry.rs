//! Half-plane primitives: Blaschke factors, the pseudohyperbolic distance and
//! the mixed metric `delta` that is Euclidean near the real axis and
//! pseudohyperbolic far from it.

use core::cmp::Ordering;

use serde::{Deserialize, Serialize};

use crate::error::{check_finite, Error, Result};
use crate::Complex;

/// Poles closer than this are treated as genuine singularities.
pub const POLE_THRESHOLD: f64 = 1e-300;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Upper,
    Lower,
}

/// `Im z > offset` (upper) or `Im z < offset` (lower).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HalfPlane {
    pub side: Side,
    pub offset: f64,
}

impl HalfPlane {
    pub const UPPER: HalfPlane = HalfPlane {
        side: Side::Upper,
        offset: 0.0,
    };
    pub const LOWER: HalfPlane = HalfPlane {
        side: Side::Lower,
        offset: 0.0,
    };

    pub fn new(side: Side, offset: f64) -> Self {
        HalfPlane { side, offset }
    }

    pub fn upper(offset: f64) -> Self {
        HalfPlane::new(Side::Upper, offset)
    }

    pub fn lower(offset: f64) -> Self {
        HalfPlane::new(Side::Lower, offset)
    }

    /// Strict membership.
    pub fn contains(&self, z: Complex) -> bool {
        match self.side {
            Side::Upper => z.im > self.offset,
            Side::Lower => z.im < self.offset,
        }
    }

    /// Membership in the closed half-plane (boundary line included).
    pub fn contains_closed(&self, z: Complex) -> bool {
        match self.side {
            Side::Upper => z.im >= self.offset,
            Side::Lower => z.im <= self.offset,
        }
    }

    /// Distance from `z` to the boundary line `Im z = offset`.
    pub fn boundary_distance(&self, z: Complex) -> f64 {
        (z.im - self.offset).abs()
    }

    /// `Upper` for `Im z >= 0`, `Lower` otherwise.
    pub fn side_of(z: Complex) -> Side {
        if z.im >= 0.0 {
            Side::Upper
        } else {
            Side::Lower
        }
    }
}

/// Un-normalized Blaschke factor `(z - mu) / (z - conj(mu) - 2ia)` vanishing at
/// `mu` and unimodular on the boundary line of `hp`.
pub fn blaschke_factor(z: Complex, mu: Complex, hp: HalfPlane) -> Result<Complex> {
    check_finite(z)?;
    check_finite(mu)?;
    if !hp.contains(mu) {
        return Err(Error::OutsideHalfPlane(mu));
    }
    let denom = z - mu.conj() - Complex::new(0.0, 2.0 * hp.offset);
    if denom.norm() < POLE_THRESHOLD {
        return Err(Error::DegenerateDenominator(z));
    }
    Ok((z - mu) / denom)
}

/// Pseudohyperbolic distance `|b_w(z)|` in `hp`. Boundary points are accepted
/// and sit at distance one from every other point.
pub fn pseudo_distance(z: Complex, w: Complex, hp: HalfPlane) -> Result<f64> {
    check_finite(z)?;
    check_finite(w)?;
    for p in [z, w] {
        if !hp.contains_closed(p) {
            return Err(Error::OutsideHalfPlane(p));
        }
    }
    if z == w {
        return Ok(0.0);
    }
    let denom = z - w.conj() - Complex::new(0.0, 2.0 * hp.offset);
    let dn = denom.norm();
    if dn < POLE_THRESHOLD {
        return Err(Error::DegenerateDenominator(z));
    }
    Ok((z - w).norm() / dn)
}

/// `|z - w| / (1 + |z - conj(w)|)`. Not capped at one.
pub fn delta_distance(z: Complex, w: Complex) -> f64 {
    (z - w).norm() / (1.0 + (z - w.conj()).norm())
}

/// Lexicographic `(Re, Im)` order used to fix point order inside clusters.
pub fn cmp_re_im(a: &Complex, b: &Complex) -> Ordering {
    a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex {
        Complex::new(re, im)
    }

    #[test]
    fn blaschke_zero_at_own_point() {
        let b = blaschke_factor(c(0.0, 1.0), c(0.0, 1.0), HalfPlane::UPPER).unwrap();
        assert_eq!(b, Complex::new(0.0, 0.0));
    }

    #[test]
    fn blaschke_hand_value() {
        let b = blaschke_factor(c(0.0, 2.0), c(0.0, 1.0), HalfPlane::UPPER).unwrap();
        assert!((b - c(1.0 / 3.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn blaschke_unimodular_on_boundary() {
        let b = blaschke_factor(c(0.0, 0.0), c(0.0, 1.0), HalfPlane::UPPER).unwrap();
        assert_eq!(b.norm(), 1.0);
        let b = blaschke_factor(c(3.5, -2.0), c(1.0, -3.0), HalfPlane::lower(-2.0)).unwrap();
        assert!((b.norm() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn blaschke_pole_is_reported() {
        // the pole sits at conj(mu) + 2ia
        let err = blaschke_factor(c(0.0, -1.0), c(0.0, 1.0), HalfPlane::UPPER).unwrap_err();
        assert!(matches!(err, Error::DegenerateDenominator(_)));
    }

    #[test]
    fn blaschke_rejects_mu_outside() {
        let err = blaschke_factor(c(0.0, 1.0), c(0.0, -1.0), HalfPlane::UPPER).unwrap_err();
        assert!(matches!(err, Error::OutsideHalfPlane(_)));
    }

    #[test]
    fn pseudo_distance_examples() {
        let hp = HalfPlane::UPPER;
        assert_eq!(pseudo_distance(c(0.3, 0.7), c(0.3, 0.7), hp).unwrap(), 0.0);
        let r = pseudo_distance(c(0.0, 1.0), c(0.0, 2.0), hp).unwrap();
        assert!((r - 1.0 / 3.0).abs() < 1e-15);
        for x in [-7.0, 0.0, 2.5] {
            let r = pseudo_distance(c(x, 0.0), c(0.0, 1.0), hp).unwrap();
            assert!((r - 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn delta_examples() {
        assert_eq!(delta_distance(c(0.2, 0.4), c(0.2, 0.4)), 0.0);
        assert_eq!(delta_distance(c(0.0, 0.0), c(1.0, 0.0)), 0.5);
        assert_eq!(delta_distance(c(0.0, 1.0), c(0.0, -1.0)), 2.0);
    }

    #[test]
    fn membership_is_strict() {
        assert!(!HalfPlane::UPPER.contains(c(1.0, 0.0)));
        assert!(HalfPlane::UPPER.contains_closed(c(1.0, 0.0)));
        assert!(HalfPlane::lower(1.0).contains(c(0.0, 0.5)));
    }
}
