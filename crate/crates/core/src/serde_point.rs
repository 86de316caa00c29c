//! Serde adapters writing complex numbers as `{"re": .., "im": ..}` objects.

use alloc::vec::Vec;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::Complex;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PointRepr {
    pub re: f64,
    pub im: f64,
}

impl From<Complex> for PointRepr {
    fn from(z: Complex) -> Self {
        PointRepr { re: z.re, im: z.im }
    }
}

impl From<PointRepr> for Complex {
    fn from(p: PointRepr) -> Self {
        Complex::new(p.re, p.im)
    }
}

pub fn serialize<S: Serializer>(z: &Complex, s: S) -> Result<S::Ok, S::Error> {
    PointRepr::from(*z).serialize(s)
}

pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Complex, D::Error> {
    PointRepr::deserialize(d).map(Complex::from)
}

pub mod vec {
    use super::*;

    pub fn serialize<S: Serializer>(zs: &[Complex], s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(zs.iter().map(|z| PointRepr::from(*z)))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Complex>, D::Error> {
        let reprs = Vec::<PointRepr>::deserialize(d)?;
        Ok(reprs.into_iter().map(Complex::from).collect())
    }
}
