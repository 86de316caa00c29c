#![allow(dead_code)]

use pwtrace_core::{Complex, NodeSequence};

pub fn c(re: f64, im: f64) -> Complex {
    Complex::new(re, im)
}

/// `+-(k - 1/2)` for `k = 1..=k_max`, the zero set of `cos(pi z)`.
pub fn half_integers(k_max: i64) -> NodeSequence {
    let xs: Vec<f64> = (1..=k_max)
        .flat_map(|k| [k as f64 - 0.5, -(k as f64 - 0.5)])
        .collect();
    NodeSequence::from_reals(&xs).unwrap()
}

/// `k + 1/2` and `k + 1/2 + 1/(2(1 + |k|))` for `|k| <= k_max`.
pub fn paired_lattice(k_max: i64) -> NodeSequence {
    let xs: Vec<f64> = (-k_max..=k_max)
        .flat_map(|k| {
            let x = k as f64 + 0.5;
            [x, x + 1.0 / (2.0 * (1.0 + k.abs() as f64))]
        })
        .collect();
    NodeSequence::from_reals(&xs).unwrap()
}

/// Half-integer lattice with every node in `[lo, hi]` removed.
pub fn gapped_lattice(k_max: i64, lo: f64, hi: f64) -> NodeSequence {
    let s = half_integers(k_max);
    s.filter(|z| z.re < lo || z.re > hi)
}
