//! Trace spaces of Paley–Wiener spaces on finite unions of Carleson sequences.
//!
//! The crate is `no_std` and only needs `alloc`. Everything here is pure
//! numerics over finite node sets: half-plane geometry, pseudohyperbolic and
//! Euclidean divided differences, sequence partitioning, the generating
//! function `S` and the weight `d_N`, grid estimators for the Muckenhoupt
//! conditions, the trace-space norms and the condition reports built on top
//! of them. File formats and the command line live in the `pwtrace` crate.
#![no_std]
#![forbid(unsafe_code)]
// `num_traits::Float` supplies the math methods without std; once any
// dependency links std they resolve to the inherent ones instead
#![allow(unused_imports)]
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;

pub mod clustering;
pub mod conditions;
pub mod divided;
pub mod error;
pub mod generating;
pub mod geometry;
pub mod muckenhoupt;
pub mod quadrature;
pub mod serde_point;
pub mod trace;

pub use clustering::{GridSpec, NodeSequence, Partition};
pub use conditions::{check_hn, check_ls, CheckOptions, ConditionReport, Verdict};
pub use divided::{Cluster, ExpSign, Flavor};
pub use error::{Error, Result};
pub use geometry::{HalfPlane, Side};
pub use trace::{BandlimitedFunction, SpaceParams, TraceData};

/// Complex numbers used for nodes, trace values and evaluation points.
pub type Complex = num_complex::Complex64;
