//! Simulation of Fréchet random sup measures and the extremal limits of
//! long-range dependent stable processes.

// `!(x > 0.0)` style checks are used on purpose so that NaN is rejected
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod dist;
pub mod error;
pub mod interval;
pub mod markov;
pub mod quad;
pub mod range;
pub mod rng;
pub mod sas;
pub mod special;
pub mod supmeasure;
pub mod verify;

pub use error::{Error, Result};
pub use interval::{Interval, IntervalUnion};
