//! Arbitrary pattern formation by anonymous, oblivious robots on the
//! infinite grid under a fully asynchronous scheduler.
//!
//! The crate is layered bottom-up:
//!
//! - [`geometry`]: lattice points, point sets, rectangles, isometries.
//! - [`canonical`]: corner strings, asymmetry, canonical frames.
//! - [`target`]: the input pattern in canonical coordinates.
//! - [`conditions`]: condition vector and phase classification.
//! - [`algorithm`]: the per-robot decision function.
//! - [`scheduler`]: discrete-event ASYNC simulation with an adversary.
//! - [`verify`]: trace checkers and oracles.

pub mod algorithm;
pub mod canonical;
pub mod conditions;
pub mod error;
pub mod geometry;
pub mod scheduler;
pub mod target;
pub mod verify;

pub use error::{Error, Result};
pub use geometry::{GridPoint, PointSet};
