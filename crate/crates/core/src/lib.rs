//! Averaging sequences on orbit graphs of finitely generated pseudogroups.
//!
//! The crate builds finite windows of orbit graphs, runs classic and
//! cocycle-weighted Folner diagnostics over indexed families of finite sets,
//! and measures how far the resulting empirical measures are from being
//! invariant, stationary, or harmonic.  A separate module computes
//! modified-metric isoperimetric ratios for two continuous leaf geometries
//! (hyperbolic half-plane strips and Sol-type suspension leaves).
//!
//! All discrete computations can run in exact rational arithmetic; every
//! operation that could be truncated by a window horizon fails loudly instead
//! of returning a silently wrong answer.

pub mod averaging;
pub mod cocycle;
pub mod continuum;
pub mod examples;
pub mod measure;
pub mod orbit;

pub use num::{BigInt, BigRational};
