//! Horocyclic rectangles in the hyperbolic upper half-plane.
//!
//! The leaf is the upper half-plane with the horocycle flow running
//! along horizontal lines.  The n-th domain is a fixed horizontal
//! extent crossed with vertical extent from e^{-n} up to 1, described
//! in log coordinates so deep domains keep their resolution.  Against
//! the height-weighted metric its area grows like n while its boundary
//! length stays below 6.

use crate::continuum::{ContinuumError, LeafDomain};

/// The domain [-1, 1] x [e^{-n}, 1], n >= 1.
pub fn horocycle_domain(n: u32) -> Result<LeafDomain, ContinuumError> {
    LeafDomain::hyperbolic_strip(-1.0, 1.0, -(n as f64), 0.0)
}

/// Closed form for the weighted boundary length of the n-th domain.
pub fn horocycle_boundary_length(n: u32) -> f64 {
    2.0 * (3.0 - (-(n as f64)).exp())
}
