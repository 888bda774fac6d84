//! Leafwise rectangles in the sol-geometry torus bundle.
//!
//! Leaves carry coordinates (a, t) with the second fiber coordinate
//! b = lambda^t, lambda > 1 the expansion factor of the gluing map.
//! The n-th domain is [-1, 1] x [lambda^{-n}, 1] in (a, b), stored in
//! the t coordinate.  The weighted area telescopes to 2n with no trace
//! of lambda, while the weighted boundary length stays below 6.

use crate::continuum::{ContinuumError, LeafDomain};

/// The domain [-1, 1] x [lambda^{-n}, 1] in leaf coordinates, n >= 1.
pub fn sol_domain(n: u32, lambda: f64) -> Result<LeafDomain, ContinuumError> {
    LeafDomain::sol_strip(-1.0, 1.0, lambda, -(n as f64), 0.0)
}

/// Closed form for the weighted boundary length of the n-th domain.
pub fn sol_boundary_length(n: u32, lambda: f64) -> f64 {
    2.0 * (2.0 + (1.0 - lambda.powi(-(n as i32))))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn area_is_independent_of_the_expansion_factor() {
        for n in [1u32, 7, 20] {
            for lambda in [1.5f64, std::f64::consts::E, 10.0] {
                let dom = sol_domain(n, lambda).unwrap();
                assert_eq!(dom.modified_area(), 2.0 * n as f64);
            }
        }
    }

    #[test]
    fn boundary_length_matches_the_closed_form() {
        for n in 1..=12u32 {
            for lambda in [1.5f64, 4.0] {
                let dom = sol_domain(n, lambda).unwrap();
                let len = dom.modified_boundary_length();
                assert!((len - sol_boundary_length(n, lambda)).abs() < 1e-12);
                assert!(len < 6.0);
            }
        }
    }

    #[test]
    fn contracting_factors_are_rejected() {
        assert!(sol_domain(3, 1.0).is_err());
        assert!(sol_domain(3, 0.5).is_err());
    }
}
