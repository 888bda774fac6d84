//! Integer grids in one, two, and three dimensions.
//!
//! Points are triples with unused coordinates pinned to zero, so a
//! single point type serves every dimension.  Balls are taken in the
//! word metric of the standard generators, which is the l1 metric, and
//! the closed-form counts for ball sizes and shift difference sets are
//! exposed alongside the enumerated sets so the generic window
//! machinery can be checked against them exactly.

use std::collections::BTreeSet;

use thiserror::Error;

use crate::orbit::{Generator, GeneratorSet, OrbitWindow};

pub type GridPoint = [i64; 3];

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GridError {
    #[error("grid dimension {d} is not supported (use 1, 2, or 3)")]
    DimensionUnsupported { d: u32 },
}

const AXIS_NAMES: [char; 3] = ['x', 'y', 'z'];

fn check_dimension(d: u32) -> Result<usize, GridError> {
    if (1..=3).contains(&d) {
        Ok(d as usize)
    } else {
        Err(GridError::DimensionUnsupported { d })
    }
}

/// The 2d coordinate shifts, labeled "x+", "x-", and so on.
pub fn grid_generators(d: u32) -> Result<GeneratorSet<GridPoint>, GridError> {
    let d = check_dimension(d)?;
    let mut gens = Vec::with_capacity(2 * d);
    for (axis, name) in AXIS_NAMES.iter().enumerate().take(d) {
        for sign in [1i64, -1] {
            let suffix = if sign > 0 { '+' } else { '-' };
            let inverse_suffix = if sign > 0 { '-' } else { '+' };
            gens.push(Generator::new(
                format!("{name}{suffix}"),
                format!("{name}{inverse_suffix}"),
                move |p: &GridPoint| {
                    let mut q = *p;
                    q[axis] += sign;
                    Some(q)
                },
            ));
        }
    }
    Ok(GeneratorSet::new(gens).expect("labels are inverse paired by construction"))
}

/// A window around the origin large enough to query sets of radius
/// `radius - 1` together with their one-step images.
pub fn grid_window(d: u32, radius: u32) -> Result<OrbitWindow<GridPoint>, GridError> {
    Ok(OrbitWindow::build(
        [0, 0, 0],
        radius,
        grid_generators(d)?,
    ))
}

/// The l1 ball of radius n around the origin.
pub fn grid_ball(d: u32, n: u32) -> Result<BTreeSet<GridPoint>, GridError> {
    let d = check_dimension(d)?;
    let n = n as i64;
    let mut out = BTreeSet::new();
    let range = |active: bool, budget: i64| -> std::ops::RangeInclusive<i64> {
        if active {
            -budget..=budget
        } else {
            0..=0
        }
    };
    for x in -n..=n {
        for y in range(d >= 2, n - x.abs()) {
            for z in range(d >= 3, n - x.abs() - y.abs()) {
                out.insert([x, y, z]);
            }
        }
    }
    Ok(out)
}

/// Number of points in the l1 ball of radius n.
pub fn ball_size(d: u32, n: u32) -> Result<u64, GridError> {
    check_dimension(d)?;
    let n = n as u64;
    Ok(match d {
        1 => 2 * n + 1,
        2 => 2 * n * n + 2 * n + 1,
        _ => (2 * n + 1) * (2 * n * n + 2 * n + 3) / 3,
    })
}

/// Number of points swapped in or out when the ball of radius n is
/// shifted by one unit along a coordinate axis: twice the size of the
/// closed half of the radius-n sphere facing the shift.
pub fn shift_difference_size(d: u32, n: u32) -> Result<u64, GridError> {
    check_dimension(d)?;
    let n = n as u64;
    Ok(match d {
        1 => 2,
        2 => 4 * n + 2,
        _ => 4 * n * n + 4 * n + 2,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::averaging::classic_ratio;
    use num::BigRational;

    #[test]
    fn enumerated_balls_match_the_closed_form_counts() {
        for d in 1..=3u32 {
            for n in 0..=8u32 {
                let ball = grid_ball(d, n).unwrap();
                assert_eq!(ball.len() as u64, ball_size(d, n).unwrap(), "d={d} n={n}");
            }
        }
    }

    #[test]
    fn unused_coordinates_stay_zero() {
        let ball = grid_ball(2, 3).unwrap();
        assert!(ball.iter().all(|p| p[2] == 0));
        let ball = grid_ball(1, 3).unwrap();
        assert!(ball.iter().all(|p| p[1] == 0 && p[2] == 0));
    }

    #[test]
    fn window_difference_sets_match_the_closed_form() {
        for d in 1..=3u32 {
            for n in 0..=4u32 {
                let w = grid_window(d, n + 2).unwrap();
                let ball = grid_ball(d, n).unwrap();
                for axis in &AXIS_NAMES[..d as usize] {
                    for suffix in ['+', '-'] {
                        let label = format!("{axis}{suffix}");
                        let moved = w.difference_set(&ball, &label).unwrap();
                        assert_eq!(
                            moved.len() as u64,
                            shift_difference_size(d, n).unwrap(),
                            "d={d} n={n} label={label}"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn plane_ratio_follows_the_counts() {
        let w = grid_window(2, 12).unwrap();
        let ball = grid_ball(2, 10).unwrap();
        let r = classic_ratio(&w, &ball, "x+").unwrap();
        assert_eq!(r, BigRational::new(42.into(), 221.into()));
    }

    #[test]
    fn dimension_zero_and_four_are_rejected() {
        assert!(matches!(
            grid_generators(0),
            Err(GridError::DimensionUnsupported { d: 0 })
        ));
        assert!(matches!(
            grid_ball(4, 1),
            Err(GridError::DimensionUnsupported { d: 4 })
        ));
    }
}
