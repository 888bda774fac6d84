//! Adaptive composite Gauss-Legendre quadrature on intervals and
//! rectangles.  Refinement is dyadic with a hard depth cap and an
//! evaluation budget, so a non-converging integrand fails loudly instead
//! of spinning.

// the negated float comparisons are deliberate: they reject NaN, which the
// non-negated forms would wave through
#![allow(clippy::neg_cmp_op_on_partial_ord)]
// node and weight digits are transcribed verbatim from the reference table
#![allow(clippy::excessive_precision)]

use super::ContinuumError;

// 8-point Gauss-Legendre rule on [-1, 1]; exact through degree 15.
const GL_NODES: [f64; 8] = [
    -0.960_289_856_497_536_2,
    -0.796_666_477_413_626_7,
    -0.525_532_409_916_329_0,
    -0.183_434_642_495_649_8,
    0.183_434_642_495_649_8,
    0.525_532_409_916_329_0,
    0.796_666_477_413_626_7,
    0.960_289_856_497_536_2,
];
const GL_WEIGHTS: [f64; 8] = [
    0.101_228_536_290_376_26,
    0.222_381_034_453_374_47,
    0.313_706_645_877_887_3,
    0.362_683_783_378_362_0,
    0.362_683_783_378_362_0,
    0.313_706_645_877_887_3,
    0.222_381_034_453_374_47,
    0.101_228_536_290_376_26,
];

/// Result of one adaptive integration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureOutcome {
    pub value: f64,
    pub evaluations: usize,
    pub max_depth: u32,
}

pub(crate) const MAX_DEPTH: u32 = 20;
pub(crate) const DEFAULT_BUDGET: usize = 4_000_000;

fn gl8<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, evals: &mut usize) -> f64 {
    let mid = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    *evals += 8;
    GL_NODES
        .iter()
        .zip(GL_WEIGHTS.iter())
        .map(|(x, w)| w * f(mid + half * x))
        .sum::<f64>()
        * half
}

struct Budget {
    evals: usize,
    cap: usize,
}

impl Budget {
    fn check(&self) -> Result<(), ContinuumError> {
        if self.evals > self.cap {
            Err(ContinuumError::BudgetExceeded {
                evaluations: self.evals,
            })
        } else {
            Ok(())
        }
    }
}

/// Integrate `f` over `[a, b]` until the two-panel refinement of every
/// subinterval agrees with its one-panel estimate within its share of
/// `tol` (an absolute tolerance).
pub fn integrate_interval<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    b: f64,
    tol: f64,
    budget: usize,
) -> Result<QuadratureOutcome, ContinuumError> {
    if !(tol > 0.0) {
        return Err(ContinuumError::BadTolerance { tol });
    }
    if !(b > a) || !a.is_finite() || !b.is_finite() {
        return Err(ContinuumError::DegenerateChart {
            what: format!("integration interval [{a}, {b}]"),
        });
    }
    let mut budget = Budget {
        evals: 0,
        cap: budget,
    };
    let mut max_depth = 0;
    let value = refine_interval(&f, a, b, tol, 0, &mut budget, &mut max_depth)?;
    Ok(QuadratureOutcome {
        value,
        evaluations: budget.evals,
        max_depth,
    })
}

fn refine_interval<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    tol: f64,
    depth: u32,
    budget: &mut Budget,
    max_depth: &mut u32,
) -> Result<f64, ContinuumError> {
    let coarse = gl8(f, a, b, &mut budget.evals);
    let mid = 0.5 * (a + b);
    let fine = gl8(f, a, mid, &mut budget.evals) + gl8(f, mid, b, &mut budget.evals);
    budget.check()?;
    *max_depth = (*max_depth).max(depth);
    if (fine - coarse).abs() <= tol || (fine - coarse).abs() <= f64::EPSILON * fine.abs() {
        return Ok(fine);
    }
    if depth >= MAX_DEPTH {
        return Err(ContinuumError::DepthExceeded { depth });
    }
    let left = refine_interval(f, a, mid, 0.5 * tol, depth + 1, budget, max_depth)?;
    let right = refine_interval(f, mid, b, 0.5 * tol, depth + 1, budget, max_depth)?;
    Ok(left + right)
}

fn gl8_rect<F: Fn(f64, f64) -> f64>(
    f: &F,
    x0: f64,
    x1: f64,
    y0: f64,
    y1: f64,
    evals: &mut usize,
) -> f64 {
    let xm = 0.5 * (x0 + x1);
    let xh = 0.5 * (x1 - x0);
    let ym = 0.5 * (y0 + y1);
    let yh = 0.5 * (y1 - y0);
    *evals += 64;
    let mut acc = 0.0;
    for (xi, wx) in GL_NODES.iter().zip(GL_WEIGHTS.iter()) {
        let x = xm + xh * xi;
        let mut row = 0.0;
        for (yi, wy) in GL_NODES.iter().zip(GL_WEIGHTS.iter()) {
            row += wy * f(x, ym + yh * yi);
        }
        acc += wx * row;
    }
    acc * xh * yh
}

/// Integrate `f` over the rectangle `[x0, x1] x [y0, y1]` with quadtree
/// refinement under an absolute tolerance.
pub fn integrate_rectangle<F: Fn(f64, f64) -> f64>(
    f: F,
    x0: f64,
    x1: f64,
    y0: f64,
    y1: f64,
    tol: f64,
    budget: usize,
) -> Result<QuadratureOutcome, ContinuumError> {
    if !(tol > 0.0) {
        return Err(ContinuumError::BadTolerance { tol });
    }
    if !(x1 > x0) || !(y1 > y0) {
        return Err(ContinuumError::DegenerateChart {
            what: format!("integration rectangle [{x0}, {x1}] x [{y0}, {y1}]"),
        });
    }
    let mut budget = Budget {
        evals: 0,
        cap: budget,
    };
    let mut max_depth = 0;
    let value = refine_rectangle(&f, x0, x1, y0, y1, tol, 0, &mut budget, &mut max_depth)?;
    Ok(QuadratureOutcome {
        value,
        evaluations: budget.evals,
        max_depth,
    })
}

#[allow(clippy::too_many_arguments)]
fn refine_rectangle<F: Fn(f64, f64) -> f64>(
    f: &F,
    x0: f64,
    x1: f64,
    y0: f64,
    y1: f64,
    tol: f64,
    depth: u32,
    budget: &mut Budget,
    max_depth: &mut u32,
) -> Result<f64, ContinuumError> {
    let coarse = gl8_rect(f, x0, x1, y0, y1, &mut budget.evals);
    let xm = 0.5 * (x0 + x1);
    let ym = 0.5 * (y0 + y1);
    let fine = gl8_rect(f, x0, xm, y0, ym, &mut budget.evals)
        + gl8_rect(f, xm, x1, y0, ym, &mut budget.evals)
        + gl8_rect(f, x0, xm, ym, y1, &mut budget.evals)
        + gl8_rect(f, xm, x1, ym, y1, &mut budget.evals);
    budget.check()?;
    *max_depth = (*max_depth).max(depth);
    if (fine - coarse).abs() <= tol || (fine - coarse).abs() <= f64::EPSILON * fine.abs() {
        return Ok(fine);
    }
    if depth >= MAX_DEPTH {
        return Err(ContinuumError::DepthExceeded { depth });
    }
    let quads = [
        (x0, xm, y0, ym),
        (xm, x1, y0, ym),
        (x0, xm, ym, y1),
        (xm, x1, ym, y1),
    ];
    let mut acc = 0.0;
    for (a, b, c, d) in quads {
        acc += refine_rectangle(f, a, b, c, d, 0.25 * tol, depth + 1, budget, max_depth)?;
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gl8_is_exact_on_low_degree_polynomials() {
        // degree 15 is within the rule's exactness; one panel suffices
        let out = integrate_interval(|x| x.powi(15), 0.0, 1.0, 1e-12, 10_000).unwrap();
        assert!((out.value - 1.0 / 16.0).abs() < 1e-14);
        assert_eq!(out.max_depth, 0);
    }

    #[test]
    fn steep_exponential_converges_with_modest_depth() {
        // integral of e^u over [-46, 0] is 1 - e^{-46}
        let out = integrate_interval(|u| u.exp(), -46.0, 0.0, 1e-12, 1_000_000).unwrap();
        let exact = 1.0 - (-46.0f64).exp();
        assert!((out.value - exact).abs() < 1e-11, "value {}", out.value);
        assert!(out.max_depth <= 10);
    }

    #[test]
    fn rectangle_rule_integrates_a_product() {
        let out =
            integrate_rectangle(|x, y| x * y.exp(), 0.0, 2.0, -3.0, 0.0, 1e-12, 1_000_000).unwrap();
        let exact = 2.0 * (1.0 - (-3.0f64).exp());
        assert!((out.value - exact).abs() < 1e-11);
    }

    #[test]
    fn tiny_budget_fails_loudly() {
        let err = integrate_interval(|u| (40.0 * u).sin() * u.exp(), -40.0, 0.0, 1e-14, 50)
            .unwrap_err();
        assert!(matches!(err, ContinuumError::BudgetExceeded { .. }));
    }

    #[test]
    fn bad_tolerance_is_rejected() {
        assert!(matches!(
            integrate_interval(|u| u, 0.0, 1.0, 0.0, 100),
            Err(ContinuumError::BadTolerance { .. })
        ));
    }

    #[test]
    fn inverted_interval_is_rejected() {
        assert!(matches!(
            integrate_interval(|u| u, 1.0, 0.0, 1e-9, 100),
            Err(ContinuumError::DegenerateChart { .. })
        ));
    }
}
