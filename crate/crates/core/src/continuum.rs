//! Rectangle-type leaf domains in the two continuous examples, with the
//! modified (density-rescaled) area and boundary length.  Closed forms
//! are exact; adaptive quadrature cross-checks them from the pointwise
//! integrands, so the density cancellations are verified numerically
//! rather than assumed.
//!
//! Charts keep the second coordinate in logarithmic form.  A strip
//! reaching down to height `e^{-20}` is then a benign rectangle for the
//! quadrature, while the exponential vertical-side integrands still give
//! the refinement real work to do.

// the negated float comparisons throughout are deliberate: they reject NaN,
// which the non-negated forms would wave through
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod quad;

use thiserror::Error;

use quad::{integrate_interval, integrate_rectangle, QuadratureOutcome, DEFAULT_BUDGET};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ContinuumError {
    #[error("degenerate chart: {what}")]
    DegenerateChart { what: String },
    #[error("anisotropy base must exceed 1, got {lambda}")]
    LambdaOutOfRange { lambda: f64 },
    #[error("density scale must be positive, got {scale}")]
    NonpositiveScale { scale: f64 },
    #[error("tolerance must be positive, got {tol}")]
    BadTolerance { tol: f64 },
    #[error("quadrature exceeded its evaluation budget ({evaluations} evaluations)")]
    BudgetExceeded { evaluations: usize },
    #[error("quadrature failed to converge at depth {depth}")]
    DepthExceeded { depth: u32 },
}

/// Which leafwise geometry the chart lives in.
///
/// The half-plane variant stores the height range as `[log_y0, log_y1]`;
/// the actual strip is `[x0, x1] x [e^{log_y0}, e^{log_y1}]` with leaf
/// metric `(dx^2 + dy^2)/y^2` and density `y` (height over basepoint
/// height).  The sol variant uses leaf coordinates `(x, t)` with
/// `b = lambda^t`: leaf volume `(log lambda) lambda^{-t} dx dt` and
/// density `lambda^t / log lambda`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Geometry {
    HyperbolicHalfPlane { log_y0: f64, log_y1: f64 },
    SolLeaf { lambda: f64, t0: f64, t1: f64 },
}

/// A rectangle-type domain in a leaf together with its density.
#[derive(Debug, Clone, PartialEq)]
pub struct LeafDomain {
    x0: f64,
    x1: f64,
    geometry: Geometry,
    density_scale: f64,
}

/// Side-by-side closed-form and quadrature values, with relative gaps.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureReport {
    pub area_closed: f64,
    pub area_quadrature: f64,
    pub area_rel_gap: f64,
    pub length_closed: f64,
    pub length_quadrature: f64,
    pub length_rel_gap: f64,
    pub evaluations: usize,
    pub tolerance: f64,
    pub pass: bool,
}

pub fn relative_gap(a: f64, b: f64) -> f64 {
    let scale = a.abs().max(b.abs()).max(f64::MIN_POSITIVE);
    (a - b).abs() / scale
}

impl LeafDomain {
    /// Strip `[x0, x1] x [e^{log_y0}, e^{log_y1}]` in the hyperbolic
    /// half-plane with density `y`.
    pub fn hyperbolic_strip(
        x0: f64,
        x1: f64,
        log_y0: f64,
        log_y1: f64,
    ) -> Result<Self, ContinuumError> {
        if !(x1 > x0) || !x0.is_finite() || !x1.is_finite() {
            return Err(ContinuumError::DegenerateChart {
                what: format!("x range [{x0}, {x1}]"),
            });
        }
        if !(log_y1 > log_y0) || !log_y0.is_finite() || !log_y1.is_finite() {
            return Err(ContinuumError::DegenerateChart {
                what: format!("log-height range [{log_y0}, {log_y1}]"),
            });
        }
        Ok(LeafDomain {
            x0,
            x1,
            geometry: Geometry::HyperbolicHalfPlane { log_y0, log_y1 },
            density_scale: 1.0,
        })
    }

    /// Strip `[x0, x1] x [t0, t1]` in a sol leaf with anisotropy base
    /// `lambda`, carrying density `lambda^t / log lambda`.
    pub fn sol_strip(
        x0: f64,
        x1: f64,
        lambda: f64,
        t0: f64,
        t1: f64,
    ) -> Result<Self, ContinuumError> {
        if !(x1 > x0) || !x0.is_finite() || !x1.is_finite() {
            return Err(ContinuumError::DegenerateChart {
                what: format!("x range [{x0}, {x1}]"),
            });
        }
        if !(t1 > t0) || !t0.is_finite() || !t1.is_finite() {
            return Err(ContinuumError::DegenerateChart {
                what: format!("t range [{t0}, {t1}]"),
            });
        }
        if !(lambda > 1.0) || !lambda.is_finite() {
            return Err(ContinuumError::LambdaOutOfRange { lambda });
        }
        Ok(LeafDomain {
            x0,
            x1,
            geometry: Geometry::SolLeaf { lambda, t0, t1 },
            density_scale: 1.0,
        })
    }

    /// Same chart with the density multiplied by a positive constant, as
    /// happens under a change of basepoint.  Ratios must not notice.
    pub fn with_density_scale(mut self, scale: f64) -> Result<Self, ContinuumError> {
        if !(scale > 0.0) || !scale.is_finite() {
            return Err(ContinuumError::NonpositiveScale { scale });
        }
        self.density_scale = scale;
        Ok(self)
    }

    pub fn geometry(&self) -> &Geometry {
        &self.geometry
    }

    pub fn x_range(&self) -> (f64, f64) {
        (self.x0, self.x1)
    }

    /// Modified area, integral of density times leaf volume.  The
    /// integrand cancels to the density scale in both geometries, which
    /// the closed form exploits.
    pub fn modified_area(&self) -> f64 {
        let width = self.x1 - self.x0;
        let span = match self.geometry {
            Geometry::HyperbolicHalfPlane { log_y0, log_y1 } => log_y1 - log_y0,
            Geometry::SolLeaf { t0, t1, .. } => t1 - t0,
        };
        self.density_scale * width * span
    }

    /// Modified length of the four chart sides.  In both geometries the
    /// density turns the side elements into flat lengths of the chart
    /// image: horizontal sides contribute their width, vertical sides the
    /// difference of the (exponentiated) heights.
    pub fn modified_boundary_length(&self) -> f64 {
        let width = self.x1 - self.x0;
        let rise = match self.geometry {
            Geometry::HyperbolicHalfPlane { log_y0, log_y1 } => log_y1.exp() - log_y0.exp(),
            Geometry::SolLeaf { lambda, t0, t1 } => {
                let l = lambda.ln();
                (t1 * l).exp() - (t0 * l).exp()
            }
        };
        self.density_scale * (2.0 * width + 2.0 * rise)
    }

    /// Boundary length over area.
    pub fn isoperimetric_ratio(&self) -> f64 {
        self.modified_boundary_length() / self.modified_area()
    }

    // Pointwise product density(u) * volume element(u) * jacobian of the
    // log parametrization, deliberately not simplified: the quadrature
    // should watch the factors cancel.
    fn area_integrand(&self, u: f64) -> f64 {
        match self.geometry {
            Geometry::HyperbolicHalfPlane { .. } => {
                let y = u.exp();
                self.density_scale * y * (1.0 / (y * y)) * y
            }
            Geometry::SolLeaf { lambda, .. } => {
                let l = lambda.ln();
                let t = u;
                self.density_scale * ((t * l).exp() / l) * (l * (-t * l).exp())
            }
        }
    }

    // density * metric length element per unit of u along a vertical side
    fn vertical_integrand(&self, u: f64) -> f64 {
        match self.geometry {
            Geometry::HyperbolicHalfPlane { .. } => {
                let y = u.exp();
                self.density_scale * y * (1.0 / y) * y
            }
            Geometry::SolLeaf { lambda, .. } => {
                let l = lambda.ln();
                self.density_scale * (u * l).exp() * l
            }
        }
    }

    // density * metric length element per unit of x along a horizontal
    // side at log-height (or t) equal to u
    fn horizontal_integrand(&self, u: f64) -> f64 {
        match self.geometry {
            Geometry::HyperbolicHalfPlane { .. } => {
                let y = u.exp();
                self.density_scale * y * (1.0 / y)
            }
            Geometry::SolLeaf { .. } => self.density_scale,
        }
    }

    fn u_range(&self) -> (f64, f64) {
        match self.geometry {
            Geometry::HyperbolicHalfPlane { log_y0, log_y1 } => (log_y0, log_y1),
            Geometry::SolLeaf { t0, t1, .. } => (t0, t1),
        }
    }

    /// Modified area by adaptive quadrature of the raw integrand.
    pub fn modified_area_quadrature(&self, tol: f64) -> Result<QuadratureOutcome, ContinuumError> {
        let (u0, u1) = self.u_range();
        let scale = self.modified_area().abs().max(1.0);
        integrate_rectangle(
            |_, u| self.area_integrand(u),
            self.x0,
            self.x1,
            u0,
            u1,
            tol * scale,
            DEFAULT_BUDGET,
        )
    }

    /// Modified boundary length by adaptive quadrature, side by side.
    pub fn modified_boundary_length_quadrature(
        &self,
        tol: f64,
    ) -> Result<QuadratureOutcome, ContinuumError> {
        let (u0, u1) = self.u_range();
        let scale = self.modified_boundary_length().abs().max(1.0);
        let budget = DEFAULT_BUDGET;
        let bottom = integrate_interval(
            |_| self.horizontal_integrand(u0),
            self.x0,
            self.x1,
            tol * scale,
            budget,
        )?;
        let top = integrate_interval(
            |_| self.horizontal_integrand(u1),
            self.x0,
            self.x1,
            tol * scale,
            budget,
        )?;
        let side = integrate_interval(
            |u| self.vertical_integrand(u),
            u0,
            u1,
            0.5 * tol * scale,
            budget,
        )?;
        Ok(QuadratureOutcome {
            value: bottom.value + top.value + 2.0 * side.value,
            evaluations: bottom.evaluations + top.evaluations + 2 * side.evaluations,
            max_depth: bottom.max_depth.max(top.max_depth).max(side.max_depth),
        })
    }

    /// Run both quadratures against both closed forms at `tol` (relative)
    /// and report the gaps.
    pub fn quadrature_validate(&self, tol: f64) -> Result<QuadratureReport, ContinuumError> {
        if !(tol > 0.0) {
            return Err(ContinuumError::BadTolerance { tol });
        }
        let area_closed = self.modified_area();
        let length_closed = self.modified_boundary_length();
        let area = self.modified_area_quadrature(tol)?;
        let length = self.modified_boundary_length_quadrature(tol)?;
        let area_rel_gap = relative_gap(area_closed, area.value);
        let length_rel_gap = relative_gap(length_closed, length.value);
        Ok(QuadratureReport {
            area_closed,
            area_quadrature: area.value,
            area_rel_gap,
            length_closed,
            length_quadrature: length.value,
            length_rel_gap,
            evaluations: area.evaluations + length.evaluations,
            tolerance: tol,
            pass: area_rel_gap <= tol && length_rel_gap <= tol,
        })
    }
}
