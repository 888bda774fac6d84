//! Multiplicative cocycles on orbit graphs and the weighted masses they
//! induce.
//!
//! A cocycle assigns a positive weight `delta(z, y)` to each ordered pair of
//! orbit points, multiplicative along triples.  Weighted masses
//! `|A|_y = sum over z in A of delta(z, y)` replace cardinalities in the
//! weighted averaging diagnostics.  Arithmetic is generic over [`Scalar`]:
//! exact rationals keep the structural identities bit-exact, floats cover
//! tabulated user data.

use std::fmt;
use std::sync::Arc;

use num::traits::{FromPrimitive, NumAssign, Signed};
use num::Num;
use thiserror::Error;

use crate::orbit::{OrbitWindow, Point, WindowError};

/// Numeric coefficients the diagnostics are generic over.  Implemented by
/// `BigRational` (exact mode) and `f64` (float mode).
pub trait Scalar:
    Num + NumAssign + Signed + FromPrimitive + PartialOrd + Clone + fmt::Debug + fmt::Display + Send + Sync + 'static
{
}

impl<T> Scalar for T where
    T: Num
        + NumAssign
        + Signed
        + FromPrimitive
        + PartialOrd
        + Clone
        + fmt::Debug
        + fmt::Display
        + Send
        + Sync
        + 'static
{
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CocycleError {
    #[error("cocycle is undefined at {point}")]
    OutsideOrbit { point: String },
    #[error("cocycle weight at {point} is not strictly positive")]
    NonpositiveWeight { point: String },
    #[error("empty support has no weighted mass")]
    EmptySupport,
    #[error(transparent)]
    Window(#[from] WindowError),
}

type PairFn<P, S> = dyn Fn(&P, &P) -> Result<S, CocycleError> + Send + Sync;

/// A positive multiplicative weight on ordered pairs of orbit points.
#[derive(Clone)]
pub struct Cocycle<P, S> {
    eval: Arc<PairFn<P, S>>,
}

impl<P: Point, S: Scalar> Cocycle<P, S> {
    /// Wrap a raw pairwise evaluation.  The multiplicative identity is the
    /// caller's responsibility; [`cocycle_identity_defect`] measures it.
    pub fn from_pairwise(
        eval: impl Fn(&P, &P) -> Result<S, CocycleError> + Send + Sync + 'static,
    ) -> Self {
        Cocycle {
            eval: Arc::new(eval),
        }
    }

    /// The cocycle `h(z) / h(y)` of a positive potential.  Multiplicative by
    /// construction.
    pub fn from_potential(h: impl Fn(&P) -> Option<S> + Send + Sync + 'static) -> Self {
        Cocycle::from_pairwise(move |z: &P, y: &P| {
            let hz = h(z).ok_or_else(|| CocycleError::OutsideOrbit {
                point: format!("{z:?}"),
            })?;
            if hz <= S::zero() {
                return Err(CocycleError::NonpositiveWeight {
                    point: format!("{z:?}"),
                });
            }
            let hy = h(y).ok_or_else(|| CocycleError::OutsideOrbit {
                point: format!("{y:?}"),
            })?;
            if hy <= S::zero() {
                return Err(CocycleError::NonpositiveWeight {
                    point: format!("{y:?}"),
                });
            }
            Ok(hz / hy)
        })
    }

    /// The constant cocycle `delta == 1`, which turns every weighted mass
    /// into a cardinality.
    pub fn trivial() -> Self {
        Cocycle::from_pairwise(|_: &P, _: &P| Ok(S::one()))
    }

    /// Evaluate `delta(z, y)`, enforcing strict positivity.
    pub fn eval(&self, z: &P, y: &P) -> Result<S, CocycleError> {
        let v = (self.eval)(z, y)?;
        if v <= S::zero() {
            return Err(CocycleError::NonpositiveWeight {
                point: format!("{z:?}"),
            });
        }
        Ok(v)
    }
}

impl<P, S> fmt::Debug for Cocycle<P, S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("Cocycle")
    }
}

/// `|A|_y`: the total weight of `set` seen from `basepoint`.
pub fn weighted_mass<'a, P, S>(
    cocycle: &Cocycle<P, S>,
    set: impl IntoIterator<Item = &'a P>,
    basepoint: &P,
) -> Result<S, CocycleError>
where
    P: Point + 'a,
    S: Scalar,
{
    let mut total = S::zero();
    let mut any = false;
    for z in set {
        total += cocycle.eval(z, basepoint)?;
        any = true;
    }
    if !any {
        return Err(CocycleError::EmptySupport);
    }
    Ok(total)
}

/// Absolute defect `|delta(x,y) * delta(y,z) - delta(x,z)|` of the
/// multiplicative identity on one triple.  Exactly zero for exact potential
/// cocycles; for float data divide by `delta(x,z)` to read it relatively.
pub fn cocycle_identity_defect<P, S>(
    cocycle: &Cocycle<P, S>,
    x: &P,
    y: &P,
    z: &P,
) -> Result<S, CocycleError>
where
    P: Point,
    S: Scalar,
{
    let a = cocycle.eval(x, y)?;
    let b = cocycle.eval(y, z)?;
    let c = cocycle.eval(x, z)?;
    Ok((a * b - c).abs())
}

/// Defect of the harmonicity equation at one vertex:
/// `|delta(z,y) - (1/deg z) * sum over neighbors w of delta(w,y)|`.
/// The neighborhood of `z` must lie inside the window.
pub fn harmonic_defect_at<P, S>(
    cocycle: &Cocycle<P, S>,
    window: &OrbitWindow<P>,
    z: &P,
    basepoint: &P,
) -> Result<S, CocycleError>
where
    P: Point,
    S: Scalar,
{
    let neighbors = window.edge_neighbors(z)?;
    let deg = S::from_usize(neighbors.len()).expect("degree fits in the scalar type");
    if neighbors.is_empty() {
        // An isolated vertex satisfies the equation vacuously.
        return Ok(S::zero());
    }
    let mut avg = S::zero();
    for w in neighbors {
        avg += cocycle.eval(w, basepoint)?;
    }
    avg /= deg;
    Ok((cocycle.eval(z, basepoint)? - avg).abs())
}
