//! Averaging-sequence diagnostics: how close an indexed family of finite
//! sets comes to being invariant under the generators, in the counting
//! metric or in a cocycle-weighted one.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use num::{BigInt, BigRational};
use thiserror::Error;

use crate::cocycle::{weighted_mass, Cocycle, CocycleError, Scalar};
use crate::orbit::{OrbitWindow, Point, WindowError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AveragingError {
    #[error("averaging set is empty")]
    EmptySet,
    #[error("subexponential ratio needs index n >= 1")]
    IndexTooSmall,
    #[error(transparent)]
    Window(#[from] WindowError),
    #[error(transparent)]
    Cocycle(#[from] CocycleError),
    #[error("term n = {n}: {source}")]
    AtTerm {
        n: u32,
        #[source]
        source: Box<AveragingError>,
    },
}

fn ratio_of_counts(num: usize, den: usize) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// `|difference_set(A, gen)| / |A|`: the counting-measure averaging ratio.
pub fn classic_ratio<P: Point>(
    window: &OrbitWindow<P>,
    set: &BTreeSet<P>,
    label: &str,
) -> Result<BigRational, AveragingError> {
    if set.is_empty() {
        return Err(AveragingError::EmptySet);
    }
    let moved = window.difference_set(set, label)?;
    Ok(ratio_of_counts(moved.len(), set.len()))
}

/// The weighted averaging ratio `|difference_set(A, gen)|_y / |A|_y`.
pub fn delta_ratio<P: Point, S: Scalar>(
    window: &OrbitWindow<P>,
    cocycle: &Cocycle<P, S>,
    set: &BTreeSet<P>,
    basepoint: &P,
    label: &str,
) -> Result<S, AveragingError> {
    if set.is_empty() {
        return Err(AveragingError::EmptySet);
    }
    let moved = window.difference_set(set, label)?;
    let denom = weighted_mass(cocycle, set, basepoint)?;
    if moved.is_empty() {
        return Ok(S::zero());
    }
    let numer = weighted_mass(cocycle, &moved, basepoint)?;
    Ok(numer / denom)
}

/// The weighted isoperimetric ratio `|vertex_boundary(A)|_y / |A|_y`.
pub fn folner_boundary_ratio<P: Point, S: Scalar>(
    window: &OrbitWindow<P>,
    cocycle: &Cocycle<P, S>,
    set: &BTreeSet<P>,
    basepoint: &P,
) -> Result<S, AveragingError> {
    if set.is_empty() {
        return Err(AveragingError::EmptySet);
    }
    let boundary = window.vertex_boundary(set)?;
    if boundary.is_empty() {
        return Ok(S::zero());
    }
    let numer = weighted_mass(cocycle, &boundary, basepoint)?;
    let denom = weighted_mass(cocycle, set, basepoint)?;
    Ok(numer / denom)
}

/// Growth diagnostic `(|ball(x, n+1)| - |ball(x, n-1)|) / |ball(x, n)|`.
/// Tends to zero along subexponential families and stays bounded away from
/// zero on trees.
pub fn subexponential_ratio<P: Point>(
    window: &OrbitWindow<P>,
    x: &P,
    n: u32,
) -> Result<BigRational, AveragingError> {
    if n < 1 {
        return Err(AveragingError::IndexTooSmall);
    }
    let outer = window.ball(x, n + 1)?.len();
    let inner = window.ball(x, n - 1)?.len();
    let mid = window.ball(x, n)?.len();
    Ok(ratio_of_counts(outer - inner, mid))
}

/// One member of an indexed family of finite sets, with the window that
/// resolves its neighborhoods and the basepoint weighting it.
#[derive(Clone)]
pub struct SequenceTerm<P> {
    pub n: u32,
    pub set: BTreeSet<P>,
    pub basepoint: P,
    pub window: Arc<OrbitWindow<P>>,
}

/// An indexed family of finite subsets of one orbit.
#[derive(Clone, Default)]
pub struct AveragingSequence<P> {
    terms: Vec<SequenceTerm<P>>,
}

impl<P: Point> AveragingSequence<P> {
    pub fn new(terms: Vec<SequenceTerm<P>>) -> Self {
        AveragingSequence { terms }
    }

    pub fn terms(&self) -> &[SequenceTerm<P>] {
        &self.terms
    }
}

/// Every per-generator ratio of one term, plus its boundary ratio and mass.
#[derive(Debug, Clone, PartialEq)]
pub struct RatioSeries<S> {
    pub n: u32,
    pub mass: S,
    pub per_generator: BTreeMap<String, S>,
    pub boundary_ratio: S,
}

/// Run the counting-measure diagnostics over the whole family.
pub fn run_classic<P: Point>(
    seq: &AveragingSequence<P>,
) -> Result<Vec<RatioSeries<BigRational>>, AveragingError> {
    run_weighted(seq, &Cocycle::trivial())
}

/// Run the weighted diagnostics over the whole family.  Errors carry the
/// index of the term that failed.
pub fn run_weighted<P: Point, S: Scalar>(
    seq: &AveragingSequence<P>,
    cocycle: &Cocycle<P, S>,
) -> Result<Vec<RatioSeries<S>>, AveragingError> {
    seq.terms
        .iter()
        .map(|t| {
            term_ratios(t, cocycle).map_err(|e| AveragingError::AtTerm {
                n: t.n,
                source: Box::new(e),
            })
        })
        .collect()
}

fn term_ratios<P: Point, S: Scalar>(
    term: &SequenceTerm<P>,
    cocycle: &Cocycle<P, S>,
) -> Result<RatioSeries<S>, AveragingError> {
    let mass = weighted_mass(cocycle, &term.set, &term.basepoint)?;
    let mut per_generator = BTreeMap::new();
    for g in term.window.generators().iter() {
        let r = delta_ratio(&term.window, cocycle, &term.set, &term.basepoint, g.label())?;
        per_generator.insert(g.label().to_string(), r);
    }
    let boundary_ratio = folner_boundary_ratio(&term.window, cocycle, &term.set, &term.basepoint)?;
    Ok(RatioSeries {
        n: term.n,
        mass,
        per_generator,
        boundary_ratio,
    })
}

/// Least-squares slope of `log y` against `log x`.  Pairs with a
/// nonpositive coordinate are skipped; `None` when fewer than two remain.
pub fn fit_log_decay(points: &[(f64, f64)]) -> Option<f64> {
    let logs: Vec<(f64, f64)> = points
        .iter()
        .filter(|(x, y)| *x > 0.0 && *y > 0.0)
        .map(|(x, y)| (x.ln(), y.ln()))
        .collect();
    if logs.len() < 2 {
        return None;
    }
    let n = logs.len() as f64;
    let mx = logs.iter().map(|(x, _)| x).sum::<f64>() / n;
    let my = logs.iter().map(|(_, y)| y).sum::<f64>() / n;
    let mut num = 0.0;
    let mut den = 0.0;
    for (x, y) in &logs {
        num += (x - mx) * (y - my);
        den += (x - mx) * (x - mx);
    }
    if den == 0.0 {
        return None;
    }
    Some(num / den)
}

/// Running minimum of a series: the finite-stage reading of its lower limit.
pub fn running_minimum<S: Scalar>(values: &[S]) -> Vec<S> {
    let mut out = Vec::with_capacity(values.len());
    let mut best: Option<S> = None;
    for v in values {
        let next = match best {
            Some(b) if b < *v => b,
            _ => v.clone(),
        };
        best = Some(next.clone());
        out.push(next);
    }
    out
}
