//! Empirical measures carried by finite weighted sets, together with the
//! defect functionals that quantify how far they sit from harmonicity,
//! stationarity, and quasi-invariance.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::cocycle::{weighted_mass, Cocycle, CocycleError, Scalar};
use crate::orbit::{GeneratorSet, OrbitWindow, Point, WindowError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MeasureError {
    #[error("empty support")]
    EmptySupport,
    #[error("atom has nonpositive weight: {point}")]
    NonpositiveWeight { point: String },
    #[error("test function undefined at {point}: {what}")]
    Evaluation { point: String, what: String },
    #[error("generator {label} undefined at atom {point}")]
    UndefinedImage { point: String, label: String },
    #[error("Markov operator undefined at isolated vertex {point}")]
    IsolatedVertex { point: String },
    #[error("weak-star distance needs a nonempty test family")]
    EmptyFamily,
    #[error(transparent)]
    Window(#[from] WindowError),
    #[error(transparent)]
    Cocycle(#[from] CocycleError),
}

/// A probability measure with finitely many atoms.  Weights are stored
/// normalized; in exact arithmetic they sum to one on the nose.
#[derive(Debug, Clone, PartialEq)]
pub struct EmpiricalMeasure<P: Point, S: Scalar> {
    atoms: BTreeMap<P, S>,
}

impl<P: Point, S: Scalar> EmpiricalMeasure<P, S> {
    /// Normalize a finite set by its weighted mass at `basepoint`:
    /// `w(z) = delta(z, y) / |A|_y`.
    pub fn from_weighted_set<'a, I>(
        cocycle: &Cocycle<P, S>,
        set: I,
        basepoint: &P,
    ) -> Result<Self, MeasureError>
    where
        I: IntoIterator<Item = &'a P> + Clone,
        P: 'a,
    {
        let total = weighted_mass(cocycle, set.clone(), basepoint)?;
        let mut atoms = BTreeMap::new();
        for z in set {
            let w = cocycle.eval(z, basepoint)? / total.clone();
            atoms.insert(z.clone(), w);
        }
        if atoms.is_empty() {
            return Err(MeasureError::EmptySupport);
        }
        Ok(EmpiricalMeasure { atoms })
    }

    /// Wrap explicit atom weights, normalizing by their sum.
    pub fn from_atoms(atoms: BTreeMap<P, S>) -> Result<Self, MeasureError> {
        if atoms.is_empty() {
            return Err(MeasureError::EmptySupport);
        }
        let mut total = S::zero();
        for (p, w) in &atoms {
            if *w <= S::zero() {
                return Err(MeasureError::NonpositiveWeight {
                    point: format!("{p:?}"),
                });
            }
            total += w.clone();
        }
        let atoms = atoms
            .into_iter()
            .map(|(p, w)| (p, w / total.clone()))
            .collect();
        Ok(EmpiricalMeasure { atoms })
    }

    pub fn atoms(&self) -> &BTreeMap<P, S> {
        &self.atoms
    }

    pub fn support_size(&self) -> usize {
        self.atoms.len()
    }

    pub fn total_mass(&self) -> S {
        self.atoms.values().fold(S::zero(), |acc, w| acc + w.clone())
    }
}

/// A named observable on orbit points.  The descriptor is carried into
/// reports so a run can say which functions were tested.
type EvalFn<P, S> = Arc<dyn Fn(&P) -> Result<S, MeasureError> + Send + Sync>;

#[derive(Clone)]
pub struct TestFunction<P, S> {
    descriptor: String,
    eval: EvalFn<P, S>,
}

impl<P, S> fmt::Debug for TestFunction<P, S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("TestFunction")
            .field("descriptor", &self.descriptor)
            .finish_non_exhaustive()
    }
}

impl<P: Point + Send + Sync + 'static, S: Scalar> TestFunction<P, S> {
    pub fn from_fn(
        descriptor: impl Into<String>,
        eval: impl Fn(&P) -> Result<S, MeasureError> + Send + Sync + 'static,
    ) -> Self {
        TestFunction {
            descriptor: descriptor.into(),
            eval: Arc::new(eval),
        }
    }

    pub fn constant(descriptor: impl Into<String>, value: S) -> Self {
        Self::from_fn(descriptor, move |_| Ok(value.clone()))
    }

    /// Total function given by a table; points off the table evaluate to
    /// `default`.
    pub fn tabulated(descriptor: impl Into<String>, table: BTreeMap<P, S>, default: S) -> Self {
        Self::from_fn(descriptor, move |p| {
            Ok(table.get(p).cloned().unwrap_or_else(|| default.clone()))
        })
    }

    /// Pointwise linear combination of finitely many test functions.
    pub fn combine(descriptor: impl Into<String>, parts: Vec<(S, TestFunction<P, S>)>) -> Self {
        Self::from_fn(descriptor, move |p| {
            let mut acc = S::zero();
            for (a, f) in &parts {
                acc += a.clone() * f.eval(p)?;
            }
            Ok(acc)
        })
    }

}

impl<P, S> TestFunction<P, S> {
    pub fn descriptor(&self) -> &str {
        &self.descriptor
    }

    pub fn eval(&self, p: &P) -> Result<S, MeasureError> {
        (self.eval)(p)
    }
}

/// `integral of f against nu`.
pub fn integrate<P: Point, S: Scalar>(
    nu: &EmpiricalMeasure<P, S>,
    f: &TestFunction<P, S>,
) -> Result<S, MeasureError> {
    let mut acc = S::zero();
    for (p, w) in nu.atoms() {
        acc += f.eval(p)? * w.clone();
    }
    Ok(acc)
}

/// Markov (neighbor-averaging) operator: `(Df)(p)` is the mean of `f`
/// over the distinct edge neighbors of `p`.
pub fn markov_apply<P: Point, S: Scalar>(
    window: &OrbitWindow<P>,
    f: &TestFunction<P, S>,
    p: &P,
) -> Result<S, MeasureError> {
    let nbrs = window.edge_neighbors(p)?;
    if nbrs.is_empty() {
        return Err(MeasureError::IsolatedVertex {
            point: format!("{p:?}"),
        });
    }
    let mut acc = S::zero();
    for q in &nbrs {
        acc += f.eval(q)?;
    }
    let deg = S::from_usize(nbrs.len()).expect("degree fits in scalar");
    Ok(acc / deg)
}

/// Graph Laplacian `(Lf)(p) = (Df)(p) - f(p)`.
pub fn laplace_apply<P: Point, S: Scalar>(
    window: &OrbitWindow<P>,
    f: &TestFunction<P, S>,
    p: &P,
) -> Result<S, MeasureError> {
    Ok(markov_apply(window, f, p)? - f.eval(p)?)
}

/// `|integral of Lf d(nu)|`: zero exactly when `nu` kills the Laplacian
/// of `f`.
pub fn harmonicity_defect<P: Point, S: Scalar>(
    nu: &EmpiricalMeasure<P, S>,
    f: &TestFunction<P, S>,
    window: &OrbitWindow<P>,
) -> Result<S, MeasureError> {
    let mut acc = S::zero();
    for (p, w) in nu.atoms() {
        acc += laplace_apply(window, f, p)? * w.clone();
    }
    Ok(acc.abs())
}

/// `|integral of Df d(nu) - integral of f d(nu)|`.  Identically equal to
/// the harmonicity defect; both are computed so reports can cross-check.
pub fn stationarity_defect<P: Point, S: Scalar>(
    nu: &EmpiricalMeasure<P, S>,
    f: &TestFunction<P, S>,
    window: &OrbitWindow<P>,
) -> Result<S, MeasureError> {
    let mut pushed = S::zero();
    for (p, w) in nu.atoms() {
        pushed += markov_apply(window, f, p)? * w.clone();
    }
    let plain = integrate(nu, f)?;
    Ok((pushed - plain).abs())
}

/// `|integral of f(g z) d(nu) - integral of f(z) delta(g^{-1} z, z) d(nu)|`:
/// the failure of `nu` to transform by the cocycle under one generator.
/// The density term evaluates the cocycle at the preimage because
/// `delta(g^{-1} z, z)` is the discrete Radon-Nikodym derivative of the
/// pushforward of `nu` by `g`; substituting u = g z shows both sums run
/// over the same summand up to the atoms gained or lost by the shift.
pub fn quasi_invariance_defect<P: Point, S: Scalar>(
    nu: &EmpiricalMeasure<P, S>,
    gens: &GeneratorSet<P>,
    label: &str,
    f: &TestFunction<P, S>,
    cocycle: &Cocycle<P, S>,
) -> Result<S, MeasureError> {
    let generator = gens.get(label)?;
    let inverse = gens.inverse(label)?;
    let mut moved = S::zero();
    let mut weighted = S::zero();
    for (p, w) in nu.atoms() {
        let image = generator
            .apply(p)
            .ok_or_else(|| MeasureError::UndefinedImage {
                point: format!("{p:?}"),
                label: generator.label().to_string(),
            })?;
        let preimage = inverse.apply(p).ok_or_else(|| MeasureError::UndefinedImage {
            point: format!("{p:?}"),
            label: inverse.label().to_string(),
        })?;
        moved += f.eval(&image)? * w.clone();
        weighted += f.eval(p)? * cocycle.eval(&preimage, p)? * w.clone();
    }
    Ok((moved - weighted).abs())
}

/// Largest disagreement of two measures over a finite test family.
pub fn weak_star_distance<P: Point, S: Scalar>(
    nu1: &EmpiricalMeasure<P, S>,
    nu2: &EmpiricalMeasure<P, S>,
    family: &[TestFunction<P, S>],
) -> Result<S, MeasureError> {
    if family.is_empty() {
        return Err(MeasureError::EmptyFamily);
    }
    let mut best = S::zero();
    for f in family {
        let gap = (integrate(nu1, f)? - integrate(nu2, f)?).abs();
        if gap > best {
            best = gap;
        }
    }
    Ok(best)
}

/// Mass that `nu` puts on vertices whose degree differs from the modal
/// degree of its support.  A nonzero value flags boundary effects.
pub fn degree_anomaly_mass<P: Point, S: Scalar>(
    nu: &EmpiricalMeasure<P, S>,
    window: &OrbitWindow<P>,
) -> Result<S, MeasureError> {
    let mut counts: BTreeMap<usize, usize> = BTreeMap::new();
    let mut degrees: Vec<(usize, &P, &S)> = Vec::with_capacity(nu.support_size());
    for (p, w) in nu.atoms() {
        let d = window.degree(p)?;
        *counts.entry(d).or_insert(0) += 1;
        degrees.push((d, p, w));
    }
    let modal = counts
        .iter()
        .max_by_key(|(_, c)| **c)
        .map(|(d, _)| *d)
        .expect("nonempty support");
    let mut mass = S::zero();
    for (d, _, w) in degrees {
        if d != modal {
            mass += w.clone();
        }
    }
    Ok(mass)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::orbit::{Generator, GeneratorSet};
    use num::Zero;
    use num::BigRational;
    use std::collections::BTreeSet;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    fn cycle_window(m: i64) -> OrbitWindow<i64> {
        let gens = GeneratorSet::new(vec![
            Generator::new("r+", "r-", move |p: &i64| Some((p + 1).rem_euclid(m))),
            Generator::new("r-", "r+", move |p: &i64| Some((p - 1).rem_euclid(m))),
        ])
        .unwrap();
        OrbitWindow::build(0i64, 2 * m as u32, gens)
    }

    fn line_window(radius: u32) -> OrbitWindow<i64> {
        let gens = GeneratorSet::new(vec![
            Generator::new("s+", "s-", |p: &i64| Some(p + 1)),
            Generator::new("s-", "s+", |p: &i64| Some(p - 1)),
        ])
        .unwrap();
        OrbitWindow::build(0i64, radius, gens)
    }

    fn indicator(at: i64) -> TestFunction<i64, BigRational> {
        TestFunction::from_fn(format!("indicator[{at}]"), move |p: &i64| {
            Ok(if *p == at { rat(1, 1) } else { rat(0, 1) })
        })
    }

    #[test]
    fn weights_normalize_exactly() {
        let c: Cocycle<i64, BigRational> = Cocycle::from_potential(|k: &i64| {
            Some(BigRational::from_integer(3.into()).pow(-(*k as i32)))
        });
        let set: BTreeSet<i64> = (0..=2).collect();
        let nu = EmpiricalMeasure::from_weighted_set(&c, &set, &0).unwrap();
        assert_eq!(nu.total_mass(), rat(1, 1));
        // weights 1, 1/3, 1/9 scaled by 9/13
        assert_eq!(nu.atoms()[&0], rat(9, 13));
        assert_eq!(nu.atoms()[&1], rat(3, 13));
        assert_eq!(nu.atoms()[&2], rat(1, 13));
    }

    #[test]
    fn from_atoms_rejects_nonpositive_weights() {
        let atoms = BTreeMap::from([(0i64, rat(1, 2)), (1, rat(0, 1))]);
        assert!(matches!(
            EmpiricalMeasure::from_atoms(atoms),
            Err(MeasureError::NonpositiveWeight { .. })
        ));
    }

    #[test]
    fn markov_of_indicator_spreads_over_neighbors() {
        let w = line_window(6);
        let f = indicator(0);
        // at 0 the neighbors are -1 and 1, neither equal to 0
        assert_eq!(markov_apply(&w, &f, &0).unwrap(), rat(0, 1));
        // at 1 the neighbors are 0 and 2
        assert_eq!(markov_apply(&w, &f, &1).unwrap(), rat(1, 2));
        assert_eq!(laplace_apply(&w, &f, &1).unwrap(), rat(1, 2));
    }

    #[test]
    fn point_mass_defect_of_own_indicator_is_one() {
        let w = line_window(6);
        let nu = EmpiricalMeasure::from_atoms(BTreeMap::from([(0i64, rat(1, 1))])).unwrap();
        let f = indicator(0);
        assert_eq!(harmonicity_defect(&nu, &f, &w).unwrap(), rat(1, 1));
    }

    #[test]
    fn stationarity_and_harmonicity_defects_agree_exactly() {
        let w = line_window(8);
        let c: Cocycle<i64, BigRational> = Cocycle::from_potential(|k: &i64| {
            Some(BigRational::from_integer(2.into()).pow(-(*k as i32)))
        });
        let set: BTreeSet<i64> = (-3..=3).collect();
        let nu = EmpiricalMeasure::from_weighted_set(&c, &set, &0).unwrap();
        for f in [indicator(0), indicator(2), indicator(4)] {
            assert_eq!(
                harmonicity_defect(&nu, &f, &w).unwrap(),
                stationarity_defect(&nu, &f, &w).unwrap()
            );
        }
    }

    #[test]
    fn uniform_measure_on_cycle_is_invariant() {
        let m = 7i64;
        let w = cycle_window(m);
        let set: BTreeSet<i64> = (0..m).collect();
        let c: Cocycle<i64, BigRational> = Cocycle::trivial();
        let nu = EmpiricalMeasure::from_weighted_set(&c, &set, &0).unwrap();
        let f = indicator(3);
        assert!(quasi_invariance_defect(&nu, w.generators(), "r+", &f, &c)
            .unwrap()
            .is_zero());
        assert!(harmonicity_defect(&nu, &f, &w).unwrap().is_zero());
    }

    #[test]
    fn quasi_invariance_sees_a_shifted_point_mass() {
        let w = line_window(6);
        let nu = EmpiricalMeasure::from_atoms(BTreeMap::from([(0i64, rat(1, 1))])).unwrap();
        let c: Cocycle<i64, BigRational> = Cocycle::trivial();
        let f = indicator(1);
        // moved integral is f(1) = 1, weighted integral is f(0) = 0
        assert_eq!(
            quasi_invariance_defect(&nu, w.generators(), "s+", &f, &c).unwrap(),
            rat(1, 1)
        );
    }

    #[test]
    fn weak_star_distance_on_point_masses() {
        let nu1 = EmpiricalMeasure::from_atoms(BTreeMap::from([(0i64, rat(1, 1))])).unwrap();
        let nu2 = EmpiricalMeasure::from_atoms(BTreeMap::from([(2i64, rat(1, 1))])).unwrap();
        let family = vec![indicator(0), indicator(5)];
        assert_eq!(weak_star_distance(&nu1, &nu2, &family).unwrap(), rat(1, 1));
        assert!(matches!(
            weak_star_distance(&nu1, &nu2, &[]),
            Err(MeasureError::EmptyFamily)
        ));
    }

    #[test]
    fn linear_combinations_integrate_linearly() {
        let c: Cocycle<i64, BigRational> = Cocycle::trivial();
        let set: BTreeSet<i64> = (0..=4).collect();
        let nu = EmpiricalMeasure::from_weighted_set(&c, &set, &0).unwrap();
        let f = indicator(1);
        let g = indicator(3);
        let combo = TestFunction::combine(
            "2 f + 3 g",
            vec![(rat(2, 1), f.clone()), (rat(3, 1), g.clone())],
        );
        let lhs = integrate(&nu, &combo).unwrap();
        let rhs = rat(2, 1) * integrate(&nu, &f).unwrap() + rat(3, 1) * integrate(&nu, &g).unwrap();
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn interval_measure_flags_its_endpoints() {
        let w = line_window(10);
        let c: Cocycle<i64, BigRational> = Cocycle::trivial();
        let set: BTreeSet<i64> = (-4..=4).collect();
        let nu = EmpiricalMeasure::from_weighted_set(&c, &set, &0).unwrap();
        // every vertex has degree 2 on the line: no anomaly at all
        assert!(degree_anomaly_mass(&nu, &w).unwrap().is_zero());

        // truncated shift: the right endpoint 4 loses its outgoing step
        // and drops to degree 1, so exactly one of the nine atoms is odd
        let gens = GeneratorSet::new(vec![
            Generator::new("s+", "s-", |p: &i64| if *p < 4 { Some(p + 1) } else { None }),
            Generator::new("s-", "s+", |p: &i64| if *p > -5 { Some(p - 1) } else { None }),
        ])
        .unwrap();
        let wt = OrbitWindow::build(0i64, 30, gens);
        let nu2 = EmpiricalMeasure::from_weighted_set(&c, &set, &0).unwrap();
        assert_eq!(degree_anomaly_mass(&nu2, &wt).unwrap(), rat(1, 9));
    }
}
