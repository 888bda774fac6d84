//! The boundary action of the free group on two letters.
//!
//! Points of the boundary are infinite reduced words; we restrict to
//! eventually periodic ones so every question about them is decidable.
//! A generator acts by prepend-and-reduce.  Orbit vertices are germs:
//! the acting group element, kept as a reduced word, rather than the
//! image point.  Eventually periodic boundary points have nontrivial
//! stabilizers, so distinct germs can land on the same infinite word;
//! identifying vertices with germs keeps the orbit graph a 4-regular
//! tree for every base, which is what all the exact level-mass
//! identities are about.

pub mod levelwise;

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use num::{BigRational, Zero};
use thiserror::Error;

use crate::cocycle::{Cocycle, CocycleError, Scalar};
use crate::measure::TestFunction;
use crate::orbit::{Generator, GeneratorSet, OrbitWindow};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum F2Error {
    #[error("unknown letter {ch:?}; expected one of a, A, b, B")]
    BadLetter { ch: char },
    #[error("period reduces to the empty word")]
    EmptyPeriod,
    #[error("period {period} cancels against itself when repeated")]
    PeriodNotCyclic { period: String },
}

/// One free-group letter; uppercase is the inverse of lowercase.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Letter {
    A,
    AInv,
    B,
    BInv,
}

impl Letter {
    pub const ALL: [Letter; 4] = [Letter::A, Letter::AInv, Letter::B, Letter::BInv];

    pub fn inverse(self) -> Letter {
        match self {
            Letter::A => Letter::AInv,
            Letter::AInv => Letter::A,
            Letter::B => Letter::BInv,
            Letter::BInv => Letter::B,
        }
    }

    pub fn to_char(self) -> char {
        match self {
            Letter::A => 'a',
            Letter::AInv => 'A',
            Letter::B => 'b',
            Letter::BInv => 'B',
        }
    }

    pub fn from_char(ch: char) -> Result<Letter, F2Error> {
        match ch {
            'a' => Ok(Letter::A),
            'A' => Ok(Letter::AInv),
            'b' => Ok(Letter::B),
            'B' => Ok(Letter::BInv),
            _ => Err(F2Error::BadLetter { ch }),
        }
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_char())
    }
}

/// A freely reduced word.  Every constructor reduces eagerly, so the
/// no-adjacent-inverses invariant always holds.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Word(Vec<Letter>);

impl Word {
    pub fn identity() -> Word {
        Word(Vec::new())
    }

    pub fn from_letters(letters: impl IntoIterator<Item = Letter>) -> Word {
        let mut out: Vec<Letter> = Vec::new();
        for l in letters {
            if out.last() == Some(&l.inverse()) {
                out.pop();
            } else {
                out.push(l);
            }
        }
        Word(out)
    }

    pub fn parse(s: &str) -> Result<Word, F2Error> {
        // round-trips with Display, which writes the identity as "1"
        if s == "1" {
            return Ok(Word::identity());
        }
        let letters: Result<Vec<Letter>, F2Error> = s.chars().map(Letter::from_char).collect();
        Ok(Word::from_letters(letters?))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn first(&self) -> Option<Letter> {
        self.0.first().copied()
    }

    pub fn last(&self) -> Option<Letter> {
        self.0.last().copied()
    }

    pub fn inverse(&self) -> Word {
        Word(self.0.iter().rev().map(|l| l.inverse()).collect())
    }

    pub fn concat(&self, other: &Word) -> Word {
        Word::from_letters(self.0.iter().chain(other.0.iter()).copied())
    }

    /// Left multiplication by a single letter, reducing at the front.
    pub fn left_mul(&self, l: Letter) -> Word {
        if self.0.first() == Some(&l.inverse()) {
            Word(self.0[1..].to_vec())
        } else {
            let mut v = Vec::with_capacity(self.0.len() + 1);
            v.push(l);
            v.extend_from_slice(&self.0);
            Word(v)
        }
    }
}

impl Ord for Word {
    // shortlex: length first, then letter order a < A < b < B
    fn cmp(&self, other: &Self) -> Ordering {
        self.0
            .len()
            .cmp(&other.0.len())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        for l in &self.0 {
            write!(f, "{l}")?;
        }
        Ok(())
    }
}

/// An eventually periodic infinite reduced word, held in canonical form:
/// the period is primitive and cyclically reduced, and the preperiod
/// neither cancels into the period nor ends with the period's last
/// letter.  Canonicalization makes equal boundary points structurally
/// equal.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BoundaryPoint {
    preperiod: Vec<Letter>,
    period: Vec<Letter>,
}

impl BoundaryPoint {
    pub fn new(preperiod: Word, period: Word) -> Result<BoundaryPoint, F2Error> {
        if period.is_empty() {
            return Err(F2Error::EmptyPeriod);
        }
        if period.len() > 1 && period.last().unwrap() == period.first().unwrap().inverse() {
            return Err(F2Error::PeriodNotCyclic {
                period: period.to_string(),
            });
        }
        let mut per = primitive_root(period.letters());
        let mut pre = preperiod.letters().to_vec();
        loop {
            match pre.last() {
                // u w^inf with u ending in the inverse of w's head:
                // drop both and rotate the period left
                Some(&l) if l == per[0].inverse() => {
                    pre.pop();
                    per.rotate_left(1);
                }
                // u ending in w's tail letter: absorb it, rotate right
                Some(&l) if l == *per.last().unwrap() => {
                    pre.pop();
                    per.rotate_right(1);
                }
                _ => break,
            }
        }
        Ok(BoundaryPoint {
            preperiod: pre,
            period: per,
        })
    }

    pub fn parse(preperiod: &str, period: &str) -> Result<BoundaryPoint, F2Error> {
        BoundaryPoint::new(Word::parse(preperiod)?, Word::parse(period)?)
    }

    pub fn preperiod(&self) -> &[Letter] {
        &self.preperiod
    }

    pub fn period(&self) -> &[Letter] {
        &self.period
    }

    /// The i-th letter of the infinite word.
    pub fn letter(&self, i: usize) -> Letter {
        if i < self.preperiod.len() {
            self.preperiod[i]
        } else {
            self.period[(i - self.preperiod.len()) % self.period.len()]
        }
    }

    pub fn first_letter(&self) -> Letter {
        self.letter(0)
    }

    /// The length-`len` prefix, as a word.
    pub fn prefix(&self, len: usize) -> Word {
        Word::from_letters((0..len).map(|i| self.letter(i)))
    }
}

impl fmt::Display for BoundaryPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for l in &self.preperiod {
            write!(f, "{l}")?;
        }
        write!(f, "(")?;
        for l in &self.period {
            write!(f, "{l}")?;
        }
        write!(f, ")*")
    }
}

fn primitive_root(period: &[Letter]) -> Vec<Letter> {
    let k = period.len();
    for d in 1..=k {
        if k.is_multiple_of(d) && period.chunks(d).all(|c| c == &period[..d]) {
            return period[..d].to_vec();
        }
    }
    unreachable!("d = k always divides")
}

/// A vertex of the orbit graph over base `x`: the germ of the acting
/// element `g`, standing for the boundary point `g . x`.
#[derive(Clone)]
pub struct OrbitPoint {
    germ: Word,
    base: Arc<BoundaryPoint>,
    // how many trailing letters of the germ cancel into the base word
    cancel: usize,
}

impl OrbitPoint {
    pub fn base_point(base: Arc<BoundaryPoint>) -> OrbitPoint {
        OrbitPoint {
            germ: Word::identity(),
            base,
            cancel: 0,
        }
    }

    pub fn from_germ(germ: Word, base: Arc<BoundaryPoint>) -> OrbitPoint {
        let letters = germ.letters();
        let mut cancel = 0;
        while cancel < letters.len()
            && letters[letters.len() - 1 - cancel] == base.letter(cancel).inverse()
        {
            cancel += 1;
        }
        OrbitPoint { germ, base, cancel }
    }

    pub fn germ(&self) -> &Word {
        &self.germ
    }

    pub fn base(&self) -> &Arc<BoundaryPoint> {
        &self.base
    }

    /// Act by one generator letter on the left.
    pub fn apply(&self, l: Letter) -> OrbitPoint {
        OrbitPoint::from_germ(self.germ.left_mul(l), Arc::clone(&self.base))
    }

    /// Horosphere level of this germ with respect to the base: the
    /// Busemann value of the inverse acting element.
    pub fn level(&self) -> i64 {
        self.germ.len() as i64 - 2 * self.cancel as i64
    }

    /// The i-th letter of the infinite word this germ points at.
    pub fn boundary_letter(&self, i: usize) -> Letter {
        let residual = self.germ.len() - self.cancel;
        if i < residual {
            self.germ.letters()[i]
        } else {
            self.base.letter(self.cancel + (i - residual))
        }
    }

    pub fn boundary_prefix(&self, len: usize) -> Word {
        Word::from_letters((0..len).map(|i| self.boundary_letter(i)))
    }
}

impl PartialEq for OrbitPoint {
    fn eq(&self, other: &Self) -> bool {
        self.germ == other.germ
            && (Arc::ptr_eq(&self.base, &other.base) || self.base == other.base)
    }
}

impl Eq for OrbitPoint {}

impl Ord for OrbitPoint {
    fn cmp(&self, other: &Self) -> Ordering {
        self.germ
            .cmp(&other.germ)
            .then_with(|| self.base.cmp(&other.base))
    }
}

impl PartialOrd for OrbitPoint {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Hash for OrbitPoint {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.germ.hash(state);
    }
}

impl fmt::Debug for OrbitPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}.{}", self.germ, self.base)
    }
}

/// The four generator letters as orbit-graph generators (left action).
pub fn generators() -> GeneratorSet<OrbitPoint> {
    let gen = |l: Letter| {
        Generator::new(
            l.to_char().to_string(),
            l.inverse().to_char().to_string(),
            move |p: &OrbitPoint| Some(p.apply(l)),
        )
    };
    GeneratorSet::new(vec![
        gen(Letter::A),
        gen(Letter::AInv),
        gen(Letter::B),
        gen(Letter::BInv),
    ])
    .expect("generator labels are distinct and mutually inverse")
}

/// A BFS window of the orbit graph around the base germ.
pub fn orbit_window(base: &Arc<BoundaryPoint>, radius: u32) -> OrbitWindow<OrbitPoint> {
    OrbitWindow::build(OrbitPoint::base_point(Arc::clone(base)), radius, generators())
}

/// Renormalized distance to the boundary point `x` evaluated at the
/// group element `gamma`: word length minus twice the shared prefix.
pub fn busemann(gamma: &Word, x: &BoundaryPoint) -> i64 {
    let mut shared = 0usize;
    for (i, l) in gamma.letters().iter().enumerate() {
        if *l == x.letter(i) && shared == i {
            shared += 1;
        } else {
            break;
        }
    }
    gamma.len() as i64 - 2 * shared as i64
}

/// Horosphere level of an orbit vertex: `busemann` of the canonical
/// element mapping the vertex back to the base.
pub fn horosphere_level(z: &OrbitPoint) -> i64 {
    z.level()
}

pub fn three_pow<S: Scalar>(k: i64) -> S {
    let three = S::from_u32(3).expect("3 embeds in scalar");
    let mut acc = S::one();
    for _ in 0..k.unsigned_abs() {
        acc *= three.clone();
    }
    if k < 0 {
        S::one() / acc
    } else {
        acc
    }
}

/// The Radon-Nikodym cocycle of the equidistributed boundary measure:
/// `delta(z, y) = 3^(level(y) - level(z))` for germs over the same base.
pub fn busemann_cocycle<S: Scalar>(x: &Arc<BoundaryPoint>) -> Cocycle<OrbitPoint, S> {
    let x = Arc::clone(x);
    Cocycle::from_pairwise(move |z: &OrbitPoint, y: &OrbitPoint| {
        if **z.base() != *x || **y.base() != *x {
            return Err(CocycleError::OutsideOrbit {
                point: format!("{z:?} / {y:?}"),
            });
        }
        Ok(three_pow::<S>(y.level() - z.level()))
    })
}

/// The weighted averaging set at depth `n`: germs of length at most `n`
/// whose final letter does not cancel into the base, plus the base germ.
/// Level-k slice has exactly 3^k germs, each of weight 3^(-k).
pub fn f2_averaging_set(x: &Arc<BoundaryPoint>, n: u32) -> BTreeSet<OrbitPoint> {
    let excluded = x.first_letter().inverse();
    // gather into a vector first: collecting builds the tree in bulk,
    // which matters once the slices hold hundreds of thousands of germs
    let mut out = vec![OrbitPoint::base_point(Arc::clone(x))];
    if n == 0 {
        return out.into_iter().collect();
    }
    let mut stack: Vec<Vec<Letter>> = Letter::ALL.iter().map(|l| vec![*l]).collect();
    while let Some(word) = stack.pop() {
        let last = *word.last().unwrap();
        if last != excluded {
            out.push(OrbitPoint::from_germ(
                Word::from_letters(word.iter().copied()),
                Arc::clone(x),
            ));
        }
        if (word.len() as u32) < n {
            for l in Letter::ALL {
                if l != last.inverse() {
                    let mut next = word.clone();
                    next.push(l);
                    stack.push(next);
                }
            }
        }
    }
    out.into_iter().collect()
}

/// Vertex boundary of the averaging set: the base germ plus the whole
/// top slice.  Weighted mass 2 for every n >= 1.
pub fn f2_averaging_boundary(x: &Arc<BoundaryPoint>, n: u32) -> BTreeSet<OrbitPoint> {
    let mut out = vec![OrbitPoint::base_point(Arc::clone(x))];
    if n == 0 {
        return out.into_iter().collect();
    }
    let excluded = x.first_letter().inverse();
    // walk straight to the top slice instead of materializing the set
    let mut stack: Vec<Vec<Letter>> = Letter::ALL.iter().map(|l| vec![*l]).collect();
    while let Some(word) = stack.pop() {
        let last = *word.last().unwrap();
        if word.len() as u32 == n {
            if last != excluded {
                out.push(OrbitPoint::from_germ(
                    Word::from_letters(word.iter().copied()),
                    Arc::clone(x),
                ));
            }
            continue;
        }
        for l in Letter::ALL {
            if l != last.inverse() {
                let mut next = word.clone();
                next.push(l);
                stack.push(next);
            }
        }
    }
    out.into_iter().collect()
}

/// Indicator of the cylinder of infinite words starting with `w`.
pub fn cylinder_indicator<S: Scalar>(w: &Word) -> TestFunction<OrbitPoint, S> {
    let w = w.clone();
    TestFunction::from_fn(format!("cyl[{w}]"), move |z: &OrbitPoint| {
        let hit = w
            .letters()
            .iter()
            .enumerate()
            .all(|(i, l)| z.boundary_letter(i) == *l);
        Ok(if hit { S::one() } else { S::zero() })
    })
}

/// All reduced words of exactly length `d`, in shortlex order.
pub fn cylinders_of_depth(d: u32) -> Vec<Word> {
    let mut out = Vec::new();
    let mut stack: Vec<Vec<Letter>> = Letter::ALL.iter().rev().map(|l| vec![*l]).collect();
    if d == 0 {
        return vec![Word::identity()];
    }
    while let Some(word) = stack.pop() {
        if word.len() as u32 == d {
            out.push(Word::from_letters(word.iter().copied()));
            continue;
        }
        let last = *word.last().unwrap();
        for l in Letter::ALL.iter().rev() {
            if *l != last.inverse() {
                let mut next = word.clone();
                next.push(*l);
                stack.push(next);
            }
        }
    }
    out
}

/// Exact weighted mass of a finite germ set as seen from the base.
pub fn weighted_mass_at_base(set: &BTreeSet<OrbitPoint>, x: &Arc<BoundaryPoint>) -> BigRational {
    // one rational term per occupied level, not one per point
    let mut counts: BTreeMap<i64, u64> = BTreeMap::new();
    for z in set {
        assert_eq!(**z.base(), **x, "point outside the orbit of the base");
        *counts.entry(z.level()).or_insert(0) += 1;
    }
    let mut mass = BigRational::zero();
    for (level, count) in counts {
        mass += BigRational::from_integer(count.into()) * three_pow::<BigRational>(-level);
    }
    mass
}
