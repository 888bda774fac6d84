//! Finite windows of orbit graphs.
//!
//! A pseudogroup acting on a transversal is presented here by a finite
//! symmetric generating set of partial maps.  An [`OrbitWindow`] is the piece
//! of one orbit reachable from a base point in at most `radius` steps,
//! together with the generator-labeled edges among those vertices.  Every
//! query that a finite window cannot answer exactly reports
//! [`WindowError::HorizonExceeded`] instead of truncating silently.

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

/// Vertex data every orbit point type must supply.  Canonical forms are the
/// caller's job: two points compare equal exactly when they are the same
/// orbit vertex.
pub trait Point: Clone + Eq + Ord + std::hash::Hash + fmt::Debug {}

impl<T: Clone + Eq + Ord + std::hash::Hash + fmt::Debug> Point for T {}

/// Errors reported by window construction and window queries.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WindowError {
    #[error("point {point} is not a vertex of the window")]
    PointNotInWindow { point: String },
    #[error("window horizon exceeded: {what}")]
    HorizonExceeded { what: String },
    #[error("no generator is labeled {label:?}")]
    UnknownGenerator { label: String },
    #[error("generator label {label:?} appears twice")]
    DuplicateLabel { label: String },
    #[error("generator {label:?} names inverse {inverse:?}, which is not in the set")]
    MissingInverse { label: String, inverse: String },
}

fn not_in_window<P: fmt::Debug>(p: &P) -> WindowError {
    WindowError::PointNotInWindow {
        point: format!("{p:?}"),
    }
}

/// One partial map of the generating set.  `apply` returns `None` outside the
/// map's domain.
type PartialMap<P> = Arc<dyn Fn(&P) -> Option<P> + Send + Sync>;

#[derive(Clone)]
pub struct Generator<P> {
    label: String,
    inverse_label: String,
    apply: PartialMap<P>,
}

impl<P> Generator<P> {
    pub fn new(
        label: impl Into<String>,
        inverse_label: impl Into<String>,
        apply: impl Fn(&P) -> Option<P> + Send + Sync + 'static,
    ) -> Self {
        Generator {
            label: label.into(),
            inverse_label: inverse_label.into(),
            apply: Arc::new(apply),
        }
    }

    /// A generator that is its own inverse.
    pub fn involution(
        label: impl Into<String>,
        apply: impl Fn(&P) -> Option<P> + Send + Sync + 'static,
    ) -> Self {
        let label = label.into();
        Generator {
            inverse_label: label.clone(),
            label,
            apply: Arc::new(apply),
        }
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn inverse_label(&self) -> &str {
        &self.inverse_label
    }

    pub fn apply(&self, p: &P) -> Option<P> {
        (self.apply)(p)
    }
}

impl<P> fmt::Debug for Generator<P> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Generator")
            .field("label", &self.label)
            .field("inverse_label", &self.inverse_label)
            .finish()
    }
}

/// A symmetric generating set: every generator's named inverse is present and
/// names it back.  Labels are unique.
#[derive(Clone, Debug)]
pub struct GeneratorSet<P> {
    gens: Vec<Generator<P>>,
    inverse_of: Vec<usize>,
    pair_of: Vec<usize>,
}

impl<P> GeneratorSet<P> {
    pub fn new(gens: Vec<Generator<P>>) -> Result<Self, WindowError> {
        let mut by_label: HashMap<&str, usize> = HashMap::new();
        for (i, g) in gens.iter().enumerate() {
            if by_label.insert(g.label.as_str(), i).is_some() {
                return Err(WindowError::DuplicateLabel {
                    label: g.label.clone(),
                });
            }
        }
        let mut inverse_of = Vec::with_capacity(gens.len());
        for g in &gens {
            let j = *by_label.get(g.inverse_label.as_str()).ok_or_else(|| {
                WindowError::MissingInverse {
                    label: g.label.clone(),
                    inverse: g.inverse_label.clone(),
                }
            })?;
            if gens[j].inverse_label != g.label {
                return Err(WindowError::MissingInverse {
                    label: gens[j].label.clone(),
                    inverse: gens[j].inverse_label.clone(),
                });
            }
            inverse_of.push(j);
        }
        let pair_of = inverse_of
            .iter()
            .enumerate()
            .map(|(i, &j)| i.min(j))
            .collect();
        Ok(GeneratorSet {
            gens,
            inverse_of,
            pair_of,
        })
    }

    pub fn len(&self) -> usize {
        self.gens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gens.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &Generator<P>> {
        self.gens.iter()
    }

    pub fn get(&self, label: &str) -> Result<&Generator<P>, WindowError> {
        self.index_of(label).map(|i| &self.gens[i])
    }

    pub fn inverse(&self, label: &str) -> Result<&Generator<P>, WindowError> {
        self.index_of(label).map(|i| &self.gens[self.inverse_of[i]])
    }

    fn index_of(&self, label: &str) -> Result<usize, WindowError> {
        self.gens
            .iter()
            .position(|g| g.label == label)
            .ok_or_else(|| WindowError::UnknownGenerator {
                label: label.to_string(),
            })
    }
}

/// Exact distance within the cap, or a cap overflow marker.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Distance {
    Within(u32),
    ExceedsCap,
}

impl Distance {
    pub fn exact(self) -> Option<u32> {
        match self {
            Distance::Within(d) => Some(d),
            Distance::ExceedsCap => None,
        }
    }
}

/// The radius-`radius` piece of the orbit of `base`, with labeled adjacency.
///
/// A vertex is *complete* when every defined generator image of it is again a
/// window vertex, so its whole neighborhood is known.  Vertices strictly
/// inside the horizon are always complete; frontier vertices may not be.
/// When every vertex is complete the window holds the entire (finite) orbit
/// and no horizon guard applies.
pub struct OrbitWindow<P> {
    base: P,
    radius: u32,
    gens: GeneratorSet<P>,
    points: Vec<P>,
    index: HashMap<P, u32>,
    dist: Vec<u32>,
    adj: Vec<Vec<(u16, u32)>>,
    complete: Vec<bool>,
    exhausted: bool,
}

impl<P: Point> OrbitWindow<P> {
    /// Breadth-first exploration from `base`.  Deterministic: vertices are
    /// stored in discovery order, which depends only on the generator order.
    pub fn build(base: P, radius: u32, gens: GeneratorSet<P>) -> Self {
        let mut points = vec![base.clone()];
        let mut index = HashMap::new();
        index.insert(base.clone(), 0u32);
        let mut dist = vec![0u32];
        let mut queue: VecDeque<u32> = VecDeque::new();
        queue.push_back(0);
        // Discovery pass: enqueue everything within the radius.
        while let Some(v) = queue.pop_front() {
            if dist[v as usize] == radius {
                continue;
            }
            let d = dist[v as usize] + 1;
            let p = points[v as usize].clone();
            for g in gens.iter() {
                if let Some(q) = g.apply(&p) {
                    if !index.contains_key(&q) {
                        let id = points.len() as u32;
                        index.insert(q.clone(), id);
                        points.push(q);
                        dist.push(d);
                        queue.push_back(id);
                    }
                }
            }
        }
        // Edge pass: record every defined image that lands in the window.
        let n = points.len();
        let mut adj = vec![Vec::new(); n];
        let mut complete = vec![true; n];
        for v in 0..n {
            for (gi, g) in gens.iter().enumerate() {
                if let Some(q) = g.apply(&points[v]) {
                    match index.get(&q) {
                        Some(&t) => adj[v].push((gi as u16, t)),
                        None => complete[v] = false,
                    }
                }
            }
        }
        let exhausted = complete.iter().all(|&c| c);
        OrbitWindow {
            base,
            radius,
            gens,
            points,
            index,
            dist,
            adj,
            complete,
            exhausted,
        }
    }

    pub fn base(&self) -> &P {
        &self.base
    }

    pub fn radius(&self) -> u32 {
        self.radius
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn generators(&self) -> &GeneratorSet<P> {
        &self.gens
    }

    pub fn contains(&self, p: &P) -> bool {
        self.index.contains_key(p)
    }

    /// True when the window exhausted a finite orbit.
    pub fn exhausted(&self) -> bool {
        self.exhausted
    }

    /// Vertices in discovery order.
    pub fn vertices(&self) -> impl Iterator<Item = &P> {
        self.points.iter()
    }

    fn id(&self, p: &P) -> Result<u32, WindowError> {
        self.index.get(p).copied().ok_or_else(|| not_in_window(p))
    }

    pub fn distance_from_base(&self, p: &P) -> Result<u32, WindowError> {
        Ok(self.dist[self.id(p)? as usize])
    }

    /// Whether the whole neighborhood of `p` is inside the window.
    pub fn is_complete(&self, p: &P) -> Result<bool, WindowError> {
        Ok(self.complete[self.id(p)? as usize])
    }

    /// All (generator label, image) pairs with the image defined, whether or
    /// not the image is a window vertex.
    pub fn neighbors(&self, p: &P) -> Result<Vec<(&str, P)>, WindowError> {
        self.id(p)?;
        Ok(self
            .gens
            .iter()
            .filter_map(|g| g.apply(p).map(|q| (g.label(), q)))
            .collect())
    }

    /// Number of edges at `p`, counting one edge per generator pair and
    /// image.  A generator pair whose two labels move `p` to two different
    /// points contributes two edges; a loop contributes one.
    pub fn degree(&self, p: &P) -> Result<usize, WindowError> {
        self.id(p)?;
        let mut seen: Vec<(usize, P)> = Vec::new();
        for (gi, g) in self.gens.iter().enumerate() {
            if let Some(q) = g.apply(p) {
                let pair = self.gens.pair_of[gi];
                if !seen.iter().any(|(pr, pt)| *pr == pair && *pt == q) {
                    seen.push((pair, q));
                }
            }
        }
        Ok(seen.len())
    }

    /// The neighbor list matching [`OrbitWindow::degree`]: one entry per edge
    /// at `p`.  Requires the whole neighborhood to be inside the window.
    pub fn edge_neighbors(&self, p: &P) -> Result<Vec<&P>, WindowError> {
        let v = self.id(p)?;
        if !self.complete[v as usize] {
            return Err(WindowError::HorizonExceeded {
                what: format!("neighborhood of {p:?} leaves the window"),
            });
        }
        let mut seen: Vec<(usize, u32)> = Vec::new();
        for &(gi, t) in &self.adj[v as usize] {
            let pair = self.gens.pair_of[gi as usize];
            if !seen.iter().any(|&(pr, pt)| pr == pair && pt == t) {
                seen.push((pair, t));
            }
        }
        Ok(seen
            .into_iter()
            .map(|(_, t)| &self.points[t as usize])
            .collect())
    }

    /// Vertices at graph distance at most `n` from `p`.
    ///
    /// Exact only when the window can certify it: either the orbit was
    /// exhausted, or `n + d(base, p) <= radius`.
    pub fn ball(&self, p: &P, n: u32) -> Result<BTreeSet<P>, WindowError> {
        let v = self.id(p)?;
        if !self.exhausted && n > self.radius.saturating_sub(self.dist[v as usize]) {
            return Err(WindowError::HorizonExceeded {
                what: format!(
                    "ball of radius {n} around a vertex at distance {} in a window of radius {}",
                    self.dist[v as usize], self.radius
                ),
            });
        }
        let mut out = BTreeSet::new();
        for (id, _) in self.bfs(v, n) {
            out.insert(self.points[id as usize].clone());
        }
        Ok(out)
    }

    /// Breadth-first distance inside the window, `ExceedsCap` past `cap`.
    pub fn graph_distance(&self, p: &P, q: &P, cap: u32) -> Result<Distance, WindowError> {
        let v = self.id(p)?;
        let w = self.id(q)?;
        if v == w {
            return Ok(Distance::Within(0));
        }
        for (id, d) in self.bfs(v, cap) {
            if id == w {
                return Ok(Distance::Within(d));
            }
        }
        Ok(Distance::ExceedsCap)
    }

    fn bfs(&self, start: u32, limit: u32) -> Vec<(u32, u32)> {
        let mut dist: HashMap<u32, u32> = HashMap::new();
        dist.insert(start, 0);
        let mut order = vec![(start, 0)];
        let mut queue = VecDeque::new();
        queue.push_back(start);
        while let Some(v) = queue.pop_front() {
            let d = dist[&v];
            if d == limit {
                continue;
            }
            for &(_, t) in &self.adj[v as usize] {
                if let std::collections::hash_map::Entry::Vacant(slot) = dist.entry(t) {
                    slot.insert(d + 1);
                    order.push((t, d + 1));
                    queue.push_back(t);
                }
            }
        }
        order
    }

    fn checked_members(&self, set: &BTreeSet<P>) -> Result<(), WindowError> {
        for p in set {
            let v = self.id(p)?;
            if !self.complete[v as usize] {
                return Err(WindowError::HorizonExceeded {
                    what: format!("neighborhood of {p:?} leaves the window"),
                });
            }
        }
        Ok(())
    }

    /// Inner vertex boundary: members of `set` with a neighbor outside it.
    pub fn vertex_boundary(&self, set: &BTreeSet<P>) -> Result<BTreeSet<P>, WindowError> {
        self.checked_members(set)?;
        let mut out = BTreeSet::new();
        for p in set {
            let v = self.id(p)? as usize;
            if self.adj[v]
                .iter()
                .any(|&(_, t)| !set.contains(&self.points[t as usize]))
            {
                out.insert(p.clone());
            }
        }
        Ok(out)
    }

    /// The symmetric difference driving the classic averaging ratio:
    /// points of `set` moved out of it by the generator, together with
    /// points outside moved into it.  An undefined image counts as outside.
    pub fn difference_set(&self, set: &BTreeSet<P>, label: &str) -> Result<BTreeSet<P>, WindowError> {
        let g = self.gens.get(label)?.clone();
        let ginv = self.gens.inverse(label)?.clone();
        self.checked_members(set)?;
        let mut out = BTreeSet::new();
        for p in set {
            match g.apply(p) {
                Some(q) if set.contains(&q) => {}
                _ => {
                    out.insert(p.clone());
                }
            }
            if let Some(r) = ginv.apply(p) {
                if !set.contains(&r) {
                    out.insert(r);
                }
            }
        }
        Ok(out)
    }
}

impl<P: Point> fmt::Debug for OrbitWindow<P> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("OrbitWindow")
            .field("base", &self.base)
            .field("radius", &self.radius)
            .field("vertices", &self.points.len())
            .field("exhausted", &self.exhausted)
            .finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Unrestricted shift on the integer line.
    fn line_gens() -> GeneratorSet<i64> {
        GeneratorSet::new(vec![
            Generator::new("s+", "s-", |p: &i64| Some(p + 1)),
            Generator::new("s-", "s+", |p: &i64| Some(p - 1)),
        ])
        .unwrap()
    }

    /// Shift restricted to {0, .., m}: a genuinely partial map.
    fn segment_gens(m: i64) -> GeneratorSet<i64> {
        GeneratorSet::new(vec![
            Generator::new("s+", "s-", move |p: &i64| (*p < m).then(|| p + 1)),
            Generator::new("s-", "s+", |p: &i64| (*p > 0).then(|| p - 1)),
        ])
        .unwrap()
    }

    /// Rotation of the cycle of length m: a finite orbit.
    fn cycle_gens(m: i64) -> GeneratorSet<i64> {
        GeneratorSet::new(vec![
            Generator::new("r+", "r-", move |p: &i64| Some((p + 1).rem_euclid(m))),
            Generator::new("r-", "r+", move |p: &i64| Some((p - 1).rem_euclid(m))),
        ])
        .unwrap()
    }

    #[test]
    fn line_window_counts_and_distances() {
        let w = OrbitWindow::build(0i64, 5, line_gens());
        assert_eq!(w.len(), 11);
        assert_eq!(w.distance_from_base(&-5).unwrap(), 5);
        assert_eq!(w.distance_from_base(&3).unwrap(), 3);
        assert!(!w.contains(&6));
        assert!(w.is_complete(&4).unwrap());
        assert!(!w.is_complete(&5).unwrap());
        assert!(!w.exhausted());
    }

    #[test]
    fn neighbors_and_degree_on_the_line() {
        let w = OrbitWindow::build(0i64, 3, line_gens());
        let mut ns = w.neighbors(&0).unwrap();
        ns.sort_by_key(|(_, q)| *q);
        assert_eq!(ns, vec![("s-", -1), ("s+", 1)]);
        assert_eq!(w.degree(&0).unwrap(), 2);
        assert!(matches!(
            w.neighbors(&17),
            Err(WindowError::PointNotInWindow { .. })
        ));
    }

    #[test]
    fn segment_endpoint_has_one_neighbor() {
        let w = OrbitWindow::build(0i64, 10, segment_gens(4));
        assert!(w.exhausted());
        assert_eq!(w.len(), 5);
        assert_eq!(w.degree(&4).unwrap(), 1);
        assert_eq!(w.degree(&2).unwrap(), 2);
        assert_eq!(w.neighbors(&4).unwrap(), vec![("s-", 3)]);
    }

    #[test]
    fn ball_respects_the_horizon() {
        let w = OrbitWindow::build(0i64, 5, line_gens());
        let b = w.ball(&0, 2).unwrap();
        assert_eq!(b, (-2..=2).collect());
        let b = w.ball(&3, 2).unwrap();
        assert_eq!(b, (1..=5).collect());
        assert!(matches!(
            w.ball(&3, 3),
            Err(WindowError::HorizonExceeded { .. })
        ));
    }

    #[test]
    fn exhausted_orbit_lifts_the_ball_guard() {
        let w = OrbitWindow::build(0i64, 10, cycle_gens(6));
        assert!(w.exhausted());
        let b = w.ball(&2, 50).unwrap();
        assert_eq!(b.len(), 6);
    }

    #[test]
    fn graph_distance_and_cap() {
        let w = OrbitWindow::build(0i64, 6, line_gens());
        assert_eq!(
            w.graph_distance(&-2, &3, 10).unwrap(),
            Distance::Within(5)
        );
        assert_eq!(
            w.graph_distance(&-2, &3, 4).unwrap(),
            Distance::ExceedsCap
        );
        assert_eq!(w.graph_distance(&1, &1, 0).unwrap(), Distance::Within(0));
    }

    #[test]
    fn interval_boundary_and_difference_set() {
        let w = OrbitWindow::build(0i64, 12, line_gens());
        let a: BTreeSet<i64> = (0..=8).collect();
        assert_eq!(w.vertex_boundary(&a).unwrap(), BTreeSet::from([0, 8]));
        // Shift by +1: 8 leaves, -1 enters.
        assert_eq!(
            w.difference_set(&a, "s+").unwrap(),
            BTreeSet::from([8, -1])
        );
    }

    #[test]
    fn difference_set_with_undefined_image() {
        // On the segment the right endpoint has no forward image, and the
        // convention counts it as moved out.
        let w = OrbitWindow::build(0i64, 10, segment_gens(4));
        let a: BTreeSet<i64> = (0..=4).collect();
        assert_eq!(w.vertex_boundary(&a).unwrap(), BTreeSet::new());
        assert_eq!(w.difference_set(&a, "s+").unwrap(), BTreeSet::from([4]));
    }

    #[test]
    fn whole_finite_orbit_has_empty_boundary() {
        let w = OrbitWindow::build(0i64, 10, cycle_gens(7));
        let a: BTreeSet<i64> = (0..7).collect();
        assert_eq!(w.vertex_boundary(&a).unwrap(), BTreeSet::new());
        assert_eq!(w.difference_set(&a, "r+").unwrap(), BTreeSet::new());
    }

    #[test]
    fn boundary_requires_known_neighborhoods() {
        let w = OrbitWindow::build(0i64, 4, line_gens());
        let a: BTreeSet<i64> = (2..=4).collect();
        assert!(matches!(
            w.vertex_boundary(&a),
            Err(WindowError::HorizonExceeded { .. })
        ));
    }

    #[test]
    fn generator_set_validation() {
        let err = GeneratorSet::new(vec![
            Generator::new("s+", "s-", |p: &i64| Some(p + 1)),
        ])
        .unwrap_err();
        assert!(matches!(err, WindowError::MissingInverse { .. }));

        let err = GeneratorSet::new(vec![
            Generator::new("s+", "s-", |p: &i64| Some(p + 1)),
            Generator::new("s+", "s-", |p: &i64| Some(p - 1)),
        ])
        .unwrap_err();
        assert!(matches!(err, WindowError::DuplicateLabel { .. }));
    }

    #[test]
    fn loops_count_once_in_the_degree() {
        let gens = GeneratorSet::new(vec![Generator::involution("swap", |p: &i64| {
            Some(p ^ 1)
        })])
        .unwrap();
        let w = OrbitWindow::build(0i64, 3, gens);
        assert_eq!(w.len(), 2);
        assert_eq!(w.degree(&0).unwrap(), 1);
        assert_eq!(w.edge_neighbors(&0).unwrap(), vec![&1]);
    }
}
