//! Structure checks that hold for every input, exercised over random
//! words, sets, and weights.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use num::{BigRational, Zero};
use proptest::prelude::*;

use folner::averaging::{classic_ratio, delta_ratio};
use folner::cocycle::{cocycle_identity_defect, Cocycle};
use folner::examples::f2::{
    busemann, busemann_cocycle, BoundaryPoint, Letter, OrbitPoint, Word,
};
use folner::examples::grid::{grid_ball, grid_window};
use folner::measure::{
    harmonicity_defect, laplace_apply, markov_apply, stationarity_defect, EmpiricalMeasure,
    TestFunction,
};

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

fn letter_seq(max_len: usize) -> impl Strategy<Value = Vec<Letter>> {
    prop::collection::vec(0usize..4, 0..=max_len)
        .prop_map(|v| v.into_iter().map(|i| Letter::ALL[i]).collect())
}

fn word(max_len: usize) -> impl Strategy<Value = Word> {
    letter_seq(max_len).prop_map(Word::from_letters)
}

fn base_point() -> impl Strategy<Value = Arc<BoundaryPoint>> {
    (0usize..4).prop_map(|i| {
        let (pre, per) = [("", "ab"), ("", "a"), ("abaB", "ba"), ("bb", "aab")][i];
        Arc::new(BoundaryPoint::parse(pre, per).unwrap())
    })
}

proptest! {
    #[test]
    fn words_invert_and_reduce_consistently(u in word(8), v in word(8)) {
        let uv = u.concat(&v);
        prop_assert_eq!(uv.inverse(), v.inverse().concat(&u.inverse()));
        prop_assert_eq!(u.inverse().inverse(), u.clone());
        prop_assert!(u.concat(&u.inverse()).is_empty());
        let reparsed = Word::parse(&u.to_string()).unwrap();
        prop_assert_eq!(reparsed, u);
    }

    #[test]
    fn germ_levels_step_by_one_along_edges(
        g in word(8),
        x in base_point(),
        pick in 0usize..4,
    ) {
        let z = OrbitPoint::from_germ(g, Arc::clone(&x));
        let moved = z.apply(Letter::ALL[pick]);
        prop_assert_eq!((moved.level() - z.level()).abs(), 1);
    }

    #[test]
    fn busemann_agrees_with_germ_levels(g in word(8), x in base_point()) {
        // two independent cancellation counts: leading letters of g
        // against x, trailing letters of the inverse germ against x
        let via_word = busemann(&g, &x);
        let via_germ = OrbitPoint::from_germ(g.inverse(), Arc::clone(&x)).level();
        prop_assert_eq!(via_word, via_germ);
    }

    #[test]
    fn busemann_cocycle_satisfies_the_chain_rule(
        a in word(6),
        b in word(6),
        c in word(6),
        x in base_point(),
    ) {
        let delta: Cocycle<OrbitPoint, BigRational> = busemann_cocycle(&x);
        let pa = OrbitPoint::from_germ(a, Arc::clone(&x));
        let pb = OrbitPoint::from_germ(b, Arc::clone(&x));
        let pc = OrbitPoint::from_germ(c, Arc::clone(&x));
        let defect = cocycle_identity_defect(&delta, &pa, &pb, &pc).unwrap();
        prop_assert!(defect.is_zero());
    }

    #[test]
    fn trivial_weights_reduce_to_counting(
        picks in prop::collection::btree_set(0usize..25, 1..12),
        label_ix in 0usize..4,
    ) {
        let ball: Vec<_> = grid_ball(2, 3).unwrap().into_iter().collect();
        let set: BTreeSet<[i64; 3]> = picks.into_iter().map(|i| ball[i]).collect();
        let window = grid_window(2, 5).unwrap();
        let label = ["x+", "x-", "y+", "y-"][label_ix];
        let counted = classic_ratio(&window, &set, label).unwrap();
        let trivial: Cocycle<[i64; 3], BigRational> = Cocycle::trivial();
        let weighted = delta_ratio(&window, &trivial, &set, &[0, 0, 0], label).unwrap();
        prop_assert_eq!(counted, weighted);
    }

    #[test]
    fn difference_counts_are_inversion_symmetric(
        picks in prop::collection::btree_set(0usize..25, 1..12),
        axis in 0usize..2,
    ) {
        let ball: Vec<_> = grid_ball(2, 3).unwrap().into_iter().collect();
        let set: BTreeSet<[i64; 3]> = picks.into_iter().map(|i| ball[i]).collect();
        let window = grid_window(2, 5).unwrap();
        let (plus, minus) = [("x+", "x-"), ("y+", "y-")][axis];
        let forward = window.difference_set(&set, plus).unwrap();
        let backward = window.difference_set(&set, minus).unwrap();
        prop_assert_eq!(forward.len(), backward.len());
    }

    #[test]
    fn laplace_is_markov_minus_identity(
        values in prop::collection::vec((-20i64..20, 1i64..8), 13),
        vertex_ix in 0usize..13,
    ) {
        let window = grid_window(2, 4).unwrap();
        let ball: Vec<_> = grid_ball(2, 2).unwrap().into_iter().collect();
        let table: BTreeMap<[i64; 3], BigRational> = ball
            .iter()
            .zip(&values)
            .map(|(p, (n, d))| (*p, rat(*n, *d)))
            .collect();
        let f = TestFunction::tabulated("random table", table, BigRational::zero());
        let p = ball[vertex_ix];
        let direct = laplace_apply(&window, &f, &p).unwrap();
        let composed = markov_apply(&window, &f, &p).unwrap() - f.eval(&p).unwrap();
        prop_assert_eq!(direct, composed);
    }

    #[test]
    fn stationarity_and_harmonicity_defects_agree(
        weights in prop::collection::vec(1i64..50, 13),
        values in prop::collection::vec((-20i64..20, 1i64..8), 13),
    ) {
        let window = grid_window(2, 4).unwrap();
        let ball: Vec<_> = grid_ball(2, 2).unwrap().into_iter().collect();
        let atoms: BTreeMap<[i64; 3], BigRational> = ball
            .iter()
            .zip(&weights)
            .map(|(p, w)| (*p, rat(*w, 1)))
            .collect();
        let nu = EmpiricalMeasure::from_atoms(atoms).unwrap();
        let table: BTreeMap<[i64; 3], BigRational> = ball
            .iter()
            .zip(&values)
            .map(|(p, (n, d))| (*p, rat(*n, *d)))
            .collect();
        let f = TestFunction::tabulated("random table", table, BigRational::zero());
        let a = harmonicity_defect(&nu, &f, &window).unwrap();
        let b = stationarity_defect(&nu, &f, &window).unwrap();
        prop_assert_eq!(a, b);
    }
}
