//! Exact arithmetic over the averaging family without materializing it.
//!
//! Each level-k slice of the averaging set is split into strata: an
//! explicit short prefix together with a final-letter class.  Stratum
//! sizes come from a closed form for powers of the reduced-word
//! transfer matrix, so sums over the whole set are exact rationals even
//! for n in the hundreds.  Every observable handled here (cylinder
//! functions, generator shifts, neighbor averages) only reads a bounded
//! number of leading letters, which is what makes the stratification
//! sufficient.

use std::sync::Arc;

use num::{BigInt, BigRational, One, Signed, Zero};

use super::{BoundaryPoint, Letter, OrbitPoint, Word};

fn pow3(j: u64) -> BigInt {
    num::pow(BigInt::from(3), j as usize)
}

/// Entry (from, to) of the j-th power of the transfer matrix M, where
/// M(c, l) = 1 when l != c^{-1}: the number of reduced words of length
/// j + 1 that begin with c and end with l, divided out by the prefix.
/// M = J - Q with J all-ones and Q the inversion permutation, and J, Q
/// commute, which collapses the power to a two-case closed form.
fn transfer_entry(j: u64, from: Letter, to: Letter) -> BigInt {
    let quarter = (pow3(j) - if j.is_multiple_of(2) { 1 } else { -1 }) / 4;
    if j.is_multiple_of(2) {
        quarter + if to == from { 1 } else { 0 }
    } else {
        quarter - if to == from.inverse() { 1 } else { 0 }
    }
}

/// Number of reduced words of length `k` that start with `prefix`
/// (nonempty, reduced) and do not end with `excluded_last`.
fn slice_count(k: u64, prefix: &[Letter], excluded_last: Letter) -> BigInt {
    debug_assert!(!prefix.is_empty() && k >= prefix.len() as u64);
    let j = k - prefix.len() as u64;
    pow3(j) - transfer_entry(j, *prefix.last().unwrap(), excluded_last)
}

/// Number of germs in the level-k slice of the averaging set.
fn level_total(k: u64, excluded_last: Letter) -> BigInt {
    if k == 0 {
        return BigInt::one();
    }
    Letter::ALL
        .iter()
        .map(|f| slice_count(k, &[*f], excluded_last))
        .sum()
}

fn level_weight(k: u64) -> BigRational {
    BigRational::new(BigInt::one(), pow3(k))
}

/// All reduced words of length exactly `len`, visited in shortlex order.
fn for_each_word(len: u32, mut f: impl FnMut(&[Letter])) {
    fn rec(word: &mut Vec<Letter>, len: u32, f: &mut impl FnMut(&[Letter])) {
        if word.len() as u32 == len {
            f(word);
            return;
        }
        let block = word.last().map(|l| l.inverse());
        for l in Letter::ALL {
            if Some(l) != block {
                word.push(l);
                rec(word, len, f);
                word.pop();
            }
        }
    }
    rec(&mut Vec::with_capacity(len as usize), len, &mut f)
}

/// Germs of the level-k slice (k small), as orbit points.
fn for_each_slice_germ(x: &Arc<BoundaryPoint>, k: u32, mut f: impl FnMut(OrbitPoint)) {
    if k == 0 {
        f(OrbitPoint::base_point(Arc::clone(x)));
        return;
    }
    let excluded = x.first_letter().inverse();
    for_each_word(k, |letters| {
        if *letters.last().unwrap() != excluded {
            f(OrbitPoint::from_germ(
                Word::from_letters(letters.iter().copied()),
                Arc::clone(x),
            ));
        }
    });
}

fn running_sums(per_level: Vec<BigRational>) -> Vec<BigRational> {
    let mut acc = BigRational::zero();
    per_level
        .into_iter()
        .map(|s| {
            acc += s;
            acc.clone()
        })
        .collect()
}

fn running_abs_sums(per_level: Vec<BigRational>) -> Vec<BigRational> {
    let mut acc = BigRational::zero();
    per_level
        .into_iter()
        .map(|s| {
            acc += s;
            acc.abs()
        })
        .collect()
}

/// `|A_n|_x` for n = 0..=n_max.  Comes out to n + 1 on the nose; the
/// sum is still taken level by level rather than asserted.
pub fn averaging_mass_series(x: &Arc<BoundaryPoint>, n_max: u32) -> Vec<BigRational> {
    let excluded = x.first_letter().inverse();
    let per_level = (0..=n_max as u64)
        .map(|k| level_weight(k) * BigRational::from_integer(level_total(k, excluded)))
        .collect();
    running_sums(per_level)
}

/// `|vertex boundary of A_n|_x` for n = 0..=n_max: the base germ plus
/// the whole top slice.
pub fn boundary_mass_series(x: &Arc<BoundaryPoint>, n_max: u32) -> Vec<BigRational> {
    let excluded = x.first_letter().inverse();
    (0..=n_max as u64)
        .map(|n| {
            if n == 0 {
                BigRational::one()
            } else {
                BigRational::one()
                    + level_weight(n) * BigRational::from_integer(level_total(n, excluded))
            }
        })
        .collect()
}

/// `|difference set of A_n under left multiplication by gamma|_x` for
/// n = 0..=n_max.  Germs leave through the top slice (and the base germ
/// when gamma cancels into x); germs enter one level above (and at the
/// germ gamma^{-1} below the base when gamma is x's first letter).
pub fn difference_mass_series(
    x: &Arc<BoundaryPoint>,
    gamma: Letter,
    n_max: u32,
) -> Vec<BigRational> {
    let excluded = x.first_letter().inverse();
    let x1 = x.first_letter();
    (0..=n_max as u64)
        .map(|n| {
            if n == 0 {
                // the base germ always leaves; gamma^{-1} always enters
                let enter_level = if gamma == x1 { -1i64 } else { 1 };
                return BigRational::one()
                    + if enter_level < 0 {
                        BigRational::from_integer(BigInt::from(3))
                    } else {
                        level_weight(1)
                    };
            }
            let leave: BigInt = Letter::ALL
                .iter()
                .filter(|f| **f != gamma.inverse())
                .map(|f| slice_count(n, &[*f], excluded))
                .sum();
            let enter: BigInt = Letter::ALL
                .iter()
                .filter(|f| **f != gamma)
                .map(|f| slice_count(n, &[*f], excluded))
                .sum();
            let mut total = level_weight(n) * BigRational::from_integer(leave)
                + level_weight(n + 1) * BigRational::from_integer(enter);
            if gamma == excluded {
                total += BigRational::one();
            }
            if gamma == x1 {
                total += BigRational::from_integer(BigInt::from(3));
            }
            total
        })
        .collect()
}

fn starts_with(letters: &[Letter], w: &[Letter]) -> bool {
    letters.len() >= w.len() && &letters[..w.len()] == w
}

/// `|A_n intersected with the cylinder [w]|_x` for n = 0..=n_max,
/// unnormalized.  Dividing by n + 1 gives the empirical cylinder mass.
pub fn cylinder_mass_series(x: &Arc<BoundaryPoint>, w: &Word, n_max: u32) -> Vec<BigRational> {
    let excluded = x.first_letter().inverse();
    let wl = w.letters();
    let d = wl.len() as u64;
    let per_level = (0..=n_max as u64)
        .map(|k| {
            if k < d {
                // one candidate: the germ spelling the first k letters
                // of w, continuing into x for the rest
                let germ = &wl[..k as usize];
                let valid = (k == 0 || *germ.last().unwrap() != excluded)
                    && (k..d).all(|i| x.letter((i - k) as usize) == wl[i as usize]);
                if valid {
                    level_weight(k)
                } else {
                    BigRational::zero()
                }
            } else {
                level_weight(k) * BigRational::from_integer(slice_count(k, wl, excluded))
            }
        })
        .collect();
    running_sums(per_level)
}

// Observables below read at most depth(w) + 1 leading letters of a germ
// of length k > depth(w) + 1, so strata are the reduced words of that
// length; shorter germs are enumerated outright.

fn quarter() -> BigRational {
    BigRational::new(BigInt::one(), BigInt::from(4))
}

/// `|sum over A_n of (Df - f)(z) delta(z, x)|` for f the cylinder
/// indicator of `w`, n = 0..=n_max, unnormalized.
pub fn harmonicity_series(x: &Arc<BoundaryPoint>, w: &Word, n_max: u32) -> Vec<BigRational> {
    let wl = w.letters();
    if wl.is_empty() {
        return vec![BigRational::zero(); n_max as usize + 1];
    }
    let excluded = x.first_letter().inverse();
    let d = wl.len();
    let horizon = d as u64 + 1;

    let mut per_level: Vec<BigRational> = Vec::with_capacity(n_max as usize + 1);
    for k in 0..=n_max.min(horizon as u32) {
        let mut acc = BigRational::zero();
        for_each_slice_germ(x, k, |z| {
            let fz = germ_in_cylinder(&z, wl);
            let mut nbr = 0i32;
            for l in Letter::ALL {
                if germ_in_cylinder(&z.apply(l), wl) {
                    nbr += 1;
                }
            }
            let val = BigRational::from_integer(BigInt::from(nbr)) * quarter()
                - BigRational::from_integer(BigInt::from(fz as i32));
            acc += val * level_weight(k as u64);
        });
        per_level.push(acc);
    }

    if n_max as u64 > horizon {
        // stratum value: neighbor count and membership depend only on
        // the first d + 1 letters once k exceeds them
        let mut strata: Vec<(Vec<Letter>, BigRational)> = Vec::new();
        for_each_word(horizon as u32, |p| {
            let fz = starts_with(&p[..d], wl);
            let mut nbr = 0i32;
            for l in Letter::ALL {
                if l == p[0].inverse() {
                    if starts_with(&p[1..], wl) {
                        nbr += 1;
                    }
                } else {
                    let mut shifted = vec![l];
                    shifted.extend_from_slice(&p[..d - 1]);
                    if starts_with(&shifted, wl) {
                        nbr += 1;
                    }
                }
            }
            let val = BigRational::from_integer(BigInt::from(nbr)) * quarter()
                - BigRational::from_integer(BigInt::from(fz as i32));
            if !val.is_zero() {
                strata.push((p.to_vec(), val));
            }
        });
        for k in (horizon + 1)..=(n_max as u64) {
            let mut acc = BigRational::zero();
            for (p, val) in &strata {
                let count = slice_count(k, p, excluded);
                if !count.is_zero() {
                    acc += val.clone() * BigRational::from_integer(count);
                }
            }
            per_level.push(acc * level_weight(k));
        }
    }
    running_abs_sums(per_level)
}

/// `|sum over A_n of f(gamma z) delta(z, x) - f(z) delta(gamma^{-1} z, x)|`
/// for f the cylinder indicator of `w`, n = 0..=n_max, unnormalized.
/// This is the quasi-invariance defect of the empirical measure scaled
/// by the total mass n + 1.  The density term reads the cocycle at the
/// preimage: delta(gamma^{-1} z, z) is the discrete Radon-Nikodym
/// derivative of the pushforward, and the substitution u = gamma z
/// turns the first sum into the second up to the symmetric difference
/// of A_n and gamma^{-1} A_n, which is what keeps the series bounded.
pub fn quasi_invariance_series(
    x: &Arc<BoundaryPoint>,
    gamma: Letter,
    w: &Word,
    n_max: u32,
) -> Vec<BigRational> {
    let wl = w.letters();
    if wl.is_empty() {
        return vec![BigRational::zero(); n_max as usize + 1];
    }
    let excluded = x.first_letter().inverse();
    let d = wl.len();
    let horizon = d as u64 + 1;
    let third = BigRational::new(BigInt::one(), BigInt::from(3));
    let three = BigRational::from_integer(BigInt::from(3));

    let mut per_level: Vec<BigRational> = Vec::with_capacity(n_max as usize + 1);
    for k in 0..=n_max.min(horizon as u32) {
        let mut acc = BigRational::zero();
        for_each_slice_germ(x, k, |z| {
            let moved = z.apply(gamma);
            let pulled = z.apply(gamma.inverse());
            let f_moved = germ_in_cylinder(&moved, wl);
            let f_here = germ_in_cylinder(&z, wl);
            let term = BigRational::from_integer(BigInt::from(f_moved as i32))
                * level_pow(z.level())
                - BigRational::from_integer(BigInt::from(f_here as i32))
                    * level_pow(pulled.level());
            acc += term;
        });
        per_level.push(acc);
    }

    if n_max as u64 > horizon {
        let mut strata: Vec<(Vec<Letter>, BigRational)> = Vec::new();
        for_each_word(horizon as u32, |p| {
            let f_here = starts_with(&p[..d], wl);
            // moved germ is one level up unless gamma cancels p's head
            let f_moved = if gamma == p[0].inverse() {
                starts_with(&p[1..], wl)
            } else {
                let mut shifted = vec![gamma];
                shifted.extend_from_slice(&p[..d - 1]);
                starts_with(&shifted, wl)
            };
            // coefficient of 3^{-k}: f(gamma z) - f(z) * 3^{k - level(gamma^{-1} z)},
            // and gamma^{-1} cancels the head exactly when it reads gamma
            let val = BigRational::from_integer(BigInt::from(f_moved as i32))
                - BigRational::from_integer(BigInt::from(f_here as i32))
                    * if p[0] == gamma { three.clone() } else { third.clone() };
            if !val.is_zero() {
                strata.push((p.to_vec(), val));
            }
        });
        for k in (horizon + 1)..=(n_max as u64) {
            let mut acc = BigRational::zero();
            for (p, val) in &strata {
                let count = slice_count(k, p, excluded);
                if !count.is_zero() {
                    acc += val.clone() * BigRational::from_integer(count);
                }
            }
            per_level.push(acc * level_weight(k));
        }
    }
    running_abs_sums(per_level)
}

fn level_pow(level: i64) -> BigRational {
    if level >= 0 {
        BigRational::new(BigInt::one(), pow3(level as u64))
    } else {
        BigRational::from_integer(pow3(level.unsigned_abs()))
    }
}

fn germ_in_cylinder(z: &OrbitPoint, w: &[Letter]) -> bool {
    w.iter()
        .enumerate()
        .all(|(i, l)| z.boundary_letter(i) == *l)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cocycle::{weighted_mass, Cocycle};
    use crate::examples::f2::{
        busemann_cocycle, cylinder_indicator, cylinders_of_depth, f2_averaging_set, orbit_window,
    };
    use crate::measure::TestFunction;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    fn base(pre: &str, per: &str) -> Arc<BoundaryPoint> {
        Arc::new(BoundaryPoint::parse(pre, per).unwrap())
    }

    fn bases() -> Vec<Arc<BoundaryPoint>> {
        vec![base("", "ab"), base("", "a"), base("abaB", "ba")]
    }

    #[test]
    fn transfer_entries_match_direct_path_counts() {
        for j in 0..6u64 {
            for from in Letter::ALL {
                for to in Letter::ALL {
                    // count reduced words of length j + 1 starting at
                    // `from` and ending at `to` by walking them
                    let mut count = 0u64;
                    for_each_word(j as u32 + 1, |word| {
                        if word[0] == from && *word.last().unwrap() == to {
                            count += 1;
                        }
                    });
                    assert_eq!(
                        transfer_entry(j, from, to),
                        BigInt::from(count),
                        "j={j} {from:?}->{to:?}"
                    );
                }
            }
        }
    }

    #[test]
    fn masses_are_n_plus_one_and_boundary_two() {
        for x in bases() {
            let masses = averaging_mass_series(&x, 40);
            for (n, m) in masses.iter().enumerate() {
                assert_eq!(*m, rat(n as i64 + 1, 1));
            }
            let boundary = boundary_mass_series(&x, 40);
            assert_eq!(boundary[0], rat(1, 1));
            for b in &boundary[1..] {
                assert_eq!(*b, rat(2, 1));
            }
        }
    }

    #[test]
    fn difference_masses_match_brute_force() {
        for x in bases() {
            let w = orbit_window(&x, 7);
            let c: Cocycle<OrbitPoint, BigRational> = busemann_cocycle(&x);
            let basepoint = OrbitPoint::base_point(Arc::clone(&x));
            for gamma in Letter::ALL {
                let series = difference_mass_series(&x, gamma, 5);
                for n in 0..=5u32 {
                    let a = f2_averaging_set(&x, n);
                    let moved = w
                        .difference_set(&a, &gamma.to_char().to_string())
                        .unwrap();
                    let brute = weighted_mass(&c, &moved, &basepoint).unwrap();
                    assert_eq!(
                        series[n as usize], brute,
                        "base {x} gamma {gamma:?} n {n}"
                    );
                }
            }
        }
    }

    #[test]
    fn difference_masses_stay_bounded() {
        let x = base("", "ab");
        for gamma in Letter::ALL {
            let series = difference_mass_series(&x, gamma, 60);
            for v in &series {
                assert!(*v <= rat(5, 1), "gamma {gamma:?} value {v}");
            }
        }
    }

    #[test]
    fn cylinder_masses_match_brute_force() {
        for x in bases() {
            let mut words = cylinders_of_depth(1);
            words.extend(cylinders_of_depth(2));
            words.push(Word::parse("aba").unwrap());
            for w in &words {
                let series = cylinder_mass_series(&x, w, 6);
                let f: TestFunction<OrbitPoint, BigRational> = cylinder_indicator(w);
                let c: Cocycle<OrbitPoint, BigRational> = busemann_cocycle(&x);
                let basepoint = OrbitPoint::base_point(Arc::clone(&x));
                for n in 0..=6u32 {
                    let mut brute = BigRational::zero();
                    for z in f2_averaging_set(&x, n) {
                        brute += f.eval(&z).unwrap() * c.eval(&z, &basepoint).unwrap();
                    }
                    assert_eq!(series[n as usize], brute, "base {x} w {w} n {n}");
                }
            }
        }
    }

    #[test]
    fn cylinder_masses_partition_the_total() {
        let x = base("", "ab");
        let total = averaging_mass_series(&x, 30);
        for depth in [1u32, 2] {
            let mut acc = vec![BigRational::zero(); 31];
            for w in cylinders_of_depth(depth) {
                let series = cylinder_mass_series(&x, &w, 30);
                for (a, s) in acc.iter_mut().zip(series.iter()) {
                    *a += s.clone();
                }
            }
            for (a, t) in acc.iter().zip(total.iter()) {
                assert_eq!(a, t, "depth {depth}");
            }
        }
    }

    #[test]
    fn cylinder_deviation_approaches_the_known_constant() {
        // |A_n ∩ [a]|_x - (n+1)/4 climbs to 15/16 from below for (ab)*
        let x = base("", "ab");
        let series = cylinder_mass_series(&x, &Word::parse("a").unwrap(), 120);
        let mut prev = BigRational::zero();
        for (n, m) in series.iter().enumerate() {
            let dev = m.clone() - rat(n as i64 + 1, 4);
            assert!(dev >= prev, "deviation must be nondecreasing");
            assert!(dev < rat(15, 16));
            prev = dev;
        }
        let last = series[120].clone() - rat(121, 4);
        assert!(last > rat(15, 16) - rat(1, 1_000_000));
    }

    #[test]
    fn harmonicity_matches_brute_force() {
        for x in bases() {
            let w = orbit_window(&x, 7);
            let c: Cocycle<OrbitPoint, BigRational> = busemann_cocycle(&x);
            let basepoint = OrbitPoint::base_point(Arc::clone(&x));
            let mut words = cylinders_of_depth(1);
            words.push(Word::parse("ba").unwrap());
            words.push(Word::parse("aB").unwrap());
            for cyl in &words {
                let series = harmonicity_series(&x, cyl, 5);
                let f: TestFunction<OrbitPoint, BigRational> = cylinder_indicator(cyl);
                for n in 0..=5u32 {
                    let mut acc = BigRational::zero();
                    for z in f2_averaging_set(&x, n) {
                        let df = crate::measure::laplace_apply(&w, &f, &z).unwrap();
                        acc += df * c.eval(&z, &basepoint).unwrap();
                    }
                    assert_eq!(
                        series[n as usize],
                        acc.abs(),
                        "base {x} cyl {cyl} n {n}"
                    );
                }
            }
        }
    }

    #[test]
    fn quasi_invariance_matches_brute_force() {
        for x in bases() {
            let c: Cocycle<OrbitPoint, BigRational> = busemann_cocycle(&x);
            let basepoint = OrbitPoint::base_point(Arc::clone(&x));
            let mut words = cylinders_of_depth(1);
            words.push(Word::parse("bb").unwrap());
            for cyl in &words {
                let f: TestFunction<OrbitPoint, BigRational> = cylinder_indicator(cyl);
                for gamma in Letter::ALL {
                    let series = quasi_invariance_series(&x, gamma, cyl, 5);
                    for n in 0..=5u32 {
                        let mut acc = BigRational::zero();
                        for z in f2_averaging_set(&x, n) {
                            let moved = z.apply(gamma);
                            let pulled = z.apply(gamma.inverse());
                            acc += f.eval(&moved).unwrap() * c.eval(&z, &basepoint).unwrap()
                                - f.eval(&z).unwrap() * c.eval(&pulled, &basepoint).unwrap();
                        }
                        assert_eq!(
                            series[n as usize],
                            acc.abs(),
                            "base {x} gamma {gamma:?} cyl {cyl} n {n}"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn defect_series_decay_like_one_over_n() {
        let x = base("", "ab");
        let mut words = cylinders_of_depth(1);
        words.extend(cylinders_of_depth(2));
        // unnormalized series stay bounded, so defects are O(1/n)
        for cyl in &words {
            for v in harmonicity_series(&x, cyl, 40) {
                assert!(v <= rat(16, 1), "harm {cyl} {v}");
            }
            for gamma in Letter::ALL {
                for v in quasi_invariance_series(&x, gamma, cyl, 40) {
                    assert!(v <= rat(16, 1), "quasi {cyl} {gamma:?} {v}");
                }
            }
        }
        // and they are eventually nonzero (the bound is not vacuous)
        let cyl = Word::parse("a").unwrap();
        assert!(harmonicity_series(&x, &cyl, 40)[40] > BigRational::zero());
        assert!(quasi_invariance_series(&x, Letter::B, &cyl, 40)[40] > BigRational::zero());
    }
}
