//! Fast counting kernels against direct enumeration.

use std::collections::BTreeSet;

use bisector_core::config::{gen_circle_points, gen_collinear, gen_grid, gen_random, CircleMode};
use bisector_core::geom::{bisector, circumcircle, line_through, qdist};
use bisector_core::stats::{
    bisector_classes, bisector_energy, distance_multiplicities, isosceles_counts, max_richness, null_apex_triples,
    pinned_distance_count, point_line_incidences, point_line_incidences_bucketed, ReportOptions, StatsReport,
};
use bisector_core::variety::incidence_counts;
use bisector_core::{CanonLine, FieldSpec, Point, PointSet, Sequential};
use proptest::prelude::*;

fn quadruple_energy(set: &PointSet) -> (u64, u64) {
    let pts = set.points();
    let (mut full, mut diag) = (0, 0);
    for a in pts {
        for b in pts {
            let Ok(l) = bisector(a, b) else { continue };
            for c in pts {
                for d in pts {
                    if bisector(c, d).ok().as_ref() == Some(&l) {
                        full += 1;
                        if qdist(a, c).is_zero() {
                            diag += 1;
                        }
                    }
                }
            }
        }
    }
    (full, diag)
}

fn triple_isosceles(set: &PointSet) -> (u64, u64) {
    let pts = set.points();
    let (mut t, mut strict) = (0, 0);
    for a in pts {
        for b in pts {
            for c in pts {
                let r = qdist(a, b);
                if !r.is_zero() && r == qdist(a, c) {
                    t += 1;
                    if b != c {
                        strict += 1;
                    }
                }
            }
        }
    }
    (t, strict)
}

fn count_on(set: &PointSet, pred: impl Fn(&Point) -> bool) -> u32 {
    set.points().iter().filter(|p| pred(p)).count() as u32
}

/// Richest line or non-degenerate circle through `a_i` and `a_j`.
fn pair_richness(set: &PointSet, i: usize, j: usize) -> u32 {
    let (a, b) = (set.get(i), set.get(j));
    let l = line_through(a, b).unwrap();
    let mut best = count_on(set, |p| l.contains(p));
    for c in set.points() {
        if c == a || c == b {
            continue;
        }
        if let Ok(Some(circle)) = circumcircle(a, b, c) {
            if !circle.is_degenerate() {
                best = best.max(count_on(set, |p| circle.contains(p)));
            }
        }
    }
    best
}

fn energy_m(set: &PointSet, cap: u32) -> u64 {
    let pts = set.points();
    let mut q = 0;
    for i in 0..pts.len() {
        for j in 0..pts.len() {
            let Ok(l) = bisector(&pts[i], &pts[j]) else { continue };
            if pair_richness(set, i, j) > cap {
                continue;
            }
            for c in pts {
                for d in pts {
                    if bisector(c, d).ok().as_ref() == Some(&l) {
                        q += 1;
                    }
                }
            }
        }
    }
    q
}

fn arb_set(max_n: usize) -> impl Strategy<Value = PointSet> {
    let field = prop_oneof![Just(FieldSpec::Rational), Just(FieldSpec::prime(5).unwrap()), Just(FieldSpec::prime(13).unwrap())];
    (field, prop::collection::vec((-6i64..7, -6i64..7), 1..=max_n)).prop_map(|(f, coords)| {
        let pts: BTreeSet<Point> = coords.into_iter().map(|(x, y)| Point::from_ints(f, x, y)).collect();
        PointSet::new(f, pts.into_iter().collect()).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn energy_matches_quadruples(set in arb_set(9)) {
        let e = bisector_energy(&set);
        let (full, diag) = quadruple_energy(&set);
        prop_assert_eq!(e.full, full);
        prop_assert_eq!(e.diag, diag);
        prop_assert_eq!(bisector_classes(&set, None).energy(), full);
    }

    #[test]
    fn isosceles_matches_triples(set in arb_set(10)) {
        let t = isosceles_counts(&set);
        prop_assert_eq!((t.total, t.strict), triple_isosceles(&set));
        let apex = null_apex_triples(&set, &Sequential);
        prop_assert_eq!(t.strict + apex, bisector_classes(&set, None).sum_ib());
        if !set.field().has_i() {
            prop_assert_eq!(apex, 0);
        }
    }

    #[test]
    fn incidences_sum_to_working_energy(set in arb_set(8)) {
        let m = distance_multiplicities(&set);
        let total: u64 = m.nonzero.keys().map(|r| incidence_counts(&set, r, None).unwrap().nondeg).sum();
        prop_assert_eq!(total, bisector_energy(&set).work);
    }

    #[test]
    fn richness_matches_pairs(set in arb_set(8)) {
        let rich = max_richness(&set);
        let n = set.len();
        let mut m = u32::from(n == 1);
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    let want = pair_richness(&set, i, j);
                    prop_assert_eq!(rich.pair_richness(i, j), want);
                    m = m.max(want);
                }
            }
        }
        prop_assert_eq!(rich.m, m);
        if let Some(w) = &rich.witness {
            prop_assert_eq!(count_on(&set, |p| w.contains(p)), rich.m);
        }
    }

    #[test]
    fn capped_energy_matches(set in arb_set(7), cap in 2u32..6) {
        let rich = max_richness(&set);
        let fast = bisector_classes(&set, Some((&rich, cap))).energy_m();
        prop_assert_eq!(fast, energy_m(&set, cap));
        let looser = bisector_classes(&set, Some((&rich, cap + 1))).energy_m();
        prop_assert!(fast <= looser);
        prop_assert!(looser <= bisector_energy(&set).full);
    }

    #[test]
    fn report_checks_hold(set in arb_set(10)) {
        let r = StatsReport::compute_with(&set, &ReportOptions::default(), &Sequential).unwrap();
        let failed: Vec<_> = r.checks.iter().filter(|c| !c.ok).collect();
        prop_assert!(failed.is_empty(), "{:?}", failed);
    }

    #[test]
    fn bucketed_incidences_agree(set in arb_set(12), other in arb_set(8)) {
        let lines: Vec<CanonLine> = other
            .points()
            .iter()
            .flat_map(|a| other.points().iter().filter_map(move |b| line_through(a, b).ok()))
            .filter(|l| l.alpha().field() == set.field())
            .collect();
        prop_assert_eq!(
            point_line_incidences_bucketed(set.points(), &lines),
            point_line_incidences(set.points(), &lines)
        );
    }
}

#[test]
fn collinear_family() {
    for n in 2..=8 {
        let set = gen_collinear(FieldSpec::Rational, n).unwrap();
        assert_eq!(max_richness(&set).m, n);
        assert_eq!(bisector_classes(&set, None).distinct(), 2 * n as usize - 3);
    }
}

#[test]
fn circle_family_is_cocircular() {
    for n in [3, 8, 16] {
        let set = gen_circle_points(CircleMode::Rational(n)).unwrap();
        assert_eq!(max_richness(&set).m, n);
    }
}

#[test]
fn full_grid_distances() {
    for p in [3, 5, 7] {
        let set = gen_grid(p, p).unwrap();
        let delta = distance_multiplicities(&set).distinct();
        assert!(delta <= p as usize);
        assert!(pinned_distance_count(&set).unwrap().with_zero <= p as usize);
    }
}

#[test]
fn random_generator_is_stable() {
    let f13 = FieldSpec::prime(13).unwrap();
    for seed in 0..5 {
        let a = gen_random(f13, 40, seed).unwrap();
        assert_eq!(a, gen_random(f13, 40, seed).unwrap());
        assert_eq!(a.len(), 40);
    }
}
