//! The varieties `S_ac` and their incidences with distance classes.
//!
//! `(b, d) ∈ S_ac` when some non-isotropic line `ℓ` carries `a ↦ b` and
//! `c ↦ d` by reflection, where a point on `ℓ` is fixed. Besides the generic
//! case `B(a,b) = B(c,d)` this admits `b = a` with `a ∈ B(c,d)`, `d = c`
//! with `c ∈ B(a,b)`, and `(a, c)` itself via the line through `a` and `c`.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::exec::Executor;
use crate::field::Scalar;
use crate::geom::{bisector, line_through, qdist, CanonLine, Circle, Point};
use crate::isometry::{reflect, unique_direct_isometry, IsometryClass};
use crate::stats::{PairBisectors, PointSet, Richness};

/// Key `(a, c)` of the variety `S_ac`, with `r = ‖a−c‖ ≠ 0`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VarietyKey {
    a: Point,
    c: Point,
    r: Scalar,
}

impl VarietyKey {
    pub fn new(a: Point, c: Point) -> Result<Self> {
        let r = qdist(&a, &c);
        if r.is_zero() {
            return Err(Error::NullKey);
        }
        Ok(VarietyKey { a, c, r })
    }

    pub fn a(&self) -> &Point {
        &self.a
    }

    pub fn c(&self) -> &Point {
        &self.c
    }

    pub fn r(&self) -> &Scalar {
        &self.r
    }
}

/// Which reflection-fixed coordinates a member of `S_ac` uses.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Degeneracy {
    /// `b ≠ a`, `d ≠ c` and `B(a,b) = B(c,d)`.
    None,
    /// `b = a`, `a ∈ B(c,d)`.
    Left,
    /// `d = c`, `c ∈ B(a,b)`.
    Right,
    /// `b = a`, `d = c`.
    Both,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Membership {
    NonMember,
    Member(Degeneracy),
}

impl Membership {
    pub fn is_member(self) -> bool {
        self != Membership::NonMember
    }
}

pub fn variety_membership(key: &VarietyKey, b: &Point, d: &Point) -> Membership {
    let (a, c) = (&key.a, &key.c);
    let m = match (b == a, d == c) {
        (false, false) => match (bisector(a, b), bisector(c, d)) {
            (Ok(l), Ok(l2)) if l == l2 => Membership::Member(Degeneracy::None),
            _ => Membership::NonMember,
        },
        (true, false) => match bisector(c, d) {
            Ok(l) if l.contains(a) => Membership::Member(Degeneracy::Left),
            _ => Membership::NonMember,
        },
        (false, true) => match bisector(a, b) {
            Ok(l) if l.contains(c) => Membership::Member(Degeneracy::Right),
            _ => Membership::NonMember,
        },
        (true, true) => {
            // a ≠ c since r ≠ 0, and ‖a−c‖ ≠ 0 makes the line non-isotropic
            match line_through(a, c) {
                Ok(l) if !l.is_isotropic() => Membership::Member(Degeneracy::Both),
                _ => Membership::NonMember,
            }
        }
    };
    debug_assert!(!m.is_member() || qdist(b, d) == key.r);
    m
}

/// The three sets of the printed definition of `S_ac`, taken literally:
/// `B(a,b) = B(c,d)`; `b = a` and `a ∈ B(c,d)`; `d ∈ B(a,b)`.
pub fn literal_membership(key: &VarietyKey, b: &Point, d: &Point) -> [bool; 3] {
    let (a, c) = (&key.a, &key.c);
    let ab = bisector(a, b).ok();
    let cd = bisector(c, d).ok();
    [
        matches!((&ab, &cd), (Some(l), Some(l2)) if l == l2),
        b == a && cd.as_ref().is_some_and(|l| l.contains(a)),
        ab.as_ref().is_some_and(|l| l.contains(d)),
    ]
}

/// The `c` with `B(a,b) = B(c,d)`: the reflection of `d` in `B(a,b)`.
pub fn complete_quadruple(a: &Point, b: &Point, d: &Point) -> Result<Point> {
    reflect(&bisector(a, b)?, d)
}

/// `Π_r` and `𝒮_r` for one nonzero distance `r`.
#[derive(Clone, Debug)]
pub struct RDistanceSystem {
    pub r: Scalar,
    pub pairs: Vec<(Point, Point)>,
    pub keys: Vec<VarietyKey>,
}

pub fn distance_system(set: &PointSet, r: &Scalar) -> Result<RDistanceSystem> {
    if r.is_zero() {
        return Err(Error::NullDistance);
    }
    let mut pairs = Vec::new();
    let mut keys = Vec::new();
    for a in set.points() {
        for c in set.points() {
            if qdist(a, c) == *r {
                pairs.push((a.clone(), c.clone()));
                keys.push(VarietyKey { a: a.clone(), c: c.clone(), r: r.clone() });
            }
        }
    }
    Ok(RDistanceSystem { r: r.clone(), pairs, keys })
}

/// `I(Π_r, 𝒮_r)` split into generic and degenerate memberships, plus the
/// generic count restricted to `(a, b) ∈ R_M`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct IncidenceCounts {
    pub nondeg: u64,
    pub degenerate: u64,
    pub m_nondeg: u64,
}

/// Brute-force membership evaluation over `𝒮_r × Π_r`.
pub fn incidence_counts(set: &PointSet, r: &Scalar, cap: Option<(&Richness, u32)>) -> Result<IncidenceCounts> {
    if r.is_zero() {
        return Err(Error::NullDistance);
    }
    let n = set.len();
    let idx: Vec<(usize, usize)> = (0..n)
        .flat_map(|i| (0..n).map(move |j| (i, j)))
        .filter(|&(i, j)| qdist(set.get(i), set.get(j)) == *r)
        .collect();
    let mut out = IncidenceCounts::default();
    for &(ia, ic) in &idx {
        let key = VarietyKey { a: set.get(ia).clone(), c: set.get(ic).clone(), r: r.clone() };
        for &(ib, id) in &idx {
            match variety_membership(&key, set.get(ib), set.get(id)) {
                Membership::NonMember => {}
                Membership::Member(Degeneracy::None) => {
                    out.nondeg += 1;
                    if cap.is_none_or(|(rich, m)| rich.in_rm(ia, ib, m)) {
                        out.m_nondeg += 1;
                    }
                }
                Membership::Member(_) => out.degenerate += 1,
            }
        }
    }
    Ok(out)
}

/// Incidence counts for one distance class, as reported.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DistanceIncidences {
    pub r: Scalar,
    pub m_r: u64,
    pub counts: IncidenceCounts,
}

/// [`incidence_counts`] for every nonzero distance at once, comparing
/// interned bisector ids instead of recomputing lines. Sorted by `r`.
pub fn all_incidence_counts(
    set: &PointSet,
    bisectors: &PairBisectors,
    cap: Option<(&Richness, u32)>,
    exec: &impl Executor,
) -> Vec<DistanceIncidences> {
    let n = set.len();
    let mut classes: BTreeMap<Scalar, Vec<(usize, usize)>> = BTreeMap::new();
    for i in 0..n {
        for j in 0..n {
            let r = qdist(set.get(i), set.get(j));
            if !r.is_zero() {
                classes.entry(r).or_default().push((i, j));
            }
        }
    }
    let classes: Vec<(Scalar, Vec<(usize, usize)>)> = classes.into_iter().collect();
    let counts = exec.map(classes.len(), |x| {
        let pairs = &classes[x].1;
        let mut out = IncidenceCounts::default();
        for &(ia, ic) in pairs {
            for &(ib, id) in pairs {
                let member = match (ib == ia, id == ic) {
                    (false, false) => {
                        let generic = matches!(
                            (bisectors.line_id(ia, ib), bisectors.line_id(ic, id)),
                            (Some(l), Some(l2)) if l == l2
                        );
                        if generic {
                            out.nondeg += 1;
                            if cap.is_none_or(|(rich, m)| rich.in_rm(ia, ib, m)) {
                                out.m_nondeg += 1;
                            }
                        }
                        false
                    }
                    (true, false) => on_bisector(bisectors, ic, id, set.get(ia)),
                    (false, true) => on_bisector(bisectors, ia, ib, set.get(ic)),
                    (true, true) => true,
                };
                if member {
                    out.degenerate += 1;
                }
            }
        }
        out
    });
    classes
        .into_iter()
        .zip(counts)
        .map(|((r, pairs), counts)| DistanceIncidences { r, m_r: pairs.len() as u64, counts })
        .collect()
}

fn on_bisector(bisectors: &PairBisectors, i: usize, j: usize, p: &Point) -> bool {
    bisectors.line_id(i, j).is_some_and(|id| bisectors.line(id).contains(p))
}

/// Where `S_ac ∩ S_a′c′` can live, as a product of two carriers.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum IntersectionStructure {
    /// `b` on `first`, `d` on `second`.
    ParallelLines { first: CanonLine, second: CanonLine },
    /// `‖b−center‖ = first_r2` and `‖d−center‖ = second_r2`.
    ConcentricCircles { center: Point, first_r2: Scalar, second_r2: Scalar },
    /// The rotation centre is `a` or `c`; the corresponding side collapses to
    /// the centre itself (its `r2` is 0), the other side is a circle.
    Degenerate { center: Point, first_r2: Scalar, second_r2: Scalar },
}

impl IntersectionStructure {
    pub fn contains(&self, b: &Point, d: &Point) -> bool {
        self.first_side().contains(b) && self.second_side().contains(d)
    }

    pub fn kind(&self) -> &'static str {
        match self {
            IntersectionStructure::ParallelLines { .. } => "parallel_lines",
            IntersectionStructure::ConcentricCircles { .. } => "concentric_circles",
            IntersectionStructure::Degenerate { .. } => "degenerate",
        }
    }

    /// Carrier of the `b` coordinate.
    pub fn first_side(&self) -> Side {
        match self {
            IntersectionStructure::ParallelLines { first, .. } => Side::Line(first.clone()),
            IntersectionStructure::ConcentricCircles { center, first_r2, .. }
            | IntersectionStructure::Degenerate { center, first_r2, .. } => Side::around(center, first_r2, self),
        }
    }

    /// Carrier of the `d` coordinate.
    pub fn second_side(&self) -> Side {
        match self {
            IntersectionStructure::ParallelLines { second, .. } => Side::Line(second.clone()),
            IntersectionStructure::ConcentricCircles { center, second_r2, .. }
            | IntersectionStructure::Degenerate { center, second_r2, .. } => Side::around(center, second_r2, self),
        }
    }
}

/// One factor of an [`IntersectionStructure`].
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Side {
    Line(CanonLine),
    Circle(Circle),
    Point(Point),
}

impl Side {
    fn around(center: &Point, r2: &Scalar, s: &IntersectionStructure) -> Side {
        if r2.is_zero() && matches!(s, IntersectionStructure::Degenerate { .. }) {
            Side::Point(center.clone())
        } else {
            Side::Circle(Circle::new(center.clone(), r2.clone()))
        }
    }

    pub fn contains(&self, p: &Point) -> bool {
        match self {
            Side::Line(l) => l.contains(p),
            Side::Circle(c) => c.contains(p),
            Side::Point(q) => p == q,
        }
    }
}

pub fn pair_intersection_structure(v: &VarietyKey, v2: &VarietyKey) -> Result<IntersectionStructure> {
    if v == v2 || v.r != v2.r {
        return Err(Error::KeyMismatch);
    }
    let tau = unique_direct_isometry(&v.a, &v.c, &v2.a, &v2.c)?;
    match tau.class() {
        IsometryClass::Rotation { fixed_point: p } => {
            let first_r2 = qdist(&v.a, p);
            let second_r2 = qdist(&v.c, p);
            let center = p.clone();
            Ok(if *p == v.a || *p == v.c {
                IntersectionStructure::Degenerate { center, first_r2, second_r2 }
            } else {
                IntersectionStructure::ConcentricCircles { center, first_r2, second_r2 }
            })
        }
        IsometryClass::Translation => Ok(IntersectionStructure::ParallelLines {
            first: line_through(&v.a, &v2.a)?,
            second: line_through(&v.c, &v2.c)?,
        }),
        // equal keys were rejected and direct isometries are never reflections
        IsometryClass::Identity | IsometryClass::Reflection { .. } => Err(Error::KeyMismatch),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exec::Sequential;
    use crate::field::FieldSpec;
    use crate::geom::canon_line;
    use crate::stats::bisector_energy;
    use alloc::vec;

    fn q(x: i64, y: i64) -> Point {
        Point::from_ints(FieldSpec::Rational, x, y)
    }

    fn q_set(coords: &[(i64, i64)]) -> PointSet {
        PointSet::new(FieldSpec::Rational, coords.iter().map(|&(x, y)| q(x, y)).collect()).unwrap()
    }

    fn key(a: Point, c: Point) -> VarietyKey {
        VarietyKey::new(a, c).unwrap()
    }

    #[test]
    fn membership_examples() {
        let k = key(q(0, 0), q(2, 0));
        assert_eq!(variety_membership(&k, &q(0, 2), &q(2, 2)), Membership::Member(Degeneracy::None));
        assert_eq!(variety_membership(&k, &q(0, 0), &q(-2, 0)), Membership::Member(Degeneracy::Left));
        assert_eq!(variety_membership(&k, &q(0, 2), &q(2, 0)), Membership::NonMember);
        assert_eq!(variety_membership(&k, &q(4, 0), &q(2, 0)), Membership::Member(Degeneracy::Right));
        assert_eq!(variety_membership(&k, &q(0, 0), &q(2, 0)), Membership::Member(Degeneracy::Both));
        assert_eq!(VarietyKey::new(q(1, 1), q(1, 1)), Err(Error::NullKey));
    }

    #[test]
    fn completion_examples() {
        assert_eq!(complete_quadruple(&q(0, 0), &q(0, 2), &q(2, 2)).unwrap(), q(2, 0));
        assert_eq!(complete_quadruple(&q(0, 0), &q(0, 2), &q(3, 1)).unwrap(), q(3, 1));
        assert_eq!(complete_quadruple(&q(0, 0), &q(0, 0), &q(3, 1)), Err(Error::EqualPoints));
    }

    #[test]
    fn incidence_examples() {
        let q4 = FieldSpec::Rational.int(4);
        let two = q_set(&[(0, 0), (2, 0)]);
        assert_eq!(incidence_counts(&two, &q4, None).unwrap().nondeg, 2);

        let three = q_set(&[(0, 0), (1, 0), (2, 0)]);
        let total: u64 =
            [1, 4].iter().map(|&r| incidence_counts(&three, &FieldSpec::Rational.int(r), None).unwrap().nondeg).sum();
        assert_eq!(total, 6);
        assert_eq!(total, bisector_energy(&three).work);

        let f5 = FieldSpec::prime(5).unwrap();
        let iso = PointSet::new(f5, vec![Point::from_ints(f5, 0, 0), Point::from_ints(f5, 1, 2)]).unwrap();
        for r in 1..5 {
            assert_eq!(incidence_counts(&iso, &f5.int(r), None).unwrap(), IncidenceCounts::default());
        }
        assert_eq!(incidence_counts(&iso, &f5.zero(), None), Err(Error::NullDistance));
    }

    #[test]
    fn indexed_counts_agree() {
        let set = q_set(&[(0, 0), (1, 0), (1, 1), (0, 1), (3, 1)]);
        let idx = PairBisectors::new(&set);
        for rec in all_incidence_counts(&set, &idx, None, &Sequential) {
            assert_eq!(incidence_counts(&set, &rec.r, None).unwrap(), rec.counts);
            assert_eq!(distance_system(&set, &rec.r).unwrap().pairs.len() as u64, rec.m_r);
        }
    }

    #[test]
    fn structure_examples() {
        let v = key(q(0, 0), q(2, 0));
        let qf = FieldSpec::Rational;
        let line = |a, b, c| canon_line(&qf.int(a), &qf.int(b), &qf.int(c)).unwrap();
        assert_eq!(
            pair_intersection_structure(&v, &key(q(1, 1), q(3, 1))).unwrap(),
            IntersectionStructure::ParallelLines { first: line(1, -1, 0), second: line(1, -1, 2) }
        );
        assert_eq!(
            pair_intersection_structure(&v, &key(q(2, 2), q(0, 2))).unwrap(),
            IntersectionStructure::ConcentricCircles { center: q(1, 1), first_r2: qf.int(2), second_r2: qf.int(2) }
        );
        assert_eq!(pair_intersection_structure(&v, &v), Err(Error::KeyMismatch));
        let s = pair_intersection_structure(&v, &key(q(0, 0), q(0, 2))).unwrap();
        assert_eq!(s.kind(), "degenerate");
        assert!(s.contains(&q(0, 0), &q(-2, 0)));
        assert!(!s.contains(&q(2, 0), &q(-2, 0)));
    }

    #[test]
    fn literal_reading_first_two_sets() {
        let k = key(q(0, 0), q(2, 0));
        assert_eq!(literal_membership(&k, &q(0, 2), &q(2, 2)), [true, false, false]);
        assert_eq!(literal_membership(&k, &q(0, 0), &q(-2, 0)), [false, true, false]);
        // the printed third set admits any d on B(a,b), not only d = c
        assert!(literal_membership(&k, &q(0, 2), &q(5, 1))[2]);
        assert_eq!(variety_membership(&k, &q(0, 2), &q(5, 1)), Membership::NonMember);
    }
}
