//! Counting statistics of a finite point set.
//!
//! All counts are over *ordered* pairs, triples and quadruples, matching the
//! conventions of the bisector-energy literature: a pair `(a, b)` and its
//! reverse `(b, a)` share a bisector and are counted separately.

mod classes;
mod report;
mod richness;

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec::Vec;

pub use classes::{
    bisector_classes, bisector_energy, bisector_energy_m, dyadic_line_profile, point_line_incidences,
    point_line_incidences_bucketed, BisectorClassMap, ClassCounts, DyadicBucket, Energy, PairBisectors,
};
pub use report::{Check, IncidenceRecord, ReportOptions, StatsReport};
pub use richness::{circle_richness_for_pair, max_richness, max_richness_with, pair_count, Richness};

use crate::error::{Error, Result};
use crate::exec::{Executor, Sequential};
use crate::field::{FieldSpec, Scalar};
use crate::geom::{qdist, Point};

/// A finite set of distinct points over a single field, in a fixed order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PointSet {
    field: FieldSpec,
    points: Vec<Point>,
}

impl PointSet {
    pub fn new(field: FieldSpec, points: Vec<Point>) -> Result<Self> {
        let mut seen = BTreeSet::new();
        for p in &points {
            if p.field() != field {
                return Err(Error::FieldMismatch);
            }
            if !seen.insert(p) {
                return Err(Error::DuplicatePoint);
            }
        }
        Ok(PointSet { field, points })
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn get(&self, i: usize) -> &Point {
        &self.points[i]
    }
}

/// Distances seen from one pin: nonzero distance histogram and the number
/// of points at distance zero (the pin itself included).
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct PinProfile {
    pub histogram: BTreeMap<Scalar, u64>,
    pub zero: u64,
}

pub fn pin_profile(set: &PointSet, pin: usize) -> PinProfile {
    let a = set.get(pin);
    let mut profile = PinProfile::default();
    for b in set.points() {
        let r = qdist(a, b);
        if r.is_zero() {
            profile.zero += 1;
        } else {
            *profile.histogram.entry(r).or_insert(0) += 1;
        }
    }
    profile
}

pub fn pin_profiles_with(set: &PointSet, exec: &impl Executor) -> Vec<PinProfile> {
    exec.map(set.len(), |i| pin_profile(set, i))
}

/// `m_r` for every nonzero `r`, plus `m_0` (which includes the diagonal).
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct DistanceMultiplicities {
    pub nonzero: BTreeMap<Scalar, u64>,
    pub zero: u64,
}

impl DistanceMultiplicities {
    pub fn from_profiles(profiles: &[PinProfile]) -> Self {
        let mut out = DistanceMultiplicities::default();
        for p in profiles {
            out.zero += p.zero;
            for (r, c) in &p.histogram {
                *out.nonzero.entry(r.clone()).or_insert(0) += c;
            }
        }
        out
    }

    pub fn sum_squares(&self) -> u128 {
        self.nonzero.values().map(|&m| u128::from(m) * u128::from(m)).sum()
    }

    /// `Δ(A)`: number of distinct values `‖a−b‖`, zero included.
    pub fn distinct(&self) -> usize {
        self.nonzero.len() + usize::from(self.zero > 0)
    }
}

pub fn distance_multiplicities(set: &PointSet) -> DistanceMultiplicities {
    DistanceMultiplicities::from_profiles(&pin_profiles_with(set, &Sequential))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PinnedDistances {
    /// `max_a |{‖a−b‖ : b ∈ A}|`, which always contains 0 via `b = a`.
    pub with_zero: usize,
    /// Same maximum counting only nonzero distances.
    pub no_zero: usize,
    /// First pin attaining `with_zero`.
    pub pin: usize,
    /// `min_a` of the nonzero distinct-distance count.
    pub min_no_zero: usize,
}

impl PinnedDistances {
    pub fn from_profiles(profiles: &[PinProfile]) -> Result<Self> {
        if profiles.is_empty() {
            return Err(Error::EmptySet);
        }
        let mut out = PinnedDistances { with_zero: 0, no_zero: 0, pin: 0, min_no_zero: usize::MAX };
        for (i, p) in profiles.iter().enumerate() {
            let nz = p.histogram.len();
            let w = nz + 1;
            if w > out.with_zero {
                out.with_zero = w;
                out.pin = i;
            }
            out.no_zero = out.no_zero.max(nz);
            out.min_no_zero = out.min_no_zero.min(nz);
        }
        Ok(out)
    }
}

pub fn pinned_distance_count(set: &PointSet) -> Result<PinnedDistances> {
    PinnedDistances::from_profiles(&pin_profiles_with(set, &Sequential))
}

/// Ordered isosceles triples `(a, b, c)` with `‖a−b‖ = ‖a−c‖ ≠ 0`;
/// `strict` additionally requires `b ≠ c`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Isosceles {
    pub total: u64,
    pub strict: u64,
}

impl Isosceles {
    pub fn from_profiles(profiles: &[PinProfile]) -> Self {
        let mut out = Isosceles::default();
        for p in profiles {
            for &c in p.histogram.values() {
                out.total += c * c;
                out.strict += c * (c - 1);
            }
        }
        out
    }
}

pub fn isosceles_counts(set: &PointSet) -> Isosceles {
    Isosceles::from_profiles(&pin_profiles_with(set, &Sequential))
}

/// Ordered triples `(a, b, c)`, `b ≠ c`, with `‖a−b‖ = ‖a−c‖ = 0` but
/// `‖b−c‖ ≠ 0`: `a` lies on `B(b, c)` without being counted by `𝒯`.
/// Always 0 when the field has no isotropic vectors.
pub fn null_apex_triples(set: &PointSet, exec: &impl Executor) -> u64 {
    if !set.field().has_i() {
        return 0;
    }
    exec.map(set.len(), |i| {
        let a = set.get(i);
        let zero: Vec<&Point> = set.points().iter().filter(|b| *b != a && qdist(a, b).is_zero()).collect();
        let mut count = 0;
        for b in &zero {
            for c in &zero {
                if !qdist(b, c).is_zero() {
                    count += 1;
                }
            }
        }
        count
    })
    .into_iter()
    .sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    pub(crate) fn q_set(coords: &[(i64, i64)]) -> PointSet {
        let f = FieldSpec::Rational;
        PointSet::new(f, coords.iter().map(|&(x, y)| Point::from_ints(f, x, y)).collect()).unwrap()
    }

    #[test]
    fn point_set_validation() {
        let f = FieldSpec::Rational;
        let p = Point::from_ints(f, 1, 1);
        assert_eq!(PointSet::new(f, vec![p.clone(), p.clone()]), Err(Error::DuplicatePoint));
        let f5 = FieldSpec::prime(5).unwrap();
        assert_eq!(PointSet::new(f5, vec![p]), Err(Error::FieldMismatch));
    }

    #[test]
    fn multiplicities_examples() {
        let q = FieldSpec::Rational;
        let m = distance_multiplicities(&q_set(&[(0, 0), (1, 0), (2, 0)]));
        assert_eq!(m.nonzero, BTreeMap::from([(q.int(1), 4), (q.int(4), 2)]));
        assert_eq!(m.zero, 3);

        let m = distance_multiplicities(&q_set(&[(5, 5)]));
        assert!(m.nonzero.is_empty());
        assert_eq!(m.zero, 1);
    }

    #[test]
    fn multiplicities_full_grid_mod_5() {
        let f5 = FieldSpec::prime(5).unwrap();
        let pts = (0..5).flat_map(|x| (0..5).map(move |y| Point::from_ints(f5, x, y))).collect();
        let m = distance_multiplicities(&PointSet::new(f5, pts).unwrap());
        let expect: BTreeMap<Scalar, u64> = (1..5).map(|r| (f5.int(r), 100)).collect();
        assert_eq!(m.nonzero, expect);
        assert_eq!(m.zero, 225);
    }

    #[test]
    fn pinned_examples() {
        let pd = pinned_distance_count(&q_set(&[(0, 0), (1, 0), (2, 0)])).unwrap();
        assert_eq!((pd.with_zero, pd.no_zero, pd.pin), (3, 2, 0));
        let pd = pinned_distance_count(&q_set(&[(3, 4)])).unwrap();
        assert_eq!((pd.with_zero, pd.no_zero, pd.pin), (1, 0, 0));
        assert_eq!(pinned_distance_count(&q_set(&[])), Err(Error::EmptySet));
    }

    #[test]
    fn isosceles_examples() {
        assert_eq!(isosceles_counts(&q_set(&[(0, 0), (1, 0), (2, 0)])), Isosceles { total: 8, strict: 2 });
        assert_eq!(
            isosceles_counts(&q_set(&[(0, 0), (1, 0), (1, 1), (0, 1)])),
            Isosceles { total: 20, strict: 8 }
        );
        assert_eq!(isosceles_counts(&q_set(&[(0, 0)])), Isosceles::default());
    }
}
