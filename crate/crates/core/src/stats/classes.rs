use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use crate::exec::{Executor, Sequential};
use crate::field::Scalar;
use crate::geom::{bisector, qdist, CanonLine, Point};

use super::richness::Richness;
use super::PointSet;

const NO_LINE: u32 = u32::MAX;

/// Bisector of every ordered pair, interned to line ids.
///
/// Line ids follow the canonical order of [`CanonLine`], so the index is a
/// pure function of the point set.
#[derive(Clone, Debug)]
pub struct PairBisectors {
    n: usize,
    ids: Vec<u32>,
    lines: Vec<CanonLine>,
    null_pairs: u64,
}

impl PairBisectors {
    pub fn new(set: &PointSet) -> Self {
        Self::new_with(set, &Sequential)
    }

    pub fn new_with(set: &PointSet, exec: &impl Executor) -> Self {
        let n = set.len();
        let rows: Vec<Vec<Option<CanonLine>>> = exec.map(n, |i| {
            let a = set.get(i);
            (i + 1..n).map(|j| bisector(a, set.get(j)).ok()).collect()
        });
        let mut interned: BTreeMap<&CanonLine, u32> = BTreeMap::new();
        for line in rows.iter().flatten().flatten() {
            interned.entry(line).or_insert(0);
        }
        for (id, v) in interned.values_mut().enumerate() {
            *v = id as u32;
        }
        let mut ids = alloc::vec![NO_LINE; n * n];
        let mut null_pairs = 0;
        for (i, row) in rows.iter().enumerate() {
            for (off, line) in row.iter().enumerate() {
                let j = i + 1 + off;
                match line {
                    Some(l) => {
                        let id = interned[l];
                        ids[i * n + j] = id;
                        ids[j * n + i] = id;
                    }
                    None => null_pairs += 2,
                }
            }
        }
        let lines = interned.into_keys().cloned().collect();
        PairBisectors { n, ids, lines, null_pairs }
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    /// Id of `B(a_i, a_j)`, or `None` when `i = j` or the pair is isotropic.
    pub fn line_id(&self, i: usize, j: usize) -> Option<u32> {
        let id = self.ids[i * self.n + j];
        (id != NO_LINE).then_some(id)
    }

    pub fn line(&self, id: u32) -> &CanonLine {
        &self.lines[id as usize]
    }

    pub fn lines(&self) -> &[CanonLine] {
        &self.lines
    }

    /// Ordered pairs `a ≠ b` with `‖a−b‖ = 0`.
    pub fn null_pairs(&self) -> u64 {
        self.null_pairs
    }

    /// First points `a` of the ordered pairs `(a, b)` in each class, by id.
    pub fn first_points(&self) -> Vec<Vec<usize>> {
        let mut out = alloc::vec![Vec::new(); self.lines.len()];
        for i in 0..self.n {
            for j in 0..self.n {
                if let Some(id) = self.line_id(i, j) {
                    out[id as usize].push(i);
                }
            }
        }
        out
    }
}

/// `b(ℓ)`, `b_RM(ℓ)` and `i(ℓ)` of one bisector class.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct ClassCounts {
    pub b: u64,
    pub b_rm: u64,
    pub i: u64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BisectorClassMap {
    pub classes: BTreeMap<CanonLine, ClassCounts>,
    pub null_pairs: u64,
}

impl BisectorClassMap {
    pub fn build(
        set: &PointSet,
        pairs: &PairBisectors,
        cap: Option<(&Richness, u32)>,
        exec: &impl Executor,
    ) -> Self {
        let incident = exec.map(pairs.lines().len(), |id| {
            let l = &pairs.lines()[id];
            set.points().iter().filter(|p| l.contains(p)).count() as u64
        });
        let mut counts: Vec<ClassCounts> =
            incident.into_iter().map(|i| ClassCounts { b: 0, b_rm: 0, i }).collect();
        let n = set.len();
        for a in 0..n {
            for b in 0..n {
                if let Some(id) = pairs.line_id(a, b) {
                    let c = &mut counts[id as usize];
                    c.b += 1;
                    if let Some((rich, m)) = cap {
                        if rich.in_rm(a, b, m) {
                            c.b_rm += 1;
                        }
                    }
                }
            }
        }
        let classes = pairs.lines().iter().cloned().zip(counts).collect();
        BisectorClassMap { classes, null_pairs: pairs.null_pairs() }
    }

    /// Number of distinct perpendicular bisectors.
    pub fn distinct(&self) -> usize {
        self.classes.len()
    }

    pub fn sum_b(&self) -> u64 {
        self.classes.values().map(|c| c.b).sum()
    }

    /// `Σ_ℓ i(ℓ)·b(ℓ)`.
    pub fn sum_ib(&self) -> u64 {
        self.classes.values().map(|c| c.i * c.b).sum()
    }

    /// `Σ_ℓ b(ℓ)²`.
    pub fn energy(&self) -> u64 {
        self.classes.values().map(|c| c.b * c.b).sum()
    }

    /// `Σ_ℓ b_RM(ℓ)·b(ℓ)`; meaningful only if the map was built with a cap.
    pub fn energy_m(&self) -> u64 {
        self.classes.values().map(|c| c.b_rm * c.b).sum()
    }

    /// Lines grouped by dyadic `k = 2^j` with `k ≤ b(ℓ) < 2k`; only
    /// non-empty buckets are listed, in increasing `k`.
    pub fn dyadic_profile(&self) -> Vec<DyadicBucket> {
        let mut buckets: BTreeMap<u64, DyadicBucket> = BTreeMap::new();
        for c in self.classes.values().filter(|c| c.b > 0) {
            let k = 1u64 << (63 - c.b.leading_zeros());
            let bucket = buckets.entry(k).or_insert(DyadicBucket { k, ..Default::default() });
            bucket.lines += 1;
            bucket.incidences += c.i;
            bucket.pairs += c.b;
        }
        buckets.into_values().collect()
    }
}

pub fn bisector_classes(set: &PointSet, cap: Option<(&Richness, u32)>) -> BisectorClassMap {
    BisectorClassMap::build(set, &PairBisectors::new(set), cap, &Sequential)
}

/// One dyadic bucket `ℒ_k`: its size, the incidence count `I(A, ℒ_k)` and
/// `Σ_{ℓ∈ℒ_k} b(ℓ)`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct DyadicBucket {
    pub k: u64,
    pub lines: u64,
    pub incidences: u64,
    pub pairs: u64,
}

pub fn dyadic_line_profile(set: &PointSet) -> Vec<DyadicBucket> {
    bisector_classes(set, None).dyadic_profile()
}

/// Bisector energy split by what happens on the `(a, c)` side.
///
/// `full` counts quadruples with both bisectors defined and equal. `same`
/// is the part with `a = c`, `null` the part with `a ≠ c` but
/// `‖a−c‖ = 0`; `diag = same + null` and `work = full − diag`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Energy {
    pub full: u64,
    pub same: u64,
    pub null: u64,
    pub diag: u64,
    pub work: u64,
}

impl Energy {
    pub fn from_pairs(set: &PointSet, pairs: &PairBisectors) -> Self {
        let firsts = pairs.first_points();
        let mut e = Energy::default();
        let has_null = set.field().has_i();
        for class in &firsts {
            let b = class.len() as u64;
            e.full += b * b;
            // b = r_ℓ(a) is determined by a, so first points are distinct
            e.same += b;
            if has_null {
                for (x, &a) in class.iter().enumerate() {
                    for &c in &class[x + 1..] {
                        if qdist(set.get(a), set.get(c)).is_zero() {
                            e.null += 2;
                        }
                    }
                }
            }
        }
        e.diag = e.same + e.null;
        e.work = e.full - e.diag;
        e
    }
}

pub fn bisector_energy(set: &PointSet) -> Energy {
    Energy::from_pairs(set, &PairBisectors::new(set))
}

/// `𝒬_M = |{(a,b,c,d) : (a,b) ∈ R_M, B(a,b) = B(c,d)}|`.
pub fn bisector_energy_m(set: &PointSet, richness: &Richness, cap: u32) -> u64 {
    bisector_classes(set, Some((richness, cap))).energy_m()
}

/// Exact number of pairs `(p, ℓ)` with `p ∈ ℓ`, by checking every pair.
pub fn point_line_incidences(points: &[Point], lines: &[CanonLine]) -> u64 {
    let mut count = 0;
    for l in lines {
        for p in points {
            if l.contains(p) {
                count += 1;
            }
        }
    }
    count
}

/// Same count as [`point_line_incidences`], grouping lines by normal so each
/// point is evaluated once per direction.
pub fn point_line_incidences_bucketed(points: &[Point], lines: &[CanonLine]) -> u64 {
    let mut by_normal: BTreeMap<(&Scalar, &Scalar), BTreeMap<&Scalar, u64>> = BTreeMap::new();
    for l in lines {
        *by_normal.entry((l.alpha(), l.beta())).or_default().entry(l.gamma()).or_insert(0) += 1;
    }
    let mut count = 0;
    for ((alpha, beta), gammas) in &by_normal {
        for p in points {
            let v = *alpha * &p.x + *beta * &p.y;
            count += gammas.get(&v).copied().unwrap_or(0);
        }
    }
    count
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::FieldSpec;
    use crate::geom::canon_line;
    use crate::stats::tests::q_set;

    fn q_line(a: i64, b: i64, c: i64) -> CanonLine {
        let q = FieldSpec::Rational;
        canon_line(&q.int(a), &q.int(b), &q.int(c)).unwrap()
    }

    /// `x = num/den` as a canonical line.
    fn vertical(num: i64, den: i64) -> CanonLine {
        q_line(den, 0, num)
    }

    fn square() -> PointSet {
        q_set(&[(0, 0), (1, 0), (1, 1), (0, 1)])
    }

    fn collinear3() -> PointSet {
        q_set(&[(0, 0), (1, 0), (2, 0)])
    }

    #[test]
    fn classes_collinear() {
        let m = bisector_classes(&collinear3(), None);
        let got: BTreeMap<CanonLine, (u64, u64)> = m.classes.iter().map(|(l, c)| (l.clone(), (c.b, c.i))).collect();
        let expect = BTreeMap::from([(vertical(1, 2), (2, 0)), (vertical(1, 1), (2, 1)), (vertical(3, 2), (2, 0))]);
        assert_eq!(got, expect);
        assert_eq!(m.null_pairs, 0);
    }

    #[test]
    fn classes_unit_square() {
        let m = bisector_classes(&square(), None);
        let b = |l: CanonLine| m.classes[&l].b;
        assert_eq!(b(vertical(1, 2)), 4);
        assert_eq!(b(q_line(0, 2, 1)), 4);
        assert_eq!(b(q_line(1, 1, 1)), 2);
        assert_eq!(b(q_line(1, -1, 0)), 2);
        assert_eq!(m.distinct(), 4);
        assert_eq!(m.sum_b(), 12);
    }

    #[test]
    fn classes_isotropic_pair_only() {
        let f5 = FieldSpec::prime(5).unwrap();
        let set = PointSet::new(f5, alloc::vec![Point::from_ints(f5, 0, 0), Point::from_ints(f5, 1, 2)])
            .unwrap();
        let m = bisector_classes(&set, None);
        assert!(m.classes.is_empty());
        assert_eq!(m.null_pairs, 2);
    }

    #[test]
    fn energy_examples() {
        let two = q_set(&[(0, 0), (2, 0)]);
        let e = bisector_energy(&two);
        assert_eq!((e.full, e.work), (4, 2));
        assert_eq!(bisector_energy(&collinear3()).full, 12);
        assert_eq!(bisector_energy(&square()).full, 40);
    }

    #[test]
    fn dyadic_examples() {
        let d = dyadic_line_profile(&collinear3());
        assert_eq!(d, alloc::vec![DyadicBucket { k: 2, lines: 3, incidences: 1, pairs: 6 }]);
        let d = dyadic_line_profile(&q_set(&[(0, 0), (5, 1)]));
        assert_eq!(d.len(), 1);
        assert_eq!((d[0].k, d[0].lines), (2, 1));
        let d = dyadic_line_profile(&square());
        let ks: Vec<(u64, u64)> = d.iter().map(|b| (b.k, b.lines)).collect();
        assert_eq!(ks, alloc::vec![(2, 2), (4, 2)]);
    }

    #[test]
    fn incidence_examples() {
        let set = collinear3();
        let lines: Vec<CanonLine> = bisector_classes(&set, None).classes.into_keys().collect();
        assert_eq!(point_line_incidences(set.points(), &lines), 1);
        assert_eq!(point_line_incidences_bucketed(set.points(), &lines), 1);

        let f3 = FieldSpec::prime(3).unwrap();
        let grid: Vec<Point> = (0..3).flat_map(|x| (0..3).map(move |y| Point::from_ints(f3, x, y))).collect();
        let rows: Vec<CanonLine> =
            (0..3).map(|c| canon_line(&f3.zero(), &f3.one(), &f3.int(c)).unwrap()).collect();
        assert_eq!(point_line_incidences(&grid, &rows), 9);
        assert_eq!(point_line_incidences_bucketed(&grid, &rows), 9);
        assert_eq!(point_line_incidences(&grid, &[]), 0);
    }
}
