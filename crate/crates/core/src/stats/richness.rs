use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use crate::exec::{Executor, Sequential};
use crate::geom::{circumcircle, line_through, Carrier, Circle};

use super::PointSet;

/// Richest line or circle through a pair `(a_i, a_j)` among the circumcircles
/// of `(a_i, a_j, a_k)`. Returns `None` when no such circle exists.
///
/// Non-degenerate circles never contain an isotropic pair, so every point of
/// such a circle is found as a circumcircle partner and the count is exact.
/// Degenerate circles (`r² = 0`) are recounted by incidence.
pub fn circle_richness_for_pair(
    set: &PointSet,
    i: usize,
    j: usize,
    include_degenerate: bool,
) -> Option<(u32, Circle)> {
    let (a, b) = (set.get(i), set.get(j));
    let mut circles: Vec<Circle> = (0..set.len())
        .filter(|&k| k != i && k != j)
        .filter_map(|k| circumcircle(a, b, set.get(k)).ok().flatten())
        .filter(|c| include_degenerate || !c.is_degenerate())
        .collect();
    circles.sort();
    let mut best: Option<(u32, Circle)> = None;
    let mut start = 0;
    while start < circles.len() {
        let mut end = start + 1;
        while end < circles.len() && circles[end] == circles[start] {
            end += 1;
        }
        let circle = &circles[start];
        let count = if circle.is_degenerate() {
            set.points().iter().filter(|p| circle.contains(p)).count() as u32
        } else {
            (end - start) as u32 + 2
        };
        if best.as_ref().is_none_or(|(c, _)| count > *c) {
            best = Some((count, circle.clone()));
        }
        start = end;
    }
    best
}

/// Richness data of a point set: `M`, a witness carrier and, for every pair,
/// the size of the richest line or circle containing it.
#[derive(Clone, Debug)]
pub struct Richness {
    n: usize,
    /// Maximum number of points on one line or circle.
    pub m: u32,
    /// First carrier attaining `m` (lines before circles, pairs in order).
    pub witness: Option<Carrier>,
    pair_rich: Vec<u32>,
    /// Maximum number of points on one isotropic line.
    pub iso_max: u32,
}

impl Richness {
    /// Points on the richest carrier through `a_i` and `a_j`.
    pub fn pair_richness(&self, i: usize, j: usize) -> u32 {
        self.pair_rich[i * self.n + j]
    }

    /// Whether `(a_i, a_j) ∈ R_cap`, i.e. no line or circle with more than
    /// `cap` points contains both.
    pub fn in_rm(&self, i: usize, j: usize, cap: u32) -> bool {
        self.pair_richness(i, j) <= cap
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }
}

/// Number of ordered pairs `(a, b)`, `a ≠ b`, in `R_cap`.
pub fn pair_count(rich: &Richness, cap: u32) -> u64 {
    let n = rich.len();
    let mut count = 0;
    for i in 0..n {
        for j in 0..n {
            if i != j && rich.in_rm(i, j, cap) {
                count += 1;
            }
        }
    }
    count
}

pub fn max_richness(set: &PointSet) -> Richness {
    max_richness_with(set, false, &Sequential)
}

pub fn max_richness_with(set: &PointSet, include_degenerate: bool, exec: &impl Executor) -> Richness {
    let n = set.len();

    // unordered pairs per line; a line with k points carries k(k-1)/2
    let mut line_pairs: BTreeMap<_, u64> = BTreeMap::new();
    let mut pair_line = Vec::with_capacity(n * n.saturating_sub(1) / 2);
    for i in 0..n {
        for j in i + 1..n {
            let l = line_through(set.get(i), set.get(j)).expect("points are distinct");
            *line_pairs.entry(l.clone()).or_insert(0) += 1;
            pair_line.push(l);
        }
    }
    let points_on = |pairs: u64| -> u32 {
        let mut k = 2u64;
        while k * (k - 1) / 2 < pairs {
            k += 1;
        }
        k as u32
    };
    let iso_max = line_pairs
        .iter()
        .filter(|(l, _)| l.is_isotropic())
        .map(|(_, &c)| points_on(c))
        .max()
        .unwrap_or(0);

    let circle_rows: Vec<Vec<Option<(u32, Circle)>>> = exec.map(n, |i| {
        (i + 1..n).map(|j| circle_richness_for_pair(set, i, j, include_degenerate)).collect()
    });

    let mut pair_rich = alloc::vec![0u32; n * n];
    let mut m = u32::from(n == 1);
    let mut witness = None;
    let mut idx = 0;
    for i in 0..n {
        for j in i + 1..n {
            let l = &pair_line[idx];
            idx += 1;
            let count = points_on(line_pairs[l]);
            pair_rich[i * n + j] = count;
            pair_rich[j * n + i] = count;
            if count > m {
                m = count;
                witness = Some(Carrier::Line(l.clone()));
            }
        }
    }
    for (i, row) in circle_rows.into_iter().enumerate() {
        for (off, best) in row.into_iter().enumerate() {
            let j = i + 1 + off;
            if let Some((count, circle)) = best {
                let cell = &mut pair_rich[i * n + j];
                *cell = (*cell).max(count);
                pair_rich[j * n + i] = pair_rich[i * n + j];
                if count > m {
                    m = count;
                    witness = Some(Carrier::Circle(circle));
                }
            }
        }
    }
    Richness { n, m, witness, pair_rich, iso_max }
}
