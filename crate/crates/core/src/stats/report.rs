use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::error::Result;
use crate::exec::Executor;
use crate::field::FieldSpec;
use crate::geom::{Carrier, Point};
use crate::variety::{all_incidence_counts, DistanceIncidences};

use super::classes::{BisectorClassMap, DyadicBucket, Energy, PairBisectors};
use super::richness::max_richness_with;
use super::{null_apex_triples, pin_profiles_with, DistanceMultiplicities, Isosceles, PinnedDistances, PointSet};

pub type IncidenceRecord = DistanceIncidences;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct ReportOptions {
    /// Cap for `𝒬_M` and `I_M`; defaults to the richness `M` of the set.
    pub cap: Option<u32>,
    pub include_degenerate: bool,
}

/// One identity or inequality re-checked on the computed report.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Check {
    pub name: &'static str,
    pub ok: bool,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StatsReport {
    pub field: FieldSpec,
    pub n: usize,
    pub distances: DistanceMultiplicities,
    /// `Δ(A)`, the value 0 included.
    pub delta: usize,
    pub pinned: PinnedDistances,
    pub pin_point: Point,
    pub energy: Energy,
    pub cap: u32,
    pub q_m: u64,
    pub isosceles: Isosceles,
    /// Triples with `a ∈ B(b,c)` and `‖a−b‖ = ‖a−c‖ = 0`, which `Σ i·b`
    /// counts but `𝒯_strict` does not.
    pub null_apex: u64,
    pub sum_mr2: u128,
    pub m: u32,
    pub witness: Option<Carrier>,
    pub iso_max: u32,
    pub distinct_bisectors: usize,
    pub null_pairs: u64,
    pub sum_ib: u64,
    pub dyadic: Vec<DyadicBucket>,
    pub incidences: Vec<IncidenceRecord>,
    pub checks: Vec<Check>,
}

impl StatsReport {
    pub fn compute_with(set: &PointSet, opts: &ReportOptions, exec: &impl Executor) -> Result<Self> {
        let profiles = pin_profiles_with(set, exec);
        let pinned = PinnedDistances::from_profiles(&profiles)?;
        let distances = DistanceMultiplicities::from_profiles(&profiles);
        let isosceles = Isosceles::from_profiles(&profiles);
        let richness = max_richness_with(set, opts.include_degenerate, exec);
        let cap = opts.cap.unwrap_or(richness.m);
        let bisectors = PairBisectors::new_with(set, exec);
        let classes = BisectorClassMap::build(set, &bisectors, Some((&richness, cap)), exec);
        let energy = Energy::from_pairs(set, &bisectors);
        let incidences = all_incidence_counts(set, &bisectors, Some((&richness, cap)), exec);

        let mut report = StatsReport {
            field: set.field(),
            n: set.len(),
            delta: distances.distinct(),
            sum_mr2: distances.sum_squares(),
            distances,
            pin_point: set.get(pinned.pin).clone(),
            pinned,
            energy,
            cap,
            q_m: classes.energy_m(),
            isosceles,
            null_apex: null_apex_triples(set, exec),
            m: richness.m,
            witness: richness.witness.clone(),
            iso_max: richness.iso_max,
            distinct_bisectors: classes.distinct(),
            null_pairs: classes.null_pairs,
            sum_ib: classes.sum_ib(),
            dyadic: classes.dyadic_profile(),
            incidences,
            checks: Vec::new(),
        };
        report.checks = report.run_checks(&classes);
        Ok(report)
    }

    pub fn is_ok(&self) -> bool {
        self.checks.iter().all(|c| c.ok)
    }

    pub fn status(&self) -> &'static str {
        if self.is_ok() {
            "ok"
        } else {
            "violated"
        }
    }

    fn run_checks(&self, classes: &BisectorClassMap) -> Vec<Check> {
        let n = self.n as u64;
        let n2 = n * n;
        let sum_m: u64 = self.distances.nonzero.values().sum();
        let sum_b = classes.sum_b();
        let q = self.energy.full;
        let t = self.isosceles.total;
        let mut checks = Vec::new();
        let mut push = |name, ok, detail: String| checks.push(Check { name, ok, detail });

        push("pair_total", sum_m + self.distances.zero == n2, format!("{} + {} vs {}", sum_m, self.distances.zero, n2));
        push("diagonal_zero", self.distances.zero >= n, format!("m_0 = {} vs N = {}", self.distances.zero, n));
        push(
            "bisector_pairs",
            sum_b + self.null_pairs == n2 - n,
            format!("{} + {} vs {}", sum_b, self.null_pairs, n2 - n),
        );
        let odd = classes.classes.values().filter(|c| c.b % 2 == 1).count();
        push("even_classes", odd == 0, format!("{} odd classes", odd));
        let iso_keys = classes.classes.keys().filter(|l| l.is_isotropic()).count();
        push("no_isotropic_bisector", iso_keys == 0, format!("{} isotropic keys", iso_keys));
        let nt = u128::from(n) * u128::from(t);
        push("sum_mr2_le_nt", self.sum_mr2 <= nt, format!("{} vs {}", self.sum_mr2, nt));
        push(
            "t_strict_identity",
            self.isosceles.strict + self.null_apex == self.sum_ib,
            format!("{} + {} vs {}", self.isosceles.strict, self.null_apex, self.sum_ib),
        );
        let bucket_ok = self.dyadic.iter().all(|bk| {
            n2 >= sum_b && sum_b >= bk.k * bk.lines && bk.pairs >= bk.k * bk.lines && q >= bk.k * bk.k * bk.lines
        });
        push("dyadic_bounds", bucket_ok, format!("{} buckets", self.dyadic.len()));
        let k1 = self.dyadic.iter().any(|bk| bk.k == 1);
        push("dyadic_k1_empty", !k1, String::from(if k1 { "k = 1 bucket present" } else { "empty" }));
        let sum_i: u64 = self.incidences.iter().map(|r| r.counts.nondeg).sum();
        push("energy_incidence", sum_i == self.energy.work, format!("{} vs {}", sum_i, self.energy.work));
        push("q_m_le_q", self.q_m <= q, format!("{} vs {}", self.q_m, q));

        if self.field == FieldSpec::Rational && self.m > 0 {
            let need = (n - 1).div_ceil(u64::from(self.m));
            let have = self.pinned.min_no_zero as u64;
            push("pigeonhole_pin", have >= need, format!("min pin {} vs {}", have, need));
        }
        let bracket = n as i128 - 2 * i128::from(self.iso_max) - 1;
        if bracket > 0 {
            let lhs = self.pinned.no_zero as u128 * u128::from(t);
            let rhs = u128::from(n) * (bracket * bracket) as u128;
            push("pin_chain", lhs >= rhs, format!("{} vs {}", lhs, rhs));
        }
        checks
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exec::Sequential;
    use crate::stats::tests::q_set;

    fn report(coords: &[(i64, i64)], cap: Option<u32>) -> StatsReport {
        let opts = ReportOptions { cap, include_degenerate: false };
        StatsReport::compute_with(&q_set(coords), &opts, &Sequential).unwrap()
    }

    #[test]
    fn collinear_three_values() {
        let r = report(&[(0, 0), (1, 0), (2, 0)], None);
        assert!(r.is_ok(), "{:?}", r.checks);
        assert_eq!(r.energy.full, 12);
        assert_eq!((r.isosceles.total, r.isosceles.strict), (8, 2));
        assert_eq!(r.m, 3);
        assert_eq!(r.pinned.no_zero, 2);
        assert_eq!(r.distinct_bisectors, 3);
        assert_eq!(r.q_m, 12);
        assert_eq!(report(&[(0, 0), (1, 0), (2, 0)], Some(2)).q_m, 0);
    }

    #[test]
    fn unit_square_values() {
        let r = report(&[(0, 0), (1, 0), (1, 1), (0, 1)], None);
        assert!(r.is_ok(), "{:?}", r.checks);
        assert_eq!(
            (r.energy.full, r.isosceles.total, r.isosceles.strict, r.m, r.pinned.no_zero, r.distinct_bisectors),
            (40, 20, 8, 4, 2, 4)
        );
        assert_eq!(r.sum_mr2, 80);
        assert_eq!(report(&[(0, 0), (1, 0), (1, 1), (0, 1)], Some(3)).q_m, 0);
    }
}
