//! The `verify` suite: exhaustive and sampled checks of the geometric facts
//! the counting kernels rely on. Every check reports how many cases it
//! examined and how many failed.

use std::collections::{BTreeMap, BTreeSet};

use bisector_core::config::gen_random;
use bisector_core::geom::{bisector, canon_line, is_isotropic_direction, qdist};
use bisector_core::isometry::{compose_reflections, reflect};
use bisector_core::stats::{bisector_energy, distance_multiplicities, isosceles_counts, ReportOptions, StatsReport};
use bisector_core::variety::{
    complete_quadruple, incidence_counts, literal_membership, pair_intersection_structure, variety_membership,
    Degeneracy, Membership,
};
use bisector_core::{CanonLine, ConfigSpec, Executor, FieldSpec, IsometryClass, Point, PointSet, Scalar, Sequential, VarietyKey};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LemmaResult {
    pub name: String,
    pub cases: u64,
    pub failures: u64,
    pub detail: String,
}

impl LemmaResult {
    pub fn ok(&self) -> bool {
        self.failures == 0 && self.cases > 0
    }

    pub fn to_json(&self) -> Value {
        json!({"name": self.name, "cases": self.cases, "failures": self.failures, "ok": self.ok(), "detail": self.detail})
    }
}

#[derive(Default)]
struct Tally {
    cases: u64,
    failures: u64,
    first_failure: Option<String>,
}

impl Tally {
    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.cases += 1;
        if !ok {
            self.failures += 1;
            if self.first_failure.is_none() {
                self.first_failure = Some(what());
            }
        }
    }

    fn merge(&mut self, other: Tally) {
        self.cases += other.cases;
        self.failures += other.failures;
        if self.first_failure.is_none() {
            self.first_failure = other.first_failure;
        }
    }

    fn finish(self, name: impl Into<String>, detail: impl Into<String>) -> LemmaResult {
        let detail = match self.first_failure {
            Some(f) => format!("first failure: {f}"),
            None => detail.into(),
        };
        LemmaResult { name: name.into(), cases: self.cases, failures: self.failures, detail }
    }
}

fn field(p: u32) -> FieldSpec {
    FieldSpec::prime(u64::from(p)).expect("suite primes are odd primes")
}

pub fn all_points(p: u32) -> Vec<Point> {
    let f = field(p);
    let p = i64::from(p);
    (0..p).flat_map(|x| (0..p).map(move |y| Point::from_ints(f, x, y))).collect()
}

/// All `p² + p` lines of `F_p²`.
pub fn all_lines(p: u32) -> Vec<CanonLine> {
    let f = field(p);
    let p = i64::from(p);
    let mut lines = Vec::new();
    for beta in 0..p {
        for gamma in 0..p {
            lines.push(canon_line(&f.one(), &f.int(beta), &f.int(gamma)).unwrap());
        }
    }
    for gamma in 0..p {
        lines.push(canon_line(&f.zero(), &f.one(), &f.int(gamma)).unwrap());
    }
    lines
}

fn odd_primes_below(n: u32) -> Vec<u32> {
    (3..n).filter(|&k| (2..k).take_while(|d| d * d <= k).all(|d| k % d != 0)).collect()
}

/// `√−1 ∈ F_p` exactly when `p ≡ 1 mod 4`, and the roots square to `−1`.
pub fn sqrt_minus_one() -> LemmaResult {
    let mut t = Tally::default();
    for p in odd_primes_below(100) {
        let f = field(p);
        let minus_one = f.int(-1);
        let roots = minus_one.sqrt_mod().unwrap();
        let expect = if p % 4 == 1 { 2 } else { 0 };
        t.check(roots.len() == expect && roots.iter().all(|r| r.square() == minus_one), || format!("p = {p}"));
        t.check(f.has_i() == (p % 4 == 1), || format!("has_i at p = {p}"));
    }
    t.finish("sqrt_minus_one", "odd primes below 100")
}

/// `a ≠ b`, `‖a−b‖ = 0` imply `‖a‖ = ‖b‖ = 0` or `‖a‖ ≠ ‖b‖`.
pub fn no011_triangle(p: u32) -> LemmaResult {
    let pts = all_points(p);
    let mut t = Tally::default();
    for a in &pts {
        for b in &pts {
            if a == b || !qdist(a, b).is_zero() {
                continue;
            }
            let (na, nb) = (a.norm(), b.norm());
            t.check((na.is_zero() && nb.is_zero()) || na != nb, || format!("a = {a}, b = {b}"));
        }
    }
    t.finish(format!("no011_triangle_p{p}"), "all pairs with ‖a−b‖ = 0")
}

/// `a ≠ b`, `‖a‖ = ‖b‖ ≠ 0`, `c ≠ 0` isotropic imply `‖a−c‖ ≠ ‖b−c‖`.
pub fn no_isotropic_bisector(p: u32) -> LemmaResult {
    let pts = all_points(p);
    let iso: Vec<&Point> = pts.iter().filter(|c| !c.is_zero() && c.norm().is_zero()).collect();
    let mut by_norm: BTreeMap<Scalar, Vec<&Point>> = BTreeMap::new();
    for a in &pts {
        let n = a.norm();
        if !n.is_zero() {
            by_norm.entry(n).or_default().push(a);
        }
    }
    let mut t = Tally::default();
    for class in by_norm.values() {
        for a in class {
            for b in class {
                if a == b {
                    continue;
                }
                for c in &iso {
                    t.check(qdist(a, c) != qdist(b, c), || format!("a = {a}, b = {b}, c = {c}"));
                }
            }
        }
    }
    t.finish(format!("no_isotropic_bisector_p{p}"), format!("{} isotropic vectors", iso.len()))
}

/// Every perpendicular bisector is non-isotropic.
pub fn bisectors_not_isotropic(p: u32) -> LemmaResult {
    let pts = all_points(p);
    let mut t = Tally::default();
    for a in &pts {
        for b in &pts {
            if let Ok(l) = bisector(a, b) {
                let dir = is_isotropic_direction(&l.direction()).unwrap();
                t.check(!l.is_isotropic() && !dir, || format!("B({a}, {b}) = {l}"));
            }
        }
    }
    t.finish(format!("bisector_not_isotropic_p{p}"), "all pairs with a defined bisector")
}

/// For `‖a−b‖ ≠ 0` and non-isotropic `ℓ`: `r_ℓ(a) = b` iff `ℓ = B(a,b)`.
///
/// Every `(a, ℓ)` is reflected once; the image must be `a` itself when
/// `a ∈ ℓ` and otherwise a point whose bisector with `a` is `ℓ`. Counting
/// images per pair then shows each admissible pair arises from exactly one
/// line and no null pair arises at all.
pub fn reflection_bisector(p: u32) -> LemmaResult {
    let pts = all_points(p);
    let lines: Vec<CanonLine> = all_lines(p).into_iter().filter(|l| !l.is_isotropic()).collect();
    let index: BTreeMap<&Point, usize> = pts.iter().enumerate().map(|(i, q)| (q, i)).collect();
    let n = pts.len();
    let mut hits = vec![0u32; n * n];
    let mut t = Tally::default();
    for (i, a) in pts.iter().enumerate() {
        for l in &lines {
            let b = reflect(l, a).unwrap();
            if l.contains(a) {
                t.check(b == *a, || format!("{a} on {l} moved to {b}"));
            } else {
                let ok = b != *a && !qdist(a, &b).is_zero() && bisector(a, &b).ok().as_ref() == Some(l);
                t.check(ok, || format!("r_{l}({a}) = {b}"));
                hits[i * n + index[&b]] += 1;
            }
        }
    }
    for (i, a) in pts.iter().enumerate() {
        for (j, b) in pts.iter().enumerate() {
            if i == j {
                continue;
            }
            let expect = u32::from(!qdist(a, b).is_zero());
            t.check(hits[i * n + j] == expect, || format!("{} lines carry {a} to {b}", hits[i * n + j]));
        }
    }
    t.finish(format!("reflection_bisector_p{p}"), format!("{} non-isotropic lines", lines.len()))
}

/// Two isotropic lines through each point iff `p ≡ 1 mod 4`, none otherwise,
/// and `p² + p` lines in total.
pub fn isotropic_line_counts(p: u32) -> LemmaResult {
    let lines = all_lines(p);
    let mut t = Tally::default();
    let total = u64::from(p) * u64::from(p) + u64::from(p);
    t.check(lines.len() as u64 == total, || format!("{} lines", lines.len()));
    let distinct: BTreeSet<&CanonLine> = lines.iter().collect();
    t.check(distinct.len() == lines.len(), || String::from("duplicate canonical lines"));
    let expect = if p % 4 == 1 { 2 } else { 0 };
    for a in all_points(p) {
        let count = lines.iter().filter(|l| l.is_isotropic() && l.contains(&a)).count();
        t.check(count == expect, || format!("{count} isotropic lines through {a}"));
    }
    t.finish(format!("isotropic_lines_p{p}"), format!("{expect} per point"))
}

/// `r_ℓ ∘ r_ℓ′` is the identity, a translation or a rotation about
/// `ℓ ∩ ℓ′` according to whether the lines agree, are parallel or meet.
pub fn reflection_composition(p: u32) -> LemmaResult {
    let lines: Vec<CanonLine> = all_lines(p).into_iter().filter(|l| !l.is_isotropic()).collect();
    let pts = all_points(p);
    let mut t = Tally::default();
    for l in &lines {
        for l2 in &lines {
            let tau = compose_reflections(l, l2).unwrap();
            let class_ok = match tau.class() {
                IsometryClass::Identity => l == l2,
                IsometryClass::Translation => l != l2 && l.is_parallel(l2),
                IsometryClass::Rotation { fixed_point } => l.intersect(l2).as_ref() == Some(fixed_point),
                IsometryClass::Reflection { .. } => false,
            };
            let det_ok = tau.determinant().is_one();
            let agrees = pts.iter().all(|x| tau.apply(x) == reflect(l, &reflect(l2, x).unwrap()).unwrap());
            t.check(class_ok && det_ok && agrees, || format!("{l} ∘ {l2} gave {tau}"));
        }
    }
    t.finish(format!("reflection_composition_p{p}"), "all ordered pairs of non-isotropic lines")
}

fn random_key_pair(pts: &[Point], rng: &mut ChaCha8Rng) -> (VarietyKey, VarietyKey) {
    loop {
        let a = pts.choose(rng).unwrap();
        let c = pts.choose(rng).unwrap();
        let Ok(v) = VarietyKey::new(a.clone(), c.clone()) else { continue };
        let a2 = pts.choose(rng).unwrap();
        let partners: Vec<&Point> = pts.iter().filter(|c2| qdist(a2, c2) == *v.r()).collect();
        let Some(c2) = partners.choose(rng) else { continue };
        let v2 = VarietyKey::new(a2.clone(), (*c2).clone()).unwrap();
        if v2 != v {
            return (v, v2);
        }
    }
}

/// `S_ac ∩ S_a′c′` lies in the classified carrier product; checked by
/// enumerating all of `F_p⁴` for each sampled key pair.
pub fn intersection_containment(p: u32, pairs: usize, seed: u64, exec: &impl Executor) -> LemmaResult {
    let pts = all_points(p);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let keys: Vec<(VarietyKey, VarietyKey)> = (0..pairs).map(|_| random_key_pair(&pts, &mut rng)).collect();
    let tallies = exec.map(keys.len(), |k| {
        let (v, v2) = &keys[k];
        let mut t = Tally::default();
        let s = match pair_intersection_structure(v, v2) {
            Ok(s) => s,
            Err(e) => {
                t.check(false, || format!("{e} for ({}, {}) / ({}, {})", v.a(), v.c(), v2.a(), v2.c()));
                return (t, 0u64, None);
            }
        };
        let first = s.first_side();
        let second = s.second_side();
        t.check(first.contains(v.a()) && first.contains(v2.a()), || format!("first carrier misses a or a′: {s:?}"));
        t.check(second.contains(v.c()) && second.contains(v2.c()), || format!("second carrier misses c or c′: {s:?}"));
        let mut members = 0;
        for b in &pts {
            for d in &pts {
                if variety_membership(v, b, d).is_member() && variety_membership(v2, b, d).is_member() {
                    members += 1;
                    t.check(s.contains(b, d), || format!("({b}, {d}) outside {s:?}"));
                }
            }
        }
        (t, members, Some(s.kind()))
    });
    let mut total = Tally::default();
    let mut members = 0;
    let mut kinds: BTreeMap<&str, u32> = BTreeMap::new();
    for (t, m, kind) in tallies {
        total.merge(t);
        members += m;
        if let Some(kind) = kind {
            *kinds.entry(kind).or_default() += 1;
        }
    }
    let kinds: Vec<String> = kinds.iter().map(|(k, c)| format!("{k} {c}")).collect();
    let detail = format!("{pairs} key pairs, {members} common members, {}", kinds.join(", "));
    total.finish(format!("intersection_containment_p{p}"), detail)
}

/// All keys `(a, c)` over `F_p` with `‖a−c‖ ≠ 0`, and for each the indices
/// `b·p² + d` of its generic members.
fn generic_members(pts: &[Point], exec: &impl Executor) -> (Vec<VarietyKey>, Vec<Vec<usize>>) {
    let keys: Vec<VarietyKey> = pts
        .iter()
        .flat_map(|a| pts.iter().filter_map(move |c| VarietyKey::new(a.clone(), c.clone()).ok()))
        .collect();
    let n = pts.len();
    let members = exec.map(keys.len(), |k| {
        let mut out = Vec::new();
        for (i, b) in pts.iter().enumerate() {
            for (j, d) in pts.iter().enumerate() {
                if variety_membership(&keys[k], b, d) == Membership::Member(Degeneracy::None) {
                    out.push(i * n + j);
                }
            }
        }
        out
    });
    (keys, members)
}

/// For distinct keys `v₁, v₂, v₃` sharing a generic member, the three pairwise
/// `b`-carriers either coincide or the common generic members use at most two
/// values of `b`. Every `x ∈ F_p⁴` is visited; triples through it are sampled.
pub fn triple_dichotomy(p: u32, triples_per_point: usize, seed: u64, exec: &impl Executor) -> LemmaResult {
    let pts = all_points(p);
    let n = pts.len();
    let (keys, members) = generic_members(&pts, exec);
    let mut through: Vec<Vec<usize>> = vec![Vec::new(); n * n];
    for (k, ms) in members.iter().enumerate() {
        for &x in ms {
            through[x].push(k);
        }
    }
    let results = exec.map(n * n, |x| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ (x as u64).wrapping_mul(0x9e37_79b9_7f4a_7c15));
        let ks = &through[x];
        let mut t = Tally::default();
        let (mut same, mut split) = (0u64, 0u64);
        if ks.len() < 3 {
            return (t, same, split);
        }
        for _ in 0..triples_per_point {
            let mut pick: Vec<usize> = ks.choose_multiple(&mut rng, 3).copied().collect();
            pick.sort_unstable();
            let [v1, v2, v3] = [&keys[pick[0]], &keys[pick[1]], &keys[pick[2]]];
            let sides: Vec<_> = [(v1, v2), (v1, v3), (v2, v3)]
                .iter()
                .map(|(u, w)| pair_intersection_structure(u, w).map(|s| s.first_side()))
                .collect();
            let Ok(sides) = sides.into_iter().collect::<Result<Vec<_>, _>>() else {
                t.check(false, || format!("unclassifiable triple at x = {x}"));
                continue;
            };
            if sides[0] == sides[1] && sides[1] == sides[2] {
                same += 1;
                t.check(true, String::new);
                continue;
            }
            split += 1;
            let common: BTreeSet<usize> = members[pick[0]]
                .iter()
                .filter(|y| members[pick[1]].binary_search(y).is_ok() && members[pick[2]].binary_search(y).is_ok())
                .map(|y| y / n)
                .collect();
            t.check(common.len() <= 2, || {
                format!("{} values of b for keys ({}, {}), ({}, {}), ({}, {})", common.len(), v1.a(), v1.c(), v2.a(), v2.c(), v3.a(), v3.c())
            });
        }
        (t, same, split)
    });
    let mut total = Tally::default();
    let (mut same, mut split) = (0, 0);
    for (t, s, sp) in results {
        total.merge(t);
        same += s;
        split += sp;
    }
    total.finish(format!("triple_dichotomy_p{p}"), format!("{same} identical-carrier triples, {split} split triples"))
}

/// For fixed `a` and `(b, d)` at most one `c` makes `(b, d)` a generic member
/// of `S_ac`, and it is the completion `r_{B(a,b)}(d)`.
pub fn completion_injectivity(p: u32) -> LemmaResult {
    let pts = all_points(p);
    let mut t = Tally::default();
    for a in &pts {
        for b in &pts {
            for d in &pts {
                let cs: Vec<&Point> = pts
                    .iter()
                    .filter(|c| {
                        VarietyKey::new(a.clone(), (*c).clone())
                            .is_ok_and(|k| variety_membership(&k, b, d) == Membership::Member(Degeneracy::None))
                    })
                    .collect();
                let ok = match cs.as_slice() {
                    [] => true,
                    [c] => complete_quadruple(a, b, d).ok().as_ref() == Some(*c),
                    _ => false,
                };
                t.check(ok, || format!("a = {a}, b = {b}, d = {d}: {} completions", cs.len()));
            }
        }
    }
    t.finish(format!("completion_injectivity_p{p}"), "all (a, b, d)")
}

/// The printed definition and the reflection reading agree on the generic
/// and `b = a` parts; the printed third set contains every `d = c` member.
pub fn literal_conformance(p: u32) -> LemmaResult {
    let pts = all_points(p);
    let mut t = Tally::default();
    let mut extra = 0u64;
    for a in &pts {
        for c in &pts {
            let Ok(k) = VarietyKey::new(a.clone(), c.clone()) else { continue };
            for b in &pts {
                for d in &pts {
                    let m = variety_membership(&k, b, d);
                    let lit = literal_membership(&k, b, d);
                    let generic = m == Membership::Member(Degeneracy::None);
                    let left = m == Membership::Member(Degeneracy::Left);
                    let right = m == Membership::Member(Degeneracy::Right);
                    t.check(generic == lit[0] && left == lit[1] && (!right || lit[2]), || {
                        format!("key ({a}, {c}), ({b}, {d}): {m:?} vs {lit:?}")
                    });
                    if lit[2] && !right && !generic {
                        extra += 1;
                    }
                }
            }
        }
    }
    t.finish(
        format!("literal_conformance_p{p}"),
        format!("{extra} pairs only in the printed third set (d ≠ c on B(a,b))"),
    )
}

/// Direct O(N⁴) bisector energy: quadruples with both bisectors defined and equal.
pub fn quadruple_energy(set: &PointSet) -> u64 {
    let pts = set.points();
    let mut q = 0;
    for a in pts {
        for b in pts {
            let Ok(l) = bisector(a, b) else { continue };
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

/// Direct O(N³) isosceles count `(𝒯, 𝒯_strict)`.
pub fn triple_isosceles(set: &PointSet) -> (u64, u64) {
    let pts = set.points();
    let (mut total, mut strict) = (0, 0);
    for a in pts {
        for b in pts {
            let r = qdist(a, b);
            if r.is_zero() {
                continue;
            }
            for c in pts {
                if qdist(a, c) == r {
                    total += 1;
                    strict += u64::from(b != c);
                }
            }
        }
    }
    (total, strict)
}

/// The random test sets used by the oracle checks: a fixed cycle over
/// ℚ, `F_5` and `F_13` with sizes `2..=max_n`.
pub fn oracle_sets(count: usize, max_n: u32, seed: u64) -> Vec<PointSet> {
    let fields = [FieldSpec::Rational, field(5), field(13)];
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|i| {
            let f = fields[i % fields.len()];
            let n = rng.gen_range(2..=max_n);
            gen_random(f, n, rng.gen()).expect("sizes fit the fields")
        })
        .collect()
}

pub fn energy_oracle(sets: &[PointSet], exec: &impl Executor) -> LemmaResult {
    let tallies = exec.map(sets.len(), |i| {
        let set = &sets[i];
        let mut t = Tally::default();
        let e = bisector_energy(set);
        let q = quadruple_energy(set);
        t.check(e.full == q, || format!("set {i}: classes {} vs quadruples {q}", e.full));
        let (total, strict) = triple_isosceles(set);
        let iso = isosceles_counts(set);
        t.check((iso.total, iso.strict) == (total, strict), || format!("set {i}: isosceles mismatch"));
        t
    });
    let mut total = Tally::default();
    tallies.into_iter().for_each(|t| total.merge(t));
    total.finish("energy_oracle", format!("{} random sets", sets.len()))
}

pub fn incidence_oracle(sets: &[PointSet], exec: &impl Executor) -> LemmaResult {
    let tallies = exec.map(sets.len(), |i| {
        let set = &sets[i];
        let mut t = Tally::default();
        let work = bisector_energy(set).work;
        let sum: u64 = distance_multiplicities(set)
            .nonzero
            .keys()
            .map(|r| incidence_counts(set, r, None).unwrap().nondeg)
            .sum();
        t.check(sum == work, || format!("set {i}: Σ I = {sum} vs 𝒬_work = {work}"));
        t
    });
    let mut total = Tally::default();
    tallies.into_iter().for_each(|t| total.merge(t));
    total.finish("incidence_oracle", format!("{} random sets", sets.len()))
}

/// Every report-time identity and inequality on the generator families and
/// the oracle sets.
pub fn report_checks(sets: &[PointSet], exec: &impl Executor) -> LemmaResult {
    let families = [
        ConfigSpec::Collinear { field: FieldSpec::Rational, n: 12 },
        ConfigSpec::Collinear { field: field(13), n: 13 },
        ConfigSpec::Grid { p: 5, s: 5 },
        ConfigSpec::Grid { p: 7, s: 4 },
        ConfigSpec::CircleRational { n: 12 },
        ConfigSpec::CircleSubgroup { p: 13 },
        ConfigSpec::Random { field: field(13), n: 30, seed: 1 },
        ConfigSpec::Random { field: FieldSpec::Rational, n: 20, seed: 2 },
    ];
    let mut all: Vec<PointSet> = families.iter().map(|s| s.generate().unwrap()).collect();
    all.extend_from_slice(sets);
    let tallies = exec.map(all.len(), |i| {
        let mut t = Tally::default();
        let r = StatsReport::compute_with(&all[i], &ReportOptions::default(), &Sequential).unwrap();
        for c in &r.checks {
            t.check(c.ok, || format!("set {i}: {} ({})", c.name, c.detail));
        }
        t
    });
    let mut total = Tally::default();
    tallies.into_iter().for_each(|t| total.merge(t));
    total.finish("report_checks", format!("{} sets", all.len()))
}

/// Exhaustive lemmas over `F_p²` used by the acceptance suite.
pub fn exhaustive_lemmas(p: u32) -> Vec<LemmaResult> {
    vec![no011_triangle(p), no_isotropic_bisector(p), bisectors_not_isotropic(p), reflection_bisector(p)]
}

pub fn run_suite(exec: &impl Executor) -> Vec<LemmaResult> {
    let mut out = vec![sqrt_minus_one()];
    for p in [5, 13] {
        out.extend(exhaustive_lemmas(p));
    }
    for p in [3, 5, 7, 13] {
        out.push(isotropic_line_counts(p));
    }
    out.push(reflection_composition(5));
    out.push(reflection_composition(7));
    out.push(intersection_containment(5, 60, 11, exec));
    out.push(intersection_containment(13, 60, 13, exec));
    out.push(triple_dichotomy(5, 8, 17, exec));
    out.push(completion_injectivity(5));
    out.push(literal_conformance(5));
    let sets = oracle_sets(60, 8, 23);
    out.push(energy_oracle(&sets, exec));
    out.push(incidence_oracle(&sets, exec));
    out.push(report_checks(&sets, exec));
    out
}

pub fn suite_json(results: &[LemmaResult]) -> Value {
    let ok = results.iter().all(LemmaResult::ok);
    json!({
        "lemmas": results.iter().map(LemmaResult::to_json).collect::<Vec<_>>(),
        "status": if ok { "ok" } else { "violated" },
    })
}
