//! Deterministic point-set generators.
//!
//! The rational circle family enumerates `t = 0`, then for `h = 2, 3, …`
//! every `k/h` and `h/k` with `1 ≤ k < h`, `gcd(k, h) = 1`, and maps `t` to
//! `((1−t²)/(1+t²), 2t/(1+t²))`. This order is fixed.

use alloc::collections::BTreeSet;
use alloc::vec::Vec;

use num_integer::Integer;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::field::{FieldSpec, Scalar};
use crate::geom::Point;
use crate::stats::PointSet;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CircleMode {
    Rational(u32),
    Subgroup(u32),
}

/// A point-set family with its parameters.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ConfigSpec {
    Collinear { field: FieldSpec, n: u32 },
    Grid { p: u32, s: u32 },
    CircleRational { n: u32 },
    CircleSubgroup { p: u32 },
    Random { field: FieldSpec, n: u32, seed: u64 },
}

impl ConfigSpec {
    pub fn generate(&self) -> Result<PointSet> {
        match *self {
            ConfigSpec::Collinear { field, n } => gen_collinear(field, n),
            ConfigSpec::Grid { p, s } => gen_grid(p, s),
            ConfigSpec::CircleRational { n } => gen_circle_points(CircleMode::Rational(n)),
            ConfigSpec::CircleSubgroup { p } => gen_circle_points(CircleMode::Subgroup(p)),
            ConfigSpec::Random { field, n, seed } => gen_random(field, n, seed),
        }
    }

    pub fn family(&self) -> &'static str {
        match self {
            ConfigSpec::Collinear { .. } => "collinear",
            ConfigSpec::Grid { .. } => "grid",
            ConfigSpec::CircleRational { .. } => "circle_rational",
            ConfigSpec::CircleSubgroup { .. } => "circle_subgroup",
            ConfigSpec::Random { .. } => "random",
        }
    }
}

fn check_capacity(field: FieldSpec, requested: u64, available: Option<u64>) -> Result<()> {
    if requested == 0 {
        return Err(Error::EmptySet);
    }
    match available {
        Some(available) if requested > available => Err(Error::TooMany { requested, available }),
        _ => {
            let _ = field;
            Ok(())
        }
    }
}

/// `(0,0), (1,0), …, (N−1,0)`.
pub fn gen_collinear(field: FieldSpec, n: u32) -> Result<PointSet> {
    check_capacity(field, u64::from(n), field.modulus().map(u64::from))?;
    let points = (0..i64::from(n)).map(|x| Point::from_ints(field, x, 0)).collect();
    PointSet::new(field, points)
}

/// `{0,…,s−1}²` over `F_p`.
pub fn gen_grid(p: u32, s: u32) -> Result<PointSet> {
    let field = FieldSpec::prime(u64::from(p))?;
    if s == 0 || s > p {
        return Err(Error::BadSize { side: s, p });
    }
    let s = i64::from(s);
    let points = (0..s).flat_map(|x| (0..s).map(move |y| Point::from_ints(field, x, y))).collect();
    PointSet::new(field, points)
}

fn unit_circle_point(t: &Scalar) -> Point {
    let t2 = t.square();
    let one = t.one_like();
    let den = (&one + &t2).invert().expect("1 + t² > 0 over the rationals");
    Point::new((&one - &t2) * &den, t.double() * &den)
}

/// Rational parameters in the documented order.
fn rational_parameters() -> impl Iterator<Item = (i64, i64)> {
    core::iter::once((0, 1)).chain((2i64..).flat_map(|h| {
        (1..h).filter(move |k| k.gcd(&h) == 1).flat_map(move |k| [(k, h), (h, k)])
    }))
}

pub fn gen_circle_points(mode: CircleMode) -> Result<PointSet> {
    match mode {
        CircleMode::Rational(n) => {
            if n == 0 {
                return Err(Error::EmptySet);
            }
            let q = FieldSpec::Rational;
            let points = rational_parameters()
                .take(n as usize)
                .map(|(num, den)| unit_circle_point(&q.ratio(num, den).expect("nonzero denominator")))
                .collect();
            PointSet::new(q, points)
        }
        CircleMode::Subgroup(p) => {
            let field = FieldSpec::prime(u64::from(p))?;
            let one = field.one();
            let mut points = Vec::new();
            for x in field.elements()? {
                let rest = &one - &x.square();
                for y in rest.sqrt_mod()? {
                    points.push(Point::new(x.clone(), y));
                }
            }
            PointSet::new(field, points)
        }
    }
}

/// `N` distinct points from a seeded ChaCha8 stream.
///
/// Over `F_p` small requests use rejection sampling and large ones a shuffle
/// of the whole plane. Over ℚ coordinates are `num/den` with
/// `|num| ≤ max(8, 2N)` and `1 ≤ den ≤ 3`.
pub fn gen_random(field: FieldSpec, n: u32, seed: u64) -> Result<PointSet> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let points = match field.modulus() {
        Some(p) => {
            let p = u64::from(p);
            check_capacity(field, u64::from(n), Some(p * p))?;
            if 2 * u64::from(n) > p * p {
                let mut all: Vec<u64> = (0..p * p).collect();
                all.shuffle(&mut rng);
                all.truncate(n as usize);
                all.into_iter().map(|v| Point::from_ints(field, (v / p) as i64, (v % p) as i64)).collect()
            } else {
                sample_distinct(n, || {
                    let x = rng.gen_range(0..p) as i64;
                    let y = rng.gen_range(0..p) as i64;
                    Point::from_ints(field, x, y)
                })
            }
        }
        None => {
            check_capacity(field, u64::from(n), None)?;
            let bound = i64::from(n.saturating_mul(2).max(8));
            sample_distinct(n, || {
                let mut coord = || {
                    let num = rng.gen_range(-bound..=bound);
                    let den = rng.gen_range(1..=3);
                    field.ratio(num, den).expect("nonzero denominator")
                };
                let x = coord();
                Point::new(x, coord())
            })
        }
    };
    PointSet::new(field, points)
}

fn sample_distinct(n: u32, mut draw: impl FnMut() -> Point) -> Vec<Point> {
    let mut seen = BTreeSet::new();
    let mut out = Vec::with_capacity(n as usize);
    while out.len() < n as usize {
        let p = draw();
        if seen.insert(p.clone()) {
            out.push(p);
        }
    }
    out
}
