//! Points, the quadratic form and canonical lines and circles.

use core::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::field::{FieldSpec, Scalar};

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Point {
    pub x: Scalar,
    pub y: Scalar,
}

impl Point {
    pub fn new(x: Scalar, y: Scalar) -> Self {
        assert_eq!(x.field(), y.field(), "point coordinates from different fields");
        Point { x, y }
    }

    pub fn from_ints(field: FieldSpec, x: i64, y: i64) -> Self {
        Point { x: field.int(x), y: field.int(y) }
    }

    pub fn origin(field: FieldSpec) -> Self {
        Point::from_ints(field, 0, 0)
    }

    pub fn field(&self) -> FieldSpec {
        self.x.field()
    }

    pub fn is_zero(&self) -> bool {
        self.x.is_zero() && self.y.is_zero()
    }

    pub fn add(&self, o: &Point) -> Point {
        Point { x: &self.x + &o.x, y: &self.y + &o.y }
    }

    pub fn sub(&self, o: &Point) -> Point {
        Point { x: &self.x - &o.x, y: &self.y - &o.y }
    }

    pub fn scale(&self, k: &Scalar) -> Point {
        Point { x: &self.x * k, y: &self.y * k }
    }

    pub fn dot(&self, o: &Point) -> Scalar {
        &self.x * &o.x + &self.y * &o.y
    }

    /// `‖v‖ = v·v`.
    pub fn norm(&self) -> Scalar {
        self.dot(self)
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

/// The algebraic distance `‖a−b‖ = (a₁−b₁)² + (a₂−b₂)²`.
pub fn qdist(a: &Point, b: &Point) -> Scalar {
    let dx = &a.x - &b.x;
    let dy = &a.y - &b.y;
    dx.square() + dy.square()
}

pub fn is_isotropic_direction(v: &Point) -> Result<bool> {
    if v.is_zero() {
        return Err(Error::ZeroVector);
    }
    Ok(v.norm().is_zero())
}

/// The line `αx + βy = γ` in canonical form.
///
/// Over `F_p` the first nonzero of `(α, β)` is 1. Over ℚ the coefficients
/// are coprime integers and the first nonzero of `(α, β)` is positive.
/// Equal lines therefore have identical coefficients.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CanonLine {
    alpha: Scalar,
    beta: Scalar,
    gamma: Scalar,
    isotropic: bool,
}

fn integer_coefficients(coeffs: [&BigRational; 3]) -> [BigInt; 3] {
    let lcm = coeffs.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let ints = coeffs.map(|c| c.numer() * (&lcm / c.denom()));
    let g = ints.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
    ints.map(|c| c / &g)
}

pub fn canon_line(alpha: &Scalar, beta: &Scalar, gamma: &Scalar) -> Result<CanonLine> {
    if alpha.is_zero() && beta.is_zero() {
        return Err(Error::DegenerateLine);
    }
    let lead = if alpha.is_zero() { beta } else { alpha };
    let (alpha, beta, gamma) = match lead {
        Scalar::Residue { .. } => {
            let k = lead.invert()?;
            (alpha * &k, beta * &k, gamma * &k)
        }
        Scalar::Rational(q) => {
            let (a, b, c) = match (alpha, beta, gamma) {
                (Scalar::Rational(a), Scalar::Rational(b), Scalar::Rational(c)) => (a, b, c),
                _ => return Err(Error::FieldMismatch),
            };
            let [mut a, mut b, mut c] = integer_coefficients([a, b, c]);
            if q.is_negative() {
                a = -a;
                b = -b;
                c = -c;
            }
            let r = |n: BigInt| Scalar::Rational(BigRational::from_integer(n));
            (r(a), r(b), r(c))
        }
    };
    let isotropic = (alpha.square() + beta.square()).is_zero();
    Ok(CanonLine { alpha, beta, gamma, isotropic })
}

impl CanonLine {
    pub fn alpha(&self) -> &Scalar {
        &self.alpha
    }

    pub fn beta(&self) -> &Scalar {
        &self.beta
    }

    pub fn gamma(&self) -> &Scalar {
        &self.gamma
    }

    /// True iff the direction `(−β, α)` has `‖·‖ = 0`.
    pub fn is_isotropic(&self) -> bool {
        self.isotropic
    }

    /// Normal vector `(α, β)`.
    pub fn normal(&self) -> Point {
        Point { x: self.alpha.clone(), y: self.beta.clone() }
    }

    pub fn direction(&self) -> Point {
        Point { x: -&self.beta, y: self.alpha.clone() }
    }

    pub fn contains(&self, p: &Point) -> bool {
        &self.alpha * &p.x + &self.beta * &p.y == self.gamma
    }

    pub fn is_parallel(&self, other: &CanonLine) -> bool {
        // canonical normals are equal iff directions agree
        self.alpha == other.alpha && self.beta == other.beta
    }

    /// The unique common point, or `None` for parallel or equal lines.
    pub fn intersect(&self, other: &CanonLine) -> Option<Point> {
        let det = &self.alpha * &other.beta - &other.alpha * &self.beta;
        let inv = det.invert().ok()?;
        let x = (&self.gamma * &other.beta - &other.gamma * &self.beta) * &inv;
        let y = (&self.alpha * &other.gamma - &other.alpha * &self.gamma) * &inv;
        Some(Point { x, y })
    }
}

impl fmt::Display for CanonLine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}x + {}y = {}", self.alpha, self.beta, self.gamma)
    }
}

/// The line through two distinct points.
pub fn line_through(a: &Point, b: &Point) -> Result<CanonLine> {
    if a == b {
        return Err(Error::EqualPoints);
    }
    let d = b.sub(a);
    let alpha = -&d.y;
    let beta = d.x.clone();
    let gamma = &alpha * &a.x + &beta * &a.y;
    canon_line(&alpha, &beta, &gamma)
}

/// The perpendicular bisector `{x : ‖a−x‖ = ‖b−x‖}`, i.e. the line
/// `2(b−a)·x = ‖b‖ − ‖a‖`. Only defined when `‖a−b‖ ≠ 0`.
pub fn bisector(a: &Point, b: &Point) -> Result<CanonLine> {
    if a == b {
        return Err(Error::EqualPoints);
    }
    if qdist(a, b).is_zero() {
        return Err(Error::IsotropicPair);
    }
    let d = b.sub(a);
    canon_line(&d.x.double(), &d.y.double(), &(b.norm() - a.norm()))
}

/// `{x : ‖x − center‖ = r2}`. Radii need not be squares, so the squared
/// radius is stored. `r2 = 0` is the isotropic cone through the center and
/// is flagged degenerate.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Circle {
    center: Point,
    r2: Scalar,
}

impl Circle {
    pub fn new(center: Point, r2: Scalar) -> Self {
        Circle { center, r2 }
    }

    pub fn center(&self) -> &Point {
        &self.center
    }

    pub fn r2(&self) -> &Scalar {
        &self.r2
    }

    pub fn is_degenerate(&self) -> bool {
        self.r2.is_zero()
    }

    pub fn contains(&self, p: &Point) -> bool {
        qdist(p, &self.center) == self.r2
    }
}

/// Circle through three points, if the defined pairwise bisectors meet in
/// exactly one point. Collinear triples and triples with two or more
/// isotropic pairs give `None`.
pub fn circumcircle(a: &Point, b: &Point, c: &Point) -> Result<Option<Circle>> {
    if a == b || b == c || a == c {
        return Err(Error::DuplicatePoint);
    }
    let mut lines = [(a, b), (a, c), (b, c)].into_iter().filter_map(|(u, v)| bisector(u, v).ok());
    let (Some(first), Some(second)) = (lines.next(), lines.next()) else {
        return Ok(None);
    };
    let Some(center) = first.intersect(&second) else {
        return Ok(None);
    };
    if let Some(third) = lines.next() {
        if !third.contains(&center) {
            return Ok(None);
        }
    }
    let r2 = qdist(a, &center);
    Ok(Some(Circle { center, r2 }))
}

/// A line or circle that points can be incident to.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Carrier {
    Line(CanonLine),
    Circle(Circle),
}

impl Carrier {
    pub fn contains(&self, p: &Point) -> bool {
        incident(p, self)
    }
}

pub fn incident(p: &Point, carrier: &Carrier) -> bool {
    match carrier {
        Carrier::Line(l) => l.contains(p),
        Carrier::Circle(c) => c.contains(p),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q() -> FieldSpec {
        FieldSpec::Rational
    }

    fn f(p: u64) -> FieldSpec {
        FieldSpec::prime(p).unwrap()
    }

    fn pt(field: FieldSpec, x: i64, y: i64) -> Point {
        Point::from_ints(field, x, y)
    }

    fn line(field: FieldSpec, a: i64, b: i64, c: i64) -> CanonLine {
        canon_line(&field.int(a), &field.int(b), &field.int(c)).unwrap()
    }

    #[test]
    fn qdist_examples() {
        assert_eq!(qdist(&pt(q(), 3, 4), &pt(q(), 0, 0)), q().int(25));
        assert!(qdist(&pt(f(5), 1, 2), &pt(f(5), 0, 0)).is_zero());
        let f13 = f(13);
        let i = f13.int(-1).sqrt_mod().unwrap()[0].clone();
        let v = Point::new(f13.one(), i);
        assert!(qdist(&v, &Point::origin(f13)).is_zero());
    }

    #[test]
    fn isotropic_direction_examples() {
        assert_eq!(is_isotropic_direction(&pt(f(5), 1, 2)), Ok(true));
        assert_eq!(is_isotropic_direction(&pt(q(), 1, 1)), Ok(false));
        assert_eq!(is_isotropic_direction(&pt(f(7), 1, 3)), Ok(false));
        assert_eq!(is_isotropic_direction(&pt(q(), 0, 0)), Err(Error::ZeroVector));
    }

    #[test]
    fn no_isotropic_vectors_mod_7() {
        let f7 = f(7);
        for x in 0..7 {
            for y in 0..7 {
                if (x, y) != (0, 0) {
                    assert_eq!(is_isotropic_direction(&pt(f7, x, y)), Ok(false));
                }
            }
        }
    }

    #[test]
    fn canon_line_examples() {
        let l = line(q(), 2, 0, 2);
        assert_eq!((l.alpha(), l.beta(), l.gamma()), (&q().int(1), &q().int(0), &q().int(1)));
        let l = line(f(5), 0, 3, 1);
        assert_eq!((l.alpha(), l.beta(), l.gamma()), (&f(5).int(0), &f(5).int(1), &f(5).int(2)));
        assert_eq!(
            canon_line(&q().zero(), &q().zero(), &q().one()),
            Err(Error::DegenerateLine)
        );
    }

    #[test]
    fn canon_line_clears_denominators_and_sign() {
        let half = q().ratio(1, 2).unwrap();
        let l = canon_line(&-&half, &q().ratio(-1, 3).unwrap(), &q().int(1)).unwrap();
        // -x/2 - y/3 = 1  ->  3x + 2y = -6
        assert_eq!(l, line(q(), 3, 2, -6));
    }

    #[test]
    fn bisector_examples() {
        assert_eq!(bisector(&pt(q(), 0, 0), &pt(q(), 2, 0)), Ok(line(q(), 1, 0, 1)));
        assert_eq!(bisector(&pt(q(), 0, 0), &pt(q(), 1, 1)), Ok(line(q(), 1, 1, 1)));
        assert_eq!(bisector(&pt(f(5), 0, 0), &pt(f(5), 1, 2)), Err(Error::IsotropicPair));
        assert_eq!(bisector(&pt(q(), 1, 1), &pt(q(), 1, 1)), Err(Error::EqualPoints));
    }

    #[test]
    fn bisector_is_symmetric_and_equidistant_exhaustively_mod_7() {
        let f7 = f(7);
        let pts: alloc::vec::Vec<Point> =
            (0..7).flat_map(|x| (0..7).map(move |y| pt(f7, x, y))).collect();
        let a = pt(f7, 1, 3);
        for b in pts.iter().filter(|b| **b != a) {
            let l = bisector(&a, b).unwrap();
            assert_eq!(Ok(l.clone()), bisector(b, &a));
            for s in pts.iter().filter(|s| l.contains(s)) {
                assert_eq!(qdist(&a, s), qdist(b, s));
            }
        }
    }

    #[test]
    fn circumcircle_examples() {
        let c = circumcircle(&pt(q(), 0, 0), &pt(q(), 1, 0), &pt(q(), 0, 1)).unwrap().unwrap();
        let half = q().ratio(1, 2).unwrap();
        assert_eq!(c.center(), &Point::new(half.clone(), half.clone()));
        assert_eq!(c.r2(), &half);
        assert!(!c.is_degenerate());
        assert_eq!(circumcircle(&pt(q(), 0, 0), &pt(q(), 1, 0), &pt(q(), 2, 0)), Ok(None));
        assert_eq!(
            circumcircle(&pt(q(), 0, 0), &pt(q(), 0, 0), &pt(q(), 1, 1)),
            Err(Error::DuplicatePoint)
        );
    }

    #[test]
    fn circumcircle_with_one_isotropic_pair() {
        // (0,0)-(1,2) is isotropic mod 5; the other two bisectors still meet.
        let f5 = f(5);
        let (a, b, c) = (pt(f5, 0, 0), pt(f5, 1, 2), pt(f5, 1, 0));
        let circle = circumcircle(&a, &b, &c).unwrap().unwrap();
        assert!(circle.contains(&a) && circle.contains(&b) && circle.contains(&c));
    }

    #[test]
    fn incident_examples() {
        let x1 = Carrier::Line(line(q(), 1, 0, 1));
        assert!(incident(&pt(q(), 1, 0), &x1));
        assert!(!incident(&pt(q(), 2, 2), &x1));
        let half = q().ratio(1, 2).unwrap();
        let circle = Carrier::Circle(Circle::new(Point::new(half.clone(), half.clone()), half));
        assert!(incident(&pt(q(), 1, 1), &circle));
    }

    #[test]
    fn isotropic_lines_through_each_point() {
        // two through each point when p ≡ 1 mod 4, none when p ≡ 3 mod 4
        for (p, expected) in [(5u64, 2usize), (13, 2), (3, 0), (7, 0)] {
            let fp = f(p);
            let n = p as i64;
            let mut lines = alloc::collections::BTreeSet::new();
            for a in 0..n {
                for b in 0..n {
                    for c in 0..n {
                        if let Ok(l) = canon_line(&fp.int(a), &fp.int(b), &fp.int(c)) {
                            lines.insert(l);
                        }
                    }
                }
            }
            assert_eq!(lines.len() as u64, p * p + p);
            for x in 0..n {
                for y in 0..n {
                    let point = pt(fp, x, y);
                    let count = lines.iter().filter(|l| l.is_isotropic() && l.contains(&point)).count();
                    assert_eq!(count, expected, "p = {p}");
                }
            }
        }
    }
}
