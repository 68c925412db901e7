//! Isometries of the form `x ↦ Lx + s` with `L` orthogonal for `x² + y²`.
//!
//! Only the classes that arise from one or two reflections are represented:
//! identity, translations, rotations about a point and reflections in a
//! non-isotropic line. A `det = −1` map without fixed points (a glide
//! reflection) is rejected by [`Isometry::from_parts`].

use core::fmt;

use crate::error::{Error, Result};
use crate::field::Scalar;
use crate::geom::{canon_line, CanonLine, Point};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum IsometryClass {
    Identity,
    Translation,
    Rotation { fixed_point: Point },
    Reflection { axis: CanonLine },
}

impl IsometryClass {
    pub fn name(&self) -> &'static str {
        match self {
            IsometryClass::Identity => "identity",
            IsometryClass::Translation => "translation",
            IsometryClass::Rotation { .. } => "rotation",
            IsometryClass::Reflection { .. } => "reflection",
        }
    }
}

/// A classified rigid motion `x ↦ linear·x + shift`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Isometry {
    linear: [[Scalar; 2]; 2],
    shift: Point,
    class: IsometryClass,
}

fn mat_vec(m: &[[Scalar; 2]; 2], p: &Point) -> Point {
    Point {
        x: &m[0][0] * &p.x + &m[0][1] * &p.y,
        y: &m[1][0] * &p.x + &m[1][1] * &p.y,
    }
}

fn mat_mul(a: &[[Scalar; 2]; 2], b: &[[Scalar; 2]; 2]) -> [[Scalar; 2]; 2] {
    let e = |i: usize, j: usize| &a[i][0] * &b[0][j] + &a[i][1] * &b[1][j];
    [[e(0, 0), e(0, 1)], [e(1, 0), e(1, 1)]]
}

fn det(m: &[[Scalar; 2]; 2]) -> Scalar {
    &m[0][0] * &m[1][1] - &m[0][1] * &m[1][0]
}

fn is_identity(m: &[[Scalar; 2]; 2]) -> bool {
    m[0][0].is_one() && m[1][1].is_one() && m[0][1].is_zero() && m[1][0].is_zero()
}

/// `σ_u(a) = a − 2 (a·u / ‖u‖) u`, reflection in the line `u·v = 0`.
fn sigma(u: &Point, a: &Point) -> Result<Point> {
    let k = a.dot(u).double().div(&u.norm())?;
    Ok(a.sub(&u.scale(&k)))
}

/// Reflection of `a` in the non-isotropic line `ℓ`.
///
/// With `u = (α, β)` the normal of `ℓ: u·x = γ`, the line is
/// `{λ₁u + v : u·v = 0}` for `λ₁ = γ/‖u‖` and `r_ℓ(a) = σ_u(a) + 2λ₁u`.
pub fn reflect(line: &CanonLine, a: &Point) -> Result<Point> {
    if line.is_isotropic() {
        return Err(Error::IsotropicAxis);
    }
    let u = line.normal();
    let lambda = line.gamma().div(&u.norm())?;
    Ok(sigma(&u, a)?.add(&u.scale(&lambda.double())))
}

impl Isometry {
    pub fn identity(field: crate::field::FieldSpec) -> Self {
        let (z, o) = (field.zero(), field.one());
        Isometry {
            linear: [[o.clone(), z.clone()], [z, o]],
            shift: Point::origin(field),
            class: IsometryClass::Identity,
        }
    }

    /// Builds and classifies `x ↦ linear·x + shift`.
    pub fn from_parts(linear: [[Scalar; 2]; 2], shift: Point) -> Result<Self> {
        let one = shift.x.one_like();
        let zero = shift.x.zero_like();
        // LᵀL = I
        let col0 = Point { x: linear[0][0].clone(), y: linear[1][0].clone() };
        let col1 = Point { x: linear[0][1].clone(), y: linear[1][1].clone() };
        if col0.norm() != one || col1.norm() != one || col0.dot(&col1) != zero {
            return Err(Error::NotOrthogonal);
        }
        let class = classify(&linear, &shift)?;
        Ok(Isometry { linear, shift, class })
    }

    /// `r_ℓ` as an isometry: `L = I − 2uuᵀ/‖u‖`, `s = 2γu/‖u‖`.
    pub fn reflection(line: &CanonLine) -> Result<Self> {
        if line.is_isotropic() {
            return Err(Error::IsotropicAxis);
        }
        let u = line.normal();
        let inv = u.norm().invert()?;
        let two = u.x.lift(2);
        let k = &two * &inv;
        let one = u.x.one_like();
        let linear = [
            [&one - &(&k * &u.x * &u.x), -(&k * &u.x * &u.y)],
            [-(&k * &u.y * &u.x), &one - &(&k * &u.y * &u.y)],
        ];
        let shift = u.scale(&(&k * line.gamma()));
        Ok(Isometry { linear, shift, class: IsometryClass::Reflection { axis: line.clone() } })
    }

    pub fn linear(&self) -> &[[Scalar; 2]; 2] {
        &self.linear
    }

    pub fn shift(&self) -> &Point {
        &self.shift
    }

    pub fn class(&self) -> &IsometryClass {
        &self.class
    }

    pub fn determinant(&self) -> Scalar {
        det(&self.linear)
    }

    pub fn apply(&self, p: &Point) -> Point {
        mat_vec(&self.linear, p).add(&self.shift)
    }

    /// `self ∘ inner`, i.e. apply `inner` first.
    pub fn compose(&self, inner: &Isometry) -> Result<Isometry> {
        let linear = mat_mul(&self.linear, &inner.linear);
        let shift = mat_vec(&self.linear, &inner.shift).add(&self.shift);
        let class = classify(&linear, &shift)?;
        Ok(Isometry { linear, shift, class })
    }
}

fn classify(linear: &[[Scalar; 2]; 2], shift: &Point) -> Result<IsometryClass> {
    if is_identity(linear) {
        return Ok(if shift.is_zero() { IsometryClass::Identity } else { IsometryClass::Translation });
    }
    let d = det(linear);
    let one = d.one_like();
    // I − L
    let m = [
        [&one - &linear[0][0], -&linear[0][1]],
        [-&linear[1][0], &one - &linear[1][1]],
    ];
    if d == one {
        // a rotation other than I has no eigenvalue 1, so I − L is invertible
        let inv = det(&m).invert()?;
        let fixed_point = Point {
            x: (&m[1][1] * &shift.x - &m[0][1] * &shift.y) * &inv,
            y: (&m[0][0] * &shift.y - &m[1][0] * &shift.x) * &inv,
        };
        return Ok(IsometryClass::Rotation { fixed_point });
    }
    if d != -&one {
        return Err(Error::NotOrthogonal);
    }
    // I − L = 2uuᵀ/‖u‖ has rank one; any nonzero column is parallel to u.
    let u = if m[0][0].is_zero() && m[1][0].is_zero() {
        Point { x: m[0][1].clone(), y: m[1][1].clone() }
    } else {
        Point { x: m[0][0].clone(), y: m[1][0].clone() }
    };
    if !(&shift.x * &u.y - &shift.y * &u.x).is_zero() {
        return Err(Error::GlideReflection);
    }
    let gamma = shift.dot(&u).div(&u.x.lift(2))?;
    let axis = canon_line(&u.x, &u.y, &gamma)?;
    Ok(IsometryClass::Reflection { axis })
}

/// The unique positively oriented isometry `τ` with `τ(a) = a′`, `τ(c) = c′`.
///
/// The rotation part `[[x, −y], [y, x]]` solves `L(c−a) = c′−a′`, a 2×2
/// system with determinant `‖c−a‖ ≠ 0`; then `shift = a′ − L·a`.
pub fn unique_direct_isometry(a: &Point, c: &Point, a2: &Point, c2: &Point) -> Result<Isometry> {
    let v = c.sub(a);
    let w = c2.sub(a2);
    let nv = v.norm();
    if nv != w.norm() {
        return Err(Error::DistanceMismatch);
    }
    if nv.is_zero() {
        return Err(Error::NullSegment);
    }
    let inv = nv.invert()?;
    let x = (&v.x * &w.x + &v.y * &w.y) * &inv;
    let y = (&v.x * &w.y - &v.y * &w.x) * &inv;
    let linear = [[x.clone(), -&y], [y, x]];
    let shift = a2.sub(&mat_vec(&linear, a));
    Isometry::from_parts(linear, shift)
}

/// `r_ℓ ∘ r_ℓ′`: identity if the lines agree, a translation if they are
/// parallel, otherwise a rotation about their intersection.
pub fn compose_reflections(l: &CanonLine, l2: &CanonLine) -> Result<Isometry> {
    Isometry::reflection(l)?.compose(&Isometry::reflection(l2)?)
}

impl fmt::Display for Isometry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let l = &self.linear;
        write!(
            f,
            "{} [[{}, {}], [{}, {}]] + {}",
            self.class.name(),
            l[0][0],
            l[0][1],
            l[1][0],
            l[1][1],
            self.shift
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::FieldSpec;
    use crate::geom::{bisector, qdist};

    fn q() -> FieldSpec {
        FieldSpec::Rational
    }

    fn pt(f: FieldSpec, x: i64, y: i64) -> Point {
        Point::from_ints(f, x, y)
    }

    fn line(f: FieldSpec, a: i64, b: i64, c: i64) -> CanonLine {
        canon_line(&f.int(a), &f.int(b), &f.int(c)).unwrap()
    }

    #[test]
    fn reflect_examples() {
        assert_eq!(reflect(&line(q(), 1, 0, 1), &pt(q(), 0, 0)), Ok(pt(q(), 2, 0)));
        let l = line(q(), 1, 1, 1);
        assert_eq!(reflect(&l, &pt(q(), 0, 0)), Ok(pt(q(), 1, 1)));
        assert_eq!(bisector(&pt(q(), 0, 0), &pt(q(), 1, 1)), Ok(l));
        // direction (1,2) through the origin: normal (−2, 1)
        let f5 = FieldSpec::prime(5).unwrap();
        let iso = line(f5, -2, 1, 0);
        assert!(iso.is_isotropic());
        assert_eq!(reflect(&iso, &pt(f5, 0, 0)), Err(Error::IsotropicAxis));
    }

    #[test]
    fn reflection_matrix_matches_pointwise_formula() {
        let l = line(q(), 3, -2, 5);
        let r = Isometry::reflection(&l).unwrap();
        assert_eq!(r.determinant(), q().int(-1));
        for (x, y) in [(0, 0), (1, 7), (-3, 2), (4, 4)] {
            let p = pt(q(), x, y);
            assert_eq!(r.apply(&p), reflect(&l, &p).unwrap());
        }
        // from_parts recovers the axis
        let rebuilt = Isometry::from_parts(r.linear().clone(), r.shift().clone()).unwrap();
        assert_eq!(rebuilt, r);
    }

    #[test]
    fn unique_direct_isometry_examples() {
        let t = unique_direct_isometry(&pt(q(), 0, 0), &pt(q(), 1, 0), &pt(q(), 1, 1), &pt(q(), 2, 1))
            .unwrap();
        assert_eq!(t.class(), &IsometryClass::Translation);
        assert_eq!(t.shift(), &pt(q(), 1, 1));

        let r = unique_direct_isometry(&pt(q(), 0, 0), &pt(q(), 2, 0), &pt(q(), 2, 2), &pt(q(), 0, 2))
            .unwrap();
        let minus_one = q().int(-1);
        assert_eq!(r.linear(), &[[minus_one.clone(), q().zero()], [q().zero(), minus_one]]);
        assert_eq!(r.class(), &IsometryClass::Rotation { fixed_point: pt(q(), 1, 1) });
        assert_eq!(r.apply(&pt(q(), 0, 0)), pt(q(), 2, 2));
        assert_eq!(r.apply(&pt(q(), 2, 0)), pt(q(), 0, 2));

        assert_eq!(
            unique_direct_isometry(&pt(q(), 0, 0), &pt(q(), 1, 0), &pt(q(), 0, 0), &pt(q(), 2, 0)),
            Err(Error::DistanceMismatch)
        );
        let f5 = FieldSpec::prime(5).unwrap();
        assert_eq!(
            unique_direct_isometry(&pt(f5, 0, 0), &pt(f5, 1, 2), &pt(f5, 1, 1), &pt(f5, 2, 3)),
            Err(Error::NullSegment)
        );
    }

    #[test]
    fn compose_reflections_examples() {
        let t = compose_reflections(&line(q(), 1, 0, 1), &line(q(), 1, 0, 0)).unwrap();
        assert_eq!(t.class(), &IsometryClass::Translation);
        assert_eq!(t.shift(), &pt(q(), 2, 0));

        let r = compose_reflections(&line(q(), 1, 0, 0), &line(q(), 0, 1, 0)).unwrap();
        assert_eq!(r.class(), &IsometryClass::Rotation { fixed_point: pt(q(), 0, 0) });
        assert_eq!(r.apply(&pt(q(), 3, 1)), pt(q(), -3, -1));

        let x1 = line(q(), 1, 0, 1);
        assert_eq!(compose_reflections(&x1, &x1).unwrap().class(), &IsometryClass::Identity);
    }

    #[test]
    fn glide_reflection_is_rejected() {
        let r = Isometry::reflection(&line(q(), 0, 1, 0)).unwrap();
        let glide = Isometry::from_parts(r.linear().clone(), pt(q(), 1, 0));
        assert_eq!(glide, Err(Error::GlideReflection));
        let shear = [[q().one(), q().one()], [q().zero(), q().one()]];
        assert_eq!(Isometry::from_parts(shear, pt(q(), 0, 0)), Err(Error::NotOrthogonal));
    }

    #[test]
    fn reflection_is_an_isometric_involution() {
        let l = line(q(), 2, 5, -1);
        let (a, b) = (pt(q(), 3, -4), pt(q(), -1, 9));
        let ra = reflect(&l, &a).unwrap();
        let rb = reflect(&l, &b).unwrap();
        assert_eq!(reflect(&l, &ra).unwrap(), a);
        assert_eq!(qdist(&ra, &rb), qdist(&a, &b));
    }
}
