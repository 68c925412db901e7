//! Ground fields and their elements.
//!
//! [`Scalar`] is a tagged value: either a residue modulo an odd prime or a
//! reduced arbitrary-precision fraction. Representations are canonical, so
//! the derived `Eq`, `Ord` and `Hash` agree with field equality and scalars
//! can be used directly as map keys.

use alloc::string::ToString;
use alloc::vec::Vec;
use core::fmt;
use core::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// An odd prime modulus. Only constructible through [`FieldSpec::prime`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Modulus(u32);

impl Modulus {
    pub fn get(self) -> u32 {
        self.0
    }
}

/// Which field the coordinates of a point set live in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum FieldSpec {
    Prime(Modulus),
    Rational,
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n.is_multiple_of(2) {
        return n == 2;
    }
    let mut d = 3;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

impl FieldSpec {
    /// `F_p` for an odd prime `p < 2^32`. Characteristic 2 is rejected here,
    /// so every scalar in circulation lives in a field where 2 is invertible.
    pub fn prime(p: u64) -> Result<Self> {
        if p == 2 {
            return Err(Error::CharacteristicTwo);
        }
        if p > u64::from(u32::MAX) || !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        Ok(FieldSpec::Prime(Modulus(p as u32)))
    }

    pub fn modulus(self) -> Option<u32> {
        match self {
            FieldSpec::Prime(m) => Some(m.0),
            FieldSpec::Rational => None,
        }
    }

    /// Whether `√−1` exists, i.e. whether nonzero isotropic vectors exist.
    pub fn has_i(self) -> bool {
        match self {
            FieldSpec::Prime(m) => m.0 % 4 == 1,
            FieldSpec::Rational => false,
        }
    }

    pub fn int(self, n: i64) -> Scalar {
        match self {
            FieldSpec::Prime(m) => {
                let p = i64::from(m.0);
                Scalar::Residue { value: n.rem_euclid(p) as u32, modulus: m.0 }
            }
            FieldSpec::Rational => Scalar::Rational(BigRational::from_integer(BigInt::from(n))),
        }
    }

    pub fn zero(self) -> Scalar {
        self.int(0)
    }

    pub fn one(self) -> Scalar {
        self.int(1)
    }

    /// `num/den` in this field. Over `F_p` this is `num · den⁻¹`.
    pub fn ratio(self, num: i64, den: i64) -> Result<Scalar> {
        self.int(num).div(&self.int(den))
    }

    pub fn contains(self, x: &Scalar) -> bool {
        x.field() == self
    }

    /// All elements `0, 1, …, p−1` of a prime field in increasing order.
    pub fn elements(self) -> Result<impl Iterator<Item = Scalar>> {
        let p = self.modulus().ok_or(Error::UnsupportedField)?;
        Ok((0..p).map(move |value| Scalar::Residue { value, modulus: p }))
    }

    /// Parses an integer (`-3`) or a fraction (`7/4`). Over `F_p` fractions
    /// are evaluated modulo `p`.
    pub fn parse(self, s: &str) -> Result<Scalar> {
        let s = s.trim();
        let bad = || Error::Parse(s.to_string());
        let (num, den) = match s.split_once('/') {
            Some((n, d)) => (n.trim(), d.trim()),
            None => (s, "1"),
        };
        let num: BigInt = num.parse().map_err(|_| bad())?;
        let den: BigInt = den.parse().map_err(|_| bad())?;
        if den.is_zero() {
            return Err(bad());
        }
        match self {
            FieldSpec::Rational => Ok(Scalar::Rational(BigRational::new(num, den))),
            FieldSpec::Prime(m) => {
                let p = BigInt::from(m.0);
                let reduce = |x: &BigInt| -> u32 {
                    let r = ((x % &p) + &p) % &p;
                    u32::try_from(&r).expect("residue fits in u32")
                };
                let n = Scalar::Residue { value: reduce(&num), modulus: m.0 };
                let d = Scalar::Residue { value: reduce(&den), modulus: m.0 };
                n.div(&d).map_err(|_| bad())
            }
        }
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldSpec::Prime(m) => write!(f, "prime:{}", m.0),
            FieldSpec::Rational => f.write_str("rational"),
        }
    }
}

/// An exact field element.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Scalar {
    /// Residue in `[0, modulus)`.
    Residue { value: u32, modulus: u32 },
    /// Fraction in lowest terms with positive denominator.
    Rational(BigRational),
}

fn mulmod(a: u64, b: u64, p: u64) -> u64 {
    a * b % p
}

fn powmod(mut base: u64, mut exp: u64, p: u64) -> u64 {
    let mut acc = 1 % p;
    base %= p;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mulmod(acc, base, p);
        }
        base = mulmod(base, base, p);
        exp >>= 1;
    }
    acc
}

/// Tonelli–Shanks. `n` must be a nonzero quadratic residue modulo the odd
/// prime `p`.
fn tonelli_shanks(n: u64, p: u64) -> u64 {
    if p % 4 == 3 {
        return powmod(n, (p + 1) / 4, p);
    }
    let mut q = p - 1;
    let mut s = 0u32;
    while q.is_multiple_of(2) {
        q /= 2;
        s += 1;
    }
    // Smallest non-residue; deterministic.
    let mut z = 2;
    while powmod(z, (p - 1) / 2, p) != p - 1 {
        z += 1;
    }
    let mut m = s;
    let mut c = powmod(z, q, p);
    let mut t = powmod(n, q, p);
    let mut r = powmod(n, q.div_ceil(2), p);
    while t != 1 {
        let mut i = 0;
        let mut t2 = t;
        while t2 != 1 {
            t2 = mulmod(t2, t2, p);
            i += 1;
        }
        let b = powmod(c, 1u64 << (m - i - 1), p);
        m = i;
        c = mulmod(b, b, p);
        t = mulmod(t, c, p);
        r = mulmod(r, b, p);
    }
    r
}

impl Scalar {
    pub fn field(&self) -> FieldSpec {
        match self {
            Scalar::Residue { modulus, .. } => FieldSpec::Prime(Modulus(*modulus)),
            Scalar::Rational(_) => FieldSpec::Rational,
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Residue { value, .. } => *value == 0,
            Scalar::Rational(q) => q.is_zero(),
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Residue { value, .. } => *value == 1,
            Scalar::Rational(q) => q.is_one(),
        }
    }

    /// Same-field integer constant.
    pub fn lift(&self, n: i64) -> Scalar {
        self.field().int(n)
    }

    pub fn zero_like(&self) -> Scalar {
        self.lift(0)
    }

    pub fn one_like(&self) -> Scalar {
        self.lift(1)
    }

    pub fn as_residue(&self) -> Option<u32> {
        match self {
            Scalar::Residue { value, .. } => Some(*value),
            Scalar::Rational(_) => None,
        }
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        match self {
            Scalar::Residue { .. } => None,
            Scalar::Rational(q) => Some(q),
        }
    }

    pub fn square(&self) -> Scalar {
        self * self
    }

    pub fn double(&self) -> Scalar {
        self + self
    }

    pub fn invert(&self) -> Result<Scalar> {
        if self.is_zero() {
            return Err(Error::ZeroInverse);
        }
        Ok(match self {
            Scalar::Residue { value, modulus } => {
                let p = u64::from(*modulus);
                Scalar::Residue { value: powmod(u64::from(*value), p - 2, p) as u32, modulus: *modulus }
            }
            Scalar::Rational(q) => Scalar::Rational(q.recip()),
        })
    }

    pub fn div(&self, rhs: &Scalar) -> Result<Scalar> {
        Ok(self * &rhs.invert()?)
    }

    /// Square roots in `F_p`: `{y, −y}` (ascending) for a nonzero residue,
    /// `{0}` for zero and the empty set for a non-residue.
    pub fn sqrt_mod(&self) -> Result<Vec<Scalar>> {
        let (value, modulus) = match self {
            Scalar::Residue { value, modulus } => (u64::from(*value), u64::from(*modulus)),
            Scalar::Rational(_) => return Err(Error::UnsupportedField),
        };
        if value == 0 {
            return Ok(alloc::vec![self.clone()]);
        }
        if powmod(value, (modulus - 1) / 2, modulus) != 1 {
            return Ok(Vec::new());
        }
        let y = tonelli_shanks(value, modulus);
        let (lo, hi) = if y < modulus - y { (y, modulus - y) } else { (modulus - y, y) };
        let m = modulus as u32;
        Ok(alloc::vec![
            Scalar::Residue { value: lo as u32, modulus: m },
            Scalar::Residue { value: hi as u32, modulus: m },
        ])
    }

    /// Sign over the rationals; residues have no order and report `None`.
    pub fn signum(&self) -> Option<i8> {
        match self {
            Scalar::Residue { .. } => None,
            Scalar::Rational(q) => Some(if q.is_zero() {
                0
            } else if q.is_positive() {
                1
            } else {
                -1
            }),
        }
    }

    /// Lossy conversion used only for reporting.
    pub fn to_f64(&self) -> f64 {
        match self {
            Scalar::Residue { value, .. } => f64::from(*value),
            Scalar::Rational(q) => {
                use num_traits::ToPrimitive;
                q.to_f64().unwrap_or(f64::NAN)
            }
        }
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Residue { value, .. } => write!(f, "{value}"),
            Scalar::Rational(q) if q.denom().is_one() => write!(f, "{}", q.numer()),
            Scalar::Rational(q) => write!(f, "{}/{}", q.numer(), q.denom()),
        }
    }
}

fn mismatch() -> ! {
    panic!("arithmetic between scalars of different fields")
}

impl Add for &Scalar {
    type Output = Scalar;
    fn add(self, rhs: &Scalar) -> Scalar {
        match (self, rhs) {
            (Scalar::Residue { value: a, modulus: p }, Scalar::Residue { value: b, modulus: q }) if p == q => {
                let s = u64::from(*a) + u64::from(*b);
                Scalar::Residue { value: (s % u64::from(*p)) as u32, modulus: *p }
            }
            (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(a + b),
            _ => mismatch(),
        }
    }
}

impl Sub for &Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &Scalar) -> Scalar {
        match (self, rhs) {
            (Scalar::Residue { value: a, modulus: p }, Scalar::Residue { value: b, modulus: q }) if p == q => {
                let s = u64::from(*a) + u64::from(*p) - u64::from(*b);
                Scalar::Residue { value: (s % u64::from(*p)) as u32, modulus: *p }
            }
            (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(a - b),
            _ => mismatch(),
        }
    }
}

impl Mul for &Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &Scalar) -> Scalar {
        match (self, rhs) {
            (Scalar::Residue { value: a, modulus: p }, Scalar::Residue { value: b, modulus: q }) if p == q => {
                let m = mulmod(u64::from(*a), u64::from(*b), u64::from(*p));
                Scalar::Residue { value: m as u32, modulus: *p }
            }
            (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(a * b),
            _ => mismatch(),
        }
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        match self {
            Scalar::Residue { value, modulus } => {
                Scalar::Residue { value: (modulus - value) % modulus, modulus: *modulus }
            }
            Scalar::Rational(q) => Scalar::Rational(-q),
        }
    }
}

macro_rules! forward_owned {
    ($($tr:ident $m:ident),*) => {$(
        impl $tr for Scalar {
            type Output = Scalar;
            fn $m(self, rhs: Scalar) -> Scalar { (&self).$m(&rhs) }
        }
        impl $tr<&Scalar> for Scalar {
            type Output = Scalar;
            fn $m(self, rhs: &Scalar) -> Scalar { (&self).$m(rhs) }
        }
        impl $tr<Scalar> for &Scalar {
            type Output = Scalar;
            fn $m(self, rhs: Scalar) -> Scalar { self.$m(&rhs) }
        }
    )*};
}
forward_owned!(Add add, Sub sub, Mul mul);

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}
