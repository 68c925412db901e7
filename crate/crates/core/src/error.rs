use thiserror::Error;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("characteristic 2 is not supported")]
    CharacteristicTwo,
    #[error("{0} is not an odd prime")]
    NotPrime(u64),
    #[error("zero has no inverse")]
    ZeroInverse,
    #[error("operation is only defined over a prime field")]
    UnsupportedField,
    #[error("values belong to different fields")]
    FieldMismatch,
    #[error("cannot parse {0:?} as a field element")]
    Parse(alloc::string::String),

    #[error("zero vector has no direction")]
    ZeroVector,
    #[error("line equation has zero normal (0, 0)")]
    DegenerateLine,
    #[error("points are equal")]
    EqualPoints,
    #[error("points are at algebraic distance zero")]
    IsotropicPair,
    #[error("duplicate point")]
    DuplicatePoint,

    #[error("reflection axis is isotropic")]
    IsotropicAxis,
    #[error("segments have different algebraic lengths")]
    DistanceMismatch,
    #[error("segment has algebraic length zero")]
    NullSegment,
    #[error("matrix is not orthogonal for the quadratic form")]
    NotOrthogonal,
    #[error("isometry is a glide reflection")]
    GlideReflection,

    #[error("variety key (a, c) has ‖a−c‖ = 0")]
    NullKey,
    #[error("distance r must be nonzero")]
    NullDistance,
    #[error("variety keys must be distinct and at equal nonzero distance")]
    KeyMismatch,

    #[error("requested {requested} points but only {available} exist")]
    TooMany { requested: u64, available: u64 },
    #[error("grid side {side} is outside 1..={p}")]
    BadSize { side: u32, p: u32 },
    #[error("point set must be non-empty")]
    EmptySet,
}
