//! Exact plane geometry for bisector-energy and pinned-distance experiments.
//!
//! Everything here works over a prime field `F_p` (odd `p`) or over the
//! rationals, with canonical representations so that equality and ordering
//! of points, lines and circles are exact. The crate is `no_std` and only
//! needs `alloc`; IO, report formats and parallel drivers live in the
//! companion CLI crate.
//!
//! Module map:
//!
//! * [`field`]: [`FieldSpec`] and the exact [`Scalar`] type, inversion and
//!   modular square roots.
//! * [`geom`]: points, the quadratic form `‖a−b‖`, canonical lines,
//!   circles, perpendicular bisectors and circumcircles.
//! * [`isometry`]: reflections, direct isometries and their classification.
//! * [`stats`]: distance multiplicities, pinned distances, bisector classes,
//!   bisector energy, isosceles counts, richness and dyadic profiles.
//! * [`variety`]: variety membership, per-distance incidence counts and the
//!   intersection structure of two varieties.
//! * [`config`]: deterministic point-set generators.

#![no_std]

extern crate alloc;

pub mod config;
pub mod error;
pub mod exec;
pub mod field;
pub mod geom;
pub mod isometry;
pub mod stats;
pub mod variety;

pub use config::ConfigSpec;
pub use error::{Error, Result};
pub use exec::{Executor, Sequential};
pub use field::{FieldSpec, Scalar};
pub use geom::{CanonLine, Carrier, Circle, Point};
pub use isometry::{Isometry, IsometryClass};
pub use stats::PointSet;
pub use variety::{IntersectionStructure, Membership, VarietyKey};
