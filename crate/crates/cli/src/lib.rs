//! Command line front end for `bisector-core`: spec and report formats, a
//! rayon executor, the lemma verification suite and size sweeps.

pub mod exec;
pub mod formats;
pub mod harness;
pub mod lemmas;

pub use exec::Rayon;
