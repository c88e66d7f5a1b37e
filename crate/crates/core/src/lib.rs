//! Exact symbolic engine for tautological rings of fake quaternionic planes.
//!
//! The crate is layered bottom-up:
//!
//! * [`poly`], [`ring`], [`rational`]: exact sparse multivariate polynomials over ℚ
//!   with a graded variable list.
//! * [`series`], [`genera`]: truncated power series and multiplicative sequences
//!   (L-genus, Â-genus).
//! * [`model`]: the algebraic model `B → B[x]/(x³ + a8·x + a12)` of the universal
//!   fibration, characteristic class representatives, fibre integration and κ-classes.
//! * [`groebner`]: Buchberger's algorithm over ℚ and prime fields, Krull dimension
//!   of quotients, and a Macaulay-matrix membership oracle.
//! * [`fiber`]: specialisation of the Hirzebruch ideal at parameter values and the
//!   resulting fibre dimension records.

pub mod error;
pub mod fiber;
pub mod genera;
pub mod groebner;
pub mod model;
pub mod poly;
pub mod rational;
pub mod ring;
pub mod series;

mod parse;

pub use error::{Error, Result};
pub use poly::Polynomial;
pub use rational::Rational;
pub use ring::{Grading, Monomial, MonomialOrder, RingSpec};
