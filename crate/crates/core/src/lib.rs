//! Desk-scale machinery for sofic and hyperlinear group theory.
//!
//! The crate is split by subject:
//!
//! * [`metric`]: permutations with the Hamming length, complex matrices with
//!   the Hilbert–Schmidt length, words, finite groups and length groups.
//! * [`formula`]: parser and evaluator for the continuous logic of invariant
//!   length groups.
//! * [`approx`]: approximate morphisms and the closure constructions that
//!   produce them (Følner sets, products, extensions, free products).
//! * [`rankalg`]: rank functions over prime fields and trace identities in
//!   group algebras.
//! * [`entropy`]: subshift word counts, tilings and sofic entropy counts.
//! * [`stability`]: relation systems in symmetric groups, approximate and
//!   exact solution search.
//!
//! All operations are pure; randomness always comes from an explicit seed.

pub mod approx;
pub mod entropy;
pub mod error;
pub mod formula;
pub mod metric;
pub mod rankalg;
pub mod rng;
pub mod scalar;
pub mod stability;

pub use error::{Error, Result};
pub use scalar::{Ratio, Scalar};
