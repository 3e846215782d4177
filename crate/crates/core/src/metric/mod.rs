//! Metric groups: permutations, unitary matrices, words, finite groups and
//! the length functions on them.

pub mod group;
pub mod matrix;
pub mod microstate;
pub mod perm;
pub mod word;

pub use group::{catalog, FiniteGroup, GroupElem, LengthGroup, UnitaryLength};
pub use matrix::{permutation_matrix, ComplexMatrix, HsMetrics};
pub use perm::{Permutation, DEFAULT_DEGREE_CAP};
pub use word::{word_eval, GroupOps, Letter, Symmetric, Word};
