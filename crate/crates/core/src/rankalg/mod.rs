//! Rank functions on matrices over prime fields and trace identities in
//! group algebras over prime fields.

pub mod field;
pub mod galg;
pub mod matrix;
pub mod probes;

pub use galg::{
    averaging_idempotent, builtin_group, frobenius_trace_check, idempotent_trace_check, parse_galg, write_galg,
    FrobeniusReport, GroupAlgebraElement, IdempotentReport,
};
pub use matrix::PrimeFieldMatrix;
pub use probes::{
    finite_rank_ring_probe, perm_rank_identity, rank_axioms_hold, rank_lower_bound_probe, PermRankIdentity,
    RankBoundReport,
};
