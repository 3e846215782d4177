//! Entropy counts: word counts of subshifts over `Z`, tilings and boundary
//! operators, the tiling bound for proper subshifts, and sofic entropy
//! counts.

pub mod amenable;
pub mod sofic;
pub mod subshift;
pub mod tiling;

pub use amenable::{amenable_bound_check, restriction_count, restrictions, AmenableBound};
pub use sofic::{sofic_entropy_count, PatternOracle, SoficCount, SoficMap, DEFAULT_COLORING_CAP};
pub use subshift::{h_estimate, ln_big, log_rate, word_count, EntropyEstimate, StateGraph, Subshift, DEFAULT_MEMO_CAP};
pub use tiling::{
    boundary_ops, difference_set, greedy_tiling, interval, lattice_box, product_set, Boundary, TilingReport,
};

#[cfg(test)]
mod tests {
    use super::*;
    use crate::approx::model::Lattice;
    use crate::metric::perm::Permutation;
    use crate::scalar::ratio;
    use num_bigint::BigUint;
    use proptest::prelude::*;

    fn small_shift() -> impl Strategy<Value = Subshift> {
        (2usize..=3, proptest::collection::vec(proptest::collection::vec(0u8..3, 1..4), 0..4)).prop_map(|(k, ws)| {
            let ws = ws.into_iter().map(|w| w.into_iter().map(|a| a % k as u8).collect()).collect();
            Subshift::new(k, ws).unwrap()
        })
    }

    proptest! {
        #[test]
        fn counts_are_submultiplicative(y in small_shift()) {
            let h = h_estimate(&y, 10, DEFAULT_MEMO_CAP).unwrap();
            prop_assert!(h.submultiplicative);
            prop_assert!(h.running_min.windows(2).all(|w| w[1] <= w[0]));
        }

        #[test]
        fn estimate_nonincreasing_in_nmax(y in small_shift(), a in 1usize..8, b in 1usize..8) {
            let (lo, hi) = (a.min(b), a.max(b));
            let e1 = h_estimate(&y, lo, DEFAULT_MEMO_CAP).unwrap().estimate;
            let e2 = h_estimate(&y, hi, DEFAULT_MEMO_CAP).unwrap().estimate;
            prop_assert!(e2 <= e1);
        }

        #[test]
        fn tiling_invariants(m in 1i64..5, n in 1i64..60, lo in -5i64..=0) {
            let z = Lattice(1);
            let f = interval(0, n);
            let region = interval(lo, n + 3);
            let r = greedy_tiling(&z, &interval(0, m), None, &region, &f).unwrap();
            prop_assert!(r.disjoint);
            prop_assert!(r.covers_region);
            prop_assert!(r.holds);
        }

        #[test]
        fn full_shift_sofic_count_is_k_to_the_n(
            perms in proptest::collection::vec(Just((0..9usize).collect::<Vec<_>>()).prop_shuffle(), 1..4),
            k in 2usize..=3,
        ) {
            let sigma = SoficMap::new(perms.into_iter().map(|p| Permutation::new(p).unwrap()).collect()).unwrap();
            let names = (0..sigma.perms().len()).map(|i| i.to_string()).collect();
            let o = PatternOracle::full(k, names).unwrap();
            let r = sofic_entropy_count(&sigma, &o, ratio(0, 1), DEFAULT_COLORING_CAP).unwrap();
            prop_assert_eq!(r.count, BigUint::from(k).pow(9));
        }
    }
}
