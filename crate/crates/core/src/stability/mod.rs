//! Relation systems in symmetric groups: defects, approximate and exact
//! solution search, distance to exact solutions, and commutator-contractive
//! checks.

pub mod contractive;
pub mod nearest;
pub mod presentation;
pub mod scan;
pub mod search;
pub mod tuple;

pub use contractive::{commutator_contractive_suite, higman_threshold, ContractiveReport, Violation};
pub use nearest::{
    nearest_exact, stability_profile, NearestExact, NearestMode, ProfileConfig, ProfileRow, ProfileSource,
};
pub use presentation::Presentation;
pub use scan::{
    exact_scan, exact_scan_in, perm_conjugators, quaternion_unitaries, unitary_mirror, unitary_test_groups, MirrorRow,
    PermCarrier, ScanCarrier, ScanReport, TableCarrier, UnitaryTestGroup, DEFAULT_SCAN_CAP,
};
pub use search::{search_approximate, AnnealSchedule, SearchMethod, SearchResult, DEFAULT_SEARCH_CAP};
pub use tuple::{parse_tuple, presentation_defect, write_tuple, TupleCandidate};

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metric::perm::Permutation;
    use crate::scalar::ratio;
    use proptest::prelude::*;

    fn perm(n: usize) -> impl Strategy<Value = Permutation> {
        Just((0..n).collect::<Vec<usize>>()).prop_shuffle().prop_map(|v| Permutation::new(v).unwrap())
    }

    proptest! {
        #[test]
        fn identity_tuple_has_defect_one(n in 1usize..9, which in 0usize..4) {
            let p = [Presentation::higman(), Presentation::thompson_f(), Presentation::commutator(), Presentation::baumslag_solitar(2, 3)];
            prop_assert_eq!(TupleCandidate::identity(&p[which], n).defect(), ratio(1, 1));
        }

        #[test]
        fn cached_defect_matches(xs in proptest::collection::vec(perm(6), 4)) {
            let h = Presentation::higman();
            let t = TupleCandidate::new(&h, xs.clone()).unwrap();
            prop_assert_eq!(t.defect(), presentation_defect(&h, &xs).unwrap());
            prop_assert!(t.defect() >= ratio(0, 1) && t.defect() <= ratio(2, 1));
        }

        #[test]
        fn exhaustive_nearest_beats_local(x in perm(4), y in perm(4)) {
            let c = Presentation::commutator();
            let t = TupleCandidate::new(&c, vec![x, y]).unwrap();
            let e = nearest_exact(&c, &t, NearestMode::Exhaustive { cap: DEFAULT_SCAN_CAP }).unwrap();
            let l = nearest_exact(&c, &t, NearestMode::Local).unwrap();
            prop_assert!(e.distance <= l.distance);
        }
    }
}
