use std::sync::Arc;

use proptest::prelude::*;
use soficlab::formula::{evaluate, parse_sentence, Assignment, BoundKind, EvalConfig};
use soficlab::metric::{catalog, FiniteGroup, LengthGroup, Permutation};
use soficlab::Scalar;

const SENTENCES: [&str; 4] = [
    "sup x . sup y . len(x*y*x^-1*y^-1)",
    "sup x . len(x^2)",
    "inf x . max(len(x), 1 - len(x))",
    "inf x . inf y . (len(x) + len(y) - len(x*y))",
];

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn sampled_quantifiers_are_one_sided(seed in any::<u64>(), which in 0usize..4, g in 0usize..4) {
        let groups = [
            LengthGroup::symmetric(4),
            LengthGroup::symmetric(5),
            LengthGroup::trivial_length(Arc::new(FiniteGroup::dihedral(5))),
            LengthGroup::trivial_length(Arc::new(FiniteGroup::alternating4())),
        ];
        let group = &groups[g];
        let f = parse_sentence(SENTENCES[which]).unwrap();
        let exact = evaluate(&f, group, &Assignment::new(), EvalConfig::exact()).unwrap();
        let sampled = evaluate(&f, group, &Assignment::new(), EvalConfig::sampled(12, seed)).unwrap();
        match sampled.kind {
            BoundKind::Lower => prop_assert!(sampled.value.to_f64() <= exact.value.to_f64()),
            BoundKind::Upper => prop_assert!(sampled.value.to_f64() >= exact.value.to_f64()),
            _ => {}
        }
        if which <= 1 {
            prop_assert_eq!(sampled.kind, BoundKind::Lower);
        } else {
            prop_assert_eq!(sampled.kind, BoundKind::Upper);
        }
    }

    #[test]
    fn clamped_sentences_stay_in_unit_interval(which in 0usize..4, g in 0usize..30) {
        let groups = catalog();
        let group = &groups[g % groups.len()];
        let f = parse_sentence(&format!("clamp({})", SENTENCES[which])).unwrap();
        let v = evaluate(&f, group, &Assignment::new(), EvalConfig::exact()).unwrap().value;
        prop_assert!(v.to_f64() >= 0.0 && v.to_f64() <= 1.0);
    }
}

#[test]
fn commutator_sentence_survives_block_embedding() {
    let f = parse_sentence(SENTENCES[0]).unwrap();
    for n in 2..=4usize {
        let base = evaluate(&f, &LengthGroup::symmetric(n), &Assignment::new(), EvalConfig::exact()).unwrap().value;
        for big in [n + 1, 2 * n, 2 * n + 1, 3 * n + 2] {
            let k = big / n;
            let mut gens = vec![Permutation::shift(n)];
            if n > 1 {
                gens.push(Permutation::transposition(n, 0, 1).unwrap());
            }
            let embedded: Vec<Permutation> = gens.iter().map(|g| g.block_embed(big).unwrap()).collect();
            let image = LengthGroup::from_permutations("image", &embedded).unwrap();
            let v = evaluate(&f, &image, &Assignment::new(), EvalConfig::exact()).unwrap().value;
            let gap = v.sub(base).abs();
            assert!(gap.to_f64() <= 1.0 / k as f64, "n={n} N={big}: {base} vs {v}");
            assert!(v.total_cmp(&Scalar::one()).is_le());
        }
    }
}
