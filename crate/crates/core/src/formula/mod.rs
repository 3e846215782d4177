//! Continuous logic of invariant length groups: terms are words, atoms are
//! lengths of words, connectives are a fixed set of piecewise-linear maps,
//! and quantifiers are `sup` / `inf` over the whole group.

pub mod ast;
pub mod corpus;
pub mod eval;
pub mod parse;

pub use ast::{Formula, TermWord};
pub use eval::{evaluate, sentence_series, Assignment, BoundKind, EvalConfig, Evaluation, Mode, SeriesPoint};
pub use parse::{parse_formula, parse_sentence};

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Ratio;
    use proptest::prelude::*;

    fn name() -> impl Strategy<Value = String> {
        prop::sample::select(vec!["x", "y", "z", "g1", "u_2"]).prop_map(String::from)
    }

    fn rational() -> impl Strategy<Value = Ratio> {
        (-20i64..20, 1i64..9).prop_map(|(a, b)| Ratio::new(a, b))
    }

    fn formula() -> impl Strategy<Value = Formula> {
        let word = prop::collection::vec((name(), (-3i64..4).prop_filter("nonzero", |e| *e != 0)), 0..4);
        let leaf = prop_oneof![word.prop_map(Formula::Len), rational().prop_map(Formula::Const)];
        leaf.prop_recursive(4, 24, 3, |inner| {
            prop_oneof![
                prop::collection::vec(inner.clone(), 1..4).prop_map(Formula::Max),
                prop::collection::vec(inner.clone(), 1..4).prop_map(Formula::Min),
                (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::sum(a, b)),
                (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::diff(a, b)),
                (rational(), inner.clone()).prop_map(|(r, a)| Formula::Scale(r, Box::new(a))),
                inner.clone().prop_map(|a| Formula::Abs(Box::new(a))),
                inner.clone().prop_map(|a| Formula::Clamp(Box::new(a))),
                (name(), inner.clone()).prop_map(|(v, a)| Formula::Sup(v, Box::new(a))),
                (name(), inner).prop_map(|(v, a)| Formula::Inf(v, Box::new(a))),
            ]
        })
    }

    /// Drop binders that shadow an outer binder or a free name, so the tree
    /// is parseable with its free names as parameters.
    fn unshadow(f: Formula, bound: &mut Vec<String>) -> Formula {
        let b = |f: Box<Formula>, bound: &mut Vec<String>| Box::new(unshadow(*f, bound));
        match f {
            Formula::Sup(v, body) | Formula::Inf(v, body) if bound.contains(&v) => unshadow(*body, bound),
            Formula::Sup(v, body) => {
                bound.push(v.clone());
                let body = b(body, bound);
                bound.pop();
                Formula::Sup(v, body)
            }
            Formula::Inf(v, body) => {
                bound.push(v.clone());
                let body = b(body, bound);
                bound.pop();
                Formula::Inf(v, body)
            }
            Formula::Max(v) => Formula::Max(v.into_iter().map(|c| unshadow(c, bound)).collect()),
            Formula::Min(v) => Formula::Min(v.into_iter().map(|c| unshadow(c, bound)).collect()),
            Formula::Sum(x, y) => Formula::Sum(b(x, bound), b(y, bound)),
            Formula::Diff(x, y) => Formula::Diff(b(x, bound), b(y, bound)),
            Formula::Scale(r, x) => Formula::Scale(r, b(x, bound)),
            Formula::Abs(x) => Formula::Abs(b(x, bound)),
            Formula::Clamp(x) => Formula::Clamp(b(x, bound)),
            leaf => leaf,
        }
    }

    proptest! {
        #[test]
        fn print_then_parse_is_identity(f in formula()) {
            let mut f = unshadow(f, &mut vec![]);
            loop {
                let mut free = f.free_names();
                let g = unshadow(f.clone(), &mut free);
                if g == f {
                    break;
                }
                f = g;
            }
            let free = f.free_names();
            let params: Vec<&str> = free.iter().map(String::as_str).collect();
            let text = f.to_string();
            let back = parse_formula(&text, &params);
            prop_assert_eq!(back, Ok(f), "{}", text);
        }
    }
}
