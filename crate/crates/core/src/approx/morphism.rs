//! Finite partial maps into symmetric or unitary groups and their defects.

use std::collections::HashMap;
use std::fmt::Debug;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::metric::matrix::ComplexMatrix;
use crate::metric::perm::Permutation;
use crate::scalar::Scalar;

use super::model::GroupModel;

/// Elements of a metric target group.
pub trait TargetElem: Clone + Debug + Send + Sync {
    fn dim(&self) -> usize;
    fn compose(&self, other: &Self) -> Self;
    fn length(&self) -> Scalar;
    /// `l(x y^-1)`.
    fn distance(&self, other: &Self) -> Scalar;
    fn kind() -> &'static str;
}

impl TargetElem for Permutation {
    fn dim(&self) -> usize {
        self.degree()
    }

    fn compose(&self, other: &Self) -> Self {
        Permutation::compose(self, other)
    }

    fn length(&self) -> Scalar {
        Scalar::Exact(self.hamming_length())
    }

    fn distance(&self, other: &Self) -> Scalar {
        Scalar::Exact(self.hamming_distance(other))
    }

    fn kind() -> &'static str {
        "sym"
    }
}

impl TargetElem for ComplexMatrix {
    fn dim(&self) -> usize {
        ComplexMatrix::dim(self)
    }

    fn compose(&self, other: &Self) -> Self {
        self.mul(other)
    }

    fn length(&self) -> Scalar {
        Scalar::Approx(self.hs_length())
    }

    /// For unitary `y`, `||x y* - 1||_2 = ||x - y||_2`.
    fn distance(&self, other: &Self) -> Scalar {
        Scalar::Approx(0.5 * self.hs_distance(other))
    }

    fn kind() -> &'static str {
        "unitary"
    }
}

/// A map from finitely many elements of a model group into a target group.
#[derive(Debug, Clone)]
pub struct ApproxMorphism<M: GroupModel, T: TargetElem> {
    model: M,
    entries: Vec<(M::Elem, T)>,
    index: HashMap<M::Elem, usize>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DefectReport {
    /// Max of `d(Phi(gh), Phi(g) Phi(h))` over measured pairs.
    pub mult_defect: Scalar,
    /// Max of `|l(Phi(g)) - l0(g)|` with `l0` the trivial length on the source.
    pub length_defect: Scalar,
    pub pairs_measured: usize,
    /// Pairs whose product the model could not compute or place.
    pub unresolved: Vec<(String, String)>,
    /// Elements whose triviality the model could not decide.
    pub undecided: Vec<String>,
}

impl<M: GroupModel, T: TargetElem> ApproxMorphism<M, T> {
    /// Entries must have distinct sources and images of one dimension.
    pub fn new(model: M, entries: Vec<(M::Elem, T)>) -> Result<Self> {
        let first = entries.first().ok_or(Error::EmptyDomain)?;
        let dim = first.1.dim();
        let mut index = HashMap::with_capacity(entries.len());
        for (i, (g, t)) in entries.iter().enumerate() {
            if t.dim() != dim {
                return Err(Error::DegreeMismatch(dim, t.dim()));
            }
            if index.insert(g.clone(), i).is_some() {
                return Err(Error::Precondition(format!("{} listed twice", model.display(g))));
            }
        }
        Ok(ApproxMorphism { model, entries, index })
    }

    pub fn model(&self) -> &M {
        &self.model
    }

    pub fn entries(&self) -> &[(M::Elem, T)] {
        &self.entries
    }

    pub fn domain(&self) -> impl Iterator<Item = &M::Elem> {
        self.entries.iter().map(|(g, _)| g)
    }

    pub fn dim(&self) -> usize {
        self.entries[0].1.dim()
    }

    pub fn get(&self, g: &M::Elem) -> Option<&T> {
        self.index.get(g).map(|&i| &self.entries[i].1)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Same domain, images transformed by `f`.
    pub fn map_images<U: TargetElem>(&self, f: impl Fn(&T) -> U) -> ApproxMorphism<M, U>
    where
        M: Clone,
    {
        ApproxMorphism {
            model: self.model.clone(),
            entries: self.entries.iter().map(|(g, t)| (g.clone(), f(t))).collect(),
            index: self.index.clone(),
        }
    }

    /// Multiplicative and length defects over the domain. Pairs with
    /// `gh` outside the domain are skipped when the model's representation
    /// is canonical and reported unresolved otherwise.
    pub fn defect(&self) -> DefectReport {
        let canonical = self.model.canonical();
        let rows: Vec<(Scalar, usize, Vec<(String, String)>)> = self
            .entries
            .par_iter()
            .map(|(g, sg)| {
                let mut worst = Scalar::zero();
                let mut measured = 0;
                let mut unresolved = Vec::new();
                for (h, sh) in &self.entries {
                    let gh = match self.model.multiply(g, h) {
                        Ok(x) => x,
                        Err(_) => {
                            unresolved.push((self.model.display(g), self.model.display(h)));
                            continue;
                        }
                    };
                    match self.get(&gh) {
                        Some(sgh) => {
                            measured += 1;
                            worst = worst.max(sgh.distance(&sg.compose(sh)));
                        }
                        None if !canonical => unresolved.push((self.model.display(g), self.model.display(h))),
                        None => {}
                    }
                }
                (worst, measured, unresolved)
            })
            .collect();
        let mut report = DefectReport {
            mult_defect: Scalar::zero(),
            length_defect: Scalar::zero(),
            pairs_measured: 0,
            unresolved: vec![],
            undecided: vec![],
        };
        for (w, m, u) in rows {
            report.mult_defect = report.mult_defect.max(w);
            report.pairs_measured += m;
            report.unresolved.extend(u);
        }
        for (g, t) in &self.entries {
            match self.model.is_identity(g) {
                Some(trivial) => {
                    let target = if trivial { Scalar::zero() } else { Scalar::one() };
                    report.length_defect = report.length_defect.max(t.length().sub(target).abs());
                }
                None => report.undecided.push(self.model.display(g)),
            }
        }
        report
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::approx::model::{PresentedModel, TableModel};
    use crate::metric::group::FiniteGroup;
    use std::sync::Arc;

    #[test]
    fn identity_map_of_s3_is_exact() {
        let (g, perms) = FiniteGroup::from_permutations(
            "S3",
            &[Permutation::shift(3), Permutation::transposition(3, 0, 1).unwrap()],
        )
        .unwrap();
        let entries = perms.into_iter().enumerate().collect();
        let phi = ApproxMorphism::new(TableModel(Arc::new(g)), entries).unwrap();
        let d = phi.defect();
        assert_eq!(d.mult_defect, Scalar::zero());
        assert_eq!(d.pairs_measured, 36);
        // the regular length differs from the trivial one on transpositions
        assert_eq!(d.length_defect.as_ratio(), Some(crate::scalar::ratio(1, 3)));
    }

    #[test]
    fn constant_map_has_length_defect_one() {
        let g = Arc::new(FiniteGroup::cyclic(5));
        let id = Permutation::identity(4);
        let entries = vec![(0, id.clone()), (1, id.clone()), (4, id)];
        let d = ApproxMorphism::new(TableModel(g), entries).unwrap().defect();
        assert_eq!(d.length_defect, Scalar::one());
        assert_eq!(d.mult_defect, Scalar::zero());
    }

    #[test]
    fn errors_and_unresolved() {
        let g = Arc::new(FiniteGroup::cyclic(2));
        let empty: Vec<(usize, Permutation)> = vec![];
        assert_eq!(ApproxMorphism::new(TableModel(g.clone()), empty).err(), Some(Error::EmptyDomain));
        let bad = vec![(0, Permutation::identity(2)), (1, Permutation::identity(3))];
        assert!(ApproxMorphism::new(TableModel(g), bad).is_err());

        let names = vec!["a".to_string()];
        let m = PresentedModel::new(names, vec![crate::approx::model::unit_word(&[(0, 2)])], 4);
        let a = crate::approx::model::unit_word(&[(0, 1)]);
        let entries = vec![(crate::metric::Word::empty(), Permutation::identity(2)), (a, Permutation::shift(2))];
        let d = ApproxMorphism::new(m, entries).unwrap().defect();
        // a * a rewrites to 1, which is in the domain; nothing is unresolved
        assert!(d.unresolved.is_empty());
        assert_eq!(d.undecided, vec!["a".to_string()]);
        assert_eq!(d.mult_defect, Scalar::zero());
    }
}
