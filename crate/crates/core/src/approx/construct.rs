//! Følner, product, extension and repair constructions.

use std::collections::{BTreeSet, HashMap};
use std::hash::Hash;

use crate::error::{Error, Result};
use crate::metric::matrix::{permutation_matrix, ComplexMatrix};
use crate::metric::perm::Permutation;
use crate::scalar::Ratio;

use super::model::{GroupModel, Lattice, ProductModel};
use super::morphism::ApproxMorphism;

#[derive(Debug, Clone)]
pub struct FolnerMorphism {
    pub morphism: ApproxMorphism<Lattice, Permutation>,
    /// Points of `K` in the order used as `0..|K|`.
    pub points: Vec<Vec<i64>>,
    /// `max |(g + K) Δ K| / (2|K|)` over the symmetric hull of `F`.
    pub epsilon: Ratio,
}

/// Translation action of `F ∪ F^-1 ∪ {0}` on a finite `K ⊂ Z^d`, completed
/// to permutations by lexicographic matching of the leftover points.
pub fn folner_morphism(model: Lattice, k: &[Vec<i64>], f: &[Vec<i64>]) -> Result<FolnerMorphism> {
    let mut points = k.to_vec();
    points.sort();
    points.dedup();
    if points.is_empty() {
        return Err(Error::EmptyDomain);
    }
    if let Some(p) = points.iter().chain(f).find(|p| p.len() != model.0) {
        return Err(Error::Precondition(format!("vector {p:?} is not in Z^{}", model.0)));
    }
    let index: HashMap<&Vec<i64>, usize> = points.iter().enumerate().map(|(i, p)| (p, i)).collect();
    let size = points.len() as i64;
    let mut epsilon = Ratio::from_integer(0);
    let mut entries = Vec::new();
    for g in model.symmetric_hull(f) {
        let mut partial = vec![None; points.len()];
        let mut moved_out = 0i64;
        for (i, p) in points.iter().enumerate() {
            let q = model.multiply(&g, p).map_err(|u| Error::Precondition(u.0))?;
            match index.get(&q) {
                Some(&j) => partial[i] = Some(j),
                None => moved_out += 1,
            }
        }
        // |(g+K) Δ K| = 2 |(g+K) \ K|
        epsilon = epsilon.max(Ratio::new(2 * moved_out, 2 * size));
        entries.push((g, Permutation::complete_partial(&partial)?));
    }
    Ok(FolnerMorphism { morphism: ApproxMorphism::new(model, entries)?, points, epsilon })
}

/// `(g0, g1) -> Phi0(g0) (x) Phi1(g1)` on `F0 x F1`.
pub fn product_morphism<A, B>(
    phi0: &ApproxMorphism<A, Permutation>,
    phi1: &ApproxMorphism<B, Permutation>,
    cap: usize,
) -> Result<ApproxMorphism<ProductModel<A, B>, Permutation>>
where
    A: GroupModel + Clone,
    B: GroupModel + Clone,
{
    let mut entries = Vec::with_capacity(phi0.len() * phi1.len());
    for (g0, s0) in phi0.entries() {
        for (g1, s1) in phi1.entries() {
            entries.push(((g0.clone(), g1.clone()), s0.direct_tensor(s1, cap)?));
        }
    }
    ApproxMorphism::new(ProductModel(phi0.model().clone(), phi1.model().clone()), entries)
}

/// Data for extending a morphism of a normal subgroup `N` of `Γ` along a
/// Følner set of the quotient `Γ/N`.
pub struct ExtensionData<'a, M: GroupModel, Q> {
    /// Morphism of `N`, with `N`'s elements written in `Γ`'s model.
    pub inner: &'a ApproxMorphism<M, Permutation>,
    /// The quotient map `Γ -> Γ/N`.
    pub quotient: &'a dyn Fn(&M::Elem) -> Q,
    /// Følner set `Ā` of the quotient together with the section `r` on it.
    pub section: Vec<(Q, M::Elem)>,
    /// Domain `F` of the new morphism.
    pub domain: Vec<M::Elem>,
}

/// `τ_g(i, h) = (σ_{r(q(gh))^-1 g h}(i), r(q(gh)))` when `q(gh) ∈ Ā`, with
/// the remaining points completed by lexicographic matching. Points of
/// `n x A` are numbered `i |A| + a`.
pub fn extension_morphism<M, Q>(data: ExtensionData<'_, M, Q>) -> Result<ApproxMorphism<M, Permutation>>
where
    M: GroupModel + Clone,
    Q: Clone + Eq + Hash + std::fmt::Debug,
{
    let model = data.inner.model();
    let n = data.inner.dim();
    let a = data.section.len();
    if a == 0 || data.domain.is_empty() {
        return Err(Error::EmptyDomain);
    }
    let mut row: HashMap<Q, usize> = HashMap::new();
    for (idx, (qbar, r)) in data.section.iter().enumerate() {
        let back = (data.quotient)(r);
        if back != *qbar {
            return Err(Error::SectionInconsistent(format!("r({qbar:?}) = {} maps to {back:?}", model.display(r))));
        }
        if row.insert(qbar.clone(), idx).is_some() {
            return Err(Error::SectionInconsistent(format!("{qbar:?} listed twice")));
        }
    }
    let resolve = |x: std::result::Result<M::Elem, super::model::Unresolved>| x.map_err(|u| Error::Precondition(u.0));
    let mut entries = Vec::with_capacity(data.domain.len());
    let mut seen = BTreeSet::new();
    for g in &data.domain {
        if !seen.insert(g.clone()) {
            continue;
        }
        let mut partial = vec![None; n * a];
        for (h_idx, (_, h)) in data.section.iter().enumerate() {
            let gh = resolve(model.multiply(g, h))?;
            let Some(&target) = row.get(&(data.quotient)(&gh)) else { continue };
            let r = &data.section[target].1;
            let k = resolve(model.multiply(&model.inverse(r), &gh))?;
            let sigma = data.inner.get(&k).ok_or_else(|| Error::DomainNotCovered(model.display(&k)))?;
            for i in 0..n {
                partial[i * a + h_idx] = Some(sigma.apply(i) * a + target);
            }
        }
        entries.push((g.clone(), Permutation::complete_partial(&partial)?));
    }
    ApproxMorphism::new(model.clone(), entries)
}

/// Double the degree so that every nonidentity image is fixed-point free
/// and `σ'_{g^-1} = σ'_g^-1`. Points of `n x 2` are numbered `2i + j`.
///
/// With `A_g = {i : τ_{g^-1} τ_g i = i, τ_g i != i}`: on `A_g x 2` apply
/// `τ_g` to the first coordinate; send `(A_{g^-1} \ A_g) x 2` onto
/// `(A_g \ A_{g^-1}) x 2` by order-preserving matching; swap the second
/// coordinate on the rest.
pub fn nice_repair<M>(phi: &ApproxMorphism<M, Permutation>) -> Result<ApproxMorphism<M, Permutation>>
where
    M: GroupModel + Clone,
{
    let model = phi.model();
    let n = phi.dim();
    let a_set = |t: &Permutation, t_inv: &Permutation| -> Vec<bool> {
        (0..n).map(|i| t_inv.apply(t.apply(i)) == i && t.apply(i) != i).collect()
    };
    let mut entries = Vec::with_capacity(phi.len());
    for (g, tg) in phi.entries() {
        match model.is_identity(g) {
            Some(true) => {
                entries.push((g.clone(), Permutation::identity(2 * n)));
                continue;
            }
            Some(false) => {}
            None => return Err(Error::Precondition(format!("cannot decide whether {} is trivial", model.display(g)))),
        }
        let g_inv = model.inverse(g);
        let tg_inv = phi.get(&g_inv).ok_or_else(|| {
            Error::Precondition(format!("domain is not symmetric: {} missing", model.display(&g_inv)))
        })?;
        let ag = a_set(tg, tg_inv);
        let ag_inv = a_set(tg_inv, tg);
        let from: Vec<usize> = (0..n).filter(|&i| ag_inv[i] && !ag[i]).collect();
        let to: Vec<usize> = (0..n).filter(|&i| ag[i] && !ag_inv[i]).collect();
        debug_assert_eq!(from.len(), to.len());
        let mut images = vec![0; 2 * n];
        for i in 0..n {
            for j in 0..2 {
                images[2 * i + j] = if ag[i] {
                    2 * tg.apply(i) + j
                } else if !ag_inv[i] {
                    2 * i + (1 - j)
                } else {
                    usize::MAX
                };
            }
        }
        let src: Vec<usize> = from.iter().flat_map(|&i| [2 * i, 2 * i + 1]).collect();
        let dst: Vec<usize> = to.iter().flat_map(|&i| [2 * i, 2 * i + 1]).collect();
        for (s, d) in src.into_iter().zip(dst) {
            images[s] = d;
        }
        entries.push((g.clone(), Permutation::new(images)?));
    }
    ApproxMorphism::new(model.clone(), entries)
}

/// Compose with `σ -> P_σ`.
pub fn to_unitary<M: GroupModel + Clone>(phi: &ApproxMorphism<M, Permutation>) -> ApproxMorphism<M, ComplexMatrix> {
    phi.map_images(permutation_matrix)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::approx::model::{TableModel, TrivialModel};
    use crate::metric::group::FiniteGroup;
    use crate::scalar::{ratio, Scalar};
    use std::sync::Arc;

    fn z_interval(n: i64, f: &[i64]) -> FolnerMorphism {
        let k: Vec<Vec<i64>> = (0..n).map(|x| vec![x]).collect();
        let f: Vec<Vec<i64>> = f.iter().map(|&x| vec![x]).collect();
        folner_morphism(Lattice(1), &k, &f).unwrap()
    }

    #[test]
    fn folner_on_an_interval_is_the_cycle() {
        let fm = z_interval(7, &[1]);
        assert_eq!(fm.morphism.get(&vec![1]).unwrap(), &Permutation::shift(7));
        assert_eq!(fm.morphism.get(&vec![-1]).unwrap(), &Permutation::shift(7).inverse());
        assert_eq!(fm.epsilon, ratio(1, 7));
    }

    #[test]
    fn folner_defect_bounds() {
        for n in [10, 100] {
            let fm = z_interval(n, &[1]);
            let d = fm.morphism.defect();
            assert!(d.mult_defect.total_cmp(&Scalar::Exact(ratio(2, n))).is_le());
            assert_eq!(d.length_defect, Scalar::zero());
        }
    }

    #[test]
    fn folner_square_translation_is_fixed_point_free() {
        let k = Lattice::boxed(&[5, 5]);
        let fm = folner_morphism(Lattice(2), &k, &[vec![1, 0]]).unwrap();
        assert_eq!(fm.morphism.get(&vec![1, 0]).unwrap().hamming_length(), ratio(1, 1));
        // agrees with translation wherever the translate stays in K
        let s = fm.morphism.get(&vec![1, 0]).unwrap();
        for (i, p) in fm.points.iter().enumerate() {
            if p[0] < 4 {
                assert_eq!(fm.points[s.apply(i)], vec![p[0] + 1, p[1]]);
            }
        }
    }

    #[test]
    fn products_of_folner_morphisms() {
        let a = z_interval(10, &[1]);
        let b = z_interval(10, &[1]);
        let p = product_morphism(&a.morphism, &b.morphism, 1 << 20).unwrap();
        let d = p.defect();
        let bound = a.morphism.defect().mult_defect.add(b.morphism.defect().mult_defect);
        assert!(d.mult_defect.total_cmp(&bound).is_le());
        assert!(d.mult_defect.total_cmp(&Scalar::Exact(ratio(4, 10))).is_le());
        assert_eq!(p.get(&(vec![0], vec![0])).unwrap(), &Permutation::identity(100));
    }

    fn regular_c(n: usize) -> ApproxMorphism<TableModel, Permutation> {
        let g = Arc::new(FiniteGroup::cyclic(n));
        let entries = (0..n).map(|k| (k, Permutation::shift(n).pow(k as i64))).collect();
        ApproxMorphism::new(TableModel(g), entries).unwrap()
    }

    #[test]
    fn extension_with_trivial_kernel_is_folner() {
        // Γ = Z, N = {0}, quotient = Z, Ā = [0, 12)
        let inner = ApproxMorphism::new(Lattice(1), vec![(vec![0], Permutation::identity(1))]).unwrap();
        let q = |x: &Vec<i64>| x[0];
        let section = (0..12).map(|a| (a, vec![a])).collect();
        let domain: Vec<Vec<i64>> = [-1, 0, 1].iter().map(|&x| vec![x]).collect();
        let ext = extension_morphism(ExtensionData { inner: &inner, quotient: &q, section, domain }).unwrap();
        let fm = z_interval(12, &[1]);
        for g in [-1, 0, 1] {
            assert_eq!(ext.get(&vec![g]), fm.morphism.get(&vec![g]));
        }
    }

    #[test]
    fn extension_with_trivial_quotient_keeps_the_defect() {
        let fm = z_interval(9, &[1, 2]);
        let q = |_: &Vec<i64>| ();
        let domain: Vec<Vec<i64>> = fm.morphism.domain().cloned().collect();
        let ext = extension_morphism(ExtensionData {
            inner: &fm.morphism,
            quotient: &q,
            section: vec![((), vec![0])],
            domain,
        })
        .unwrap();
        assert_eq!(ext.defect(), fm.morphism.defect());
    }

    #[test]
    fn extension_of_c2_by_z() {
        use crate::approx::model::ProductModel;
        let c2 = regular_c(2);
        let model = ProductModel(Lattice(1), c2.model().clone());
        let inner_entries =
            vec![((vec![0], 0usize), Permutation::identity(2)), ((vec![0], 1usize), Permutation::shift(2))];
        let inner = ApproxMorphism::new(model, inner_entries).unwrap();
        let q = |x: &(Vec<i64>, usize)| x.0[0];
        let section: Vec<(i64, (Vec<i64>, usize))> = (0..20).map(|a| (a, (vec![a], 0))).collect();
        let domain = vec![(vec![0], 0), (vec![1], 0), (vec![-1], 0), (vec![0], 1), (vec![1], 1)];
        let ext = extension_morphism(ExtensionData { inner: &inner, quotient: &q, section: section.clone(), domain })
            .unwrap();
        assert!(ext.get(&(vec![0], 0)).unwrap().is_identity());
        let d = ext.defect();
        // Følner ε of [0, 20) under ±1 is 1/20
        assert!(d.mult_defect.total_cmp(&Scalar::Exact(ratio(3, 20))).is_le());

        let mut broken = section;
        broken[3].1 = (vec![4], 0);
        let r = extension_morphism(ExtensionData {
            inner: &inner,
            quotient: &q,
            section: broken,
            domain: vec![(vec![0], 0)],
        });
        assert!(matches!(r, Err(Error::SectionInconsistent(_))));

        let small =
            ApproxMorphism::new(inner.model().clone(), vec![((vec![0], 0usize), Permutation::identity(2))]).unwrap();
        let section: Vec<(i64, (Vec<i64>, usize))> = (0..3).map(|a| (a, (vec![a], 0))).collect();
        let r = extension_morphism(ExtensionData { inner: &small, quotient: &q, section, domain: vec![(vec![0], 1)] });
        assert!(matches!(r, Err(Error::DomainNotCovered(_))));
    }

    fn assert_nice<M: GroupModel + Clone>(phi: &ApproxMorphism<M, Permutation>) {
        let m = phi.model();
        for (g, s) in phi.entries() {
            let inv = phi.get(&m.inverse(g)).unwrap();
            assert_eq!(inv, &s.inverse());
            if m.is_identity(g) == Some(false) {
                assert_eq!(s.fixed_point_count(), 0, "{}", m.display(g));
            } else {
                assert!(s.is_identity());
            }
        }
    }

    #[test]
    fn nice_repair_of_exact_c3() {
        let out = nice_repair(&regular_c(3)).unwrap();
        assert_nice(&out);
        assert_eq!(out.dim(), 6);
        assert_eq!(out.defect().mult_defect, Scalar::zero());
    }

    #[test]
    fn nice_repair_of_constant_map() {
        let g = Arc::new(FiniteGroup::cyclic(4));
        let entries = (0..4).map(|k| (k, Permutation::identity(5))).collect();
        let out = nice_repair(&ApproxMorphism::new(TableModel(g), entries).unwrap()).unwrap();
        assert_nice(&out);
        for k in 1..4 {
            assert_eq!(out.get(&k).unwrap().hamming_length(), ratio(1, 1));
            assert_eq!(out.get(&k).unwrap().order(), 2);
        }
    }

    #[test]
    fn nice_repair_of_perturbed_c4() {
        // the regular C4 on 20 points with one image perturbed by a transposition
        let g = Arc::new(FiniteGroup::cyclic(4));
        let r = Permutation::shift(4).direct_tensor(&Permutation::identity(5), 1 << 10).unwrap();
        let mut entries: Vec<(usize, Permutation)> = (0..4).map(|k| (k, r.pow(k as i64))).collect();
        entries[1].1 = entries[1].1.compose(&Permutation::transposition(20, 0, 1).unwrap());
        let phi = ApproxMorphism::new(TableModel(g), entries).unwrap();
        // Φ(1)Φ(1) = r^2 (r^-1 t r) t with two disjoint transpositions
        assert_eq!(phi.defect().mult_defect, Scalar::Exact(ratio(1, 5)));
        let out = nice_repair(&phi).unwrap();
        assert_nice(&out);
        assert!(out.defect().mult_defect.to_f64() <= 0.25);
    }

    #[test]
    fn nice_repair_needs_symmetric_domain() {
        let g = Arc::new(FiniteGroup::cyclic(3));
        let phi = ApproxMorphism::new(TableModel(g), vec![(0, Permutation::identity(3)), (1, Permutation::shift(3))])
            .unwrap();
        assert!(matches!(nice_repair(&phi), Err(Error::Precondition(_))));
    }

    #[test]
    fn unitary_images() {
        let fm = z_interval(10, &[1]);
        let u = to_unitary(&fm.morphism);
        let l = u.get(&vec![1]).unwrap().hs_length();
        assert!((l - 0.5f64.sqrt()).abs() < 1e-12);
        assert!(u.get(&vec![0]).unwrap().close_to(&ComplexMatrix::identity(10), 0.0));
        let ds = fm.morphism.defect().mult_defect.to_f64();
        let du = u.defect().mult_defect.to_f64();
        assert!(du <= (0.5 * ds).sqrt() + 1e-12);
        let t = ApproxMorphism::new(TrivialModel, vec![((), Permutation::identity(3))]).unwrap();
        assert!(to_unitary(&t).get(&()).unwrap().close_to(&ComplexMatrix::identity(3), 0.0));
    }
}
