//! Exhaustive enumeration of exact solutions of a presentation.
//!
//! Generators are assigned in index order. A relator is checked as soon as
//! its last generator is assigned. When some cyclic rotation of a relator
//! reads `x_j^s W x_j^-s V` with `W`, `V` in earlier generators, `x_j` is
//! drawn only from the conjugators between the values of `W` and `V^-1`
//! instead of the whole group.

use std::fmt::Debug;
use std::sync::atomic::{AtomicBool, AtomicU64, Ordering};

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::metric::group::FiniteGroup;
use crate::metric::matrix::ComplexMatrix;
use crate::metric::perm::{factorial, Permutation};

use super::presentation::Presentation;
use super::tuple::Compiled;

/// Default bound on the number of candidate assignments tried.
pub const DEFAULT_SCAN_CAP: u128 = 1_000_000_000;
/// Largest group whose element list is materialized.
pub const MAX_ELEMENTS: u128 = 40_320;

/// A finite group in which exact solutions are enumerated.
pub trait ScanCarrier: Sync {
    type E: Clone + Eq + Ord + Send + Sync + Debug;
    fn size(&self) -> u128;
    /// All elements in increasing order.
    fn elements(&self) -> Vec<Self::E>;
    fn identity(&self) -> Self::E;
    fn mul(&self, a: &Self::E, b: &Self::E) -> Self::E;
    fn inv(&self, a: &Self::E) -> Self::E;
    /// All `c` with `c a c^-1 = b`, in increasing order.
    fn conjugators(&self, a: &Self::E, b: &Self::E) -> Vec<Self::E>;
}

/// `S_n`.
#[derive(Debug, Clone, Copy)]
pub struct PermCarrier(pub usize);

impl ScanCarrier for PermCarrier {
    type E = Permutation;

    fn size(&self) -> u128 {
        factorial(self.0)
    }

    fn elements(&self) -> Vec<Permutation> {
        Permutation::all(self.0).collect()
    }

    fn identity(&self) -> Permutation {
        Permutation::identity(self.0)
    }

    fn mul(&self, a: &Permutation, b: &Permutation) -> Permutation {
        a.compose(b)
    }

    fn inv(&self, a: &Permutation) -> Permutation {
        a.inverse()
    }

    fn conjugators(&self, a: &Permutation, b: &Permutation) -> Vec<Permutation> {
        perm_conjugators(a, b)
    }
}

/// `c a c^-1 = b` iff `c` carries each cycle of `a` onto a cycle of `b` of
/// the same length, respecting the cyclic order.
pub fn perm_conjugators(a: &Permutation, b: &Permutation) -> Vec<Permutation> {
    let n = a.degree();
    if b.degree() != n || a.cycle_type() != b.cycle_type() {
        return vec![];
    }
    let ca = a.cycles();
    let cb = b.cycles();
    let mut out = Vec::new();
    let mut images = vec![usize::MAX; n];
    let mut used = vec![false; cb.len()];
    fn go(
        k: usize,
        ca: &[Vec<usize>],
        cb: &[Vec<usize>],
        used: &mut [bool],
        images: &mut [usize],
        out: &mut Vec<Permutation>,
    ) {
        if k == ca.len() {
            out.push(Permutation::new(images.to_vec()).expect("cycle matching is a bijection"));
            return;
        }
        let src = &ca[k];
        let len = src.len();
        for (t, dst) in cb.iter().enumerate() {
            if used[t] || dst.len() != len {
                continue;
            }
            used[t] = true;
            for shift in 0..len {
                for (step, &p) in src.iter().enumerate() {
                    images[p] = dst[(shift + step) % len];
                }
                go(k + 1, ca, cb, used, images, out);
            }
            used[t] = false;
        }
    }
    go(0, &ca, &cb, &mut used, &mut images, &mut out);
    out.sort();
    out
}

/// A table-backed group.
#[derive(Debug, Clone, Copy)]
pub struct TableCarrier<'a>(pub &'a FiniteGroup);

impl ScanCarrier for TableCarrier<'_> {
    type E = usize;

    fn size(&self) -> u128 {
        self.0.order() as u128
    }

    fn elements(&self) -> Vec<usize> {
        (0..self.0.order()).collect()
    }

    fn identity(&self) -> usize {
        self.0.identity()
    }

    fn mul(&self, a: &usize, b: &usize) -> usize {
        self.0.mul(*a, *b)
    }

    fn inv(&self, a: &usize) -> usize {
        self.0.inv(*a)
    }

    fn conjugators(&self, a: &usize, b: &usize) -> Vec<usize> {
        let g = self.0;
        (0..g.order()).filter(|&c| g.mul(g.mul(c, *a), g.inv(c)) == *b).collect()
    }
}

type Letters = Vec<(usize, bool)>;

#[derive(Debug, Clone)]
struct Hint {
    /// `x_j W x_j^-1 = V^-1` when true, `x_j^-1 W x_j = V^-1` when false.
    positive: bool,
    w: Letters,
    v: Letters,
}

#[derive(Debug, Clone)]
struct Step {
    checks: Vec<usize>,
    hint: Option<Hint>,
}

fn plan(c: &Compiled) -> Vec<Step> {
    let mut steps: Vec<Step> = (0..c.gens).map(|_| Step { checks: vec![], hint: None }).collect();
    for (r, rel) in c.rels.iter().enumerate() {
        let Some(j) = rel.iter().map(|l| l.0).max() else { continue };
        steps[j].checks.push(r);
        if steps[j].hint.is_some() {
            continue;
        }
        let occ: Vec<usize> = (0..rel.len()).filter(|&i| rel[i].0 == j).collect();
        if occ.len() != 2 || rel[occ[0]].1 == rel[occ[1]].1 {
            continue;
        }
        let rot: Letters = rel[occ[0]..].iter().chain(&rel[..occ[0]]).copied().collect();
        let q = occ[1] - occ[0];
        steps[j].hint = Some(Hint { positive: !rot[0].1, w: rot[1..q].to_vec(), v: rot[q + 1..].to_vec() });
    }
    steps
}

fn eval<C: ScanCarrier>(g: &C, letters: &[(usize, bool)], xs: &[C::E], invs: &[C::E]) -> C::E {
    let mut acc = g.identity();
    for &(i, neg) in letters {
        acc = g.mul(&acc, if neg { &invs[i] } else { &xs[i] });
    }
    acc
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScanReport<E> {
    /// Exact solutions in increasing lexicographic order.
    pub solutions: Vec<Vec<E>>,
    /// Candidate assignments tried.
    pub work: u128,
    pub pruned_generators: Vec<String>,
}

struct Search<'a, C: ScanCarrier> {
    g: &'a C,
    compiled: &'a Compiled,
    steps: &'a [Step],
    all: &'a [C::E],
    work: &'a AtomicU64,
    abort: &'a AtomicBool,
    cap: u128,
}

impl<C: ScanCarrier> Search<'_, C> {
    fn go(&self, xs: &mut Vec<C::E>, invs: &mut Vec<C::E>, out: &mut Vec<Vec<C::E>>) {
        let j = xs.len();
        if j == self.compiled.gens {
            out.push(xs.clone());
            return;
        }
        if self.abort.load(Ordering::Relaxed) {
            return;
        }
        let step = &self.steps[j];
        let owned;
        let candidates: &[C::E] = match &step.hint {
            Some(h) => {
                let w = eval(self.g, &h.w, xs, invs);
                let v_inv = self.g.inv(&eval(self.g, &h.v, xs, invs));
                owned = if h.positive { self.g.conjugators(&w, &v_inv) } else { self.g.conjugators(&v_inv, &w) };
                &owned
            }
            None => self.all,
        };
        let done = self.work.fetch_add(candidates.len() as u64, Ordering::Relaxed) as u128 + candidates.len() as u128;
        if done > self.cap {
            self.abort.store(true, Ordering::Relaxed);
            return;
        }
        let id = self.g.identity();
        for c in candidates {
            xs.push(c.clone());
            invs.push(self.g.inv(c));
            let ok = step.checks.iter().all(|&r| eval(self.g, &self.compiled.rels[r], xs, invs) == id);
            if ok {
                self.go(xs, invs, out);
            }
            xs.pop();
            invs.pop();
        }
    }
}

/// Every tuple of `g` satisfying all relators of `p`.
pub fn exact_scan_in<C: ScanCarrier>(g: &C, p: &Presentation, cap: u128) -> Result<ScanReport<C::E>> {
    if g.size() > MAX_ELEMENTS {
        return Err(Error::EnumerationCap { order: g.size(), cap: MAX_ELEMENTS });
    }
    let compiled = Compiled::new(p);
    let steps = plan(&compiled);
    let all = g.elements();
    let work = AtomicU64::new(0);
    let abort = AtomicBool::new(false);
    let search = Search { g, compiled: &compiled, steps: &steps, all: &all, work: &work, abort: &abort, cap };
    // generator 0 never has a hint; split on its value
    let chunks: Vec<Vec<Vec<C::E>>> = all
        .par_iter()
        .map(|x0| {
            let mut out = Vec::new();
            let mut xs = vec![x0.clone()];
            let mut invs = vec![g.inv(x0)];
            let id = g.identity();
            if steps[0].checks.iter().all(|&r| eval(g, &compiled.rels[r], &xs, &invs) == id) {
                search.go(&mut xs, &mut invs, &mut out);
            }
            out
        })
        .collect();
    let work_done = work.load(Ordering::Relaxed) as u128 + all.len() as u128;
    if abort.load(Ordering::Relaxed) || work_done > cap {
        return Err(Error::WorkCap { work: work_done, cap });
    }
    let pruned_generators =
        steps.iter().enumerate().filter(|(_, s)| s.hint.is_some()).map(|(j, _)| p.names[j].clone()).collect();
    Ok(ScanReport { solutions: chunks.into_iter().flatten().collect(), work: work_done, pruned_generators })
}

/// Exact solutions in `S_n`.
pub fn exact_scan(p: &Presentation, n: usize, cap: u128) -> Result<ScanReport<Permutation>> {
    if n == 0 {
        return Err(Error::Precondition("degree must be positive".into()));
    }
    exact_scan_in(&PermCarrier(n), p, cap)
}

/// A finite group of unitary matrices, kept with its matrices.
#[derive(Debug, Clone)]
pub struct UnitaryTestGroup {
    pub group: FiniteGroup,
    pub matrices: Vec<ComplexMatrix>,
}

impl UnitaryTestGroup {
    pub fn generate(name: &str, gens: &[ComplexMatrix]) -> Result<Self> {
        let (group, matrices) = FiniteGroup::from_unitaries(name, gens, 1e-9)?;
        Ok(UnitaryTestGroup { group, matrices })
    }

    pub fn dim(&self) -> usize {
        self.matrices[0].dim()
    }
}

fn root_of_unity(k: usize) -> Complex64 {
    Complex64::from_polar(1.0, std::f64::consts::TAU / k as f64)
}

fn shift_matrix(n: usize) -> ComplexMatrix {
    crate::metric::matrix::permutation_matrix(&Permutation::shift(n))
}

fn diag_first(n: usize, z: Complex64) -> ComplexMatrix {
    let mut d = vec![Complex64::new(1.0, 0.0); n];
    d[0] = z;
    ComplexMatrix::diagonal(&d)
}

/// The quaternion units `±1, ±i, ±j, ±k` as 2x2 unitaries.
pub fn quaternion_unitaries() -> [ComplexMatrix; 2] {
    let c = Complex64::new;
    let i = ComplexMatrix::diagonal(&[c(0.0, 1.0), c(0.0, -1.0)]);
    let j = ComplexMatrix::from_rows(&[vec![c(0.0, 0.0), c(1.0, 0.0)], vec![c(-1.0, 0.0), c(0.0, 0.0)]]).expect("2x2");
    [i, j]
}

/// Finite unitary groups of dimension at most 4: `Q8`, the monomial groups
/// `C_k wr C_n` for `(k, n)` in `(4, 2)`, `(3, 3)`, `(2, 4)`, and the signed
/// permutation matrices of dimension 4.
pub fn unitary_test_groups() -> Vec<UnitaryTestGroup> {
    let mut out = vec![UnitaryTestGroup::generate("Q8", &quaternion_unitaries()).expect("Q8")];
    for (k, n) in [(4usize, 2usize), (3, 3), (2, 4)] {
        let gens = [diag_first(n, root_of_unity(k)), shift_matrix(n)];
        out.push(UnitaryTestGroup::generate(&format!("C{k}wrC{n}"), &gens).expect("monomial"));
    }
    let swap = crate::metric::matrix::permutation_matrix(&Permutation::transposition(4, 0, 1).expect("swap"));
    let gens = [diag_first(4, Complex64::new(-1.0, 0.0)), shift_matrix(4), swap];
    out.push(UnitaryTestGroup::generate("B4", &gens).expect("signed permutations"));
    out
}

#[derive(Debug, Clone, PartialEq)]
pub struct MirrorRow {
    pub group: String,
    pub dim: usize,
    pub order: usize,
    pub solutions: usize,
    /// Every solution is the tuple of identity matrices.
    pub only_identity: bool,
}

/// Exact solutions of `p` in each bundled unitary group.
pub fn unitary_mirror(p: &Presentation, cap: u128) -> Result<Vec<MirrorRow>> {
    let mut rows = Vec::new();
    for t in unitary_test_groups() {
        let report = exact_scan_in(&TableCarrier(&t.group), p, cap)?;
        let e = t.group.identity();
        let id = ComplexMatrix::identity(t.dim());
        let only_identity =
            report.solutions.iter().all(|s| s.iter().all(|&a| a == e && t.matrices[a].close_to(&id, 1e-9)));
        rows.push(MirrorRow {
            group: t.group.name().to_string(),
            dim: t.dim(),
            order: t.group.order(),
            solutions: report.solutions.len(),
            only_identity,
        });
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metric::word::eval_perm_word;

    fn brute_force(p: &Presentation, n: usize) -> Vec<Vec<Permutation>> {
        let all: Vec<Permutation> = Permutation::all(n).collect();
        let k = p.names.len();
        let mut out = Vec::new();
        let total = all.len().pow(k as u32);
        for mut code in 0..total {
            let mut t = Vec::with_capacity(k);
            for _ in 0..k {
                t.push(all[code % all.len()].clone());
                code /= all.len();
            }
            t.reverse();
            if p.relators.iter().all(|w| eval_perm_word(w, &t, n).unwrap().is_identity()) {
                out.push(t);
            }
        }
        out.sort();
        out
    }

    #[test]
    fn conjugators_match_filtering() {
        let all: Vec<Permutation> = Permutation::all(4).collect();
        for a in &all {
            for b in all.iter().step_by(5) {
                let want: Vec<Permutation> =
                    all.iter().filter(|c| c.compose(a).compose(&c.inverse()) == *b).cloned().collect();
                assert_eq!(perm_conjugators(a, b), want);
            }
        }
    }

    #[test]
    fn commuting_pairs() {
        let c = Presentation::commutator();
        let r = exact_scan(&c, 3, DEFAULT_SCAN_CAP).unwrap();
        // |G| times the number of conjugacy classes
        assert_eq!(r.solutions.len(), 18);
        assert_eq!(r.solutions, brute_force(&c, 3));
        assert_eq!(r.pruned_generators, vec!["y".to_string()]);
        let r = exact_scan(&Presentation::baumslag_solitar(1, 1), 2, DEFAULT_SCAN_CAP).unwrap();
        assert_eq!(r.solutions.len(), 4);
        assert_eq!(exact_scan(&c, 4, DEFAULT_SCAN_CAP).unwrap().solutions.len(), 24 * 5);
    }

    #[test]
    fn scan_agrees_with_brute_force() {
        for p in
            [Presentation::baumslag_solitar(1, 2), Presentation::baumslag_solitar(2, 3), Presentation::thompson_f()]
        {
            for n in 1..=4 {
                assert_eq!(exact_scan(&p, n, DEFAULT_SCAN_CAP).unwrap().solutions, brute_force(&p, n), "{p} n={n}");
            }
        }
        assert_eq!(
            exact_scan(&Presentation::higman(), 3, DEFAULT_SCAN_CAP).unwrap().solutions,
            brute_force(&Presentation::higman(), 3)
        );
    }

    #[test]
    fn higman_small_degrees() {
        for n in 1..=4 {
            let r = exact_scan(&Presentation::higman(), n, DEFAULT_SCAN_CAP).unwrap();
            assert_eq!(r.solutions, vec![vec![Permutation::identity(n); 4]]);
            assert_eq!(r.pruned_generators.len(), 3);
        }
    }

    #[test]
    fn caps() {
        let r = exact_scan(&Presentation::thompson_f(), 4, 100);
        assert!(matches!(r, Err(Error::WorkCap { cap: 100, .. })));
        assert!(matches!(
            exact_scan(&Presentation::commutator(), 9, DEFAULT_SCAN_CAP),
            Err(Error::EnumerationCap { .. })
        ));
    }

    #[test]
    fn unitary_groups_have_only_trivial_higman_solutions() {
        let rows = unitary_mirror(&Presentation::higman(), DEFAULT_SCAN_CAP).unwrap();
        let orders: Vec<usize> = rows.iter().map(|r| r.order).collect();
        assert_eq!(orders, vec![8, 32, 81, 64, 384]);
        for r in rows {
            assert_eq!(r.solutions, 1, "{}", r.group);
            assert!(r.only_identity);
            assert!(r.dim <= 4);
        }
    }

    #[test]
    fn table_scan_counts_commuting_pairs() {
        let q8 = FiniteGroup::quaternion();
        let r = exact_scan_in(&TableCarrier(&q8), &Presentation::commutator(), DEFAULT_SCAN_CAP).unwrap();
        // five conjugacy classes
        assert_eq!(r.solutions.len(), 40);
    }
}
