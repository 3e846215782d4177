//! Trace-matching defect of a matrix tuple against a group's word problem.

use num_complex::Complex64;

use crate::error::{Error, Result};

use super::group::FiniteGroup;
use super::matrix::ComplexMatrix;
use super::word::{Letter, Word};

/// Decides whether a word in the generators is trivial in the group.
pub trait WordOracle {
    fn generators(&self) -> usize;
    fn is_identity(&self, word: &Word) -> std::result::Result<bool, String>;
}

/// Every word is the identity.
#[derive(Debug, Clone, Copy)]
pub struct TrivialOracle(pub usize);

impl WordOracle for TrivialOracle {
    fn generators(&self) -> usize {
        self.0
    }

    fn is_identity(&self, _: &Word) -> std::result::Result<bool, String> {
        Ok(true)
    }
}

/// `Z^d` on its standard basis: a word is trivial iff all exponent sums vanish.
#[derive(Debug, Clone, Copy)]
pub struct LatticeOracle(pub usize);

impl WordOracle for LatticeOracle {
    fn generators(&self) -> usize {
        self.0
    }

    fn is_identity(&self, word: &Word) -> std::result::Result<bool, String> {
        if word.max_index().is_some_and(|m| m >= self.0) {
            return Err(format!("letter out of range in {word}"));
        }
        Ok(word.exponent_sums(self.0).iter().all(|&s| s == 0))
    }
}

/// Free group: trivial iff the free reduction is empty.
#[derive(Debug, Clone, Copy)]
pub struct FreeOracle(pub usize);

impl WordOracle for FreeOracle {
    fn generators(&self) -> usize {
        self.0
    }

    fn is_identity(&self, word: &Word) -> std::result::Result<bool, String> {
        Ok(word.reduced().is_empty())
    }
}

/// A finite group with chosen generator images.
#[derive(Debug, Clone)]
pub struct TableOracle {
    pub group: FiniteGroup,
    pub gens: Vec<usize>,
}

impl WordOracle for TableOracle {
    fn generators(&self) -> usize {
        self.gens.len()
    }

    fn is_identity(&self, word: &Word) -> std::result::Result<bool, String> {
        let mut x = self.group.identity();
        for l in word.letters() {
            let g = *self.gens.get(l.index).ok_or_else(|| format!("letter {} out of range", l.index))?;
            x = self.group.mul(x, self.group.pow(g, l.exp));
        }
        Ok(x == self.group.identity())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MicrostateReport {
    pub defect: f64,
    pub words_checked: usize,
    pub oracle_failures: usize,
    /// Word attaining the defect, if any word was checked.
    pub worst: Option<Word>,
}

/// Freely reduced words of length at most `max_len` in `k` generators, as unit letters.
pub fn reduced_words(k: usize, max_len: usize) -> Vec<Word> {
    let mut out = vec![Word::empty()];
    let mut frontier: Vec<Vec<(usize, i64)>> = vec![vec![]];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for w in &frontier {
            for i in 0..k {
                for e in [1i64, -1] {
                    if w.last() == Some(&(i, -e)) {
                        continue;
                    }
                    let mut v = w.clone();
                    v.push((i, e));
                    next.push(v);
                }
            }
        }
        out.extend(next.iter().map(|v| Word::from_unit(v)));
        frontier = next;
    }
    out
}

fn eval(word: &Word, mats: &[ComplexMatrix]) -> ComplexMatrix {
    let n = mats[0].dim();
    let mut acc = ComplexMatrix::identity(n);
    for &Letter { index, exp } in word.letters() {
        let base = if exp < 0 { mats[index].adjoint() } else { mats[index].clone() };
        for _ in 0..exp.unsigned_abs() {
            acc = acc.mul(&base);
        }
    }
    acc
}

/// Max trace mismatch of `phi` over reduced words up to `max_len`:
/// `|tau(w)|` where the oracle says `w != 1`, `|tau(w) - 1|` where it
/// says `w = 1`. Extra `relations` are scored as identities.
pub fn microstate_defect(
    phi: &[ComplexMatrix],
    relations: &[Word],
    max_len: usize,
    oracle: &dyn WordOracle,
) -> Result<MicrostateReport> {
    let first = phi.first().ok_or(Error::EmptyDomain)?;
    if phi.len() != oracle.generators() {
        return Err(Error::Precondition(format!("{} matrices for {} generators", phi.len(), oracle.generators())));
    }
    for m in phi {
        if m.dim() != first.dim() {
            return Err(Error::DegreeMismatch(first.dim(), m.dim()));
        }
        m.ensure_unitary()?;
    }
    if let Some(i) = relations.iter().filter_map(Word::max_index).find(|&i| i >= phi.len()) {
        return Err(Error::LetterOutOfRange { index: i, available: phi.len() });
    }
    let one = Complex64::new(1.0, 0.0);
    let mut report = MicrostateReport { defect: 0.0, words_checked: 0, oracle_failures: 0, worst: None };
    let score = |w: &Word, trivial: bool, report: &mut MicrostateReport| {
        let t = eval(w, phi).trace();
        let d = if trivial { (t - one).norm() } else { t.norm() };
        report.words_checked += 1;
        if report.worst.is_none() || d > report.defect {
            report.defect = d;
            report.worst = Some(w.clone());
        }
    };
    for w in reduced_words(phi.len(), max_len) {
        match oracle.is_identity(&w) {
            Ok(trivial) => score(&w, trivial, &mut report),
            Err(_) => report.oracle_failures += 1,
        }
    }
    for r in relations {
        score(r, true, &mut report);
    }
    Ok(report)
}
