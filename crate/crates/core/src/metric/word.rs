//! Words in finitely many letters and their evaluation in a group.

use std::fmt;

use crate::error::{Error, Result};

use super::perm::Permutation;

/// A letter index raised to a nonzero integer exponent.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Letter {
    pub index: usize,
    pub exp: i64,
}

impl Letter {
    pub fn new(index: usize, exp: i64) -> Self {
        Letter { index, exp }
    }
}

/// A product of letters, evaluated left to right.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word(Vec<Letter>);

impl Word {
    pub fn empty() -> Self {
        Word(Vec::new())
    }

    /// Letters as given; use [`Word::reduced`] to merge and cancel.
    pub fn from_letters(letters: Vec<Letter>) -> Self {
        Word(letters)
    }

    pub fn from_pairs(pairs: &[(usize, i64)]) -> Self {
        Word(pairs.iter().map(|&(i, e)| Letter::new(i, e)).collect())
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Word length counted with multiplicity, `sum |exp|`.
    pub fn length(&self) -> u64 {
        self.0.iter().map(|l| l.exp.unsigned_abs()).sum()
    }

    pub fn max_index(&self) -> Option<usize> {
        self.0.iter().map(|l| l.index).max()
    }

    /// Free reduction: merge adjacent equal letters, drop zero exponents.
    pub fn reduced(&self) -> Word {
        let mut out: Vec<Letter> = Vec::with_capacity(self.0.len());
        for &l in &self.0 {
            if l.exp == 0 {
                continue;
            }
            match out.last_mut() {
                Some(last) if last.index == l.index => {
                    last.exp += l.exp;
                    if last.exp == 0 {
                        out.pop();
                    }
                }
                _ => out.push(l),
            }
        }
        Word(out)
    }

    pub fn is_reduced(&self) -> bool {
        self.0.iter().all(|l| l.exp != 0) && self.0.windows(2).all(|w| w[0].index != w[1].index)
    }

    pub fn inverse(&self) -> Word {
        Word(self.0.iter().rev().map(|l| Letter::new(l.index, -l.exp)).collect())
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        Word(v).reduced()
    }

    /// Sum of exponents per letter index.
    pub fn exponent_sums(&self, letters: usize) -> Vec<i64> {
        let mut sums = vec![0; letters];
        for l in &self.0 {
            if l.index < letters {
                sums[l.index] += l.exp;
            }
        }
        sums
    }

    /// Expand to unit letters (`x^3 -> x x x`), the form used by rewriting.
    pub fn syllables_unit(&self) -> Vec<(usize, i64)> {
        let mut v = Vec::new();
        for l in &self.0 {
            let s = l.exp.signum();
            for _ in 0..l.exp.unsigned_abs() {
                v.push((l.index, s));
            }
        }
        v
    }

    pub fn from_unit(units: &[(usize, i64)]) -> Word {
        Word(units.iter().map(|&(i, e)| Letter::new(i, e)).collect()).reduced()
    }

    /// Render with letter names, `x*y^-1`; the empty word renders as `1`.
    pub fn render(&self, names: &[String], sep: &str) -> String {
        if self.0.is_empty() {
            return "1".into();
        }
        self.0
            .iter()
            .map(|l| {
                let name = names.get(l.index).cloned().unwrap_or_else(|| format!("g{}", l.index));
                if l.exp == 1 {
                    name
                } else {
                    format!("{name}^{}", l.exp)
                }
            })
            .collect::<Vec<_>>()
            .join(sep)
    }

    /// Parse whitespace-separated factors `name[^int]`.
    pub fn parse_spaced(text: &str, names: &[String]) -> Result<Word> {
        let mut letters = Vec::new();
        for tok in text.split_whitespace() {
            if tok == "1" {
                continue;
            }
            let (name, exp) = match tok.split_once('^') {
                Some((n, e)) => {
                    let e: i64 = e.parse().map_err(|_| Error::parse(1, 1, format!("bad exponent in `{tok}`")))?;
                    (n, e)
                }
                None => (tok, 1),
            };
            let index = names
                .iter()
                .position(|n| n == name)
                .ok_or_else(|| Error::parse(1, 1, format!("unknown generator `{name}`")))?;
            letters.push(Letter::new(index, exp));
        }
        Ok(Word(letters))
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render(&[], "*"))
    }
}

/// Minimal group interface used to evaluate words.
pub trait GroupOps {
    type Elem: Clone;

    fn identity(&self) -> Self::Elem;
    fn multiply(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn inverse(&self, a: &Self::Elem) -> Self::Elem;
    /// Reject elements that do not belong to this carrier.
    fn check(&self, a: &Self::Elem) -> Result<()>;

    fn power(&self, a: &Self::Elem, exp: i64) -> Self::Elem {
        let base = if exp < 0 { self.inverse(a) } else { a.clone() };
        let mut e = exp.unsigned_abs();
        let mut acc = self.identity();
        let mut sq = base;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.multiply(&acc, &sq);
            }
            e >>= 1;
            if e > 0 {
                sq = self.multiply(&sq, &sq);
            }
        }
        acc
    }
}

/// Evaluate `word` with letter `i` sent to `assignment[i]`, left to right.
pub fn word_eval<G: GroupOps>(group: &G, word: &Word, assignment: &[G::Elem]) -> Result<G::Elem> {
    for a in assignment {
        group.check(a)?;
    }
    let mut acc = group.identity();
    for l in word.letters() {
        let x =
            assignment.get(l.index).ok_or(Error::LetterOutOfRange { index: l.index, available: assignment.len() })?;
        acc = group.multiply(&acc, &group.power(x, l.exp));
    }
    Ok(acc)
}

/// The symmetric group on `degree` points.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Symmetric(pub usize);

impl GroupOps for Symmetric {
    type Elem = Permutation;

    fn identity(&self) -> Permutation {
        Permutation::identity(self.0)
    }

    fn multiply(&self, a: &Permutation, b: &Permutation) -> Permutation {
        a.compose(b)
    }

    fn inverse(&self, a: &Permutation) -> Permutation {
        a.inverse()
    }

    fn check(&self, a: &Permutation) -> Result<()> {
        if a.degree() == self.0 {
            Ok(())
        } else {
            Err(Error::MixedCarriers(format!("permutation of degree {} in S_{}", a.degree(), self.0)))
        }
    }

    fn power(&self, a: &Permutation, exp: i64) -> Permutation {
        a.pow(exp)
    }
}

/// Evaluate a word on permutations of a common degree (taken from the
/// assignment; an empty assignment needs an explicit degree).
pub fn eval_perm_word(word: &Word, assignment: &[Permutation], degree: usize) -> Result<Permutation> {
    word_eval(&Symmetric(degree), word, assignment)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_word_is_identity() {
        let x = Permutation::shift(3);
        assert!(eval_perm_word(&Word::empty(), &[x], 3).unwrap().is_identity());
    }

    #[test]
    fn commutator_of_transpositions_is_three_cycle() {
        // x y x^-1 y^-1 with x = (0 1), y = (1 2); by hand: 0->2->... gives (0 2 1)
        let x = Permutation::transposition(3, 0, 1).unwrap();
        let y = Permutation::transposition(3, 1, 2).unwrap();
        let w = Word::from_pairs(&[(0, 1), (1, 1), (0, -1), (1, -1)]);
        let c = eval_perm_word(&w, &[x.clone(), y.clone()], 3).unwrap();
        let brute = x.compose(&y).compose(&x.inverse()).compose(&y.inverse());
        assert_eq!(c, brute);
        assert_eq!(c, Permutation::from_cycles(3, &[&[0, 2, 1]]).unwrap());
    }

    #[test]
    fn cube_of_three_cycle() {
        let w = Word::from_pairs(&[(0, 3)]);
        assert!(eval_perm_word(&w, &[Permutation::shift(3)], 3).unwrap().is_identity());
    }

    #[test]
    fn errors() {
        let w = Word::from_pairs(&[(1, 1)]);
        assert!(matches!(
            eval_perm_word(&w, &[Permutation::shift(3)], 3),
            Err(Error::LetterOutOfRange { index: 1, available: 1 })
        ));
        let w = Word::from_pairs(&[(0, 1), (1, 1)]);
        assert!(matches!(
            eval_perm_word(&w, &[Permutation::shift(3), Permutation::shift(4)], 3),
            Err(Error::MixedCarriers(_))
        ));
    }

    #[test]
    fn reduction() {
        let w = Word::from_pairs(&[(0, 1), (1, 2), (1, -2), (0, 1), (2, 0)]);
        assert_eq!(w.reduced(), Word::from_pairs(&[(0, 2)]));
        assert!(Word::from_pairs(&[(0, 1), (0, -1)]).reduced().is_empty());
        assert_eq!(w.inverse().inverse(), w);
    }

    #[test]
    fn spaced_parse() {
        let names: Vec<String> = ["a", "b"].iter().map(|s| s.to_string()).collect();
        let w = Word::parse_spaced("a^-1 b^2 a b^-3", &names).unwrap();
        assert_eq!(w, Word::from_pairs(&[(0, -1), (1, 2), (0, 1), (1, -3)]));
        assert_eq!(w.render(&names, " "), "a^-1 b^2 a b^-3");
        assert!(Word::parse_spaced("c", &names).is_err());
    }
}
