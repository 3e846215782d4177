//! Source groups for approximate morphisms.

use std::fmt::Debug;
use std::hash::Hash;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::metric::group::FiniteGroup;
use crate::metric::word::{Letter, Word};

/// A product the model could not compute.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Unresolved(pub String);

/// A group given by some way of multiplying represented elements.
pub trait GroupModel: Send + Sync {
    type Elem: Clone + Eq + Hash + Ord + Debug + Send + Sync;

    fn identity(&self) -> Self::Elem;
    fn multiply(&self, a: &Self::Elem, b: &Self::Elem) -> std::result::Result<Self::Elem, Unresolved>;
    fn inverse(&self, a: &Self::Elem) -> Self::Elem;
    /// `None` when the model cannot decide.
    fn is_identity(&self, a: &Self::Elem) -> Option<bool>;
    /// Whether equal group elements always have equal representations.
    fn canonical(&self) -> bool {
        true
    }
    fn display(&self, a: &Self::Elem) -> String;
    fn parse(&self, text: &str) -> Result<Self::Elem>;
}

/// `Z^d` with integer vectors.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Lattice(pub usize);

impl Lattice {
    /// The box `[0, sides[0]) x ... x [0, sides[d-1])`, lexicographic order.
    pub fn boxed(sides: &[i64]) -> Vec<Vec<i64>> {
        let mut out = vec![vec![]];
        for &s in sides {
            out = out
                .into_iter()
                .flat_map(|p: Vec<i64>| {
                    (0..s).map(move |x| {
                        let mut q = p.clone();
                        q.push(x);
                        q
                    })
                })
                .collect();
        }
        out
    }

    /// `{0} ∪ F ∪ -F`, sorted.
    pub fn symmetric_hull(&self, f: &[Vec<i64>]) -> Vec<Vec<i64>> {
        let mut v: Vec<Vec<i64>> = f.iter().cloned().chain(f.iter().map(|x| self.inverse(x))).collect();
        v.push(self.identity());
        v.sort();
        v.dedup();
        v
    }
}

impl GroupModel for Lattice {
    type Elem = Vec<i64>;

    fn identity(&self) -> Vec<i64> {
        vec![0; self.0]
    }

    fn multiply(&self, a: &Vec<i64>, b: &Vec<i64>) -> std::result::Result<Vec<i64>, Unresolved> {
        a.iter()
            .zip(b)
            .map(|(x, y)| x.checked_add(*y))
            .collect::<Option<Vec<_>>>()
            .ok_or_else(|| Unresolved("lattice overflow".into()))
    }

    fn inverse(&self, a: &Vec<i64>) -> Vec<i64> {
        a.iter().map(|x| -x).collect()
    }

    fn is_identity(&self, a: &Vec<i64>) -> Option<bool> {
        Some(a.iter().all(|&x| x == 0))
    }

    fn display(&self, a: &Vec<i64>) -> String {
        if a.len() == 1 {
            a[0].to_string()
        } else {
            format!("({})", a.iter().map(i64::to_string).collect::<Vec<_>>().join(","))
        }
    }

    fn parse(&self, text: &str) -> Result<Vec<i64>> {
        let t = text.trim().trim_start_matches('(').trim_end_matches(')');
        let v = t
            .split(',')
            .map(|x| x.trim().parse::<i64>())
            .collect::<std::result::Result<Vec<_>, _>>()
            .map_err(|_| Error::parse(1, 1, format!("bad lattice vector `{text}`")))?;
        if v.len() != self.0 {
            return Err(Error::parse(1, 1, format!("expected {} coordinates in `{text}`", self.0)));
        }
        Ok(v)
    }
}

/// A finite group by its table.
#[derive(Debug, Clone)]
pub struct TableModel(pub Arc<FiniteGroup>);

impl GroupModel for TableModel {
    type Elem = usize;

    fn identity(&self) -> usize {
        self.0.identity()
    }

    fn multiply(&self, a: &usize, b: &usize) -> std::result::Result<usize, Unresolved> {
        Ok(self.0.mul(*a, *b))
    }

    fn inverse(&self, a: &usize) -> usize {
        self.0.inv(*a)
    }

    fn is_identity(&self, a: &usize) -> Option<bool> {
        Some(*a == self.0.identity())
    }

    fn display(&self, a: &usize) -> String {
        self.0.element_name(*a).to_string()
    }

    fn parse(&self, text: &str) -> Result<usize> {
        self.0
            .index_of(text.trim())
            .ok_or_else(|| Error::parse(1, 1, format!("no element named `{}` in {}", text.trim(), self.0.name())))
    }
}

/// The trivial group.
#[derive(Debug, Clone, Copy)]
pub struct TrivialModel;

impl GroupModel for TrivialModel {
    type Elem = ();

    fn identity(&self) {}

    fn multiply(&self, _: &(), _: &()) -> std::result::Result<(), Unresolved> {
        Ok(())
    }

    fn inverse(&self, _: &()) {}

    fn is_identity(&self, _: &()) -> Option<bool> {
        Some(true)
    }

    fn display(&self, _: &()) -> String {
        "1".into()
    }

    fn parse(&self, text: &str) -> Result<()> {
        match text.trim() {
            "1" | "e" => Ok(()),
            t => Err(Error::parse(1, 1, format!("trivial group has no element `{t}`"))),
        }
    }
}

/// Direct product of two models.
#[derive(Debug, Clone)]
pub struct ProductModel<A, B>(pub A, pub B);

impl<A: GroupModel, B: GroupModel> GroupModel for ProductModel<A, B> {
    type Elem = (A::Elem, B::Elem);

    fn identity(&self) -> Self::Elem {
        (self.0.identity(), self.1.identity())
    }

    fn multiply(&self, a: &Self::Elem, b: &Self::Elem) -> std::result::Result<Self::Elem, Unresolved> {
        Ok((self.0.multiply(&a.0, &b.0)?, self.1.multiply(&a.1, &b.1)?))
    }

    fn inverse(&self, a: &Self::Elem) -> Self::Elem {
        (self.0.inverse(&a.0), self.1.inverse(&a.1))
    }

    fn is_identity(&self, a: &Self::Elem) -> Option<bool> {
        match (self.0.is_identity(&a.0), self.1.is_identity(&a.1)) {
            (Some(false), _) | (_, Some(false)) => Some(false),
            (Some(true), Some(true)) => Some(true),
            _ => None,
        }
    }

    fn canonical(&self) -> bool {
        self.0.canonical() && self.1.canonical()
    }

    fn display(&self, a: &Self::Elem) -> String {
        format!("<{};{}>", self.0.display(&a.0), self.1.display(&a.1))
    }

    fn parse(&self, text: &str) -> Result<Self::Elem> {
        let t = text.trim();
        let inner = t
            .strip_prefix('<')
            .and_then(|s| s.strip_suffix('>'))
            .ok_or_else(|| Error::parse(1, 1, format!("expected <a;b>, found `{t}`")))?;
        let (a, b) = inner.split_once(';').ok_or_else(|| Error::parse(1, 1, format!("expected <a;b>, found `{t}`")))?;
        Ok((self.0.parse(a)?, self.1.parse(b)?))
    }
}

/// One syllable of a free-product normal form.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Syllable<A, B> {
    Left(A),
    Right(B),
}

/// Free product with alternating normal forms of nonidentity syllables.
#[derive(Debug, Clone)]
pub struct FreeProduct<A, B>(pub A, pub B);

impl<A: GroupModel, B: GroupModel> FreeProduct<A, B> {
    fn push(
        &self,
        out: &mut Vec<Syllable<A::Elem, B::Elem>>,
        s: Syllable<A::Elem, B::Elem>,
    ) -> std::result::Result<(), Unresolved> {
        let merged = match (out.last(), &s) {
            (Some(Syllable::Left(x)), Syllable::Left(y)) => Some(Syllable::Left(self.0.multiply(x, y)?)),
            (Some(Syllable::Right(x)), Syllable::Right(y)) => Some(Syllable::Right(self.1.multiply(x, y)?)),
            _ => None,
        };
        match merged {
            Some(m) => {
                out.pop();
                let trivial = match &m {
                    Syllable::Left(x) => self.0.is_identity(x),
                    Syllable::Right(y) => self.1.is_identity(y),
                };
                match trivial {
                    Some(true) => {}
                    Some(false) => out.push(m),
                    None => return Err(Unresolved("cannot decide whether a merged syllable is trivial".into())),
                }
            }
            None => out.push(s),
        }
        Ok(())
    }
}

impl<A: GroupModel, B: GroupModel> GroupModel for FreeProduct<A, B> {
    type Elem = Vec<Syllable<A::Elem, B::Elem>>;

    fn identity(&self) -> Self::Elem {
        vec![]
    }

    fn multiply(&self, a: &Self::Elem, b: &Self::Elem) -> std::result::Result<Self::Elem, Unresolved> {
        let mut out = a.clone();
        for s in b {
            self.push(&mut out, s.clone())?;
        }
        Ok(out)
    }

    fn inverse(&self, a: &Self::Elem) -> Self::Elem {
        a.iter()
            .rev()
            .map(|s| match s {
                Syllable::Left(x) => Syllable::Left(self.0.inverse(x)),
                Syllable::Right(y) => Syllable::Right(self.1.inverse(y)),
            })
            .collect()
    }

    fn is_identity(&self, a: &Self::Elem) -> Option<bool> {
        Some(a.is_empty())
    }

    fn canonical(&self) -> bool {
        self.0.canonical() && self.1.canonical()
    }

    fn display(&self, a: &Self::Elem) -> String {
        if a.is_empty() {
            return "1".into();
        }
        a.iter()
            .map(|s| match s {
                Syllable::Left(x) => format!("L[{}]", self.0.display(x)),
                Syllable::Right(y) => format!("R[{}]", self.1.display(y)),
            })
            .collect::<Vec<_>>()
            .join(".")
    }

    fn parse(&self, text: &str) -> Result<Self::Elem> {
        let t = text.trim();
        if t == "1" {
            return Ok(vec![]);
        }
        let mut out = Vec::new();
        for part in t.split('.') {
            let s = if let Some(x) = part.strip_prefix("L[").and_then(|p| p.strip_suffix(']')) {
                Syllable::Left(self.0.parse(x)?)
            } else if let Some(y) = part.strip_prefix("R[").and_then(|p| p.strip_suffix(']')) {
                Syllable::Right(self.1.parse(y)?)
            } else {
                return Err(Error::parse(1, 1, format!("bad syllable `{part}`")));
            };
            self.push(&mut out, s).map_err(|u| Error::Precondition(u.0))?;
        }
        Ok(out)
    }
}

/// Finitely presented group with words as elements, simplified by free
/// reduction and a bounded Dehn-style rewriting. Equality of words is not
/// equality in the group, so identity tests fail unless the word vanishes.
#[derive(Debug, Clone)]
pub struct PresentedModel {
    pub names: Vec<String>,
    pub relators: Vec<Word>,
    /// Longest word a product may have before it is reported unresolved.
    pub max_len: usize,
    /// Every cyclic rotation of every relator and its inverse, as unit letters.
    rotations: Vec<Vec<(usize, i64)>>,
}

impl PresentedModel {
    pub fn new(names: Vec<String>, relators: Vec<Word>, max_len: usize) -> Self {
        let mut rotations = Vec::new();
        for r in &relators {
            for w in [r.reduced(), r.reduced().inverse()] {
                let u = w.syllables_unit();
                for k in 0..u.len() {
                    let mut rot = u[k..].to_vec();
                    rot.extend_from_slice(&u[..k]);
                    rotations.push(rot);
                }
            }
        }
        rotations.sort();
        rotations.dedup();
        PresentedModel { names, relators, max_len, rotations }
    }

    pub fn free(names: Vec<String>, max_len: usize) -> Self {
        PresentedModel::new(names, vec![], max_len)
    }

    /// Replace any subword that is more than half of a relator rotation
    /// by the inverse of the remaining part, until nothing applies.
    pub fn simplify(&self, w: &Word) -> Word {
        let mut u = w.reduced().syllables_unit();
        'outer: loop {
            for rot in &self.rotations {
                let m = rot.len();
                let half = m / 2 + 1;
                if half > u.len() {
                    continue;
                }
                for start in 0..=u.len() - half {
                    let mut k = 0;
                    while k < m && start + k < u.len() && u[start + k] == rot[k] {
                        k += 1;
                    }
                    if k >= half {
                        let rest: Vec<(usize, i64)> = rot[k..].iter().rev().map(|&(i, e)| (i, -e)).collect();
                        let mut v = u[..start].to_vec();
                        v.extend(rest);
                        v.extend_from_slice(&u[start + k..]);
                        u = Word::from_unit(&v).syllables_unit();
                        continue 'outer;
                    }
                }
            }
            return Word::from_unit(&u);
        }
    }
}

impl GroupModel for PresentedModel {
    type Elem = Word;

    fn identity(&self) -> Word {
        Word::empty()
    }

    fn multiply(&self, a: &Word, b: &Word) -> std::result::Result<Word, Unresolved> {
        let w = self.simplify(&a.concat(b));
        if w.length() as usize > self.max_len {
            return Err(Unresolved(format!("product {} exceeds the word-length bound", w.render(&self.names, "*"))));
        }
        Ok(w)
    }

    fn inverse(&self, a: &Word) -> Word {
        a.inverse()
    }

    fn is_identity(&self, a: &Word) -> Option<bool> {
        if a.reduced().is_empty() {
            Some(true)
        } else if self.relators.is_empty() {
            Some(false)
        } else {
            None
        }
    }

    fn canonical(&self) -> bool {
        self.relators.is_empty()
    }

    fn display(&self, a: &Word) -> String {
        a.render(&self.names, "*")
    }

    fn parse(&self, text: &str) -> Result<Word> {
        let spaced = text.replace('*', " ");
        Ok(self.simplify(&Word::parse_spaced(&spaced, &self.names)?))
    }
}

/// Letters of a word as `(generator, ±1)` helpers for callers building words.
pub fn unit_word(letters: &[(usize, i64)]) -> Word {
    Word::from_letters(letters.iter().map(|&(i, e)| Letter::new(i, e)).collect()).reduced()
}
