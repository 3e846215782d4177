//! Permutation tuples and their defect with respect to a presentation.

use std::fmt;

use crate::error::{Error, Result};
use crate::metric::perm::Permutation;
use crate::scalar::Ratio;

use super::presentation::Presentation;

/// Relators expanded to unit letters `(generator, inverted)`.
#[derive(Debug, Clone)]
pub(crate) struct Compiled {
    pub rels: Vec<Vec<(usize, bool)>>,
    pub gens: usize,
}

impl Compiled {
    pub fn new(p: &Presentation) -> Self {
        let rels =
            p.relators.iter().map(|w| w.syllables_unit().into_iter().map(|(i, e)| (i, e < 0)).collect()).collect();
        Compiled { rels, gens: p.names.len() }
    }

    /// Number of points moved by relator `r` under `(x, x^-1)` images.
    pub fn moved(&self, r: usize, xs: &[&[usize]], inv: &[&[usize]], scratch: &mut [usize]) -> usize {
        let n = scratch.len();
        for (i, s) in scratch.iter_mut().enumerate() {
            *s = i;
        }
        // left-to-right product: (w l)(i) = w(l(i)); apply letters right to left
        for &(g, neg) in self.rels[r].iter().rev() {
            let img = if neg { inv[g] } else { xs[g] };
            for s in scratch.iter_mut() {
                *s = img[*s];
            }
        }
        (0..n).filter(|&i| scratch[i] != i).count()
    }

    /// `n * defect` as an integer: `max_r moved(w_r) + n - min_j moved(x_j)`.
    pub fn scaled_defect(&self, xs: &[Permutation], invs: &[Permutation]) -> usize {
        let n = xs[0].degree();
        let x: Vec<&[usize]> = xs.iter().map(|p| p.images()).collect();
        let xi: Vec<&[usize]> = invs.iter().map(|p| p.images()).collect();
        let mut scratch = vec![0; n];
        let rel = (0..self.rels.len()).map(|r| self.moved(r, &x, &xi, &mut scratch)).max().unwrap_or(0);
        let min_moved = xs.iter().map(Permutation::moved_count).min().unwrap_or(0);
        rel + n - min_moved
    }

    pub fn is_exact(&self, xs: &[Permutation]) -> bool {
        let invs: Vec<Permutation> = xs.iter().map(Permutation::inverse).collect();
        let x: Vec<&[usize]> = xs.iter().map(|p| p.images()).collect();
        let xi: Vec<&[usize]> = invs.iter().map(|p| p.images()).collect();
        let mut scratch = vec![0; xs[0].degree()];
        (0..self.rels.len()).all(|r| self.moved(r, &x, &xi, &mut scratch) == 0)
    }
}

fn check_tuple(p: &Presentation, perms: &[Permutation]) -> Result<usize> {
    if perms.len() != p.names.len() {
        return Err(Error::Precondition(format!("{} generators but {} permutations", p.names.len(), perms.len())));
    }
    let n = perms[0].degree();
    if let Some(q) = perms.iter().find(|q| q.degree() != n) {
        return Err(Error::DegreeMismatch(n, q.degree()));
    }
    Ok(n)
}

/// `max_i l(w_i(t)) + 1 - min_j l(t_j)`, exactly.
pub fn presentation_defect(p: &Presentation, perms: &[Permutation]) -> Result<Ratio> {
    let n = check_tuple(p, perms)?;
    let invs: Vec<Permutation> = perms.iter().map(Permutation::inverse).collect();
    Ok(Ratio::new(Compiled::new(p).scaled_defect(perms, &invs) as i64, n as i64))
}

/// One permutation per generator, with its defect.
#[derive(Clone, PartialEq, Eq)]
pub struct TupleCandidate {
    perms: Vec<Permutation>,
    defect: Ratio,
}

impl TupleCandidate {
    pub fn new(p: &Presentation, perms: Vec<Permutation>) -> Result<Self> {
        let defect = presentation_defect(p, &perms)?;
        Ok(TupleCandidate { perms, defect })
    }

    pub(crate) fn from_parts(perms: Vec<Permutation>, defect: Ratio) -> Self {
        TupleCandidate { perms, defect }
    }

    pub fn identity(p: &Presentation, n: usize) -> Self {
        TupleCandidate::new(p, vec![Permutation::identity(n); p.names.len()]).expect("consistent")
    }

    pub fn degree(&self) -> usize {
        self.perms[0].degree()
    }

    pub fn perms(&self) -> &[Permutation] {
        &self.perms
    }

    pub fn defect(&self) -> Ratio {
        self.defect
    }

    pub fn into_perms(self) -> Vec<Permutation> {
        self.perms
    }

    /// `max_j l(t_j s_j^-1)`.
    pub fn distance(&self, other: &[Permutation]) -> Ratio {
        distance(&self.perms, other)
    }

    /// Ordering used to pick a winner among candidates: defect, then tuple.
    pub fn key(&self) -> (Ratio, &[Permutation]) {
        (self.defect, &self.perms)
    }
}

pub fn distance(a: &[Permutation], b: &[Permutation]) -> Ratio {
    a.iter().zip(b).map(|(x, y)| x.hamming_distance(y)).max().unwrap_or_else(|| Ratio::from_integer(0))
}

impl fmt::Debug for TupleCandidate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "TupleCandidate(defect {}, {:?})", self.defect, self.perms)
    }
}

/// Reads one permutation per line, in generator order.
pub fn parse_tuple(p: &Presentation, text: &str) -> Result<TupleCandidate> {
    let mut perms = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        // optional `name = ` prefix
        let body = match line.split_once('=') {
            Some((name, rest)) => {
                let want = p.names.get(perms.len()).map(String::as_str).unwrap_or("");
                if name.trim() != want {
                    return Err(Error::parse(
                        i + 1,
                        1,
                        format!("expected generator `{want}`, found `{}`", name.trim()),
                    ));
                }
                rest
            }
            None => line,
        };
        let q: Permutation = body.parse().map_err(|e| match e {
            Error::Parse { column, message, .. } => Error::Parse { line: i + 1, column, message },
            other => other,
        })?;
        perms.push(q);
    }
    TupleCandidate::new(p, perms)
}

pub fn write_tuple(p: &Presentation, t: &TupleCandidate) -> String {
    p.names.iter().zip(t.perms()).map(|(n, q)| format!("{n} = {q}\n")).collect()
}
