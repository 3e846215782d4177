//! Free products of approximate morphisms through a ball of a free group.
//!
//! The auxiliary group acts on the ball `B` of radius `N` in the free group
//! on `n^2` letters `v_ij`. Right multiplication by a letter is a partial
//! bijection of `B`; it is completed by order-preserving matching of the
//! leftover points, which makes the completion of `v^-1` the inverse of
//! the completion of `v`.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::metric::perm::Permutation;

use super::model::{FreeProduct, GroupModel, Syllable};
use super::morphism::ApproxMorphism;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FreeProductCaps {
    pub max_radius: usize,
    pub max_n: usize,
    /// Bound on `|F| * n^2 * |B|`, the number of stored image entries.
    pub max_entries: u128,
}

impl Default for FreeProductCaps {
    fn default() -> Self {
        FreeProductCaps { max_radius: 3, max_n: 4, max_entries: 20_000_000 }
    }
}

#[derive(Debug, Clone)]
pub struct FreeProductMorphism<A: GroupModel, B: GroupModel> {
    pub morphism: ApproxMorphism<FreeProduct<A, B>, Permutation>,
    pub ball_size: usize,
    pub radius: usize,
}

/// Words of the ball as letter codes `2 * generator + (1 if inverse)`.
struct Ball {
    words: Vec<Vec<u8>>,
    index: HashMap<Vec<u8>, usize>,
}

impl Ball {
    fn new(rank: usize, radius: usize) -> Ball {
        let mut words: Vec<Vec<u8>> = vec![vec![]];
        let mut start = 0;
        for _ in 0..radius {
            let end = words.len();
            for w in start..end {
                for c in 0..(2 * rank) as u8 {
                    if words[w].last() == Some(&(c ^ 1)) {
                        continue;
                    }
                    let mut v = words[w].clone();
                    v.push(c);
                    words.push(v);
                }
            }
            start = end;
        }
        let index = words.iter().enumerate().map(|(i, w)| (w.clone(), i)).collect();
        Ball { words, index }
    }

    /// Right multiplication by the letter `c`, completed.
    fn right_mul(&self, c: u8) -> Permutation {
        let partial: Vec<Option<usize>> = self
            .words
            .iter()
            .map(|w| {
                let mut v = w.clone();
                if v.last() == Some(&(c ^ 1)) {
                    v.pop();
                } else {
                    v.push(c);
                }
                self.index.get(&v).copied()
            })
            .collect();
        Permutation::complete_partial(&partial).expect("right multiplication is injective")
    }
}

fn check_nice<M: GroupModel>(phi: &ApproxMorphism<M, Permutation>, side: &str) -> Result<()> {
    let m = phi.model();
    for (g, s) in phi.entries() {
        match m.is_identity(g) {
            Some(true) => {
                if !s.is_identity() {
                    return Err(Error::NotNice(format!("{side}: identity maps to a nonidentity permutation")));
                }
            }
            Some(false) => {
                if s.fixed_point_count() > 0 {
                    return Err(Error::NotNice(format!("{side}: image of {} has fixed points", m.display(g))));
                }
                match phi.get(&m.inverse(g)) {
                    Some(t) if *t == s.inverse() => {}
                    _ => {
                        return Err(Error::NotNice(format!(
                            "{side}: image of the inverse of {} is not the inverse image",
                            m.display(g)
                        )))
                    }
                }
            }
            None => return Err(Error::NotNice(format!("{side}: cannot decide triviality of {}", m.display(g)))),
        }
    }
    Ok(())
}

/// Approximate morphism of `Γ0 * Γ1` on the normal forms of at most
/// `radius` syllables taken from the two domains, into permutations of
/// `n x n x B`, numbered `(i n + j) |B| + b`.
pub fn free_product_morphism<A, B>(
    phi0: &ApproxMorphism<A, Permutation>,
    phi1: &ApproxMorphism<B, Permutation>,
    radius: usize,
    caps: FreeProductCaps,
) -> Result<FreeProductMorphism<A, B>>
where
    A: GroupModel + Clone,
    B: GroupModel + Clone,
{
    let n = phi0.dim();
    if phi1.dim() != n {
        return Err(Error::DegreeMismatch(n, phi1.dim()));
    }
    if radius > caps.max_radius || n > caps.max_n {
        return Err(Error::Precondition(format!(
            "free product needs N <= {} and n <= {} (got N = {radius}, n = {n})",
            caps.max_radius, caps.max_n
        )));
    }
    check_nice(phi0, "left factor")?;
    check_nice(phi1, "right factor")?;
    let (m0, m1) = (phi0.model(), phi1.model());
    let left: Vec<&A::Elem> = phi0.domain().filter(|g| m0.is_identity(g) == Some(false)).collect();
    let right: Vec<&B::Elem> = phi1.domain().filter(|h| m1.is_identity(h) == Some(false)).collect();

    // normal forms with at most `radius` syllables
    type Form<X, Y> = Vec<Syllable<X, Y>>;
    let mut forms: Vec<Form<A::Elem, B::Elem>> = vec![vec![]];
    let mut layer = forms.clone();
    for _ in 0..radius {
        let mut next = Vec::new();
        for f in &layer {
            let last_left = matches!(f.last(), Some(Syllable::Left(_)));
            let last_right = matches!(f.last(), Some(Syllable::Right(_)));
            if !last_left {
                for g in &left {
                    let mut v = f.clone();
                    v.push(Syllable::Left((*g).clone()));
                    next.push(v);
                }
            }
            if !last_right {
                for h in &right {
                    let mut v = f.clone();
                    v.push(Syllable::Right((*h).clone()));
                    next.push(v);
                }
            }
        }
        forms.extend(next.iter().cloned());
        layer = next;
    }

    let rank = n * n;
    let ball_len = 1 + (1..=radius).map(|k| 2 * rank * (2 * rank - 1).pow(k as u32 - 1)).sum::<usize>();
    let degree = rank * ball_len;
    let entries_needed = forms.len() as u128 * degree as u128;
    if entries_needed > caps.max_entries {
        return Err(Error::WorkCap { work: entries_needed, cap: caps.max_entries });
    }
    let ball = Ball::new(rank, radius);
    debug_assert_eq!(ball.words.len(), ball_len);
    let moves: Vec<Permutation> = (0..2 * rank as u8).map(|c| ball.right_mul(c)).collect();
    let point = |i: usize, j: usize, b: usize| (i * n + j) * ball_len + b;

    let lift_left = |s: &Permutation| {
        let mut images = vec![0; degree];
        for i in 0..n {
            for j in 0..n {
                for b in 0..ball_len {
                    images[point(i, j, b)] = point(s.apply(i), j, b);
                }
            }
        }
        Permutation::new(images)
    };
    let lift_right = |s: &Permutation| {
        let mut images = vec![0; degree];
        for i in 0..n {
            for j in 0..n {
                let j2 = s.apply(j);
                // right-multiply by v_ij^-1, then by v_{i, s(j)}
                let undo = &moves[2 * (i * n + j) + 1];
                let redo = &moves[2 * (i * n + j2)];
                for b in 0..ball_len {
                    images[point(i, j, b)] = point(i, j2, redo.apply(undo.apply(b)));
                }
            }
        }
        Permutation::new(images)
    };
    let mut left_img = HashMap::new();
    for g in &left {
        left_img.insert((*g).clone(), lift_left(phi0.get(g).expect("domain"))?);
    }
    let mut right_img = HashMap::new();
    for h in &right {
        right_img.insert((*h).clone(), lift_right(phi1.get(h).expect("domain"))?);
    }
    let mut entries = Vec::with_capacity(forms.len());
    for f in forms {
        let mut t = Permutation::identity(degree);
        for s in &f {
            let factor = match s {
                Syllable::Left(g) => &left_img[g],
                Syllable::Right(h) => &right_img[h],
            };
            t = t.compose(factor);
        }
        entries.push((f, t));
    }
    let model = FreeProduct(m0.clone(), m1.clone());
    Ok(FreeProductMorphism { morphism: ApproxMorphism::new(model, entries)?, ball_size: ball_len, radius })
}
