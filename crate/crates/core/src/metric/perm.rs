//! Permutations of `{0..n-1}` with the normalized Hamming length.
//!
//! Composition is `(s * t)(i) = s(t(i))`: the right factor acts first.

use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::error::{Error, Result};
use crate::scalar::Ratio;

/// Default cap on the number of points of a generated permutation.
pub const DEFAULT_DEGREE_CAP: usize = 10_000_000;

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    images: Vec<usize>,
}

impl Permutation {
    pub fn new(images: Vec<usize>) -> Result<Self> {
        if images.is_empty() {
            return Err(Error::InvalidPermutation("degree must be positive".into()));
        }
        let n = images.len();
        let mut seen = vec![false; n];
        for &x in &images {
            if x >= n {
                return Err(Error::InvalidPermutation(format!("image {x} out of range for degree {n}")));
            }
            if seen[x] {
                return Err(Error::InvalidPermutation(format!("image {x} repeated")));
            }
            seen[x] = true;
        }
        Ok(Permutation { images })
    }

    /// Caller guarantees `images` is a bijection.
    pub(crate) fn from_images_unchecked(images: Vec<usize>) -> Self {
        debug_assert!(Permutation::new(images.clone()).is_ok());
        Permutation { images }
    }

    /// Extend an injective partial map to a permutation: the undefined
    /// points, in increasing order, go to the unused images in increasing
    /// order.
    pub fn complete_partial(partial: &[Option<usize>]) -> Result<Self> {
        let n = partial.len();
        let mut used = vec![false; n];
        for &x in partial.iter().flatten() {
            if x >= n || used[x] {
                return Err(Error::InvalidPermutation(format!("partial map is not injective at image {x}")));
            }
            used[x] = true;
        }
        let mut free = (0..n).filter(|&x| !used[x]);
        let images = partial.iter().map(|p| p.unwrap_or_else(|| free.next().expect("counts agree"))).collect();
        Ok(Permutation::from_images_unchecked(images))
    }

    pub fn identity(n: usize) -> Self {
        Permutation { images: (0..n).collect() }
    }

    /// The cycle `i -> i + 1 mod n`.
    pub fn shift(n: usize) -> Self {
        Permutation { images: (0..n).map(|i| (i + 1) % n).collect() }
    }

    pub fn transposition(n: usize, a: usize, b: usize) -> Result<Self> {
        Permutation::from_cycles(n, &[&[a, b]])
    }

    /// Build from disjoint cycles; `&[&[0, 1, 2]]` maps 0 to 1, 1 to 2, 2 to 0.
    pub fn from_cycles(n: usize, cycles: &[&[usize]]) -> Result<Self> {
        let mut images: Vec<usize> = (0..n).collect();
        let mut touched = vec![false; n];
        for cycle in cycles {
            for (k, &a) in cycle.iter().enumerate() {
                if a >= n || touched[a] {
                    return Err(Error::InvalidPermutation(format!("bad cycle point {a}")));
                }
                touched[a] = true;
                images[a] = cycle[(k + 1) % cycle.len()];
            }
        }
        Permutation::new(images)
    }

    pub fn random<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Self {
        let mut images: Vec<usize> = (0..n).collect();
        images.shuffle(rng);
        Permutation { images }
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    #[inline]
    pub fn apply(&self, i: usize) -> usize {
        self.images[i]
    }

    /// `self * other`, i.e. apply `other` first. Panics on a degree mismatch.
    pub fn compose(&self, other: &Permutation) -> Permutation {
        assert_eq!(self.degree(), other.degree(), "composing permutations of different degree");
        Permutation { images: other.images.iter().map(|&j| self.images[j]).collect() }
    }

    pub fn try_compose(&self, other: &Permutation) -> Result<Permutation> {
        if self.degree() != other.degree() {
            return Err(Error::DegreeMismatch(self.degree(), other.degree()));
        }
        Ok(self.compose(other))
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0; self.degree()];
        for (i, &j) in self.images.iter().enumerate() {
            inv[j] = i;
        }
        Permutation { images: inv }
    }

    pub fn pow(&self, exp: i64) -> Permutation {
        let base = if exp < 0 { self.inverse() } else { self.clone() };
        let mut e = exp.unsigned_abs();
        let mut acc = Permutation::identity(self.degree());
        let mut sq = base;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.compose(&sq);
            }
            sq = sq.compose(&sq);
            e >>= 1;
        }
        acc
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &j)| i == j)
    }

    pub fn fixed_point_count(&self) -> usize {
        self.images.iter().enumerate().filter(|&(i, &j)| i == j).count()
    }

    pub fn moved_count(&self) -> usize {
        self.degree() - self.fixed_point_count()
    }

    /// `|{i : s(i) != i}| / n`.
    pub fn hamming_length(&self) -> Ratio {
        Ratio::new(self.moved_count() as i64, self.degree() as i64)
    }

    /// `l(s t^-1)`, the number of points where the two disagree over `n`.
    pub fn hamming_distance(&self, other: &Permutation) -> Ratio {
        assert_eq!(self.degree(), other.degree());
        let diff = self.images.iter().zip(&other.images).filter(|(a, b)| a != b).count();
        Ratio::new(diff as i64, self.degree() as i64)
    }

    /// Cycles including fixed points, each starting at its least point,
    /// ordered by that point.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let n = self.degree();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let mut cycle = vec![start];
            seen[start] = true;
            let mut j = self.images[start];
            while j != start {
                seen[j] = true;
                cycle.push(j);
                j = self.images[j];
            }
            out.push(cycle);
        }
        out
    }

    pub fn cycle_count(&self) -> usize {
        self.cycles().len()
    }

    /// Cycle lengths in nonincreasing order.
    pub fn cycle_type(&self) -> Vec<usize> {
        let mut t: Vec<usize> = self.cycles().iter().map(Vec::len).collect();
        t.sort_unstable_by(|a, b| b.cmp(a));
        t
    }

    pub fn order(&self) -> u64 {
        self.cycles().iter().fold(1u64, |acc, c| num_integer::lcm(acc, c.len() as u64))
    }

    /// `s^{(x)k}` on `n^k` points, big-endian mixed radix:
    /// `(i_1, .., i_k) -> (s(i_1), .., s(i_k))`.
    pub fn tensor_power(&self, k: u32, cap: usize) -> Result<Permutation> {
        if k == 0 {
            return Err(Error::Precondition("tensor power needs k >= 1".into()));
        }
        let n = self.degree() as u128;
        let total = n.checked_pow(k).unwrap_or(u128::MAX);
        if total > cap as u128 {
            return Err(Error::DegreeOverflow { requested: total, cap });
        }
        let mut acc = Permutation::identity(1);
        for _ in 0..k {
            acc = acc.direct_tensor(self, cap)?;
        }
        Ok(acc)
    }

    /// `(s0 (x) s1)(i m + j) = s0(i) m + s1(j)` on `n m` points.
    pub fn direct_tensor(&self, other: &Permutation, cap: usize) -> Result<Permutation> {
        let (n, m) = (self.degree(), other.degree());
        let total = n as u128 * m as u128;
        if total > cap as u128 {
            return Err(Error::DegreeOverflow { requested: total, cap });
        }
        let mut images = Vec::with_capacity(n * m);
        for i in 0..n {
            let base = self.images[i] * m;
            images.extend(other.images.iter().map(|&j| base + j));
        }
        Ok(Permutation { images })
    }

    /// `k = N / n` disjoint copies of `self` on consecutive blocks of `N`,
    /// identity on the `N mod n` remaining points.
    pub fn block_embed(&self, target: usize) -> Result<Permutation> {
        let n = self.degree();
        if target <= n {
            return Err(Error::Precondition(format!("block embedding needs N > n (N = {target}, n = {n})")));
        }
        let k = target / n;
        let mut images: Vec<usize> = (0..target).collect();
        for block in 0..k {
            let off = block * n;
            for i in 0..n {
                images[off + i] = off + self.images[i];
            }
        }
        Ok(Permutation { images })
    }

    /// Lexicographically next permutation of the same degree, if any.
    pub fn next_lex(&self) -> Option<Permutation> {
        let mut v = self.images.clone();
        let n = v.len();
        if n < 2 {
            return None;
        }
        let mut i = n - 1;
        while i > 0 && v[i - 1] >= v[i] {
            i -= 1;
        }
        if i == 0 {
            return None;
        }
        let mut j = n - 1;
        while v[j] <= v[i - 1] {
            j -= 1;
        }
        v.swap(i - 1, j);
        v[i..].reverse();
        Some(Permutation { images: v })
    }

    /// All of `S_n` in lexicographic order of image vectors.
    pub fn all(n: usize) -> impl Iterator<Item = Permutation> {
        std::iter::successors(Some(Permutation::identity(n)), Permutation::next_lex)
    }
}

/// Number of elements of `S_n`, saturating.
pub fn factorial(n: usize) -> u128 {
    (1..=n as u128).try_fold(1u128, |acc, k| acc.checked_mul(k)).unwrap_or(u128::MAX)
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "perm {}:", self.degree())?;
        for x in &self.images {
            write!(f, " {x}")?;
        }
        Ok(())
    }
}

impl FromStr for Permutation {
    type Err = Error;

    /// Accepts `perm n: i0 .. i(n-1)` or the short form `n: i0 ..`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let body = s.strip_prefix("perm").unwrap_or(s);
        let (head, rest) = body.split_once(':').ok_or_else(|| Error::parse(1, 1, "expected `perm n: images`"))?;
        let n: usize = head.trim().parse().map_err(|_| Error::parse(1, 1, format!("bad degree `{}`", head.trim())))?;
        let images = rest
            .split_whitespace()
            .map(|t| t.parse::<usize>().map_err(|_| Error::parse(1, 1, format!("bad image `{t}`"))))
            .collect::<Result<Vec<_>>>()?;
        if images.len() != n {
            return Err(Error::parse(1, 1, format!("expected {n} images, found {}", images.len())));
        }
        Permutation::new(images)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::ratio;

    #[test]
    fn partial_completion_is_lexicographic() {
        let p = Permutation::complete_partial(&[Some(1), Some(2), None, Some(4), None]).unwrap();
        assert_eq!(p.images(), &[1, 2, 0, 4, 3]);
        assert!(Permutation::complete_partial(&[Some(0), Some(0)]).is_err());
    }

    #[test]
    fn hamming_examples() {
        assert_eq!(Permutation::identity(7).hamming_length(), ratio(0, 1));
        assert_eq!(Permutation::transposition(4, 0, 1).unwrap().hamming_length(), ratio(1, 2));
        assert_eq!(Permutation::shift(5).hamming_length(), ratio(1, 1));
    }

    #[test]
    fn composition_applies_right_factor_first() {
        let s = Permutation::transposition(3, 0, 1).unwrap();
        let t = Permutation::transposition(3, 1, 2).unwrap();
        // s(t(2)) = s(1) = 0
        assert_eq!(s.compose(&t).apply(2), 0);
    }

    #[test]
    fn rejects_non_bijections() {
        assert!(Permutation::new(vec![0, 0]).is_err());
        assert!(Permutation::new(vec![0, 2]).is_err());
        assert!(Permutation::new(vec![]).is_err());
    }

    #[test]
    fn tensor_power_examples() {
        let id = Permutation::identity(3);
        assert!(id.tensor_power(3, DEFAULT_DEGREE_CAP).unwrap().is_identity());
        let c = Permutation::shift(3);
        assert_eq!(c.tensor_power(2, DEFAULT_DEGREE_CAP).unwrap().hamming_length(), ratio(1, 1));
        let t = Permutation::transposition(3, 0, 1).unwrap();
        assert_eq!(t.tensor_power(2, DEFAULT_DEGREE_CAP).unwrap().hamming_length(), ratio(8, 9));
    }

    #[test]
    fn tensor_power_is_big_endian() {
        let t = Permutation::transposition(2, 0, 1).unwrap();
        let id = Permutation::identity(2);
        // s (x) id moves the high digit
        let p = t.direct_tensor(&id, 100).unwrap();
        assert_eq!(p.images(), &[2, 3, 0, 1]);
    }

    #[test]
    fn tensor_power_overflow() {
        let t = Permutation::shift(10);
        assert!(matches!(t.tensor_power(8, 1000), Err(Error::DegreeOverflow { .. })));
    }

    #[test]
    fn direct_tensor_examples() {
        let t2 = Permutation::transposition(2, 0, 1).unwrap();
        let t3 = Permutation::transposition(3, 0, 1).unwrap();
        let id2 = Permutation::identity(2);
        let id3 = Permutation::identity(3);
        assert!(id2.direct_tensor(&id3, 100).unwrap().is_identity());
        assert_eq!(t2.direct_tensor(&id3, 100).unwrap().hamming_length(), ratio(1, 1));
        assert_eq!(id2.direct_tensor(&t3, 100).unwrap().hamming_length(), ratio(2, 3));
    }

    #[test]
    fn block_embed_examples() {
        let t = Permutation::transposition(2, 0, 1).unwrap();
        assert_eq!(t.block_embed(6).unwrap().hamming_length(), ratio(1, 1));
        assert_eq!(t.block_embed(7).unwrap().hamming_length(), ratio(6, 7));
        assert!(Permutation::identity(3).block_embed(10).unwrap().is_identity());
        assert!(t.block_embed(2).is_err());
    }

    #[test]
    fn cycles_and_order() {
        let p = Permutation::from_cycles(6, &[&[0, 1, 2], &[3, 4]]).unwrap();
        assert_eq!(p.cycle_count(), 3);
        assert_eq!(p.cycle_type(), vec![3, 2, 1]);
        assert_eq!(p.order(), 6);
        assert!(p.pow(6).is_identity());
        assert_eq!(p.pow(-1), p.inverse());
    }

    #[test]
    fn enumerates_symmetric_group() {
        assert_eq!(Permutation::all(4).count(), 24);
        assert_eq!(Permutation::all(1).count(), 1);
    }

    #[test]
    fn text_format() {
        let p: Permutation = "perm 4: 1 0 2 3".parse().unwrap();
        assert_eq!(p, Permutation::transposition(4, 0, 1).unwrap());
        let q: Permutation = "4: 1 0 2 3".parse().unwrap();
        assert_eq!(p, q);
        assert_eq!(p.to_string(), "perm 4: 1 0 2 3");
        assert!("perm 3: 0 1".parse::<Permutation>().is_err());
    }
}
