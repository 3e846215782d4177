//! Sofic entropy counts `H_{F,δ}` of subshifts given by allowed patterns on
//! a finite window.
//!
//! Pattern-oracle format:
//!
//! ```text
//! window k=2 0 1
//! allow 00
//! allow 01
//! allow 10
//! ```
//!
//! `k=` is optional and defaults to one more than the largest symbol used.

use std::collections::{BTreeSet, HashSet};

use num_bigint::BigUint;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::metric::perm::Permutation;
use crate::scalar::Ratio;

use super::amenable::restrictions;
use super::subshift::{log_rate, Subshift};

/// Default cap on `k^n`: covers `n <= 20` for `k = 2` and `n <= 12` for `k = 3`.
pub const DEFAULT_COLORING_CAP: u128 = 1 << 20;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PatternOracle {
    k: usize,
    window: Vec<String>,
    /// `None` allows every pattern.
    allowed: Option<HashSet<Vec<u8>>>,
}

impl PatternOracle {
    pub fn full(k: usize, window: Vec<String>) -> Result<Self> {
        check_shape(k, &window)?;
        Ok(PatternOracle { k, window, allowed: None })
    }

    pub fn new(k: usize, window: Vec<String>, patterns: impl IntoIterator<Item = Vec<u8>>) -> Result<Self> {
        check_shape(k, &window)?;
        let allowed: HashSet<Vec<u8>> = patterns.into_iter().collect();
        for p in &allowed {
            if p.len() != window.len() || p.iter().any(|&a| a as usize >= k) {
                return Err(Error::Precondition(format!("pattern {p:?} does not fit the window")));
            }
        }
        Ok(PatternOracle { k, window, allowed: Some(allowed) })
    }

    /// `Y_F` for a subshift over `Z`, `F` given by integer offsets.
    pub fn from_subshift(y: &Subshift, offsets: &BTreeSet<i64>, memo_cap: usize, word_cap: u128) -> Result<Self> {
        let pats = restrictions(y, offsets, memo_cap, word_cap)?;
        PatternOracle::new(y.alphabet(), offsets.iter().map(i64::to_string).collect(), pats)
    }

    /// Only the constant pattern `0`.
    pub fn fixed_point(k: usize, window: Vec<String>) -> Result<Self> {
        let m = window.len();
        PatternOracle::new(k, window, [vec![0u8; m]])
    }

    pub fn alphabet(&self) -> usize {
        self.k
    }

    pub fn window(&self) -> &[String] {
        &self.window
    }

    pub fn allows(&self, pattern: &[u8]) -> bool {
        self.allowed.as_ref().is_none_or(|s| s.contains(pattern))
    }

    /// Whether some pattern on the window is excluded.
    pub fn is_proper(&self) -> bool {
        match &self.allowed {
            None => false,
            Some(s) => (s.len() as u128) < (self.k as u128).saturating_pow(self.window.len() as u32),
        }
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut header: Option<(Option<usize>, Vec<String>)> = None;
        let mut patterns = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let ln = i + 1;
            if let Some(rest) = line.strip_prefix("window") {
                let mut k = None;
                let mut names = Vec::new();
                for t in rest.split_whitespace() {
                    match t.strip_prefix("k=") {
                        Some(v) => {
                            k = Some(v.parse().map_err(|_| Error::parse(ln, 1, format!("bad alphabet size `{v}`")))?)
                        }
                        None => names.push(t.to_string()),
                    }
                }
                if names.is_empty() {
                    return Err(Error::parse(ln, 1, "empty window"));
                }
                header = Some((k, names));
            } else if let Some(rest) = line.strip_prefix("allow") {
                let Some((_, names)) = &header else {
                    return Err(Error::parse(ln, 1, "`allow` before `window`"));
                };
                let rest = rest.trim();
                let toks: Vec<&str> = if rest.contains(',') {
                    rest.split(',').map(str::trim).collect()
                } else {
                    rest.split("").filter(|t| !t.is_empty()).collect()
                };
                let p = toks
                    .iter()
                    .map(|t| t.parse::<u8>().map_err(|_| Error::parse(ln, 7, format!("bad symbol `{t}`"))))
                    .collect::<Result<Vec<u8>>>()?;
                if p.len() != names.len() {
                    return Err(Error::parse(
                        ln,
                        7,
                        format!("pattern has {} symbols, window has {}", p.len(), names.len()),
                    ));
                }
                patterns.push(p);
            } else {
                return Err(Error::parse(ln, 1, format!("unexpected line `{line}`")));
            }
        }
        let (k, names) = header.ok_or_else(|| Error::parse(1, 1, "missing `window` line"))?;
        let k = k.unwrap_or_else(|| patterns.iter().flatten().map(|&a| a as usize + 1).max().unwrap_or(1).max(2));
        PatternOracle::new(k, names, patterns)
    }

    pub fn to_text(&self) -> String {
        let mut s = format!("window k={} {}\n", self.k, self.window.join(" "));
        if let Some(set) = &self.allowed {
            let mut pats: Vec<&Vec<u8>> = set.iter().collect();
            pats.sort();
            for p in pats {
                let body: Vec<String> = p.iter().map(u8::to_string).collect();
                s.push_str(&format!("allow {}\n", body.join(if self.k > 10 { "," } else { "" })));
            }
        } else {
            // every pattern
            let m = self.window.len() as u32;
            for code in 0..(self.k as u64).pow(m) {
                let mut c = code;
                let mut p = vec![0u8; m as usize];
                for slot in p.iter_mut().rev() {
                    *slot = (c % self.k as u64) as u8;
                    c /= self.k as u64;
                }
                let body: Vec<String> = p.iter().map(u8::to_string).collect();
                s.push_str(&format!("allow {}\n", body.join(if self.k > 10 { "," } else { "" })));
            }
        }
        s
    }
}

fn check_shape(k: usize, window: &[String]) -> Result<()> {
    if !(1..=256).contains(&k) {
        return Err(Error::Precondition(format!("alphabet size {k} must be in 1..=256")));
    }
    if window.is_empty() {
        return Err(Error::EmptyDomain);
    }
    Ok(())
}

/// The permutations `σ_γ` for the window elements, in window order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SoficMap {
    n: usize,
    perms: Vec<Permutation>,
}

impl SoficMap {
    pub fn new(perms: Vec<Permutation>) -> Result<Self> {
        let n = perms.first().ok_or(Error::EmptyDomain)?.degree();
        if let Some(p) = perms.iter().find(|p| p.degree() != n) {
            return Err(Error::DegreeMismatch(n, p.degree()));
        }
        Ok(SoficMap { n, perms })
    }

    /// For `Γ = Z`: `σ_m` is the `m`-th power of the cycle `i -> i + 1`.
    pub fn cyclic(n: usize, offsets: &[i64]) -> Result<Self> {
        if n == 0 {
            return Err(Error::Precondition("degree must be positive".into()));
        }
        let c = Permutation::shift(n);
        SoficMap::new(offsets.iter().map(|&m| c.pow(m)).collect())
    }

    pub fn degree(&self) -> usize {
        self.n
    }

    pub fn perms(&self) -> &[Permutation] {
        &self.perms
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SoficCount {
    pub n: usize,
    pub count: BigUint,
    /// `(1/n) log count`.
    pub rate: f64,
    /// True when `δ > 0`: the count is a lower bound for `H_{F,δ}`.
    pub lower_bound: bool,
}

/// Count colorings `c ∈ A^n` whose pattern `γ ↦ c(σ_γ^-1(i))` is allowed.
///
/// With `δ = 0` every `i` must pass and the count is exact. With `δ > 0` a
/// coloring is counted when at least a `1 - δ` fraction of the `i` pass,
/// which suffices for membership.
pub fn sofic_entropy_count(sigma: &SoficMap, oracle: &PatternOracle, delta: Ratio, cap: u128) -> Result<SoficCount> {
    if sigma.perms.len() != oracle.window.len() {
        return Err(Error::Precondition(format!(
            "sofic map has {} permutations, window has {} elements",
            sigma.perms.len(),
            oracle.window.len()
        )));
    }
    if delta < Ratio::from_integer(0) {
        return Err(Error::Precondition("δ must be nonnegative".into()));
    }
    let n = sigma.n;
    let k = oracle.k as u128;
    let total = k.checked_pow(n as u32).filter(|&t| t <= cap);
    let Some(total) = total else {
        return Err(Error::EnumerationCap { order: k.saturating_pow(n as u32), cap });
    };
    let inv: Vec<Vec<usize>> = sigma.perms.iter().map(|p| p.inverse().images().to_vec()).collect();
    // need good * den >= (den - num) * n
    let (num, den) = (*delta.numer() as i128, *delta.denom() as i128);
    let need = |good: usize| good as i128 * den >= (den - num) * n as i128;
    const BLOCK: u128 = 1 << 12;
    let blocks = total.div_ceil(BLOCK);
    let count: u128 = (0..blocks)
        .into_par_iter()
        .map(|b| {
            let mut c = vec![0u8; n];
            let mut pat = vec![0u8; inv.len()];
            let mut hits = 0u128;
            for code in b * BLOCK..((b + 1) * BLOCK).min(total) {
                let mut x = code;
                for slot in c.iter_mut() {
                    *slot = (x % k) as u8;
                    x /= k;
                }
                let mut good = 0;
                for i in 0..n {
                    for (slot, row) in pat.iter_mut().zip(&inv) {
                        *slot = c[row[i]];
                    }
                    if oracle.allows(&pat) {
                        good += 1;
                    }
                }
                if need(good) {
                    hits += 1;
                }
            }
            hits
        })
        .sum();
    let count = BigUint::from(count);
    Ok(SoficCount { n, rate: log_rate(&count, n), count, lower_bound: delta > Ratio::from_integer(0) })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::ratio;

    fn names(v: &[&str]) -> Vec<String> {
        v.iter().map(|s| s.to_string()).collect()
    }

    fn golden_oracle() -> PatternOracle {
        PatternOracle::new(2, names(&["0", "1"]), [vec![0, 0], vec![0, 1], vec![1, 0]]).unwrap()
    }

    fn lucas(n: usize) -> u128 {
        let (mut a, mut b) = (2u128, 1u128);
        for _ in 0..n {
            (a, b) = (b, a + b);
        }
        a
    }

    /// Cyclic binary strings of length n without two adjacent ones.
    fn brute_cyclic_golden(n: usize) -> u128 {
        (0u32..1 << n).filter(|&c| (0..n).all(|i| !(c >> i & 1 == 1 && c >> ((i + 1) % n) & 1 == 1))).count() as u128
    }

    #[test]
    fn examples() {
        let z = SoficMap::cyclic(10, &[0, 1]).unwrap();
        let full = PatternOracle::full(2, names(&["0", "1"])).unwrap();
        let r = sofic_entropy_count(&z, &full, ratio(0, 1), DEFAULT_COLORING_CAP).unwrap();
        assert_eq!(r.count, BigUint::from(1024u32));
        assert_eq!(r.rate, 2f64.ln());
        let r = sofic_entropy_count(&z, &golden_oracle(), ratio(0, 1), DEFAULT_COLORING_CAP).unwrap();
        assert_eq!(r.count, BigUint::from(123u32));
        assert_eq!(brute_cyclic_golden(10), 123);
        let fixed = PatternOracle::fixed_point(2, names(&["0", "1"])).unwrap();
        let r = sofic_entropy_count(&z, &fixed, ratio(0, 1), DEFAULT_COLORING_CAP).unwrap();
        assert_eq!(r.count, BigUint::from(1u32));
    }

    #[test]
    fn golden_counts_are_lucas() {
        for n in 3..=14 {
            let z = SoficMap::cyclic(n, &[0, 1]).unwrap();
            let r = sofic_entropy_count(&z, &golden_oracle(), ratio(0, 1), DEFAULT_COLORING_CAP).unwrap();
            assert_eq!(r.count, BigUint::from(lucas(n)));
            assert_eq!(r.count, BigUint::from(brute_cyclic_golden(n)));
        }
    }

    #[test]
    fn oracle_from_subshift() {
        let offsets: BTreeSet<i64> = [0, 1].into_iter().collect();
        let o = PatternOracle::from_subshift(&Subshift::golden_mean(), &offsets, 1 << 10, 1 << 10).unwrap();
        assert_eq!(o, golden_oracle());
        assert!(o.is_proper());
        assert!(!PatternOracle::full(3, names(&["a"])).unwrap().is_proper());
    }

    #[test]
    fn positive_delta_is_monotone() {
        let z = SoficMap::cyclic(10, &[0, 1]).unwrap();
        let o = golden_oracle();
        let mut last = BigUint::from(0u32);
        for d in [ratio(0, 1), ratio(1, 10), ratio(1, 5), ratio(1, 2), ratio(1, 1)] {
            let r = sofic_entropy_count(&z, &o, d, DEFAULT_COLORING_CAP).unwrap();
            assert!(r.count >= last);
            assert_eq!(r.lower_bound, d > ratio(0, 1));
            last = r.count;
        }
        assert_eq!(last, BigUint::from(1024u32));
    }

    #[test]
    fn caps_and_shapes() {
        let z = SoficMap::cyclic(21, &[0, 1]).unwrap();
        let full = PatternOracle::full(2, names(&["0", "1"])).unwrap();
        assert!(matches!(
            sofic_entropy_count(&z, &full, ratio(0, 1), DEFAULT_COLORING_CAP),
            Err(Error::EnumerationCap { .. })
        ));
        let three = PatternOracle::full(3, names(&["0", "1"])).unwrap();
        assert!(sofic_entropy_count(
            &SoficMap::cyclic(12, &[0, 1]).unwrap(),
            &three,
            ratio(0, 1),
            DEFAULT_COLORING_CAP
        )
        .is_ok());
        let one = SoficMap::cyclic(5, &[0]).unwrap();
        assert!(sofic_entropy_count(&one, &full, ratio(0, 1), DEFAULT_COLORING_CAP).is_err());
    }

    #[test]
    fn oracle_text() {
        let o = PatternOracle::parse("window 0 1\nallow 00\nallow 01\nallow 10\n").unwrap();
        assert_eq!(o, golden_oracle());
        assert_eq!(PatternOracle::parse(&o.to_text()).unwrap(), o);
        let f = PatternOracle::full(2, names(&["0", "1"])).unwrap();
        assert!(PatternOracle::parse(&f.to_text()).unwrap().allows(&[1, 1]));
        assert!(matches!(PatternOracle::parse("window 0 1\nallow 0\n"), Err(Error::Parse { line: 2, .. })));
    }
}
