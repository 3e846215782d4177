//! Subshifts of finite type over `Z`: exact word counts and entropy
//! estimates.
//!
//! Text format:
//!
//! ```text
//! shift k=2
//! forbid 11
//! ```
//!
//! A word is a string of digits, or a comma-separated list when `k > 10`.

use std::collections::BTreeSet;
use std::fmt;

use nalgebra::DMatrix;
use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub const DEFAULT_MEMO_CAP: usize = 1 << 20;
/// Largest pruned state graph handed to the eigenvalue solver.
pub const SPECTRAL_STATE_LIMIT: usize = 256;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Subshift {
    k: usize,
    forbidden: Vec<Vec<u8>>,
}

impl Subshift {
    pub fn new(k: usize, forbidden: Vec<Vec<u8>>) -> Result<Self> {
        if !(1..=256).contains(&k) {
            return Err(Error::Precondition(format!("alphabet size {k} must be in 1..=256")));
        }
        for w in &forbidden {
            if w.is_empty() {
                return Err(Error::Precondition("forbidden words must be nonempty".into()));
            }
            if let Some(&a) = w.iter().find(|&&a| a as usize >= k) {
                return Err(Error::Precondition(format!("symbol {a} outside the alphabet of size {k}")));
            }
        }
        let mut forbidden = forbidden;
        forbidden.sort();
        forbidden.dedup();
        Ok(Subshift { k, forbidden })
    }

    pub fn full(k: usize) -> Result<Self> {
        Subshift::new(k, vec![])
    }

    /// No two adjacent ones.
    pub fn golden_mean() -> Self {
        Subshift::new(2, vec![vec![1, 1]]).expect("valid")
    }

    /// Binary sequences without `len` consecutive zeros.
    pub fn no_zero_run(len: usize) -> Self {
        Subshift::new(2, vec![vec![0; len]]).expect("valid")
    }

    /// `full<k>`, `golden`, `no000` (any run length of zeros).
    pub fn builtin(name: &str) -> Option<Self> {
        if name == "golden" {
            return Some(Subshift::golden_mean());
        }
        if let Some(k) = name.strip_prefix("full") {
            return k.parse().ok().and_then(|k| Subshift::full(k).ok());
        }
        let zeros = name.strip_prefix("no")?;
        (!zeros.is_empty() && zeros.bytes().all(|b| b == b'0')).then(|| Subshift::no_zero_run(zeros.len()))
    }

    pub fn alphabet(&self) -> usize {
        self.k
    }

    pub fn forbidden(&self) -> &[Vec<u8>] {
        &self.forbidden
    }

    /// Longest forbidden word, at least 1.
    pub fn memory(&self) -> usize {
        self.forbidden.iter().map(Vec::len).max().unwrap_or(1).max(1)
    }

    pub fn admissible(&self, w: &[u8]) -> bool {
        self.forbidden.iter().all(|f| !w.windows(f.len()).any(|s| s == f.as_slice()))
    }

    pub fn graph(&self, memo_cap: usize) -> Result<StateGraph> {
        StateGraph::build(self, memo_cap)
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut k = None;
        let mut forbidden = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let ln = i + 1;
            if let Some(rest) = line.strip_prefix("shift") {
                let v = rest.trim().strip_prefix("k=").ok_or_else(|| Error::parse(ln, 1, "expected `shift k=<k>`"))?;
                k = Some(v.parse::<usize>().map_err(|_| Error::parse(ln, 7, format!("bad alphabet size `{v}`")))?);
            } else if let Some(rest) = line.strip_prefix("forbid") {
                let kk = k.ok_or_else(|| Error::parse(ln, 1, "`forbid` before `shift k=`"))?;
                forbidden.push(parse_word(rest.trim(), kk).map_err(|m| Error::parse(ln, 8, m))?);
            } else {
                return Err(Error::parse(ln, 1, format!("unexpected line `{line}`")));
            }
        }
        let k = k.ok_or_else(|| Error::parse(1, 1, "missing `shift k=<k>`"))?;
        Subshift::new(k, forbidden)
    }
}

fn parse_word(s: &str, k: usize) -> std::result::Result<Vec<u8>, String> {
    let symbols: Vec<&str> = if s.contains(',') {
        s.split(',').map(str::trim).collect()
    } else {
        s.split("").filter(|t| !t.is_empty()).collect()
    };
    if symbols.is_empty() {
        return Err("empty word".into());
    }
    symbols
        .iter()
        .map(|t| match t.parse::<usize>() {
            Ok(a) if a < k => Ok(a as u8),
            _ => Err(format!("bad symbol `{t}` for alphabet size {k}")),
        })
        .collect()
}

fn write_word(w: &[u8], k: usize) -> String {
    if k > 10 {
        w.iter().map(u8::to_string).collect::<Vec<_>>().join(",")
    } else {
        w.iter().map(u8::to_string).collect()
    }
}

impl fmt::Display for Subshift {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "shift k={}", self.k)?;
        for w in &self.forbidden {
            writeln!(f, "forbid {}", write_word(w, self.k))?;
        }
        Ok(())
    }
}

/// Blocks of length `memory - 1` that occur in some point of the subshift,
/// with the admissible one-symbol extensions between them.
#[derive(Debug, Clone)]
pub struct StateGraph {
    k: usize,
    width: usize,
    states: Vec<Vec<u8>>,
    /// `edges[s]` lists `(symbol, target)`.
    edges: Vec<Vec<(u8, usize)>>,
}

impl StateGraph {
    fn build(y: &Subshift, memo_cap: usize) -> Result<Self> {
        let k = y.k;
        let width = y.memory() - 1;
        let total = (k as u128).checked_pow(width as u32).filter(|&t| t <= memo_cap as u128);
        let Some(total) = total else {
            return Err(Error::MemoCap { states: usize::MAX, cap: memo_cap });
        };
        let total = total as usize;
        let decode = |mut code: usize| {
            let mut w = vec![0u8; width];
            for slot in w.iter_mut().rev() {
                *slot = (code % k) as u8;
                code /= k;
            }
            w
        };
        let mut alive: Vec<bool> = (0..total).map(|c| y.admissible(&decode(c))).collect();
        let mut edges: Vec<Vec<(u8, usize)>> = vec![Vec::new(); total];
        let mut buf = Vec::with_capacity(width + 1);
        for c in 0..total {
            if !alive[c] {
                continue;
            }
            let w = decode(c);
            for a in 0..k as u8 {
                buf.clear();
                buf.extend_from_slice(&w);
                buf.push(a);
                // only factors ending at the new symbol can be new
                let ok = y.forbidden.iter().all(|f| !buf.ends_with(f));
                if ok {
                    let target = if width == 0 { 0 } else { (c % (total / k)) * k + a as usize };
                    edges[c].push((a, target));
                }
            }
        }
        // keep states on bi-infinite paths
        loop {
            let mut indeg = vec![0usize; total];
            for (c, es) in edges.iter().enumerate() {
                if alive[c] {
                    for &(_, t) in es {
                        if alive[t] {
                            indeg[t] += 1;
                        }
                    }
                }
            }
            let mut changed = false;
            for c in 0..total {
                if alive[c] && (indeg[c] == 0 || !edges[c].iter().any(|&(_, t)| alive[t])) {
                    alive[c] = false;
                    changed = true;
                }
            }
            if !changed {
                break;
            }
        }
        let index: Vec<Option<usize>> = {
            let mut next = 0;
            alive
                .iter()
                .map(|&a| {
                    a.then(|| {
                        next += 1;
                        next - 1
                    })
                })
                .collect()
        };
        let mut states = Vec::new();
        let mut out_edges = Vec::new();
        for c in 0..total {
            if alive[c] {
                states.push(decode(c));
                out_edges.push(edges[c].iter().filter_map(|&(a, t)| index[t].map(|j| (a, j))).collect());
            }
        }
        Ok(StateGraph { k, width, states, edges: out_edges })
    }

    pub fn state_count(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    /// `|Y_n|`, the number of words of length `n` occurring in points of `Y`.
    pub fn count(&self, n: usize) -> BigUint {
        self.counts(n).pop().expect("nonempty")
    }

    /// `|Y_0|, ..., |Y_nmax|`.
    pub fn counts(&self, nmax: usize) -> Vec<BigUint> {
        let mut out = Vec::with_capacity(nmax + 1);
        if self.is_empty() {
            return vec![BigUint::zero(); nmax + 1];
        }
        for n in 0..=nmax.min(self.width) {
            let prefixes: BTreeSet<&[u8]> = self.states.iter().map(|s| &s[..n]).collect();
            out.push(BigUint::from(prefixes.len()));
        }
        let mut paths = vec![BigUint::one(); self.states.len()];
        for _ in self.width + 1..=nmax {
            let mut next = vec![BigUint::zero(); self.states.len()];
            for (s, es) in self.edges.iter().enumerate() {
                for &(_, t) in es {
                    next[t] += &paths[s];
                }
            }
            paths = next;
            out.push(paths.iter().sum());
        }
        out
    }

    /// Every word of length `n` in the language, in lexicographic order.
    pub fn words(&self, n: usize, cap: u128) -> Result<Vec<Vec<u8>>> {
        let count = self.count(n);
        if count > BigUint::from(cap) {
            return Err(Error::EnumerationCap { order: count.to_u128().unwrap_or(u128::MAX), cap });
        }
        if n <= self.width {
            let set: BTreeSet<&[u8]> = self.states.iter().map(|s| &s[..n]).collect();
            return Ok(set.into_iter().map(<[u8]>::to_vec).collect());
        }
        let mut out = Vec::new();
        let mut stack: Vec<(usize, Vec<u8>)> =
            self.states.iter().enumerate().map(|(i, s)| (i, s.clone())).rev().collect();
        while let Some((s, w)) = stack.pop() {
            if w.len() == n {
                out.push(w);
                continue;
            }
            for &(a, t) in self.edges[s].iter().rev() {
                let mut v = w.clone();
                v.push(a);
                stack.push((t, v));
            }
        }
        out.sort();
        Ok(out)
    }

    /// `log` of the spectral radius of the transfer matrix; this is the
    /// entropy. `None` for graphs above [`SPECTRAL_STATE_LIMIT`].
    pub fn spectral_entropy(&self) -> Option<f64> {
        let m = self.states.len();
        if m == 0 {
            return Some(f64::NEG_INFINITY);
        }
        if m > SPECTRAL_STATE_LIMIT {
            return None;
        }
        let mut a = DMatrix::<f64>::zeros(m, m);
        for (s, es) in self.edges.iter().enumerate() {
            for &(_, t) in es {
                a[(s, t)] += 1.0;
            }
        }
        let radius = a.complex_eigenvalues().iter().map(|z| z.norm()).fold(0.0, f64::max);
        Some(radius.ln())
    }

    pub fn alphabet(&self) -> usize {
        self.k
    }
}

/// Natural log of a big integer; `-inf` at zero.
pub fn ln_big(x: &BigUint) -> f64 {
    if x.is_zero() {
        return f64::NEG_INFINITY;
    }
    let bits = x.bits();
    if bits <= 1000 {
        return x.to_f64().expect("finite").ln();
    }
    let shift = bits - 64;
    (x >> shift).to_f64().expect("finite").ln() + shift as f64 * std::f64::consts::LN_2
}

/// `(1/n) log x`, exact when `x` is a perfect `n`-th power.
pub fn log_rate(x: &BigUint, n: usize) -> f64 {
    if n == 0 {
        return 0.0;
    }
    if x.is_zero() {
        return f64::NEG_INFINITY;
    }
    let r = x.nth_root(n as u32);
    if r.pow(n as u32) == *x {
        return ln_big(&r);
    }
    ln_big(x) / n as f64
}

#[derive(Debug, Clone)]
pub struct EntropyEstimate {
    /// `|Y_1|, ..., |Y_nmax|`.
    pub counts: Vec<BigUint>,
    /// `(1/n) log |Y_n|` for `n = 1..=nmax`.
    pub rates: Vec<f64>,
    /// Running minimum of `rates`; an upper bound for the entropy.
    pub running_min: Vec<f64>,
    pub estimate: f64,
    /// `|Y_{n+m}| <= |Y_n| |Y_m|` for all `n + m <= nmax`.
    pub submultiplicative: bool,
    /// `log` of the transfer-matrix spectral radius when available.
    pub spectral: Option<f64>,
}

pub fn word_count(y: &Subshift, n: usize, memo_cap: usize) -> Result<BigUint> {
    Ok(y.graph(memo_cap)?.count(n))
}

pub fn h_estimate(y: &Subshift, nmax: usize, memo_cap: usize) -> Result<EntropyEstimate> {
    if nmax == 0 {
        return Err(Error::Precondition("nmax must be positive".into()));
    }
    let g = y.graph(memo_cap)?;
    let mut counts = g.counts(nmax);
    counts.remove(0);
    let rates: Vec<f64> = counts.iter().enumerate().map(|(i, c)| log_rate(c, i + 1)).collect();
    let mut running_min = Vec::with_capacity(nmax);
    let mut best = f64::INFINITY;
    for &r in &rates {
        best = best.min(r);
        running_min.push(best);
    }
    let mut submultiplicative = true;
    for n in 1..=nmax {
        for m in 1..=nmax - n {
            if counts[n + m - 1] > &counts[n - 1] * &counts[m - 1] {
                submultiplicative = false;
            }
        }
    }
    Ok(EntropyEstimate {
        counts,
        rates,
        running_min,
        estimate: best,
        submultiplicative,
        spectral: g.spectral_entropy(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute_count(y: &Subshift, n: usize, pad: usize) -> usize {
        // words of length n that extend to admissible words of length n + 2 pad
        let k = y.alphabet();
        let total = n + 2 * pad;
        let mut seen = BTreeSet::new();
        for code in 0..k.pow(total as u32) {
            let mut w = vec![0u8; total];
            let mut c = code;
            for s in w.iter_mut() {
                *s = (c % k) as u8;
                c /= k;
            }
            if y.admissible(&w) {
                seen.insert(w[pad..pad + n].to_vec());
            }
        }
        seen.len()
    }

    fn fib(n: usize) -> u64 {
        let (mut a, mut b) = (0u64, 1u64);
        for _ in 0..n {
            (a, b) = (b, a + b);
        }
        a
    }

    #[test]
    fn examples() {
        assert_eq!(word_count(&Subshift::full(2).unwrap(), 5, DEFAULT_MEMO_CAP).unwrap(), BigUint::from(32u32));
        assert_eq!(word_count(&Subshift::golden_mean(), 5, DEFAULT_MEMO_CAP).unwrap(), BigUint::from(13u32));
        let fixed = Subshift::new(3, vec![vec![1], vec![2]]).unwrap();
        let h = h_estimate(&fixed, 8, DEFAULT_MEMO_CAP).unwrap();
        assert!(h.counts.iter().all(|c| c.is_one()));
        assert_eq!(h.estimate, 0.0);
    }

    #[test]
    fn full_shift_rate_is_exact() {
        for k in [2usize, 3, 5] {
            let h = h_estimate(&Subshift::full(k).unwrap(), 10, DEFAULT_MEMO_CAP).unwrap();
            assert!(h.rates.iter().all(|&r| r == (k as f64).ln()));
            assert_eq!(h.estimate, (k as f64).ln());
        }
    }

    #[test]
    fn golden_mean_counts_are_fibonacci() {
        let h = h_estimate(&Subshift::golden_mean(), 25, DEFAULT_MEMO_CAP).unwrap();
        for (i, c) in h.counts.iter().enumerate() {
            assert_eq!(*c, BigUint::from(fib(i + 3)));
        }
        assert!(h.submultiplicative);
        let phi = (1.0 + 5f64.sqrt()) / 2.0;
        assert!((h.spectral.unwrap() - phi.ln()).abs() < 1e-12);
        assert!(h.estimate >= phi.ln());
        assert!(h.running_min.windows(2).all(|w| w[1] <= w[0]));
    }

    #[test]
    fn counts_match_brute_force() {
        let shifts = [
            Subshift::golden_mean(),
            Subshift::no_zero_run(3),
            // 0 may not be followed by 1: only 1...10...0 survive
            Subshift::new(2, vec![vec![0, 1]]).unwrap(),
            // 0 cannot extend to the right at all
            Subshift::new(2, vec![vec![0, 0], vec![0, 1]]).unwrap(),
            Subshift::new(3, vec![vec![0, 2], vec![1, 1, 1], vec![2, 0, 1]]).unwrap(),
        ];
        for y in &shifts {
            let g = y.graph(DEFAULT_MEMO_CAP).unwrap();
            for n in 0..=5 {
                assert_eq!(g.count(n), BigUint::from(brute_count(y, n, 4)), "{y} n={n}");
                assert_eq!(g.words(n, 1 << 20).unwrap().len(), brute_count(y, n, 4));
            }
        }
    }

    #[test]
    fn memo_cap_and_parse() {
        let long = Subshift::new(2, vec![vec![0; 30]]).unwrap();
        assert!(matches!(long.graph(1000), Err(Error::MemoCap { .. })));
        let y = Subshift::parse("# no 000\nshift k=2\nforbid 000\n").unwrap();
        assert_eq!(y, Subshift::no_zero_run(3));
        assert_eq!(Subshift::parse(&y.to_string()).unwrap(), y);
        let wide = Subshift::new(12, vec![vec![11, 3]]).unwrap();
        assert_eq!(Subshift::parse(&wide.to_string()).unwrap(), wide);
        assert!(matches!(Subshift::parse("shift k=2\nforbid 2\n"), Err(Error::Parse { line: 2, .. })));
        assert_eq!(Subshift::builtin("no000"), Some(Subshift::no_zero_run(3)));
        assert_eq!(Subshift::builtin("full3"), Some(Subshift::full(3).unwrap()));
    }
}
