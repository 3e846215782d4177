//! Search for tuples of small defect.
//!
//! All three methods are deterministic for a given seed: restarts and
//! trials draw from streams derived from the seed and their index, and the
//! winner is the least `(defect, tuple)` pair, whatever the thread count.

use std::fmt;
use std::sync::atomic::{AtomicU64, Ordering};

use rand::Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::metric::perm::{factorial, Permutation};
use crate::rng;
use crate::scalar::Ratio;

use super::presentation::Presentation;
use super::tuple::{Compiled, TupleCandidate};

/// Default bound on `|S_n|^k` for exhaustive search.
pub const DEFAULT_SEARCH_CAP: u128 = 1_000_000_000;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AnnealSchedule {
    pub t0: f64,
    pub cooling: f64,
    pub steps: usize,
}

impl Default for AnnealSchedule {
    fn default() -> Self {
        AnnealSchedule { t0: 0.5, cooling: 0.995, steps: 10_000 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SearchMethod {
    Exhaustive,
    Anneal { schedule: AnnealSchedule, restarts: usize },
    Random { trials: usize },
}

impl fmt::Display for SearchMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SearchMethod::Exhaustive => write!(f, "exhaustive"),
            SearchMethod::Anneal { schedule: s, restarts } => {
                write!(f, "anneal(t0={},cooling={},steps={},restarts={restarts})", s.t0, s.cooling, s.steps)
            }
            SearchMethod::Random { trials } => write!(f, "random(trials={trials})"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SearchResult {
    pub best: TupleCandidate,
    /// Tuples whose defect was computed.
    pub evaluated: u64,
    pub method: SearchMethod,
}

fn pick(a: TupleCandidate, b: TupleCandidate) -> TupleCandidate {
    if b.key() < a.key() {
        b
    } else {
        a
    }
}

/// Search `S_n^k` for a tuple of least defect.
pub fn search_approximate(
    p: &Presentation,
    n: usize,
    method: SearchMethod,
    seed: u64,
    cap: u128,
) -> Result<SearchResult> {
    if n == 0 {
        return Err(Error::Precondition("degree must be positive".into()));
    }
    let compiled = Compiled::new(p);
    let (best, evaluated) = match method {
        SearchMethod::Exhaustive => exhaustive(&compiled, n, cap)?,
        SearchMethod::Random { trials } => {
            if trials == 0 {
                return Err(Error::Precondition("at least one trial".into()));
            }
            let best = (0..trials as u64)
                .into_par_iter()
                .map(|t| {
                    let mut r = rng::stream(seed, t);
                    let xs: Vec<Permutation> = (0..compiled.gens).map(|_| Permutation::random(n, &mut r)).collect();
                    candidate(&compiled, xs)
                })
                .reduce_with(pick)
                .expect("nonempty");
            (best, trials as u64)
        }
        SearchMethod::Anneal { schedule, restarts } => {
            if restarts == 0 {
                return Err(Error::Precondition("at least one restart".into()));
            }
            let best = (0..restarts as u64)
                .into_par_iter()
                .map(|r| anneal(&compiled, n, schedule, rng::derive(seed, r)))
                .reduce_with(pick)
                .expect("nonempty");
            (best, (restarts * (schedule.steps + 1)) as u64)
        }
    };
    Ok(SearchResult { best, evaluated, method })
}

fn candidate(c: &Compiled, xs: Vec<Permutation>) -> TupleCandidate {
    let n = xs[0].degree();
    let invs: Vec<Permutation> = xs.iter().map(Permutation::inverse).collect();
    let d = c.scaled_defect(&xs, &invs);
    TupleCandidate::from_parts(xs, Ratio::new(d as i64, n as i64))
}

/// Branch and bound over `S_n^k` in lexicographic order. With `k` of `m`
/// generators fixed, `max` over the relators already determined plus
/// `n - min moved` over the fixed generators bounds the defect below.
fn exhaustive(c: &Compiled, n: usize, cap: u128) -> Result<(TupleCandidate, u64)> {
    let size = factorial(n);
    let total = size.checked_pow(c.gens as u32).unwrap_or(u128::MAX);
    if total > cap {
        return Err(Error::WorkCap { work: total, cap });
    }
    let all: Vec<Permutation> = Permutation::all(n).collect();
    let invs: Vec<Permutation> = all.iter().map(Permutation::inverse).collect();
    // relators grouped by their last generator
    let mut checks: Vec<Vec<usize>> = vec![vec![]; c.gens];
    for (r, rel) in c.rels.iter().enumerate() {
        if let Some(j) = rel.iter().map(|l| l.0).max() {
            checks[j].push(r);
        }
    }
    let evaluated = AtomicU64::new(0);
    struct Ctx<'a> {
        c: &'a Compiled,
        all: &'a [Permutation],
        invs: &'a [Permutation],
        checks: &'a [Vec<usize>],
        n: usize,
        evaluated: &'a AtomicU64,
    }
    // returns the best scaled defect and its tuple (as indices)
    fn go(ctx: &Ctx, chosen: &mut Vec<usize>, rel_max: usize, min_moved: usize, best: &mut (usize, Vec<usize>)) {
        let j = chosen.len();
        if j == ctx.c.gens {
            ctx.evaluated.fetch_add(1, Ordering::Relaxed);
            let d = rel_max + ctx.n - min_moved;
            if d < best.0 {
                *best = (d, chosen.clone());
            }
            return;
        }
        let mut scratch = vec![0; ctx.n];
        for idx in 0..ctx.all.len() {
            let mm = min_moved.min(ctx.all[idx].moved_count());
            chosen.push(idx);
            let xs: Vec<&[usize]> = chosen.iter().map(|&i| ctx.all[i].images()).collect();
            let xi: Vec<&[usize]> = chosen.iter().map(|&i| ctx.invs[i].images()).collect();
            let mut rm = rel_max;
            for &r in &ctx.checks[j] {
                rm = rm.max(ctx.c.moved(r, &xs, &xi, &mut scratch));
            }
            if rm + ctx.n - mm < best.0 {
                go(ctx, chosen, rm, mm, best);
            }
            chosen.pop();
        }
    }
    let ctx = Ctx { c, all: &all, invs: &invs, checks: &checks, n, evaluated: &evaluated };
    let (d, tuple) = (0..all.len())
        .into_par_iter()
        .map(|first| {
            let mut best = (usize::MAX, vec![]);
            let mut scratch = vec![0; n];
            let xs = [all[first].images()];
            let xi = [invs[first].images()];
            let rm = checks[0].iter().map(|&r| c.moved(r, &xs, &xi, &mut scratch)).max().unwrap_or(0);
            go(&ctx, &mut vec![first], rm, all[first].moved_count(), &mut best);
            best
        })
        .filter(|b| b.0 != usize::MAX)
        .reduce_with(|a, b| if b < a { b } else { a })
        .expect("the identity tuple is always reached");
    let xs: Vec<Permutation> = tuple.iter().map(|&i| all[i].clone()).collect();
    Ok((TupleCandidate::from_parts(xs, Ratio::new(d as i64, n as i64)), evaluated.load(Ordering::Relaxed)))
}

/// Metropolis walk multiplying one generator by a random transposition,
/// with geometric cooling. Returns the best tuple visited.
fn anneal(c: &Compiled, n: usize, s: AnnealSchedule, seed: u64) -> TupleCandidate {
    let mut r = rng::rng(seed);
    let mut xs: Vec<Permutation> = (0..c.gens).map(|_| Permutation::random(n, &mut r)).collect();
    let mut invs: Vec<Permutation> = xs.iter().map(Permutation::inverse).collect();
    let mut cur = c.scaled_defect(&xs, &invs);
    let mut best = (cur, xs.clone());
    let mut t = s.t0;
    if n < 2 {
        return TupleCandidate::from_parts(best.1, Ratio::new(best.0 as i64, n as i64));
    }
    for _ in 0..s.steps {
        let j = r.gen_range(0..c.gens);
        let a = r.gen_range(0..n);
        let mut b = r.gen_range(0..n - 1);
        if b >= a {
            b += 1;
        }
        let old = xs[j].clone();
        xs[j] = old.compose(&Permutation::transposition(n, a, b).expect("distinct points"));
        invs[j] = xs[j].inverse();
        let next = c.scaled_defect(&xs, &invs);
        let delta = (next as f64 - cur as f64) / n as f64;
        let u: f64 = r.gen();
        if delta <= 0.0 || u < (-delta / t).exp() {
            cur = next;
            if (cur, &xs) < (best.0, &best.1) {
                best = (cur, xs.clone());
            }
        } else {
            xs[j] = old;
            invs[j] = xs[j].inverse();
        }
        t *= s.cooling;
    }
    TupleCandidate::from_parts(best.1, Ratio::new(best.0 as i64, n as i64))
}
