//! Distance from a tuple to the exact solutions, and empirical stability
//! profiles built from it.

use rand::seq::SliceRandom;
use rand::Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::metric::perm::Permutation;
use crate::rng;
use crate::scalar::Ratio;

use super::presentation::Presentation;
use super::scan::exact_scan;
use super::search::{search_approximate, SearchMethod};
use super::tuple::{distance, Compiled, TupleCandidate};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NearestMode {
    /// Minimum over the full exact scan.
    Exhaustive { cap: u128 },
    /// Best of a few certified exact tuples; no optimality claim.
    Local,
}

#[derive(Debug, Clone, PartialEq)]
pub struct NearestExact {
    pub tuple: Vec<Permutation>,
    pub distance: Ratio,
    /// Exact tuples compared.
    pub candidates: usize,
}

/// The exact solution closest to `t` in `max_j l(t_j s_j^-1)`; ties go to
/// the lexicographically least tuple.
pub fn nearest_exact(p: &Presentation, t: &TupleCandidate, mode: NearestMode) -> Result<NearestExact> {
    let n = t.degree();
    let compiled = Compiled::new(p);
    let mut pool: Vec<Vec<Permutation>> = match mode {
        NearestMode::Exhaustive { cap } => exact_scan(p, n, cap)?.solutions,
        NearestMode::Local => local_candidates(&compiled, t.perms()),
    };
    // every candidate is re-verified
    pool.retain(|s| compiled.is_exact(s));
    let candidates = pool.len();
    let best = pool
        .into_iter()
        .map(|s| (distance(t.perms(), &s), s))
        .min()
        .ok_or_else(|| Error::Precondition(format!("no exact solution of {} found in S_{n}", p.name)))?;
    Ok(NearestExact { tuple: best.1, distance: best.0, candidates })
}

/// Tuples obtained by resetting a subset of the generators to the identity,
/// plus the end point of a greedy descent on the relator term.
fn local_candidates(c: &Compiled, t: &[Permutation]) -> Vec<Vec<Permutation>> {
    let k = t.len();
    let n = t[0].degree();
    let mut out = Vec::new();
    if k <= 10 {
        for mask in 0..(1u32 << k) {
            let s: Vec<Permutation> =
                (0..k).map(|j| if mask >> j & 1 == 1 { Permutation::identity(n) } else { t[j].clone() }).collect();
            if c.is_exact(&s) {
                out.push(s);
            }
        }
    } else {
        out.push(vec![Permutation::identity(n); k]);
    }
    if let Some(s) = descend(c, t) {
        out.push(s);
    }
    out
}

fn relator_mass(c: &Compiled, xs: &[Permutation]) -> usize {
    let invs: Vec<Permutation> = xs.iter().map(Permutation::inverse).collect();
    let x: Vec<&[usize]> = xs.iter().map(|p| p.images()).collect();
    let xi: Vec<&[usize]> = invs.iter().map(|p| p.images()).collect();
    let mut scratch = vec![0; xs[0].degree()];
    (0..c.rels.len()).map(|r| c.moved(r, &x, &xi, &mut scratch)).sum()
}

/// Steepest descent on the total number of points moved by the relators,
/// one transposition factor at a time, for at most `4n` steps.
fn descend(c: &Compiled, t: &[Permutation]) -> Option<Vec<Permutation>> {
    let n = t[0].degree();
    let mut xs = t.to_vec();
    let mut cur = relator_mass(c, &xs);
    for _ in 0..4 * n {
        if cur == 0 {
            return Some(xs);
        }
        let mut best: Option<(usize, usize, Permutation)> = None;
        for j in 0..xs.len() {
            for a in 0..n {
                for b in a + 1..n {
                    let mut trial = xs.clone();
                    trial[j] = xs[j].compose(&Permutation::transposition(n, a, b).expect("distinct"));
                    let m = relator_mass(c, &trial);
                    if m < best.as_ref().map_or(cur, |b| b.0) {
                        best = Some((m, j, trial[j].clone()));
                    }
                }
            }
        }
        let (m, j, x) = best?;
        xs[j] = x;
        cur = m;
    }
    (cur == 0).then_some(xs)
}

/// Where the tuples of a profile come from.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ProfileSource {
    /// Search for each target defect in the grid.
    Search(SearchMethod),
    /// A random exact solution with each generator multiplied by
    /// `transpositions` random transpositions.
    Planted { transpositions: usize },
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProfileRow {
    pub trial: usize,
    pub target: Option<Ratio>,
    /// Defect of the tuple found or planted.
    pub achieved: Ratio,
    /// `achieved <= target`; always true for planted rows.
    pub reached: bool,
    /// Distance to the nearest exact solution.
    pub epsilon: Ratio,
    /// Distance from the planted tuple to its exact source.
    pub planted: Option<Ratio>,
    pub tuple: Vec<Permutation>,
}

#[derive(Debug, Clone)]
pub struct ProfileConfig {
    pub n: usize,
    pub trials: usize,
    pub deltas: Vec<Ratio>,
    pub seed: u64,
    pub source: ProfileSource,
    pub mode: NearestMode,
    pub search_cap: u128,
}

/// Empirical `(delta, epsilon)` pairs at a single degree.
pub fn stability_profile(p: &Presentation, cfg: &ProfileConfig) -> Result<Vec<ProfileRow>> {
    match cfg.source {
        ProfileSource::Search(method) => {
            let jobs: Vec<(usize, usize)> =
                (0..cfg.deltas.len()).flat_map(|d| (0..cfg.trials).map(move |t| (d, t))).collect();
            jobs.par_iter()
                .map(|&(d, trial)| {
                    let seed = rng::derive(cfg.seed, (d * cfg.trials + trial) as u64);
                    let found = search_approximate(p, cfg.n, method, seed, cfg.search_cap)?;
                    let near = nearest_exact(p, &found.best, cfg.mode)?;
                    Ok(ProfileRow {
                        trial,
                        target: Some(cfg.deltas[d]),
                        achieved: found.best.defect(),
                        reached: found.best.defect() <= cfg.deltas[d],
                        epsilon: near.distance,
                        planted: None,
                        tuple: found.best.into_perms(),
                    })
                })
                .collect()
        }
        ProfileSource::Planted { transpositions } => {
            let exact = match cfg.mode {
                NearestMode::Exhaustive { cap } => exact_scan(p, cfg.n, cap)?.solutions,
                NearestMode::Local => vec![vec![Permutation::identity(cfg.n); p.names.len()]],
            };
            (0..cfg.trials)
                .into_par_iter()
                .map(|trial| {
                    let mut r = rng::stream(cfg.seed, trial as u64);
                    let base = exact.choose(&mut r).expect("identity tuple is exact").clone();
                    let perturbed = perturb(&base, transpositions, &mut r);
                    let t = TupleCandidate::new(p, perturbed)?;
                    let near = nearest_exact(p, &t, cfg.mode)?;
                    Ok(ProfileRow {
                        trial,
                        target: None,
                        achieved: t.defect(),
                        reached: true,
                        epsilon: near.distance,
                        planted: Some(t.distance(&base)),
                        tuple: t.into_perms(),
                    })
                })
                .collect()
        }
    }
}

fn perturb<R: Rng>(base: &[Permutation], k: usize, r: &mut R) -> Vec<Permutation> {
    let n = base[0].degree();
    base.iter()
        .map(|x| {
            let mut y = x.clone();
            if n >= 2 {
                for _ in 0..k {
                    let a = r.gen_range(0..n);
                    let mut b = r.gen_range(0..n - 1);
                    if b >= a {
                        b += 1;
                    }
                    y = y.compose(&Permutation::transposition(n, a, b).expect("distinct"));
                }
            }
            y
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::ratio;
    use crate::stability::scan::DEFAULT_SCAN_CAP;
    use crate::stability::search::AnnealSchedule;

    const EXH: NearestMode = NearestMode::Exhaustive { cap: DEFAULT_SCAN_CAP };

    #[test]
    fn exact_tuples_are_at_distance_zero() {
        let c = Presentation::commutator();
        let s = Permutation::from_cycles(4, &[&[0, 1], &[2, 3]]).unwrap();
        let t = TupleCandidate::new(&c, vec![s.clone(), s]).unwrap();
        for mode in [EXH, NearestMode::Local] {
            assert_eq!(nearest_exact(&c, &t, mode).unwrap().distance, ratio(0, 1));
        }
    }

    #[test]
    fn planted_commuting_pair() {
        let c = Presentation::commutator();
        let x = Permutation::from_cycles(4, &[&[0, 1, 2, 3]]).unwrap();
        let y = x.pow(2);
        let bumped = x.compose(&Permutation::transposition(4, 0, 2).unwrap());
        let t = TupleCandidate::new(&c, vec![bumped, y]).unwrap();
        let e = nearest_exact(&c, &t, EXH).unwrap();
        let l = nearest_exact(&c, &t, NearestMode::Local).unwrap();
        assert!(e.distance <= ratio(2, 4));
        assert!(e.distance <= l.distance);
        assert_eq!(e.candidates, 120);
    }

    #[test]
    fn higman_nearest_is_identity() {
        let h = Presentation::higman();
        let mut r = rng::rng(9);
        for n in 2..=4 {
            let t = TupleCandidate::new(&h, (0..4).map(|_| Permutation::random(n, &mut r)).collect()).unwrap();
            for mode in [EXH, NearestMode::Local] {
                let near = nearest_exact(&h, &t, mode).unwrap();
                assert!(near.tuple.iter().all(Permutation::is_identity));
                let want = t.perms().iter().map(Permutation::hamming_length).max().unwrap();
                assert_eq!(near.distance, want);
            }
        }
    }

    #[test]
    fn descent_repairs_a_single_bump() {
        let c = Presentation::commutator();
        let x = Permutation::shift(6);
        let t = vec![x.compose(&Permutation::transposition(6, 1, 4).unwrap()), x.pow(3)];
        let s = descend(&Compiled::new(&c), &t).expect("one step repairs it");
        assert!(Compiled::new(&c).is_exact(&s));
    }

    #[test]
    fn profiles() {
        let c = Presentation::commutator();
        let cfg = ProfileConfig {
            n: 4,
            trials: 6,
            deltas: vec![],
            seed: 1,
            source: ProfileSource::Planted { transpositions: 1 },
            mode: EXH,
            search_cap: 1 << 30,
        };
        let rows = stability_profile(&c, &cfg).unwrap();
        assert_eq!(rows.len(), 6);
        for row in &rows {
            assert!(row.epsilon <= row.planted.unwrap());
        }
        assert_eq!(rows, stability_profile(&c, &cfg).unwrap());

        let search = ProfileConfig {
            deltas: vec![ratio(0, 1)],
            trials: 2,
            source: ProfileSource::Search(SearchMethod::Exhaustive),
            ..cfg.clone()
        };
        for row in stability_profile(&c, &search).unwrap() {
            assert_eq!(row.achieved, ratio(0, 1));
            assert_eq!(row.epsilon, ratio(0, 1));
        }

        let h = Presentation::higman();
        let anneal =
            SearchMethod::Anneal { schedule: AnnealSchedule { steps: 300, ..Default::default() }, restarts: 1 };
        let cfg = ProfileConfig {
            deltas: vec![ratio(1, 2), ratio(1, 4)],
            trials: 2,
            source: ProfileSource::Search(anneal),
            ..cfg
        };
        for row in stability_profile(&h, &cfg).unwrap() {
            let max_len = row.tuple.iter().map(Permutation::hamming_length).max().unwrap();
            assert_eq!(row.epsilon, max_len);
        }
    }
}
