//! `rank`, `rank-probe`, `galg-check`.

use std::collections::BTreeSet;
use std::sync::Arc;

use clap::Args;
use rand::Rng;
use rayon::prelude::*;

use soficlab::metric::{FiniteGroup, Permutation};
use soficlab::rankalg::{
    averaging_idempotent, builtin_group, finite_rank_ring_probe, frobenius_trace_check, idempotent_trace_check,
    parse_galg, perm_rank_identity, rank_lower_bound_probe, GroupAlgebraElement, PrimeFieldMatrix,
};
use soficlab::{rng, Ratio};

use crate::ctx::{self, usage, CliResult, Ctx};
use crate::report::Report;

#[derive(Args, Debug)]
pub struct RankArgs {
    /// Rank a seeded random matrix of this size instead of reading --in.
    #[arg(long)]
    random: Option<usize>,
    /// Field size for --random.
    #[arg(long, default_value_t = 2)]
    p: u64,
}

pub fn rank(ctx: &Ctx, a: &RankArgs) -> CliResult<Report> {
    let m: PrimeFieldMatrix = match a.random {
        Some(n) => PrimeFieldMatrix::random(a.p, n, &mut rng::stream(ctx.seed, 0))?,
        None => ctx.input()?.parse()?,
    };
    let mut r = Report::new();
    r.line(&[("p", m.prime().to_string()), ("n", m.dim().to_string())]);
    r.put("rank", m.rank());
    r.put("normalized_rank", m.normalized_rank());
    Ok(r)
}

#[derive(Args, Debug)]
pub struct ProbeArgs {
    /// Check `N(P_s - I) = 1 - c(s)/n` for this permutation.
    #[arg(long, conflicts_with = "perms")]
    perm: Option<String>,
    /// Permutations `s_1; ...; s_k` for the lower-bound probe.
    #[arg(long, requires = "lambdas")]
    perms: Option<String>,
    /// Coefficients `l_1, ..., l_k`, nonzero mod p.
    #[arg(long)]
    lambdas: Option<String>,
    #[arg(long, default_value_t = 3)]
    p: u64,
    /// Random instances per probe when no explicit input is given.
    #[arg(long, default_value_t = 200)]
    trials: usize,
    /// Largest degree of random permutations.
    #[arg(long, default_value_t = 10)]
    max_n: usize,
    /// Most summands in random lower-bound instances.
    #[arg(long, default_value_t = 4)]
    max_k: usize,
    /// Size of random matrices for the finite-rank ring probe.
    #[arg(long, default_value_t = 5)]
    dim: usize,
}

pub fn probe(ctx: &Ctx, a: &ProbeArgs) -> CliResult<Report> {
    let mut r = Report::new();
    if let Some(p) = &a.perm {
        let s = ctx::perm(p)?;
        let id = perm_rank_identity(&s, a.p)?;
        r.put("lhs", id.lhs);
        r.put("rhs", id.rhs);
        r.check("equal", id.equal);
        return Ok(r);
    }
    if let Some(ps) = &a.perms {
        let sigmas = ctx::perms(ps)?;
        let lambdas: Vec<u64> = ctx::list(a.lambdas.as_deref().unwrap_or(""))?;
        let b = rank_lower_bound_probe(&sigmas, &lambdas, a.p)?;
        r.put("value", b.value);
        r.line(&[("epsilon", b.epsilon.to_string()), ("bound", b.bound.to_string()), ("holds", b.holds.to_string())]);
        r.line(&[("pair_epsilon", b.pair_epsilon.to_string()), ("pair_bound", b.pair_bound.to_string())]);
        r.check("pair_holds", b.pair_holds);
        return Ok(r);
    }
    if a.max_n == 0 || a.max_k == 0 || a.p < 2 {
        return Err(usage("--max-n and --max-k must be positive and --p at least 2"));
    }
    let trials: Vec<usize> = (0..a.trials).collect();
    let identity_fails = trials
        .par_iter()
        .map(|&t| {
            let mut g = rng::stream(ctx.seed, t as u64);
            let s = Permutation::random(g.gen_range(1..=a.max_n), &mut g);
            perm_rank_identity(&s, a.p).map(|id| usize::from(!id.equal))
        })
        .collect::<soficlab::Result<Vec<_>>>()?
        .iter()
        .sum::<usize>();
    let bounds = trials
        .par_iter()
        .map(|&t| {
            let mut g = rng::stream(ctx.seed, (a.trials + t) as u64);
            let k = g.gen_range(1..=a.max_k);
            let n = g.gen_range(1..=a.max_n);
            let sigmas: Vec<Permutation> = (0..k).map(|_| Permutation::random(n, &mut g)).collect();
            let lambdas: Vec<u64> = (0..k).map(|_| g.gen_range(1..a.p)).collect();
            rank_lower_bound_probe(&sigmas, &lambdas, a.p)
        })
        .collect::<soficlab::Result<Vec<_>>>()?;
    let printed_fails = bounds.iter().filter(|b| !b.holds).count();
    let pair_fails = bounds.iter().filter(|b| !b.pair_holds).count();
    let mut g = rng::stream(ctx.seed, (2 * a.trials) as u64);
    let samples = (0..a.trials)
        .map(|_| Ok((PrimeFieldMatrix::random(a.p, a.dim, &mut g)?, PrimeFieldMatrix::random(a.p, a.dim, &mut g)?)))
        .collect::<soficlab::Result<Vec<_>>>()?;
    let ring = if samples.is_empty() { Ratio::from_integer(0) } else { finite_rank_ring_probe(&samples)? };
    r.put("trials", a.trials);
    r.put("identity_failures", identity_fails);
    r.put("printed_bound_failures", printed_fails);
    r.put("pair_bound_failures", pair_fails);
    r.put("ring_max_gap", ring);
    r.check("identity_holds", identity_fails == 0);
    r.check("pair_bound_holds", pair_fails == 0);
    r.check("ring_gap_zero", ring == Ratio::from_integer(0));
    Ok(r)
}

#[derive(Args, Debug)]
pub struct GalgArgs {
    /// Built-in group (C<n>, D<m>, S<n<=5>, A4, Q8, C<p>xC<p>) or a table file.
    #[arg(long, default_value = "S3")]
    group: String,
    #[arg(long, default_value_t = 3)]
    p: u64,
    /// Random partners for the Frobenius check.
    #[arg(long, default_value_t = 200)]
    trials: usize,
}

fn resolve_group(name: &str) -> soficlab::Result<FiniteGroup> {
    match builtin_group(name) {
        Some(g) => Ok(g),
        None => match std::fs::read_to_string(name) {
            Ok(text) => text.parse(),
            Err(_) => Err(soficlab::Error::Precondition(format!("unknown group `{name}`"))),
        },
    }
}

pub fn galg(ctx: &Ctx, a: &GalgArgs) -> CliResult<Report> {
    let given = if ctx.has_input() { Some(parse_galg(&ctx.input()?, resolve_group)?) } else { None };
    let (group, p) = match &given {
        Some(e) => (e.group().clone(), e.prime()),
        None => (Arc::new(resolve_group(&a.group)?), a.p),
    };
    let order = group.order();
    let trials: Vec<usize> = (0..a.trials).collect();
    let frob_fails = trials
        .par_iter()
        .map(|&t| {
            let mut g = rng::stream(ctx.seed, t as u64);
            let x = match &given {
                Some(e) => e.clone(),
                None => GroupAlgebraElement::random(group.clone(), p, g.gen_range(1..=order), &mut g)?,
            };
            let y = GroupAlgebraElement::random(group.clone(), p, g.gen_range(1..=order), &mut g)?;
            Ok(usize::from(!frobenius_trace_check(&x, &y)?.passed()))
        })
        .collect::<soficlab::Result<Vec<_>>>()?
        .iter()
        .sum::<usize>();
    let idempotents: Vec<GroupAlgebraElement> = match &given {
        Some(e) if e.mul(e)? == *e => vec![e.clone()],
        Some(_) => vec![],
        None => {
            let subgroups: BTreeSet<Vec<usize>> = group.two_generated_subgroups().into_iter().collect();
            subgroups
                .iter()
                .filter(|h| !(h.len() as u64).is_multiple_of(p))
                .map(|h| averaging_idempotent(group.clone(), h, p))
                .collect::<soficlab::Result<_>>()?
        }
    };
    let mut idem_fails = 0;
    for e in &idempotents {
        if !idempotent_trace_check(e)?.passed() {
            idem_fails += 1;
        }
    }
    let mut r = Report::new();
    r.line(&[("group", group.name().to_string()), ("order", order.to_string()), ("p", p.to_string())]);
    if let Some(e) = &given {
        r.put("element", e);
        let taus: Vec<String> = (0..=e.tau_levels()).map(|n| e.tau(n).to_string()).collect();
        r.put("taus", taus.join(","));
    }
    r.put("frobenius_pairs", a.trials);
    r.put("frobenius_failures", frob_fails);
    r.put("idempotents", idempotents.len());
    r.put("idempotent_failures", idem_fails);
    r.check("frobenius_holds", frob_fails == 0);
    r.check("idempotent_holds", idem_fails == 0);
    Ok(r)
}
