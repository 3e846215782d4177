//! `entropy`, `tiling`, `sofic-entropy`.

use std::collections::BTreeSet;

use clap::Args;

use soficlab::approx::Lattice;
use soficlab::entropy::amenable::DEFAULT_WORD_CAP;
use soficlab::entropy::{
    amenable_bound_check, boundary_ops, greedy_tiling, h_estimate, sofic_entropy_count, PatternOracle, SoficMap,
    Subshift, DEFAULT_COLORING_CAP, DEFAULT_MEMO_CAP,
};

use crate::ctx::{self, usage, CliResult, Ctx};
use crate::report::Report;

fn memo_cap(ctx: &Ctx) -> usize {
    usize::try_from(ctx.cap_enum(DEFAULT_MEMO_CAP as u128)).unwrap_or(usize::MAX)
}

/// The shift named by `--shift`, or the file given with --in.
fn subshift(ctx: &Ctx, name: Option<&str>) -> CliResult<Subshift> {
    match name {
        Some(n) => Subshift::builtin(n).ok_or_else(|| usage(format!("unknown shift `{n}`; try full<k>, golden, no00"))),
        None if ctx.has_input() => Ok(Subshift::parse(&ctx.input()?)?),
        None => Err(usage("give --shift or --in")),
    }
}

#[derive(Args, Debug)]
pub struct EntropyArgs {
    /// `full<k>`, `golden` or `no<zeros>`; otherwise a shift file in --in.
    #[arg(long)]
    shift: Option<String>,
    #[arg(long, default_value_t = 12)]
    nmax: usize,
    /// With --f-len, also check the tiling bound for `E = [0, e_len)`.
    #[arg(long, requires = "f_len")]
    e_len: Option<i64>,
    /// `F = [0, f_len)` for the tiling bound.
    #[arg(long, requires = "e_len")]
    f_len: Option<i64>,
}

pub fn entropy(ctx: &Ctx, a: &EntropyArgs) -> CliResult<Report> {
    let y = subshift(ctx, a.shift.as_deref())?;
    let h = h_estimate(&y, a.nmax, memo_cap(ctx))?;
    let mut r = Report::new();
    r.line(&[
        ("shift", a.shift.clone().unwrap_or_else(|| "file".into())),
        ("alphabet", y.alphabet().to_string()),
        ("forbidden", y.forbidden().len().to_string()),
    ]);
    for (i, c) in h.counts.iter().enumerate() {
        r.row(&[
            ("n", (i + 1).to_string()),
            ("count", c.to_string()),
            ("rate", format!("{:.6}", h.rates[i])),
            ("running_min", format!("{:.6}", h.running_min[i])),
        ]);
    }
    r.put("estimate", h.estimate);
    r.put("spectral", h.spectral.map_or_else(|| "none".to_string(), |s| s.to_string()));
    r.check("submultiplicative", h.submultiplicative);
    if let (Some(e), Some(f)) = (a.e_len, a.f_len) {
        if e <= 0 || f <= 0 {
            return Err(usage("--e-len and --f-len must be positive"));
        }
        let b = amenable_bound_check(&y, &(0..e).collect(), &(0..f).collect())?;
        r.line(&[("y_e", b.y_e.to_string()), ("y_f", b.y_f.to_string())]);
        r.line(&[("e_prime", b.e_prime.to_string()), ("boundary", b.boundary.to_string())]);
        r.put("lhs", b.lhs);
        r.put("rhs", b.rhs.map_or_else(|| "vacuous".to_string(), |x| x.to_string()));
        if let Some(holds) = b.holds {
            r.check("bound_holds", holds);
        }
    }
    Ok(r)
}

#[derive(Args, Debug)]
pub struct TilingArgs {
    #[arg(long, default_value_t = 1)]
    dim: usize,
    /// Tile shape `E = [0, e_side)^dim`.
    #[arg(long, default_value_t = 3)]
    e_side: i64,
    /// `F = [0, f_side)^dim`.
    #[arg(long, default_value_t = 30)]
    f_side: i64,
    /// The tiled region extends `F` by this much on every side.
    #[arg(long, default_value_t = 0)]
    pad: i64,
}

fn cube(dim: usize, lo: i64, hi: i64) -> BTreeSet<Vec<i64>> {
    Lattice::boxed(&vec![hi - lo; dim]).into_iter().map(|v| v.into_iter().map(|x| x + lo).collect()).collect()
}

pub fn tiling(_ctx: &Ctx, a: &TilingArgs) -> CliResult<Report> {
    if a.dim == 0 || a.e_side <= 0 || a.f_side <= 0 || a.pad < 0 {
        return Err(usage("--dim, --e-side and --f-side must be positive, --pad nonnegative"));
    }
    let z = Lattice(a.dim);
    let e = cube(a.dim, 0, a.e_side);
    let f = cube(a.dim, 0, a.f_side);
    let region = cube(a.dim, -a.pad, a.f_side + a.pad);
    let b = boundary_ops(&z, &f, &e)?;
    let t = greedy_tiling(&z, &e, None, &region, &f)?;
    let mut r = Report::new();
    r.line(&[
        ("interior", b.interior.len().to_string()),
        ("closure", b.closure.len().to_string()),
        ("boundary", b.boundary.len().to_string()),
    ]);
    r.put("tiles", t.tiles.len());
    r.put("e_prime", t.e_prime.len());
    r.put("interior_tiles", t.interior_tiles);
    r.put("density", t.density);
    r.put("bound", t.bound);
    r.check("disjoint", t.disjoint);
    r.check("covers_region", t.covers_region);
    r.check("holds", t.holds);
    Ok(r)
}

#[derive(Args, Debug)]
pub struct SoficArgs {
    /// Subshift whose window patterns are allowed; otherwise a pattern file in --in.
    #[arg(long)]
    shift: Option<String>,
    /// Window offsets in `Z` used with --shift.
    #[arg(long, default_value = "0,1")]
    window: String,
    /// Degrees of the cyclic sofic maps: `a..b`, `a..=b` or a list.
    #[arg(long, default_value = "10")]
    n: String,
    /// Fraction of indices allowed to fail, e.g. `1/10`.
    #[arg(long, default_value = "0")]
    delta: String,
}

pub fn sofic(ctx: &Ctx, a: &SoficArgs) -> CliResult<Report> {
    let oracle = match &a.shift {
        Some(name) => {
            let y = Subshift::builtin(name).ok_or_else(|| usage(format!("unknown shift `{name}`")))?;
            let offsets: BTreeSet<i64> = ctx::list::<i64>(&a.window)?.into_iter().collect();
            PatternOracle::from_subshift(&y, &offsets, DEFAULT_MEMO_CAP, ctx.cap_work(DEFAULT_WORD_CAP))?
        }
        None => PatternOracle::parse(&ctx.input()?)?,
    };
    let offsets = oracle
        .window()
        .iter()
        .map(|w| w.parse::<i64>().map_err(|_| usage(format!("window element `{w}` is not an integer offset"))))
        .collect::<CliResult<Vec<_>>>()?;
    let delta = ctx::ratio(&a.delta)?;
    let cap = ctx.cap_enum(DEFAULT_COLORING_CAP);
    let mut r = Report::new();
    r.line(&[("alphabet", oracle.alphabet().to_string()), ("window", oracle.window().join(","))]);
    r.put("delta", delta);
    r.put("proper", oracle.is_proper());
    for n in ctx::range_or_list(&a.n)? {
        let c = sofic_entropy_count(&SoficMap::cyclic(n, &offsets)?, &oracle, delta, cap)?;
        r.row(&[
            ("n", n.to_string()),
            ("count", c.count.to_string()),
            ("rate", format!("{:.6}", c.rate)),
            ("lower_bound", c.lower_bound.to_string()),
        ]);
    }
    Ok(r)
}
