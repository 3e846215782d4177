//! `stability-search`, `exact-scan`, `nearest-exact`, `stability-profile`,
//! `higman-scan`, `contractive-check`.

use std::path::PathBuf;

use clap::{Args, ValueEnum};

use soficlab::metric::{GroupElem, GroupOps, LengthGroup, Permutation, UnitaryLength};
use soficlab::scalar::ratio_to_f64;
use soficlab::stability::{
    commutator_contractive_suite, exact_scan, nearest_exact, parse_tuple, search_approximate, stability_profile,
    unitary_mirror, unitary_test_groups, write_tuple, AnnealSchedule, NearestMode, Presentation, ProfileConfig,
    ProfileSource, SearchMethod, TupleCandidate, DEFAULT_SCAN_CAP, DEFAULT_SEARCH_CAP,
};
use soficlab::{Ratio, Scalar};

use crate::cmd::formula::{element, length_group};
use crate::ctx::{self, usage, CliResult, Ctx};
use crate::report::Report;

/// A built-in presentation (`higman`, `thompsonF`, `commutator`, `bs(m,n)`)
/// or a presentation file.
fn presentation(arg: &str) -> CliResult<Presentation> {
    match Presentation::builtin(arg) {
        Ok(p) => Ok(p),
        Err(e) => match std::fs::read_to_string(arg) {
            Ok(text) => Ok(Presentation::parse(&text)?),
            Err(_) => Err(e.into()),
        },
    }
}

fn put_tuple(r: &mut Report, p: &Presentation, perms: &[Permutation]) {
    for (name, s) in p.names.iter().zip(perms) {
        r.put(&format!("tuple.{name}"), s);
    }
}

fn tuple_text(p: &Presentation, perms: &[Permutation]) -> String {
    p.names.iter().zip(perms).map(|(n, s)| format!("{n}={s}")).collect::<Vec<_>>().join(" ")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Method {
    Exhaustive,
    Anneal,
    Random,
}

#[derive(Args, Debug)]
pub struct MethodArgs {
    #[arg(long, value_enum, default_value_t = Method::Anneal)]
    method: Method,
    /// Annealing restarts.
    #[arg(long, default_value_t = 4)]
    restarts: usize,
    /// Annealing steps per restart.
    #[arg(long, default_value_t = 10_000)]
    steps: usize,
    #[arg(long, default_value_t = 0.5)]
    t0: f64,
    #[arg(long, default_value_t = 0.995)]
    cooling: f64,
    /// Samples for the random method.
    #[arg(long, default_value_t = 10_000)]
    samples: usize,
}

impl MethodArgs {
    fn method(&self) -> SearchMethod {
        match self.method {
            Method::Exhaustive => SearchMethod::Exhaustive,
            Method::Anneal => SearchMethod::Anneal {
                schedule: AnnealSchedule { t0: self.t0, cooling: self.cooling, steps: self.steps },
                restarts: self.restarts,
            },
            Method::Random => SearchMethod::Random { trials: self.samples },
        }
    }
}

#[derive(Args, Debug)]
pub struct SearchArgs {
    /// Built-in name or presentation file.
    #[arg(long)]
    presentation: String,
    #[arg(long)]
    n: usize,
    #[command(flatten)]
    method: MethodArgs,
    /// Write the best tuple here.
    #[arg(long)]
    out: Option<PathBuf>,
}

pub fn search(ctx: &Ctx, a: &SearchArgs) -> CliResult<Report> {
    let p = presentation(&a.presentation)?;
    let res = search_approximate(&p, a.n, a.method.method(), ctx.seed, ctx.cap_work(DEFAULT_SEARCH_CAP))?;
    let mut r = Report::new();
    r.line(&[("presentation", p.name.clone()), ("n", a.n.to_string())]);
    r.put("method", res.method);
    r.put("evaluated", res.evaluated);
    r.put("defect", res.best.defect());
    r.put("zero_defect", res.best.defect() == Ratio::from_integer(0));
    put_tuple(&mut r, &p, res.best.perms());
    if let Some(path) = &a.out {
        ctx::write_file(path, &write_tuple(&p, &res.best))?;
        r.put("written", path.display());
    }
    Ok(r)
}

#[derive(Args, Debug)]
pub struct ScanArgs {
    #[arg(long)]
    presentation: String,
    #[arg(long)]
    n: usize,
    /// Solutions listed in the output.
    #[arg(long, default_value_t = 10)]
    show: usize,
    /// Also scan the bundled finite unitary groups.
    #[arg(long)]
    mirror: bool,
}

pub fn scan(ctx: &Ctx, a: &ScanArgs) -> CliResult<Report> {
    let p = presentation(&a.presentation)?;
    let mut r = Report::new();
    r.line(&[("presentation", p.name.clone()), ("n", a.n.to_string())]);
    scan_into(ctx, &mut r, &p, a.n, a.show, a.mirror)?;
    Ok(r)
}

fn scan_into(ctx: &Ctx, r: &mut Report, p: &Presentation, n: usize, show: usize, mirror: bool) -> CliResult<bool> {
    let cap = ctx.cap_work(DEFAULT_SCAN_CAP);
    let rep = exact_scan(p, n, cap)?;
    let trivial = rep.solutions.iter().all(|s| s.iter().all(Permutation::is_identity));
    r.line(&[("solutions", rep.solutions.len().to_string()), ("trivial", trivial.to_string())]);
    r.put("work", rep.work);
    r.put(
        "pruned",
        if rep.pruned_generators.is_empty() { "none".to_string() } else { rep.pruned_generators.join(",") },
    );
    for (i, s) in rep.solutions.iter().take(show).enumerate() {
        r.row(&[("solution", i.to_string()), ("tuple", tuple_text(p, s))]);
    }
    let mut mirror_trivial = true;
    if mirror {
        for m in unitary_mirror(p, cap)? {
            mirror_trivial &= m.only_identity;
            r.row(&[
                ("group", m.group),
                ("dim", m.dim.to_string()),
                ("order", m.order.to_string()),
                ("solutions", m.solutions.to_string()),
                ("only_identity", m.only_identity.to_string()),
            ]);
        }
    }
    Ok(trivial && mirror_trivial)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    Exhaustive,
    Local,
}

fn nearest_mode(ctx: &Ctx, m: Mode) -> NearestMode {
    match m {
        Mode::Exhaustive => NearestMode::Exhaustive { cap: ctx.cap_work(DEFAULT_SCAN_CAP) },
        Mode::Local => NearestMode::Local,
    }
}

#[derive(Args, Debug)]
pub struct NearestArgs {
    #[arg(long)]
    presentation: String,
    #[arg(long, value_enum, default_value_t = Mode::Exhaustive)]
    mode: Mode,
}

pub fn nearest(ctx: &Ctx, a: &NearestArgs) -> CliResult<Report> {
    let p = presentation(&a.presentation)?;
    let t: TupleCandidate = parse_tuple(&p, &ctx.input()?)?;
    let res = nearest_exact(&p, &t, nearest_mode(ctx, a.mode))?;
    let mut r = Report::new();
    r.line(&[("presentation", p.name.clone()), ("n", t.degree().to_string())]);
    r.put("defect", t.defect());
    r.put("distance", res.distance);
    r.put("candidates", res.candidates);
    put_tuple(&mut r, &p, &res.tuple);
    Ok(r)
}

#[derive(Args, Debug)]
pub struct ProfileArgs {
    #[arg(long)]
    presentation: String,
    #[arg(long)]
    n: usize,
    #[arg(long, default_value_t = 8)]
    trials: usize,
    /// Target defects for searched rows, e.g. `1/10,1/5`.
    #[arg(long, default_value = "1/10,1/5")]
    deltas: String,
    /// Plant this many random transpositions per generator instead of searching.
    #[arg(long)]
    planted: Option<usize>,
    #[arg(long, value_enum, default_value_t = Mode::Local)]
    mode: Mode,
    #[command(flatten)]
    method: MethodArgs,
}

pub fn profile(ctx: &Ctx, a: &ProfileArgs) -> CliResult<Report> {
    let p = presentation(&a.presentation)?;
    let deltas = if a.planted.is_some() {
        vec![]
    } else {
        a.deltas.split(',').filter(|s| !s.trim().is_empty()).map(ctx::ratio).collect::<CliResult<Vec<_>>>()?
    };
    let cfg = ProfileConfig {
        n: a.n,
        trials: a.trials,
        deltas,
        seed: ctx.seed,
        source: match a.planted {
            Some(k) => ProfileSource::Planted { transpositions: k },
            None => ProfileSource::Search(a.method.method()),
        },
        mode: nearest_mode(ctx, a.mode),
        search_cap: DEFAULT_SEARCH_CAP,
    };
    let rows = stability_profile(&p, &cfg)?;
    let mut r = Report::new();
    r.line(&[("presentation", p.name.clone()), ("n", a.n.to_string()), ("trials", a.trials.to_string())]);
    let show = |x: Option<Ratio>| x.map_or_else(|| "-".to_string(), |v| v.to_string());
    let mut worst = Ratio::from_integer(0);
    let mut planted_ok = true;
    for row in &rows {
        worst = worst.max(row.epsilon);
        if let Some(d) = row.planted {
            planted_ok &= row.epsilon <= d;
        }
        r.row(&[
            ("trial", row.trial.to_string()),
            ("target", show(row.target)),
            ("achieved", row.achieved.to_string()),
            ("reached", row.reached.to_string()),
            ("epsilon", row.epsilon.to_string()),
            ("planted", show(row.planted)),
        ]);
    }
    r.put("rows", rows.len());
    r.put("max_epsilon", worst);
    r.put("max_epsilon_approx", format!("{:.6}", ratio_to_f64(&worst)));
    if a.planted.is_some() {
        r.check("planted_bound", planted_ok);
    }
    Ok(r)
}

#[derive(Args, Debug)]
pub struct HigmanArgs {
    #[arg(long, default_value_t = 4)]
    n: usize,
    #[arg(long, default_value_t = 10)]
    show: usize,
    /// Also scan the bundled finite unitary groups.
    #[arg(long)]
    mirror: bool,
}

pub fn higman(ctx: &Ctx, a: &HigmanArgs) -> CliResult<Report> {
    let p = Presentation::higman();
    let mut r = Report::new();
    let trivial = scan_into(ctx, &mut r, &p, a.n, a.show, a.mirror)?;
    r.check("only_trivial", trivial);
    Ok(r)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum LengthKind {
    Hs,
    Op,
}

#[derive(Args, Debug)]
pub struct ContractiveArgs {
    /// `S<n>`, a catalog group, or `U:<name>` for a bundled unitary group
    /// (Q8, C4wrC2, C3wrC3, C2wrC4, B4).
    #[arg(long, default_value = "U:Q8")]
    group: String,
    /// Length on unitary groups.
    #[arg(long, value_enum, default_value_t = LengthKind::Op)]
    length: LengthKind,
    /// Four elements separated by `;`; defaults to the identity.
    #[arg(long)]
    tuple: Option<String>,
    #[arg(long, default_value = "1/200")]
    eps: String,
}

fn contractive_group(a: &ContractiveArgs) -> CliResult<LengthGroup> {
    match a.group.strip_prefix("U:") {
        Some(name) => {
            let t = unitary_test_groups()
                .into_iter()
                .find(|t| t.group.name() == name)
                .ok_or_else(|| usage(format!("unknown unitary group `{name}`")))?;
            let kind = match a.length {
                LengthKind::Hs => UnitaryLength::HilbertSchmidt,
                LengthKind::Op => UnitaryLength::Operator,
            };
            Ok(LengthGroup::from_unitaries(name, &t.matrices, kind)?)
        }
        None => length_group(&a.group),
    }
}

pub fn contractive(ctx: &Ctx, a: &ContractiveArgs) -> CliResult<Report> {
    let g = contractive_group(a)?;
    let elems: Vec<GroupElem> = match &a.tuple {
        Some(t) => t.split(';').map(|x| element(&g, x)).collect::<CliResult<_>>()?,
        None => vec![g.identity(); 4],
    };
    let tuple: [GroupElem; 4] = elems.try_into().map_err(|_| usage("--tuple needs exactly four elements"))?;
    let eps = Scalar::Exact(ctx::ratio(&a.eps)?);
    let rep = commutator_contractive_suite(&g, &tuple, eps, ctx.cap_enum(5040))?;
    let mut r = Report::new();
    r.put("group", &rep.group);
    r.put("pairs", rep.pairs_checked);
    r.put("violations", rep.violations.len());
    for v in rep.violations.iter().take(10) {
        r.row(&[
            ("x", v.x.clone()),
            ("y", v.y.clone()),
            ("commutator_length", v.commutator_length.to_string()),
            ("bound", v.bound.to_string()),
        ]);
    }
    let join = |v: &[Scalar]| v.iter().map(ToString::to_string).collect::<Vec<_>>().join(",");
    r.put("relator_defects", join(&rep.relator_defects));
    r.put("lengths", join(&rep.lengths));
    r.put("hypothesis", rep.hypothesis);
    r.put("conclusion", rep.conclusion.map_or_else(|| "n/a".to_string(), |c| c.to_string()));
    r.check("contractive", rep.contractive());
    r.check("passed", rep.passed());
    Ok(r)
}
