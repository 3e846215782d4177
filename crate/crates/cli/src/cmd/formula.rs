//! `formula-eval`, `formula-series`.

use clap::Args;

use soficlab::formula::corpus::{self, CORPUS};
use soficlab::formula::eval::{DEFAULT_ENUM_CAP, DEFAULT_WORK_CAP};
use soficlab::formula::{evaluate, parse_formula, sentence_series, Assignment, EvalConfig, Formula};
use soficlab::metric::{catalog, GroupElem, LengthGroup};

use crate::ctx::{self, usage, CliResult, Ctx};
use crate::report::Report;

/// `S<n>` (Hamming length, any `n`) or a name from the bundled catalog,
/// such as `D4/hamming` or `C6/trivial`.
pub fn length_group(name: &str) -> CliResult<LengthGroup> {
    let bare = name.strip_suffix("/hamming").unwrap_or(name);
    if let Some(n) = bare.strip_prefix('S').and_then(|d| d.parse::<usize>().ok()) {
        return Ok(LengthGroup::symmetric(n));
    }
    let all = catalog();
    if let Some(g) = all.iter().find(|g| g.name() == name || g.name() == format!("{name}/hamming")) {
        return Ok(g.clone());
    }
    let names: Vec<&str> = all.iter().map(LengthGroup::name).collect();
    Err(usage(format!("unknown group `{name}`; try S<n> or one of {}", names.join(", "))))
}

/// An element of `g`: a permutation for `S_n`, else an element name.
pub fn element(g: &LengthGroup, text: &str) -> CliResult<GroupElem> {
    match g.table() {
        Some(t) => t
            .index_of(text.trim())
            .map(GroupElem::Index)
            .ok_or_else(|| usage(format!("no element `{}` in {}", text.trim(), g.name()))),
        None => Ok(GroupElem::Perm(ctx::perm(text)?)),
    }
}

#[derive(Args, Debug)]
pub struct SourceArgs {
    /// Formula text.
    #[arg(long, conflicts_with = "name")]
    sentence: Option<String>,
    /// A bundled sentence by name.
    #[arg(long)]
    name: Option<String>,
    /// Sample each quantifier this many times instead of enumerating.
    #[arg(long)]
    samples: Option<usize>,
}

fn source_text(ctx: &Ctx, a: &SourceArgs) -> CliResult<String> {
    match (&a.sentence, &a.name) {
        (Some(s), _) => Ok(s.clone()),
        (None, Some(n)) => corpus::sentence(n).map(str::to_string).ok_or_else(|| {
            let names: Vec<&str> = CORPUS.iter().map(|(n, _)| *n).collect();
            usage(format!("unknown sentence `{n}`; bundled: {}", names.join(", ")))
        }),
        (None, None) if ctx.has_input() => Ok(ctx.input()?),
        (None, None) => Err(usage("give --sentence, --name or --in")),
    }
}

fn config(ctx: &Ctx, a: &SourceArgs) -> EvalConfig {
    let mut c = match a.samples {
        Some(s) => EvalConfig::sampled(s, ctx.seed),
        None => EvalConfig::exact(),
    };
    c.enum_cap = ctx.cap_enum(DEFAULT_ENUM_CAP);
    c.work_cap = ctx.cap_work(DEFAULT_WORK_CAP);
    c
}

#[derive(Args, Debug)]
pub struct EvalArgs {
    #[command(flatten)]
    source: SourceArgs,
    #[arg(long, default_value = "S3")]
    group: String,
    /// Free variable values `x=<element>`. Repeatable.
    #[arg(long = "assign")]
    assign: Vec<String>,
}

pub fn eval(ctx: &Ctx, a: &EvalArgs) -> CliResult<Report> {
    let text = source_text(ctx, &a.source)?;
    let g = length_group(&a.group)?;
    let mut assignment = Assignment::new();
    for kv in &a.assign {
        let (k, v) = kv.split_once('=').ok_or_else(|| usage(format!("expected name=element, got `{kv}`")))?;
        assignment.insert(k.trim().to_string(), element(&g, v)?);
    }
    let params: Vec<&str> = assignment.keys().map(String::as_str).collect();
    let f: Formula = parse_formula(&text, &params)?;
    let e = evaluate(&f, &g, &assignment, config(ctx, &a.source))?;
    let mut r = Report::new();
    r.put("formula", &f);
    r.put("group", g.name());
    r.put("order", g.order());
    r.put("value", e.value);
    r.put("kind", e.kind.as_str());
    r.put("approx", e.value.to_f64());
    Ok(r)
}

#[derive(Args, Debug)]
pub struct SeriesArgs {
    #[command(flatten)]
    source: SourceArgs,
    /// Degrees, as `a..b`, `a..=b` or a comma list.
    #[arg(long, default_value = "1..=5")]
    degrees: String,
}

pub fn series(ctx: &Ctx, a: &SeriesArgs) -> CliResult<Report> {
    let text = source_text(ctx, &a.source)?;
    let f = parse_formula(&text, &[])?;
    let degrees = ctx::range_or_list(&a.degrees)?;
    let points = sentence_series(&f, &degrees, config(ctx, &a.source))?;
    let mut r = Report::new();
    r.put("formula", &f);
    for p in &points {
        r.row(&[
            ("n", p.n.to_string()),
            ("value", p.value.to_string()),
            ("kind", p.kind.as_str().to_string()),
            ("step", p.step.map_or_else(|| "-".to_string(), |s| s.to_string())),
        ]);
    }
    if let Some(last) = points.last() {
        r.put("last", last.value);
    }
    Ok(r)
}
