//! `morphism-defect`, `folner`, `nice-repair`, `to-unitary`, `free-product`.

use std::path::PathBuf;
use std::sync::Arc;

use clap::Args;

use soficlab::approx::io::{parse_model, parse_morphism, write_morphism, ModelFile, MorphismFile};
use soficlab::approx::{
    folner_morphism, free_product_morphism, nice_repair, to_unitary, ApproxMorphism, DefectReport, FreeProductCaps,
    GroupModel, Lattice, TableModel,
};
use soficlab::metric::{FiniteGroup, Permutation};

use crate::ctx::{self, usage, CliResult, Ctx};
use crate::report::Report;

const FLOAT_TOL: f64 = 1e-9;

#[derive(Args, Debug)]
pub struct ModelArgs {
    /// Domain model file (`lattice d`, `table ...` or `presentation`).
    #[arg(long)]
    model: Option<PathBuf>,
    /// Shorthand for a `Z^d` domain when no model file is given.
    #[arg(long, default_value_t = 1)]
    lattice: usize,
}

fn load_model(a: &ModelArgs) -> CliResult<ModelFile> {
    match &a.model {
        Some(p) => Ok(parse_model(&ctx::read_file(p)?)?),
        None => Ok(ModelFile::Lattice(Lattice(a.lattice))),
    }
}

/// Runs `$body` with `$m` bound to the concrete model.
macro_rules! with_model {
    ($file:expr, |$m:ident| $body:expr) => {
        match $file {
            ModelFile::Lattice($m) => $body,
            ModelFile::Table($m) => $body,
            ModelFile::Presented($m) => $body,
        }
    };
}

fn put_defect(r: &mut Report, prefix: &str, d: &DefectReport) {
    r.put(&format!("{prefix}mult_defect"), d.mult_defect);
    r.put(&format!("{prefix}length_defect"), d.length_defect);
    r.put(&format!("{prefix}pairs"), d.pairs_measured);
    r.put(&format!("{prefix}unresolved"), d.unresolved.len());
    r.put(&format!("{prefix}undecided"), d.undecided.len());
}

fn sym_only<M: GroupModel>(f: MorphismFile<M>) -> CliResult<ApproxMorphism<M, Permutation>> {
    match f {
        MorphismFile::Sym(phi) => Ok(phi),
        MorphismFile::Unitary(_) => Err(usage("this command needs a `target sym n` morphism")),
    }
}

#[derive(Args, Debug)]
pub struct DefectArgs {
    #[command(flatten)]
    model: ModelArgs,
}

pub fn morphism_defect(ctx: &Ctx, a: &DefectArgs) -> CliResult<Report> {
    let text = ctx.input()?;
    let mut r = Report::new();
    with_model!(load_model(&a.model)?, |m| {
        match parse_morphism(m, &text)? {
            MorphismFile::Sym(phi) => {
                r.line(&[("target", "sym".into()), ("dim", phi.dim().to_string()), ("domain", phi.len().to_string())]);
                put_defect(&mut r, "", &phi.defect());
            }
            MorphismFile::Unitary(phi) => {
                r.line(&[
                    ("target", "unitary".into()),
                    ("dim", phi.dim().to_string()),
                    ("domain", phi.len().to_string()),
                ]);
                put_defect(&mut r, "", &phi.defect());
            }
        }
    });
    Ok(r)
}

#[derive(Args, Debug)]
pub struct FolnerArgs {
    #[arg(long, default_value_t = 1)]
    dim: usize,
    /// Side length of the box `K = [0, side)^dim`.
    #[arg(long, default_value_t = 10)]
    side: i64,
    /// Translations `F` as vectors `1,0;0,1`; defaults to the unit vectors.
    #[arg(long)]
    gens: Option<String>,
}

pub fn folner(_ctx: &Ctx, a: &FolnerArgs) -> CliResult<Report> {
    if a.side <= 0 {
        return Err(usage("--side must be positive"));
    }
    let f = match &a.gens {
        Some(g) => ctx::vectors(g)?,
        None => (0..a.dim).map(|i| (0..a.dim).map(|j| i64::from(i == j)).collect()).collect(),
    };
    let k = Lattice::boxed(&vec![a.side; a.dim]);
    let fm = folner_morphism(Lattice(a.dim), &k, &f)?;
    let d = fm.morphism.defect();
    let bound = fm.epsilon * 2;
    let mut r = Report::new();
    r.put("points", fm.points.len());
    r.put("domain", fm.morphism.len());
    r.put("epsilon", fm.epsilon);
    put_defect(&mut r, "", &d);
    r.put("bound", bound);
    let within = d.mult_defect.as_ratio().is_some_and(|x| x <= bound);
    r.check("within_bound", within);
    Ok(r)
}

#[derive(Args, Debug)]
pub struct NiceArgs {
    #[command(flatten)]
    model: ModelArgs,
    /// Write the repaired morphism here.
    #[arg(long)]
    out: Option<PathBuf>,
}

pub fn nice(ctx: &Ctx, a: &NiceArgs) -> CliResult<Report> {
    let text = ctx.input()?;
    let mut r = Report::new();
    with_model!(load_model(&a.model)?, |m| {
        let phi = sym_only(parse_morphism(m, &text)?)?;
        let out = nice_repair(&phi)?;
        let model = out.model();
        let mut inverse_ok = true;
        let mut fixed_point_free = true;
        for (x, s) in out.entries() {
            if let Some(t) = out.get(&model.inverse(x)) {
                inverse_ok &= *t == s.inverse();
            }
            if model.is_identity(x) == Some(false) {
                fixed_point_free &= s.fixed_point_count() == 0;
            }
        }
        r.line(&[("dim_in", phi.dim().to_string()), ("dim_out", out.dim().to_string())]);
        put_defect(&mut r, "before_", &phi.defect());
        put_defect(&mut r, "after_", &out.defect());
        r.check("inverse_exact", inverse_ok);
        r.check("fixed_point_free", fixed_point_free);
        if let Some(p) = &a.out {
            ctx::write_file(p, &write_morphism(&out))?;
            r.put("written", p.display());
        }
    });
    Ok(r)
}

#[derive(Args, Debug)]
pub struct UnitaryArgs {
    #[command(flatten)]
    model: ModelArgs,
    #[arg(long)]
    out: Option<PathBuf>,
}

pub fn unitary(ctx: &Ctx, a: &UnitaryArgs) -> CliResult<Report> {
    let text = ctx.input()?;
    let mut r = Report::new();
    with_model!(load_model(&a.model)?, |m| {
        let phi = sym_only(parse_morphism(m, &text)?)?;
        let u = to_unitary(&phi);
        let ds = phi.defect();
        let du = u.defect();
        // ||P_s - P_t||_2^2 = 2 d_H(s, t), and the unitary distance is half the norm
        let predicted = (ds.mult_defect.to_f64() / 2.0).sqrt();
        r.put("dim", u.dim());
        r.put("perm_mult_defect", ds.mult_defect);
        r.put("unitary_mult_defect", du.mult_defect);
        r.put("predicted", predicted);
        r.check("matches", (du.mult_defect.to_f64() - predicted).abs() <= FLOAT_TOL);
        if let Some(p) = &a.out {
            ctx::write_file(p, &write_morphism(&u))?;
            r.put("written", p.display());
        }
    });
    Ok(r)
}

#[derive(Args, Debug)]
pub struct FreeProductArgs {
    /// Order of the cyclic left factor.
    #[arg(long, default_value_t = 2)]
    left: usize,
    /// Order of the cyclic right factor.
    #[arg(long, default_value_t = 2)]
    right: usize,
    /// Degree of the factor actions; defaults to the least common multiple
    /// of the two orders.
    #[arg(long)]
    n: Option<usize>,
    /// Normal forms of at most this many syllables.
    #[arg(long, default_value_t = 2)]
    radius: usize,
    #[arg(long)]
    out: Option<PathBuf>,
}

/// `C_k` acting on `n` points by `n / k` disjoint `k`-cycles.
fn cyclic_action(k: usize, n: usize) -> CliResult<ApproxMorphism<TableModel, Permutation>> {
    if k == 0 || !n.is_multiple_of(k) {
        return Err(usage(format!("degree {n} is not a multiple of the order {k}")));
    }
    let step = Permutation::new((0..n).map(|i| i - i % k + (i % k + 1) % k).collect())?;
    let g = Arc::new(FiniteGroup::cyclic(k));
    let entries = (0..k).map(|j| (j, step.pow(j as i64))).collect();
    Ok(ApproxMorphism::new(TableModel(g), entries)?)
}

fn lcm(a: usize, b: usize) -> usize {
    let gcd = |mut x: usize, mut y: usize| {
        while y != 0 {
            (x, y) = (y, x % y);
        }
        x
    };
    a / gcd(a, b) * b
}

pub fn free_product(ctx: &Ctx, a: &FreeProductArgs) -> CliResult<Report> {
    let n = a.n.unwrap_or_else(|| lcm(a.left.max(1), a.right.max(1)));
    let defaults = FreeProductCaps::default();
    let caps = FreeProductCaps {
        max_n: ctx.cap_degree(defaults.max_n),
        max_entries: ctx.cap_work(defaults.max_entries),
        ..defaults
    };
    let phi0 = cyclic_action(a.left, n)?;
    let phi1 = cyclic_action(a.right, n)?;
    let fp = free_product_morphism(&phi0, &phi1, a.radius, caps)?;
    let phi = &fp.morphism;
    let min_len = phi.entries().iter().filter(|(w, _)| !w.is_empty()).map(|(_, s)| s.hamming_length()).min();
    let mut r = Report::new();
    r.line(&[("n", n.to_string()), ("radius", fp.radius.to_string()), ("ball_size", fp.ball_size.to_string())]);
    r.put("dim", phi.dim());
    r.put("domain", phi.len());
    put_defect(&mut r, "", &phi.defect());
    r.put("min_nontrivial_length", min_len.map_or_else(|| "none".to_string(), |l| l.to_string()));
    if let Some(p) = &a.out {
        ctx::write_file(p, &write_morphism(phi))?;
        r.put("written", p.display());
    }
    Ok(r)
}
