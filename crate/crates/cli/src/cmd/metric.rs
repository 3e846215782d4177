//! `length`, `amplify`, `embed`, `polar`, `microstate`.

use clap::{Args, ValueEnum};
use num_complex::Complex64;
use rand::Rng;

use soficlab::metric::matrix::ComplexMatrix;
use soficlab::metric::microstate::{microstate_defect, FreeOracle, LatticeOracle, TrivialOracle, WordOracle};
use soficlab::metric::{permutation_matrix, Word, DEFAULT_DEGREE_CAP};
use soficlab::scalar::checked_pow;
use soficlab::{rng, Ratio};

use crate::ctx::{self, usage, CliResult, Ctx};
use crate::report::Report;

const FLOAT_TOL: f64 = 1e-9;

fn complex(z: Complex64) -> String {
    format!("{}{:+}i", z.re, z.im)
}

/// Matrices in the `mat n:` format, one block after another.
fn matrices(text: &str) -> CliResult<Vec<ComplexMatrix>> {
    let mut blocks: Vec<String> = Vec::new();
    for line in text.lines() {
        let t = line.split('#').next().unwrap_or("").trim();
        if t.is_empty() {
            continue;
        }
        if t.starts_with("mat") {
            blocks.push(String::new());
        }
        let b = blocks.last_mut().ok_or_else(|| usage("matrix file must start with `mat n:`"))?;
        b.push_str(t);
        b.push('\n');
    }
    blocks.iter().map(|b| Ok(b.parse::<ComplexMatrix>()?)).collect()
}

fn one_matrix(text: &str) -> CliResult<ComplexMatrix> {
    let mut ms = matrices(text)?;
    match ms.len() {
        1 => Ok(ms.remove(0)),
        k => Err(usage(format!("expected one matrix, found {k}"))),
    }
}

#[derive(Args, Debug)]
pub struct LengthArgs {
    /// Permutation `n: i0 i1 ...`; without it the matrix in --in is measured.
    #[arg(long)]
    perm: Option<String>,
}

pub fn length(ctx: &Ctx, a: &LengthArgs) -> CliResult<Report> {
    let mut r = Report::new();
    match &a.perm {
        Some(p) => {
            let s = ctx::perm(p)?;
            r.put("length", s.hamming_length());
            r.line(&[
                ("degree", s.degree().to_string()),
                ("moved", s.moved_count().to_string()),
                ("cycles", s.cycle_count().to_string()),
            ]);
        }
        None => {
            let m = one_matrix(&ctx.input()?)?;
            let h = m.hs_metrics();
            r.put("length", h.hs_length);
            r.put("trace", complex(h.trace));
            r.put("hs_norm", h.hs_norm);
            r.put("dim", m.dim());
            r.put("unitary", m.is_unitary(FLOAT_TOL));
        }
    }
    Ok(r)
}

#[derive(Args, Debug)]
pub struct AmplifyArgs {
    #[arg(long)]
    perm: Option<String>,
    /// Tensor power.
    #[arg(long, default_value_t = 2)]
    k: u32,
}

pub fn amplify(ctx: &Ctx, a: &AmplifyArgs) -> CliResult<Report> {
    let mut r = Report::new();
    let cap = ctx.cap_degree(DEFAULT_DEGREE_CAP);
    r.put("k", a.k);
    match &a.perm {
        Some(p) => {
            let s = ctx::perm(p)?;
            let t = s.tensor_power(a.k, cap)?;
            let l = s.hamming_length();
            let fixed = checked_pow(Ratio::from_integer(1) - l, a.k)
                .ok_or(soficlab::Error::Overflow("predicted tensor length"))?;
            let predicted = Ratio::from_integer(1) - fixed;
            r.put("length", l);
            r.put("degree", t.degree());
            r.put("amplified_length", t.hamming_length());
            r.put("predicted", predicted);
            r.check("matches", t.hamming_length() == predicted);
        }
        None => {
            let m = one_matrix(&ctx.input()?)?;
            let t = m.tensor_power(a.k, cap)?;
            let tr = m.trace();
            let predicted = tr.powu(a.k);
            r.put("length", m.hs_length());
            r.put("dim", t.dim());
            r.put("amplified_length", t.hs_length());
            r.put("trace", complex(t.trace()));
            r.put("predicted_trace", complex(predicted));
            r.check("matches", (t.trace() - predicted).norm() <= FLOAT_TOL);
        }
    }
    Ok(r)
}

#[derive(Args, Debug)]
pub struct EmbedArgs {
    #[arg(long)]
    perm: String,
    /// Target degree, larger than the degree of the permutation.
    #[arg(long)]
    target: usize,
}

pub fn embed(_ctx: &Ctx, a: &EmbedArgs) -> CliResult<Report> {
    let s = ctx::perm(&a.perm)?;
    let e = s.block_embed(a.target)?;
    let n = s.degree();
    let blocks = a.target / n;
    // the N mod n leftover points are fixed
    let expected = s.hamming_length() * Ratio::new((blocks * n) as i64, a.target as i64);
    let (x, y) = (e.hamming_length(), s.hamming_length());
    let gap = if x >= y { x - y } else { y - x };
    let bound = Ratio::new(1, blocks as i64);
    let mut r = Report::new();
    r.put("length", s.hamming_length());
    r.line(&[("target", a.target.to_string()), ("blocks", blocks.to_string())]);
    r.put("embedded_length", e.hamming_length());
    r.put("expected", expected);
    r.put("gap", gap);
    r.put("gap_bound", bound);
    r.check("matches", e.hamming_length() == expected);
    r.check("within_gap_bound", gap <= bound);
    Ok(r)
}

#[derive(Args, Debug)]
pub struct PolarArgs {
    /// Dimension of a random test matrix (used when --in is absent).
    #[arg(long, default_value_t = 4)]
    dim: usize,
    /// Entrywise perturbation size added to a random unitary.
    #[arg(long, default_value_t = 0.05)]
    noise: f64,
}

pub fn polar(ctx: &Ctx, a: &PolarArgs) -> CliResult<Report> {
    let m = if ctx.has_input() {
        one_matrix(&ctx.input()?)?
    } else {
        let mut g = rng::stream(ctx.seed, 0);
        let u = ComplexMatrix::random_unitary(a.dim, &mut g);
        let rows: Vec<Vec<Complex64>> = (0..a.dim)
            .map(|i| {
                (0..a.dim)
                    .map(|j| {
                        let d = Complex64::new(g.gen_range(-1.0..1.0), g.gen_range(-1.0..1.0));
                        u.get(i, j) + d * a.noise
                    })
                    .collect()
            })
            .collect();
        ComplexMatrix::from_rows(&rows)?
    };
    let p = m.polar_repair()?;
    let mut r = Report::new();
    r.put("dim", m.dim());
    r.put("input_residual", m.unitarity_residual());
    r.put("iterations", p.iterations);
    r.put("last_step", p.last_step);
    r.put("residual", p.residual);
    r.put("distance", m.hs_distance(&p.unitary));
    r.check("unitary", p.unitary.is_unitary(FLOAT_TOL));
    Ok(r)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OracleKind {
    /// `Z^k`: a word is trivial iff every exponent sum vanishes.
    Lattice,
    /// Free group: trivial iff it freely reduces to the empty word.
    Free,
    /// Every word is trivial.
    Trivial,
}

#[derive(Args, Debug)]
pub struct MicrostateArgs {
    /// Generator images as permutations separated by `;`; otherwise the
    /// matrices in --in are used.
    #[arg(long)]
    perms: Option<String>,
    #[arg(long, value_enum, default_value_t = OracleKind::Lattice)]
    oracle: OracleKind,
    #[arg(long, default_value_t = 3)]
    max_len: usize,
    /// Extra words that must be trivial, over generators g0, g1, ...
    /// (e.g. "g0 g1 g0^-1 g1^-1"). Repeatable.
    #[arg(long = "rel")]
    relations: Vec<String>,
}

pub fn microstate(ctx: &Ctx, a: &MicrostateArgs) -> CliResult<Report> {
    let mats = match &a.perms {
        Some(p) => ctx::perms(p)?.iter().map(permutation_matrix).collect(),
        None => matrices(&ctx.input()?)?,
    };
    let k = mats.len();
    let names: Vec<String> = (0..k).map(|i| format!("g{i}")).collect();
    let rels = a.relations.iter().map(|w| Word::parse_spaced(w, &names)).collect::<soficlab::Result<Vec<_>>>()?;
    let oracle: Box<dyn WordOracle> = match a.oracle {
        OracleKind::Lattice => Box::new(LatticeOracle(k)),
        OracleKind::Free => Box::new(FreeOracle(k)),
        OracleKind::Trivial => Box::new(TrivialOracle(k)),
    };
    let rep = microstate_defect(&mats, &rels, a.max_len, oracle.as_ref())?;
    let mut r = Report::new();
    r.put("generators", k);
    r.put("dim", mats.first().map_or(0, ComplexMatrix::dim));
    r.put("defect", rep.defect);
    r.put("words_checked", rep.words_checked);
    r.put("oracle_failures", rep.oracle_failures);
    r.put("worst", rep.worst.map(|w| w.render(&names, " ")).unwrap_or_default());
    Ok(r)
}
