//! `soficlab`: batch front-end for the soficlab library.

mod cmd;
mod ctx;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use cmd::{approx, entropy, formula, metric, rank, stability};
use ctx::{CliError, CliResult, Ctx};
use report::{Echo, Format, Report};

#[derive(Parser, Debug)]
#[command(name = "soficlab", version, about = "Finite experiments on sofic and hyperlinear approximations")]
struct Cli {
    /// Seed for every random choice in the run.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Worker threads; defaults to the available parallelism. Results do not
    /// depend on it.
    #[arg(long, global = true, value_parser = clap::value_parser!(u64).range(1..))]
    workers: Option<u64>,
    /// Enumeration cap (group elements, colorings, memo entries).
    #[arg(long, global = true)]
    cap_enum: Option<u128>,
    /// Work cap (search nodes, candidate evaluations, words).
    #[arg(long, global = true)]
    cap_work: Option<u128>,
    /// Largest permutation degree a construction may produce.
    #[arg(long, global = true)]
    cap_degree: Option<usize>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Human)]
    format: Format,
    /// Input file for commands that read one.
    #[arg(long = "in", global = true, value_name = "PATH")]
    input: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Hamming length of a permutation, or the normalized length of a matrix.
    Length(metric::LengthArgs),
    /// Length of a tensor power.
    Amplify(metric::AmplifyArgs),
    /// Block-diagonal embedding into a larger symmetric group.
    Embed(metric::EmbedArgs),
    /// Defect of an approximate morphism read from --in.
    MorphismDefect(approx::DefectArgs),
    /// Translation action on a Følner box.
    Folner(approx::FolnerArgs),
    /// Make an approximate morphism inverse-closed and fixed-point-free.
    NiceRepair(approx::NiceArgs),
    /// Permutation morphism to its unitary counterpart.
    ToUnitary(approx::UnitaryArgs),
    /// Approximate morphism of a free product of two cyclic groups.
    FreeProduct(approx::FreeProductArgs),
    /// Evaluate a formula in a length group.
    FormulaEval(formula::EvalArgs),
    /// Evaluate a sentence across symmetric groups of growing degree.
    FormulaSeries(formula::SeriesArgs),
    /// Rank of a matrix over a prime field.
    Rank(rank::RankArgs),
    /// Rank identities and lower bounds for permutation matrices.
    RankProbe(rank::ProbeArgs),
    /// Trace identities in a group algebra over a prime field.
    GalgCheck(rank::GalgArgs),
    /// Word counts and entropy estimate of a subshift.
    Entropy(entropy::EntropyArgs),
    /// Greedy tiling of a box in Z^d.
    Tiling(entropy::TilingArgs),
    /// Pattern counts along cyclic sofic maps.
    SoficEntropy(entropy::SoficArgs),
    /// Search for an approximate solution of a presentation.
    StabilitySearch(stability::SearchArgs),
    /// Every exact solution of a presentation in S_n.
    ExactScan(stability::ScanArgs),
    /// Nearest exact solution to the tuple in --in.
    NearestExact(stability::NearestArgs),
    /// Distance to exact solutions over many approximate ones.
    StabilityProfile(stability::ProfileArgs),
    /// Exact solutions of the Higman presentation.
    HigmanScan(stability::HigmanArgs),
    /// Nearest unitary to a matrix.
    Polar(metric::PolarArgs),
    /// Microstate defect of generator images.
    Microstate(metric::MicrostateArgs),
    /// Commutator contraction checks in a length group.
    ContractiveCheck(stability::ContractiveArgs),
}

impl Command {
    fn run(&self, ctx: &Ctx) -> CliResult<Report> {
        match self {
            Command::Length(a) => metric::length(ctx, a),
            Command::Amplify(a) => metric::amplify(ctx, a),
            Command::Embed(a) => metric::embed(ctx, a),
            Command::MorphismDefect(a) => approx::morphism_defect(ctx, a),
            Command::Folner(a) => approx::folner(ctx, a),
            Command::NiceRepair(a) => approx::nice(ctx, a),
            Command::ToUnitary(a) => approx::unitary(ctx, a),
            Command::FreeProduct(a) => approx::free_product(ctx, a),
            Command::FormulaEval(a) => formula::eval(ctx, a),
            Command::FormulaSeries(a) => formula::series(ctx, a),
            Command::Rank(a) => rank::rank(ctx, a),
            Command::RankProbe(a) => rank::probe(ctx, a),
            Command::GalgCheck(a) => rank::galg(ctx, a),
            Command::Entropy(a) => entropy::entropy(ctx, a),
            Command::Tiling(a) => entropy::tiling(ctx, a),
            Command::SoficEntropy(a) => entropy::sofic(ctx, a),
            Command::StabilitySearch(a) => stability::search(ctx, a),
            Command::ExactScan(a) => stability::scan(ctx, a),
            Command::NearestExact(a) => stability::nearest(ctx, a),
            Command::StabilityProfile(a) => stability::profile(ctx, a),
            Command::HigmanScan(a) => stability::higman(ctx, a),
            Command::Polar(a) => metric::polar(ctx, a),
            Command::Microstate(a) => metric::microstate(ctx, a),
            Command::ContractiveCheck(a) => stability::contractive(ctx, a),
        }
    }

    fn name(&self) -> &'static str {
        match self {
            Command::Length(_) => "length",
            Command::Amplify(_) => "amplify",
            Command::Embed(_) => "embed",
            Command::MorphismDefect(_) => "morphism-defect",
            Command::Folner(_) => "folner",
            Command::NiceRepair(_) => "nice-repair",
            Command::ToUnitary(_) => "to-unitary",
            Command::FreeProduct(_) => "free-product",
            Command::FormulaEval(_) => "formula-eval",
            Command::FormulaSeries(_) => "formula-series",
            Command::Rank(_) => "rank",
            Command::RankProbe(_) => "rank-probe",
            Command::GalgCheck(_) => "galg-check",
            Command::Entropy(_) => "entropy",
            Command::Tiling(_) => "tiling",
            Command::SoficEntropy(_) => "sofic-entropy",
            Command::StabilitySearch(_) => "stability-search",
            Command::ExactScan(_) => "exact-scan",
            Command::NearestExact(_) => "nearest-exact",
            Command::StabilityProfile(_) => "stability-profile",
            Command::HigmanScan(_) => "higman-scan",
            Command::Polar(_) => "polar",
            Command::Microstate(_) => "microstate",
            Command::ContractiveCheck(_) => "contractive-check",
        }
    }
}

fn run(cli: Cli) -> CliResult<bool> {
    let workers = match cli.workers {
        Some(w) => w as usize,
        None => std::thread::available_parallelism().map_or(1, |n| n.get()),
    };
    let ctx = Ctx::new(cli.seed, cli.input.clone(), cli.cap_enum, cli.cap_work, cli.cap_degree);
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| CliError::Io(format!("cannot start {workers} workers: {e}")))?;
    let report = pool.install(|| cli.command.run(&ctx))?;
    let mut caps = ctx.caps_echo();
    if let Some(p) = ctx.input_path() {
        caps.push(("input", p.display().to_string()));
    }
    let echo = Echo { command: cli.command.name().to_string(), seed: cli.seed, workers, caps };
    report::emit(&report::render(&report, &echo, cli.format)).map_err(|e| CliError::Io(e.to_string()))?;
    Ok(report.ok())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            let kind = match e {
                CliError::Usage(_) => "usage",
                CliError::Io(_) => "io",
                CliError::Core(_) => "error",
            };
            eprintln!("soficlab: {kind}: {e}");
            ExitCode::from(2)
        }
    }
}
