use std::collections::BTreeMap;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use jetva::config::{parse_algebra, parse_config};
use jetva::rational::parse_rational;
use jetva::report::{Format, Report};
use jetva::suites::{
    run_fock, run_invariants, run_report, run_vertex, FockOptions, InvariantsOptions, RingSource,
    VertexOptions,
};
use jetva::{Error, Result};

#[derive(Parser)]
#[command(name = "jetva", version, about = "Exact checks for jet-ring invariants and the chiral de Rham vertex algebra")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Output format.
    #[arg(long, global = true, default_value = "json")]
    format: String,
    /// Write the report here instead of standard output.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Invariant dimensions, the eight invariants, generation windows.
    Invariants(InvariantsArgs),
    /// The eight sections of the βγ–bc system.
    Vertex(VertexArgs),
    /// Hermitian form, Gram matrices and adjoint relations.
    Fock(FockArgs),
    /// Every suite at its default window.
    Report(ReportArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Preset {
    TjBundle,
    CdrFibre,
}

#[derive(Args)]
struct InvariantsArgs {
    #[arg(long, conflicts_with = "config")]
    preset: Option<Preset>,
    /// Ring declaration file.
    #[arg(long)]
    config: Option<PathBuf>,
    /// `sl2`, `sl3`, `sp4`, ...
    #[arg(long)]
    algebra: Option<String>,
    /// Truncation order m.
    #[arg(long)]
    jet: Option<u32>,
    /// Degree in the `e` family.
    #[arg(long)]
    le: Option<u32>,
    /// Fixed family degree, `family=degree`; repeatable.
    #[arg(long = "degree")]
    degrees: Vec<String>,
    /// Weight window `a..b` (inclusive).
    #[arg(long)]
    weights: Option<String>,
    #[arg(long)]
    expect_total: Option<usize>,
    /// Comma-separated expected dimensions over the window.
    #[arg(long)]
    expect_dims: Option<String>,
    /// Check the eight fibre invariants.
    #[arg(long)]
    check_eight: bool,
    /// Compare the span of the eight with all invariants up to this weight.
    #[arg(long)]
    gap: Option<i64>,
    /// Compare the kernel of `g`, `K₁`, `K₂` with the invariants on the window.
    #[arg(long)]
    lemma: bool,
    /// Compare minimal and full generator sets on the window.
    #[arg(long)]
    minimal: bool,
}

#[derive(Args)]
struct VertexArgs {
    #[arg(long, default_value_t = 2)]
    n: usize,
    /// Central charge, weights, closure at weight 4 and the involution.
    #[arg(long)]
    verify_n4: bool,
    #[arg(long)]
    central_charge: bool,
    #[arg(long)]
    symbol_check: bool,
    /// Strong-span closure of all brackets up to this weight.
    #[arg(long)]
    closure: Option<String>,
    /// Sign involution check up to this weight.
    #[arg(long)]
    automorphism: Option<String>,
}

#[derive(Args)]
struct FockArgs {
    #[arg(long, default_value_t = 2)]
    n: usize,
    #[arg(long)]
    gram: bool,
    #[arg(long)]
    adjoints: bool,
    #[arg(long, default_value = "2")]
    max_weight: String,
    /// Override an adjoint shift, e.g. `Q:-n`; repeatable.
    #[arg(long = "rule")]
    rules: Vec<String>,
}

#[derive(Args)]
struct ReportArgs {
    #[arg(long, default_value_t = 2)]
    n: usize,
    /// Seed for the sampled engine identities.
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

fn parse_window(s: &str) -> Result<(i64, i64)> {
    let bad = || Error::Parse(format!("bad window {s:?}, expected a..b"));
    let (a, b) = s.split_once("..").ok_or_else(bad)?;
    let a: i64 = a.trim().parse().map_err(|_| bad())?;
    let b: i64 = b.trim().trim_start_matches('=').parse().map_err(|_| bad())?;
    if a > b || a < 0 {
        return Err(Error::Parse(format!("empty weight window {s:?}")));
    }
    Ok((a, b))
}

fn invariants(a: InvariantsArgs) -> Result<Report> {
    let ring = match (a.preset, &a.config) {
        (Some(Preset::TjBundle), _) => RingSource::TjBundle,
        (Some(Preset::CdrFibre), _) => RingSource::CdrFibre,
        (None, Some(path)) => {
            let text = std::fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
            RingSource::Config(parse_config(&text)?)
        }
        (None, None) => RingSource::TjBundle,
    };
    let mut o = InvariantsOptions::new(ring);
    o.algebra = a.algebra.as_deref().map(parse_algebra).transpose()?;
    if o.algebra.is_none() && !matches!(o.ring, RingSource::Config(_)) {
        o.algebra = Some(jetva::lie::LieKind::Sl(2));
    }
    o.jet = a.jet;
    let mut degrees = BTreeMap::new();
    if let Some(le) = a.le {
        degrees.insert("e".to_string(), le);
    }
    for d in &a.degrees {
        let (f, v) = d.split_once('=').ok_or_else(|| Error::Parse(format!("bad degree {d:?}")))?;
        let v = v.parse().map_err(|_| Error::Parse(format!("bad degree {d:?}")))?;
        degrees.insert(f.to_string(), v);
    }
    o.degrees = degrees;
    o.weights = a.weights.as_deref().map(parse_window).transpose()?;
    o.expect_total = a.expect_total;
    o.expect_dims = a
        .expect_dims
        .as_deref()
        .map(|s| {
            s.split(',')
                .map(|x| x.trim().parse().map_err(|_| Error::Parse(format!("bad dims {s:?}"))))
                .collect::<Result<Vec<usize>>>()
        })
        .transpose()?;
    o.check_eight = a.check_eight;
    o.gap_bound = a.gap;
    o.lemma = a.lemma;
    o.minimal = a.minimal;
    if o.weights.is_none() && !o.check_eight && o.gap_bound.is_none() {
        return Err(Error::Parse("nothing to do: give --weights, --check-eight or --gap".into()));
    }
    run_invariants(&o)
}

fn vertex(a: VertexArgs) -> Result<Report> {
    let mut o = VertexOptions::none(a.n);
    let any = a.verify_n4 || a.central_charge || a.symbol_check || a.closure.is_some() || a.automorphism.is_some();
    if a.verify_n4 || !any {
        o = VertexOptions::all(a.n);
        o.symbol_check = a.symbol_check || !any;
    }
    o.central_charge |= a.central_charge;
    o.symbol_check |= a.symbol_check;
    if let Some(b) = &a.closure {
        o.closure_bound = Some(parse_rational(b)?);
    }
    if let Some(b) = &a.automorphism {
        o.automorphism_bound = Some(parse_rational(b)?);
    }
    run_vertex(&o)
}

fn fock(a: FockArgs) -> Result<Report> {
    let any = a.gram || a.adjoints;
    run_fock(&FockOptions {
        n: a.n,
        gram: a.gram || !any,
        adjoints: a.adjoints || !any,
        max_weight: parse_rational(&a.max_weight)?,
        rules: a.rules,
    })
}

fn threads() {
    if let Some(n) = std::env::var("JETVA_THREADS").ok().and_then(|v| v.parse::<usize>().ok()) {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build_global();
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    threads();
    let format: Format = match cli.format.parse() {
        Ok(f) => f,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    let result = match cli.command {
        Command::Invariants(a) => invariants(a),
        Command::Vertex(a) => vertex(a),
        Command::Fock(a) => fock(a),
        Command::Report(a) => run_report(a.n, a.seed),
    };
    let report = match result {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    let text = report.render(format);
    match &cli.output {
        Some(path) => {
            if let Err(e) = std::fs::write(path, &text) {
                eprintln!("error: {}: {e}", path.display());
                return ExitCode::from(2);
            }
        }
        None => print!("{text}"),
    }
    if let Some(f) = &report.first_failure {
        eprintln!("failed: {f}");
    }
    if report.ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}
