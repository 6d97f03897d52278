use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{CommandFactory, Parser, ValueEnum};
use superrll::rmatrix::Mutation;
use superrll::suite::{exit_code, relations_for, run, Command, RunConfig};
use superrll::{relations, EngineError, Status, Summary, VerificationReport};

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Human,
    Json,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Sub {
    Ybe,
    Unitarity,
    Rll,
    Currents,
    Efkh,
    Hopf,
    Coproducts,
    Evalrep,
    Transfer,
    All,
}

impl From<Sub> for Command {
    fn from(s: Sub) -> Command {
        match s {
            Sub::Ybe => Command::Ybe,
            Sub::Unitarity => Command::Unitarity,
            Sub::Rll => Command::Rll,
            Sub::Currents => Command::Currents,
            Sub::Efkh => Command::Efkh,
            Sub::Hopf => Command::Hopf,
            Sub::Coproducts => Command::Coproducts,
            Sub::Evalrep => Command::Evalrep,
            Sub::Transfer => Command::Transfer,
            Sub::All => Command::All,
        }
    }
}

/// Exact verification of the RLL-presented quantum affine superalgebra on gl(1|1).
#[derive(Parser, Debug)]
#[command(name = "superrll", version)]
struct Cli {
    /// Which group of checks to run.
    #[arg(value_enum)]
    subcommand: Sub,
    /// Mode truncation N.
    #[arg(long, default_value_t = 2)]
    truncation: u32,
    /// Coefficient window W for current identities.
    #[arg(long, default_value_t = 2)]
    window: i64,
    /// Longest transfer-matrix chain.
    #[arg(long, default_value_t = 3)]
    chain_length: usize,
    /// Coefficient window for the evaluation-representation series checks.
    #[arg(long, default_value_t = 8)]
    eval_window: i64,
    #[arg(long, value_enum, default_value_t = Format::Human)]
    report: Format,
    /// Worker threads; 0 picks the number of cores.
    #[arg(long, default_value_t = 0)]
    jobs: usize,
    /// Cap on word-space dimension (default from SUPERRLL_MAX_DIM or built in).
    #[arg(long)]
    max_dim: Option<usize>,
    /// Write the relation dump for the truncation to PATH.
    #[arg(long, value_name = "PATH")]
    dump_relations: Option<PathBuf>,
    /// Seed for sampled words, mutations and specializations.
    #[arg(long)]
    seed: Option<u64>,
    /// Negate R-matrix entry ROW,COL in the YBE and unitarity checks.
    #[arg(long, value_name = "ROW,COL", hide = true, value_parser = parse_entry)]
    mutate_r: Option<(usize, usize)>,
}

fn parse_entry(s: &str) -> Result<(usize, usize), String> {
    let (a, b) = s.split_once(',').ok_or("expected ROW,COL")?;
    let r: usize = a.trim().parse().map_err(|e| format!("{e}"))?;
    let c: usize = b.trim().parse().map_err(|e| format!("{e}"))?;
    if r > 3 || c > 3 {
        return Err("entries are indexed 0..=3".into());
    }
    Ok((r, c))
}

fn config(cli: &Cli) -> Result<RunConfig, EngineError> {
    let mut cfg = RunConfig::new(cli.subcommand.into());
    cfg.truncation = cli.truncation;
    cfg.window = cli.window;
    cfg.chain_length = cli.chain_length;
    cfg.eval_window = cli.eval_window;
    cfg.max_dim = match cli.max_dim {
        Some(d) => d,
        None => RunConfig::max_dim_from_env()?,
    };
    if let Some(s) = cli.seed {
        cfg.seed = s;
    }
    cfg.mutation = cli.mutate_r.map(|(r, c)| Mutation::Flip(r, c));
    cfg.validate()?;
    Ok(cfg)
}

fn dump(cfg: &RunConfig, path: &PathBuf) -> Result<(), EngineError> {
    let io_err = |e: io::Error| EngineError::Config(format!("{}: {e}", path.display()));
    let mut out = BufWriter::new(File::create(path).map_err(io_err)?);
    relations::write_dump(&relations_for(cfg), &mut out).map_err(io_err)?;
    out.flush().map_err(io_err)
}

fn human(r: &VerificationReport, out: &mut impl Write) -> io::Result<()> {
    let t = &r.tally;
    let tag = match r.status {
        Status::Pass => "PASS",
        Status::Fail => "FAIL",
        Status::ReportOnlyMismatch => "NOTE",
    };
    writeln!(
        out,
        "{tag:4}  {:28} zero={} trivial={} nonzero={} skipped={}  {} ms",
        r.check_id, t.zero, t.trivial, t.nonzero, t.skipped, r.timing_ms
    )?;
    if r.status != Status::Pass {
        writeln!(out, "      {}", r.equation)?;
        for (k, v) in &r.provenance {
            writeln!(out, "      {k}: {v}")?;
        }
        for x in r.residues.iter().take(5) {
            writeln!(out, "      at {}: {}", x.location, x.residue)?;
        }
        if r.residues.len() > 5 {
            writeln!(out, "      ... {} more", r.residues.len() - 5)?;
        }
    }
    Ok(())
}

fn emit(reports: &[VerificationReport], format: Format) -> io::Result<i32> {
    let summary = Summary::of(reports);
    let stdout = io::stdout();
    let mut out = BufWriter::new(stdout.lock());
    match format {
        Format::Json => {
            for r in reports {
                writeln!(out, "{}", serde_json::to_string(r).expect("report serializes"))?;
            }
            writeln!(out, "{}", serde_json::to_string(&summary).expect("summary serializes"))?;
        }
        Format::Human => {
            for r in reports {
                human(r, &mut out)?;
            }
            writeln!(
                out,
                "{} checks: {} passed, {} failed, {} report-only mismatches",
                summary.checks, summary.passed, summary.failed, summary.report_only_mismatches
            )?;
        }
    }
    out.flush()?;
    Ok(summary.exit_code)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => e.exit(),
        Err(e) => {
            let _ = e.print();
            eprintln!("\n{}", Cli::command().render_usage());
            return ExitCode::from(2);
        }
    };
    let result = config(&cli).and_then(|cfg| {
        if let Some(p) = &cli.dump_relations {
            dump(&cfg, p)?;
        }
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(cli.jobs)
            .build()
            .map_err(|e| EngineError::Config(e.to_string()))?;
        pool.install(|| run(&cfg))
    });
    match result {
        Ok(reports) => match emit(&reports, cli.report) {
            Ok(code) => ExitCode::from(code as u8),
            Err(e) => {
                eprintln!("superrll: {e}");
                ExitCode::from(1)
            }
        },
        Err(e) => {
            eprintln!("superrll: {e}");
            ExitCode::from(exit_code(&e) as u8)
        }
    }
}
