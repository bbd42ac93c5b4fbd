//! Command-line front end: seeded verification suites and N-body scatter
//! runs with JSON reports.
//!
//! Exit codes: 0 on success, 1 when a suite records residual failures, 2 on
//! usage or input errors.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use reflectory::projective::PolarizationEnsemble;
use reflectory::suites::{run_scatter, run_suite, SuiteKind, SuiteParams};

#[derive(Parser)]
#[command(
    name = "reflectory",
    about = "Yang-Baxter and reflection maps on projectors, projective space, and rational loops",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a named verification suite with seeded trials.
    Verify {
        /// One of: ybe, reflection, involution, symplectic, loop-ybe,
        /// loop-reflection, uniqueness, consistency.
        suite: String,
        /// Ambient matrix dimension.
        #[arg(long, default_value_t = 3)]
        n: usize,
        /// Rank of the first projector stratum (random per trial if unset).
        #[arg(long)]
        k: Option<usize>,
        /// Rank of the second projector stratum (random per trial if unset).
        #[arg(long)]
        l: Option<usize>,
        /// Number of seeded trials.
        #[arg(long, default_value_t = 100)]
        trials: u64,
        /// Base seed; per-trial streams are derived from it.
        #[arg(long, default_value_t = 7)]
        seed: u64,
        /// Residual tolerance (default 1e-9 algebraic, 1e-5 symplectic).
        #[arg(long)]
        tol: Option<f64>,
        /// Emit the report as a single JSON line.
        #[arg(long)]
        json: bool,
    },
    /// Reflect an ensemble of polarized solitons off the boundary.
    Scatter {
        /// Ensemble JSON file; mutually exclusive with --random.
        #[arg(long, conflicts_with = "random")]
        input: Option<PathBuf>,
        /// Generate a random admissible ensemble instead.
        #[arg(long)]
        random: bool,
        /// Number of solitons for --random.
        #[arg(long = "N", default_value_t = 2)]
        n_solitons: usize,
        /// Ambient dimension for --random.
        #[arg(long, default_value_t = 2)]
        n: usize,
        /// Seed for --random.
        #[arg(long, default_value_t = 7)]
        seed: u64,
        /// Comma-separated 1-based soliton indices to keep, e.g. "1,3".
        #[arg(long)]
        subset: Option<String>,
        /// Write the collision schedule as an SVG diagram.
        #[arg(long)]
        emit_plot: Option<PathBuf>,
        /// Emit the report as a single JSON line.
        #[arg(long)]
        json: bool,
    },
}

fn usage_error(msg: &str) -> ExitCode {
    eprintln!("error: {msg}");
    ExitCode::from(2)
}

fn main() -> ExitCode {
    // Parallelism cap; trials run sequentially, which satisfies any cap >= 1.
    if let Ok(raw) = std::env::var("REFLECTORY_THREADS") {
        match raw.parse::<usize>() {
            Ok(v) if v >= 1 => {}
            _ => return usage_error("REFLECTORY_THREADS must be a positive integer"),
        }
    }
    let cli = Cli::parse();
    match cli.command {
        Command::Verify { suite, n, k, l, trials, seed, tol, json } => {
            let kind = match SuiteKind::parse(&suite) {
                Some(kind) => kind,
                None => {
                    return usage_error(&format!(
                        "unknown suite '{suite}'; expected one of: {}",
                        SuiteKind::all().map(|k| k.name()).join(", ")
                    ))
                }
            };
            let mut params = SuiteParams::new(n, trials, seed, tol.unwrap_or_else(|| kind.default_tol()));
            params.k = k;
            params.l = l;
            let report = match run_suite(kind, params) {
                Ok(report) => report,
                Err(e) => return usage_error(&e.to_string()),
            };
            if json {
                println!("{}", report.to_json());
            } else {
                print!("{report}");
            }
            if report.passed() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Command::Scatter { input, random, n_solitons, n, seed, subset, emit_plot, json } => {
            let ens = match load_ensemble(input, random, n_solitons, n, seed) {
                Ok(ens) => ens,
                Err(msg) => return usage_error(&msg),
            };
            let ens = match subset {
                None => ens,
                Some(spec) => match parse_subset(&spec, ens.len()) {
                    Ok(indices) => match ens.subset(&indices) {
                        Ok(sub) => sub,
                        Err(e) => return usage_error(&e.to_string()),
                    },
                    Err(msg) => return usage_error(&msg),
                },
            };
            let report = match run_scatter(&ens) {
                Ok(report) => report,
                Err(e) => return usage_error(&e.to_string()),
            };
            if let Some(path) = emit_plot {
                if let Err(e) = std::fs::write(&path, report.schedule_svg()) {
                    return usage_error(&format!("cannot write {}: {e}", path.display()));
                }
            }
            if json {
                println!("{}", report.to_json());
            } else {
                print_scatter_human(&report);
            }
            ExitCode::SUCCESS
        }
    }
}

fn load_ensemble(
    input: Option<PathBuf>,
    random: bool,
    n_solitons: usize,
    n: usize,
    seed: u64,
) -> Result<PolarizationEnsemble, String> {
    match (input, random) {
        (Some(path), false) => {
            let raw = std::fs::read_to_string(&path)
                .map_err(|e| format!("cannot read {}: {e}", path.display()))?;
            serde_json::from_str(&raw).map_err(|e| format!("invalid ensemble: {e}"))
        }
        (None, true) => {
            PolarizationEnsemble::random(n_solitons, n, seed).map_err(|e| e.to_string())
        }
        (None, false) => Err("either --input PATH or --random is required".into()),
        (Some(_), true) => unreachable!("clap rejects the combination"),
    }
}

fn parse_subset(spec: &str, len: usize) -> Result<Vec<usize>, String> {
    let mut out = Vec::new();
    for part in spec.split(',') {
        let idx: usize = part
            .trim()
            .parse()
            .map_err(|_| format!("subset entry '{part}' is not an index"))?;
        if idx == 0 || idx > len {
            return Err(format!("subset index {idx} out of range 1..={len}"));
        }
        out.push(idx - 1);
    }
    if out.is_empty() {
        return Err("subset must not be empty".into());
    }
    Ok(out)
}

fn fmt_vec(v: &[[f64; 2]]) -> String {
    let parts: Vec<String> = v.iter().map(|[re, im]| format!("{re:+.6}{im:+.6}i")).collect();
    format!("({})", parts.join(", "))
}

fn print_scatter_human(report: &reflectory::suites::ScatterReport) {
    println!("{} soliton(s) in CP^{}", report.solitons.len(), report.n - 1);
    for (i, s) in report.solitons.iter().enumerate() {
        println!("soliton {} at α = {:+.6}{:+.6}i", i + 1, s.alpha[0], s.alpha[1]);
        println!("  in : {}", fmt_vec(&s.initial));
        println!("  out: {}", fmt_vec(&s.reflected));
    }
    let emb: Vec<String> =
        report.embedding_params.iter().map(|[re, im]| format!("{re:+.3}{im:+.3}i")).collect();
    println!("mirror embedding parameters: [{}]", emb.join(", "));
    for (i, (init, fin)) in
        report.embedding_initial.iter().zip(&report.embedding_final).enumerate()
    {
        println!("  slot {:>2}: {} -> {}", i + 1, fmt_vec(init), fmt_vec(fin));
    }
    println!("collision events: {}", report.events.len());
    for (i, e) in report.events.iter().enumerate() {
        if e.reflection {
            println!("  step {:>3}: boundary reflection at α = {:+.3}{:+.3}i", i + 1, e.right[0], e.right[1]);
        } else {
            println!(
                "  step {:>3}: collision {:+.3}{:+.3}i × {:+.3}{:+.3}i",
                i + 1,
                e.left[0],
                e.left[1],
                e.right[0],
                e.right[1]
            );
        }
    }
    println!("consistency residual (oracle + scattering relation): {:.3e}", report.consistency_residual);
}
