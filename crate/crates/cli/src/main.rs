use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use spinfusion::cert::{Certificate, Status};
use spinfusion::suites::{self, RunConfig, Suite, SuiteError};

const EXIT_CLAIM_FAILURE: u8 = 1;
const EXIT_CONFIG: u8 = 2;

/// Runs the verification suites and writes or replays JSON certificates.
///
/// Without a subcommand the run options below apply; `--replay FILE` replays a
/// certificate instead.
#[derive(Parser, Debug)]
#[command(name = "spinfusion", version, args_conflicts_with_subcommands = true)]
struct Cli {
    #[command(subcommand)]
    command: Option<Command>,
    #[command(flatten)]
    run: RunArgs,
    /// Replay a certificate rather than running suites.
    #[arg(long, value_name = "FILE")]
    replay: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run suites and emit a certificate.
    Run(RunArgs),
    /// Re-execute the witness checks of a certificate.
    #[command(visible_alias = "replay")]
    VerifyCertificate {
        certificate: PathBuf,
        #[arg(long, env = "SPINFUSION_CACHE_DIR")]
        cache_dir: Option<PathBuf>,
    },
    /// List the registered suites.
    Suites,
}

#[derive(Args, Debug, Clone)]
struct RunArgs {
    /// Odd prime power: 3, 5, 7 or 9.
    #[arg(long, default_value_t = 3)]
    q: u64,
    /// Extension degree n of F_{q^n}.
    #[arg(long, default_value_t = 1)]
    n: u32,
    /// Suite to run; repeat for several. Defaults to all.
    #[arg(long = "suite", value_parser = parse_suite)]
    suites: Vec<Suite>,
    /// Degree bound for the Dickson membership and pullback checks (at most 30).
    #[arg(long, default_value_t = 20)]
    max_degree: u32,
    /// Largest form degree in the pullback check (at most 4).
    #[arg(long, default_value_t = 4)]
    form_degree: usize,
    /// Random instances per Clifford self-test check.
    #[arg(long, default_value_t = 100)]
    samples: usize,
    /// Sampled (P, g) pairs for the Γ-preservation check.
    #[arg(long, default_value_t = 20)]
    gamma_samples: usize,
    #[arg(long, default_value_t = 7)]
    seed: u64,
    /// Certificate path; stdout if omitted.
    #[arg(long, short)]
    output: Option<PathBuf>,
    /// Record wall times (certificates then differ between runs).
    #[arg(long)]
    timings: bool,
    /// Directory for cached Sylow tables.
    #[arg(long, env = "SPINFUSION_CACHE_DIR")]
    cache_dir: Option<PathBuf>,
}

fn parse_suite(s: &str) -> Result<Suite, String> {
    s.parse::<Suite>().map_err(|e| e.to_string())
}

impl RunArgs {
    fn config(&self) -> RunConfig {
        RunConfig {
            q: self.q,
            n: self.n,
            suites: if self.suites.is_empty() {
                Suite::ALL.to_vec()
            } else {
                self.suites.clone()
            },
            max_degree: self.max_degree,
            form_degree: self.form_degree,
            samples: self.samples,
            gamma_samples: self.gamma_samples,
            seed: self.seed,
            cache_dir: self.cache_dir.clone(),
            timings: self.timings,
        }
    }
}

fn status_word(s: Status) -> &'static str {
    match s {
        Status::Pass => "pass",
        Status::Fail => "FAIL",
        Status::Trusted => "trusted",
        Status::Unknown => "unknown",
    }
}

fn run(args: &RunArgs) -> ExitCode {
    let config = args.config();
    let cert = match suites::run(&config) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_CONFIG);
        }
    };
    for r in &cert.records {
        match r.wall_ms {
            Some(ms) => eprintln!("{:<8} {} ({ms} ms)", status_word(r.status), r.claim_id),
            None => eprintln!("{:<8} {}", status_word(r.status), r.claim_id),
        }
    }
    let json = cert.to_json();
    match &args.output {
        Some(path) => {
            if let Err(e) = fs::write(path, json + "\n") {
                eprintln!("error: cannot write {}: {e}", path.display());
                return ExitCode::from(EXIT_CONFIG);
            }
        }
        None => println!("{json}"),
    }
    if cert.has_failures() {
        ExitCode::from(EXIT_CLAIM_FAILURE)
    } else {
        ExitCode::SUCCESS
    }
}

fn replay(path: &Path, cache_dir: Option<PathBuf>) -> ExitCode {
    let cert = match fs::read_to_string(path)
        .map_err(|e| e.to_string())
        .and_then(|t| Certificate::from_json(&t).map_err(|e| e.to_string()))
    {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: cannot read {}: {e}", path.display());
            return ExitCode::from(EXIT_CONFIG);
        }
    };
    let report = match suites::replay(&cert, cache_dir) {
        Ok(r) => r,
        Err(e @ SuiteError::Config(_)) | Err(e @ SuiteError::Cert(_)) => {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_CONFIG);
        }
        Err(e) => {
            eprintln!("replay failed: {e}");
            return ExitCode::from(EXIT_CLAIM_FAILURE);
        }
    };
    if !report.digest_ok {
        eprintln!("digest mismatch");
    }
    for o in &report.outcomes {
        eprintln!(
            "{:<12} {} ({}, recorded {}, replayed {})",
            if o.reproduced {
                "reproduced"
            } else {
                "DIFFERS"
            },
            o.claim_id,
            o.method,
            status_word(o.recorded),
            status_word(o.replayed),
        );
    }
    let passed = report.passed();
    println!("{}", if passed { "true" } else { "false" });
    if passed {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(EXIT_CLAIM_FAILURE)
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_CONFIG } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match cli.command {
        Some(Command::Run(args)) => run(&args),
        Some(Command::VerifyCertificate {
            certificate,
            cache_dir,
        }) => replay(&certificate, cache_dir),
        Some(Command::Suites) => {
            for s in Suite::ALL {
                println!("{s}");
            }
            ExitCode::SUCCESS
        }
        None => match &cli.replay {
            Some(path) => replay(path, cli.run.cache_dir.clone()),
            None => run(&cli.run),
        },
    }
}
