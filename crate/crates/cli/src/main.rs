use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use prequantum_cli::analysis::{run_verification, standalone_checks};
use prequantum_cli::builtin::{self, resolve};
use prequantum_cli::verify::VerifyOptions;
use prequantum_cli::{emit, AnalysisReport, CheckResult, CliError, Format, ScenarioFile};

#[derive(Parser, Debug)]
#[command(name = "prequantum", version, about = "Periods, cocycles and the prequantum groupoid of model spaces")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Analyze a built-in scenario or a scenario file and write the report.
    Analyze {
        /// Built-in name or path to a scenario JSON file.
        scenario: String,
        /// Grid sizes `S,N` (homotopy slices, samples per loop).
        #[arg(long, value_parser = parse_grid)]
        grid: Option<(usize, usize)>,
        /// Quadrature tolerance.
        #[arg(long)]
        tol: Option<f64>,
        /// Output directory.
        #[arg(long, env = "PREQUANTUM_OUT", default_value = "out")]
        out: PathBuf,
        /// Comma-separated formats: json, csv.
        #[arg(long, value_delimiter = ',', default_value = "json")]
        emit: Vec<Format>,
        /// Seed of the randomized checks.
        #[arg(long, default_value_t = VerifyOptions::default().seed)]
        seed: u64,
    },
    /// Run the verification suites; exits 1 if any check fails.
    Verify {
        /// `paper` for the whole built-in corpus, or one scenario.
        #[arg(long, default_value = "paper")]
        suite: String,
        #[arg(long, default_value_t = VerifyOptions::default().seed)]
        seed: u64,
    },
    /// List the built-in scenarios.
    ListScenarios,
}

fn parse_grid(s: &str) -> Result<(usize, usize), String> {
    let (a, b) = s.split_once(',').ok_or("expected S,N")?;
    let p = |x: &str| x.trim().parse::<usize>().map_err(|e| format!("{x}: {e}"));
    Ok((p(a)?, p(b)?))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

/// `Ok(false)` when some check failed.
fn run(cli: Cli) -> Result<bool, CliError> {
    match cli.command {
        Command::ListScenarios => {
            for name in builtin::names() {
                let f = builtin::builtin(name).expect("listed");
                println!("{name:<26} {}", f.description.unwrap_or_default());
            }
            Ok(true)
        }
        Command::Analyze { scenario, grid, tol, out, emit: formats, seed } => {
            let (mut file, dir) = resolve(&scenario)?;
            if let Some((s, n)) = grid {
                file.grid.s = s;
                file.grid.n = n;
            }
            if let Some(t) = tol {
                file.tolerance = t;
            }
            let opts = VerifyOptions { seed, ..VerifyOptions::default() };
            let report = run_verification(&file, &dir, &opts)?;
            print_summary(&report);
            for p in emit(&report, &formats, &out)? {
                println!("wrote {}", p.display());
            }
            Ok(report.passed())
        }
        Command::Verify { suite, seed } => {
            let opts = VerifyOptions { seed, ..VerifyOptions::default() };
            let files: Vec<(ScenarioFile, PathBuf)> = if suite == "paper" {
                builtin::names().map(|n| (builtin::builtin(n).expect("listed"), PathBuf::from("."))).collect()
            } else {
                vec![resolve(&suite)?]
            };
            let mut ok = true;
            for (file, dir) in files {
                let report = run_verification(&file, &dir, &opts)?;
                println!("== {}", report.scenario);
                print_checks(&report.checks);
                ok &= report.passed();
            }
            if suite == "paper" {
                println!("== moduli");
                let checks = standalone_checks();
                print_checks(&checks);
                ok &= checks.iter().all(|c| c.pass);
            }
            println!("{}", if ok { "all checks passed" } else { "some checks FAILED" });
            Ok(ok)
        }
    }
}

fn print_checks(checks: &[CheckResult]) {
    for c in checks {
        println!("  {}", c.line());
    }
}

fn print_summary(r: &AnalysisReport) {
    println!("scenario   {}", r.scenario);
    if let Some(s) = &r.space {
        println!("space      {s}");
    }
    println!("pi_1       {}", r.presentation);
    for p in &r.toric_periods {
        println!("period     {} = {:.9} (exact {}, error {:.1e})", p.label, p.value, p.exact.text, p.error);
    }
    for t in &r.relations {
        println!("T({})  raw {:.9} -> {}", t.word, t.raw, t.value.text);
    }
    println!("P_tor      {}", r.p_tor.text);
    println!("P_omega    {}", r.p_omega.text);
    println!("T_omega    {}", r.t_omega);
    println!("Ext        {}", r.moduli.ext);
    println!("H^1        {}", r.moduli.characters_h1);
    for w in &r.warnings {
        println!("warning    {w}");
    }
    print_checks(&r.checks);
}
