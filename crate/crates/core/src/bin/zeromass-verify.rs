use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use zeromass_core::config::{parse_suite_list, OutputFormat, SuiteConfig};
use zeromass_core::{emit, suites};

/// Run the zero-mass spinor verification suites and write reports.
#[derive(Debug, Parser)]
#[command(name = "zeromass-verify", version)]
struct Args {
    /// Flat `key = value` configuration file; flags override it.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Suite to run (repeatable, or comma separated). Default: all.
    #[arg(long = "suite")]
    suites: Vec<String>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    samples: Option<usize>,
    #[arg(long)]
    tol_exact: Option<f64>,
    #[arg(long)]
    tol_fd: Option<f64>,
    #[arg(long)]
    fd_step: Option<f64>,
    /// Output directory for report.json / report.md.
    #[arg(long)]
    out: Option<PathBuf>,
    /// json, markdown or both.
    #[arg(long)]
    format: Option<String>,
}

fn build_config(args: &Args) -> zeromass_core::Result<SuiteConfig> {
    let mut cfg = match &args.config {
        Some(p) => SuiteConfig::from_file(p)?,
        None => SuiteConfig::default(),
    };
    if !args.suites.is_empty() {
        cfg.suites = args.suites.iter().flat_map(|s| parse_suite_list(s)).collect();
    }
    if let Some(v) = args.seed {
        cfg.seed = v;
    }
    if let Some(v) = args.samples {
        cfg.samples = v;
    }
    if let Some(v) = args.tol_exact {
        cfg.tol_exact = v;
    }
    if let Some(v) = args.tol_fd {
        cfg.tol_fd = v;
    }
    if let Some(v) = args.fd_step {
        cfg.fd_step = v;
    }
    if let Some(f) = &args.format {
        cfg.format = f.parse::<OutputFormat>()?;
    }
    cfg.validate()?;
    Ok(cfg)
}

fn main() -> ExitCode {
    let args = Args::parse();
    let cfg = match build_config(&args) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    let report = match suites::run(&cfg) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    for s in &report.suites {
        let sm = s.summary();
        println!(
            "{:<12} {:>4} checks  {:>4} passed  {:>3} expected failures  {}",
            s.suite,
            sm.total,
            sm.passed,
            sm.expected_failures,
            if s.all_ok() { "ok" } else { "FAIL" }
        );
        for c in s.mismatches() {
            println!(
                "    unexpected: {} (residual {:.3e}, tol {:.1e})",
                c.name, c.residual, c.tol
            );
        }
    }
    if let Some(dir) = &args.out {
        match emit::emit(&report, cfg.format, dir) {
            Ok(paths) => {
                for p in paths {
                    println!("wrote {}", p.display());
                }
            }
            Err(e) => {
                eprintln!("error: {e}");
                return ExitCode::from(2);
            }
        }
    }
    println!("{}", if report.ok { "PASS" } else { "FAIL" });
    ExitCode::from(report.exit_code() as u8)
}
