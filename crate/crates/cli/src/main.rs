use boson_witness::sweep::{
    run_and_write, run_checks, CheckSelector, Family, Grid, OutputFormat, SweepConfig,
};
use boson_witness::Error;
use clap::{Args, Parser, Subcommand};
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

const EXIT_CHECK_FAILED: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_IO: u8 = 3;

#[derive(Parser)]
#[command(name = "boson-witness", version, about = "Entanglement identifiers for two-component boson states")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sweep a state family over N and a parameter grid.
    Sweep(SweepArgs),
    /// Run verification suites: basis, appendix, closed-forms, roundtrip or all.
    Check {
        selector: String,
        /// Restrict basis checks to one dimension.
        #[arg(long)]
        d: Option<usize>,
    },
}

#[derive(Args)]
struct SweepArgs {
    /// szsz, acstark, pdc or maxent.
    family: String,
    /// Comma-separated N values; `a-b` ranges allowed (e.g. `1-8,12`).
    #[arg(long)]
    n: Option<String>,
    /// Parameter grid `lo:hi:steps` (τ for szsz, t for acstark); bounds may use `pi`.
    #[arg(long)]
    grid: Option<String>,
    /// acstark: one point per N at t = value / N.
    #[arg(long = "t-over-n")]
    t_over_n: Option<f64>,
    #[arg(long, requires = "nd")]
    nc: Option<u32>,
    #[arg(long, requires = "nc")]
    nd: Option<u32>,
    /// pdc squeezing grid `lo:hi:steps`, endpoints included.
    #[arg(long = "K")]
    k: Option<String>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, default_value = "csv")]
    format: String,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 1)]
    jobs: usize,
    /// Allow N up to 40.
    #[arg(long)]
    allow_large: bool,
}

fn parse_n_list(s: &str) -> Result<Vec<usize>, Error> {
    let bad = |p: &str| Error::InvalidArgument(format!("bad N value '{p}'"));
    let mut out = Vec::new();
    for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        match part.split_once('-') {
            Some((a, b)) => {
                let a: usize = a.trim().parse().map_err(|_| bad(part))?;
                let b: usize = b.trim().parse().map_err(|_| bad(part))?;
                if a > b {
                    return Err(bad(part));
                }
                out.extend(a..=b);
            }
            None => out.push(part.parse().map_err(|_| bad(part))?),
        }
    }
    Ok(out)
}

fn build_config(args: &SweepArgs) -> Result<(SweepConfig, OutputFormat), Error> {
    let family: Family = args.family.parse()?;
    let format: OutputFormat = args.format.parse()?;
    let mut config = SweepConfig::new(family);
    if let Some(n) = &args.n {
        config.n_values = parse_n_list(n)?;
    }
    if let Some(g) = &args.grid {
        config.grid = Grid::parse(g, false)?;
    }
    if let Some(k) = &args.k {
        config.k_grid = Grid::parse(k, true)?;
    }
    if args.t_over_n.is_some() && family != Family::Acstark {
        return Err(Error::InvalidArgument("--t-over-n applies to acstark only".into()));
    }
    if args.nc.is_some() && family != Family::Acstark {
        return Err(Error::InvalidArgument("--nc/--nd apply to acstark only".into()));
    }
    config.t_over_n = args.t_over_n;
    config.outcomes = args.nc.zip(args.nd);
    config.seed = args.seed;
    config.jobs = args.jobs;
    config.allow_large = args.allow_large;
    Ok((config, format))
}

fn exit_for(e: &Error) -> u8 {
    match e {
        Error::Io(_) => EXIT_IO,
        Error::InvalidArgument(_) | Error::ScaleLimit(_) | Error::InvalidDimension { .. } => EXIT_USAGE,
        _ => EXIT_CHECK_FAILED,
    }
}

fn sweep(args: &SweepArgs) -> Result<(), Error> {
    let (config, format) = build_config(args)?;
    for w in config.validate()? {
        eprintln!("warning: {w}");
    }
    let mut buf = Vec::new();
    run_and_write(&config, format, &mut buf)?;
    match &args.out {
        Some(path) => std::fs::write(path, &buf)
            .map_err(|e| std::io::Error::new(e.kind(), format!("{}: {e}", path.display())))?,
        None => std::io::stdout().lock().write_all(&buf)?,
    }
    Ok(())
}

fn check(selector: &str, d: Option<usize>) -> Result<bool, Error> {
    let selector: CheckSelector = selector.parse()?;
    let dims = d.map(|d| vec![d]);
    let reports = run_checks(selector, dims.as_deref())?;
    let failures: Vec<&str> = reports
        .iter()
        .filter(|r| !r.passed)
        .map(|r| r.check_name.as_str())
        .collect();
    let passed = failures.is_empty();
    let doc = serde_json::json!({
        "passed": passed,
        "total": reports.len(),
        "failures": failures,
        "reports": reports,
    });
    let mut out = std::io::stdout().lock();
    serde_json::to_writer_pretty(&mut out, &doc).map_err(std::io::Error::from)?;
    writeln!(out)?;
    for f in &failures {
        eprintln!("FAILED: {f}");
    }
    Ok(passed)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Sweep(args) => sweep(args).map(|_| true),
        Command::Check { selector, d } => check(selector, *d),
    };
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(EXIT_CHECK_FAILED),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_for(&e))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn n_lists() {
        assert_eq!(parse_n_list("1-3,7").unwrap(), vec![1, 2, 3, 7]);
        assert_eq!(parse_n_list("4").unwrap(), vec![4]);
        assert!(parse_n_list("3-1").is_err());
        assert!(parse_n_list("x").is_err());
    }
}
