use clap::{Args, Parser, Subcommand};
use qmet::cli::{run, verify, RawConfig, Suite, VerifyOptions};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "qmet", version, about = "Semidefinite precision bounds for channel estimation")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Compute bounds over a noise grid and write CSV
    Bounds(BoundsArgs),
    /// Run a built-in verification suite
    Verify(VerifyArgs),
}

#[derive(Args)]
struct BoundsArgs {
    /// key=value file; flags override its entries
    #[arg(long)]
    config: Option<PathBuf>,
    /// one-param | pauli | su2 | field-sensing | custom-choi
    #[arg(long)]
    scenario: Option<String>,
    /// qubit count (field-sensing) or dimension (pauli)
    #[arg(long)]
    n: Option<String>,
    /// spin (su2)
    #[arg(long)]
    j: Option<String>,
    /// noise grid start:stop:step (aliases --p, --gamma, --theta)
    #[arg(long, visible_aliases = ["p", "gamma", "theta"])]
    noise: Option<String>,
    /// comma list of J2..J5, J1ext:m, Ssym2..5, S3d2..5
    #[arg(long)]
    bounds: Option<String>,
    /// identity or a row-major comma list
    #[arg(long, allow_hyphen_values = true)]
    weight: Option<String>,
    /// central | forward
    #[arg(long)]
    fd_scheme: Option<String>,
    #[arg(long)]
    fd_step: Option<String>,
    /// solver gap and feasibility tolerance
    #[arg(long)]
    tol: Option<String>,
    #[arg(long)]
    jobs: Option<String>,
    /// JSON file with d_a, d_b, choi and derivatives (custom-choi)
    #[arg(long)]
    choi: Option<String>,
    /// CSV destination, stdout when absent
    #[arg(long)]
    out: Option<String>,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long, default_value = "all")]
    suite: String,
    /// corrupt the 3D-GHZ objective in the orderings suite
    #[arg(long)]
    inject_fault: bool,
}

fn bounds(a: BoundsArgs) -> Result<ExitCode, qmet::Error> {
    let mut raw = match &a.config {
        Some(p) => {
            let text = std::fs::read_to_string(p).map_err(|e| qmet::Error::Io(format!("{}: {e}", p.display())))?;
            RawConfig::parse(&text).map_err(|e| qmet::Error::Config(format!("{}: {e}", p.display())))?
        }
        None => RawConfig::default(),
    };
    if a.noise.is_some() {
        // a flag replaces whichever alias the file used
        for k in ["noise", "p", "gamma", "theta"] {
            raw.entries.remove(k);
        }
    }
    let flags = [
        ("scenario", a.scenario),
        ("n", a.n),
        ("j", a.j),
        ("noise", a.noise),
        ("bounds", a.bounds),
        ("weight", a.weight),
        ("fd-scheme", a.fd_scheme),
        ("fd-step", a.fd_step),
        ("tol", a.tol),
        ("jobs", a.jobs),
        ("choi", a.choi),
        ("out", a.out),
    ];
    for (k, v) in flags {
        if let Some(v) = v {
            raw.set(k, v)?;
        }
    }
    let cfg = raw.build()?;
    let report = run(&cfg)?;
    match &cfg.out {
        Some(p) => std::fs::write(p, report.csv()).map_err(|e| qmet::Error::Io(format!("{}: {e}", p.display())))?,
        None => print!("{}", report.csv()),
    }
    for r in report.rows.iter().filter(|r| !r.is_optimal()) {
        eprintln!("{} at noise {}: {}", r.bound, r.noise, r.status);
    }
    Ok(ExitCode::from(report.exit_code() as u8))
}

fn main() -> ExitCode {
    let level = std::env::var("QMET_LOG").unwrap_or_else(|_| "warn".into());
    env_logger::Builder::new().parse_filters(&level).init();

    let res = match Cli::parse().cmd {
        Cmd::Bounds(a) => bounds(a),
        Cmd::Verify(a) => a.suite.parse::<Suite>().map(|s| {
            let checks = verify(
                s,
                VerifyOptions {
                    inject_fault: a.inject_fault,
                },
            );
            for c in &checks {
                println!("{c}");
            }
            let failed = checks.iter().filter(|c| !c.passed).count();
            println!("{} checks, {failed} failed", checks.len());
            if failed == 0 {
                ExitCode::SUCCESS
            } else {
                ExitCode::FAILURE
            }
        }),
    };
    match res {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
