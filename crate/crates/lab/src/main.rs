use clap::{Parser, Subcommand};
use cocycle_lab::{render_certificates, run_suite, LabError, Suite, SuiteConfig};
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

#[derive(Parser)]
#[command(name = "cocycle-lab", version, about = "Seeded checks of loop-group cocycles and their coboundaries")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a suite and write its report.
    Run {
        #[arg(long)]
        suite: Option<Suite>,
        /// One size, `Nr,Nθ,Nφ`, or for `converge` the refinement ladder.
        #[arg(long, value_delimiter = ',')]
        grid: Option<Vec<usize>>,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        steps: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        config: Option<PathBuf>,
        /// Report destination; stdout when absent.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        csv: Option<PathBuf>,
        /// Also write the symbolic certificates to this file.
        #[arg(long)]
        certificate: Option<PathBuf>,
    },
    /// Pretty-print a certificate file or the certificates inside a report.
    PrintCertificate { path: PathBuf },
}

fn read(path: &PathBuf) -> Result<String, LabError> {
    std::fs::read_to_string(path).map_err(|e| LabError::Io(format!("{}: {e}", path.display())))
}

fn write(path: &PathBuf, text: &str) -> Result<(), LabError> {
    std::fs::write(path, text).map_err(|e| LabError::Io(format!("{}: {e}", path.display())))
}

fn run(cli: Cli) -> Result<bool, LabError> {
    match cli.command {
        Command::PrintCertificate { path } => {
            print!("{}", render_certificates(&read(&path)?)?);
            Ok(true)
        }
        Command::Run { suite, grid, n, steps, seed, config, out, csv, certificate } => {
            let mut cfg = match &config {
                Some(p) => SuiteConfig::from_json(&read(p)?)?,
                None => SuiteConfig::default(),
            };
            if let Some(s) = suite {
                cfg.suite = s;
            }
            if let Some(g) = grid {
                cfg.apply_grid(&g)?;
            }
            if let Some(n) = n {
                cfg.n = n;
            }
            if let Some(t) = steps {
                cfg.steps = t;
            }
            if let Some(s) = seed {
                cfg.seed = s;
            }
            let start = Instant::now();
            let report = run_suite(&cfg)?;
            let json = report.to_json();
            match &out {
                Some(p) => write(p, &json)?,
                None => print!("{json}"),
            }
            if let Some(p) = &csv {
                report.write_csv(p)?;
            }
            if let Some(p) = &certificate {
                let text = serde_json::to_string_pretty(&report.certificates).expect("certificates are plain data");
                write(p, &(text + "\n"))?;
            }
            let gating = report.records.iter().filter(|r| r.gates()).count();
            eprintln!(
                "suite {}: {}/{} gating checks passed in {:.1} s",
                cfg.suite,
                gating - report.failures().count(),
                gating,
                start.elapsed().as_secs_f64()
            );
            for r in report.failures() {
                eprintln!("  FAIL {} [{}] residual {:?} tolerance {:?}", r.name, r.grid, r.residual, r.tolerance);
            }
            Ok(report.pass)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
