use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use opframe::scenario::{self, Scenario, ScenarioError, ScenarioReport};

#[derive(Parser)]
#[command(name = "opframe", version, about = "Frame, K-frame and weak A-frame scenarios")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a scenario file and write its JSON report.
    Run {
        file: PathBuf,
        /// Report path; defaults to `<scenario name>.report.json`.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Override the scenario seed.
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Run the bundled scenario for a named example.
    Reproduce {
        name: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// List the bundled examples.
    List,
    /// Print the scenario JSON Schema.
    Schema,
}

fn fail(e: &ScenarioError) -> ExitCode {
    eprintln!("error: {e}");
    ExitCode::from(e.exit_code() as u8)
}

fn write_report(report: &ScenarioReport, out: &Path) -> Result<(), ScenarioError> {
    let io = |e: std::io::Error| ScenarioError::Internal(format!("writing {}: {e}", out.display()));
    if let Some(dir) = out.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir).map_err(io)?;
    }
    std::fs::write(out, report.to_json_pretty() + "\n").map_err(io)?;
    let stem = out.with_extension("");
    for t in &report.trajectories {
        let csv = PathBuf::from(format!("{}.{}.csv", stem.display(), t.probe));
        std::fs::write(&csv, t.to_csv()).map_err(io)?;
    }
    Ok(())
}

fn print_summary(report: &ScenarioReport, out: &Path) {
    for c in &report.checks {
        let value = c.value.map_or_else(|| "n/a".to_string(), |v| format!("{v:.6e}"));
        let status = if c.pass { "PASS" } else { "FAIL" };
        println!("{status} {:<24} {value:>14}  {:?} {:e}", c.name, c.bound, c.tolerance);
        if let Some(n) = c.note.as_ref().filter(|_| !c.pass) {
            println!("     {n}");
        }
    }
    println!(
        "{}: {} ({:.2} s), report {}",
        report.scenario,
        if report.pass { "pass" } else { "FAIL" },
        report.wall_clock_seconds,
        out.display()
    );
}

fn execute(s: &Scenario, out: Option<PathBuf>) -> Result<bool, ScenarioError> {
    let scale = scenario::tolerance_scale_from_env()?;
    let report = scenario::run(s, scale)?;
    let out = out.unwrap_or_else(|| PathBuf::from(format!("{}.report.json", s.name)));
    write_report(&report, &out)?;
    print_summary(&report, &out);
    Ok(report.pass)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Run { file, out, seed } => std::fs::read_to_string(&file)
            .map_err(|e| ScenarioError::Invalid(format!("reading {}: {e}", file.display())))
            .and_then(|text| Scenario::from_json(&text))
            .and_then(|mut s| {
                if let Some(seed) = seed {
                    s.seed = seed;
                }
                execute(&s, out)
            }),
        Command::Reproduce { name, out } => scenario::bundled(&name).and_then(|s| execute(&s, out)),
        Command::List => {
            for b in scenario::bundled_entries() {
                let s = Scenario::from_json(b.text).expect("bundled scenarios parse");
                println!("{:<20} {}", b.name, s.description);
            }
            Ok(true)
        }
        Command::Schema => {
            print!("{}", scenario::SCHEMA);
            Ok(true)
        }
    };
    match outcome {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => fail(&e),
    }
}
