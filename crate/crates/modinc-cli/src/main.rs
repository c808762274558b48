//! `modinc` — solve, sweep, compare, and verify moderation-incentive
//! controlled-acceleration scenarios.
//!
//! Exit codes: 0 success, 2 usage error, 3 solver failure,
//! 4 verification failure.

// Negated comparisons like `!(c > 0.0)` deliberately treat NaN as
// out of domain.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

use clap::{Args, Parser, Subcommand};
use modinc_cli::compare::{compare_csv, compare_rescaled};
use modinc_cli::io;
use modinc_cli::scenario::{run_solve, IncentiveKind, Scenario, ScenarioSpec};
use modinc_cli::sweep::{run_sweep, sweep_csv, SweepSpec};
use modinc_cli::verify::{render_table, run_verify};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "modinc",
    version,
    about = "Moderation-incentive optimal control scenarios"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct ScenarioArgs {
    /// Scenario: warmup | spook | qcc-spook | qcc-hat
    #[arg(long, default_value = "warmup")]
    scenario: Scenario,
    /// Incentive family: trivial | elliptical | quadratic
    #[arg(long, default_value = "elliptical")]
    incentive: IncentiveKind,
    /// Moderation parameter of the elliptical family, in (0, 1]
    #[arg(long, default_value_t = 0.5)]
    mu: f64,
    /// Position-penalty intensity
    #[arg(long, default_value_t = 1.0)]
    c: f64,
    /// Oscillation index of the qcc-hat family
    #[arg(long, default_value_t = 1)]
    k: u32,
    /// Number of uniformly spaced trajectory samples
    #[arg(long, default_value_t = 1001)]
    samples: usize,
    /// Solver tolerance
    #[arg(long, default_value_t = 1e-10)]
    tol: f64,
    /// Reserved; all solvers are deterministic
    #[arg(long)]
    seed: Option<u64>,
}

impl ScenarioArgs {
    fn spec(&self) -> ScenarioSpec {
        ScenarioSpec {
            scenario: self.scenario,
            incentive: self.incentive,
            mu: self.mu,
            c: self.c,
            k: self.k,
            samples: self.samples,
            tol: self.tol,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Solve one scenario; write the trajectory CSV and summary JSON.
    Solve {
        #[command(flatten)]
        scenario: ScenarioArgs,
        /// Trajectory CSV path
        #[arg(long)]
        out: Option<PathBuf>,
        /// Summary JSON path
        #[arg(long)]
        summary: Option<PathBuf>,
    },
    /// Solve a grid of (mu, c) values; write one CSV row per cell.
    Sweep {
        #[command(flatten)]
        scenario: ScenarioArgs,
        /// Values of mu: 'a:b:step' or a comma list
        #[arg(long = "sweep-mu")]
        sweep_mu: Option<ValueList>,
        /// Values of c: 'a:b:step' or a comma list
        #[arg(long = "sweep-c")]
        sweep_c: Option<ValueList>,
        /// Output CSV path (stdout when omitted)
        #[arg(long)]
        out: Option<PathBuf>,
        /// Worker threads for sweep rows
        #[arg(long, default_value_t = default_jobs())]
        jobs: usize,
    },
    /// Compare controls on the rescaled clock s = c^(1/4)/sqrt(2) * t.
    CompareRescaled {
        /// Position-penalty intensity (0 < c <= 1)
        #[arg(long, default_value_t = 1.0)]
        c: f64,
        #[arg(long, default_value_t = 1001)]
        samples: usize,
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
        /// Output CSV path (stdout when omitted)
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the invariant suite and print one pass/fail row per check.
    Verify {
        /// Diagnostic hook: shift the solved q-profile by this amount so
        /// the conservation check must fail (negative control).
        #[arg(long = "perturb-q0", hide = true)]
        perturb_q0: Option<f64>,
    },
}

fn default_jobs() -> usize {
    std::thread::available_parallelism()
        .map(|n| n.get().min(8))
        .unwrap_or(1)
}

/// One sweep-axis argument: a list of parameter values.
#[derive(Clone, Debug)]
struct ValueList(Vec<f64>);

impl std::str::FromStr for ValueList {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        parse_values(s).map(ValueList)
    }
}

/// Parses 'a:b:step' (inclusive, step > 0) or a comma-separated list.
fn parse_values(s: &str) -> Result<Vec<f64>, String> {
    if s.contains(':') {
        let parts: Vec<&str> = s.split(':').collect();
        if parts.len() != 3 {
            return Err(format!("expected a:b:step, got '{s}'"));
        }
        let a: f64 = parts[0].parse().map_err(|e| format!("bad start: {e}"))?;
        let b: f64 = parts[1].parse().map_err(|e| format!("bad end: {e}"))?;
        let step: f64 = parts[2].parse().map_err(|e| format!("bad step: {e}"))?;
        if !(step > 0.0) || b < a {
            return Err("need step > 0 and end >= start".into());
        }
        let mut out = Vec::new();
        let n = ((b - a) / step).round() as usize;
        for i in 0..=n {
            let v = a + i as f64 * step;
            if v <= b + 1e-12 * step {
                out.push(v.min(b));
            }
        }
        Ok(out)
    } else {
        s.split(',')
            .map(|tok| {
                tok.trim()
                    .parse::<f64>()
                    .map_err(|e| format!("'{tok}': {e}"))
            })
            .collect()
    }
}

fn write_or_print(path: &Option<PathBuf>, content: &str) -> std::io::Result<()> {
    match path {
        Some(p) => std::fs::write(p, content),
        None => {
            print!("{content}");
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Solve {
            scenario,
            out,
            summary,
        } => match run_solve(&scenario.spec()) {
            Ok(outcome) => {
                if let Some(p) = &out {
                    if let Err(e) = io::write_trajectory_csv(p, &outcome.trajectory) {
                        eprintln!("failed to write {}: {e}", p.display());
                        return ExitCode::from(3);
                    }
                }
                let json = io::summary_json(&outcome.report);
                if let Some(p) = &summary {
                    if let Err(e) = std::fs::write(p, &json) {
                        eprintln!("failed to write {}: {e}", p.display());
                        return ExitCode::from(3);
                    }
                }
                print!("{json}");
                ExitCode::SUCCESS
            }
            Err(e) => {
                print!("{}", io::error_json(&e));
                ExitCode::from(3)
            }
        },
        Command::Sweep {
            scenario,
            sweep_mu,
            sweep_c,
            out,
            jobs,
        } => {
            let spec = SweepSpec {
                scenario: scenario.scenario,
                incentive: scenario.incentive,
                mu_values: sweep_mu.map(|v| v.0).unwrap_or_default(),
                c_values: sweep_c.map(|v| v.0).unwrap_or_default(),
                k: scenario.k,
                samples: scenario.samples,
                tol: scenario.tol,
                jobs,
            };
            let rows = run_sweep(&spec);
            let csv = sweep_csv(&spec, &rows);
            if let Err(e) = write_or_print(&out, &csv) {
                eprintln!("failed to write sweep output: {e}");
                return ExitCode::from(3);
            }
            ExitCode::SUCCESS
        }
        Command::CompareRescaled {
            c,
            samples,
            tol,
            out,
        } => match compare_rescaled(c, samples, tol) {
            Ok(table) => {
                let csv = compare_csv(&table);
                if let Err(e) = write_or_print(&out, &csv) {
                    eprintln!("failed to write comparison output: {e}");
                    return ExitCode::from(3);
                }
                ExitCode::SUCCESS
            }
            Err(e) => {
                print!("{}", io::error_json(&e));
                ExitCode::from(3)
            }
        },
        Command::Verify { perturb_q0 } => {
            let checks = run_verify(perturb_q0);
            print!("{}", render_table(&checks));
            if checks.iter().all(|c| c.passed) {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(4)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::parse_values;

    #[test]
    fn parse_comma_list() {
        assert_eq!(parse_values("0.2,1,5").unwrap(), vec![0.2, 1.0, 5.0]);
    }

    #[test]
    fn parse_range() {
        let v = parse_values("0.25:1.0:0.25").unwrap();
        assert_eq!(v, vec![0.25, 0.5, 0.75, 1.0]);
    }

    #[test]
    fn parse_rejects_garbage() {
        assert!(parse_values("1:2").is_err());
        assert!(parse_values("a,b").is_err());
        assert!(parse_values("2:1:0.5").is_err());
    }
}
