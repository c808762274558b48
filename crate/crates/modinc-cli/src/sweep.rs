//! Parameter sweeps: one solve per (μ, c) combination, rows computed by
//! a worker pool and emitted in deterministic grid order. Per-row
//! failures are recorded in the error column and do not stop the run.

use crate::io::fmt_f64;
use crate::scenario::{run_solve, IncentiveKind, Scenario, ScenarioSpec};
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

#[derive(Debug, Clone)]
pub struct SweepSpec {
    pub scenario: Scenario,
    pub incentive: IncentiveKind,
    pub mu_values: Vec<f64>,
    pub c_values: Vec<f64>,
    pub k: u32,
    pub samples: usize,
    pub tol: f64,
    pub jobs: usize,
}

#[derive(Debug, Clone)]
pub struct SweepRow {
    pub mu: Option<f64>,
    pub c: Option<f64>,
    pub duration: Option<f64>,
    pub total_cost: Option<f64>,
    pub xdd0: Option<f64>,
    pub xdd_f: Option<f64>,
    pub t_star: Option<f64>,
    pub max_conserved_residual: Option<f64>,
    pub endpoint_residual: Option<f64>,
    pub error: Option<String>,
}

/// Cartesian grid of the sweep in row order.
fn grid(spec: &SweepSpec) -> Vec<(Option<f64>, Option<f64>)> {
    let mus: Vec<Option<f64>> = if spec.mu_values.is_empty() {
        vec![None]
    } else {
        spec.mu_values.iter().copied().map(Some).collect()
    };
    let cs: Vec<Option<f64>> = if spec.c_values.is_empty() {
        vec![None]
    } else {
        spec.c_values.iter().copied().map(Some).collect()
    };
    let mut out = Vec::with_capacity(mus.len() * cs.len());
    for mu in &mus {
        for c in &cs {
            out.push((*mu, *c));
        }
    }
    out
}

fn run_row(spec: &SweepSpec, mu: Option<f64>, c: Option<f64>) -> SweepRow {
    let scen = ScenarioSpec {
        scenario: spec.scenario,
        incentive: spec.incentive,
        mu: mu.unwrap_or(0.5),
        c: c.unwrap_or(1.0),
        k: spec.k,
        samples: spec.samples,
        tol: spec.tol,
    };
    match run_solve(&scen) {
        Ok(out) => {
            let first = &out.trajectory.samples[0];
            let last = out.trajectory.samples.last().unwrap();
            let endpoint = out.report.boundary_residuals[2];
            SweepRow {
                mu,
                c,
                duration: Some(out.report.t_f),
                total_cost: Some(out.report.total_cost),
                xdd0: Some(first.u[0]),
                xdd_f: Some(last.u[0]),
                t_star: out.report.t_star,
                max_conserved_residual: Some(out.report.max_conserved_residual),
                endpoint_residual: Some(endpoint),
                error: None,
            }
        }
        Err(e) => SweepRow {
            mu,
            c,
            duration: None,
            total_cost: None,
            xdd0: None,
            xdd_f: None,
            t_star: None,
            max_conserved_residual: None,
            endpoint_residual: None,
            error: Some(e.to_string()),
        },
    }
}

/// Executes every row of the grid, up to `jobs` concurrently. The output
/// order is the grid order regardless of scheduling.
pub fn run_sweep(spec: &SweepSpec) -> Vec<SweepRow> {
    let cells = grid(spec);
    let n = cells.len();
    let jobs = spec.jobs.max(1).min(n.max(1));
    if jobs == 1 || n <= 1 {
        return cells.iter().map(|(m, c)| run_row(spec, *m, *c)).collect();
    }
    let next = AtomicUsize::new(0);
    let rows: Mutex<Vec<Option<SweepRow>>> = Mutex::new(vec![None; n]);
    std::thread::scope(|scope| {
        for _ in 0..jobs {
            scope.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                if i >= n {
                    break;
                }
                let (mu, c) = cells[i];
                let row = run_row(spec, mu, c);
                rows.lock().unwrap()[i] = Some(row);
            });
        }
    });
    rows.into_inner()
        .unwrap()
        .into_iter()
        .map(|r| r.expect("every row computed"))
        .collect()
}

pub const SWEEP_HEADER: &str = "scenario,incentive,mu,c,k,duration,total_cost,xdd0,xdd_f,t_star,max_conserved_residual,endpoint_residual,error";

fn opt(v: Option<f64>) -> String {
    v.map(fmt_f64).unwrap_or_default()
}

pub fn sweep_csv(spec: &SweepSpec, rows: &[SweepRow]) -> String {
    let mut out = String::new();
    out.push_str(SWEEP_HEADER);
    out.push('\n');
    for r in rows {
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{},{},{},{},{},{}\n",
            spec.scenario.as_str(),
            spec.incentive.as_str(),
            opt(r.mu),
            opt(r.c),
            spec.k,
            opt(r.duration),
            opt(r.total_cost),
            opt(r.xdd0),
            opt(r.xdd_f),
            opt(r.t_star),
            opt(r.max_conserved_residual),
            opt(r.endpoint_residual),
            r.error.clone().unwrap_or_default(),
        ));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn warmup_mu_sweep_rows() {
        let spec = SweepSpec {
            scenario: Scenario::Warmup,
            incentive: IncentiveKind::Elliptical,
            mu_values: vec![1e-2, 1.0 / 3.0, 2.0 / 3.0, 1.0 - 1e-2],
            c_values: vec![],
            k: 1,
            samples: 201,
            tol: 1e-10,
            jobs: 2,
        };
        let rows = run_sweep(&spec);
        assert_eq!(rows.len(), 4);
        let durations: Vec<f64> = rows.iter().map(|r| r.duration.unwrap()).collect();
        assert!((durations[0] - 2.0).abs() < 1e-2);
        assert!(durations.windows(2).all(|w| w[1] > w[0]));
    }

    #[test]
    fn failures_become_error_rows() {
        let spec = SweepSpec {
            scenario: Scenario::Warmup,
            incentive: IncentiveKind::Elliptical,
            mu_values: vec![0.5, 1.0],
            c_values: vec![],
            k: 1,
            samples: 101,
            tol: 1e-10,
            jobs: 1,
        };
        let rows = run_sweep(&spec);
        assert!(rows[0].error.is_none());
        assert!(rows[1].error.is_some());
        assert!(rows[1].duration.is_none());
        let csv = sweep_csv(&spec, &rows);
        assert_eq!(csv.lines().count(), 3);
    }

    #[test]
    fn parallel_matches_serial() {
        let mk = |jobs| SweepSpec {
            scenario: Scenario::QccSpook,
            incentive: IncentiveKind::Quadratic,
            mu_values: vec![],
            c_values: vec![0.2, 1.0, 5.0],
            k: 1,
            samples: 101,
            tol: 1e-10,
            jobs,
        };
        let s1 = sweep_csv(&mk(1), &run_sweep(&mk(1)));
        let s4 = sweep_csv(&mk(4), &run_sweep(&mk(4)));
        assert_eq!(s1, s4);
    }
}
