//! Scenario drivers: map a parameter set onto the appropriate solver and
//! assemble a trajectory plus a machine-readable report.

use modinc::closed_form;
use modinc::reparam::{self, ReparamProblem, SolveConfig};
use modinc::{Error, Incentive, PositionCost, Result, Trajectory};
use serde::{Deserialize, Serialize};
use std::time::Instant;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scenario {
    /// Constant cost, rest-to-rest unit transfer.
    Warmup,
    /// Quadratic position penalty `1 + (c/2)(1−x)²`.
    Spook,
    /// Piecewise solution of the spooking problem for the quadratic
    /// incentive (unit-control arc glued to a beam arc).
    QccSpook,
    /// Free-duration members of the `u²/2 + (c/2)(1−x)²` family.
    QccHat,
}

impl Scenario {
    pub fn as_str(&self) -> &'static str {
        match self {
            Scenario::Warmup => "warmup",
            Scenario::Spook => "spook",
            Scenario::QccSpook => "qcc-spook",
            Scenario::QccHat => "qcc-hat",
        }
    }
}

impl std::str::FromStr for Scenario {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "warmup" => Ok(Scenario::Warmup),
            "spook" => Ok(Scenario::Spook),
            "qcc-spook" => Ok(Scenario::QccSpook),
            "qcc-hat" => Ok(Scenario::QccHat),
            other => Err(format!(
                "unknown scenario '{other}' (expected warmup|spook|qcc-spook|qcc-hat)"
            )),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IncentiveKind {
    Trivial,
    Elliptical,
    Quadratic,
}

impl IncentiveKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            IncentiveKind::Trivial => "trivial",
            IncentiveKind::Elliptical => "elliptical",
            IncentiveKind::Quadratic => "quadratic",
        }
    }
}

impl std::str::FromStr for IncentiveKind {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "trivial" => Ok(IncentiveKind::Trivial),
            "elliptical" => Ok(IncentiveKind::Elliptical),
            "quadratic" => Ok(IncentiveKind::Quadratic),
            other => Err(format!(
                "unknown incentive '{other}' (expected trivial|elliptical|quadratic)"
            )),
        }
    }
}

/// Full parameter set of one solve.
#[derive(Debug, Clone, Copy)]
pub struct ScenarioSpec {
    pub scenario: Scenario,
    pub incentive: IncentiveKind,
    pub mu: f64,
    pub c: f64,
    pub k: u32,
    pub samples: usize,
    pub tol: f64,
}

impl Default for ScenarioSpec {
    fn default() -> Self {
        Self {
            scenario: Scenario::Warmup,
            incentive: IncentiveKind::Elliptical,
            mu: 0.5,
            c: 1.0,
            k: 1,
            samples: 1001,
            tol: 1e-10,
        }
    }
}

impl ScenarioSpec {
    pub fn solve_config(&self) -> SolveConfig {
        let mut cfg = SolveConfig::with_tol(self.tol.min(1e-10));
        cfg.endpoint_tol = (10.0 * self.tol).max(1e-9);
        cfg
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportParams {
    pub incentive: String,
    pub mu: Option<f64>,
    pub c: Option<f64>,
    pub k: Option<u32>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolverStats {
    pub iterations: u64,
    pub wall_ms: f64,
}

/// Summary of one solved scenario; serialized as the summary JSON.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolveReport {
    pub scenario: String,
    pub params: ReportParams,
    pub t_f: f64,
    pub total_cost: f64,
    pub t_star: Option<f64>,
    pub boundary_residuals: [f64; 4],
    pub max_conserved_residual: f64,
    pub solver: SolverStats,
}

pub struct SolveOutcome {
    pub trajectory: Trajectory,
    pub report: SolveReport,
}

fn incentive_of(spec: &ScenarioSpec) -> Result<Incentive> {
    match spec.incentive {
        IncentiveKind::Trivial => Ok(Incentive::Trivial),
        IncentiveKind::Quadratic => Ok(Incentive::QuadraticPoly),
        IncentiveKind::Elliptical => {
            if spec.mu == 1.0 {
                Ok(Incentive::Elliptical { mu: 1.0 })
            } else {
                Incentive::elliptical(spec.mu)
            }
        }
    }
}

/// Runs one scenario end to end.
pub fn run_solve(spec: &ScenarioSpec) -> Result<SolveOutcome> {
    if spec.samples < 2 {
        return Err(Error::Domain(format!(
            "samples must be at least 2, got {}",
            spec.samples
        )));
    }
    let t0 = Instant::now();
    let (trajectory, t_star, iterations) = match spec.scenario {
        Scenario::Warmup => solve_warmup(spec)?,
        Scenario::Spook => solve_spook(spec)?,
        Scenario::QccSpook => solve_qcc_spook(spec)?,
        Scenario::QccHat => solve_qcc_hat(spec)?,
    };
    let wall_ms = t0.elapsed().as_secs_f64() * 1e3;
    let report = SolveReport {
        scenario: spec.scenario.as_str().into(),
        params: ReportParams {
            incentive: spec.incentive.as_str().into(),
            mu: matches!(spec.incentive, IncentiveKind::Elliptical).then_some(spec.mu),
            c: (!matches!(spec.scenario, Scenario::Warmup)).then_some(spec.c),
            k: matches!(spec.scenario, Scenario::QccHat).then_some(spec.k),
        },
        t_f: trajectory.duration,
        total_cost: trajectory.total_cost,
        t_star,
        boundary_residuals: trajectory.boundary_residuals(0.0, 1.0),
        max_conserved_residual: trajectory.max_conserved_residual(),
        solver: SolverStats {
            iterations,
            wall_ms,
        },
    };
    Ok(SolveOutcome { trajectory, report })
}

fn solve_warmup(spec: &ScenarioSpec) -> Result<(Trajectory, Option<f64>, u64)> {
    match spec.incentive {
        // closed forms: the time-minimizing and quadratic-incentive
        // free-duration members need no shooting
        IncentiveKind::Trivial => {
            let sol = closed_form::warmup_general(&Incentive::Trivial, 1.0)?;
            Ok((sol.to_trajectory(spec.samples)?, None, 0))
        }
        IncentiveKind::Quadratic => {
            let sol = closed_form::warmup_general(&Incentive::QuadraticPoly, 1.0)?;
            Ok((sol.to_trajectory(spec.samples)?, None, 0))
        }
        IncentiveKind::Elliptical => {
            if spec.mu == 1.0 {
                return Err(Error::Degenerate(
                    "mu = 1 warmup: the free-duration profile degenerates (t_f -> inf)".into(),
                ));
            }
            let inc = Incentive::elliptical(spec.mu)?;
            let prob = ReparamProblem::arbitrary_duration(PositionCost::Constant, inc, 0.0, 1.0)?;
            let sol = reparam::solve_reparam(&prob, &spec.solve_config())?;
            Ok((sol.to_trajectory(spec.samples)?, None, sol.iterations))
        }
    }
}

fn solve_spook(spec: &ScenarioSpec) -> Result<(Trajectory, Option<f64>, u64)> {
    let cost = PositionCost::spook(spec.c)?;
    match spec.incentive {
        // the quadratic incentive's spooking solution is the glued
        // closed form; delegate to that scenario
        IncentiveKind::Quadratic => solve_qcc_spook(spec),
        IncentiveKind::Trivial => {
            let prob = ReparamProblem::arbitrary_duration(cost, Incentive::Trivial, 0.0, 1.0)?;
            let sol = reparam::solve_reparam(&prob, &spec.solve_config())?;
            Ok((sol.to_trajectory(spec.samples)?, None, sol.iterations))
        }
        IncentiveKind::Elliptical => {
            let inc = incentive_of(spec)?;
            if spec.mu == 1.0 {
                // terminal costate zero: the costate rate changes sign and
                // the lambda parametrization degenerates
                let sol =
                    reparam::solve_spook_time_domain(cost, inc, 0.0, 1.0, &spec.solve_config())?;
                Ok((sol.to_trajectory(spec.samples)?, None, sol.iterations))
            } else {
                let prob = ReparamProblem::arbitrary_duration(cost, inc, 0.0, 1.0)?;
                let sol = reparam::solve_reparam(&prob, &spec.solve_config())?;
                Ok((sol.to_trajectory(spec.samples)?, None, sol.iterations))
            }
        }
    }
}

fn solve_qcc_spook(spec: &ScenarioSpec) -> Result<(Trajectory, Option<f64>, u64)> {
    let sol = closed_form::qcc_spook_solve(spec.c)?;
    Ok((sol.to_trajectory(spec.samples)?, Some(sol.t_star), 0))
}

fn solve_qcc_hat(spec: &ScenarioSpec) -> Result<(Trajectory, Option<f64>, u64)> {
    let sol = closed_form::qcc_hat_solution(spec.c, spec.k)?;
    Ok((sol.to_trajectory(spec.samples)?, None, 0))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn warmup_trivial_report() {
        let spec = ScenarioSpec {
            scenario: Scenario::Warmup,
            incentive: IncentiveKind::Trivial,
            ..ScenarioSpec::default()
        };
        let out = run_solve(&spec).unwrap();
        assert_eq!(out.report.t_f, 2.0);
        assert!((out.report.total_cost - 2.0).abs() < 1e-12);
        assert_eq!(out.report.t_star, None);
    }

    #[test]
    fn warmup_quadratic_report() {
        let spec = ScenarioSpec {
            scenario: Scenario::Warmup,
            incentive: IncentiveKind::Quadratic,
            ..ScenarioSpec::default()
        };
        let out = run_solve(&spec).unwrap();
        assert!((out.report.t_f - 6f64.sqrt()).abs() < 1e-12);
        assert!((out.report.total_cost - 2.0 * 6f64.sqrt() / 3.0).abs() < 1e-10);
    }

    #[test]
    fn warmup_mu_one_degenerate() {
        let spec = ScenarioSpec {
            scenario: Scenario::Warmup,
            incentive: IncentiveKind::Elliptical,
            mu: 1.0,
            ..ScenarioSpec::default()
        };
        assert!(matches!(run_solve(&spec), Err(Error::Degenerate(_))));
    }

    #[test]
    fn spook_reference_report() {
        let spec = ScenarioSpec {
            scenario: Scenario::Spook,
            incentive: IncentiveKind::Elliptical,
            mu: 0.5,
            c: 1.0,
            ..ScenarioSpec::default()
        };
        let out = run_solve(&spec).unwrap();
        assert!((out.report.t_f - 2.285402158623).abs() < 1e-6);
        assert!(out.report.boundary_residuals.iter().all(|r| *r <= 1e-6));
        assert!(out.report.max_conserved_residual <= 1e-6);
    }

    #[test]
    fn spook_quadratic_delegates_to_glued_solution() {
        let spec = ScenarioSpec {
            scenario: Scenario::Spook,
            incentive: IncentiveKind::Quadratic,
            c: 1.0,
            ..ScenarioSpec::default()
        };
        let out = run_solve(&spec).unwrap();
        assert!(out.report.t_star.is_some());
        assert!((out.report.t_f - 2.3262924411159165).abs() < 1e-9);
    }

    #[test]
    fn qcc_hat_report() {
        let spec = ScenarioSpec {
            scenario: Scenario::QccHat,
            incentive: IncentiveKind::Quadratic,
            c: 1.0,
            k: 2,
            ..ScenarioSpec::default()
        };
        let out = run_solve(&spec).unwrap();
        assert!(
            (out.report.t_f - 2.0 * std::f64::consts::SQRT_2 * std::f64::consts::PI).abs() < 1e-10
        );
    }
}
