//! Flat-file output: trajectory CSV, summary JSON, and machine-readable
//! error documents.
//!
//! Floating-point fields are serialized with 17 significant digits so a
//! fixed input always reproduces a bitwise-identical CSV.

use crate::scenario::SolveReport;
use modinc::{Error, Trajectory};
use std::fmt::Write as _;
use std::fs;
use std::io;
use std::path::Path;

/// 17 significant digits, scientific; lossless for f64.
pub fn fmt_f64(v: f64) -> String {
    format!("{v:.16e}")
}

pub const TRAJECTORY_HEADER: &str = "t,x,v,a,lambda,lambda_dot,u,cost_density,conserved_residual";

/// Renders a trajectory as CSV (header always present).
pub fn trajectory_csv(traj: &Trajectory) -> String {
    let mut out = String::with_capacity(traj.samples.len() * 160);
    out.push_str(TRAJECTORY_HEADER);
    out.push('\n');
    for s in &traj.samples {
        let x = s.state.x_derivs[0][0];
        let v = s.state.x_derivs[1][0];
        let lam = s.state.lambda_derivs[0][0];
        let lam_dot = s.state.lambda_derivs[1][0];
        let u = s.u[0];
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{},{}",
            fmt_f64(s.t),
            fmt_f64(x),
            fmt_f64(v),
            fmt_f64(u),
            fmt_f64(lam),
            fmt_f64(lam_dot),
            fmt_f64(u),
            fmt_f64(s.cost_density),
            fmt_f64(s.conserved_residual),
        );
    }
    out
}

pub fn write_trajectory_csv(path: &Path, traj: &Trajectory) -> io::Result<()> {
    fs::write(path, trajectory_csv(traj))
}

pub fn summary_json(report: &SolveReport) -> String {
    let mut s = serde_json::to_string_pretty(report).expect("report serializes");
    s.push('\n');
    s
}

pub fn write_summary_json(path: &Path, report: &SolveReport) -> io::Result<()> {
    fs::write(path, summary_json(report))
}

/// Stable error code for the exit-3 error document.
pub fn error_code(e: &Error) -> &'static str {
    match e {
        Error::Degenerate(_) => "DEGENERATE",
        Error::NoBracket(_) | Error::StepLimit { .. } | Error::IterationLimit(_) => "NO_BRACKET",
        Error::Domain(_)
        | Error::Unsupported(_)
        | Error::NonFinite(_)
        | Error::TooFewSamples { .. } => "DOMAIN",
    }
}

pub fn error_json(e: &Error) -> String {
    let doc = serde_json::json!({
        "error": { "code": error_code(e), "message": e.to_string() }
    });
    let mut s = serde_json::to_string_pretty(&doc).expect("error document serializes");
    s.push('\n');
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn float_format_is_lossless() {
        for v in [
            0.1,
            2.0 / 3.0,
            std::f64::consts::PI,
            -1.4142135623730951e-9,
            6.02e23,
        ] {
            let s = fmt_f64(v);
            assert_eq!(s.parse::<f64>().unwrap(), v, "{s}");
        }
    }

    #[test]
    fn error_codes() {
        assert_eq!(error_code(&Error::Degenerate("x".into())), "DEGENERATE");
        assert_eq!(error_code(&Error::NoBracket("x".into())), "NO_BRACKET");
        assert_eq!(error_code(&Error::Domain("x".into())), "DOMAIN");
        assert_eq!(error_code(&Error::Unsupported("x".into())), "DOMAIN");
        assert_eq!(error_code(&Error::StepLimit { t: 0.0 }), "NO_BRACKET");
    }
}
