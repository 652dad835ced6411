//! CSV emission with fixed, versioned schemas. Every writer produces a
//! schema comment line, then a header row, then data rows. Trace files are
//! byte-identical for identical configuration and seed when timing emission
//! is off; wall-clock columns are the only nondeterministic field.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use crate::error::Result;
use crate::solvers::{RunRecord, RunSummary};

pub const TRACE_SCHEMA: &str = "# schema: rapg-trace v1";
pub const SUMMARY_SCHEMA: &str = "# schema: rapg-summary v1";
pub const SERIES_SCHEMA: &str = "# schema: rapg-series v1";

pub fn trace_csv(record: &RunRecord, timing: bool) -> String {
    let mut out = String::new();
    out.push_str(TRACE_SCHEMA);
    out.push('\n');
    out.push_str(
        "k,f,eta_norm,a_k,beta,gamma,tau,l_est,restart,safeguard,prox_solves,prox_residual,wall_ns\n",
    );
    for row in &record.rows {
        let wall = if timing { row.wall_ns } else { 0 };
        writeln!(
            out,
            "{},{:.17e},{:.17e},{:.17e},{:.17e},{:.17e},{:.17e},{:.17e},{},{},{},{:.17e},{}",
            row.k,
            row.f,
            row.eta_norm,
            row.a_k,
            row.beta,
            row.gamma,
            row.tau,
            row.l_est,
            row.restart as u8,
            row.safeguard as u8,
            row.prox_solves,
            row.prox_residual,
            wall
        )
        .expect("write to string");
    }
    out
}

pub fn write_trace_csv(record: &RunRecord, path: &Path, timing: bool) -> Result<()> {
    fs::write(path, trace_csv(record, timing))?;
    Ok(())
}

pub fn summary_csv(summaries: &[&RunSummary], timing: bool) -> String {
    let mut out = String::new();
    out.push_str(SUMMARY_SCHEMA);
    out.push('\n');
    out.push_str(
        "algo,seed,iters,final_f,final_sparsity,termination,prox_solves,f_evals,safeguard_f_evals,safeguard_prox_solves,restarts,monotone_violations,l_final,final_eta_norm,observed_diameter,final_safeguard_eta,wall_ns\n",
    );
    for s in summaries {
        let wall = if timing { s.wall_ns } else { 0 };
        writeln!(
            out,
            "{},{},{},{:.17e},{:.6},{},{},{},{},{},{},{},{:.17e},{:.17e},{:.17e},{},{}",
            s.algo,
            s.seed,
            s.iters,
            s.final_f,
            s.final_sparsity,
            s.termination.name(),
            s.prox_solves,
            s.f_evals,
            s.safeguard_f_evals,
            s.safeguard_prox_solves,
            s.restarts,
            s.monotone_violations,
            s.l_final,
            s.final_eta_norm,
            s.observed_diameter,
            s.final_safeguard_eta
                .map(|v| format!("{v:.17e}"))
                .unwrap_or_else(|| "".to_string()),
            wall
        )
        .expect("write to string");
    }
    out
}

pub fn write_summary_csv(summaries: &[&RunSummary], path: &Path, timing: bool) -> Result<()> {
    fs::write(path, summary_csv(summaries, timing))?;
    Ok(())
}

/// Two-column series for any plotting tool.
pub fn series_csv(x_name: &str, y_name: &str, points: &[(f64, f64)]) -> String {
    let mut out = String::new();
    out.push_str(SERIES_SCHEMA);
    out.push('\n');
    writeln!(out, "{x_name},{y_name}").expect("write to string");
    for (x, y) in points {
        writeln!(out, "{x:.17e},{y:.17e}").expect("write to string");
    }
    out
}

pub fn write_series_csv(
    x_name: &str,
    y_name: &str,
    points: &[(f64, f64)],
    path: &Path,
) -> Result<()> {
    fs::write(path, series_csv(x_name, y_name, points))?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::solvers::{TerminationReason, TraceRow};
    use crate::geometry::ManifoldPoint;
    use nalgebra::DVector;

    fn record() -> RunRecord {
        RunRecord {
            rows: vec![TraceRow {
                k: 0,
                f: 1.5,
                eta_norm: 0.25,
                a_k: 0.001,
                beta: 1.0,
                gamma: 2.0,
                tau: 0.5,
                l_est: 4.0,
                restart: false,
                safeguard: true,
                prox_solves: 1,
                prox_residual: 1e-12,
                wall_ns: 12345,
            }],
            summary: RunSummary {
                algo: "rapg".into(),
                seed: 7,
                iters: 1,
                final_f: 1.25,
                final_sparsity: 0.5,
                termination: TerminationReason::MaxIters,
                prox_solves: 1,
                f_evals: 2,
                safeguard_f_evals: 0,
                safeguard_prox_solves: 0,
                restarts: 0,
                monotone_violations: 0,
                l_final: 4.0,
                final_eta_norm: 0.25,
                observed_diameter: 0.1,
                final_safeguard_eta: None,
                wall_ns: 999,
            },
            final_x: ManifoldPoint::euclidean(DVector::zeros(2)),
        }
    }

    #[test]
    fn trace_schema_and_timing_toggle() {
        let rec = record();
        let with = trace_csv(&rec, true);
        let without = trace_csv(&rec, false);
        assert!(with.starts_with(TRACE_SCHEMA));
        assert!(with.contains(",12345"));
        assert!(without.ends_with(",0\n"));
        assert_eq!(with.lines().count(), 3);
    }

    #[test]
    fn summary_includes_termination_name() {
        let rec = record();
        let text = summary_csv(&[&rec.summary], false);
        assert!(text.contains("max-iters"));
        assert!(text.contains("rapg,7,1"));
    }

    #[test]
    fn series_round_trip_text() {
        let text = series_csv("kappa", "transformed", &[(1.0, 2.0), (3.0, 4.5)]);
        let mut lines = text.lines();
        assert_eq!(lines.next(), Some(SERIES_SCHEMA));
        assert_eq!(lines.next(), Some("kappa,transformed"));
        assert_eq!(lines.count(), 2);
    }
}
