//! Rendering of fusion reports.
//!
//! The rendered text is a pure function of the inputs and the seed: identical
//! invocations produce byte-identical reports. Wall-clock timings therefore
//! go to stderr, never into the report body.

use std::fmt::Write as _;

use belieffuse::evidence::{decide, Frame, FusionResult};
use num_complex::Complex64;

use crate::fusion::BackendArg;

/// Tolerance the report prints and gates exact-mode cross-checks at.
pub const REPORT_TOLERANCE: f64 = 1e-9;

pub enum CrossStatus {
    /// Gated comparison that held.
    Ok,
    /// Gated comparison that failed.
    Fail,
    /// Reported for documentation only (shots noise, complex-rule gap).
    Info(&'static str),
}

pub struct CrossCheck {
    pub label: String,
    pub outcome: Result<f64, String>, // max |Δmass| or why the reference is unavailable
    pub status: CrossStatus,
}

pub struct Report {
    pub frame: Frame,
    pub source_names: Vec<String>,
    pub backend: BackendArg,
    pub mode: String,
    pub result: FusionResult,
    pub cross_checks: Vec<CrossCheck>,
    /// The classical complex rule run alongside, when any source is complex.
    pub cdrc_reference: Option<Result<(FusionResult, f64), String>>,
}

fn format_mass(z: Complex64) -> String {
    if z.im == 0.0 {
        format!("{:.6}", z.re)
    } else {
        format!("{:.6}{:+.6}i", z.re, z.im)
    }
}

fn mass_table(body: &mut String, frame: &Frame, result: &FusionResult) {
    let width = result
        .combined
        .masses()
        .keys()
        .map(|&code| frame.subset_name(code).chars().count())
        .max()
        .unwrap_or(1)
        .max(8);
    for (&code, &mass) in result.combined.masses() {
        let name = frame.subset_name(code);
        let _ = writeln!(body, "  {name:<width$}  {}", format_mass(mass));
    }
    let _ = writeln!(body, "  conflict K = {}", format_mass(result.conflict));
}

impl Report {
    pub fn render(&self) -> String {
        let mut body = String::new();
        let _ = writeln!(body, "BeliefFuse fusion report");
        let _ = writeln!(body, "========================");
        let _ = writeln!(
            body,
            "frame: {{{}}}  (N = {})",
            self.frame.elements().join(", "),
            self.frame.len()
        );
        let _ = writeln!(
            body,
            "sources: {} ({} sources, folded left to right)",
            self.source_names.join(", "),
            self.source_names.len()
        );
        let _ = writeln!(body, "backend: {}", self.backend);
        let _ = writeln!(body, "mode: {}", self.mode);
        let _ = writeln!(body);
        let _ = writeln!(body, "combined masses");
        let _ = writeln!(body, "---------------");
        mass_table(&mut body, &self.frame, &self.result);
        let decision = decide(&self.result)
            .map(|code| self.frame.subset_name(code))
            .unwrap_or_else(|_| "<none>".to_string());
        let _ = writeln!(body, "  decision   = {decision}");

        if !self.cross_checks.is_empty() {
            let _ = writeln!(body);
            let _ = writeln!(body, "cross-check");
            let _ = writeln!(body, "-----------");
            for check in &self.cross_checks {
                match &check.outcome {
                    Ok(delta) => {
                        let status = match &check.status {
                            CrossStatus::Ok => format!("OK (tolerance {REPORT_TOLERANCE:.0e})"),
                            CrossStatus::Fail => {
                                format!("FAIL (tolerance {REPORT_TOLERANCE:.0e})")
                            }
                            CrossStatus::Info(note) => format!("informational ({note})"),
                        };
                        let _ = writeln!(
                            body,
                            "  vs {}: max |Δmass| = {delta:.3e} → {status}",
                            check.label
                        );
                    }
                    Err(reason) => {
                        let _ = writeln!(
                            body,
                            "  vs {}: reference unavailable ({reason})",
                            check.label
                        );
                    }
                }
            }
        }

        if let Some(reference) = &self.cdrc_reference {
            let _ = writeln!(body);
            let _ = writeln!(body, "classical CDRC reference (complex rule)");
            let _ = writeln!(body, "---------------------------------------");
            match reference {
                Ok((result, delta)) => {
                    mass_table(&mut body, &self.frame, result);
                    let _ = writeln!(
                        body,
                        "  max |Δ| vs selected backend = {delta:.3e} \
                         (phases are discarded by the quantum encoding; divergence is documented, not bounded)"
                    );
                }
                Err(reason) => {
                    let _ = writeln!(body, "  unavailable: {reason}");
                }
            }
        }
        body
    }
}
