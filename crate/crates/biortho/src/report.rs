//! Command reports: a serializable structure with a stable field order so
//! identical invocations produce byte-identical output in both formats.

use serde::Serialize;

use crate::measurement::{AmbiguityReport, CalibrationTable};
use crate::modelfile::{columns_to_wire, matrix_to_wire, state_to_wire, Cx};
use crate::schmidt::SchmidtDecomposition;
use crate::tensor::ComplexMatrix;

/// Report emitted on stdout by every command.
#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct Report {
    pub command: String,
    pub inputs_echo: InputsEcho,
    pub results: Results,
    pub diagnostics: Diagnostics,
}

/// Where the input came from and what its bytes hashed to.
#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct InputsEcho {
    pub path: String,
    pub sha256: String,
}

/// Effective settings for the run plus any advisory notes.
#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct Diagnostics {
    pub seed: u64,
    pub degeneracy_rel_tol: f64,
    pub schmidt_cutoff: f64,
    pub calibration_tol: f64,
    pub notes: Vec<String>,
}

/// Command-specific payload.
#[derive(Debug, Clone, Serialize)]
#[serde(untagged)]
pub enum Results {
    Simulate(SimulateResults),
    Schmidt(SchmidtResults),
    Calibrate(CalibrateResults),
    Ambiguity(AmbiguityResults),
    Compare(CompareResults),
}

#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct SimulateResults {
    pub dim_s: usize,
    pub dim_m: usize,
    pub label: String,
    /// Post-interaction composite state, system-major.
    pub final_state: Vec<Cx>,
}

#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct SchmidtResults {
    pub coefficients: Vec<f64>,
    /// One system-side amplitude vector per Schmidt term.
    pub left_basis: Vec<Vec<Cx>>,
    /// One pointer-side amplitude vector per Schmidt term.
    pub right_basis: Vec<Vec<Cx>>,
    pub degeneracy_classes: Vec<Vec<usize>>,
    pub verdict: String,
}

#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct CalibrateResults {
    /// One calibrated system vector per table row.
    pub system_basis: Vec<Vec<Cx>>,
    /// Pointer state reached from the ready state, per table row.
    pub pointer_states: Vec<Vec<Cx>>,
    pub pointer_values: Vec<f64>,
    pub sharp: Vec<bool>,
    pub residual: f64,
}

#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct AmbiguityResults {
    pub verdict: String,
    pub calibration: CalibrateResults,
    pub candidates: Vec<CandidateResults>,
    pub selected: Option<usize>,
}

#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct CandidateResults {
    pub origin: String,
    pub coefficients: Vec<f64>,
    pub left_basis: Vec<Vec<Cx>>,
    pub right_basis: Vec<Vec<Cx>>,
    pub match_score: f64,
    pub matches_calibration: bool,
    pub pointer_physical: Vec<bool>,
}

#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct CompareResults {
    pub label: String,
    /// Frobenius distance between the original and counterfactual
    /// evolution operators.
    pub distance: f64,
    /// Counterfactual evolution operator, row-major.
    pub u_prime: Vec<Vec<Cx>>,
    /// Calibration table of the counterfactual apparatus.
    pub calibration: CalibrateResults,
}

impl CalibrateResults {
    pub fn from_table(table: &CalibrationTable) -> Self {
        Self {
            system_basis: columns_to_wire(&table.system_basis),
            pointer_states: columns_to_wire(&table.pointer_states),
            pointer_values: table.pointer_values.clone(),
            sharp: table.sharp.clone(),
            residual: table.residual,
        }
    }
}

impl SchmidtResults {
    pub fn from_decomposition(sd: &SchmidtDecomposition, verdict: String) -> Self {
        Self {
            coefficients: sd.coefficients.clone(),
            left_basis: columns_to_wire(&sd.left_basis),
            right_basis: columns_to_wire(&sd.right_basis),
            degeneracy_classes: sd.degeneracy_classes.clone(),
            verdict,
        }
    }
}

impl AmbiguityResults {
    pub fn from_report(report: &AmbiguityReport) -> Self {
        Self {
            verdict: report.verdict.to_string(),
            calibration: CalibrateResults::from_table(&report.calibration),
            candidates: report
                .candidates
                .iter()
                .map(|c| CandidateResults {
                    origin: c.origin.clone(),
                    coefficients: c.decomposition.coefficients.clone(),
                    left_basis: columns_to_wire(&c.decomposition.left_basis),
                    right_basis: columns_to_wire(&c.decomposition.right_basis),
                    match_score: c.match_score,
                    matches_calibration: c.matches_calibration,
                    pointer_physical: c.pointer_physical.clone(),
                })
                .collect(),
            selected: report.selected,
        }
    }
}

pub fn matrix_results(m: &ComplexMatrix) -> Vec<Vec<Cx>> {
    matrix_to_wire(m)
}

pub fn state_results(v: &crate::tensor::StateVector) -> Vec<Cx> {
    state_to_wire(v)
}

impl Report {
    /// Pretty-printed JSON with a trailing newline.
    pub fn render_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    /// Plain-text rendering with fixed precision, one fact per line.
    pub fn render_text(&self) -> String {
        let mut out = String::new();
        let p = |out: &mut String, line: String| {
            out.push_str(&line);
            out.push('\n');
        };
        p(&mut out, format!("command: {}", self.command));
        p(
            &mut out,
            format!(
                "input: {} (sha256 {})",
                self.inputs_echo.path, self.inputs_echo.sha256
            ),
        );
        match &self.results {
            Results::Simulate(r) => {
                p(&mut out, format!("model: {}", r.label));
                p(
                    &mut out,
                    format!("dimensions: system {} x pointer {}", r.dim_s, r.dim_m),
                );
                p(&mut out, "final state:".into());
                p(&mut out, format!("  {}", fmt_state(&r.final_state)));
            }
            Results::Schmidt(r) => {
                p(&mut out, format!("verdict: {}", r.verdict));
                p(
                    &mut out,
                    format!("coefficients: {}", fmt_reals(&r.coefficients)),
                );
                p(
                    &mut out,
                    format!("degeneracy classes: {}", fmt_classes(&r.degeneracy_classes)),
                );
                p(&mut out, "left basis:".into());
                for v in &r.left_basis {
                    p(&mut out, format!("  {}", fmt_state(v)));
                }
                p(&mut out, "right basis:".into());
                for v in &r.right_basis {
                    p(&mut out, format!("  {}", fmt_state(v)));
                }
            }
            Results::Calibrate(r) => {
                render_calibration(&mut out, r, "");
            }
            Results::Ambiguity(r) => {
                p(&mut out, format!("verdict: {}", r.verdict));
                render_calibration(&mut out, &r.calibration, "");
                for c in &r.candidates {
                    p(&mut out, format!("candidate ({}):", c.origin));
                    p(
                        &mut out,
                        format!("  coefficients: {}", fmt_reals(&c.coefficients)),
                    );
                    p(&mut out, "  left basis:".into());
                    for v in &c.left_basis {
                        p(&mut out, format!("    {}", fmt_state(v)));
                    }
                    p(&mut out, "  right basis:".into());
                    for v in &c.right_basis {
                        p(&mut out, format!("    {}", fmt_state(v)));
                    }
                    p(
                        &mut out,
                        format!(
                            "  match score: {:.12} ({})",
                            c.match_score,
                            if c.matches_calibration {
                                "matches calibration"
                            } else {
                                "does not match calibration"
                            }
                        ),
                    );
                    p(
                        &mut out,
                        format!("  pointer physical: {}", fmt_bools(&c.pointer_physical)),
                    );
                }
                match r.selected {
                    Some(i) => p(
                        &mut out,
                        format!("selected: candidate {} ({})", i, r.candidates[i].origin),
                    ),
                    None => p(&mut out, "selected: none".into()),
                }
            }
            Results::Compare(r) => {
                p(&mut out, format!("model: {}", r.label));
                p(&mut out, format!("operator distance: {:.12}", r.distance));
                p(&mut out, "counterfactual evolution:".into());
                for row in &r.u_prime {
                    p(&mut out, format!("  {}", fmt_state(row)));
                }
                render_calibration(&mut out, &r.calibration, "counterfactual ");
            }
        }
        let d = &self.diagnostics;
        p(
            &mut out,
            format!(
                "settings: seed {} | degeneracy rel tol {:e} | schmidt cutoff {:e} | calibration tol {:e}",
                d.seed, d.degeneracy_rel_tol, d.schmidt_cutoff, d.calibration_tol
            ),
        );
        // Notes are advisory and go to stderr; the JSON document keeps them
        // under diagnostics instead.
        out
    }
}

fn render_calibration(out: &mut String, r: &CalibrateResults, prefix: &str) {
    out.push_str(&format!(
        "{}calibration (residual {:.3e}):\n",
        prefix, r.residual
    ));
    for i in 0..r.pointer_values.len() {
        out.push_str(&format!(
            "  {} -> {}   value {:+.6}{}\n",
            fmt_state(&r.system_basis[i]),
            fmt_state(&r.pointer_states[i]),
            r.pointer_values[i],
            if r.sharp[i] { "" } else { "   (not sharp)" }
        ));
    }
}

fn fmt_state(v: &[Cx]) -> String {
    let parts: Vec<String> = v
        .iter()
        .map(|c| format!("{:+.6}{:+.6}i", c.0, c.1))
        .collect();
    format!("[{}]", parts.join(", "))
}

fn fmt_reals(v: &[f64]) -> String {
    let parts: Vec<String> = v.iter().map(|x| format!("{:.12}", x)).collect();
    parts.join("  ")
}

fn fmt_bools(v: &[bool]) -> String {
    let parts: Vec<String> = v
        .iter()
        .map(|b| if *b { "yes" } else { "no" }.to_string())
        .collect();
    parts.join("  ")
}

fn fmt_classes(classes: &[Vec<usize>]) -> String {
    let parts: Vec<String> = classes
        .iter()
        .map(|c| {
            let inner: Vec<String> = c.iter().map(|i| i.to_string()).collect();
            format!("{{{}}}", inner.join(", "))
        })
        .collect();
    parts.join("  ")
}
