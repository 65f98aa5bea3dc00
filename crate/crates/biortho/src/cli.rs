//! Command dispatch shared by the binary and the integration tests.

use std::path::Path;

use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::measurement::{
    ambiguity_report, counterfactual_apparatus, extract_calibration_basis, premeasure,
    AnalysisOptions, Verdict,
};
use crate::modelfile::{parse_model_str, ModelFile};
use crate::report;
use crate::report::{
    AmbiguityResults, CalibrateResults, CompareResults, Diagnostics, InputsEcho, Report, Results,
    SchmidtResults, SimulateResults,
};
use crate::schmidt::schmidt_decompose;

/// Subcommand to run against a model file.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CommandKind {
    Simulate,
    Schmidt,
    Calibrate,
    Ambiguity,
    Compare,
}

impl CommandKind {
    pub fn name(self) -> &'static str {
        match self {
            CommandKind::Simulate => "simulate",
            CommandKind::Schmidt => "schmidt",
            CommandKind::Calibrate => "calibrate",
            CommandKind::Ambiguity => "ambiguity",
            CommandKind::Compare => "compare",
        }
    }
}

/// Command-line overrides; they take precedence over the model file's
/// tolerances, which in turn override the crate defaults.
#[derive(Debug, Clone, Copy, Default)]
pub struct Overrides {
    /// Degeneracy grouping tolerance (`--tolerance`).
    pub tolerance: Option<f64>,
    /// Extraction seed (`--seed`).
    pub seed: Option<u64>,
    /// Schmidt coefficient cutoff (`--cutoff`).
    pub cutoff: Option<f64>,
}

/// Runs one command against a model file and assembles the report.
pub fn run_command(kind: CommandKind, path: &Path, overrides: &Overrides) -> Result<Report> {
    let bytes = std::fs::read(path).map_err(|source| Error::Io {
        path: path.display().to_string(),
        source,
    })?;
    let digest = hex(&Sha256::digest(&bytes));
    let text = String::from_utf8(bytes)
        .map_err(|_| Error::Schema("model file is not valid UTF-8".into()))?;
    let file = parse_model_str(&text)?;
    let options = effective_options(&file, overrides);

    let model = file.to_model()?;
    let mut notes = Vec::new();
    let results = match kind {
        CommandKind::Simulate => {
            let state = file.system_state_for(&model)?;
            let post = premeasure(&model, &state)?;
            Results::Simulate(SimulateResults {
                dim_s: model.system_dim,
                dim_m: model.pointer_dim,
                label: model.label.clone(),
                final_state: report::state_results(post.amplitudes()),
            })
        }
        CommandKind::Schmidt => {
            let state = file.system_state_for(&model)?;
            let post = premeasure(&model, &state)?;
            let sd = schmidt_decompose(&post, options.schmidt_cutoff, options.degeneracy_rel_tol)?;
            let verdict = if sd.is_ambiguous() {
                Verdict::Ambiguous
            } else {
                Verdict::Unique
            };
            Results::Schmidt(SchmidtResults::from_decomposition(&sd, verdict.to_string()))
        }
        CommandKind::Calibrate => {
            let table = extract_calibration_basis(&model, options.calibration_tol, options.seed)?;
            Results::Calibrate(CalibrateResults::from_table(&table))
        }
        CommandKind::Ambiguity => {
            let state = file.system_state_for(&model)?;
            let changes = file.basis_changes()?;
            let rep = ambiguity_report(&model, &state, &changes, &options)?;
            notes.extend(rep.notes.iter().cloned());
            Results::Ambiguity(AmbiguityResults::from_report(&rep))
        }
        CommandKind::Compare => {
            let targets = file.targets_for(&model)?;
            let (counter, distance) = counterfactual_apparatus(&model, &targets, &options)?;
            let u_prime = crate::measurement::evolution_operator(&counter)?;
            let table = extract_calibration_basis(&counter, options.calibration_tol, options.seed)?;
            Results::Compare(CompareResults {
                label: counter.label.clone(),
                distance,
                u_prime: report::matrix_results(&u_prime),
                calibration: CalibrateResults::from_table(&table),
            })
        }
    };

    Ok(Report {
        command: kind.name().into(),
        inputs_echo: InputsEcho {
            path: path.display().to_string(),
            sha256: digest,
        },
        results,
        diagnostics: Diagnostics {
            seed: options.seed,
            degeneracy_rel_tol: options.degeneracy_rel_tol,
            schmidt_cutoff: options.schmidt_cutoff,
            calibration_tol: options.calibration_tol,
            notes,
        },
    })
}

/// Defaults, overridden by the file's tolerances, overridden by flags.
fn effective_options(file: &ModelFile, overrides: &Overrides) -> AnalysisOptions {
    let mut options = AnalysisOptions::default();
    let t = &file.tolerances;
    if let Some(x) = t.degeneracy_rel_tol {
        options.degeneracy_rel_tol = x;
    }
    if let Some(x) = t.schmidt_cutoff {
        options.schmidt_cutoff = x;
    }
    if let Some(x) = t.calibration_tol {
        options.calibration_tol = x;
    }
    if let Some(x) = overrides.tolerance {
        options.degeneracy_rel_tol = x;
    }
    if let Some(x) = overrides.cutoff {
        options.schmidt_cutoff = x;
    }
    if let Some(x) = overrides.seed {
        options.seed = x;
    }
    options
}

fn hex(bytes: &[u8]) -> String {
    bytes.iter().map(|b| format!("{:02x}", b)).collect()
}

/// Exit code for an error: 2 marks an apparatus that is structurally not a
/// premeasurement; everything else is a usage or validation failure.
pub fn exit_code_for(error: &Error) -> i32 {
    match error {
        Error::NotAPremeasurement { .. } => 2,
        _ => 1,
    }
}
