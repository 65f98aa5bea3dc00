//! JSON model descriptions consumed by the command-line interface.
//!
//! A model file selects a preset apparatus or spells one out explicitly,
//! provides the system input state, and may add candidate basis changes,
//! tolerance overrides, and pointer targets for the compare command.
//! Complex numbers are `[re, im]` pairs; matrices are row-major nested
//! arrays.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::measurement::MeasurementModel;
use crate::models::{bit_by_bit_model, stern_gerlach_model};
use crate::schmidt::BasisChange;
use crate::tensor::{ComplexMatrix, StateVector, C64};

/// Complex number on the wire: a `[re, im]` pair.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Cx(pub f64, pub f64);

impl From<Cx> for C64 {
    fn from(c: Cx) -> C64 {
        C64::new(c.0, c.1)
    }
}

impl From<C64> for Cx {
    fn from(z: C64) -> Cx {
        Cx(z.re, z.im)
    }
}

/// Top-level model file. `schemaVersion` must be 1.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct ModelFile {
    pub schema_version: u32,
    pub model: ModelSection,
    pub system_state: Vec<Cx>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub sample_changes: Vec<SampleChangeSection>,
    #[serde(default, skip_serializing_if = "ToleranceSection::is_empty")]
    pub tolerances: ToleranceSection,
    /// Pointer states for the compare command, one per system dimension.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub compare_targets: Option<Vec<Vec<Cx>>>,
}

/// Either a named preset (with its parameters) or an explicit apparatus.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct ModelSection {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub preset: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lattice_size: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub shift: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub explicit: Option<ExplicitModel>,
}

/// Fully spelled-out measurement model.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct ExplicitModel {
    pub dim_s: usize,
    pub dim_m: usize,
    pub h_int: Vec<Vec<Cx>>,
    pub delta_t: f64,
    pub ready_state: Vec<Cx>,
    pub pointer_observable: Vec<Vec<Cx>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
}

/// Basis change to try on one degeneracy class of the decomposed state.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct SampleChangeSection {
    pub class_index: usize,
    pub matrix: Vec<Vec<Cx>>,
}

/// Optional tolerance overrides; absent fields keep the crate defaults.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct ToleranceSection {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub degeneracy_rel_tol: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub schmidt_cutoff: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub calibration_tol: Option<f64>,
}

impl ToleranceSection {
    fn is_empty(&self) -> bool {
        self.degeneracy_rel_tol.is_none()
            && self.schmidt_cutoff.is_none()
            && self.calibration_tol.is_none()
    }
}

/// Reads and validates a model file.
pub fn parse_model_file(path: &Path) -> Result<ModelFile> {
    let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.display().to_string(),
        source,
    })?;
    parse_model_str(&text)
}

/// Parses and validates model-file JSON.
pub fn parse_model_str(text: &str) -> Result<ModelFile> {
    let file: ModelFile = serde_json::from_str(text).map_err(|e| Error::Schema(e.to_string()))?;
    file.validate()?;
    Ok(file)
}

impl ModelFile {
    fn validate(&self) -> Result<()> {
        if self.schema_version != 1 {
            return Err(Error::Schema(format!(
                "schemaVersion: expected 1, got {}",
                self.schema_version
            )));
        }
        let m = &self.model;
        match (&m.preset, &m.explicit) {
            (Some(_), Some(_)) => {
                return Err(Error::Schema(
                    "model: preset and explicit are mutually exclusive".into(),
                ))
            }
            (None, None) => {
                return Err(Error::Schema(
                    "model: one of preset or explicit is required".into(),
                ))
            }
            _ => {}
        }
        if let Some(name) = &m.preset {
            match name.as_str() {
                "bit_by_bit" => {
                    if m.lattice_size.is_some() || m.shift.is_some() {
                        return Err(Error::Schema(
                            "model: latticeSize and shift only apply to stern_gerlach".into(),
                        ));
                    }
                }
                "stern_gerlach" => {
                    if m.lattice_size.is_none() || m.shift.is_none() {
                        return Err(Error::Schema(
                            "model: stern_gerlach requires latticeSize and shift".into(),
                        ));
                    }
                }
                other => {
                    return Err(Error::Schema(format!(
                        "model.preset: unknown preset '{}' (expected bit_by_bit or stern_gerlach)",
                        other
                    )))
                }
            }
        }
        if m.explicit.is_some() && (m.lattice_size.is_some() || m.shift.is_some()) {
            return Err(Error::Schema(
                "model: latticeSize and shift only apply to the stern_gerlach preset".into(),
            ));
        }
        if self.system_state.is_empty() {
            return Err(Error::Schema("systemState: must not be empty".into()));
        }
        // Surface matrix shape and value problems at parse time; building an
        // explicit model is cheap (no spectral work happens until use).
        if let Some(e) = &m.explicit {
            e.build()?;
        }
        Ok(())
    }

    /// Builds the measurement model the file describes.
    pub fn to_model(&self) -> Result<MeasurementModel> {
        if let Some(name) = &self.model.preset {
            return match name.as_str() {
                "bit_by_bit" => Ok(bit_by_bit_model()),
                "stern_gerlach" => stern_gerlach_model(
                    self.model.lattice_size.expect("validated"),
                    self.model.shift.expect("validated"),
                ),
                _ => unreachable!("validated preset"),
            };
        }
        self.model.explicit.as_ref().expect("validated").build()
    }
}

impl ExplicitModel {
    fn build(&self) -> Result<MeasurementModel> {
        let e = self;
        if e.dim_s == 0 || e.dim_m == 0 {
            return Err(Error::Schema(
                "model.explicit: dimS and dimM must be positive".into(),
            ));
        }
        let total = e.dim_s * e.dim_m;
        let h_int = matrix_from(&e.h_int, "model.explicit.hInt", total, total)?;
        if !h_int.is_hermitian(crate::HERMITICITY_TOL) {
            return Err(Error::Schema(format!(
                "model.explicit.hInt: not Hermitian (relative deviation {:.3e})",
                h_int.hermiticity_deviation() / h_int.frobenius_norm().max(1.0)
            )));
        }
        let ready = vector_from(&e.ready_state, "model.explicit.readyState", e.dim_m)?;
        if !ready.is_normalized(crate::NORMALIZATION_TOL) {
            return Err(Error::Schema(format!(
                "model.explicit.readyState: not normalized (|norm - 1| = {:.3e})",
                (ready.norm() - 1.0).abs()
            )));
        }
        let observable = matrix_from(
            &e.pointer_observable,
            "model.explicit.pointerObservable",
            e.dim_m,
            e.dim_m,
        )?;
        if !observable.is_hermitian(crate::HERMITICITY_TOL) {
            return Err(Error::Schema(format!(
                "model.explicit.pointerObservable: not Hermitian (relative deviation {:.3e})",
                observable.hermiticity_deviation() / observable.frobenius_norm().max(1.0)
            )));
        }
        if !e.delta_t.is_finite() {
            return Err(Error::Schema(
                "model.explicit.deltaT: must be finite".into(),
            ));
        }
        MeasurementModel::new(
            e.dim_s,
            e.dim_m,
            h_int,
            e.delta_t,
            ready,
            observable,
            e.label.clone().unwrap_or_else(|| "explicit".into()),
        )
    }
}

impl ModelFile {
    /// System input state, checked against the model's system dimension.
    pub fn system_state_for(&self, model: &MeasurementModel) -> Result<StateVector> {
        let state = vector_from(&self.system_state, "systemState", model.system_dim)?;
        if !state.is_normalized(crate::NORMALIZATION_TOL) {
            return Err(Error::Schema(format!(
                "systemState: not normalized (|norm - 1| = {:.3e})",
                (state.norm() - 1.0).abs()
            )));
        }
        Ok(state)
    }

    /// Converts the sample changes, checking shape and unitarity so error
    /// messages can name the offending entry.
    pub fn basis_changes(&self) -> Result<Vec<BasisChange>> {
        self.sample_changes
            .iter()
            .enumerate()
            .map(|(k, s)| {
                let name = format!("sampleChanges[{}].matrix", k);
                let size = s.matrix.len();
                let matrix = matrix_from(&s.matrix, &name, size.max(1), size.max(1))?;
                let deviation = matrix.unitarity_deviation();
                if deviation > crate::UNITARITY_TOL {
                    return Err(Error::Schema(format!(
                        "{}: not unitary (deviation {:.3e})",
                        name, deviation
                    )));
                }
                Ok(BasisChange {
                    class_index: s.class_index,
                    matrix,
                })
            })
            .collect()
    }

    /// Pointer targets for the compare command.
    pub fn targets_for(&self, model: &MeasurementModel) -> Result<Vec<StateVector>> {
        let targets = self.compare_targets.as_ref().ok_or_else(|| {
            Error::Schema("compareTargets: required by the compare command".into())
        })?;
        targets
            .iter()
            .enumerate()
            .map(|(k, t)| vector_from(t, &format!("compareTargets[{}]", k), model.pointer_dim))
            .collect()
    }
}

/// Converts a nested row-major array into a matrix of the expected shape.
fn matrix_from(
    rows: &[Vec<Cx>],
    what: &str,
    exp_rows: usize,
    exp_cols: usize,
) -> Result<ComplexMatrix> {
    if rows.len() != exp_rows {
        return Err(Error::Dimension(format!(
            "{}: expected {} rows, got {}",
            what,
            exp_rows,
            rows.len()
        )));
    }
    for (i, row) in rows.iter().enumerate() {
        if row.len() != exp_cols {
            return Err(Error::Dimension(format!(
                "{}: row {} has {} entries, expected {}",
                what,
                i,
                row.len(),
                exp_cols
            )));
        }
    }
    let entries: Vec<C64> = rows
        .iter()
        .flat_map(|row| row.iter().map(|&c| C64::from(c)))
        .collect();
    ComplexMatrix::new(exp_rows, exp_cols, entries)
        .map_err(|_| Error::Schema(format!("{}: entries must be finite", what)))
}

/// Converts a `[re, im]` pair list into a state of the expected dimension.
fn vector_from(v: &[Cx], what: &str, expected: usize) -> Result<StateVector> {
    if v.len() != expected {
        return Err(Error::Dimension(format!(
            "{}: expected length {}, got {}",
            what,
            expected,
            v.len()
        )));
    }
    StateVector::new(v.iter().map(|&c| C64::from(c)).collect())
        .map_err(|_| Error::Schema(format!("{}: entries must be finite", what)))
}

/// Wire form of a state: list of `[re, im]` pairs.
pub fn state_to_wire(v: &StateVector) -> Vec<Cx> {
    v.amplitudes().iter().map(|&z| Cx::from(z)).collect()
}

/// Wire form of a matrix: row-major nested `[re, im]` pairs.
pub fn matrix_to_wire(m: &ComplexMatrix) -> Vec<Vec<Cx>> {
    (0..m.rows())
        .map(|i| (0..m.cols()).map(|j| Cx::from(m[(i, j)])).collect())
        .collect()
}

/// Wire form of a matrix's columns: one amplitude vector per column.
pub fn columns_to_wire(m: &ComplexMatrix) -> Vec<Vec<Cx>> {
    (0..m.cols()).map(|j| state_to_wire(&m.column(j))).collect()
}
