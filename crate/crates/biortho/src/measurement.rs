//! Von Neumann measurement models: interaction-driven premeasurement,
//! extraction of the calibrated system basis and pointer states from the
//! dynamics, counterfactual apparatuses that target different pointer
//! states, and the ambiguity report tying it all together.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};
use crate::schmidt::{
    alternative_decomposition, schmidt_decompose, BasisChange, BipartiteState, SchmidtDecomposition,
};
use crate::tensor::{
    hermitian_log, normal_eig, operator_distance, unitary_exp, ComplexMatrix, StateVector, C64,
};

/// A system coupled to a pointer through a Hermitian interaction acting for
/// a fixed duration, with a designated ready state and readout observable.
#[derive(Debug, Clone)]
pub struct MeasurementModel {
    pub system_dim: usize,
    pub pointer_dim: usize,
    /// Hermitian generator on the composite space (system-major ordering).
    pub interaction: ComplexMatrix,
    /// Coupling time; the evolution is `exp(-i * interaction * duration)`.
    pub duration: f64,
    /// Pointer state the apparatus is prepared in before the interaction.
    pub ready_state: StateVector,
    /// Hermitian readout observable on the pointer space.
    pub pointer_observable: ComplexMatrix,
    pub label: String,
}

impl MeasurementModel {
    pub fn new(
        system_dim: usize,
        pointer_dim: usize,
        interaction: ComplexMatrix,
        duration: f64,
        ready_state: StateVector,
        pointer_observable: ComplexMatrix,
        label: impl Into<String>,
    ) -> Result<Self> {
        if system_dim == 0 || pointer_dim == 0 {
            return Err(Error::dim("model dimensions", 1, 0));
        }
        let total = system_dim * pointer_dim;
        if interaction.rows() != total || interaction.cols() != total {
            return Err(Error::dim("interaction", total, interaction.rows()));
        }
        if !interaction.is_hermitian(crate::HERMITICITY_TOL) {
            let scale = interaction.frobenius_norm().max(1.0);
            return Err(Error::NotHermitian {
                deviation: interaction.hermiticity_deviation() / scale,
                tol: crate::HERMITICITY_TOL,
            });
        }
        if !duration.is_finite() {
            return Err(Error::NonFinite("interaction duration".into()));
        }
        if ready_state.dim() != pointer_dim {
            return Err(Error::dim("ready state", pointer_dim, ready_state.dim()));
        }
        let deviation = (ready_state.norm() - 1.0).abs();
        if deviation > crate::NORMALIZATION_TOL {
            return Err(Error::NotNormalized { deviation });
        }
        if pointer_observable.rows() != pointer_dim || pointer_observable.cols() != pointer_dim {
            return Err(Error::dim(
                "pointer observable",
                pointer_dim,
                pointer_observable.rows(),
            ));
        }
        if !pointer_observable.is_hermitian(crate::HERMITICITY_TOL) {
            let scale = pointer_observable.frobenius_norm().max(1.0);
            return Err(Error::NotHermitian {
                deviation: pointer_observable.hermiticity_deviation() / scale,
                tol: crate::HERMITICITY_TOL,
            });
        }
        Ok(Self {
            system_dim,
            pointer_dim,
            interaction,
            duration,
            ready_state,
            pointer_observable,
            label: label.into(),
        })
    }
}

/// Tolerances and the extraction seed shared by the analysis entry points.
#[derive(Debug, Clone)]
pub struct AnalysisOptions {
    pub calibration_tol: f64,
    pub degeneracy_rel_tol: f64,
    pub schmidt_cutoff: f64,
    pub seed: u64,
}

impl Default for AnalysisOptions {
    fn default() -> Self {
        Self {
            calibration_tol: crate::CALIBRATION_TOL,
            degeneracy_rel_tol: crate::DEGENERACY_REL_TOL,
            schmidt_cutoff: crate::SCHMIDT_CUTOFF,
            seed: crate::DEFAULT_SEED,
        }
    }
}

/// Unitary evolution `exp(-i * interaction * duration)` on the composite
/// space.
pub fn evolution_operator(model: &MeasurementModel) -> Result<ComplexMatrix> {
    unitary_exp(&model.interaction, -model.duration)
}

/// Couples `system_state` to the ready pointer and applies the evolution.
pub fn premeasure(model: &MeasurementModel, system_state: &StateVector) -> Result<BipartiteState> {
    if system_state.dim() != model.system_dim {
        return Err(Error::dim(
            "system state",
            model.system_dim,
            system_state.dim(),
        ));
    }
    let deviation = (system_state.norm() - 1.0).abs();
    if deviation > crate::NORMALIZATION_TOL {
        return Err(Error::NotNormalized { deviation });
    }
    let u = evolution_operator(model)?;
    let evolved = u.mul_vec(&system_state.kron(&model.ready_state));
    BipartiteState::new(model.system_dim, model.pointer_dim, evolved)
}

/// Calibrated correspondence extracted from the dynamics: system basis
/// column `i` drives the ready pointer into pointer-state column `i`, which
/// reads out as `pointer_values[i]`; `sharp[i]` records whether that state
/// is an eigenvector of the readout observable.
#[derive(Debug, Clone)]
pub struct CalibrationTable {
    /// Columns are the calibrated system basis vectors.
    pub system_basis: ComplexMatrix,
    /// Columns are the pointer states reached from the ready state.
    pub pointer_states: ComplexMatrix,
    /// Readout expectation of each pointer state, sorted descending.
    pub pointer_values: Vec<f64>,
    /// Whether each pointer state is sharp (an eigenvector of the readout).
    pub sharp: Vec<bool>,
    /// Worst-case deviation of `U (a_i x ready)` from `a_i x z_i`.
    pub residual: f64,
}

/// Operators `K_m` on the system with `<i, m| U |i', ready> = K_m[i][i']`;
/// a premeasurement makes this family commuting and normal.
fn conditional_operators(
    u: &ComplexMatrix,
    ready: &StateVector,
    system_dim: usize,
    pointer_dim: usize,
) -> Vec<ComplexMatrix> {
    (0..pointer_dim)
        .map(|m| {
            ComplexMatrix::from_fn(system_dim, system_dim, |i, ip| {
                let mut acc = C64::new(0.0, 0.0);
                for j in 0..pointer_dim {
                    acc += u[(i * pointer_dim + m, ip * pointer_dim + j)] * ready.amplitudes()[j];
                }
                acc
            })
        })
        .collect()
}

/// Recovers the system basis the dynamics calibrates and the pointer states
/// it assigns to each basis vector.
///
/// The conditional operators `K_m` of a premeasurement commute and are
/// normal, so a random complex combination of them is diagonalized by the
/// calibrated basis; drawing the combination from a seeded generator keeps
/// runs reproducible, and a fresh draw is taken (up to 5 times) if the
/// combination happens to have clustered eigenvalues. The final residual
/// check is the arbiter that the basis actually factorizes the evolution.
pub fn extract_calibration_basis(
    model: &MeasurementModel,
    tol: f64,
    seed: u64,
) -> Result<CalibrationTable> {
    let u = evolution_operator(model)?;
    let ks = conditional_operators(&u, &model.ready_state, model.system_dim, model.pointer_dim);

    let mut worst_commutator = 0.0f64;
    for a in 0..ks.len() {
        worst_commutator =
            worst_commutator.max(ks[a].commutator(&ks[a].adjoint()).frobenius_norm());
        for b in a + 1..ks.len() {
            worst_commutator = worst_commutator.max(ks[a].commutator(&ks[b]).frobenius_norm());
        }
    }
    if worst_commutator > tol {
        return Err(Error::NotAPremeasurement {
            detail: format!(
                "conditional pointer operators do not commute (worst commutator norm {:.3e})",
                worst_commutator
            ),
        });
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut eig = None;
    for _ in 0..5 {
        let mut comb = ComplexMatrix::zeros(model.system_dim, model.system_dim);
        for k in &ks {
            let g = C64::new(
                StandardNormal.sample(&mut rng),
                StandardNormal.sample(&mut rng),
            );
            comb = &comb + &k.scale(g);
        }
        let candidate = normal_eig(&comb)?;
        let distinct = min_pairwise_gap(&candidate.values)
            > 1e-8
                * (1.0
                    + candidate
                        .values
                        .iter()
                        .map(|z| z.norm())
                        .fold(0.0, f64::max));
        let done = distinct;
        eig = Some(candidate);
        if done {
            break;
        }
    }
    let eig = eig.expect("at least one attempt runs");

    let mut rows: Vec<(StateVector, StateVector, f64, bool)> = Vec::new();
    let mut residual = 0.0f64;
    for i in 0..model.system_dim {
        let a = phase_fixed(&eig.vectors.column(i));
        let z = StateVector::new(
            (0..model.pointer_dim)
                .map(|m| a.inner(&ks[m].mul_vec(&a)))
                .collect(),
        )
        .expect("finite pointer amplitudes");
        let lhs = u.mul_vec(&a.kron(&model.ready_state));
        residual = residual.max(lhs.distance(&a.kron(&z)));
        let value = z.inner(&model.pointer_observable.mul_vec(&z)).re;
        let drift = (&model.pointer_observable.mul_vec(&z) - &z.scale(C64::new(value, 0.0))).norm();
        rows.push((a, z, value, drift <= tol));
    }
    if residual > tol {
        return Err(Error::NotAPremeasurement {
            detail: format!(
                "no product factorization of the evolved basis (residual {:.3e})",
                residual
            ),
        });
    }

    // Descending readout value; break ties by the dominant component of the
    // system vector so the order never depends on eigensolver internals.
    rows.sort_by(|l, r| {
        r.2.partial_cmp(&l.2)
            .unwrap()
            .then_with(|| l.0.dominant_index().cmp(&r.0.dominant_index()))
    });

    Ok(CalibrationTable {
        system_basis: ComplexMatrix::from_columns(
            &rows.iter().map(|r| r.0.clone()).collect::<Vec<_>>(),
        ),
        pointer_states: ComplexMatrix::from_columns(
            &rows.iter().map(|r| r.1.clone()).collect::<Vec<_>>(),
        ),
        pointer_values: rows.iter().map(|r| r.2).collect(),
        sharp: rows.iter().map(|r| r.3).collect(),
        residual,
    })
}

fn min_pairwise_gap(values: &[C64]) -> f64 {
    let mut gap = f64::INFINITY;
    for i in 0..values.len() {
        for j in i + 1..values.len() {
            gap = gap.min((values[i] - values[j]).norm());
        }
    }
    gap
}

/// Rescales so the dominant amplitude is real and positive.
fn phase_fixed(v: &StateVector) -> StateVector {
    let pivot = v.amplitudes()[v.dominant_index()];
    if pivot.norm() == 0.0 {
        return v.clone();
    }
    v.scale((pivot / pivot.norm()).conj())
}

/// Builds the apparatus that drives the ready pointer into `targets[i]`
/// whenever the system is in the i-th calibrated basis vector of `model`,
/// and reports its Frobenius distance from the original evolution.
///
/// Targets must be one normalized, pairwise-orthogonal pointer state per
/// calibrated system vector. The returned model carries a readout
/// observable whose eigenvectors are the targets, with eigenvalues laid out
/// on the same descending ladder for every system dimension.
pub fn counterfactual_apparatus(
    model: &MeasurementModel,
    targets: &[StateVector],
    options: &AnalysisOptions,
) -> Result<(MeasurementModel, f64)> {
    if targets.len() != model.system_dim {
        return Err(Error::InvalidTarget(format!(
            "expected {} pointer targets, got {}",
            model.system_dim,
            targets.len()
        )));
    }
    for (i, t) in targets.iter().enumerate() {
        if t.dim() != model.pointer_dim {
            return Err(Error::InvalidTarget(format!(
                "target {} has dimension {}, pointer space has {}",
                i,
                t.dim(),
                model.pointer_dim
            )));
        }
        if !t.is_normalized(1e-10) {
            return Err(Error::InvalidTarget(format!(
                "target {} is not normalized",
                i
            )));
        }
        for (j, other) in targets.iter().enumerate().skip(i + 1) {
            let overlap = t.inner(other).norm();
            if overlap > 1e-10 {
                return Err(Error::InvalidTarget(format!(
                    "targets {} and {} are not orthogonal (overlap {:.3e})",
                    i, j, overlap
                )));
            }
        }
    }

    let table = extract_calibration_basis(model, options.calibration_tol, options.seed)?;
    let u = evolution_operator(model)?;

    let dm = model.pointer_dim;
    let mut u_prime = ComplexMatrix::zeros(model.system_dim * dm, model.system_dim * dm);
    for (i, target) in targets.iter().enumerate() {
        let a = table.system_basis.column(i);
        let w = pointer_rotation(&model.ready_state, target);
        u_prime = &u_prime + &a.outer(&a).kron(&w);
    }

    // Readout observable sharp on the targets, eigenvalues on the ladder
    // (n-1)/2, (n-3)/2, ..., -(n-1)/2.
    let n = model.system_dim as f64;
    let mut observable = ComplexMatrix::zeros(dm, dm);
    for (i, t) in targets.iter().enumerate() {
        let lambda = (n - 1.0) / 2.0 - i as f64;
        observable = &observable + &t.outer(t).scale(C64::new(lambda, 0.0));
    }

    let interaction = hermitian_log(&u_prime)?;
    let counterfactual = MeasurementModel::new(
        model.system_dim,
        model.pointer_dim,
        interaction,
        1.0,
        model.ready_state.clone(),
        observable,
        format!("{} (counterfactual)", model.label),
    )?;
    let distance = operator_distance(&u, &u_prime)?;
    Ok((counterfactual, distance))
}

/// Unitary on the pointer space sending `from` to `to` exactly: a phase
/// twist on `to`'s ray composed with the reflection exchanging `from` and
/// the phase-aligned copy of `to`.
fn pointer_rotation(from: &StateVector, to: &StateVector) -> ComplexMatrix {
    let dim = from.dim();
    let identity = ComplexMatrix::identity(dim);
    if from.distance(to) <= 1e-12 {
        return identity;
    }
    let ip = from.inner(to);
    let alpha = if ip.norm() == 0.0 { 0.0 } else { ip.arg() };
    let aligned = to.scale(C64::from_polar(1.0, -alpha));
    let diff = from - &aligned;
    let reflection = if diff.norm() <= 1e-12 {
        identity.clone()
    } else {
        let scale = C64::new(-2.0 / diff.norm().powi(2), 0.0);
        &identity + &diff.outer(&diff).scale(scale)
    };
    let twist = &identity
        + &aligned
            .outer(&aligned)
            .scale(C64::from_polar(1.0, alpha) - C64::new(1.0, 0.0));
    &twist * &reflection
}

/// Per-state sharpness of the readout: true when `states` column `v`
/// satisfies `Z v = <v|Z|v> v` within `tol`.
pub fn pointer_physicality_check(
    model: &MeasurementModel,
    states: &ComplexMatrix,
    tol: f64,
) -> Result<Vec<bool>> {
    if states.rows() != model.pointer_dim {
        return Err(Error::dim(
            "pointer states",
            model.pointer_dim,
            states.rows(),
        ));
    }
    let mut flags = Vec::with_capacity(states.cols());
    for j in 0..states.cols() {
        let v = states.column(j);
        let deviation = (v.norm() - 1.0).abs();
        if deviation > crate::NORMALIZATION_TOL {
            return Err(Error::NotNormalized { deviation });
        }
        let zv = model.pointer_observable.mul_vec(&v);
        let mean = v.inner(&zv).re;
        flags.push((&zv - &v.scale(C64::new(mean, 0.0))).norm() <= tol);
    }
    Ok(flags)
}

/// Whether the post-interaction biorthonormal form is unique.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Unique,
    Ambiguous,
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Verdict::Unique => write!(f, "UNIQUE"),
            Verdict::Ambiguous => write!(f, "AMBIGUOUS"),
        }
    }
}

/// One decomposition of the post-interaction state, scored against the
/// calibration the dynamics actually performs.
#[derive(Debug, Clone)]
pub struct CandidateAssessment {
    /// "dynamical" for the decomposition itself, "sample k" for alternates.
    pub origin: String,
    pub decomposition: SchmidtDecomposition,
    /// Total squared overlap of the left basis with the calibrated basis
    /// under the best one-to-one pairing; at most the Schmidt rank.
    pub match_score: f64,
    /// True when the score is within 1e-8 of the rank.
    pub matches_calibration: bool,
    /// Sharpness of each right-basis vector under the readout observable.
    pub pointer_physical: Vec<bool>,
}

/// Outcome of the full ambiguity analysis for one model and input state.
#[derive(Debug, Clone)]
pub struct AmbiguityReport {
    pub verdict: Verdict,
    pub calibration: CalibrationTable,
    /// Dynamical decomposition first, then one entry per applied sample
    /// change.
    pub candidates: Vec<CandidateAssessment>,
    /// Index of the first candidate matching the calibration, if any.
    pub selected: Option<usize>,
    /// Sample changes that could not be applied, with the reason.
    pub notes: Vec<String>,
}

/// Margin below the Schmidt rank still accepted as a full basis match.
const MATCH_TOL: f64 = 1e-8;

/// Premeasures `system_state`, decomposes the result, applies each sample
/// basis change that fits a degenerate class, and scores every candidate
/// against the calibration extracted from the dynamics.
///
/// Changes aimed at a class that does not exist or is not degenerate are
/// recorded in `notes` and skipped: probing a state that turns out UNIQUE
/// is an expected outcome, not an input error. A non-unitary change matrix
/// is still rejected outright.
pub fn ambiguity_report(
    model: &MeasurementModel,
    system_state: &StateVector,
    sample_changes: &[BasisChange],
    options: &AnalysisOptions,
) -> Result<AmbiguityReport> {
    let post = premeasure(model, system_state)?;
    let base = schmidt_decompose(&post, options.schmidt_cutoff, options.degeneracy_rel_tol)?;
    let calibration = extract_calibration_basis(model, options.calibration_tol, options.seed)?;

    let verdict = if base.is_ambiguous() {
        Verdict::Ambiguous
    } else {
        Verdict::Unique
    };

    let mut candidates = vec![assess(model, &calibration, &base, "dynamical", options)?];
    let mut notes = Vec::new();
    for (k, change) in sample_changes.iter().enumerate() {
        let class_size = base
            .degeneracy_classes
            .get(change.class_index)
            .map(|c| c.len());
        match class_size {
            None => {
                notes.push(format!(
                    "sample {}: class {} does not exist (state has {} classes)",
                    k,
                    change.class_index,
                    base.degeneracy_classes.len()
                ));
                continue;
            }
            Some(size) if size < 2 => {
                notes.push(format!(
                    "sample {}: class {} is not degenerate (size {})",
                    k, change.class_index, size
                ));
                continue;
            }
            Some(size) if size != change.matrix.rows() => {
                notes.push(format!(
                    "sample {}: matrix size {} does not fit class {} (size {})",
                    k,
                    change.matrix.rows(),
                    change.class_index,
                    size
                ));
                continue;
            }
            Some(_) => {}
        }
        let alternate = alternative_decomposition(&base, change)?;
        candidates.push(assess(
            model,
            &calibration,
            &alternate,
            &format!("sample {}", k),
            options,
        )?);
    }

    let selected = candidates.iter().position(|c| c.matches_calibration);
    Ok(AmbiguityReport {
        verdict,
        calibration,
        candidates,
        selected,
        notes,
    })
}

fn assess(
    model: &MeasurementModel,
    calibration: &CalibrationTable,
    decomposition: &SchmidtDecomposition,
    origin: &str,
    options: &AnalysisOptions,
) -> Result<CandidateAssessment> {
    let score = basis_match_score(&decomposition.left_basis, &calibration.system_basis);
    let pointer_physical =
        pointer_physicality_check(model, &decomposition.right_basis, options.calibration_tol)?;
    Ok(CandidateAssessment {
        origin: origin.into(),
        decomposition: decomposition.clone(),
        match_score: score,
        matches_calibration: score > decomposition.rank() as f64 - MATCH_TOL,
        pointer_physical,
    })
}

/// Total squared overlap under the best one-to-one pairing of candidate
/// columns with reference columns, built greedily from the largest
/// overlaps. The candidate may have fewer columns than the reference.
pub fn basis_match_score(candidate: &ComplexMatrix, reference: &ComplexMatrix) -> f64 {
    assert_eq!(
        candidate.rows(),
        reference.rows(),
        "bases live on different spaces"
    );
    let mut overlaps = Vec::new();
    for i in 0..candidate.cols() {
        let c = candidate.column(i);
        for j in 0..reference.cols() {
            overlaps.push((reference.column(j).inner(&c).norm_sqr(), i, j));
        }
    }
    overlaps.sort_by(|l, r| {
        r.0.partial_cmp(&l.0)
            .unwrap()
            .then_with(|| (l.1, l.2).cmp(&(r.1, r.2)))
    });
    let mut used_candidate = vec![false; candidate.cols()];
    let mut used_reference = vec![false; reference.cols()];
    let mut score = 0.0;
    for (s, i, j) in overlaps {
        if !used_candidate[i] && !used_reference[j] {
            used_candidate[i] = true;
            used_reference[j] = true;
            score += s;
        }
    }
    score
}
