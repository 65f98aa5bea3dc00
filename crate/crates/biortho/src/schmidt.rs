//! Biorthonormal (Schmidt) decomposition of bipartite pure states and the
//! basis ambiguity that appears when coefficients are degenerate.
//!
//! A state on system x pointer factors as a sum of `c_k |a_k>|z_k>` with
//! orthonormal `a_k`, `z_k` and positive weights `c_k`. The weights are
//! always unique; the paired bases are unique only when all weights differ.
//! Within a block of equal weights, any unitary mixing of the left vectors,
//! compensated on the right, yields another valid decomposition.

use crate::error::{Error, Result};
use crate::tensor::{hermitian_eig, ComplexMatrix, StateVector, C64};

/// Pure state on a composite space, system-major: amplitude `(i, j)` lives
/// at index `i * pointer_dim + j`.
#[derive(Debug, Clone)]
pub struct BipartiteState {
    system_dim: usize,
    pointer_dim: usize,
    amplitudes: StateVector,
}

impl BipartiteState {
    /// Wraps a normalized composite state; the amplitude count must equal
    /// `system_dim * pointer_dim` and the norm must be 1 within 1e-12.
    pub fn new(system_dim: usize, pointer_dim: usize, amplitudes: StateVector) -> Result<Self> {
        if system_dim == 0 || pointer_dim == 0 {
            return Err(Error::dim("composite dimensions", 1, 0));
        }
        if amplitudes.dim() != system_dim * pointer_dim {
            return Err(Error::dim(
                "composite amplitudes",
                system_dim * pointer_dim,
                amplitudes.dim(),
            ));
        }
        let deviation = (amplitudes.norm() - 1.0).abs();
        if deviation > crate::NORMALIZATION_TOL {
            return Err(Error::NotNormalized { deviation });
        }
        Ok(Self {
            system_dim,
            pointer_dim,
            amplitudes,
        })
    }

    /// Product state `system (x) pointer`.
    pub fn product(system: &StateVector, pointer: &StateVector) -> Result<Self> {
        Self::new(system.dim(), pointer.dim(), system.kron(pointer))
    }

    pub fn system_dim(&self) -> usize {
        self.system_dim
    }

    pub fn pointer_dim(&self) -> usize {
        self.pointer_dim
    }

    pub fn amplitudes(&self) -> &StateVector {
        &self.amplitudes
    }

    /// Amplitude of `|i>|j>`.
    pub fn amplitude(&self, i: usize, j: usize) -> C64 {
        self.amplitudes.amplitudes()[i * self.pointer_dim + j]
    }

    /// Coefficient matrix `C` with `C[i][j]` the amplitude of `|i>|j>`.
    pub fn coefficient_matrix(&self) -> ComplexMatrix {
        ComplexMatrix::from_fn(self.system_dim, self.pointer_dim, |i, j| {
            self.amplitude(i, j)
        })
    }
}

/// Biorthonormal decomposition: descending positive coefficients, paired
/// orthonormal bases stored column-wise, and the grouping of coefficients
/// into degeneracy classes at the tolerance used to build it.
#[derive(Debug, Clone)]
pub struct SchmidtDecomposition {
    pub coefficients: Vec<f64>,
    /// Columns are the system-side vectors `a_k`.
    pub left_basis: ComplexMatrix,
    /// Columns are the pointer-side vectors `z_k`.
    pub right_basis: ComplexMatrix,
    /// Indices into `coefficients`, grouped by equality within the tolerance.
    pub degeneracy_classes: Vec<Vec<usize>>,
    pub cutoff: f64,
}

impl SchmidtDecomposition {
    pub fn rank(&self) -> usize {
        self.coefficients.len()
    }

    /// Rebuilds the composite state from the decomposition.
    pub fn reconstruct(&self) -> BipartiteState {
        let ds = self.left_basis.rows();
        let dm = self.right_basis.rows();
        let mut amps = vec![C64::new(0.0, 0.0); ds * dm];
        for k in 0..self.rank() {
            for i in 0..ds {
                for j in 0..dm {
                    amps[i * dm + j] +=
                        self.coefficients[k] * self.left_basis[(i, k)] * self.right_basis[(j, k)];
                }
            }
        }
        let v = StateVector::new(amps).expect("finite reconstruction");
        BipartiteState::new(ds, dm, v).expect("decomposition reconstructs a unit vector")
    }

    /// True when some degeneracy class has more than one member, i.e. the
    /// paired bases are not unique.
    pub fn is_ambiguous(&self) -> bool {
        self.degeneracy_classes.iter().any(|c| c.len() > 1)
    }
}

/// Unitary mixing applied to one degeneracy class.
#[derive(Debug, Clone)]
pub struct BasisChange {
    /// Index into `degeneracy_classes` of the decomposition it applies to.
    pub class_index: usize,
    /// Unitary of the class size; entry `(j, i)` weights old left vector `i`
    /// in new left vector `j`'s expansion, see `alternative_decomposition`.
    pub matrix: ComplexMatrix,
}

/// Outcome of the uniqueness test for a proposed class mixing.
#[derive(Debug, Clone)]
pub struct UniquenessCheck {
    /// True when the mixing maps the decomposition to another valid one.
    pub holds: bool,
    /// Largest off-diagonal modulus of the transformed weight matrix.
    pub residual: f64,
    /// Diagonal of the transformed weight matrix: the would-be new `|c|^2`.
    pub new_weights: Vec<f64>,
}

/// Computes the biorthonormal decomposition of `state`, discarding
/// coefficients at or below `cutoff` and grouping the survivors into
/// degeneracy classes with relative tolerance `rel_tol`.
///
/// The phase convention makes the largest-modulus entry of each left vector
/// real and positive, with the compensating phase pushed onto the right
/// vector, so the factorization is reproducible across runs.
pub fn schmidt_decompose(
    state: &BipartiteState,
    cutoff: f64,
    rel_tol: f64,
) -> Result<SchmidtDecomposition> {
    let c = state.coefficient_matrix();
    let gram = &c.adjoint() * &c;
    let eig = hermitian_eig(&gram, crate::HERMITICITY_TOL)?;

    // Squaring C floors the resolvable weight at the Gram matrix's rounding
    // noise; eigenvalues under that floor are artifacts, not Schmidt weight.
    let lambda_max = eig.values.last().copied().unwrap_or(0.0).max(0.0);
    let noise_floor = 8.0 * gram.rows() as f64 * f64::EPSILON * lambda_max;
    let max_rank = state.system_dim().min(state.pointer_dim());

    // Ascending eigenvalues of C†C; walk from the top so coefficients come
    // out descending, and keep only those above the cutoff.
    let mut coefficients = Vec::new();
    let mut left = Vec::new();
    let mut right = Vec::new();
    for k in (0..eig.values.len()).rev().take(max_rank) {
        if eig.values[k] <= noise_floor {
            break;
        }
        let sigma = eig.values[k].max(0.0).sqrt();
        if sigma <= cutoff {
            break;
        }
        let v = eig.vectors.column(k);
        let u = c.mul_vec(&v).scale(C64::new(1.0 / sigma, 0.0));
        // Phase convention: dominant entry of the left vector real positive.
        let pivot = u.amplitudes()[u.dominant_index()];
        let phase = if pivot.norm() == 0.0 {
            C64::new(1.0, 0.0)
        } else {
            pivot / pivot.norm()
        };
        let u = u.scale(phase.conj());
        // Right vector is the conjugated eigenvector carrying the phase.
        let z = StateVector::new(v.amplitudes().iter().map(|x| x.conj() * phase).collect())
            .expect("finite amplitudes");
        coefficients.push(sigma);
        left.push(u);
        right.push(z);
    }
    if coefficients.is_empty() {
        return Err(Error::Schema(
            "state has no Schmidt coefficient above the cutoff".into(),
        ));
    }

    let degeneracy_classes = degeneracy_classes(&coefficients, rel_tol);
    Ok(SchmidtDecomposition {
        coefficients,
        left_basis: ComplexMatrix::from_columns(&left),
        right_basis: ComplexMatrix::from_columns(&right),
        degeneracy_classes,
        cutoff,
    })
}

/// Groups descending coefficients into classes of equal values: neighbors
/// whose gap is within `rel_tol * max_coefficient` are chained together.
pub fn degeneracy_classes(coefficients: &[f64], rel_tol: f64) -> Vec<Vec<usize>> {
    if coefficients.is_empty() {
        return Vec::new();
    }
    let scale = coefficients[0];
    let tol = rel_tol * scale;
    let mut classes: Vec<Vec<usize>> = vec![vec![0]];
    for k in 1..coefficients.len() {
        if coefficients[k - 1] - coefficients[k] <= tol {
            classes.last_mut().expect("nonempty").push(k);
        } else {
            classes.push(vec![k]);
        }
    }
    classes
}

/// Applies a unitary mixing to one degeneracy class, producing a new
/// decomposition of the same state.
///
/// New left vectors expand old ones as `a_i = sum_j M[j][i] a'_j`, so the
/// class block of the left basis transforms by `M†` on the right and the
/// right-basis block by `M^T`.
pub fn alternative_decomposition(
    decomposition: &SchmidtDecomposition,
    change: &BasisChange,
) -> Result<SchmidtDecomposition> {
    let class = decomposition
        .degeneracy_classes
        .get(change.class_index)
        .ok_or(Error::NotDegenerate {
            class_index: change.class_index,
            size: 0,
        })?;
    if class.len() < 2 {
        return Err(Error::NotDegenerate {
            class_index: change.class_index,
            size: class.len(),
        });
    }
    let m = &change.matrix;
    if m.rows() != class.len() || m.cols() != class.len() {
        return Err(Error::dim("basis change matrix", class.len(), m.rows()));
    }
    let deviation = m.unitarity_deviation();
    if deviation > crate::UNITARITY_TOL {
        return Err(Error::NotUnitary { deviation });
    }

    let k = class.len();
    let mut left = decomposition.left_basis.clone();
    let mut right = decomposition.right_basis.clone();
    for (slot, &col) in class.iter().enumerate() {
        // a'_slot = sum_i conj(M[slot][i]) a_i ; z'_slot = sum_i M[slot][i] z_i
        let mut new_left = vec![C64::new(0.0, 0.0); left.rows()];
        for i in 0..k {
            let a = decomposition.left_basis.column(class[i]);
            let w = m[(slot, i)].conj();
            for (acc, &amp) in new_left.iter_mut().zip(a.amplitudes()) {
                *acc += w * amp;
            }
        }
        let mut new_right = vec![C64::new(0.0, 0.0); right.rows()];
        for i in 0..k {
            let z = decomposition.right_basis.column(class[i]);
            let w = m[(slot, i)];
            for (acc, &amp) in new_right.iter_mut().zip(z.amplitudes()) {
                *acc += w * amp;
            }
        }
        left.set_column(col, &StateVector::new(new_left).expect("finite"));
        right.set_column(col, &StateVector::new(new_right).expect("finite"));
    }

    Ok(SchmidtDecomposition {
        coefficients: decomposition.coefficients.clone(),
        left_basis: left,
        right_basis: right,
        degeneracy_classes: decomposition.degeneracy_classes.clone(),
        cutoff: decomposition.cutoff,
    })
}

/// Tests whether mixing the given coefficients by `M` preserves
/// biorthonormal form: the transformed weight matrix
/// `D = M diag(c_i^2) M†` must be diagonal. Holds exactly when the mixed
/// coefficients are all equal; the residual is the largest off-diagonal
/// modulus of `D`.
pub fn uniqueness_condition(coefficients: &[f64], m: &ComplexMatrix) -> Result<UniquenessCheck> {
    let n = coefficients.len();
    if m.rows() != n || m.cols() != n {
        return Err(Error::dim("mixing matrix", n, m.rows()));
    }
    let deviation = m.unitarity_deviation();
    if deviation > crate::UNITARITY_TOL {
        return Err(Error::NotUnitary { deviation });
    }
    let weights = ComplexMatrix::diag_real(&coefficients.iter().map(|c| c * c).collect::<Vec<_>>());
    let d = &(m * &weights) * &m.adjoint();
    let residual = d.max_off_diagonal();
    let new_weights = (0..n).map(|i| d[(i, i)].re).collect();
    Ok(UniquenessCheck {
        holds: residual <= 1e-10,
        residual,
        new_weights,
    })
}
