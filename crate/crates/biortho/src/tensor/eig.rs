//! Spectral routines: Hermitian eigensolver, matrix exponential, and the
//! eigendecomposition of normal matrices built on top of it.

use super::matrix::{ComplexMatrix, StateVector};
use super::C64;
use crate::error::{Error, Result};

/// Sweep cap for the cyclic Jacobi iteration.
const JACOBI_MAX_SWEEPS: usize = 100;
/// Convergence threshold on the off-diagonal norm, relative to the Frobenius norm.
const JACOBI_OFF_TOL: f64 = 1e-14;

/// Eigensystem of a Hermitian matrix: real eigenvalues in ascending order and
/// a unitary whose k-th column is the eigenvector for `values[k]`.
#[derive(Debug, Clone)]
pub struct HermitianEig {
    pub values: Vec<f64>,
    pub vectors: ComplexMatrix,
}

/// Eigensystem of a normal matrix, with the reconstruction residual
/// `||M - V diag(values) V†||_F` as a quality measure.
#[derive(Debug, Clone)]
pub struct NormalEig {
    pub values: Vec<C64>,
    pub vectors: ComplexMatrix,
    pub residual: f64,
}

/// Diagonalizes a Hermitian matrix by cyclic complex Jacobi rotations.
///
/// `tol` bounds the accepted deviation from self-adjointness relative to the
/// Frobenius norm; the matrix is symmetrized before iterating so the result
/// is exactly Hermitian arithmetic.
pub fn hermitian_eig(h: &ComplexMatrix, tol: f64) -> Result<HermitianEig> {
    if !h.is_square() {
        return Err(Error::ShapeMismatch(h.rows(), h.cols(), h.rows(), h.rows()));
    }
    let n = h.rows();
    let scale = h.frobenius_norm().max(1.0);
    let deviation = h.hermiticity_deviation() / scale;
    if deviation > tol {
        return Err(Error::NotHermitian { deviation, tol });
    }

    // Work on the Hermitian part so rounding in the input cannot leak through.
    let mut a = ComplexMatrix::from_fn(n, n, |i, j| (h[(i, j)] + h[(j, i)].conj()) * 0.5);
    let mut v = ComplexMatrix::identity(n);
    let threshold = JACOBI_OFF_TOL * a.frobenius_norm();

    let mut converged = off_diagonal_norm(&a) <= threshold;
    for _ in 0..JACOBI_MAX_SWEEPS {
        if converged {
            break;
        }
        for p in 0..n - 1 {
            for q in p + 1..n {
                rotate(&mut a, &mut v, p, q);
            }
        }
        converged = off_diagonal_norm(&a) <= threshold;
    }
    if !converged {
        return Err(Error::NoConvergence {
            sweeps: JACOBI_MAX_SWEEPS,
            off: off_diagonal_norm(&a),
        });
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(i, i)].re.partial_cmp(&a[(j, j)].re).unwrap());
    let values = order.iter().map(|&i| a[(i, i)].re).collect();
    let vectors = ComplexMatrix::from_fn(n, n, |i, j| v[(i, order[j])]);
    Ok(HermitianEig { values, vectors })
}

fn off_diagonal_norm(a: &ComplexMatrix) -> f64 {
    let n = a.rows();
    let mut sum = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                sum += a[(i, j)].norm_sqr();
            }
        }
    }
    sum.sqrt()
}

/// One complex Jacobi rotation annihilating the (p, q) entry.
///
/// With pivot `a_pq = |b| e^{i phi}`, the rotation angle comes from
/// `tau = (a_pp - a_qq) / (2|b|)` and `t = sgn(tau) / (|tau| + sqrt(1 + tau^2))`,
/// which picks the smaller rotation for numerical stability.
fn rotate(a: &mut ComplexMatrix, v: &mut ComplexMatrix, p: usize, q: usize) {
    let apq = a[(p, q)];
    let abs = apq.norm();
    if abs == 0.0 {
        return;
    }
    let app = a[(p, p)].re;
    let aqq = a[(q, q)].re;
    let phase = apq / abs;
    let tau = (app - aqq) / (2.0 * abs);
    let t = if tau >= 0.0 {
        1.0 / (tau + (1.0 + tau * tau).sqrt())
    } else {
        -1.0 / (-tau + (1.0 + tau * tau).sqrt())
    };
    let c = 1.0 / (1.0 + t * t).sqrt();
    let s = phase * (t * c);

    let n = a.rows();
    for k in 0..n {
        if k == p || k == q {
            continue;
        }
        let akp = a[(k, p)];
        let akq = a[(k, q)];
        a[(k, p)] = akp * c + akq * s.conj();
        a[(k, q)] = akq * c - akp * s;
        a[(p, k)] = a[(k, p)].conj();
        a[(q, k)] = a[(k, q)].conj();
    }
    a[(p, p)] = C64::new(app + t * abs, 0.0);
    a[(q, q)] = C64::new(aqq - t * abs, 0.0);
    a[(p, q)] = C64::new(0.0, 0.0);
    a[(q, p)] = C64::new(0.0, 0.0);

    for k in 0..n {
        let vkp = v[(k, p)];
        let vkq = v[(k, q)];
        v[(k, p)] = vkp * c + vkq * s.conj();
        v[(k, q)] = vkq * c - vkp * s;
    }
}

/// `exp(i theta H)` for Hermitian `H`, computed spectrally so the result is
/// unitary to the accuracy of the eigendecomposition.
pub fn unitary_exp(h: &ComplexMatrix, theta: f64) -> Result<ComplexMatrix> {
    let eig = hermitian_eig(h, crate::HERMITICITY_TOL)?;
    let n = h.rows();
    let phases: Vec<C64> = eig
        .values
        .iter()
        .map(|&lambda| C64::from_polar(1.0, theta * lambda))
        .collect();
    Ok(ComplexMatrix::from_fn(n, n, |i, j| {
        let mut acc = C64::new(0.0, 0.0);
        for (k, &phase) in phases.iter().enumerate() {
            acc += eig.vectors[(i, k)] * phase * eig.vectors[(j, k)].conj();
        }
        acc
    }))
}

/// Relative gap below which eigenvalues are treated as a single cluster.
const CLUSTER_TOL: f64 = 1e-7;

/// Eigendecomposition of a normal matrix via its commuting Hermitian and
/// anti-Hermitian parts: the Hermitian part fixes the eigenspaces up to
/// clustering, and the anti-Hermitian part is re-diagonalized inside each
/// cluster. The residual reports how well the input was actually normal.
pub fn normal_eig(m: &ComplexMatrix) -> Result<NormalEig> {
    if !m.is_square() {
        return Err(Error::ShapeMismatch(m.rows(), m.cols(), m.rows(), m.rows()));
    }
    let n = m.rows();
    let re_part = ComplexMatrix::from_fn(n, n, |i, j| (m[(i, j)] + m[(j, i)].conj()) * 0.5);
    let im_part = ComplexMatrix::from_fn(n, n, |i, j| {
        (m[(i, j)] - m[(j, i)].conj()) * C64::new(0.0, -0.5)
    });

    let base = hermitian_eig(&re_part, 1.0)?;
    let gap = CLUSTER_TOL * m.frobenius_norm().max(1.0);

    let mut vectors = base.vectors.clone();
    let mut values = vec![C64::new(0.0, 0.0); n];

    let mut start = 0;
    while start < n {
        let mut end = start + 1;
        while end < n && base.values[end] - base.values[end - 1] <= gap {
            end += 1;
        }
        let k = end - start;
        if k == 1 {
            let col = vectors.column(start);
            let b_val = col.inner(&im_part.mul_vec(&col));
            values[start] = C64::new(base.values[start], b_val.re);
        } else {
            // Project the anti-Hermitian part's generator onto the cluster and
            // rotate the cluster columns to diagonalize it.
            let cluster: Vec<StateVector> = (start..end).map(|j| vectors.column(j)).collect();
            let small = ComplexMatrix::from_fn(k, k, |r, s| {
                cluster[r].inner(&im_part.mul_vec(&cluster[s]))
            });
            let sub = hermitian_eig(&small, 1e-6)?;
            for s in 0..k {
                let mut new_col =
                    StateVector::new(vec![C64::new(0.0, 0.0); n]).expect("nonzero dimension");
                for (r, member) in cluster.iter().enumerate() {
                    new_col = &new_col + &member.scale(sub.vectors[(r, s)]);
                }
                vectors.set_column(start + s, &new_col);
                values[start + s] = C64::new(base.values[start + s], sub.values[s]);
            }
            // Cluster members share the Hermitian-part eigenvalue only up to
            // the gap; recompute the real parts from the final vectors.
            for (s, value) in values.iter_mut().enumerate().take(end).skip(start) {
                let col = vectors.column(s);
                value.re = col.inner(&re_part.mul_vec(&col)).re;
            }
        }
        start = end;
    }

    let recon = ComplexMatrix::from_fn(n, n, |i, j| {
        let mut acc = C64::new(0.0, 0.0);
        for k in 0..n {
            acc += vectors[(i, k)] * values[k] * vectors[(j, k)].conj();
        }
        acc
    });
    let residual = (m - &recon).frobenius_norm();
    Ok(NormalEig {
        values,
        vectors,
        residual,
    })
}

/// Hermitian `H` with `exp(-i H) = U` for unitary `U`, using the principal
/// branch: eigenphases are taken in `(-pi, pi]`.
pub fn hermitian_log(u: &ComplexMatrix) -> Result<ComplexMatrix> {
    let deviation = u.unitarity_deviation();
    if deviation > crate::UNITARITY_TOL {
        return Err(Error::NotUnitary { deviation });
    }
    let eig = normal_eig(u)?;
    let n = u.rows();
    let angles: Vec<f64> = eig
        .values
        .iter()
        .map(|z| {
            let mut phi = z.arg();
            if phi <= -std::f64::consts::PI {
                phi = std::f64::consts::PI;
            }
            -phi
        })
        .collect();
    let h = ComplexMatrix::from_fn(n, n, |i, j| {
        let mut acc = C64::new(0.0, 0.0);
        for (k, &angle) in angles.iter().enumerate() {
            acc += eig.vectors[(i, k)] * angle * eig.vectors[(j, k)].conj();
        }
        acc
    });
    // Symmetrize so downstream Hermiticity checks see an exact fixed point.
    Ok(ComplexMatrix::from_fn(n, n, |i, j| {
        (h[(i, j)] + h[(j, i)].conj()) * 0.5
    }))
}
