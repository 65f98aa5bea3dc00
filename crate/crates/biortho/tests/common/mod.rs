//! Shared generators and independent oracles for the integration tests.

#![allow(dead_code)]

use biortho::{ComplexMatrix, StateVector, C64};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_complex(rng: &mut ChaCha8Rng) -> C64 {
    C64::new(StandardNormal.sample(rng), StandardNormal.sample(rng))
}

/// Haar-ish random unit vector from a complex Gaussian draw.
pub fn random_state(rng: &mut ChaCha8Rng, dim: usize) -> StateVector {
    loop {
        let v =
            StateVector::new((0..dim).map(|_| random_complex(rng)).collect()).expect("finite draw");
        if v.norm() > 1e-3 {
            return v.normalized().expect("nonzero");
        }
    }
}

/// Haar-distributed unitary via Gram-Schmidt on Gaussian columns, with
/// re-orthogonalization for numerical hygiene.
pub fn random_unitary(rng: &mut ChaCha8Rng, n: usize) -> ComplexMatrix {
    'outer: loop {
        let mut cols: Vec<StateVector> = Vec::with_capacity(n);
        for _ in 0..n {
            let mut v = StateVector::new((0..n).map(|_| random_complex(rng)).collect())
                .expect("finite draw");
            for _pass in 0..2 {
                for c in &cols {
                    let overlap = c.inner(&v);
                    v = &v - &c.scale(overlap);
                }
            }
            if v.norm() < 1e-6 {
                continue 'outer;
            }
            cols.push(v.normalized().expect("nonzero"));
        }
        return ComplexMatrix::from_columns(&cols);
    }
}

/// Random Hermitian with Gaussian entries of the given scale.
pub fn random_hermitian(rng: &mut ChaCha8Rng, n: usize, scale: f64) -> ComplexMatrix {
    let raw = ComplexMatrix::from_fn(n, n, |_, _| random_complex(rng) * scale);
    ComplexMatrix::from_fn(n, n, |i, j| (raw[(i, j)] + raw[(j, i)].conj()) * 0.5)
}

/// Taylor-series matrix exponential `exp(i theta H)` with scaling and
/// squaring; an oracle independent of the spectral implementation.
pub fn expm_series(h: &ComplexMatrix, theta: f64) -> ComplexMatrix {
    let n = h.rows();
    let m = h.scale(C64::new(0.0, theta));
    let norm = m.frobenius_norm();
    let squarings = if norm > 0.5 {
        (norm / 0.5).log2().ceil() as i32
    } else {
        0
    };
    let scaled = m.scale(C64::new(0.5f64.powi(squarings), 0.0));
    let mut term = ComplexMatrix::identity(n);
    let mut sum = ComplexMatrix::identity(n);
    for k in 1..=25 {
        term = &term * &scaled;
        term = term.scale(C64::new(1.0 / k as f64, 0.0));
        sum = &sum + &term;
    }
    let mut result = sum;
    for _ in 0..squarings {
        result = &result * &result;
    }
    result
}

/// Frobenius distance helper for assertions.
pub fn dist(a: &ComplexMatrix, b: &ComplexMatrix) -> f64 {
    (a - b).frobenius_norm()
}
