//! Concrete measurement models: spin-1/2 operators and states, the minimal
//! two-level bit-by-bit detector, and a Stern-Gerlach apparatus with a
//! cyclic momentum-lattice pointer.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::measurement::MeasurementModel;
use crate::tensor::{hermitian_log, ComplexMatrix, StateVector, C64};

/// Spin-1/2 operators (units of hbar = 1, eigenvalues +-1/2) and the z and
/// x eigenstates, in the (up, down) computational basis.
#[derive(Debug, Clone)]
pub struct SpinHalf {
    pub sx: ComplexMatrix,
    pub sy: ComplexMatrix,
    pub sz: ComplexMatrix,
    pub plus_z: StateVector,
    pub minus_z: StateVector,
    pub plus_x: StateVector,
    pub minus_x: StateVector,
}

/// Builds the spin-1/2 toolbox.
pub fn spin_half() -> SpinHalf {
    let z = C64::new(0.0, 0.0);
    let h = C64::new(0.5, 0.0);
    let s = 1.0 / 2.0f64.sqrt();
    SpinHalf {
        sx: ComplexMatrix::new(2, 2, vec![z, h, h, z]).expect("finite entries"),
        sy: ComplexMatrix::new(2, 2, vec![z, C64::new(0.0, -0.5), C64::new(0.0, 0.5), z])
            .expect("finite entries"),
        sz: ComplexMatrix::new(2, 2, vec![h, z, z, -h]).expect("finite entries"),
        plus_z: StateVector::basis(2, 0),
        minus_z: StateVector::basis(2, 1),
        plus_x: StateVector::from_real(&[s, s]).expect("finite entries"),
        minus_x: StateVector::from_real(&[s, -s]).expect("finite entries"),
    }
}

/// Minimal two-level detector: the pointer is a second spin prepared up,
/// and the interaction flips it exactly when the system is down.
///
/// The generator is `-pi |down><down| (x) |minus_x><minus_x|` acting for
/// unit time, which exponentiates to the controlled flip
/// `|up><up| (x) I + |down><down| (x) 2 Sx`.
pub fn bit_by_bit_model() -> MeasurementModel {
    let spin = spin_half();
    let interaction = spin
        .minus_z
        .outer(&spin.minus_z)
        .kron(&spin.minus_x.outer(&spin.minus_x))
        .scale(C64::new(-PI, 0.0));
    MeasurementModel::new(
        2,
        2,
        interaction,
        1.0,
        spin.plus_z.clone(),
        spin.sz,
        "bit_by_bit",
    )
    .expect("fixed model data is valid")
}

/// Stern-Gerlach apparatus: a spin-1/2 system kicks a cyclic momentum
/// lattice of `lattice_size` sites by `shift` steps, up for spin up and
/// down for spin down.
///
/// Sites carry the labels `-(N-1)/2 ..= (N-1)/2` (site index i maps to
/// label i - (N-1)/2), the pointer starts on label 0, and the readout
/// observable is diagonal with those labels. `lattice_size` must be odd and
/// at least 3, and `shift` must satisfy `0 < shift < lattice_size / 2` so
/// the two kicked states stay distinct from each other and from the start.
pub fn stern_gerlach_model(lattice_size: usize, shift: usize) -> Result<MeasurementModel> {
    if lattice_size < 3 || lattice_size.is_multiple_of(2) {
        return Err(Error::InvalidLattice(format!(
            "lattice size must be odd and >= 3, got {}",
            lattice_size
        )));
    }
    if shift == 0 || 2 * shift >= lattice_size {
        return Err(Error::InvalidLattice(format!(
            "shift must satisfy 0 < shift < {}/2, got {}",
            lattice_size, shift
        )));
    }

    let n = lattice_size;
    let step_up = shift_operator(n, shift);
    let step_down = step_up.transpose();
    let spin = spin_half();
    let u = &spin.plus_z.outer(&spin.plus_z).kron(&step_up)
        + &spin.minus_z.outer(&spin.minus_z).kron(&step_down);
    let interaction = hermitian_log(&u)?;

    let center = (n - 1) / 2;
    let labels: Vec<f64> = (0..n).map(|i| i as f64 - center as f64).collect();
    MeasurementModel::new(
        2,
        n,
        interaction,
        1.0,
        StateVector::basis(n, center),
        ComplexMatrix::diag_real(&labels),
        format!("stern_gerlach(N={}, k={})", n, shift),
    )
}

/// Cyclic shift by `k` sites: site i maps to site (i + k) mod n.
fn shift_operator(n: usize, k: usize) -> ComplexMatrix {
    ComplexMatrix::from_fn(n, n, |i, j| {
        if i == (j + k) % n {
            C64::new(1.0, 0.0)
        } else {
            C64::new(0.0, 0.0)
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measurement::{evolution_operator, extract_calibration_basis, premeasure};
    use crate::tensor::operator_distance;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn spin_operators_satisfy_su2_relations() {
        let spin = spin_half();
        // [Sx, Sy] = i Sz and cyclic.
        let comm_xy = spin.sx.commutator(&spin.sy);
        assert!((&comm_xy - &spin.sz.scale(c(0.0, 1.0))).frobenius_norm() < 1e-15);
        let comm_yz = spin.sy.commutator(&spin.sz);
        assert!((&comm_yz - &spin.sx.scale(c(0.0, 1.0))).frobenius_norm() < 1e-15);
        // Casimir: Sx^2 + Sy^2 + Sz^2 = (3/4) I.
        let casimir = &(&(&spin.sx * &spin.sx) + &(&spin.sy * &spin.sy)) + &(&spin.sz * &spin.sz);
        assert!(
            (&casimir - &ComplexMatrix::identity(2).scale(c(0.75, 0.0))).frobenius_norm() < 1e-15
        );
    }

    #[test]
    fn spin_states_are_the_advertised_eigenvectors() {
        let spin = spin_half();
        assert!(
            spin.sz
                .mul_vec(&spin.plus_z)
                .distance(&spin.plus_z.scale(c(0.5, 0.0)))
                < 1e-15
        );
        assert!(
            spin.sz
                .mul_vec(&spin.minus_z)
                .distance(&spin.minus_z.scale(c(-0.5, 0.0)))
                < 1e-15
        );
        assert!(
            spin.sx
                .mul_vec(&spin.plus_x)
                .distance(&spin.plus_x.scale(c(0.5, 0.0)))
                < 1e-15
        );
        assert!(
            spin.sx
                .mul_vec(&spin.minus_x)
                .distance(&spin.minus_x.scale(c(-0.5, 0.0)))
                < 1e-15
        );
    }

    #[test]
    fn bit_by_bit_evolution_is_the_controlled_flip() {
        let model = bit_by_bit_model();
        let u = evolution_operator(&model).unwrap();
        let expected = ComplexMatrix::new(
            4,
            4,
            vec![
                c(1.0, 0.0),
                c(0.0, 0.0),
                c(0.0, 0.0),
                c(0.0, 0.0),
                c(0.0, 0.0),
                c(1.0, 0.0),
                c(0.0, 0.0),
                c(0.0, 0.0),
                c(0.0, 0.0),
                c(0.0, 0.0),
                c(0.0, 0.0),
                c(1.0, 0.0),
                c(0.0, 0.0),
                c(0.0, 0.0),
                c(1.0, 0.0),
                c(0.0, 0.0),
            ],
        )
        .unwrap();
        assert!(operator_distance(&u, &expected).unwrap() < 1e-12);
    }

    #[test]
    fn bit_by_bit_calibration_maps_z_basis_to_pointer_z_basis() {
        let model = bit_by_bit_model();
        let table = extract_calibration_basis(&model, crate::CALIBRATION_TOL, 3).unwrap();
        assert!(table.residual < 1e-12);
        assert!((table.pointer_values[0] - 0.5).abs() < 1e-12);
        assert!((table.pointer_values[1] + 0.5).abs() < 1e-12);
        assert!(
            table
                .pointer_states
                .column(0)
                .distance(&StateVector::basis(2, 0))
                < 1e-10
        );
        assert!(
            table
                .pointer_states
                .column(1)
                .distance(&StateVector::basis(2, 1))
                < 1e-10
        );
    }

    #[test]
    fn stern_gerlach_shifts_the_lattice_by_the_spin_direction() {
        let model = stern_gerlach_model(5, 1).unwrap();
        let u = evolution_operator(&model).unwrap();
        let spin = spin_half();
        // Up kicks the start site (index 2, label 0) to index 3 (label +1).
        let up_in = spin.plus_z.kron(&StateVector::basis(5, 2));
        let up_out = spin.plus_z.kron(&StateVector::basis(5, 3));
        assert!(u.mul_vec(&up_in).distance(&up_out) < 1e-10);
        // Down kicks it to index 1 (label -1).
        let down_in = spin.minus_z.kron(&StateVector::basis(5, 2));
        let down_out = spin.minus_z.kron(&StateVector::basis(5, 1));
        assert!(u.mul_vec(&down_in).distance(&down_out) < 1e-10);
    }

    #[test]
    fn stern_gerlach_interaction_is_hermitian_and_regenerates_the_shift() {
        let model = stern_gerlach_model(7, 2).unwrap();
        assert!(model.interaction.is_hermitian(1e-12));
        let u = evolution_operator(&model).unwrap();
        let spin = spin_half();
        let up_in = spin.plus_z.kron(&StateVector::basis(7, 3));
        let up_out = spin.plus_z.kron(&StateVector::basis(7, 5));
        assert!(u.mul_vec(&up_in).distance(&up_out) < 1e-9);
    }

    #[test]
    fn stern_gerlach_premeasure_of_a_superposition() {
        let model = stern_gerlach_model(5, 1).unwrap();
        let spin = spin_half();
        let post = premeasure(&model, &spin.plus_x).unwrap();
        let s = 1.0 / 2.0f64.sqrt();
        // (|up, +1> + |down, -1>) / sqrt(2): indices 3 and 5 + 1 = 6.
        let mut expected = vec![c(0.0, 0.0); 10];
        expected[3] = c(s, 0.0);
        expected[6] = c(s, 0.0);
        let expected = StateVector::new(expected).unwrap();
        assert!(post.amplitudes().distance(&expected) < 1e-10);
    }

    #[test]
    fn stern_gerlach_rejects_bad_lattices() {
        assert!(matches!(
            stern_gerlach_model(4, 1),
            Err(Error::InvalidLattice(_))
        ));
        assert!(matches!(
            stern_gerlach_model(1, 1),
            Err(Error::InvalidLattice(_))
        ));
        assert!(matches!(
            stern_gerlach_model(5, 0),
            Err(Error::InvalidLattice(_))
        ));
        assert!(matches!(
            stern_gerlach_model(5, 3),
            Err(Error::InvalidLattice(_))
        ));
    }

    #[test]
    fn lattice_shift_wraps_cyclically() {
        let t = shift_operator(3, 1);
        assert_eq!(t[(1, 0)], c(1.0, 0.0));
        assert_eq!(t[(2, 1)], c(1.0, 0.0));
        assert_eq!(t[(0, 2)], c(1.0, 0.0));
        assert!(t.unitarity_deviation() < 1e-15);
    }
}
