//! End-to-end acceptance checks, one test per criterion. Each prints a
//! single PASS line (visible with `--nocapture`); a failed assertion marks
//! the criterion failed.

mod common;

use std::f64::consts::FRAC_1_SQRT_2;
use std::time::{Duration, Instant};

use biortho::{
    alternative_decomposition, ambiguity_report, bit_by_bit_model, counterfactual_apparatus,
    extract_calibration_basis, hermitian_eig, premeasure, schmidt_decompose, spin_half,
    stern_gerlach_model, uniqueness_condition, unitary_exp, AnalysisOptions, BasisChange,
    BipartiteState, ComplexMatrix, MeasurementModel, StateVector, Verdict, C64,
};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

#[test]
fn bit_by_bit_premeasurement_is_exact_and_fast() {
    let model = bit_by_bit_model();
    let s = FRAC_1_SQRT_2;
    let sys = StateVector::from_real(&[s, s]).unwrap();
    // Warm caches so the timed call measures the operation, not first-touch
    // costs.
    premeasure(&model, &sys).unwrap();
    let start = Instant::now();
    let post = premeasure(&model, &sys).unwrap();
    let elapsed = start.elapsed();

    let expected = StateVector::from_real(&[s, 0.0, 0.0, s]).unwrap();
    let err = post.amplitudes().distance(&expected);
    assert!(err < 1e-12, "premeasured state off by {err:.3e}");
    assert!(
        elapsed < Duration::from_millis(1),
        "premeasure took {elapsed:?}"
    );
    println!(
        "PASS bit-by-bit premeasurement: superposition correlates within 1e-12 in {elapsed:?}"
    );
}

#[test]
fn stern_gerlach_premeasurement_and_calibration() {
    let model = stern_gerlach_model(5, 1).unwrap();
    let s = FRAC_1_SQRT_2;
    let sys = StateVector::from_real(&[s, s]).unwrap();
    let post = premeasure(&model, &sys).unwrap();

    // Up pairs with lattice label +1 (site 3), down with -1 (site 1).
    let mut expected = vec![C64::new(0.0, 0.0); 10];
    expected[3] = C64::new(s, 0.0);
    expected[6] = C64::new(s, 0.0);
    let err = post
        .amplitudes()
        .distance(&StateVector::new(expected).unwrap());
    assert!(err < 1e-12, "premeasured state off by {err:.3e}");

    let table = extract_calibration_basis(&model, 1e-10, 42).unwrap();
    assert!(
        table.residual < 1e-10,
        "calibration residual {:.3e}",
        table.residual
    );
    let up = StateVector::basis(2, 0);
    let down = StateVector::basis(2, 1);
    assert!((table.system_basis.column(0).inner(&up).norm() - 1.0).abs() < 1e-10);
    assert!((table.system_basis.column(1).inner(&down).norm() - 1.0).abs() < 1e-10);
    assert!(
        table
            .pointer_states
            .column(0)
            .distance(&StateVector::basis(5, 3))
            < 1e-10
    );
    assert!(
        table
            .pointer_states
            .column(1)
            .distance(&StateVector::basis(5, 1))
            < 1e-10
    );
    assert!((table.pointer_values[0] - 1.0).abs() < 1e-10);
    assert!((table.pointer_values[1] + 1.0).abs() < 1e-10);
    assert!(table.sharp.iter().all(|&b| b));
    println!(
        "PASS Stern-Gerlach: premeasurement within 1e-12, calibration to p(+1)/p(-1) with residual {:.3e}",
        table.residual
    );
}

#[test]
fn equal_modulus_coefficients_admit_every_unitary_mixing() {
    let mut rng = common::rng(0xC0FFEE);
    for case in 0..200usize {
        let n = 2 + case % 5;
        let coefficients = vec![1.0 / (n as f64).sqrt(); n];
        let mixing = common::random_unitary(&mut rng, n);

        let check = uniqueness_condition(&coefficients, &mixing).unwrap();
        assert!(
            check.holds && check.residual < 1e-10,
            "case {case}: residual {:.3e}",
            check.residual
        );

        // A state with exactly these coefficients over random bases.
        let left = common::random_unitary(&mut rng, n);
        let right = common::random_unitary(&mut rng, n);
        let mut amps = vec![C64::new(0.0, 0.0); n * n];
        for k in 0..n {
            for i in 0..n {
                for j in 0..n {
                    amps[i * n + j] += coefficients[k] * left[(i, k)] * right[(j, k)];
                }
            }
        }
        let state = BipartiteState::new(n, n, StateVector::new(amps).unwrap()).unwrap();
        let sd = schmidt_decompose(&state, 1e-12, 1e-9).unwrap();
        assert_eq!(sd.degeneracy_classes.len(), 1, "case {case}");
        assert_eq!(sd.degeneracy_classes[0].len(), n, "case {case}");

        let alt = alternative_decomposition(
            &sd,
            &BasisChange {
                class_index: 0,
                matrix: mixing,
            },
        )
        .unwrap();
        let err = alt.reconstruct().amplitudes().distance(state.amplitudes());
        assert!(err < 1e-10, "case {case}: reconstruction off by {err:.3e}");
    }
    println!("PASS equal-modulus mixing: 200 seeded cases hold and reconstruct within 1e-10");
}

#[test]
fn gapped_coefficients_reject_genuine_mixing() {
    let mut rng = common::rng(0xBADC0DE);
    for case in 0..200usize {
        let n = 2 + case % 5;
        let coefficients = gapped_coefficients(&mut rng, n);
        let mixing = spread_unitary(&mut rng, n);
        let check = uniqueness_condition(&coefficients, &mixing).unwrap();
        assert!(
            !check.holds,
            "case {case}: mixing unexpectedly preserved the form"
        );
        assert!(
            check.residual > 1e-4,
            "case {case}: residual {:.3e} too small",
            check.residual
        );
    }
    println!("PASS gapped-coefficient mixing: 200 seeded cases fail with residual > 1e-4");
}

/// Normalized descending coefficients with adjacent gaps above 0.05.
fn gapped_coefficients(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    loop {
        let mut c: Vec<f64> = (0..n).map(|_| rng.random::<f64>() + 1e-3).collect();
        c.sort_by(|a, b| b.partial_cmp(a).unwrap());
        let norm = c.iter().map(|x| x * x).sum::<f64>().sqrt();
        for x in &mut c {
            *x /= norm;
        }
        if c.windows(2).all(|w| w[0] - w[1] > 0.05) {
            return c;
        }
    }
}

/// Random unitary with at least 5% of every row's mass off the dominant
/// entry, so it genuinely mixes distinct coefficients.
fn spread_unitary(rng: &mut ChaCha8Rng, n: usize) -> ComplexMatrix {
    loop {
        let m = common::random_unitary(rng, n);
        let mixes = (0..n).all(|i| {
            let dominant = (0..n).map(|j| m[(i, j)].norm_sqr()).fold(0.0, f64::max);
            1.0 - dominant >= 0.05
        });
        if mixes {
            return m;
        }
    }
}

#[test]
fn dynamics_selects_exactly_one_decomposition_the_z_basis() {
    let s = FRAC_1_SQRT_2;
    let hadamard = ComplexMatrix::new(
        2,
        2,
        vec![
            C64::new(s, 0.0),
            C64::new(s, 0.0),
            C64::new(s, 0.0),
            C64::new(-s, 0.0),
        ],
    )
    .unwrap();
    let complex_mix = ComplexMatrix::new(
        2,
        2,
        vec![
            C64::new(s, 0.0),
            C64::new(0.0, s),
            C64::new(0.0, s),
            C64::new(s, 0.0),
        ],
    )
    .unwrap();
    let models: Vec<MeasurementModel> =
        vec![bit_by_bit_model(), stern_gerlach_model(5, 1).unwrap()];
    for model in &models {
        let sys = StateVector::from_real(&[s, s]).unwrap();
        let changes = vec![
            BasisChange {
                class_index: 0,
                matrix: hadamard.clone(),
            },
            BasisChange {
                class_index: 0,
                matrix: complex_mix.clone(),
            },
        ];
        let report = ambiguity_report(model, &sys, &changes, &AnalysisOptions::default()).unwrap();
        assert_eq!(report.verdict, Verdict::Ambiguous, "{}", model.label);
        assert_eq!(report.candidates.len(), 3, "{}", model.label);
        let matching: Vec<usize> = report
            .candidates
            .iter()
            .enumerate()
            .filter(|(_, c)| c.matches_calibration)
            .map(|(i, _)| i)
            .collect();
        assert_eq!(matching, vec![0], "{}: matches {matching:?}", model.label);
        assert!(report.candidates[0].match_score > 2.0 - 1e-8);
        assert_eq!(report.selected, Some(0), "{}", model.label);
        // The matching left basis is the computational z basis up to phase
        // and ordering.
        let left = &report.candidates[0].decomposition.left_basis;
        for k in 0..left.cols() {
            let col = left.column(k);
            let overlap = StateVector::basis(2, col.dominant_index())
                .inner(&col)
                .norm();
            assert!(
                (overlap - 1.0).abs() < 1e-8,
                "{}: column {k} is not a z-basis vector",
                model.label
            );
        }
    }
    println!(
        "PASS dynamical selection: exactly one matching decomposition on both models, always the z basis"
    );
}

#[test]
fn counterfactual_apparatus_calibrates_transverse_pointer_states() {
    let model = bit_by_bit_model();
    let spin = spin_half();
    let targets = vec![spin.plus_x.clone(), spin.minus_x.clone()];
    let (counter, distance) =
        counterfactual_apparatus(&model, &targets, &AnalysisOptions::default()).unwrap();
    assert!(distance > 0.5, "distance {distance:.3}");

    let table = extract_calibration_basis(&counter, 1e-10, 42).unwrap();
    assert!(
        table.residual < 1e-10,
        "counterfactual residual {:.3e}",
        table.residual
    );
    // System basis stays the z pair; pointer states become the x pair.
    assert!(
        (table
            .system_basis
            .column(0)
            .inner(&StateVector::basis(2, 0))
            .norm()
            - 1.0)
            .abs()
            < 1e-10
    );
    assert!(
        (table
            .system_basis
            .column(1)
            .inner(&StateVector::basis(2, 1))
            .norm()
            - 1.0)
            .abs()
            < 1e-10
    );
    assert!((table.pointer_states.column(0).inner(&spin.plus_x).norm() - 1.0).abs() < 1e-10);
    assert!((table.pointer_states.column(1).inner(&spin.minus_x).norm() - 1.0).abs() < 1e-10);
    assert!((table.pointer_values[0] - 0.5).abs() < 1e-10);
    assert!((table.pointer_values[1] + 0.5).abs() < 1e-10);
    println!(
        "PASS counterfactual apparatus: distance {distance:.3} > 0.5, x-pair calibration residual {:.3e}",
        table.residual
    );
}

#[test]
fn lattice_superpositions_are_not_physical_pointer_states() {
    let model = stern_gerlach_model(5, 1).unwrap();
    let p_plus = StateVector::basis(5, 3);
    let p_minus = StateVector::basis(5, 1);
    let s = FRAC_1_SQRT_2;
    let sum = (&p_plus + &p_minus).scale(C64::new(s, 0.0));
    let diff = (&p_plus - &p_minus).scale(C64::new(s, 0.0));

    let deviation = |v: &StateVector| {
        let zv = model.pointer_observable.mul_vec(v);
        let mean = v.inner(&zv).re;
        (&zv - &v.scale(C64::new(mean, 0.0))).norm()
    };
    for v in [&sum, &diff] {
        let d = deviation(v);
        assert!(d > 0.5, "superposition deviation {d:.3} not > 0.5");
    }
    for v in [&p_plus, &p_minus] {
        let d = deviation(v);
        assert!(d < 1e-12, "sharp state deviation {d:.3e}");
    }
    println!(
        "PASS readout sharpness: lattice-site superpositions deviate > 0.5, sites themselves < 1e-12"
    );
}

#[test]
fn spectral_routines_hold_tolerances_in_bulk() {
    let start = Instant::now();
    let mut rng = common::rng(0x5EED);
    for case in 0..100usize {
        let n = 2 + case % 15;
        let h = common::random_hermitian(&mut rng, n, 1.0);
        let eig = hermitian_eig(&h, 1e-10).unwrap();
        let recon = ComplexMatrix::from_fn(n, n, |i, j| {
            let mut acc = C64::new(0.0, 0.0);
            for k in 0..n {
                acc += eig.vectors[(i, k)] * eig.values[k] * eig.vectors[(j, k)].conj();
            }
            acc
        });
        let err = common::dist(&h, &recon);
        assert!(err < 1e-10, "case {case}: reconstruction off by {err:.3e}");
        assert!(eig.values.windows(2).all(|w| w[0] <= w[1]), "case {case}");

        let theta = 3.0 * (rng.random::<f64>() - 0.5);
        let u = unitary_exp(&h, theta).unwrap();
        let unit_dev = u.unitarity_deviation();
        assert!(unit_dev < 1e-10, "case {case}: unitarity {unit_dev:.3e}");

        let v = common::random_state(&mut rng, n);
        let p = v.outer(&v);
        let phi = 6.0 * (rng.random::<f64>() - 0.5);
        let up = unitary_exp(&p, phi).unwrap();
        let expected =
            &ComplexMatrix::identity(n) + &p.scale(C64::from_polar(1.0, phi) - C64::new(1.0, 0.0));
        let perr = common::dist(&up, &expected);
        assert!(perr < 1e-12, "case {case}: projector exp off by {perr:.3e}");
    }
    let elapsed = start.elapsed();
    assert!(
        elapsed < Duration::from_secs(10),
        "bulk spectral suite took {elapsed:?}"
    );
    println!("PASS spectral bulk: 100 seeded Hermitians within tolerance in {elapsed:?}");
}
