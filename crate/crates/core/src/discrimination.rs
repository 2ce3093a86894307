//! Two-state discrimination example: `ψ₁ = e₀` versus `ψ₂ = (e₀ + e₁)/√2`.
//!
//! The minimum-error (Helstrom) measurement is a two-outcome PVM; the
//! error-free (unambiguous) measurement is a three-outcome rank-one POVM
//! whose third element is the inconclusive outcome.

use std::f64::consts::{FRAC_1_SQRT_2, PI, SQRT_2};

use crate::linalg::{ComplexMatrix, HermitianOperator, C64};
use crate::measurement::{validate_measurement, Measurement, MeasurementKind, PureState};

fn real(v: &[f64]) -> Vec<C64> {
    v.iter().map(|&x| C64::new(x, 0.0)).collect()
}

pub fn psi1() -> PureState {
    PureState::basis(2, 0)
}

pub fn psi2() -> PureState {
    PureState::from_real(&[FRAC_1_SQRT_2, FRAC_1_SQRT_2]).expect("unit vector")
}

/// `u = cos(π/8) e₀ − sin(π/8) e₁`
pub fn helstrom_u() -> Vec<C64> {
    let a = PI / 8.0;
    real(&[a.cos(), -a.sin()])
}

/// `v = sin(π/8) e₀ + cos(π/8) e₁`
pub fn helstrom_v() -> Vec<C64> {
    let a = PI / 8.0;
    real(&[a.sin(), a.cos()])
}

/// `{N₁, N₂} = {uu†, vv†}`
pub fn helstrom_pvm() -> Measurement {
    let elements = vec![
        HermitianOperator::rank_one(1.0, &helstrom_u()),
        HermitianOperator::rank_one(1.0, &helstrom_v()),
    ];
    validate_measurement(elements, MeasurementKind::Pvm)
        .and_then(|m| m.with_labels(vec!["N1".into(), "N2".into()]))
        .expect("Helstrom measurement is a PVM")
}

/// `{M₁, M₂, M₃}` with `M₁ = 2^{-1/2}(√2+1)^{-1} (e₀−e₁)(e₀−e₁)†`,
/// `M₂ = √2 (√2+1)^{-1} e₁e₁†` and `M₃ = I − M₁ − M₂`.
pub fn unambiguous_povm() -> Measurement {
    let root2p1 = SQRT_2 + 1.0;
    let m1 = HermitianOperator::rank_one(FRAC_1_SQRT_2 / root2p1, &real(&[1.0, -1.0]));
    let m2 = HermitianOperator::rank_one(SQRT_2 / root2p1, &real(&[0.0, 1.0]));
    let m3 = HermitianOperator::identity(2)
        .sub(&m1)
        .and_then(|r| r.sub(&m2))
        .expect("same dimension");
    validate_measurement(vec![m1, m2, m3], MeasurementKind::Povm)
        .and_then(|m| m.with_labels(vec!["M1".into(), "M2".into(), "M3".into()]))
        .expect("unambiguous discrimination measurement is a POVM")
}

/// Top eigenvector of `M₃`: `2^{-3/4} ((√2+1)^{1/2} e₀ + (√2−1)^{1/2} e₁)`.
pub fn phi3() -> PureState {
    let s = 2f64.powf(-0.75);
    PureState::from_real(&[s * (SQRT_2 + 1.0).sqrt(), s * (SQRT_2 - 1.0).sqrt()])
        .expect("unit vector")
}

/// Pauli matrices, used for the Robertson comparison.
pub fn pauli_x() -> HermitianOperator {
    HermitianOperator::new(ComplexMatrix::from_real_rows(&[&[0.0, 1.0], &[1.0, 0.0]]).unwrap())
        .unwrap()
}

pub fn pauli_y() -> HermitianOperator {
    let i = C64::new(0.0, 1.0);
    let z = C64::default();
    HermitianOperator::new(ComplexMatrix::from_rows(&[vec![z, -i], vec![i, z]]).unwrap()).unwrap()
}

pub fn pauli_z() -> HermitianOperator {
    HermitianOperator::new(ComplexMatrix::diagonal(&[1.0, -1.0])).unwrap()
}
