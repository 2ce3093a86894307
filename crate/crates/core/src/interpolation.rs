//! Numerical checks of the Riesz interpolation inequality
//! `S_a(Tx) ≤ η^{(2−b)/b} S_b(x)` for contractions `T`, where `η` is the
//! largest entry modulus of `T`, `1 < b < 2` and `1/a + 1/b = 1`.
//!
//! The overlap-matrix construction ties this to projective measurements:
//! with `u_i = P_iψ/‖P_iψ‖` and `v_j = Q_jψ/‖Q_jψ‖`, the matrix
//! `t_ij = ⟨u_i, v_j⟩` is a contraction carrying `x_j = ‖Q_jψ‖` to
//! `y_i = ‖P_iψ‖`, and its `η` is exactly `f(P,Q|ψ)`.

use serde::Serialize;

use crate::entropy::{conjugate_order, generalized_power_sum, power_sum, RenyiOrder};
use crate::error::{Error, Result};
use crate::linalg::{inner, operator_norm, vector_norm, ComplexMatrix, C64};
use crate::measurement::{Measurement, MeasurementKind, PureState};

/// A transform is certified as a contraction when `‖T‖ ≤ 1 + 1e-9`.
pub const CONTRACTION_TOLERANCE: f64 = 1e-9;
/// Riesz verdicts pass when `lhs ≤ rhs + 1e-9`.
pub const RIESZ_TOLERANCE: f64 = 1e-9;
/// Outcomes with probability at or below this get no normalized projection.
pub const PROJECTION_SUPPORT: f64 = 1e-18;

/// `y = T x`
pub fn apply_transform(t: &ComplexMatrix, x: &[C64]) -> Result<Vec<C64>> {
    t.mul_vec(x)
}

/// `η = max_ij |t_ij|`
pub fn eta(t: &ComplexMatrix) -> f64 {
    t.max_abs()
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct RieszVerdict {
    pub lhs: f64,
    pub rhs: f64,
    pub pass: bool,
}

impl RieszVerdict {
    fn new(lhs: f64, rhs: f64) -> Self {
        Self {
            lhs,
            rhs,
            pass: lhs <= rhs + RIESZ_TOLERANCE,
        }
    }

    pub fn slack(&self) -> f64 {
        self.rhs - self.lhs
    }
}

/// `S_a(Tx)` against `η^{(2−b)/b} S_b(x)` for a certified contraction.
pub fn riesz_check(t: &ComplexMatrix, x: &[C64], b: f64) -> Result<RieszVerdict> {
    if !(b > 1.0 && b < 2.0) {
        return Err(Error::InvalidParameter(format!(
            "Riesz exponent b must lie in (1, 2), got {b}"
        )));
    }
    let norm = operator_norm(t);
    if norm > 1.0 + CONTRACTION_TOLERANCE {
        return Err(Error::NotContraction { norm });
    }
    let a = b / (b - 1.0);
    let y = apply_transform(t, x)?;
    let lhs = power_sum(&y, a)?;
    let rhs = eta(t).powf((2.0 - b) / b) * power_sum(x, b)?;
    Ok(RieszVerdict::new(lhs, rhs))
}

/// Overlap data for two projective measurements on one state.
#[derive(Clone, Debug, PartialEq)]
pub struct OverlapInstance {
    /// `t_ij = ⟨u_i, v_j⟩` over supported outcomes only.
    pub transform: ComplexMatrix,
    /// `‖P_iψ‖` over supported `i`.
    pub y: Vec<f64>,
    /// `‖Q_jψ‖` over supported `j`.
    pub x: Vec<f64>,
    /// Outcome indices kept for `P` and `Q`.
    pub p_support: Vec<usize>,
    pub q_support: Vec<usize>,
}

impl OverlapInstance {
    pub fn p(&self) -> Vec<f64> {
        self.y.iter().map(|v| v * v).collect()
    }

    pub fn q(&self) -> Vec<f64> {
        self.x.iter().map(|v| v * v).collect()
    }
}

/// Unit vectors `P_iψ/‖P_iψ‖`, the norms `‖P_iψ‖`, and the outcome indices kept.
type Projections = (Vec<Vec<C64>>, Vec<f64>, Vec<usize>);

fn normalized_projections(m: &Measurement, psi: &PureState) -> Result<Projections> {
    if m.kind() != MeasurementKind::Pvm {
        return Err(Error::NotProjective);
    }
    let mut vecs = Vec::new();
    let mut norms = Vec::new();
    let mut support = Vec::new();
    for (i, p) in m.elements().iter().enumerate() {
        let image = p.matrix().mul_vec(psi.amplitudes())?;
        let norm = vector_norm(&image);
        if norm * norm <= PROJECTION_SUPPORT {
            continue;
        }
        vecs.push(image.into_iter().map(|z| z / norm).collect());
        norms.push(norm);
        support.push(i);
    }
    Ok((vecs, norms, support))
}

/// Builds `u_i`, `v_j`, and the overlap matrix `t_ij = ⟨u_i, v_j⟩`.
pub fn overlap_instance(
    p: &Measurement,
    q: &Measurement,
    psi: &PureState,
) -> Result<OverlapInstance> {
    for m in [p, q] {
        if m.dim() != psi.dim() {
            return Err(Error::DimensionMismatch {
                expected: m.dim(),
                found: psi.dim(),
            });
        }
    }
    let (u, y, p_support) = normalized_projections(p, psi)?;
    let (v, x, q_support) = normalized_projections(q, psi)?;
    let mut t = ComplexMatrix::zeros(u.len(), v.len());
    for (i, ui) in u.iter().enumerate() {
        for (j, vj) in v.iter().enumerate() {
            t[(i, j)] = inner(ui, vj);
        }
    }
    Ok(OverlapInstance {
        transform: t,
        y,
        x,
        p_support,
        q_support,
    })
}

/// `S_α(p) ≤ η^{2(1−β)/β} S_β(q)` for PVMs `P`, `Q`, with `1/2 < β < 1` and
/// `α` its conjugate; `p`, `q` and `η` come from [`overlap_instance`].
pub fn squared_riesz_check(
    p: &Measurement,
    q: &Measurement,
    psi: &PureState,
    beta: f64,
) -> Result<RieszVerdict> {
    if !(beta > 0.5 && beta < 1.0) {
        return Err(Error::InvalidOrder(format!(
            "β must lie in (1/2, 1), got {beta}"
        )));
    }
    let alpha = conjugate_order(RenyiOrder::new(beta)?)?.value();
    let inst = overlap_instance(p, q, psi)?;
    let lhs = generalized_power_sum(&inst.p(), alpha);
    let rhs = eta(&inst.transform).powf(2.0 * (1.0 - beta) / beta)
        * generalized_power_sum(&inst.q(), beta);
    Ok(RieszVerdict::new(lhs, rhs))
}

/// `(1 − α)β / (α(1 − β))`, which is `−1` whenever `1/α + 1/β = 2`.
pub fn exponent_multiplier(alpha: f64, beta: f64) -> f64 {
    (1.0 - alpha) * beta / (alpha * (1.0 - beta))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bounds::f_pure;
    use crate::discrimination as ex;
    use std::f64::consts::{FRAC_1_SQRT_2, PI, SQRT_2};

    fn reals(v: &[f64]) -> Vec<C64> {
        v.iter().map(|&x| C64::new(x, 0.0)).collect()
    }

    #[test]
    fn transform_examples() {
        let x = reals(&[0.3, -0.7]);
        assert_eq!(apply_transform(&ComplexMatrix::identity(2), &x).unwrap(), x);
        let t = ComplexMatrix::from_real_rows(&[&[FRAC_1_SQRT_2, FRAC_1_SQRT_2]]).unwrap();
        let y = apply_transform(&t, &reals(&[1.0, 1.0])).unwrap();
        assert!((y[0].re - SQRT_2).abs() < 1e-15);
        assert!(apply_transform(&t, &reals(&[1.0])).is_err());
    }

    #[test]
    fn overlap_transform_maps_norms() {
        let z = Measurement::computational_basis(2);
        let n = ex::helstrom_pvm();
        let psi = ex::psi2();
        let inst = overlap_instance(&z, &n, &psi).unwrap();
        let x: Vec<C64> = inst.x.iter().map(|&v| C64::new(v, 0.0)).collect();
        let y = apply_transform(&inst.transform, &x).unwrap();
        for (yi, expected) in y.iter().zip(&inst.y) {
            assert!((yi - C64::new(*expected, 0.0)).norm() < 1e-14);
        }
    }

    #[test]
    fn eta_examples() {
        assert_eq!(eta(&ComplexMatrix::identity(3)), 1.0);
        let t = ComplexMatrix::from_real_rows(&[&[FRAC_1_SQRT_2, FRAC_1_SQRT_2]]).unwrap();
        assert_eq!(eta(&t), FRAC_1_SQRT_2);
        // Helstrom basis against the computational basis
        let mut t = ComplexMatrix::zeros(2, 2);
        let (u, v) = (ex::helstrom_u(), ex::helstrom_v());
        for k in 0..2 {
            t[(k, 0)] = u[k];
            t[(k, 1)] = v[k];
        }
        assert!((eta(&t) - (PI / 8.0).cos()).abs() < 1e-15);
        assert!((eta(&t) - 0.92388).abs() < 1e-5);
    }

    #[test]
    fn riesz_examples() {
        let one = ComplexMatrix::identity(1);
        let v = riesz_check(&one, &reals(&[1.0]), 1.5).unwrap();
        assert!((v.lhs - 1.0).abs() < 1e-15 && (v.rhs - 1.0).abs() < 1e-15);

        let t = ComplexMatrix::from_real_rows(&[&[FRAC_1_SQRT_2, FRAC_1_SQRT_2]]).unwrap();
        let v = riesz_check(&t, &reals(&[1.0, 1.0]), 4.0 / 3.0).unwrap();
        assert!((v.lhs - SQRT_2).abs() < 1e-14);
        assert!((v.rhs - SQRT_2).abs() < 1e-14);
        assert!((v.lhs - v.rhs).abs() <= 1e-12);
        assert!(v.pass);
    }

    #[test]
    fn riesz_rejects_bad_inputs() {
        let one = ComplexMatrix::identity(1);
        assert!(riesz_check(&one, &reals(&[1.0]), 2.0).is_err());
        assert!(riesz_check(&one, &reals(&[1.0]), 1.0).is_err());
        let big = ComplexMatrix::from_real_rows(&[&[1.0, 1.0]]).unwrap();
        assert!(matches!(
            riesz_check(&big, &reals(&[1.0, 1.0]), 1.5),
            Err(Error::NotContraction { .. })
        ));
    }

    #[test]
    fn squared_riesz_examples() {
        let z = Measurement::computational_basis(2);
        let v = squared_riesz_check(&z, &z, &PureState::basis(2, 1), 0.75).unwrap();
        assert!((v.lhs - v.rhs).abs() < 1e-15);
        assert!(v.pass);

        let v = squared_riesz_check(&ex::helstrom_pvm(), &z, &ex::psi2(), 0.75).unwrap();
        assert!(v.pass, "{v:?}");
        assert!(squared_riesz_check(&z, &z, &ex::psi2(), 1.0).is_err());
        assert!(matches!(
            squared_riesz_check(&ex::unambiguous_povm(), &z, &ex::psi2(), 0.75),
            Err(Error::NotProjective)
        ));
    }

    #[test]
    fn multiplier_is_minus_one() {
        for alpha in [1.2, 1.5, 2.0, 5.0, 40.0] {
            let beta = alpha / (2.0 * alpha - 1.0);
            assert!((exponent_multiplier(alpha, beta) + 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn eta_matches_f_for_projective_pairs() {
        let z = Measurement::computational_basis(2);
        let n = ex::helstrom_pvm();
        for psi in [ex::psi1(), ex::psi2(), ex::phi3()] {
            let inst = overlap_instance(&n, &z, &psi).unwrap();
            let f = f_pure(&n, &z, &psi).unwrap().value;
            assert!((-2.0 * eta(&inst.transform).ln() + 2.0 * f.ln()).abs() < 1e-9);
        }
    }
}
