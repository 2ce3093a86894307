//! Random states and measurements.
//!
//! Every sampler validates what it builds through the ordinary constructors;
//! a draw that fails validation (an ill-conditioned `S`, say) is discarded
//! and redrawn from the same stream.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::rng::TrialRng;
use crate::error::{Error, Result};
use crate::linalg::{inner, psd_inverse_sqrt, ComplexMatrix, HermitianOperator, C64};
use crate::measurement::{
    validate_measurement, DensityMatrix, Measurement, MeasurementKind, PureState,
};

const MAX_REDRAWS: usize = 16;
/// Smallest eigenvalue accepted for `S = Σ A_i` before inverting its root.
const FRAME_FLOOR: f64 = 1e-8;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum EnsembleKind {
    PureHaar,
    Mixed,
    RankOnePovm,
    GeneralPovm,
    Pvm,
}

impl EnsembleKind {
    pub const ALL: [EnsembleKind; 5] = [
        EnsembleKind::PureHaar,
        EnsembleKind::Mixed,
        EnsembleKind::RankOnePovm,
        EnsembleKind::GeneralPovm,
        EnsembleKind::Pvm,
    ];

    pub fn is_state(self) -> bool {
        matches!(self, EnsembleKind::PureHaar | EnsembleKind::Mixed)
    }

    pub fn name(self) -> &'static str {
        match self {
            EnsembleKind::PureHaar => "pure-haar",
            EnsembleKind::Mixed => "mixed",
            EnsembleKind::RankOnePovm => "rank-one-povm",
            EnsembleKind::GeneralPovm => "general-povm",
            EnsembleKind::Pvm => "pvm",
        }
    }
}

impl fmt::Display for EnsembleKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for EnsembleKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| {
                Error::InvalidParameter(format!(
                    "unknown ensemble `{s}`; expected one of pure-haar, mixed, rank-one-povm, general-povm, pvm"
                ))
            })
    }
}

fn gaussian_matrix(rng: &mut TrialRng, rows: usize, cols: usize) -> ComplexMatrix {
    let data = (0..rows * cols).map(|_| rng.complex_gaussian()).collect();
    ComplexMatrix::from_row_major(rows, cols, data).expect("finite Gaussian entries")
}

fn redraw<T>(rng: &mut TrialRng, mut draw: impl FnMut(&mut TrialRng) -> Result<T>) -> Result<T> {
    let mut last = None;
    for _ in 0..MAX_REDRAWS {
        match draw(rng) {
            Ok(v) => return Ok(v),
            Err(e) => last = Some(e),
        }
    }
    Err(last.expect("at least one draw"))
}

/// Haar-random pure state: a normalized complex Gaussian vector.
pub fn haar_state(rng: &mut TrialRng, dim: usize) -> Result<PureState> {
    redraw(rng, |rng| {
        PureState::normalized(rng.complex_gaussian_vec(dim))
    })
}

/// `ρ = GG†/tr(GG†)` with `G` a square complex Gaussian matrix.
pub fn wishart_state(rng: &mut TrialRng, dim: usize) -> Result<DensityMatrix> {
    redraw(rng, |rng| {
        let g = gaussian_matrix(rng, dim, dim);
        let w = g.matmul(&g.adjoint())?;
        let tr = w.trace().re;
        DensityMatrix::from_matrix(w.scale(C64::new(1.0 / tr, 0.0)))
    })
}

fn frame_normalizer(a: &[HermitianOperator], dim: usize) -> Result<HermitianOperator> {
    let s = a
        .iter()
        .try_fold(HermitianOperator::zeros(dim), |acc, x| acc.add(x))?;
    psd_inverse_sqrt(&s, FRAME_FLOOR)
}

/// `S^{-1/2} A_i S^{-1/2}` with `A_i = G_i G_i†` and `S = Σ A_i`.
pub fn general_povm(rng: &mut TrialRng, dim: usize, outcomes: usize) -> Result<Measurement> {
    redraw(rng, |rng| {
        let a: Vec<HermitianOperator> = (0..outcomes)
            .map(|_| {
                let g = gaussian_matrix(rng, dim, dim);
                HermitianOperator::new(g.matmul(&g.adjoint())?)
            })
            .collect::<Result<_>>()?;
        let t = frame_normalizer(&a, dim)?;
        let elements = a
            .iter()
            .map(|x| x.conjugate_by(t.matrix()))
            .collect::<Result<_>>()?;
        validate_measurement(elements, MeasurementKind::Povm)
    })
}

/// The same normalization applied to rank-one `g_i g_i†`; each element is
/// stored as `w_i w_i†` with `w_i = S^{-1/2} g_i`, exactly rank one.
pub fn rank_one_povm(rng: &mut TrialRng, dim: usize, outcomes: usize) -> Result<Measurement> {
    if outcomes < dim {
        return Err(Error::InvalidParameter(format!(
            "a rank-one POVM on dimension {dim} needs at least {dim} outcomes, got {outcomes}"
        )));
    }
    redraw(rng, |rng| {
        let g: Vec<Vec<C64>> = (0..outcomes)
            .map(|_| rng.complex_gaussian_vec(dim))
            .collect();
        let a: Vec<HermitianOperator> = g
            .iter()
            .map(|v| HermitianOperator::rank_one(1.0, v))
            .collect();
        let t = frame_normalizer(&a, dim)?;
        let elements = g
            .iter()
            .map(|v| Ok(HermitianOperator::rank_one(1.0, &t.matrix().mul_vec(v)?)))
            .collect::<Result<_>>()?;
        validate_measurement(elements, MeasurementKind::Povm)
    })
}

/// Haar-random orthonormal basis from Gram–Schmidt on Gaussian vectors.
pub fn haar_basis(rng: &mut TrialRng, dim: usize) -> Vec<Vec<C64>> {
    loop {
        let mut basis: Vec<Vec<C64>> = Vec::with_capacity(dim);
        for _ in 0..dim {
            let mut v = rng.complex_gaussian_vec(dim);
            for _ in 0..2 {
                for b in &basis {
                    let c = inner(b, &v);
                    for (x, y) in v.iter_mut().zip(b) {
                        *x -= c * y;
                    }
                }
            }
            let norm = crate::linalg::vector_norm(&v);
            if norm < 1e-6 {
                break;
            }
            v.iter_mut().for_each(|x| *x /= norm);
            basis.push(v);
        }
        if basis.len() == dim {
            return basis;
        }
    }
}

/// Projective measurement from a Haar basis split into `outcomes` nonempty
/// groups: vector `k < outcomes` opens group `k`, the rest land uniformly.
pub fn random_pvm(rng: &mut TrialRng, dim: usize, outcomes: usize) -> Result<Measurement> {
    if outcomes == 0 || outcomes > dim {
        return Err(Error::InvalidParameter(format!(
            "a PVM on dimension {dim} has between 1 and {dim} outcomes, got {outcomes}"
        )));
    }
    redraw(rng, |rng| {
        let basis = haar_basis(rng, dim);
        let mut elements = vec![HermitianOperator::zeros(dim); outcomes];
        for (k, v) in basis.iter().enumerate() {
            let group = if k < outcomes {
                k
            } else {
                rng.range_inclusive(0, outcomes - 1)
            };
            elements[group] = elements[group].add(&HermitianOperator::rank_one(1.0, v))?;
        }
        validate_measurement(elements, MeasurementKind::Pvm)
    })
}

/// Draws a measurement of the given family. `outcomes` is clamped into the
/// family's admissible range (at least `dim` for rank-one, at most `dim` for
/// PVMs).
pub fn sample_measurement(
    rng: &mut TrialRng,
    kind: EnsembleKind,
    dim: usize,
    outcomes: usize,
) -> Result<Measurement> {
    match kind {
        EnsembleKind::GeneralPovm => general_povm(rng, dim, outcomes.max(1)),
        EnsembleKind::RankOnePovm => rank_one_povm(rng, dim, outcomes.max(dim)),
        EnsembleKind::Pvm => random_pvm(rng, dim, outcomes.clamp(1, dim)),
        k => Err(Error::InvalidParameter(format!(
            "`{k}` is a state ensemble"
        ))),
    }
}

pub fn sample_state(rng: &mut TrialRng, kind: EnsembleKind, dim: usize) -> Result<DensityMatrix> {
    match kind {
        EnsembleKind::PureHaar => Ok(crate::measurement::pure_to_density(&haar_state(rng, dim)?)),
        EnsembleKind::Mixed => wishart_state(rng, dim),
        k => Err(Error::InvalidParameter(format!(
            "`{k}` is a measurement ensemble"
        ))),
    }
}

/// A random contraction: a Gaussian matrix divided by its operator norm and
/// shrunk by a uniform factor in `(1/2, 1]`.
pub fn random_contraction(rng: &mut TrialRng, rows: usize, cols: usize) -> ComplexMatrix {
    let g = gaussian_matrix(rng, rows, cols);
    let norm = crate::linalg::operator_norm(&g);
    let shrink = rng.uniform_left_open(0.5, 1.0);
    g.scale(C64::new(shrink / norm, 0.0))
}
