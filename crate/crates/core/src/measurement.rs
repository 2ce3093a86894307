//! States, measurements, and the outcome-probability engine.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{
    complete_to_unitary, fix_phase, hermitian_eig, psd_sqrt, vector_norm, ComplexMatrix,
    HermitianOperator, SpectralDecomposition, C64, PSD_CLAMP,
};

/// Completeness, orthogonality, and the `‖M_i‖ ≤ 1` bound are checked to this.
pub const MEASUREMENT_TOLERANCE: f64 = 1e-10;
/// `‖ψ‖ = 1` and `tr ρ = 1` are checked to this.
pub const NORMALIZATION_TOLERANCE: f64 = 1e-10;
/// Density-matrix eigenvalues at or below this are outside the support.
pub const SUPPORT_CUTOFF: f64 = 1e-12;
/// Probabilities in `[−PROBABILITY_CLAMP, 0)` are set to zero.
pub const PROBABILITY_CLAMP: f64 = 1e-12;
/// Larger deviations of `Σ p_i` from one are an error rather than renormalized.
pub const PROBABILITY_SUM_TOLERANCE: f64 = 1e-9;
/// An element whose second eigenvalue is at most this counts as rank one.
pub const RANK_ONE_TOLERANCE: f64 = 1e-10;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MeasurementKind {
    Povm,
    Pvm,
}

impl fmt::Display for MeasurementKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            MeasurementKind::Povm => "POVM",
            MeasurementKind::Pvm => "PVM",
        })
    }
}

/// A validated resolution of the identity: PSD elements, no eigenvalue
/// above one, summing to `I`; mutually orthogonal projectors when `kind` is
/// [`MeasurementKind::Pvm`].
#[derive(Clone, Debug, PartialEq)]
pub struct Measurement {
    elements: Vec<HermitianOperator>,
    kind: MeasurementKind,
    labels: Vec<String>,
}

impl Measurement {
    pub fn elements(&self) -> &[HermitianOperator] {
        &self.elements
    }

    pub fn kind(&self) -> MeasurementKind {
        self.kind
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn dim(&self) -> usize {
        self.elements[0].dim()
    }

    pub fn outcome_count(&self) -> usize {
        self.elements.len()
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Self> {
        if labels.len() != self.elements.len() {
            return Err(Error::LabelCount {
                expected: self.elements.len(),
                found: labels.len(),
            });
        }
        self.labels = labels;
        Ok(self)
    }

    /// `M_i^{1/2}` for every element.
    pub fn square_roots(&self) -> Result<Vec<HermitianOperator>> {
        self.elements.iter().map(psd_sqrt).collect()
    }

    /// Whether every pair satisfies `P_i P_k = δ_ik P_i` within tolerance,
    /// regardless of the declared kind.
    pub fn is_projective(&self) -> bool {
        orthogonality_violation(&self.elements).is_none()
    }

    /// Projective measurement in the given orthonormal basis, one outcome per
    /// vector.
    pub fn from_basis(vectors: &[Vec<C64>]) -> Result<Self> {
        let elements = vectors
            .iter()
            .map(|v| HermitianOperator::rank_one(1.0, v))
            .collect();
        validate_measurement(elements, MeasurementKind::Pvm)
    }

    pub fn computational_basis(dim: usize) -> Self {
        let vectors: Vec<Vec<C64>> = (0..dim).map(|k| basis_vector(dim, k)).collect();
        Self::from_basis(&vectors).expect("standard basis is orthonormal")
    }
}

pub(crate) fn basis_vector(dim: usize, k: usize) -> Vec<C64> {
    let mut v = vec![C64::default(); dim];
    v[k] = C64::new(1.0, 0.0);
    v
}

fn default_labels(n: usize) -> Vec<String> {
    (0..n).map(|i| i.to_string()).collect()
}

fn orthogonality_violation(elements: &[HermitianOperator]) -> Option<(usize, usize, f64)> {
    for (i, a) in elements.iter().enumerate() {
        for (k, b) in elements.iter().enumerate().skip(i) {
            let prod = a.matrix().matmul(b.matrix()).expect("same dimension");
            let deviation = if i == k {
                prod.max_abs_diff(a.matrix())
            } else {
                prod.max_abs()
            };
            if deviation > MEASUREMENT_TOLERANCE {
                return Some((i, k, deviation));
            }
        }
    }
    None
}

/// Checks the POVM (and, for `kind = Pvm`, projector) conditions and wraps
/// the elements. Failures name the offending index and deviation.
pub fn validate_measurement(
    elements: Vec<HermitianOperator>,
    kind: MeasurementKind,
) -> Result<Measurement> {
    let first = elements.first().ok_or(Error::EmptyMeasurement)?;
    let dim = first.dim();
    if let Some(bad) = elements.iter().find(|e| e.dim() != dim) {
        return Err(Error::DimensionMismatch {
            expected: dim,
            found: bad.dim(),
        });
    }

    let mut sum = ComplexMatrix::zeros(dim, dim);
    for (index, element) in elements.iter().enumerate() {
        let spec = hermitian_eig(element);
        if spec.min_eigenvalue() < -PSD_CLAMP {
            return Err(Error::NotPsd {
                index: Some(index),
                min_eigenvalue: spec.min_eigenvalue(),
            });
        }
        if spec.max_eigenvalue() > 1.0 + MEASUREMENT_TOLERANCE {
            return Err(Error::EigenvalueAboveOne {
                index,
                max_eigenvalue: spec.max_eigenvalue(),
            });
        }
        sum = sum.add(element.matrix())?;
    }
    let deviation = sum.max_abs_diff(&ComplexMatrix::identity(dim));
    if deviation > MEASUREMENT_TOLERANCE {
        return Err(Error::Completeness { deviation });
    }
    if kind == MeasurementKind::Pvm {
        if let Some((first, second, deviation)) = orthogonality_violation(&elements) {
            return Err(Error::NotOrthogonal {
                first,
                second,
                deviation,
            });
        }
    }
    let labels = default_labels(elements.len());
    Ok(Measurement {
        elements,
        kind,
        labels,
    })
}

/// A unit vector.
#[derive(Clone, Debug, PartialEq)]
pub struct PureState {
    amplitudes: Vec<C64>,
}

impl PureState {
    pub fn new(amplitudes: Vec<C64>) -> Result<Self> {
        if amplitudes.is_empty() {
            return Err(Error::Shape("state vector is empty".into()));
        }
        if amplitudes
            .iter()
            .any(|z| !z.re.is_finite() || !z.im.is_finite())
        {
            return Err(Error::NonFinite("state amplitude".into()));
        }
        let norm = vector_norm(&amplitudes);
        if (norm - 1.0).abs() > NORMALIZATION_TOLERANCE {
            return Err(Error::NotNormalized { norm });
        }
        Ok(Self { amplitudes })
    }

    /// Scales a nonzero vector to unit norm.
    pub fn normalized(mut amplitudes: Vec<C64>) -> Result<Self> {
        let norm = vector_norm(&amplitudes);
        if norm == 0.0 || !norm.is_finite() {
            return Err(Error::NotNormalized { norm });
        }
        for z in amplitudes.iter_mut() {
            *z /= norm;
        }
        Self::new(amplitudes)
    }

    pub fn from_real(amplitudes: &[f64]) -> Result<Self> {
        Self::new(amplitudes.iter().map(|&x| C64::new(x, 0.0)).collect())
    }

    pub fn basis(dim: usize, k: usize) -> Self {
        Self {
            amplitudes: basis_vector(dim, k),
        }
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amplitudes
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }
}

/// Unit-trace PSD operator with its cached spectral decomposition.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix {
    operator: HermitianOperator,
    spectrum: SpectralDecomposition,
}

impl DensityMatrix {
    pub fn new(operator: HermitianOperator) -> Result<Self> {
        let spectrum = hermitian_eig(&operator);
        Self::checked(operator, spectrum)
    }

    pub fn from_matrix(matrix: ComplexMatrix) -> Result<Self> {
        Self::new(HermitianOperator::new(matrix)?)
    }

    /// `Σ λ_k v_k v_k†` from a caller-supplied orthonormal eigenbasis. The
    /// given basis is kept as the cached spectrum.
    pub fn from_spectrum(spectrum: SpectralDecomposition) -> Result<Self> {
        let v = spectrum.vectors_matrix();
        let deviation = v
            .adjoint()
            .matmul(&v)?
            .max_abs_diff(&ComplexMatrix::identity(spectrum.dim()));
        if deviation > 1e-10 {
            return Err(Error::NotIsometry { deviation });
        }
        let operator = spectrum.reconstruct();
        Self::checked(operator, spectrum)
    }

    fn checked(operator: HermitianOperator, spectrum: SpectralDecomposition) -> Result<Self> {
        let trace = operator.matrix().trace().re;
        if (trace - 1.0).abs() > NORMALIZATION_TOLERANCE {
            return Err(Error::Trace { trace });
        }
        if spectrum.min_eigenvalue() < -PSD_CLAMP {
            return Err(Error::NotPsd {
                index: None,
                min_eigenvalue: spectrum.min_eigenvalue(),
            });
        }
        Ok(Self { operator, spectrum })
    }

    pub fn maximally_mixed(dim: usize) -> Self {
        Self::new(HermitianOperator::identity(dim).scale(1.0 / dim as f64)).expect("I/d is a state")
    }

    /// `w ρ₁ + (1 − w) ρ₂`
    pub fn mix(weight: f64, first: &Self, second: &Self) -> Result<Self> {
        if !(0.0..=1.0).contains(&weight) {
            return Err(Error::InvalidParameter(format!(
                "mixing weight {weight} outside [0, 1]"
            )));
        }
        let op = first
            .operator
            .scale(weight)
            .add(&second.operator.scale(1.0 - weight))?;
        Self::new(op)
    }

    pub fn operator(&self) -> &HermitianOperator {
        &self.operator
    }

    pub fn spectrum(&self) -> &SpectralDecomposition {
        &self.spectrum
    }

    pub fn dim(&self) -> usize {
        self.operator.dim()
    }

    /// Eigenpairs with `λ > 1e-12`, in spectrum order.
    pub fn support(&self) -> impl Iterator<Item = (f64, &[C64])> {
        self.spectrum
            .eigenvalues
            .iter()
            .zip(&self.spectrum.eigenvectors)
            .filter(|(&l, _)| l > SUPPORT_CUTOFF)
            .map(|(&l, v)| (l, v.as_slice()))
    }

    /// Whether two support eigenvalues lie closer than `gap`, which makes the
    /// eigenbasis (and anything maximized over it) basis-dependent.
    pub fn has_degenerate_support(&self, gap: f64) -> bool {
        let support: Vec<f64> = self.support().map(|(l, _)| l).collect();
        support.windows(2).any(|w| (w[0] - w[1]).abs() < gap)
    }
}

/// `ρ = ψψ†` with spectrum `{(1, ψ)}` followed by an orthonormal complement
/// carrying eigenvalue zero.
pub fn pure_to_density(psi: &PureState) -> DensityMatrix {
    let d = psi.dim();
    let mut lead = psi.amplitudes.clone();
    fix_phase(&mut lead);
    let w = ComplexMatrix::from_columns(std::slice::from_ref(&lead)).expect("single column");
    let u = complete_to_unitary(&w).expect("unit vector is an isometry");
    let mut eigenvalues = vec![0.0; d];
    eigenvalues[0] = 1.0;
    let eigenvectors = (0..d).map(|k| u.column(k)).collect();
    let spectrum = SpectralDecomposition {
        eigenvalues,
        eigenvectors,
    };
    let operator = HermitianOperator::rank_one(1.0, &psi.amplitudes);
    DensityMatrix { operator, spectrum }
}

/// Outcome probabilities after clamping roundoff negatives and renormalizing
/// sub-`1e-9` drift.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(transparent)]
pub struct OutcomeDistribution {
    probabilities: Vec<f64>,
}

impl OutcomeDistribution {
    pub fn new(mut probabilities: Vec<f64>) -> Result<Self> {
        for (index, p) in probabilities.iter_mut().enumerate() {
            if !p.is_finite() {
                return Err(Error::NonFinite(format!("probability {index}")));
            }
            if *p < -PROBABILITY_CLAMP {
                return Err(Error::NegativeProbability { index, value: *p });
            }
            if *p < 0.0 {
                *p = 0.0;
            }
        }
        let sum: f64 = probabilities.iter().sum();
        if (sum - 1.0).abs() > PROBABILITY_SUM_TOLERANCE {
            return Err(Error::ProbabilitySum { sum });
        }
        if sum != 1.0 {
            for p in probabilities.iter_mut() {
                *p /= sum;
            }
        }
        Ok(Self { probabilities })
    }

    pub fn probabilities(&self) -> &[f64] {
        &self.probabilities
    }

    pub fn len(&self) -> usize {
        self.probabilities.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probabilities.is_empty()
    }

    pub fn max(&self) -> f64 {
        self.probabilities.iter().copied().fold(0.0, f64::max)
    }
}

impl AsRef<[f64]> for OutcomeDistribution {
    fn as_ref(&self) -> &[f64] {
        &self.probabilities
    }
}

fn check_dims(m: &Measurement, dim: usize) -> Result<()> {
    if m.dim() != dim {
        return Err(Error::DimensionMismatch {
            expected: m.dim(),
            found: dim,
        });
    }
    Ok(())
}

/// `p_i = tr(M_i ρ)`
pub fn outcome_distribution(m: &Measurement, rho: &DensityMatrix) -> Result<OutcomeDistribution> {
    check_dims(m, rho.dim())?;
    let r = rho.operator().matrix();
    let d = rho.dim();
    let raw = m
        .elements()
        .iter()
        .map(|e| {
            let e = e.matrix();
            let mut t = 0.0;
            for a in 0..d {
                for b in 0..d {
                    t += (e[(a, b)] * r[(b, a)]).re;
                }
            }
            t
        })
        .collect();
    OutcomeDistribution::new(raw)
}

/// `p_i = ⟨ψ, M_i ψ⟩`
pub fn outcome_distribution_pure(m: &Measurement, psi: &PureState) -> Result<OutcomeDistribution> {
    check_dims(m, psi.dim())?;
    let raw = m
        .elements()
        .iter()
        .map(|e| e.expectation(psi.amplitudes()))
        .collect::<Result<Vec<_>>>()?;
    OutcomeDistribution::new(raw)
}

/// `M_i = μ_i m_i m_i†` with `‖m_i‖ = 1`.
#[derive(Clone, Debug, PartialEq)]
pub struct RankOneTerm {
    pub weight: f64,
    pub vector: Vec<C64>,
}

/// The first element whose second eigenvalue is not negligible.
#[derive(Clone, Debug, PartialEq)]
pub struct NotRankOne {
    pub index: usize,
    pub second_eigenvalue: f64,
}

impl fmt::Display for NotRankOne {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "element {} is not rank one (second eigenvalue {:e})",
            self.index, self.second_eigenvalue
        )
    }
}

/// Splits every element into weight and unit vector, or reports the first
/// element that is not rank one.
pub fn rank_one_decomposition(
    m: &Measurement,
) -> std::result::Result<Vec<RankOneTerm>, NotRankOne> {
    m.elements()
        .iter()
        .enumerate()
        .map(|(index, e)| {
            let spec = hermitian_eig(e);
            let second = spec.eigenvalues.get(1).copied().unwrap_or(0.0);
            if second > RANK_ONE_TOLERANCE {
                return Err(NotRankOne {
                    index,
                    second_eigenvalue: second,
                });
            }
            Ok(RankOneTerm {
                weight: spec.eigenvalues[0].max(0.0),
                vector: spec.eigenvectors[0].clone(),
            })
        })
        .collect()
}
