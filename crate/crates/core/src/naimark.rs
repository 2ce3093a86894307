//! Naimark extension of a POVM to a PVM on an enlarged space, and the
//! identities that make entropic bounds transfer across it.
//!
//! For a POVM `{E_i}` with `n` outcomes on `C^d`, the stacked roots
//! `W = [E_1^{1/2}; …; E_n^{1/2}]` form an isometry `C^d → C^{nd}` because
//! `W†W = Σ E_i = I`. Completing `W` to a unitary `U` and setting
//! `Ẽ_i = U† Π_i U`, with `Π_i` the projector onto the i-th block of `d`
//! coordinates, gives orthogonal projectors summing to the identity whose
//! top-left `d×d` corner is `W† Π_i W = E_i`. The original space sits in the
//! first `d` coordinates, so a state embeds by zero-padding.

use serde::Serialize;

use crate::bounds::f_pure;
use crate::error::{Error, Result};
use crate::linalg::{
    complete_to_unitary, hermitian_eig, inner, vector_norm, ComplexMatrix, HermitianOperator,
    SpectralDecomposition, C64,
};
use crate::measurement::{
    basis_vector, validate_measurement, DensityMatrix, Measurement, MeasurementKind, PureState,
};

/// Every dilation identity is checked to this.
pub const DILATION_TOLERANCE: f64 = 1e-9;
/// Projector eigenvalues within this of 0 or 1 are snapped before the
/// spectral projector check.
pub const SNAP_TOLERANCE: f64 = 1e-8;

#[derive(Clone, Debug)]
pub struct NaimarkDilation {
    original: Measurement,
    enlarged_dim: usize,
    projectors: Measurement,
    embedding_unitary: ComplexMatrix,
}

impl NaimarkDilation {
    pub fn original(&self) -> &Measurement {
        &self.original
    }

    pub fn enlarged_dim(&self) -> usize {
        self.enlarged_dim
    }

    pub fn original_dim(&self) -> usize {
        self.original.dim()
    }

    /// The dilated PVM `{Ẽ_i}`.
    pub fn projectors(&self) -> &Measurement {
        &self.projectors
    }

    /// The unitary `U` whose first `d` columns are the stacked-root isometry.
    pub fn embedding_unitary(&self) -> &ComplexMatrix {
        &self.embedding_unitary
    }

    fn check_dim(&self, dim: usize) -> Result<()> {
        if dim != self.original_dim() {
            return Err(Error::DimensionMismatch {
                expected: self.original_dim(),
                found: dim,
            });
        }
        Ok(())
    }
}

/// Builds the stacked-root dilation of `e` on `C^{n·d}`.
pub fn dilate(e: &Measurement) -> Result<NaimarkDilation> {
    let d = e.dim();
    let n = e.outcome_count();
    let big = n * d;
    let mut w = ComplexMatrix::zeros(big, d);
    for (i, root) in e.square_roots()?.iter().enumerate() {
        w.set_block(i * d, 0, root.matrix());
    }
    let u = complete_to_unitary(&w)?;

    let elements = (0..n)
        .map(|i| {
            // (U† Π_i U)_{ab} = Σ_{r ∈ block i} conj(U_{ra}) U_{rb}
            let mut m = ComplexMatrix::zeros(big, big);
            for r in i * d..(i + 1) * d {
                let row = u.row(r);
                for a in 0..big {
                    let ca = row[a].conj();
                    if ca == C64::default() {
                        continue;
                    }
                    for b in 0..big {
                        m[(a, b)] += ca * row[b];
                    }
                }
            }
            HermitianOperator::new(m)
        })
        .collect::<Result<Vec<_>>>()?;
    let projectors =
        validate_measurement(elements, MeasurementKind::Pvm)?.with_labels(e.labels().to_vec())?;

    Ok(NaimarkDilation {
        original: e.clone(),
        enlarged_dim: big,
        projectors,
        embedding_unitary: u,
    })
}

/// `ψ̃ = (ψ, 0)` in the enlarged space.
#[derive(Clone, Debug, PartialEq)]
pub struct EmbeddedState {
    amplitudes: Vec<C64>,
}

impl EmbeddedState {
    pub fn amplitudes(&self) -> &[C64] {
        &self.amplitudes
    }

    pub fn to_pure_state(&self) -> PureState {
        PureState::new(self.amplitudes.clone()).expect("embedding preserves the norm")
    }
}

fn pad(v: &[C64], len: usize) -> Vec<C64> {
    let mut out = v.to_vec();
    out.resize(len, C64::default());
    out
}

pub fn embed_state(psi: &PureState, dilation: &NaimarkDilation) -> Result<EmbeddedState> {
    dilation.check_dim(psi.dim())?;
    Ok(EmbeddedState {
        amplitudes: pad(psi.amplitudes(), dilation.enlarged_dim),
    })
}

/// `ρ̃ = Σ λ ψ̃_λ ψ̃_λ†`, keeping the embedded eigenvectors of `ρ` as the
/// spectrum of `ρ̃` and completing it with the new coordinates at eigenvalue
/// zero.
pub fn embed_density(rho: &DensityMatrix, dilation: &NaimarkDilation) -> Result<DensityMatrix> {
    dilation.check_dim(rho.dim())?;
    let big = dilation.enlarged_dim;
    let spec = rho.spectrum();
    let mut pairs: Vec<(f64, Vec<C64>)> = spec
        .eigenvalues
        .iter()
        .zip(&spec.eigenvectors)
        .map(|(&l, v)| (l, pad(v, big)))
        .collect();
    pairs.extend((rho.dim()..big).map(|k| (0.0, basis_vector(big, k))));
    // stable: equal eigenvalues keep their order
    pairs.sort_by(|a, b| b.0.total_cmp(&a.0));
    let (eigenvalues, eigenvectors) = pairs.into_iter().unzip();
    DensityMatrix::from_spectrum(SpectralDecomposition {
        eigenvalues,
        eigenvectors,
    })
}

/// `G̃_1 = diag(G_1, I_L)`, `G̃_j = diag(G_j, 0)` for the remaining outcomes.
pub fn extend_companion(g: &Measurement, dilation: &NaimarkDilation) -> Result<Measurement> {
    let d = dilation.original_dim();
    dilation.check_dim(g.dim())?;
    let big = dilation.enlarged_dim;
    let elements = g
        .elements()
        .iter()
        .enumerate()
        .map(|(j, gj)| {
            let mut m = ComplexMatrix::zeros(big, big);
            m.set_block(0, 0, gj.matrix());
            if j == 0 {
                for k in d..big {
                    m[(k, k)] = C64::new(1.0, 0.0);
                }
            }
            HermitianOperator::new(m)
        })
        .collect::<Result<Vec<_>>>()?;
    validate_measurement(elements, g.kind())?.with_labels(g.labels().to_vec())
}

/// Preservation residuals for one state; each is `|enlarged − original|`
/// maximized over outcomes (and outcome pairs for inner products).
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct StateCheck {
    pub probability: f64,
    pub companion_probability: f64,
    pub root_norm: f64,
    pub companion_root_norm: f64,
    pub inner_product: f64,
    pub f_value: f64,
    /// `‖Ẽ_i ψ̃‖ − ‖E_i ψ‖` per outcome. Nonzero whenever the off-diagonal
    /// block of `Ẽ_i` sees `ψ`, which is why `f` uses root norms.
    pub image_norm_gaps: Vec<f64>,
}

impl StateCheck {
    pub fn max_residual(&self) -> f64 {
        [
            self.probability,
            self.companion_probability,
            self.root_norm,
            self.companion_root_norm,
            self.inner_product,
            self.f_value,
        ]
        .into_iter()
        .fold(0.0, f64::max)
    }

    pub fn image_norms_differ(&self) -> bool {
        self.image_norm_gaps
            .iter()
            .any(|g| g.abs() > DILATION_TOLERANCE)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DilationReport {
    pub original_dim: usize,
    pub enlarged_dim: usize,
    pub outcomes: usize,
    /// `max_i ‖Ẽ_i² − Ẽ_i‖_max`
    pub projector_residual: f64,
    /// Every `Ẽ_i` eigenvalue lies within `1e-8` of 0 or 1.
    pub projector_spectrum: bool,
    /// `‖Σ Ẽ_i − I‖_max`
    pub completeness_residual: f64,
    /// `max_i ‖corner(Ẽ_i) − E_i‖_max`
    pub corner_block_residual: f64,
    /// `‖Σ G̃_j − I‖_max`
    pub companion_completeness_residual: f64,
    /// `G̃` is projective whenever `G` is.
    pub companion_projective: bool,
    pub states: Vec<StateCheck>,
    pub tolerance: f64,
}

impl DilationReport {
    pub fn max_residual(&self) -> f64 {
        self.states
            .iter()
            .map(StateCheck::max_residual)
            .chain([
                self.projector_residual,
                self.completeness_residual,
                self.corner_block_residual,
                self.companion_completeness_residual,
            ])
            .fold(0.0, f64::max)
    }

    pub fn passed(&self) -> bool {
        self.projector_spectrum
            && self.companion_projective
            && self.max_residual() <= self.tolerance
    }
}

fn sum_residual(m: &Measurement) -> f64 {
    let dim = m.dim();
    let sum = m
        .elements()
        .iter()
        .fold(ComplexMatrix::zeros(dim, dim), |acc, e| {
            acc.add(e.matrix()).expect("same dimension")
        });
    sum.max_abs_diff(&ComplexMatrix::identity(dim))
}

fn root_image_norms(roots: &[HermitianOperator], v: &[C64]) -> Result<Vec<f64>> {
    roots
        .iter()
        .map(|r| Ok(vector_norm(&r.matrix().mul_vec(v)?)))
        .collect()
}

fn images(m: &Measurement, v: &[C64]) -> Result<Vec<Vec<C64>>> {
    m.elements().iter().map(|e| e.matrix().mul_vec(v)).collect()
}

fn max_gap(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}

/// Checks the structural dilation invariants, then for each state every
/// preservation identity between `(E, G, ψ)` and `(Ẽ, G̃, ψ̃)`.
pub fn verify_dilation(
    dilation: &NaimarkDilation,
    g: &Measurement,
    states: &[PureState],
) -> Result<DilationReport> {
    let d = dilation.original_dim();
    let e = dilation.original();
    let et = dilation.projectors();
    let gt = extend_companion(g, dilation)?;

    let mut projector_residual: f64 = 0.0;
    let mut projector_spectrum = true;
    let mut corner_block_residual: f64 = 0.0;
    for (orig, proj) in e.elements().iter().zip(et.elements()) {
        let p = proj.matrix();
        projector_residual = projector_residual.max(p.matmul(p)?.max_abs_diff(p));
        let spec = hermitian_eig(proj);
        projector_spectrum &= spec
            .eigenvalues
            .iter()
            .all(|&l| l.abs() <= SNAP_TOLERANCE || (l - 1.0).abs() <= SNAP_TOLERANCE);
        corner_block_residual =
            corner_block_residual.max(p.block(0, 0, d, d).max_abs_diff(orig.matrix()));
    }

    let e_roots = e.square_roots()?;
    let et_roots = et.square_roots()?;
    let g_roots = g.square_roots()?;
    let gt_roots = gt.square_roots()?;

    let mut checks = Vec::with_capacity(states.len());
    for psi in states {
        let embedded = embed_state(psi, dilation)?;
        let (v, vt) = (psi.amplitudes(), embedded.amplitudes());

        let probs = |m: &Measurement, x: &[C64]| -> Result<Vec<f64>> {
            m.elements().iter().map(|el| el.expectation(x)).collect()
        };
        let probability = max_gap(&probs(e, v)?, &probs(et, vt)?);
        let companion_probability = max_gap(&probs(g, v)?, &probs(&gt, vt)?);
        let root_norm = max_gap(
            &root_image_norms(&e_roots, v)?,
            &root_image_norms(&et_roots, vt)?,
        );
        let companion_root_norm = max_gap(
            &root_image_norms(&g_roots, v)?,
            &root_image_norms(&gt_roots, vt)?,
        );

        let (ei, eti) = (images(e, v)?, images(et, vt)?);
        let (gj, gtj) = (images(g, v)?, images(&gt, vt)?);
        let mut inner_product: f64 = 0.0;
        for (a, at) in ei.iter().zip(&eti) {
            for (b, bt) in gj.iter().zip(&gtj) {
                inner_product = inner_product.max((inner(a, b) - inner(at, bt)).norm());
            }
        }

        let f_orig = f_pure(e, g, psi)?.value;
        let f_big = f_pure(et, &gt, &embedded.to_pure_state())?.value;

        let image_norm_gaps = eti
            .iter()
            .zip(&ei)
            .map(|(at, a)| vector_norm(at) - vector_norm(a))
            .collect();

        checks.push(StateCheck {
            probability,
            companion_probability,
            root_norm,
            companion_root_norm,
            inner_product,
            f_value: (f_orig - f_big).abs(),
            image_norm_gaps,
        });
    }

    Ok(DilationReport {
        original_dim: d,
        enlarged_dim: dilation.enlarged_dim(),
        outcomes: e.outcome_count(),
        projector_residual,
        projector_spectrum,
        completeness_residual: sum_residual(et),
        corner_block_residual,
        companion_completeness_residual: sum_residual(&gt),
        companion_projective: g.kind() != MeasurementKind::Pvm || gt.is_projective(),
        states: checks,
        tolerance: DILATION_TOLERANCE,
    })
}
