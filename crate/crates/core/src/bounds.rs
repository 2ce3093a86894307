//! Entropic uncertainty bounds for pairs of measurements, and certificates
//! that check them on concrete states.
//!
//! Every check evaluates both sides of an inequality and records
//! `slack = LHS − RHS`; a verdict passes when the slack is at least
//! `−SLACK_TOLERANCE`. Nothing is asserted: a failing certificate is data.
//!
//! Report rows carry short relation labels:
//!
//! | label | inequality |
//! |-------|------------|
//! | `Thm5` | `H_α(M) + H_β(N) ≥ −2 ln f(M,N|ρ)` for `1/α + 1/β = 2` |
//! | `Cor7` | `H_α(M) + H_β(N) ≥ −2 ln f̄(M,N)` for `1/α + 1/β = 2` |
//! | `Cor8` | `H_α(M) + H_β(N) ≥ −ln(φ(M|ρ) φ(N|ρ))` for any orders |
//! | `Thm6` | `H_α(M) ≥ −ln φ(M|ρ)` |
//! | `Cor9` | `H_α(M) ≥ −ln φ̄(M)` |
//! | `f<=fbar` | `f(M,N|ρ) ≤ f̄(M,N)` |
//! | `phi<=phibar` | `φ(M|ρ) ≤ φ̄(M)` |

use std::fmt;

use serde::Serialize;

use crate::entropy::{conjugate_order, renyi_entropy, RenyiOrder};
use crate::error::{Error, Result};
use crate::linalg::{inner, operator_norm, HermitianOperator, C64};
use crate::measurement::{
    outcome_distribution, rank_one_decomposition, DensityMatrix, Measurement, NotRankOne, PureState,
};

/// Verdicts pass when `LHS − RHS ≥ −SLACK_TOLERANCE`.
pub const SLACK_TOLERANCE: f64 = 1e-9;
/// Outcome pairs whose root norm `‖M_i^{1/2}ψ‖` is at or below this are
/// excluded from the maximum defining `f(M,N|ψ)`.
pub const ROOT_NORM_THRESHOLD: f64 = 1e-9;
/// Support eigenvalues closer than this make `f(M,N|ρ)` basis-dependent.
pub const DEGENERACY_GAP: f64 = 1e-8;
/// `f(M,N|ρ)` and `f̄(M,N)` count as equal within this for rank-one pairs.
pub const SATURATION_TOLERANCE: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundKind {
    FPure,
    FMixed,
    FBar,
    Phi,
    PhiBar,
}

impl fmt::Display for BoundKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            BoundKind::FPure => "f(psi)",
            BoundKind::FMixed => "f(rho)",
            BoundKind::FBar => "fbar",
            BoundKind::Phi => "phi",
            BoundKind::PhiBar => "phibar",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BoundValue {
    pub kind: BoundKind,
    /// Which measurement(s) the value belongs to, e.g. `"M"` or `"M,N"`.
    pub of: String,
    pub value: f64,
}

impl BoundValue {
    fn new(kind: BoundKind, of: &str, value: f64) -> Self {
        Self {
            kind,
            of: of.to_string(),
            value,
        }
    }
}

/// One evaluated inequality `lhs ≥ rhs`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Inequality {
    pub relation: String,
    pub lhs: f64,
    pub rhs: f64,
    pub slack: f64,
    pub pass: bool,
}

impl Inequality {
    pub fn new(relation: impl Into<String>, lhs: f64, rhs: f64, tolerance: f64) -> Self {
        let slack = lhs - rhs;
        Self {
            relation: relation.into(),
            lhs,
            rhs,
            slack,
            pass: slack >= -tolerance,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CheckKind {
    /// Conjugate-order pair relations (`Thm5`, `Cor7`).
    Pair,
    /// Single-measurement relations (`Thm6`, `Cor9`).
    Single,
    /// Independent-order pair relation (`Cor8`).
    FreeOrder,
}

/// Entropies, bound values, and per-inequality verdicts for one check.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BoundReport {
    pub check: CheckKind,
    pub alpha: RenyiOrder,
    pub beta: Option<RenyiOrder>,
    pub entropy_alpha: f64,
    pub entropy_beta: Option<f64>,
    pub bounds: Vec<BoundValue>,
    pub inequalities: Vec<Inequality>,
    /// The state's support spectrum has eigenvalues closer than
    /// [`DEGENERACY_GAP`]; the recorded `f(M,N|ρ)` then depends on the
    /// eigenbasis the solver returned.
    pub degenerate_spectrum: bool,
}

impl BoundReport {
    pub fn passed(&self) -> bool {
        self.inequalities.iter().all(|i| i.pass)
    }

    pub fn min_slack(&self) -> f64 {
        self.inequalities
            .iter()
            .map(|i| i.slack)
            .fold(f64::INFINITY, f64::min)
    }

    pub fn inequality(&self, relation: &str) -> Option<&Inequality> {
        self.inequalities.iter().find(|i| i.relation == relation)
    }

    pub fn bound(&self, kind: BoundKind, of: &str) -> Option<f64> {
        self.bounds
            .iter()
            .find(|b| b.kind == kind && b.of == of)
            .map(|b| b.value)
    }

    /// Re-judges every verdict against a different slack tolerance.
    pub fn with_tolerance(mut self, tolerance: f64) -> Self {
        for i in &mut self.inequalities {
            i.pass = i.slack >= -tolerance;
        }
        self
    }
}

fn same_dim(m: &Measurement, n: &Measurement) -> Result<()> {
    if m.dim() != n.dim() {
        return Err(Error::DimensionMismatch {
            expected: m.dim(),
            found: n.dim(),
        });
    }
    Ok(())
}

/// A candidate term of the maximum defining `f(M,N|ψ)`.
#[derive(Clone, Debug, PartialEq)]
pub struct OverlapTerm {
    pub i: usize,
    pub j: usize,
    pub value: f64,
}

/// All admissible terms `|⟨M_iψ, N_jψ⟩| / (‖M_i^{1/2}ψ‖ ‖N_j^{1/2}ψ‖)`.
pub fn overlap_terms(
    m: &Measurement,
    n: &Measurement,
    psi: &PureState,
) -> Result<Vec<OverlapTerm>> {
    same_dim(m, n)?;
    if psi.dim() != m.dim() {
        return Err(Error::DimensionMismatch {
            expected: m.dim(),
            found: psi.dim(),
        });
    }
    let v = psi.amplitudes();
    // ‖A^{1/2}ψ‖² = ⟨ψ, Aψ⟩ for PSD A, so no square roots are needed here.
    let images = |meas: &Measurement| -> Result<Vec<(Vec<C64>, f64)>> {
        meas.elements()
            .iter()
            .map(|e| {
                let image = e.matrix().mul_vec(v)?;
                let root_norm = inner(v, &image).re.max(0.0).sqrt();
                Ok((image, root_norm))
            })
            .collect()
    };
    let mi = images(m)?;
    let nj = images(n)?;
    let mut terms = Vec::new();
    for (i, (a, na)) in mi.iter().enumerate() {
        if *na <= ROOT_NORM_THRESHOLD {
            continue;
        }
        for (j, (b, nb)) in nj.iter().enumerate() {
            if *nb <= ROOT_NORM_THRESHOLD {
                continue;
            }
            terms.push(OverlapTerm {
                i,
                j,
                value: inner(a, b).norm() / (na * nb),
            });
        }
    }
    Ok(terms)
}

/// `f(M,N|ψ)`: the largest admissible overlap term.
pub fn f_pure(m: &Measurement, n: &Measurement, psi: &PureState) -> Result<BoundValue> {
    let best = overlap_terms(m, n, psi)?
        .into_iter()
        .map(|t| t.value)
        .fold(None, |acc: Option<f64>, v| {
            Some(acc.map_or(v, |a| a.max(v)))
        })
        .ok_or(Error::NoAdmissiblePair)?;
    Ok(BoundValue::new(BoundKind::FPure, "M,N", best))
}

/// `f(M,N|ρ)`: the maximum of `f(M,N|ψ_λ)` over eigenvectors with `λ > 1e-12`.
pub fn f_mixed(m: &Measurement, n: &Measurement, rho: &DensityMatrix) -> Result<BoundValue> {
    let mut best: Option<f64> = None;
    for (_, v) in rho.support() {
        let psi = PureState::new(v.to_vec())?;
        let f = f_pure(m, n, &psi)?.value;
        best = Some(best.map_or(f, |b| b.max(f)));
    }
    let value = best.ok_or(Error::NoAdmissiblePair)?;
    Ok(BoundValue::new(BoundKind::FMixed, "M,N", value))
}

/// `f̄(M,N) = max_ij ‖M_i^{1/2} N_j^{1/2}‖`
pub fn f_bar(m: &Measurement, n: &Measurement) -> Result<BoundValue> {
    same_dim(m, n)?;
    let value = root_products(m, n)?
        .iter()
        .flatten()
        .copied()
        .fold(0.0, f64::max);
    Ok(BoundValue::new(BoundKind::FBar, "M,N", value))
}

/// `‖M_i^{1/2} N_j^{1/2}‖` for every pair, indexed `[i][j]`.
pub fn root_products(m: &Measurement, n: &Measurement) -> Result<Vec<Vec<f64>>> {
    let mr = m.square_roots()?;
    let nr = n.square_roots()?;
    mr.iter()
        .map(|a| {
            nr.iter()
                .map(|b| Ok(operator_norm(&a.matrix().matmul(b.matrix())?)))
                .collect()
        })
        .collect()
}

/// `φ(M|ρ) = max_i tr(M_i ρ)`
pub fn phi(m: &Measurement, rho: &DensityMatrix) -> Result<BoundValue> {
    let p = outcome_distribution(m, rho)?;
    Ok(BoundValue::new(BoundKind::Phi, "M", p.max()))
}

/// `φ̄(M) = max_i ‖M_i‖`
pub fn phi_bar(m: &Measurement) -> BoundValue {
    let value = m
        .elements()
        .iter()
        .map(|e| operator_norm(e.matrix()))
        .fold(0.0, f64::max);
    BoundValue::new(BoundKind::PhiBar, "M", value)
}

/// Conjugate-order pair relations on `ρ`: `Thm5` with the state-dependent
/// `f(M,N|ρ)`, `Cor7` with `f̄(M,N)`, and the chain `f(M,N|ρ) ≤ f̄(M,N)`.
pub fn check_pair_bound(
    m: &Measurement,
    n: &Measurement,
    rho: &DensityMatrix,
    alpha: RenyiOrder,
) -> Result<BoundReport> {
    let beta = conjugate_order(alpha)?;
    same_dim(m, n)?;
    let h_a = renyi_entropy(outcome_distribution(m, rho)?.probabilities(), alpha);
    let h_b = renyi_entropy(outcome_distribution(n, rho)?.probabilities(), beta);
    let f = f_mixed(m, n, rho)?.value;
    let fb = f_bar(m, n)?.value;
    let lhs = h_a + h_b;
    Ok(BoundReport {
        check: CheckKind::Pair,
        alpha,
        beta: Some(beta),
        entropy_alpha: h_a,
        entropy_beta: Some(h_b),
        bounds: vec![
            BoundValue::new(BoundKind::FMixed, "M,N", f),
            BoundValue::new(BoundKind::FBar, "M,N", fb),
        ],
        inequalities: vec![
            Inequality::new("Thm5", lhs, -2.0 * f.ln(), SLACK_TOLERANCE),
            Inequality::new("Cor7", lhs, -2.0 * fb.ln(), SLACK_TOLERANCE),
            Inequality::new("f<=fbar", fb, f, SLACK_TOLERANCE),
        ],
        degenerate_spectrum: rho.has_degenerate_support(DEGENERACY_GAP),
    })
}

/// Single-measurement relations: `Thm6` with `φ(M|ρ)`, `Cor9` with `φ̄(M)`,
/// and the chain `φ(M|ρ) ≤ φ̄(M)`. Any `α > 0` is admissible.
pub fn check_single_bound(
    m: &Measurement,
    rho: &DensityMatrix,
    alpha: RenyiOrder,
) -> Result<BoundReport> {
    let p = outcome_distribution(m, rho)?;
    let h = renyi_entropy(p.probabilities(), alpha);
    let ph = p.max();
    let pb = phi_bar(m).value;
    Ok(BoundReport {
        check: CheckKind::Single,
        alpha,
        beta: None,
        entropy_alpha: h,
        entropy_beta: None,
        bounds: vec![
            BoundValue::new(BoundKind::Phi, "M", ph),
            BoundValue::new(BoundKind::PhiBar, "M", pb),
        ],
        inequalities: vec![
            Inequality::new("Thm6", h, -ph.ln(), SLACK_TOLERANCE),
            Inequality::new("Cor9", h, -pb.ln(), SLACK_TOLERANCE),
            Inequality::new("phi<=phibar", pb, ph, SLACK_TOLERANCE),
        ],
        degenerate_spectrum: false,
    })
}

/// `Cor8`: `H_α(M|ρ) + H_β(N|ρ) ≥ −ln(φ(M|ρ) φ(N|ρ))` for unrelated orders.
pub fn check_free_order_bound(
    m: &Measurement,
    n: &Measurement,
    rho: &DensityMatrix,
    alpha: RenyiOrder,
    beta: RenyiOrder,
) -> Result<BoundReport> {
    same_dim(m, n)?;
    let p = outcome_distribution(m, rho)?;
    let q = outcome_distribution(n, rho)?;
    let h_a = renyi_entropy(p.probabilities(), alpha);
    let h_b = renyi_entropy(q.probabilities(), beta);
    let (pm, pn) = (p.max(), q.max());
    Ok(BoundReport {
        check: CheckKind::FreeOrder,
        alpha,
        beta: Some(beta),
        entropy_alpha: h_a,
        entropy_beta: Some(h_b),
        bounds: vec![
            BoundValue::new(BoundKind::Phi, "M", pm),
            BoundValue::new(BoundKind::Phi, "N", pn),
        ],
        inequalities: vec![Inequality::new(
            "Cor8",
            h_a + h_b,
            -(pm * pn).ln(),
            SLACK_TOLERANCE,
        )],
        degenerate_spectrum: false,
    })
}

/// `−2 ln f̄(M,N) − (−ln φ(M|ρ)φ(N|ρ))`; positive when the state-independent
/// pair bound is the stronger one on this state.
pub fn compare_bounds(
    m: &Measurement,
    n: &Measurement,
    rho: &DensityMatrix,
    alpha: RenyiOrder,
) -> Result<f64> {
    conjugate_order(alpha)?;
    let pair = -2.0 * f_bar(m, n)?.value.ln();
    let free = -(phi(m, rho)?.value * phi(n, rho)?.value).ln();
    Ok(pair - free)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum Saturation {
    Saturated {
        f_mixed: f64,
        f_bar: f64,
    },
    Unsaturated {
        f_mixed: f64,
        f_bar: f64,
    },
    /// One of the measurements has an element of rank above one.
    Inapplicable {
        measurement: String,
        index: usize,
        second_eigenvalue: f64,
    },
}

impl Saturation {
    pub fn is_saturated(&self) -> bool {
        matches!(self, Saturation::Saturated { .. })
    }
}

/// For rank-one `M` and `N`, `f(M,N|ρ)` must equal `f̄(M,N)` whatever `ρ` is.
pub fn check_rank_one_saturation(
    m: &Measurement,
    n: &Measurement,
    rho: &DensityMatrix,
) -> Result<Saturation> {
    for (name, meas) in [("M", m), ("N", n)] {
        if let Err(NotRankOne {
            index,
            second_eigenvalue,
        }) = rank_one_decomposition(meas)
        {
            return Ok(Saturation::Inapplicable {
                measurement: name.into(),
                index,
                second_eigenvalue,
            });
        }
    }
    let f = f_mixed(m, n, rho)?.value;
    let fb = f_bar(m, n)?.value;
    Ok(if (f - fb).abs() <= SATURATION_TOLERANCE {
        Saturation::Saturated {
            f_mixed: f,
            f_bar: fb,
        }
    } else {
        Saturation::Unsaturated {
            f_mixed: f,
            f_bar: fb,
        }
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct RobertsonComparison {
    /// `ΔA · ΔB`
    pub lhs: f64,
    /// `½ |⟨ψ, [A, B] ψ⟩|`
    pub rhs: f64,
}

impl RobertsonComparison {
    pub fn holds(&self) -> bool {
        self.lhs >= self.rhs - SLACK_TOLERANCE
    }
}

/// Variance product against the commutator bound for two observables.
pub fn robertson_bound(
    a: &HermitianOperator,
    b: &HermitianOperator,
    psi: &PureState,
) -> Result<RobertsonComparison> {
    let v = psi.amplitudes();
    let spread = |op: &HermitianOperator| -> Result<f64> {
        let mean = op.expectation(v)?;
        let image = op.matrix().mul_vec(v)?;
        Ok(image
            .iter()
            .zip(v)
            .map(|(x, y)| (x - y * mean).norm_sqr())
            .sum::<f64>()
            .sqrt())
    };
    let lhs = spread(a)? * spread(b)?;
    let ab = a.matrix().matmul(b.matrix())?;
    let ba = b.matrix().matmul(a.matrix())?;
    let commutator = ab.sub(&ba)?;
    let rhs = 0.5 * inner(v, &commutator.mul_vec(v)?).norm();
    Ok(RobertsonComparison { lhs, rhs })
}
