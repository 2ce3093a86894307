//! Reference computations built on nalgebra, independent of the crate's own
//! eigensolver, square root, and norm routines.

#![allow(dead_code)]

use nalgebra::{Complex, DMatrix, DVector, SymmetricEigen};

use entrobound::{ComplexMatrix, DensityMatrix, Measurement};

pub type CMat = DMatrix<Complex<f64>>;

pub fn to_na(m: &ComplexMatrix) -> CMat {
    DMatrix::from_row_slice(m.rows(), m.cols(), m.as_slice())
}

pub fn eig(a: &CMat) -> (Vec<f64>, CMat) {
    let e = SymmetricEigen::new(a.clone());
    (e.eigenvalues.iter().copied().collect(), e.eigenvectors)
}

pub fn psd_sqrt(a: &CMat) -> CMat {
    let (w, v) = eig(a);
    let d = DMatrix::from_diagonal(&DVector::from_iterator(
        w.len(),
        w.iter().map(|&x| Complex::new(x.max(0.0).sqrt(), 0.0)),
    ));
    &v * d * v.adjoint()
}

pub fn op_norm(a: &CMat) -> f64 {
    a.singular_values().max()
}

pub fn elements(m: &Measurement) -> Vec<CMat> {
    m.elements().iter().map(|e| to_na(e.matrix())).collect()
}

pub fn probabilities(m: &Measurement, rho: &DensityMatrix) -> Vec<f64> {
    let r = to_na(rho.operator().matrix());
    elements(m).iter().map(|e| (e * &r).trace().re).collect()
}

/// Direct `ln(Σ p^α)/(1−α)`, the Shannon sum at 1 and `−ln max` at ∞.
pub fn renyi(p: &[f64], alpha: f64) -> f64 {
    let p: Vec<f64> = p.iter().map(|&x| x.max(0.0)).filter(|&x| x > 0.0).collect();
    if alpha.is_infinite() {
        -p.iter().copied().fold(0.0, f64::max).ln()
    } else if alpha == 1.0 {
        -p.iter().map(|x| x * x.ln()).sum::<f64>()
    } else {
        p.iter().map(|x| x.powf(alpha)).sum::<f64>().ln() / (1.0 - alpha)
    }
}

pub fn f_bar(m: &Measurement, n: &Measurement) -> f64 {
    let mr: Vec<CMat> = elements(m).iter().map(psd_sqrt).collect();
    let nr: Vec<CMat> = elements(n).iter().map(psd_sqrt).collect();
    let mut best: f64 = 0.0;
    for a in &mr {
        for b in &nr {
            best = best.max(op_norm(&(a * b)));
        }
    }
    best
}

/// `max |⟨ψ, M_i N_j ψ⟩| / (‖M_i^{1/2}ψ‖ ‖N_j^{1/2}ψ‖)` over the support
/// eigenvectors of `ρ`, skipping outcomes with root norm below `1e-9`.
pub fn f_mixed(m: &Measurement, n: &Measurement, rho: &DensityMatrix) -> f64 {
    let (w, v) = eig(&to_na(rho.operator().matrix()));
    let (me, ne) = (elements(m), elements(n));
    let mut best = f64::NEG_INFINITY;
    for (k, &lambda) in w.iter().enumerate() {
        if lambda <= 1e-12 {
            continue;
        }
        let psi = v.column(k).into_owned();
        let norm = |e: &CMat| psi.dotc(&(e * &psi)).re.max(0.0).sqrt();
        for a in &me {
            let na = norm(a);
            if na <= 1e-9 {
                continue;
            }
            for b in &ne {
                let nb = norm(b);
                if nb <= 1e-9 {
                    continue;
                }
                let overlap = (a * &psi).dotc(&(b * &psi)).norm();
                best = best.max(overlap / (na * nb));
            }
        }
    }
    best
}

pub fn phi_bar(m: &Measurement) -> f64 {
    elements(m).iter().map(op_norm).fold(0.0, f64::max)
}

pub fn max_abs_diff(a: &CMat, b: &CMat) -> f64 {
    (a - b).iter().map(|z| z.norm()).fold(0.0, f64::max)
}
