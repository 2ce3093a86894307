mod common;

use proptest::prelude::*;

use entrobound::harness::ensemble::haar_basis;
use entrobound::harness::rng::TrialRng;
use entrobound::linalg::{complete_to_unitary, hermitian_eig, operator_norm, psd_sqrt};
use entrobound::{ComplexMatrix, HermitianOperator, C64};

fn matrix(max_dim: usize) -> impl Strategy<Value = ComplexMatrix> {
    (1..=max_dim).prop_flat_map(|d| {
        prop::collection::vec((-5.0f64..5.0, -5.0f64..5.0), d * d).prop_map(move |v| {
            let data = v.into_iter().map(|(re, im)| C64::new(re, im)).collect();
            ComplexMatrix::from_row_major(d, d, data).unwrap()
        })
    })
}

fn hermitian(max_dim: usize) -> impl Strategy<Value = HermitianOperator> {
    matrix(max_dim).prop_map(|g| {
        let h = g.add(&g.adjoint()).unwrap().scale(C64::new(0.5, 0.0));
        HermitianOperator::new(h).unwrap()
    })
}

fn psd(max_dim: usize) -> impl Strategy<Value = HermitianOperator> {
    (matrix(max_dim), 0usize..4).prop_map(|(g, drop)| {
        // zero some columns so singular inputs are exercised too
        let mut g = g;
        let d = g.rows();
        for c in 0..drop.min(d - 1) {
            for r in 0..d {
                g[(r, c)] = C64::default();
            }
        }
        HermitianOperator::new(g.matmul(&g.adjoint()).unwrap()).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn eigen_reconstruction(a in hermitian(8)) {
        let spec = hermitian_eig(&a);
        let err = spec.reconstruct().matrix().max_abs_diff(a.matrix());
        prop_assert!(err <= 1e-10 * a.matrix().max_abs().max(1.0), "residual {err}");
        let (oracle, _) = common::eig(&common::to_na(a.matrix()));
        let mut oracle = oracle;
        oracle.sort_by(|x, y| y.total_cmp(x));
        let mut ours = spec.eigenvalues.clone();
        ours.sort_by(|x, y| y.total_cmp(x));
        for (x, y) in ours.iter().zip(&oracle) {
            prop_assert!((x - y).abs() <= 1e-10 * a.matrix().max_abs().max(1.0));
        }
    }

    #[test]
    fn sqrt_squares_back(a in psd(6)) {
        let r = psd_sqrt(&a).unwrap();
        let back = r.matrix().matmul(r.matrix()).unwrap();
        let err = back.max_abs_diff(a.matrix());
        prop_assert!(err <= 1e-9 * a.matrix().max_abs().max(1.0), "residual {err}");
        prop_assert!(hermitian_eig(&r).min_eigenvalue() >= -1e-9);
        let oracle = common::psd_sqrt(&common::to_na(a.matrix()));
        prop_assert!(common::max_abs_diff(&common::to_na(r.matrix()), &oracle) <= 1e-6 * a.matrix().max_abs().max(1.0));
    }

    #[test]
    fn norm_is_submultiplicative((a, b) in (1usize..=6).prop_flat_map(|d| (matrix_of(d), matrix_of(d)))) {
        let ab = operator_norm(&a.matmul(&b).unwrap());
        prop_assert!(ab <= operator_norm(&a) * operator_norm(&b) + 1e-9);
        let oracle = common::op_norm(&common::to_na(&a));
        prop_assert!((operator_norm(&a) - oracle).abs() <= 1e-9 * oracle.max(1.0));
    }

    #[test]
    fn completion_extends_isometry(seed in any::<u64>(), big in 1usize..=8, frac in 0.0f64..1.0) {
        let d = 1 + ((big - 1) as f64 * frac) as usize;
        let mut rng = TrialRng::new(seed, 0);
        let cols: Vec<Vec<C64>> = haar_basis(&mut rng, big).into_iter().take(d).collect();
        let w = ComplexMatrix::from_columns(&cols).unwrap();
        let u = complete_to_unitary(&w).unwrap();
        prop_assert_eq!(u.block(0, 0, big, d), w.clone());
        let gram = u.adjoint().matmul(&u).unwrap();
        prop_assert!(gram.max_abs_diff(&ComplexMatrix::identity(big)) <= 1e-10);
        let cross = w.adjoint().matmul(&u.block(0, d, big, big - d)).unwrap();
        prop_assert!(cross.max_abs() <= 1e-10);
    }
}

fn matrix_of(d: usize) -> impl Strategy<Value = ComplexMatrix> {
    prop::collection::vec((-3.0f64..3.0, -3.0f64..3.0), d * d).prop_map(move |v| {
        ComplexMatrix::from_row_major(
            d,
            d,
            v.into_iter().map(|(re, im)| C64::new(re, im)).collect(),
        )
        .unwrap()
    })
}

#[test]
fn completion_rejects_non_isometry() {
    let w = ComplexMatrix::from_real_rows(&[&[1.0], &[1.0]]).unwrap();
    assert!(complete_to_unitary(&w).is_err());
}
