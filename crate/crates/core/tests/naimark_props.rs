mod common;

use proptest::prelude::*;

use entrobound::bounds::check_pair_bound;
use entrobound::entropy::renyi_entropy;
use entrobound::harness::ensemble::{sample_measurement, sample_state};
use entrobound::harness::rng::TrialRng;
use entrobound::harness::EnsembleKind;
use entrobound::measurement::{outcome_distribution, validate_measurement};
use entrobound::naimark::{dilate, embed_density, extend_companion, verify_dilation};
use entrobound::{Measurement, RenyiOrder};

fn kind() -> impl Strategy<Value = EnsembleKind> {
    prop_oneof![
        Just(EnsembleKind::GeneralPovm),
        Just(EnsembleKind::RankOnePovm),
        Just(EnsembleKind::Pvm),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn dilation_suite(seed in any::<u64>(), dim in 2usize..=4, n in 2usize..=6, kg in kind(), ng in 1usize..=6) {
        let mut rng = TrialRng::new(seed, 0);
        let e = sample_measurement(&mut rng, EnsembleKind::GeneralPovm, dim, n).unwrap();
        let g = sample_measurement(&mut rng, kg, dim, ng).unwrap();
        let rho = sample_state(&mut rng, EnsembleKind::Mixed, dim).unwrap();
        let states: Vec<_> = rho
            .support()
            .map(|(_, v)| entrobound::PureState::normalized(v.to_vec()).unwrap())
            .collect();
        let d = dilate(&e).unwrap();
        prop_assert!(d.projectors().is_projective());
        let report = verify_dilation(&d, &g, &states).unwrap();
        prop_assert!(report.passed(), "max residual {}", report.max_residual());
        let gt = extend_companion(&g, &d).unwrap();
        validate_measurement(gt.elements().to_vec(), g.kind()).unwrap();
    }

    #[test]
    fn entropies_and_theorem_transport(seed in any::<u64>(), dim in 2usize..=4, n in 2usize..=6, ng in 2usize..=6, a in 0.6f64..8.0) {
        let mut rng = TrialRng::new(seed, 0);
        let e = sample_measurement(&mut rng, EnsembleKind::GeneralPovm, dim, n).unwrap();
        let g = sample_measurement(&mut rng, EnsembleKind::GeneralPovm, dim, ng).unwrap();
        let rho = sample_state(&mut rng, EnsembleKind::Mixed, dim).unwrap();
        let d = dilate(&e).unwrap();
        let big = embed_density(&rho, &d).unwrap();
        let gt: Measurement = extend_companion(&g, &d).unwrap();
        let order = RenyiOrder::new(a).unwrap();
        let h = renyi_entropy(outcome_distribution(&e, &rho).unwrap().probabilities(), order);
        let ht = renyi_entropy(outcome_distribution(d.projectors(), &big).unwrap().probabilities(), order);
        prop_assert!((h - ht).abs() <= 1e-9);

        let small = check_pair_bound(&e, &g, &rho, order).unwrap();
        let large = check_pair_bound(d.projectors(), &gt, &big, order).unwrap();
        let (s, l) = (small.inequality("Thm5").unwrap(), large.inequality("Thm5").unwrap());
        prop_assert!((s.lhs - l.lhs).abs() <= 1e-9);
        prop_assert!((s.rhs - l.rhs).abs() <= 1e-9, "rhs {} vs {}", s.rhs, l.rhs);
    }
}
