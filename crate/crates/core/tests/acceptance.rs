//! Acceptance gate: every criterion runs at its stated tolerance and prints
//! one pass/fail line. Exits nonzero if any criterion fails.

mod common;

use std::f64::consts::{FRAC_1_SQRT_2, LN_2, SQRT_2};
use std::process::{Command, ExitCode};

use proptest::prelude::*;
use proptest::test_runner::{Config, TestRunner};

use entrobound::bounds::{check_pair_bound, compare_bounds, f_bar, phi, phi_bar, Saturation};
use entrobound::entropy::{
    generalized_power_sum, min_entropy, power_sum, renyi_entropy, shannon_entropy,
};
use entrobound::harness::{
    builtin_discrimination_scenario, emit_report, run_campaign, sample_trial, CampaignCheck,
    CampaignConfig, EnsembleKind, Outcome, ReportFormat, RunReport, Scenario, Verdict,
};
use entrobound::interpolation::riesz_check;
use entrobound::measurement::outcome_distribution;
use entrobound::naimark::{dilate, verify_dilation};
use entrobound::{ComplexMatrix, RenyiOrder, C64};

const SEED: u64 = 20_240_611;

struct Gate {
    failures: usize,
}

impl Gate {
    fn record(&mut self, id: &str, pass: bool, detail: String) {
        println!("[{}] {id}: {detail}", if pass { "PASS" } else { "FAIL" });
        if !pass {
            self.failures += 1;
        }
    }
}

fn config(
    trials: usize,
    ensembles: Vec<EnsembleKind>,
    checks: Vec<CampaignCheck>,
) -> CampaignConfig {
    CampaignConfig {
        seed: SEED,
        trials,
        dimensions: [2, 4],
        outcomes: [2, 6],
        ensembles,
        checks,
        ..CampaignConfig::default()
    }
}

fn campaign(c: &CampaignConfig) -> RunReport {
    run_campaign(c).expect("valid campaign config")
}

fn bound_reports(r: &RunReport) -> impl Iterator<Item = &entrobound::bounds::BoundReport> {
    r.results.iter().filter_map(|c| match &c.outcome {
        Outcome::Bound { report } => Some(report),
        _ => None,
    })
}

fn trials(c: &CampaignConfig) -> impl Iterator<Item = Scenario> + '_ {
    (0..c.trials).map(|t| sample_trial(c, t).expect("trial samples"))
}

fn constants(g: &mut Gate) {
    let s = builtin_discrimination_scenario();
    let (m, n) = (s.measurement("M").unwrap(), s.measurement("N").unwrap());
    let psi1 = s.state("psi1").unwrap().density();
    let phi3 = s.state("phi3").unwrap().density();
    let r = SQRT_2 + 1.0;
    let fb = f_bar(m, n).unwrap().value;
    let cor7 = check_pair_bound(m, n, &psi1, RenyiOrder::SHANNON)
        .unwrap()
        .inequality("Cor7")
        .unwrap()
        .rhs;
    let phi_m1 = phi(m, &psi1).unwrap().value;
    let phi_n1 = phi(n, &psi1).unwrap().value;
    let phi_m3 = phi(m, &phi3).unwrap().value;
    let phi_n3 = phi(n, &phi3).unwrap().value;
    let cases = [
        ("fbar^2", fb * fb, 0.5),
        ("fbar^2 (nalgebra)", common::f_bar(m, n).powi(2), 0.5),
        ("Cor7 rhs", cor7, LN_2),
        ("phi(M|psi1)", phi_m1, FRAC_1_SQRT_2),
        ("phi(N|psi1)", phi_n1, 2f64.powf(-1.5) * r),
        (
            "Cor8 rhs at psi1",
            -(phi_m1 * phi_n1).ln(),
            4f64.ln() - r.ln(),
        ),
        ("phi(M|phi3)", phi_m3, 2.0 / r),
        ("phi(N|phi3)", phi_n3, 0.5),
        ("Cor8 rhs at phi3", -(phi_m3 * phi_n3).ln(), r.ln()),
        (
            "gap at psi1",
            compare_bounds(m, n, &psi1, RenyiOrder::SHANNON).unwrap(),
            r.ln() - LN_2,
        ),
        (
            "gap at phi3",
            compare_bounds(m, n, &phi3, RenyiOrder::SHANNON).unwrap(),
            LN_2 - r.ln(),
        ),
    ];
    let worst = cases
        .iter()
        .map(|(_, v, e)| (v - e).abs())
        .fold(0.0, f64::max);
    let bad: Vec<&str> = cases
        .iter()
        .filter(|(_, v, e)| (v - e).abs() > 1e-10)
        .map(|c| c.0)
        .collect();
    g.record(
        "1 regression constants",
        bad.is_empty(),
        format!(
            "{} values, max error {worst:.2e} (tol 1e-10){}",
            cases.len(),
            fmt_bad(&bad)
        ),
    );
    let gap = (r.ln() - LN_2 - 0.188).abs();
    g.record(
        "1 gap ~ 0.188",
        gap < 5e-4,
        format!("ln(1+sqrt2) - ln2 = {:.6}", r.ln() - LN_2),
    );
}

fn fmt_bad(bad: &[&str]) -> String {
    if bad.is_empty() {
        String::new()
    } else {
        format!("; off: {}", bad.join(", "))
    }
}

fn certificates(g: &mut Gate) {
    let states = || vec![EnsembleKind::Mixed, EnsembleKind::GeneralPovm];

    let pair = config(1000, states(), vec![CampaignCheck::Pair]);
    let report = campaign(&pair);
    let mut oracle_violations = 0;
    let mut oracle_gap: f64 = 0.0;
    for s in trials(&pair) {
        let (m, n) = (s.measurement("M").unwrap(), s.measurement("N").unwrap());
        let rho = s.state("rho").unwrap().density();
        let (p, q) = (
            common::probabilities(m, &rho),
            common::probabilities(n, &rho),
        );
        let f = common::f_mixed(m, n, &rho);
        let fb = common::f_bar(m, n);
        oracle_gap = oracle_gap
            .max((f_bar(m, n).unwrap().value - fb).abs())
            .max((entrobound::bounds::f_mixed(m, n, &rho).unwrap().value - f).abs());
        for &a in &pair.pair_orders {
            let a = a.value();
            let b = a / (2.0 * a - 1.0);
            let lhs = common::renyi(&p, a) + common::renyi(&q, b);
            if lhs < -2.0 * f.ln() - 1e-9 || lhs < -2.0 * fb.ln() - 1e-9 {
                oracle_violations += 1;
            }
        }
    }
    let s = &report.summary;
    g.record(
        "2 Thm5/Cor7 pair certificates",
        s.failed == 0 && s.passed == 6000 && oracle_violations == 0 && oracle_gap <= 1e-9,
        format!(
            "{} evaluations over 1000 instances, {} failed, min slack {:.3e}; oracle violations {oracle_violations}, library-oracle gap {oracle_gap:.1e}",
            s.checks, s.failed, s.min_slack.unwrap_or(f64::NAN)
        ),
    );
    let mut chains = vec![report];

    let single = config(1000, states(), vec![CampaignCheck::Single]);
    let report = campaign(&single);
    let mut oracle_violations = 0;
    for s in trials(&single) {
        let rho = s.state("rho").unwrap().density();
        for name in ["M", "N"] {
            let m = s.measurement(name).unwrap();
            let p = common::probabilities(m, &rho);
            let pmax = p.iter().copied().fold(0.0, f64::max);
            let pb = common::phi_bar(m);
            for &a in &single.single_orders {
                let h = common::renyi(&p, a.value());
                if h < -pmax.ln() - 1e-9 || h < -pb.ln() - 1e-9 {
                    oracle_violations += 1;
                }
            }
        }
    }
    let s = &report.summary;
    g.record(
        "2 Thm6/Cor9 single certificates",
        s.failed == 0 && s.passed == 10_000 && oracle_violations == 0,
        format!(
            "{} evaluations over 1000 instances, {} failed, min slack {:.3e}; oracle violations {oracle_violations}",
            s.checks, s.failed, s.min_slack.unwrap_or(f64::NAN)
        ),
    );
    chains.push(report);

    let free = config(1000, states(), vec![CampaignCheck::FreeOrder]);
    let report = campaign(&free);
    let orders_in_range = bound_reports(&report).all(|b| {
        let (a, c) = (b.alpha.value(), b.beta.unwrap().value());
        a > 0.0 && a <= 10.0 && c > 0.0 && c <= 10.0
    });
    let s = &report.summary;
    g.record(
        "2 Cor8 free-order certificates",
        s.failed == 0 && s.passed == 1000 && orders_in_range,
        format!(
            "{} instances with orders in (0, 10], {} failed, min slack {:.3e}",
            s.checks,
            s.failed,
            s.min_slack.unwrap_or(f64::NAN)
        ),
    );
    chains.push(report);

    let mut links = 0;
    let mut broken = 0;
    for r in &chains {
        for b in bound_reports(r) {
            for i in &b.inequalities {
                if i.relation == "f<=fbar" || i.relation == "phi<=phibar" {
                    links += 1;
                    if i.slack < -1e-9 {
                        broken += 1;
                    }
                }
            }
        }
    }
    g.record(
        "2 bound chains f<=fbar, phi<=phibar",
        broken == 0 && links == 16_000,
        format!("{links} chain links, {broken} broken"),
    );
}

fn saturation(g: &mut Gate) {
    let c = config(
        200,
        vec![EnsembleKind::Mixed, EnsembleKind::RankOnePovm],
        vec![CampaignCheck::Saturation],
    );
    let report = campaign(&c);
    let mut worst: f64 = 0.0;
    let mut saturated = 0;
    for r in &report.results {
        if let Outcome::Saturation {
            result:
                Saturation::Saturated { f_mixed, f_bar } | Saturation::Unsaturated { f_mixed, f_bar },
        } = &r.outcome
        {
            worst = worst.max((f_mixed - f_bar).abs());
            saturated += (r.verdict == Verdict::Pass) as usize;
        }
    }
    let oracle_worst = trials(&c)
        .map(|s| {
            let (m, n) = (s.measurement("M").unwrap(), s.measurement("N").unwrap());
            (common::f_mixed(m, n, &s.state("rho").unwrap().density()) - common::f_bar(m, n)).abs()
        })
        .fold(0.0, f64::max);
    g.record(
        "3 rank-one saturation",
        saturated == 200 && worst <= 1e-9 && oracle_worst <= 1e-9,
        format!("{saturated}/200 saturated, max |f - fbar| {worst:.2e}, oracle {oracle_worst:.2e} (tol 1e-9)"),
    );
}

fn riesz(g: &mut Gate) {
    let c = config(500, vec![], vec![CampaignCheck::Riesz]);
    let report = campaign(&c);
    let mut oracle_fail = 0;
    for s in trials(&c) {
        for check in &s.checks {
            if let entrobound::harness::CheckSpec::Riesz { transform, x, b } = check {
                let t = common::to_na(&ComplexMatrix::try_from(transform.clone()).unwrap());
                let x: Vec<C64> = x.iter().map(|z| C64::new(z[0], z[1])).collect();
                let xv = nalgebra::DVector::from_vec(x.clone());
                let y = &t * &xv;
                let a = b / (b - 1.0);
                let norm = |v: &[C64], p: f64| {
                    v.iter()
                        .map(|z| z.norm().powf(p))
                        .sum::<f64>()
                        .powf(1.0 / p)
                };
                let eta = t.iter().map(|z| z.norm()).fold(0.0, f64::max);
                let lhs = norm(y.as_slice(), a);
                let rhs = eta.powf((2.0 - b) / b) * norm(&x, *b);
                if common::op_norm(&t) > 1.0 + 1e-9 || lhs > rhs + 1e-9 {
                    oracle_fail += 1;
                }
            }
        }
    }
    let s = &report.summary;
    g.record(
        "4 Riesz random contractions",
        s.failed == 0 && s.passed == 500 && oracle_fail == 0,
        format!(
            "{} trials, {} failed, min slack {:.3e}; oracle failures {oracle_fail}",
            s.checks,
            s.failed,
            s.min_slack.unwrap_or(f64::NAN)
        ),
    );

    let t = ComplexMatrix::from_real_rows(&[&[FRAC_1_SQRT_2, FRAC_1_SQRT_2]]).unwrap();
    let x = [C64::new(1.0, 0.0), C64::new(1.0, 0.0)];
    let v = riesz_check(&t, &x, 4.0 / 3.0).unwrap();
    let err = (v.lhs - v.rhs).abs();
    g.record(
        "4 Riesz analytic equality",
        err <= 1e-12 && (v.lhs - SQRT_2).abs() <= 1e-12,
        format!(
            "lhs {:.15} rhs {:.15}, |lhs - rhs| {err:.1e} (tol 1e-12)",
            v.lhs, v.rhs
        ),
    );
}

fn naimark(g: &mut Gate) {
    let c = CampaignConfig {
        ensembles: vec![EnsembleKind::Mixed, EnsembleKind::GeneralPovm],
        ..config(100, vec![], vec![CampaignCheck::Dilation])
    };
    let report = campaign(&c);
    let mut worst = [0.0f64; 4];
    let mut structural = true;
    for r in &report.results {
        if let Outcome::Dilation { report: d } = &r.outcome {
            worst[0] = worst[0].max(d.projector_residual);
            worst[1] = worst[1].max(
                d.completeness_residual
                    .max(d.companion_completeness_residual),
            );
            worst[2] = worst[2].max(d.corner_block_residual);
            worst[3] = worst[3].max(
                d.states
                    .iter()
                    .map(|s| s.max_residual())
                    .fold(0.0, f64::max),
            );
            structural &= d.projector_spectrum && d.companion_projective;
        }
    }
    let dims_ok = trials(&c).all(|s| {
        let n = s.measurement("M").unwrap().outcome_count();
        (2..=4).contains(&s.dimension) && (2..=6).contains(&n)
    });
    let s = &report.summary;
    g.record(
        "5 Naimark dilation suite",
        s.failed == 0 && s.passed == 100 && structural && dims_ok && worst.iter().all(|&w| w <= 1e-9),
        format!(
            "{} POVMs; residuals projector {:.1e}, completeness {:.1e}, corner {:.1e}, preservation {:.1e} (tol 1e-9)",
            s.checks, worst[0], worst[1], worst[2], worst[3]
        ),
    );

    let b = builtin_discrimination_scenario();
    let m = b.measurement("M").unwrap();
    let d = dilate(m).unwrap();
    let states: Vec<_> = b
        .states
        .iter()
        .flat_map(|s| s.value.pure_components())
        .collect();
    let rep = verify_dilation(&d, b.measurement("N").unwrap(), &states).unwrap();
    let gap = rep
        .states
        .iter()
        .flat_map(|s| s.image_norm_gaps.iter())
        .map(|g| g.abs())
        .fold(0.0, f64::max);
    g.record(
        "5 image-norm caveat for M",
        gap > 1e-3,
        format!("max | ||E~ psi~|| - ||E psi|| | = {gap:.4} (needs > 1e-3)"),
    );
}

fn min_entropy_approach(g: &mut Gate) {
    let b = builtin_discrimination_scenario();
    let m = b.measurement("M").unwrap();
    let rho = b.state("phi3").unwrap().density();
    let order = RenyiOrder::new(64.0).unwrap();
    let p = outcome_distribution(m, &rho).unwrap();
    let gap = renyi_entropy(p.probabilities(), order) + phi_bar(m).value.ln();
    let oracle_p = common::probabilities(m, &rho);
    let oracle = common::renyi(&oracle_p, 64.0) + common::phi_bar(m).ln();
    g.record(
        "6 H64(M|phi3) + ln phibar(M)",
        (0.0..=0.01).contains(&gap) && (gap - oracle).abs() < 1e-10,
        format!(
            "gap {gap:.6} in [0, 0.01], oracle {oracle:.6}, distribution ({:.4}, {:.4}, {:.4})",
            oracle_p[0], oracle_p[1], oracle_p[2]
        ),
    );
}

fn distribution() -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(0.0f64..1.0, 2..9).prop_filter_map("nonzero mass", |w| {
        let s: f64 = w.iter().sum();
        (s > 1e-3).then(|| w.iter().map(|x| x / s).collect())
    })
}

fn suite<S: Strategy>(
    name: &str,
    g: &mut Gate,
    strategy: S,
    test: impl Fn(S::Value) -> Result<(), TestCaseError>,
) {
    let mut runner = TestRunner::new(Config {
        cases: 200,
        failure_persistence: None,
        ..Config::default()
    });
    let result = runner.run(&strategy, test);
    g.record(
        name,
        result.is_ok(),
        match result {
            Ok(()) => "200 cases".into(),
            Err(e) => format!("{e}"),
        },
    );
}

fn entropy_properties(g: &mut Gate) {
    suite(
        "7 monotone in order",
        g,
        (distribution(), 0.01f64..50.0, 0.0f64..50.0),
        |(p, a, d)| {
            let lo = RenyiOrder::new(a).unwrap();
            let hi = RenyiOrder::new(a + d + 1e-6).unwrap();
            let (h_lo, h_hi) = (renyi_entropy(&p, lo), renyi_entropy(&p, hi));
            prop_assert!(
                h_lo >= h_hi - 1e-10,
                "H_{a} = {h_lo} < H_{} = {h_hi}",
                a + d
            );
            prop_assert!(h_hi >= min_entropy(&p) - 1e-10);
            Ok(())
        },
    );
    suite("7 limits at 1 and infinity", g, distribution(), |p| {
        let h1 = shannon_entropy(&p);
        for a in [1.0 - 1e-6, 1.0 + 1e-6] {
            let h = renyi_entropy(&p, RenyiOrder::new(a).unwrap());
            prop_assert!((h - h1).abs() <= 1e-4, "H_{a} = {h}, Shannon {h1}");
        }
        let h = renyi_entropy(&p, RenyiOrder::new(1e6).unwrap());
        prop_assert!((h - min_entropy(&p)).abs() <= 1e-4);
        Ok(())
    });
    suite(
        "7 power-sum identity",
        g,
        (distribution(), 0.05f64..20.0),
        |(p, a)| {
            prop_assume!((a - 1.0).abs() > 1e-3);
            let s = if a >= 1.0 {
                power_sum(&p, a).unwrap()
            } else {
                generalized_power_sum(&p, a)
            };
            let h = renyi_entropy(&p, RenyiOrder::new(a).unwrap());
            prop_assert!((s.ln() - (1.0 - a) / a * h).abs() <= 1e-10);
            Ok(())
        },
    );
}

fn determinism(g: &mut Gate) {
    let c = CampaignConfig {
        ensembles: EnsembleKind::ALL.to_vec(),
        ..config(
            60,
            vec![],
            vec![
                CampaignCheck::Pair,
                CampaignCheck::Single,
                CampaignCheck::FreeOrder,
                CampaignCheck::Saturation,
                CampaignCheck::Dilation,
                CampaignCheck::Riesz,
            ],
        )
    };
    let json = |r: &RunReport| emit_report(r, ReportFormat::Json);
    let first = json(&campaign(&c));
    let second = json(&campaign(&c));
    let serial = rayon::ThreadPoolBuilder::new()
        .num_threads(1)
        .build()
        .unwrap()
        .install(|| json(&campaign(&c)));
    let cli = || {
        let out = Command::new(env!("CARGO_BIN_EXE_entrobound"))
            .args([
                "campaign", "--seed", "7", "--trials", "25", "--format", "json",
            ])
            .env_remove("ENTROBOUND_SEED")
            .output()
            .expect("binary runs");
        out.stdout
    };
    let (a, b) = (cli(), cli());
    g.record(
        "8 deterministic JSON",
        first == second && first == serial && a == b && !a.is_empty(),
        format!(
            "library {} bytes x3 (incl. 1 thread), CLI {} bytes x2, identical: {}",
            first.len(),
            a.len(),
            first == second && first == serial && a == b
        ),
    );
}

fn main() -> ExitCode {
    let mut g = Gate { failures: 0 };
    constants(&mut g);
    certificates(&mut g);
    saturation(&mut g);
    riesz(&mut g);
    naimark(&mut g);
    min_entropy_approach(&mut g);
    entropy_properties(&mut g);
    determinism(&mut g);
    if g.failures == 0 {
        println!("acceptance: all criteria pass");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: {} criteria FAIL", g.failures);
        ExitCode::FAILURE
    }
}
