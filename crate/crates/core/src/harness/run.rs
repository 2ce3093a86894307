//! Evaluation of scenario checks.

use super::report::{CheckResult, Outcome, RunReport, Source, Verdict};
use super::scenario::{
    matrix_from_nested, vector_from_entries, CheckSpec, Quantity, Scenario, Tolerances,
};
use crate::bounds::{
    check_free_order_bound, check_pair_bound, check_rank_one_saturation, check_single_bound,
    compare_bounds, f_bar, f_mixed, phi, phi_bar,
};
use crate::entropy::{renyi_entropy, RenyiOrder};
use crate::error::Result;
use crate::interpolation::riesz_check;
use crate::measurement::{outcome_distribution, Measurement, PureState};
use crate::naimark::{dilate, verify_dilation};

fn outcome<T>(r: Result<T>, wrap: impl FnOnce(T) -> Outcome) -> Outcome {
    match r {
        Ok(v) => wrap(v),
        Err(e) => Outcome::Error {
            message: e.to_string(),
        },
    }
}

pub fn evaluate_quantity(scenario: &Scenario, q: &Quantity) -> Result<f64> {
    let meas = |name: &str| scenario.measurement(name);
    let rho = |name: &str| scenario.state(name).map(|s| s.density());
    Ok(match q {
        Quantity::FBar { m, n } => f_bar(meas(m)?, meas(n)?)?.value,
        Quantity::FBarSquared { m, n } => f_bar(meas(m)?, meas(n)?)?.value.powi(2),
        Quantity::F { m, n, state } => f_mixed(meas(m)?, meas(n)?, &rho(state)?)?.value,
        Quantity::Phi { m, state } => phi(meas(m)?, &rho(state)?)?.value,
        Quantity::PhiBar { m } => phi_bar(meas(m)?).value,
        Quantity::Entropy { m, state, order } => renyi_entropy(
            outcome_distribution(meas(m)?, &rho(state)?)?.probabilities(),
            *order,
        ),
        Quantity::PairBoundRhs { m, n } => -2.0 * f_bar(meas(m)?, meas(n)?)?.value.ln(),
        Quantity::FreeOrderRhs { m, n, state } => {
            let r = rho(state)?;
            -(phi(meas(m)?, &r)?.value * phi(meas(n)?, &r)?.value).ln()
        }
        Quantity::CompareBounds { m, n, state } => {
            compare_bounds(meas(m)?, meas(n)?, &rho(state)?, RenyiOrder::SHANNON)?
        }
        Quantity::MinEntropyGap { m, state, order } => {
            let e = meas(m)?;
            let h = renyi_entropy(
                outcome_distribution(e, &rho(state)?)?.probabilities(),
                *order,
            );
            h + phi_bar(e).value.ln()
        }
    })
}

fn dilation_outcome(
    scenario: &Scenario,
    measurement: &str,
    companion: Option<&str>,
    states: &[String],
    tol: &Tolerances,
) -> Result<Outcome> {
    let e = scenario.measurement(measurement)?;
    let g = match companion {
        Some(name) => scenario.measurement(name)?.clone(),
        None => Measurement::computational_basis(e.dim()),
    };
    let names: Vec<&str> = if states.is_empty() {
        scenario.states.iter().map(|s| s.name.as_str()).collect()
    } else {
        states.iter().map(String::as_str).collect()
    };
    let mut vectors: Vec<PureState> = Vec::new();
    for n in names {
        vectors.extend(scenario.state(n)?.pure_components());
    }
    let dilation = dilate(e)?;
    let mut report = verify_dilation(&dilation, &g, &vectors)?;
    report.tolerance = tol.dilation;
    Ok(Outcome::Dilation { report })
}

/// Every evaluation a check expands to, each with the single-evaluation
/// spec that reproduces it.
pub fn expand_check(
    scenario: &Scenario,
    check: &CheckSpec,
    tol: &Tolerances,
) -> Vec<(String, CheckSpec, Outcome)> {
    let meas = |name: &str| scenario.measurement(name);
    let rho = |name: &str| scenario.state(name).map(|s| s.density());
    match check {
        CheckSpec::Pair {
            m,
            n,
            state,
            orders,
        } => orders
            .iter()
            .map(|&a| {
                let r = (|| check_pair_bound(meas(m)?, meas(n)?, &rho(state)?, a))();
                (
                    format!("pair {m},{n}|{state} a={a}"),
                    CheckSpec::Pair {
                        m: m.clone(),
                        n: n.clone(),
                        state: state.clone(),
                        orders: vec![a],
                    },
                    outcome(r, |r| Outcome::Bound {
                        report: r.with_tolerance(tol.slack),
                    }),
                )
            })
            .collect(),
        CheckSpec::Single { m, state, orders } => orders
            .iter()
            .map(|&a| {
                let r = (|| check_single_bound(meas(m)?, &rho(state)?, a))();
                (
                    format!("single {m}|{state} a={a}"),
                    CheckSpec::Single {
                        m: m.clone(),
                        state: state.clone(),
                        orders: vec![a],
                    },
                    outcome(r, |r| Outcome::Bound {
                        report: r.with_tolerance(tol.slack),
                    }),
                )
            })
            .collect(),
        CheckSpec::FreeOrder {
            m,
            n,
            state,
            orders,
        } => orders
            .iter()
            .map(|&(a, b)| {
                let r = (|| check_free_order_bound(meas(m)?, meas(n)?, &rho(state)?, a, b))();
                (
                    format!("free-order {m},{n}|{state} a={a} b={b}"),
                    CheckSpec::FreeOrder {
                        m: m.clone(),
                        n: n.clone(),
                        state: state.clone(),
                        orders: vec![(a, b)],
                    },
                    outcome(r, |r| Outcome::Bound {
                        report: r.with_tolerance(tol.slack),
                    }),
                )
            })
            .collect(),
        CheckSpec::Saturation { m, n, state } => {
            let r = (|| check_rank_one_saturation(meas(m)?, meas(n)?, &rho(state)?))();
            vec![(
                format!("saturation {m},{n}|{state}"),
                check.clone(),
                outcome(r, |result| Outcome::Saturation { result }),
            )]
        }
        CheckSpec::Dilation {
            measurement,
            companion,
            states,
        } => {
            let r = dilation_outcome(scenario, measurement, companion.as_deref(), states, tol);
            vec![(
                format!("dilation {measurement}"),
                check.clone(),
                outcome(r, |o| o),
            )]
        }
        CheckSpec::Riesz { transform, x, b } => {
            let r = matrix_from_nested(transform)
                .and_then(|t| riesz_check(&t, &vector_from_entries(x), *b));
            vec![(
                format!("riesz b={b}"),
                check.clone(),
                outcome(r, |verdict| Outcome::Riesz { b: *b, verdict }),
            )]
        }
        CheckSpec::Expect {
            quantity,
            expected,
            tolerance,
            range,
        } => {
            let r = evaluate_quantity(scenario, quantity);
            let o = outcome(r, |value| {
                let pass = match (expected, range) {
                    (Some(e), _) => (value - e).abs() <= tolerance.unwrap_or(tol.expect),
                    (None, Some([lo, hi])) => *lo <= value && value <= *hi,
                    (None, None) => false,
                };
                Outcome::Expect {
                    value,
                    expected: *expected,
                    tolerance: expected.map(|_| tolerance.unwrap_or(tol.expect)),
                    range: *range,
                    pass,
                }
            });
            vec![(format!("expect {}", quantity.describe()), check.clone(), o)]
        }
    }
}

/// A copy of `scenario` that runs only `check`.
pub fn reproducer(
    scenario: &Scenario,
    check: CheckSpec,
    tol: &Tolerances,
) -> super::scenario::ScenarioFile {
    let mut file = scenario.to_file();
    file.checks = vec![check];
    file.tolerances = Some(*tol);
    file
}

/// Evaluates every check of `scenario`; `tolerance` overrides the slack
/// tolerance of all inequalities.
pub fn verify_scenario(scenario: &Scenario, tolerance: Option<f64>) -> RunReport {
    let mut tol = scenario.tolerances;
    if let Some(t) = tolerance {
        tol.slack = t;
    }
    let mut results = Vec::new();
    for check in &scenario.checks {
        for (name, spec, out) in expand_check(scenario, check, &tol) {
            let mut r = CheckResult::new(None, name, out);
            if r.verdict == Verdict::Fail {
                r.reproducer = Some(reproducer(scenario, spec, &tol));
            }
            results.push(r);
        }
    }
    RunReport::new(
        Source::Scenario {
            name: scenario.name.clone(),
        },
        results,
    )
}
