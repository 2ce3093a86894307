//! Seeded Monte-Carlo campaigns.
//!
//! Each trial draws its instance from its own stream (`seed`, trial index),
//! turns it into a small scenario named `rho`, `M`, `N`, and evaluates the
//! configured checks with the same code path as `verify`. Trials run in
//! parallel; results are collected in trial order.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::ensemble::{
    haar_state, random_contraction, sample_measurement, wishart_state, EnsembleKind,
};
use super::report::{CheckResult, Outcome, RunReport, Source, Verdict};
use super::rng::{TrialRng, RNG_ALGORITHM};
use super::run::{expand_check, reproducer};
use super::scenario::{CheckSpec, Named, Scenario, ScenarioFile, ScenarioState, Tolerances};
use crate::entropy::{conjugate_order, RenyiOrder};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CampaignCheck {
    Pair,
    Single,
    FreeOrder,
    Saturation,
    Dilation,
    Riesz,
}

impl CampaignCheck {
    pub const ALL: [CampaignCheck; 6] = [
        CampaignCheck::Pair,
        CampaignCheck::Single,
        CampaignCheck::FreeOrder,
        CampaignCheck::Saturation,
        CampaignCheck::Dilation,
        CampaignCheck::Riesz,
    ];

    pub fn name(self) -> &'static str {
        match self {
            CampaignCheck::Pair => "pair",
            CampaignCheck::Single => "single",
            CampaignCheck::FreeOrder => "free-order",
            CampaignCheck::Saturation => "saturation",
            CampaignCheck::Dilation => "dilation",
            CampaignCheck::Riesz => "riesz",
        }
    }
}

impl fmt::Display for CampaignCheck {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for CampaignCheck {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL.into_iter().find(|c| c.name() == s).ok_or_else(|| {
            Error::InvalidParameter(format!(
                "unknown check `{s}`; expected one of pair, single, free-order, saturation, dilation, riesz"
            ))
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CampaignConfig {
    pub seed: u64,
    /// Generator name; only `"chacha20"` is implemented.
    pub rng: String,
    pub trials: usize,
    /// Inclusive dimension range.
    pub dimensions: [usize; 2],
    /// Inclusive outcome-count range, clamped per family.
    pub outcomes: [usize; 2],
    /// `α` values for the pair relations; `β` is the conjugate.
    pub pair_orders: Vec<RenyiOrder>,
    pub single_orders: Vec<RenyiOrder>,
    /// Free orders are drawn uniformly from `(0, free_order_max]`.
    pub free_order_max: f64,
    /// State and measurement families to draw from; a family with no entry
    /// falls back to `mixed` or `general-povm`.
    pub ensembles: Vec<EnsembleKind>,
    pub checks: Vec<CampaignCheck>,
    pub tolerances: Tolerances,
}

fn orders(values: &[f64]) -> Vec<RenyiOrder> {
    values
        .iter()
        .map(|&a| RenyiOrder::new(a).expect("positive order"))
        .collect()
}

impl Default for CampaignConfig {
    fn default() -> Self {
        Self {
            seed: 0,
            rng: RNG_ALGORITHM.to_string(),
            trials: 100,
            dimensions: [2, 4],
            outcomes: [2, 6],
            pair_orders: orders(&[0.6, 0.75, 1.0, 1.5, 2.0, 5.0]),
            single_orders: orders(&[0.5, 1.0, 2.0, 10.0, f64::INFINITY]),
            free_order_max: 10.0,
            ensembles: vec![EnsembleKind::Mixed, EnsembleKind::GeneralPovm],
            checks: vec![
                CampaignCheck::Pair,
                CampaignCheck::Single,
                CampaignCheck::FreeOrder,
            ],
            tolerances: Tolerances::default(),
        }
    }
}

impl CampaignConfig {
    pub fn validate(&self) -> Result<()> {
        if self.rng != RNG_ALGORITHM {
            return Err(Error::InvalidParameter(format!(
                "unsupported rng `{}`; only `{RNG_ALGORITHM}` is implemented",
                self.rng
            )));
        }
        let [dlo, dhi] = self.dimensions;
        if dlo == 0 || dlo > dhi {
            return Err(Error::InvalidParameter(format!(
                "invalid dimension range [{dlo}, {dhi}]"
            )));
        }
        let [olo, ohi] = self.outcomes;
        if olo == 0 || olo > ohi {
            return Err(Error::InvalidParameter(format!(
                "invalid outcome range [{olo}, {ohi}]"
            )));
        }
        for &a in &self.pair_orders {
            conjugate_order(a)?;
        }
        if !(self.free_order_max > 0.0 && self.free_order_max.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "free_order_max must be positive and finite, got {}",
                self.free_order_max
            )));
        }
        Ok(())
    }

    fn families(&self) -> (Vec<EnsembleKind>, Vec<EnsembleKind>) {
        let (mut states, mut measurements): (Vec<_>, Vec<_>) =
            self.ensembles.iter().partition(|k| k.is_state());
        if states.is_empty() {
            states.push(EnsembleKind::Mixed);
        }
        if measurements.is_empty() {
            measurements.push(EnsembleKind::GeneralPovm);
        }
        (states, measurements)
    }
}

/// The instance and check list of one trial. Identical `(config, trial)`
/// always yields bit-identical output.
pub fn sample_trial(config: &CampaignConfig, trial: usize) -> Result<Scenario> {
    let (state_kinds, meas_kinds) = config.families();
    let mut rng = TrialRng::new(config.seed, trial as u64);
    let [dlo, dhi] = config.dimensions;
    let [olo, ohi] = config.outcomes;
    let dim = rng.range_inclusive(dlo, dhi);

    let state = match *rng.choose(&state_kinds) {
        EnsembleKind::PureHaar => ScenarioState::Pure(haar_state(&mut rng, dim)?),
        _ => ScenarioState::Mixed(wishart_state(&mut rng, dim)?),
    };
    let measurement = |rng: &mut TrialRng| -> Result<_> {
        let kind = *rng.choose(&meas_kinds);
        let outcomes = rng.range_inclusive(olo, ohi);
        sample_measurement(rng, kind, dim, outcomes)
    };
    let m = measurement(&mut rng)?;
    let n = measurement(&mut rng)?;

    let s = |x: &str| x.to_string();
    let mut checks = Vec::new();
    for check in &config.checks {
        match check {
            CampaignCheck::Pair => checks.push(CheckSpec::Pair {
                m: s("M"),
                n: s("N"),
                state: s("rho"),
                orders: config.pair_orders.clone(),
            }),
            CampaignCheck::Single => {
                for name in ["M", "N"] {
                    checks.push(CheckSpec::Single {
                        m: s(name),
                        state: s("rho"),
                        orders: config.single_orders.clone(),
                    });
                }
            }
            CampaignCheck::FreeOrder => {
                let a = RenyiOrder::new(rng.uniform_left_open(0.0, config.free_order_max))?;
                let b = RenyiOrder::new(rng.uniform_left_open(0.0, config.free_order_max))?;
                checks.push(CheckSpec::FreeOrder {
                    m: s("M"),
                    n: s("N"),
                    state: s("rho"),
                    orders: vec![(a, b)],
                });
            }
            CampaignCheck::Saturation => checks.push(CheckSpec::Saturation {
                m: s("M"),
                n: s("N"),
                state: s("rho"),
            }),
            CampaignCheck::Dilation => checks.push(CheckSpec::Dilation {
                measurement: s("M"),
                companion: Some(s("N")),
                states: vec![s("rho")],
            }),
            CampaignCheck::Riesz => {
                let rows = rng.range_inclusive(dlo, dhi);
                let cols = rng.range_inclusive(dlo, dhi);
                let t = random_contraction(&mut rng, rows, cols);
                let x = rng.complex_gaussian_vec(cols);
                let b = loop {
                    let b = 1.0 + rng.uniform();
                    if b > 1.0 {
                        break b;
                    }
                };
                checks.push(CheckSpec::Riesz {
                    transform: t.to_nested(),
                    x: x.iter().map(|z| [z.re, z.im]).collect(),
                    b,
                });
            }
        }
    }

    Ok(Scenario {
        name: Some(format!("campaign seed {} trial {trial}", config.seed)),
        dimension: dim,
        states: vec![Named {
            name: s("rho"),
            value: state,
        }],
        measurements: vec![
            Named {
                name: s("M"),
                value: m,
            },
            Named {
                name: s("N"),
                value: n,
            },
        ],
        checks,
        tolerances: config.tolerances,
    })
}

struct TrialOutput {
    results: Vec<(CheckResult, Option<ScenarioFile>)>,
}

fn run_trial(config: &CampaignConfig, trial: usize) -> TrialOutput {
    let scenario = match sample_trial(config, trial) {
        Ok(s) => s,
        Err(e) => {
            let r = CheckResult::new(
                Some(trial),
                "sample".into(),
                Outcome::Error {
                    message: e.to_string(),
                },
            );
            return TrialOutput {
                results: vec![(r, None)],
            };
        }
    };
    let tol = scenario.tolerances;
    let mut results = Vec::new();
    for check in &scenario.checks {
        for (name, spec, out) in expand_check(&scenario, check, &tol) {
            let mut r = CheckResult::new(Some(trial), name, out);
            let repro = reproducer(&scenario, spec, &tol);
            if r.verdict == Verdict::Fail {
                r.reproducer = Some(repro.clone());
            }
            // kept until the worst instance is known
            results.push((r, Some(repro)));
        }
    }
    TrialOutput { results }
}

pub fn run_campaign(config: &CampaignConfig) -> Result<RunReport> {
    config.validate()?;
    let outputs: Vec<TrialOutput> = (0..config.trials)
        .into_par_iter()
        .map(|t| run_trial(config, t))
        .collect();
    let (results, repros): (Vec<CheckResult>, Vec<Option<ScenarioFile>>) =
        outputs.into_iter().flat_map(|o| o.results).unzip();
    let mut report = RunReport::new(
        Source::Campaign {
            config: config.clone(),
        },
        results,
    );
    if let Some(w) = report.summary.worst.as_mut() {
        w.instance = repros[w.result].clone();
    }
    Ok(report)
}
