//! Scenario files: named states, named measurements, and the checks to run
//! on them.
//!
//! Complex numbers are `[re, im]` pairs and matrices are row-major nested
//! arrays. Orders are numbers, or the strings `"shannon"` and `"min"`.

use std::f64::consts::{FRAC_1_SQRT_2, LN_2, SQRT_2};
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::discrimination as ex;
use crate::entropy::RenyiOrder;
use crate::error::{Error, Result};
use crate::linalg::{ComplexMatrix, HermitianOperator, C64};
use crate::measurement::{
    pure_to_density, validate_measurement, DensityMatrix, Measurement, MeasurementKind, PureState,
};

pub const SCENARIO_SCHEMA: &str = "entrobound-scenario/1";

pub type Entry = [f64; 2];
pub type NestedMatrix = Vec<Vec<Entry>>;

/// Check tolerances; every field can be overridden per file.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Tolerances {
    /// Inequalities pass when `lhs − rhs ≥ −slack`.
    pub slack: f64,
    /// Default absolute tolerance of `expect` checks.
    pub expect: f64,
    /// Largest admissible dilation residual.
    pub dilation: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            slack: crate::bounds::SLACK_TOLERANCE,
            expect: 1e-10,
            dilation: crate::naimark::DILATION_TOLERANCE,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum StateKind {
    Pure,
    Mixed,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StateSpec {
    pub name: String,
    pub kind: StateKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub amplitudes: Option<Vec<Entry>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub matrix: Option<NestedMatrix>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MeasurementSpec {
    pub name: String,
    pub kind: MeasurementKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<String>>,
    pub elements: Vec<NestedMatrix>,
}

/// A scalar computed from named objects, for `expect` checks.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "name", rename_all = "kebab-case", deny_unknown_fields)]
pub enum Quantity {
    FBar {
        m: String,
        n: String,
    },
    FBarSquared {
        m: String,
        n: String,
    },
    F {
        m: String,
        n: String,
        state: String,
    },
    Phi {
        m: String,
        state: String,
    },
    PhiBar {
        m: String,
    },
    Entropy {
        m: String,
        state: String,
        order: RenyiOrder,
    },
    /// `−2 ln f̄(M,N)`
    PairBoundRhs {
        m: String,
        n: String,
    },
    /// `−ln φ(M|ρ)φ(N|ρ)`
    FreeOrderRhs {
        m: String,
        n: String,
        state: String,
    },
    /// `−2 ln f̄(M,N) + ln φ(M|ρ)φ(N|ρ)`
    CompareBounds {
        m: String,
        n: String,
        state: String,
    },
    /// `H_α(M|ρ) + ln φ̄(M)`
    MinEntropyGap {
        m: String,
        state: String,
        order: RenyiOrder,
    },
}

impl Quantity {
    pub fn describe(&self) -> String {
        match self {
            Quantity::FBar { m, n } => format!("fbar({m},{n})"),
            Quantity::FBarSquared { m, n } => format!("fbar({m},{n})^2"),
            Quantity::F { m, n, state } => format!("f({m},{n}|{state})"),
            Quantity::Phi { m, state } => format!("phi({m}|{state})"),
            Quantity::PhiBar { m } => format!("phibar({m})"),
            Quantity::Entropy { m, state, order } => format!("H_{order}({m}|{state})"),
            Quantity::PairBoundRhs { m, n } => format!("-2ln fbar({m},{n})"),
            Quantity::FreeOrderRhs { m, n, state } => format!("-ln phi*phi({m},{n}|{state})"),
            Quantity::CompareBounds { m, n, state } => format!("compare({m},{n}|{state})"),
            Quantity::MinEntropyGap { m, state, order } => {
                format!("H_{order}({m}|{state})+ln phibar({m})")
            }
        }
    }

    fn measurement_names(&self) -> Vec<&str> {
        match self {
            Quantity::FBar { m, n }
            | Quantity::FBarSquared { m, n }
            | Quantity::F { m, n, .. }
            | Quantity::PairBoundRhs { m, n }
            | Quantity::FreeOrderRhs { m, n, .. }
            | Quantity::CompareBounds { m, n, .. } => vec![m, n],
            Quantity::Phi { m, .. }
            | Quantity::PhiBar { m }
            | Quantity::Entropy { m, .. }
            | Quantity::MinEntropyGap { m, .. } => vec![m],
        }
    }

    fn state_name(&self) -> Option<&str> {
        match self {
            Quantity::F { state, .. }
            | Quantity::Phi { state, .. }
            | Quantity::Entropy { state, .. }
            | Quantity::FreeOrderRhs { state, .. }
            | Quantity::CompareBounds { state, .. }
            | Quantity::MinEntropyGap { state, .. } => Some(state),
            _ => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum CheckSpec {
    /// `Thm5`, `Cor7` and `f<=fbar` for each `α`, with `β` its conjugate.
    Pair {
        m: String,
        n: String,
        state: String,
        orders: Vec<RenyiOrder>,
    },
    /// `Thm6`, `Cor9` and `phi<=phibar` for each `α`.
    Single {
        m: String,
        state: String,
        orders: Vec<RenyiOrder>,
    },
    /// `Cor8` for each `(α, β)`.
    FreeOrder {
        m: String,
        n: String,
        state: String,
        orders: Vec<(RenyiOrder, RenyiOrder)>,
    },
    /// `f(M,N|ρ) = f̄(M,N)` for rank-one `M`, `N`.
    Saturation { m: String, n: String, state: String },
    /// Builds the dilation of `measurement` and checks every preservation
    /// identity on the listed states (support eigenvectors for mixed ones).
    Dilation {
        measurement: String,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        companion: Option<String>,
        #[serde(default)]
        states: Vec<String>,
    },
    /// `S_a(Tx) ≤ η^{(2−b)/b} S_b(x)` for an explicit contraction.
    Riesz {
        transform: NestedMatrix,
        x: Vec<Entry>,
        b: f64,
    },
    /// A computed quantity against `expected ± tolerance` or a closed range.
    Expect {
        quantity: Quantity,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        expected: Option<f64>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        tolerance: Option<f64>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        range: Option<[f64; 2]>,
    },
}

/// On-disk form of a scenario, before validation.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioFile {
    pub schema: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub dimension: usize,
    #[serde(default)]
    pub states: Vec<StateSpec>,
    #[serde(default)]
    pub measurements: Vec<MeasurementSpec>,
    #[serde(default)]
    pub checks: Vec<CheckSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tolerances: Option<Tolerances>,
}

#[derive(Clone, Debug, PartialEq)]
pub enum ScenarioState {
    Pure(PureState),
    Mixed(DensityMatrix),
}

impl ScenarioState {
    pub fn dim(&self) -> usize {
        match self {
            ScenarioState::Pure(p) => p.dim(),
            ScenarioState::Mixed(r) => r.dim(),
        }
    }

    pub fn density(&self) -> DensityMatrix {
        match self {
            ScenarioState::Pure(p) => pure_to_density(p),
            ScenarioState::Mixed(r) => r.clone(),
        }
    }

    /// The state itself if pure, otherwise its support eigenvectors.
    pub fn pure_components(&self) -> Vec<PureState> {
        match self {
            ScenarioState::Pure(p) => vec![p.clone()],
            ScenarioState::Mixed(r) => r
                .support()
                .filter_map(|(_, v)| PureState::normalized(v.to_vec()).ok())
                .collect(),
        }
    }

    fn to_spec(&self, name: &str) -> StateSpec {
        match self {
            ScenarioState::Pure(p) => StateSpec {
                name: name.to_string(),
                kind: StateKind::Pure,
                amplitudes: Some(p.amplitudes().iter().map(|z| [z.re, z.im]).collect()),
                matrix: None,
            },
            ScenarioState::Mixed(r) => StateSpec {
                name: name.to_string(),
                kind: StateKind::Mixed,
                amplitudes: None,
                matrix: Some(r.operator().matrix().to_nested()),
            },
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Named<T> {
    pub name: String,
    pub value: T,
}

/// A validated scenario: every object passed its validator and every name a
/// check refers to resolves.
#[derive(Clone, Debug, PartialEq)]
pub struct Scenario {
    pub name: Option<String>,
    pub dimension: usize,
    pub states: Vec<Named<ScenarioState>>,
    pub measurements: Vec<Named<Measurement>>,
    pub checks: Vec<CheckSpec>,
    pub tolerances: Tolerances,
}

pub(crate) fn matrix_from_nested(rows: &[Vec<Entry>]) -> Result<ComplexMatrix> {
    let rows: Vec<Vec<C64>> = rows
        .iter()
        .map(|r| r.iter().map(|&[re, im]| C64::new(re, im)).collect())
        .collect();
    ComplexMatrix::from_rows(&rows)
}

pub(crate) fn vector_from_entries(v: &[Entry]) -> Vec<C64> {
    v.iter().map(|&[re, im]| C64::new(re, im)).collect()
}

fn square_of(m: ComplexMatrix, dim: usize) -> Result<ComplexMatrix> {
    if m.rows() != dim || m.cols() != dim {
        return Err(Error::Shape(format!(
            "expected a {dim}x{dim} matrix, found {}x{}",
            m.rows(),
            m.cols()
        )));
    }
    Ok(m)
}

fn build_state(spec: &StateSpec, dim: usize) -> Result<ScenarioState> {
    match (spec.kind, &spec.amplitudes, &spec.matrix) {
        (StateKind::Pure, Some(a), None) => {
            if a.len() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: a.len(),
                });
            }
            Ok(ScenarioState::Pure(PureState::new(vector_from_entries(a))?))
        }
        (StateKind::Mixed, None, Some(m)) => Ok(ScenarioState::Mixed(DensityMatrix::from_matrix(
            square_of(matrix_from_nested(m)?, dim)?,
        )?)),
        (StateKind::Pure, _, _) => Err(Error::Scenario(
            "a pure state takes `amplitudes` and no `matrix`".into(),
        )),
        (StateKind::Mixed, _, _) => Err(Error::Scenario(
            "a mixed state takes `matrix` and no `amplitudes`".into(),
        )),
    }
}

fn build_measurement(spec: &MeasurementSpec, dim: usize) -> Result<Measurement> {
    let elements = spec
        .elements
        .iter()
        .enumerate()
        .map(|(i, e)| {
            matrix_from_nested(e)
                .and_then(|m| square_of(m, dim))
                .and_then(HermitianOperator::new)
                .map_err(|err| err.context(format!("element {i}")))
        })
        .collect::<Result<Vec<_>>>()?;
    let m = validate_measurement(elements, spec.kind)?;
    match &spec.labels {
        Some(labels) => m.with_labels(labels.clone()),
        None => Ok(m),
    }
}

fn check_unique<'a>(what: &str, names: impl Iterator<Item = &'a str>) -> Result<()> {
    let mut seen = std::collections::BTreeSet::new();
    for n in names {
        if !seen.insert(n) {
            return Err(Error::Scenario(format!("duplicate {what} name `{n}`")));
        }
    }
    Ok(())
}

impl Scenario {
    pub fn from_file(file: ScenarioFile) -> Result<Self> {
        if file.schema != SCENARIO_SCHEMA {
            return Err(Error::Scenario(format!(
                "unsupported schema `{}`, expected `{SCENARIO_SCHEMA}`",
                file.schema
            )));
        }
        let dim = file.dimension;
        if dim == 0 {
            return Err(Error::Scenario("dimension must be positive".into()));
        }
        check_unique("state", file.states.iter().map(|s| s.name.as_str()))?;
        check_unique(
            "measurement",
            file.measurements.iter().map(|s| s.name.as_str()),
        )?;
        let states = file
            .states
            .iter()
            .enumerate()
            .map(|(i, s)| {
                build_state(s, dim)
                    .map(|value| Named {
                        name: s.name.clone(),
                        value,
                    })
                    .map_err(|e| e.context(format!("states[{i}] `{}`", s.name)))
            })
            .collect::<Result<Vec<_>>>()?;
        let measurements = file
            .measurements
            .iter()
            .enumerate()
            .map(|(i, s)| {
                build_measurement(s, dim)
                    .map(|value| Named {
                        name: s.name.clone(),
                        value,
                    })
                    .map_err(|e| e.context(format!("measurements[{i}] `{}`", s.name)))
            })
            .collect::<Result<Vec<_>>>()?;
        let scenario = Scenario {
            name: file.name,
            dimension: dim,
            states,
            measurements,
            checks: file.checks,
            tolerances: file.tolerances.unwrap_or_default(),
        };
        for (i, c) in scenario.checks.iter().enumerate() {
            scenario
                .validate_check(c)
                .map_err(|e| e.context(format!("checks[{i}]")))?;
        }
        Ok(scenario)
    }

    pub fn to_file(&self) -> ScenarioFile {
        ScenarioFile {
            schema: SCENARIO_SCHEMA.to_string(),
            name: self.name.clone(),
            dimension: self.dimension,
            states: self
                .states
                .iter()
                .map(|s| s.value.to_spec(&s.name))
                .collect(),
            measurements: self
                .measurements
                .iter()
                .map(|m| MeasurementSpec {
                    name: m.name.clone(),
                    kind: m.value.kind(),
                    labels: Some(m.value.labels().to_vec()),
                    elements: m
                        .value
                        .elements()
                        .iter()
                        .map(|e| e.matrix().to_nested())
                        .collect(),
                })
                .collect(),
            checks: self.checks.clone(),
            tolerances: Some(self.tolerances),
        }
    }

    pub fn state(&self, name: &str) -> Result<&ScenarioState> {
        self.states
            .iter()
            .find(|s| s.name == name)
            .map(|s| &s.value)
            .ok_or_else(|| Error::Scenario(format!("unknown state `{name}`")))
    }

    pub fn measurement(&self, name: &str) -> Result<&Measurement> {
        self.measurements
            .iter()
            .find(|s| s.name == name)
            .map(|s| &s.value)
            .ok_or_else(|| Error::Scenario(format!("unknown measurement `{name}`")))
    }

    fn validate_check(&self, check: &CheckSpec) -> Result<()> {
        match check {
            CheckSpec::Pair {
                m,
                n,
                state,
                orders,
            } => {
                self.measurement(m)?;
                self.measurement(n)?;
                self.state(state)?;
                for &a in orders {
                    crate::entropy::conjugate_order(a)?;
                }
            }
            CheckSpec::Single { m, state, .. } => {
                self.measurement(m)?;
                self.state(state)?;
            }
            CheckSpec::FreeOrder { m, n, state, .. } | CheckSpec::Saturation { m, n, state } => {
                self.measurement(m)?;
                self.measurement(n)?;
                self.state(state)?;
            }
            CheckSpec::Dilation {
                measurement,
                companion,
                states,
            } => {
                self.measurement(measurement)?;
                if let Some(g) = companion {
                    self.measurement(g)?;
                }
                for s in states {
                    self.state(s)?;
                }
            }
            CheckSpec::Riesz { transform, x, b } => {
                let t = matrix_from_nested(transform)?;
                if t.cols() != x.len() {
                    return Err(Error::DimensionMismatch {
                        expected: t.cols(),
                        found: x.len(),
                    });
                }
                if !(*b > 1.0 && *b < 2.0) {
                    return Err(Error::InvalidParameter(format!(
                        "Riesz exponent b must lie in (1, 2), got {b}"
                    )));
                }
            }
            CheckSpec::Expect {
                quantity,
                expected,
                tolerance,
                range,
            } => {
                for m in quantity.measurement_names() {
                    self.measurement(m)?;
                }
                if let Some(s) = quantity.state_name() {
                    self.state(s)?;
                }
                match (expected, range) {
                    (Some(_), None) => {}
                    (None, Some([lo, hi])) if lo <= hi && tolerance.is_none() => {}
                    _ => {
                        return Err(Error::Scenario(
                            "expect takes either `expected` (with optional `tolerance`) or a `range` [lo, hi]"
                                .into(),
                        ))
                    }
                }
            }
        }
        Ok(())
    }
}

/// Reads and validates a scenario file. Syntax errors cite line, column, and
/// the JSON path of the offending field.
pub fn load_scenario(path: impl AsRef<Path>) -> Result<Scenario> {
    let path = path.as_ref();
    let text =
        fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    parse_scenario(&text).map_err(|e| e.context(path.display()))
}

pub fn parse_scenario(text: &str) -> Result<Scenario> {
    let mut de = serde_json::Deserializer::from_str(text);
    let file: ScenarioFile = serde_path_to_error::deserialize(&mut de).map_err(|e| {
        let path = e.path().to_string();
        let inner = e.into_inner();
        Error::Parse(format!(
            "line {}, column {}, at `{path}`: {inner}",
            inner.line(),
            inner.column()
        ))
    })?;
    Scenario::from_file(file)
}

pub fn scenario_to_json(scenario: &Scenario) -> String {
    serde_json::to_string_pretty(&scenario.to_file()).expect("scenario serializes")
}

pub fn save_scenario(scenario: &Scenario, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    fs::write(path, scenario_to_json(scenario) + "\n")
        .map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

fn expect(quantity: Quantity, expected: f64) -> CheckSpec {
    CheckSpec::Expect {
        quantity,
        expected: Some(expected),
        tolerance: None,
        range: None,
    }
}

fn s(x: &str) -> String {
    x.to_string()
}

fn order(x: f64) -> RenyiOrder {
    RenyiOrder::new(x).expect("positive order")
}

/// Two-state discrimination: `ψ₁ = e₀`, `ψ₂ = (e₀+e₁)/√2`, the Helstrom PVM
/// `N`, the unambiguous POVM `M`, and the top eigenvector `φ₃` of `M₃`, with
/// every regression value for this pair registered as a check.
pub fn builtin_discrimination_scenario() -> Scenario {
    let named = |name: &str, value| Named {
        name: s(name),
        value,
    };
    let states = vec![
        named("psi1", ScenarioState::Pure(ex::psi1())),
        named("psi2", ScenarioState::Pure(ex::psi2())),
        named("phi3", ScenarioState::Pure(ex::phi3())),
    ];
    let measurements = vec![
        Named {
            name: s("M"),
            value: ex::unambiguous_povm(),
        },
        Named {
            name: s("N"),
            value: ex::helstrom_pvm(),
        },
    ];
    let root2p1 = SQRT_2 + 1.0;
    let gap = root2p1.ln() - LN_2;
    let (m, n) = (|| s("M"), || s("N"));
    let mut checks = vec![
        expect(Quantity::FBarSquared { m: m(), n: n() }, 0.5),
        expect(Quantity::PairBoundRhs { m: m(), n: n() }, LN_2),
        expect(
            Quantity::Phi {
                m: m(),
                state: s("psi1"),
            },
            FRAC_1_SQRT_2,
        ),
        expect(
            Quantity::Phi {
                m: n(),
                state: s("psi1"),
            },
            2f64.powf(-1.5) * root2p1,
        ),
        expect(
            Quantity::FreeOrderRhs {
                m: m(),
                n: n(),
                state: s("psi1"),
            },
            4f64.ln() - root2p1.ln(),
        ),
        expect(
            Quantity::Phi {
                m: m(),
                state: s("phi3"),
            },
            2.0 / root2p1,
        ),
        expect(
            Quantity::Phi {
                m: n(),
                state: s("phi3"),
            },
            0.5,
        ),
        expect(
            Quantity::FreeOrderRhs {
                m: m(),
                n: n(),
                state: s("phi3"),
            },
            root2p1.ln(),
        ),
        expect(
            Quantity::CompareBounds {
                m: m(),
                n: n(),
                state: s("psi1"),
            },
            gap,
        ),
        expect(
            Quantity::CompareBounds {
                m: m(),
                n: n(),
                state: s("phi3"),
            },
            -gap,
        ),
        CheckSpec::Expect {
            quantity: Quantity::MinEntropyGap {
                m: m(),
                state: s("phi3"),
                order: order(64.0),
            },
            expected: None,
            tolerance: None,
            range: Some([0.0, 0.01]),
        },
    ];
    for state in ["psi1", "psi2", "phi3"] {
        checks.push(CheckSpec::Pair {
            m: m(),
            n: n(),
            state: s(state),
            orders: vec![order(0.75), RenyiOrder::SHANNON, order(2.0)],
        });
    }
    for (meas, state) in [("M", "psi1"), ("M", "phi3"), ("N", "psi1"), ("N", "phi3")] {
        checks.push(CheckSpec::Single {
            m: s(meas),
            state: s(state),
            orders: vec![order(0.5), RenyiOrder::SHANNON, order(2.0), RenyiOrder::MIN],
        });
    }
    for state in ["psi1", "phi3"] {
        checks.push(CheckSpec::FreeOrder {
            m: m(),
            n: n(),
            state: s(state),
            orders: vec![(order(0.5), order(3.0)), (RenyiOrder::MIN, RenyiOrder::MIN)],
        });
    }
    for state in ["psi1", "psi2", "phi3"] {
        checks.push(CheckSpec::Saturation {
            m: m(),
            n: n(),
            state: s(state),
        });
    }
    checks.push(CheckSpec::Dilation {
        measurement: m(),
        companion: Some(n()),
        states: vec![s("psi1"), s("psi2"), s("phi3")],
    });
    let scenario = Scenario {
        name: Some(s("discrimination")),
        dimension: 2,
        states,
        measurements,
        checks,
        tolerances: Tolerances::default(),
    };
    for c in &scenario.checks {
        scenario.validate_check(c).expect("builtin checks resolve");
    }
    scenario
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtin_round_trips_through_json() {
        let b = builtin_discrimination_scenario();
        let back = parse_scenario(&scenario_to_json(&b)).unwrap();
        assert_eq!(back.states, b.states);
        assert_eq!(back.measurements, b.measurements);
        assert_eq!(back.checks, b.checks);
        assert_eq!(back, b);
    }

    #[test]
    fn builtin_objects_are_valid() {
        let b = builtin_discrimination_scenario();
        let m3 = &b.measurement("M").unwrap().elements()[2];
        assert!(crate::linalg::hermitian_eig(m3).min_eigenvalue() >= -1e-15);
        assert_eq!(b.measurement("N").unwrap().kind(), MeasurementKind::Pvm);
        let fb = crate::bounds::f_bar(b.measurement("M").unwrap(), b.measurement("N").unwrap())
            .unwrap()
            .value;
        assert!((fb * fb - 0.5).abs() < 1e-12);
    }

    fn with_measurement(elements: &str) -> String {
        format!(
            r#"{{"schema":"entrobound-scenario/1","dimension":2,
               "measurements":[{{"name":"E","kind":"povm","elements":{elements}}}]}}"#
        )
    }

    #[test]
    fn completeness_failure_names_deviation() {
        let text = with_measurement("[[[[1,0],[0,0]],[[0,0],[0.5,0]]]]");
        let err = parse_scenario(&text).unwrap_err();
        match err.root() {
            Error::Completeness { deviation } => assert!((deviation - 0.5).abs() < 1e-15),
            other => panic!("{other:?}"),
        }
        assert!(err.to_string().contains("measurements[0] `E`"));
    }

    #[test]
    fn non_hermitian_element_is_rejected() {
        let text = with_measurement(
            "[[[[0.5,0],[0.2,0]],[[0,0],[0.5,0]]],[[[0.5,0],[0,0]],[[0,0],[0.5,0]]]]",
        );
        let err = parse_scenario(&text).unwrap_err();
        assert!(matches!(err.root(), Error::NotHermitian { .. }), "{err}");
    }

    #[test]
    fn non_psd_element_is_rejected() {
        let text = with_measurement(
            "[[[[-0.5,0],[0,0]],[[0,0],[0.5,0]]],[[[1.5,0],[0,0]],[[0,0],[0.5,0]]]]",
        );
        let err = parse_scenario(&text).unwrap_err();
        assert!(matches!(err.root(), Error::NotPsd { .. }), "{err}");
    }

    #[test]
    fn malformed_json_cites_position() {
        let err =
            parse_scenario("{\"schema\": \"entrobound-scenario/1\",\n \"dimension\": \"two\"}")
                .unwrap_err();
        match err.root() {
            Error::Parse(msg) => {
                assert!(msg.contains("line 2"), "{msg}");
                assert!(msg.contains("dimension"), "{msg}");
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn unresolved_names_are_rejected() {
        let text = r#"{"schema":"entrobound-scenario/1","dimension":2,
            "checks":[{"kind":"single","m":"Q","state":"x","orders":[1]}]}"#;
        let err = parse_scenario(text).unwrap_err();
        assert!(err.to_string().contains("unknown measurement `Q`"), "{err}");
    }

    #[test]
    fn orders_accept_markers() {
        let text = r#"{"schema":"entrobound-scenario/1","dimension":1,
            "states":[{"name":"s","kind":"pure","amplitudes":[[1,0]]}],
            "measurements":[{"name":"E","kind":"pvm","elements":[[[[1,0]]]]}],
            "checks":[{"kind":"single","m":"E","state":"s","orders":["shannon","min",2.5]}]}"#;
        let sc = parse_scenario(text).unwrap();
        match &sc.checks[0] {
            CheckSpec::Single { orders, .. } => {
                assert!(orders[0].is_shannon());
                assert!(orders[1].is_min());
                assert_eq!(orders[2].value(), 2.5);
            }
            other => panic!("{other:?}"),
        }
    }
}
