//! Run reports and their human and JSON renderings.

use std::fmt::Write as _;
use std::str::FromStr;

use serde::Serialize;

use super::campaign::CampaignConfig;
use super::scenario::ScenarioFile;
use crate::bounds::{BoundReport, Saturation};
use crate::error::Error;
use crate::interpolation::RieszVerdict;
use crate::naimark::DilationReport;

pub const REPORT_VERSION: &str = "entrobound-report/1";

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ReportFormat {
    Human,
    Json,
}

impl FromStr for ReportFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        match s {
            "human" => Ok(ReportFormat::Human),
            "json" => Ok(ReportFormat::Json),
            _ => Err(Error::InvalidParameter(format!(
                "unknown format `{s}`; expected human or json"
            ))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
    Skip,
}

impl Verdict {
    fn from_pass(pass: bool) -> Self {
        if pass {
            Verdict::Pass
        } else {
            Verdict::Fail
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Pass => "pass",
            Verdict::Fail => "FAIL",
            Verdict::Skip => "skip",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "type", rename_all = "kebab-case")]
pub enum Outcome {
    Bound {
        report: BoundReport,
    },
    Saturation {
        result: Saturation,
    },
    Dilation {
        report: DilationReport,
    },
    Riesz {
        b: f64,
        verdict: RieszVerdict,
    },
    Expect {
        value: f64,
        #[serde(skip_serializing_if = "Option::is_none")]
        expected: Option<f64>,
        #[serde(skip_serializing_if = "Option::is_none")]
        tolerance: Option<f64>,
        #[serde(skip_serializing_if = "Option::is_none")]
        range: Option<[f64; 2]>,
        pass: bool,
    },
    /// The check could not be evaluated.
    Error {
        message: String,
    },
}

/// One table line.
#[derive(Clone, Debug, PartialEq)]
pub struct Row {
    pub relation: String,
    pub lhs: f64,
    pub rhs: f64,
    /// Only inequality rows carry a slack.
    pub slack: Option<f64>,
    pub verdict: Verdict,
}

impl Outcome {
    pub fn verdict(&self) -> Verdict {
        match self {
            Outcome::Bound { report } => Verdict::from_pass(report.passed()),
            Outcome::Saturation { result } => match result {
                Saturation::Inapplicable { .. } => Verdict::Skip,
                r => Verdict::from_pass(r.is_saturated()),
            },
            Outcome::Dilation { report } => Verdict::from_pass(report.passed()),
            Outcome::Riesz { verdict, .. } => Verdict::from_pass(verdict.pass),
            Outcome::Expect { pass, .. } => Verdict::from_pass(*pass),
            Outcome::Error { .. } => Verdict::Fail,
        }
    }

    pub fn rows(&self) -> Vec<Row> {
        let row = |relation: &str, lhs, rhs, slack, pass| Row {
            relation: relation.to_string(),
            lhs,
            rhs,
            slack,
            verdict: Verdict::from_pass(pass),
        };
        match self {
            Outcome::Bound { report } => report
                .inequalities
                .iter()
                .map(|i| row(&i.relation, i.lhs, i.rhs, Some(i.slack), i.pass))
                .collect(),
            Outcome::Saturation { result } => match result {
                Saturation::Saturated { f_mixed, f_bar } => {
                    vec![row("f=fbar", *f_mixed, *f_bar, None, true)]
                }
                Saturation::Unsaturated { f_mixed, f_bar } => {
                    vec![row("f=fbar", *f_mixed, *f_bar, None, false)]
                }
                Saturation::Inapplicable {
                    second_eigenvalue, ..
                } => vec![Row {
                    relation: "f=fbar".into(),
                    lhs: *second_eigenvalue,
                    rhs: 0.0,
                    slack: None,
                    verdict: Verdict::Skip,
                }],
            },
            Outcome::Dilation { report } => vec![row(
                "dilation",
                report.max_residual(),
                report.tolerance,
                None,
                report.passed(),
            )],
            Outcome::Riesz { verdict, .. } => vec![row(
                "Riesz",
                verdict.lhs,
                verdict.rhs,
                Some(verdict.slack()),
                verdict.pass,
            )],
            Outcome::Expect {
                value,
                expected,
                range,
                pass,
                ..
            } => {
                let target = expected.unwrap_or_else(|| range.map_or(f64::NAN, |[lo, _]| lo));
                vec![row("expect", *value, target, None, *pass)]
            }
            Outcome::Error { .. } => vec![Row {
                relation: "error".into(),
                lhs: f64::NAN,
                rhs: f64::NAN,
                slack: None,
                verdict: Verdict::Fail,
            }],
        }
    }

    /// Smallest inequality slack, if the outcome has any.
    pub fn min_slack(&self) -> Option<f64> {
        self.rows().iter().filter_map(|r| r.slack).reduce(f64::min)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CheckResult {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub trial: Option<usize>,
    pub check: String,
    pub verdict: Verdict,
    pub outcome: Outcome,
    /// Self-contained scenario reproducing this check; present on failures.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reproducer: Option<ScenarioFile>,
}

impl CheckResult {
    pub fn new(trial: Option<usize>, check: String, outcome: Outcome) -> Self {
        Self {
            trial,
            check,
            verdict: outcome.verdict(),
            outcome,
            reproducer: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct WorstInstance {
    /// Index into `results`.
    pub result: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub trial: Option<usize>,
    pub check: String,
    pub slack: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub instance: Option<ScenarioFile>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Summary {
    pub checks: usize,
    pub passed: usize,
    pub failed: usize,
    pub skipped: usize,
    pub min_slack: Option<f64>,
    pub worst: Option<WorstInstance>,
}

impl Summary {
    pub fn of(results: &[CheckResult]) -> Self {
        let count = |v| results.iter().filter(|r| r.verdict == v).count();
        let mut worst: Option<WorstInstance> = None;
        for (i, r) in results.iter().enumerate() {
            if let Some(slack) = r.outcome.min_slack() {
                if worst.as_ref().map_or(true, |w| slack < w.slack) {
                    worst = Some(WorstInstance {
                        result: i,
                        trial: r.trial,
                        check: r.check.clone(),
                        slack,
                        instance: None,
                    });
                }
            }
        }
        Self {
            checks: results.len(),
            passed: count(Verdict::Pass),
            failed: count(Verdict::Fail),
            skipped: count(Verdict::Skip),
            min_slack: worst.as_ref().map(|w| w.slack),
            worst,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Source {
    Scenario { name: Option<String> },
    Campaign { config: CampaignConfig },
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RunReport {
    pub version: String,
    pub source: Source,
    pub results: Vec<CheckResult>,
    pub summary: Summary,
}

impl RunReport {
    pub fn new(source: Source, results: Vec<CheckResult>) -> Self {
        let summary = Summary::of(&results);
        Self {
            version: REPORT_VERSION.to_string(),
            source,
            results,
            summary,
        }
    }

    pub fn passed(&self) -> bool {
        self.summary.failed == 0
    }
}

fn num(x: f64) -> String {
    if x.is_nan() {
        "-".into()
    } else if x == 0.0 {
        "0.000000".into()
    } else if x.abs() < 1e-4 {
        format!("{x:.3e}")
    } else {
        format!("{x:.6}")
    }
}

fn source_line(source: &Source) -> String {
    match source {
        Source::Scenario { name } => format!("scenario {}", name.as_deref().unwrap_or("(unnamed)")),
        Source::Campaign { config } => format!(
            "campaign seed {} trials {} rng {}",
            config.seed, config.trials, config.rng
        ),
    }
}

pub fn emit_report(report: &RunReport, format: ReportFormat) -> String {
    match format {
        ReportFormat::Json => {
            serde_json::to_string_pretty(report).expect("report serializes") + "\n"
        }
        ReportFormat::Human => emit_human(report),
    }
}

fn emit_human(report: &RunReport) -> String {
    let mut rows: Vec<[String; 6]> = Vec::new();
    for r in &report.results {
        let check = match r.trial {
            Some(t) => format!("#{t} {}", r.check),
            None => r.check.clone(),
        };
        for row in r.outcome.rows() {
            rows.push([
                check.clone(),
                row.relation,
                num(row.lhs),
                num(row.rhs),
                row.slack.map_or_else(|| "-".into(), num),
                row.verdict.as_str().into(),
            ]);
        }
    }
    let header = ["check", "relation", "LHS", "RHS", "slack", "verdict"];
    let mut widths = header.map(str::len);
    for row in &rows {
        for (w, cell) in widths.iter_mut().zip(row) {
            *w = (*w).max(cell.chars().count());
        }
    }
    let mut out = String::new();
    let _ = writeln!(out, "{REPORT_VERSION}  {}", source_line(&report.source));
    let line = |cells: [&str; 6]| -> String {
        let mut s = format!(
            "{:<w0$}  {:<w1$}",
            cells[0],
            cells[1],
            w0 = widths[0],
            w1 = widths[1]
        );
        for (cell, w) in cells[2..5].iter().zip(&widths[2..5]) {
            let _ = write!(s, "  {cell:>w$}");
        }
        let _ = write!(s, "  {}", cells[5]);
        s
    };
    let _ = writeln!(out, "{}", line(header));
    if report.results.is_empty() {
        return out;
    }
    for row in &rows {
        let cells = [&*row[0], &*row[1], &*row[2], &*row[3], &*row[4], &*row[5]];
        let _ = writeln!(out, "{}", line(cells));
    }
    for r in report
        .results
        .iter()
        .filter(|r| matches!(r.outcome, Outcome::Error { .. }))
    {
        if let Outcome::Error { message } = &r.outcome {
            let _ = writeln!(out, "error in {}: {message}", r.check);
        }
    }
    let s = &report.summary;
    let _ = writeln!(
        out,
        "\n{} checks: {} passed, {} failed, {} skipped; min slack {}",
        s.checks,
        s.passed,
        s.failed,
        s.skipped,
        s.min_slack
            .map_or_else(|| "-".into(), |x| format!("{x:.3e}"))
    );
    if let Some(w) = &s.worst {
        let _ = writeln!(out, "worst: {} (slack {:.3e})", w.check, w.slack);
    }
    for r in report.results.iter().filter(|r| r.verdict == Verdict::Fail) {
        if let Some(rep) = &r.reproducer {
            let _ = writeln!(out, "\n--- reproducer: {} ---", r.check);
            let _ = writeln!(
                out,
                "{}",
                serde_json::to_string_pretty(rep).expect("scenario serializes")
            );
            let _ = writeln!(out, "--- end reproducer ---");
        }
    }
    out
}
