//! Scenario files, the built-in regression scenario, seeded campaigns, and
//! report emission.

pub mod campaign;
pub mod ensemble;
pub mod report;
pub mod rng;
pub mod run;
pub mod scenario;

pub use campaign::{run_campaign, sample_trial, CampaignCheck, CampaignConfig};
pub use ensemble::EnsembleKind;
pub use report::{emit_report, CheckResult, Outcome, ReportFormat, RunReport, Verdict};
pub use run::verify_scenario;
pub use scenario::{
    builtin_discrimination_scenario, load_scenario, parse_scenario, save_scenario, CheckSpec,
    Scenario, ScenarioFile, Tolerances,
};
