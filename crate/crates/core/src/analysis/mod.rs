//! Incentive checks and closed-form payment bounds.

mod assumption;
mod bounds;
mod deviation;
mod scenario;

pub use assumption::{check_assumption, check_on_table as check_assumption_on_table, AssumptionReport, Violation};
pub use bounds::{
    appendix_closed_forms, dummy_move_delta, lemma1_predictions, sevb_bound, sevb_bound_argmax, BoundScenario,
    ClosedForms, LemmaOnePrediction,
};
pub use deviation::{deviation_search, deviation_search_with_cap, standard_misreport_family, DeviationReport};
pub use scenario::{build_scenario_instance, Role, ScenarioInstance};
