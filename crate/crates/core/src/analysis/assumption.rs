use serde::Serialize;

use crate::error::Result;
use crate::model::{Instance, PlayerId, ReportProfile};
use crate::rational::Rational;
use crate::shapley::player_shapley;
use crate::table::GameTable;

/// A group member whose Shapley value exceeds the assigned player's.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub task: usize,
    pub assigned: PlayerId,
    pub rival: PlayerId,
    pub assigned_value: Rational,
    pub rival_value: Rational,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AssumptionReport {
    pub holds: bool,
    pub violations: Vec<Violation>,
}

/// Checks that in the grand coalition each task's assigned player has a
/// Shapley value at least as high as every other member of its group.
pub fn check_assumption(instance: &Instance, reports: &ReportProfile, cap: usize) -> Result<AssumptionReport> {
    let table = GameTable::new(instance, reports, cap)?;
    Ok(check_on_table(&table))
}

pub fn check_on_table(table: &GameTable) -> AssumptionReport {
    let shapley: Vec<Rational> = (0..table.n()).map(|i| player_shapley(table, i)).collect();
    let chosen = table.grand_selection().expect("grand coalition covers every task").to_vec();
    let mut violations = Vec::new();
    for (task, &holder) in chosen.iter().enumerate() {
        for &j in table.group(task) {
            if shapley[j] > shapley[holder] {
                violations.push(Violation {
                    task,
                    assigned: table.players()[holder],
                    rival: table.players()[j],
                    assigned_value: shapley[holder].clone(),
                    rival_value: shapley[j].clone(),
                });
            }
        }
    }
    AssumptionReport { holds: violations.is_empty(), violations }
}
