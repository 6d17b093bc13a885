//! Exact Shapley values of the induced coalitional game.

use itertools::Itertools;

use crate::error::{Error, Result};
use crate::model::{Instance, ReportProfile, RewardVector};
use crate::rational::Rational;
use crate::table::{GameTable, DEFAULT_PLAYER_CAP};

/// Default limit on players for [`shapley_by_permutations`].
pub const DEFAULT_PERMUTATION_CAP: usize = 8;

/// Shapley value of every player under `reports`, scaled by the project
/// value.
pub fn shapley_values(instance: &Instance, reports: &ReportProfile) -> Result<RewardVector> {
    let table = GameTable::new(instance, reports, DEFAULT_PLAYER_CAP)?;
    Ok(shapley_from_table(&table, instance.value()))
}

/// Subset-formula Shapley values on a prepared table.
pub fn shapley_from_table(table: &GameTable, value: &Rational) -> RewardVector {
    (0..table.n()).map(|i| (table.players()[i], player_shapley(table, i) * value)).collect()
}

/// Shapley value of player index `i` in probability units.
pub fn player_shapley(table: &GameTable, i: usize) -> Rational {
    let (plus, minus) = table.marginal_weights(i);
    (0..table.selection_count()).map(|t| (&plus[t] - &minus[t]) * table.selection_value(t)).sum()
}

/// Shapley values as the average marginal contribution over all join
/// orders. Exponential in the player count; capped at `cap` players.
pub fn shapley_by_permutations(instance: &Instance, reports: &ReportProfile, cap: usize) -> Result<RewardVector> {
    let n = instance.player_count();
    if n > cap {
        return Err(Error::CapExceeded { what: "permutation enumeration", n, cap });
    }
    let table = GameTable::new(instance, reports, cap)?;
    // counts[i][t]: net number of orders in which i's arrival moves the
    // realizing selection to/from t
    let sels = table.selection_count();
    let mut counts = vec![vec![0i64; sels]; n];
    for order in (0..n).permutations(n) {
        let mut before = 0usize;
        for &i in &order {
            let after = before | 1 << i;
            if let Some(t) = table.best_selection(after) {
                counts[i][t] += 1;
            }
            if let Some(t) = table.best_selection(before) {
                counts[i][t] -= 1;
            }
            before = after;
        }
    }
    let orders = Rational::from_integer(Rational::factorial(n));
    Ok((0..n)
        .map(|i| {
            let total: Rational = (0..sels)
                .filter(|&t| counts[i][t] != 0)
                .map(|t| Rational::from_integer(counts[i][t]) * table.selection_value(t))
                .sum();
            (table.players()[i], total / &orders * instance.value())
        })
        .collect())
}
