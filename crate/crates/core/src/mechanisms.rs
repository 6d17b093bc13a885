//! Reward-sharing mechanisms and their expected payouts.
//!
//! Players assigned a task in the grand coalition are paid on their
//! observed duration, which enters as a point-mass distribution while every
//! other player keeps its report. All rewards are scaled by the project
//! value and may be negative.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{Assignment, Instance, PlayerId, Realization, ReportProfile, RewardVector};
use crate::pmf::{degenerate_pmf, Duration, Pmf};
use crate::rational::Rational;
use crate::shapley::player_shapley;
use crate::table::{GameTable, DEFAULT_PLAYER_CAP};
use crate::valuation::deadline_probability;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MechanismKind {
    /// Plain Shapley value of the reported game.
    Shapley,
    /// Shapley with execution verification.
    Sev,
    /// SEV plus a bonus for players left without a task.
    Sevb,
    /// VCG with execution verification.
    Vcgev,
    /// Project value split evenly when the project finishes on time.
    #[serde(rename = "equal")]
    EqualSplit,
}

impl MechanismKind {
    pub const ALL: [MechanismKind; 5] = [
        MechanismKind::Shapley,
        MechanismKind::Sev,
        MechanismKind::Sevb,
        MechanismKind::Vcgev,
        MechanismKind::EqualSplit,
    ];

    pub fn name(self) -> &'static str {
        match self {
            MechanismKind::Shapley => "shapley",
            MechanismKind::Sev => "sev",
            MechanismKind::Sevb => "sevb",
            MechanismKind::Vcgev => "vcgev",
            MechanismKind::EqualSplit => "equal",
        }
    }
}

impl fmt::Display for MechanismKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for MechanismKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<MechanismKind> {
        MechanismKind::ALL
            .into_iter()
            .find(|k| k.name().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| Error::Parse(format!("unknown mechanism {s:?}")))
    }
}

/// Evaluates every mechanism for one report profile.
pub struct Evaluator<'a> {
    instance: &'a Instance,
    table: GameTable,
}

impl<'a> Evaluator<'a> {
    pub fn new(instance: &'a Instance, reports: &ReportProfile) -> Result<Evaluator<'a>> {
        Evaluator::with_cap(instance, reports, DEFAULT_PLAYER_CAP)
    }

    pub fn with_cap(instance: &'a Instance, reports: &ReportProfile, cap: usize) -> Result<Evaluator<'a>> {
        Ok(Evaluator { instance, table: GameTable::new(instance, reports, cap)? })
    }

    pub fn table(&self) -> &GameTable {
        &self.table
    }

    /// Grand-coalition value v(N) under the reports.
    pub fn grand_value(&self) -> &Rational {
        self.table.value(self.table.grand())
    }

    pub fn grand_assignment(&self) -> Assignment {
        self.table.assignment(self.table.grand())
    }

    fn grand_selection(&self) -> &[usize] {
        self.table.grand_selection().expect("every task group is non-empty")
    }

    fn is_assigned(&self, i: usize) -> bool {
        self.grand_selection().contains(&i)
    }

    fn scale(&self, x: Rational) -> Rational {
        x * self.instance.value()
    }

    /// Verified Shapley terms for assigned player `i`, for each realized
    /// duration in `durations`.
    fn sev_assigned(&self, i: usize, durations: &[Duration]) -> Vec<Rational> {
        let (plus, minus) = self.table.marginal_weights(i);
        let baseline: Rational = (0..self.table.selection_count())
            .filter(|&t| !minus[t].is_zero())
            .map(|t| &minus[t] * self.table.selection_value(t))
            .sum();
        durations
            .iter()
            .map(|&e| {
                let point = degenerate_pmf(e).expect("durations are positive");
                let realized: Rational = (0..self.table.selection_count())
                    .filter(|&t| !plus[t].is_zero())
                    .map(|t| &plus[t] * self.table.selection_value_with(t, i, &point))
                    .sum();
                realized - &baseline
            })
            .collect()
    }

    /// Shapley value of unassigned `j` after its report is replaced by the
    /// report of the player holding `j`'s task.
    fn sevb_unassigned(&self, j: usize) -> Rational {
        let task = (0..self.table.task_count())
            .find(|&t| self.table.group(t).contains(&j))
            .expect("player belongs to a group");
        let holder = self.grand_selection()[task];
        let holder_report = self.table.report(holder);
        if holder_report == self.table.report(j) {
            return player_shapley(&self.table, j);
        }
        let substituted = self.table.with_report(j, holder_report.clone());
        player_shapley(&substituted, j)
    }

    fn vcgev_assigned(&self, i: usize, durations: &[Duration]) -> Vec<Rational> {
        let grand = self.table.grand();
        let t = self.table.best_selection(grand).expect("grand coalition covers every task");
        let without = self.table.value(grand & !(1 << i));
        durations
            .iter()
            .map(|&e| {
                let point = degenerate_pmf(e).expect("durations are positive");
                self.table.selection_value_with(t, i, &point) - without
            })
            .collect()
    }

    fn realized_for(&self, kind: MechanismKind, i: usize, realization: &Realization) -> Result<Rational> {
        let p = self.table.players()[i];
        let observed = || realization.get(p).ok_or(Error::MissingRealization(p));
        let x = match kind {
            MechanismKind::Shapley => player_shapley(&self.table, i),
            MechanismKind::Sev if self.is_assigned(i) => self.sev_assigned(i, &[observed()?]).remove(0),
            MechanismKind::Sev => player_shapley(&self.table, i),
            MechanismKind::Sevb if self.is_assigned(i) => self.sev_assigned(i, &[observed()?]).remove(0),
            MechanismKind::Sevb => self.sevb_unassigned(i),
            MechanismKind::Vcgev if self.is_assigned(i) => self.vcgev_assigned(i, &[observed()?]).remove(0),
            MechanismKind::Vcgev => Rational::zero(),
            MechanismKind::EqualSplit => {
                let total: u64 = self
                    .grand_selection()
                    .iter()
                    .map(|&j| realization.get(self.table.players()[j]).map(u64::from))
                    .sum::<Option<u64>>()
                    .ok_or_else(|| {
                        let missing = self
                            .grand_selection()
                            .iter()
                            .map(|&j| self.table.players()[j])
                            .find(|q| realization.get(*q).is_none())
                            .expect("some assigned player lacks a realization");
                        Error::MissingRealization(missing)
                    })?;
                let finished = total <= u64::from(self.instance.deadline());
                let share = Rational::new(1, self.table.n() as i64);
                if finished {
                    share
                } else {
                    Rational::zero()
                }
            }
        };
        Ok(self.scale(x))
    }

    /// Rewards after execution with observed durations of the assigned
    /// players.
    pub fn realized(&self, kind: MechanismKind, realization: &Realization) -> Result<RewardVector> {
        realization.check_against(&self.grand_assignment())?;
        (0..self.table.n()).map(|i| Ok((self.table.players()[i], self.realized_for(kind, i, realization)?))).collect()
    }

    /// Expected reward of player `p` when durations follow the instance's
    /// true distributions.
    pub fn expected_for(&self, kind: MechanismKind, p: PlayerId) -> Result<Rational> {
        let i = self.table.index_of(p)?;
        let truth = self.instance.true_pmf(p)?;
        let over_truth =
            |values: Vec<Rational>| -> Rational { truth.iter().zip(values).map(|((_, q), x)| q * x).sum() };
        let durations: Vec<Duration> = truth.support().collect();
        let x = match kind {
            MechanismKind::Shapley => player_shapley(&self.table, i),
            MechanismKind::Sev | MechanismKind::Sevb if self.is_assigned(i) => {
                over_truth(self.sev_assigned(i, &durations))
            }
            MechanismKind::Sev => player_shapley(&self.table, i),
            MechanismKind::Sevb => self.sevb_unassigned(i),
            MechanismKind::Vcgev if self.is_assigned(i) => over_truth(self.vcgev_assigned(i, &durations)),
            MechanismKind::Vcgev => Rational::zero(),
            MechanismKind::EqualSplit => {
                let pmfs = self
                    .grand_selection()
                    .iter()
                    .map(|&j| self.instance.true_pmf(self.table.players()[j]))
                    .collect::<Result<Vec<&Pmf>>>()?;
                deadline_probability(&pmfs, self.instance.deadline()) / Rational::from_integer(self.table.n())
            }
        };
        Ok(self.scale(x))
    }

    pub fn expected(&self, kind: MechanismKind) -> Result<RewardVector> {
        let rows = self
            .table
            .players()
            .par_iter()
            .map(|&p| Ok((p, self.expected_for(kind, p)?)))
            .collect::<Result<Vec<_>>>()?;
        Ok(rows.into_iter().collect())
    }
}

pub fn sev_rewards(instance: &Instance, reports: &ReportProfile, realization: &Realization) -> Result<RewardVector> {
    Evaluator::new(instance, reports)?.realized(MechanismKind::Sev, realization)
}

pub fn sevb_rewards(instance: &Instance, reports: &ReportProfile, realization: &Realization) -> Result<RewardVector> {
    Evaluator::new(instance, reports)?.realized(MechanismKind::Sevb, realization)
}

pub fn vcgev_rewards(instance: &Instance, reports: &ReportProfile, realization: &Realization) -> Result<RewardVector> {
    Evaluator::new(instance, reports)?.realized(MechanismKind::Vcgev, realization)
}

/// `V/n` to everyone if the project finished on time, nothing otherwise.
pub fn equal_split_rewards(instance: &Instance, project_finished: bool) -> RewardVector {
    let share = if project_finished {
        instance.value() / Rational::from_integer(instance.player_count())
    } else {
        Rational::zero()
    };
    instance.players().map(|p| (p, share.clone())).collect()
}

/// Expected rewards under `reports` when durations follow the instance's
/// true distributions.
pub fn expected_rewards(kind: MechanismKind, instance: &Instance, reports: &ReportProfile) -> Result<RewardVector> {
    Evaluator::new(instance, reports)?.expected(kind)
}
