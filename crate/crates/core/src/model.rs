//! Game instances, report profiles, coalitions and the values that flow
//! between the solver stages.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::pmf::{Duration, Pmf};
use crate::rational::Rational;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct PlayerId(pub u32);

impl fmt::Display for PlayerId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl FromStr for PlayerId {
    type Err = Error;
    fn from_str(s: &str) -> Result<PlayerId> {
        match s.trim().parse::<u32>() {
            Ok(v) if v >= 1 => Ok(PlayerId(v)),
            _ => Err(Error::Parse(format!("player id {s:?} is not a positive integer"))),
        }
    }
}

/// A project of `m` ordered tasks, a deadline, a project value and the
/// players capable of each task together with their true distributions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Instance {
    deadline: Duration,
    value: Rational,
    groups: Vec<Vec<PlayerId>>,
    players: BTreeMap<PlayerId, Pmf>,
    task_of: BTreeMap<PlayerId, usize>,
}

impl Instance {
    /// Groups must partition the player set; each group is stored in
    /// ascending id order and group order is task order.
    pub fn new(
        deadline: Duration,
        value: Rational,
        groups: Vec<Vec<PlayerId>>,
        players: BTreeMap<PlayerId, Pmf>,
    ) -> Result<Instance> {
        let invalid = |msg: String| Err(Error::InvalidInstance(msg));
        if deadline < 1 {
            return invalid("deadline must be at least 1".into());
        }
        if !value.is_positive() {
            return invalid(format!("project value must be positive, got {value}"));
        }
        if groups.is_empty() {
            return invalid("at least one task group is required".into());
        }
        let mut task_of = BTreeMap::new();
        let mut sorted_groups = Vec::with_capacity(groups.len());
        for (t, group) in groups.into_iter().enumerate() {
            if group.is_empty() {
                return invalid(format!("groups[{t}] is empty"));
            }
            for &p in &group {
                if p.0 == 0 {
                    return invalid(format!("groups[{t}]: player id 0 is not allowed"));
                }
                if let Some(prev) = task_of.insert(p, t) {
                    return if prev == t {
                        invalid(format!("groups[{t}]: player {p} listed twice"))
                    } else {
                        invalid(format!("groups[{t}]: player {p} already belongs to groups[{prev}]"))
                    };
                }
            }
            let mut group = group;
            group.sort();
            sorted_groups.push(group);
        }
        for p in players.keys() {
            if !task_of.contains_key(p) {
                return invalid(format!("players[{p}] is not in any group"));
            }
        }
        for p in task_of.keys() {
            if !players.contains_key(p) {
                return invalid(format!("player {p} has no distribution"));
            }
        }
        Ok(Instance { deadline, value, groups: sorted_groups, players, task_of })
    }

    pub fn deadline(&self) -> Duration {
        self.deadline
    }

    pub fn value(&self) -> &Rational {
        &self.value
    }

    pub fn task_count(&self) -> usize {
        self.groups.len()
    }

    pub fn player_count(&self) -> usize {
        self.players.len()
    }

    pub fn groups(&self) -> &[Vec<PlayerId>] {
        &self.groups
    }

    /// Player ids in ascending order.
    pub fn players(&self) -> impl Iterator<Item = PlayerId> + '_ {
        self.players.keys().copied()
    }

    /// True distributions keyed by player.
    pub fn distributions(&self) -> &BTreeMap<PlayerId, Pmf> {
        &self.players
    }

    pub fn true_pmf(&self, p: PlayerId) -> Result<&Pmf> {
        self.players.get(&p).ok_or(Error::UnknownPlayer(p))
    }

    pub fn task_of(&self, p: PlayerId) -> Result<usize> {
        self.task_of.get(&p).copied().ok_or(Error::UnknownPlayer(p))
    }

    pub fn contains(&self, p: PlayerId) -> bool {
        self.task_of.contains_key(&p)
    }

    /// Largest duration with positive mass in any true distribution.
    pub fn max_duration(&self) -> Duration {
        self.players.values().map(Pmf::max_duration).max().unwrap_or(1)
    }

    pub fn grand_coalition(&self) -> Coalition {
        Coalition(self.players.keys().copied().collect())
    }

    pub fn coalition<I: IntoIterator<Item = PlayerId>>(&self, members: I) -> Result<Coalition> {
        let members: BTreeSet<PlayerId> = members.into_iter().collect();
        if let Some(p) = members.iter().find(|p| !self.contains(**p)) {
            return Err(Error::UnknownPlayer(*p));
        }
        Ok(Coalition(members))
    }

    /// Coalition from a bitmask over players in ascending id order.
    pub fn coalition_from_mask(&self, mask: u64) -> Coalition {
        Coalition(self.players.keys().enumerate().filter(|(b, _)| mask >> b & 1 == 1).map(|(_, p)| *p).collect())
    }

    pub fn mask_of(&self, coalition: &Coalition) -> u64 {
        self.players.keys().enumerate().filter(|(_, p)| coalition.contains(**p)).fold(0, |m, (b, _)| m | 1 << b)
    }

    /// Validates that an assignment fits this instance.
    pub fn check_assignment(&self, a: &Assignment) -> Result<()> {
        if a.slots.len() != self.task_count() {
            return Err(Error::InvalidInstance(format!(
                "assignment has {} slots for {} tasks",
                a.slots.len(),
                self.task_count()
            )));
        }
        let mut seen = BTreeSet::new();
        for (t, slot) in a.slots.iter().enumerate() {
            if let Some(p) = slot {
                if self.task_of(*p)? != t {
                    return Err(Error::InvalidInstance(format!("player {p} cannot perform task {t}")));
                }
                if !seen.insert(*p) {
                    return Err(Error::InvalidInstance(format!("player {p} assigned twice")));
                }
            }
        }
        Ok(())
    }
}

/// Reported distributions, one per player of the instance.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReportProfile {
    reports: BTreeMap<PlayerId, Pmf>,
}

impl ReportProfile {
    pub fn new(instance: &Instance, reports: BTreeMap<PlayerId, Pmf>) -> Result<ReportProfile> {
        for p in reports.keys() {
            if !instance.contains(*p) {
                return Err(Error::UnknownPlayer(*p));
            }
        }
        if let Some(p) = instance.players().find(|p| !reports.contains_key(p)) {
            return Err(Error::MissingDistribution(p));
        }
        Ok(ReportProfile { reports })
    }

    pub fn truthful(instance: &Instance) -> ReportProfile {
        ReportProfile { reports: instance.distributions().clone() }
    }

    /// The same profile with one player's report replaced.
    pub fn with_report(&self, player: PlayerId, pmf: Pmf) -> Result<ReportProfile> {
        if !self.reports.contains_key(&player) {
            return Err(Error::UnknownPlayer(player));
        }
        let mut reports = self.reports.clone();
        reports.insert(player, pmf);
        Ok(ReportProfile { reports })
    }

    pub fn get(&self, p: PlayerId) -> Result<&Pmf> {
        self.reports.get(&p).ok_or(Error::MissingDistribution(p))
    }

    pub fn as_map(&self) -> &BTreeMap<PlayerId, Pmf> {
        &self.reports
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Coalition(BTreeSet<PlayerId>);

impl Coalition {
    pub fn empty() -> Coalition {
        Coalition::default()
    }

    pub fn contains(&self, p: PlayerId) -> bool {
        self.0.contains(&p)
    }

    pub fn members(&self) -> impl Iterator<Item = PlayerId> + '_ {
        self.0.iter().copied()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn without(&self, p: PlayerId) -> Coalition {
        let mut s = self.0.clone();
        s.remove(&p);
        Coalition(s)
    }

    pub fn with(&self, p: PlayerId) -> Coalition {
        let mut s = self.0.clone();
        s.insert(p);
        Coalition(s)
    }
}

/// Per-task selection; `None` marks an unassigned task.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Assignment {
    slots: Vec<Option<PlayerId>>,
}

impl Assignment {
    pub fn new(slots: Vec<Option<PlayerId>>) -> Assignment {
        Assignment { slots }
    }

    pub fn slots(&self) -> &[Option<PlayerId>] {
        &self.slots
    }

    pub fn get(&self, task: usize) -> Option<PlayerId> {
        self.slots.get(task).copied().flatten()
    }

    pub fn is_complete(&self) -> bool {
        self.slots.iter().all(Option::is_some)
    }

    pub fn assigned(&self) -> impl Iterator<Item = PlayerId> + '_ {
        self.slots.iter().flatten().copied()
    }

    pub fn is_assigned(&self, p: PlayerId) -> bool {
        self.slots.contains(&Some(p))
    }
}

/// Observed durations of the players who executed a task.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Realization {
    times: BTreeMap<PlayerId, Duration>,
}

impl Realization {
    pub fn new<I: IntoIterator<Item = (PlayerId, Duration)>>(times: I) -> Result<Realization> {
        let mut map = BTreeMap::new();
        for (p, e) in times {
            if e < 1 {
                return Err(Error::InvalidRealization(format!("player {p}: duration must be at least 1")));
            }
            if map.insert(p, e).is_some() {
                return Err(Error::InvalidRealization(format!("player {p} listed twice")));
            }
        }
        Ok(Realization { times: map })
    }

    pub fn get(&self, p: PlayerId) -> Option<Duration> {
        self.times.get(&p).copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = (PlayerId, Duration)> + '_ {
        self.times.iter().map(|(p, e)| (*p, *e))
    }

    /// Keys must be exactly the players assigned by `assignment`.
    pub fn check_against(&self, assignment: &Assignment) -> Result<()> {
        for p in assignment.assigned() {
            if !self.times.contains_key(&p) {
                return Err(Error::MissingRealization(p));
            }
        }
        if let Some(p) = self.times.keys().find(|p| !assignment.is_assigned(**p)) {
            return Err(Error::InvalidRealization(format!("player {p} was not assigned a task")));
        }
        Ok(())
    }
}

impl FromStr for Realization {
    type Err = Error;

    /// Parses `"1=1,3=2"`.
    fn from_str(s: &str) -> Result<Realization> {
        let mut pairs = Vec::new();
        for item in s.split(',').map(str::trim).filter(|t| !t.is_empty()) {
            let (p, e) = item
                .split_once('=')
                .ok_or_else(|| Error::Parse(format!("realization entry {item:?} is not player=duration")))?;
            let e: Duration =
                e.trim().parse().map_err(|_| Error::Parse(format!("realization entry {item:?}: bad duration")))?;
            pairs.push((p.parse()?, e));
        }
        Realization::new(pairs)
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RewardVector {
    rewards: BTreeMap<PlayerId, Rational>,
}

impl RewardVector {
    pub fn new(rewards: BTreeMap<PlayerId, Rational>) -> RewardVector {
        RewardVector { rewards }
    }

    pub fn get(&self, p: PlayerId) -> Option<&Rational> {
        self.rewards.get(&p)
    }

    pub fn iter(&self) -> impl Iterator<Item = (PlayerId, &Rational)> + '_ {
        self.rewards.iter().map(|(p, r)| (*p, r))
    }

    pub fn total(&self) -> Rational {
        self.rewards.values().sum()
    }

    pub fn len(&self) -> usize {
        self.rewards.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rewards.is_empty()
    }

    pub fn as_map(&self) -> &BTreeMap<PlayerId, Rational> {
        &self.rewards
    }
}

impl std::ops::Index<PlayerId> for RewardVector {
    type Output = Rational;
    fn index(&self, p: PlayerId) -> &Rational {
        &self.rewards[&p]
    }
}

impl FromIterator<(PlayerId, Rational)> for RewardVector {
    fn from_iter<I: IntoIterator<Item = (PlayerId, Rational)>>(iter: I) -> Self {
        RewardVector { rewards: iter.into_iter().collect() }
    }
}
