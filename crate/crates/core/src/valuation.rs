//! Deadline probabilities and the stochastic characteristic function.
//!
//! A coalition's value is the best probability, over every choice of one
//! member per task group, that the chosen players finish all tasks in order
//! by the deadline. The choice is fixed before execution starts.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::model::{Assignment, Coalition, Instance, PlayerId, ReportProfile};
use crate::pmf::{Duration, Pmf};
use crate::rational::Rational;

/// Distribution of elapsed time `0..=deadline`; mass past the deadline is
/// dropped.
#[derive(Clone, Debug)]
struct Elapsed(Vec<Rational>);

impl Elapsed {
    fn start(deadline: Duration) -> Elapsed {
        let mut v = vec![Rational::zero(); deadline as usize + 1];
        v[0] = Rational::one();
        Elapsed(v)
    }

    fn then(&self, pmf: &Pmf) -> Elapsed {
        let d = self.0.len() - 1;
        let mut out = vec![Rational::zero(); d + 1];
        for (t, p) in self.0.iter().enumerate().filter(|(_, p)| !p.is_zero()) {
            for (e, q) in pmf.iter() {
                let u = t + e as usize;
                if u > d {
                    break;
                }
                out[u] += p * q;
            }
        }
        Elapsed(out)
    }

    fn on_time(&self) -> Rational {
        self.0.iter().sum()
    }
}

/// P(sum of independent durations <= d), tasks in list order.
pub fn deadline_probability(pmfs: &[&Pmf], d: Duration) -> Rational {
    pmfs.iter().fold(Elapsed::start(d), |acc, p| acc.then(p)).on_time()
}

/// Scores every selection of one candidate per task, in lexicographic order
/// of candidate index (task 0 most significant). Shared prefixes are
/// convolved once.
pub(crate) fn selection_values(candidates: &[Vec<&Pmf>], d: Duration) -> Vec<Rational> {
    fn walk(cands: &[Vec<&Pmf>], state: &Elapsed, out: &mut Vec<Rational>) {
        match cands.split_first() {
            None => out.push(state.on_time()),
            Some((first, rest)) => {
                for pmf in first {
                    walk(rest, &state.then(pmf), out);
                }
            }
        }
    }
    if candidates.iter().any(Vec::is_empty) {
        return Vec::new();
    }
    let mut out = Vec::with_capacity(candidates.iter().map(Vec::len).product());
    walk(candidates, &Elapsed::start(d), &mut out);
    out
}

/// Members of `coalition` in each task group, ascending by id.
fn members_by_task(instance: &Instance, coalition: &Coalition) -> Vec<Vec<PlayerId>> {
    instance.groups().iter().map(|g| g.iter().copied().filter(|p| coalition.contains(*p)).collect()).collect()
}

fn check_coalition(instance: &Instance, coalition: &Coalition) -> Result<()> {
    match coalition.members().find(|p| !instance.contains(*p)) {
        Some(p) => Err(Error::UnknownPlayer(p)),
        None => Ok(()),
    }
}

/// Best selection within `coalition` and its value; ties go to the
/// lexicographically smallest id tuple. `None` when a task has no member.
fn best_selection(
    instance: &Instance,
    reports: &ReportProfile,
    coalition: &Coalition,
) -> Result<Option<(Vec<PlayerId>, Rational)>> {
    check_coalition(instance, coalition)?;
    let members = members_by_task(instance, coalition);
    if members.iter().any(Vec::is_empty) {
        return Ok(None);
    }
    let pmfs = members
        .iter()
        .map(|g| g.iter().map(|p| reports.get(*p)).collect::<Result<Vec<_>>>())
        .collect::<Result<Vec<_>>>()?;
    let values = selection_values(&pmfs, instance.deadline());
    let mut best = 0;
    for (k, v) in values.iter().enumerate() {
        if *v > values[best] {
            best = k;
        }
    }
    let mut rest = best;
    let mut picks = vec![PlayerId(0); members.len()];
    for (t, g) in members.iter().enumerate().rev() {
        picks[t] = g[rest % g.len()];
        rest /= g.len();
    }
    Ok(Some((picks, values[best].clone())))
}

/// v(S): highest probability that `coalition` finishes every task by the
/// deadline under the reported distributions. Zero when some task has no
/// capable member.
pub fn coalition_value(instance: &Instance, reports: &ReportProfile, coalition: &Coalition) -> Result<Rational> {
    Ok(best_selection(instance, reports, coalition)?.map_or_else(Rational::zero, |(_, v)| v))
}

/// The selection realizing [`coalition_value`]. Tasks with no member in the
/// coalition are left unassigned; if any task is uncovered the remaining
/// tasks get their lowest-id member, since every selection is then worth 0.
pub fn optimal_assignment(instance: &Instance, reports: &ReportProfile, coalition: &Coalition) -> Result<Assignment> {
    match best_selection(instance, reports, coalition)? {
        Some((picks, _)) => Ok(Assignment::new(picks.into_iter().map(Some).collect())),
        None => Ok(Assignment::new(members_by_task(instance, coalition).iter().map(|g| g.first().copied()).collect())),
    }
}

/// Probability of meeting the deadline with a fixed assignment, scored with
/// `dists`. Zero if any task is unassigned.
pub fn assignment_value(
    instance: &Instance,
    assignment: &Assignment,
    dists: &BTreeMap<PlayerId, Pmf>,
) -> Result<Rational> {
    instance.check_assignment(assignment)?;
    if !assignment.is_complete() {
        return Ok(Rational::zero());
    }
    let pmfs = assignment
        .assigned()
        .map(|p| dists.get(&p).ok_or(Error::MissingDistribution(p)))
        .collect::<Result<Vec<_>>>()?;
    Ok(deadline_probability(&pmfs, instance.deadline()))
}

/// Value of an online policy that may pick each task's performer after
/// seeing how much time has elapsed. Always at least [`coalition_value`].
pub fn adaptive_upper_bound(instance: &Instance, reports: &ReportProfile, coalition: &Coalition) -> Result<Rational> {
    check_coalition(instance, coalition)?;
    let members = members_by_task(instance, coalition);
    if members.iter().any(Vec::is_empty) {
        return Ok(Rational::zero());
    }
    let d = instance.deadline() as usize;
    // on_time[t]: success probability from elapsed time t onwards
    let mut on_time = vec![Rational::one(); d + 1];
    for group in members.iter().rev() {
        let mut next = vec![Rational::zero(); d + 1];
        for (t, slot) in next.iter_mut().enumerate() {
            for p in group {
                let pmf = reports.get(*p)?;
                let v: Rational =
                    pmf.iter().filter(|(e, _)| t + *e as usize <= d).map(|(e, q)| q * &on_time[t + e as usize]).sum();
                if v > *slot {
                    *slot = v;
                }
            }
        }
        on_time = next;
    }
    Ok(on_time[0].clone())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::example1;
    use crate::pmf::degenerate_pmf;
    use crate::rational::ratio;

    fn coalition(inst: &Instance, ids: &[u32]) -> Coalition {
        inst.coalition(ids.iter().map(|&i| PlayerId(i))).unwrap()
    }

    #[test]
    fn example1_deadline_probabilities() {
        let inst = example1();
        let f = |p: u32| inst.true_pmf(PlayerId(p)).unwrap();
        assert_eq!(deadline_probability(&[f(1), f(3)], 2), ratio(9, 16));
        assert_eq!(deadline_probability(&[f(2), f(4)], 2), ratio(1, 16));
        assert_eq!(deadline_probability(&[&degenerate_pmf(1).unwrap()], 1), Rational::one());
    }

    #[test]
    fn example1_coalitions() {
        let inst = example1();
        let r = ReportProfile::truthful(&inst);
        let v = |ids: &[u32]| coalition_value(&inst, &r, &coalition(&inst, ids)).unwrap();
        assert_eq!(v(&[1, 3]), ratio(9, 16));
        assert_eq!(v(&[1, 4]), ratio(3, 16));
        assert_eq!(v(&[1, 2]), Rational::zero());
        assert_eq!(v(&[]), Rational::zero());
    }

    #[test]
    fn example1_assignments() {
        let inst = example1();
        let r = ReportProfile::truthful(&inst);
        let a = |ids: &[u32]| optimal_assignment(&inst, &r, &coalition(&inst, ids)).unwrap();
        let p = |x| Some(PlayerId(x));
        assert_eq!(a(&[1, 2, 3, 4]).slots(), &[p(1), p(3)]);
        assert_eq!(a(&[2, 4]).slots(), &[p(2), p(4)]);
        assert_eq!(a(&[1]).slots(), &[p(1), None]);
        assert_eq!(a(&[]).slots(), &[None, None]);
    }

    #[test]
    fn fixed_assignment_values() {
        let inst = example1();
        let pi = Assignment::new(vec![Some(PlayerId(1)), Some(PlayerId(3))]);
        let mut dists = inst.distributions().clone();
        assert_eq!(assignment_value(&inst, &pi, &dists).unwrap(), ratio(9, 16));
        dists.insert(PlayerId(1), degenerate_pmf(3).unwrap());
        assert_eq!(assignment_value(&inst, &pi, &dists).unwrap(), Rational::zero());
        dists.insert(PlayerId(1), degenerate_pmf(1).unwrap());
        assert_eq!(assignment_value(&inst, &pi, &dists).unwrap(), ratio(3, 4));
        dists.remove(&PlayerId(3));
        assert!(matches!(assignment_value(&inst, &pi, &dists), Err(Error::MissingDistribution(PlayerId(3)))));
        let partial = Assignment::new(vec![Some(PlayerId(1)), None]);
        assert_eq!(assignment_value(&inst, &partial, inst.distributions()).unwrap(), Rational::zero());
        let wrong = Assignment::new(vec![Some(PlayerId(3)), Some(PlayerId(1))]);
        assert!(assignment_value(&inst, &wrong, inst.distributions()).is_err());
    }

    #[test]
    fn adaptive_bound_dominates() {
        let inst = example1();
        let r = ReportProfile::truthful(&inst);
        let all = inst.grand_coalition();
        assert!(adaptive_upper_bound(&inst, &r, &all).unwrap() >= ratio(9, 16));
        assert_eq!(adaptive_upper_bound(&inst, &r, &coalition(&inst, &[2, 4])).unwrap(), ratio(1, 16));
        assert_eq!(adaptive_upper_bound(&inst, &r, &coalition(&inst, &[1])).unwrap(), Rational::zero());
    }

    #[test]
    fn unknown_member_rejected() {
        let inst = example1();
        let r = ReportProfile::truthful(&inst);
        let bogus = Coalition::empty().with(PlayerId(9));
        assert!(coalition_value(&inst, &r, &bogus).is_err());
    }
}
