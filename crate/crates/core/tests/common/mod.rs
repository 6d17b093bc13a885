//! Brute-force reference computations. Nothing here reuses the solver's
//! convolution, tables or Shapley code.

#![allow(dead_code)]

use std::collections::BTreeMap;

use itertools::Itertools;
use taskshare::{Instance, PlayerId, Pmf, Rational};

/// Every per-task selection from `members`, lexicographic in id order.
pub fn selections(instance: &Instance, members: &[PlayerId]) -> Vec<Vec<PlayerId>> {
    instance
        .groups()
        .iter()
        .map(|g| g.iter().copied().filter(|p| members.contains(p)).collect::<Vec<_>>())
        .multi_cartesian_product()
        .collect()
}

/// P(sum <= d) by enumerating every joint outcome.
pub fn joint_probability(pmfs: &[&Pmf], d: u32) -> Rational {
    pmfs.iter()
        .map(|p| p.iter().map(|(e, q)| (e, q.clone())).collect::<Vec<_>>())
        .multi_cartesian_product()
        .filter(|outcome| outcome.iter().map(|(e, _)| *e).sum::<u32>() <= d)
        .map(|outcome| outcome.into_iter().fold(Rational::one(), |acc, (_, q)| acc * q))
        .sum()
}

/// Best selection and value within `members`, lexicographically smallest
/// on ties; `None` when a task is uncovered.
pub fn best(
    instance: &Instance,
    dists: &BTreeMap<PlayerId, Pmf>,
    members: &[PlayerId],
) -> Option<(Vec<PlayerId>, Rational)> {
    if instance.groups().iter().any(|g| !g.iter().any(|p| members.contains(p))) {
        return None;
    }
    let mut out: Option<(Vec<PlayerId>, Rational)> = None;
    for sel in selections(instance, members) {
        let pmfs: Vec<&Pmf> = sel.iter().map(|p| &dists[p]).collect();
        let v = joint_probability(&pmfs, instance.deadline());
        if out.as_ref().is_none_or(|(_, b)| v > *b) {
            out = Some((sel, v));
        }
    }
    out
}

pub fn value(instance: &Instance, dists: &BTreeMap<PlayerId, Pmf>, members: &[PlayerId]) -> Rational {
    best(instance, dists, members).map_or_else(Rational::zero, |(_, v)| v)
}

/// Shapley values by walking every join order with brute-force values.
pub fn shapley(instance: &Instance, dists: &BTreeMap<PlayerId, Pmf>) -> BTreeMap<PlayerId, Rational> {
    let players: Vec<PlayerId> = instance.players().collect();
    let mut memo: BTreeMap<Vec<PlayerId>, Rational> = BTreeMap::new();
    let mut v = |s: &[PlayerId]| -> Rational {
        let mut key = s.to_vec();
        key.sort();
        memo.entry(key.clone()).or_insert_with(|| value(instance, dists, &key)).clone()
    };
    let mut totals: BTreeMap<PlayerId, Rational> = players.iter().map(|p| (*p, Rational::zero())).collect();
    let mut orders = 0i64;
    for order in players.iter().copied().permutations(players.len()) {
        orders += 1;
        for k in 0..order.len() {
            let gain = v(&order[..=k]) - v(&order[..k]);
            *totals.get_mut(&order[k]).unwrap() += gain;
        }
    }
    let n = Rational::from_integer(orders);
    totals.into_iter().map(|(p, t)| (p, t / &n)).collect()
}

/// Expected SEV reward of assigned player `i` under truthful reports,
/// summing the verified formula over `i`'s realizations and all subsets.
pub fn sev_expected(instance: &Instance, i: PlayerId) -> Rational {
    let dists = instance.distributions();
    let others: Vec<PlayerId> = instance.players().filter(|p| *p != i).collect();
    let n = instance.player_count();
    let fact = |k: usize| -> Rational { Rational::from_integer((1..=k as i64).product::<i64>()) };
    let mut total = Rational::zero();
    for (e, q) in dists[&i].iter() {
        let mut x = Rational::zero();
        for size in 0..=others.len() {
            for s in others.iter().copied().combinations(size) {
                let w = fact(size) * fact(n - size - 1) / fact(n);
                let mut with_i = s.clone();
                with_i.push(i);
                let realized = match best(instance, dists, &with_i) {
                    Some((sel, _)) => {
                        let point = taskshare::degenerate_pmf(e).unwrap();
                        let pmfs: Vec<&Pmf> = sel.iter().map(|p| if *p == i { &point } else { &dists[p] }).collect();
                        joint_probability(&pmfs, instance.deadline())
                    }
                    None => Rational::zero(),
                };
                x += w * (realized - value(instance, dists, &s));
            }
        }
        total += q * x;
    }
    total
}
