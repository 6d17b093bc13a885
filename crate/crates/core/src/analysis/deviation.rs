//! Finite-family search for profitable misreports.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::mechanisms::{Evaluator, MechanismKind};
use crate::model::{Instance, PlayerId, ReportProfile};
use crate::pmf::{degenerate_pmf, Duration, Pmf};
use crate::rational::Rational;
use crate::table::DEFAULT_PLAYER_CAP;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DeviationReport {
    pub player: PlayerId,
    pub mechanism: MechanismKind,
    pub truthful_expected: Rational,
    pub best_deviation_expected: Rational,
    pub best_deviation: Pmf,
    /// `best_deviation_expected - truthful_expected`.
    pub gain: Rational,
    pub family_size: usize,
}

impl DeviationReport {
    pub fn profitable(&self) -> bool {
        self.gain.is_positive()
    }
}

/// Expected reward of `player` when it reports each member of `family` and
/// everyone else reports truthfully, compared against truthful reporting.
/// Ties between equally good misreports go to the earliest in `family`.
pub fn deviation_search(
    instance: &Instance,
    player: PlayerId,
    kind: MechanismKind,
    family: &[Pmf],
) -> Result<DeviationReport> {
    deviation_search_with_cap(instance, player, kind, family, DEFAULT_PLAYER_CAP)
}

pub fn deviation_search_with_cap(
    instance: &Instance,
    player: PlayerId,
    kind: MechanismKind,
    family: &[Pmf],
    cap: usize,
) -> Result<DeviationReport> {
    if family.is_empty() {
        return Err(Error::EmptyFamily);
    }
    instance.true_pmf(player)?;
    let truthful = ReportProfile::truthful(instance);
    let truthful_expected = Evaluator::with_cap(instance, &truthful, cap)?.expected_for(kind, player)?;
    let outcomes = family
        .par_iter()
        .map(|pmf| {
            let reports = truthful.with_report(player, pmf.clone())?;
            Evaluator::with_cap(instance, &reports, cap)?.expected_for(kind, player)
        })
        .collect::<Result<Vec<Rational>>>()?;
    let mut best = 0;
    for (k, v) in outcomes.iter().enumerate() {
        if *v > outcomes[best] {
            best = k;
        }
    }
    let best_deviation_expected = outcomes[best].clone();
    Ok(DeviationReport {
        player,
        mechanism: kind,
        gain: &best_deviation_expected - &truthful_expected,
        truthful_expected,
        best_deviation_expected,
        best_deviation: family[best].clone(),
        family_size: family.len(),
    })
}

/// Moves mass one step toward duration 1 (`toward_one`) or toward `top`.
/// With `half`, only half of each point's mass moves.
fn shift(pmf: &Pmf, toward_one: bool, half: bool, top: Duration) -> Pmf {
    let mut points: Vec<(Duration, Rational)> = Vec::new();
    let mut add = |e: Duration, q: Rational| match points.iter_mut().find(|(d, _)| *d == e) {
        Some((_, acc)) => *acc += q,
        None => points.push((e, q)),
    };
    for (e, q) in pmf.iter() {
        let target = if toward_one { e.saturating_sub(1).max(1) } else { (e + 1).min(top.max(e)) };
        if half && target != e {
            let h = q / Rational::from_integer(2);
            add(e, h.clone());
            add(target, h);
        } else {
            add(target, q.clone());
        }
    }
    Pmf::new(points).expect("shifting preserves total mass")
}

/// Deterministic misreport family for `player`, excluding its true
/// distribution. With `s` the largest duration in the instance it holds:
/// point masses at `1..=s+1`, every other group member's distribution, the
/// true distribution shifted fully and halfway toward 1 and toward `s`, and
/// `count` random distributions on `1..=s` seeded by `seed`.
pub fn standard_misreport_family(instance: &Instance, player: PlayerId, seed: u64, count: usize) -> Result<Vec<Pmf>> {
    if count == 0 {
        return Err(Error::InvalidConfig("misreport count must be at least 1".into()));
    }
    let truth = instance.true_pmf(player)?;
    let task = instance.task_of(player)?;
    let s = instance.max_duration();
    let mut family: Vec<Pmf> = Vec::new();
    let push = |pmf: Pmf, family: &mut Vec<Pmf>| -> bool {
        if &pmf != truth && !family.contains(&pmf) {
            family.push(pmf);
            true
        } else {
            false
        }
    };
    for e in 1..=s + 1 {
        push(degenerate_pmf(e)?, &mut family);
    }
    for &rival in &instance.groups()[task] {
        if rival != player {
            push(instance.true_pmf(rival)?.clone(), &mut family);
        }
    }
    for (toward_one, half) in [(true, false), (true, true), (false, false), (false, true)] {
        push(shift(truth, toward_one, half, s), &mut family);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ u64::from(player.0).rotate_left(32));
    let mut added = 0;
    let mut attempts = 0;
    while added < count && attempts < count * 100 {
        attempts += 1;
        let weights: Vec<u64> = (0..s).map(|_| rng.gen_range(0..=10)).collect();
        if let Ok(pmf) = Pmf::from_weights(&weights) {
            if push(pmf, &mut family) {
                added += 1;
            }
        }
    }
    Ok(family)
}
