//! Concrete instances realizing the worst-case bound constructions.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::analysis::bounds::BoundScenario;
use crate::error::{Error, Result};
use crate::model::{Instance, PlayerId, ReportProfile};
use crate::pmf::{degenerate_pmf, Duration, Pmf};
use crate::rational::Rational;
use crate::valuation::coalition_value;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Role {
    /// Sole player of its task, or the assigned player of the task that
    /// also holds the dummies.
    Normal,
    /// One of the `k` identical players of the contested task.
    Contested,
    /// Never changes any coalition's value.
    Dummy,
    /// Unassigned extra player tuned to a target Shapley value.
    Extra,
}

#[derive(Clone, Debug)]
pub struct ScenarioInstance {
    pub instance: Instance,
    pub reports: ReportProfile,
    pub roles: BTreeMap<PlayerId, Role>,
}

/// Builds an instance with deadline `m` where every useful player finishes
/// in one unit except the assigned player of the dummies' task, who finishes
/// in one unit with probability `p` and in `support_hint` units otherwise.
/// Dummies always take `support_hint` units.
///
/// Task 0 holds the `k` contenders, task 1 the assigned player and the
/// `n-m-k+1` dummies, the remaining tasks one player each. A positive
/// `epsilon` is only realizable with `k = 1` and `n = m + 1`, where the
/// single extra player finishes in one unit with probability `epsilon·m(m+1)`.
pub fn build_scenario_instance(scenario: &BoundScenario, support_hint: Duration) -> Result<ScenarioInstance> {
    scenario.validate()?;
    let BoundScenario { n, m, k, ref p, ref epsilon } = *scenario;
    let deadline = m as Duration;
    if support_hint <= deadline {
        return Err(Error::Infeasible(format!(
            "support {support_hint} must exceed the deadline {deadline} for dummies to be useless"
        )));
    }
    if n < m + 1 {
        return Err(Error::InvalidScenario(format!("requires n >= m+1, got n={n} m={m}")));
    }
    if n + 1 < m + k {
        return Err(Error::InvalidScenario(format!("k={k} contenders do not fit in n={n} m={m}")));
    }
    if m < 2 && k > 1 {
        return Err(Error::InvalidScenario("k > 1 needs a second task".into()));
    }
    let tuned = epsilon.is_positive();
    if tuned && !(k == 1 && n == m + 1) {
        return Err(Error::Infeasible("a positive epsilon needs k=1 and n=m+1".into()));
    }

    let fast = degenerate_pmf(1)?;
    let slow = degenerate_pmf(support_hint)?;
    let risky = |q: &Rational| -> Result<Pmf> { Pmf::new([(1, q.clone()), (support_hint, Rational::one() - q)]) };

    let mut groups: Vec<Vec<PlayerId>> = Vec::new();
    let mut players = BTreeMap::new();
    let mut roles = BTreeMap::new();
    let mut next = 1u32;
    let mut add = |task: usize, pmf: Pmf, role: Role, groups: &mut Vec<Vec<PlayerId>>| {
        let id = PlayerId(next);
        next += 1;
        if groups.len() <= task {
            groups.resize(task + 1, Vec::new());
        }
        groups[task].push(id);
        players.insert(id, pmf);
        roles.insert(id, role);
    };

    // with a single task the contenders and the assigned player coincide
    let holder_task = if m >= 2 { 1 } else { 0 };
    if m >= 2 {
        for _ in 0..k {
            add(0, fast.clone(), Role::Contested, &mut groups);
        }
    }
    add(holder_task, risky(p)?, Role::Normal, &mut groups);
    if tuned {
        let q = epsilon * Rational::from_integer(m * (m + 1));
        if q > *p {
            return Err(Error::Infeasible(format!("epsilon={epsilon} needs success probability {q} above p={p}")));
        }
        add(holder_task, risky(&q)?, Role::Extra, &mut groups);
    } else {
        for _ in 0..scenario.dummies() {
            add(holder_task, slow.clone(), Role::Dummy, &mut groups);
        }
    }
    for t in 2..m {
        add(t, fast.clone(), Role::Normal, &mut groups);
    }

    let instance = Instance::new(deadline, Rational::one(), groups, players)?;
    let reports = ReportProfile::truthful(&instance);
    let v_n = coalition_value(&instance, &reports, &instance.grand_coalition())?;
    if &v_n != p {
        return Err(Error::Infeasible(format!("built instance has v(N)={v_n}, target p={p}")));
    }
    Ok(ScenarioInstance { instance, reports, roles })
}
