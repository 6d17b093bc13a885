//! Whole-game evaluation of the characteristic function.
//!
//! Every selection (one player per task) is scored once. Selections are
//! ranked by value, ties broken by lexicographic id order, and a subset
//! minimum over ranks gives, for every coalition bitmask, the selection that
//! realizes its value. Marginal-contribution sums then reduce to integer
//! counts per selection.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::model::{Assignment, Instance, PlayerId, ReportProfile};
use crate::pmf::{Duration, Pmf};
use crate::rational::Rational;
use crate::valuation::{deadline_probability, selection_values};

/// Hard limit imposed by the bitmask tables.
pub const MAX_PLAYERS: usize = 24;

/// Default limit for exact Shapley computations.
pub const DEFAULT_PLAYER_CAP: usize = 12;

const NONE: u32 = u32::MAX;

/// Dense bitmask of a coalition, bit `b` for the `b`-th player by id.
pub type Mask = usize;

#[derive(Clone, Debug)]
pub struct GameTable {
    players: Vec<PlayerId>,
    index: BTreeMap<PlayerId, usize>,
    groups: Vec<Vec<usize>>,
    deadline: Duration,
    reports: Vec<Pmf>,
    selections: Vec<Vec<usize>>,
    selection_masks: Vec<Mask>,
    selection_values: Vec<Rational>,
    best: Vec<u32>,
    zero: Rational,
}

impl GameTable {
    pub fn new(instance: &Instance, reports: &ReportProfile, cap: usize) -> Result<GameTable> {
        let n = instance.player_count();
        let cap = cap.min(MAX_PLAYERS);
        if n > cap {
            return Err(Error::CapExceeded { what: "game", n, cap });
        }
        let players: Vec<PlayerId> = instance.players().collect();
        let index: BTreeMap<PlayerId, usize> = players.iter().enumerate().map(|(i, p)| (*p, i)).collect();
        let groups = instance.groups().iter().map(|g| g.iter().map(|p| index[p]).collect()).collect();
        let reports = players.iter().map(|p| reports.get(*p).cloned()).collect::<Result<Vec<_>>>()?;
        let mut table = GameTable {
            players,
            index,
            groups,
            deadline: instance.deadline(),
            reports,
            selections: Vec::new(),
            selection_masks: Vec::new(),
            selection_values: Vec::new(),
            best: Vec::new(),
            zero: Rational::zero(),
        };
        table.build();
        Ok(table)
    }

    fn build(&mut self) {
        let candidates: Vec<Vec<&Pmf>> =
            self.groups.iter().map(|g| g.iter().map(|&i| &self.reports[i]).collect()).collect();
        self.selection_values = selection_values(&candidates, self.deadline);
        self.selections = Vec::with_capacity(self.selection_values.len());
        for mut code in 0..self.selection_values.len() {
            let mut sel = vec![0; self.groups.len()];
            for (t, g) in self.groups.iter().enumerate().rev() {
                sel[t] = g[code % g.len()];
                code /= g.len();
            }
            self.selections.push(sel);
        }
        self.selection_masks = self.selections.iter().map(|s| s.iter().fold(0, |m, &i| m | 1 << i)).collect();

        let mut order: Vec<usize> = (0..self.selections.len()).collect();
        order.sort_by(|&a, &b| self.selection_values[b].cmp(&self.selection_values[a]).then(a.cmp(&b)));
        let mut rank = vec![NONE; 1usize << self.n()];
        for (r, &t) in order.iter().enumerate() {
            rank[self.selection_masks[t]] = r as u32;
        }
        for b in 0..self.n() {
            let bit = 1usize << b;
            for mask in 0..rank.len() {
                if mask & bit != 0 {
                    let sub = rank[mask ^ bit];
                    if sub < rank[mask] {
                        rank[mask] = sub;
                    }
                }
            }
        }
        for r in rank.iter_mut() {
            if *r != NONE {
                *r = order[*r as usize] as u32;
            }
        }
        self.best = rank;
    }

    pub fn n(&self) -> usize {
        self.players.len()
    }

    pub fn task_count(&self) -> usize {
        self.groups.len()
    }

    pub fn players(&self) -> &[PlayerId] {
        &self.players
    }

    pub fn index_of(&self, p: PlayerId) -> Result<usize> {
        self.index.get(&p).copied().ok_or(Error::UnknownPlayer(p))
    }

    pub fn grand(&self) -> Mask {
        (1usize << self.n()) - 1
    }

    pub fn report(&self, i: usize) -> &Pmf {
        &self.reports[i]
    }

    pub fn group(&self, task: usize) -> &[usize] {
        &self.groups[task]
    }

    pub fn selection_count(&self) -> usize {
        self.selections.len()
    }

    pub fn selection(&self, t: usize) -> &[usize] {
        &self.selections[t]
    }

    pub fn selection_value(&self, t: usize) -> &Rational {
        &self.selection_values[t]
    }

    pub fn selection_contains(&self, t: usize, i: usize) -> bool {
        self.selection_masks[t] >> i & 1 == 1
    }

    /// Index of the selection realizing v(mask), `None` if some task is
    /// uncovered.
    pub fn best_selection(&self, mask: Mask) -> Option<usize> {
        match self.best[mask] {
            NONE => None,
            t => Some(t as usize),
        }
    }

    pub fn value(&self, mask: Mask) -> &Rational {
        match self.best_selection(mask) {
            Some(t) => &self.selection_values[t],
            None => &self.zero,
        }
    }

    pub fn assignment(&self, mask: Mask) -> Assignment {
        let slots = match self.best_selection(mask) {
            Some(t) => self.selections[t].iter().map(|&i| Some(self.players[i])).collect(),
            None => {
                self.groups.iter().map(|g| g.iter().find(|&&i| mask >> i & 1 == 1).map(|&i| self.players[i])).collect()
            }
        };
        Assignment::new(slots)
    }

    /// Player indices assigned under the grand coalition's selection.
    pub fn grand_selection(&self) -> Option<&[usize]> {
        self.best_selection(self.grand()).map(|t| self.selections[t].as_slice())
    }

    /// Value of selection `t` with player `i`'s distribution replaced.
    pub fn selection_value_with(&self, t: usize, i: usize, pmf: &Pmf) -> Rational {
        if !self.selection_contains(t, i) {
            return self.selection_values[t].clone();
        }
        let pmfs: Vec<&Pmf> = self.selections[t].iter().map(|&j| if j == i { pmf } else { &self.reports[j] }).collect();
        deadline_probability(&pmfs, self.deadline)
    }

    /// Same game with player `i`'s report replaced.
    pub fn with_report(&self, i: usize, pmf: Pmf) -> GameTable {
        let mut next = self.clone();
        next.reports[i] = pmf;
        next.build();
        next
    }

    /// Shapley weights of the two marginal terms for player `i`.
    ///
    /// `plus[t]` sums |S|!(n-|S|-1)!/n! over coalitions S without `i` whose
    /// union with `i` is realized by selection `t`; `minus[t]` does the same
    /// for S itself. Uncovered coalitions contribute nothing.
    pub fn marginal_weights(&self, i: usize) -> (Vec<Rational>, Vec<Rational>) {
        let n = self.n();
        let sels = self.selections.len();
        let bit = 1usize << i;
        let mut plus = vec![vec![0i64; sels]; n];
        let mut minus = vec![vec![0i64; sels]; n];
        for mask in 0..1usize << n {
            if mask & bit != 0 {
                continue;
            }
            let s = mask.count_ones() as usize;
            if let Some(t) = self.best_selection(mask | bit) {
                plus[s][t] += 1;
            }
            if let Some(t) = self.best_selection(mask) {
                minus[s][t] += 1;
            }
        }
        let weights = shapley_weights(n);
        let nfact = Rational::factorial(n);
        let fold = |counts: &Vec<Vec<i64>>| -> Vec<Rational> {
            (0..sels)
                .map(|t| {
                    let num = counts
                        .iter()
                        .zip(&weights)
                        .filter(|(c, _)| c[t] != 0)
                        .fold(BigInt::zero(), |acc, (c, w)| acc + w * c[t]);
                    Rational::new(num, nfact.clone())
                })
                .collect()
        };
        (fold(&plus), fold(&minus))
    }
}

/// `s!(n-s-1)!` for `s` in `0..n`, the Shapley numerators over `n!`.
pub fn shapley_weights(n: usize) -> Vec<BigInt> {
    (0..n).map(|s| Rational::factorial(s) * Rational::factorial(n - s - 1)).collect()
}
