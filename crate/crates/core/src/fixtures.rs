//! Small reference instances.

use std::collections::BTreeMap;

use crate::model::{Instance, PlayerId};
use crate::pmf::Pmf;
use crate::rational::{ratio, Rational};

/// Instance file for [`example1`].
pub const EXAMPLE1_JSON: &str = include_str!("../examples/example1.json");

/// Two tasks, deadline 2, groups {1,2} and {3,4}. Players 1 and 3 take 1
/// or 3 time units (3/4, 1/4); players 2 and 4 take 1 or 2 (1/4, 3/4).
pub fn example1() -> Instance {
    let fast = Pmf::new([(1, ratio(3, 4)), (3, ratio(1, 4))]).expect("valid pmf");
    let slow = Pmf::new([(1, ratio(1, 4)), (2, ratio(3, 4))]).expect("valid pmf");
    let players = BTreeMap::from([
        (PlayerId(1), fast.clone()),
        (PlayerId(2), slow.clone()),
        (PlayerId(3), fast),
        (PlayerId(4), slow),
    ]);
    Instance::new(2, Rational::one(), vec![vec![PlayerId(1), PlayerId(2)], vec![PlayerId(3), PlayerId(4)]], players)
        .expect("valid instance")
}
