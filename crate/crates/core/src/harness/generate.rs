use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::model::{Instance, PlayerId};
use crate::pmf::{Duration, Pmf};
use crate::rational::{ratio, Rational};

/// How the deadline of a generated instance is chosen.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DeadlinePolicy {
    Fixed(Duration),
    /// `ceil(rho * m * s)`, with `0 < rho <= 1`.
    Fraction(Rational),
}

impl DeadlinePolicy {
    /// `ceil(m * s / 2)`.
    pub fn auto() -> DeadlinePolicy {
        DeadlinePolicy::Fraction(ratio(1, 2))
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            DeadlinePolicy::Fixed(0) => Err(Error::InvalidConfig("deadline must be at least 1".into())),
            DeadlinePolicy::Fraction(r) if !r.is_positive() || *r > 1 => {
                Err(Error::InvalidConfig(format!("deadline fraction {r} outside (0, 1]")))
            }
            _ => Ok(()),
        }
    }

    pub fn deadline(&self, tasks: usize, support: Duration) -> Duration {
        match self {
            DeadlinePolicy::Fixed(d) => *d,
            DeadlinePolicy::Fraction(r) => {
                let d = (r * Rational::from_integer(tasks as u64 * u64::from(support))).ceil_to_integer();
                u32::try_from(d).unwrap_or(u32::MAX).max(1)
            }
        }
    }
}

impl FromStr for DeadlinePolicy {
    type Err = Error;

    /// `auto`, an integer deadline, or a fraction such as `0.5`/`1/2`
    /// prefixed with `frac:`.
    fn from_str(s: &str) -> Result<DeadlinePolicy> {
        let s = s.trim();
        let policy = if s.eq_ignore_ascii_case("auto") {
            DeadlinePolicy::auto()
        } else if let Some(r) = s.strip_prefix("frac:") {
            DeadlinePolicy::Fraction(r.parse()?)
        } else {
            DeadlinePolicy::Fixed(s.parse().map_err(|_| Error::Parse(format!("bad deadline {s:?}")))?)
        };
        policy.validate()?;
        Ok(policy)
    }
}

impl fmt::Display for DeadlinePolicy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DeadlinePolicy::Fixed(d) => write!(f, "{d}"),
            DeadlinePolicy::Fraction(r) => write!(f, "frac:{r}"),
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum PmfStyle {
    /// Integer weights drawn uniformly from 1..=10, normalized.
    #[default]
    RandomWeights,
    /// Equal mass on every duration.
    Uniform,
}

/// Reproducible random instance: players are numbered from 1 in group
/// order and each gets a distribution over `1..=support`.
pub fn generate_instance(
    seed: u64,
    group_sizes: &[usize],
    support: Duration,
    deadline: &DeadlinePolicy,
    style: PmfStyle,
) -> Result<Instance> {
    if group_sizes.is_empty() || group_sizes.contains(&0) {
        return Err(Error::InvalidConfig("every task needs at least one player".into()));
    }
    if support < 1 {
        return Err(Error::InvalidConfig("support must be at least 1".into()));
    }
    deadline.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut groups = Vec::with_capacity(group_sizes.len());
    let mut players = BTreeMap::new();
    let mut next = 1u32;
    for &size in group_sizes {
        let mut group = Vec::with_capacity(size);
        for _ in 0..size {
            let pmf = match style {
                PmfStyle::RandomWeights => {
                    let w: Vec<u64> = (0..support).map(|_| rng.gen_range(1..=10)).collect();
                    Pmf::from_weights(&w)?
                }
                PmfStyle::Uniform => Pmf::uniform(support)?,
            };
            players.insert(PlayerId(next), pmf);
            group.push(PlayerId(next));
            next += 1;
        }
        groups.push(group);
    }
    Instance::new(deadline.deadline(group_sizes.len(), support), Rational::one(), groups, players)
}
