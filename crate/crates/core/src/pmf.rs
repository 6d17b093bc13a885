//! Discrete completion-time distributions.

use std::collections::BTreeMap;
use std::fmt;

use serde::{de, Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::rational::Rational;

/// Task duration in whole time units, always at least 1.
pub type Duration = u32;

/// Probability mass function over positive integer durations.
///
/// Zero-mass points are dropped on construction, every remaining mass is
/// positive and the masses sum to exactly one.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Pmf {
    mass: BTreeMap<Duration, Rational>,
}

impl Pmf {
    pub fn new<I>(points: I) -> Result<Pmf>
    where
        I: IntoIterator<Item = (Duration, Rational)>,
    {
        let mut mass = BTreeMap::new();
        for (e, p) in points {
            if e == 0 {
                return Err(Error::InvalidPmf("duration 0 is not allowed".into()));
            }
            if p.is_negative() {
                return Err(Error::InvalidPmf(format!("negative mass {p} at {e}")));
            }
            if mass.contains_key(&e) {
                return Err(Error::InvalidPmf(format!("duplicate duration {e}")));
            }
            if !p.is_zero() {
                mass.insert(e, p);
            }
        }
        let total: Rational = mass.values().sum();
        if total != Rational::one() {
            return Err(Error::InvalidPmf(format!("masses sum to {total}, not 1")));
        }
        Ok(Pmf { mass })
    }

    /// Normalizes non-negative integer weights; `weights[k]` is the weight of
    /// duration `k + 1`.
    pub fn from_weights(weights: &[u64]) -> Result<Pmf> {
        let total: u64 = weights.iter().sum();
        if total == 0 {
            return Err(Error::InvalidPmf("all weights are zero".into()));
        }
        Pmf::new(weights.iter().enumerate().map(|(k, &w)| (k as Duration + 1, Rational::new(w, total))))
    }

    pub fn uniform(support: Duration) -> Result<Pmf> {
        Pmf::from_weights(&vec![1; support as usize])
    }

    pub fn prob(&self, e: Duration) -> Rational {
        self.mass.get(&e).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn iter(&self) -> impl Iterator<Item = (Duration, &Rational)> + '_ {
        self.mass.iter().map(|(&e, p)| (e, p))
    }

    pub fn support(&self) -> impl Iterator<Item = Duration> + '_ {
        self.mass.keys().copied()
    }

    pub fn min_duration(&self) -> Duration {
        *self.mass.keys().next().expect("non-empty pmf")
    }

    pub fn max_duration(&self) -> Duration {
        *self.mass.keys().next_back().expect("non-empty pmf")
    }

    pub fn len(&self) -> usize {
        self.mass.len()
    }

    pub fn is_empty(&self) -> bool {
        self.mass.is_empty()
    }

    pub fn is_degenerate(&self) -> bool {
        self.mass.len() == 1
    }

    /// P(duration <= t).
    pub fn cdf(&self, t: Duration) -> Rational {
        self.mass.range(..=t).map(|(_, p)| p).sum()
    }

    /// First-order stochastic dominance: `self` finishes no later than
    /// `other` at every threshold.
    pub fn dominates(&self, other: &Pmf) -> bool {
        let hi = self.max_duration().max(other.max_duration());
        (1..=hi).all(|t| self.cdf(t) >= other.cdf(t))
    }
}

/// Point mass at `e`, the distribution that encodes an observed duration.
pub fn degenerate_pmf(e: Duration) -> Result<Pmf> {
    if e < 1 {
        return Err(Error::InvalidPmf("degenerate duration must be at least 1".into()));
    }
    Ok(Pmf { mass: BTreeMap::from([(e, Rational::one())]) })
}

impl fmt::Debug for Pmf {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_map().entries(self.mass.iter()).finish()
    }
}

impl fmt::Display for Pmf {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (k, (e, p)) in self.mass.iter().enumerate() {
            if k > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{e}: {p}")?;
        }
        write!(f, "}}")
    }
}

impl Serialize for Pmf {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.mass.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Pmf {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        struct V;
        impl<'de> de::Visitor<'de> for V {
            type Value = Pmf;
            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str("a map from duration to probability")
            }
            fn visit_map<A: de::MapAccess<'de>>(self, mut map: A) -> std::result::Result<Pmf, A::Error> {
                let mut points = Vec::new();
                while let Some((k, p)) = map.next_entry::<String, Rational>()? {
                    let e: Duration = k
                        .trim()
                        .parse()
                        .map_err(|_| de::Error::custom(format!("duration {k:?} is not a positive integer")))?;
                    points.push((e, p));
                }
                Pmf::new(points).map_err(de::Error::custom)
            }
        }
        deserializer.deserialize_map(V)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::ratio;

    #[test]
    fn degenerate_points() {
        let one = degenerate_pmf(1).unwrap();
        assert_eq!(one.prob(1), Rational::one());
        assert_eq!(one.prob(2), Rational::zero());
        let three = degenerate_pmf(3).unwrap();
        assert_eq!(three.iter().map(|(e, p)| (e, p.clone())).collect::<Vec<_>>(), vec![(3, Rational::one())]);
        for e in 1..20 {
            let d = degenerate_pmf(e).unwrap();
            assert_eq!(d.iter().map(|(_, p)| p.clone()).sum::<Rational>(), Rational::one());
        }
        assert!(degenerate_pmf(0).is_err());
    }

    #[test]
    fn rejects_bad_mass() {
        assert!(Pmf::new([(1, ratio(1, 2)), (2, ratio(1, 3))]).is_err());
        assert!(Pmf::new([(0, Rational::one())]).is_err());
        assert!(Pmf::new([(1, ratio(3, 2)), (2, ratio(-1, 2))]).is_err());
        assert!(Pmf::new(Vec::new()).is_err());
    }

    #[test]
    fn drops_zero_mass() {
        let p = Pmf::new([(1, Rational::one()), (2, Rational::zero())]).unwrap();
        assert_eq!(p.len(), 1);
        assert_eq!(p, degenerate_pmf(1).unwrap());
    }

    #[test]
    fn weights_normalize() {
        let p = Pmf::from_weights(&[3, 0, 1]).unwrap();
        assert_eq!(p.prob(1), ratio(3, 4));
        assert_eq!(p.prob(3), ratio(1, 4));
        assert_eq!(p.len(), 2);
    }

    #[test]
    fn dominance() {
        let fast = Pmf::new([(1, ratio(3, 4)), (3, ratio(1, 4))]).unwrap();
        let one = degenerate_pmf(1).unwrap();
        assert!(one.dominates(&fast));
        assert!(!fast.dominates(&one));
        assert!(fast.dominates(&fast));
    }
}
