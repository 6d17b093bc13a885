//! Closed-form totals for SEVB in the worst-case constructions.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::rational::Rational;

/// `n` players, `m` tasks, `k` identical contenders for one task, grand
/// value `p` and the Shapley value `epsilon` of an extra player.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BoundScenario {
    pub n: usize,
    pub m: usize,
    pub k: usize,
    pub p: Rational,
    pub epsilon: Rational,
}

impl BoundScenario {
    pub fn new(n: usize, m: usize, k: usize, p: Rational, epsilon: Rational) -> Result<BoundScenario> {
        let s = BoundScenario { n, m, k, p, epsilon };
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidScenario(m));
        if self.m < 1 || self.n < self.m {
            return bad(format!("need n >= m >= 1, got n={} m={}", self.n, self.m));
        }
        if self.k < 1 {
            return bad("k must be at least 1".into());
        }
        if self.p.is_negative() || self.p > 1 {
            return bad(format!("p={} outside [0, 1]", self.p));
        }
        if self.epsilon.is_negative() {
            return bad(format!("epsilon={} is negative", self.epsilon));
        }
        Ok(())
    }

    /// Dummy players left in the assigned task's group.
    pub fn dummies(&self) -> usize {
        (self.n + 1).saturating_sub(self.m + self.k)
    }
}

fn frac(num: num_bigint::BigInt, den: num_bigint::BigInt) -> Rational {
    Rational::new(num, den)
}

/// sum_{i=1..k} i!(m-1)!/(m+i)!
fn dummy_series(m: usize, k: usize) -> Rational {
    (1..=k).map(|i| frac(Rational::factorial(i) * Rational::factorial(m - 1), Rational::factorial(m + i))).sum()
}

fn bound_factor(n: usize, m: usize, k: usize) -> Rational {
    let dummies = Rational::from_integer((n + 1).saturating_sub(m + k));
    Rational::one() + dummy_series(m, k) * dummies
}

/// The maximizing `k` in `1..=max(1, n-m)` and the bound factor it gives.
pub fn sevb_bound_argmax(n: usize, m: usize) -> Result<(usize, Rational)> {
    if m < 1 || n < m {
        return Err(Error::InvalidScenario(format!("need n >= m >= 1, got n={n} m={m}")));
    }
    let mut best = (1, bound_factor(n, m, 1));
    for k in 2..=(n - m).max(1) {
        let f = bound_factor(n, m, k);
        if f > best.1 {
            best = (k, f);
        }
    }
    Ok(best)
}

/// Upper bound on the total SEVB payout given the grand value `v_n`.
pub fn sevb_bound(n: usize, m: usize, v_n: &Rational) -> Result<Rational> {
    Ok(sevb_bound_argmax(n, m)?.1 * v_n)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LemmaOnePrediction {
    /// Shapley value of the assigned player in the contested group.
    pub assigned: Rational,
    /// Shapley value of each other assigned player.
    pub others: Rational,
    /// SEVB reward of the extra, unassigned player.
    pub extra: Rational,
}

impl LemmaOnePrediction {
    pub fn sevb_total(&self, m: usize) -> Rational {
        &self.assigned + &self.others * Rational::from_integer(m - 1) + &self.extra
    }
}

/// One extra player added to an `m`-player, `m`-task team.
pub fn lemma1_predictions(s: &BoundScenario) -> Result<LemmaOnePrediction> {
    s.validate()?;
    if s.k != 1 || s.n != s.m + 1 {
        return Err(Error::InvalidScenario(format!("requires k=1 and n=m+1, got k={} n={} m={}", s.k, s.n, s.m)));
    }
    let m = Rational::from_integer(s.m);
    Ok(LemmaOnePrediction {
        assigned: &s.p / &m - &m * &s.epsilon,
        others: &s.p / &m + &s.epsilon,
        extra: &s.p / (&m * (&m + Rational::one())),
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClosedForms {
    /// Every sole player of its task, and the assigned player of the task
    /// holding the dummies.
    pub normal: Rational,
    /// Each of the `k` identical contenders.
    pub contested: Rational,
    /// SEVB reward of each dummy.
    pub dummy: Rational,
    pub total: Rational,
}

/// Per-player SEVB payouts when one task has `k` identical contenders and
/// another task holds the assigned player plus `n-m-k+1` dummies.
pub fn appendix_closed_forms(s: &BoundScenario) -> Result<ClosedForms> {
    s.validate()?;
    if s.n < s.m + 1 {
        return Err(Error::InvalidScenario(format!("requires n >= m+1, got n={} m={}", s.n, s.m)));
    }
    if s.n + 1 < s.m + s.k {
        return Err(Error::InvalidScenario(format!("k={} contenders do not fit in n={} m={}", s.k, s.n, s.m)));
    }
    if s.m < 2 && s.k > 1 {
        return Err(Error::InvalidScenario("k > 1 needs a second task".into()));
    }
    let (m, k) = (s.m, s.k);
    let mf = Rational::factorial(m - 1);
    let normal: Rational =
        (1..=k).map(|i| frac(Rational::factorial(i - 1) * &mf, Rational::factorial(m + i - 1))).sum::<Rational>()
            * &s.p;
    let contested = frac(Rational::factorial(k - 1) * &mf, Rational::factorial(m + k - 1)) * &s.p;
    let dummy = dummy_series(m, k) * &s.p;
    let total = bound_factor(s.n, m, k) * &s.p;
    Ok(ClosedForms { normal, contested, dummy, total })
}

/// Change in total SEVB payout when one dummy moves to another task group
/// and gains Shapley value `epsilon`.
pub fn dummy_move_delta(n: usize, m: usize, epsilon: &Rational) -> Rational {
    let num = 2 * n as i64 - 3 * m as i64 - 4;
    Rational::new(num, m as i64 + 2) * epsilon
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::ratio;

    fn scenario(n: usize, m: usize, k: usize, p: Rational) -> BoundScenario {
        BoundScenario::new(n, m, k, p, Rational::zero()).unwrap()
    }

    #[test]
    fn bound_values() {
        let p = ratio(9, 16);
        for m in 1..6 {
            assert_eq!(sevb_bound(m, m, &p).unwrap(), p);
        }
        assert_eq!(sevb_bound(3, 2, &p).unwrap(), ratio(7, 6) * &p);
        assert_eq!(bound_factor(4, 2, 1), ratio(8, 6));
        assert_eq!(sevb_bound(4, 2, &Rational::one()).unwrap(), ratio(4, 3));
        assert!(sevb_bound(1, 2, &p).is_err());
        assert!(sevb_bound(0, 0, &p).is_err());
    }

    #[test]
    fn bound_prefers_larger_k_eventually() {
        // k=1 gives 1 + (n-m)/(m(m+1)); more contenders win for large n
        let (k, f) = sevb_bound_argmax(40, 2).unwrap();
        assert!(k > 1);
        assert!(f > bound_factor(40, 2, 1));
    }

    #[test]
    fn lemma_one() {
        let s = scenario(3, 2, 1, ratio(9, 16));
        let pred = lemma1_predictions(&s).unwrap();
        assert_eq!(pred.assigned, ratio(9, 32));
        assert_eq!(pred.others, ratio(9, 32));
        assert_eq!(pred.extra, ratio(9, 96));
        assert_eq!(pred.sevb_total(2), ratio(7, 6) * ratio(9, 16));
        let eps = BoundScenario::new(4, 3, 1, ratio(1, 2), ratio(1, 100)).unwrap();
        let pe = lemma1_predictions(&eps).unwrap();
        assert_eq!(pe.sevb_total(3), (Rational::one() + ratio(1, 12)) * ratio(1, 2) - ratio(1, 100));
        // efficiency: the m team entries plus the extra's epsilon give p
        assert_eq!(&pe.assigned + &pe.others * Rational::from_integer(2) + ratio(1, 100), ratio(1, 2));
        assert_eq!(&pred.assigned + &pred.others, ratio(9, 16));
        assert!(lemma1_predictions(&scenario(4, 2, 1, ratio(1, 2))).is_err());
    }

    #[test]
    fn appendix_forms() {
        let p = ratio(3, 5);
        for m in 2..6 {
            let mr = Rational::from_integer(m);
            let k1 = appendix_closed_forms(&scenario(m + 2, m, 1, p.clone())).unwrap();
            assert_eq!(k1.normal, &p / &mr);
            let k2 = appendix_closed_forms(&scenario(m + 2, m, 2, p.clone())).unwrap();
            assert_eq!(k2.contested, &p / (&mr * (&mr + Rational::one())));
            for k in 1..4 {
                let c = appendix_closed_forms(&scenario(m + 3, m, k, p.clone())).unwrap();
                let shap = &c.normal * Rational::from_integer(m - 1) + &c.contested * Rational::from_integer(k);
                assert_eq!(shap, p, "m={m} k={k}");
            }
        }
        assert!(appendix_closed_forms(&scenario(2, 2, 1, p.clone())).is_err());
        assert!(appendix_closed_forms(&scenario(3, 2, 3, p)).is_err());
    }

    #[test]
    fn move_delta() {
        assert_eq!(dummy_move_delta(7, 3, &Rational::zero()), Rational::zero());
        assert_eq!(dummy_move_delta(5, 2, &ratio(1, 7)), Rational::zero());
        assert_eq!(dummy_move_delta(6, 2, &ratio(1, 7)), ratio(1, 14));
    }

    #[test]
    fn scenario_validation() {
        assert!(BoundScenario::new(1, 2, 1, Rational::one(), Rational::zero()).is_err());
        assert!(BoundScenario::new(3, 2, 0, Rational::one(), Rational::zero()).is_err());
        assert!(BoundScenario::new(3, 2, 1, ratio(3, 2), Rational::zero()).is_err());
        assert!(BoundScenario::new(3, 2, 1, Rational::one(), ratio(-1, 2)).is_err());
    }
}
