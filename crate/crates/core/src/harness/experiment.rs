use std::io::Write;

use rayon::prelude::*;
use serde::Serialize;

use crate::analysis::check_assumption_on_table;
use crate::error::{Error, Result};
use crate::harness::generate::{generate_instance, DeadlinePolicy, PmfStyle};
use crate::mechanisms::{Evaluator, MechanismKind};
use crate::model::ReportProfile;
use crate::pmf::Duration;
use crate::rational::Rational;
use crate::table::{DEFAULT_PLAYER_CAP, MAX_PLAYERS};

#[derive(Clone, Debug)]
pub struct ExperimentConfig {
    pub group_sizes: Vec<usize>,
    pub support: Duration,
    pub deadline: DeadlinePolicy,
    pub instances: usize,
    pub seed: u64,
    pub mechanisms: Vec<MechanismKind>,
    pub style: PmfStyle,
    /// Player limit; raise above the default to allow large campaigns.
    pub player_cap: usize,
}

impl ExperimentConfig {
    pub fn new(group_sizes: Vec<usize>, support: Duration, instances: usize, seed: u64) -> ExperimentConfig {
        ExperimentConfig {
            group_sizes,
            support,
            deadline: DeadlinePolicy::auto(),
            instances,
            seed,
            mechanisms: vec![MechanismKind::Sevb, MechanismKind::Vcgev],
            style: PmfStyle::RandomWeights,
            player_cap: DEFAULT_PLAYER_CAP,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.group_sizes.is_empty() || self.group_sizes.contains(&0) {
            return Err(Error::InvalidConfig("group sizes must be positive".into()));
        }
        if self.support < 1 || self.instances < 1 {
            return Err(Error::InvalidConfig("support and instance count must be at least 1".into()));
        }
        if self.mechanisms.is_empty() {
            return Err(Error::InvalidConfig("no mechanisms selected".into()));
        }
        self.deadline.validate()?;
        let n: usize = self.group_sizes.iter().sum();
        let cap = self.player_cap.min(MAX_PLAYERS);
        if n > cap {
            return Err(Error::CapExceeded { what: "experiment", n, cap });
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExperimentRow {
    pub instance_index: usize,
    pub mechanism: MechanismKind,
    pub total_expected_reward: Rational,
    /// Expected project value `V * v(N, f)`.
    pub value_vn: Rational,
    /// `total / value`, absent when the value is zero.
    pub ratio: Option<Rational>,
    pub assumption_ok: bool,
}

/// Runs every mechanism on `instances` generated instances with truthful
/// reports. Instance `i` uses seed `seed + i`; rows come back in instance
/// order regardless of scheduling.
pub fn run_experiment(config: &ExperimentConfig) -> Result<Vec<ExperimentRow>> {
    config.validate()?;
    let per_instance = (0..config.instances)
        .into_par_iter()
        .map(|index| {
            let instance = generate_instance(
                config.seed.wrapping_add(index as u64),
                &config.group_sizes,
                config.support,
                &config.deadline,
                config.style,
            )?;
            let reports = ReportProfile::truthful(&instance);
            let eval = Evaluator::with_cap(&instance, &reports, config.player_cap)?;
            let value_vn = eval.grand_value() * instance.value();
            let assumption_ok = check_assumption_on_table(eval.table()).holds;
            config
                .mechanisms
                .iter()
                .map(|&mechanism| {
                    let total = eval.expected(mechanism)?.total();
                    let ratio = (!value_vn.is_zero()).then(|| &total / &value_vn);
                    Ok(ExperimentRow {
                        instance_index: index,
                        mechanism,
                        total_expected_reward: total,
                        value_vn: value_vn.clone(),
                        ratio,
                        assumption_ok,
                    })
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(per_instance.into_iter().flatten().collect())
}

/// One CSV line per row; ratios as exact `num/den` and as 6-place decimals.
pub fn write_csv<W: Write>(rows: &[ExperimentRow], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let csv_err = |e: csv::Error| Error::Io(std::io::Error::other(e));
    w.write_record(["instance", "mechanism", "total", "value", "ratio", "ratio_decimal", "assumption_ok"])
        .map_err(csv_err)?;
    for r in rows {
        let (exact, decimal) = match &r.ratio {
            Some(x) => (x.to_string(), x.to_decimal(6)),
            None => (String::new(), String::new()),
        };
        w.write_record([
            r.instance_index.to_string(),
            r.mechanism.to_string(),
            r.total_expected_reward.to_string(),
            r.value_vn.to_string(),
            exact,
            decimal,
            r.assumption_ok.to_string(),
        ])
        .map_err(csv_err)?;
    }
    w.flush()?;
    Ok(())
}
