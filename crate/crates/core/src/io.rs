//! JSON instance files.
//!
//! ```json
//! {"deadline": 2, "value": "1", "groups": [[1,2],[3,4]],
//!  "players": {"1": {"1": "3/4", "3": "1/4"}, ...}}
//! ```
//!
//! Rationals are `"num/den"` strings, player ids are positive integers and
//! group order is task order. `value` defaults to 1.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{Instance, PlayerId, ReportProfile};
use crate::pmf::Pmf;
use crate::rational::Rational;

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawInstance {
    deadline: u32,
    #[serde(default = "Rational::one")]
    value: Rational,
    groups: Vec<Vec<PlayerId>>,
    players: BTreeMap<String, Pmf>,
}

#[derive(Serialize)]
struct CanonicalInstance<'a> {
    deadline: u32,
    value: &'a Rational,
    groups: &'a [Vec<PlayerId>],
    players: &'a BTreeMap<PlayerId, Pmf>,
}

fn player_key(key: &str, field: &str) -> Result<PlayerId> {
    key.parse().map_err(|_| Error::Parse(format!("{field}[{key:?}]: player id must be a positive integer")))
}

fn json_error(e: serde_json::Error) -> Error {
    Error::Parse(e.to_string())
}

pub fn parse_instance(text: &str) -> Result<Instance> {
    let raw: RawInstance = serde_json::from_str(text).map_err(json_error)?;
    let players = raw
        .players
        .into_iter()
        .map(|(k, pmf)| Ok((player_key(&k, "players")?, pmf)))
        .collect::<Result<BTreeMap<_, _>>>()?;
    Instance::new(raw.deadline, raw.value, raw.groups, players)
}

/// Canonical text: sorted ids, reduced rationals, two-space indentation.
pub fn serialize_instance(instance: &Instance) -> String {
    let canonical = CanonicalInstance {
        deadline: instance.deadline(),
        value: instance.value(),
        groups: instance.groups(),
        players: instance.distributions(),
    };
    serde_json::to_string_pretty(&canonical).expect("instance serializes")
}

/// Report profile file: a map from player id to reported distribution.
/// Players left out report truthfully.
pub fn parse_reports(text: &str, instance: &Instance) -> Result<ReportProfile> {
    let raw: BTreeMap<String, Pmf> = serde_json::from_str(text).map_err(json_error)?;
    let mut reports = instance.distributions().clone();
    for (k, pmf) in raw {
        let p = player_key(&k, "reports")?;
        if !instance.contains(p) {
            return Err(Error::UnknownPlayer(p));
        }
        reports.insert(p, pmf);
    }
    ReportProfile::new(instance, reports)
}

pub fn serialize_pmf(pmf: &Pmf) -> serde_json::Value {
    serde_json::to_value(pmf).expect("pmf serializes")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{example1, EXAMPLE1_JSON};

    #[test]
    fn example1_file() {
        assert_eq!(parse_instance(EXAMPLE1_JSON).unwrap(), example1());
    }

    #[test]
    fn canonical_round_trip() {
        let text = r#"{"groups": [[4,3],[2,1]], "deadline": 3,
            "players": {"4": {"2": "2/4", "1": "1/2"}, "3": {"1": "1"},
                        "1": {"5": 1}, "2": {"1": "0", "3": "1/1"}}}"#;
        let inst = parse_instance(text).unwrap();
        let canon = serialize_instance(&inst);
        assert_eq!(parse_instance(&canon).unwrap(), inst);
        assert_eq!(serialize_instance(&parse_instance(&canon).unwrap()), canon);
        assert!(canon.contains("\"value\": \"1\""));
        assert!(canon.contains("\"4\": {\n      \"1\": \"1/2\",\n      \"2\": \"1/2\"\n    }"));
    }

    #[test]
    fn positioned_errors() {
        let bad_rational = "{\"deadline\": 2, \"groups\": [[1]],\n \"players\": {\"1\": {\"1\": \"3//4\"}}}";
        let msg = parse_instance(bad_rational).unwrap_err().to_string();
        assert!(msg.contains("line 2"), "{msg}");

        let bad_sum = "{\"deadline\": 2, \"groups\": [[1]], \"players\": {\"1\": {\"1\": \"3/4\"}}}";
        let msg = parse_instance(bad_sum).unwrap_err().to_string();
        assert!(msg.contains("sum") && msg.contains("column"), "{msg}");

        let overlap = r#"{"deadline": 2, "groups": [[1,2],[2]],
            "players": {"1": {"1": "1"}, "2": {"1": "1"}}}"#;
        let msg = parse_instance(overlap).unwrap_err().to_string();
        assert!(msg.contains("groups[1]"), "{msg}");

        let empty = r#"{"deadline": 2, "groups": [[1],[]], "players": {"1": {"1": "1"}}}"#;
        assert!(parse_instance(empty).unwrap_err().to_string().contains("groups[1]"));

        let stray = r#"{"deadline": 2, "groups": [[1]], "players": {"1": {"1": "1"}, "x": {"1": "1"}}}"#;
        assert!(parse_instance(stray).unwrap_err().to_string().contains("players[\"x\"]"));

        let zero = r#"{"deadline": 2, "groups": [[1]], "players": {"1": {"0": "1"}}}"#;
        assert!(parse_instance(zero).is_err());
    }

    #[test]
    fn report_files() {
        let inst = example1();
        let text = r#"{"1": {"1": "1"}, "2": {"1": "1/4", "2": "3/4"},
                       "3": {"1": "3/4", "3": "1/4"}, "4": {"1": "1/4", "2": "3/4"}}"#;
        let r = parse_reports(text, &inst).unwrap();
        assert!(r.get(PlayerId(1)).unwrap().is_degenerate());
        let partial = parse_reports(r#"{"1": {"1": "1"}}"#, &inst).unwrap();
        assert_eq!(partial, r);
        assert!(parse_reports(r#"{"9": {"1": "1"}}"#, &inst).is_err());
    }
}
