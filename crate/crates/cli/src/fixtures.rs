//! Worked-example fixtures shipped in `fixtures/paper`, each carrying the
//! report values it must reproduce.

use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use mvv_core::arrangement::{analyze, AnalyzeOptions, Caps, CenterArrangement};

macro_rules! fixture {
    ($name:literal) => {
        (
            $name,
            include_str!(concat!("../../../fixtures/paper/", $name, ".json")),
        )
    };
}

pub const FIXTURES: [(&str, &str); 13] = [
    fixture!("two_lines_p3"),
    fixture!("two_points_p3"),
    fixture!("coincident_p2"),
    fixture!("distinct_points_p2"),
    fixture!("meeting_lines_p3"),
    fixture!("collinear_points_p3"),
    fixture!("single_point_p3"),
    fixture!("single_point_p4"),
    fixture!("single_point_p9"),
    fixture!("single_point_p16"),
    fixture!("generic_points_p3_n2"),
    fixture!("generic_points_p3_n3"),
    fixture!("generic_points_p3_n4"),
];

#[derive(Deserialize)]
struct Expectations {
    expect: Vec<Map<String, Value>>,
}

#[derive(Serialize)]
pub struct Replay {
    pub fixture: String,
    pub k: Value,
    pub passed: bool,
    pub mismatches: Vec<String>,
}

/// Looks up a dotted key such as `upsilon.value`.
fn lookup<'a>(v: &'a Value, key: &str) -> Option<&'a Value> {
    key.split('.').try_fold(v, |cur, part| cur.get(part))
}

pub fn replay_all(seed: u64, caps: &Caps) -> Vec<Replay> {
    FIXTURES
        .iter()
        .flat_map(|(name, text)| replay(name, text, seed, caps))
        .collect()
}

fn replay(name: &str, text: &str, seed: u64, caps: &Caps) -> Vec<Replay> {
    let fail = |k: Value, msg: String| Replay {
        fixture: name.to_string(),
        k,
        passed: false,
        mismatches: vec![msg],
    };
    let arr: CenterArrangement = match crate::parse_json(text) {
        Ok(a) => a,
        Err(e) => return vec![fail(Value::Null, e)],
    };
    let exp: Expectations = match crate::parse_json(text) {
        Ok(x) => x,
        Err(e) => return vec![fail(Value::Null, e)],
    };
    let opts = AnalyzeOptions {
        seed,
        trials: 10,
        caps: *caps,
    };
    exp.expect
        .into_iter()
        .map(|want| {
            let k = want.get("k").cloned().unwrap_or(Value::Null);
            let Some(kv) = k.as_i64() else {
                return fail(k, "expectation lacks an integer k".into());
            };
            let report = match analyze(&arr, kv, &opts) {
                Ok(r) => serde_json::to_value(r).expect("json"),
                Err(e) => return fail(k, e.to_string()),
            };
            let mismatches: Vec<String> = want
                .iter()
                .filter(|(key, _)| key.as_str() != "k")
                .filter_map(|(key, val)| match lookup(&report, key) {
                    Some(got) if got == val => None,
                    got => Some(format!("{key}: expected {val}, found {}", got.unwrap_or(&Value::Null))),
                })
                .collect();
            Replay {
                fixture: name.to_string(),
                k,
                passed: mismatches.is_empty(),
                mismatches,
            }
        })
        .collect()
}
