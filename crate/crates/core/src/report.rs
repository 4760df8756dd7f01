//! CSV and JSON output.
//!
//! Rationals are written as separate `_p`/`_q` integer columns plus an
//! approximate decimal column with [`DECIMAL_DIGITS`] significant digits.
//! Every CSV starts with `#` header lines naming the tool version, the
//! resolved configuration, and (for games) the per-trial seeds.

use std::fmt::Write as _;

use serde::Serialize;

use crate::game::GameReport;
use crate::optimize::OptResult;
use crate::value::ExactValue;

pub const DECIMAL_DIGITS: usize = 20;

pub fn tool_version() -> String {
    format!("ratiolab {}", env!("CARGO_PKG_VERSION"))
}

/// `#`-prefixed provenance lines.
pub fn csv_preamble<C: Serialize>(config: &C, trial_seeds: Option<&[u64]>) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "# {}", tool_version());
    let _ = writeln!(
        out,
        "# config: {}",
        serde_json::to_string(config).expect("config serializes")
    );
    if let Some(seeds) = trial_seeds {
        let list: Vec<String> = seeds.iter().map(u64::to_string).collect();
        let _ = writeln!(out, "# trial_seeds: {}", list.join(","));
    }
    out
}

fn pq(v: &ExactValue) -> String {
    format!("{},{}", v.numer(), v.denom())
}

pub const OPT_HEADER: &str = "method,n,family,value_p,value_q,argset_hex,queries,seed,value_approx";

pub fn opt_row(r: &OptResult, family: &str, seed: Option<u64>) -> String {
    format!(
        "{},{},{},{},{},{},{},{}",
        r.method,
        r.argset.ground(),
        family,
        pq(&r.value),
        r.argset.to_hex(),
        r.queries_used,
        seed.map(|s| s.to_string()).unwrap_or_default(),
        r.value.to_decimal(DECIMAL_DIGITS)
    )
}

pub const GAME_HEADER: &str = "family,n,trial,seed,queries,distinguished,first_idx,alg_value_p,alg_value_q,planted_opt_p,planted_opt_q,ratio_p,ratio_q,union_bound_p,union_bound_q,ratio_approx";

pub fn game_row(r: &GameReport) -> String {
    format!(
        "{},{},{},{},{},{},{},{},{},{},{},{}",
        r.family.label(),
        r.n,
        r.trial,
        r.seed,
        r.queries,
        r.distinguished,
        r.first_distinguishing_index
            .map(|i| i.to_string())
            .unwrap_or_default(),
        pq(&r.algorithm_value),
        pq(&r.planted_optimum),
        pq(&r.empirical_ratio),
        pq(&r.union_bound),
        r.empirical_ratio.to_decimal(DECIMAL_DIGITS)
    )
}

pub fn game_csv<C: Serialize>(config: &C, seeds: &[u64], reports: &[GameReport]) -> String {
    let mut out = csv_preamble(config, Some(seeds));
    out.push_str(GAME_HEADER);
    out.push('\n');
    for r in reports {
        out.push_str(&game_row(r));
        out.push('\n');
    }
    out
}

/// JSON document wrapping a payload with provenance.
#[derive(Debug, Serialize)]
pub struct Envelope<'a, C: Serialize, P: Serialize> {
    pub tool: String,
    pub config: &'a C,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub trial_seeds: Option<&'a [u64]>,
    pub result: P,
}

pub fn envelope_json<C: Serialize, P: Serialize>(
    config: &C,
    trial_seeds: Option<&[u64]>,
    result: P,
) -> String {
    let env = Envelope {
        tool: tool_version(),
        config,
        trial_seeds,
        result,
    };
    let mut s = serde_json::to_string_pretty(&env).expect("report serializes");
    s.push('\n');
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::optimize::{Method, Sense};
    use crate::setcore::{GroundSize, Subset};
    use crate::value::q;

    #[test]
    fn opt_row_format() {
        let n = GroundSize::new(8).unwrap();
        let r = OptResult {
            argset: Subset::from_indices(n, [0, 1, 2, 3]).unwrap(),
            value: q("4"),
            queries_used: 510,
            method: Method::Brute,
            sense: Sense::Minimize,
        };
        assert_eq!(
            opt_row(&r, "increasing", None),
            "brute,8,increasing,4,1,0xf,510,,4.0000000000000000000"
        );
        assert_eq!(OPT_HEADER.split(',').count(), opt_row(&r, "x", Some(1)).split(',').count());
    }

    #[test]
    fn preamble_lines() {
        let p = csv_preamble(&serde_json::json!({"a": 1}), Some(&[5, 6]));
        let lines: Vec<&str> = p.lines().collect();
        assert!(lines[0].starts_with("# ratiolab "));
        assert_eq!(lines[1], "# config: {\"a\":1}");
        assert_eq!(lines[2], "# trial_seeds: 5,6");
    }
}
