use std::fmt;

use crate::entropy::score_map;
use crate::error::Result;
use crate::gem_io::{group_maps, parse_gem_str, MAP_0052_FIXTURE};

const TOLERANCE: f64 = 0.01;

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: &'static str,
    pub expected: String,
    pub actual: String,
    pub pass: bool,
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let status = if self.pass { "PASS" } else { "FAIL" };
        write!(f, "{status} {:<5} expected {:<12} actual {}", self.name, self.expected, self.actual)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerifyReport {
    pub checks: Vec<Check>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        !self.checks.is_empty() && self.checks.iter().all(|c| c.pass)
    }
}

fn exact<T: PartialEq + fmt::Display>(name: &'static str, expected: T, actual: T) -> Check {
    Check {
        name,
        pass: expected == actual,
        expected: expected.to_string(),
        actual: actual.to_string(),
    }
}

fn approx(name: &'static str, expected: f64, actual: f64) -> Check {
    Check {
        name,
        pass: (expected - actual).abs() <= TOLERANCE,
        expected: format!("{expected:.2} ± {TOLERANCE}"),
        actual: format!("{actual:.4}"),
    }
}

/// Scores a single-map crosswalk and compares it with the published numbers
/// for map 0052. Parse and structural errors are returned, not scored.
pub fn verify_fixture(text: &str) -> Result<VerifyReport> {
    let maps = group_maps(parse_gem_str(text, "fixture")?)?;
    let mut checks = vec![exact("maps", 1, maps.len())];
    if let [map] = maps.as_slice() {
        checks.push(exact("m", 8, map.m));
        if !map.is_data_loss() {
            let s = score_map(map, None)?;
            checks.extend([
                exact("m0", 3, s.m0),
                exact("v", 9, s.v),
                approx("H(A)", 4.26, s.h_a),
                approx("H(B)", 3.17, s.h_b),
                exact("UR", "3.00".to_string(), format!("{:.2}", s.ur)),
            ]);
            if s.ur != 3.0 {
                checks.last_mut().unwrap().pass = false;
            }
        }
    }
    Ok(VerifyReport { checks })
}

/// Runs the embedded map 0052 fixture.
pub fn verify_example() -> Result<VerifyReport> {
    verify_fixture(MAP_0052_FIXTURE)
}
