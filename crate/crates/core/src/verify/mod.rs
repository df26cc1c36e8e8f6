//! Named verification suites and their reports.
//!
//! A suite expands its parameter grid into independent points, evaluates
//! them on the rayon pool and returns the checks in grid order, so reports
//! do not depend on the number of workers.

mod elements;
mod suites;

pub use elements::{context, parse_element, parse_model_vector, random_element};
pub use suites::{AppendixSuite, GeneratorsSuite, IdentitiesSuite, OrbitsSuite, StarSuite};

use serde::Serialize;
use serde_json::{json, Map, Value};

use crate::error::{Error, Result};
use crate::grid::Grid;

/// Report format version.
pub const SCHEMA: u32 = 1;

/// Outcome of one assertion (or one informational measurement).
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Check {
    pub suite: String,
    pub name: String,
    pub params: Map<String, Value>,
    pub pass: bool,
    /// Informational rows never count as failures.
    pub info: bool,
    pub detail: String,
}

impl Check {
    pub fn new(suite: &str, name: &str, params: Map<String, Value>, pass: bool, detail: impl Into<String>) -> Self {
        Check { suite: suite.into(), name: name.into(), params, pass, info: false, detail: detail.into() }
    }

    pub fn info(suite: &str, name: &str, params: Map<String, Value>, detail: impl Into<String>) -> Self {
        Check { suite: suite.into(), name: name.into(), params, pass: true, info: true, detail: detail.into() }
    }

    pub fn failed(&self) -> bool {
        !self.pass && !self.info
    }
}

/// Parameters shared by all suites.
#[derive(Clone, Debug, Default)]
pub struct SuiteConfig {
    /// Replaces each suite's default list of field sizes.
    pub qs: Option<Vec<u64>>,
    pub grid: Grid,
    pub seed: u64,
}

impl SuiteConfig {
    pub fn q_values(&self, default: &[u64]) -> Vec<u64> {
        self.qs.clone().unwrap_or_else(|| default.to_vec())
    }
}

pub trait Suite: Send + Sync {
    fn name(&self) -> &'static str;
    fn description(&self) -> &'static str;
    fn run(&self, config: &SuiteConfig) -> Result<Vec<Check>>;
}

pub fn suite_registry() -> Vec<Box<dyn Suite>> {
    vec![
        Box::new(StarSuite),
        Box::new(GeneratorsSuite),
        Box::new(AppendixSuite),
        Box::new(OrbitsSuite),
        Box::new(IdentitiesSuite),
    ]
}

/// The suites selected by `name`; `all` selects every suite.
pub fn find_suites(name: &str) -> Result<Vec<Box<dyn Suite>>> {
    let all = suite_registry();
    if name == "all" {
        return Ok(all);
    }
    let picked: Vec<_> = all.into_iter().filter(|s| s.name() == name).collect();
    if picked.is_empty() {
        return Err(Error::Parse(format!("unknown suite {name:?}")));
    }
    Ok(picked)
}

/// Checks from one or more suites.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Report {
    pub checks: Vec<Check>,
}

impl Report {
    pub fn run(suites: &[Box<dyn Suite>], config: &SuiteConfig) -> Result<Report> {
        let mut checks = Vec::new();
        for s in suites {
            checks.extend(s.run(config)?);
        }
        Ok(Report { checks })
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| c.failed())
    }

    pub fn all_pass(&self) -> bool {
        self.failures().next().is_none()
    }

    pub fn to_json(&self) -> Value {
        let asserted = self.checks.iter().filter(|c| !c.info).count();
        let failures: Vec<&Check> = self.failures().collect();
        json!({
            "schema": SCHEMA,
            "passed": asserted - failures.len(),
            "failed": failures.len(),
            "checks": self.checks,
            "failures": failures,
        })
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("suite,name,params,status,detail\n");
        for c in &self.checks {
            let row = [c.suite.clone(), c.name.clone(), Value::Object(c.params.clone()).to_string(), status(c).into(), c.detail.clone()];
            out.push_str(&row.iter().map(|f| csv_field(f)).collect::<Vec<_>>().join(","));
            out.push('\n');
        }
        out
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for c in &self.checks {
            out.push_str(&format!("{:<4} {}/{} {}", status(c), c.suite, c.name, params_text(&c.params)));
            if !c.detail.is_empty() {
                out.push_str(&format!(" :: {}", c.detail));
            }
            out.push('\n');
        }
        let failed = self.failures().count();
        out.push_str(&format!("{} checks, {} failed\n", self.checks.len(), failed));
        out
    }
}

fn status(c: &Check) -> &'static str {
    match (c.info, c.pass) {
        (true, _) => "INFO",
        (false, true) => "PASS",
        (false, false) => "FAIL",
    }
}

pub(crate) fn params_text(params: &Map<String, Value>) -> String {
    params
        .iter()
        .map(|(k, v)| match v {
            Value::String(s) => format!("{k}={s}"),
            other => format!("{k}={other}"),
        })
        .collect::<Vec<_>>()
        .join(" ")
}

pub(crate) fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// Builds a parameter map from `(name, value)` pairs.
pub fn params(pairs: &[(&str, Value)]) -> Map<String, Value> {
    pairs.iter().map(|(k, v)| (k.to_string(), v.clone())).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn report_rendering() {
        let r = Report {
            checks: vec![
                Check::new("s", "a", params(&[("q", json!(3))]), true, ""),
                Check::new("s", "b", params(&[("W", json!("plus:2"))]), false, "x, y"),
                Check::info("s", "c", Map::new(), "order 48"),
            ],
        };
        assert!(!r.all_pass());
        let j = r.to_json();
        assert_eq!(j["schema"], 1);
        assert_eq!(j["failed"], 1);
        assert_eq!(j["passed"], 1);
        assert!(r.to_csv().contains("\"x, y\""));
        assert!(r.to_text().contains("FAIL s/b W=plus:2 :: x, y"));
        assert!(r.to_text().contains("INFO s/c"));
    }

    #[test]
    fn suite_lookup() {
        assert_eq!(find_suites("all").unwrap().len(), 5);
        assert_eq!(find_suites("orbits").unwrap()[0].name(), "orbits");
        assert!(find_suites("nope").is_err());
    }
}
