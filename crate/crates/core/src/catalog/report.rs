use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use super::{Bounds, Reduction, SourceList};
use crate::cartanmodel::{series, Route, Verdict};
use crate::error::{Error, Result};

/// Brute-force cohomology checks on an explicit model.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OracleRecord {
    pub formal_dimension: u32,
    /// Betti numbers of the Cartan model match the reported Poincaré polynomial.
    pub poincare_matches: bool,
    /// Degree up to which fiber restriction was checked (absent when the
    /// equivariant answer is not yes).
    pub surjectivity_degree: Option<u32>,
    pub surjective: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InstanceReport {
    pub family: String,
    pub list: SourceList,
    pub reduction: Reduction,
    pub params: BTreeMap<String, i64>,
    pub space: String,
    pub group_rank: usize,
    pub expected_routes: Vec<Route>,
    pub route_matches: bool,
    /// The witness was re-derived independently of the search that found it.
    pub witness_rechecked: bool,
    /// Verdict of the direct model when a reduction was used and the model is explicit.
    pub direct_agrees: Option<bool>,
    pub oracle: Option<OracleRecord>,
    pub verdict: Option<Verdict>,
    pub error: Option<String>,
    pub elapsed_ms: u64,
}

impl InstanceReport {
    /// Counts as a golden pass: yes/yes, route as expected, witness rechecked,
    /// and every cross-check that ran agreed.
    pub fn passed(&self) -> bool {
        self.error.is_none()
            && self.verdict.as_ref().is_some_and(|v| v.all_yes())
            && self.route_matches
            && self.witness_rechecked
            && self.direct_agrees != Some(false)
            && self
                .oracle
                .as_ref()
                .is_none_or(|o| o.poincare_matches && o.surjective != Some(false))
    }

    pub fn inconclusive(&self) -> bool {
        self.error.is_none() && !self.verdict.as_ref().is_some_and(|v| v.all_yes())
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReportCounts {
    pub instances: usize,
    pub passed: usize,
    pub inconclusive: usize,
    pub errors: usize,
    pub route_mismatches: usize,
    pub recheck_failures: usize,
    pub oracle_runs: usize,
    pub oracle_failures: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    /// Results hold at the listed instances only.
    pub scope: String,
    pub bounds: Bounds,
    pub counts: ReportCounts,
    /// Spaces that did not pass, in report order.
    pub failures: Vec<String>,
    pub instances: Vec<InstanceReport>,
    pub elapsed_ms: u64,
}

impl Report {
    pub fn new(bounds: Bounds, instances: Vec<InstanceReport>, elapsed_ms: u64) -> Report {
        let mut counts = ReportCounts {
            instances: instances.len(),
            ..ReportCounts::default()
        };
        let mut failures = Vec::new();
        for i in &instances {
            if i.passed() {
                counts.passed += 1;
            } else {
                failures.push(i.space.clone());
            }
            if i.error.is_some() {
                counts.errors += 1;
            }
            if i.inconclusive() {
                counts.inconclusive += 1;
            }
            if i.error.is_none() && !i.route_matches {
                counts.route_mismatches += 1;
            }
            if i.error.is_none() && !i.witness_rechecked {
                counts.recheck_failures += 1;
            }
            if let Some(o) = &i.oracle {
                counts.oracle_runs += 1;
                if !o.poincare_matches || o.surjective == Some(false) {
                    counts.oracle_failures += 1;
                }
            }
        }
        Report {
            scope: format!(
                "verified at instances with rank of G at most {}; not a proof for all parameters",
                bounds.max_rank
            ),
            bounds,
            counts,
            failures,
            instances,
            elapsed_ms,
        }
    }

    pub fn all_passed(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> Result<Report> {
        serde_json::from_str(text).map_err(|e| Error::Report(e.to_string()))
    }

    /// The report with every timing zeroed, for comparing runs.
    pub fn without_timings(&self) -> Report {
        let mut r = self.clone();
        r.elapsed_ms = 0;
        r.instances.iter_mut().for_each(|i| i.elapsed_ms = 0);
        r
    }

    pub fn table(&self) -> String {
        let rows: Vec<[String; 6]> = self
            .instances
            .iter()
            .map(|i| {
                let (formal, eq, route, poincare) = match &i.verdict {
                    Some(v) => (
                        v.formal.to_string(),
                        v.equivariantly_formal.to_string(),
                        v.route.map(|r| r.to_string()).unwrap_or_else(|| "-".into()),
                        v.poincare
                            .as_ref()
                            .map(|p| {
                                let s: Vec<i128> = p.iter().map(|&c| c as i128).collect();
                                series::display(&s)
                            })
                            .unwrap_or_else(|| "-".into()),
                    ),
                    None => ("error".into(), "error".into(), "-".into(), "-".into()),
                };
                let status = if i.passed() { "ok" } else { "FAIL" };
                [status.into(), i.space.clone(), formal, eq, route, poincare]
            })
            .collect();
        let header = ["", "space", "formal", "equivariant", "route", "Poincaré"];
        let mut widths: Vec<usize> = header.iter().map(|h| h.chars().count()).collect();
        for r in &rows {
            for (w, c) in widths.iter_mut().zip(r.iter()).take(5) {
                *w = (*w).max(c.chars().count());
            }
        }
        let mut out = String::new();
        let line = |out: &mut String, cells: &[&str]| {
            for (k, c) in cells.iter().enumerate() {
                if k + 1 < cells.len() {
                    let pad = widths[k] - c.chars().count();
                    let _ = write!(out, "{c}{}  ", " ".repeat(pad));
                } else {
                    let _ = writeln!(out, "{c}");
                }
            }
        };
        line(&mut out, &header);
        for r in &rows {
            let cells: Vec<&str> = r.iter().map(|s| s.as_str()).collect();
            line(&mut out, &cells);
        }
        let c = &self.counts;
        let _ = writeln!(
            out,
            "\n{} instances: {} passed, {} inconclusive, {} errors, {} route mismatches, {} oracle runs ({} failed)",
            c.instances, c.passed, c.inconclusive, c.errors, c.route_mismatches, c.oracle_runs, c.oracle_failures
        );
        let _ = writeln!(out, "{}", self.scope);
        for e in self
            .instances
            .iter()
            .filter_map(|i| i.error.as_ref().map(|e| (i, e)))
        {
            let _ = writeln!(out, "error in {}: {}", e.0.space, e.1);
        }
        out
    }
}
