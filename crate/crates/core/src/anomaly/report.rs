//! Verification outcomes and their renderings.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use super::divisibility::DivisibilityRow;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

impl Check {
    pub fn new(name: &str, pass: bool, detail: impl Into<String>) -> Self {
        Check { name: name.to_string(), pass, detail: detail.into() }
    }
}

/// One `t_(4r-1)` slice of the total series.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SliceReport {
    pub r: u32,
    pub odd_degree: u32,
    pub even_degree: u32,
    /// Whether the slice enters the total (`t_3` drops out when `c_3 = 0`).
    pub included: bool,
    pub zero: bool,
    /// Whether the slice alone decomposes with zero residual.
    pub residual_zero: bool,
    pub terms: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TheoremReport {
    pub case: String,
    pub family: String,
    pub dim: u32,
    pub weight: u32,
    pub order_half: u32,
    pub rank_n: u32,
    pub constants: BTreeMap<String, String>,
    pub claimed: BTreeMap<String, String>,
    pub residual_zero: bool,
    pub checks: Vec<Check>,
    pub slices: Vec<SliceReport>,
    pub divisibility: Vec<DivisibilityRow>,
    pub pass: bool,
    pub wall_ms: u64,
}

impl TheoremReport {
    /// Recomputes `pass` from the residual flag and the checks.
    pub fn finish(&mut self) {
        self.pass = self.residual_zero && self.checks.iter().all(|c| c.pass);
    }

    pub fn failed_checks(&self) -> Vec<&Check> {
        self.checks.iter().filter(|c| !c.pass).collect()
    }

    /// JSON with the timing field removed, for byte-stable comparisons.
    pub fn to_stable_json(&self) -> serde_json::Value {
        let mut v = serde_json::to_value(self).expect("report serializes");
        if let Some(o) = v.as_object_mut() {
            o.remove("wall_ms");
        }
        v
    }

    /// Aligned human-readable table. Timing is left out so the text is stable.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let verdict = if self.pass { "PASS" } else { "FAIL" };
        let _ = writeln!(
            s,
            "{}  weight {}  order_half {}  N {}  {}",
            self.case, self.weight, self.order_half, self.rank_n, verdict
        );
        for (k, v) in &self.constants {
            match self.claimed.get(k) {
                Some(c) => {
                    let _ = writeln!(s, "  {k:<24} {v:>16}   claimed {c}");
                }
                None => {
                    let _ = writeln!(s, "  {k:<24} {v:>16}");
                }
            }
        }
        for c in &self.checks {
            let mark = if c.pass { "ok  " } else { "FAIL" };
            let _ = writeln!(s, "  [{mark}] {:<30} {}", c.name, c.detail);
        }
        for sl in &self.slices {
            let _ = writeln!(
                s,
                "  slice t{:<3} even degree {:<3} {:<9} {:<8} residual {}",
                sl.odd_degree,
                sl.even_degree,
                if sl.included { "included" } else { "excluded" },
                if sl.zero { "zero" } else { "nonzero" },
                if sl.residual_zero { "zero" } else { "nonzero" },
            );
        }
        for d in &self.divisibility {
            let _ = writeln!(
                s,
                "  mod {:<10} {:<28} {}",
                d.modulus,
                d.label,
                if d.direct { "direct" } else { "chained" }
            );
        }
        s
    }
}
