//! Rendered insertion results.
//!
//! An entry lists the regular superclasses and, as local features, both the
//! blockers and whatever the chosen singleton classes stand for: choosing a
//! singleton is the same as listing its feature.

use std::collections::BTreeMap;
use std::fmt::{self, Write as _};

use serde::{Deserialize, Serialize};

use crate::features::FeatureSet;
use crate::hierarchy::CompiledSet;
use crate::insertion::InsertionResult;
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Payoff {
    Integer(i64),
    /// Non-integral payoffs, e.g. `"13/2"`.
    Exact(String),
}

impl Payoff {
    pub fn from_scalar<W: Scalar>(w: &W) -> Self {
        w.as_integer()
            .map_or_else(|| Payoff::Exact(w.to_string()), Payoff::Integer)
    }
}

impl fmt::Display for Payoff {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Payoff::Integer(i) => write!(f, "{i}"),
            Payoff::Exact(s) => f.write_str(s),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunnerUp {
    pub class: String,
    pub payoff: Payoff,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceStep {
    pub chosen: String,
    pub payoff: Payoff,
    pub covered: BTreeMap<String, String>,
    pub new_clashes: BTreeMap<String, String>,
    pub runners_up: Vec<RunnerUp>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EntryDocument {
    pub object: String,
    pub parents: Vec<String>,
    pub local: BTreeMap<String, String>,
    pub cost: usize,
    pub trace: Vec<TraceStep>,
}

fn to_map(set: &FeatureSet) -> BTreeMap<String, String> {
    set.iter()
        .map(|(a, v)| (a.to_string(), v.to_string()))
        .collect()
}

fn inline(map: &BTreeMap<String, String>) -> String {
    let mut s = String::from("{");
    for (a, v) in map {
        let _ = write!(s, " {a} = {v}");
    }
    s.push_str(" }");
    s
}

impl EntryDocument {
    /// Folds singleton parents into the local features. `with_trace`
    /// controls whether the greedy trace is carried along.
    pub fn from_result<W: Scalar>(
        r: &InsertionResult<W>,
        n: &CompiledSet<W>,
        with_trace: bool,
    ) -> Self {
        let mut parents = Vec::new();
        let mut local = to_map(&r.local);
        for p in &r.parents {
            match n.get(p) {
                Some(c) if c.is_singleton() => local.extend(to_map(&c.features)),
                _ => parents.push(p.clone()),
            }
        }
        let trace = if with_trace {
            r.trace
                .iter()
                .map(|t| TraceStep {
                    chosen: t.chosen.clone(),
                    payoff: Payoff::from_scalar(&t.payoff),
                    covered: to_map(&t.covered_now),
                    new_clashes: to_map(&t.new_clashes),
                    runners_up: t
                        .runners_up
                        .iter()
                        .map(|(class, p)| RunnerUp {
                            class: class.clone(),
                            payoff: Payoff::from_scalar(p),
                        })
                        .collect(),
                })
                .collect()
        } else {
            Vec::new()
        };
        EntryDocument {
            object: r.object.clone(),
            cost: parents.len() + local.len(),
            parents,
            local,
            trace,
        }
    }

    /// `parents + locals`, as printed.
    pub fn recomputed_cost(&self) -> usize {
        self.parents.len() + self.local.len()
    }

    /// `NAME : P1 P2 { a = v } # cost N`, followed by one comment line per
    /// traced iteration.
    pub fn to_text(&self) -> String {
        let mut s = self.object.clone();
        if !self.parents.is_empty() {
            let _ = write!(s, " : {}", self.parents.join(" "));
        }
        let _ = writeln!(s, " {} # cost {}", inline(&self.local), self.cost);
        for (i, t) in self.trace.iter().enumerate() {
            let runners: Vec<String> = t
                .runners_up
                .iter()
                .map(|r| format!("{} {}", r.class, r.payoff))
                .collect();
            let _ = writeln!(
                s,
                "#   {}. {} payoff {} covered {} clashes {} runners-up: {}",
                i + 1,
                t.chosen,
                t.payoff,
                inline(&t.covered),
                inline(&t.new_clashes),
                runners.join(", ")
            );
        }
        s
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("entry serializes");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> serde_json::Result<Self> {
        serde_json::from_str(text)
    }
}
