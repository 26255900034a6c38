//! Insertion engines and result checks.
//!
//! Given an object's complete feature set F and compiled classes N, an
//! insertion picks superclasses P and lists locally the features of F that
//! the chosen classes contradict, `clash(F, ∪P)`. Its cost is
//! `|P| + |clash(F, ∪P)|`.

use std::borrow::Cow;

use num_rational::Ratio;
use thiserror::Error;

use crate::features::{clash_union, Attribute, FeatureSet, ObjectSpec, Value};
use crate::hierarchy::{augment_singletons, CompiledClass, CompiledSet};
use crate::scalar::Scalar;

mod exact;
mod greedy;
mod prune;

pub use exact::{exact_insert, DEFAULT_MAX_REGULAR};
pub use greedy::{greedy_insert, payoff, RUNNERS_UP};
pub use prune::{effective_features, prune_redundant};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum InsertionError {
    #[error("parent {0} is not a class of the compiled hierarchy")]
    UnknownParent(String),
    #[error("{count} regular classes exceed the exhaustive search limit of {max}")]
    TooManyRegular { count: usize, max: usize },
    #[error("Nixon diamond on {attribute}: parents {} offer values {}", parents.join(", "), values.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(", "))]
    NixonDiamond {
        attribute: Attribute,
        values: Vec<Value>,
        parents: Vec<String>,
    },
}

/// One pass of the greedy selection loop.
#[derive(Debug, Clone, PartialEq)]
pub struct IterationRecord<W = Ratio<i64>> {
    pub chosen: String,
    pub payoff: W,
    /// Features of F first covered by the chosen class.
    pub covered_now: FeatureSet,
    /// Features of F the chosen class newly forces to be listed.
    pub new_clashes: FeatureSet,
    /// Best alternatives in selection order, at most [`RUNNERS_UP`].
    pub runners_up: Vec<(String, W)>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct InsertionResult<W = Ratio<i64>> {
    pub object: String,
    /// Superclasses in selection order; singleton classes included.
    pub parents: Vec<String>,
    /// Blockers: exactly `clash(F, ∪parents)`.
    pub local: FeatureSet,
    pub cost: usize,
    pub trace: Vec<IterationRecord<W>>,
}

impl<W: Scalar> InsertionResult<W> {
    pub(crate) fn assemble(
        f: &ObjectSpec,
        parents: Vec<String>,
        n: &CompiledSet<W>,
        trace: Vec<IterationRecord<W>>,
    ) -> Result<Self, InsertionError> {
        let sets = resolve(n, &parents)?;
        let local = clash_union(f, sets.iter().map(|c| &c.features));
        Ok(InsertionResult {
            object: f.name().to_string(),
            cost: parents.len() + local.len(),
            parents,
            local,
            trace,
        })
    }

    /// Every broken result invariant, as readable messages. Empty for a
    /// valid, complete insertion of `f` over `n`.
    pub fn violations(&self, f: &ObjectSpec, n: &CompiledSet<W>) -> Vec<String> {
        let n = with_singletons(n, f);
        let sets = match resolve(&n, &self.parents) {
            Ok(s) => s,
            Err(e) => return vec![e.to_string()],
        };
        let mut out = Vec::new();
        if self.cost != self.parents.len() + self.local.len() {
            out.push(format!(
                "cost {} differs from {} parents + {} locals",
                self.cost,
                self.parents.len(),
                self.local.len()
            ));
        }
        let expected = clash_union(f, sets.iter().map(|c| &c.features));
        if expected != self.local {
            out.push(format!(
                "local {} differs from clash(F, ∪P) = {expected}",
                self.local
            ));
        }
        for (a, v) in f.explicit().iter().filter(|(_, v)| v.is_known()) {
            if !is_covered(a, v, &sets, &self.local) {
                out.push(format!(
                    "known feature [{a},{v}] is neither inherited nor listed"
                ));
            }
        }
        out
    }

    /// Parents that are not synthetic singletons.
    pub fn regular_parents<'a>(
        &'a self,
        n: &'a CompiledSet<W>,
    ) -> impl Iterator<Item = &'a str> + 'a {
        self.parents
            .iter()
            .filter(move |p| n.get(p).is_none_or(|c| !c.is_singleton()))
            .map(String::as_str)
    }
}

fn is_covered<W>(a: &Attribute, v: &Value, sets: &[&CompiledClass<W>], local: &FeatureSet) -> bool {
    local.contains(a, v) || sets.iter().any(|s| s.features.contains(a, v))
}

/// `|P| + |clash(F, ∪P)|`; the union may be internally inconsistent.
pub fn cost<W>(parents: &[&CompiledClass<W>], f: &ObjectSpec) -> usize {
    parents.len() + clash_union(f, parents.iter().map(|c| &c.features)).len()
}

pub(crate) fn with_singletons<'n, W: Scalar>(
    n: &'n CompiledSet<W>,
    f: &ObjectSpec,
) -> Cow<'n, CompiledSet<W>> {
    let missing = f
        .explicit()
        .iter()
        .filter(|(_, v)| v.is_known())
        .any(|(a, v)| {
            !n.classes()
                .iter()
                .any(|c| c.is_singleton() && c.features.len() == 1 && c.features.contains(a, v))
        });
    if missing {
        Cow::Owned(augment_singletons(n, f))
    } else {
        Cow::Borrowed(n)
    }
}

pub(crate) fn resolve<'n, W: Scalar>(
    n: &'n CompiledSet<W>,
    names: &[String],
) -> Result<Vec<&'n CompiledClass<W>>, InsertionError> {
    names
        .iter()
        .map(|p| {
            n.get(p)
                .ok_or_else(|| InsertionError::UnknownParent(p.clone()))
        })
        .collect()
}

/// Whether every known feature of `f` is in some set or in `local`.
pub(crate) fn complete_cover<W>(
    f: &ObjectSpec,
    sets: &[&CompiledClass<W>],
    local: &FeatureSet,
) -> bool {
    f.explicit()
        .iter()
        .filter(|(_, v)| v.is_known())
        .all(|(a, v)| is_covered(a, v, sets, local))
}
