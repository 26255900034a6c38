//! Redundant-link removal and effective-feature evaluation of entries.

use std::collections::BTreeMap;

use crate::features::{clash_union, Attribute, FeatureSet, ObjectSpec, Value};
use crate::hierarchy::CompiledSet;
use crate::scalar::Scalar;

use super::{complete_cover, resolve, with_singletons, InsertionError, InsertionResult};

/// Drops parents whose removal keeps the entry complete without raising
/// its cost, rescanning from the first parent after every removal.
pub fn prune_redundant<W: Scalar>(
    r: &InsertionResult<W>,
    f: &ObjectSpec,
    n: &CompiledSet<W>,
) -> Result<InsertionResult<W>, InsertionError> {
    let n = with_singletons(n, f);
    let mut parents = r.parents.clone();
    let mut cost = r.cost;
    'scan: loop {
        for skip in 0..parents.len() {
            let candidate: Vec<String> = parents
                .iter()
                .enumerate()
                .filter(|(i, _)| *i != skip)
                .map(|(_, p)| p.clone())
                .collect();
            let sets = resolve(&n, &candidate)?;
            let local = clash_union(f, sets.iter().map(|c| &c.features));
            let new_cost = candidate.len() + local.len();
            if new_cost <= cost && complete_cover(f, &sets, &local) {
                parents = candidate;
                cost = new_cost;
                continue 'scan;
            }
        }
        break;
    }
    InsertionResult::assemble(f, parents, &n, r.trace.clone())
}

/// What the entry actually denotes: a listed blocker wins, otherwise the
/// single value offered by the parents, otherwise `?`. Covers the attributes
/// of F's explicit features, the locals and every parent feature.
///
/// Fails with [`InsertionError::NixonDiamond`] when parents offer two
/// different values for an attribute the entry does not block.
pub fn effective_features<W: Scalar>(
    r: &InsertionResult<W>,
    f: &ObjectSpec,
    n: &CompiledSet<W>,
) -> Result<FeatureSet, InsertionError> {
    let n = with_singletons(n, f);
    let sets = resolve(&n, &r.parents)?;
    let mut offers: BTreeMap<&Attribute, Vec<(&str, &Value)>> = BTreeMap::new();
    for (name, set) in r.parents.iter().zip(&sets) {
        for (a, v) in set.features.iter() {
            offers.entry(a).or_default().push((name, v));
        }
    }
    let mut attrs: Vec<&Attribute> = offers.keys().copied().collect();
    attrs.extend(r.local.attributes());
    attrs.extend(f.explicit().attributes());
    attrs.sort();
    attrs.dedup();

    let mut out = FeatureSet::new();
    for a in attrs {
        let value = match (r.local.get(a), offers.get(a)) {
            (Some(v), _) => v.clone(),
            (None, None) => Value::Unknown,
            (None, Some(list)) => {
                let mut values: Vec<Value> = list.iter().map(|(_, v)| (*v).clone()).collect();
                values.sort();
                values.dedup();
                if values.len() > 1 {
                    return Err(InsertionError::NixonDiamond {
                        attribute: a.clone(),
                        values,
                        parents: list.iter().map(|(p, _)| p.to_string()).collect(),
                    });
                }
                values.pop().expect("at least one offer")
            }
        };
        out.insert(crate::features::Feature::new(a.clone(), value))
            .expect("one value per attribute");
    }
    Ok(out)
}
