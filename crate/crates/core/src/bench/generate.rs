//! Seeded random instance generation.

use std::collections::BTreeSet;

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::features::{Attribute, FeatureSet, ObjectSpec, Value};
use crate::hierarchy::{augment_singletons, compile_out, ClassDecl, CompiledSet, Hierarchy};
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InstanceParams {
    pub n_attributes: usize,
    pub n_values_per_attribute: usize,
    pub n_regular_classes: usize,
    /// Inclusive bounds on the number of features per class.
    pub class_size_range: (usize, usize),
    pub object_known_count: usize,
    /// Probability that a class feature on one of the object's known
    /// attributes carries a different value. Zero yields pure set-cover
    /// instances: classes then only use the object's known features.
    pub clash_density: f64,
    /// Extra pairs of classes that agree with the object except on one
    /// attribute, where they disagree with each other.
    pub conflicting_pairs: usize,
    pub seed: u64,
}

impl InstanceParams {
    pub fn clash_free(known: usize, regular: usize, seed: u64) -> Self {
        InstanceParams {
            n_attributes: known,
            n_values_per_attribute: 3,
            n_regular_classes: regular,
            class_size_range: (1, known.clamp(1, 6)),
            object_known_count: known,
            clash_density: 0.0,
            conflicting_pairs: 0,
            seed,
        }
    }

    pub fn with_seed(&self, seed: u64) -> Self {
        InstanceParams {
            seed,
            ..self.clone()
        }
    }

    pub fn check(&self) -> Result<(), GenerateError> {
        let bad = |why: String| Err(GenerateError::Unsatisfiable(why));
        let (min, max) = self.class_size_range;
        if self.n_attributes == 0 {
            return bad("n_attributes must be at least 1".into());
        }
        if self.n_values_per_attribute == 0 {
            return bad("n_values_per_attribute must be at least 1".into());
        }
        if min == 0 || min > max {
            return bad(format!(
                "class size range ({min}, {max}) is empty or admits empty classes"
            ));
        }
        if self.object_known_count > self.n_attributes {
            return bad(format!(
                "object_known_count {} exceeds n_attributes {}",
                self.object_known_count, self.n_attributes
            ));
        }
        if !(0.0..=1.0).contains(&self.clash_density) {
            return bad(format!(
                "clash_density {} outside [0, 1]",
                self.clash_density
            ));
        }
        let pool = if self.clash_density == 0.0 {
            self.object_known_count
        } else {
            self.n_attributes
        };
        if self.n_regular_classes > 0 && max > pool {
            return bad(format!(
                "class size {max} exceeds the {pool} attributes classes may use"
            ));
        }
        if (self.clash_density > 0.0 || self.conflicting_pairs > 0)
            && self.n_values_per_attribute < 2
        {
            return bad("disagreeing values need n_values_per_attribute >= 2".into());
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GenerateError {
    #[error("unsatisfiable instance parameters: {0}")]
    Unsatisfiable(String),
}

fn attr(i: usize) -> Attribute {
    Attribute::new(format!("a{i}")).expect("generated token")
}

fn value(i: usize) -> Value {
    Value::Known(format!("v{i}"))
}

fn other_value(rng: &mut ChaCha8Rng, n_values: usize, not: usize) -> usize {
    let v = rng.gen_range(0..n_values - 1);
    if v >= not {
        v + 1
    } else {
        v
    }
}

/// Generates an object and the compiled classes to insert it into,
/// singletons included. Deterministic in `params`.
pub fn generate_instance<W: Scalar>(
    params: &InstanceParams,
) -> Result<(ObjectSpec, CompiledSet<W>), GenerateError> {
    params.check()?;
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let nv = params.n_values_per_attribute;

    // Object values, indexed by attribute; None = unknown.
    let mut object_value: Vec<Option<usize>> = vec![None; params.n_attributes];
    let mut known: Vec<usize> =
        sample(&mut rng, params.n_attributes, params.object_known_count).into_vec();
    known.sort_unstable();
    for &a in &known {
        object_value[a] = Some(rng.gen_range(0..nv));
    }

    let mut decls = Vec::new();
    let (min, max) = params.class_size_range;
    for i in 0..params.n_regular_classes {
        let size = rng.gen_range(min..=max);
        let picks: Vec<usize> = if params.clash_density == 0.0 {
            sample(&mut rng, known.len(), size)
                .into_iter()
                .map(|k| known[k])
                .collect()
        } else {
            sample(&mut rng, params.n_attributes, size).into_vec()
        };
        let mut local = FeatureSet::new();
        for a in picks {
            let v = match object_value[a] {
                Some(ov) if rng.gen_bool(params.clash_density) => other_value(&mut rng, nv, ov),
                Some(ov) => ov,
                None => rng.gen_range(0..nv),
            };
            local
                .insert(crate::features::Feature::new(attr(a), value(v)))
                .expect("distinct attributes");
        }
        decls.push(ClassDecl {
            name: format!("C{i}"),
            parents: Vec::new(),
            local,
        });
    }

    for j in 0..params.conflicting_pairs {
        let pivot = rng.gen_range(0..params.n_attributes);
        let first = rng.gen_range(0..nv);
        let second = other_value(&mut rng, nv, first);
        let shared: Vec<usize> = known.iter().copied().filter(|&a| a != pivot).collect();
        let take = rng
            .gen_range(1..=shared.len().clamp(1, 4))
            .min(shared.len());
        let mut base = FeatureSet::new();
        for k in sample(&mut rng, shared.len(), take) {
            let a = shared[k];
            base.insert(crate::features::Feature::new(
                attr(a),
                value(object_value[a].expect("known")),
            ))
            .expect("distinct attributes");
        }
        for (suffix, v) in [("a", first), ("b", second)] {
            let mut local = base.clone();
            local
                .insert(crate::features::Feature::new(attr(pivot), value(v)))
                .expect("pivot not shared");
            decls.push(ClassDecl {
                name: format!("N{j}{suffix}"),
                parents: Vec::new(),
                local,
            });
        }
    }

    let hierarchy = Hierarchy::new(decls).expect("generated names are unique");
    let universe: BTreeSet<Attribute> = (0..params.n_attributes).map(attr).collect();
    let explicit: FeatureSet = known
        .iter()
        .map(|&a| (attr(a), value(object_value[a].expect("known"))))
        .collect();
    let object = ObjectSpec::complete(format!("obj{}", params.seed), explicit, universe)
        .expect("object attributes drawn from the universe");
    let compiled = compile_out(&hierarchy).expect("root-only hierarchies are valid");
    let n = augment_singletons(&compiled, &object);
    Ok((object, n))
}

/// The textbook worst case for greedy covering: blocks of 2, 4, ..., 2^k
/// features, each split evenly between a top and a bottom row. The two
/// row classes cover everything, but every block beats the remaining part
/// of either row by one feature, so greedy takes all `k` blocks.
pub fn staircase_instance<W: Scalar>(blocks: usize) -> (ObjectSpec, CompiledSet<W>) {
    assert!((1..=20).contains(&blocks), "staircase needs 1..=20 blocks");
    let mut top = FeatureSet::new();
    let mut bottom = FeatureSet::new();
    let mut decls = Vec::new();
    let mut all = FeatureSet::new();
    for b in 1..=blocks {
        let half = 1usize << (b - 1);
        let mut block = FeatureSet::new();
        for j in 0..half {
            for (row, set) in [("t", &mut top), ("b", &mut bottom)] {
                let a = Attribute::new(format!("s{b}{row}{j}")).expect("generated token");
                let f = crate::features::Feature::new(a, Value::Known("x".into()));
                set.insert(f.clone()).expect("fresh attribute");
                block.insert(f.clone()).expect("fresh attribute");
                all.insert(f).expect("fresh attribute");
            }
        }
        decls.push(ClassDecl {
            name: format!("BLOCK{b}"),
            parents: Vec::new(),
            local: block,
        });
    }
    decls.push(ClassDecl {
        name: "ROW_TOP".into(),
        parents: Vec::new(),
        local: top,
    });
    decls.push(ClassDecl {
        name: "ROW_BOTTOM".into(),
        parents: Vec::new(),
        local: bottom,
    });
    let hierarchy = Hierarchy::new(decls).expect("unique names");
    let universe = all.attributes().cloned().collect();
    let object =
        ObjectSpec::complete(format!("stair{blocks}"), all, universe).expect("closed universe");
    let compiled = compile_out(&hierarchy).expect("root-only hierarchies are valid");
    let n = augment_singletons(&compiled, &object);
    (object, n)
}
