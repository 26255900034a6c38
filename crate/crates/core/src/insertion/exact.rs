//! Exhaustive optimal insertion over subsets of regular classes.
//!
//! Singletons never need to be searched: once a set Q of regular classes is
//! fixed, the cheapest completion lists one singleton per known feature that
//! Q neither covers nor blocks. So
//! `cost(Q) = |Q| + |clash(F, ∪Q)| + |uncovered, unblocked known features|`.

use std::collections::BTreeMap;

use crate::features::{Attribute, ObjectSpec, Value};
use crate::hierarchy::{singleton_name, CompiledSet, Origin};
use crate::scalar::Scalar;

use super::{greedy_insert, with_singletons, InsertionError, InsertionResult};

pub const DEFAULT_MAX_REGULAR: usize = 20;

#[derive(Clone)]
struct Mask(Vec<u64>);

impl Mask {
    fn zeros(words: usize) -> Self {
        Mask(vec![0; words])
    }

    fn set(&mut self, bit: usize) {
        self.0[bit / 64] |= 1 << (bit % 64);
    }

    fn union_into(&self, other: &Mask, out: &mut Mask) {
        for ((o, a), b) in out.0.iter_mut().zip(&self.0).zip(&other.0) {
            *o = a | b;
        }
    }

    fn count(&self) -> usize {
        self.0.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// `|self & !cover & !clash|`
    fn count_left(&self, cover: &Mask, clash: &Mask) -> usize {
        self.0
            .iter()
            .zip(&cover.0)
            .zip(&clash.0)
            .map(|((k, c), x)| (k & !c & !x).count_ones() as usize)
            .sum()
    }

    fn bits(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().enumerate().flat_map(|(w, &word)| {
            (0..64)
                .filter(move |b| word >> b & 1 == 1)
                .map(move |b| w * 64 + b)
        })
    }
}

struct Search<'a> {
    known: Mask,
    cover: Vec<Mask>,
    clash: Vec<Mask>,
    names: Vec<&'a str>,
    attrs: Vec<&'a Attribute>,
    /// Scratch masks per depth.
    cov_stack: Vec<Mask>,
    clash_stack: Vec<Mask>,
    chosen: Vec<usize>,
    best_cost: usize,
    best: Option<(usize, Vec<String>)>,
}

impl Search<'_> {
    fn run(&mut self, next: usize) {
        let depth = self.chosen.len();
        let clash_now = self.clash_stack[depth].count();
        let left = self
            .known
            .count_left(&self.cov_stack[depth], &self.clash_stack[depth]);
        let bound = depth + clash_now + usize::from(left > 0);
        if bound > self.best_cost {
            return;
        }
        if next == self.names.len() {
            self.leaf(depth + clash_now + left);
            return;
        }
        // Include `next`.
        {
            let (lo, hi) = self.cov_stack.split_at_mut(depth + 1);
            lo[depth].union_into(&self.cover[next], &mut hi[0]);
            let (lo, hi) = self.clash_stack.split_at_mut(depth + 1);
            lo[depth].union_into(&self.clash[next], &mut hi[0]);
        }
        self.chosen.push(next);
        self.run(next + 1);
        self.chosen.pop();
        // Exclude `next`.
        self.run(next + 1);
    }

    fn leaf(&mut self, cost: usize) {
        if cost > self.best_cost {
            return;
        }
        let depth = self.chosen.len();
        let mut parents: Vec<String> = self
            .chosen
            .iter()
            .map(|&i| self.names[i].to_string())
            .collect();
        let mut uncovered = self.known.clone();
        for (u, (c, x)) in uncovered.0.iter_mut().zip(
            self.cov_stack[depth]
                .0
                .iter()
                .zip(&self.clash_stack[depth].0),
        ) {
            *u &= !c & !x;
        }
        parents.extend(uncovered.bits().map(|b| singleton_name(self.attrs[b])));
        let better = match &self.best {
            None => true,
            Some((best_cost, best)) => {
                (cost, parents.len(), &parents) < (*best_cost, best.len(), best)
            }
        };
        if better {
            self.best_cost = cost;
            self.best = Some((cost, parents));
        }
    }
}

/// Minimum-cost insertion by exhaustive search with branch and bound.
///
/// Ties are broken by fewer parents, then by the lexicographically smaller
/// parent list (regular classes in declaration order, then singletons).
/// Fails when `n` holds more than `max_regular` regular classes.
pub fn exact_insert<W: Scalar>(
    f: &ObjectSpec,
    n: &CompiledSet<W>,
    max_regular: usize,
) -> Result<InsertionResult<W>, InsertionError> {
    let count = n.regular_count();
    if count > max_regular {
        return Err(InsertionError::TooManyRegular {
            count,
            max: max_regular,
        });
    }
    let n = with_singletons(n, f);
    let regular: Vec<_> = n
        .classes()
        .iter()
        .filter(|c| c.origin == Origin::Regular)
        .collect();

    // Bit per attribute that F knows or some regular class mentions.
    let mut index: BTreeMap<&Attribute, usize> = BTreeMap::new();
    for a in f
        .explicit()
        .attributes()
        .chain(regular.iter().flat_map(|c| c.features.attributes()))
    {
        let next = index.len();
        index.entry(a).or_insert(next);
    }
    let mut attrs = vec![None; index.len()];
    for (a, &i) in &index {
        attrs[i] = Some(*a);
    }
    let attrs: Vec<&Attribute> = attrs.into_iter().map(|a| a.expect("dense index")).collect();
    let words = index.len().div_ceil(64).max(1);

    let mut known = Mask::zeros(words);
    for (a, v) in f.explicit().iter() {
        if v.is_known() {
            known.set(index[a]);
        }
    }
    let mut cover = Vec::with_capacity(regular.len());
    let mut clash = Vec::with_capacity(regular.len());
    for c in &regular {
        let mut cov = Mask::zeros(words);
        let mut cl = Mask::zeros(words);
        for (a, v) in c.features.iter() {
            let fv: &Value = f.value_of(a);
            if fv == v {
                // Classes hold no ?-features, so equality means a known match.
                cov.set(index[a]);
            } else {
                cl.set(index[a]);
            }
        }
        cover.push(cov);
        clash.push(cl);
    }

    let incumbent = greedy_insert(f, &n).cost;
    let mut search = Search {
        known,
        cover,
        clash,
        names: regular.iter().map(|c| c.name.as_str()).collect(),
        attrs,
        cov_stack: vec![Mask::zeros(words); regular.len() + 1],
        clash_stack: vec![Mask::zeros(words); regular.len() + 1],
        chosen: Vec::with_capacity(regular.len()),
        best_cost: incumbent,
        best: None,
    };
    search.run(0);
    let (cost, parents) = search
        .best
        .expect("the greedy solution's regular classes bound the optimum");
    let result = InsertionResult::assemble(f, parents, &n, Vec::new())?;
    debug_assert_eq!(result.cost, cost);
    Ok(result)
}

#[cfg(test)]
mod tests {
    use super::super::fixtures::*;
    use super::super::{cost, greedy_insert};
    use super::*;
    use crate::features::tests::fs;
    use crate::features::FeatureSet;
    use crate::hierarchy::{augment_singletons, compile_out, ClassDecl, CompiledClass, Hierarchy};
    use crate::Rational;
    use proptest::prelude::*;

    #[test]
    fn redundant_link_optimum_inherits_from_b_only() {
        let (f, n) = redundant_link();
        let res = exact_insert(&f, &n, DEFAULT_MAX_REGULAR).unwrap();
        assert_eq!(res.parents, ["B"]);
        assert_eq!(res.local, fs(&[("a5", "v5"), ("a6", "v6"), ("a7", "v7")]));
        assert_eq!(res.cost, 4);
    }

    #[test]
    fn give_optimum_is_three() {
        let (f, n) = give();
        let res = exact_insert(&f, &n, DEFAULT_MAX_REGULAR).unwrap();
        assert_eq!(res.cost, 3);
        assert_eq!(res.parents, ["TRANSITIVE", "3-1"]);
        assert_eq!(res.local, fs(&[("iobj/cat", "N")]));
    }

    #[test]
    fn perfect_cover_and_empty_object() {
        let h = Hierarchy::new(vec![
            ClassDecl::new("P", &[], fs(&[("x", "1"), ("y", "2")])),
            ClassDecl::new("Q", &[], fs(&[("x", "1")])),
        ])
        .unwrap();
        let n: CompiledSet = compile_out(&h).unwrap();
        let f = object(&h, &[("x", "1"), ("y", "2")]);
        let res = exact_insert(&f, &n, DEFAULT_MAX_REGULAR).unwrap();
        assert_eq!(
            (res.parents.as_slice(), res.cost),
            (&["P".to_string()][..], 1)
        );
        let blank = object(&h, &[]);
        assert_eq!(
            exact_insert(&blank, &n, DEFAULT_MAX_REGULAR).unwrap().cost,
            0
        );
    }

    #[test]
    fn guard_rejects_large_instances() {
        let (f, n) = give();
        assert_eq!(
            exact_insert(&f, &n, 4).unwrap_err(),
            InsertionError::TooManyRegular { count: 5, max: 4 }
        );
    }

    /// Plain enumeration over all subsets of N, singletons included, using
    /// the cost definition directly.
    fn brute_force(f: &ObjectSpec, n: &CompiledSet) -> usize {
        let classes = n.classes();
        let mut best = usize::MAX;
        for mask in 0u32..(1 << classes.len()) {
            let p: Vec<&CompiledClass> = (0..classes.len())
                .filter(|i| mask >> i & 1 == 1)
                .map(|i| &classes[i])
                .collect();
            let local = crate::features::clash_union(f, p.iter().map(|c| &c.features));
            if super::super::complete_cover(f, &p, &local) {
                best = best.min(cost(&p, f));
            }
        }
        best
    }

    fn small_instance() -> impl Strategy<Value = (ObjectSpec, CompiledSet)> {
        let feature = (0..6u8, 0..3u8);
        let class = proptest::collection::btree_map(0..6u8, 0..3u8, 1..4);
        (
            proptest::collection::btree_map(feature.0, feature.1, 0..5),
            proptest::collection::vec(class, 0..5),
        )
            .prop_map(|(obj, classes)| {
                let decls = classes
                    .iter()
                    .enumerate()
                    .map(|(i, m)| {
                        let local: FeatureSet = m
                            .iter()
                            .map(|(a, v)| {
                                (
                                    Attribute::new(format!("a{a}")).unwrap(),
                                    Value::Known(format!("v{v}")),
                                )
                            })
                            .collect();
                        ClassDecl::new(format!("C{i}"), &[], local)
                    })
                    .collect();
                let h = Hierarchy::new(decls).unwrap();
                let explicit: FeatureSet = obj
                    .iter()
                    .map(|(a, v)| {
                        let value = if *v == 0 {
                            Value::Unknown
                        } else {
                            Value::Known(format!("v{v}"))
                        };
                        (Attribute::new(format!("a{a}")).unwrap(), value)
                    })
                    .collect();
                let universe = h
                    .attributes()
                    .chain(explicit.attributes())
                    .cloned()
                    .collect();
                let f = ObjectSpec::complete("o", explicit, universe).unwrap();
                let n = augment_singletons(&compile_out::<Rational>(&h).unwrap(), &f);
                (f, n)
            })
    }

    proptest! {
        #[test]
        fn matches_brute_force_and_dominates_greedy((f, n) in small_instance()) {
            let exact = exact_insert(&f, &n, DEFAULT_MAX_REGULAR).unwrap();
            prop_assert!(exact.violations(&f, &n).is_empty());
            prop_assert_eq!(exact.cost, brute_force(&f, &n));
            let greedy = greedy_insert(&f, &n);
            prop_assert!(greedy.violations(&f, &n).is_empty());
            prop_assert!(greedy.cost >= exact.cost);
        }
    }
}
