//! Greedy selection: repeatedly take the class whose newly inherited
//! features most outnumber the features it newly forces to be blocked.

use std::cmp::Ordering;

use crate::features::{clash, FeatureSet, ObjectSpec};
use crate::hierarchy::{CompiledClass, CompiledSet, Origin};
use crate::scalar::Scalar;

use super::{with_singletons, InsertionResult, IterationRecord};

/// Alternatives recorded per iteration.
pub const RUNNERS_UP: usize = 5;

/// `weight(S ∩ F_temp) - |clash(F, S) \ F_clash|`. Without weights every
/// feature weighs 1; clash penalties are never weighted.
pub fn payoff<W: Scalar>(
    s: &CompiledClass<W>,
    f: &ObjectSpec,
    f_temp: &FeatureSet,
    f_clash: &FeatureSet,
) -> W {
    let gain = s
        .features
        .iter()
        .filter(|(a, v)| f_temp.contains(a, v))
        .fold(W::zero(), |acc, (a, _)| acc + s.weight(a));
    let penalty = clash(f, &s.features)
        .iter()
        .filter(|(a, v)| !f_clash.contains(a, v))
        .count();
    gain - W::from_count(penalty)
}

struct Candidate<W> {
    index: usize,
    payoff: W,
    covered: usize,
    new_clashes: usize,
    origin: Origin,
}

/// Selection order: payoff, then coverage, then fewer new clashes, then
/// regular before singleton, then declaration order.
fn rank<W: Scalar>(a: &Candidate<W>, b: &Candidate<W>) -> Ordering {
    b.payoff
        .partial_cmp(&a.payoff)
        .unwrap_or(Ordering::Equal)
        .then(b.covered.cmp(&a.covered))
        .then(a.new_clashes.cmp(&b.new_clashes))
        .then(a.origin.cmp(&b.origin))
        .then(a.index.cmp(&b.index))
}

/// Greedy insertion of `f` into `n`. Singletons for `f` are added to `n`
/// first when missing, so every remaining known feature can always be
/// covered with payoff of at least one and the loop terminates after at
/// most `|F_non-?|` iterations.
pub fn greedy_insert<W: Scalar>(f: &ObjectSpec, n: &CompiledSet<W>) -> InsertionResult<W> {
    let n = with_singletons(n, f);
    let classes = n.classes();
    let clashes: Vec<FeatureSet> = classes.iter().map(|s| clash(f, &s.features)).collect();

    let mut f_temp = f.known();
    let mut f_clash = FeatureSet::new();
    let mut parents = Vec::new();
    let mut trace = Vec::new();

    while !f_temp.is_empty() {
        let mut candidates: Vec<Candidate<W>> = classes
            .iter()
            .zip(&clashes)
            .enumerate()
            .map(|(index, (s, s_clash))| {
                let mut covered = 0;
                let mut gain = W::zero();
                for (a, v) in s.features.iter() {
                    if f_temp.contains(a, v) {
                        covered += 1;
                        gain = gain + s.weight(a);
                    }
                }
                let new_clashes = s_clash
                    .iter()
                    .filter(|(a, v)| !f_clash.contains(a, v))
                    .count();
                Candidate {
                    index,
                    payoff: gain - W::from_count(new_clashes),
                    covered,
                    new_clashes,
                    origin: s.origin,
                }
            })
            .collect();

        let keep = (RUNNERS_UP + 1).min(candidates.len());
        if candidates.len() > keep {
            candidates.select_nth_unstable_by(keep - 1, rank);
            candidates.truncate(keep);
        }
        candidates.sort_by(rank);
        let best = &candidates[0];
        debug_assert!(best.covered > 0, "singletons guarantee progress");

        let chosen = &classes[best.index];
        let chosen_clash = &clashes[best.index];
        let covered_now: FeatureSet = chosen
            .features
            .iter()
            .filter(|(a, v)| f_temp.contains(a, v))
            .map(|(a, v)| (a.clone(), v.clone()))
            .collect();
        let new_clashes = chosen_clash.difference(&f_clash);

        for (a, _) in chosen.features.iter() {
            // Whatever S says about `a`, F's feature for it is now either
            // inherited or blocked.
            f_temp.remove(a);
        }
        f_clash
            .extend_consistent(chosen_clash)
            .expect("clashes are features of F and therefore consistent");

        trace.push(IterationRecord {
            chosen: chosen.name.clone(),
            payoff: best.payoff.clone(),
            covered_now,
            new_clashes,
            runners_up: candidates[1..]
                .iter()
                .map(|c| (classes[c.index].name.clone(), c.payoff.clone()))
                .collect(),
        });
        parents.push(chosen.name.clone());
    }

    let result =
        InsertionResult::assemble(f, parents, &n, trace).expect("parents were drawn from n");
    debug_assert_eq!(result.local, f_clash);
    result
}
