use std::io;
use std::time::{Duration, Instant};

use serde::Serialize;

use crate::features::clash_union;
use crate::features::ObjectSpec;
use crate::hierarchy::CompiledSet;
use crate::insertion::{exact_insert, greedy_insert, prune_redundant, InsertionError};
use crate::Rational;

use super::generate::{generate_instance, staircase_instance, GenerateError, InstanceParams};

/// One entry of a benchmark sweep.
#[derive(Debug, Clone, PartialEq)]
pub enum Workload {
    Random(InstanceParams),
    /// [`staircase_instance`] with this many blocks.
    Staircase(usize),
}

#[derive(Debug, Clone)]
pub struct MeasureOptions {
    pub max_regular: usize,
    /// When false all wall-time columns are written as zero so reports are
    /// byte-for-byte reproducible.
    pub timings: bool,
    pub scaling: Option<ScalingPlan>,
}

impl Default for MeasureOptions {
    fn default() -> Self {
        MeasureOptions {
            max_regular: crate::insertion::DEFAULT_MAX_REGULAR,
            timings: true,
            scaling: None,
        }
    }
}

/// Column order is the CSV header order.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RatioRow {
    pub instance_id: usize,
    pub seed: u64,
    pub n_attrs: usize,
    pub n_regular: usize,
    pub f_known: usize,
    pub greedy_cost: usize,
    pub pruned_cost: usize,
    /// Empty when the exhaustive search was skipped.
    pub exact_cost: Option<usize>,
    pub ratio: Option<f64>,
    pub iterations: usize,
    pub greedy_micros: u64,
    pub exact_micros: Option<u64>,
    pub bound: f64,
    pub violation: bool,
    #[serde(skip)]
    pub clash_free: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScalingRow {
    pub n_regular: usize,
    pub f_known: usize,
    pub median_nanos: u64,
    pub max_iterations: usize,
}

/// Runtime sweeps: `n_sizes` at fixed `f_known`, then `f_sizes` at fixed
/// `n_fixed` regular classes.
#[derive(Debug, Clone, PartialEq)]
pub struct ScalingPlan {
    pub f_known: usize,
    pub n_sizes: Vec<usize>,
    pub n_fixed: usize,
    pub f_sizes: Vec<usize>,
    pub reps: usize,
    pub seed: u64,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct RatioReport {
    pub rows: Vec<RatioRow>,
    pub scaling: Vec<ScalingRow>,
}

impl RatioReport {
    pub fn max_ratio(&self) -> Option<f64> {
        self.rows.iter().filter_map(|r| r.ratio).reduce(f64::max)
    }

    pub fn mean_ratio(&self) -> Option<f64> {
        let ratios: Vec<f64> = self.rows.iter().filter_map(|r| r.ratio).collect();
        (!ratios.is_empty()).then(|| ratios.iter().sum::<f64>() / ratios.len() as f64)
    }

    pub fn violations(&self) -> usize {
        self.rows.iter().filter(|r| r.violation).count()
    }

    pub fn exact_skipped(&self) -> usize {
        self.rows.iter().filter(|r| r.exact_cost.is_none()).count()
    }

    pub fn write_csv<W: io::Write>(&self, out: W) -> csv::Result<()> {
        let mut w = csv::Writer::from_writer(out);
        for row in &self.rows {
            w.serialize(row)?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn summary(&self) -> String {
        let fmt = |x: Option<f64>| x.map_or_else(|| "-".to_string(), |x| format!("{x:.4}"));
        format!(
            "instances {}  exact skipped {}  max ratio {}  mean ratio {}  bound violations {}",
            self.rows.len(),
            self.exact_skipped(),
            fmt(self.max_ratio()),
            fmt(self.mean_ratio()),
            self.violations()
        )
    }
}

/// `ln |F_non-?| + 1`, taken as 1 for objects without known features.
pub fn ln_bound(known: usize) -> f64 {
    if known == 0 {
        1.0
    } else {
        (known as f64).ln() + 1.0
    }
}

fn micros(d: Duration) -> u64 {
    d.as_micros().try_into().unwrap_or(u64::MAX)
}

/// Runs greedy, pruning and (when within `max_regular`) the exact search on
/// one instance.
pub fn measure_instance(
    instance_id: usize,
    seed: u64,
    f: &ObjectSpec,
    n: &CompiledSet<Rational>,
    opts: &MeasureOptions,
) -> RatioRow {
    let start = Instant::now();
    let greedy = greedy_insert(f, n);
    let greedy_time = start.elapsed();
    let pruned = prune_redundant(&greedy, f, n).expect("greedy parents come from n");

    let start = Instant::now();
    let exact = match exact_insert(f, n, opts.max_regular) {
        Ok(r) => Some(r),
        Err(InsertionError::TooManyRegular { .. }) => None,
        Err(e) => panic!("exact search failed: {e}"),
    };
    let exact_time = start.elapsed();

    let regular: Vec<_> = n.classes().iter().filter(|c| !c.is_singleton()).collect();
    let clash_free = clash_union(f, regular.iter().map(|c| &c.features)).is_empty();
    let known = f.known_count();
    let bound = ln_bound(known);
    let exact_cost = exact.as_ref().map(|r| r.cost);
    let ratio = exact_cost.map(|e| {
        if e == 0 {
            1.0
        } else {
            greedy.cost as f64 / e as f64
        }
    });
    let time = |d: Duration| if opts.timings { micros(d) } else { 0 };
    RatioRow {
        instance_id,
        seed,
        n_attrs: f.universe().len(),
        n_regular: regular.len(),
        f_known: known,
        greedy_cost: greedy.cost,
        pruned_cost: pruned.cost,
        exact_cost,
        ratio,
        iterations: greedy.trace.len(),
        greedy_micros: time(greedy_time),
        exact_micros: exact.as_ref().map(|_| time(exact_time)),
        bound,
        violation: clash_free && ratio.is_some_and(|r| r > bound),
        clash_free,
    }
}

/// Runs every workload `trials` times; random workloads use seeds
/// `seed, seed + 1, ...`. Rows are numbered in sweep order.
pub fn measure(
    sweep: &[Workload],
    trials: usize,
    opts: &MeasureOptions,
) -> Result<RatioReport, GenerateError> {
    let mut report = RatioReport::default();
    for workload in sweep {
        for trial in 0..trials {
            let id = report.rows.len();
            let (seed, (f, n)) = match workload {
                Workload::Random(p) => {
                    let seed = p.seed.wrapping_add(trial as u64);
                    (seed, generate_instance(&p.with_seed(seed))?)
                }
                Workload::Staircase(blocks) => (0, staircase_instance(*blocks)),
            };
            report.rows.push(measure_instance(id, seed, &f, &n, opts));
        }
    }
    if let Some(plan) = &opts.scaling {
        report.scaling = scaling_table(plan)?;
    }
    Ok(report)
}

fn scaling_params(known: usize, regular: usize, seed: u64) -> InstanceParams {
    InstanceParams {
        n_attributes: 2 * known,
        n_values_per_attribute: 3,
        n_regular_classes: regular,
        class_size_range: (2, 8.min(known.max(2))),
        object_known_count: known,
        clash_density: 0.2,
        conflicting_pairs: 0,
        seed,
    }
}

/// Median greedy time (best of three runs per instance) over `reps`
/// random instances of the given shape.
pub fn time_greedy(
    known: usize,
    regular: usize,
    reps: usize,
    seed: u64,
) -> Result<ScalingRow, GenerateError> {
    let mut times = Vec::with_capacity(reps);
    let mut max_iterations = 0;
    for r in 0..reps {
        let (f, n) = generate_instance::<Rational>(&scaling_params(
            known,
            regular,
            seed.wrapping_add(r as u64),
        ))?;
        let mut best = Duration::MAX;
        for _ in 0..3 {
            let start = Instant::now();
            let res = greedy_insert(&f, &n);
            best = best.min(start.elapsed());
            max_iterations = max_iterations.max(res.trace.len());
        }
        times.push(best);
    }
    times.sort();
    let median = times.get(times.len() / 2).copied().unwrap_or_default();
    Ok(ScalingRow {
        n_regular: regular,
        f_known: known,
        median_nanos: median.as_nanos().try_into().unwrap_or(u64::MAX),
        max_iterations,
    })
}

pub fn scaling_table(plan: &ScalingPlan) -> Result<Vec<ScalingRow>, GenerateError> {
    let mut rows = Vec::new();
    for &n in &plan.n_sizes {
        rows.push(time_greedy(plan.f_known, n, plan.reps, plan.seed)?);
    }
    for &k in &plan.f_sizes {
        rows.push(time_greedy(k, plan.n_fixed, plan.reps, plan.seed)?);
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn perfect_cover_has_ratio_one() {
        // One block: the block itself covers everything.
        let report = measure(&[Workload::Staircase(1)], 1, &MeasureOptions::default()).unwrap();
        assert_eq!(report.rows[0].ratio, Some(1.0));
        assert_eq!(report.rows[0].greedy_cost, 1);
    }

    #[test]
    fn clash_free_sweep_has_no_violations() {
        let sweep = [Workload::Random(InstanceParams::clash_free(12, 10, 100))];
        let opts = MeasureOptions {
            timings: false,
            ..Default::default()
        };
        let report = measure(&sweep, 200, &opts).unwrap();
        assert_eq!(report.rows.len(), 200);
        assert_eq!(report.violations(), 0);
        for row in &report.rows {
            assert!(row.clash_free);
            let exact = row.exact_cost.unwrap();
            assert!(row.greedy_cost >= row.pruned_cost && row.pruned_cost >= exact);
            assert!(row.iterations <= row.f_known);
            assert!(row.ratio.unwrap() >= 1.0);
        }
    }

    #[test]
    fn staircase_ratio_is_above_one_within_bound() {
        let report = measure(&[Workload::Staircase(4)], 1, &MeasureOptions::default()).unwrap();
        let row = &report.rows[0];
        assert_eq!(row.ratio, Some(2.0));
        assert!(row.ratio.unwrap() <= row.bound);
    }

    #[test]
    fn skipped_exact_leaves_empty_cells() {
        let p = InstanceParams::clash_free(12, 10, 1);
        let opts = MeasureOptions {
            max_regular: 5,
            timings: false,
            scaling: None,
        };
        let report = measure(&[Workload::Random(p)], 1, &opts).unwrap();
        assert_eq!(report.exact_skipped(), 1);
        let mut buf = Vec::new();
        report.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        assert_eq!(
            lines.next().unwrap(),
            "instance_id,seed,n_attrs,n_regular,f_known,greedy_cost,pruned_cost,exact_cost,ratio,iterations,greedy_micros,exact_micros,bound,violation"
        );
        let cells: Vec<&str> = lines.next().unwrap().split(',').collect();
        assert_eq!(cells[7], "");
        assert_eq!(cells[8], "");
        assert_eq!(cells[11], "");
    }

    #[test]
    fn scaling_rows_respect_iteration_bound() {
        let plan = ScalingPlan {
            f_known: 8,
            n_sizes: vec![20, 40],
            n_fixed: 20,
            f_sizes: vec![4, 8],
            reps: 3,
            seed: 5,
        };
        let rows = scaling_table(&plan).unwrap();
        assert_eq!(rows.len(), 4);
        assert!(rows.iter().all(|r| r.max_iterations <= r.f_known));
    }
}
