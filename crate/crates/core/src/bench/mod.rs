//! Benchmark harness: random and worst-case instance generation, greedy
//! versus exact cost ratios, and greedy runtime scaling.

mod generate;
mod measure;

pub use generate::{generate_instance, staircase_instance, GenerateError, InstanceParams};
pub use measure::{
    ln_bound, measure, measure_instance, scaling_table, time_greedy, MeasureOptions, RatioReport,
    RatioRow, ScalingPlan, ScalingRow, Workload,
};
