//! Fixtures shared by the solver benchmarks.

use furnace_core::dataset::{Dataset, SyntheticSpec, synthesize};
use furnace_core::moo::ProblemSpec;
use furnace_core::pipeline::{PipelineConfig, prepare};

/// The default single-peak synthetic data set.
pub fn single_peak_data(samples: usize) -> Dataset {
    synthesize(&SyntheticSpec { samples, ..SyntheticSpec::single_peak() }).expect("valid spec")
}

/// The bi-objective surrogate problem built from the conflicting synthetic
/// data set.
pub fn conflicting_problem() -> ProblemSpec {
    let cfg = PipelineConfig {
        data: furnace_core::pipeline::DataSource::Synthetic(SyntheticSpec::conflicting()),
        ..Default::default()
    };
    prepare(&cfg).expect("surrogates pass the default threshold").1
}
