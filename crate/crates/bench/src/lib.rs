//! Shared fixtures for the benchmarks.

use iboss_core::sim::{gen_design, gen_response, DesignDist, DesignSpec, Placement, TrueModel};
use iboss_core::Dataset;

/// A simulated regression dataset with the usual sparse model.
pub fn simulated(dist: DesignDist, n: usize, p: usize, seed: u64) -> Dataset {
    let model = TrueModel::generate(p, Placement::Random, 1.0, seed).expect("valid model");
    let cols = gen_design(&DesignSpec {
        dist,
        n,
        p,
        seed: seed.wrapping_add(1),
    });
    let y = gen_response(&cols, &model, seed.wrapping_add(2)).expect("matching lengths");
    Dataset::new(cols, y).expect("finite data")
}
