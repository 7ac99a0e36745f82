//! Shared fixtures for the engine benchmarks.

use std::collections::BTreeMap;

use pantsgraph::decomposition::{PantsDecomposition, TailPattern};
use pantsgraph::model::SurfaceModel;
use pantsgraph::slope::Slope;

pub fn model() -> SurfaceModel {
    SurfaceModel::build(4).expect("default shell size")
}

/// A decomposition deviating at a spread of handle and chain sites.
pub fn busy_decomposition(model: &SurfaceModel) -> PantsDecomposition {
    let s = |n: i64, d: i64| Slope::new(n, d).unwrap();
    let overrides = BTreeMap::from([
        (0, s(2, 1)),
        (4, s(1, 2)),
        (12, s(1, 1)),
        (22, s(1, 1)),
        (24, s(0, 1)),
        (37, s(2, 3)),
    ]);
    PantsDecomposition::new(model, TailPattern::base(), overrides).expect("valid fixture")
}
