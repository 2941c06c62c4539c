//! Fractional perimeter, fractional mean curvature and the behaviour of
//! sets at infinity.

mod alpha;
mod curvature;
mod descriptor;
mod intervals;
mod perimeter;
mod set;

pub use alpha::{
    alpha_estimate, alpha_estimate_at, alpha_estimate_at_with, alpha_estimate_with,
    stickiness_threshold, AlphaResult, AlphaSampler, StickinessParams,
};
pub use curvature::{
    boundary_chart, curvature_truncated, curvature_truncations, frac_mean_curvature_graph,
    frac_mean_curvature_pv, frac_mean_curvature_supergraph, CurvatureQuery, LocalGraph,
    TangentBall, PV_GRID, PV_PLATEAU,
};
pub use descriptor::parse_set;
pub use intervals::{interaction_1d, IntervalUnion};
pub use perimeter::{coarea_check, frac_perimeter, frac_perimeter_with, PerimeterMethod, PerimeterSampler};
pub use set::{presets, GeomSet, Graph, GraphFn, GraphGrowth, Shape};

use alloc::vec::Vec;

use crate::{Estimate, Result};

/// Values of an evaluator over a grid of orders, with the rescaled rows
/// s * value and (1 - s) * value.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct ScanResult {
    pub s: Vec<f64>,
    pub values: Vec<Estimate>,
}

impl ScanResult {
    pub fn s_scaled(&self) -> Vec<f64> {
        self.s.iter().zip(&self.values).map(|(s, v)| s * v.value).collect()
    }

    pub fn one_minus_s_scaled(&self) -> Vec<f64> {
        self.s.iter().zip(&self.values).map(|(s, v)| (1.0 - s) * v.value).collect()
    }

    /// Number of strict sign flips along the grid (zeros are skipped).
    pub fn sign_changes(&self) -> usize {
        let signs: Vec<bool> = self
            .values
            .iter()
            .filter(|v| v.value != 0.0)
            .map(|v| v.value > 0.0)
            .collect();
        signs.windows(2).filter(|w| w[0] != w[1]).count()
    }
}

/// Runs `eval` at each order of the grid.
pub fn asymptotic_scan<F: FnMut(f64) -> Result<Estimate>>(
    s_grid: &[f64],
    mut eval: F,
) -> Result<ScanResult> {
    let mut out = ScanResult::default();
    for &s in s_grid {
        crate::check_order(s)?;
        out.values.push(eval(s)?);
        out.s.push(s);
    }
    Ok(out)
}
