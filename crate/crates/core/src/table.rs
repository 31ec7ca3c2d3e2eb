use std::collections::BTreeMap;

use serde::Serialize;

/// One `(parameter, γ)` row. `param` may be `+inf` for the ultrarelativistic
/// limit of the bound curve.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SweepRow {
    pub param: f64,
    pub gamma: f64,
    pub err_est: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepTable {
    /// Name of the swept parameter (`d` or `a`).
    pub parameter: String,
    pub rows: Vec<SweepRow>,
    pub metadata: BTreeMap<String, f64>,
}

impl SweepTable {
    pub fn new(parameter: impl Into<String>) -> Self {
        Self {
            parameter: parameter.into(),
            rows: Vec::new(),
            metadata: BTreeMap::new(),
        }
    }

    pub fn gammas(&self) -> impl Iterator<Item = f64> + '_ {
        self.rows.iter().map(|r| r.gamma)
    }

    pub fn is_strictly_decreasing(&self) -> bool {
        self.rows.windows(2).all(|w| w[1].gamma < w[0].gamma)
    }

    pub fn is_strictly_increasing(&self) -> bool {
        self.rows.windows(2).all(|w| w[1].gamma > w[0].gamma)
    }
}
