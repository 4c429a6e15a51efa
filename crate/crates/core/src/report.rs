//! Strategy × size comparison matrices and their CSV/JSON/table renderings.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::Serialize;

use crate::estimate::{Estimate, EstimateError, Estimator, StrategyKind};
use crate::input::{synthesize_input, Fill};
use crate::schedule::Fork;

pub const CSV_HEADER: &str = "strategy,fork,size_bytes,gas_total,refund,exceeds_block_limit";

#[derive(Debug, Clone, Serialize)]
pub struct SizeRanking {
    pub size_bytes: usize,
    /// Cheapest first; ties keep declaration order.
    pub order: Vec<StrategyKind>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ComparisonReport {
    pub fork: Fork,
    pub block_gas_limit: u64,
    pub fill: String,
    pub schedule: BTreeMap<&'static str, u64>,
    pub sizes: Vec<usize>,
    pub strategies: Vec<StrategyKind>,
    /// Strategy-major: all sizes of the first strategy, then the next.
    pub estimates: Vec<Estimate>,
    pub rankings: Vec<SizeRanking>,
}

/// Evaluates every (strategy, size) cell. Strategies are reported in
/// declaration order and sizes ascending, whatever order they were given in.
pub fn compare(
    estimator: &Estimator,
    sizes: &[usize],
    strategies: &[StrategyKind],
    fill: Fill,
) -> Result<ComparisonReport, EstimateError> {
    let mut sizes = sizes.to_vec();
    sizes.sort_unstable();
    sizes.dedup();
    let mut strategies = strategies.to_vec();
    strategies.sort_unstable();
    strategies.dedup();

    let inputs: Vec<Vec<u8>> = sizes.iter().map(|&n| synthesize_input(n, fill)).collect();
    let mut estimates = Vec::with_capacity(sizes.len() * strategies.len());
    for &strategy in &strategies {
        for data in &inputs {
            estimates.push(estimator.estimate(strategy, data)?);
        }
    }

    let rankings = sizes
        .iter()
        .enumerate()
        .map(|(i, &size_bytes)| {
            let mut cells: Vec<&Estimate> = (0..strategies.len()).map(|s| &estimates[s * sizes.len() + i]).collect();
            cells.sort_by_key(|e| e.gas_total);
            SizeRanking { size_bytes, order: cells.iter().map(|e| e.strategy).collect() }
        })
        .collect();

    Ok(ComparisonReport {
        fork: estimator.fork(),
        block_gas_limit: estimator.block_gas_limit(),
        fill: fill.to_string(),
        schedule: estimator.schedule().to_map(),
        sizes,
        strategies,
        estimates,
        rankings,
    })
}

impl ComparisonReport {
    pub fn get(&self, strategy: StrategyKind, size: usize) -> Option<&Estimate> {
        let s = self.strategies.iter().position(|k| *k == strategy)?;
        let i = self.sizes.iter().position(|n| *n == size)?;
        self.estimates.get(s * self.sizes.len() + i)
    }

    /// `(size, gas)` points for one strategy.
    pub fn series(&self, strategy: StrategyKind) -> Vec<(usize, u64)> {
        self.estimates.iter().filter(|e| e.strategy == strategy).map(|e| (e.data_size, e.gas_total)).collect()
    }

    pub fn to_csv(&self, net: bool) -> String {
        let mut out = String::from(CSV_HEADER);
        if net {
            out.push_str(",net_gas");
        }
        out.push('\n');
        for e in &self.estimates {
            write_csv_row(&mut out, e, net);
        }
        out
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("report serializes")
    }

    pub fn to_table(&self) -> String {
        let mut out =
            format!("fork: {}   block gas limit: {}   fill: {}\n", self.fork, self.block_gas_limit, self.fill);
        let name_width = self.strategies.iter().map(|s| s.as_str().len()).max().unwrap_or(8).max(8);
        let _ = write!(out, "{:<name_width$}", "strategy");
        for size in &self.sizes {
            let _ = write!(out, " {:>12}", format!("{size} B"));
        }
        out.push('\n');
        for (s, strategy) in self.strategies.iter().enumerate() {
            let _ = write!(out, "{:<name_width$}", strategy.as_str());
            for i in 0..self.sizes.len() {
                let e = &self.estimates[s * self.sizes.len() + i];
                let mark = if e.exceeds_block_limit { "*" } else { "" };
                let _ = write!(out, " {:>12}", format!("{}{mark}", e.gas_total));
            }
            out.push('\n');
        }
        out.push_str("* exceeds block gas limit\n");
        out
    }
}

pub(crate) fn write_csv_row(out: &mut String, e: &Estimate, net: bool) {
    let _ =
        write!(out, "{},{},{},{},{},{}", e.strategy, e.fork, e.data_size, e.gas_total, e.refund, e.exceeds_block_limit);
    if net {
        let _ = write!(out, ",{}", e.net_gas());
    }
    out.push('\n');
}
