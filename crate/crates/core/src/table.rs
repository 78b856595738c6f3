//! Long-format experiment tables: one row per `(k, index, statistic)`.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TableRow {
    pub k: u64,
    pub index: u64,
    pub statistic: String,
    pub value: f64,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct TableMeta {
    pub experiment: String,
    pub p: Option<f64>,
    pub resolution: Option<u32>,
    pub schedule: Option<String>,
    /// Number of atoms (or indices) kept after truncation to the resolution.
    pub truncation: Option<usize>,
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub extra: BTreeMap<String, String>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct ExperimentTable {
    pub meta: TableMeta,
    pub rows: Vec<TableRow>,
}

impl ExperimentTable {
    pub fn new(experiment: impl Into<String>) -> Self {
        Self {
            meta: TableMeta {
                experiment: experiment.into(),
                ..TableMeta::default()
            },
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, k: u64, index: u64, statistic: &str, value: f64) {
        self.rows.push(TableRow {
            k,
            index,
            statistic: statistic.to_owned(),
            value,
        });
    }

    pub fn note(&mut self, key: &str, value: impl ToString) {
        self.meta.extra.insert(key.to_owned(), value.to_string());
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    /// Distinct statistic names in first-appearance order.
    pub fn statistics(&self) -> Vec<String> {
        let mut out: Vec<String> = Vec::new();
        for r in &self.rows {
            if !out.contains(&r.statistic) {
                out.push(r.statistic.clone());
            }
        }
        out
    }

    /// `(index, value)` pairs of one statistic, in row order.
    pub fn column(&self, statistic: &str) -> Vec<(u64, f64)> {
        self.rows
            .iter()
            .filter(|r| r.statistic == statistic)
            .map(|r| (r.index, r.value))
            .collect()
    }

    pub fn values(&self, statistic: &str) -> Vec<f64> {
        self.column(statistic).into_iter().map(|(_, v)| v).collect()
    }

    /// Every value is finite and, within each statistic, indices strictly
    /// increase.
    pub fn is_well_formed(&self) -> bool {
        self.rows.iter().all(|r| r.value.is_finite())
            && self.statistics().iter().all(|s| {
                self.column(s).windows(2).all(|w| w[0].0 < w[1].0)
            })
    }

    /// Sorts rows by `(k, index)` keeping statistic order stable.
    pub fn sort(&mut self) {
        self.rows.sort_by_key(|r| (r.k, r.index));
    }
}

pub fn strictly_increasing(values: &[f64]) -> bool {
    values.windows(2).all(|w| w[0] < w[1])
}

pub fn strictly_decreasing(values: &[f64]) -> bool {
    values.windows(2).all(|w| w[0] > w[1])
}

/// `max / min` over the strictly positive entries; `None` when there are none.
pub fn spread_ratio(values: &[f64]) -> Option<f64> {
    let positive: Vec<f64> = values.iter().copied().filter(|&v| v > 0.0).collect();
    let max = positive.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let min = positive.iter().copied().fold(f64::INFINITY, f64::min);
    (!positive.is_empty()).then(|| max / min)
}
