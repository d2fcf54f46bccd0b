//! Finite distributions over products of outcome sets.

use serde::Serialize;

use crate::error::{Error, Result};

/// One outcome axis of a [`DistributionTable`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Axis {
    pub name: String,
    pub labels: Vec<String>,
}

impl Axis {
    pub fn new(name: impl Into<String>, labels: Vec<String>) -> Self {
        Self {
            name: name.into(),
            labels,
        }
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }
}

/// Nonnegative weights indexed by a product of outcome axes, stored row-major
/// (the last axis varies fastest).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DistributionTable {
    axes: Vec<Axis>,
    entries: Vec<f64>,
}

impl DistributionTable {
    pub fn new(axes: Vec<Axis>, entries: Vec<f64>) -> Result<Self> {
        if axes.is_empty() || axes.len() > 3 {
            return Err(Error::InvalidArgument(format!(
                "a table has 1 to 3 axes, got {}",
                axes.len()
            )));
        }
        if axes.iter().any(Axis::is_empty) {
            return Err(Error::InvalidArgument("table axis without labels".into()));
        }
        let size: usize = axes.iter().map(Axis::len).product();
        if size != entries.len() {
            return Err(Error::InvalidArgument(format!(
                "table shape needs {size} entries, got {}",
                entries.len()
            )));
        }
        Ok(Self { axes, entries })
    }

    pub fn axes(&self) -> &[Axis] {
        &self.axes
    }

    pub fn entries(&self) -> &[f64] {
        &self.entries
    }

    pub fn shape(&self) -> Vec<usize> {
        self.axes.iter().map(Axis::len).collect()
    }

    fn offset(&self, index: &[usize]) -> Option<usize> {
        if index.len() != self.axes.len() {
            return None;
        }
        let mut offset = 0;
        for (axis, &i) in self.axes.iter().zip(index) {
            if i >= axis.len() {
                return None;
            }
            offset = offset * axis.len() + i;
        }
        Some(offset)
    }

    pub fn get(&self, index: &[usize]) -> Option<f64> {
        self.offset(index).map(|o| self.entries[o])
    }

    pub fn get_by_labels(&self, labels: &[&str]) -> Option<f64> {
        if labels.len() != self.axes.len() {
            return None;
        }
        let index: Option<Vec<usize>> = self
            .axes
            .iter()
            .zip(labels)
            .map(|(axis, l)| axis.labels.iter().position(|x| x == l))
            .collect();
        self.get(&index?)
    }

    pub fn total(&self) -> f64 {
        self.entries.iter().sum()
    }

    /// Sums out every axis not listed in `keep`. The kept axes appear in the
    /// order given.
    pub fn marginal(&self, keep: &[usize]) -> Result<DistributionTable> {
        if keep.is_empty() || keep.iter().any(|&k| k >= self.axes.len()) {
            return Err(Error::InvalidArgument(format!(
                "invalid marginal axes {keep:?} for a {}-axis table",
                self.axes.len()
            )));
        }
        let shape = self.shape();
        let axes: Vec<Axis> = keep.iter().map(|&k| self.axes[k].clone()).collect();
        let out_shape: Vec<usize> = axes.iter().map(Axis::len).collect();
        let mut out = vec![0.0; out_shape.iter().product()];
        let mut index = vec![0usize; shape.len()];
        for &value in &self.entries {
            let mut o = 0;
            for (&k, &len) in keep.iter().zip(&out_shape) {
                o = o * len + index[k];
            }
            out[o] += value;
            // odometer step
            for d in (0..shape.len()).rev() {
                index[d] += 1;
                if index[d] < shape[d] {
                    break;
                }
                index[d] = 0;
            }
        }
        DistributionTable::new(axes, out)
    }

    pub fn min_entry(&self) -> f64 {
        self.entries.iter().copied().fold(f64::INFINITY, f64::min)
    }

    /// True when every entry is at least `-tol` and the total is within `tol` of 1.
    pub fn is_probability_measure(&self, tol: f64) -> bool {
        self.min_entry() >= -tol && (self.total() - 1.0).abs() <= tol
    }

    /// Largest absolute entrywise difference, or `None` when shapes differ.
    pub fn max_deviation(&self, other: &DistributionTable) -> Option<f64> {
        if self.shape() != other.shape() {
            return None;
        }
        Some(
            self.entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| (a - b).abs())
                .fold(0.0, f64::max),
        )
    }

    /// Iterates over `(index, value)` in storage order.
    pub fn cells(&self) -> impl Iterator<Item = (Vec<usize>, f64)> + '_ {
        let shape = self.shape();
        self.entries.iter().enumerate().map(move |(flat, &v)| {
            let mut index = vec![0; shape.len()];
            let mut rest = flat;
            for d in (0..shape.len()).rev() {
                index[d] = rest % shape[d];
                rest /= shape[d];
            }
            (index, v)
        })
    }
}
