use serde::{Deserialize, Serialize};

use crate::arith::rat::{rat_vec, Rat};
use crate::error::{Error, Result};

/// Input of the counting problem: the matrix `A` (row-major), optional
/// phases `q` weighting column `k` by `e(q_k)^{x_k}`, and a free-text label.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProblemSpec {
    pub m: usize,
    pub d: usize,
    pub entries: Vec<Vec<i64>>,
    #[serde(with = "rat_vec")]
    pub phases: Vec<Rat>,
    #[serde(default)]
    pub label: String,
}

impl ProblemSpec {
    /// Checks the shape; phases default to zero.
    pub fn new(entries: Vec<Vec<i64>>, phases: Option<Vec<Rat>>, label: impl Into<String>) -> Result<ProblemSpec> {
        let m = entries.len();
        let d = entries.first().map_or(0, Vec::len);
        if m == 0 || d == 0 {
            return Err(Error::InvalidInput("matrix must have at least one row and one column".into()));
        }
        if let Some(row) = entries.iter().find(|r| r.len() != d) {
            return Err(Error::DimensionMismatch { expected: d, got: row.len() });
        }
        let phases = phases.unwrap_or_else(|| vec![Rat::default(); d]);
        if phases.len() != d {
            return Err(Error::DimensionMismatch { expected: d, got: phases.len() });
        }
        Ok(ProblemSpec { m, d, entries, phases, label: label.into() })
    }

    pub fn from_rows(rows: &[&[i64]]) -> Result<ProblemSpec> {
        ProblemSpec::new(rows.iter().map(|r| r.to_vec()).collect(), None, "")
    }

    pub fn validate(&self) -> Result<()> {
        ProblemSpec::new(self.entries.clone(), Some(self.phases.clone()), self.label.clone()).and_then(|s| {
            if (s.m, s.d) == (self.m, self.d) {
                Ok(())
            } else {
                Err(Error::InvalidInput(format!("declared shape {}x{} does not match entries", self.m, self.d)))
            }
        })
    }

    pub fn column(&self, k: usize) -> Vec<i64> {
        self.entries.iter().map(|r| r[k]).collect()
    }

    pub fn columns(&self) -> Vec<Vec<i64>> {
        (0..self.d).map(|k| self.column(k)).collect()
    }

    pub fn is_nonnegative(&self) -> bool {
        self.entries.iter().flatten().all(|&e| e >= 0)
    }

    pub fn has_phases(&self) -> bool {
        self.phases.iter().any(|q| !crate::arith::rat::is_integer(q))
    }

    /// The same problem with rows reordered: row `i` of the result is row `order[i]`.
    pub fn permute_rows(&self, order: &[usize]) -> Result<ProblemSpec> {
        check_permutation(order, self.m)?;
        let entries = order.iter().map(|&i| self.entries[i].clone()).collect();
        ProblemSpec::new(entries, Some(self.phases.clone()), self.label.clone())
    }
}

pub(crate) fn check_permutation(order: &[usize], m: usize) -> Result<()> {
    let mut seen = vec![false; m];
    if order.len() != m {
        return Err(Error::DimensionMismatch { expected: m, got: order.len() });
    }
    for &i in order {
        if i >= m || std::mem::replace(&mut seen[i], true) {
            return Err(Error::InvalidInput(format!("{order:?} is not a permutation of 0..{m}")));
        }
    }
    Ok(())
}
