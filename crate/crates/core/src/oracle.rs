//! Brute-force lattice point counting, independent of the elimination engine.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::pipeline::{check_pointed, ProblemSpec};

/// Per-column upper bounds `x_k <= y·b / (y·c_k)` from an integer certificate.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EnumBound {
    pub bounds: Vec<i64>,
}

struct Search<'a> {
    cols: Vec<Vec<i64>>,
    y: Vec<i128>,
    heights: Vec<i128>,
    /// `prefix_nonneg[k]`: columns `0..=k` are all nonnegative
    prefix_nonneg: Vec<bool>,
    count: &'a mut BigUint,
}

fn dot(y: &[i128], v: &[i64]) -> i128 {
    y.iter().zip(v).map(|(a, &b)| a * i128::from(b)).sum()
}

/// Integer multiple of the certificate, still with `y·c_k >= 1`.
fn integer_certificate(spec: &ProblemSpec) -> Result<Vec<i128>> {
    let y = check_pointed(spec)?;
    let l = y.iter().fold(BigInt::from(1), |acc, q| acc.lcm(q.denom()));
    y.iter()
        .map(|q| {
            (q.numer() * (&l / q.denom()))
                .to_i128()
                .ok_or_else(|| Error::InvalidInput("certificate exceeds i128".into()))
        })
        .collect()
}

impl EnumBound {
    pub fn new(spec: &ProblemSpec, b: &[i64]) -> Result<EnumBound> {
        let y = integer_certificate(spec)?;
        let yb = dot(&y, b);
        let bounds = spec
            .columns()
            .iter()
            .map(|c| if yb < 0 { -1 } else { (yb / dot(&y, c)) as i64 })
            .collect();
        Ok(EnumBound { bounds })
    }
}

impl Search<'_> {
    /// Assigns `x_k` for columns `k, k-1, …, 0`; column 0 is solved by divisibility.
    fn run(&mut self, k: usize, r: &mut Vec<i64>) {
        let yr = dot(&self.y, r);
        if yr < 0 {
            return;
        }
        if self.prefix_nonneg[k] && r.iter().any(|&x| x < 0) {
            return;
        }
        let c = self.cols[k].clone();
        if k == 0 {
            let mut mult: Option<i64> = None;
            for (&ri, &ci) in r.iter().zip(&c) {
                if ci == 0 {
                    if ri != 0 {
                        return;
                    }
                } else {
                    if ri % ci != 0 {
                        return;
                    }
                    let q = ri / ci;
                    if q < 0 || mult.is_some_and(|m| m != q) {
                        return;
                    }
                    mult = Some(q);
                }
            }
            *self.count += 1u32;
            return;
        }
        let max = yr / self.heights[k];
        for _ in 0..=max {
            self.run(k - 1, r);
            for (ri, ci) in r.iter_mut().zip(&c) {
                *ri -= ci;
            }
        }
        for (ri, ci) in r.iter_mut().zip(&c) {
            *ri += ci * (max as i64 + 1);
        }
    }
}

/// `|{x ∈ Z_{>=0}^d : Ax = b}|` by depth-first search.
pub fn count_points(spec: &ProblemSpec, b: &[i64]) -> Result<BigUint> {
    if b.len() != spec.m {
        return Err(Error::DimensionMismatch { expected: spec.m, got: b.len() });
    }
    let y = integer_certificate(spec)?;
    let cols = spec.columns();
    let heights = cols.iter().map(|c| dot(&y, c)).collect();
    let mut prefix_nonneg = Vec::with_capacity(cols.len());
    let mut all = true;
    for c in &cols {
        all &= c.iter().all(|&x| x >= 0);
        prefix_nonneg.push(all);
    }
    let mut count = BigUint::zero();
    let mut search = Search { cols, y, heights, prefix_nonneg, count: &mut count };
    let mut r = b.to_vec();
    search.run(spec.d - 1, &mut r);
    Ok(count)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn count(rows: &[&[i64]], b: &[i64]) -> u64 {
        count_points(&ProblemSpec::from_rows(rows).unwrap(), b).unwrap().try_into().unwrap()
    }

    #[test]
    fn small_cases() {
        assert_eq!(count(&[&[1]], &[5]), 1);
        assert_eq!(count(&[&[2]], &[3]), 0);
        assert_eq!(count(&[&[1, 0, 1], &[0, 1, 1]], &[2, 5]), 3);
        assert_eq!(count(&[&[1, 1]], &[7]), 8);
        assert_eq!(count(&[&[1, 1]], &[-1]), 0);
    }

    #[test]
    fn kostant_closed_form() {
        for a in 0..12 {
            for b in 0..12 {
                assert_eq!(count(&[&[1, 0, 1], &[0, 1, 1]], &[a, b]), a.min(b) as u64 + 1);
            }
        }
    }

    #[test]
    fn mixed_signs() {
        // columns (1,-1), (2,0): x1 = -b2, 2 x2 = b1 - x1
        for b1 in -3..8 {
            for b2 in -5..3 {
                let expect = u64::from(b2 <= 0 && (b1 + b2) >= 0 && (b1 + b2) % 2 == 0);
                assert_eq!(count(&[&[1, 2], &[-1, 0]], &[b1, b2]), expect);
            }
        }
    }

    #[test]
    fn bounds() {
        let s = ProblemSpec::from_rows(&[&[1, 0, 1], &[0, 1, 1]]).unwrap();
        assert_eq!(EnumBound::new(&s, &[2, 5]).unwrap().bounds, vec![7, 7, 3]);
        assert!(count_points(&ProblemSpec::from_rows(&[&[1, -1]]).unwrap(), &[0]).is_err());
    }
}
