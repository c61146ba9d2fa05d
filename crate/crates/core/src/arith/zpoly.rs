//! Integer kernels for cyclotomic arithmetic. Rational coefficient vectors are
//! scaled to a common denominator so that products, reductions modulo `Φ_N`
//! and inverses run over `Z` without a gcd per operation.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use super::rat::Rat;

/// `(numerators, d)` with `coeffs[i] = numerators[i] / d` and `d > 0`.
pub(crate) fn to_integer(coeffs: &[Rat]) -> (Vec<BigInt>, BigInt) {
    let d = coeffs.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let nums = coeffs.iter().map(|c| c.numer() * (&d / c.denom())).collect();
    (nums, d)
}

pub(crate) fn from_integer(nums: Vec<BigInt>, d: &BigInt) -> Vec<Rat> {
    nums.into_iter().map(|n| Rat::new(n, d.clone())).collect()
}

pub(crate) fn mul(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            if !y.is_zero() {
                out[i + j] += x * y;
            }
        }
    }
    out
}

/// Reduces modulo the monic polynomial `phi` and pads to `deg phi` entries.
pub(crate) fn reduce(mut raw: Vec<BigInt>, phi: &[i64]) -> Vec<BigInt> {
    let deg = phi.len() - 1;
    for k in (deg..raw.len()).rev() {
        if raw[k].is_zero() {
            continue;
        }
        let c = std::mem::take(&mut raw[k]);
        for (i, &pc) in phi[..deg].iter().enumerate() {
            if pc != 0 {
                raw[k - deg + i] -= &c * pc;
            }
        }
    }
    raw.resize(deg, BigInt::zero());
    raw
}

/// Solves `a · x = rhs` for square integer `a` by Bareiss elimination and
/// exact back-substitution on `det · x`; `None` if `a` is singular.
pub(crate) fn solve(mut a: Vec<Vec<BigInt>>, rhs: Vec<BigInt>) -> Option<Vec<Rat>> {
    let n = a.len();
    for (row, r) in a.iter_mut().zip(rhs) {
        row.push(r);
    }
    let mut prev = BigInt::one();
    for k in 0..n {
        let p = (k..n).find(|&i| !a[i][k].is_zero())?;
        a.swap(p, k);
        let (top, rest) = a.split_at_mut(k + 1);
        let pivot_row = &top[k];
        for row in rest.iter_mut() {
            let f = std::mem::take(&mut row[k]);
            for j in k + 1..=n {
                let v = &pivot_row[k] * &row[j] - &f * &pivot_row[j];
                row[j] = if prev.is_one() { v } else { v / &prev };
            }
        }
        prev = a[k][k].clone();
    }
    // y = det · x is integral
    let det = prev;
    let mut y = vec![BigInt::zero(); n];
    for i in (0..n).rev() {
        let mut acc = &det * &a[i][n];
        for j in i + 1..n {
            acc -= &a[i][j] * &y[j];
        }
        y[i] = acc / &a[i][i];
    }
    Some(y.into_iter().map(|v| Rat::new(v, det.clone())).collect())
}
