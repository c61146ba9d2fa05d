//! Pointedness certificates and the unimodular change of coordinates that
//! makes the matrix nonnegative.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::spec::ProblemSpec;
use crate::arith::rat::{rat_int, rat_vec, Rat};
use crate::error::{Error, Result};

/// Certificate and transform attached to a computed expression.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PreprocessReport {
    #[serde(with = "rat_vec")]
    pub certificate: Vec<Rat>,
    pub unimodular: Vec<Vec<i64>>,
    pub normalized: Vec<Vec<i64>>,
}

/// Inequality `coeffs · y >= rhs`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
struct Ineq {
    coeffs: Vec<Rat>,
    rhs: Rat,
}

impl Ineq {
    /// Scales so the first nonzero coefficient has absolute value 1.
    fn normalized(self) -> Ineq {
        let Some(lead) = self.coeffs.iter().find(|c| !c.is_zero()).map(Rat::abs) else {
            return self;
        };
        Ineq { coeffs: self.coeffs.iter().map(|c| c / &lead).collect(), rhs: self.rhs / lead }
    }
}

fn eliminate(system: &[Ineq], j: usize) -> Vec<Ineq> {
    let (mut pos, mut neg, mut out) = (Vec::new(), Vec::new(), Vec::new());
    for q in system {
        if q.coeffs[j].is_positive() {
            pos.push(q);
        } else if q.coeffs[j].is_negative() {
            neg.push(q);
        } else {
            out.push(q.clone());
        }
    }
    for p in &pos {
        for n in &neg {
            let (a, b) = (-&n.coeffs[j], p.coeffs[j].clone());
            let coeffs = p.coeffs.iter().zip(&n.coeffs).map(|(x, y)| x * &a + y * &b).collect();
            out.push(Ineq { coeffs, rhs: &p.rhs * &a + &n.rhs * &b }.normalized());
        }
    }
    out.sort();
    out.dedup();
    out
}

fn ceil(q: &Rat) -> Rat {
    Rat::from_integer(q.ceil().to_integer())
}

fn floor(q: &Rat) -> Rat {
    Rat::from_integer(q.floor().to_integer())
}

/// Finds `y` with `y · c_k >= 1` for every column by Fourier–Motzkin
/// elimination; such a `y` exists iff the columns span a pointed cone.
pub fn check_pointed(spec: &ProblemSpec) -> Result<Vec<Rat>> {
    let m = spec.m;
    let base: Vec<Ineq> = spec
        .columns()
        .into_iter()
        .map(|c| Ineq { coeffs: c.iter().map(|&x| rat_int(x)).collect(), rhs: Rat::one() }.normalized())
        .collect();
    // stages[j] involves only y_0..=y_j
    let mut stages = vec![base];
    for j in (1..m).rev() {
        let next = eliminate(stages.last().expect("nonempty"), j);
        stages.push(next);
    }
    stages.reverse();
    let last = eliminate(&stages[0], 0);
    if last.iter().any(|q| q.rhs.is_positive()) {
        return Err(Error::NotPointed(format!("no y with y·c >= 1 for all columns of {:?}", spec.entries)));
    }

    let mut y: Vec<Rat> = Vec::with_capacity(m);
    for (j, system) in stages.iter().enumerate() {
        let (mut lo, mut hi): (Option<Rat>, Option<Rat>) = (None, None);
        for q in system {
            let a = &q.coeffs[j];
            if a.is_zero() {
                continue;
            }
            let fixed: Rat = q.coeffs[..j].iter().zip(&y).map(|(c, v)| c * v).sum();
            let bound = (&q.rhs - fixed) / a;
            if a.is_positive() {
                lo = Some(lo.map_or(bound.clone(), |l| l.max(bound)));
            } else {
                hi = Some(hi.map_or(bound.clone(), |h| h.min(bound)));
            }
        }
        let int_lo = lo.as_ref().map(ceil);
        let int_hi = hi.as_ref().map(floor);
        let mut v = Rat::zero();
        if let Some(l) = &int_lo {
            v = v.max(l.clone());
        }
        if let Some(h) = &int_hi {
            v = v.min(h.clone());
        }
        let fits = lo.as_ref().is_none_or(|l| &v >= l) && hi.as_ref().is_none_or(|h| &v <= h);
        y.push(if fits { v } else { lo.expect("feasible interval without integer has a lower end") });
    }
    for c in spec.columns() {
        let val: Rat = c.iter().zip(&y).map(|(&x, v)| rat_int(x) * v).sum();
        if val < Rat::one() {
            return Err(Error::SanityFailure(format!("certificate {y:?} fails on column {c:?}")));
        }
    }
    Ok(y)
}

/// Clears denominators of `y` and divides out the content.
pub fn primitive_integer(y: &[Rat]) -> Result<Vec<i64>> {
    let l = y.iter().fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
    let ints: Vec<BigInt> = y.iter().map(|q| q.numer() * (&l / q.denom())).collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if g.is_zero() {
        return Err(Error::InvalidInput("zero certificate".into()));
    }
    ints.iter()
        .map(|x| (x / &g).to_i64().ok_or_else(|| Error::InvalidInput("certificate entry exceeds i64".into())))
        .collect()
}

/// Exact integer determinant by fraction-free elimination.
pub fn determinant(mat: &[Vec<i64>]) -> BigInt {
    let n = mat.len();
    let mut a: Vec<Vec<BigInt>> = mat.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n {
        let Some(p) = (k..n).find(|&i| !a[i][k].is_zero()) else { return BigInt::zero() };
        if p != k {
            a.swap(p, k);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                a[i][j] = (&a[i][j] * &a[k][k] - &a[i][k] * &a[k][j]) / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    if n == 0 {
        return BigInt::one();
    }
    sign * &a[n - 1][n - 1]
}

pub(crate) fn mat_mul(a: &[Vec<i64>], b: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let inner = b.len();
    let cols = b.first().map_or(0, Vec::len);
    a.iter()
        .map(|row| (0..cols).map(|j| (0..inner).map(|k| row[k] * b[k][j]).sum()).collect())
        .collect()
}

pub(crate) fn mat_vec(a: &[Vec<i64>], v: &[i64]) -> Vec<i64> {
    a.iter().map(|row| row.iter().zip(v).map(|(x, y)| x * y).sum()).collect()
}

pub(crate) fn identity(m: usize) -> Vec<Vec<i64>> {
    (0..m).map(|i| (0..m).map(|j| i64::from(i == j)).collect()).collect()
}

/// Integer inverse of a unimodular matrix.
fn unimodular_inverse(w: &[Vec<i64>]) -> Result<Vec<Vec<i64>>> {
    let n = w.len();
    let mut a: Vec<Vec<Rat>> = w
        .iter()
        .enumerate()
        .map(|(i, r)| r.iter().map(|&x| rat_int(x)).chain((0..n).map(|j| rat_int(i64::from(i == j)))).collect())
        .collect();
    for k in 0..n {
        let p = (k..n)
            .find(|&i| !a[i][k].is_zero())
            .ok_or_else(|| Error::SanityFailure("completion matrix is singular".into()))?;
        a.swap(p, k);
        let piv = a[k][k].clone();
        for x in a[k].iter_mut() {
            *x = &*x / &piv;
        }
        for i in 0..n {
            if i != k && !a[i][k].is_zero() {
                let f = a[i][k].clone();
                let row_k = a[k].clone();
                for (x, y) in a[i].iter_mut().zip(&row_k) {
                    *x = &*x - &f * y;
                }
            }
        }
    }
    a.iter()
        .map(|r| {
            r[n..]
                .iter()
                .map(|x| {
                    if x.is_integer() {
                        x.to_integer().to_i64().ok_or_else(|| Error::SanityFailure("entry exceeds i64".into()))
                    } else {
                        Err(Error::SanityFailure("completion matrix is not unimodular".into()))
                    }
                })
                .collect()
        })
        .collect()
}

/// Builds `U` with `|det U| = 1`, last row the primitive multiple of `y`,
/// and `UA >= 0` entrywise.
pub fn nonnegativize(spec: &ProblemSpec, y: &[Rat]) -> Result<PreprocessReport> {
    let m = spec.m;
    let yi = primitive_integer(y)?;
    // column operations W with yi·W = e_m
    let mut w = identity(m);
    let mut row = yi.clone();
    for i in 0..m - 1 {
        if row[i] == 0 {
            continue;
        }
        let (x, z) = (row[i], row[m - 1]);
        let e = x.extended_gcd(&z);
        let (g, s, t) = (e.gcd, e.x, e.y);
        for r in w.iter_mut() {
            let (ci, cm) = (r[i], r[m - 1]);
            r[i] = (z / g) * ci - (x / g) * cm;
            r[m - 1] = s * ci + t * cm;
        }
        row[i] = 0;
        row[m - 1] = g;
    }
    if row[m - 1] == -1 {
        for r in w.iter_mut() {
            r[m - 1] = -r[m - 1];
        }
    } else if row[m - 1] != 1 {
        return Err(Error::SanityFailure(format!("certificate {yi:?} is not primitive")));
    }
    let mut u = unimodular_inverse(&w)?;
    debug_assert_eq!(u[m - 1], yi);

    let ua = mat_mul(&u, &spec.entries);
    let heights = &ua[m - 1];
    if heights.iter().any(|&h| h <= 0) {
        return Err(Error::SanityFailure("certificate row is not positive on every column".into()));
    }
    for i in 0..m - 1 {
        let t = ua[i]
            .iter()
            .zip(heights)
            .map(|(&v, &h)| if v < 0 { (-v + h - 1) / h } else { 0 })
            .max()
            .unwrap_or(0);
        for j in 0..m {
            u[i][j] += t * yi[j];
        }
    }
    let normalized = mat_mul(&u, &spec.entries);
    if !determinant(&u).abs().is_one() {
        return Err(Error::SanityFailure(format!("transform {u:?} is not unimodular")));
    }
    if normalized.iter().flatten().any(|&x| x < 0) {
        return Err(Error::SanityFailure("transformed matrix has a negative entry".into()));
    }
    Ok(PreprocessReport { certificate: y.to_vec(), unimodular: u, normalized })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dot(y: &[Rat], c: &[i64]) -> Rat {
        y.iter().zip(c).map(|(v, &x)| v * rat_int(x)).sum()
    }

    #[test]
    fn certificates() {
        let a2 = ProblemSpec::from_rows(&[&[1, 0, 1], &[0, 1, 1]]).unwrap();
        let y = check_pointed(&a2).unwrap();
        assert_eq!(y, vec![rat_int(1), rat_int(1)]);

        let mixed = ProblemSpec::from_rows(&[&[1, 2], &[-1, 0]]).unwrap();
        let y = check_pointed(&mixed).unwrap();
        for c in mixed.columns() {
            assert!(dot(&y, &c) >= Rat::one());
        }
    }

    #[test]
    fn not_pointed() {
        let s = ProblemSpec::from_rows(&[&[1, -1]]).unwrap();
        assert!(matches!(check_pointed(&s), Err(Error::NotPointed(_))));
        let zero_col = ProblemSpec::from_rows(&[&[1, 0], &[1, 0]]).unwrap();
        assert!(matches!(check_pointed(&zero_col), Err(Error::NotPointed(_))));
        let line = ProblemSpec::from_rows(&[&[1, -1], &[2, -2]]).unwrap();
        assert!(matches!(check_pointed(&line), Err(Error::NotPointed(_))));
    }

    #[test]
    fn determinants() {
        assert_eq!(determinant(&[vec![2, 1], vec![7, 4]]), BigInt::one());
        assert_eq!(determinant(&[vec![0, 1], vec![1, 0]]), -BigInt::one());
        assert_eq!(determinant(&[vec![1, 2, 3], vec![4, 5, 6], vec![7, 8, 10]]), BigInt::from(-3));
        assert_eq!(determinant(&[vec![1, 2], vec![2, 4]]), BigInt::zero());
    }

    #[test]
    fn mixed_sign_matrix() {
        let s = ProblemSpec::from_rows(&[&[1, 2], &[-1, 0]]).unwrap();
        let y = check_pointed(&s).unwrap();
        let r = nonnegativize(&s, &y).unwrap();
        assert!(determinant(&r.unimodular).abs().is_one());
        assert!(r.normalized.iter().flatten().all(|&x| x >= 0));
    }

    #[test]
    fn nonnegative_input_stays_nonnegative() {
        let s = ProblemSpec::from_rows(&[&[1, 0, 1], &[0, 1, 1]]).unwrap();
        let y = check_pointed(&s).unwrap();
        let r = nonnegativize(&s, &y).unwrap();
        assert!(r.normalized.iter().flatten().all(|&x| x >= 0));
        assert_eq!(r.unimodular[1], vec![1, 1]);
    }
}
