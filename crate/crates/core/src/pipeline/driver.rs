use std::collections::BTreeMap;
use std::time::{Duration, Instant};

use num_bigint::BigUint;
use num_traits::Signed;
use serde::{Deserialize, Serialize};

use super::preprocess::{check_pointed, identity, mat_mul, mat_vec, nonnegativize, PreprocessReport};
use super::spec::{check_permutation, ProblemSpec};
use crate::arith::Cyclotomic;
use crate::error::{Error, Result};
use crate::genfun::{eliminate_last_var, final_univariate, GenFunState};
use crate::param::{Guard, ParamPoly, PhaseForm, Term};
use crate::oracle::count_points;

/// Where an expression came from and how to map user coordinates onto its parameters.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Provenance {
    pub matrix: Vec<Vec<i64>>,
    #[serde(with = "crate::arith::rat::rat_vec")]
    pub phases: Vec<crate::arith::Rat>,
    #[serde(default)]
    pub label: String,
    #[serde(flatten)]
    pub report: PreprocessReport,
}

impl Provenance {
    pub fn spec(&self) -> Result<ProblemSpec> {
        ProblemSpec::new(self.matrix.clone(), Some(self.phases.clone()), self.label.clone())
    }
}

/// `Σ terms` in the coordinates `U·b`, with `U = provenance.unimodular`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResultExpr {
    pub m: usize,
    pub terms: Vec<Term>,
    pub provenance: Provenance,
}

impl ResultExpr {
    pub fn transform(&self) -> &[Vec<i64>] {
        &self.provenance.report.unimodular
    }

    pub fn is_identity_transform(&self) -> bool {
        self.transform() == identity(self.m).as_slice()
    }

    /// Checks shapes after deserialization.
    pub fn validate(&self) -> Result<()> {
        let u = self.transform();
        if u.len() != self.m || u.iter().any(|r| r.len() != self.m) {
            return Err(Error::DimensionMismatch { expected: self.m, got: u.len() });
        }
        if let Some(t) = self.terms.iter().find(|t| t.nparams() != self.m) {
            return Err(Error::DimensionMismatch { expected: self.m, got: t.nparams() });
        }
        Ok(())
    }
}

/// Computes `φ_A` in closed form, eliminating the last row first.
pub fn compute(spec: &ProblemSpec) -> Result<ResultExpr> {
    compute_with_order(spec, &(0..spec.m).collect::<Vec<_>>())
}

/// As [`compute`] with rows reordered first: `order[i]` is the original row
/// placed at position `i`, and positions are eliminated from the last down.
pub fn compute_with_order(spec: &ProblemSpec, order: &[usize]) -> Result<ResultExpr> {
    spec.validate()?;
    check_permutation(order, spec.m)?;
    let certificate = check_pointed(spec)?;

    let permuted = spec.permute_rows(order)?;
    let perm: Vec<Vec<i64>> = order.iter().map(|&i| (0..spec.m).map(|j| i64::from(i == j)).collect()).collect();
    let (u, normalized) = if permuted.is_nonnegative() {
        (identity(spec.m), permuted.entries.clone())
    } else {
        let y: Vec<_> = order.iter().map(|&i| certificate[i].clone()).collect();
        let r = nonnegativize(&permuted, &y)?;
        (r.unimodular, r.normalized)
    };
    let transform = mat_mul(&u, &perm);

    let work = ProblemSpec::new(normalized.clone(), Some(spec.phases.clone()), spec.label.clone())?;
    let terms = expand(&work)?;
    Ok(ResultExpr {
        m: spec.m,
        terms,
        provenance: Provenance {
            matrix: spec.entries.clone(),
            phases: spec.phases.clone(),
            label: spec.label.clone(),
            report: PreprocessReport { certificate, unimodular: transform, normalized },
        },
    })
}

/// Runs the elimination on a nonnegative matrix and merges the leaves.
fn expand(spec: &ProblemSpec) -> Result<Vec<Term>> {
    let mut stack = vec![GenFunState::initial(&spec.columns(), &spec.phases)?];
    let mut leaves = Vec::new();
    while let Some(state) = stack.pop() {
        if state.active() == 1 {
            leaves.extend(final_univariate(&state)?);
        } else {
            let mut children = eliminate_last_var(&state)?;
            children.reverse();
            stack.extend(children);
        }
    }
    merge_terms(leaves, spec.m)
}

/// Sums terms sharing guards and phase; the result is sorted by `(guards, phase)`.
pub fn merge_terms(terms: Vec<Term>, m: usize) -> Result<Vec<Term>> {
    let mut groups: BTreeMap<(Vec<Guard>, PhaseForm), ParamPoly> = BTreeMap::new();
    for t in terms {
        let (scalar, phase, poly, guards) = t.into_parts();
        let slot = groups.entry((guards, phase)).or_insert_with(|| ParamPoly::zero(m));
        *slot = slot.add(&poly.scale(&scalar)?)?;
    }
    let mut out = Vec::with_capacity(groups.len());
    for ((guards, phase), poly) in groups {
        out.extend(Term::new(Cyclotomic::one(), phase, poly, guards)?);
    }
    Ok(out)
}

/// The expression's exact value at `b`, before any integrality check.
pub fn evaluate_exact(expr: &ResultExpr, b: &[i64]) -> Result<Cyclotomic> {
    if b.len() != expr.m {
        return Err(Error::DimensionMismatch { expected: expr.m, got: b.len() });
    }
    let bb = mat_vec(expr.transform(), b);
    let mut sum = Cyclotomic::zero();
    for t in &expr.terms {
        sum = sum.add(&t.value(&bb)?)?;
    }
    Ok(sum)
}

/// `φ_A(b)`. Anything but a nonnegative integer is reported as an engine bug.
pub fn evaluate(expr: &ResultExpr, b: &[i64]) -> Result<BigUint> {
    let v = evaluate_exact(expr, b)?;
    let q = v
        .to_rational()
        .map_err(|_| Error::SanityFailure(format!("value {v} at {b:?} is not rational")))?;
    if !q.is_integer() || q.is_negative() {
        return Err(Error::SanityFailure(format!("value {q} at {b:?} is not a nonnegative integer")));
    }
    Ok(q.to_integer().to_biguint().expect("nonnegative"))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Mismatch {
    pub b: Vec<i64>,
    pub expected: BigUint,
    pub got: std::result::Result<BigUint, String>,
}

#[derive(Clone, Debug)]
pub struct VerifyReport {
    pub points: usize,
    pub mismatches: Vec<Mismatch>,
    pub elapsed: Duration,
}

impl VerifyReport {
    pub fn ok(&self) -> bool {
        self.mismatches.is_empty()
    }
}

/// All integer points of the box `lo..=hi`, last coordinate fastest.
pub fn box_points(lo: &[i64], hi: &[i64]) -> Result<Vec<Vec<i64>>> {
    if lo.len() != hi.len() {
        return Err(Error::DimensionMismatch { expected: lo.len(), got: hi.len() });
    }
    if lo.iter().zip(hi).any(|(l, h)| l > h) {
        return Err(Error::InvalidInput(format!("empty box {lo:?}..{hi:?}")));
    }
    let mut points = vec![Vec::with_capacity(lo.len())];
    for (&l, &h) in lo.iter().zip(hi) {
        points = points
            .into_iter()
            .flat_map(|p| {
                (l..=h).map(move |x| {
                    let mut q = p.clone();
                    q.push(x);
                    q
                })
            })
            .collect();
    }
    Ok(points)
}

/// Compares `evaluate` with the brute-force count at every point of the box.
/// Evaluation failures are recorded as mismatches; oracle failures abort.
pub fn verify_box(spec: &ProblemSpec, expr: &ResultExpr, lo: &[i64], hi: &[i64]) -> Result<VerifyReport> {
    if lo.len() != spec.m {
        return Err(Error::DimensionMismatch { expected: spec.m, got: lo.len() });
    }
    let start = Instant::now();
    let points = box_points(lo, hi)?;
    let workers = std::thread::available_parallelism().map_or(1, |n| n.get()).min(points.len().max(1));
    let chunk = points.len().div_ceil(workers).max(1);
    let results: Vec<Result<Vec<Mismatch>>> = std::thread::scope(|s| {
        let handles: Vec<_> = points
            .chunks(chunk)
            .map(|part| {
                s.spawn(move || {
                    let mut bad = Vec::new();
                    for b in part {
                        let expected = count_points(spec, b)?;
                        let got = evaluate(expr, b).map_err(|e| e.to_string());
                        if got.as_ref() != Ok(&expected) {
                            bad.push(Mismatch { b: b.clone(), expected, got });
                        }
                    }
                    Ok(bad)
                })
            })
            .collect();
        handles.into_iter().map(|h| h.join().expect("verification worker panicked")).collect()
    });
    let mut mismatches = Vec::new();
    for r in results {
        mismatches.extend(r?);
    }
    Ok(VerifyReport { points: points.len(), mismatches, elapsed: start.elapsed() })
}

/// Reads `"lo..hi"` per coordinate, or a single value for a one-point range.
pub fn parse_range(s: &str) -> Option<(i64, i64)> {
    match s.split_once("..") {
        Some((l, h)) => Some((l.trim().parse().ok()?, h.trim().parse().ok()?)),
        None => {
            let v = s.trim().parse().ok()?;
            Some((v, v))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn a2() -> ProblemSpec {
        ProblemSpec::from_rows(&[&[1, 0, 1], &[0, 1, 1]]).unwrap()
    }

    #[test]
    fn one_one() {
        let s = ProblemSpec::from_rows(&[&[1, 1]]).unwrap();
        let e = compute(&s).unwrap();
        assert_eq!(e.terms.len(), 1);
        assert_eq!(e.terms[0].poly().to_string(), "b+1");
        for b in -3..20i64 {
            assert_eq!(evaluate(&e, &[b]).unwrap(), BigUint::from(if b < 0 { 0u64 } else { b as u64 + 1 }));
        }
    }

    #[test]
    fn kostant_a2_values() {
        let e = compute(&a2()).unwrap();
        assert_eq!(evaluate(&e, &[2, 5]).unwrap(), BigUint::from(3u32));
        assert_eq!(evaluate(&e, &[5, 2]).unwrap(), BigUint::from(3u32));
        assert_eq!(evaluate(&e, &[0, 0]).unwrap(), BigUint::from(1u32));
        assert_eq!(evaluate(&e, &[-1, 4]).unwrap(), BigUint::from(0u32));
    }

    #[test]
    fn three_one_outside_cone() {
        let s = ProblemSpec::from_rows(&[&[1, 1], &[3, 1]]).unwrap();
        let e = compute(&s).unwrap();
        assert_eq!(evaluate(&e, &[1, 5]).unwrap(), BigUint::from(0u32));
        let r = verify_box(&s, &e, &[-2, -2], &[8, 8]).unwrap();
        assert!(r.ok(), "{:?}", r.mismatches);
    }

    #[test]
    fn negative_entries_are_preprocessed() {
        let s = ProblemSpec::from_rows(&[&[1, 2], &[-1, 0]]).unwrap();
        let e = compute(&s).unwrap();
        assert!(!e.is_identity_transform());
        let r = verify_box(&s, &e, &[-2, -4], &[6, 3]).unwrap();
        assert!(r.ok(), "{:?}", r.mismatches);
    }

    #[test]
    fn row_order() {
        let s = a2();
        let e = compute_with_order(&s, &[1, 0]).unwrap();
        assert!(verify_box(&s, &e, &[-2, -2], &[6, 6]).unwrap().ok());
        assert!(compute_with_order(&s, &[0, 0]).is_err());
    }

    #[test]
    fn ranges() {
        assert_eq!(parse_range("-3..15"), Some((-3, 15)));
        assert_eq!(parse_range("4"), Some((4, 4)));
        assert_eq!(parse_range("a..b"), None);
        assert_eq!(box_points(&[0, 0], &[1, 2]).unwrap().len(), 6);
    }

    #[test]
    fn json_roundtrip() {
        let e = compute(&a2()).unwrap();
        let js = serde_json::to_string(&e).unwrap();
        assert!(js.contains("\"unimodular\""));
        assert!(js.contains("\"certificate\""));
        let back: ResultExpr = serde_json::from_str(&js).unwrap();
        assert_eq!(back, e);
    }
}
