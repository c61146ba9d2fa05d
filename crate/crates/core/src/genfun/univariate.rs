//! The last variable: constant terms of `w^{-β} / ∏ (1 - e(q) w^n)` with
//! repeated poles allowed.
//!
//! Every factor is split into linear factors `1 - e(θ) w`, which are grouped
//! by `θ mod 1`. For a group `(1 - αw)^μ` the partial fraction numerator is
//! the inverse of `w^β · (other groups)` modulo `(1 - αw)^μ`. It is computed
//! in the local coordinate `t = w - α^{-1}`, truncated at `t^μ`, where
//! `w^{-β} = α^β (1 + αt)^{-β}` expands with binomial coefficients that are
//! polynomials in `β`. Only the value at `w = 0` enters the constant term.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::state::{normalize_last, GenFunState};
use crate::arith::rat::{frac_mod1, rat_int, Rat};
use crate::arith::Cyclotomic;
use crate::error::{Error, Result};
use crate::param::{binom_poly, AffineForm, Guard, ParamPoly, PhaseForm, Term};

/// `(1 - e(theta) w)^mult`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearGroup {
    pub theta: Rat,
    pub mult: usize,
}

/// The phases `θ_l = (q - l)/n mod 1`, `l = 0..n`, with
/// `1 - e(q) w^n = ∏_l (1 - e(θ_l) w)`.
pub fn linear_phases(q: &Rat, n: u64) -> Vec<Rat> {
    let n_rat = Rat::from_integer(BigInt::from(n));
    (0..n).map(|l| frac_mod1(&((q - Rat::from_integer(BigInt::from(l))) / &n_rat))).collect()
}

/// Groups the linear factors of `∏ (1 - e(q) w^n)` by phase.
pub fn group_linear_factors(factors: &[(Rat, u64)]) -> Vec<LinearGroup> {
    let mut groups: BTreeMap<Rat, usize> = BTreeMap::new();
    for (q, n) in factors {
        for theta in linear_phases(q, *n) {
            *groups.entry(theta).or_default() += 1;
        }
    }
    groups.into_iter().map(|(theta, mult)| LinearGroup { theta, mult }).collect()
}

/// Numerator of one group in the decomposition of `1/(∏ groups · w^β)`,
/// formal in the parameters:
///
/// `A(b; w) = e(theta · β(b)) · Σ_i coeffs[i](b) · w^i`, `deg < mult`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupNumerator {
    pub theta: Rat,
    pub beta: AffineForm,
    pub coeffs: Vec<ParamPoly>,
}

impl GroupNumerator {
    /// `A(b; 0)` without its phase factor `e(theta · β(b))`.
    pub fn constant_coeff(&self) -> &ParamPoly {
        &self.coeffs[0]
    }

    /// Coefficients of `A(b; w)` at a concrete parameter vector, phase included.
    pub fn eval(&self, b: &[i64]) -> Result<Vec<Cyclotomic>> {
        let beta = self.beta.eval(b)?;
        let phase = Cyclotomic::from_phase(&(&self.theta * rat_int(beta)))?;
        self.coeffs.iter().map(|c| phase.mul(&c.eval(b)?)).collect()
    }
}

/// Truncated power series product modulo `t^len`.
fn series_mul(a: &[Cyclotomic], b: &[Cyclotomic], len: usize) -> Result<Vec<Cyclotomic>> {
    let mut out = vec![Cyclotomic::zero(); len];
    for (i, x) in a.iter().enumerate().take(len) {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate().take(len - i) {
            if !y.is_zero() {
                out[i + j] = out[i + j].add(&x.mul(y)?)?;
            }
        }
    }
    Ok(out)
}

/// Partial fraction numerator of `target` against `others` and `w^β`.
pub fn pfd_numerator(
    target: &LinearGroup,
    others: &[LinearGroup],
    beta: &AffineForm,
) -> Result<GroupNumerator> {
    let mu = target.mult;
    if mu == 0 {
        return Err(Error::InvalidInput("group multiplicity must be positive".into()));
    }
    let theta = frac_mod1(&target.theta);
    let alpha = Cyclotomic::from_phase(&theta)?;
    let alpha_inv = Cyclotomic::from_phase(&-theta.clone())?;

    // g(t) = ∏ (1 - α'(α^{-1} + t))^{-μ'} mod t^μ
    let mut g = vec![Cyclotomic::zero(); mu];
    g[0] = Cyclotomic::one();
    for other in others {
        if frac_mod1(&other.theta) == theta {
            return Err(Error::NotCoprime { phase: theta.to_string() });
        }
        let a = Cyclotomic::from_phase(&other.theta)?;
        let u = Cyclotomic::one().sub(&a.mul(&alpha_inv)?)?;
        let u_inv = u.inv()?;
        let ratio = a.mul(&u_inv)?;
        // (u - a t)^{-1} = u^{-1} Σ (a/u)^j t^j
        let mut inv = Vec::with_capacity(mu);
        let mut p = u_inv;
        for _ in 0..mu {
            inv.push(p.clone());
            p = p.mul(&ratio)?;
        }
        for _ in 0..other.mult {
            g = series_mul(&g, &inv, mu)?;
        }
    }

    // (1 + αt)^{-β} = Σ_j binom(j + β - 1, j) (-α)^j t^j
    let m = beta.nparams();
    let minus_alpha = -&alpha;
    let mut power = Cyclotomic::one();
    let mut h = Vec::with_capacity(mu);
    for j in 0..mu {
        h.push(binom_poly(j, beta).scale(&power)?);
        power = power.mul(&minus_alpha)?;
    }

    // local coefficients c_i of the numerator in t
    let mut local = vec![ParamPoly::zero(m); mu];
    for (i, slot) in local.iter_mut().enumerate() {
        for j in 0..=i {
            if !g[i - j].is_zero() {
                *slot = slot.add(&h[j].scale(&g[i - j])?)?;
            }
        }
    }

    // back to w: t^i = (w - α^{-1})^i, coefficient of w^k is C(i,k) (-α^{-1})^{i-k}
    let minus_alpha_inv = -&alpha_inv;
    let mut coeffs = vec![ParamPoly::zero(m); mu];
    for (i, c) in local.iter().enumerate() {
        let mut binom = BigInt::one();
        for (k, slot) in coeffs.iter_mut().enumerate().take(i + 1) {
            // C(i, k) · (-α^{-1})^{i-k}
            let factor = minus_alpha_inv.pow((i - k) as i64)?.scale(&Rat::from_integer(binom.clone()));
            *slot = slot.add(&c.scale(&factor)?)?;
            binom = binom * BigInt::from(i - k) / BigInt::from(k + 1);
        }
    }
    Ok(GroupNumerator { theta, beta: beta.clone(), coeffs })
}

/// Closed terms for a slice over a single variable.
pub fn final_univariate(state: &GenFunState) -> Result<Vec<Term>> {
    state.validate()?;
    if state.active() != 1 {
        return Err(Error::DimensionMismatch { expected: 1, got: state.active() });
    }
    let mut state = normalize_last(state.clone())?;
    let m = state.nparams();
    let beta = state.exps[0].clone();

    let mut acc = state.acc.clone();
    let mut factors = Vec::new();
    for f in std::mem::take(&mut state.factors) {
        let n = f.last();
        if n == 0 {
            if f.phase.is_zero() {
                return Err(Error::DivisionByZero("factor 1 - z^0 in univariate slice"));
            }
            let denom = Cyclotomic::one().sub(&Cyclotomic::from_phase(&f.phase)?)?;
            acc = acc.scaled(&denom.inv()?)?;
        } else {
            factors.push((f.phase, n as u64));
        }
    }

    if factors.is_empty() {
        let t = acc.times(&Cyclotomic::one(), &PhaseForm::zero(m), &ParamPoly::one(m), [Guard::eq_zero(beta)])?;
        return Ok(t.into_iter().collect());
    }

    let groups = group_linear_factors(&factors);
    let mut terms = Vec::with_capacity(groups.len());
    for (idx, target) in groups.iter().enumerate() {
        let others: Vec<LinearGroup> = groups
            .iter()
            .enumerate()
            .filter(|(j, _)| *j != idx)
            .map(|(_, g)| g.clone())
            .collect();
        let num = pfd_numerator(target, &others, &beta)?;
        let (phase, const_phase) = PhaseForm::from_affine(&num.theta, &beta);
        let scalar = Cyclotomic::from_phase(&const_phase)?;
        let term = acc.times(&scalar, &phase, num.constant_coeff(), [Guard::ge_zero(beta.clone())])?;
        terms.extend(term);
    }
    Ok(terms)
}
