use std::fmt;

use num_traits::Zero;

use crate::arith::rat::{frac_mod1, Rat};
use crate::arith::Cyclotomic;
use crate::error::{Error, Result};
use crate::param::{format_affine, param_names, AffineForm, Term};

/// Denominator factor `1 - e(phase) · z^exps` over the active variables.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Factor {
    pub phase: Rat,
    pub exps: Vec<i64>,
}

impl Factor {
    /// Reduces the phase mod 1 and rejects the zero denominator `1 - 1`.
    pub fn new(phase: Rat, exps: Vec<i64>) -> Result<Factor> {
        let phase = frac_mod1(&phase);
        if phase.is_zero() && exps.iter().all(|&e| e == 0) {
            return Err(Error::DivisionByZero("factor 1 - z^0 is identically zero"));
        }
        Ok(Factor { phase, exps })
    }

    pub fn last(&self) -> i64 {
        *self.exps.last().expect("factor over at least one variable")
    }

    pub fn is_scalar(&self) -> bool {
        self.exps.iter().all(|&e| e == 0)
    }
}

/// A slice of the generating function in the middle of the elimination:
///
/// `acc(b) · const_{z_1} ⋯ const_{z_k} [ z^{-exps(b)} ∏ 1/(1 - e(q) z^v) ]`
///
/// where `k = exps.len()` is the number of variables still to eliminate and
/// constant terms are taken in the iterated standard (Laurent) expansion.
/// Affine forms and the accumulator always refer to the original parameters.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GenFunState {
    pub exps: Vec<AffineForm>,
    pub factors: Vec<Factor>,
    pub acc: Term,
}

impl GenFunState {
    /// `z^{-b} ∏_k 1/(1 - e(q_k) z^{c_k})` for the columns `c_k` of a matrix.
    pub fn initial(columns: &[Vec<i64>], phases: &[Rat]) -> Result<GenFunState> {
        let m = columns.first().map_or(0, Vec::len);
        if phases.len() != columns.len() {
            return Err(Error::DimensionMismatch { expected: columns.len(), got: phases.len() });
        }
        let factors = columns
            .iter()
            .zip(phases)
            .map(|(c, q)| Factor::new(q.clone(), c.clone()))
            .collect::<Result<Vec<_>>>()?;
        let state = GenFunState {
            exps: (0..m).map(|j| AffineForm::var(m, j)).collect(),
            factors,
            acc: Term::unit(m),
        };
        state.validate()?;
        Ok(state)
    }

    pub fn active(&self) -> usize {
        self.exps.len()
    }

    pub fn nparams(&self) -> usize {
        self.acc.nparams()
    }

    pub fn validate(&self) -> Result<()> {
        let (k, m) = (self.active(), self.nparams());
        if let Some(f) = self.exps.iter().find(|f| f.nparams() != m) {
            return Err(Error::DimensionMismatch { expected: m, got: f.nparams() });
        }
        if let Some(f) = self.factors.iter().find(|f| f.exps.len() != k) {
            return Err(Error::DimensionMismatch { expected: k, got: f.exps.len() });
        }
        Ok(())
    }
}

/// Rewrites factor `k` with `1/(1 - e(q) z^v) = -e(-q) z^{-v} / (1 - e(-q) z^{-v})`.
pub fn flip(state: &GenFunState, k: usize) -> Result<GenFunState> {
    let f = state.factors.get(k).ok_or(Error::DimensionMismatch {
        expected: state.factors.len(),
        got: k,
    })?;
    let minus_q = -f.phase.clone();
    let sign = -Cyclotomic::from_phase(&minus_q)?;
    let mut out = state.clone();
    out.acc = state.acc.scaled(&sign)?;
    for (beta, &v) in out.exps.iter_mut().zip(&f.exps) {
        *beta = beta.shifted(v);
    }
    out.factors[k] = Factor { phase: frac_mod1(&minus_q), exps: f.exps.iter().map(|e| -e).collect() };
    Ok(out)
}

/// Flips every factor whose exponent in the last active variable is negative.
pub(crate) fn normalize_last(state: GenFunState) -> Result<GenFunState> {
    let mut state = state;
    for k in 0..state.factors.len() {
        if state.factors[k].exps.last().is_some_and(|&e| e < 0) {
            state = flip(&state, k)?;
        }
    }
    Ok(state)
}

/// Substitutes `z_j ↦ z_j^n`, which leaves the constant term unchanged.
pub fn substitute_power(state: &GenFunState, j: usize, n: u32) -> Result<GenFunState> {
    if j >= state.active() {
        return Err(Error::DimensionMismatch { expected: state.active(), got: j });
    }
    if n == 0 {
        return Err(Error::InvalidInput("substitution power must be positive".into()));
    }
    let n = i64::from(n);
    let mut out = state.clone();
    out.exps[j] = AffineForm::zero(state.nparams()).combine(0, &state.exps[j], n);
    for f in &mut out.factors {
        f.exps[j] *= n;
    }
    Ok(out)
}

/// Debug dump: one line per factor, then the exponent line.
impl fmt::Display for GenFunState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names = param_names(self.nparams());
        writeln!(f, "acc: {} * {} * ({})", self.acc.scalar(), self.acc.phase(), self.acc.poly())?;
        for g in self.acc.guards() {
            writeln!(f, "guard: {g}")?;
        }
        for factor in &self.factors {
            let v: Vec<String> = factor.exps.iter().map(i64::to_string).collect();
            writeln!(f, "1 - e({}) z^({})", factor.phase, v.join(","))?;
        }
        let e: Vec<String> = self.exps.iter().map(|a| format_affine(a, &names)).collect();
        write!(f, "exps: ({})", e.join(", "))
    }
}
