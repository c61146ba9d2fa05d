use std::fmt;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use super::affine::{param_names, AffineForm};
use crate::arith::rat::{frac_mod1, rat_int, Rat};
use crate::error::{Error, Result};

/// Linear phase `b ↦ e(coeffs · b)`. Coefficients live in `[0, 1)`, which is
/// lossless because parameters are only ever evaluated at integers.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "PhaseRepr", into = "PhaseRepr")]
pub struct PhaseForm {
    coeffs: Vec<Rat>,
}

impl PhaseForm {
    pub fn new(coeffs: Vec<Rat>) -> Self {
        PhaseForm { coeffs: coeffs.iter().map(frac_mod1).collect() }
    }

    pub fn zero(nparams: usize) -> Self {
        PhaseForm { coeffs: vec![Rat::zero(); nparams] }
    }

    pub fn coeffs(&self) -> &[Rat] {
        &self.coeffs
    }

    pub fn nparams(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    /// `theta · f(b)` split into a linear phase and the constant `theta · f(0)`.
    pub fn from_affine(theta: &Rat, f: &AffineForm) -> (PhaseForm, Rat) {
        let coeffs = f.coeffs.iter().map(|&c| theta * rat_int(c)).collect();
        (PhaseForm::new(coeffs), frac_mod1(&(theta * rat_int(f.constant))))
    }

    pub fn add(&self, other: &PhaseForm) -> PhaseForm {
        debug_assert_eq!(self.nparams(), other.nparams());
        PhaseForm::new(self.coeffs.iter().zip(&other.coeffs).map(|(x, y)| x + y).collect())
    }

    /// The phase `coeffs · b mod 1`.
    pub fn eval(&self, b: &[i64]) -> Result<Rat> {
        if b.len() != self.coeffs.len() {
            return Err(Error::DimensionMismatch { expected: self.coeffs.len(), got: b.len() });
        }
        let total: Rat = self.coeffs.iter().zip(b).map(|(c, &x)| c * rat_int(x)).sum();
        Ok(frac_mod1(&total))
    }
}

/// Renders the argument of `e(·)`, e.g. `1/4*b` or `1/3*a+2/3*b`.
pub fn format_phase_arg(p: &PhaseForm, names: &[String]) -> String {
    let parts: Vec<String> = p
        .coeffs
        .iter()
        .zip(names)
        .filter(|(c, _)| !c.is_zero())
        .map(|(c, n)| format!("{c}*{n}"))
        .collect();
    if parts.is_empty() {
        "0".into()
    } else {
        parts.join("+")
    }
}

impl fmt::Display for PhaseForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "e({})", format_phase_arg(self, &param_names(self.nparams())))
    }
}

#[derive(Serialize, Deserialize)]
struct PhaseRepr {
    #[serde(with = "crate::arith::rat::rat_vec")]
    coeffs: Vec<Rat>,
}

impl TryFrom<PhaseRepr> for PhaseForm {
    type Error = String;
    fn try_from(r: PhaseRepr) -> std::result::Result<Self, String> {
        if r.coeffs.iter().any(|c| c < &Rat::zero() || c >= &rat_int(1)) {
            return Err("phase coefficients must lie in [0, 1)".into());
        }
        Ok(PhaseForm { coeffs: r.coeffs })
    }
}

impl From<PhaseForm> for PhaseRepr {
    fn from(p: PhaseForm) -> Self {
        PhaseRepr { coeffs: p.coeffs }
    }
}
