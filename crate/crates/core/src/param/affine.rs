use std::fmt;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Integer affine function `coeffs · b + constant` of the parameter vector.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct AffineForm {
    pub coeffs: Vec<i64>,
    #[serde(rename = "const")]
    pub constant: i64,
}

impl AffineForm {
    pub fn new(coeffs: Vec<i64>, constant: i64) -> Self {
        AffineForm { coeffs, constant }
    }

    pub fn zero(nparams: usize) -> Self {
        AffineForm { coeffs: vec![0; nparams], constant: 0 }
    }

    /// The coordinate function `b ↦ b_j`.
    pub fn var(nparams: usize, j: usize) -> Self {
        let mut f = Self::zero(nparams);
        f.coeffs[j] = 1;
        f
    }

    pub fn nparams(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }

    pub fn eval(&self, b: &[i64]) -> Result<i64> {
        if b.len() != self.coeffs.len() {
            return Err(Error::DimensionMismatch { expected: self.coeffs.len(), got: b.len() });
        }
        Ok(self.coeffs.iter().zip(b).map(|(c, x)| c * x).sum::<i64>() + self.constant)
    }

    /// `a·self + c·other`.
    pub fn combine(&self, a: i64, other: &AffineForm, c: i64) -> AffineForm {
        debug_assert_eq!(self.nparams(), other.nparams());
        AffineForm {
            coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(x, y)| a * x + c * y).collect(),
            constant: a * self.constant + c * other.constant,
        }
    }

    pub fn shifted(&self, delta: i64) -> AffineForm {
        AffineForm { coeffs: self.coeffs.clone(), constant: self.constant + delta }
    }

    fn content(&self) -> i64 {
        self.coeffs.iter().fold(0i64, |g, &c| g.gcd(&c))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum GuardSense {
    #[serde(rename = "ge")]
    GeZero,
    #[serde(rename = "eq")]
    EqZero,
}

/// Indicator condition `form(b) >= 0` or `form(b) == 0`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Guard {
    #[serde(flatten)]
    pub form: AffineForm,
    pub sense: GuardSense,
}

/// Outcome of simplifying a guard.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GuardStatus {
    Always,
    Never,
    Conditional(Guard),
}

impl Guard {
    pub fn ge_zero(form: AffineForm) -> Self {
        Guard { form, sense: GuardSense::GeZero }
    }

    pub fn eq_zero(form: AffineForm) -> Self {
        Guard { form, sense: GuardSense::EqZero }
    }

    pub fn satisfied(&self, b: &[i64]) -> Result<bool> {
        let v = self.form.eval(b)?;
        Ok(match self.sense {
            GuardSense::GeZero => v >= 0,
            GuardSense::EqZero => v == 0,
        })
    }

    /// Divides out the content of the linear part. Exact on integer parameters:
    /// `g·x + c >= 0 ⇔ x + floor(c/g) >= 0`, and `g·x + c == 0` is either
    /// impossible or `x + c/g == 0`.
    pub fn simplify(&self) -> GuardStatus {
        let f = &self.form;
        if f.is_constant() {
            let ok = match self.sense {
                GuardSense::GeZero => f.constant >= 0,
                GuardSense::EqZero => f.constant == 0,
            };
            return if ok { GuardStatus::Always } else { GuardStatus::Never };
        }
        let g = f.content();
        let coeffs = f.coeffs.iter().map(|c| c / g).collect();
        let constant = match self.sense {
            GuardSense::GeZero => f.constant.div_euclid(g),
            GuardSense::EqZero => {
                if f.constant % g != 0 {
                    return GuardStatus::Never;
                }
                f.constant / g
            }
        };
        GuardStatus::Conditional(Guard { form: AffineForm { coeffs, constant }, sense: self.sense })
    }
}

/// Default parameter names: `b` for one parameter, `a, b` for two, `b1, b2, …` beyond.
pub fn param_names(nparams: usize) -> Vec<String> {
    match nparams {
        1 => vec!["b".into()],
        2 => vec!["a".into(), "b".into()],
        n => (1..=n).map(|i| format!("b{i}")).collect(),
    }
}

/// Renders an affine form like `a-b-1` with the given parameter names.
pub fn format_affine(f: &AffineForm, names: &[String]) -> String {
    let mut out = String::new();
    for (c, name) in f.coeffs.iter().zip(names) {
        if *c == 0 {
            continue;
        }
        if *c < 0 {
            out.push('-');
        } else if !out.is_empty() {
            out.push('+');
        }
        if c.abs() != 1 {
            out.push_str(&format!("{}*", c.abs()));
        }
        out.push_str(name);
    }
    if f.constant != 0 || out.is_empty() {
        if f.constant > 0 && !out.is_empty() {
            out.push('+');
        }
        out.push_str(&f.constant.to_string());
    }
    out
}

impl fmt::Display for Guard {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names = param_names(self.form.nparams());
        let op = match self.sense {
            GuardSense::GeZero => ">=",
            GuardSense::EqZero => "==",
        };
        write!(f, "{} {} 0", format_affine(&self.form, &names), op)
    }
}
