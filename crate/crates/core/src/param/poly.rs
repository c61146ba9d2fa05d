use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::affine::{param_names, AffineForm};
use crate::arith::rat::Rat;
use crate::arith::Cyclotomic;
use crate::error::{Error, Result};

/// Polynomial in the parameters with cyclotomic coefficients.
/// Keys are exponent vectors; zero coefficients are never stored.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParamPoly {
    nparams: usize,
    terms: BTreeMap<Vec<u32>, Cyclotomic>,
}

impl ParamPoly {
    pub fn zero(nparams: usize) -> Self {
        ParamPoly { nparams, terms: BTreeMap::new() }
    }

    pub fn constant(nparams: usize, c: Cyclotomic) -> Self {
        let mut p = Self::zero(nparams);
        p.insert(vec![0; nparams], c);
        p
    }

    pub fn one(nparams: usize) -> Self {
        Self::constant(nparams, Cyclotomic::one())
    }

    pub fn from_affine(f: &AffineForm) -> Self {
        let n = f.nparams();
        let mut p = Self::constant(n, Cyclotomic::from_int(f.constant));
        for (j, &c) in f.coeffs.iter().enumerate() {
            let mut e = vec![0; n];
            e[j] = 1;
            p.insert(e, Cyclotomic::from_int(c));
        }
        p
    }

    /// Builds from `(exponents, coefficient)` pairs, collecting like monomials.
    pub fn from_terms(
        nparams: usize,
        terms: impl IntoIterator<Item = (Vec<u32>, Cyclotomic)>,
    ) -> Result<Self> {
        let mut p = Self::zero(nparams);
        for (e, c) in terms {
            if e.len() != nparams {
                return Err(Error::DimensionMismatch { expected: nparams, got: e.len() });
            }
            p.accumulate(e, &c)?;
        }
        Ok(p)
    }

    fn insert(&mut self, e: Vec<u32>, c: Cyclotomic) {
        if !c.is_zero() {
            self.terms.insert(e, c);
        }
    }

    fn accumulate(&mut self, e: Vec<u32>, c: &Cyclotomic) -> Result<()> {
        let sum = match self.terms.remove(&e) {
            Some(old) => old.add(c)?,
            None => c.clone(),
        };
        self.insert(e, sum);
        Ok(())
    }

    pub fn nparams(&self) -> usize {
        self.nparams
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &Cyclotomic)> {
        self.terms.iter()
    }

    pub fn degree(&self) -> u32 {
        self.terms.keys().map(|e| e.iter().sum()).max().unwrap_or(0)
    }

    /// Leading monomial in graded lexicographic order.
    pub fn leading(&self) -> Option<(&Vec<u32>, &Cyclotomic)> {
        self.terms.iter().max_by(|(a, _), (b, _)| {
            let (da, db): (u32, u32) = (a.iter().sum(), b.iter().sum());
            da.cmp(&db).then_with(|| a.cmp(b))
        })
    }

    pub fn add(&self, other: &ParamPoly) -> Result<ParamPoly> {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.accumulate(e.clone(), c)?;
        }
        Ok(out)
    }

    pub fn mul(&self, other: &ParamPoly) -> Result<ParamPoly> {
        let mut out = ParamPoly::zero(self.nparams);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let e = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
                out.accumulate(e, &ca.mul(cb)?)?;
            }
        }
        Ok(out)
    }

    pub fn scale(&self, c: &Cyclotomic) -> Result<ParamPoly> {
        if c.is_zero() {
            return Ok(ParamPoly::zero(self.nparams));
        }
        let mut out = ParamPoly::zero(self.nparams);
        for (e, x) in &self.terms {
            out.insert(e.clone(), x.mul(c)?);
        }
        Ok(out)
    }

    pub fn scale_rat(&self, q: &Rat) -> ParamPoly {
        let mut out = ParamPoly::zero(self.nparams);
        for (e, x) in &self.terms {
            out.insert(e.clone(), x.scale(q));
        }
        out
    }

    pub fn eval(&self, b: &[i64]) -> Result<Cyclotomic> {
        if b.len() != self.nparams {
            return Err(Error::DimensionMismatch { expected: self.nparams, got: b.len() });
        }
        let mut acc = Cyclotomic::zero();
        for (e, c) in &self.terms {
            let mono: BigInt = e
                .iter()
                .zip(b)
                .map(|(&k, &x)| num_traits::pow(BigInt::from(x), k as usize))
                .product();
            if mono.is_zero() {
                continue;
            }
            acc = acc.add(&c.scale(&Rat::from_integer(mono)))?;
        }
        Ok(acc)
    }
}

/// `b ↦ binom(j + β(b) - 1, j) = β(β+1)⋯(β+j-1) / j!`, the coefficient of
/// `x^j` in `(1 - x)^{-β}`.
pub fn binom_poly(j: usize, beta: &AffineForm) -> ParamPoly {
    let n = beta.nparams();
    let mut p = ParamPoly::one(n);
    let mut fact = BigInt::one();
    for i in 0..j {
        let factor = ParamPoly::from_affine(&beta.shifted(i as i64));
        p = p.mul(&factor).expect("rational polynomial product");
        fact *= BigInt::from(i + 1);
    }
    p.scale_rat(&Rat::new(BigInt::one(), fact))
}

/// Renders with the given parameter names, e.g. `a^2-1/2*a*b+1`.
pub fn format_poly(p: &ParamPoly, names: &[String]) -> String {
    if p.is_zero() {
        return "0".into();
    }
    let mut order: Vec<_> = p.terms.iter().collect();
    order.sort_by(|(a, _), (b, _)| {
        let (da, db): (u32, u32) = (a.iter().sum(), b.iter().sum());
        db.cmp(&da).then_with(|| b.cmp(a))
    });
    let mut out = String::new();
    for (e, c) in order {
        let mono: Vec<String> = e
            .iter()
            .zip(names)
            .filter(|(&k, _)| k > 0)
            .map(|(&k, n)| if k == 1 { n.clone() } else { format!("{n}^{k}") })
            .collect();
        let mono = mono.join("*");
        let (negative, mag) = match c.to_rational() {
            Ok(q) if q < Rat::zero() => (true, Cyclotomic::from_rat(-q)),
            _ => (false, c.clone()),
        };
        if negative {
            out.push('-');
        } else if !out.is_empty() {
            out.push('+');
        }
        let coeff = if mag.is_rational() { mag.to_string() } else { format!("({mag})") };
        match (mono.is_empty(), mag.is_one()) {
            (true, _) => out.push_str(&coeff),
            (false, true) => out.push_str(&mono),
            (false, false) => out.push_str(&format!("{coeff}*{mono}")),
        }
    }
    out
}

impl fmt::Display for ParamPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_poly(self, &param_names(self.nparams)))
    }
}

#[derive(Serialize, Deserialize)]
struct MonomialRepr {
    exps: Vec<u32>,
    coeff: Cyclotomic,
}

impl Serialize for ParamPoly {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let list: Vec<MonomialRepr> = self
            .terms
            .iter()
            .map(|(e, c)| MonomialRepr { exps: e.clone(), coeff: c.clone() })
            .collect();
        list.serialize(s)
    }
}

impl<'de> Deserialize<'de> for ParamPoly {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let list = Vec::<MonomialRepr>::deserialize(d)?;
        let n = list.first().map_or(0, |m| m.exps.len());
        ParamPoly::from_terms(n, list.into_iter().map(|m| (m.exps, m.coeff)))
            .map_err(serde::de::Error::custom)
    }
}

impl ParamPoly {
    /// Reinterprets an empty polynomial as one over `nparams` parameters.
    pub(crate) fn with_nparams(mut self, nparams: usize) -> Result<Self> {
        if self.terms.is_empty() {
            self.nparams = nparams;
        } else if self.nparams != nparams {
            return Err(Error::DimensionMismatch { expected: nparams, got: self.nparams });
        }
        Ok(self)
    }
}

/// Integer binomial coefficient by direct factorial arithmetic.
#[cfg(test)]
pub(crate) fn binomial(n: i64, k: i64) -> BigInt {
    let fact = |x: i64| (1..=x).map(BigInt::from).product::<BigInt>();
    fact(n) / (fact(k) * fact(n - k))
}
