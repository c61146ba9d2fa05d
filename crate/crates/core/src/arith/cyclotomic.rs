//! Exact arithmetic in cyclotomic fields `Q(ζ_N)`.
//!
//! An element is stored at an explicit level `N` as its coefficient vector in
//! the power basis `1, ζ_N, …, ζ_N^{φ(N)-1}`, i.e. as a polynomial reduced
//! modulo the cyclotomic polynomial `Φ_N`. Binary operations move both
//! operands to the lcm of their levels. Levels are bounded by a process-wide
//! cap; exceeding it is an error, never a silent fallback.

use std::collections::HashMap;
use std::fmt;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::{Arc, OnceLock, RwLock};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::zpoly;
use super::rat::{frac_mod1, parse_rat, Rat};
use crate::error::{Error, Result};

pub const DEFAULT_MAX_LEVEL: u64 = 1_000_000;

static MAX_LEVEL: AtomicU64 = AtomicU64::new(DEFAULT_MAX_LEVEL);

pub fn max_level() -> u64 {
    MAX_LEVEL.load(Ordering::Relaxed)
}

/// Sets the process-wide level cap.
pub fn set_max_level(cap: u64) {
    MAX_LEVEL.store(cap.max(1), Ordering::Relaxed);
}

fn check_level(level: u64) -> Result<()> {
    let cap = max_level();
    if level == 0 || level > cap {
        return Err(Error::LevelOverflow { level, cap });
    }
    Ok(())
}

type PhiCache = RwLock<HashMap<u64, Arc<Vec<i64>>>>;

fn phi_cache() -> &'static PhiCache {
    static CACHE: OnceLock<PhiCache> = OnceLock::new();
    CACHE.get_or_init(|| RwLock::new(HashMap::new()))
}

/// The `N`-th cyclotomic polynomial `Φ_N`, ascending integer coefficients.
pub fn cyclotomic_polynomial(n: u64) -> Result<Arc<Vec<i64>>> {
    check_level(n)?;
    Ok(phi_unchecked(n))
}

fn phi_unchecked(n: u64) -> Arc<Vec<i64>> {
    if let Some(p) = phi_cache().read().expect("phi cache poisoned").get(&n) {
        return Arc::clone(p);
    }
    let len = usize::try_from(n).expect("level fits in usize");
    // x^n - 1, then divide out Φ_d for every proper divisor d
    let mut p = vec![0i128; len + 1];
    p[0] = -1;
    p[len] = 1;
    for d in (1..n).filter(|d| n.is_multiple_of(*d)) {
        let phi_d = phi_unchecked(d);
        p = exact_div_monic(&p, &phi_d);
    }
    let phi: Vec<i64> = p
        .into_iter()
        .map(|c| i64::try_from(c).expect("cyclotomic coefficient exceeds i64"))
        .collect();
    let phi = Arc::new(phi);
    phi_cache()
        .write()
        .expect("phi cache poisoned")
        .entry(n)
        .or_insert_with(|| Arc::clone(&phi));
    phi
}

fn exact_div_monic(a: &[i128], b: &[i64]) -> Vec<i128> {
    let db = b.len() - 1;
    let mut rem = a.to_vec();
    let mut quot = vec![0i128; a.len() - db];
    for k in (db..a.len()).rev() {
        let c = rem[k];
        if c == 0 {
            continue;
        }
        quot[k - db] = c;
        for (i, &bc) in b.iter().enumerate() {
            rem[k - db + i] -= c * i128::from(bc);
        }
    }
    debug_assert!(rem.iter().all(|&c| c == 0), "inexact cyclotomic division");
    quot
}

/// Euler's totient, the dimension of `Q(ζ_N)` over `Q`.
pub fn euler_phi(n: u64) -> u64 {
    let mut n = n;
    let mut out = n;
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            while n.is_multiple_of(p) {
                n /= p;
            }
            out -= out / p;
        }
        p += 1;
    }
    if n > 1 {
        out -= out / n;
    }
    out
}

/// Reduces a raw polynomial in `ζ_level` modulo `Φ_level` and pads it to
/// exactly `φ(level)` coefficients.
fn reduce(level: u64, raw: Vec<Rat>) -> Vec<Rat> {
    let (nums, d) = zpoly::to_integer(&raw);
    zpoly::from_integer(zpoly::reduce(nums, &phi_unchecked(level)), &d)
}

#[derive(Clone, Debug)]
pub struct Cyclotomic {
    level: u64,
    coeffs: Vec<Rat>,
}

impl Cyclotomic {
    /// Builds an element from canonical coefficients; the length must be `φ(level)`.
    pub fn new(level: u64, coeffs: Vec<Rat>) -> Result<Self> {
        check_level(level)?;
        let dim = euler_phi(level) as usize;
        if coeffs.len() != dim {
            return Err(Error::DimensionMismatch { expected: dim, got: coeffs.len() });
        }
        Ok(Cyclotomic { level, coeffs })
    }

    pub fn zero() -> Self {
        Self::from_rat(Rat::zero())
    }

    pub fn one() -> Self {
        Self::from_rat(Rat::one())
    }

    pub fn from_rat(q: Rat) -> Self {
        Cyclotomic { level: 1, coeffs: vec![q] }
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_rat(Rat::from_integer(BigInt::from(n)))
    }

    /// `e(q) = exp(2πiq)`, at level equal to the denominator of `q mod 1`.
    pub fn from_phase(q: &Rat) -> Result<Self> {
        let q = frac_mod1(q);
        let level = q
            .denom()
            .to_u64()
            .ok_or(Error::LevelOverflow { level: u64::MAX, cap: max_level() })?;
        check_level(level)?;
        let k = q.numer().to_usize().expect("numerator below denominator");
        Ok(Self::root_unchecked(level, k))
    }

    /// `ζ_level^k`.
    pub fn root(level: u64, k: i64) -> Result<Self> {
        check_level(level)?;
        let k = k.rem_euclid(level as i64) as usize;
        Ok(Self::root_unchecked(level, k))
    }

    fn root_unchecked(level: u64, k: usize) -> Self {
        let mut raw = vec![Rat::zero(); k + 1];
        raw[k] = Rat::one();
        Cyclotomic { level, coeffs: reduce(level, raw) }
    }

    pub fn level(&self) -> u64 {
        self.level
    }

    pub fn coeffs(&self) -> &[Rat] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn is_rational(&self) -> bool {
        self.coeffs[1..].iter().all(Zero::is_zero)
    }

    pub fn is_one(&self) -> bool {
        self.is_rational() && self.coeffs[0].is_one()
    }

    /// The rational value, if every non-constant coefficient vanishes.
    pub fn to_rational(&self) -> Result<Rat> {
        if self.is_rational() {
            Ok(self.coeffs[0].clone())
        } else {
            Err(Error::NotRational { level: self.level })
        }
    }

    /// Same element represented at level `m`, which must be a multiple of the current level.
    pub fn raise_level(&self, m: u64) -> Result<Self> {
        check_level(m)?;
        if !m.is_multiple_of(self.level) {
            return Err(Error::LevelMismatch { from: self.level, to: m });
        }
        Ok(self.raise_unchecked(m))
    }

    fn raise_unchecked(&self, m: u64) -> Self {
        if m == self.level {
            return self.clone();
        }
        if self.is_rational() {
            let mut coeffs = vec![Rat::zero(); euler_phi(m) as usize];
            coeffs[0] = self.coeffs[0].clone();
            return Cyclotomic { level: m, coeffs };
        }
        let step = (m / self.level) as usize;
        let mut raw = vec![Rat::zero(); (self.coeffs.len() - 1) * step + 1];
        for (k, c) in self.coeffs.iter().enumerate() {
            raw[k * step] = c.clone();
        }
        Cyclotomic { level: m, coeffs: reduce(m, raw) }
    }

    fn common_level(&self, other: &Self) -> Result<u64> {
        let l = self.level.lcm(&other.level);
        check_level(l)?;
        Ok(l)
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        let l = self.common_level(other)?;
        let (a, b) = (self.raise_unchecked(l), other.raise_unchecked(l));
        let coeffs = a.coeffs.into_iter().zip(b.coeffs).map(|(x, y)| x + y).collect();
        Ok(Cyclotomic { level: l, coeffs })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&-other)
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        let l = self.common_level(other)?;
        if self.is_rational() {
            return Ok(other.raise_unchecked(l).scale(&self.coeffs[0]));
        }
        if other.is_rational() {
            return Ok(self.raise_unchecked(l).scale(&other.coeffs[0]));
        }
        let (a, b) = (self.raise_unchecked(l), other.raise_unchecked(l));
        let (x, dx) = zpoly::to_integer(&a.coeffs);
        let (y, dy) = zpoly::to_integer(&b.coeffs);
        let prod = zpoly::reduce(zpoly::mul(&x, &y), &phi_unchecked(l));
        Ok(Cyclotomic { level: l, coeffs: zpoly::from_integer(prod, &(dx * dy)) })
    }

    pub fn scale(&self, q: &Rat) -> Self {
        Cyclotomic { level: self.level, coeffs: self.coeffs.iter().map(|c| c * q).collect() }
    }

    /// Multiplicative inverse: solves `x · y = 1` as a linear system in the
    /// coordinates of `y`, whose columns are `x · ζ^j mod Φ_N`.
    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero("inverse of zero cyclotomic"));
        }
        if self.is_rational() {
            let mut coeffs = vec![Rat::zero(); self.coeffs.len()];
            coeffs[0] = self.coeffs[0].recip();
            return Ok(Cyclotomic { level: self.level, coeffs });
        }
        let phi = phi_unchecked(self.level);
        let n = self.coeffs.len();
        let (x, d) = zpoly::to_integer(&self.coeffs);
        let mut cols = Vec::with_capacity(n);
        let mut col = x;
        for _ in 0..n {
            cols.push(col.clone());
            col.insert(0, BigInt::zero());
            col = zpoly::reduce(col, &phi);
        }
        let matrix = (0..n).map(|i| cols.iter().map(|c| c[i].clone()).collect()).collect();
        let mut rhs = vec![BigInt::zero(); n];
        rhs[0] = BigInt::one();
        let y = zpoly::solve(matrix, rhs).ok_or(Error::DivisionByZero("element not invertible modulo Φ_N"))?;
        let d = Rat::from_integer(d);
        Ok(Cyclotomic { level: self.level, coeffs: y.into_iter().map(|c| c * &d).collect() })
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        self.mul(&other.inv()?)
    }

    /// Integer power; negative exponents go through the inverse.
    pub fn pow(&self, exp: i64) -> Result<Self> {
        let mut base = if exp < 0 { self.inv()? } else { self.clone() };
        let mut e = exp.unsigned_abs();
        let mut acc = Cyclotomic::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base)?;
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base)?;
            }
        }
        Ok(acc)
    }

    /// Double-precision evaluation with `ζ_N ↦ exp(2πi/N)`. Diagnostics only.
    pub fn approx(&self) -> Complex64 {
        let n = self.level as f64;
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(k, c)| {
                let theta = std::f64::consts::TAU * k as f64 / n;
                Complex64::from_polar(c.to_f64().unwrap_or(f64::NAN), theta)
            })
            .sum()
    }
}

impl Default for Cyclotomic {
    fn default() -> Self {
        Cyclotomic::zero()
    }
}

impl PartialEq for Cyclotomic {
    fn eq(&self, other: &Self) -> bool {
        if self.level == other.level {
            return self.coeffs == other.coeffs;
        }
        let l = self.level.lcm(&other.level);
        self.raise_unchecked(l).coeffs == other.raise_unchecked(l).coeffs
    }
}

impl Eq for Cyclotomic {}

impl std::ops::Neg for Cyclotomic {
    type Output = Cyclotomic;
    fn neg(self) -> Cyclotomic {
        Cyclotomic { level: self.level, coeffs: self.coeffs.into_iter().map(|c| -c).collect() }
    }
}

impl std::ops::Neg for &Cyclotomic {
    type Output = Cyclotomic;
    fn neg(self) -> Cyclotomic {
        -self.clone()
    }
}

impl From<Rat> for Cyclotomic {
    fn from(q: Rat) -> Self {
        Cyclotomic::from_rat(q)
    }
}

/// Rational elements print as `p/q`; others as a sum of `c*E(N)^k` terms.
impl fmt::Display for Cyclotomic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_rational() {
            return write!(f, "{}", self.coeffs[0]);
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let negative = c < &Rat::zero();
            let mag = if negative { -c.clone() } else { c.clone() };
            match (first, negative) {
                (true, true) => f.write_str("-")?,
                (false, true) => f.write_str(" - ")?,
                (false, false) => f.write_str(" + ")?,
                (true, false) => {}
            }
            first = false;
            let root = match k {
                0 => String::new(),
                1 => format!("E({})", self.level),
                _ => format!("E({})^{}", self.level, k),
            };
            match (k, mag.is_one()) {
                (0, _) => write!(f, "{mag}")?,
                (_, true) => f.write_str(&root)?,
                (_, false) => write!(f, "{mag}*{root}")?,
            }
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
struct CyclotomicRepr {
    level: u64,
    #[serde(with = "super::rat::rat_vec")]
    coeffs: Vec<Rat>,
}

impl Serialize for Cyclotomic {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        CyclotomicRepr { level: self.level, coeffs: self.coeffs.clone() }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Cyclotomic {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let repr = CyclotomicRepr::deserialize(d)?;
        Cyclotomic::new(repr.level, repr.coeffs).map_err(serde::de::Error::custom)
    }
}

/// Parses `"p/q"`, `"e(p/q)"`, or `"p/q*e(r/s)"` into a cyclotomic number.
pub fn parse_cyclotomic(s: &str) -> Option<Cyclotomic> {
    let s = s.trim();
    let phase_part = |t: &str| -> Option<Cyclotomic> {
        let inner = t.trim().strip_prefix("e(")?.strip_suffix(')')?;
        Cyclotomic::from_phase(&parse_rat(inner)?).ok()
    };
    if let Some((c, e)) = s.split_once('*') {
        let c = parse_rat(c)?;
        return Some(phase_part(e)?.scale(&c));
    }
    if s.starts_with("e(") {
        return phase_part(s);
    }
    parse_rat(s).map(Cyclotomic::from_rat)
}
