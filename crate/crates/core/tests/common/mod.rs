#![allow(dead_code)]

use std::collections::BTreeMap;

use num_traits::Zero;
use rand::rngs::StdRng;
use rand::Rng;
use vpf_core::arith::rat::{frac_mod1, rat, rat_int, Rat};
use vpf_core::arith::Cyclotomic;
use vpf_core::genfun::{Factor, GenFunState};
use vpf_core::param::{AffineForm, Term};

/// Exact constant term of a slice at a concrete parameter vector, by
/// enumerating the lattice points of its iterated Laurent expansion.
///
/// Every factor is first rewritten so that its monomial is small, meaning
/// its last nonzero exponent is positive. The expansion is then a sum over
/// `x ∈ N^d` of `∏ e(q_k)^{x_k} z^{Σ x_k v_k - β}`, and the constant term
/// collects the `x` with `Σ x_k v_k = β`.
pub fn series_constant_term(state: &GenFunState, b: &[i64]) -> Cyclotomic {
    let acc = state.acc.value(b).unwrap();
    if acc.is_zero() {
        return acc;
    }
    let k = state.exps.len();
    let mut beta: Vec<i64> = state.exps.iter().map(|f| f.eval(b).unwrap()).collect();
    let mut scalar = acc;
    let mut vectors: Vec<(Rat, Vec<i64>)> = Vec::new();
    for f in &state.factors {
        let lead = f.exps.iter().rposition(|&e| e != 0);
        match lead {
            None => {
                let d = Cyclotomic::one().sub(&Cyclotomic::from_phase(&f.phase).unwrap()).unwrap();
                scalar = scalar.mul(&d.inv().unwrap()).unwrap();
            }
            Some(j) if f.exps[j] < 0 => {
                // 1/(1-u) = -u^{-1}/(1-u^{-1})
                let minus_q = -f.phase.clone();
                scalar = scalar.mul(&-Cyclotomic::from_phase(&minus_q).unwrap()).unwrap();
                for (bt, v) in beta.iter_mut().zip(&f.exps) {
                    *bt += v;
                }
                vectors.push((frac_mod1(&minus_q), f.exps.iter().map(|e| -e).collect()));
            }
            Some(_) => vectors.push((f.phase.clone(), f.exps.clone())),
        }
    }
    let mut by_lead: Vec<Vec<(Rat, Vec<i64>)>> = vec![Vec::new(); k];
    for (q, v) in vectors {
        let j = v.iter().rposition(|&e| e != 0).unwrap();
        by_lead[j].push((q, v));
    }
    let mut tally: BTreeMap<Rat, u64> = BTreeMap::new();
    descend(&by_lead, k, &mut beta, Rat::zero(), &mut tally);
    let mut total = Cyclotomic::zero();
    for (phase, count) in tally {
        let c = Cyclotomic::from_phase(&phase).unwrap().scale(&rat_int(count as i64));
        total = total.add(&c).unwrap();
    }
    scalar.mul(&total).unwrap()
}

fn descend(groups: &[Vec<(Rat, Vec<i64>)>], j: usize, r: &mut Vec<i64>, phase: Rat, tally: &mut BTreeMap<Rat, u64>) {
    if j == 0 {
        if r.iter().all(|&x| x == 0) {
            *tally.entry(frac_mod1(&phase)).or_default() += 1;
        }
        return;
    }
    let c = j - 1;
    if r[c] < 0 {
        return;
    }
    compose(groups, c, 0, r, phase, tally);
}

/// Chooses multiplicities for the factors led by coordinate `c`, one at a time.
fn compose(
    groups: &[Vec<(Rat, Vec<i64>)>],
    c: usize,
    i: usize,
    r: &mut Vec<i64>,
    phase: Rat,
    tally: &mut BTreeMap<Rat, u64>,
) {
    let group = &groups[c];
    if i == group.len() {
        if r[c] == 0 {
            descend(groups, c, r, phase, tally);
        }
        return;
    }
    let (q, v) = &group[i];
    let mut x = 0i64;
    let mut ph = phase;
    while r[c] >= 0 {
        compose(groups, c, i + 1, r, ph.clone(), tally);
        for (a, e) in r.iter_mut().zip(v) {
            *a -= e;
        }
        x += 1;
        ph += q;
    }
    for (a, e) in r.iter_mut().zip(v) {
        *a += e * x;
    }
}

pub fn random_phase(rng: &mut StdRng) -> Rat {
    let den = [1i64, 2, 3, 4, 6][rng.gen_range(0..5)];
    rat(rng.gen_range(0..den), den)
}

/// A random slice over `k` variables with parameters `b` and affine exponents.
pub fn random_state(rng: &mut StdRng, k: usize, nfactors: usize, max_entry: i64) -> GenFunState {
    let m = k;
    let mut factors = Vec::new();
    while factors.len() < nfactors {
        let v: Vec<i64> = (0..k).map(|_| rng.gen_range(-max_entry..=max_entry)).collect();
        if let Ok(f) = Factor::new(random_phase(rng), v) {
            if !f.is_scalar() {
                factors.push(f);
            }
        }
    }
    let exps = (0..k)
        .map(|j| {
            let mut f = AffineForm::var(m, j);
            f.constant = rng.gen_range(-2..=2);
            f
        })
        .collect();
    GenFunState { exps, factors, acc: Term::unit(m) }
}

/// Dense univariate polynomial over cyclotomic numbers, low degree first.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UniPoly(pub Vec<Cyclotomic>);

impl UniPoly {
    pub fn constant(c: Cyclotomic) -> UniPoly {
        UniPoly(vec![c]).trim()
    }

    pub fn monomial(k: usize) -> UniPoly {
        let mut v = vec![Cyclotomic::zero(); k + 1];
        v[k] = Cyclotomic::one();
        UniPoly(v)
    }

    /// `1 - c·w`.
    pub fn linear(c: &Cyclotomic) -> UniPoly {
        UniPoly(vec![Cyclotomic::one(), -c]).trim()
    }

    pub fn trim(mut self) -> UniPoly {
        while self.0.last().is_some_and(Cyclotomic::is_zero) {
            self.0.pop();
        }
        self
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Cyclotomic::is_zero)
    }

    pub fn add(&self, o: &UniPoly) -> UniPoly {
        let n = self.0.len().max(o.0.len());
        let z = Cyclotomic::zero();
        UniPoly((0..n).map(|i| self.0.get(i).unwrap_or(&z).add(o.0.get(i).unwrap_or(&z)).unwrap()).collect()).trim()
    }

    pub fn sub(&self, o: &UniPoly) -> UniPoly {
        self.add(&UniPoly(o.0.iter().map(|c| -c).collect()))
    }

    pub fn mul(&self, o: &UniPoly) -> UniPoly {
        if self.0.is_empty() || o.0.is_empty() {
            return UniPoly(Vec::new());
        }
        let mut out = vec![Cyclotomic::zero(); self.0.len() + o.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            for (j, b) in o.0.iter().enumerate() {
                out[i + j] = out[i + j].add(&a.mul(b).unwrap()).unwrap();
            }
        }
        UniPoly(out).trim()
    }

    pub fn pow(&self, k: usize) -> UniPoly {
        (0..k).fold(UniPoly::constant(Cyclotomic::one()), |acc, _| acc.mul(self))
    }

    /// Remainder of division by a nonzero polynomial.
    pub fn rem(&self, d: &UniPoly) -> UniPoly {
        let d = d.clone().trim();
        let lead_inv = d.0.last().expect("nonzero divisor").inv().unwrap();
        let mut r = self.clone().trim();
        while r.0.len() >= d.0.len() && !r.0.is_empty() {
            let shift = r.0.len() - d.0.len();
            let f = r.0.last().unwrap().mul(&lead_inv).unwrap();
            for (i, c) in d.0.iter().enumerate() {
                r.0[shift + i] = r.0[shift + i].sub(&f.mul(c).unwrap()).unwrap();
            }
            r.0.pop();
            r = r.trim();
        }
        r
    }
}
