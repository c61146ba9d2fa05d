use serde::{Deserialize, Serialize};

use super::affine::{Guard, GuardStatus};
use super::phase::PhaseForm;
use super::poly::ParamPoly;
use crate::arith::Cyclotomic;
use crate::error::{Error, Result};

/// Closed summand `[guards(b)] · scalar · e(phase(b)) · poly(b)`.
///
/// Terms are kept normalized: the scalar is nonzero, the polynomial is monic
/// in graded-lex order (its leading coefficient is pulled into the scalar),
/// and guards are simplified, deduplicated and sorted.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "TermRepr", into = "TermRepr")]
pub struct Term {
    scalar: Cyclotomic,
    phase: PhaseForm,
    poly: ParamPoly,
    guards: Vec<Guard>,
}

impl Term {
    /// The constant term `1`, used as the accumulator of a fresh slice.
    pub fn unit(nparams: usize) -> Term {
        Term {
            scalar: Cyclotomic::one(),
            phase: PhaseForm::zero(nparams),
            poly: ParamPoly::one(nparams),
            guards: Vec::new(),
        }
    }

    /// Normalizing constructor; `None` when the term is identically zero.
    pub fn new(
        scalar: Cyclotomic,
        phase: PhaseForm,
        poly: ParamPoly,
        guards: Vec<Guard>,
    ) -> Result<Option<Term>> {
        let n = phase.nparams();
        if poly.nparams() != n {
            return Err(Error::DimensionMismatch { expected: n, got: poly.nparams() });
        }
        if let Some(g) = guards.iter().find(|g| g.form.nparams() != n) {
            return Err(Error::DimensionMismatch { expected: n, got: g.form.nparams() });
        }
        if scalar.is_zero() || poly.is_zero() {
            return Ok(None);
        }
        let mut kept = Vec::with_capacity(guards.len());
        for g in guards {
            match g.simplify() {
                GuardStatus::Always => {}
                GuardStatus::Never => return Ok(None),
                GuardStatus::Conditional(g) => kept.push(g),
            }
        }
        kept.sort();
        kept.dedup();
        let lead = poly.leading().map(|(_, c)| c.clone()).expect("nonzero polynomial");
        let (scalar, poly) = if lead.is_one() {
            (scalar, poly)
        } else {
            (scalar.mul(&lead)?, poly.scale(&lead.inv()?)?)
        };
        Ok(Some(Term { scalar, phase, poly, guards: kept }))
    }

    pub fn scalar(&self) -> &Cyclotomic {
        &self.scalar
    }

    pub fn phase(&self) -> &PhaseForm {
        &self.phase
    }

    pub fn poly(&self) -> &ParamPoly {
        &self.poly
    }

    pub fn guards(&self) -> &[Guard] {
        &self.guards
    }

    pub fn nparams(&self) -> usize {
        self.phase.nparams()
    }

    pub fn into_parts(self) -> (Cyclotomic, PhaseForm, ParamPoly, Vec<Guard>) {
        (self.scalar, self.phase, self.poly, self.guards)
    }

    /// `0` if a guard fails, otherwise `scalar · e(phase(b)) · poly(b)`.
    pub fn value(&self, b: &[i64]) -> Result<Cyclotomic> {
        if b.len() != self.nparams() {
            return Err(Error::DimensionMismatch { expected: self.nparams(), got: b.len() });
        }
        for g in &self.guards {
            if !g.satisfied(b)? {
                return Ok(Cyclotomic::zero());
            }
        }
        let p = self.poly.eval(b)?;
        if p.is_zero() {
            return Ok(p);
        }
        let phase = Cyclotomic::from_phase(&self.phase.eval(b)?)?;
        self.scalar.mul(&phase)?.mul(&p)
    }

    /// Multiplies by `c · e(phase) · poly` and conjoins `guards`; `None` if the result vanishes.
    pub fn times(
        &self,
        c: &Cyclotomic,
        phase: &PhaseForm,
        poly: &ParamPoly,
        guards: impl IntoIterator<Item = Guard>,
    ) -> Result<Option<Term>> {
        let mut all = self.guards.clone();
        all.extend(guards);
        Term::new(self.scalar.mul(c)?, self.phase.add(phase), self.poly.mul(poly)?, all)
    }

    pub fn scaled(&self, c: &Cyclotomic) -> Result<Term> {
        Ok(Term { scalar: self.scalar.mul(c)?, ..self.clone() })
    }
}

#[derive(Serialize, Deserialize)]
struct TermRepr {
    scalar: Cyclotomic,
    phase: PhaseForm,
    poly: ParamPoly,
    guards: Vec<Guard>,
}

impl TryFrom<TermRepr> for Term {
    type Error = String;
    fn try_from(r: TermRepr) -> std::result::Result<Self, String> {
        if r.scalar.is_zero() {
            return Err("term scalar must be nonzero".into());
        }
        let n = r.phase.nparams();
        let poly = r.poly.with_nparams(n).map_err(|e| e.to_string())?;
        if r.guards.iter().any(|g| g.form.nparams() != n) {
            return Err("guard dimension does not match phase".into());
        }
        Ok(Term { scalar: r.scalar, phase: r.phase, poly, guards: r.guards })
    }
}

impl From<Term> for TermRepr {
    fn from(t: Term) -> Self {
        TermRepr { scalar: t.scalar, phase: t.phase, poly: t.poly, guards: t.guards }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat::rat;
    use crate::param::affine::AffineForm;

    fn guarded(poly: ParamPoly, guards: Vec<Guard>) -> Term {
        let n = poly.nparams();
        Term::new(Cyclotomic::one(), PhaseForm::zero(n), poly, guards).unwrap().unwrap()
    }

    #[test]
    fn failing_guard_gives_zero() {
        let t = guarded(ParamPoly::one(1), vec![Guard::ge_zero(AffineForm::var(1, 0))]);
        assert!(t.value(&[-1]).unwrap().is_zero());
    }

    #[test]
    fn a_plus_one_leaf() {
        let t = guarded(
            ParamPoly::from_affine(&AffineForm::new(vec![1], 1)),
            vec![Guard::ge_zero(AffineForm::var(1, 0))],
        );
        assert_eq!(t.value(&[3]).unwrap(), Cyclotomic::from_int(4));
    }

    #[test]
    fn quarter_phase_term() {
        let t = Term::new(
            Cyclotomic::from_rat(rat(1, 8)),
            PhaseForm::new(vec![rat(1, 4)]),
            ParamPoly::one(1),
            vec![],
        )
        .unwrap()
        .unwrap();
        assert_eq!(t.value(&[2]).unwrap(), Cyclotomic::from_rat(rat(-1, 8)));
    }

    #[test]
    fn normalization_pulls_out_leading_coefficient() {
        let p = ParamPoly::from_affine(&AffineForm::new(vec![-2, 2], 4));
        let t = guarded(p, vec![]);
        assert_eq!(t.scalar(), &Cyclotomic::from_int(-2));
        assert_eq!(t.poly().to_string(), "a-b-2");
        assert!(Term::new(Cyclotomic::zero(), PhaseForm::zero(1), ParamPoly::one(1), vec![])
            .unwrap()
            .is_none());
        let never = Guard::ge_zero(AffineForm::new(vec![0], -1));
        assert!(Term::new(Cyclotomic::one(), PhaseForm::zero(1), ParamPoly::one(1), vec![never])
            .unwrap()
            .is_none());
    }

    #[test]
    fn linear_in_scalar_and_true_guards_are_neutral() {
        let t = Term::new(
            Cyclotomic::from_phase(&rat(1, 3)).unwrap(),
            PhaseForm::new(vec![rat(1, 6), rat(1, 2)]),
            ParamPoly::from_affine(&AffineForm::new(vec![1, 2], -1)),
            vec![Guard::ge_zero(AffineForm::new(vec![1, -1], 0))],
        )
        .unwrap()
        .unwrap();
        let c = Cyclotomic::from_phase(&rat(1, 5)).unwrap().scale(&rat(3, 2));
        let scaled = t.scaled(&c).unwrap();
        let with_true = t
            .times(&Cyclotomic::one(), &PhaseForm::zero(2), &ParamPoly::one(2), [Guard::ge_zero(
                AffineForm::new(vec![0, 0], 3),
            )])
            .unwrap()
            .unwrap();
        for a in -3..4 {
            for b in -3..4 {
                let v = t.value(&[a, b]).unwrap();
                assert_eq!(scaled.value(&[a, b]).unwrap(), v.mul(&c).unwrap());
                assert_eq!(with_true.value(&[a, b]).unwrap(), v);
            }
        }
    }

    #[test]
    fn json_roundtrip() {
        let t = Term::new(
            Cyclotomic::from_rat(rat(1, 8)),
            PhaseForm::new(vec![rat(3, 4)]),
            ParamPoly::from_affine(&AffineForm::new(vec![1], 1)),
            vec![Guard::ge_zero(AffineForm::var(1, 0))],
        )
        .unwrap()
        .unwrap();
        let js = serde_json::to_string(&t).unwrap();
        let back: Term = serde_json::from_str(&js).unwrap();
        assert_eq!(back, t);
    }
}
