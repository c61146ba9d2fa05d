//! One elimination step: the constant term in the last active variable `w`,
//! for slices whose poles in `w` are all simple.
//!
//! After flipping, write `β_w` for the exponent of `w` and `n_k > 0` for the
//! `w`-exponent of factor `k`. Each factor splits into the linear factors
//! `1 - e((q_k - l)/n_k) z'^{v'/n_k} w`, `l = 0..n_k`. The partial fraction
//! numerator at such a pole is the reciprocal of everything else evaluated at
//! the pole, which is again a product-form slice in the remaining variables.
//! The fractional exponents are cleared by substituting `z' ↦ z'^{n_k}`,
//! fused directly into the child's exponents.

use num_traits::Zero;

use super::state::{normalize_last, Factor, GenFunState};
use crate::arith::rat::{frac_mod1, rat_int, Rat};
use crate::arith::Cyclotomic;
use crate::error::{Error, Result};
use crate::param::{Guard, ParamPoly, PhaseForm};

/// Splits `state` into slices over one variable fewer whose contributions sum
/// to the contribution of `state`, for every integer parameter vector.
pub fn eliminate_last_var(state: &GenFunState) -> Result<Vec<GenFunState>> {
    state.validate()?;
    let active = state.active();
    if active < 2 {
        return Err(Error::DimensionMismatch { expected: 2, got: active });
    }
    let state = normalize_last(state.clone())?;
    let w = active - 1;
    let beta_w = &state.exps[w];
    let m = state.nparams();

    if state.factors.iter().all(|f| f.last() == 0) {
        // only z^{-β_w} depends on w: its constant term is [β_w = 0]
        let factors = state
            .factors
            .iter()
            .map(|f| Factor { phase: f.phase.clone(), exps: f.exps[..w].to_vec() })
            .collect();
        let acc = state.acc.times(
            &Cyclotomic::one(),
            &PhaseForm::zero(m),
            &ParamPoly::one(m),
            [Guard::eq_zero(beta_w.clone())],
        )?;
        let Some(acc) = acc else { return Ok(Vec::new()) };
        let child = GenFunState { exps: state.exps[..w].to_vec(), factors, acc };
        return Ok(vec![normalize_last(child)?]);
    }

    let mut children = Vec::new();
    for (k, pole) in state.factors.iter().enumerate() {
        let n = pole.last();
        if n <= 0 {
            continue;
        }
        for l in 0..n {
            // e(θ) with θ = (q_k - l)/n is the coefficient of w in the linear factor
            let shift = (rat_int(l) - &pole.phase) / rat_int(n);
            let theta = -shift.clone();
            let (phase, const_phase) = PhaseForm::from_affine(&theta, beta_w);
            let mut scalar = Cyclotomic::from_phase(&const_phase)?.scale(&Rat::new(1.into(), n.into()));

            let exps = state.exps[..w]
                .iter()
                .enumerate()
                .map(|(j, beta)| beta.combine(n, beta_w, -pole.exps[j]))
                .collect();

            let mut factors = Vec::with_capacity(state.factors.len() - 1);
            for (kk, other) in state.factors.iter().enumerate() {
                if kk == k {
                    continue;
                }
                let nn = other.last();
                let q = frac_mod1(&(&other.phase + rat_int(nn) * &shift));
                let v: Vec<i64> = (0..w).map(|j| n * other.exps[j] - nn * pole.exps[j]).collect();
                if v.iter().all(|&e| e == 0) {
                    if q.is_zero() {
                        return Err(Error::UnsupportedMultiplePole(format!(
                            "factors {k} and {kk} share a pole in variable {} at a multivariate stage",
                            w + 1
                        )));
                    }
                    let denom = Cyclotomic::one().sub(&Cyclotomic::from_phase(&q)?)?;
                    scalar = scalar.mul(&denom.inv()?)?;
                } else {
                    factors.push(Factor { phase: q, exps: v });
                }
            }

            let acc = state.acc.times(&scalar, &phase, &ParamPoly::one(m), [Guard::ge_zero(beta_w.clone())])?;
            let Some(acc) = acc else { continue };
            children.push(normalize_last(GenFunState { exps, factors, acc })?);
        }
    }
    Ok(children)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat::rat;
    use crate::param::{AffineForm, GuardSense};

    fn initial(cols: &[&[i64]]) -> GenFunState {
        let cols: Vec<Vec<i64>> = cols.iter().map(|c| c.to_vec()).collect();
        let phases = vec![Rat::zero(); cols.len()];
        GenFunState::initial(&cols, &phases).unwrap()
    }

    #[test]
    fn one_one_three_one_intermediate() {
        // columns (1,3) and (1,1)
        let children = eliminate_last_var(&initial(&[&[1, 3], &[1, 1]])).unwrap();
        assert_eq!(children.len(), 4);
        for (l, child) in children[..3].iter().enumerate() {
            assert_eq!(child.acc.scalar(), &Cyclotomic::from_rat(rat(1, 3)));
            assert_eq!(child.acc.phase().coeffs(), &[rat(0, 1), frac_mod1(&rat(-(l as i64), 3))]);
            assert_eq!(child.exps, vec![AffineForm::new(vec![3, -1], 0)]);
            assert_eq!(child.factors, vec![Factor { phase: rat(l as i64, 3), exps: vec![2] }]);
            assert_eq!(child.acc.guards(), &[Guard::ge_zero(AffineForm::var(2, 1))]);
        }
        let flipped = &children[3];
        assert_eq!(flipped.acc.scalar(), &Cyclotomic::from_int(-1));
        assert!(flipped.acc.phase().is_zero());
        assert_eq!(flipped.exps, vec![AffineForm::new(vec![1, -1], -2)]);
        assert_eq!(flipped.factors, vec![Factor { phase: rat(0, 1), exps: vec![2] }]);
    }

    #[test]
    fn kostant_a2_children() {
        let children = eliminate_last_var(&initial(&[&[1, 0], &[0, 1], &[1, 1]])).unwrap();
        assert_eq!(children.len(), 2);
        let a = &children[0];
        assert_eq!(a.exps, vec![AffineForm::new(vec![1, 0], 0)]);
        assert_eq!(a.factors.len(), 2);
        assert!(a.factors.iter().all(|f| f.exps == vec![1] && f.phase.is_zero()));
        let b = &children[1];
        assert_eq!(b.acc.scalar(), &Cyclotomic::from_int(-1));
        assert_eq!(b.exps, vec![AffineForm::new(vec![1, -1], -1)]);
        assert!(b.factors.iter().all(|f| f.exps == vec![1]));
        assert_eq!(b.acc.guards(), &[Guard::ge_zero(AffineForm::var(2, 1))]);
    }

    #[test]
    fn single_geometric_factor() {
        let s = initial(&[&[1, 0], &[0, 1]]);
        let children = eliminate_last_var(&s).unwrap();
        assert_eq!(children.len(), 1);
        assert_eq!(children[0].acc.guards(), &[Guard::ge_zero(AffineForm::var(2, 1))]);
        assert_eq!(children[0].factors, vec![Factor { phase: rat(0, 1), exps: vec![1] }]);
        assert_eq!(children[0].exps, vec![AffineForm::var(2, 0)]);
    }

    #[test]
    fn no_factor_in_last_variable_gives_equality_guard() {
        let s = initial(&[&[1, 0], &[2, 0]]);
        let children = eliminate_last_var(&s).unwrap();
        assert_eq!(children.len(), 1);
        let g = &children[0].acc.guards()[0];
        assert_eq!(g.sense, GuardSense::EqZero);
        assert_eq!(g.form, AffineForm::var(2, 1));
    }

    #[test]
    fn parallel_columns_are_rejected() {
        let s = initial(&[&[1, 1], &[1, 1], &[2, 1]]);
        assert!(matches!(eliminate_last_var(&s), Err(Error::UnsupportedMultiplePole(_))));
    }

    #[test]
    fn scalar_factor_is_folded() {
        // (1,1) with phase 0 and (1,1) with phase 1/2 share direction but not the pole
        let cols = vec![vec![1, 1], vec![1, 1]];
        let s = GenFunState::initial(&cols, &[rat(0, 1), rat(1, 2)]).unwrap();
        let children = eliminate_last_var(&s).unwrap();
        assert_eq!(children.len(), 2);
        for c in &children {
            assert!(c.factors.is_empty());
            // 1/(1 - e(±1/2)) = 1/2
            assert_eq!(c.acc.scalar(), &Cyclotomic::from_rat(rat(1, 2)));
        }
    }

    #[test]
    fn univariate_state_is_rejected() {
        let s = initial(&[&[1], &[1]]);
        assert!(matches!(eliminate_last_var(&s), Err(Error::DimensionMismatch { .. })));
    }
}
