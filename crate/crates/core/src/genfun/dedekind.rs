//! Generalized Dedekind sums, used to cross-check partial fraction numerators.

use crate::arith::rat::{rat_int, Rat};
use crate::arith::Cyclotomic;
use crate::error::{Error, Result};

/// `(1/n) Σ_{α^n = e(a)} α^β / f(α⁻¹)` with `f(w) = ∏ (1 - c·w)` over `f`.
///
/// Summed root by root. For a group `1 - e(a)w^n` against the other factors
/// `f` this is the constant coefficient of its partial fraction numerator.
pub fn dedekind_sum(n: u64, a_phase: &Rat, f: &[Cyclotomic], beta: i64) -> Result<Cyclotomic> {
    if n == 0 {
        return Err(Error::InvalidInput("dedekind_sum needs n >= 1".into()));
    }
    let n_rat = rat_int(n as i64);
    let mut total = Cyclotomic::zero();
    for l in 0..n {
        let t = (a_phase + rat_int(l as i64)) / &n_rat;
        let alpha = Cyclotomic::from_phase(&t)?;
        let alpha_inv = Cyclotomic::from_phase(&-t)?;
        let mut value = Cyclotomic::one();
        for c in f {
            value = value.mul(&Cyclotomic::one().sub(&c.mul(&alpha_inv)?)?)?;
        }
        if value.is_zero() {
            return Err(Error::DivisionByZero("f vanishes at an n-th root"));
        }
        total = total.add(&alpha.pow(beta)?.div(&value)?)?;
    }
    Ok(total.scale(&n_rat.recip()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat::rat;

    #[test]
    fn trivial_sum() {
        assert!(dedekind_sum(1, &rat(0, 1), &[], 0).unwrap().is_one());
        assert!(dedekind_sum(5, &rat(0, 1), &[], 0).unwrap().is_one());
    }

    #[test]
    fn half_weighted_factor() {
        let f = [Cyclotomic::from_rat(rat(1, 2))];
        assert_eq!(dedekind_sum(2, &rat(0, 1), &f, 0).unwrap(), Cyclotomic::from_rat(rat(4, 3)));
    }

    #[test]
    fn vanishing_factor() {
        let f = [Cyclotomic::one()];
        assert!(matches!(dedekind_sum(3, &rat(0, 1), &f, 0), Err(Error::DivisionByZero(_))));
    }
}
