//! Exact scalars: rationals and cyclotomic numbers.

pub mod cyclotomic;
pub mod rat;
mod zpoly;

pub use cyclotomic::{
    cyclotomic_polynomial, euler_phi, max_level, parse_cyclotomic, set_max_level, Cyclotomic,
    DEFAULT_MAX_LEVEL,
};
pub use rat::{frac_mod1, parse_rat, rat, rat_int, Rat};
