//! Expressions that are symbolic in the parameter vector `b`: affine forms,
//! guards, linear phases, parameter polynomials and the closed terms built from them.

pub mod affine;
pub mod phase;
pub mod poly;
pub mod term;

pub use affine::{format_affine, param_names, AffineForm, Guard, GuardSense, GuardStatus};
pub use phase::{format_phase_arg, PhaseForm};
pub use poly::{binom_poly, format_poly, ParamPoly};
pub use term::Term;
