//! Generating-function slices and the operations that eliminate their variables.

pub mod dedekind;
pub mod eliminate;
pub mod state;
pub mod univariate;

pub use dedekind::dedekind_sum;
pub use eliminate::eliminate_last_var;
pub use state::{flip, substitute_power, Factor, GenFunState};
pub use univariate::{final_univariate, group_linear_factors, linear_phases, pfd_numerator, GroupNumerator, LinearGroup};
