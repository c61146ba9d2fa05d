//! From a matrix to a verified closed form.

mod driver;
mod preprocess;
mod spec;

pub use driver::{
    box_points, compute, compute_with_order, evaluate, evaluate_exact, merge_terms, parse_range, verify_box,
    Mismatch, Provenance, ResultExpr, VerifyReport,
};
pub use preprocess::{check_pointed, determinant, nonnegativize, primitive_integer, PreprocessReport};
pub use spec::ProblemSpec;
