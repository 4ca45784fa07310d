//! Lower-bound machinery on subdivided complete binary trees: pattern
//! counts and signed binary weights, boundary inequalities, and a harness
//! that plays schedules against the position-set recurrence.

mod arith;
mod boundary;
mod survival;

pub use arith::*;
pub use boundary::*;
pub use survival::*;

pub use num_rational::Ratio;
