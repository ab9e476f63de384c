//! Exact arithmetic in `F_q` and `F_q[x]` for odd `q`, plus dense matrices.

mod factor;
mod field;
mod matrix;
pub mod numtheory;
mod poly;

pub use factor::{monic_irreducibles, MAX_IRREDUCIBLE_SCAN};
pub use field::{Field, MAX_FIELD_ORDER};
pub use matrix::Matrix;
pub use numtheory::mult_order;
pub use poly::{Poly, MAX_DEGREE};

use crate::error::Result;

/// `field_make`: the field `F_{p^k}`.
pub fn field_make(p: u64, k: u32) -> Result<Field> {
    Field::new(p, k)
}
