//! Fixtures shared by the benchmarks.

use negacirc_core::census::{exhaustive_double, h_from_index};
use negacirc_core::field::field_of_order;
use negacirc_core::nega::{build_double, LinearCode};
use negacirc_core::Matrix;

/// Generator of the first self-dual double-negacirculant code over `F_q` with
/// `h` of length `n`.
pub fn first_self_dual_generator(q: u64, n: usize) -> Matrix {
    let field = field_of_order(q).expect("valid field order");
    let idx = exhaustive_double(&field, n).expect("census runs")[0];
    let h = h_from_index(&field, n, idx);
    build_double(&h, n).expect("valid code").generator().clone()
}
