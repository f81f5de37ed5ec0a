//! Independent numerical ground truth for the exact formulas: the character
//! group modulo `f`, the finite cotangent-sum formula for `L(m, chi)`, and
//! mean values computed literally from the definitions.

mod group;
mod sums;

pub use group::{
    all_characters, character_value, characters, characters_with_parity, unit_group, Component,
    DirichletCharacter, UnitGroupStructure,
};
pub use sums::{
    brute_force_mean, collapsed_mean, cot_derivative, dirichlet_series_partial,
    dirichlet_tail_bound, l_value, orthogonality_sum, orthogonality_sum_with, q_polynomial,
    s_direct, unit_root_table, TUPLE_BUDGET,
};
