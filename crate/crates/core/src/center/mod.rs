//! The Drinfeld center through the tube algebra.

mod data;
mod decompose;
mod tube;

pub use data::{
    center_s_matrix, decompose_center, lagrangian_algebra, self_braiding_twist, theorem_c_report, theorem_c_shadow, Assertion, CenterData,
    Presentation, TheoremCReport,
};

pub use decompose::{center_simples, half_braiding_check, CenterObject, HalfBraidingViolation, SPECTRAL_GAP};
pub use tube::{build_tube_algebra, Sparse, TubeAlgebra, TubeIndex};

#[cfg(test)]
mod tests;
