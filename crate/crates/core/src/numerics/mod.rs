//! Scalar numerical kernels shared by the equilibrium, statistics and
//! planner modules.

pub mod diff;
pub mod golden;
pub mod roots;

pub use diff::{Stencil, StencilKind};
pub use golden::{golden_section_max, GoldenResult};
pub use roots::{expand_bracket_upward, find_root, Root, RootOptions};
