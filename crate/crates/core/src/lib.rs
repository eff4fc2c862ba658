//! Exact symbolic computation of `RO(T)`-graded `TF` of perfectoid rings.

pub mod closedform;
pub mod consistency;
pub mod error;
pub mod gold;
pub mod group;
pub mod hotfss;
pub mod les;
pub mod mackey;
pub mod prism;
pub mod render;
pub mod rep;

pub use error::{Error, Result};
pub use gold::{divide_names, theta, GoldMonomial};
pub use group::{GradedGroup, GroupSummand};
pub use prism::{kernel_cokernel, CyclicIdeal, PrismKind, PrismScalar};
pub use rep::{parse_rep, IrredDecomp, Shift, VirtualRep};
