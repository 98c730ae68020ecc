//! Cohomology rings of Seifert fibred 3-manifolds and connected sums of
//! S²×S¹, with certified bounds for Lusternik–Schnirelmann category and
//! higher topological complexity from weighted zero-divisor cup-length.

pub mod algebra;
pub mod arith;
pub mod bounds;
pub mod error;
pub mod operations;
pub mod report;
pub mod rings;
pub mod seifert;
pub mod selfcheck;
pub mod sweeps;
pub mod tensor;
pub mod theorems;

pub use algebra::{AlgebraBuilder, BasisElement, Element, GradedAlgebra};
pub use error::{Error, Result};
pub use rings::{RingCase, RingTag};
pub use seifert::{BaseClass, DerivedParams, SeifertInvariants};
