//! Exact rational computation of characteristic numbers, higher genera and
//! rational bordism quotients on small cohomology models.

pub mod algebra;
pub mod bordism;
pub mod error;
pub mod expr;
pub mod genera;
pub mod linalg;
pub mod rational;
pub mod series;
pub mod varieties;

pub use algebra::{AlgebraBuilder, AlgebraElement, GradedAlgebra, Monomial};
pub use error::{Error, Result};
pub use genera::{GenusSpec, VariableKind};
pub use rational::Rational;
pub use series::PowerSeries;
pub use varieties::{BlowupPair, VarietyModel, Verdict};
