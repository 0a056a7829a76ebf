//! Computer algebra over the complex quaternions `H(C)`: Cartan-basis
//! arithmetic, weighted Dirac operators, closed-form hyperholomorphic
//! solutions, and residual verification.

pub mod algebra;
pub mod cli;
pub mod constructors;
pub mod error;
pub mod holoexpr;
pub mod operators;
pub mod parser;

pub use algebra::{BasisMatrix, BasisTag, Biquaternion, ComplexScalar};
pub use error::{Error, Result};
pub use holoexpr::{HoloExpr, Point4, Substitution, VarId};
pub use operators::{BqFunction, PsiWeights, ResidualReport, Side};
