//! Exact λ-bracket calculus for averaging Lie conformal algebras.
//!
//! Everything is generic over an exact [`Scalar`] field; the aliases at the
//! crate root fix it to arbitrary-precision rationals.

pub mod builtin;
pub mod cohomology;
pub mod conformal;
pub mod error;
pub mod extensions;
pub mod homotopy2;
pub mod report;
pub mod representations;
pub mod scalar;
pub mod symalg;

pub use error::{Error, Result};
pub use scalar::Scalar;
pub use symalg::{Monomial, Var, MAX_LAMBDA};

/// Default coefficient field.
pub type Rational = num_rational::BigRational;

pub type Poly = symalg::Poly<Rational>;
pub type ModElem = symalg::ModElem<Rational>;
pub type ConformalMap = conformal::ConformalMap<Rational>;
pub type LambdaTable = conformal::LambdaTable<Rational>;
pub type LieConformalAlgebra = conformal::LieConformalAlgebra<Rational>;
pub type AveragingAlgebra = conformal::AveragingAlgebra<Rational>;
pub type AssocConformalAlgebra = conformal::AssocConformalAlgebra<Rational>;
pub type Report = report::Report<Rational>;
pub type CheckResult = report::CheckResult<Rational>;
pub type ConformalRep = representations::ConformalRep<Rational>;
pub type AvgRepTriple = representations::AvgRepTriple<Rational>;
pub type Cochain = cohomology::Cochain<Rational>;
pub type CochainPair = cohomology::CochainPair<Rational>;
pub type TwoTermLinf = homotopy2::TwoTermLinf<Rational>;
pub type HomotopyAvg = homotopy2::HomotopyAvg<Rational>;
pub type TwoTermMorphism = homotopy2::TwoTermMorphism<Rational>;
pub type CrossedModule = homotopy2::CrossedModule<Rational>;
pub type NonAbCocycle = extensions::NonAbCocycle<Rational>;
pub type Extension = extensions::Extension<Rational>;
pub type AutPair = extensions::AutPair<Rational>;
