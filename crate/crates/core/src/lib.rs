//! Exact polynomial commutants of Lie subalgebras in the symmetric algebra S(g*)
//! and the universal enveloping algebra U(g).

pub mod error;
pub mod expr;
pub mod linalg;
pub mod monomial;
pub mod polynomial;
pub mod rational;

pub use error::{Error, Result};
pub use expr::Symbols;
pub use linalg::{kernel, rank_at_point, ExactMatrix};
pub use monomial::Monomial;
pub use polynomial::Polynomial;
pub use rational::Rational;
pub mod lie;
pub use lie::{LieAlgebraModel, SubalgebraSpec};
pub mod casimir;
pub mod closure;
pub mod commutant;
pub mod enveloping;
pub mod poisson;
pub mod quantum;
pub mod random;
pub mod realization;
pub mod regression;
