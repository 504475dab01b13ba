//! Exact Dunkl-operator calculus for reflection-invariant weights on the
//! sphere, ball and simplex, with the integrals and uncertainty functionals
//! built on it.

pub mod domains;
pub mod error;
pub mod groups;
pub mod harmonics;
pub mod linalg;
pub mod operators;
pub mod poly;
pub mod quadrature;
pub mod rational;
pub mod uncertainty;

pub use error::{Error, Result};
pub use groups::{Root, RootSystem, RootSystemKind};
pub use poly::{MultiPoly, SphereFunction};
pub use rational::Rational;
