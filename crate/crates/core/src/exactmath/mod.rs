//! Exact integer, rational, Laurent-polynomial and piecewise-linear arithmetic.

pub mod laurent;
pub mod modular;
pub mod piecewise;
pub mod rational;

pub use laurent::LaurentPoly;
pub use piecewise::{upper_envelope, PiecewiseLinear, Segment};
pub use rational::Rational;
