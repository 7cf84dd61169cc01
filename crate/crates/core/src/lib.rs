//! Torus-knot concordance invariants, cobordism distances, and verifiable
//! subword-adjacency certificates, all in exact arithmetic.

pub mod adjacency;
pub mod braid;
pub mod cli;
pub mod closure;
pub mod cobordism;
pub mod error;
pub mod exactmath;
pub mod invariants;

pub use braid::{half_twist, torus_braid, BraidMove, BraidWord};
pub use error::{Error, Result};
pub use exactmath::{LaurentPoly, PiecewiseLinear, Rational};
pub use invariants::TorusKnotId;
