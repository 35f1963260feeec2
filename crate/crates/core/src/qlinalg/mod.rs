//! Exact rational linear algebra: dense matrices, Kronecker products,
//! elimination, and bounded chain complexes.

mod chain;
mod matrix;
mod rational;

pub use chain::{ChainComplex, ChainMap};
pub use matrix::QMatrix;
pub use rational::{format_rational, parse_rational, Rational};
