//! Exact deformation theory over differential graded Lie algebras.

pub mod artin;
pub mod bicomplex;
pub mod deformation;
pub mod dgla;
pub mod error;
pub mod homology;
pub mod io;
pub mod linalg;
pub mod models;
pub mod rational;
pub mod selftest;

pub use error::{Error, Result};
pub use rational::Rational;
