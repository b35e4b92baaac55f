//! Numerical function theory on the unit disk: real Smirnov functions, their
//! inner/outer and Cayley/Koebe factorizations, Cayley inner functions of arc
//! sets, infinite products of Möbius-transformed inner functions, and
//! Herglotz A-integrals.

pub mod a_integral;
pub mod arcset;
pub mod boundary;
pub mod cayley;
pub mod cli;
pub mod disk;
pub mod error;
pub mod expr;
pub mod factorization;
pub mod hp;
pub mod inner;
pub mod outer;
pub mod poly;
pub mod products;

pub use disk::C64;
pub use error::{Error, Result};
