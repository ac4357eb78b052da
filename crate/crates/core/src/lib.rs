//! Exact cylindrical algebraic decomposition over the rationals.

pub mod bench;
pub mod error;
pub mod polynomial;
pub mod formula;
pub mod groebner;
pub mod lifting;
pub mod projection;
pub mod realalg;

pub use error::{CadError, Result};
pub use polynomial::{Polynomial, Var, VarOrder};
