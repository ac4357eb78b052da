//! Real algebraic numbers: isolation, exact comparison, and sign
//! determination at algebraic points.

mod eval;
mod habicht;
mod isolate;
mod number;
mod upoly;

pub use habicht::{pmv, sturm_habicht};
pub use eval::{eval_rational, roots_above, sign_at, sign_at_nonzero, RootsAbove, SamplePoint};
pub use isolate::{isolate_real_roots, isolate_upoly};
pub use number::{compare, integer_above, integer_below, simplest_between, AlgebraicNumber, Enclosure};
pub use upoly::UPoly;
