//! Exact scalars, group elements, exponentials, generalized polynomials, and
//! the canonical exponential-polynomial form.

mod exponential;
mod exppoly;
mod genpoly;
mod group;
mod multi;
mod scalar;

pub use exponential::Exponential;
pub use exppoly::{canonicalize, generic_combination, ExpPoly};
pub use genpoly::{GenPoly, Monomial};
pub use group::GroupElem;
pub use multi::MultiExpPoly;
pub use scalar::{ExactField, Rat, Scalar};
