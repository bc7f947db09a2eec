//! Exact symbolic calculus for generalized exponential polynomials on `Z^d`.
//!
//! Everything is computed over the exact field `Q(i)` (Gaussian rationals with
//! arbitrary-precision components), so algebraic identities are checked
//! structurally, never numerically. The crate provides:
//!
//! - [`algebra`]: scalars, group elements, exponentials `m(x) = prod λ_j^{x_j}`,
//!   sparse generalized polynomials, and the canonical `Σ p_i · m_i` form with
//!   its degree and spectrum.
//! - [`diffops`]: plain and modified difference operators `Δ_h`, `Δ_{m,h}`,
//!   operator words, and annihilator construction.
//! - [`decompose`]: constructive decompositions of `f(x_1 + ... + x_n)` into
//!   `Σ u_i · v_i` with variable-dependence constraints, witness verification,
//!   restriction, and the separated-pair combinatorics.
//! - [`gridlab`]: finite-grid analytics — exact rank certificates for the
//!   two-variable sum matrix, exponential membership in spans, order bounds,
//!   and exact reconstruction of exponential-polynomial form from samples.
//! - [`parse`]: the text syntax for expressions (`(t1^2+3/2)*exp(2,-1/3)`).
//!
//! Core types are generic over an [`ExactField`] scalar; the crate-level
//! default is [`Scalar`] = `Q(i)`. [`num_rational::BigRational`] also
//! implements the trait, which the test oracles use.

pub mod algebra;
pub mod decompose;
pub mod diffops;
pub mod error;
pub mod gridlab;
pub mod parse;
pub mod selftest;

pub use algebra::{
    canonicalize, generic_combination, ExactField, ExpPoly, Exponential, GenPoly, GroupElem,
    MultiExpPoly, Rat, Scalar,
};
pub use error::{Error, Result};
