//! Exponentials on `Z^d`: the multiplicative functions `m(x) = prod λ_j^{x_j}`.

use std::cmp::Ordering;
use std::fmt;

use num_traits::{One, Zero};
use serde::ser::SerializeSeq;
use serde::{Serialize, Serializer};

use super::group::GroupElem;
use super::scalar::{ExactField, Scalar};
use crate::error::{Error, Result};

/// A `d`-tuple of nonzero scalars. `m(x+y) = m(x) * m(y)` holds by
/// construction, and nonzero components keep `m` defined on all of `Z^d`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Exponential<S: ExactField = Scalar> {
    lambda: Vec<S>,
}

impl<S: ExactField> Exponential<S> {
    pub fn new(lambda: Vec<S>) -> Result<Self> {
        if lambda.is_empty() {
            return Err(Error::Invalid("exponential needs at least one component".into()));
        }
        if lambda.iter().any(|l| l.is_zero()) {
            return Err(Error::ZeroLambda);
        }
        Ok(Exponential { lambda })
    }

    /// The identity exponential `1` (all components one).
    pub fn identity(d: usize) -> Self {
        Exponential { lambda: vec![S::one(); d] }
    }

    pub fn is_identity(&self) -> bool {
        self.lambda.iter().all(|l| l.is_one())
    }

    pub fn dim(&self) -> usize {
        self.lambda.len()
    }

    pub fn lambda(&self) -> &[S] {
        &self.lambda
    }

    pub fn eval(&self, x: &GroupElem) -> Result<S> {
        if x.dim() != self.dim() {
            return Err(Error::DimMismatch { expected: self.dim(), got: x.dim() });
        }
        let mut acc = S::one();
        for (l, &e) in self.lambda.iter().zip(x.coords()) {
            acc = acc * l.powi(e).expect("components are nonzero");
        }
        Ok(acc)
    }

    /// Pointwise product, again an exponential.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.dim() != other.dim() {
            return Err(Error::DimMismatch { expected: self.dim(), got: other.dim() });
        }
        Ok(Exponential {
            lambda: self.lambda.iter().zip(&other.lambda).map(|(a, b)| a.clone() * b.clone()).collect(),
        })
    }

    pub fn canonical_cmp(&self, other: &Self) -> Ordering {
        self.lambda
            .len()
            .cmp(&other.lambda.len())
            .then_with(|| {
                for (a, b) in self.lambda.iter().zip(&other.lambda) {
                    let ord = a.canonical_cmp(b);
                    if ord != Ordering::Equal {
                        return ord;
                    }
                }
                Ordering::Equal
            })
    }
}

// The fixed total order used for canonical serialization.
impl<S: ExactField> PartialOrd for Exponential<S> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl<S: ExactField> Ord for Exponential<S> {
    fn cmp(&self, other: &Self) -> Ordering {
        self.canonical_cmp(other)
    }
}

impl<S: ExactField> fmt::Display for Exponential<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let args = self.lambda.iter().map(|l| l.to_string()).collect::<Vec<_>>().join(",");
        write!(f, "exp({args})")
    }
}

impl<S: ExactField> fmt::Debug for Exponential<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl<S: ExactField + Serialize> Serialize for Exponential<S> {
    fn serialize<Ser: Serializer>(&self, serializer: Ser) -> std::result::Result<Ser::Ok, Ser::Error> {
        let mut seq = serializer.serialize_seq(Some(self.lambda.len()))?;
        for l in &self.lambda {
            seq.serialize_element(l)?;
        }
        seq.end()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e(vals: &[i64]) -> Exponential<Scalar> {
        Exponential::new(vals.iter().map(|&v| Scalar::from_int(v)).collect()).unwrap()
    }

    #[test]
    fn rejects_zero_component() {
        let r = Exponential::<Scalar>::new(vec![Scalar::from_int(2), Scalar::zero()]);
        assert_eq!(r.unwrap_err(), Error::ZeroLambda);
    }

    #[test]
    fn multiplicative_on_samples() {
        let m = Exponential::new(vec![Scalar::from_int(2), Scalar::ratio(-1, 3)]).unwrap();
        let x = GroupElem(vec![2, -1]);
        let y = GroupElem(vec![-3, 2]);
        let lhs = m.eval(&x.add(&y).unwrap()).unwrap();
        let rhs = m.eval(&x).unwrap() * m.eval(&y).unwrap();
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn identity_evaluates_to_one_everywhere() {
        let m = Exponential::<Scalar>::identity(3);
        assert!(m.is_identity());
        assert_eq!(m.eval(&GroupElem(vec![5, -7, 0])).unwrap(), Scalar::from_int(1));
    }

    #[test]
    fn negative_coordinates_are_exact() {
        assert_eq!(e(&[2]).eval(&GroupElem(vec![-2])).unwrap(), Scalar::ratio(1, 4));
    }
}
