//! Elements of the ambient group `Z^d`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A point of `Z^d`, used both as an argument and as a translation step.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct GroupElem(pub Vec<i64>);

impl GroupElem {
    pub fn zero(d: usize) -> Self {
        GroupElem(vec![0; d])
    }

    /// `j`-th unit vector (0-based).
    pub fn unit(d: usize, j: usize) -> Self {
        let mut v = vec![0; d];
        v[j] = 1;
        GroupElem(v)
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[i64] {
        &self.0
    }

    pub fn add(&self, other: &GroupElem) -> Result<GroupElem> {
        if self.dim() != other.dim() {
            return Err(Error::DimMismatch { expected: self.dim(), got: other.dim() });
        }
        Ok(GroupElem(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect()))
    }

    pub fn neg(&self) -> GroupElem {
        GroupElem(self.0.iter().map(|a| -a).collect())
    }
}

impl From<Vec<i64>> for GroupElem {
    fn from(v: Vec<i64>) -> Self {
        GroupElem(v)
    }
}

impl fmt::Debug for GroupElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.0.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(","))
    }
}

impl fmt::Display for GroupElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

impl FromStr for GroupElem {
    type Err = Error;

    /// Comma-separated integers, e.g. `1,-2,0`.
    fn from_str(s: &str) -> Result<Self> {
        let coords = s
            .split(',')
            .map(|t| {
                t.trim()
                    .parse::<i64>()
                    .map_err(|e| Error::Parse { pos: 0, msg: format!("bad coordinate `{t}`: {e}") })
            })
            .collect::<Result<Vec<_>>>()?;
        if coords.is_empty() {
            return Err(Error::Parse { pos: 0, msg: "empty group element".into() });
        }
        Ok(GroupElem(coords))
    }
}
