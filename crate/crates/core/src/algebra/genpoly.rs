//! Sparse multivariate polynomials in the coordinates `t1..td` of `Z^d`.
//!
//! On `Z^d` every generalized polynomial (a function killed by `deg+1`
//! successive difference operators) is an ordinary polynomial in the
//! coordinates, so this type carries the whole polynomial layer of the crate.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use super::group::GroupElem;
use super::scalar::{ExactField, Scalar};
use crate::error::{Error, Result};

/// Exponent vector of a monomial, one entry per variable.
pub type Monomial = Vec<u32>;

/// Sparse polynomial: monomial -> nonzero coefficient. The zero polynomial
/// stores no terms; `degree()` is `-1` for it.
#[derive(Clone, PartialEq, Eq)]
pub struct GenPoly<S: ExactField = Scalar> {
    nvars: usize,
    terms: BTreeMap<Monomial, S>,
}

impl<S: ExactField> GenPoly<S> {
    pub fn zero(nvars: usize) -> Self {
        GenPoly { nvars, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: S) -> Self {
        let mut p = Self::zero(nvars);
        p.add_term(vec![0; nvars], c);
        p
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, S::one())
    }

    /// The variable `t_{j+1}` (0-based index `j`).
    pub fn variable(nvars: usize, j: usize) -> Self {
        assert!(j < nvars, "variable index out of range");
        let mut exps = vec![0; nvars];
        exps[j] = 1;
        let mut p = Self::zero(nvars);
        p.add_term(exps, S::one());
        p
    }

    pub fn from_terms<I: IntoIterator<Item = (Monomial, S)>>(nvars: usize, iter: I) -> Self {
        let mut p = Self::zero(nvars);
        for (m, c) in iter {
            assert_eq!(m.len(), nvars, "monomial arity mismatch");
            p.add_term(m, c);
        }
        p
    }

    /// Adds `c * t^m`, dropping the entry if the sum cancels.
    pub fn add_term(&mut self, mono: Monomial, c: S) {
        if c.is_zero() {
            return;
        }
        debug_assert_eq!(mono.len(), self.nvars);
        match self.terms.entry(mono) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let sum = e.get().clone() + c;
                if sum.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &S)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Total degree; `-1` for the zero polynomial.
    pub fn degree(&self) -> i64 {
        self.terms
            .keys()
            .map(|m| m.iter().map(|&e| e as i64).sum())
            .max()
            .unwrap_or(-1)
    }

    pub fn coefficient(&self, mono: &Monomial) -> Option<&S> {
        self.terms.get(mono)
    }

    pub fn constant_term(&self) -> S {
        self.terms.get(&vec![0; self.nvars]).cloned().unwrap_or_else(S::zero)
    }

    pub fn map_coeffs<T: ExactField>(&self, f: impl Fn(&S) -> T) -> GenPoly<T> {
        GenPoly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, c)| (m.clone(), f(c))).collect(),
        }
    }

    pub fn scale(&self, c: &S) -> Self {
        if c.is_zero() {
            return Self::zero(self.nvars);
        }
        GenPoly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, v)| (m.clone(), v.clone() * c.clone())).collect(),
        }
    }

    /// Exact evaluation at an integer point.
    pub fn eval(&self, x: &GroupElem) -> Result<S> {
        if x.dim() != self.nvars {
            return Err(Error::DimMismatch { expected: self.nvars, got: x.dim() });
        }
        let mut acc = S::zero();
        for (mono, c) in &self.terms {
            let mut val = c.clone();
            for (j, &e) in mono.iter().enumerate() {
                if e > 0 {
                    // Coordinates are plain integers; powers stay exact.
                    let p = S::from_i64(x.coords()[j]).powi(e as i64).expect("nonneg power");
                    val = val * p;
                }
            }
            acc = acc + val;
        }
        Ok(acc)
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one(self.nvars);
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Substitutes `t_j -> images[j]`; all images must share a variable count,
    /// which becomes the arity of the result.
    pub fn substitute(&self, images: &[GenPoly<S>]) -> GenPoly<S> {
        assert_eq!(images.len(), self.nvars, "one image per variable required");
        let out_vars = images.first().map_or(0, |p| p.nvars);
        assert!(images.iter().all(|p| p.nvars == out_vars));
        let mut out = GenPoly::zero(out_vars);
        // Cache powers of each image; exponents are small throughout.
        let mut powers: Vec<Vec<GenPoly<S>>> = images.iter().map(|_| vec![GenPoly::one(out_vars)]).collect();
        for (mono, c) in &self.terms {
            let mut term = GenPoly::constant(out_vars, c.clone());
            for (j, &e) in mono.iter().enumerate() {
                while powers[j].len() <= e as usize {
                    let next = powers[j].last().unwrap() * &images[j];
                    powers[j].push(next);
                }
                if e > 0 {
                    term = &term * &powers[j][e as usize];
                }
            }
            out = &out + &term;
        }
        out
    }

    /// `p(x + h)` for an integer shift `h`.
    pub fn shift(&self, h: &GroupElem) -> Result<GenPoly<S>> {
        if h.dim() != self.nvars {
            return Err(Error::DimMismatch { expected: self.nvars, got: h.dim() });
        }
        let images: Vec<GenPoly<S>> = (0..self.nvars)
            .map(|j| {
                let mut p = GenPoly::variable(self.nvars, j);
                p.add_term(vec![0; self.nvars], S::from_i64(h.coords()[j]));
                p
            })
            .collect();
        Ok(self.substitute(&images))
    }

    /// Formal partial derivative with respect to `t_{j+1}`.
    pub fn partial(&self, j: usize) -> GenPoly<S> {
        assert!(j < self.nvars);
        let mut out = GenPoly::zero(self.nvars);
        for (mono, c) in &self.terms {
            let e = mono[j];
            if e > 0 {
                let mut m = mono.clone();
                m[j] -= 1;
                out.add_term(m, c.clone() * S::from_i64(e as i64));
            }
        }
        out
    }

    /// Splits into homogeneous components by total degree: index `i` holds the
    /// sum of the monomials of degree exactly `i`. Empty for the zero
    /// polynomial; the components sum back to `self`.
    pub fn homogeneous_parts(&self) -> Vec<GenPoly<S>> {
        let deg = self.degree();
        if deg < 0 {
            return Vec::new();
        }
        let mut parts = vec![GenPoly::zero(self.nvars); deg as usize + 1];
        for (mono, c) in &self.terms {
            let d: u32 = mono.iter().sum();
            parts[d as usize].add_term(mono.clone(), c.clone());
        }
        parts
    }
}

impl<S: ExactField> Add for &GenPoly<S> {
    type Output = GenPoly<S>;
    fn add(self, rhs: &GenPoly<S>) -> GenPoly<S> {
        assert_eq!(self.nvars, rhs.nvars);
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl<S: ExactField> Sub for &GenPoly<S> {
    type Output = GenPoly<S>;
    fn sub(self, rhs: &GenPoly<S>) -> GenPoly<S> {
        assert_eq!(self.nvars, rhs.nvars);
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), -c.clone());
        }
        out
    }
}

impl<S: ExactField> Mul for &GenPoly<S> {
    type Output = GenPoly<S>;
    fn mul(self, rhs: &GenPoly<S>) -> GenPoly<S> {
        assert_eq!(self.nvars, rhs.nvars);
        let mut out = GenPoly::zero(self.nvars);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                let m: Monomial = ma.iter().zip(mb).map(|(a, b)| a + b).collect();
                out.add_term(m, ca.clone() * cb.clone());
            }
        }
        out
    }
}

impl<S: ExactField> Neg for &GenPoly<S> {
    type Output = GenPoly<S>;
    fn neg(self) -> GenPoly<S> {
        GenPoly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c.clone())).collect(),
        }
    }
}

/// Monomial text like `t1^2*t3`; empty for the constant monomial.
fn fmt_mono(mono: &Monomial) -> String {
    let mut parts = Vec::new();
    for (j, &e) in mono.iter().enumerate() {
        match e {
            0 => {}
            1 => parts.push(format!("t{}", j + 1)),
            _ => parts.push(format!("t{}^{}", j + 1, e)),
        }
    }
    parts.join("*")
}

impl<S: ExactField> fmt::Display for GenPoly<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        // Highest total degree first, then reverse monomial order.
        let mut entries: Vec<(&Monomial, &S)> = self.terms.iter().collect();
        entries.sort_by(|(ma, _), (mb, _)| {
            let da: u32 = ma.iter().sum();
            let db: u32 = mb.iter().sum();
            db.cmp(&da).then_with(|| mb.cmp(ma))
        });
        let mut first = true;
        for (mono, c) in entries {
            let ctxt = format!("{c}");
            // A leading `-` of a pure real/imaginary coefficient is pulled out
            // into the separator; mixed `a+bi` coefficients get parentheses.
            let mixed = ctxt.contains('+') || ctxt.rfind('-').is_some_and(|k| k > 0);
            let (sep, body) = if mixed {
                ("+", format!("({ctxt})"))
            } else if let Some(stripped) = ctxt.strip_prefix('-') {
                ("-", stripped.to_string())
            } else {
                ("+", ctxt)
            };
            if first {
                if sep == "-" {
                    write!(f, "-")?;
                }
                first = false;
            } else {
                write!(f, " {sep} ")?;
            }
            let mtxt = fmt_mono(mono);
            if mtxt.is_empty() {
                write!(f, "{body}")?;
            } else if body == "1" {
                write!(f, "{mtxt}")?;
            } else {
                write!(f, "{body}*{mtxt}")?;
            }
        }
        Ok(())
    }
}

impl<S: ExactField> fmt::Debug for GenPoly<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}
