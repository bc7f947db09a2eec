//! Functions of `n` variables `x_1, ..., x_n`, each ranging over `Z^d`,
//! realized as exponential polynomials over `Z^{n*d}` with block structure:
//! block `j` (1-based) occupies coordinates `(j-1)*d .. j*d`.

use std::fmt;

use num_traits::Zero;
use serde::Serialize;

use super::exponential::Exponential;
use super::exppoly::{canonicalize, ExpPoly};
use super::genpoly::GenPoly;
use super::group::GroupElem;
use super::scalar::{ExactField, Scalar};
use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, Serialize)]
#[serde(transparent)]
pub struct MultiExpPoly<S: ExactField = Scalar> {
    #[serde(skip)]
    blocks: usize,
    #[serde(skip)]
    block_dim: usize,
    f: ExpPoly<S>,
}

impl<S: ExactField> MultiExpPoly<S> {
    pub fn new(blocks: usize, block_dim: usize, f: ExpPoly<S>) -> Result<Self> {
        if f.dim() != blocks * block_dim {
            return Err(Error::DimMismatch { expected: blocks * block_dim, got: f.dim() });
        }
        Ok(MultiExpPoly { blocks, block_dim, f })
    }

    pub fn zero(blocks: usize, block_dim: usize) -> Self {
        MultiExpPoly { blocks, block_dim, f: ExpPoly::zero(blocks * block_dim) }
    }

    pub fn blocks(&self) -> usize {
        self.blocks
    }

    pub fn block_dim(&self) -> usize {
        self.block_dim
    }

    pub fn inner(&self) -> &ExpPoly<S> {
        &self.f
    }

    pub fn into_inner(self) -> ExpPoly<S> {
        self.f
    }

    pub fn is_zero(&self) -> bool {
        self.f.is_zero()
    }

    /// `f(x_1 + ... + x_n)`: substitutes each coordinate by the sum over the
    /// blocks and replicates each exponential component across the blocks.
    pub fn expand_sum(f: &ExpPoly<S>, blocks: usize) -> Self {
        let d = f.dim();
        let nd = blocks * d;
        let images: Vec<GenPoly<S>> = (0..d)
            .map(|j| {
                let mut img = GenPoly::zero(nd);
                for b in 0..blocks {
                    img = &img + &GenPoly::variable(nd, b * d + j);
                }
                img
            })
            .collect();
        let mut raw = Vec::new();
        for (m, p) in f.terms() {
            let lambda: Vec<S> = (0..blocks).flat_map(|_| m.lambda().iter().cloned()).collect();
            let m_big = Exponential::new(lambda).expect("components stay nonzero");
            raw.push((m_big, p.substitute(&images)));
        }
        MultiExpPoly {
            blocks,
            block_dim: d,
            f: canonicalize(nd, raw).expect("dimensions consistent"),
        }
    }

    /// Embeds a one-variable function into block `j` (1-based): the result
    /// depends only on `x_j`.
    pub fn from_block(blocks: usize, j: usize, f: &ExpPoly<S>) -> Self {
        let d = f.dim();
        let nd = blocks * d;
        assert!((1..=blocks).contains(&j));
        let offset = (j - 1) * d;
        let mut raw = Vec::new();
        for (m, p) in f.terms() {
            let mut lambda = vec![S::one(); nd];
            lambda[offset..offset + d].clone_from_slice(m.lambda());
            let mut poly = GenPoly::zero(nd);
            for (mono, c) in p.terms() {
                let mut big = vec![0u32; nd];
                big[offset..offset + d].copy_from_slice(mono);
                poly.add_term(big, c.clone());
            }
            raw.push((Exponential::new(lambda).expect("nonzero"), poly));
        }
        MultiExpPoly {
            blocks,
            block_dim: d,
            f: canonicalize(nd, raw).expect("dimensions consistent"),
        }
    }

    /// Whether the function actually depends on block `j` (1-based): true iff
    /// some monomial has a nonzero exponent there or some exponential has a
    /// non-one component there.
    pub fn depends_on(&self, j: usize) -> bool {
        assert!((1..=self.blocks).contains(&j));
        let d = self.block_dim;
        let range = (j - 1) * d..j * d;
        for (m, p) in self.f.terms() {
            if m.lambda()[range.clone()].iter().any(|l| !l.is_one()) {
                return true;
            }
            if p.terms().any(|(mono, _)| mono[range.clone()].iter().any(|&e| e > 0)) {
                return true;
            }
        }
        false
    }

    /// The set of blocks the function depends on, 1-based.
    pub fn dependence_set(&self) -> std::collections::BTreeSet<usize> {
        (1..=self.blocks).filter(|&j| self.depends_on(j)).collect()
    }

    /// If the function is a constant, returns its value.
    pub fn as_constant(&self) -> Option<S> {
        if self.is_zero() {
            return Some(S::zero());
        }
        if self.f.num_terms() != 1 {
            return None;
        }
        let (m, p) = self.f.terms().next().unwrap();
        if m.is_identity() && p.degree() == 0 {
            Some(p.constant_term())
        } else {
            None
        }
    }

    pub fn evaluate(&self, xs: &[GroupElem]) -> Result<S> {
        if xs.len() != self.blocks {
            return Err(Error::Invalid(format!(
                "expected {} block arguments, got {}",
                self.blocks,
                xs.len()
            )));
        }
        let mut coords = Vec::with_capacity(self.blocks * self.block_dim);
        for x in xs {
            if x.dim() != self.block_dim {
                return Err(Error::DimMismatch { expected: self.block_dim, got: x.dim() });
            }
            coords.extend_from_slice(x.coords());
        }
        self.f.evaluate(&GroupElem(coords))
    }

    pub fn add(&self, rhs: &Self) -> Result<Self> {
        self.compatible(rhs)?;
        Ok(MultiExpPoly { blocks: self.blocks, block_dim: self.block_dim, f: self.f.add(&rhs.f)? })
    }

    pub fn sub(&self, rhs: &Self) -> Result<Self> {
        self.compatible(rhs)?;
        Ok(MultiExpPoly { blocks: self.blocks, block_dim: self.block_dim, f: self.f.sub(&rhs.f)? })
    }

    pub fn mul(&self, rhs: &Self) -> Result<Self> {
        self.compatible(rhs)?;
        Ok(MultiExpPoly { blocks: self.blocks, block_dim: self.block_dim, f: self.f.mul(&rhs.f)? })
    }

    pub fn scale(&self, c: &S) -> Self {
        MultiExpPoly { blocks: self.blocks, block_dim: self.block_dim, f: self.f.scale(c) }
    }

    fn compatible(&self, rhs: &Self) -> Result<()> {
        if self.blocks != rhs.blocks || self.block_dim != rhs.block_dim {
            return Err(Error::Invalid(format!(
                "block shape mismatch: {}x{} vs {}x{}",
                self.blocks, self.block_dim, rhs.blocks, rhs.block_dim
            )));
        }
        Ok(())
    }

    /// Fixes the listed blocks (1-based) at the given points and renumbers the
    /// remaining blocks in increasing order.
    pub fn restrict(&self, fixed: &std::collections::BTreeMap<usize, GroupElem>) -> Result<Self> {
        let d = self.block_dim;
        for (&j, v) in fixed {
            if !(1..=self.blocks).contains(&j) {
                return Err(Error::Invalid(format!("fixed variable {j} out of range")));
            }
            if v.dim() != d {
                return Err(Error::DimMismatch { expected: d, got: v.dim() });
            }
        }
        let kept: Vec<usize> = (1..=self.blocks).filter(|j| !fixed.contains_key(j)).collect();
        let new_blocks = kept.len();
        let new_nd = new_blocks * d;

        // Coordinate images: kept coordinates map to fresh variables, fixed
        // coordinates to integer constants.
        let mut images = Vec::with_capacity(self.blocks * d);
        let mut new_index = vec![None; self.blocks * d];
        for (pos, &j) in kept.iter().enumerate() {
            for c in 0..d {
                new_index[(j - 1) * d + c] = Some(pos * d + c);
            }
        }
        for j in 1..=self.blocks {
            for c in 0..d {
                let old = (j - 1) * d + c;
                images.push(match new_index[old] {
                    Some(new) => GenPoly::variable(new_nd, new),
                    None => GenPoly::constant(new_nd, S::from_i64(fixed[&j].coords()[c])),
                });
            }
        }

        let mut raw = Vec::new();
        for (m, p) in self.f.terms() {
            // Fixed blocks contribute the scalar m(h); kept blocks keep their
            // lambda components.
            let mut factor = S::one();
            for (&j, h) in fixed {
                let sub = Exponential::new(m.lambda()[(j - 1) * d..j * d].to_vec()).expect("nonzero");
                factor = factor * sub.eval(h)?;
            }
            let lambda: Vec<S> =
                kept.iter().flat_map(|&j| m.lambda()[(j - 1) * d..j * d].iter().cloned()).collect();
            let m_new = Exponential::new(lambda).expect("nonzero");
            raw.push((m_new, p.substitute(&images).scale(&factor)));
        }
        Ok(MultiExpPoly {
            blocks: new_blocks,
            block_dim: d,
            f: canonicalize(new_nd, raw).expect("dimensions consistent"),
        })
    }

    /// Adds one block and substitutes `x_src -> x_src + x_{n+1}` — the padding
    /// step that keeps a decomposition valid when a variable is appended.
    pub fn extend_block(&self, src: usize) -> Self {
        assert!((1..=self.blocks).contains(&src));
        let d = self.block_dim;
        let old_nd = self.blocks * d;
        let new_blocks = self.blocks + 1;
        let new_nd = new_blocks * d;
        let images: Vec<GenPoly<S>> = (0..old_nd)
            .map(|old| {
                let base = GenPoly::variable(new_nd, old);
                if old / d + 1 == src {
                    &base + &GenPoly::variable(new_nd, self.blocks * d + old % d)
                } else {
                    base
                }
            })
            .collect();
        let mut raw = Vec::new();
        for (m, p) in self.f.terms() {
            let mut lambda: Vec<S> = m.lambda().to_vec();
            lambda.extend(m.lambda()[(src - 1) * d..src * d].iter().cloned());
            raw.push((Exponential::new(lambda).expect("nonzero"), p.substitute(&images)));
        }
        MultiExpPoly {
            blocks: new_blocks,
            block_dim: d,
            f: canonicalize(new_nd, raw).expect("dimensions consistent"),
        }
    }
}

impl<S: ExactField> fmt::Display for MultiExpPoly<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.f)
    }
}

impl<S: ExactField> fmt::Debug for MultiExpPoly<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn exp2() -> Exponential<Scalar> {
        Exponential::new(vec![Scalar::from_int(2)]).unwrap()
    }

    #[test]
    fn expand_sum_matches_pointwise() {
        // f = x * 2^x over Z, expanded over 3 blocks.
        let f = ExpPoly::term(exp2(), GenPoly::variable(1, 0)).unwrap();
        let big = MultiExpPoly::expand_sum(&f, 3);
        for (a, b, c) in [(0i64, 1, 2), (-1, 3, 0), (2, 2, -2)] {
            let expect = f.evaluate(&GroupElem(vec![a + b + c])).unwrap();
            let got = big
                .evaluate(&[GroupElem(vec![a]), GroupElem(vec![b]), GroupElem(vec![c])])
                .unwrap();
            assert_eq!(got, expect);
        }
    }

    #[test]
    fn dependence_detection() {
        let f = ExpPoly::term(exp2(), GenPoly::variable(1, 0)).unwrap();
        let in_block2 = MultiExpPoly::from_block(3, 2, &f);
        assert!(!in_block2.depends_on(1));
        assert!(in_block2.depends_on(2));
        assert!(!in_block2.depends_on(3));
        assert_eq!(in_block2.dependence_set().into_iter().collect::<Vec<_>>(), vec![2]);
    }

    #[test]
    fn restrict_fixes_blocks_and_renumbers() {
        let f = ExpPoly::term(exp2(), GenPoly::variable(1, 0)).unwrap();
        let big = MultiExpPoly::expand_sum(&f, 3);
        let mut fixed = std::collections::BTreeMap::new();
        fixed.insert(3usize, GroupElem(vec![2]));
        let small = big.restrict(&fixed).unwrap();
        assert_eq!(small.blocks(), 2);
        for (a, b) in [(0i64, 1), (-1, 2), (3, -2)] {
            let expect = big
                .evaluate(&[GroupElem(vec![a]), GroupElem(vec![b]), GroupElem(vec![2])])
                .unwrap();
            let got = small.evaluate(&[GroupElem(vec![a]), GroupElem(vec![b])]).unwrap();
            assert_eq!(got, expect);
        }
    }

    #[test]
    fn extend_block_pads() {
        let f = ExpPoly::term(exp2(), GenPoly::variable(1, 0)).unwrap();
        let two = MultiExpPoly::expand_sum(&f, 2);
        let three = two.extend_block(2);
        assert_eq!(three.blocks(), 3);
        let expect = MultiExpPoly::expand_sum(&f, 3);
        assert_eq!(three, expect);
    }

    #[test]
    fn as_constant_detects_constants() {
        let c = MultiExpPoly::new(2, 1, ExpPoly::constant(2, Scalar::ratio(3, 2))).unwrap();
        assert_eq!(c.as_constant(), Some(Scalar::ratio(3, 2)));
        let f = ExpPoly::term(exp2(), GenPoly::variable(1, 0)).unwrap();
        assert_eq!(MultiExpPoly::from_block(2, 1, &f).as_constant(), None);
    }
}
