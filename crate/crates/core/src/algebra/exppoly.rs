//! The canonical form `f = Σ p_i · m_i` with distinct exponentials `m_i` and
//! nonzero polynomials `p_i`, together with its degree, spectrum, translation
//! action, and the generic-combination construction.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::de::Error as _;
use serde::ser::{SerializeMap, SerializeSeq, SerializeStruct};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::exponential::Exponential;
use super::genpoly::{GenPoly, Monomial};
use super::group::GroupElem;
use super::scalar::{ExactField, Scalar};
use crate::error::{Error, Result};

/// A generalized exponential polynomial on `Z^d` in canonical form: the terms
/// are keyed by exponential (so exponentials are pairwise distinct and sorted
/// by the fixed canonical order) and every stored polynomial is nonzero.
/// Structural equality therefore decides equality of functions.
#[derive(Clone, PartialEq, Eq)]
pub struct ExpPoly<S: ExactField = Scalar> {
    dim: usize,
    terms: BTreeMap<Exponential<S>, GenPoly<S>>,
}

/// Merges duplicate exponentials by polynomial addition and drops zero
/// polynomials. Every exponential must match the ambient dimension.
pub fn canonicalize<S: ExactField>(
    dim: usize,
    raw: impl IntoIterator<Item = (Exponential<S>, GenPoly<S>)>,
) -> Result<ExpPoly<S>> {
    let mut out = ExpPoly::zero(dim);
    for (m, p) in raw {
        out.accumulate(m, p)?;
    }
    Ok(out)
}

impl<S: ExactField> ExpPoly<S> {
    pub fn zero(dim: usize) -> Self {
        ExpPoly { dim, terms: BTreeMap::new() }
    }

    pub fn constant(dim: usize, c: S) -> Self {
        let mut f = Self::zero(dim);
        f.accumulate(Exponential::identity(dim), GenPoly::constant(dim, c)).unwrap();
        f
    }

    pub fn one(dim: usize) -> Self {
        Self::constant(dim, S::one())
    }

    /// `1 · m`.
    pub fn exponential(m: Exponential<S>) -> Self {
        let d = m.dim();
        let mut f = Self::zero(d);
        f.accumulate(m, GenPoly::one(d)).unwrap();
        f
    }

    /// `p · 1`.
    pub fn polynomial(p: GenPoly<S>) -> Self {
        let d = p.nvars();
        let mut f = Self::zero(d);
        f.accumulate(Exponential::identity(d), p).unwrap();
        f
    }

    /// `p · m`.
    pub fn term(m: Exponential<S>, p: GenPoly<S>) -> Result<Self> {
        let mut f = Self::zero(m.dim());
        f.accumulate(m, p)?;
        f.check_poly_arity()?;
        Ok(f)
    }

    fn check_poly_arity(&self) -> Result<()> {
        for p in self.terms.values() {
            if p.nvars() != self.dim {
                return Err(Error::DimMismatch { expected: self.dim, got: p.nvars() });
            }
        }
        Ok(())
    }

    fn accumulate(&mut self, m: Exponential<S>, p: GenPoly<S>) -> Result<()> {
        if m.dim() != self.dim {
            return Err(Error::DimMismatch { expected: self.dim, got: m.dim() });
        }
        if p.nvars() != self.dim {
            return Err(Error::DimMismatch { expected: self.dim, got: p.nvars() });
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                if !p.is_zero() {
                    e.insert(p);
                }
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let sum = &*e.get() + &p;
                if sum.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exponential<S>, &GenPoly<S>)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// The polynomial attached to `m`, if `m` is in the spectrum.
    pub fn component(&self, m: &Exponential<S>) -> Option<&GenPoly<S>> {
        self.terms.get(m)
    }

    /// The set of exponentials with nonzero polynomial part, in canonical
    /// order. Empty for the zero function.
    pub fn spectrum(&self) -> Vec<Exponential<S>> {
        self.terms.keys().cloned().collect()
    }

    pub fn has_identity_in_spectrum(&self) -> bool {
        self.terms.contains_key(&Exponential::identity(self.dim))
    }

    /// `Σ (1 + deg p_i)`, minus one when the identity exponential occurs;
    /// `-1` for the zero function.
    pub fn degree(&self) -> i64 {
        if self.is_zero() {
            return -1;
        }
        let sum: i64 = self.terms.values().map(|p| 1 + p.degree()).sum();
        if self.has_identity_in_spectrum() {
            sum - 1
        } else {
            sum
        }
    }

    /// Largest polynomial degree among the terms; the threshold `n_0` of the
    /// sum decomposition.
    pub fn max_poly_degree(&self) -> i64 {
        self.terms.values().map(|p| p.degree()).max().unwrap_or(-1)
    }

    pub fn evaluate(&self, x: &GroupElem) -> Result<S> {
        if x.dim() != self.dim {
            return Err(Error::DimMismatch { expected: self.dim, got: x.dim() });
        }
        let mut acc = S::zero();
        for (m, p) in &self.terms {
            acc = acc + p.eval(x)? * m.eval(x)?;
        }
        Ok(acc)
    }

    /// The translate `x -> f(x + h)`. Spectrum and degree are preserved:
    /// each term becomes `m(h) · p(x+h) · m(x)`.
    pub fn translate(&self, h: &GroupElem) -> Result<Self> {
        if h.dim() != self.dim {
            return Err(Error::DimMismatch { expected: self.dim, got: h.dim() });
        }
        let mut out = Self::zero(self.dim);
        for (m, p) in &self.terms {
            let factor = m.eval(h)?;
            out.accumulate(m.clone(), p.shift(h)?.scale(&factor))?;
        }
        Ok(out)
    }

    pub fn scale(&self, c: &S) -> Self {
        if c.is_zero() {
            return Self::zero(self.dim);
        }
        ExpPoly {
            dim: self.dim,
            terms: self.terms.iter().map(|(m, p)| (m.clone(), p.scale(c))).collect(),
        }
    }

    pub fn add(&self, rhs: &Self) -> Result<Self> {
        if rhs.dim != self.dim {
            return Err(Error::DimMismatch { expected: self.dim, got: rhs.dim });
        }
        let mut out = self.clone();
        for (m, p) in &rhs.terms {
            out.accumulate(m.clone(), p.clone())?;
        }
        Ok(out)
    }

    pub fn sub(&self, rhs: &Self) -> Result<Self> {
        self.add(&rhs.neg())
    }

    pub fn neg(&self) -> Self {
        ExpPoly {
            dim: self.dim,
            terms: self.terms.iter().map(|(m, p)| (m.clone(), -p)).collect(),
        }
    }

    /// Ring product: `(p·m)(q·μ) = (pq)·(mμ)`, re-canonicalized.
    pub fn mul(&self, rhs: &Self) -> Result<Self> {
        if rhs.dim != self.dim {
            return Err(Error::DimMismatch { expected: self.dim, got: rhs.dim });
        }
        let mut out = Self::zero(self.dim);
        for (ma, pa) in &self.terms {
            for (mb, pb) in &rhs.terms {
                out.accumulate(ma.mul(mb)?, pa * pb)?;
            }
        }
        Ok(out)
    }

    /// Coordinates of `f` in the monomial-times-exponential basis, used for
    /// exact linear algebra over spaces of these functions.
    pub fn coordinates(&self) -> Vec<((Exponential<S>, Monomial), S)> {
        let mut out = Vec::new();
        for (m, p) in &self.terms {
            for (mono, c) in p.terms() {
                out.push(((m.clone(), mono.clone()), c.clone()));
            }
        }
        out
    }
}

/// A generic linear combination in the span of `fs`: returns coefficients
/// `c` and `f0 = Σ c_j f_j` such that the spectrum of `f0` is the union of
/// the spectra and, for each exponential in the union, the component of `f0`
/// attains the maximal degree present among the inputs.
///
/// Tries the all-ones combination first, then draws integer coefficients
/// uniformly from `{-B..B} \ {0}` with `B` starting at 2 and doubling on each
/// failed round. Only finitely many proper subspaces must be avoided, so this
/// terminates almost surely.
pub fn generic_combination<S: ExactField>(
    fs: &[ExpPoly<S>],
    rng_seed: u64,
) -> Result<(Vec<S>, ExpPoly<S>)> {
    if fs.is_empty() || fs.iter().all(|f| f.is_zero()) {
        return Err(Error::Invalid("generic_combination needs a not-all-zero input list".into()));
    }
    let dim = fs[0].dim();
    for f in fs {
        if f.dim() != dim {
            return Err(Error::DimMismatch { expected: dim, got: f.dim() });
        }
    }

    // Target profile: union spectrum with, per exponential, the max degree.
    let mut targets: BTreeMap<Exponential<S>, i64> = BTreeMap::new();
    for f in fs {
        for (m, p) in f.terms() {
            let e = targets.entry(m.clone()).or_insert(-1);
            *e = (*e).max(p.degree());
        }
    }

    let accepts = |f0: &ExpPoly<S>| {
        targets.iter().all(|(m, &deg)| f0.component(m).is_some_and(|p| p.degree() == deg))
    };

    let combine = |coeffs: &[S]| -> Result<ExpPoly<S>> {
        let mut f0 = ExpPoly::zero(dim);
        for (c, f) in coeffs.iter().zip(fs) {
            f0 = f0.add(&f.scale(c))?;
        }
        Ok(f0)
    };

    let ones = vec![S::one(); fs.len()];
    let f0 = combine(&ones)?;
    if accepts(&f0) {
        return Ok((ones, f0));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(rng_seed);
    let mut bound: i64 = 2;
    for _ in 0..64 {
        for _ in 0..8 {
            let coeffs: Vec<S> = (0..fs.len())
                .map(|_| {
                    let mut v = 0i64;
                    while v == 0 {
                        v = rng.gen_range(-bound..=bound);
                    }
                    S::from_i64(v)
                })
                .collect();
            let f0 = combine(&coeffs)?;
            if accepts(&f0) {
                return Ok((coeffs, f0));
            }
        }
        bound *= 2;
    }
    Err(Error::Invalid("generic_combination failed to avoid the degenerate subspaces".into()))
}

impl<S: ExactField> fmt::Display for ExpPoly<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, p) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match (m.is_identity(), p.num_terms() == 1 && p.degree() == 0) {
                (true, _) => write!(f, "{p}")?,
                (false, true) => {
                    if p.constant_term().is_one() {
                        write!(f, "{m}")?;
                    } else {
                        write!(f, "( {p} ) * {m}")?;
                    }
                }
                (false, false) => write!(f, "( {p} ) * {m}")?,
            }
        }
        Ok(())
    }
}

impl<S: ExactField> fmt::Debug for ExpPoly<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

// JSON shape:
// { "d": int, "terms": [ { "lambda": [scalar...],
//                          "poly": [ { "exps": [int...], "coef": scalar } ] } ] }
impl<S: ExactField + Serialize> Serialize for ExpPoly<S> {
    fn serialize<Ser: Serializer>(&self, serializer: Ser) -> std::result::Result<Ser::Ok, Ser::Error> {
        struct PolyRepr<'a, S: ExactField>(&'a GenPoly<S>);
        struct MonoRepr<'a, S: ExactField>(&'a Monomial, &'a S);
        struct TermRepr<'a, S: ExactField>(&'a Exponential<S>, &'a GenPoly<S>);
        struct TermsRepr<'a, S: ExactField>(&'a ExpPoly<S>);

        impl<S: ExactField + Serialize> Serialize for MonoRepr<'_, S> {
            fn serialize<Ser: Serializer>(&self, s: Ser) -> std::result::Result<Ser::Ok, Ser::Error> {
                let mut st = s.serialize_map(Some(2))?;
                st.serialize_entry("exps", self.0)?;
                st.serialize_entry("coef", self.1)?;
                st.end()
            }
        }
        impl<S: ExactField + Serialize> Serialize for PolyRepr<'_, S> {
            fn serialize<Ser: Serializer>(&self, s: Ser) -> std::result::Result<Ser::Ok, Ser::Error> {
                let mut seq = s.serialize_seq(Some(self.0.num_terms()))?;
                for (mono, c) in self.0.terms() {
                    seq.serialize_element(&MonoRepr(mono, c))?;
                }
                seq.end()
            }
        }
        impl<S: ExactField + Serialize> Serialize for TermRepr<'_, S> {
            fn serialize<Ser: Serializer>(&self, s: Ser) -> std::result::Result<Ser::Ok, Ser::Error> {
                let mut st = s.serialize_map(Some(2))?;
                st.serialize_entry("lambda", self.0)?;
                st.serialize_entry("poly", &PolyRepr(self.1))?;
                st.end()
            }
        }
        impl<S: ExactField + Serialize> Serialize for TermsRepr<'_, S> {
            fn serialize<Ser: Serializer>(&self, s: Ser) -> std::result::Result<Ser::Ok, Ser::Error> {
                let mut seq = s.serialize_seq(Some(self.0.num_terms()))?;
                for (m, p) in self.0.terms() {
                    seq.serialize_element(&TermRepr(m, p))?;
                }
                seq.end()
            }
        }

        let mut st = serializer.serialize_struct("ExpPoly", 2)?;
        st.serialize_field("d", &self.dim)?;
        st.serialize_field("terms", &TermsRepr(self))?;
        st.end()
    }
}

impl<'de> Deserialize<'de> for ExpPoly<Scalar> {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct MonoRepr {
            exps: Vec<u32>,
            coef: Scalar,
        }
        #[derive(Deserialize)]
        struct TermRepr {
            lambda: Vec<Scalar>,
            poly: Vec<MonoRepr>,
        }
        #[derive(Deserialize)]
        struct Repr {
            d: usize,
            terms: Vec<TermRepr>,
        }
        let repr = Repr::deserialize(deserializer)?;
        let mut raw = Vec::new();
        for t in repr.terms {
            let m = Exponential::new(t.lambda).map_err(D::Error::custom)?;
            let mut p = GenPoly::zero(repr.d);
            for mono in t.poly {
                if mono.exps.len() != repr.d {
                    return Err(D::Error::custom("monomial arity must equal d"));
                }
                p.add_term(mono.exps, mono.coef);
            }
            raw.push((m, p));
        }
        canonicalize(repr.d, raw).map_err(D::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn exp2() -> Exponential<Scalar> {
        Exponential::new(vec![Scalar::from_int(2)]).unwrap()
    }

    fn exp3() -> Exponential<Scalar> {
        Exponential::new(vec![Scalar::from_int(3)]).unwrap()
    }

    fn xpoly() -> GenPoly<Scalar> {
        GenPoly::variable(1, 0)
    }

    fn ge(v: &[i64]) -> GroupElem {
        GroupElem(v.to_vec())
    }

    #[test]
    fn canonicalize_merges_duplicates() {
        // [(2^x, 3), (2^x, -1)] -> 2 * 2^x
        let f = canonicalize(
            1,
            vec![
                (exp2(), GenPoly::constant(1, Scalar::from_int(3))),
                (exp2(), GenPoly::constant(1, Scalar::from_int(-1))),
            ],
        )
        .unwrap();
        assert_eq!(f, ExpPoly::term(exp2(), GenPoly::constant(1, Scalar::from_int(2))).unwrap());
    }

    #[test]
    fn canonicalize_drops_zero_polynomials() {
        let f = canonicalize::<Scalar>(1, vec![(Exponential::identity(1), GenPoly::zero(1))]).unwrap();
        assert!(f.is_zero());
        assert_eq!(f.degree(), -1);
    }

    #[test]
    fn canonicalize_cancellation_checked_pointwise() {
        // [(2^x, x), (3^x, 1), (2^x, -x)] -> 1 * 3^x; oracle: evaluation on -3..=3.
        let raw = vec![(exp2(), xpoly()), (exp3(), GenPoly::one(1)), (exp2(), -&xpoly())];
        let f = canonicalize(1, raw.clone()).unwrap();
        assert_eq!(f, ExpPoly::exponential(exp3()));
        for x in -3..=3 {
            let direct: Scalar = raw
                .iter()
                .map(|(m, p)| p.eval(&ge(&[x])).unwrap() * m.eval(&ge(&[x])).unwrap())
                .fold(Scalar::zero(), |a, b| a + b);
            assert_eq!(direct, f.evaluate(&ge(&[x])).unwrap());
        }
    }

    #[test]
    fn degree_formula() {
        // deg 0 = -1
        assert_eq!(ExpPoly::<Scalar>::zero(1).degree(), -1);
        // f = x with m = 1: -1 + (1+1) = 1
        assert_eq!(ExpPoly::polynomial(xpoly()).degree(), 1);
        // f = x^2*2^x + x: (1+2) + (-1+1+1) = 4
        let f = ExpPoly::term(exp2(), xpoly().pow(2))
            .unwrap()
            .add(&ExpPoly::polynomial(xpoly()))
            .unwrap();
        assert_eq!(f.degree(), 4);
        // q = t1^2 + t2^2 has degree 2
        let q = ExpPoly::polynomial(
            &GenPoly::<Scalar>::variable(2, 0).pow(2) + &GenPoly::variable(2, 1).pow(2),
        );
        assert_eq!(q.degree(), 2);
    }

    #[test]
    fn evaluate_examples() {
        let f = ExpPoly::exponential(exp2());
        assert_eq!(f.evaluate(&ge(&[3])).unwrap(), Scalar::from_int(8));
        let g = ExpPoly::term(exp2(), xpoly()).unwrap();
        assert_eq!(g.evaluate(&ge(&[-2])).unwrap(), Scalar::ratio(-1, 2));
        let q = ExpPoly::polynomial(
            &GenPoly::<Scalar>::variable(2, 0).pow(2) + &GenPoly::variable(2, 1).pow(2),
        );
        assert_eq!(q.evaluate(&ge(&[1, 2])).unwrap(), Scalar::from_int(5));
    }

    #[test]
    fn translate_examples() {
        // x^2 shifted by 1 -> x^2 + 2x + 1
        let f = ExpPoly::polynomial(xpoly().pow(2));
        let g = f.translate(&ge(&[1])).unwrap();
        let expected = ExpPoly::polynomial(GenPoly::from_terms(
            1,
            vec![
                (vec![2], Scalar::from_int(1)),
                (vec![1], Scalar::from_int(2)),
                (vec![0], Scalar::from_int(1)),
            ],
        ));
        assert_eq!(g, expected);

        // 2^x shifted by 2 -> 4 * 2^x
        let f = ExpPoly::exponential(exp2());
        let g = f.translate(&ge(&[2])).unwrap();
        assert_eq!(g, f.scale(&Scalar::from_int(4)));

        // x*2^x shifted by 1, oracle: pointwise on 0..=5
        let f = ExpPoly::term(exp2(), xpoly()).unwrap();
        let g = f.translate(&ge(&[1])).unwrap();
        for x in 0..=5 {
            assert_eq!(g.evaluate(&ge(&[x])).unwrap(), f.evaluate(&ge(&[x + 1])).unwrap());
        }
        assert_eq!(g.spectrum(), f.spectrum());
        assert_eq!(g.degree(), f.degree());
    }

    #[test]
    fn spectrum_examples() {
        assert!(ExpPoly::<Scalar>::zero(1).spectrum().is_empty());
        let f = ExpPoly::polynomial(xpoly()).add(&ExpPoly::exponential(exp2())).unwrap();
        assert_eq!(f.spectrum(), vec![Exponential::identity(1), exp2()]);
        let g = ExpPoly::exponential(exp2())
            .scale(&Scalar::from_int(3))
            .sub(&ExpPoly::exponential(exp2()))
            .unwrap();
        assert_eq!(g.spectrum(), vec![exp2()]);
    }

    #[test]
    fn generic_combination_no_cancellation() {
        let fs = vec![ExpPoly::exponential(exp2()), ExpPoly::exponential(exp3())];
        let (c, f0) = generic_combination(&fs, 0).unwrap();
        assert_eq!(c, vec![Scalar::one(), Scalar::one()]);
        assert_eq!(f0.spectrum().len(), 2);
    }

    #[test]
    fn generic_combination_top_degree_retained() {
        // [x, -x + x^2]: accepted iff c2 != 0; oracle: exhaustive over c in {-2..2}^2.
        let f1 = ExpPoly::polynomial(xpoly());
        let f2 = ExpPoly::polynomial(&xpoly().pow(2) - &xpoly());
        let fs = vec![f1.clone(), f2.clone()];
        let (c, f0) = generic_combination(&fs, 7).unwrap();
        assert!(!c[1].is_zero());
        assert_eq!(f0.degree(), 2);
        for c1 in -2i64..=2 {
            for c2 in -2i64..=2 {
                let comb = f1
                    .scale(&Scalar::from_int(c1))
                    .add(&f2.scale(&Scalar::from_int(c2)))
                    .unwrap();
                let ok = comb
                    .component(&Exponential::identity(1))
                    .is_some_and(|p| p.degree() == 2);
                assert_eq!(ok, c2 != 0, "c = ({c1},{c2})");
            }
        }
    }

    #[test]
    fn generic_combination_singleton_is_identity() {
        let f = ExpPoly::term(exp2(), xpoly()).unwrap();
        let (c, f0) = generic_combination(&[f.clone()], 0).unwrap();
        assert_eq!(c, vec![Scalar::one()]);
        assert_eq!(f0, f);
    }

    #[test]
    fn generic_combination_rejects_all_zero() {
        assert!(generic_combination::<Scalar>(&[ExpPoly::zero(1)], 0).is_err());
        assert!(generic_combination::<Scalar>(&[], 0).is_err());
    }

    #[test]
    fn mul_combines_exponentials() {
        let f = ExpPoly::exponential(exp2());
        let g = ExpPoly::exponential(exp3());
        let h = f.mul(&g).unwrap();
        let exp6 = Exponential::new(vec![Scalar::from_int(6)]).unwrap();
        assert_eq!(h, ExpPoly::exponential(exp6));
    }

    #[test]
    fn json_round_trip() {
        let f = ExpPoly::term(exp2(), xpoly().pow(2))
            .unwrap()
            .add(&ExpPoly::polynomial(xpoly()))
            .unwrap();
        let js = serde_json::to_string(&f).unwrap();
        let back: ExpPoly = serde_json::from_str(&js).unwrap();
        assert_eq!(back, f);
        assert!(js.starts_with(r#"{"d":1,"terms":"#));
    }
}
