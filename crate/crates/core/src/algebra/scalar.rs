//! Exact scalars: the coefficient field `Q(i)` and the [`ExactField`] trait.

use std::cmp::Ordering;
use std::fmt;
use std::hash::Hash;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_complex::Complex;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Arbitrary-precision rational, always stored reduced with positive denominator.
pub type Rat = BigRational;

/// An exact field usable as the coefficient domain of every symbolic type in
/// this crate. Equality must be decidable and structural; all operations are
/// exact. `canonical_cmp` is a total order used only to fix serialization and
/// pivoting — it carries no arithmetic meaning.
pub trait ExactField:
    Clone
    + Eq
    + Hash
    + fmt::Debug
    + fmt::Display
    + Zero
    + One
    + Neg<Output = Self>
    + Sub<Output = Self>
{
    fn from_i64(n: i64) -> Self;

    /// Multiplicative inverse; `None` for zero.
    fn inv(&self) -> Option<Self>;

    /// Deterministic total order on the raw representation.
    fn canonical_cmp(&self, other: &Self) -> Ordering;

    /// Integer power, with negative exponents through `inv`. `None` only when
    /// `self` is zero and `e < 0`.
    fn powi(&self, e: i64) -> Option<Self> {
        let base = if e < 0 { self.inv()? } else { self.clone() };
        let mut acc = Self::one();
        let mut sq = base;
        let mut k = e.unsigned_abs();
        while k > 0 {
            if k & 1 == 1 {
                acc = acc * sq.clone();
            }
            k >>= 1;
            if k > 0 {
                sq = sq.clone() * sq;
            }
        }
        Some(acc)
    }
}

/// Gaussian rational `a + bi` with exact rational parts: the concrete scalar
/// for the whole crate.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Scalar(Complex<Rat>);

impl Scalar {
    pub fn new(re: Rat, im: Rat) -> Self {
        Scalar(Complex::new(re, im))
    }

    pub fn from_rat(re: Rat) -> Self {
        Scalar(Complex::new(re, Rat::zero()))
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_rat(Rat::from_integer(BigInt::from(n)))
    }

    /// `p/q` as a real scalar. Panics if `q == 0`.
    pub fn ratio(p: i64, q: i64) -> Self {
        Self::from_rat(Rat::new(BigInt::from(p), BigInt::from(q)))
    }

    /// The imaginary unit.
    pub fn i() -> Self {
        Scalar(Complex::new(Rat::zero(), Rat::one()))
    }

    pub fn re(&self) -> &Rat {
        &self.0.re
    }

    pub fn im(&self) -> &Rat {
        &self.0.im
    }

    pub fn is_real(&self) -> bool {
        self.0.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        Scalar(self.0.conj())
    }

    /// `re^2 + im^2` as a rational.
    pub fn norm_sqr(&self) -> Rat {
        self.0.norm_sqr()
    }

    /// Exact square root within `Q(i)`, if one exists. Of the two square
    /// roots, returns the canonical one (non-negative real part; positive
    /// imaginary part when the real part vanishes).
    pub fn sqrt_exact(&self) -> Option<Self> {
        if self.is_zero() {
            return Some(Self::zero());
        }
        // (u + vi)^2 = a + bi  =>  u^2 = (a + |z|)/2,  v = b/(2u)  (u != 0),
        // with |z| = sqrt(a^2 + b^2) required rational.
        let norm = rat_sqrt(&self.norm_sqr())?;
        let a = self.re().clone();
        let b = self.im().clone();
        let two = Rat::from_integer(BigInt::from(2));
        let u2 = (a.clone() + norm.clone()) / two.clone();
        let candidate = match rat_sqrt(&u2) {
            Some(u) if !u.is_zero() => Scalar::new(u.clone(), b / (two * u)),
            // Real part of the root vanishes: root = sqrt((|z| - a)/2) * i.
            _ => Scalar::new(Rat::zero(), rat_sqrt(&((norm - a) / two))?),
        };
        if candidate.clone() * candidate.clone() == *self {
            Some(candidate)
        } else {
            None
        }
    }
}

/// Exact square root of a non-negative rational, if it is a perfect square.
fn rat_sqrt(r: &Rat) -> Option<Rat> {
    if r.is_negative() {
        return None;
    }
    let n = r.numer().sqrt();
    let d = r.denom().sqrt();
    if &(&n * &n) == r.numer() && &(&d * &d) == r.denom() {
        Some(Rat::new(n, d))
    } else {
        None
    }
}

impl ExactField for Scalar {
    fn from_i64(n: i64) -> Self {
        Scalar::from_int(n)
    }

    fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            None
        } else {
            Some(Scalar(self.0.inv()))
        }
    }

    fn canonical_cmp(&self, other: &Self) -> Ordering {
        rat_key_cmp(self.re(), other.re()).then_with(|| rat_key_cmp(self.im(), other.im()))
    }
}

/// Lexicographic on (numerator, denominator); total since the stored form is
/// unique.
fn rat_key_cmp(a: &Rat, b: &Rat) -> Ordering {
    a.numer().cmp(b.numer()).then_with(|| a.denom().cmp(b.denom()))
}

impl ExactField for Rat {
    fn from_i64(n: i64) -> Self {
        Rat::from_integer(BigInt::from(n))
    }

    fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            None
        } else {
            Some(Rat::one() / self)
        }
    }

    fn canonical_cmp(&self, other: &Self) -> Ordering {
        rat_key_cmp(self, other)
    }
}

impl Zero for Scalar {
    fn zero() -> Self {
        Scalar(Complex::new(Rat::zero(), Rat::zero()))
    }

    fn is_zero(&self) -> bool {
        self.0.re.is_zero() && self.0.im.is_zero()
    }
}

impl One for Scalar {
    fn one() -> Self {
        Scalar(Complex::new(Rat::one(), Rat::zero()))
    }

    fn is_one(&self) -> bool {
        self.0.re.is_one() && self.0.im.is_zero()
    }
}

impl Add for Scalar {
    type Output = Scalar;
    fn add(self, rhs: Scalar) -> Scalar {
        Scalar(self.0 + rhs.0)
    }
}

impl Sub for Scalar {
    type Output = Scalar;
    fn sub(self, rhs: Scalar) -> Scalar {
        Scalar(self.0 - rhs.0)
    }
}

impl Mul for Scalar {
    type Output = Scalar;
    fn mul(self, rhs: Scalar) -> Scalar {
        Scalar(self.0 * rhs.0)
    }
}

/// Exact division. Panics on a zero divisor; use [`ExactField::inv`] when the
/// divisor may vanish.
impl Div for Scalar {
    type Output = Scalar;
    fn div(self, rhs: Scalar) -> Scalar {
        assert!(!rhs.is_zero(), "division by zero scalar");
        Scalar(self.0 / rhs.0)
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar(-self.0)
    }
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Scalar({self})")
    }
}

fn fmt_rat(r: &Rat) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Imaginary part rendered as `i`, `-i`, `2i`, `-2/3i`, ...
fn fmt_imag(b: &Rat) -> String {
    if b.is_one() {
        "i".to_string()
    } else if (-b.clone()).is_one() {
        "-i".to_string()
    } else {
        format!("{}i", fmt_rat(b))
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (a, b) = (self.re(), self.im());
        if b.is_zero() {
            return write!(f, "{}", fmt_rat(a));
        }
        if a.is_zero() {
            return write!(f, "{}", fmt_imag(b));
        }
        if b.is_negative() {
            write!(f, "{}-{}", fmt_rat(a), fmt_imag(&-b.clone()).trim_start_matches('-'))
        } else {
            write!(f, "{}+{}", fmt_rat(a), fmt_imag(b))
        }
    }
}

impl FromStr for Scalar {
    type Err = Error;

    /// Accepts `a`, `a/b`, `bi`, `i`, `-i`, `a+bi`, `a-bi` with rational parts.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.is_empty() {
            return Err(Error::Parse { pos: 0, msg: "empty scalar".into() });
        }
        let parse_rat = |txt: &str, pos: usize| -> Result<Rat> {
            Rat::from_str(txt.trim())
                .map_err(|e| Error::Parse { pos, msg: format!("bad rational `{txt}`: {e}") })
        };
        let parse_imag_coeff = |txt: &str, pos: usize| -> Result<Rat> {
            let txt = txt.trim();
            match txt {
                "" | "+" => Ok(Rat::one()),
                "-" => Ok(-Rat::one()),
                _ => parse_rat(txt, pos),
            }
        };
        if let Some(body) = s.strip_suffix('i') {
            // Split off a trailing imaginary part at the last top-level sign.
            let split = body
                .char_indices()
                .rev()
                .find(|&(k, c)| (c == '+' || c == '-') && k > 0 && !body[..k].ends_with('/'))
                .map(|(k, _)| k);
            return match split {
                Some(k) => {
                    let re = parse_rat(&body[..k], 0)?;
                    let sign = if body[k..].starts_with('-') { -Rat::one() } else { Rat::one() };
                    let im = parse_imag_coeff(&body[k + 1..], k + 1)?;
                    Ok(Scalar::new(re, sign * im))
                }
                None => Ok(Scalar::new(Rat::zero(), parse_imag_coeff(body, 0)?)),
            };
        }
        Ok(Scalar::from_rat(parse_rat(s, 0)?))
    }
}

impl Serialize for Scalar {
    fn serialize<Ser: Serializer>(&self, serializer: Ser) -> std::result::Result<Ser::Ok, Ser::Error> {
        use serde::ser::SerializeStruct;
        let mut st = serializer.serialize_struct("Scalar", 2)?;
        st.serialize_field("re", &fmt_rat(self.re()))?;
        st.serialize_field("im", &fmt_rat(self.im()))?;
        st.end()
    }
}

impl<'de> Deserialize<'de> for Scalar {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Repr {
            re: String,
            im: String,
        }
        let repr = Repr::deserialize(deserializer)?;
        let re = Rat::from_str(&repr.re).map_err(|e| D::Error::custom(format!("re: {e}")))?;
        let im = Rat::from_str(&repr.im).map_err(|e| D::Error::custom(format!("im: {e}")))?;
        Ok(Scalar::new(re, im))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(txt: &str) -> Scalar {
        txt.parse().unwrap()
    }

    #[test]
    fn field_ops_are_exact() {
        let a = s("3/2-1/3i");
        let b = s("-2+i");
        assert_eq!(a.clone() + b.clone() - b.clone(), a);
        let prod = a.clone() * b.clone();
        assert_eq!(prod / b.clone(), a);
        assert_eq!(b.clone() * b.inv().unwrap(), Scalar::one());
    }

    #[test]
    fn stored_reduced_with_positive_denominator() {
        let x = Scalar::ratio(4, -6);
        assert_eq!(x, Scalar::ratio(-2, 3));
        assert_eq!(x.re().denom(), &BigInt::from(3));
    }

    #[test]
    fn display_round_trips() {
        for txt in ["0", "5", "-7/3", "i", "-i", "2i", "-2/3i", "1+i", "3/2-1/3i", "-1-2i"] {
            let v = s(txt);
            assert_eq!(format!("{v}"), txt);
            assert_eq!(s(&format!("{v}")), v);
        }
    }

    #[test]
    fn powi_handles_negative_exponents() {
        let two = Scalar::from_int(2);
        assert_eq!(two.powi(-2).unwrap(), Scalar::ratio(1, 4));
        assert_eq!(Scalar::i().powi(2).unwrap(), Scalar::from_int(-1));
        assert!(Scalar::zero().powi(-1).is_none());
    }

    #[test]
    fn canonical_order_is_total_on_samples() {
        let mut vals: Vec<Scalar> = ["1", "2", "1/2", "-1", "i", "1+i"].iter().map(|t| s(t)).collect();
        vals.sort_by(|x, y| x.canonical_cmp(y));
        for w in vals.windows(2) {
            assert_ne!(w[0].canonical_cmp(&w[1]), Ordering::Greater);
        }
    }

    #[test]
    fn sqrt_exact_finds_gaussian_roots() {
        let z = s("3+4i");
        let r = z.sqrt_exact().unwrap();
        assert_eq!(r.clone() * r, z);
        assert_eq!(s("-4").sqrt_exact().unwrap(), s("2i"));
        assert_eq!(s("9/4").sqrt_exact().unwrap(), s("3/2"));
        assert!(s("2").sqrt_exact().is_none());
        assert!(s("i").sqrt_exact().is_none());
    }

    #[test]
    fn json_matches_schema() {
        let v = s("3/2-1/3i");
        let js = serde_json::to_string(&v).unwrap();
        assert_eq!(js, r#"{"re":"3/2","im":"-1/3"}"#);
        let back: Scalar = serde_json::from_str(&js).unwrap();
        assert_eq!(back, v);
    }
}
