//! Laurent polynomials in `v` with integer coefficients, the ring `A = Z[v, v^-1]`.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};
use std::str::FromStr;

use serde::de::{self, Deserializer, MapAccess, Visitor};
use serde::ser::{SerializeMap, Serializer};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LaurentError {
    #[error("the zero polynomial has no leading data")]
    ZeroPolynomial,
    #[error("cannot parse Laurent polynomial from {0:?}")]
    Parse(String),
}

/// Extremal exponents of a nonzero Laurent polynomial together with their coefficients.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LeadingData {
    pub degree: i32,
    pub valuation: i32,
    pub top: i64,
    pub bottom: i64,
}

/// A Laurent polynomial stored densely between its valuation and degree.
///
/// `coeffs[i]` is the coefficient of `v^(low + i)`. The first and last entries
/// are nonzero; the zero polynomial has no entries.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Laurent {
    low: i32,
    coeffs: Vec<i64>,
}

#[inline]
fn add_coeff(a: i64, b: i64) -> i64 {
    a.checked_add(b).expect("Laurent coefficient overflow")
}

#[inline]
fn mul_coeff(a: i64, b: i64) -> i64 {
    a.checked_mul(b).expect("Laurent coefficient overflow")
}

impl Laurent {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(1)
    }

    pub fn constant(c: i64) -> Self {
        Self::monomial(c, 0)
    }

    /// `c * v^exp`.
    pub fn monomial(c: i64, exp: i32) -> Self {
        if c == 0 {
            Self::zero()
        } else {
            Self { low: exp, coeffs: vec![c] }
        }
    }

    /// `v^exp`.
    pub fn v_pow(exp: i32) -> Self {
        Self::monomial(1, exp)
    }

    /// `v^k + v^-k`; equals `2` for `k = 0`.
    pub fn symmetric(k: i32) -> Self {
        Self::v_pow(k) + Self::v_pow(-k)
    }

    /// Builds from (exponent, coefficient) pairs; repeated exponents are summed.
    pub fn from_terms<I: IntoIterator<Item = (i32, i64)>>(terms: I) -> Self {
        let mut map: BTreeMap<i32, i64> = BTreeMap::new();
        for (e, c) in terms {
            let slot = map.entry(e).or_insert(0);
            *slot = add_coeff(*slot, c);
        }
        map.retain(|_, c| *c != 0);
        let (Some((&lo, _)), Some((&hi, _))) = (map.first_key_value(), map.last_key_value()) else {
            return Self::zero();
        };
        let mut coeffs = vec![0; (hi - lo + 1) as usize];
        for (e, c) in map {
            coeffs[(e - lo) as usize] = c;
        }
        Self { low: lo, coeffs }
    }

    fn normalize(&mut self) {
        let lead = self.coeffs.iter().position(|&c| c != 0);
        match lead {
            None => {
                self.coeffs.clear();
                self.low = 0;
            }
            Some(start) => {
                let end = self.coeffs.iter().rposition(|&c| c != 0).unwrap() + 1;
                if start > 0 || end < self.coeffs.len() {
                    self.coeffs.truncate(end);
                    self.coeffs.drain(..start);
                    self.low += start as i32;
                }
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.low == 0 && self.coeffs == [1]
    }

    /// `Some(c)` when the polynomial is the constant `c` (including zero).
    pub fn as_constant(&self) -> Option<i64> {
        match self.coeffs.len() {
            0 => Some(0),
            1 if self.low == 0 => Some(self.coeffs[0]),
            _ => None,
        }
    }

    pub fn coeff(&self, exp: i32) -> i64 {
        let idx = exp - self.low;
        if idx < 0 {
            return 0;
        }
        self.coeffs.get(idx as usize).copied().unwrap_or(0)
    }

    /// Nonzero terms as (exponent, coefficient), ascending by exponent.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (i32, i64)> + '_ {
        let low = self.low;
        self.coeffs.iter().enumerate().filter(|(_, &c)| c != 0).map(move |(i, &c)| (low + i as i32, c))
    }

    pub fn degree(&self) -> Option<i32> {
        (!self.is_zero()).then(|| self.low + self.coeffs.len() as i32 - 1)
    }

    pub fn valuation(&self) -> Option<i32> {
        (!self.is_zero()).then_some(self.low)
    }

    pub fn leading_data(&self) -> Result<LeadingData, LaurentError> {
        if self.is_zero() {
            return Err(LaurentError::ZeroPolynomial);
        }
        Ok(LeadingData {
            degree: self.degree().unwrap(),
            valuation: self.low,
            top: *self.coeffs.last().unwrap(),
            bottom: self.coeffs[0],
        })
    }

    /// The bar involution `v^n -> v^-n`.
    pub fn bar(&self) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut coeffs = self.coeffs.clone();
        coeffs.reverse();
        Self { low: -self.degree().unwrap(), coeffs }
    }

    /// Multiplication by `v^k`.
    pub fn shift(&self, k: i32) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        Self { low: self.low + k, coeffs: self.coeffs.clone() }
    }

    pub fn scale(&self, c: i64) -> Self {
        if c == 0 {
            return Self::zero();
        }
        Self { low: self.low, coeffs: self.coeffs.iter().map(|&a| mul_coeff(a, c)).collect() }
    }

    /// Specialization `v = 1`.
    pub fn eval_at_one(&self) -> i64 {
        self.coeffs.iter().fold(0, |acc, &c| add_coeff(acc, c))
    }

    /// Terms with exponent in the given half-open range predicate.
    fn filter_exps(&self, keep: impl Fn(i32) -> bool) -> Self {
        Self::from_terms(self.terms().filter(|&(e, _)| keep(e)))
    }

    /// Terms of strictly negative exponent.
    pub fn negative_part(&self) -> Self {
        self.filter_exps(|e| e < 0)
    }

    /// Terms of nonnegative exponent.
    pub fn nonnegative_part(&self) -> Self {
        self.filter_exps(|e| e >= 0)
    }

    /// Whether every term has exponent `< 0`, i.e. the polynomial lies in `v^-1 Z[v^-1]`.
    pub fn in_negative_ideal(&self) -> bool {
        self.degree().is_none_or(|d| d < 0)
    }

    pub fn is_bar_invariant(&self) -> bool {
        *self == self.bar()
    }

    /// `self += a * b`, the inner loop of most table computations.
    pub fn add_mul(&mut self, a: &Laurent, b: &Laurent) {
        if a.is_zero() || b.is_zero() {
            return;
        }
        let lo = a.low + b.low;
        let hi = a.degree().unwrap() + b.degree().unwrap();
        self.reserve_range(lo, hi);
        let offset = (lo - self.low) as usize;
        for (i, &x) in a.coeffs.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.coeffs.iter().enumerate() {
                let slot = &mut self.coeffs[offset + i + j];
                *slot = add_coeff(*slot, mul_coeff(x, y));
            }
        }
        self.normalize();
    }

    /// `self += c * v^k * a`.
    pub fn add_scaled_shifted(&mut self, a: &Laurent, c: i64, k: i32) {
        if a.is_zero() || c == 0 {
            return;
        }
        let lo = a.low + k;
        let hi = a.degree().unwrap() + k;
        self.reserve_range(lo, hi);
        let offset = (lo - self.low) as usize;
        for (i, &x) in a.coeffs.iter().enumerate() {
            let slot = &mut self.coeffs[offset + i];
            *slot = add_coeff(*slot, mul_coeff(x, c));
        }
        self.normalize();
    }

    fn reserve_range(&mut self, lo: i32, hi: i32) {
        if self.is_zero() {
            self.low = lo;
            self.coeffs = vec![0; (hi - lo + 1) as usize];
            return;
        }
        let cur_hi = self.degree().unwrap();
        if lo < self.low {
            let extra = (self.low - lo) as usize;
            self.coeffs.splice(0..0, std::iter::repeat_n(0, extra));
            self.low = lo;
        }
        if hi > cur_hi {
            let new_len = (hi - self.low + 1) as usize;
            self.coeffs.resize(new_len, 0);
        }
    }

    /// Canonical text form: `exp:coeff` pairs ascending by exponent, comma separated.
    /// The zero polynomial is the empty string.
    pub fn to_canonical_string(&self) -> String {
        self.terms().map(|(e, c)| format!("{e}:{c}")).collect::<Vec<_>>().join(",")
    }
}

impl FromStr for Laurent {
    type Err = LaurentError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if s.is_empty() {
            return Ok(Self::zero());
        }
        let mut terms = Vec::new();
        for part in s.split(',') {
            let (e, c) = part.split_once(':').ok_or_else(|| LaurentError::Parse(s.to_string()))?;
            let e: i32 = e.trim().parse().map_err(|_| LaurentError::Parse(s.to_string()))?;
            let c: i64 = c.trim().parse().map_err(|_| LaurentError::Parse(s.to_string()))?;
            terms.push((e, c));
        }
        Ok(Self::from_terms(terms))
    }
}

impl fmt::Display for Laurent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (e, c) in self.terms().rev() {
            let (sign, abs) = if c < 0 { ("-", -c) } else { ("+", c) };
            if first {
                if c < 0 {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            match (e, abs) {
                (0, a) => write!(f, "{a}")?,
                (1, 1) => write!(f, "v")?,
                (1, a) => write!(f, "{a}v")?,
                (e, 1) => write!(f, "v^{e}")?,
                (e, a) => write!(f, "{a}v^{e}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Laurent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Laurent({self})")
    }
}

impl PartialOrd for Laurent {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Laurent {
    fn cmp(&self, other: &Self) -> Ordering {
        self.terms().cmp(other.terms())
    }
}

impl From<i64> for Laurent {
    fn from(c: i64) -> Self {
        Self::constant(c)
    }
}

impl AddAssign<&Laurent> for Laurent {
    fn add_assign(&mut self, rhs: &Laurent) {
        self.add_scaled_shifted(rhs, 1, 0);
    }
}

impl SubAssign<&Laurent> for Laurent {
    fn sub_assign(&mut self, rhs: &Laurent) {
        self.add_scaled_shifted(rhs, -1, 0);
    }
}

impl AddAssign for Laurent {
    fn add_assign(&mut self, rhs: Laurent) {
        *self += &rhs;
    }
}

impl SubAssign for Laurent {
    fn sub_assign(&mut self, rhs: Laurent) {
        *self -= &rhs;
    }
}

impl Add<&Laurent> for &Laurent {
    type Output = Laurent;
    fn add(self, rhs: &Laurent) -> Laurent {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Sub<&Laurent> for &Laurent {
    type Output = Laurent;
    fn sub(self, rhs: &Laurent) -> Laurent {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl Mul<&Laurent> for &Laurent {
    type Output = Laurent;
    fn mul(self, rhs: &Laurent) -> Laurent {
        let mut out = Laurent::zero();
        out.add_mul(self, rhs);
        out
    }
}

impl Neg for &Laurent {
    type Output = Laurent;
    fn neg(self) -> Laurent {
        self.scale(-1)
    }
}

impl Neg for Laurent {
    type Output = Laurent;
    fn neg(self) -> Laurent {
        self.scale(-1)
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<Laurent> for Laurent {
            type Output = Laurent;
            fn $m(self, rhs: Laurent) -> Laurent {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&Laurent> for Laurent {
            type Output = Laurent;
            fn $m(self, rhs: &Laurent) -> Laurent {
                (&self).$m(rhs)
            }
        }
        impl $tr<Laurent> for &Laurent {
            type Output = Laurent;
            fn $m(self, rhs: Laurent) -> Laurent {
                self.$m(&rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Serialize for Laurent {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut map = serializer.serialize_map(Some(self.terms().count()))?;
        for (e, c) in self.terms() {
            map.serialize_entry(&e.to_string(), &c)?;
        }
        map.end()
    }
}

impl<'de> Deserialize<'de> for Laurent {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        struct LaurentVisitor;

        impl<'de> Visitor<'de> for LaurentVisitor {
            type Value = Laurent;

            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("a map from signed exponent strings to integer coefficients")
            }

            fn visit_map<M: MapAccess<'de>>(self, mut access: M) -> Result<Laurent, M::Error> {
                let mut terms = Vec::new();
                while let Some((k, c)) = access.next_entry::<String, i64>()? {
                    let e: i32 = k.parse().map_err(|_| de::Error::custom(format!("bad exponent {k:?}")))?;
                    if c == 0 {
                        return Err(de::Error::custom("zero coefficient stored"));
                    }
                    terms.push((e, c));
                }
                Ok(Laurent::from_terms(terms))
            }
        }

        deserializer.deserialize_map(LaurentVisitor)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn v(e: i32) -> Laurent {
        Laurent::v_pow(e)
    }

    #[test]
    fn difference_of_squares() {
        let p = v(1) + v(-1);
        let q = v(1) - v(-1);
        assert_eq!(&p * &q, v(2) - v(-2));
    }

    #[test]
    fn identities() {
        let p = Laurent::from_terms([(2, 1), (-1, 3)]);
        assert_eq!(&p + &Laurent::zero(), p);
        assert_eq!(v(-1) * v(1), Laurent::one());
        assert!((&p - &p).is_zero());
    }

    #[test]
    fn bar_examples() {
        assert_eq!(v(3).bar(), v(-3));
        assert_eq!(Laurent::constant(5).bar(), Laurent::constant(5));
        let p = Laurent::from_terms([(2, 1), (-1, 3), (0, -4)]);
        assert_eq!(p.bar().bar(), p);
    }

    #[test]
    fn leading_data_examples() {
        let p = Laurent::from_terms([(2, 1), (-1, 3)]);
        assert_eq!(p.leading_data().unwrap(), LeadingData { degree: 2, valuation: -1, top: 1, bottom: 3 });
        assert_eq!(
            Laurent::constant(7).leading_data().unwrap(),
            LeadingData { degree: 0, valuation: 0, top: 7, bottom: 7 }
        );
        for a in 1..5 {
            let d = Laurent::symmetric(a).leading_data().unwrap();
            assert_eq!((d.degree, d.valuation, d.top, d.bottom), (a, -a, 1, 1));
        }
        assert_eq!(Laurent::zero().leading_data(), Err(LaurentError::ZeroPolynomial));
    }

    #[test]
    fn canonical_text_and_json() {
        let p = Laurent::from_terms([(2, 1), (-1, 3)]);
        assert_eq!(p.to_canonical_string(), "-1:3,2:1");
        assert_eq!(p.to_canonical_string().parse::<Laurent>().unwrap(), p);
        assert_eq!(Laurent::zero().to_canonical_string(), "");
        assert_eq!(format!("{p}"), "v^2 + 3v^-1");
        assert_eq!(format!("{}", v(1) - v(-1)), "v - v^-1");
    }

    #[test]
    fn parts() {
        let p = Laurent::from_terms([(2, 1), (0, 5), (-1, 3)]);
        assert_eq!(p.negative_part(), Laurent::monomial(3, -1));
        assert_eq!(p.nonnegative_part(), Laurent::from_terms([(2, 1), (0, 5)]));
        assert!(!p.in_negative_ideal());
        assert!(p.negative_part().in_negative_ideal());
        assert_eq!(p.eval_at_one(), 9);
    }

    fn arb_laurent() -> impl Strategy<Value = Laurent> {
        prop::collection::vec((-6i32..6, -20i64..20), 0..6).prop_map(Laurent::from_terms)
    }

    proptest! {
        #[test]
        fn bar_is_ring_automorphism(p in arb_laurent(), q in arb_laurent()) {
            prop_assert_eq!((&p * &q).bar(), p.bar() * q.bar());
            prop_assert_eq!((&p + &q).bar(), p.bar() + q.bar());
            prop_assert_eq!(p.bar().bar(), p.clone());
        }

        #[test]
        fn degree_is_additive(p in arb_laurent(), q in arb_laurent()) {
            prop_assume!(!p.is_zero() && !q.is_zero());
            let pq = &p * &q;
            prop_assert_eq!(pq.degree().unwrap(), p.degree().unwrap() + q.degree().unwrap());
            prop_assert_eq!(pq.valuation().unwrap(), p.valuation().unwrap() + q.valuation().unwrap());
        }

        #[test]
        fn text_round_trip(p in arb_laurent()) {
            prop_assert_eq!(p.to_canonical_string().parse::<Laurent>().unwrap(), p);
        }

        #[test]
        fn ring_axioms(p in arb_laurent(), q in arb_laurent(), r in arb_laurent()) {
            prop_assert_eq!(&(&p * &q) * &r, &p * &(&q * &r));
            prop_assert_eq!(&p * &(&q + &r), &(&p * &q) + &(&p * &r));
            prop_assert_eq!(&p * &q, &q * &p);
        }
    }
}
