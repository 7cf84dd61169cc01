use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::de::{self, Deserializer, MapAccess, Visitor};
use serde::ser::{SerializeMap, Serializer};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Integer Laurent polynomial in one variable `t`, stored densely from the
/// lowest exponent. Invariant: either `coeffs` is empty (the zero polynomial)
/// or both its first and last entries are nonzero.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct LaurentPoly {
    low: i64,
    coeffs: Vec<BigInt>,
}

impl LaurentPoly {
    pub fn zero() -> Self {
        LaurentPoly::default()
    }

    pub fn one() -> Self {
        LaurentPoly::monomial(1, 0)
    }

    /// `c * t^e`
    pub fn monomial(c: impl Into<BigInt>, e: i64) -> Self {
        LaurentPoly::from_dense(e, vec![c.into()])
    }

    /// Coefficients listed from exponent `low` upwards.
    pub fn from_dense(low: i64, coeffs: Vec<BigInt>) -> Self {
        let mut p = LaurentPoly { low, coeffs };
        p.trim();
        p
    }

    pub fn from_terms<I, C>(terms: I) -> Self
    where
        I: IntoIterator<Item = (i64, C)>,
        C: Into<BigInt>,
    {
        let mut map: BTreeMap<i64, BigInt> = BTreeMap::new();
        for (e, c) in terms {
            *map.entry(e).or_default() += c.into();
        }
        LaurentPoly::from_map(&map)
    }

    fn from_map(map: &BTreeMap<i64, BigInt>) -> Self {
        let (Some((&lo, _)), Some((&hi, _))) = (map.first_key_value(), map.last_key_value()) else {
            return LaurentPoly::zero();
        };
        let mut coeffs = vec![BigInt::zero(); (hi - lo + 1) as usize];
        for (&e, c) in map {
            coeffs[(e - lo) as usize] += c;
        }
        LaurentPoly::from_dense(lo, coeffs)
    }

    fn trim(&mut self) {
        while self.coeffs.last().is_some_and(Zero::is_zero) {
            self.coeffs.pop();
        }
        let lead_zeros = self.coeffs.iter().take_while(|c| c.is_zero()).count();
        if lead_zeros > 0 {
            self.coeffs.drain(..lead_zeros);
            self.low += lead_zeros as i64;
        }
        if self.coeffs.is_empty() {
            self.low = 0;
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn min_exp(&self) -> Option<i64> {
        (!self.is_zero()).then_some(self.low)
    }

    pub fn max_exp(&self) -> Option<i64> {
        (!self.is_zero()).then(|| self.low + self.coeffs.len() as i64 - 1)
    }

    /// `max_exp - min_exp`, or `None` for the zero polynomial.
    pub fn span(&self) -> Option<i64> {
        Some(self.max_exp()? - self.min_exp()?)
    }

    pub fn coeff(&self, e: i64) -> BigInt {
        if e < self.low {
            return BigInt::zero();
        }
        self.coeffs.get((e - self.low) as usize).cloned().unwrap_or_default()
    }

    /// Nonzero terms in increasing exponent order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (i64, &BigInt)> + '_ {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(move |(i, c)| (self.low + i as i64, c))
    }

    pub fn eval_at_one(&self) -> BigInt {
        self.coeffs.iter().sum()
    }

    pub fn shift(&self, k: i64) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        LaurentPoly { low: self.low + k, coeffs: self.coeffs.clone() }
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        LaurentPoly::from_dense(self.low, self.coeffs.iter().map(|x| x * c).collect())
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = LaurentPoly::one();
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    /// `t^{-e}`-reflection: `p(t) -> p(t^{-1})`.
    pub fn reflect(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let mut coeffs = self.coeffs.clone();
        coeffs.reverse();
        LaurentPoly { low: -self.max_exp().unwrap(), coeffs }
    }

    /// Exact quotient `self / divisor`; fails unless the division leaves no
    /// remainder in the Laurent ring.
    pub fn exact_div(&self, divisor: &LaurentPoly) -> Result<LaurentPoly> {
        if divisor.is_zero() {
            return Err(Error::InexactDivision);
        }
        if self.is_zero() {
            return Ok(LaurentPoly::zero());
        }
        // Strip the unit t^low from both sides and divide as polynomials over Z.
        let num = &self.coeffs;
        let den = &divisor.coeffs;
        if num.len() < den.len() {
            return Err(Error::InexactDivision);
        }
        let mut rem: Vec<BigInt> = num.clone();
        let qlen = num.len() - den.len() + 1;
        let mut quot = vec![BigInt::zero(); qlen];
        let lead = den.last().unwrap();
        for i in (0..qlen).rev() {
            let top = &rem[i + den.len() - 1];
            if top.is_zero() {
                continue;
            }
            let (q, r) = top.div_rem(lead);
            if !r.is_zero() {
                return Err(Error::InexactDivision);
            }
            for (j, d) in den.iter().enumerate() {
                rem[i + j] -= &q * d;
            }
            quot[i] = q;
        }
        if rem.iter().any(|c| !c.is_zero()) {
            return Err(Error::InexactDivision);
        }
        Ok(LaurentPoly::from_dense(self.low - divisor.low, quot))
    }

    /// Representative of `self` modulo units `±t^k`: lowest exponent 0 and
    /// positive lowest coefficient.
    pub fn unit_normal(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let mut p = LaurentPoly { low: 0, coeffs: self.coeffs.clone() };
        if p.coeffs[0].is_negative() {
            p = -p;
        }
        p
    }

    /// `true` when `self` equals `other` up to a unit `±t^k`.
    pub fn associate_of(&self, other: &LaurentPoly) -> bool {
        self.unit_normal() == other.unit_normal()
    }

    pub fn is_symmetric(&self) -> bool {
        self.reflect() == *self
    }

    fn add_into(&self, other: &LaurentPoly, sign: i8) -> LaurentPoly {
        if other.is_zero() {
            return self.clone();
        }
        if self.is_zero() {
            return if sign > 0 { other.clone() } else { -other.clone() };
        }
        let lo = self.low.min(other.low);
        let hi = self.max_exp().unwrap().max(other.max_exp().unwrap());
        let mut coeffs = vec![BigInt::zero(); (hi - lo + 1) as usize];
        for (i, c) in self.coeffs.iter().enumerate() {
            coeffs[(self.low - lo) as usize + i] += c;
        }
        for (i, c) in other.coeffs.iter().enumerate() {
            let slot = &mut coeffs[(other.low - lo) as usize + i];
            if sign > 0 {
                *slot += c;
            } else {
                *slot -= c;
            }
        }
        LaurentPoly::from_dense(lo, coeffs)
    }
}

impl Add for &LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, rhs: &LaurentPoly) -> LaurentPoly {
        self.add_into(rhs, 1)
    }
}

impl Sub for &LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, rhs: &LaurentPoly) -> LaurentPoly {
        self.add_into(rhs, -1)
    }
}

impl Mul for &LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, rhs: &LaurentPoly) -> LaurentPoly {
        if self.is_zero() || rhs.is_zero() {
            return LaurentPoly::zero();
        }
        let mut coeffs = vec![BigInt::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                coeffs[i + j] += a * b;
            }
        }
        LaurentPoly::from_dense(self.low + rhs.low, coeffs)
    }
}

macro_rules! forward_owned {
    ($tr:ident, $f:ident) => {
        impl $tr for LaurentPoly {
            type Output = LaurentPoly;
            fn $f(self, rhs: LaurentPoly) -> LaurentPoly {
                (&self).$f(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for LaurentPoly {
    type Output = LaurentPoly;
    fn neg(mut self) -> LaurentPoly {
        for c in &mut self.coeffs {
            *c = -std::mem::take(c);
        }
        self
    }
}

impl fmt::Debug for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LaurentPoly({self})")
    }
}

/// Human-readable form, highest exponent first: `t^3 - t^2 + 1 - t^-2 + t^-3`.
impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (k, (e, c)) in self.terms().rev().enumerate() {
            let neg = c.is_negative();
            let mag = c.abs();
            match (k, neg) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            let unit = mag.is_one();
            match e {
                0 => write!(f, "{mag}")?,
                _ => {
                    if !unit {
                        write!(f, "{mag}")?;
                    }
                    if e == 1 {
                        f.write_str("t")?;
                    } else {
                        write!(f, "t^{e}")?;
                    }
                }
            }
        }
        Ok(())
    }
}

/// JSON form: an object mapping exponent strings to integer coefficients,
/// e.g. `{"-1": 1, "0": -1, "1": 1}`. Coefficients outside the `i64` range are
/// written as decimal strings.
impl Serialize for LaurentPoly {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let terms: Vec<_> = self.terms().collect();
        let mut map = s.serialize_map(Some(terms.len()))?;
        for (e, c) in terms {
            let key = e.to_string();
            match c.to_i64() {
                Some(v) => map.serialize_entry(&key, &v)?,
                None => map.serialize_entry(&key, &c.to_string())?,
            }
        }
        map.end()
    }
}

impl<'de> Deserialize<'de> for LaurentPoly {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        struct V;
        impl<'de> Visitor<'de> for V {
            type Value = LaurentPoly;
            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("a map from exponents to integer coefficients")
            }
            fn visit_map<A: MapAccess<'de>>(self, mut a: A) -> std::result::Result<LaurentPoly, A::Error> {
                let mut map = BTreeMap::new();
                while let Some((k, v)) = a.next_entry::<String, serde_json::Value>()? {
                    let e: i64 = k.parse().map_err(de::Error::custom)?;
                    let c: BigInt = match v {
                        serde_json::Value::Number(n) => {
                            n.to_string().parse().map_err(de::Error::custom)?
                        }
                        serde_json::Value::String(s) => s.parse().map_err(de::Error::custom)?,
                        other => return Err(de::Error::custom(format!("bad coefficient {other}"))),
                    };
                    *map.entry(e).or_insert_with(BigInt::zero) += c;
                }
                Ok(LaurentPoly::from_map(&map))
            }
        }
        d.deserialize_map(V)
    }
}
