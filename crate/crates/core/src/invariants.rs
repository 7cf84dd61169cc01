//! Torus-knot invariants: genus, τ, Alexander polynomial, the α/m staircase,
//! Υ and υ, plus the closed forms for small braid index.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;
use std::sync::{Arc, OnceLock, RwLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactmath::rational::{int, Rational};
use crate::exactmath::{upper_envelope, LaurentPoly, PiecewiseLinear};

/// `±T_{p,q}` with `p < q` coprime, or the unknot stored as `(+1, 1, 1)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "RawKnot")]
pub struct TorusKnotId {
    sign: i8,
    p: u64,
    q: u64,
}

#[derive(Deserialize)]
struct RawKnot {
    #[serde(default = "plus")]
    sign: i8,
    p: u64,
    q: u64,
}

fn plus() -> i8 {
    1
}

impl TryFrom<RawKnot> for TorusKnotId {
    type Error = Error;
    fn try_from(r: RawKnot) -> Result<Self> {
        TorusKnotId::new(r.sign, r.p, r.q)
    }
}

impl TorusKnotId {
    /// Normalizes the order of `p, q` and collapses every `T_{1,q}` to the unknot.
    pub fn new(sign: i8, p: u64, q: u64) -> Result<Self> {
        if sign != 1 && sign != -1 {
            return Err(Error::InvalidParameter(format!("sign must be +1 or -1, got {sign}")));
        }
        if p == 0 || q == 0 {
            return Err(Error::InvalidParameter("torus parameters must be positive".into()));
        }
        if p.gcd(&q) != 1 {
            return Err(Error::NotCoprime { p, q });
        }
        let (p, q) = (p.min(q), p.max(q));
        if p == 1 {
            return Ok(TorusKnotId::unknot());
        }
        Ok(TorusKnotId { sign, p, q })
    }

    pub fn positive(p: u64, q: u64) -> Result<Self> {
        TorusKnotId::new(1, p, q)
    }

    pub fn unknot() -> Self {
        TorusKnotId { sign: 1, p: 1, q: 1 }
    }

    pub fn sign(&self) -> i8 {
        self.sign
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn is_unknot(&self) -> bool {
        self.p == 1
    }

    pub fn mirror(&self) -> Self {
        if self.is_unknot() {
            return *self;
        }
        TorusKnotId { sign: -self.sign, ..*self }
    }

    /// Braid index `min(p, q)`; 1 for the unknot.
    pub fn braid_index(&self) -> u64 {
        self.p
    }

    pub fn genus(&self) -> i64 {
        ((self.p - 1) * (self.q - 1) / 2) as i64
    }

    pub fn tau(&self) -> i64 {
        tau(self)
    }

    pub fn upsilon(&self) -> i64 {
        upsilon(self)
    }
}

impl fmt::Display for TorusKnotId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_unknot() {
            return f.write_str("U");
        }
        let s = if self.sign < 0 { "-" } else { "" };
        write!(f, "{s}T({},{})", self.p, self.q)
    }
}

/// Accepts `p,q`, `-p,q` (mirror), `T(p,q)`, `-T(p,q)` and `U`.
impl FromStr for TorusKnotId {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.eq_ignore_ascii_case("u") || s.eq_ignore_ascii_case("unknot") {
            return Ok(TorusKnotId::unknot());
        }
        let (sign, rest) = match s.strip_prefix('-') {
            Some(r) => (-1, r),
            None => (1, s.strip_prefix('+').unwrap_or(s)),
        };
        let rest = rest.strip_prefix("T(").and_then(|r| r.strip_suffix(')')).unwrap_or(rest);
        let bad = || Error::InvalidParameter(format!("cannot parse torus knot {s:?}"));
        let (p, q) = rest.split_once(',').ok_or_else(bad)?;
        let p: u64 = p.trim().parse().map_err(|_| bad())?;
        let q: u64 = q.trim().parse().map_err(|_| bad())?;
        TorusKnotId::new(sign, p, q)
    }
}

fn check_coprime(p: u64, q: u64) -> Result<()> {
    if p == 0 || q == 0 {
        return Err(Error::InvalidParameter("torus parameters must be positive".into()));
    }
    if p.gcd(&q) != 1 {
        return Err(Error::NotCoprime { p, q });
    }
    Ok(())
}

/// `(p - 1)(q - 1) / 2`
pub fn genus(p: u64, q: u64) -> Result<u64> {
    check_coprime(p, q)?;
    Ok((p - 1) * (q - 1) / 2)
}

pub fn tau(k: &TorusKnotId) -> i64 {
    -(k.sign as i64) * k.genus()
}

fn t_power_minus_one(e: u64) -> LaurentPoly {
    LaurentPoly::from_terms([(e as i64, 1), (0, -1)])
}

/// Symmetrized Alexander polynomial
/// `t^{-g} (t^{pq} - 1)(t - 1) / ((t^p - 1)(t^q - 1))`; the unknot gives 1.
pub fn alexander_torus(p: u64, q: u64) -> Result<LaurentPoly> {
    let g = genus(p, q)?;
    if p.min(q) == 1 {
        return Ok(LaurentPoly::one());
    }
    let num = &t_power_minus_one(p * q) * &t_power_minus_one(1);
    let den = &t_power_minus_one(p) * &t_power_minus_one(q);
    Ok(num.exact_div(&den)?.shift(-(g as i64)))
}

/// The exponent sequence `α` of `Δ = Σ (-1)^k t^{α_k}` (α decreasing) and the
/// sequence `m` with `m_0 = 0`, `m_{2k} = m_{2k-1} - 1`,
/// `m_{2k+1} = m_{2k} - 2(α_{2k} - α_{2k+1}) + 1`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Staircase {
    pub alpha: Vec<i64>,
    pub m: Vec<i64>,
}

impl Staircase {
    pub fn from_alexander(delta: &LaurentPoly) -> Result<Staircase> {
        let mut alpha = Vec::new();
        for (k, (e, c)) in delta.terms().rev().enumerate() {
            let expected = if k % 2 == 0 { BigInt::one() } else { -BigInt::one() };
            if *c != expected {
                return Err(Error::SignPatternBroken);
            }
            alpha.push(e);
        }
        if alpha.len() % 2 == 0 {
            return Err(Error::SignPatternBroken);
        }
        let mut m = Vec::with_capacity(alpha.len());
        m.push(0i64);
        for i in 1..alpha.len() {
            let prev = m[i - 1];
            m.push(if i % 2 == 0 { prev - 1 } else { prev - 2 * (alpha[i - 1] - alpha[i]) + 1 });
        }
        Ok(Staircase { alpha, m })
    }

    /// Index `l` of the last entry.
    pub fn last(&self) -> usize {
        self.alpha.len() - 1
    }

    /// `m_{2k}` via the shortcut `m_{2k} = m_{2k-2} - 2(α_{2k-2} - α_{2k-1})`.
    pub fn m_even(&self) -> Vec<i64> {
        let mut out = vec![0i64];
        for k in 1..=self.last() / 2 {
            let prev = out[k - 1];
            out.push(prev - 2 * (self.alpha[2 * k - 2] - self.alpha[2 * k - 1]));
        }
        out
    }

    pub fn alpha_even(&self) -> Vec<i64> {
        self.alpha.iter().step_by(2).copied().collect()
    }

    /// `max_k { m_{2k} - t α_{2k} }`
    pub fn upsilon_at(&self, t: &Rational) -> Rational {
        self.m_even()
            .iter()
            .zip(self.alpha_even())
            .map(|(&m, a)| int(m) - t * int(a))
            .max()
            .expect("staircase is never empty")
    }
}

type Cache<V> = RwLock<HashMap<(u64, u64), Arc<V>>>;

fn memo<V>(cache: &'static OnceLock<Cache<V>>, key: (u64, u64), f: impl FnOnce() -> Result<V>) -> Result<Arc<V>> {
    let cache = cache.get_or_init(Default::default);
    if let Some(v) = cache.read().unwrap_or_else(|e| e.into_inner()).get(&key) {
        return Ok(v.clone());
    }
    let v = Arc::new(f()?);
    cache.write().unwrap_or_else(|e| e.into_inner()).insert(key, v.clone());
    Ok(v)
}

fn ordered(p: u64, q: u64) -> (u64, u64) {
    (p.min(q), p.max(q))
}

pub fn staircase(p: u64, q: u64) -> Result<Staircase> {
    check_coprime(p, q)?;
    static CACHE: OnceLock<Cache<Staircase>> = OnceLock::new();
    let key = ordered(p, q);
    memo(&CACHE, key, || Staircase::from_alexander(&alexander_torus(key.0, key.1)?)).map(|s| (*s).clone())
}

/// Υ of the positive torus knot on `[0, 2]`: the upper envelope of the lines
/// `t -> m_{2k} - t α_{2k}` on `[0, 1]`, reflected by `Υ(t) = Υ(2 - t)`.
pub fn upsilon_function(p: u64, q: u64) -> Result<PiecewiseLinear> {
    check_coprime(p, q)?;
    static CACHE: OnceLock<Cache<PiecewiseLinear>> = OnceLock::new();
    let key = ordered(p, q);
    memo(&CACHE, key, || {
        let st = staircase(key.0, key.1)?;
        let lines: Vec<(Rational, Rational)> =
            st.m_even().iter().zip(st.alpha_even()).map(|(&m, a)| (int(-a), int(m))).collect();
        upper_envelope(&lines, &int(0), &int(1))?.reflect_about_one()
    })
    .map(|f| (*f).clone())
}

/// Υ of a signed torus knot; mirrors negate the function.
pub fn upsilon_function_of(k: &TorusKnotId) -> Result<PiecewiseLinear> {
    let f = upsilon_function(k.p, k.q)?;
    if k.sign > 0 {
        return Ok(f);
    }
    let neg = f
        .segments()
        .iter()
        .map(|s| crate::exactmath::Segment {
            from: s.from.clone(),
            to: s.to.clone(),
            slope: -s.slope.clone(),
            intercept: -s.intercept.clone(),
        })
        .collect();
    PiecewiseLinear::from_segments(neg)
}

/// `υ = Υ(1)`, signed.
pub fn upsilon(k: &TorusKnotId) -> i64 {
    let st = staircase(k.p, k.q).expect("TorusKnotId is always coprime");
    let v = st.upsilon_at(&Rational::one());
    debug_assert!(v.is_integer());
    let v = v.to_integer().to_i64().expect("υ fits in i64");
    k.sign as i64 * v
}

/// Which closed-form family a knot was matched against.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ClosedFormFamily {
    Unknot,
    /// `T_{2,2k+1}`: `-k`
    TwoStrand,
    /// `T_{3,3k+1}`: `-2k`
    ThreeStrandOne,
    /// `T_{3,3k+2}`: `-2k-1`
    ThreeStrandTwo,
    /// `T_{4,2k+1}`: `-2k`
    FourStrand,
    /// `T_{m,m+1}`: `-⌊m²/4⌋`
    Consecutive,
}

/// Closed-form υ when the knot lies in a family with a known formula.
pub fn upsilon_closed_form(k: &TorusKnotId) -> Option<(i64, ClosedFormFamily)> {
    use ClosedFormFamily::*;
    let (p, q) = (k.p as i64, k.q as i64);
    let (v, fam) = match p {
        1 => (0, Unknot),
        2 => (-(q - 1) / 2, TwoStrand),
        3 if q % 3 == 1 => (-2 * (q / 3), ThreeStrandOne),
        3 => (-2 * (q / 3) - 1, ThreeStrandTwo),
        4 => (-2 * ((q - 1) / 2), FourStrand),
        _ if q == p + 1 => (-(p * p / 4), Consecutive),
        _ => return None,
    };
    Some((k.sign as i64 * v, fam))
}
