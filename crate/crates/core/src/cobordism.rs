//! τ/υ lower bounds, optimal-cobordism decisions for braid index 3 and 4, and
//! cobordism distance when the braid indices sum to at most 6.

use std::fmt;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactmath::rational::{self, ratio, Rational};
use crate::invariants::{tau, upsilon, TorusKnotId};

pub fn braid_index(k: &TorusKnotId) -> u64 {
    k.braid_index()
}

/// `max(|τ(K) - τ(T)|, |υ(K) - υ(T)|)`
pub fn lower_bound(k: &TorusKnotId, t: &TorusKnotId) -> u64 {
    let (tg, ug) = gaps(k, t);
    tg.max(ug)
}

fn gaps(k: &TorusKnotId, t: &TorusKnotId) -> (u64, u64) {
    ((tau(k) - tau(t)).unsigned_abs(), (upsilon(k) - upsilon(t)).unsigned_abs())
}

/// Whether `T_{2,n}` and `other` (a positive `T_{3,m}` or `T_{4,m}`) admit a
/// cobordism of genus `|g(T_{2,n}) - g(other)|`: `3n <= 5m - 1` for index 3,
/// `2n <= 5m - 3` for index 4.
pub fn optimal_exists(n: u64, other: &TorusKnotId) -> Result<bool> {
    if n < 3 || n.is_multiple_of(2) {
        return Err(Error::InvalidParameter(format!("T(2,{n}) is not a nontrivial knot")));
    }
    if other.sign() < 0 {
        return Err(Error::UnsupportedPair(format!("{other} is not a positive torus knot")));
    }
    let m = other.q() as i64;
    let n = n as i64;
    match other.braid_index() {
        3 => Ok(3 * n < 5 * m),
        4 => Ok(2 * n <= 5 * m - 3),
        i => Err(Error::UnsupportedPair(format!("{other} has braid index {i}, expected 3 or 4"))),
    }
}

/// Largest odd `n` with `n <= (3m² - 2m + 4) / 4`.
pub fn remark411_max_n(m: u64) -> Result<u64> {
    if m < 2 {
        return Err(Error::InvalidParameter(format!("m must be at least 2, got {m}")));
    }
    let bound = (3 * m * m - 2 * m + 4) / 4;
    Ok(if bound % 2 == 1 { bound } else { bound - 1 })
}

/// A torus knot or link in a witness chain.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct TorusTag {
    pub sign: i8,
    pub p: u64,
    pub q: u64,
}

impl TorusTag {
    fn of(k: &TorusKnotId) -> Self {
        TorusTag { sign: k.sign(), p: k.p(), q: k.q() }
    }

    fn new(sign: i8, p: u64, q: u64) -> Self {
        TorusTag { sign, p, q }
    }

    /// Euler characteristic of the fiber surface `p + q - pq`, sign-independent.
    fn chi(&self) -> i64 {
        let (p, q) = (self.p as i64, self.q as i64);
        p + q - p * q
    }
}

impl fmt::Display for TorusTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.p == 1 {
            return f.write_str("U");
        }
        let s = if self.sign < 0 { "-" } else { "" };
        write!(f, "{s}T({},{})", self.p, self.q)
    }
}

/// One cobordism in a chain, with `genus = -χ / 2` of the cobordism surface.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessLeg {
    pub from: TorusTag,
    pub to: TorusTag,
    pub euler_characteristic: i64,
    #[serde(with = "rational")]
    pub genus: Rational,
}

impl WitnessLeg {
    /// Leg from the larger surface `from` down to `to`; χ of the cobordism is
    /// `χ(from) - χ(to)` for same-sign legs.
    fn between(from: TorusTag, to: TorusTag) -> Self {
        let chi = from.chi() - to.chi();
        WitnessLeg { from, to, euler_characteristic: chi, genus: ratio(-chi, 2) }
    }

    /// Leg to or from the unknot across a sign change, realised through a slice
    /// surface of genus `g`.
    fn via_unknot(from: TorusTag, to: TorusTag, g: i64) -> Self {
        WitnessLeg { from, to, euler_characteristic: -2 * g, genus: rational::int(g) }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DistanceResult {
    pub distance: u64,
    pub tau_gap: u64,
    pub upsilon_gap: u64,
    pub witness: Vec<WitnessLeg>,
}

/// Cobordism distance for braid-index sums up to 6, where it equals the τ/υ
/// lower bound.
pub fn distance(k: &TorusKnotId, t: &TorusKnotId) -> Result<DistanceResult> {
    let sum = k.braid_index() + t.braid_index();
    if sum > 6 {
        return Err(Error::OutOfCoveredRange(sum));
    }
    let (tau_gap, upsilon_gap) = gaps(k, t);
    let d = tau_gap.max(upsilon_gap);
    let witness = match distance_witness(k, t) {
        Ok(chain) => chain,
        Err(Error::NotApplicable(_)) => direct_witness(k, t),
        Err(e) => return Err(e),
    };
    debug_assert_eq!(witness.iter().map(|l| l.genus.clone()).sum::<Rational>(), rational::int(d as i64));
    Ok(DistanceResult { distance: d, tau_gap, upsilon_gap, witness })
}

fn direct_witness(k: &TorusKnotId, t: &TorusKnotId) -> Vec<WitnessLeg> {
    if k == t {
        return Vec::new();
    }
    let (a, b) = (TorusTag::of(k), TorusTag::of(t));
    if k.is_unknot() || t.is_unknot() || k.sign() == t.sign() {
        let (big, small) = if k.genus() >= t.genus() { (a, b) } else { (b, a) };
        return vec![WitnessLeg::between(big, small)];
    }
    let u = TorusTag::of(&TorusKnotId::unknot());
    vec![WitnessLeg::via_unknot(a, u, k.genus()), WitnessLeg::via_unknot(u, b, t.genus())]
}

/// The two-leg chain `T_{3,3k+2} -> T_{2,5k+3} -> T_{2,n}` (or the `5k+1`
/// variant for `T_{3,3k+1}` and `T_{4,2k+1}`) for same-sign pairs where no
/// single optimal cobordism exists.
pub fn distance_witness(k: &TorusKnotId, t: &TorusKnotId) -> Result<Vec<WitnessLeg>> {
    let na = |why: String| Err(Error::NotApplicable(why));
    if k.is_unknot() || t.is_unknot() {
        return na("one side is the unknot".into());
    }
    if k.sign() != t.sign() {
        return na("opposite signs: distance is g + g".into());
    }
    let (two, other) = match (k.braid_index(), t.braid_index()) {
        (2, 3 | 4) => (k, t),
        (3 | 4, 2) => (t, k),
        _ => return na(format!("{k} and {t} are joined by a single optimal cobordism")),
    };
    let positive = TorusKnotId::new(1, other.p(), other.q())?;
    let n = two.q();
    if optimal_exists(n, &positive)? {
        return na(format!("{two} and {other} are joined by a single optimal cobordism"));
    }
    let m = other.q();
    let mid_q = match (other.p(), m % 3) {
        (3, 2) => 5 * (m / 3) + 3,
        (3, _) => 5 * (m / 3) + 1,
        _ => 5 * ((m - 1) / 2) + 1,
    };
    let s = other.sign();
    let mid = TorusTag::new(s, 2, mid_q);
    Ok(vec![
        WitnessLeg::between(TorusTag::of(other), mid),
        WitnessLeg::between(TorusTag::of(two), mid).reversed(),
    ])
}

impl WitnessLeg {
    fn reversed(self) -> Self {
        WitnessLeg { from: self.to, to: self.from, ..self }
    }
}

/// Sum of leg genera in a chain.
pub fn chain_genus(chain: &[WitnessLeg]) -> Rational {
    chain.iter().fold(Rational::zero(), |acc, l| acc + &l.genus)
}
