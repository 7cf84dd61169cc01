//! Invariants of braid closures: component count, Bennequin Euler
//! characteristic, and the Alexander polynomial via the reduced Burau
//! representation.
//!
//! Generator `a_i` acts as the identity matrix with row `i-1` replaced by
//! `(.., t, -t, 1, ..)` centred on the diagonal; words multiply left to right.

use std::collections::HashMap;
use std::sync::{Arc, OnceLock, RwLock};

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::braid::{permutation, BraidWord};
use crate::error::{Error, Result};
use crate::exactmath::modular::{self, add_mod, mul_mod, sub_mod, CrtAccumulator};
use crate::exactmath::LaurentPoly;

pub type Matrix = Vec<Vec<LaurentPoly>>;

fn identity_matrix(d: usize) -> Matrix {
    (0..d)
        .map(|i| (0..d).map(|j| if i == j { LaurentPoly::one() } else { LaurentPoly::zero() }).collect())
        .collect()
}

/// Reduced Burau matrix, `(n-1) x (n-1)` over `Z[t, t^-1]`.
pub fn reduced_burau(w: &BraidWord) -> Matrix {
    let d = w.strands().saturating_sub(1);
    let mut m = identity_matrix(d);
    let t = LaurentPoly::monomial(1, 1);
    let minus_t = LaurentPoly::monomial(-1, 1);
    let t_inv = LaurentPoly::monomial(1, -1);
    let minus_t_inv = LaurentPoly::monomial(-1, -1);
    for &l in w.letters() {
        let r = l.unsigned_abs() as usize - 1;
        for row in m.iter_mut() {
            let c = row[r].clone();
            if c.is_zero() {
                continue;
            }
            if l > 0 {
                if r > 0 {
                    row[r - 1] = &row[r - 1] + &(&t * &c);
                }
                if r + 1 < d {
                    row[r + 1] = &row[r + 1] + &c;
                }
                row[r] = &minus_t * &c;
            } else {
                if r > 0 {
                    row[r - 1] = &row[r - 1] + &c;
                }
                if r + 1 < d {
                    row[r + 1] = &row[r + 1] + &(&t_inv * &c);
                }
                row[r] = &minus_t_inv * &c;
            }
        }
    }
    m
}

pub fn mat_mul(a: &Matrix, b: &Matrix) -> Matrix {
    let n = a.len();
    let k = b.len();
    let cols = b.first().map_or(0, Vec::len);
    (0..n)
        .map(|i| {
            (0..cols)
                .map(|j| (0..k).fold(LaurentPoly::zero(), |acc, x| &acc + &(&a[i][x] * &b[x][j])))
                .collect()
        })
        .collect()
}

/// Fraction-free (Bareiss) determinant over `Z[t, t^-1]`.
pub fn determinant(m: &Matrix) -> LaurentPoly {
    let n = m.len();
    if n == 0 {
        return LaurentPoly::one();
    }
    let mut a = m.clone();
    let mut sign = false;
    let mut prev = LaurentPoly::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            let Some(swap) = (k + 1..n).find(|&i| !a[i][k].is_zero()) else {
                return LaurentPoly::zero();
            };
            a.swap(k, swap);
            sign = !sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = &(&a[i][j] * &a[k][k]) - &(&a[i][k] * &a[k][j]);
                a[i][j] = num.exact_div(&prev).expect("Bareiss division is exact");
            }
            a[i][k] = LaurentPoly::zero();
        }
        prev = a[k][k].clone();
    }
    let d = a[n - 1][n - 1].clone();
    if sign {
        -d
    } else {
        d
    }
}

/// `1 + t + ... + t^{n-1}`
fn strand_factor(n: usize) -> LaurentPoly {
    LaurentPoly::from_terms((0..n as i64).map(|e| (e, 1)))
}

fn finish_alexander(det: LaurentPoly, strands: usize) -> Result<LaurentPoly> {
    if det.is_zero() {
        return Err(Error::ZeroDeterminantFamily);
    }
    Ok(det.exact_div(&strand_factor(strands))?.unit_normal())
}

/// Alexander polynomial from an exact Burau determinant with no
/// simplification; slow but independent of the modular pipeline.
pub fn alexander_of_closure_exact(w: &BraidWord) -> Result<LaurentPoly> {
    let b = reduced_burau(w);
    let d = b.len();
    let mut m = identity_matrix(d);
    for i in 0..d {
        for j in 0..d {
            m[i][j] = &m[i][j] - &b[i][j];
        }
    }
    finish_alexander(determinant(&m), w.strands())
}

/// `t^N det(I - B(t))` for a word with `N` negative letters, recovered from
/// evaluations modulo enough word-size primes to cover a proven coefficient
/// bound.
fn burau_determinant_modular(w: &BraidWord) -> LaurentPoly {
    let n = w.strands();
    let d = n - 1;
    let letters = w.letters();
    let negatives = letters.iter().filter(|&&l| l < 0).count() as u64;
    let degree = letters.len();
    let bound = determinant_norm_bound(w);
    // need prod(primes) > 2 * bound
    let needed = (&bound << 1u32).bits();
    let mut primes = Vec::new();
    let mut bits = 0u64;
    while bits <= needed {
        let p = modular::prime(primes.len());
        bits += 61;
        primes.push(p);
    }
    let points: Vec<u64> = (1..=degree as u64 + 1).collect();
    let residues: Vec<Vec<u64>> = primes
        .par_iter()
        .map(|&p| {
            let ys: Vec<u64> = points
                .iter()
                .map(|&z| {
                    let det = det_i_minus_burau_at(letters, d, z, p);
                    mul_mod(det, modular::pow_mod(z, negatives, p), p)
                })
                .collect();
            modular::interpolate(&points, &ys, p)
        })
        .collect();
    let mut crt = CrtAccumulator::new(degree + 1);
    for (r, &p) in residues.iter().zip(&primes) {
        crt.absorb(r, p);
    }
    LaurentPoly::from_dense(-(negatives as i64), crt.symmetric())
}

/// `det(I - B(z)) mod p`, with `B` built by column operations on a
/// column-major matrix.
fn det_i_minus_burau_at(letters: &[i32], d: usize, z: u64, p: u64) -> u64 {
    let z_inv = modular::inv_mod(z, p);
    let neg_z = p - z;
    let neg_z_inv = p - z_inv;
    let mut cols = vec![vec![0u64; d]; d];
    for (i, c) in cols.iter_mut().enumerate() {
        c[i] = 1;
    }
    for &l in letters {
        let r = l.unsigned_abs() as usize - 1;
        let (lo, rest) = cols.split_at_mut(r);
        let (mid, hi) = rest.split_at_mut(1);
        let cr = &mut mid[0];
        let (fl, fh, fc) = if l > 0 { (z, 1, neg_z) } else { (1, z_inv, neg_z_inv) };
        if let Some(left) = lo.last_mut() {
            for (x, &y) in left.iter_mut().zip(cr.iter()) {
                *x = add_mod(*x, mul_mod(fl, y, p), p);
            }
        }
        if let Some(right) = hi.first_mut() {
            for (x, &y) in right.iter_mut().zip(cr.iter()) {
                *x = add_mod(*x, mul_mod(fh, y, p), p);
            }
        }
        for x in cr.iter_mut() {
            *x = mul_mod(fc, *x, p);
        }
    }
    // row-major I - B
    let mut a = vec![vec![0u64; d]; d];
    for (j, col) in cols.iter().enumerate() {
        for (i, &v) in col.iter().enumerate() {
            a[i][j] = sub_mod(if i == j { 1 } else { 0 }, v, p);
        }
    }
    det_mod(a, p)
}

fn det_mod(mut a: Vec<Vec<u64>>, p: u64) -> u64 {
    let n = a.len();
    let mut det = 1u64;
    for k in 0..n {
        let Some(piv) = (k..n).find(|&i| a[i][k] != 0) else {
            return 0;
        };
        if piv != k {
            a.swap(piv, k);
            det = p - det;
            if det == p {
                det = 0;
            }
        }
        det = mul_mod(det, a[k][k], p);
        let inv = modular::inv_mod(a[k][k], p);
        for i in k + 1..n {
            if a[i][k] == 0 {
                continue;
            }
            let f = mul_mod(a[i][k], inv, p);
            let (top, bottom) = a.split_at_mut(i);
            let pivot_row = &top[k];
            for (x, &y) in bottom[0][k..].iter_mut().zip(&pivot_row[k..]) {
                *x = sub_mod(*x, mul_mod(f, y, p), p);
            }
        }
    }
    det
}

/// Bound on the sum of absolute coefficients of `det(I - B)`: entrywise
/// coefficient norms are propagated through the same column operations, then
/// the determinant is bounded by the product of row sums of `|I| + |B|`.
fn determinant_norm_bound(w: &BraidWord) -> BigUint {
    let d = w.strands() - 1;
    let mut cols: Vec<Vec<BigUint>> = (0..d)
        .map(|j| (0..d).map(|i| if i == j { BigUint::one() } else { BigUint::zero() }).collect())
        .collect();
    for &l in w.letters() {
        let r = l.unsigned_abs() as usize - 1;
        let cr = cols[r].clone();
        if r > 0 {
            for (x, y) in cols[r - 1].iter_mut().zip(&cr) {
                *x += y;
            }
        }
        if r + 1 < d {
            for (x, y) in cols[r + 1].iter_mut().zip(&cr) {
                *x += y;
            }
        }
    }
    (0..d).fold(BigUint::one(), |acc, i| {
        let row: BigUint = cols.iter().map(|c| &c[i]).sum();
        acc * (row + 1u32)
    })
}

/// Reductions of a closure that preserve the Alexander polynomial up to
/// multiplication by the returned connected-sum factors.
struct Reduced {
    core: BraidWord,
    /// exponents `j` of `T(2, j)` connected-sum factors split off the ends
    twist_factors: Vec<i64>,
}

/// Removes outer strands that touch the rest of the braid through a single
/// letter (Markov destabilization) or through one cyclic block `a^j` (a
/// `T(2, j)` connected summand). Fails on split closures.
fn reduce_closure(w: &BraidWord) -> Result<Reduced> {
    let mut n = w.strands();
    let mut letters = w.letters().to_vec();
    let mut twist_factors = Vec::new();
    loop {
        if n <= 1 {
            break;
        }
        let mut present = vec![false; n];
        for &l in &letters {
            present[l.unsigned_abs() as usize] = true;
        }
        if present[1..].iter().any(|&p| !p) {
            return Err(Error::ZeroDeterminantFamily);
        }
        if let Some(j) = single_cyclic_block(&letters, n as i32 - 1) {
            letters = drop_block(&letters, n as i32 - 1);
            if j.abs() > 1 {
                twist_factors.push(j);
            }
            n -= 1;
            continue;
        }
        if let Some(j) = single_cyclic_block(&letters, 1) {
            letters = drop_block(&letters, 1);
            for l in &mut letters {
                *l -= l.signum();
            }
            if j.abs() > 1 {
                twist_factors.push(j);
            }
            n -= 1;
            continue;
        }
        break;
    }
    Ok(Reduced { core: BraidWord::new(n.max(1), letters)?, twist_factors })
}

/// If every occurrence of generator `g` has the same sign and they form one
/// contiguous run in the cyclic word, returns the signed run length.
fn single_cyclic_block(letters: &[i32], g: i32) -> Option<i64> {
    let hits: Vec<usize> = (0..letters.len()).filter(|&i| letters[i].abs() == g).collect();
    let first = *hits.first()?;
    let sign = letters[first].signum();
    if hits.iter().any(|&i| letters[i].signum() != sign) {
        return None;
    }
    let len = letters.len();
    let runs = (0..len)
        .filter(|&i| letters[i].abs() == g && letters[(i + len - 1) % len].abs() != g)
        .count();
    if runs == 1 || hits.len() == len {
        Some(sign as i64 * hits.len() as i64)
    } else {
        None
    }
}

fn drop_block(letters: &[i32], g: i32) -> Vec<i32> {
    letters.iter().copied().filter(|l| l.abs() != g).collect()
}

/// Canonical Alexander polynomial of `T(p, q)` (torus knots and links):
/// `(1 - t)(1 - t^{pq/d})^d / ((1 - t^p)(1 - t^q))` with `d = gcd(p, q)`.
pub fn torus_link_alexander(p: u64, q: u64) -> Result<LaurentPoly> {
    if p == 0 || q == 0 {
        return Err(Error::InvalidParameter("torus parameters must be positive".into()));
    }
    type Cache = RwLock<HashMap<(u64, u64), Arc<LaurentPoly>>>;
    static CACHE: OnceLock<Cache> = OnceLock::new();
    let key = (p.min(q), p.max(q));
    let cache = CACHE.get_or_init(Default::default);
    if let Some(v) = cache.read().unwrap_or_else(|e| e.into_inner()).get(&key) {
        return Ok((**v).clone());
    }
    let one_minus = |e: u64| LaurentPoly::from_terms([(0, 1), (e as i64, -1)]);
    let d = p.gcd(&q);
    let num = &one_minus(1) * &one_minus(p * q / d).pow(d as u32);
    let den = &one_minus(p) * &one_minus(q);
    let poly = num.exact_div(&den)?.unit_normal();
    cache.write().unwrap_or_else(|e| e.into_inner()).insert(key, Arc::new(poly.clone()));
    Ok(poly)
}

/// Canonical Alexander polynomial of the closure (lowest exponent 0, positive
/// lowest coefficient).
pub fn alexander_of_closure(w: &BraidWord) -> Result<LaurentPoly> {
    let reduced = reduce_closure(w)?;
    let mut poly = LaurentPoly::one();
    for &j in &reduced.twist_factors {
        poly = &poly * &torus_link_alexander(2, j.unsigned_abs())?;
    }
    let core = &reduced.core;
    if core.strands() >= 2 {
        let det = burau_determinant_modular(core);
        poly = &poly * &finish_alexander(det, core.strands())?;
    }
    Ok(poly.unit_normal())
}

/// `Some(q)` when the word is literally `(a_1 ... a_{n-1})^q`.
pub fn as_torus_word(w: &BraidWord) -> Option<(u64, u64)> {
    let n = w.strands();
    if n == 1 {
        return w.is_empty().then_some((1, 1));
    }
    let row = n - 1;
    let letters = w.letters();
    if letters.is_empty() || !letters.len().is_multiple_of(row) {
        return None;
    }
    let ok = letters.iter().enumerate().all(|(i, &l)| l == (i % row) as i32 + 1);
    ok.then_some((n as u64, (letters.len() / row) as u64))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClosureFingerprint {
    pub components: usize,
    pub exponent_sum: i64,
    pub strands: usize,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub bennequin_chi: Option<i64>,
    /// `None` for split or degenerate closures.
    pub alexander: Option<LaurentPoly>,
}

impl ClosureFingerprint {
    /// Compares the presentation-independent parts: components, Bennequin χ
    /// and Alexander polynomial.
    pub fn same_link_invariants(&self, other: &ClosureFingerprint) -> bool {
        self.components == other.components
            && self.bennequin_chi.is_some()
            && self.bennequin_chi == other.bennequin_chi
            && self.alexander.is_some()
            && self.alexander == other.alexander
    }
}

pub fn fingerprint(w: &BraidWord) -> ClosureFingerprint {
    let alexander = match as_torus_word(w) {
        Some((p, q)) => torus_link_alexander(p, q).ok(),
        None => alexander_of_closure(w).ok(),
    };
    ClosureFingerprint {
        components: permutation(w).cycle_count(),
        exponent_sum: w.exponent_sum(),
        strands: w.strands(),
        bennequin_chi: w.is_positive().then(|| w.strands() as i64 - w.len() as i64),
        alexander,
    }
}

/// Fingerprint of the standard positive word `(a_1 ... a_{p-1})^q` for
/// `T(p, q)`, computed without building the word.
pub fn torus_fingerprint(p: u64, q: u64) -> Result<ClosureFingerprint> {
    let len = (p - 1) * q;
    Ok(ClosureFingerprint {
        components: p.gcd(&q) as usize,
        exponent_sum: len as i64,
        strands: p as usize,
        bennequin_chi: Some(p as i64 - len as i64),
        alexander: Some(torus_link_alexander(p, q)?),
    })
}

/// Matches a positive word against `T(2, n)` by components, Euler
/// characteristic `2 - n` and Alexander polynomial.
pub fn identify_torus2(w: &BraidWord) -> Result<Option<u64>> {
    if !w.is_positive() {
        return Err(Error::NotPositive);
    }
    let chi = w.strands() as i64 - w.len() as i64;
    let n = 2 - chi;
    if n < 1 {
        return Ok(None);
    }
    let n = n as u64;
    let target = torus_fingerprint(2, n)?;
    Ok(fingerprint(w).same_link_invariants(&target).then_some(n))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::braid::torus_braid;

    fn word(n: usize, l: &[i32]) -> BraidWord {
        BraidWord::new(n, l.to_vec()).unwrap()
    }

    fn lp(terms: &[(i64, i64)]) -> LaurentPoly {
        LaurentPoly::from_terms(terms.iter().copied())
    }

    #[test]
    fn burau_examples() {
        assert_eq!(reduced_burau(&BraidWord::identity(3).unwrap()), identity_matrix(2));
        let w = word(4, &[1, -3, 2, 2, -1, 3]);
        let ww = w.concat(&w.inverse()).unwrap();
        assert_eq!(reduced_burau(&ww), identity_matrix(3));
        let b = reduced_burau(&torus_braid(2, 3).unwrap());
        assert_eq!(b, vec![vec![lp(&[(3, -1)])]]);
    }

    #[test]
    fn burau_satisfies_braid_relations() {
        let a = reduced_burau(&word(4, &[1, 2, 1]));
        let b = reduced_burau(&word(4, &[2, 1, 2]));
        assert_eq!(a, b);
        let c = reduced_burau(&word(4, &[1, 3]));
        let d = reduced_burau(&word(4, &[3, 1]));
        assert_eq!(c, d);
    }

    #[test]
    fn alexander_examples() {
        assert_eq!(alexander_of_closure(&torus_braid(2, 3).unwrap()).unwrap(), lp(&[(2, 1), (1, -1), (0, 1)]));
        assert_eq!(
            alexander_of_closure(&torus_braid(2, 5).unwrap()).unwrap(),
            lp(&[(4, 1), (3, -1), (2, 1), (1, -1), (0, 1)])
        );
        let t34 = crate::invariants::alexander_torus(3, 4).unwrap().unit_normal();
        assert_eq!(alexander_of_closure(&torus_braid(3, 4).unwrap()).unwrap(), t34);
        assert_eq!(alexander_of_closure_exact(&torus_braid(3, 4).unwrap()).unwrap(), t34);
    }

    #[test]
    fn figure_eight_and_unknots() {
        // a1 a2^-1 a1 a2^-1 closes to the figure-eight knot
        let fig8 = word(3, &[1, -2, 1, -2]);
        let expected = lp(&[(0, 1), (1, -3), (2, 1)]);
        assert_eq!(alexander_of_closure_exact(&fig8).unwrap(), expected);
        assert_eq!(burau_only(&fig8), expected);
        assert_eq!(alexander_of_closure(&BraidWord::identity(1).unwrap()).unwrap(), LaurentPoly::one());
        assert_eq!(alexander_of_closure(&word(3, &[1, 2])).unwrap(), LaurentPoly::one());
    }

    fn burau_only(w: &BraidWord) -> LaurentPoly {
        finish_alexander(burau_determinant_modular(w), w.strands()).unwrap()
    }

    #[test]
    fn modular_and_exact_routes_agree() {
        let words = [
            word(3, &[1, 1, 2, 1, 1, 1, 1]),
            word(4, &[1, 2, 3, 1, 2, 3, 1, 2, 3, 2, 2]),
            word(4, &[1, -2, 3, -2, 1, 3, 2, 2]),
            word(5, &[1, 2, 3, 4, 4, 3, 2, 1, 2, 3, 1, 4, -2]),
        ];
        for w in &words {
            assert_eq!(alexander_of_closure(w).unwrap(), alexander_of_closure_exact(w).unwrap(), "{w}");
            assert_eq!(burau_only(w), alexander_of_closure_exact(w).unwrap(), "{w}");
        }
    }

    #[test]
    fn split_closures_are_loud() {
        assert_eq!(alexander_of_closure(&word(3, &[1, 1])), Err(Error::ZeroDeterminantFamily));
        assert_eq!(alexander_of_closure_exact(&word(3, &[1, 1])), Err(Error::ZeroDeterminantFamily));
        assert_eq!(alexander_of_closure(&BraidWord::identity(2).unwrap()), Err(Error::ZeroDeterminantFamily));
        let f = fingerprint(&word(3, &[1, 1]));
        assert_eq!(f.components, 3);
        assert_eq!(f.alexander, None);
    }

    #[test]
    fn torus_link_formula_matches_burau() {
        for p in 2..=5u64 {
            for q in 1..=6u64 {
                let w = torus_braid(p as usize, q as usize).unwrap();
                assert_eq!(
                    torus_link_alexander(p, q).unwrap(),
                    alexander_of_closure_exact(&w).unwrap(),
                    "T({p},{q})"
                );
            }
        }
    }

    #[test]
    fn fingerprint_examples() {
        let f = fingerprint(&torus_braid(3, 4).unwrap());
        assert_eq!((f.components, f.bennequin_chi, f.exponent_sum), (1, Some(-5), 8));
        let f = fingerprint(&BraidWord::identity(1).unwrap());
        assert_eq!((f.components, f.bennequin_chi), (1, Some(1)));
        assert_eq!(f.alexander, Some(LaurentPoly::one()));
        let f = fingerprint(&torus_braid(2, 4).unwrap());
        assert_eq!((f.components, f.bennequin_chi), (2, Some(-2)));
        assert_eq!(f, torus_fingerprint(2, 4).unwrap());
        let j = serde_json::to_value(fingerprint(&word(2, &[-1]))).unwrap();
        assert!(j.get("bennequin_chi").is_none());
    }

    #[test]
    fn identify_examples() {
        assert_eq!(identify_torus2(&word(3, &[1, 1, 2, 1, 1, 1, 1])), Ok(Some(6)));
        assert_eq!(identify_torus2(&torus_braid(2, 9).unwrap()), Ok(Some(9)));
        assert_eq!(identify_torus2(&torus_braid(3, 5).unwrap()), Ok(None));
        assert_eq!(identify_torus2(&word(2, &[-1])), Err(Error::NotPositive));
    }
}
