//! Certificate constructors for the torus-link adjacencies.

use std::collections::BTreeMap;

use serde_json::json;

use super::{AdjacencyCertificate, CertBuilder, LinkClaim, Metadata, Step};
use crate::braid::{half_twist_letters, torus_braid, BraidMove, BraidWord, ShiftDirection};
use crate::error::{Error, Result};

fn metadata(construction: &str, params: &[(&str, serde_json::Value)], achieved_n: Option<u64>) -> Metadata {
    Metadata {
        construction: construction.to_string(),
        params: params.iter().map(|(k, v)| (k.to_string(), v.clone())).collect::<BTreeMap<_, _>>(),
        achieved_n,
    }
}

fn need_m(m: usize, min: usize) -> Result<()> {
    if m < min {
        return Err(Error::InvalidParameter(format!("m must be at least {min}, got {m}")));
    }
    Ok(())
}

/// Positions of `letter` in `letters[range]`, as absolute indices.
fn positions_of(letters: &[i32], range: std::ops::Range<usize>, letter: i32) -> Vec<usize> {
    range.filter(|&i| letters[i] == letter).collect()
}

/// `T(n, m)` from `T(a, b)`: keep the first `n - 1` generators of the first
/// `m - 1` rows of `(a_1...a_{a-1})^b`, keep row `m` whole, drop the rest.
pub fn adj_grid(n: usize, m: usize, a: usize, b: usize) -> Result<AdjacencyCertificate> {
    if n == 0 || m == 0 {
        return Err(Error::InvalidParameter("grid parameters must be at least 1".into()));
    }
    if n > a || m > b {
        return Err(Error::BoundViolated(format!("T({n},{m}) does not fit inside T({a},{b})")));
    }
    let mut b_ = CertBuilder::new(torus_braid(a, b)?);
    let row = a - 1;
    let doomed: Vec<usize> = (0..row * b)
        .filter(|&i| {
            let (block, idx) = (i / row, i % row + 1);
            block >= m || (block + 1 < m && idx >= n)
        })
        .collect();
    b_.delete_positions(&doomed)?;
    b_.end_phase("delete");
    let params = [("n", json!(n)), ("m", json!(m)), ("a", json!(a)), ("b", json!(b))];
    Ok(b_.finish(
        LinkClaim::new(n as u64, m as u64),
        LinkClaim::new(a as u64, b as u64),
        metadata("grid", &params, None),
    ))
}

/// Largest `n` reached from `T(3, m)`: `5l - 1`, `5l + 1`, `5l + 3` for
/// `m = 3l, 3l + 1, 3l + 2`.
pub fn index3_target_n(m: usize) -> u64 {
    ((5 * m - 1) / 3) as u64
}

/// Largest `n` reached from `T(4, m)`: `5l + 1` for `m = 2l + 1`, `5l + 3`
/// for `m = 2l + 2`.
pub fn index4_target_n(m: usize) -> u64 {
    ((5 * m - 3) / 2) as u64
}

/// Normal form of `(a_1 a_2)^m` used before deleting: every `a_2` after the
/// first one is deleted afterwards.
fn index3_word(m: usize) -> Vec<i32> {
    if m == 2 {
        return vec![1, 1, 2, 1];
    }
    let (l, r) = (m / 3, m % 3);
    let mut w = match r {
        0 => vec![1, 2, 1, 1],
        _ => vec![1, 1, 2, 1, 1, 1],
    };
    for _ in 1..l {
        w.extend([1, 2, 1, 1, 1]);
    }
    w.push(2);
    w.extend(std::iter::repeat_n(1, l));
    if r == 2 {
        w.insert(0, 1);
        w.push(1);
    }
    w
}

pub fn adj_index3(m: usize) -> Result<AdjacencyCertificate> {
    need_m(m, 2)?;
    let mut b = CertBuilder::new(torus_braid(3, m)?);
    b.rewrite_to(&index3_word(m))?;
    b.end_phase("normal form");
    let len = b.letters().len();
    let a2 = positions_of(b.letters(), 0..len, 2);
    b.delete_positions(&a2[1..])?;
    b.end_phase("delete a2");
    let n = index3_target_n(m);
    Ok(b.finish(LinkClaim::new(2, n), LinkClaim::new(3, m as u64), metadata("index3", &[("m", json!(m))], Some(n))))
}

/// Normal form of `(a_1 a_3 a_2)^m` for `m >= 3`, and the number of trailing
/// `a_2` to delete.
fn index4_word(m: usize) -> (Vec<i32>, usize) {
    let odd = m % 2 == 1;
    let l = if odd { (m - 1) / 2 } else { (m - 2) / 2 };
    let mut w = vec![1, 3, 2, 1, 3, 2, 1, 3];
    if !odd {
        w.extend([2, 1, 3]);
    }
    for _ in 1..l {
        w.extend([1, 2, 1, 1, 3]);
    }
    w.push(2);
    w.extend(std::iter::repeat_n(1, l / 2));
    w.extend(std::iter::repeat_n(3, l.saturating_sub(1) / 2));
    (w, if odd { l } else { l + 1 })
}

pub fn adj_index4(m: usize) -> Result<AdjacencyCertificate> {
    need_m(m, 2)?;
    let mut b = CertBuilder::new(torus_braid(4, m)?);
    b.apply(BraidMove::CyclicShift { direction: ShiftDirection::BackToFront })?;
    for k in 0..m {
        b.apply(BraidMove::commute(3 * k))?;
    }
    b.end_phase("conjugate");
    if m == 2 {
        // one a_2 less would leave three components; dropping an a_1 does not
        b.delete_positions(&[0])?;
    } else {
        let (w, drop) = index4_word(m);
        b.rewrite_to(&w)?;
        b.end_phase("normal form");
        let a2 = positions_of(b.letters(), 0..w.len(), 2);
        b.delete_positions(&a2[a2.len() - drop..])?;
    }
    b.end_phase("delete");
    let n = index4_target_n(m);
    Ok(b.finish(LinkClaim::new(2, n), LinkClaim::new(4, m as u64), metadata("index4", &[("m", json!(m))], Some(n))))
}

/// `ℓ(β_m)`: `ℓ(β_m) = 2(m - 2) + ℓ(β_{m-3})`, with `ℓ(β_2) = 1`.
pub fn beta_length(m: usize) -> usize {
    match m {
        0 | 1 => 0,
        2 => 1,
        _ => 2 * (m - 2) + beta_length(m - 3),
    }
}

/// Reduces the half twist on strands `shift + 1 ..= shift + m` occupying
/// `start..` of the current word to `β_m`, in place.
fn reduce_half_twist(b: &mut CertBuilder, start: usize, m: usize, shift: i32) -> Result<()> {
    if m <= 2 {
        return Ok(());
    }
    let k = m - 2;
    b.apply(BraidMove::delete(start + m - 2))?;
    let mut rows = Vec::new();
    for j in (1..=k as i32).rev() {
        rows.push(1 + shift);
        rows.extend((1..=j).map(|i| i + shift));
    }
    b.rewrite_segment(start, &rows)?;
    let a2 = positions_of(b.letters(), start..start + rows.len(), shift + 2);
    b.delete_positions(&a2)?;
    let mut target = vec![1 + shift; 2 * k];
    target.extend(half_twist_letters(m - 3, shift + 2));
    b.rewrite_segment(start, &target)?;
    reduce_half_twist(b, start + 2 * k, m - 3, shift + 2)
}

/// Moves taking `Δ_m` to `β_m`, a split union of two-strand twists.
#[derive(Debug, Clone)]
pub struct HalfTwistReduction {
    pub initial: BraidWord,
    pub steps: Vec<Step>,
    pub beta: BraidWord,
}

pub fn half_twist_reduce(m: usize) -> Result<HalfTwistReduction> {
    need_m(m, 1)?;
    let initial = BraidWord::new(m, half_twist_letters(m, 0))?;
    let mut b = CertBuilder::new(initial.clone());
    reduce_half_twist(&mut b, 0, m, 0)?;
    Ok(HalfTwistReduction { initial, beta: b.word().clone(), steps: b.steps })
}

/// `m - 1 + ℓ(β_{m-2}) + ℓ(β_m)`.
pub fn square_target_n(m: usize) -> u64 {
    (m - 1 + beta_length(m - 2) + beta_length(m)) as u64
}

/// `T(m, m) = Δ_m²` down to `(a_1...a_{m-1})(a_1...a_{m-2}) β_{m-2} β_m`.
fn square_phases(b: &mut CertBuilder, m: usize) -> Result<()> {
    let mut full = half_twist_letters(m, 0);
    let half = full.len();
    full.extend_from_within(..);
    b.rewrite_to(&full)?;
    b.end_phase("full twist");
    reduce_half_twist(b, half, m, 0)?;
    b.end_phase("reduce second half twist");
    reduce_half_twist(b, (m - 1) + m.saturating_sub(2), m.saturating_sub(2), 0)?;
    b.end_phase("reduce inner half twist");
    Ok(())
}

pub fn adj_square(m: usize) -> Result<AdjacencyCertificate> {
    need_m(m, 2)?;
    let mut b = CertBuilder::new(torus_braid(m, m)?);
    square_phases(&mut b, m)?;
    let n = square_target_n(m);
    Ok(b.finish(LinkClaim::new(2, n), LinkClaim::new(m as u64, m as u64), metadata("square", &[("m", json!(m))], Some(n))))
}

/// Largest `n` with `n <= (2m² - m + 5) / 3`.
pub fn staircase_remark_bound(m: usize) -> u64 {
    ((2 * m * m - m + 5) / 3) as u64
}

/// `T(m, m + 1)` read on `m + 1` strands as `Δ_m Δ_{m+1}`, then both
/// half twists reduced: `n = m + ℓ(β_{m-1}) + ℓ(β_m)`.
fn staircase_direct(m: usize) -> Result<(CertBuilder, u64)> {
    let mut b = CertBuilder::new(torus_braid(m + 1, m)?);
    let mut target = half_twist_letters(m, 0);
    let lead = target.len();
    target.extend(half_twist_letters(m + 1, 0));
    b.rewrite_to(&target)?;
    b.end_phase("half twists");
    reduce_half_twist(&mut b, lead + m + (m - 1), m - 1, 0)?;
    b.end_phase("reduce inner half twist");
    reduce_half_twist(&mut b, 0, m, 0)?;
    b.end_phase("reduce leading half twist");
    Ok((b, (m + beta_length(m - 1) + beta_length(m)) as u64))
}

/// Drops the last row of `(a_1...a_{m-1})^{m+1}` and runs the square
/// construction.
fn staircase_composed(m: usize) -> Result<(CertBuilder, u64)> {
    let mut b = CertBuilder::new(torus_braid(m, m + 1)?);
    let len = b.letters().len();
    let last: Vec<usize> = (len - (m - 1)..len).collect();
    b.delete_positions(&last)?;
    b.end_phase("drop last row");
    square_phases(&mut b, m)?;
    Ok((b, square_target_n(m)))
}

/// `T(m, m + 1)` down to `T(2, n)`; tries the direct route and keeps the
/// better of it and the composed one.
pub fn adj_staircase(m: usize) -> Result<AdjacencyCertificate> {
    need_m(m, 2)?;
    let composed = staircase_composed(m)?;
    let (b, n, method) = match staircase_direct(m) {
        Ok((b, n)) if n > composed.1 => (b, n, "direct"),
        _ => (composed.0, composed.1, "composed"),
    };
    let params = [
        ("m", json!(m)),
        ("method", json!(method)),
        ("remark_bound", json!(staircase_remark_bound(m))),
    ];
    Ok(b.finish(
        LinkClaim::new(2, n),
        LinkClaim::new(m as u64, m as u64 + 1),
        metadata("staircase", &params, Some(n)),
    ))
}
