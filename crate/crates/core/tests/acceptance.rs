#![allow(clippy::type_complexity)]
//! Acceptance criteria. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any fails. Oracles are written out here independently of the
//! library's formulas.

use std::collections::BTreeMap;
use std::time::{Duration, Instant};

use braidlab::adjacency::{self, AdjacencyCertificate, Verdict};
use braidlab::closure::{alexander_of_closure, alexander_of_closure_exact};
use braidlab::cobordism::{chain_genus, distance, optimal_exists};
use braidlab::exactmath::piecewise::Segment;
use braidlab::exactmath::rational::{int, ratio};
use braidlab::invariants::{alexander_torus, upsilon, upsilon_function};
use braidlab::{torus_braid, LaurentPoly, PiecewiseLinear, Rational, TorusKnotId};
use num_traits::ToPrimitive;
use rayon::prelude::*;

type Outcome = Result<String, String>;

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

/// υ of a positive torus knot for braid index 2, 3, 4.
fn upsilon_oracle(p: u64, q: u64) -> Option<i64> {
    let q = q as i64;
    match p {
        1 => Some(0),
        2 => Some(-(q - 1) / 2),
        3 if q % 3 == 1 => Some(-2 * (q - 1) / 3),
        3 => Some(-2 * (q - 2) / 3 - 1),
        4 => Some(-2 * ((q - 1) / 2)),
        _ => None,
    }
}

fn genus_oracle(p: u64, q: u64) -> i64 {
    ((p - 1) * (q - 1) / 2) as i64
}

fn knot(s: i8, p: u64, q: u64) -> TorusKnotId {
    TorusKnotId::new(s, p, q).unwrap()
}

fn ac1_closed_forms() -> Outcome {
    let mut checked = 0;
    for p in 2..=4u64 {
        for q in p + 1..=61 {
            if gcd(p, q) != 1 {
                continue;
            }
            let want = upsilon_oracle(p, q).unwrap();
            let got = upsilon(&knot(1, p, q));
            ensure(got == want, || format!("υ(T({p},{q})) = {got}, expected {want}"))?;
            checked += 1;
        }
    }
    Ok(format!("{checked} knots"))
}

/// Profile on [0, 1] given as (from, to, slope, intercept), extended to
/// [0, 2] by Υ(t) = Υ(2 - t).
fn symmetric_profile(half: &[(Rational, Rational, i64, i64)]) -> PiecewiseLinear {
    let mut segs: Vec<Segment> = half
        .iter()
        .map(|(a, b, s, c)| Segment { from: a.clone(), to: b.clone(), slope: int(*s), intercept: int(*c) })
        .collect();
    let mirrored: Vec<Segment> = half
        .iter()
        .rev()
        .map(|(a, b, s, c)| Segment {
            from: int(2) - b,
            to: int(2) - a,
            slope: int(-s),
            intercept: int(c + 2 * s),
        })
        .collect();
    segs.extend(mirrored);
    PiecewiseLinear::from_segments(segs).unwrap()
}

fn ac2_profiles() -> Outcome {
    let (z, one, h, tt) = (int(0), int(1), ratio(1, 2), ratio(2, 3));
    let mut checked = 0;
    for n in 1..=5i64 {
        let cases: Vec<(u64, u64, Vec<(Rational, Rational, i64, i64)>)> = vec![
            (3, 3 * n as u64 + 1, vec![(z.clone(), tt.clone(), -3 * n, 0), (tt.clone(), one.clone(), 0, -2 * n)]),
            (
                3,
                3 * n as u64 + 2,
                vec![(z.clone(), tt.clone(), -(3 * n + 1), 0), (tt.clone(), one.clone(), -1, -2 * n)],
            ),
            (4, 4 * n as u64 + 1, vec![(z.clone(), h.clone(), -6 * n, 0), (h.clone(), one.clone(), -2 * n, -2 * n)]),
            (
                4,
                4 * n as u64 + 3,
                vec![
                    (z.clone(), h.clone(), -(6 * n + 3), 0),
                    (h.clone(), tt.clone(), -(2 * n + 3), -2 * n),
                    (tt.clone(), one.clone(), -2 * n, -2 * n - 2),
                ],
            ),
        ];
        for (p, q, half) in cases {
            let want = symmetric_profile(&half);
            let got = upsilon_function(p, q).map_err(|e| e.to_string())?;
            ensure(got == want, || format!("Υ(T({p},{q})) = {:?}, expected {:?}", got.segments(), want.segments()))?;
            checked += 1;
        }
    }
    Ok(format!("{checked} profiles"))
}

fn ac3_consecutive() -> Outcome {
    for m in 2..=14u64 {
        let want = -((m * m / 4) as i64);
        let got = upsilon(&knot(1, m, m + 1));
        ensure(got == want, || format!("υ(T({m},{})) = {got}, expected {want}", m + 1))?;
    }
    Ok("m = 2..14".into())
}

/// `(1 - t^{pq})(1 - t) / ((1 - t^p)(1 - t^q))` by long division on dense
/// integer vectors.
fn torus_alexander_oracle(p: usize, q: usize) -> Vec<i64> {
    let mul = |a: &[i64], b: &[i64]| {
        let mut r = vec![0i64; a.len() + b.len() - 1];
        for (i, x) in a.iter().enumerate() {
            for (j, y) in b.iter().enumerate() {
                r[i + j] += x * y;
            }
        }
        r
    };
    let one_minus = |k: usize| {
        let mut v = vec![0i64; k + 1];
        v[0] = 1;
        v[k] = -1;
        v
    };
    let mut num = mul(&one_minus(p * q), &one_minus(1));
    let den = mul(&one_minus(p), &one_minus(q));
    let dl = den.len();
    let mut quot = vec![0i64; num.len() - dl + 1];
    for i in (0..quot.len()).rev() {
        let c = num[i + dl - 1] / den[dl - 1];
        quot[i] = c;
        for (j, d) in den.iter().enumerate() {
            num[i + j] -= c * d;
        }
    }
    assert!(num.iter().all(|&c| c == 0), "inexact division");
    quot
}

fn dense(poly: &LaurentPoly) -> Vec<i64> {
    let lo = poly.min_exp().unwrap();
    let hi = poly.max_exp().unwrap();
    let mut v: Vec<i64> = (lo..=hi).map(|e| poly.coeff(e).to_i64().unwrap()).collect();
    if v[0] < 0 {
        v.iter_mut().for_each(|c| *c = -*c);
    }
    v
}

fn ac4_burau() -> Outcome {
    let mut checked = 0;
    for p in 2..=8usize {
        for q in p + 1..=8 {
            if gcd(p as u64, q as u64) != 1 {
                continue;
            }
            let want = torus_alexander_oracle(p, q);
            let w = torus_braid(p, q).unwrap();
            let modular = dense(&alexander_of_closure(&w).map_err(|e| e.to_string())?);
            let exact = dense(&alexander_of_closure_exact(&w).map_err(|e| e.to_string())?);
            let formula = dense(&alexander_torus(p as u64, q as u64).map_err(|e| e.to_string())?);
            ensure(modular == want && exact == want && formula == want, || {
                format!("T({p},{q}): modular {modular:?}, exact {exact:?}, formula {formula:?}, oracle {want:?}")
            })?;
            checked += 1;
        }
    }
    Ok(format!("{checked} pairs"))
}

/// Expected `n` per construction, from the residue formulas.
fn index3_n(m: u64) -> u64 {
    let l = m / 3;
    match m % 3 {
        0 => 5 * l - 1,
        1 => 5 * l + 1,
        _ => 5 * l + 3,
    }
}

fn index4_n(m: u64) -> u64 {
    if m % 2 == 1 {
        5 * ((m - 1) / 2) + 1
    } else {
        5 * ((m - 2) / 2) + 3
    }
}

fn square_n(m: u64) -> u64 {
    let l = m / 3;
    match m % 3 {
        0 => 6 * l * l - 3 * l + 1,
        1 => 6 * l * l + l + 1,
        _ => 6 * l * l + 5 * l + 2,
    }
}

struct Case {
    label: String,
    cert: AdjacencyCertificate,
    expected_source: (u64, u64),
    expected_target: (u64, u64),
}

fn build_cases() -> Result<Vec<Case>, String> {
    let mut specs: Vec<(String, (u64, u64), (u64, u64), Box<dyn Fn() -> braidlab::Result<AdjacencyCertificate> + Send + Sync>)> =
        Vec::new();
    for a in 1..=10usize {
        for b in 1..=10usize {
            for n in 1..=a {
                for m in 1..=b {
                    specs.push((
                        format!("grid({n},{m},{a},{b})"),
                        (n as u64, m as u64),
                        (a as u64, b as u64),
                        Box::new(move || adjacency::adj_grid(n, m, a, b)),
                    ));
                }
            }
        }
    }
    for m in 2..=30usize {
        let mu = m as u64;
        specs.push((format!("index3({m})"), (2, index3_n(mu)), (3, mu), Box::new(move || adjacency::adj_index3(m))));
        specs.push((format!("index4({m})"), (2, index4_n(mu)), (4, mu), Box::new(move || adjacency::adj_index4(m))));
    }
    for m in 2..=20usize {
        let mu = m as u64;
        specs.push((format!("square({m})"), (2, square_n(mu)), (mu, mu), Box::new(move || adjacency::adj_square(m))));
    }
    specs
        .into_par_iter()
        .map(|(label, src, tgt, f)| {
            let cert = f().map_err(|e| format!("{label}: {e}"))?;
            Ok(Case { label, cert, expected_source: src, expected_target: tgt })
        })
        .collect()
}

fn ac5_certificates(cases: &[Case]) -> Outcome {
    let failures: Vec<String> = cases
        .par_iter()
        .filter_map(|c| {
            let v = adjacency::verify(&c.cert);
            let src = (c.cert.source.p, c.cert.source.q);
            let tgt = (c.cert.target.p, c.cert.target.q);
            if v != Verdict::Valid {
                Some(format!("{}: {v}", c.label))
            } else if src != c.expected_source || tgt != c.expected_target {
                Some(format!("{}: claims {src:?} <- {tgt:?}, expected {:?} <- {:?}", c.label, c.expected_source, c.expected_target))
            } else {
                None
            }
        })
        .collect();
    ensure(failures.is_empty(), || format!("{} failures, first: {}", failures.len(), failures[0]))?;
    for c in cases.iter().filter(|c| c.cert.metadata.construction == "square") {
        let m = c.cert.target.p as f64;
        let n = c.cert.source.q as f64;
        let bound = (2.0 * m * m + 4.0) / 3.0 - m;
        ensure(n >= bound - 1.0, || format!("{}: n = {n} below growth floor {}", c.label, bound - 1.0))?;
        ensure(n <= bound && n + 1.0 > bound, || format!("{}: n = {n} is not the largest integer <= {bound}", c.label))?;
    }
    Ok(format!("{} certificates", cases.len()))
}

fn ac6_sharpness() -> Outcome {
    let mut checked = 0;
    for m in 2..=30usize {
        for (p, achieved) in [
            (3u64, adjacency::adj_index3(m).map_err(|e| e.to_string())?.source.q),
            (4u64, adjacency::adj_index4(m).map_err(|e| e.to_string())?.source.q),
        ] {
            let m = m as u64;
            // below p the knot is T(m, p), of smaller braid index
            if m < p || gcd(p, m) != 1 {
                continue;
            }
            let other = knot(1, p, m);
            for n in (3..=2 * achieved + 7).step_by(2) {
                let opt = optimal_exists(n, &other).map_err(|e| e.to_string())?;
                ensure(opt == (achieved >= n), || {
                    format!("T(2,{n}) vs T({p},{m}): optimal_exists = {opt}, constructed n = {achieved}")
                })?;
                let d = distance(&knot(1, 2, n), &other).map_err(|e| e.to_string())?.distance as i64;
                let gap = (genus_oracle(2, n) - genus_oracle(p, m)).abs();
                ensure((d == gap) == opt, || {
                    format!("T(2,{n}) vs T({p},{m}): distance {d}, genus gap {gap}, optimal_exists {opt}")
                })?;
                checked += 1;
            }
        }
    }
    Ok(format!("{checked} pairs"))
}

fn ac7_distance_table() -> Outcome {
    let mut knots = vec![TorusKnotId::unknot()];
    for p in 2..=5u64 {
        for q in p + 1..=25 {
            if gcd(p, q) == 1 {
                knots.push(knot(1, p, q));
                knots.push(knot(-1, p, q));
            }
        }
    }
    let lb = |k: &TorusKnotId| -> Option<(i64, i64)> {
        let g = genus_oracle(k.p(), k.q());
        let s = k.sign() as i64;
        Some((-s * g, s * upsilon_oracle(k.p(), k.q())?))
    };
    let mut table: BTreeMap<(usize, usize), i64> = BTreeMap::new();
    for (i, k) in knots.iter().enumerate() {
        for (j, t) in knots.iter().enumerate() {
            if k.braid_index() + t.braid_index() > 6 {
                continue;
            }
            let r = distance(k, t).map_err(|e| format!("d({k}, {t}): {e}"))?;
            let d = r.distance as i64;
            ensure(chain_genus(&r.witness) == int(d), || format!("d({k}, {t}): witness genera do not sum to {d}"))?;
            let want = if k.is_unknot() || t.is_unknot() || k.sign() != t.sign() {
                genus_oracle(k.p(), k.q()) + genus_oracle(t.p(), t.q())
            } else {
                let (a, b) = (lb(k).unwrap(), lb(t).unwrap());
                (a.0 - b.0).abs().max((a.1 - b.1).abs())
            };
            ensure(d == want, || format!("d({k}, {t}) = {d}, expected {want}"))?;
            table.insert((i, j), d);
        }
    }
    for (&(i, j), &d) in &table {
        ensure(table[&(j, i)] == d, || format!("asymmetric at {} {}", knots[i], knots[j]))?;
    }
    let n = knots.len();
    let mut triples = 0u64;
    for i in 0..n {
        for j in 0..n {
            let Some(&dij) = table.get(&(i, j)) else { continue };
            for k in 0..n {
                if let (Some(&dik), Some(&dkj)) = (table.get(&(i, k)), table.get(&(k, j))) {
                    ensure(dij <= dik + dkj, || {
                        format!("triangle fails: {} {} via {}", knots[i], knots[j], knots[k])
                    })?;
                    triples += 1;
                }
            }
        }
    }
    Ok(format!("{} pairs, {triples} triangles", table.len()))
}

fn chi(p: u64, q: u64) -> i64 {
    let (p, q) = (p as i64, q as i64);
    p + q - p * q
}

fn ac8_deletions(cases: &[Case]) -> Outcome {
    for c in cases {
        let (s, t) = (c.cert.source, c.cert.target);
        let want = chi(s.p, s.q) - chi(t.p, t.q);
        let got = c.cert.deletions() as i64;
        ensure(got == want, || format!("{}: {got} deletions, χ difference {want}", c.label))?;
    }
    Ok(format!("{} certificates", cases.len()))
}

fn report(id: &str, name: &str, limit: Duration, f: impl FnOnce() -> Outcome) -> bool {
    let start = Instant::now();
    let outcome = f();
    let took = start.elapsed();
    let (ok, detail) = match outcome {
        Ok(d) if took <= limit => (true, d),
        Ok(d) => (false, format!("{d}; too slow")),
        Err(e) => (false, e),
    };
    let verdict = if ok { "PASS" } else { "FAIL" };
    println!("{verdict} {id} {name}: {detail} [{:.2?} / limit {:?}]", took, limit);
    ok
}

fn main() {
    let secs = Duration::from_secs;
    let mut ok = true;
    ok &= report("AC1", "closed-form υ, p in 2..4, q <= 61", secs(1), ac1_closed_forms);
    ok &= report("AC2", "Υ profiles for n = 1..5", secs(5), ac2_profiles);
    ok &= report("AC3", "υ(T(m,m+1)) = -⌊m²/4⌋, m <= 14", secs(5), ac3_consecutive);
    ok &= report("AC4", "Burau Alexander polynomial, 2 <= p < q <= 8", secs(5), ac4_burau);

    let start = Instant::now();
    let cases = build_cases();
    let build_time = start.elapsed();
    match &cases {
        Ok(cases) => {
            let budget = secs(60).saturating_sub(build_time);
            ok &= report("AC5", "certificate suite verifies with exact n", budget, || ac5_certificates(cases));
        }
        Err(e) => {
            println!("FAIL AC5 certificate suite: {e}");
            ok = false;
        }
    }
    ok &= report("AC6", "sharpness of index 3 and 4 constructions, m <= 30", secs(30), ac6_sharpness);
    ok &= report("AC7", "distance table, braid index sum <= 6, q <= 25", secs(10), ac7_distance_table);
    match &cases {
        Ok(cases) => ok &= report("AC8", "deletions equal the χ difference", secs(5), || ac8_deletions(cases)),
        Err(e) => {
            println!("FAIL AC8 deletions equal the χ difference: {e}");
            ok = false;
        }
    }
    if !ok {
        std::process::exit(1);
    }
}
