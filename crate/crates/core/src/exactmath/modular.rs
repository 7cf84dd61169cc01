//! Word-size prime-field arithmetic, interpolation and Chinese remaindering.

use std::sync::{Mutex, OnceLock};

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};

#[inline]
pub fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

#[inline]
pub fn add_mod(a: u64, b: u64, p: u64) -> u64 {
    let s = a + b;
    if s >= p {
        s - p
    } else {
        s
    }
}

#[inline]
pub fn sub_mod(a: u64, b: u64, p: u64) -> u64 {
    if a >= b {
        a - b
    } else {
        a + p - b
    }
}

pub fn pow_mod(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1 % p;
    a %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = mul_mod(r, a, p);
        }
        a = mul_mod(a, a, p);
        e >>= 1;
    }
    r
}

/// Inverse modulo a prime `p`; `a` must be nonzero mod `p`.
pub fn inv_mod(a: u64, p: u64) -> u64 {
    debug_assert!(!a.is_multiple_of(p));
    pow_mod(a, p - 2, p)
}

/// Deterministic Miller-Rabin, exact for all 64-bit inputs.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    const BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    for b in BASES {
        if n.is_multiple_of(b) {
            return n == b;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for a in BASES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

const PRIME_CEILING: u64 = 1 << 62;

/// The `k`-th largest prime below 2^62 (k = 0, 1, ...). Generated lazily and
/// shared across threads.
pub fn prime(k: usize) -> u64 {
    static PRIMES: OnceLock<Mutex<Vec<u64>>> = OnceLock::new();
    let cell = PRIMES.get_or_init(|| Mutex::new(Vec::new()));
    let mut primes = cell.lock().unwrap_or_else(|e| e.into_inner());
    while primes.len() <= k {
        let mut c = primes.last().copied().unwrap_or(PRIME_CEILING + 1) - 2;
        while !is_prime(c) {
            c -= 2;
        }
        primes.push(c);
    }
    primes[k]
}

/// Coefficients (constant term first) of the unique polynomial of degree
/// `< xs.len()` through the points `(xs[i], ys[i])` over `F_p`.
pub fn interpolate(xs: &[u64], ys: &[u64], p: u64) -> Vec<u64> {
    let n = xs.len();
    assert_eq!(n, ys.len());
    // divided differences in place
    let mut c = ys.to_vec();
    for j in 1..n {
        for i in (j..n).rev() {
            let num = sub_mod(c[i], c[i - 1], p);
            let den = sub_mod(xs[i], xs[i - j], p);
            c[i] = mul_mod(num, inv_mod(den, p), p);
        }
    }
    // expand the Newton form by Horner's scheme
    let mut poly = vec![0u64; n];
    for i in (0..n).rev() {
        // poly = poly * (x - xs[i]) + c[i]
        for k in (1..n).rev() {
            let shifted = poly[k - 1];
            poly[k] = sub_mod(shifted, mul_mod(poly[k], xs[i], p), p);
        }
        poly[0] = sub_mod(c[i], mul_mod(poly[0], xs[i], p), p);
    }
    poly
}

/// Incremental Chinese remaindering of a vector of residues, with the final
/// lift into the symmetric range `(-M/2, M/2]`.
#[derive(Debug, Clone)]
pub struct CrtAccumulator {
    modulus: BigUint,
    values: Vec<BigUint>,
}

impl CrtAccumulator {
    pub fn new(len: usize) -> Self {
        CrtAccumulator { modulus: BigUint::one(), values: vec![BigUint::zero(); len] }
    }

    pub fn modulus(&self) -> &BigUint {
        &self.modulus
    }

    pub fn absorb(&mut self, residues: &[u64], p: u64) {
        assert_eq!(residues.len(), self.values.len());
        let pb = BigUint::from(p);
        let m_mod_p = (&self.modulus % &pb).iter_u64_digits().next().unwrap_or(0);
        let m_inv = inv_mod(m_mod_p, p);
        for (v, &r) in self.values.iter_mut().zip(residues) {
            let v_mod_p = (&*v % &pb).iter_u64_digits().next().unwrap_or(0);
            let k = mul_mod(sub_mod(r, v_mod_p, p), m_inv, p);
            *v += &self.modulus * k;
        }
        self.modulus *= pb;
    }

    pub fn symmetric(&self) -> Vec<BigInt> {
        let half = &self.modulus >> 1u32;
        let m = BigInt::from(self.modulus.clone());
        self.values
            .iter()
            .map(|v| if *v > half { BigInt::from(v.clone()) - &m } else { BigInt::from(v.clone()) })
            .collect()
    }
}

/// Residue of a signed integer modulo `p`.
pub fn reduce(c: &BigInt, p: u64) -> u64 {
    let pb = BigInt::from(p);
    let r = ((c % &pb) + &pb) % &pb;
    r.iter_u64_digits().next().unwrap_or(0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primality_against_trial_division() {
        let trial = |n: u64| n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| !n.is_multiple_of(d));
        for n in 0..5000 {
            assert_eq!(is_prime(n), trial(n), "{n}");
        }
        // strong pseudoprime to several small bases
        assert!(!is_prime(3_215_031_751));
        assert!(is_prime((1u64 << 61) - 1));
    }

    #[test]
    fn primes_are_distinct_and_below_ceiling() {
        let ps: Vec<u64> = (0..5).map(prime).collect();
        assert!(ps.windows(2).all(|w| w[0] > w[1]));
        assert!(ps.iter().all(|&p| p < PRIME_CEILING && is_prime(p)));
    }

    #[test]
    fn interpolation_recovers_polynomial() {
        let p = prime(0);
        let coeffs = [5u64, 0, p - 3, 7, 1];
        let xs: Vec<u64> = (1..=5).collect();
        let ys: Vec<u64> = xs
            .iter()
            .map(|&x| coeffs.iter().rev().fold(0, |acc, &c| add_mod(mul_mod(acc, x, p), c, p)))
            .collect();
        assert_eq!(interpolate(&xs, &ys, p), coeffs.to_vec());
    }

    #[test]
    fn crt_lifts_signed_values() {
        let target: Vec<BigInt> = vec![
            BigInt::from(-1),
            "123456789012345678901234567890123".parse().unwrap(),
            "-98765432109876543210987654321".parse().unwrap(),
        ];
        let mut acc = CrtAccumulator::new(3);
        for k in 0..3 {
            let p = prime(k);
            let r: Vec<u64> = target.iter().map(|c| reduce(c, p)).collect();
            acc.absorb(&r, p);
        }
        assert_eq!(acc.symmetric(), target);
    }
}
