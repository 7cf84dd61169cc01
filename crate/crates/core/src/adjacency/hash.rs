//! Snapshot digests for certificate steps.
//!
//! Per-step digests use a polynomial hash over `F_P`, `P = 2^61 - 1`, that is
//! updated in O(1) for relations and cyclic shifts, so replaying a certificate
//! with many thousand steps stays linear. Phase boundaries additionally carry a
//! SHA-256 of the full word.

use sha2::{Digest, Sha256};

use crate::braid::{BraidMove, BraidWord, RelationForm, ShiftDirection};
use crate::error::Result;

pub const HASH_ALG: &str = "poly61:x=0x1f3d5b79a2c4e687;phase=sha256(le-u32-strands,le-i32-letters)";

const P: u64 = (1 << 61) - 1;
const X: u64 = 0x1f3d_5b79_a2c4_e687 % P;

#[inline]
fn mul(a: u64, b: u64) -> u64 {
    let t = a as u128 * b as u128;
    let r = ((t >> 61) as u64) + ((t as u64) & P);
    if r >= P {
        r - P
    } else {
        r
    }
}

#[inline]
fn add(a: u64, b: u64) -> u64 {
    let s = a + b;
    if s >= P {
        s - P
    } else {
        s
    }
}

#[inline]
fn sub(a: u64, b: u64) -> u64 {
    if a >= b {
        a - b
    } else {
        a + P - b
    }
}

fn pow(mut a: u64, mut e: u64) -> u64 {
    let mut r = 1;
    while e > 0 {
        if e & 1 == 1 {
            r = mul(r, a);
        }
        a = mul(a, a);
        e >>= 1;
    }
    r
}

/// Letter code; never zero so that trailing letters always contribute.
#[inline]
fn code(letter: i32) -> u64 {
    (letter as i64 + (1 << 31) + 1) as u64
}

/// SHA-256 of the canonical byte encoding, lowercase hex.
pub fn sha256_word(w: &BraidWord) -> String {
    hex(&Sha256::digest(w.canonical_bytes()))
}

fn hex(bytes: &[u8]) -> String {
    bytes.iter().map(|b| format!("{b:02x}")).collect()
}

/// A braid word together with its running polynomial hash.
#[derive(Debug, Clone)]
pub struct TrackedWord {
    word: BraidWord,
    hash: u64,
    powers: Vec<u64>,
    x_inv: u64,
}

impl TrackedWord {
    pub fn new(word: BraidWord) -> Self {
        let mut t = TrackedWord { word, hash: 0, powers: vec![1], x_inv: pow(X, P - 2) };
        t.ensure_powers(t.word.len() + 1);
        t.hash = t.hash_from(0, 0);
        t
    }

    pub fn word(&self) -> &BraidWord {
        &self.word
    }

    pub fn into_word(self) -> BraidWord {
        self.word
    }

    fn ensure_powers(&mut self, n: usize) {
        while self.powers.len() <= n {
            let last = *self.powers.last().unwrap();
            self.powers.push(mul(last, X));
        }
    }

    /// Hash of the letters from `start` on, added to `prefix`.
    fn hash_from(&self, start: usize, prefix: u64) -> u64 {
        self.word.letters()[start..]
            .iter()
            .enumerate()
            .fold(prefix, |h, (i, &l)| add(h, mul(code(l), self.powers[start + i])))
    }

    /// Digest of the current snapshot: `<hash>-<strands>-<length>`.
    pub fn digest(&self) -> String {
        format!("{:016x}-{}-{}", self.hash, self.word.strands(), self.word.len())
    }

    pub fn apply(&mut self, mv: &BraidMove) -> Result<()> {
        let len = self.word.len();
        match *mv {
            BraidMove::Relation { position, form } => {
                let span = match form {
                    RelationForm::Long => 3,
                    RelationForm::Commuting => 2,
                };
                let old: Vec<i32> = self.word.letters().get(position..position + span).map(<[i32]>::to_vec).unwrap_or_default();
                self.word.apply_move_in_place(mv)?;
                for (k, &o) in old.iter().enumerate() {
                    let i = position + k;
                    let pw = self.powers[i];
                    self.hash = add(sub(self.hash, mul(code(o), pw)), mul(code(self.word.letters()[i]), pw));
                }
            }
            BraidMove::CyclicShift { direction } => {
                self.word.apply_move_in_place(mv)?;
                let top = self.powers[len - 1];
                match direction {
                    ShiftDirection::FrontToBack => {
                        let c = code(self.word.letters()[len - 1]);
                        self.hash = add(mul(sub(self.hash, c), self.x_inv), mul(c, top));
                    }
                    ShiftDirection::BackToFront => {
                        let c = code(self.word.letters()[0]);
                        self.hash = add(mul(sub(self.hash, mul(c, top)), X), c);
                    }
                }
            }
            BraidMove::FreeReduce { position, .. }
            | BraidMove::InsertGenerator { position, .. }
            | BraidMove::DeleteGenerator { position } => {
                // every later letter moves, so rehash the suffix
                let suffix_old = self.hash_from(position.min(len), 0);
                self.word.apply_move_in_place(mv)?;
                self.ensure_powers(self.word.len() + 1);
                let start = position.min(self.word.len());
                self.hash = self.hash_from(start, sub(self.hash, suffix_old));
            }
        }
        Ok(())
    }
}

/// From-scratch digest, for checking the incremental updates.
pub fn digest(w: &BraidWord) -> String {
    TrackedWord::new(w.clone()).digest()
}
