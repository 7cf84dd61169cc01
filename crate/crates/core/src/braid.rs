//! Braid words on a fixed number of strands, the elementary moves that connect
//! them, and a few combinatorial read-outs (permutation, fence diagrams).
//!
//! Letters are signed, 1-based generator indices: `e > 0` is `a_e`, `e < 0` is
//! `a_{|e|}^{-1}`. Words are read bottom-to-top, so the first letter acts first.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawWord")]
pub struct BraidWord {
    strands: usize,
    letters: Vec<i32>,
}

#[derive(Deserialize)]
struct RawWord {
    strands: usize,
    letters: Vec<i32>,
}

impl TryFrom<RawWord> for BraidWord {
    type Error = Error;

    fn try_from(raw: RawWord) -> Result<Self> {
        BraidWord::new(raw.strands, raw.letters)
    }
}

impl BraidWord {
    pub fn new(strands: usize, letters: Vec<i32>) -> Result<Self> {
        if strands == 0 {
            return Err(Error::InvalidWord("a braid needs at least one strand".into()));
        }
        for &e in &letters {
            check_letter(strands, e)?;
        }
        Ok(BraidWord { strands, letters })
    }

    pub fn identity(strands: usize) -> Result<Self> {
        BraidWord::new(strands, Vec::new())
    }

    pub fn strands(&self) -> usize {
        self.strands
    }

    pub fn letters(&self) -> &[i32] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn is_positive(&self) -> bool {
        self.letters.iter().all(|&e| e > 0)
    }

    /// Number of positive letters minus number of negative letters.
    pub fn algebraic_length(&self) -> i64 {
        self.letters.iter().map(|&e| if e > 0 { 1 } else { -1 }).sum()
    }

    /// Same quantity as [`algebraic_length`](Self::algebraic_length); kept as a
    /// separate name because closures report it under this label.
    pub fn exponent_sum(&self) -> i64 {
        self.algebraic_length()
    }

    /// `self` followed by `other` (`self` acts first).
    pub fn concat(&self, other: &BraidWord) -> Result<BraidWord> {
        if self.strands != other.strands {
            return Err(Error::InvalidWord(format!(
                "cannot concatenate words on {} and {} strands",
                self.strands, other.strands
            )));
        }
        let mut letters = self.letters.clone();
        letters.extend_from_slice(&other.letters);
        Ok(BraidWord { strands: self.strands, letters })
    }

    pub fn inverse(&self) -> BraidWord {
        BraidWord {
            strands: self.strands,
            letters: self.letters.iter().rev().map(|&e| -e).collect(),
        }
    }

    pub fn power(&self, k: usize) -> BraidWord {
        BraidWord {
            strands: self.strands,
            letters: self.letters.repeat(k),
        }
    }

    /// The same letters viewed on `strands` strands (must not drop a used index).
    pub fn with_strands(&self, strands: usize) -> Result<BraidWord> {
        BraidWord::new(strands, self.letters.clone())
    }

    pub fn apply_move(&self, mv: &BraidMove) -> Result<BraidWord> {
        let mut w = self.clone();
        w.apply_move_in_place(mv)?;
        Ok(w)
    }

    /// Applies `mv` in place. The word is left untouched on error.
    pub fn apply_move_in_place(&mut self, mv: &BraidMove) -> Result<()> {
        let len = self.letters.len();
        match *mv {
            BraidMove::FreeReduce { position, op } => match op {
                FreeOp::Insert { letter } => {
                    check_letter(self.strands, letter)?;
                    check_position(position, len + 1)?;
                    self.letters.splice(position..position, [letter, -letter]);
                }
                FreeOp::Remove => {
                    check_position(position + 1, len)?;
                    let (x, y) = (self.letters[position], self.letters[position + 1]);
                    if x != -y {
                        return Err(Error::IllegalMove(format!(
                            "letters {x}, {y} at {position} are not mutually inverse"
                        )));
                    }
                    self.letters.drain(position..position + 2);
                }
            },
            BraidMove::Relation { position, form } => match form {
                RelationForm::Long => {
                    check_position(position + 2, len)?;
                    let (x, y, z) = (
                        self.letters[position],
                        self.letters[position + 1],
                        self.letters[position + 2],
                    );
                    let same_sign = (x > 0) == (y > 0);
                    if x != z || !same_sign || x.abs().abs_diff(y.abs()) != 1 {
                        return Err(Error::IllegalMove(format!(
                            "no long braid relation at {position}: ({x}, {y}, {z})"
                        )));
                    }
                    self.letters[position] = y;
                    self.letters[position + 1] = x;
                    self.letters[position + 2] = y;
                }
                RelationForm::Commuting => {
                    check_position(position + 1, len)?;
                    let (x, y) = (self.letters[position], self.letters[position + 1]);
                    if x.abs().abs_diff(y.abs()) < 2 {
                        return Err(Error::IllegalMove(format!(
                            "generators {x} and {y} at {position} do not commute"
                        )));
                    }
                    self.letters.swap(position, position + 1);
                }
            },
            BraidMove::CyclicShift { direction } => {
                if self.letters.is_empty() {
                    return Err(Error::IllegalMove("cannot shift an empty word".into()));
                }
                match direction {
                    ShiftDirection::FrontToBack => self.letters.rotate_left(1),
                    ShiftDirection::BackToFront => self.letters.rotate_right(1),
                }
            }
            BraidMove::InsertGenerator { position, index } => {
                let letter = i32::try_from(index)
                    .map_err(|_| Error::IndexOutOfRange { index: index as usize, limit: self.strands - 1 })?;
                check_letter(self.strands, letter)?;
                check_position(position, len + 1)?;
                self.letters.insert(position, letter);
            }
            BraidMove::DeleteGenerator { position } => {
                check_position(position, len)?;
                if self.letters[position] < 0 {
                    return Err(Error::IllegalMove(format!(
                        "only positive generators may be deleted (found {} at {position})",
                        self.letters[position]
                    )));
                }
                self.letters.remove(position);
            }
        }
        Ok(())
    }

    /// Canonical byte encoding used for snapshot hashing: strand count as a
    /// little-endian `u32`, then each letter as a little-endian `i32`.
    pub fn canonical_bytes(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(4 + 4 * self.letters.len());
        out.extend_from_slice(&(self.strands as u32).to_le_bytes());
        for &e in &self.letters {
            out.extend_from_slice(&e.to_le_bytes());
        }
        out
    }
}

fn check_letter(strands: usize, e: i32) -> Result<()> {
    let idx = e.unsigned_abs() as usize;
    if e == 0 || idx >= strands {
        return Err(Error::IndexOutOfRange { index: idx, limit: strands.saturating_sub(1) });
    }
    Ok(())
}

/// `position` must be a valid index into a sequence of length `len`.
fn check_position(position: usize, len: usize) -> Result<()> {
    if position >= len {
        return Err(Error::IndexOutOfRange { index: position, limit: len });
    }
    Ok(())
}

/// Literal syntax `s:<strands> w:<l1>,<l2>,...`; the letter list may be empty
/// (`s:2 w:`) or omitted.
impl FromStr for BraidWord {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidWord(format!("cannot parse braid literal {s:?}"));
        let mut strands = None;
        let mut letters = Vec::new();
        for part in s.split_whitespace() {
            if let Some(n) = part.strip_prefix("s:") {
                strands = Some(n.parse::<usize>().map_err(|_| bad())?);
            } else if let Some(ws) = part.strip_prefix("w:") {
                for tok in ws.split(',').filter(|t| !t.is_empty()) {
                    letters.push(tok.trim().parse::<i32>().map_err(|_| bad())?);
                }
            } else {
                return Err(bad());
            }
        }
        BraidWord::new(strands.ok_or_else(bad)?, letters)
    }
}

impl fmt::Display for BraidWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "s:{} w:", self.strands)?;
        for (i, e) in self.letters.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{e}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum FreeOp {
    /// Insert `letter` followed by its inverse.
    Insert { letter: i32 },
    Remove,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RelationForm {
    /// `a_i a_j a_i <-> a_j a_i a_j` for `|i - j| = 1`.
    Long,
    /// `a_i a_j <-> a_j a_i` for `|i - j| >= 2`.
    Commuting,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ShiftDirection {
    /// `a alpha -> alpha a`
    FrontToBack,
    /// `alpha a -> a alpha`
    BackToFront,
}

/// Elementary operations on braid words. The first three keep the closure's
/// link type; the last two change the algebraic length by one.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "type")]
pub enum BraidMove {
    FreeReduce { position: usize, op: FreeOp },
    Relation { position: usize, form: RelationForm },
    CyclicShift { direction: ShiftDirection },
    InsertGenerator { position: usize, index: u32 },
    DeleteGenerator { position: usize },
}

impl BraidMove {
    pub fn long(position: usize) -> Self {
        BraidMove::Relation { position, form: RelationForm::Long }
    }

    pub fn commute(position: usize) -> Self {
        BraidMove::Relation { position, form: RelationForm::Commuting }
    }

    pub fn delete(position: usize) -> Self {
        BraidMove::DeleteGenerator { position }
    }

    pub fn is_deletion(&self) -> bool {
        matches!(self, BraidMove::DeleteGenerator { .. })
    }
}

/// `(a_1 a_2 ... a_{p-1})^q` on `p` strands.
pub fn torus_braid(p: usize, q: usize) -> Result<BraidWord> {
    if p == 0 || q == 0 {
        return Err(Error::InvalidParameter(format!("torus braid needs p, q >= 1 (got {p}, {q})")));
    }
    let row: Vec<i32> = (1..p as i32).collect();
    BraidWord::new(p, row.repeat(q))
}

/// Letters of the half twist `(a_1...a_{m-1})(a_1...a_{m-2})...(a_1)`, with
/// every index shifted up by `shift`.
pub(crate) fn half_twist_letters(m: usize, shift: i32) -> Vec<i32> {
    let mut out = Vec::with_capacity(m * m.saturating_sub(1) / 2);
    for top in (1..m as i32).rev() {
        out.extend((1..=top).map(|i| i + shift));
    }
    out
}

/// The positive half twist on `m` strands.
pub fn half_twist(m: usize) -> Result<BraidWord> {
    if m == 0 {
        return Err(Error::InvalidParameter("half twist needs m >= 1".into()));
    }
    BraidWord::new(m, half_twist_letters(m, 0))
}

/// A permutation of strand positions; `image[i]` is where the strand starting
/// at position `i` (0-based) ends up.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Permutation {
    image: Vec<usize>,
}

impl Permutation {
    pub fn identity(n: usize) -> Self {
        Permutation { image: (0..n).collect() }
    }

    pub fn image(&self) -> &[usize] {
        &self.image
    }

    /// `self` first, then `next`.
    pub fn then(&self, next: &Permutation) -> Permutation {
        Permutation { image: self.image.iter().map(|&i| next.image[i]).collect() }
    }

    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.image.len()];
        let mut out = Vec::new();
        for start in 0..self.image.len() {
            if seen[start] {
                continue;
            }
            let mut cycle = Vec::new();
            let mut i = start;
            while !seen[i] {
                seen[i] = true;
                cycle.push(i + 1);
                i = self.image[i];
            }
            out.push(cycle);
        }
        out
    }

    pub fn cycle_count(&self) -> usize {
        self.cycles().len()
    }

    pub fn is_identity(&self) -> bool {
        self.image.iter().enumerate().all(|(i, &j)| i == j)
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cycles: Vec<_> = self.cycles().into_iter().filter(|c| c.len() > 1).collect();
        if cycles.is_empty() {
            return f.write_str("()");
        }
        for c in cycles {
            let parts: Vec<String> = c.iter().map(|i| i.to_string()).collect();
            write!(f, "({})", parts.join(" "))?;
        }
        Ok(())
    }
}

/// Underlying permutation; each letter swaps positions `|e|` and `|e| + 1`.
/// Composition follows the word order: `permutation(uv) = permutation(u).then(permutation(v))`.
pub fn permutation(w: &BraidWord) -> Permutation {
    // Track which strand occupies each position, then invert.
    let n = w.strands();
    let mut at: Vec<usize> = (0..n).collect();
    for &e in w.letters() {
        let i = e.unsigned_abs() as usize;
        at.swap(i - 1, i);
    }
    let mut image = vec![0; n];
    for (pos, &strand) in at.iter().enumerate() {
        image[strand] = pos;
    }
    Permutation { image }
}

const RUNG: &str = "---";
const GAP: &str = "   ";

/// ASCII fence diagram: one `|` per strand, one `---` rung per letter. The
/// first letter is drawn at the bottom.
pub fn fence_render(w: &BraidWord) -> Result<String> {
    if !w.is_positive() {
        return Err(Error::NotPositive);
    }
    let n = w.strands();
    let row = |rung: Option<usize>| {
        let mut line = String::from("|");
        for gap in 1..n {
            line.push_str(if rung == Some(gap) { RUNG } else { GAP });
            line.push('|');
        }
        line
    };
    let mut lines = vec![row(None)];
    for &e in w.letters().iter().rev() {
        lines.push(row(Some(e as usize)));
    }
    lines.push(row(None));
    let mut out = lines.join("\n");
    out.push('\n');
    Ok(out)
}
