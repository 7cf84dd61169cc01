//! Rewriting between equal positive braid words by relation moves only.
//!
//! If `u` and `v` are equal in the positive braid monoid and agree on a
//! prefix, the next letter `x` of `v` left-divides the rest of `u`. It is
//! pulled to the front recursively: past a commuting letter `y` by one swap,
//! past an adjacent generator `y` by first surfacing `x y` behind it and then
//! applying `y x y -> x y x`.

use super::CertBuilder;
use crate::braid::BraidMove;
use crate::error::{Error, Result};

/// Move budget per rewrite; exceeding it means the words were not equal.
const BUDGET: usize = 50_000_000;

struct Engine<'a> {
    b: &'a mut CertBuilder,
    end: usize,
    budget: usize,
}

impl Engine<'_> {
    fn extract(&mut self, s: usize, x: i32) -> Result<()> {
        if s >= self.end {
            return Err(Error::RewriteFailed(format!("generator {x} is not a left divisor")));
        }
        if self.budget == 0 {
            return Err(Error::RewriteFailed("move budget exhausted".into()));
        }
        self.budget -= 1;
        let y = self.b.letters()[s];
        if y == x {
            return Ok(());
        }
        if y < 0 || x < 0 {
            return Err(Error::RewriteFailed("negative letters are outside the positive monoid".into()));
        }
        self.extract(s + 1, x)?;
        if x.abs_diff(y) >= 2 {
            self.b.apply(BraidMove::commute(s))
        } else {
            self.extract(s + 2, y)?;
            self.b.apply(BraidMove::long(s))
        }
    }
}

/// Rewrites letters `start..start + target.len()` of the builder's word into
/// `target`. The segment must equal `target` in the positive braid monoid.
pub(crate) fn rewrite_segment(b: &mut CertBuilder, start: usize, target: &[i32]) -> Result<()> {
    let end = start + target.len();
    if end > b.letters().len() {
        return Err(Error::RewriteFailed("segment runs past the end of the word".into()));
    }
    let mut eng = Engine { b, end, budget: BUDGET };
    for (i, &x) in target.iter().enumerate() {
        eng.extract(start + i, x)?;
    }
    Ok(())
}
