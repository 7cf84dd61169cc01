use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::rational::{self, Rational};
use crate::error::{Error, Result};

/// `y = slope * t + intercept` on `[from, to]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Segment {
    #[serde(with = "rational")]
    pub from: Rational,
    #[serde(with = "rational")]
    pub to: Rational,
    #[serde(with = "rational")]
    pub slope: Rational,
    #[serde(with = "rational")]
    pub intercept: Rational,
}

impl Segment {
    pub fn at(&self, t: &Rational) -> Rational {
        &self.slope * t + &self.intercept
    }
}

/// Continuous piecewise-linear function on a closed interval with exact
/// rational breakpoints. Adjacent segments never share a line.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<Segment>", into = "Vec<Segment>")]
pub struct PiecewiseLinear {
    segments: Vec<Segment>,
}

impl TryFrom<Vec<Segment>> for PiecewiseLinear {
    type Error = Error;
    fn try_from(v: Vec<Segment>) -> Result<Self> {
        PiecewiseLinear::from_segments(v)
    }
}

impl From<PiecewiseLinear> for Vec<Segment> {
    fn from(f: PiecewiseLinear) -> Self {
        f.segments
    }
}

impl PiecewiseLinear {
    /// Validates contiguity, positive segment width and continuity, then
    /// merges neighbours that lie on the same line.
    pub fn from_segments(segments: Vec<Segment>) -> Result<Self> {
        if segments.is_empty() {
            return Err(Error::InvalidPiecewise("no segments".into()));
        }
        for s in &segments {
            if s.from >= s.to {
                return Err(Error::InvalidPiecewise(format!("empty segment [{}, {}]", s.from, s.to)));
            }
        }
        for w in segments.windows(2) {
            if w[0].to != w[1].from {
                return Err(Error::InvalidPiecewise(format!("gap between {} and {}", w[0].to, w[1].from)));
            }
            if w[0].at(&w[0].to) != w[1].at(&w[1].from) {
                return Err(Error::InvalidPiecewise(format!("discontinuous at {}", w[0].to)));
            }
        }
        let mut merged: Vec<Segment> = Vec::with_capacity(segments.len());
        for s in segments {
            match merged.last_mut() {
                Some(last) if last.slope == s.slope && last.intercept == s.intercept => last.to = s.to,
                _ => merged.push(s),
            }
        }
        Ok(PiecewiseLinear { segments: merged })
    }

    pub fn segments(&self) -> &[Segment] {
        &self.segments
    }

    pub fn domain(&self) -> (Rational, Rational) {
        (self.segments[0].from.clone(), self.segments.last().unwrap().to.clone())
    }

    /// Interior breakpoints, left to right.
    pub fn breakpoints(&self) -> Vec<Rational> {
        self.segments[1..].iter().map(|s| s.from.clone()).collect()
    }

    pub fn slopes(&self) -> Vec<Rational> {
        self.segments.iter().map(|s| s.slope.clone()).collect()
    }

    pub fn eval(&self, t: &Rational) -> Result<Rational> {
        let (lo, hi) = self.domain();
        if *t < lo || *t > hi {
            return Err(Error::OutOfDomain { t: t.to_string(), lo: lo.to_string(), hi: hi.to_string() });
        }
        let i = self.segments.partition_point(|s| s.to < *t);
        Ok(self.segments[i].at(t))
    }

    /// Slopes weakly increase from left to right.
    pub fn is_convex(&self) -> bool {
        self.segments.windows(2).all(|w| w[0].slope <= w[1].slope)
    }

    /// Extends a function given on `[0, 1]` to `[0, 2]` by `f(t) = f(2 - t)`.
    pub fn reflect_about_one(&self) -> Result<PiecewiseLinear> {
        let (lo, hi) = self.domain();
        if !lo.is_zero() || !hi.is_one() {
            return Err(Error::InvalidPiecewise(format!("reflection needs domain [0, 1], got [{lo}, {hi}]")));
        }
        let two = rational::int(2);
        let mut segs = self.segments.clone();
        for s in self.segments.iter().rev() {
            // s(2 - t) = -slope * t + (2 slope + intercept)
            segs.push(Segment {
                from: &two - &s.to,
                to: &two - &s.from,
                slope: -s.slope.clone(),
                intercept: &two * &s.slope + &s.intercept,
            });
        }
        PiecewiseLinear::from_segments(segs)
    }
}

/// Pointwise maximum of the lines `t -> slope * t + intercept` over `[lo, hi]`.
///
/// Walks left to right: at each point the active line is the highest one
/// (steepest among ties), and the next breakpoint is the nearest crossing by a
/// steeper line.
pub fn upper_envelope(lines: &[(Rational, Rational)], lo: &Rational, hi: &Rational) -> Result<PiecewiseLinear> {
    if lines.is_empty() {
        return Err(Error::EmptyInput);
    }
    if lo >= hi {
        return Err(Error::InvalidPiecewise(format!("empty domain [{lo}, {hi}]")));
    }
    let mut uniq: Vec<(Rational, Rational)> = lines.to_vec();
    uniq.sort();
    uniq.dedup();
    let value = |i: usize, t: &Rational| &uniq[i].0 * t + &uniq[i].1;

    let start = (0..uniq.len())
        .max_by(|&a, &b| value(a, lo).cmp(&value(b, lo)).then(uniq[a].0.cmp(&uniq[b].0)))
        .unwrap();

    let mut segments = Vec::new();
    let mut cur = start;
    let mut t = lo.clone();
    while t < *hi {
        let (s0, b0) = &uniq[cur];
        let mut next: Option<(Rational, usize)> = None;
        for (j, (s, b)) in uniq.iter().enumerate() {
            if s <= s0 {
                continue;
            }
            let x = (b0 - b) / (s - s0);
            if x <= t || x >= *hi {
                continue;
            }
            let better = match &next {
                None => true,
                Some((bx, bj)) => x < *bx || (x == *bx && *s > uniq[*bj].0),
            };
            if better {
                next = Some((x, j));
            }
        }
        let to = next.as_ref().map_or_else(|| hi.clone(), |(x, _)| x.clone());
        segments.push(Segment { from: t.clone(), to: to.clone(), slope: s0.clone(), intercept: b0.clone() });
        t = to;
        if let Some((_, j)) = next {
            cur = j;
        }
    }
    PiecewiseLinear::from_segments(segments)
}
