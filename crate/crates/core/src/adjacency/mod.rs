//! Subword-adjacency certificates: explicit braid-move sequences from a
//! positive word for a torus link `T` down to one for a smaller link `K`,
//! together with an independent step-by-step verifier.

mod constructions;
pub mod hash;
mod rewrite;

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::braid::{BraidMove, BraidWord};
use crate::closure::{fingerprint, identify_torus2, torus_fingerprint, ClosureFingerprint};
use crate::error::{Error, Result};
use hash::TrackedWord;

pub use constructions::{
    adj_grid, adj_index3, adj_index4, adj_square, adj_staircase, beta_length, half_twist_reduce, index3_target_n,
    index4_target_n, square_target_n, staircase_remark_bound, HalfTwistReduction,
};

pub const CERTIFICATE_VERSION: u32 = 1;

/// Torus knot or link `T(p, q)` named in a certificate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct LinkClaim {
    pub p: u64,
    pub q: u64,
}

impl LinkClaim {
    pub fn new(p: u64, q: u64) -> Self {
        LinkClaim { p, q }
    }

    /// Euler characteristic of the fiber surface, `p + q - pq`.
    pub fn chi(&self) -> i64 {
        let (p, q) = (self.p as i64, self.q as i64);
        p + q - p * q
    }

    /// `n` when the claim is `T(2, n)` or `T(n, 2)`.
    pub fn two_strand(&self) -> Option<u64> {
        match (self.p, self.q) {
            (2, n) | (n, 2) => Some(n),
            _ => None,
        }
    }
}

impl std::fmt::Display for LinkClaim {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "T({},{})", self.p, self.q)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Step {
    #[serde(rename = "move")]
    pub mv: BraidMove,
    pub hash: String,
}

/// Named block of steps `[start, end)`, with the SHA-256 of the word after it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Phase {
    pub name: String,
    pub start: usize,
    pub end: usize,
    pub word_sha256: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Metadata {
    pub construction: String,
    pub params: BTreeMap<String, serde_json::Value>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub achieved_n: Option<u64>,
}

/// `source` is the smaller link, reached from `initial_word` (a word for
/// `target`) by replaying `steps`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AdjacencyCertificate {
    pub version: u32,
    pub hash_alg: String,
    pub strands: usize,
    pub source: LinkClaim,
    pub target: LinkClaim,
    pub initial_word: BraidWord,
    pub steps: Vec<Step>,
    pub phases: Vec<Phase>,
    pub metadata: Metadata,
}

impl AdjacencyCertificate {
    pub fn deletions(&self) -> usize {
        self.steps.iter().filter(|s| s.mv.is_deletion()).count()
    }

    /// Replays all moves without checking hashes.
    pub fn final_word(&self) -> Result<BraidWord> {
        let mut w = self.initial_word.clone();
        for s in &self.steps {
            w.apply_move_in_place(&s.mv)?;
        }
        Ok(w)
    }

    /// Word after each phase, replayed from the start.
    pub fn phase_words(&self) -> Result<Vec<(String, BraidWord)>> {
        let mut w = self.initial_word.clone();
        let mut out = vec![("initial".to_string(), w.clone())];
        for ph in &self.phases {
            for s in &self.steps[ph.start..ph.end] {
                w.apply_move_in_place(&s.mv)?;
            }
            out.push((ph.name.clone(), w.clone()));
        }
        Ok(out)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("certificates always serialize")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::InvalidParameter(format!("bad certificate: {e}")))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "status")]
pub enum Verdict {
    Valid,
    InvalidStep { index: usize, reason: String },
    EndpointMismatch { which: String, expected: String, found: String },
}

impl Verdict {
    pub fn is_valid(&self) -> bool {
        matches!(self, Verdict::Valid)
    }
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Verdict::Valid => f.write_str("Valid"),
            Verdict::InvalidStep { index, reason } => write!(f, "InvalidStep at {index}: {reason}"),
            Verdict::EndpointMismatch { which, expected, found } => {
                write!(f, "EndpointMismatch ({which}): expected {expected}, found {found}")
            }
        }
    }
}

fn describe(f: &ClosureFingerprint) -> String {
    let alex = f.alexander.as_ref().map_or_else(|| "degenerate".to_string(), |a| a.to_string());
    let chi = f.bennequin_chi.map_or_else(|| "n/a".to_string(), |c| c.to_string());
    format!("components={} chi={} alexander={}", f.components, chi, alex)
}

fn check_endpoint(which: &str, w: &BraidWord, claim: &LinkClaim) -> Option<Verdict> {
    let mismatch = |expected: String, found: String| {
        Some(Verdict::EndpointMismatch { which: which.to_string(), expected, found })
    };
    if w.strands() == 0 || !w.is_positive() {
        return mismatch(format!("positive word for {claim}"), w.to_string());
    }
    let expected = match torus_fingerprint(claim.p, claim.q) {
        Ok(f) => f,
        Err(e) => return mismatch(claim.to_string(), e.to_string()),
    };
    if let Some(n) = claim.two_strand() {
        return match identify_torus2(w) {
            Ok(Some(found)) if found == n => None,
            _ => mismatch(format!("{claim}: {}", describe(&expected)), describe(&fingerprint(w))),
        };
    }
    let found = fingerprint(w);
    if found.same_link_invariants(&expected) {
        None
    } else {
        mismatch(format!("{claim}: {}", describe(&expected)), describe(&found))
    }
}

/// Replays every move, checks every snapshot hash and phase digest, then
/// compares the initial word against `target` and the final word against
/// `source`.
pub fn verify(cert: &AdjacencyCertificate) -> Verdict {
    if cert.version != CERTIFICATE_VERSION {
        return Verdict::InvalidStep { index: 0, reason: format!("unsupported version {}", cert.version) };
    }
    if cert.hash_alg != hash::HASH_ALG {
        return Verdict::InvalidStep { index: 0, reason: format!("unknown hash_alg {:?}", cert.hash_alg) };
    }
    if cert.initial_word.strands() != cert.strands {
        return Verdict::InvalidStep { index: 0, reason: "initial word has the wrong strand count".into() };
    }
    let mut phase_ends: BTreeMap<usize, Vec<&Phase>> = BTreeMap::new();
    let mut expected_start = 0;
    for ph in &cert.phases {
        if ph.start != expected_start || ph.end < ph.start || ph.end > cert.steps.len() {
            return Verdict::InvalidStep { index: ph.start, reason: format!("phase {:?} is out of order", ph.name) };
        }
        expected_start = ph.end;
        phase_ends.entry(ph.end).or_default().push(ph);
    }
    let mut tracked = TrackedWord::new(cert.initial_word.clone());
    let check_phases = |idx: usize, w: &BraidWord| -> Option<Verdict> {
        let phases = phase_ends.get(&idx)?;
        let sha = hash::sha256_word(w);
        phases.iter().find(|ph| ph.word_sha256 != sha).map(|ph| Verdict::InvalidStep {
            index: idx.saturating_sub(1),
            reason: format!("word digest at the end of phase {:?} does not match", ph.name),
        })
    };
    if let Some(v) = check_phases(0, tracked.word()) {
        return v;
    }
    for (i, step) in cert.steps.iter().enumerate() {
        if let Err(e) = tracked.apply(&step.mv) {
            return Verdict::InvalidStep { index: i, reason: e.to_string() };
        }
        if tracked.digest() != step.hash {
            return Verdict::InvalidStep { index: i, reason: "snapshot hash mismatch".into() };
        }
        if let Some(v) = check_phases(i + 1, tracked.word()) {
            return v;
        }
    }
    if let Some(v) = check_endpoint("target", &cert.initial_word, &cert.target) {
        return v;
    }
    if let Some(v) = check_endpoint("source", tracked.word(), &cert.source) {
        return v;
    }
    Verdict::Valid
}

/// Accumulates moves, snapshot hashes and phases while a construction runs.
#[derive(Debug, Clone)]
pub struct CertBuilder {
    initial: BraidWord,
    tracked: TrackedWord,
    steps: Vec<Step>,
    phases: Vec<Phase>,
    phase_start: usize,
}

impl CertBuilder {
    pub fn new(initial: BraidWord) -> Self {
        CertBuilder {
            tracked: TrackedWord::new(initial.clone()),
            initial,
            steps: Vec::new(),
            phases: Vec::new(),
            phase_start: 0,
        }
    }

    pub fn word(&self) -> &BraidWord {
        self.tracked.word()
    }

    pub fn letters(&self) -> &[i32] {
        self.tracked.word().letters()
    }

    pub fn apply(&mut self, mv: BraidMove) -> Result<()> {
        self.tracked.apply(&mv)?;
        self.steps.push(Step { mv, hash: self.tracked.digest() });
        Ok(())
    }

    /// Rewrites `start..start + target.len()` into `target` by relations.
    pub fn rewrite_segment(&mut self, start: usize, target: &[i32]) -> Result<()> {
        rewrite::rewrite_segment(self, start, target)
    }

    pub fn rewrite_to(&mut self, target: &[i32]) -> Result<()> {
        if target.len() != self.letters().len() {
            return Err(Error::RewriteFailed("target length differs".into()));
        }
        self.rewrite_segment(0, target)
    }

    /// Deletes the letters at the given positions of the current word.
    pub fn delete_positions(&mut self, positions: &[usize]) -> Result<()> {
        let mut ps = positions.to_vec();
        ps.sort_unstable_by(|a, b| b.cmp(a));
        ps.dedup();
        for p in ps {
            self.apply(BraidMove::delete(p))?;
        }
        Ok(())
    }

    /// Closes the current phase (possibly empty).
    pub fn end_phase(&mut self, name: &str) {
        self.phases.push(Phase {
            name: name.to_string(),
            start: self.phase_start,
            end: self.steps.len(),
            word_sha256: hash::sha256_word(self.word()),
        });
        self.phase_start = self.steps.len();
    }

    pub fn finish(mut self, source: LinkClaim, target: LinkClaim, metadata: Metadata) -> AdjacencyCertificate {
        if self.phase_start != self.steps.len() {
            self.end_phase("tail");
        }
        AdjacencyCertificate {
            version: CERTIFICATE_VERSION,
            hash_alg: hash::HASH_ALG.to_string(),
            strands: self.initial.strands(),
            source,
            target,
            initial_word: self.initial,
            steps: self.steps,
            phases: self.phases,
            metadata,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::braid::torus_braid;

    fn meta() -> Metadata {
        Metadata { construction: "manual".into(), params: BTreeMap::new(), achieved_n: None }
    }

    #[test]
    fn empty_certificate_is_valid() {
        let cert = CertBuilder::new(torus_braid(2, 3).unwrap()).finish(LinkClaim::new(2, 3), LinkClaim::new(2, 3), meta());
        assert_eq!(verify(&cert), Verdict::Valid);
    }

    #[test]
    fn wrong_endpoint_is_reported() {
        let cert = CertBuilder::new(torus_braid(2, 3).unwrap()).finish(LinkClaim::new(2, 4), LinkClaim::new(2, 3), meta());
        assert!(matches!(verify(&cert), Verdict::EndpointMismatch { ref which, .. } if which == "source"));
        let mut b = CertBuilder::new(torus_braid(2, 5).unwrap());
        b.delete_positions(&[0, 1]).unwrap();
        let cert = b.finish(LinkClaim::new(2, 4), LinkClaim::new(2, 5), meta());
        assert!(matches!(verify(&cert), Verdict::EndpointMismatch { .. }));
    }

    #[test]
    fn tampering_is_detected() {
        let mut b = CertBuilder::new(torus_braid(3, 2).unwrap());
        b.apply(BraidMove::long(0)).unwrap();
        b.end_phase("relation");
        let cert = b.finish(LinkClaim::new(3, 2), LinkClaim::new(3, 2), meta());
        assert_eq!(verify(&cert), Verdict::Valid);

        let mut bad = cert.clone();
        bad.steps[0].hash = "0".into();
        assert!(matches!(verify(&bad), Verdict::InvalidStep { index: 0, .. }));

        let mut bad = cert.clone();
        bad.steps[0].mv = BraidMove::commute(0);
        assert!(matches!(verify(&bad), Verdict::InvalidStep { index: 0, .. }));

        let mut bad = cert.clone();
        bad.phases[0].word_sha256 = "00".into();
        assert!(matches!(verify(&bad), Verdict::InvalidStep { .. }));

        let mut bad = cert;
        bad.hash_alg = "md5".into();
        assert!(matches!(verify(&bad), Verdict::InvalidStep { .. }));
    }

    #[test]
    fn json_round_trip() {
        let mut b = CertBuilder::new(torus_braid(3, 2).unwrap());
        b.apply(BraidMove::long(0)).unwrap();
        let cert = b.finish(LinkClaim::new(3, 2), LinkClaim::new(3, 2), meta());
        let back = AdjacencyCertificate::from_json(&cert.to_json()).unwrap();
        assert_eq!(back, cert);
        let v: serde_json::Value = serde_json::from_str(&cert.to_json()).unwrap();
        assert_eq!(v["steps"][0]["move"]["type"], "relation");
        assert_eq!(v["source"]["p"], 3);
        assert!(v["hash_alg"].as_str().unwrap().starts_with("poly61"));
        let verdict = serde_json::to_value(Verdict::InvalidStep { index: 3, reason: "x".into() }).unwrap();
        assert_eq!(verdict["status"], "invalid_step");
    }
}
