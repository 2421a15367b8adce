//! Orientation words of cycles and paths.
//!
//! A cycle on vertices `u_0..u_{k-1}` carries a cyclic word over `{F, B}`:
//! letter `i` orients the arc between `u_i` and `u_{i+1}`, `F` along the cyclic
//! order and `B` against it. Containment in a digraph is isomorphism-invariant,
//! so the canonical form minimizes over rotations and over the reversed word
//! with every letter flipped (a reflection reverses traversal and all arrows).
//!
//! `k = 2` is admitted with words FB and BF only: both positions denote the two
//! anti-parallel arcs of a directed 2-cycle. FF and BB would be a parallel pair
//! and are rejected.

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use std::fmt;
use std::str::FromStr;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PatternError {
    #[error("cycle word needs length >= 2, got {0}")]
    TooShort(usize),
    #[error("length-2 word {0} denotes a parallel arc pair")]
    ParallelOrientation(String),
    #[error("unknown direction letter {0:?}")]
    BadLetter(char),
    #[error("segment start {start} count {count} invalid for cycle length {k}")]
    InvalidSegment { start: usize, count: usize, k: usize },
}

/// One arc's direction relative to the traversal order. `F < B` so that
/// lexicographic minima agree with the all-forward-first convention.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Dir {
    F,
    B,
}

impl Dir {
    pub fn flip(self) -> Dir {
        match self {
            Dir::F => Dir::B,
            Dir::B => Dir::F,
        }
    }

    pub fn to_char(self) -> char {
        match self {
            Dir::F => 'F',
            Dir::B => 'B',
        }
    }

    pub fn from_char(c: char) -> Result<Dir, PatternError> {
        match c {
            'F' | 'f' | '+' => Ok(Dir::F),
            'B' | 'b' | '-' => Ok(Dir::B),
            other => Err(PatternError::BadLetter(other)),
        }
    }
}

fn parse_word(s: &str) -> Result<Vec<Dir>, PatternError> {
    s.chars().map(Dir::from_char).collect()
}

fn word_string(w: &[Dir]) -> String {
    w.iter().map(|d| d.to_char()).collect()
}

fn rev_flip_word(w: &[Dir]) -> Vec<Dir> {
    w.iter().rev().map(|d| d.flip()).collect()
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CyclePattern {
    word: Vec<Dir>,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PathPattern {
    word: Vec<Dir>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockDecomposition {
    /// Cyclic run lengths, anchored at the lowest word position that starts a
    /// run (position 0 for a uniform word).
    pub lengths: Vec<usize>,
}

impl BlockDecomposition {
    pub fn block_count(&self) -> usize {
        self.lengths.len()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum PatternClass {
    /// Present in every digraph of large enough chromatic number.
    AlwaysAppears,
    DirectedCycle,
    /// Two blocks, one of length one.
    SingleFlip,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MotifHit {
    /// Word position where the occurrence starts.
    pub start: usize,
    /// True when the reversed-and-flipped motif matched rather than the motif.
    pub reversed: bool,
}

impl CyclePattern {
    pub fn from_word(word: Vec<Dir>) -> Result<Self, PatternError> {
        if word.len() < 2 {
            return Err(PatternError::TooShort(word.len()));
        }
        if word.len() == 2 && word[0] == word[1] {
            return Err(PatternError::ParallelOrientation(word_string(&word)));
        }
        Ok(CyclePattern { word })
    }

    pub fn parse(s: &str) -> Result<Self, PatternError> {
        Self::from_word(parse_word(s)?)
    }

    pub fn word(&self) -> &[Dir] {
        &self.word
    }

    pub fn len(&self) -> usize {
        self.word.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Arc at word position `i`, as (tail, head) in cycle-vertex indices.
    pub fn arc_between(&self, i: usize) -> (usize, usize) {
        let k = self.len();
        if k == 2 {
            // The two positions are the two anti-parallel arcs.
            let first = match self.word[0] {
                Dir::F => (0, 1),
                Dir::B => (1, 0),
            };
            return if i == 0 { first } else { (first.1, first.0) };
        }
        let j = (i + 1) % k;
        match self.word[i] {
            Dir::F => (i, j),
            Dir::B => (j, i),
        }
    }

    /// All arcs a host copy must realize, position by position.
    pub fn arcs(&self) -> Vec<(usize, usize)> {
        (0..self.len()).map(|i| self.arc_between(i)).collect()
    }

    pub fn rotated(&self, r: usize) -> CyclePattern {
        let k = self.len();
        let word = (0..k).map(|i| self.word[(r + i) % k]).collect();
        CyclePattern { word }
    }

    pub fn rev_flipped(&self) -> CyclePattern {
        CyclePattern {
            word: rev_flip_word(&self.word),
        }
    }

    pub fn canonical(&self) -> CyclePattern {
        let k = self.len();
        let mut best: Option<Vec<Dir>> = None;
        for base in [self.word.clone(), rev_flip_word(&self.word)] {
            for r in 0..k {
                let cand: Vec<Dir> = (0..k).map(|i| base[(r + i) % k]).collect();
                if best.as_ref().map_or(true, |b| cand < *b) {
                    best = Some(cand);
                }
            }
        }
        CyclePattern { word: best.unwrap() }
    }

    pub fn is_canonical(&self) -> bool {
        *self == self.canonical()
    }

    pub fn blocks(&self) -> BlockDecomposition {
        let k = self.len();
        if k == 2 {
            // A 2-cycle is one directed cycle traversed through both arcs.
            return BlockDecomposition { lengths: vec![2] };
        }
        let boundary =
            (0..k).find(|&i| self.word[(i + k - 1) % k] != self.word[i]);
        let Some(anchor) = boundary else {
            return BlockDecomposition { lengths: vec![k] };
        };
        let mut lengths = Vec::new();
        let mut run = 1usize;
        for t in 1..k {
            let prev = self.word[(anchor + t + k - 1) % k];
            let cur = self.word[(anchor + t) % k];
            if cur == prev {
                run += 1;
            } else {
                lengths.push(run);
                run = 1;
            }
        }
        lengths.push(run);
        BlockDecomposition { lengths }
    }

    pub fn classify(&self) -> PatternClass {
        let b = self.blocks();
        match b.block_count() {
            1 => PatternClass::DirectedCycle,
            2 if b.lengths.contains(&1) => PatternClass::SingleFlip,
            _ => PatternClass::AlwaysAppears,
        }
    }

    /// Word of the path left after deleting `count` consecutive vertices
    /// starting at cycle position `start`.
    pub fn delete_segment(&self, start: usize, count: usize) -> Result<PathPattern, PatternError> {
        let k = self.len();
        if count == 0 || count >= k || start >= k {
            return Err(PatternError::InvalidSegment { start, count, k });
        }
        let word = (0..k - count - 1)
            .map(|t| self.word[(start + count + t) % k])
            .collect();
        Ok(PathPattern { word })
    }

    /// Cyclic consecutive-subword search, either traversal orientation.
    /// Occurrences may wrap; `motif.len() == k` means a rotation match.
    pub fn contains_motif(&self, motif: &PathPattern) -> Option<MotifHit> {
        let k = self.len();
        let m = motif.word.len();
        assert!(m >= 1 && m <= k, "motif length must be in 1..=k");
        let matches_at = |needle: &[Dir], start: usize| {
            (0..m).all(|t| self.word[(start + t) % k] == needle[t])
        };
        for start in 0..k {
            if matches_at(&motif.word, start) {
                return Some(MotifHit { start, reversed: false });
            }
        }
        let flipped = rev_flip_word(&motif.word);
        for start in 0..k {
            if matches_at(&flipped, start) {
                return Some(MotifHit { start, reversed: true });
            }
        }
        None
    }
}

impl PathPattern {
    pub fn new(word: Vec<Dir>) -> Self {
        PathPattern { word }
    }

    pub fn parse(s: &str) -> Result<Self, PatternError> {
        Ok(PathPattern { word: parse_word(s)? })
    }

    pub fn word(&self) -> &[Dir] {
        &self.word
    }

    /// Number of arcs; the path has one more vertex than arcs.
    pub fn len(&self) -> usize {
        self.word.len()
    }

    pub fn is_empty(&self) -> bool {
        self.word.is_empty()
    }

    pub fn vertex_count(&self) -> usize {
        self.word.len() + 1
    }

    pub fn arc_between(&self, i: usize) -> (usize, usize) {
        match self.word[i] {
            Dir::F => (i, i + 1),
            Dir::B => (i + 1, i),
        }
    }

    pub fn arcs(&self) -> Vec<(usize, usize)> {
        (0..self.len()).map(|i| self.arc_between(i)).collect()
    }

    pub fn rev_flipped(&self) -> PathPattern {
        PathPattern {
            word: rev_flip_word(&self.word),
        }
    }
}

/// The family whose exclusion is compatible with unbounded chromatic number:
/// directed cycles of length 2..=k plus single-flip orientations of length
/// 3..=k, each in canonical form.
pub fn forbidden_family(k: usize) -> Vec<CyclePattern> {
    assert!(k >= 2);
    let mut out = Vec::new();
    for j in 2..=k {
        if j == 2 {
            out.push(CyclePattern::parse("FB").unwrap());
            continue;
        }
        let mut w = vec![Dir::F; j];
        out.push(CyclePattern::from_word(w.clone()).unwrap());
        w[j - 1] = Dir::B;
        out.push(CyclePattern::from_word(w).unwrap());
    }
    out
}

/// Every canonical cycle pattern of length exactly `k`, sorted.
pub fn canonical_patterns(k: usize) -> Vec<CyclePattern> {
    assert!(k >= 2);
    let mut seen = std::collections::BTreeSet::new();
    for bits in 0u64..(1u64 << k) {
        let word: Vec<Dir> = (0..k)
            .map(|i| if bits >> i & 1 == 0 { Dir::F } else { Dir::B })
            .collect();
        if let Ok(p) = CyclePattern::from_word(word) {
            seen.insert(p.canonical());
        }
    }
    seen.into_iter().collect()
}

impl fmt::Display for CyclePattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&word_string(&self.word))
    }
}

impl fmt::Display for PathPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&word_string(&self.word))
    }
}

impl FromStr for CyclePattern {
    type Err = PatternError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        CyclePattern::parse(s)
    }
}

impl FromStr for PathPattern {
    type Err = PatternError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        PathPattern::parse(s)
    }
}

impl Serialize for CyclePattern {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for CyclePattern {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        CyclePattern::parse(&s).map_err(D::Error::custom)
    }
}

impl Serialize for PathPattern {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for PathPattern {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        PathPattern::parse(&s).map_err(D::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn cp(s: &str) -> CyclePattern {
        CyclePattern::parse(s).unwrap()
    }

    fn pp(s: &str) -> PathPattern {
        PathPattern::parse(s).unwrap()
    }

    #[test]
    fn word_validation() {
        assert_eq!(CyclePattern::parse("F"), Err(PatternError::TooShort(1)));
        assert_eq!(
            CyclePattern::parse("FF"),
            Err(PatternError::ParallelOrientation("FF".into()))
        );
        assert_eq!(
            CyclePattern::parse("BB"),
            Err(PatternError::ParallelOrientation("BB".into()))
        );
        assert_eq!(cp("+-"), cp("FB"));
        assert_eq!(cp("fbf").to_string(), "FBF");
        assert_eq!(CyclePattern::parse("FX"), Err(PatternError::BadLetter('X')));
    }

    #[test]
    fn block_decompositions() {
        assert_eq!(cp("FFFF").blocks().lengths, vec![4]);
        assert_eq!(cp("FFB").blocks().lengths, vec![2, 1]);
        assert_eq!(cp("FFBFBB").blocks().lengths, vec![2, 1, 1, 2]);
        assert_eq!(cp("FB").blocks().lengths, vec![2]);
        assert_eq!(cp("BF").blocks().lengths, vec![2]);
        // Wraparound run: BFFB has the two B's joined through position 0.
        assert_eq!(cp("BFFB").blocks().lengths, vec![2, 2]);
    }

    #[test]
    fn classification_trichotomy() {
        assert_eq!(cp("FFFFF").classify(), PatternClass::DirectedCycle);
        assert_eq!(cp("FFFFB").classify(), PatternClass::SingleFlip);
        assert_eq!(cp("FBFB").classify(), PatternClass::AlwaysAppears);
        assert_eq!(cp("FFBB").classify(), PatternClass::AlwaysAppears);
        assert_eq!(cp("FB").classify(), PatternClass::DirectedCycle);
    }

    #[test]
    fn two_cycle_arcs_are_anti_parallel() {
        assert_eq!(cp("FB").arcs(), vec![(0, 1), (1, 0)]);
        assert_eq!(cp("BF").arcs(), vec![(1, 0), (0, 1)]);
        assert_eq!(cp("FB").canonical(), cp("FB"));
        assert_eq!(cp("BF").canonical(), cp("FB"));
    }

    #[test]
    fn arc_positions_follow_the_word() {
        let p = cp("FBF");
        assert_eq!(p.arcs(), vec![(0, 1), (2, 1), (2, 0)]);
        let q = pp("FB");
        assert_eq!(q.arcs(), vec![(0, 1), (2, 1)]);
        assert_eq!(q.vertex_count(), 3);
    }

    #[test]
    fn canonical_minimizes_over_rotation_and_reflection() {
        assert_eq!(cp("BFF").canonical(), cp("FFB"));
        assert_eq!(cp("FBB").canonical(), cp("FFB"));
        assert_eq!(cp("BFBF").canonical(), cp("FBFB"));
        assert_eq!(cp("BBFF").canonical(), cp("FFBB"));
        let p = cp("FFBFBB");
        assert_eq!(p.rotated(3).canonical(), p.canonical());
        assert_eq!(p.rev_flipped().canonical(), p.canonical());
        assert!(p.canonical().is_canonical());
    }

    #[test]
    fn delete_segment_returns_the_remaining_path_word() {
        // FBFB with vertex u_2 removed leaves the 3-vertex path at positions
        // 3, 0 of the word (arcs between u_3 u_0 u_1).
        assert_eq!(cp("FBFB").delete_segment(2, 1).unwrap(), pp("BF"));
        assert_eq!(cp("FFFF").delete_segment(0, 1).unwrap(), pp("FF"));
        assert_eq!(cp("FBFB").delete_segment(1, 3).unwrap(), pp(""));
        assert!(cp("FBFB").delete_segment(0, 4).is_err());
        assert!(cp("FBFB").delete_segment(0, 0).is_err());
        assert!(cp("FBFB").delete_segment(4, 1).is_err());
    }

    #[test]
    fn motif_search_wraps_and_checks_both_orientations() {
        assert_eq!(
            cp("FBFBF").contains_motif(&pp("FBFB")),
            Some(MotifHit { start: 0, reversed: false })
        );
        assert_eq!(cp("FFFF").contains_motif(&pp("FBFB")), None);
        assert!(cp("FFBBF").contains_motif(&pp("FFBB")).is_some());
        // BBFF holds FFBB through the wraparound.
        let hit = cp("BBFF").contains_motif(&pp("FFBB")).unwrap();
        assert_eq!(hit.start, 2);
        // FBBF holds FFBB through the wraparound at position 3.
        let hit = cp("FBBF").contains_motif(&pp("FFBB")).unwrap();
        assert_eq!(hit, MotifHit { start: 3, reversed: false });
        // FBBB holds FFB only after reversal (as FBB).
        let hit = cp("FBBB").contains_motif(&pp("FFB")).unwrap();
        assert_eq!(hit, MotifHit { start: 0, reversed: true });
        // Rotation match at full length.
        assert!(cp("FBFB").contains_motif(&pp("FBFB")).is_some());
    }

    #[test]
    fn forbidden_family_lists_directed_and_single_flip_patterns() {
        let f2: Vec<String> = forbidden_family(2).iter().map(|p| p.to_string()).collect();
        assert_eq!(f2, ["FB"]);
        let f3: Vec<String> = forbidden_family(3).iter().map(|p| p.to_string()).collect();
        assert_eq!(f3, ["FB", "FFF", "FFB"]);
        let f4: Vec<String> = forbidden_family(4).iter().map(|p| p.to_string()).collect();
        assert_eq!(f4, ["FB", "FFF", "FFB", "FFFF", "FFFB"]);
        for p in forbidden_family(6) {
            assert!(p.is_canonical());
            assert_ne!(p.classify(), PatternClass::AlwaysAppears);
        }
    }

    #[test]
    fn canonical_patterns_enumeration_counts() {
        // k = 4: FFFF, FFFB, FFBB, FBFB.
        let got: Vec<String> = canonical_patterns(4).iter().map(|p| p.to_string()).collect();
        assert_eq!(got, ["FFFF", "FFFB", "FFBB", "FBFB"]);
        let always: Vec<String> = canonical_patterns(6)
            .into_iter()
            .filter(|p| p.classify() == PatternClass::AlwaysAppears)
            .map(|p| p.to_string())
            .collect();
        assert_eq!(
            always,
            ["FFFFBB", "FFFBFB", "FFFBBB", "FFBFFB", "FFBFBB", "FFBBFB", "FBFBFB"]
        );
    }

    #[test]
    fn exhaustive_block_parity_to_k12() {
        for k in 2..=12usize {
            for bits in 0u64..(1u64 << k) {
                let word: Vec<Dir> = (0..k)
                    .map(|i| if bits >> i & 1 == 0 { Dir::F } else { Dir::B })
                    .collect();
                let Ok(p) = CyclePattern::from_word(word) else { continue };
                let b = p.blocks();
                assert_eq!(b.lengths.iter().sum::<usize>(), k);
                let c = b.block_count();
                assert!(c == 1 || c % 2 == 0, "{p} has {c} blocks");
            }
        }
    }

    #[test]
    fn exhaustive_motif_implies_always_appears_to_k12() {
        let fbfb = pp("FBFB");
        let ffbb = pp("FFBB");
        for k in 4..=12usize {
            for bits in 0u64..(1u64 << k) {
                let word: Vec<Dir> = (0..k)
                    .map(|i| if bits >> i & 1 == 0 { Dir::F } else { Dir::B })
                    .collect();
                let Ok(p) = CyclePattern::from_word(word) else { continue };
                if p.contains_motif(&fbfb).is_some() || p.contains_motif(&ffbb).is_some() {
                    assert_eq!(p.classify(), PatternClass::AlwaysAppears, "{p}");
                }
            }
        }
    }

    #[test]
    fn serde_uses_word_strings() {
        let p = cp("FFBFBB");
        let js = serde_json::to_string(&p).unwrap();
        assert_eq!(js, "\"FFBFBB\"");
        assert_eq!(serde_json::from_str::<CyclePattern>(&js).unwrap(), p);
        assert!(serde_json::from_str::<CyclePattern>("\"FF\"").is_err());
        let q = pp("");
        let js = serde_json::to_string(&q).unwrap();
        assert_eq!(serde_json::from_str::<PathPattern>(&js).unwrap(), q);
    }

    proptest! {
        #[test]
        fn canonical_is_idempotent_and_symmetry_invariant(
            bits in 0u64..(1 << 14), k in 2usize..=14, r in 0usize..14
        ) {
            let word: Vec<Dir> = (0..k)
                .map(|i| if bits >> i & 1 == 0 { Dir::F } else { Dir::B })
                .collect();
            if let Ok(p) = CyclePattern::from_word(word) {
                let c = p.canonical();
                prop_assert_eq!(c.canonical(), c.clone());
                prop_assert_eq!(p.rotated(r % k).canonical(), c.clone());
                prop_assert_eq!(p.rev_flipped().canonical(), c.clone());
                prop_assert_eq!(p.rotated(r % k).classify(), p.classify());
                prop_assert_eq!(p.rev_flipped().classify(), p.classify());
            }
        }

        #[test]
        fn deleted_segment_length_arithmetic(
            bits in 0u64..(1 << 10), k in 3usize..=10, start in 0usize..10, count in 1usize..9
        ) {
            let word: Vec<Dir> = (0..k)
                .map(|i| if bits >> i & 1 == 0 { Dir::F } else { Dir::B })
                .collect();
            let p = CyclePattern::from_word(word).unwrap();
            let start = start % k;
            if count < k {
                let path = p.delete_segment(start, count).unwrap();
                prop_assert_eq!(path.vertex_count(), k - count);
            } else {
                prop_assert!(p.delete_segment(start, count).is_err());
            }
        }
    }
}
