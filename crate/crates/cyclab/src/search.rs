//! Backtracking embeddings of oriented cycles and paths.
//!
//! One fixed word is searched over every start vertex. That is complete:
//! a copy of any rotation or reflection of the pattern is the same vertex
//! cycle read from a different start or in the other direction, so it is
//! found as a copy of the word itself. Start candidates are ordered by
//! descending total degree (ties by id), extensions walk the adjacency list
//! of the previous vertex. The budget unit is one attempted extension.

use crate::digraph::{Digraph, VertexSet};
use crate::pattern::{forbidden_family, CyclePattern, PathPattern};
use serde::{Deserialize, Serialize};
use std::ops::ControlFlow;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum EmbedTarget {
    Cycle { word: CyclePattern },
    Path { word: PathPattern },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Embedding {
    pub target: EmbedTarget,
    /// Host vertices in pattern order (cyclic for cycle patterns).
    pub map: Vec<usize>,
}

impl Embedding {
    pub fn cycle(word: CyclePattern, map: Vec<usize>) -> Self {
        Embedding {
            target: EmbedTarget::Cycle { word },
            map,
        }
    }

    pub fn path(word: PathPattern, map: Vec<usize>) -> Self {
        Embedding {
            target: EmbedTarget::Path { word },
            map,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum SearchOutcome {
    Found { embedding: Embedding },
    NotFound { exhaustive: bool },
    Inconclusive { steps: u64 },
}

impl SearchOutcome {
    pub fn found(&self) -> Option<&Embedding> {
        match self {
            SearchOutcome::Found { embedding } => Some(embedding),
            _ => None,
        }
    }

    pub fn is_absent_exhaustive(&self) -> bool {
        matches!(
            self,
            SearchOutcome::NotFound { exhaustive: true }
        )
    }
}

fn by_degree_desc(d: &Digraph) -> Vec<usize> {
    let mut order: Vec<usize> = d.vertices().collect();
    order.sort_by_key(|&v| (std::cmp::Reverse(d.out_degree(v) + d.in_degree(v)), v));
    order
}

struct Walk<'a> {
    d: &'a Digraph,
    /// arcs[i] joins pattern positions i and i+1 (cyclically for cycles).
    arcs: Vec<(usize, usize)>,
    closing: bool,
    used: Vec<bool>,
    blocked: Vec<bool>,
    map: Vec<usize>,
    steps: u64,
    budget: u64,
}

enum WalkEnd {
    Stopped,
    Exhausted,
    OutOfBudget,
}

impl<'a> Walk<'a> {
    /// Candidates for position i+1 given position i: the out-list of map[i]
    /// when the joining arc leaves position i, the in-list otherwise.
    fn extension_list(&self, i: usize) -> &'a [u32] {
        let (a, _) = self.arcs[i];
        if a == i {
            self.d.out_neighbors(self.map[i])
        } else {
            self.d.in_neighbors(self.map[i])
        }
    }

    fn closing_arc_ok(&self) -> bool {
        if !self.closing {
            return true;
        }
        let k = self.map.len();
        let (a, b) = self.arcs[k - 1];
        self.d.has_arc(self.map[a], self.map[b])
    }

    fn extend(
        &mut self,
        i: usize,
        visit: &mut impl FnMut(&[usize]) -> ControlFlow<()>,
    ) -> Result<WalkEnd, WalkEnd> {
        if i == self.map.len() {
            if self.closing_arc_ok() {
                if let ControlFlow::Break(()) = visit(&self.map) {
                    return Err(WalkEnd::Stopped);
                }
            }
            return Ok(WalkEnd::Exhausted);
        }
        let list = self.extension_list(i - 1);
        for idx in 0..list.len() {
            let v = list[idx] as usize;
            if self.used[v] || self.blocked[v] {
                continue;
            }
            self.steps += 1;
            if self.steps > self.budget {
                return Err(WalkEnd::OutOfBudget);
            }
            self.used[v] = true;
            self.map[i] = v;
            self.extend(i + 1, visit)?;
            self.used[v] = false;
        }
        Ok(WalkEnd::Exhausted)
    }

    fn run(
        &mut self,
        starts: &[usize],
        visit: &mut impl FnMut(&[usize]) -> ControlFlow<()>,
    ) -> WalkEnd {
        if self.map.len() > self.d.vertex_count() {
            return WalkEnd::Exhausted;
        }
        for &s in starts {
            if self.blocked[s] {
                continue;
            }
            self.steps += 1;
            if self.steps > self.budget {
                return WalkEnd::OutOfBudget;
            }
            self.used[s] = true;
            self.map[0] = s;
            let r = if self.map.len() == 1 {
                if let ControlFlow::Break(()) = visit(&self.map) {
                    Err(WalkEnd::Stopped)
                } else {
                    Ok(WalkEnd::Exhausted)
                }
            } else {
                self.extend(1, visit)
            };
            self.used[s] = false;
            if let Err(end) = r {
                return end;
            }
        }
        WalkEnd::Exhausted
    }
}

fn walk_for<'a>(d: &'a Digraph, arcs: Vec<(usize, usize)>, positions: usize, closing: bool) -> Walk<'a> {
    Walk {
        d,
        arcs,
        closing,
        used: vec![false; d.vertex_count()],
        blocked: vec![false; d.vertex_count()],
        map: vec![usize::MAX; positions],
        steps: 0,
        budget: u64::MAX,
    }
}

/// Subdigraph search for a cycle pattern. `budget` of `None` is unlimited.
pub fn contains_pattern(d: &Digraph, p: &CyclePattern, budget: Option<u64>) -> SearchOutcome {
    let mut w = walk_for(d, p.arcs(), p.len(), true);
    w.budget = budget.unwrap_or(u64::MAX);
    let mut hit: Option<Vec<usize>> = None;
    let starts = by_degree_desc(d);
    let end = w.run(&starts, &mut |map| {
        hit = Some(map.to_vec());
        ControlFlow::Break(())
    });
    match (hit, end) {
        (Some(map), _) => SearchOutcome::Found {
            embedding: Embedding::cycle(p.clone(), map),
        },
        (None, WalkEnd::OutOfBudget) => SearchOutcome::Inconclusive { steps: w.steps },
        (None, _) => SearchOutcome::NotFound { exhaustive: true },
    }
}

/// Embedding of a linear orientation word avoiding `forbidden`.
pub fn find_oriented_path(
    d: &Digraph,
    p: &PathPattern,
    forbidden: &VertexSet,
    budget: Option<u64>,
) -> SearchOutcome {
    let mut hit: Option<Vec<usize>> = None;
    let end = visit_path_embeddings(d, p, forbidden, budget, |map| {
        hit = Some(map.to_vec());
        ControlFlow::Break(())
    });
    match (hit, end) {
        (Some(map), _) => SearchOutcome::Found {
            embedding: Embedding::path(p.clone(), map),
        },
        (None, PathVisitEnd::OutOfBudget { steps }) => SearchOutcome::Inconclusive { steps },
        (None, _) => SearchOutcome::NotFound { exhaustive: true },
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PathVisitEnd {
    /// The visitor broke out early.
    Stopped,
    /// Every embedding was enumerated.
    Exhausted,
    OutOfBudget { steps: u64 },
}

/// Enumerates path embeddings in search order, handing each to `visit` until
/// it breaks, the space is exhausted, or the budget runs out. Extraction uses
/// this to retry attachments over many host copies of one path.
pub fn visit_path_embeddings(
    d: &Digraph,
    p: &PathPattern,
    forbidden: &VertexSet,
    budget: Option<u64>,
    mut visit: impl FnMut(&[usize]) -> ControlFlow<()>,
) -> PathVisitEnd {
    let mut w = walk_for(d, p.arcs(), p.vertex_count(), false);
    w.budget = budget.unwrap_or(u64::MAX);
    for &v in forbidden {
        if v < w.blocked.len() {
            w.blocked[v] = true;
        }
    }
    let starts = by_degree_desc(d);
    match w.run(&starts, &mut visit) {
        WalkEnd::Stopped => PathVisitEnd::Stopped,
        WalkEnd::Exhausted => PathVisitEnd::Exhausted,
        WalkEnd::OutOfBudget => PathVisitEnd::OutOfBudget { steps: w.steps },
    }
}

/// True iff the embedding's map is injective, has the right length, and every
/// pattern arc is an arc of `d`.
pub fn verify_embedding(d: &Digraph, e: &Embedding) -> bool {
    let (arcs, positions) = match &e.target {
        EmbedTarget::Cycle { word } => (word.arcs(), word.len()),
        EmbedTarget::Path { word } => (word.arcs(), word.vertex_count()),
    };
    if e.map.len() != positions {
        return false;
    }
    if e.map.iter().any(|&v| v >= d.vertex_count()) {
        return false;
    }
    let set: VertexSet = e.map.iter().copied().collect();
    if set.len() != e.map.len() {
        return false;
    }
    arcs.iter().all(|&(a, b)| d.has_arc(e.map[a], e.map[b]))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilyEntry {
    pub pattern: CyclePattern,
    pub outcome: SearchOutcome,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilyReport {
    pub k: usize,
    pub entries: Vec<FamilyEntry>,
}

impl FamilyReport {
    /// Every family member certified absent by complete enumeration.
    pub fn all_absent_exhaustive(&self) -> bool {
        self.entries.iter().all(|e| e.outcome.is_absent_exhaustive())
    }
}

/// Anti-parallel pair scan; exhaustive by construction.
fn two_cycle_scan(d: &Digraph) -> SearchOutcome {
    for u in d.vertices() {
        for &v in d.out_neighbors(u) {
            let v = v as usize;
            if v > u && d.has_arc(v, u) {
                let word = CyclePattern::parse("FB").unwrap();
                return SearchOutcome::Found {
                    embedding: Embedding::cycle(word, vec![u, v]),
                };
            }
        }
    }
    SearchOutcome::NotFound { exhaustive: true }
}

/// Neighborhood-walk triangle scan for u -> v -> w plus the closing arc
/// (w -> u for the directed triangle, u -> w for the transitive one).
fn triangle_scan(d: &Digraph, directed: bool) -> SearchOutcome {
    for u in d.vertices() {
        for &v in d.out_neighbors(u) {
            for &w in d.out_neighbors(v as usize) {
                let w = w as usize;
                let closed = if directed {
                    d.has_arc(w, u)
                } else {
                    w != u && d.has_arc(u, w)
                };
                if closed {
                    let word = CyclePattern::parse(if directed { "FFF" } else { "FFB" }).unwrap();
                    return SearchOutcome::Found {
                        embedding: Embedding::cycle(word, vec![u, v as usize, w]),
                    };
                }
            }
        }
    }
    SearchOutcome::NotFound { exhaustive: true }
}

/// Checks every directed cycle and single-flip pattern up to length `k`.
/// Lengths <= 3 go through the dedicated scans, so absence there is always
/// certified exhaustive regardless of budget.
pub fn forbidden_family_check(d: &Digraph, k: usize, budget: Option<u64>) -> FamilyReport {
    let entries = forbidden_family(k)
        .into_iter()
        .map(|pattern| {
            let outcome = match pattern.to_string().as_str() {
                "FB" => two_cycle_scan(d),
                "FFF" => triangle_scan(d, true),
                "FFB" => triangle_scan(d, false),
                _ => contains_pattern(d, &pattern, budget),
            };
            FamilyEntry { pattern, outcome }
        })
        .collect();
    FamilyReport { k, entries }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle;
    use crate::random::random_digraph;
    use crate::pattern::canonical_patterns;

    fn directed_cycle(n: usize) -> Digraph {
        let mut d = Digraph::new(n);
        for u in 0..n {
            d.add_arc(u, (u + 1) % n).unwrap();
        }
        d
    }

    fn complete(n: usize) -> Digraph {
        let mut d = Digraph::new(n);
        for u in 0..n {
            for v in 0..n {
                if u != v {
                    d.add_arc(u, v).unwrap();
                }
            }
        }
        d
    }

    fn transitive_tournament(n: usize) -> Digraph {
        let mut d = Digraph::new(n);
        for u in 0..n {
            for v in (u + 1)..n {
                d.add_arc(u, v).unwrap();
            }
        }
        d
    }

    #[test]
    fn finds_the_directed_cycle_in_itself() {
        let d = directed_cycle(5);
        let p = CyclePattern::parse("FFFFF").unwrap();
        let out = contains_pattern(&d, &p, None);
        let e = out.found().unwrap();
        assert!(verify_embedding(&d, e));
        // No 4-cycle of any orientation lives in a directed 6-cycle.
        let d = directed_cycle(6);
        for p in canonical_patterns(4) {
            assert!(contains_pattern(&d, &p, None).is_absent_exhaustive(), "{p}");
        }
    }

    #[test]
    fn complete_hosts_every_orientation() {
        let d = complete(5);
        for p in canonical_patterns(4).into_iter().chain(canonical_patterns(5)) {
            let out = contains_pattern(&d, &p, None);
            let e = out.found().unwrap_or_else(|| panic!("{p} not found"));
            assert!(verify_embedding(&d, e));
        }
    }

    #[test]
    fn path_examples() {
        let d = directed_cycle(6);
        let p = PathPattern::parse("FF").unwrap();
        let out = find_oriented_path(&d, &p, &VertexSet::new(), None);
        assert!(verify_embedding(&d, out.found().unwrap()));

        let arcless = Digraph::new(4);
        let p = PathPattern::parse("F").unwrap();
        assert!(find_oriented_path(&arcless, &p, &VertexSet::new(), None).is_absent_exhaustive());

        let tt = transitive_tournament(9);
        let p = PathPattern::parse("FBF").unwrap();
        let out = find_oriented_path(&tt, &p, &VertexSet::new(), None);
        assert!(verify_embedding(&tt, out.found().unwrap()));
    }

    #[test]
    fn forbidden_set_is_respected() {
        let d = directed_cycle(6);
        let p = PathPattern::parse("FF").unwrap();
        let forb: VertexSet = [0].into_iter().collect();
        let out = find_oriented_path(&d, &p, &forb, None);
        let e = out.found().unwrap();
        assert!(e.map.iter().all(|v| !forb.contains(v)));
        // Blocking every other vertex kills all two-arc runs.
        let forb: VertexSet = [0, 2, 4].into_iter().collect();
        assert!(find_oriented_path(&d, &p, &forb, None).is_absent_exhaustive());
    }

    #[test]
    fn single_vertex_path_embeds_anywhere() {
        let mut d = Digraph::new(3);
        d.add_arc(1, 2).unwrap();
        let p = PathPattern::parse("").unwrap();
        let out = find_oriented_path(&d, &p, &VertexSet::new(), None);
        // Highest total degree start first.
        assert_eq!(out.found().unwrap().map, vec![1]);
        let forb: VertexSet = [1, 2].into_iter().collect();
        let out = find_oriented_path(&d, &p, &forb, None);
        assert_eq!(out.found().unwrap().map, vec![0]);
    }

    #[test]
    fn budget_cutoff_reports_inconclusive() {
        let d = complete(8);
        let p = CyclePattern::parse("FBFBFB").unwrap();
        match contains_pattern(&d, &p, Some(2)) {
            SearchOutcome::Inconclusive { steps } => assert!(steps >= 2),
            other => panic!("expected inconclusive, got {other:?}"),
        }
    }

    #[test]
    fn agrees_with_exhaustive_oracle_at_small_scale() {
        for seed in 0..40u64 {
            let p_arc = [0.15, 0.3, 0.5, 0.7][(seed % 4) as usize];
            let d = random_digraph(8, p_arc, seed);
            for k in [2usize, 3, 4, 5] {
                for p in canonical_patterns(k) {
                    let fast = contains_pattern(&d, &p, None);
                    let slow = oracle::cycle_embedding_exhaustive(&d, &p);
                    match (&fast, &slow) {
                        (SearchOutcome::Found { embedding }, Some(_)) => {
                            assert!(verify_embedding(&d, embedding), "seed {seed} {p}");
                        }
                        (SearchOutcome::NotFound { exhaustive: true }, None) => {}
                        other => panic!("seed {seed} {p}: {other:?}"),
                    }
                }
            }
        }
    }

    #[test]
    fn outcome_class_is_rotation_and_reflection_invariant() {
        for seed in 0..12u64 {
            let d = random_digraph(8, 0.35, seed);
            for p in canonical_patterns(5) {
                let base = contains_pattern(&d, &p, None).found().is_some();
                for r in 0..p.len() {
                    let rot = p.rotated(r);
                    assert_eq!(
                        contains_pattern(&d, &rot, None).found().is_some(),
                        base,
                        "seed {seed} {p} rot {r}"
                    );
                }
                let refl = p.rev_flipped();
                assert_eq!(contains_pattern(&d, &refl, None).found().is_some(), base);
            }
        }
    }

    #[test]
    fn family_check_on_small_instances() {
        let c3 = directed_cycle(3);
        let report = forbidden_family_check(&c3, 3, None);
        let by_word: Vec<(String, bool)> = report
            .entries
            .iter()
            .map(|e| (e.pattern.to_string(), e.outcome.found().is_some()))
            .collect();
        assert_eq!(
            by_word,
            [
                ("FB".to_string(), false),
                ("FFF".to_string(), true),
                ("FFB".to_string(), false)
            ]
        );
        assert!(!report.all_absent_exhaustive());

        let c7 = directed_cycle(7);
        assert!(forbidden_family_check(&c7, 3, None).all_absent_exhaustive());
        // Length-4 members engage the generic searcher.
        let report = forbidden_family_check(&c7, 4, None);
        assert_eq!(report.entries.len(), 5);
        assert!(report.all_absent_exhaustive());
    }

    #[test]
    fn family_absence_survives_cloning() {
        let mut tested = 0;
        for seed in 0..60u64 {
            let d = random_digraph(8, 0.2, seed);
            if !forbidden_family_check(&d, 3, None).all_absent_exhaustive() {
                continue;
            }
            tested += 1;
            let mut grown = d.clone();
            let v = (seed % 8) as usize;
            grown.clone_vertex(v).unwrap();
            assert!(
                forbidden_family_check(&grown, 3, None).all_absent_exhaustive(),
                "seed {seed}"
            );
        }
        assert!(tested >= 3, "want enough family-free samples, got {tested}");
    }

    #[test]
    fn verify_rejects_corrupted_embeddings() {
        let d = directed_cycle(5);
        let p = CyclePattern::parse("FFFFF").unwrap();
        let good = Embedding::cycle(p.clone(), vec![0, 1, 2, 3, 4]);
        assert!(verify_embedding(&d, &good));
        let swapped = Embedding::cycle(p.clone(), vec![1, 0, 2, 3, 4]);
        assert!(!verify_embedding(&d, &swapped));
        let repeated = Embedding::cycle(p.clone(), vec![0, 1, 2, 3, 0]);
        assert!(!verify_embedding(&d, &repeated));
        let short = Embedding::cycle(p, vec![0, 1, 2]);
        assert!(!verify_embedding(&d, &short));
    }

    #[test]
    fn outcome_serialization_round_trip() {
        let d = directed_cycle(4);
        let p = CyclePattern::parse("FFFF").unwrap();
        let out = contains_pattern(&d, &p, None);
        let js = serde_json::to_string(&out).unwrap();
        assert_eq!(serde_json::from_str::<SearchOutcome>(&js).unwrap(), out);
        let miss = contains_pattern(&d, &CyclePattern::parse("FBFB").unwrap(), None);
        let js = serde_json::to_string(&miss).unwrap();
        assert!(js.contains("\"exhaustive\":true"));
    }
}
