//! Brute-force reference implementations.
//!
//! Everything here trades speed for obviousness: exhaustive injective maps for
//! embeddings, plain backtracking for colorings. The production engines in
//! `search` and `chromatic` are validated against these on desk-scale inputs,
//! and the self-check suite replays a sample of claims through this module.
//! Keep this file free of clever pruning so it stays an independent check.

use crate::digraph::{Digraph, VertexSet};
use crate::pattern::{CyclePattern, PathPattern};

/// Arc positions that become checkable once pattern position `i` is mapped,
/// i.e. both endpoints lie in `0..=i` and one of them is `i`.
fn checkable_after(arcs: &[(usize, usize)], k: usize) -> Vec<Vec<usize>> {
    let mut at = vec![Vec::new(); k];
    for (j, &(a, b)) in arcs.iter().enumerate() {
        at[a.max(b)].push(j);
    }
    at
}

fn embed_exhaustive(
    d: &Digraph,
    arcs: &[(usize, usize)],
    positions: usize,
    blocked: &[bool],
) -> Option<Vec<usize>> {
    let n = d.vertex_count();
    if positions > n {
        return None;
    }
    let at = checkable_after(arcs, positions);
    let mut map = vec![usize::MAX; positions];
    let mut used = vec![false; n];
    fn rec(
        d: &Digraph,
        arcs: &[(usize, usize)],
        at: &[Vec<usize>],
        map: &mut Vec<usize>,
        used: &mut Vec<bool>,
        blocked: &[bool],
        i: usize,
    ) -> bool {
        if i == map.len() {
            return true;
        }
        for v in 0..used.len() {
            if used[v] || blocked[v] {
                continue;
            }
            map[i] = v;
            used[v] = true;
            let ok = at[i]
                .iter()
                .all(|&j| d.has_arc(map[arcs[j].0], map[arcs[j].1]));
            if ok && rec(d, arcs, at, map, used, blocked, i + 1) {
                return true;
            }
            used[v] = false;
        }
        map[i] = usize::MAX;
        false
    }
    let none = vec![false; n];
    let blocked = if blocked.is_empty() { &none } else { blocked };
    if rec(d, arcs, &at, &mut map, &mut used, blocked, 0) {
        Some(map)
    } else {
        None
    }
}

/// First copy of the cycle pattern in vertex-candidate order, if any.
pub fn cycle_embedding_exhaustive(d: &Digraph, p: &CyclePattern) -> Option<Vec<usize>> {
    embed_exhaustive(d, &p.arcs(), p.len(), &[])
}

/// First copy of the path pattern avoiding `forbidden`, if any.
pub fn path_embedding_exhaustive(
    d: &Digraph,
    p: &PathPattern,
    forbidden: &VertexSet,
) -> Option<Vec<usize>> {
    let mut blocked = vec![false; d.vertex_count()];
    for &v in forbidden {
        if v < blocked.len() {
            blocked[v] = true;
        }
    }
    embed_exhaustive(d, &p.arcs(), p.vertex_count(), &blocked)
}

/// u and v are adjacent in the underlying undirected graph.
pub fn underlying_adjacent(d: &Digraph, u: usize, v: usize) -> bool {
    d.has_arc(u, v) || d.has_arc(v, u)
}

/// A coloring is proper when no arc joins two same-colored vertices.
pub fn is_proper(d: &Digraph, color: &[usize]) -> bool {
    d.arcs().all(|(u, v)| color[u] != color[v])
}

fn colorable_with(d: &Digraph, c: usize, color: &mut Vec<usize>, v: usize) -> bool {
    let n = d.vertex_count();
    if v == n {
        return true;
    }
    // Symmetry break: vertex v may only open one new color.
    let opened = color[..v].iter().copied().max().map_or(0, |m| m + 1);
    for cand in 0..c.min(opened + 1) {
        let clash = (0..v)
            .any(|u| color[u] == cand && underlying_adjacent(d, u, v));
        if clash {
            continue;
        }
        color[v] = cand;
        if colorable_with(d, c, color, v + 1) {
            return true;
        }
    }
    false
}

/// Chromatic number of the underlying graph by increasing-c backtracking.
/// Desk scale only; returns 0 for the empty digraph.
pub fn chromatic_exhaustive(d: &Digraph) -> usize {
    let n = d.vertex_count();
    if n == 0 {
        return 0;
    }
    for c in 1..=n {
        let mut color = vec![usize::MAX; n];
        if colorable_with(d, c, &mut color, 0) {
            return c;
        }
    }
    unreachable!("n colors always suffice");
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::digraph::Digraph;

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

    fn cycle(n: usize) -> Digraph {
        let mut d = Digraph::new(n);
        for u in 0..n {
            d.add_arc(u, (u + 1) % n).unwrap();
        }
        d
    }

    #[test]
    fn chromatic_small_cases() {
        assert_eq!(chromatic_exhaustive(&complete(4)), 4);
        assert_eq!(chromatic_exhaustive(&cycle(5)), 3);
        assert_eq!(chromatic_exhaustive(&cycle(6)), 2);
        assert_eq!(chromatic_exhaustive(&Digraph::new(7)), 1);
        assert_eq!(chromatic_exhaustive(&Digraph::new(0)), 0);
    }

    #[test]
    fn embeds_patterns_in_complete_hosts() {
        let d = complete(5);
        for word in ["FBFB", "FFBB", "FFFF", "FFFBB"] {
            let p = CyclePattern::parse(word).unwrap();
            let map = cycle_embedding_exhaustive(&d, &p).unwrap();
            assert_eq!(map.len(), p.len());
            for (j, (a, b)) in p.arcs().into_iter().enumerate() {
                assert!(d.has_arc(map[a], map[b]), "{word} arc {j}");
            }
        }
    }

    #[test]
    fn directed_cycle_hosts_only_its_own_orientation() {
        let d = cycle(4);
        let dir4 = CyclePattern::parse("FFFF").unwrap();
        assert_eq!(cycle_embedding_exhaustive(&d, &dir4), Some(vec![0, 1, 2, 3]));
        let fbfb = CyclePattern::parse("FBFB").unwrap();
        assert_eq!(cycle_embedding_exhaustive(&d, &fbfb), None);
        let two = CyclePattern::parse("FB").unwrap();
        assert_eq!(cycle_embedding_exhaustive(&d, &two), None);
    }

    #[test]
    fn two_cycle_needs_an_anti_parallel_pair() {
        let mut d = cycle(3);
        let two = CyclePattern::parse("FB").unwrap();
        assert_eq!(cycle_embedding_exhaustive(&d, &two), None);
        d.add_arc(1, 0).unwrap();
        assert_eq!(cycle_embedding_exhaustive(&d, &two), Some(vec![0, 1]));
    }

    #[test]
    fn path_embedding_respects_forbidden_set() {
        let d = cycle(4);
        let p = PathPattern::parse("FF").unwrap();
        assert_eq!(
            path_embedding_exhaustive(&d, &p, &VertexSet::new()),
            Some(vec![0, 1, 2])
        );
        let forb: VertexSet = [1].into_iter().collect();
        assert_eq!(
            path_embedding_exhaustive(&d, &p, &forb),
            Some(vec![2, 3, 0])
        );
        let forb: VertexSet = [1, 3].into_iter().collect();
        assert_eq!(path_embedding_exhaustive(&d, &p, &forb), None);
        // Single-vertex path: lowest unforbidden vertex.
        let single = PathPattern::parse("").unwrap();
        let forb: VertexSet = [0].into_iter().collect();
        assert_eq!(path_embedding_exhaustive(&d, &single, &forb), Some(vec![1]));
    }
}
