//! Chromatic number of the underlying graph, with witnesses.
//!
//! A coloring of a digraph is a coloring of its underlying undirected graph:
//! no arc may join two vertices of one color. The solver keeps a sandwich
//! (clique lower bound, coloring upper bound) and closes the gap by
//! saturation-ordered branch and bound under a node budget; running out of
//! budget returns the best sandwich rather than failing. All choices break
//! ties deterministically, so reruns reproduce results bit for bit.

use crate::digraph::Digraph;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Coloring {
    /// Color of each vertex, ids 0..color_count.
    pub color: Vec<usize>,
    pub color_count: usize,
}

impl Coloring {
    /// Proper, within range, and every color id in use.
    pub fn audit(&self, d: &Digraph) -> Result<(), String> {
        if self.color.len() != d.vertex_count() {
            return Err("coloring length differs from vertex count".into());
        }
        let mut used = vec![false; self.color_count];
        for (v, &c) in self.color.iter().enumerate() {
            if c >= self.color_count {
                return Err(format!("vertex {v} has out-of-range color {c}"));
            }
            used[c] = true;
        }
        if let Some(c) = used.iter().position(|u| !u) {
            return Err(format!("color {c} unused"));
        }
        for (u, v) in d.arcs() {
            if self.color[u] == self.color[v] {
                return Err(format!("arc {u} -> {v} is monochromatic"));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChromaticResult {
    pub lower: usize,
    pub upper: usize,
    /// lower == upper; when set, both equal the chromatic number.
    pub exact: bool,
    pub witness_coloring: Coloring,
    /// Pairwise adjacent vertex set certifying the lower bound, when one
    /// beats the trivial bound.
    pub witness_clique: Option<Vec<usize>>,
    pub nodes_explored: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct BurrBounds {
    pub k: usize,
    pub lower: usize,
    pub surrogate_upper: usize,
}

/// Known bounds on the least chromatic threshold forcing every orientation
/// of the k-cycle with enough blocks. The upper end is open; the quadratic
/// surrogate is what every threshold formula in `extract` plugs in, which
/// only strengthens the guarantees if the true value is smaller.
pub fn burr_surrogate(k: usize) -> BurrBounds {
    BurrBounds {
        k,
        lower: 2 * k,
        surrogate_upper: if k <= 1 { 1 } else { (k - 1) * (k - 1) },
    }
}

/// Merged out/in adjacency: u ~ v iff some arc joins them.
pub fn underlying_adjacency(d: &Digraph) -> Vec<Vec<u32>> {
    d.vertices()
        .map(|v| {
            let outs = d.out_neighbors(v);
            let ins = d.in_neighbors(v);
            let mut merged = Vec::with_capacity(outs.len() + ins.len());
            let (mut i, mut j) = (0, 0);
            while i < outs.len() || j < ins.len() {
                let pick = match (outs.get(i), ins.get(j)) {
                    (Some(&a), Some(&b)) if a == b => {
                        i += 1;
                        j += 1;
                        a
                    }
                    (Some(&a), Some(&b)) if a < b => {
                        i += 1;
                        a
                    }
                    (Some(_), Some(&b)) => {
                        j += 1;
                        b
                    }
                    (Some(&a), None) => {
                        i += 1;
                        a
                    }
                    (None, Some(&b)) => {
                        j += 1;
                        b
                    }
                    (None, None) => unreachable!(),
                };
                merged.push(pick);
            }
            merged
        })
        .collect()
}

fn greedy_clique(adj: &[Vec<u32>]) -> Vec<usize> {
    let n = adj.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&v| (std::cmp::Reverse(adj[v].len()), v));
    let mut clique: Vec<usize> = Vec::new();
    for v in order {
        if clique
            .iter()
            .all(|&m| adj[v].binary_search(&(m as u32)).is_ok())
        {
            clique.push(v);
        }
    }
    clique.sort_unstable();
    clique
}

/// Saturation-greedy coloring: always color the vertex seeing the most
/// distinct neighbor colors, ties to higher degree then lower id.
fn dsatur(adj: &[Vec<u32>]) -> Coloring {
    let n = adj.len();
    let mut color = vec![usize::MAX; n];
    let mut seen: Vec<Vec<bool>> = vec![Vec::new(); n];
    let mut sat = vec![0usize; n];
    let mut count = 0usize;
    for _ in 0..n {
        let v = (0..n)
            .filter(|&v| color[v] == usize::MAX)
            .max_by_key(|&v| (sat[v], adj[v].len(), std::cmp::Reverse(v)))
            .unwrap();
        let c = (0..).find(|&c| !seen[v].get(c).copied().unwrap_or(false)).unwrap();
        color[v] = c;
        count = count.max(c + 1);
        for &w in &adj[v] {
            let w = w as usize;
            if seen[w].len() <= c {
                seen[w].resize(c + 1, false);
            }
            if !seen[w][c] {
                seen[w][c] = true;
                sat[w] += 1;
            }
        }
    }
    Coloring {
        color,
        color_count: count,
    }
}

struct Decide<'a> {
    adj: &'a [Vec<u32>],
    c: usize,
    color: Vec<usize>,
    /// cnt[v][col] = neighbors of v currently holding col.
    cnt: Vec<Vec<u16>>,
    sat: Vec<usize>,
    opened: usize,
    uncolored: usize,
    nodes: u64,
    budget: u64,
}

enum Verdict {
    Feasible,
    Infeasible,
    OutOfBudget,
}

impl<'a> Decide<'a> {
    fn new(adj: &'a [Vec<u32>], c: usize) -> Self {
        let n = adj.len();
        Decide {
            adj,
            c,
            color: vec![usize::MAX; n],
            cnt: vec![vec![0u16; c]; n],
            sat: vec![0usize; n],
            opened: 0,
            uncolored: n,
            nodes: 0,
            budget: u64::MAX,
        }
    }

    fn assign(&mut self, v: usize, col: usize) {
        self.color[v] = col;
        self.uncolored -= 1;
        self.opened = self.opened.max(col + 1);
        for &w in &self.adj[v] {
            let w = w as usize;
            self.cnt[w][col] += 1;
            if self.cnt[w][col] == 1 {
                self.sat[w] += 1;
            }
        }
    }

    fn unassign(&mut self, v: usize, col: usize, opened_before: usize) {
        self.color[v] = usize::MAX;
        self.uncolored += 1;
        self.opened = opened_before;
        for &w in &self.adj[v] {
            let w = w as usize;
            self.cnt[w][col] -= 1;
            if self.cnt[w][col] == 0 {
                self.sat[w] -= 1;
            }
        }
    }

    fn run(&mut self) -> Verdict {
        if self.uncolored == 0 {
            return Verdict::Feasible;
        }
        self.nodes += 1;
        if self.nodes > self.budget {
            return Verdict::OutOfBudget;
        }
        let n = self.adj.len();
        let v = (0..n)
            .filter(|&v| self.color[v] == usize::MAX)
            .max_by_key(|&v| (self.sat[v], self.adj[v].len(), std::cmp::Reverse(v)))
            .unwrap();
        // A fresh color may only be opened in order; that kills the color
        // permutation symmetry.
        let limit = self.c.min(self.opened + 1);
        let opened_before = self.opened;
        for col in 0..limit {
            if self.cnt[v][col] != 0 {
                continue;
            }
            self.assign(v, col);
            match self.run() {
                Verdict::Feasible => return Verdict::Feasible,
                Verdict::OutOfBudget => return Verdict::OutOfBudget,
                Verdict::Infeasible => self.unassign(v, col, opened_before),
            }
        }
        Verdict::Infeasible
    }
}

fn trivial_result() -> ChromaticResult {
    ChromaticResult {
        lower: 0,
        upper: 0,
        exact: true,
        witness_coloring: Coloring {
            color: Vec::new(),
            color_count: 0,
        },
        witness_clique: Some(Vec::new()),
        nodes_explored: 0,
    }
}

/// Fast sandwich: greedy clique below, saturation greedy above.
pub fn chromatic_bounds(d: &Digraph) -> ChromaticResult {
    let n = d.vertex_count();
    if n == 0 {
        return trivial_result();
    }
    let adj = underlying_adjacency(d);
    let clique = greedy_clique(&adj);
    let coloring = dsatur(&adj);
    let lower = clique.len().max(1);
    let upper = coloring.color_count;
    ChromaticResult {
        lower,
        upper,
        exact: lower == upper,
        witness_coloring: coloring,
        witness_clique: Some(clique),
        nodes_explored: 0,
    }
}

pub const DEFAULT_CHI_BUDGET: u64 = 5_000_000;

/// Exact chromatic number when the budget allows, otherwise the best proven
/// sandwich. Deterministic for a fixed input.
pub fn chromatic_exact(d: &Digraph, budget: Option<u64>) -> ChromaticResult {
    let n = d.vertex_count();
    if n == 0 {
        return trivial_result();
    }
    let budget = budget.unwrap_or(DEFAULT_CHI_BUDGET);
    let adj = underlying_adjacency(d);
    let clique = greedy_clique(&adj);
    let mut best_coloring = dsatur(&adj);
    let mut lower = clique.len().max(1);
    let mut upper = best_coloring.color_count;
    let mut spent = 0u64;
    while lower < upper {
        let c = lower;
        let mut dec = Decide::new(&adj, c);
        dec.budget = budget.saturating_sub(spent);
        // Clique vertices must take distinct colors; fixing which ones is
        // pure symmetry and sound as long as c >= clique size.
        for (i, &v) in clique.iter().enumerate().take(c) {
            dec.assign(v, i);
        }
        let verdict = if clique.len() > c {
            Verdict::Infeasible
        } else {
            dec.run()
        };
        spent += dec.nodes;
        match verdict {
            Verdict::Feasible => {
                upper = c;
                best_coloring = Coloring {
                    color: dec.color.clone(),
                    color_count: c,
                };
                break;
            }
            Verdict::Infeasible => lower = c + 1,
            Verdict::OutOfBudget => break,
        }
    }
    ChromaticResult {
        lower,
        upper,
        exact: lower == upper,
        witness_coloring: best_coloring,
        witness_clique: Some(clique),
        nodes_explored: spent,
    }
}

/// Greedy maximal acyclic subdigraph (arcs tried in ascending (tail, head)
/// order), its longest directed path, and the longest-path-length coloring.
/// The coloring is proper for the whole digraph: an accepted arc climbs
/// levels, and a rejected one is rejected only when the reverse path already
/// exists, which forces the tail's level above the head's.
pub fn gallai_roy_path(d: &Digraph) -> (Vec<usize>, Coloring) {
    let n = d.vertex_count();
    assert!(n >= 1, "needs at least one vertex");
    let mut acc_out: Vec<Vec<u32>> = vec![Vec::new(); n];
    let mut acc_in: Vec<Vec<u32>> = vec![Vec::new(); n];
    let mut stack = Vec::new();
    let mut seen = vec![false; n];
    for (u, v) in d.arcs() {
        // Accept unless v already reaches u through accepted arcs.
        seen.iter_mut().for_each(|s| *s = false);
        stack.clear();
        stack.push(v);
        seen[v] = true;
        let mut closes_cycle = false;
        while let Some(x) = stack.pop() {
            if x == u {
                closes_cycle = true;
                break;
            }
            for &y in &acc_out[x] {
                let y = y as usize;
                if !seen[y] {
                    seen[y] = true;
                    stack.push(y);
                }
            }
        }
        if !closes_cycle {
            acc_out[u].push(v as u32);
            acc_in[v].push(u as u32);
        }
    }

    // Longest accepted path ending at each vertex, by memoized descent.
    let mut level = vec![usize::MAX; n];
    fn level_of(v: usize, acc_in: &[Vec<u32>], level: &mut Vec<usize>) -> usize {
        if level[v] != usize::MAX {
            return level[v];
        }
        let mut best = 0;
        for &u in &acc_in[v] {
            best = best.max(level_of(u as usize, acc_in, level) + 1);
        }
        level[v] = best;
        best
    }
    for v in 0..n {
        level_of(v, &acc_in, &mut level);
    }

    let top = (0..n).max_by_key(|&v| (level[v], std::cmp::Reverse(v))).unwrap();
    let mut path = vec![top];
    let mut cur = top;
    while level[cur] > 0 {
        let prev = acc_in[cur]
            .iter()
            .map(|&u| u as usize)
            .filter(|&u| level[u] + 1 == level[cur])
            .min()
            .expect("positive level has a predecessor one level down");
        path.push(prev);
        cur = prev;
    }
    path.reverse();

    let color_count = level[top] + 1;
    (
        path,
        Coloring {
            color: level,
            color_count,
        },
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle;
    use crate::random::random_digraph;

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

    fn directed_cycle(n: usize) -> Digraph {
        let mut d = Digraph::new(n);
        for u in 0..n {
            d.add_arc(u, (u + 1) % n).unwrap();
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
    fn exact_small_cases() {
        let r = chromatic_exact(&complete(4), None);
        assert!(r.exact && r.lower == 4);
        r.witness_coloring.audit(&complete(4)).unwrap();

        let r = chromatic_exact(&directed_cycle(5), None);
        assert!(r.exact && r.lower == 3);
        let r = chromatic_exact(&directed_cycle(6), None);
        assert!(r.exact && r.lower == 2);
        let r = chromatic_exact(&Digraph::new(3), None);
        assert!(r.exact && r.lower == 1);
    }

    #[test]
    fn bounds_are_a_valid_sandwich() {
        let tt = transitive_tournament(7);
        let r = chromatic_bounds(&tt);
        assert_eq!((r.lower, r.upper), (7, 7));
        assert!(r.exact);
        r.witness_coloring.audit(&tt).unwrap();
        let clique = r.witness_clique.unwrap();
        assert_eq!(clique.len(), 7);

        let r = chromatic_bounds(&Digraph::new(5));
        assert_eq!((r.lower, r.upper), (1, 1));

        let c7 = directed_cycle(7);
        let r = chromatic_bounds(&c7);
        assert!(r.lower >= 2 && r.upper <= 3);
        assert_eq!(chromatic_exact(&c7, None).upper, 3);
    }

    #[test]
    fn clique_witness_is_pairwise_adjacent() {
        for seed in 0..10 {
            let d = random_digraph(14, 0.5, seed);
            let r = chromatic_bounds(&d);
            let clique = r.witness_clique.unwrap();
            for (i, &u) in clique.iter().enumerate() {
                for &v in &clique[i + 1..] {
                    assert!(oracle::underlying_adjacent(&d, u, v));
                }
            }
        }
    }

    #[test]
    fn exact_matches_exhaustive_oracle() {
        for seed in 0..30u64 {
            let p = [0.2, 0.5, 0.8][(seed % 3) as usize];
            let d = random_digraph(9, p, seed);
            let r = chromatic_exact(&d, None);
            assert!(r.exact, "seed {seed}");
            assert_eq!(r.lower, oracle::chromatic_exhaustive(&d), "seed {seed}");
            r.witness_coloring.audit(&d).unwrap();
        }
    }

    #[test]
    fn budget_exhaustion_keeps_the_sandwich() {
        let c5 = directed_cycle(5);
        let r = chromatic_exact(&c5, Some(0));
        assert!(!r.exact);
        assert_eq!((r.lower, r.upper), (2, 3));
        r.witness_coloring.audit(&c5).unwrap();

        // Determinism across reruns, including node accounting.
        let d = random_digraph(16, 0.5, 4);
        let a = chromatic_exact(&d, None);
        let b = chromatic_exact(&d, None);
        assert_eq!(a, b);
    }

    #[test]
    fn longest_path_levels_color_properly() {
        let (path, coloring) = gallai_roy_path(&transitive_tournament(5));
        assert_eq!(path, vec![0, 1, 2, 3, 4]);
        assert_eq!(coloring.color_count, 5);

        let c3 = directed_cycle(3);
        let (path, coloring) = gallai_roy_path(&c3);
        assert!(path.len() >= 3);
        coloring.audit(&c3).unwrap();
        assert_eq!(coloring.color_count, path.len());
    }

    #[test]
    fn path_length_dominates_chromatic_number() {
        for seed in 0..25u64 {
            let d = random_digraph(20, 0.3 + 0.02 * (seed % 10) as f64, seed);
            let (path, coloring) = gallai_roy_path(&d);
            coloring.audit(&d).unwrap();
            assert_eq!(coloring.color_count, path.len());
            for w in path.windows(2) {
                assert!(d.has_arc(w[0], w[1]));
            }
            let exact = chromatic_exact(&d, None);
            assert!(exact.exact);
            assert!(path.len() >= exact.lower, "seed {seed}");
        }
    }

    #[test]
    fn burr_bound_values() {
        let b = burr_surrogate(5);
        assert_eq!((b.lower, b.surrogate_upper), (10, 16));
        assert_eq!(burr_surrogate(4).surrogate_upper, 9);
        assert_eq!(burr_surrogate(1).surrogate_upper, 1);
        assert_eq!(burr_surrogate(0).surrogate_upper, 1);
        for k in 4..40 {
            let b = burr_surrogate(k);
            assert!(b.lower <= b.surrogate_upper);
        }
    }
}
