//! Dense-id digraphs with sorted adjacency lists.
//!
//! Vertices are `0..n`. Loops and parallel arcs are rejected at insertion, so
//! every stored digraph is simple; a 2-cycle (u→v plus v→u) is fine. Deletion
//! is expressed as induced-subdigraph extraction with an index map, which keeps
//! vertex ids stable for certificates.

use std::collections::BTreeMap;
use std::collections::BTreeSet;
use thiserror::Error;

pub type VertexSet = BTreeSet<usize>;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum DigraphError {
    #[error("vertex {vertex} out of range, digraph has {order} vertices")]
    VertexOutOfRange { vertex: usize, order: usize },
    #[error("self-loop at vertex {0} rejected")]
    SelfLoop(usize),
    #[error("parallel arc {0} -> {1} rejected")]
    ParallelArc(usize, usize),
    #[error("operation undefined on the empty digraph")]
    EmptyDigraph,
}

/// Simple digraph; adjacency lists stay sorted ascending at all times.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Digraph {
    out_adj: Vec<Vec<u32>>,
    in_adj: Vec<Vec<u32>>,
    labels: Vec<Option<String>>,
    arc_count: usize,
}

impl Digraph {
    pub fn new(n: usize) -> Self {
        Digraph {
            out_adj: vec![Vec::new(); n],
            in_adj: vec![Vec::new(); n],
            labels: vec![None; n],
            arc_count: 0,
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.out_adj.len()
    }

    pub fn arc_count(&self) -> usize {
        self.arc_count
    }

    pub fn vertices(&self) -> std::ops::Range<usize> {
        0..self.vertex_count()
    }

    /// Arcs in ascending (tail, head) order.
    pub fn arcs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.out_adj
            .iter()
            .enumerate()
            .flat_map(|(u, outs)| outs.iter().map(move |&v| (u, v as usize)))
    }

    pub fn add_vertex(&mut self) -> usize {
        self.out_adj.push(Vec::new());
        self.in_adj.push(Vec::new());
        self.labels.push(None);
        self.out_adj.len() - 1
    }

    pub fn set_label(&mut self, v: usize, label: impl Into<String>) {
        self.check(v).expect("label target in range");
        self.labels[v] = Some(label.into());
    }

    pub fn label(&self, v: usize) -> Option<&str> {
        self.labels[v].as_deref()
    }

    fn check(&self, v: usize) -> Result<(), DigraphError> {
        if v < self.vertex_count() {
            Ok(())
        } else {
            Err(DigraphError::VertexOutOfRange {
                vertex: v,
                order: self.vertex_count(),
            })
        }
    }

    pub fn add_arc(&mut self, u: usize, v: usize) -> Result<(), DigraphError> {
        self.check(u)?;
        self.check(v)?;
        if u == v {
            return Err(DigraphError::SelfLoop(u));
        }
        let vv = v as u32;
        match self.out_adj[u].binary_search(&vv) {
            Ok(_) => return Err(DigraphError::ParallelArc(u, v)),
            Err(pos) => self.out_adj[u].insert(pos, vv),
        }
        let uu = u as u32;
        let pos = self.in_adj[v].binary_search(&uu).unwrap_err();
        self.in_adj[v].insert(pos, uu);
        self.arc_count += 1;
        Ok(())
    }

    pub fn has_arc(&self, u: usize, v: usize) -> bool {
        u < self.vertex_count()
            && v < self.vertex_count()
            && self.out_adj[u].binary_search(&(v as u32)).is_ok()
    }

    pub fn out_neighbors(&self, v: usize) -> &[u32] {
        &self.out_adj[v]
    }

    pub fn in_neighbors(&self, v: usize) -> &[u32] {
        &self.in_adj[v]
    }

    pub fn out_degree(&self, v: usize) -> usize {
        self.out_adj[v].len()
    }

    pub fn in_degree(&self, v: usize) -> usize {
        self.in_adj[v].len()
    }

    pub fn min_out_degree(&self) -> Result<usize, DigraphError> {
        self.out_adj
            .iter()
            .map(Vec::len)
            .min()
            .ok_or(DigraphError::EmptyDigraph)
    }

    pub fn min_in_degree(&self) -> Result<usize, DigraphError> {
        self.in_adj
            .iter()
            .map(Vec::len)
            .min()
            .ok_or(DigraphError::EmptyDigraph)
    }

    pub fn out_degree_histogram(&self) -> BTreeMap<usize, usize> {
        let mut h = BTreeMap::new();
        for outs in &self.out_adj {
            *h.entry(outs.len()).or_insert(0) += 1;
        }
        h
    }

    pub fn in_degree_histogram(&self) -> BTreeMap<usize, usize> {
        let mut h = BTreeMap::new();
        for ins in &self.in_adj {
            *h.entry(ins.len()).or_insert(0) += 1;
        }
        h
    }

    /// Adds a fresh vertex with exactly the in- and out-neighborhood of `v`.
    /// The clone is not adjacent to `v` itself, and a label is inherited with
    /// one generation mark appended. Returns the clone's id.
    pub fn clone_vertex(&mut self, v: usize) -> Result<usize, DigraphError> {
        self.check(v)?;
        let c = self.add_vertex();
        // c is the maximum id, so pushing it at list ends keeps them sorted.
        let outs = self.out_adj[v].clone();
        let ins = self.in_adj[v].clone();
        self.arc_count += outs.len() + ins.len();
        for &w in &outs {
            self.in_adj[w as usize].push(c as u32);
        }
        for &w in &ins {
            self.out_adj[w as usize].push(c as u32);
        }
        self.out_adj[c] = outs;
        self.in_adj[c] = ins;
        self.labels[c] = self.labels[v].as_ref().map(|l| format!("{l}'"));
        Ok(c)
    }

    /// Subdigraph induced by `s`. New ids follow the sorted order of `s`;
    /// the returned map sends each new id to its old one.
    pub fn induced(&self, s: &VertexSet) -> (Digraph, Vec<usize>) {
        if let Some(&v) = s.iter().next_back() {
            assert!(v < self.vertex_count(), "induced set out of range");
        }
        let old_of: Vec<usize> = s.iter().copied().collect();
        let mut new_of = vec![u32::MAX; self.vertex_count()];
        for (new, &old) in old_of.iter().enumerate() {
            new_of[old] = new as u32;
        }
        let mut d = Digraph::new(old_of.len());
        for (new, &old) in old_of.iter().enumerate() {
            d.labels[new] = self.labels[old].clone();
            for &w in &self.out_adj[old] {
                let nw = new_of[w as usize];
                if nw != u32::MAX {
                    // Source lists are sorted and new ids are order-preserving.
                    d.out_adj[new].push(nw);
                    d.in_adj[nw as usize].push(new as u32);
                    d.arc_count += 1;
                }
            }
        }
        (d, old_of)
    }

    /// Vertices outside `s` with at least `r` out-neighbors inside `s`.
    pub fn r_in_dominated(&self, s: &VertexSet, r: usize) -> VertexSet {
        let mut mark = vec![false; self.vertex_count()];
        for &v in s {
            mark[v] = true;
        }
        let mut dom = VertexSet::new();
        for v in self.vertices() {
            if mark[v] {
                continue;
            }
            let mut hits = 0usize;
            for &w in &self.out_adj[v] {
                if mark[w as usize] {
                    hits += 1;
                    if hits >= r {
                        break;
                    }
                }
            }
            if hits >= r {
                dom.insert(v);
            }
        }
        dom
    }

    /// Full audit of the simplicity invariants and the out/in mirror.
    pub fn audit(&self) -> Result<(), String> {
        let n = self.vertex_count();
        let mut seen_arcs = 0usize;
        for u in 0..n {
            let outs = &self.out_adj[u];
            if !outs.windows(2).all(|w| w[0] < w[1]) {
                return Err(format!("out list of {u} not strictly sorted"));
            }
            for &v in outs {
                let v = v as usize;
                if v >= n {
                    return Err(format!("arc {u} -> {v} leaves vertex range"));
                }
                if v == u {
                    return Err(format!("loop at {u}"));
                }
                if self.in_adj[v].binary_search(&(u as u32)).is_err() {
                    return Err(format!("arc {u} -> {v} missing from in list"));
                }
                seen_arcs += 1;
            }
            if !self.in_adj[u].windows(2).all(|w| w[0] < w[1]) {
                return Err(format!("in list of {u} not strictly sorted"));
            }
        }
        let in_total: usize = self.in_adj.iter().map(Vec::len).sum();
        if seen_arcs != self.arc_count || in_total != self.arc_count {
            return Err(format!(
                "arc count {} disagrees with lists ({seen_arcs} out, {in_total} in)",
                self.arc_count
            ));
        }
        Ok(())
    }
}

/// All-vertex set of a digraph, handy for induced-complement call sites.
pub fn full_vertex_set(d: &Digraph) -> VertexSet {
    d.vertices().collect()
}
