//! Generators for the counterexample families: blown-up directed cycles,
//! shift digraphs, and the augmented shift construction whose groups are
//! balanced by repeated vertex cloning.

use std::collections::BTreeMap;

use itertools::Itertools;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::digraph::Digraph;

/// Guards the factorial growth of the general shift construction.
pub const DEFAULT_VERTEX_CAP: usize = 5000;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ConstructError {
    #[error("construction needs {vertices} vertices, above the cap of {cap}")]
    SizeRejected { vertices: u128, cap: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ShiftParams {
    pub m: usize,
    pub r: usize,
}

impl ShiftParams {
    pub fn new(m: usize, r: usize) -> Self {
        assert!(1 <= r && r <= m, "tuple length must satisfy 1 <= r <= m");
        ShiftParams { m, r }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Group {
    CoreG,
    S,
    T,
    P,
}

pub const GROUPS: [Group; 4] = [Group::CoreG, Group::S, Group::T, Group::P];

fn group_slot(g: Group) -> usize {
    match g {
        Group::CoreG => 0,
        Group::S => 1,
        Group::T => 2,
        Group::P => 3,
    }
}

/// Bookkeeping for the augmented construction: which group each vertex
/// belongs to, which ordered bipartition an S or T vertex encodes, where
/// the path sits, and how often each group was doubled.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AugmentedLayout {
    pub m: usize,
    pub k: usize,
    pub group_of: Vec<Group>,
    /// Index into `partitions` for S and T vertices, None elsewhere.
    /// Clones inherit the index of their original.
    pub partition_of: Vec<Option<usize>>,
    /// Ids of p_1..p_k in path order, originals only.
    pub path_positions: Vec<usize>,
    /// The A side of each ordered bipartition (A, B) of [1, 2m],
    /// ascending; B is the complement.
    pub partitions: Vec<Vec<usize>>,
    /// Balancing target: max of the initial CoreG size, the initial S
    /// size, and k.
    pub q: u128,
    /// Doubling rounds applied per group, in the order CoreG, S, T, P.
    pub clone_rounds: [usize; 4],
}

impl AugmentedLayout {
    pub fn group_members(&self, g: Group) -> Vec<usize> {
        self.group_of
            .iter()
            .enumerate()
            .filter(|&(_, &h)| h == g)
            .map(|(v, _)| v)
            .collect()
    }

    pub fn group_sizes(&self) -> [usize; 4] {
        let mut sizes = [0usize; 4];
        for &g in &self.group_of {
            sizes[group_slot(g)] += 1;
        }
        sizes
    }
}

fn falling_factorial(n: usize, t: usize) -> u128 {
    (0..t).map(|i| (n - i) as u128).product()
}

fn binomial(n: usize, k: usize) -> u128 {
    let mut acc: u128 = 1;
    for i in 0..k.min(n - k) {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc
}

fn label_of(tuple: &[usize]) -> String {
    tuple.iter().join(",")
}

/// Directed (k+1)-cycle with every vertex blown up into a transitive
/// tournament on `blob` vertices; blob i is out-complete to blob i+1.
/// Any directed cycle must advance through all k+1 blobs, so none of
/// length at most k exists, while the sink of each tournament pins the
/// minimum out-degree at exactly `blob`.
pub fn blowup_cycle(k: usize, blob: usize) -> Digraph {
    assert!(k >= 2 && blob >= 1, "need k >= 2 and a nonempty blob");
    let blobs = k + 1;
    let mut d = Digraph::new(blobs * blob);
    for b in 0..blobs {
        let base = b * blob;
        let next = ((b + 1) % blobs) * blob;
        for i in 0..blob {
            for j in (i + 1)..blob {
                d.add_arc(base + i, base + j).unwrap();
            }
            for j in 0..blob {
                d.add_arc(base + i, next + j).unwrap();
            }
        }
    }
    d
}

/// Ascending r-tuples over [1, m]; (a_1..a_r) points to (b_1..b_r) when
/// a_{i+1} = b_i for all i < r, so the head shifts the tail by one entry.
/// r = 1 leaves the overlap condition vacuous and yields the complete
/// digraph on m vertices.
pub fn shift_digraph(m: usize, r: usize) -> Digraph {
    let p = ShiftParams::new(m, r);
    let tuples: Vec<Vec<usize>> = (1..=p.m).combinations(p.r).collect();
    let mut index = BTreeMap::new();
    for (i, t) in tuples.iter().enumerate() {
        index.insert(t.clone(), i);
    }
    let mut d = Digraph::new(tuples.len());
    for (i, t) in tuples.iter().enumerate() {
        d.set_label(i, label_of(t));
        let lo = if p.r >= 2 { t[p.r - 1] + 1 } else { 1 };
        for b in lo..=p.m {
            let mut head = t[1..].to_vec();
            head.push(b);
            if let Some(&j) = index.get(&head) {
                if j != i {
                    d.add_arc(i, j).unwrap();
                }
            }
        }
    }
    d
}

/// All injective `len`-tuples over [1, a] in lexicographic order. Ids are
/// frozen by this order, so the enumeration is explicit rather than
/// delegated to a permutation iterator with unspecified order.
fn injective_tuples(a: usize, len: usize) -> Vec<Vec<usize>> {
    fn rec(
        a: usize,
        len: usize,
        cur: &mut Vec<usize>,
        used: &mut [bool],
        out: &mut Vec<Vec<usize>>,
    ) {
        if cur.len() == len {
            out.push(cur.clone());
            return;
        }
        for x in 1..=a {
            if !used[x] {
                used[x] = true;
                cur.push(x);
                rec(a, len, cur, used, out);
                cur.pop();
                used[x] = false;
            }
        }
    }
    let mut out = Vec::new();
    rec(a, len, &mut Vec::with_capacity(len), &mut vec![false; a + 1], &mut out);
    out
}

pub fn general_shift_digraph(m: usize, k: usize) -> Result<Digraph, ConstructError> {
    general_shift_digraph_capped(m, k, DEFAULT_VERTEX_CAP)
}

/// Injective 2k-tuples over [1, 2m] under the same shift rule, without the
/// ascending restriction. The vertex count is the falling factorial
/// (2m)(2m-1)...(2m-2k+1), so a cap guards the enumeration.
pub fn general_shift_digraph_capped(
    m: usize,
    k: usize,
    cap: usize,
) -> Result<Digraph, ConstructError> {
    assert!(k >= 1 && m >= k, "need 1 <= k <= m");
    let a = 2 * m;
    let count = falling_factorial(a, 2 * k);
    if count > cap as u128 {
        return Err(ConstructError::SizeRejected { vertices: count, cap });
    }
    let tuples = injective_tuples(a, 2 * k);
    let mut index = BTreeMap::new();
    for (i, t) in tuples.iter().enumerate() {
        index.insert(t.clone(), i);
    }
    let mut d = Digraph::new(tuples.len());
    for (i, t) in tuples.iter().enumerate() {
        d.set_label(i, label_of(t));
        add_shift_arcs(&mut d, &tuples, &index, i, a);
    }
    Ok(d)
}

/// Heads of vertex i are tail[1..] extended by any unused letter; 2m-2k+1
/// choices, one per letter outside the overlap.
fn add_shift_arcs(
    d: &mut Digraph,
    tuples: &[Vec<usize>],
    index: &BTreeMap<Vec<usize>, usize>,
    i: usize,
    a: usize,
) {
    let t = &tuples[i];
    for x in 1..=a {
        if t[1..].contains(&x) {
            continue;
        }
        let mut head = t[1..].to_vec();
        head.push(x);
        let j = index[&head];
        d.add_arc(i, j).unwrap();
    }
}

pub fn augmented_flip_free(
    m: usize,
    k: usize,
) -> Result<(Digraph, AugmentedLayout), ConstructError> {
    augmented_flip_free_capped(m, k, DEFAULT_VERTEX_CAP)
}

/// General shift core plus one s and one t vertex per ordered balanced
/// bipartition (A, B) of [1, 2m], plus a directed path p_1 -> ... -> p_k.
/// A core tuple whose first k entries lie in A and last k in B points to
/// s_(A,B) and is pointed to by t_(A,B); every s points to p_1 and p_k
/// points to every t. Ids run CoreG, then S, then T, then P.
pub fn augmented_flip_free_capped(
    m: usize,
    k: usize,
    cap: usize,
) -> Result<(Digraph, AugmentedLayout), ConstructError> {
    assert!(k >= 3 && m >= k, "need 3 <= k <= m");
    let a = 2 * m;
    let core_count = falling_factorial(a, 2 * k);
    let part_count = binomial(a, m);
    let total = core_count + 2 * part_count + k as u128;
    if total > cap as u128 {
        return Err(ConstructError::SizeRejected { vertices: total, cap });
    }

    let tuples = injective_tuples(a, 2 * k);
    let mut index = BTreeMap::new();
    for (i, t) in tuples.iter().enumerate() {
        index.insert(t.clone(), i);
    }
    let partitions: Vec<Vec<usize>> = (1..=a).combinations(m).collect();
    let nc = tuples.len();
    let ns = partitions.len();
    let s_base = nc;
    let t_base = nc + ns;
    let p_base = nc + 2 * ns;
    let n = p_base + k;

    let mut d = Digraph::new(n);
    for (i, t) in tuples.iter().enumerate() {
        d.set_label(i, label_of(t));
        add_shift_arcs(&mut d, &tuples, &index, i, a);
    }
    for j in 0..k {
        d.set_label(p_base + j, format!("p:{}", j + 1));
        if j + 1 < k {
            d.add_arc(p_base + j, p_base + j + 1).unwrap();
        }
    }
    for (pi, aset) in partitions.iter().enumerate() {
        d.set_label(s_base + pi, format!("s:{}", label_of(aset)));
        d.set_label(t_base + pi, format!("t:{}", label_of(aset)));
        d.add_arc(s_base + pi, p_base).unwrap();
        d.add_arc(p_base + k - 1, t_base + pi).unwrap();
        for (i, t) in tuples.iter().enumerate() {
            if split_respects(t, k, aset) {
                d.add_arc(i, s_base + pi).unwrap();
                d.add_arc(t_base + pi, i).unwrap();
            }
        }
    }

    let mut group_of = vec![Group::CoreG; nc];
    group_of.extend(std::iter::repeat(Group::S).take(ns));
    group_of.extend(std::iter::repeat(Group::T).take(ns));
    group_of.extend(std::iter::repeat(Group::P).take(k));
    let mut partition_of = vec![None; n];
    for pi in 0..ns {
        partition_of[s_base + pi] = Some(pi);
        partition_of[t_base + pi] = Some(pi);
    }
    let layout = AugmentedLayout {
        m,
        k,
        group_of,
        partition_of,
        path_positions: (p_base..p_base + k).collect(),
        partitions,
        q: core_count.max(part_count).max(k as u128),
        clone_rounds: [0; 4],
    };
    Ok((d, layout))
}

/// First k entries inside A, last k outside A (hence inside the
/// complement B).
fn split_respects(tuple: &[usize], k: usize, aset: &[usize]) -> bool {
    tuple[..k].iter().all(|e| aset.binary_search(e).is_ok())
        && tuple[k..].iter().all(|e| aset.binary_search(e).is_err())
}

/// Per group in the fixed order CoreG, S, T, P: while the group holds
/// fewer than q/2 vertices, clone every current member once in ascending
/// id order, exactly doubling the group. A clone never becomes adjacent
/// to its original, which is what keeps short cycles from appearing.
pub fn balance_by_cloning(
    mut d: Digraph,
    mut layout: AugmentedLayout,
) -> (Digraph, AugmentedLayout) {
    for (slot, &g) in GROUPS.iter().enumerate() {
        loop {
            let members = layout.group_members(g);
            if 2 * members.len() as u128 >= layout.q {
                break;
            }
            for &v in &members {
                let c = d.clone_vertex(v).unwrap();
                debug_assert_eq!(c, layout.group_of.len());
                layout.group_of.push(g);
                layout.partition_of.push(layout.partition_of[v]);
            }
            layout.clone_rounds[slot] += 1;
        }
    }
    (d, layout)
}

/// Tuple encoded in a vertex label, ignoring clone ticks. Labels that are
/// not comma-separated numbers (s:, t:, p: vertices) yield None.
fn labeled_tuple(d: &Digraph, v: usize) -> Option<Vec<usize>> {
    let text = d.label(v)?.trim_end_matches('\'');
    text.split(',').map(|part| part.parse().ok()).collect()
}

fn base_label(d: &Digraph, v: usize) -> Option<&str> {
    d.label(v).map(|s| s.trim_end_matches('\''))
}

/// Every arc between tuple-labeled vertices shifts: entries 2..r of the
/// tail equal entries 1..r-1 of the head. Arcs touching unlabeled or
/// non-tuple vertices are outside the rule and are skipped.
pub fn shift_arc_audit(d: &Digraph) -> bool {
    d.arcs().all(|(u, v)| {
        match (labeled_tuple(d, u), labeled_tuple(d, v)) {
            (Some(a), Some(b)) => a.len() == b.len() && a[1..] == b[..a.len() - 1],
            _ => true,
        }
    })
}

/// Arcs incident to S and T respect the encoded bipartition: everything
/// into an s vertex is a core tuple split across its (A, B), s reaches
/// only copies of p_1, everything out of a t vertex is a split core
/// tuple, and t is reached only from copies of p_k.
pub fn split_arc_audit(d: &Digraph, layout: &AugmentedLayout) -> bool {
    let k = layout.k;
    let last = format!("p:{}", k);
    for v in d.vertices() {
        let Some(pi) = layout.partition_of[v] else { continue };
        let aset = &layout.partitions[pi];
        let split_ok = |w: usize| {
            layout.group_of[w] == Group::CoreG
                && labeled_tuple(d, w).is_some_and(|t| split_respects(&t, k, aset))
        };
        match layout.group_of[v] {
            Group::S => {
                if !d.in_neighbors(v).iter().all(|&w| split_ok(w as usize)) {
                    return false;
                }
                if !d
                    .out_neighbors(v)
                    .iter()
                    .all(|&w| base_label(d, w as usize) == Some("p:1"))
                {
                    return false;
                }
            }
            Group::T => {
                if !d.out_neighbors(v).iter().all(|&w| split_ok(w as usize)) {
                    return false;
                }
                if !d
                    .in_neighbors(v)
                    .iter()
                    .all(|&w| base_label(d, w as usize) == Some(last.as_str()))
                {
                    return false;
                }
            }
            _ => unreachable!("only S and T vertices carry a partition index"),
        }
    }
    true
}

/// Group sizes, overall minimum out-degree, and the worst cross-group
/// out-degrees the balancing argument relies on.
#[derive(Debug, Clone, Serialize)]
pub struct BalanceReport {
    pub vertex_count: usize,
    pub group_sizes: [usize; 4],
    pub min_out_degree: usize,
    /// Minimum over T vertices of out-arcs landing in CoreG.
    pub min_t_to_core: usize,
    /// Minimum over CoreG vertices of out-arcs landing in S.
    pub min_core_to_s: usize,
}

impl BalanceReport {
    /// Every group holds at least an eighth of the vertices.
    pub fn groups_cover_eighth(&self) -> bool {
        self.group_sizes.iter().all(|&s| 8 * s >= self.vertex_count)
    }

    /// Minimum out-degree at least |V| / 2^(2k+3).
    pub fn min_out_meets(&self, k: usize) -> bool {
        self.min_out_degree as u128 * (1u128 << (2 * k + 3)) >= self.vertex_count as u128
    }

    /// Worst T -> CoreG and CoreG -> S out-degrees each reach a 2^-2k
    /// fraction of the target group.
    pub fn fractions_meet(&self, k: usize) -> bool {
        let scale = 1u128 << (2 * k);
        self.min_t_to_core as u128 * scale >= self.group_sizes[group_slot(Group::CoreG)] as u128
            && self.min_core_to_s as u128 * scale >= self.group_sizes[group_slot(Group::S)] as u128
    }
}

pub fn balance_report(d: &Digraph, layout: &AugmentedLayout) -> BalanceReport {
    let group_sizes = layout.group_sizes();
    let count_into = |v: usize, g: Group| {
        d.out_neighbors(v)
            .iter()
            .filter(|&&w| layout.group_of[w as usize] == g)
            .count()
    };
    let mut min_t_to_core = usize::MAX;
    let mut min_core_to_s = usize::MAX;
    for v in d.vertices() {
        match layout.group_of[v] {
            Group::T => min_t_to_core = min_t_to_core.min(count_into(v, Group::CoreG)),
            Group::CoreG => min_core_to_s = min_core_to_s.min(count_into(v, Group::S)),
            _ => {}
        }
    }
    BalanceReport {
        vertex_count: d.vertex_count(),
        group_sizes,
        min_out_degree: d.min_out_degree().unwrap_or(0),
        min_t_to_core,
        min_core_to_s,
    }
}
