//! Seeded random instances.
//!
//! One sampler, one stream discipline: ordered pairs (u, v) with u != v are
//! visited in ascending (u, v) order and each consumes exactly one f64 draw,
//! so a (n, p, seed) triple names the same digraph forever. Certificates rely
//! on this.

use crate::digraph::Digraph;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Each ordered pair becomes an arc independently with probability `p`.
pub fn random_digraph(n: usize, p: f64, seed: u64) -> Digraph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut d = Digraph::new(n);
    for u in 0..n {
        for v in 0..n {
            if u == v {
                continue;
            }
            if rng.gen::<f64>() < p {
                d.add_arc(u, v).expect("fresh simple arc");
            }
        }
    }
    d
}

/// Every unordered pair gets exactly one arc; direction u->v with
/// probability 1/2. Pairs visited in ascending order, one draw each.
pub fn random_tournament(n: usize, seed: u64) -> Digraph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut d = Digraph::new(n);
    for u in 0..n {
        for v in (u + 1)..n {
            if rng.gen::<bool>() {
                d.add_arc(u, v).expect("fresh simple arc");
            } else {
                d.add_arc(v, u).expect("fresh simple arc");
            }
        }
    }
    d
}
