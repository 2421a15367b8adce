//! Longest-path levels as a proper coloring: the level count always
//! reaches the exact chromatic number, on digraphs of any orientation.

use cyclab::chromatic::{chromatic_exact, gallai_roy_path};
use cyclab::random::{random_digraph, random_tournament};

fn main() {
    for seed in 0..6 {
        let d = random_digraph(18, 0.2 + 0.05 * seed as f64, seed);
        let (path, coloring) = gallai_roy_path(&d);
        coloring.audit(&d).unwrap();
        let chi = chromatic_exact(&d, None);
        println!(
            "random(18, {:.2}, seed {seed}): path {} vertices, {} levels, chi {}",
            0.2 + 0.05 * seed as f64,
            path.len(),
            coloring.color_count,
            chi.lower
        );
        assert!(path.len() >= chi.lower);
    }

    let t = random_tournament(25, 5);
    let (path, _) = gallai_roy_path(&t);
    println!("tournament(25): path {} vertices (must be all 25)", path.len());
    assert_eq!(path.len(), 25);
}
