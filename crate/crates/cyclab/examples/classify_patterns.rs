//! The trichotomy over every canonical orientation word of lengths 4 to 6,
//! with the engine route and thresholds for the class that always appears.

use cyclab::extract::{dispatch_route, thresholds, ExtractionParams};
use cyclab::pattern::{canonical_patterns, PatternClass};

fn main() {
    let params = ExtractionParams::new(1, 4);
    for k in 4..=6 {
        println!("length {k}:");
        for p in canonical_patterns(k) {
            let class = p.classify();
            let blocks = p.blocks().lengths;
            match class {
                PatternClass::AlwaysAppears => {
                    let route = dispatch_route(&p).unwrap();
                    let t = thresholds(&p, &params).unwrap();
                    println!(
                        "  {p}: {class:?} blocks {blocks:?} -> {route:?}, needs n >= {}, chi >= {} at eps 1/4",
                        t.min_n, t.min_chi
                    );
                }
                _ => println!("  {p}: {class:?} blocks {blocks:?}"),
            }
        }
    }
}
