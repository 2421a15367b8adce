//! Blown-up directed cycles: minimum out-degree grows while every short
//! directed cycle stays certifiably absent.

use cyclab::chromatic::chromatic_bounds;
use cyclab::construct::blowup_cycle;
use cyclab::pattern::Dir;
use cyclab::search::contains_pattern;
use cyclab::CyclePattern;

fn directed_cycle(j: usize) -> CyclePattern {
    if j == 2 {
        CyclePattern::parse("FB").unwrap()
    } else {
        CyclePattern::from_word(vec![Dir::F; j]).unwrap()
    }
}

fn main() {
    for k in 2..=6 {
        for blob in [2, 3] {
            let d = blowup_cycle(k, blob);
            let mut verdicts = Vec::new();
            for j in 2..=k {
                let out = contains_pattern(&d, &directed_cycle(j), None);
                verdicts.push(format!(
                    "C{j} {}",
                    if out.is_absent_exhaustive() { "absent" } else { "?" }
                ));
            }
            let bounds = chromatic_bounds(&d);
            println!(
                "blowup({k},{blob}): {:2} vertices, min out {}, clique {}, {}",
                d.vertex_count(),
                d.min_out_degree().unwrap(),
                bounds.witness_clique.map_or(0, |c| c.len()),
                verdicts.join(", ")
            );
        }
    }
}
