//! Cohesive sets on three host families: some settle at the whole vertex
//! set at once, some shave a descent chain first, and every landing spot
//! survives the exhaustive definition replay.

use cyclab::extract::{cohesive_audit, find_cohesive, ExtractionParams};
use cyclab::suite::cohesive_zoo;

fn main() {
    let params = ExtractionParams::new(1, 2);
    for inst in cohesive_zoo() {
        let found = find_cohesive(&inst.d, &inst.c, inst.r, inst.m, &params).unwrap();
        let audited = cohesive_audit(&inst.d, &found.set, &inst.c, inst.r);
        println!(
            "{:28} n {:2} -> |X| {:2}, chi {:2}, chain {}, audit {}",
            inst.name,
            inst.d.vertex_count(),
            found.set.len(),
            found.chi.lower,
            found.chain.len(),
            if audited { "ok" } else { "FAILED" }
        );
        assert!(audited);
        for step in &found.chain {
            println!(
                "    shaved at witness {}: set had {} vertices, chi {}",
                step.witness, step.size, step.chi
            );
        }
    }
}
