//! The augmented shift host: no 2-cycle, no triangle of either
//! orientation, and after the cloning rounds every group carries its
//! share of the vertices and the degrees.

use cyclab::construct::{
    augmented_flip_free, balance_by_cloning, balance_report, split_arc_audit,
};
use cyclab::search::forbidden_family_check;

fn main() {
    let (d, layout) = augmented_flip_free(3, 3).unwrap();
    println!(
        "augmented(3,3): {} vertices, {} arcs, groups {:?}",
        d.vertex_count(),
        d.arc_count(),
        layout.group_sizes()
    );
    assert!(split_arc_audit(&d, &layout));

    let family = forbidden_family_check(&d, 3, None);
    for entry in &family.entries {
        println!(
            "  {}: {}",
            entry.pattern,
            if entry.outcome.is_absent_exhaustive() {
                "certified absent"
            } else {
                "present?"
            }
        );
    }
    assert!(family.all_absent_exhaustive());

    let (d, layout) = balance_by_cloning(d, layout);
    let audit = balance_report(&d, &layout);
    println!(
        "balanced: {} vertices, groups {:?} after rounds {:?}",
        d.vertex_count(),
        audit.group_sizes,
        layout.clone_rounds
    );
    println!(
        "  min out-degree {}, worst T->CoreG {}, worst CoreG->S {}",
        audit.min_out_degree, audit.min_t_to_core, audit.min_core_to_s
    );
    assert!(audit.groups_cover_eighth());
    assert!(audit.min_out_meets(3));
    assert!(audit.fractions_meet(3));
    println!("balance audit holds");
}
