//! Every certificate kind round-trips through JSON and replays against
//! its input; a tampered map is caught by the replay.

use cyclab::certificate::{
    coloring_certificate, degree_audit_certificate, embedding_certificate,
    non_containment_certificate, parse_certificate, to_json, verify_certificate,
};
use cyclab::chromatic::chromatic_exact;
use cyclab::construct::blowup_cycle;
use cyclab::io::format_digraph;
use cyclab::search::contains_pattern;
use cyclab::CyclePattern;

fn main() {
    let d = blowup_cycle(3, 2);
    let text = format_digraph(&d);

    let p = CyclePattern::parse("FFF").unwrap();
    let absent = contains_pattern(&d, &p, None);
    let cert = non_containment_certificate(&d, &p, &absent, None).unwrap();
    verify_certificate(&cert, &text).unwrap();
    println!("non-containment: replays ({} bytes)", to_json(&cert).len());

    let long = CyclePattern::parse("FFFF").unwrap();
    let found = contains_pattern(&d, &long, None);
    let emb = found.found().unwrap();
    let cert = embedding_certificate(&d, emb);
    verify_certificate(&cert, &text).unwrap();
    println!("embedding: replays at map {:?}", emb.map);

    let chi = chromatic_exact(&d, None);
    let cert = coloring_certificate(&d, &chi);
    verify_certificate(&cert, &text).unwrap();
    println!("coloring: replays at chi {}", chi.lower);

    let cert = degree_audit_certificate(&d);
    verify_certificate(&cert, &text).unwrap();
    println!("degree audit: replays");

    // Tamper with the embedding map and watch the replay refuse it. The
    // duplicated vertex cannot realize a cycle, whereas a blob-mate swap
    // would just be another valid embedding.
    let mut raw: serde_json::Value =
        serde_json::from_str(&to_json(&embedding_certificate(&d, emb))).unwrap();
    raw["payload"]["embedding"]["map"][0] = serde_json::Value::from(emb.map[1]);
    let parsed = parse_certificate(&raw.to_string()).unwrap();
    match verify_certificate(&parsed, &text) {
        Err(e) => println!("tampered embedding: {e}"),
        Ok(()) => unreachable!("tampering must not replay"),
    }
}
