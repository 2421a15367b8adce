//! Constructive extraction on a dense seeded host: one pattern per engine
//! route, with the trace showing what each engine committed to.

use cyclab::extract::{extract_any, ExtractionParams};
use cyclab::random::random_digraph;
use cyclab::search::verify_embedding;
use cyclab::CyclePattern;

fn main() {
    let d = random_digraph(40, 0.6, 99);
    let mut params = ExtractionParams::new(3, 10);
    params.chi_budget = Some(50_000);

    for word in ["FBFB", "FFBB", "FFBFFB"] {
        let p = CyclePattern::parse(word).unwrap();
        let (emb, trace) = extract_any(&d, &p, &params).unwrap();
        assert!(verify_embedding(&d, &emb));
        println!("{word} via {:?}: map {:?}", trace.route, emb.map);
        println!(
            "  rotation {}, reversed {}, sequence {:?}, restarts {}",
            trace.rotation,
            trace.reversed,
            trace.sequence,
            trace.restarts
        );
        for note in &trace.notes {
            println!("  note: {note}");
        }
    }
}
