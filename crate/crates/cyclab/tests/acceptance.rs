//! Full acceptance battery. Each criterion runs one named suite under a
//! wall-clock budget and contributes a single verdict line; the test fails
//! only after every criterion has reported.

use std::time::{Duration, Instant};

use cyclab::suite::{
    suite_augmented, suite_balance, suite_blowup_cycles, suite_blowup_degrees, suite_cloning,
    suite_cohesive, suite_extraction, suite_gallai_roy, suite_search_oracle, suite_shift_chi,
    SuiteReport,
};

struct Verdict {
    name: &'static str,
    ok: bool,
    timed_out: bool,
    elapsed: Duration,
    budget: Duration,
    detail: String,
}

fn run(name: &'static str, budget_secs: u64, body: impl FnOnce() -> SuiteReport) -> Verdict {
    let start = Instant::now();
    let report = body();
    let elapsed = start.elapsed();
    let budget = Duration::from_secs(budget_secs);
    let timed_out = elapsed >= budget;
    let detail = if report.ok() {
        format!("{} checks", report.passed)
    } else {
        report.failed.join("; ")
    };
    Verdict { name, ok: report.ok() && !timed_out, timed_out, elapsed, budget, detail }
}

#[test]
fn acceptance() {
    let verdicts = [
        run("blowup hosts omit every short directed cycle", 5, || suite_blowup_cycles(6)),
        run("blowup degrees and clique witnesses are exact", 1, || suite_blowup_degrees(6)),
        run("augmented host certifies its forbidden family", 60, suite_augmented),
        run("cloning preserves forbidden-family freeness", 30, || suite_cloning(200, 7)),
        run("balanced hosts meet the degree and fraction floors", 60, || suite_balance(4)),
        run("path levellings properly color random hosts", 60, || suite_gallai_roy(30, 100, 7)),
        run("cohesive descent lands on audited sets", 300, suite_cohesive),
        run("every guaranteed pattern extracts from dense hosts", 600, || {
            suite_extraction(20, 0)
        }),
        run("bounded search agrees with the exhaustive oracle", 300, || {
            suite_search_oracle(500, 7)
        }),
        run("iterated-tuple hosts hit the logarithmic chromatic profile", 60, suite_shift_chi),
    ];

    let mut failures = Vec::new();
    for v in &verdicts {
        let tag = if v.ok { "PASS" } else { "FAIL" };
        let clock = if v.timed_out { "over budget" } else { "within budget" };
        println!(
            "{tag} {name}: {detail} in {elapsed:.2?} ({clock} {budget:?})",
            name = v.name,
            detail = v.detail,
            elapsed = v.elapsed,
            budget = v.budget,
        );
        if !v.ok {
            failures.push(v.name);
        }
    }
    assert!(failures.is_empty(), "failed criteria: {failures:?}");
}
