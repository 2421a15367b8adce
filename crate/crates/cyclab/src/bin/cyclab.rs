//! Thin command surface over the library. All verdict logic lives in the
//! library; this file parses flags, moves files, and maps outcomes to exit
//! codes: 0 verdict reached (either way), 1 suite or replay failure,
//! 2 inconclusive, 3 input error.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use num::{BigInt, BigRational};

use cyclab::certificate::{
    coloring_certificate, degree_audit_certificate, embedding_certificate,
    extraction_certificate, non_containment_certificate, parse_certificate, to_json,
    verify_certificate, ReplayError,
};
use cyclab::chromatic::{chromatic_bounds, chromatic_exact};
use cyclab::construct::{
    augmented_flip_free, augmented_flip_free_capped, balance_by_cloning, blowup_cycle,
    general_shift_digraph, general_shift_digraph_capped, shift_digraph, AugmentedLayout,
};
use cyclab::extract::{
    extract_any, ExtractError, ExtractionParams, DEFAULT_ATTEMPT_BUDGET, DEFAULT_SEARCH_BUDGET,
};
use cyclab::io::{format_digraph, parse_digraph};
use cyclab::search::{contains_pattern, forbidden_family_check, SearchOutcome};
use cyclab::suite::{known_suites, run_suite, SuiteOptions};
use cyclab::{CyclePattern, Digraph};

#[derive(Parser)]
#[command(name = "cyclab", version, about = "oriented-cycle pattern laboratory")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Write a construction to a digraph file with its sidecars.
    Gen {
        #[command(subcommand)]
        what: GenCmd,
    },
    /// Search a digraph file for a pattern or the whole forbidden family.
    Check {
        input: PathBuf,
        /// Cyclic orientation word, letters F/B or +/-.
        #[arg(long)]
        pattern: Option<String>,
        /// Check every directed cycle and single flip up to this length.
        #[arg(long)]
        family: Option<usize>,
        #[arg(long)]
        budget: Option<u64>,
    },
    /// Chromatic bounds or the exact number of a digraph file.
    Chi {
        input: PathBuf,
        #[arg(long)]
        exact: bool,
        #[arg(long)]
        bounds: bool,
        /// Node cap for the exact solver.
        #[arg(long)]
        budget: Option<u64>,
    },
    /// Run the constructive extraction and write certificate plus trace.
    Extract {
        input: PathBuf,
        /// Cyclic orientation word, letters F/B or +/-.
        pattern: String,
        /// Density margin in (0, 1): a fraction like 3/10 or a decimal.
        #[arg(long)]
        epsilon: String,
        /// Step cap per embedding search.
        #[arg(long)]
        budget: Option<u64>,
        /// Node cap per chromatic run inside the cohesive ladder.
        #[arg(long)]
        chi_budget: Option<u64>,
        /// How many host paths to try per phase.
        #[arg(long)]
        attempts: Option<u64>,
    },
    /// Canonical word, class, and block lengths of a pattern.
    Classify {
        pattern: String,
    },
    /// Run a named experiment battery.
    Suite {
        id: String,
        #[arg(long)]
        trials: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        kmax: Option<usize>,
    },
    /// Certificate tools.
    Cert {
        #[command(subcommand)]
        what: CertCmd,
    },
}

#[derive(Subcommand)]
enum GenCmd {
    /// Blown-up directed cycle: no directed cycle of length at most k.
    Blowup {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        blob: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Ascending r-tuple shift digraph.
    Shift {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        r: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// General shift digraph on 2k-tuples of distinct entries.
    Gshift {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        k: usize,
        /// Vertex-count guard; generation refuses larger hosts.
        #[arg(long)]
        cap: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Shift core with split and path layers; no flip patterns up to k.
    Augmented {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        k: usize,
        /// Also run the cloning rounds that even out the group sizes.
        #[arg(long)]
        balance: bool,
        #[arg(long)]
        cap: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Augmented host with the cloning rounds applied.
    Balanced {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        cap: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum CertCmd {
    /// Replay a certificate against a digraph file.
    Verify { cert: PathBuf, input: PathBuf },
}

const EXIT_FAILED: u8 = 1;
const EXIT_INCONCLUSIVE: u8 = 2;
const EXIT_INPUT: u8 = 3;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let usage = matches!(
                e.kind(),
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion
            );
            let _ = e.print();
            return if usage {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(EXIT_INPUT)
            };
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_INPUT)
        }
    }
}

fn run(cli: Cli) -> Result<u8, String> {
    match cli.cmd {
        Cmd::Gen { what } => cmd_gen(what),
        Cmd::Check {
            input,
            pattern,
            family,
            budget,
        } => cmd_check(&input, pattern.as_deref(), family, budget),
        Cmd::Chi {
            input,
            exact,
            bounds,
            budget,
        } => cmd_chi(&input, exact, bounds, budget),
        Cmd::Extract {
            input,
            pattern,
            epsilon,
            budget,
            chi_budget,
            attempts,
        } => cmd_extract(&input, &pattern, &epsilon, budget, chi_budget, attempts),
        Cmd::Classify { pattern } => cmd_classify(&pattern),
        Cmd::Suite {
            id,
            trials,
            seed,
            n,
            kmax,
        } => cmd_suite(&id, trials, seed, n, kmax),
        Cmd::Cert {
            what: CertCmd::Verify { cert, input },
        } => cmd_cert_verify(&cert, &input),
    }
}

fn read_digraph(path: &PathBuf) -> Result<(Digraph, String), String> {
    let text =
        fs::read_to_string(path).map_err(|e| format!("reading {}: {e}", path.display()))?;
    let d = parse_digraph(&text).map_err(|e| format!("{}: {e}", path.display()))?;
    Ok((d, text))
}

fn parse_pattern(word: &str) -> Result<CyclePattern, String> {
    CyclePattern::parse(word).map_err(|e| format!("pattern {word:?}: {e}"))
}

/// Accepts a/b fractions and plain decimals; the value must land strictly
/// between 0 and 1.
fn parse_epsilon(text: &str) -> Result<BigRational, String> {
    let bad = |why: &str| format!("epsilon {text:?}: {why}");
    let value = if let Some((num, den)) = text.split_once('/') {
        let num: BigInt = num.trim().parse().map_err(|_| bad("unreadable numerator"))?;
        let den: BigInt = den.trim().parse().map_err(|_| bad("unreadable denominator"))?;
        if den == BigInt::from(0) {
            return Err(bad("zero denominator"));
        }
        BigRational::new(num, den)
    } else if let Some((whole, frac)) = text.split_once('.') {
        if !frac.chars().all(|c| c.is_ascii_digit()) || frac.is_empty() {
            return Err(bad("unreadable decimal"));
        }
        let whole: BigInt = if whole.is_empty() {
            BigInt::from(0)
        } else {
            whole.parse().map_err(|_| bad("unreadable decimal"))?
        };
        let scale = BigInt::from(10).pow(frac.len() as u32);
        let frac: BigInt = frac.parse().map_err(|_| bad("unreadable decimal"))?;
        BigRational::new(whole * &scale + frac, scale)
    } else {
        let whole: BigInt = text.trim().parse().map_err(|_| bad("not a number"))?;
        BigRational::from_integer(whole)
    };
    let zero = BigRational::from_integer(BigInt::from(0));
    let one = BigRational::from_integer(BigInt::from(1));
    if value <= zero || value >= one {
        return Err(bad("must lie strictly between 0 and 1"));
    }
    Ok(value)
}

fn sibling(path: &PathBuf, suffix: &str) -> PathBuf {
    PathBuf::from(format!("{}.{suffix}", path.display()))
}

fn write_file(path: &PathBuf, content: &str) -> Result<(), String> {
    fs::write(path, content).map_err(|e| format!("writing {}: {e}", path.display()))?;
    println!("wrote {}", path.display());
    Ok(())
}

fn emit_generated(
    d: &Digraph,
    layout: Option<&AugmentedLayout>,
    out: PathBuf,
) -> Result<u8, String> {
    write_file(&out, &format_digraph(d))?;
    println!(
        "  {} vertices, {} arcs, min out-degree {}",
        d.vertex_count(),
        d.arc_count(),
        d.min_out_degree().map_or(0, |m| m)
    );
    if let Some(layout) = layout {
        let text = serde_json::to_string_pretty(layout).expect("layout serializes");
        write_file(&sibling(&out, "layout.json"), &text)?;
    }
    let cert = degree_audit_certificate(d);
    write_file(&sibling(&out, "degree.cert.json"), &to_json(&cert))?;
    Ok(0)
}

fn cmd_gen(what: GenCmd) -> Result<u8, String> {
    match what {
        GenCmd::Blowup { k, blob, out } => {
            if k < 2 || blob < 1 {
                return Err("blowup needs k >= 2 and blob >= 1".to_string());
            }
            let d = blowup_cycle(k, blob);
            emit_generated(&d, None, out.unwrap_or(format!("blowup-k{k}-b{blob}.dg").into()))
        }
        GenCmd::Shift { m, r, out } => {
            if r < 1 || r > m {
                return Err("shift needs 1 <= r <= m".to_string());
            }
            let d = shift_digraph(m, r);
            emit_generated(&d, None, out.unwrap_or(format!("shift-m{m}-r{r}.dg").into()))
        }
        GenCmd::Gshift { m, k, cap, out } => {
            if k < 1 || k > m {
                return Err("gshift needs 1 <= k <= m".to_string());
            }
            let d = match cap {
                Some(cap) => general_shift_digraph_capped(m, k, cap),
                None => general_shift_digraph(m, k),
            }
            .map_err(|e| e.to_string())?;
            emit_generated(&d, None, out.unwrap_or(format!("gshift-m{m}-k{k}.dg").into()))
        }
        GenCmd::Augmented {
            m,
            k,
            balance,
            cap,
            out,
        } => gen_augmented(m, k, balance, cap, out),
        GenCmd::Balanced { m, k, cap, out } => gen_augmented(m, k, true, cap, out),
    }
}

fn gen_augmented(
    m: usize,
    k: usize,
    balance: bool,
    cap: Option<usize>,
    out: Option<PathBuf>,
) -> Result<u8, String> {
    if k < 3 || m < k {
        return Err("augmented needs 3 <= k <= m".to_string());
    }
    let built = match cap {
        Some(cap) => augmented_flip_free_capped(m, k, cap),
        None => augmented_flip_free(m, k),
    }
    .map_err(|e| e.to_string())?;
    let (d, layout) = if balance {
        balance_by_cloning(built.0, built.1)
    } else {
        built
    };
    let stem = if balance { "balanced" } else { "augmented" };
    let out = out.unwrap_or(format!("{stem}-m{m}-k{k}.dg").into());
    println!("groups {:?}, rounds {:?}", layout.group_sizes(), layout.clone_rounds);
    emit_generated(&d, Some(&layout), out)
}

fn report_outcome(
    input: &PathBuf,
    d: &Digraph,
    p: &CyclePattern,
    outcome: &SearchOutcome,
    budget: Option<u64>,
) -> Result<bool, String> {
    match outcome {
        SearchOutcome::Found { embedding } => {
            println!("{p}: found at {:?}", embedding.map);
            let cert = embedding_certificate(d, embedding);
            write_file(&sibling(input, &format!("{p}.found.cert.json")), &to_json(&cert))?;
            Ok(true)
        }
        SearchOutcome::NotFound { .. } => {
            println!("{p}: certified absent (exhaustive)");
            let cert = non_containment_certificate(d, p, outcome, budget)
                .expect("exhaustive absence certifies");
            write_file(&sibling(input, &format!("{p}.absent.cert.json")), &to_json(&cert))?;
            Ok(true)
        }
        SearchOutcome::Inconclusive { steps } => {
            println!("{p}: inconclusive after {steps} steps");
            Ok(false)
        }
    }
}

fn cmd_check(
    input: &PathBuf,
    pattern: Option<&str>,
    family: Option<usize>,
    budget: Option<u64>,
) -> Result<u8, String> {
    let (d, _) = read_digraph(input)?;
    let mut decided = true;
    match (pattern, family) {
        (Some(word), None) => {
            let p = parse_pattern(word)?;
            let outcome = contains_pattern(&d, &p, budget);
            decided &= report_outcome(input, &d, &p, &outcome, budget)?;
        }
        (None, Some(k)) => {
            if k < 2 {
                return Err("family length must be at least 2".to_string());
            }
            let report = forbidden_family_check(&d, k, budget);
            for entry in &report.entries {
                decided &= report_outcome(input, &d, &entry.pattern, &entry.outcome, budget)?;
            }
        }
        _ => return Err("pass exactly one of --pattern or --family".to_string()),
    }
    Ok(if decided { 0 } else { EXIT_INCONCLUSIVE })
}

fn cmd_chi(input: &PathBuf, exact: bool, bounds: bool, budget: Option<u64>) -> Result<u8, String> {
    if exact == bounds {
        return Err("pass exactly one of --exact or --bounds".to_string());
    }
    let (d, _) = read_digraph(input)?;
    if bounds {
        let res = chromatic_bounds(&d);
        println!(
            "chi in [{}, {}] (clique {}, greedy coloring {})",
            res.lower,
            res.upper,
            res.witness_clique.as_ref().map_or(0, Vec::len),
            res.witness_coloring.color_count
        );
        return Ok(0);
    }
    let res = chromatic_exact(&d, budget);
    if !res.exact {
        println!(
            "inconclusive: chi in [{}, {}] after {} nodes",
            res.lower, res.upper, res.nodes_explored
        );
        return Ok(EXIT_INCONCLUSIVE);
    }
    println!(
        "chi = {} (exact, clique witness {})",
        res.lower,
        res.witness_clique.as_ref().map_or(0, Vec::len)
    );
    let cert = coloring_certificate(&d, &res);
    write_file(&sibling(input, "coloring.cert.json"), &to_json(&cert))?;
    Ok(0)
}

fn cmd_extract(
    input: &PathBuf,
    word: &str,
    epsilon: &str,
    budget: Option<u64>,
    chi_budget: Option<u64>,
    attempts: Option<u64>,
) -> Result<u8, String> {
    let (d, _) = read_digraph(input)?;
    let p = parse_pattern(word)?;
    let params = ExtractionParams {
        epsilon: parse_epsilon(epsilon)?,
        search_budget: Some(budget.unwrap_or(DEFAULT_SEARCH_BUDGET)),
        chi_budget,
        attempt_budget: attempts.unwrap_or(DEFAULT_ATTEMPT_BUDGET),
    };
    match extract_any(&d, &p, &params) {
        Ok((emb, trace)) => {
            println!("extracted {p} via {:?}: map {:?}", trace.route, emb.map);
            let cert = embedding_certificate(&d, &emb);
            write_file(
                &sibling(input, &format!("{p}.embedding.cert.json")),
                &to_json(&cert),
            )?;
            let cert = extraction_certificate(&d, &p, &trace, &emb);
            write_file(
                &sibling(input, &format!("{p}.extraction.cert.json")),
                &to_json(&cert),
            )?;
            Ok(0)
        }
        Err(ExtractError::Failed { trace }) => {
            println!("extraction failed on this host; trace records the attempt");
            let text = serde_json::to_string_pretty(&trace).expect("trace serializes");
            write_file(&sibling(input, &format!("{p}.trace.json")), &text)?;
            Ok(EXIT_INCONCLUSIVE)
        }
        Err(e @ ExtractError::PatternNotGuaranteed { .. })
        | Err(e @ ExtractError::ParameterRejected { .. }) => Err(e.to_string()),
        Err(e) => {
            println!("extraction gave up: {e}");
            Ok(EXIT_INCONCLUSIVE)
        }
    }
}

fn cmd_classify(word: &str) -> Result<u8, String> {
    let p = parse_pattern(word)?;
    let canonical = p.canonical();
    println!("word: {p}");
    if canonical != p {
        println!("canonical: {canonical}");
    }
    println!("class: {:?}", p.classify());
    println!("blocks: {:?}", p.blocks().lengths);
    Ok(0)
}

fn cmd_suite(
    id: &str,
    trials: Option<usize>,
    seed: Option<u64>,
    n: Option<usize>,
    kmax: Option<usize>,
) -> Result<u8, String> {
    let opts = SuiteOptions {
        trials,
        seed,
        n,
        k_max: kmax,
    };
    let Some(report) = run_suite(id, &opts) else {
        return Err(format!(
            "unknown suite {id:?}; known: {}",
            known_suites().join(", ")
        ));
    };
    print!("{}", report.render());
    Ok(if report.ok() { 0 } else { EXIT_FAILED })
}

fn cmd_cert_verify(cert_path: &PathBuf, input: &PathBuf) -> Result<u8, String> {
    let cert_text = fs::read_to_string(cert_path)
        .map_err(|e| format!("reading {}: {e}", cert_path.display()))?;
    let input_text =
        fs::read_to_string(input).map_err(|e| format!("reading {}: {e}", input.display()))?;
    let cert = parse_certificate(&cert_text).map_err(|e| format!("{}: {e}", cert_path.display()))?;
    match verify_certificate(&cert, &input_text) {
        Ok(()) => {
            println!("certificate replays: {:?} against {}", cert.kind, input.display());
            Ok(0)
        }
        Err(e @ ReplayError::Json(_)) | Err(e @ ReplayError::Input(_)) => Err(e.to_string()),
        Err(e) => {
            println!("certificate does not replay: {e}");
            Ok(EXIT_FAILED)
        }
    }
}
