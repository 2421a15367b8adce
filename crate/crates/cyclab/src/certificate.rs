//! Replayable claim certificates.
//!
//! A certificate pins a claim to a digraph by the digest of its canonical
//! text form. Replaying checks the digest and then reproduces the verdict
//! from the recorded witness: embeddings are re-verified arc by arc,
//! colorings re-audited, non-containment re-searched at the recorded budget,
//! degree audits recomputed. The `exact` flag on coloring certificates is
//! carried from the solver; replay validates the witnesses (coloring and
//! clique), not the solver run itself.

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::chromatic::ChromaticResult;
use crate::digraph::Digraph;
use crate::extract::{ExtractionTrace, Route};
use crate::io::{format_digraph, parse_digraph, FormatError};
use crate::pattern::{CyclePattern, PatternClass};
use crate::search::{contains_pattern, verify_embedding, Embedding, SearchOutcome};

pub const SCHEMA: &str = "cyclab.cert.v1";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CertKind {
    Embedding,
    Coloring,
    NonContainment,
    DegreeAudit,
    ExtractionTrace,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Certificate {
    pub schema: String,
    pub kind: CertKind,
    /// Hex digest of the canonical text form of the digraph.
    pub input_digest: String,
    pub tool_version: String,
    pub payload: serde_json::Value,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct EmbeddingPayload {
    embedding: Embedding,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct ColoringPayload {
    chi_upper: usize,
    coloring: Vec<usize>,
    clique: Option<Vec<usize>>,
    exact: bool,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct NonContainmentPayload {
    pattern: String,
    budget: Option<u64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct DegreeAuditPayload {
    vertex_count: usize,
    arc_count: usize,
    min_out_degree: usize,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct ExtractionPayload {
    pattern: String,
    epsilon: String,
    route: Route,
    map: Vec<usize>,
    /// Full engine trace, kept for human audit; replay verifies the map.
    trace: serde_json::Value,
}

/// Digest of the canonical text form, so any file that parses to the same
/// digraph digests identically.
pub fn digest_digraph(d: &Digraph) -> String {
    let canonical = format_digraph(d);
    let mut h = Sha256::new();
    h.update(canonical.as_bytes());
    hex::encode(h.finalize())
}

fn certificate(d: &Digraph, kind: CertKind, payload: serde_json::Value) -> Certificate {
    Certificate {
        schema: SCHEMA.into(),
        kind,
        input_digest: digest_digraph(d),
        tool_version: env!("CARGO_PKG_VERSION").into(),
        payload,
    }
}

pub fn embedding_certificate(d: &Digraph, embedding: &Embedding) -> Certificate {
    assert!(verify_embedding(d, embedding), "only verified embeddings are certified");
    let payload = EmbeddingPayload {
        embedding: embedding.clone(),
    };
    certificate(
        d,
        CertKind::Embedding,
        serde_json::to_value(payload).expect("payload serializes"),
    )
}

pub fn coloring_certificate(d: &Digraph, result: &ChromaticResult) -> Certificate {
    result
        .witness_coloring
        .audit(d)
        .expect("only audited colorings are certified");
    let payload = ColoringPayload {
        chi_upper: result.witness_coloring.color_count,
        coloring: result.witness_coloring.color.clone(),
        clique: result.witness_clique.clone(),
        exact: result.exact,
    };
    certificate(
        d,
        CertKind::Coloring,
        serde_json::to_value(payload).expect("payload serializes"),
    )
}

/// Only an exhaustive NotFound outcome is certifiable.
pub fn non_containment_certificate(
    d: &Digraph,
    p: &CyclePattern,
    outcome: &SearchOutcome,
    budget: Option<u64>,
) -> Option<Certificate> {
    if !outcome.is_absent_exhaustive() {
        return None;
    }
    let payload = NonContainmentPayload {
        pattern: p.to_string(),
        budget,
    };
    Some(certificate(
        d,
        CertKind::NonContainment,
        serde_json::to_value(payload).expect("payload serializes"),
    ))
}

pub fn degree_audit_certificate(d: &Digraph) -> Certificate {
    let payload = DegreeAuditPayload {
        vertex_count: d.vertex_count(),
        arc_count: d.arc_count(),
        min_out_degree: d.min_out_degree().unwrap_or(0),
    };
    certificate(
        d,
        CertKind::DegreeAudit,
        serde_json::to_value(payload).expect("payload serializes"),
    )
}

pub fn extraction_certificate(
    d: &Digraph,
    p: &CyclePattern,
    trace: &ExtractionTrace,
    embedding: &Embedding,
) -> Certificate {
    assert!(verify_embedding(d, embedding), "only verified embeddings are certified");
    let payload = ExtractionPayload {
        pattern: p.to_string(),
        epsilon: trace.epsilon.clone(),
        route: trace.route,
        map: embedding.map.clone(),
        trace: serde_json::to_value(trace).expect("trace serializes"),
    };
    certificate(
        d,
        CertKind::ExtractionTrace,
        serde_json::to_value(payload).expect("payload serializes"),
    )
}

#[derive(Debug, Error)]
pub enum ReplayError {
    #[error("certificate is not valid JSON: {0}")]
    Json(String),
    #[error("unsupported schema {0:?}")]
    Schema(String),
    #[error("digraph failed to parse: {0}")]
    Input(#[from] FormatError),
    #[error("input digest mismatch: certificate has {expected}, input digests to {found}")]
    Digest { expected: String, found: String },
    #[error("payload malformed: {0}")]
    Payload(String),
    #[error("replay did not reproduce the verdict: {0}")]
    Verdict(String),
}

pub fn parse_certificate(text: &str) -> Result<Certificate, ReplayError> {
    let cert: Certificate =
        serde_json::from_str(text).map_err(|e| ReplayError::Json(e.to_string()))?;
    if cert.schema != SCHEMA {
        return Err(ReplayError::Schema(cert.schema));
    }
    Ok(cert)
}

pub fn to_json(cert: &Certificate) -> String {
    serde_json::to_string_pretty(cert).expect("certificate serializes")
}

fn payload<T: for<'de> Deserialize<'de>>(cert: &Certificate) -> Result<T, ReplayError> {
    serde_json::from_value(cert.payload.clone()).map_err(|e| ReplayError::Payload(e.to_string()))
}

fn check_clique(d: &Digraph, clique: &[usize]) -> Result<(), ReplayError> {
    for (i, &u) in clique.iter().enumerate() {
        if u >= d.vertex_count() {
            return Err(ReplayError::Verdict(format!("clique vertex {u} out of range")));
        }
        for &v in &clique[i + 1..] {
            if u == v || !(d.has_arc(u, v) || d.has_arc(v, u)) {
                return Err(ReplayError::Verdict(format!(
                    "clique vertices {u} and {v} are not adjacent"
                )));
            }
        }
    }
    Ok(())
}

/// Parse the digraph text, match the digest, then reproduce the verdict
/// from the recorded witness.
pub fn verify_certificate(cert: &Certificate, digraph_text: &str) -> Result<(), ReplayError> {
    if cert.schema != SCHEMA {
        return Err(ReplayError::Schema(cert.schema.clone()));
    }
    let d = parse_digraph(digraph_text)?;
    let found = digest_digraph(&d);
    if found != cert.input_digest {
        return Err(ReplayError::Digest {
            expected: cert.input_digest.clone(),
            found,
        });
    }
    match cert.kind {
        CertKind::Embedding => {
            let p: EmbeddingPayload = payload(cert)?;
            if !verify_embedding(&d, &p.embedding) {
                return Err(ReplayError::Verdict(
                    "embedding does not realize the pattern".into(),
                ));
            }
        }
        CertKind::Coloring => {
            let p: ColoringPayload = payload(cert)?;
            let coloring = crate::chromatic::Coloring {
                color: p.coloring,
                color_count: p.chi_upper,
            };
            coloring
                .audit(&d)
                .map_err(ReplayError::Verdict)?;
            if let Some(clique) = &p.clique {
                check_clique(&d, clique)?;
            }
        }
        CertKind::NonContainment => {
            let p: NonContainmentPayload = payload(cert)?;
            let pattern = CyclePattern::parse(&p.pattern)
                .map_err(|e| ReplayError::Payload(e.to_string()))?;
            let outcome = contains_pattern(&d, &pattern, p.budget);
            if !outcome.is_absent_exhaustive() {
                return Err(ReplayError::Verdict(format!(
                    "re-search did not confirm exhaustive absence of {}",
                    p.pattern
                )));
            }
        }
        CertKind::DegreeAudit => {
            let p: DegreeAuditPayload = payload(cert)?;
            if d.vertex_count() != p.vertex_count
                || d.arc_count() != p.arc_count
                || d.min_out_degree().unwrap_or(0) != p.min_out_degree
            {
                return Err(ReplayError::Verdict(format!(
                    "degree audit mismatch: recorded {}v/{}a/min-out {}, input has {}v/{}a/min-out {}",
                    p.vertex_count,
                    p.arc_count,
                    p.min_out_degree,
                    d.vertex_count(),
                    d.arc_count(),
                    d.min_out_degree().unwrap_or(0)
                )));
            }
        }
        CertKind::ExtractionTrace => {
            let p: ExtractionPayload = payload(cert)?;
            let pattern = CyclePattern::parse(&p.pattern)
                .map_err(|e| ReplayError::Payload(e.to_string()))?;
            if pattern.classify() != PatternClass::AlwaysAppears {
                return Err(ReplayError::Verdict(format!(
                    "pattern {} is not in the always-appearing class",
                    p.pattern
                )));
            }
            let embedding = Embedding::cycle(pattern, p.map);
            if !verify_embedding(&d, &embedding) {
                return Err(ReplayError::Verdict(
                    "extraction map does not realize the pattern".into(),
                ));
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chromatic::chromatic_exact;
    use crate::construct::{blowup_cycle, shift_digraph};
    use crate::extract::{extract_any, ExtractionParams};

    fn complete(n: usize) -> Digraph {
        let mut d = Digraph::new(n);
        for u in 0..n {
            for v in 0..n {
                if u != v {
                    d.add_arc(u, v).unwrap();
                }
            }
        }
        d
    }

    fn directed_cycle(n: usize) -> Digraph {
        let mut d = Digraph::new(n);
        for v in 0..n {
            d.add_arc(v, (v + 1) % n).unwrap();
        }
        d
    }

    #[test]
    fn schema_and_kind_strings_are_frozen() {
        assert_eq!(SCHEMA, "cyclab.cert.v1");
        let kinds = [
            (CertKind::Embedding, "embedding"),
            (CertKind::Coloring, "coloring"),
            (CertKind::NonContainment, "non-containment"),
            (CertKind::DegreeAudit, "degree-audit"),
            (CertKind::ExtractionTrace, "extraction-trace"),
        ];
        for (kind, s) in kinds {
            assert_eq!(serde_json::to_value(kind).unwrap(), serde_json::json!(s));
        }
    }

    #[test]
    fn embedding_certificate_replays() {
        let d = directed_cycle(5);
        let p = CyclePattern::parse("FFFFF").unwrap();
        let outcome = contains_pattern(&d, &p, None);
        let emb = outcome.found().unwrap();
        let cert = embedding_certificate(&d, emb);
        let text = format_digraph(&d);
        verify_certificate(&cert, &text).unwrap();

        let parsed = parse_certificate(&to_json(&cert)).unwrap();
        verify_certificate(&parsed, &text).unwrap();

        let other = format_digraph(&directed_cycle(6));
        assert!(matches!(
            verify_certificate(&cert, &other),
            Err(ReplayError::Digest { .. })
        ));

        let mut tampered = cert.clone();
        tampered.payload["embedding"]["map"] = serde_json::json!([0, 1, 2, 3, 3]);
        assert!(matches!(
            verify_certificate(&tampered, &text),
            Err(ReplayError::Verdict(_))
        ));
    }

    #[test]
    fn coloring_certificate_replays() {
        let d = shift_digraph(5, 2);
        let res = chromatic_exact(&d, None);
        assert!(res.exact);
        let cert = coloring_certificate(&d, &res);
        verify_certificate(&cert, &format_digraph(&d)).unwrap();
    }

    #[test]
    fn non_containment_certificate_replays() {
        let d = blowup_cycle(3, 2);
        let p = CyclePattern::parse("FFF").unwrap();
        let outcome = contains_pattern(&d, &p, None);
        let cert = non_containment_certificate(&d, &p, &outcome, None).unwrap();
        verify_certificate(&cert, &format_digraph(&d)).unwrap();

        let found = contains_pattern(&complete(4), &p, None);
        assert!(non_containment_certificate(&complete(4), &p, &found, None).is_none());
    }

    #[test]
    fn degree_audit_certificate_replays() {
        let d = blowup_cycle(2, 2);
        let cert = degree_audit_certificate(&d);
        verify_certificate(&cert, &format_digraph(&d)).unwrap();
        assert_eq!(cert.payload["min_out_degree"], serde_json::json!(2));
    }

    #[test]
    fn extraction_certificate_replays() {
        let d = complete(8);
        let p = CyclePattern::parse("FBFB").unwrap();
        let params = ExtractionParams::new(1, 2);
        let (emb, trace) = extract_any(&d, &p, &params).unwrap();
        let cert = extraction_certificate(&d, &p, &trace, &emb);
        verify_certificate(&cert, &format_digraph(&d)).unwrap();
        assert_eq!(cert.payload["route"], serde_json::json!("rlrl"));
    }
}
