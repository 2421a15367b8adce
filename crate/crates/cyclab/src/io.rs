//! Text serialization of digraphs.
//!
//! Format: line 1 is `n m`, the next `m` lines are `u v` arcs with 0-indexed
//! endpoints, then optional `# label v <string>` trailer lines. LF endings.
//! Emission is canonical (arcs ascending by tail then head, labels ascending
//! by vertex), so parse-then-format normalizes and format-then-parse is exact.

use crate::digraph::{Digraph, DigraphError};
use std::fmt::Write as _;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum FormatError {
    #[error("missing header line")]
    MissingHeader,
    #[error("line {line}: expected `{expected}`")]
    Malformed { line: usize, expected: &'static str },
    #[error("line {line}: {source}")]
    BadArc {
        line: usize,
        #[source]
        source: DigraphError,
    },
    #[error("expected {expected} arc lines, found {found}")]
    ArcCountMismatch { expected: usize, found: usize },
    #[error("line {line}: label vertex {vertex} out of range")]
    LabelOutOfRange { line: usize, vertex: usize },
}

pub fn parse_digraph(text: &str) -> Result<Digraph, FormatError> {
    let mut lines = text.lines().enumerate();
    let (_, header) = lines.next().ok_or(FormatError::MissingHeader)?;
    let mut head = header.split_whitespace();
    let parse_usize = |tok: Option<&str>| tok.and_then(|t| t.parse::<usize>().ok());
    let n = parse_usize(head.next());
    let m = parse_usize(head.next());
    let (n, m) = match (n, m, head.next()) {
        (Some(n), Some(m), None) => (n, m),
        _ => {
            return Err(FormatError::Malformed {
                line: 1,
                expected: "n m",
            })
        }
    };

    let mut d = Digraph::new(n);
    let mut found = 0usize;
    for (idx, raw) in lines {
        let line = idx + 1;
        if raw.trim().is_empty() {
            continue;
        }
        if let Some(rest) = raw.strip_prefix("# label ") {
            let mut parts = rest.splitn(2, ' ');
            let v = parts
                .next()
                .and_then(|t| t.parse::<usize>().ok())
                .ok_or(FormatError::Malformed {
                    line,
                    expected: "# label v <string>",
                })?;
            if v >= n {
                return Err(FormatError::LabelOutOfRange { line, vertex: v });
            }
            d.set_label(v, parts.next().unwrap_or("").to_string());
            continue;
        }
        if raw.starts_with('#') {
            continue;
        }
        let mut toks = raw.split_whitespace();
        let u = parse_usize(toks.next());
        let v = parse_usize(toks.next());
        let (u, v) = match (u, v, toks.next()) {
            (Some(u), Some(v), None) => (u, v),
            _ => {
                return Err(FormatError::Malformed {
                    line,
                    expected: "u v",
                })
            }
        };
        d.add_arc(u, v)
            .map_err(|source| FormatError::BadArc { line, source })?;
        found += 1;
    }
    if found != m {
        return Err(FormatError::ArcCountMismatch {
            expected: m,
            found,
        });
    }
    Ok(d)
}

pub fn format_digraph(d: &Digraph) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "{} {}", d.vertex_count(), d.arc_count());
    for (u, v) in d.arcs() {
        let _ = writeln!(s, "{u} {v}");
    }
    for v in d.vertices() {
        if let Some(label) = d.label(v) {
            let _ = writeln!(s, "# label {v} {label}");
        }
    }
    s
}

pub fn to_dot(d: &Digraph) -> String {
    let mut s = String::from("digraph D {\n");
    for v in d.vertices() {
        match d.label(v) {
            Some(label) => {
                let esc = label.replace('\\', "\\\\").replace('"', "\\\"");
                let _ = writeln!(s, "  {v} [label=\"{v}: {esc}\"];");
            }
            None => {
                let _ = writeln!(s, "  {v};");
            }
        }
    }
    for (u, v) in d.arcs() {
        let _ = writeln!(s, "  {u} -> {v};");
    }
    s.push_str("}\n");
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trips_exactly() {
        let mut d = Digraph::new(4);
        for (u, v) in [(0, 1), (1, 2), (2, 3), (3, 0), (0, 2)] {
            d.add_arc(u, v).unwrap();
        }
        d.set_label(0, "start");
        d.set_label(3, "two words");
        let text = format_digraph(&d);
        assert_eq!(parse_digraph(&text).unwrap(), d);
        // Canonical emission is a fixed point.
        assert_eq!(format_digraph(&parse_digraph(&text).unwrap()), text);
    }

    #[test]
    fn parse_normalizes_arc_order() {
        let d = parse_digraph("3 3\n2 0\n0 1\n1 2\n").unwrap();
        assert_eq!(format_digraph(&d), "3 3\n0 1\n1 2\n2 0\n");
    }

    #[test]
    fn header_and_arc_errors() {
        assert_eq!(parse_digraph(""), Err(FormatError::MissingHeader));
        assert!(matches!(
            parse_digraph("x y\n"),
            Err(FormatError::Malformed { line: 1, .. })
        ));
        assert_eq!(
            parse_digraph("2 2\n0 1\n"),
            Err(FormatError::ArcCountMismatch {
                expected: 2,
                found: 1
            })
        );
        assert!(matches!(
            parse_digraph("2 1\n1 1\n"),
            Err(FormatError::BadArc {
                line: 2,
                source: DigraphError::SelfLoop(1)
            })
        ));
        assert!(matches!(
            parse_digraph("2 1\n0 5\n"),
            Err(FormatError::BadArc { line: 2, .. })
        ));
    }

    #[test]
    fn labels_may_contain_spaces_and_empty_is_kept() {
        let d = parse_digraph("2 1\n0 1\n# label 1 a b c\n# label 0 \n").unwrap();
        assert_eq!(d.label(1), Some("a b c"));
        assert_eq!(d.label(0), Some(""));
        assert!(matches!(
            parse_digraph("1 0\n# label 7 x\n"),
            Err(FormatError::LabelOutOfRange { vertex: 7, .. })
        ));
    }

    #[test]
    fn dot_export_mentions_every_arc() {
        let mut d = Digraph::new(2);
        d.add_arc(0, 1).unwrap();
        d.set_label(1, "sink \"q\"");
        let dot = to_dot(&d);
        assert!(dot.contains("0 -> 1;"));
        assert!(dot.contains("\\\"q\\\""));
    }
}
