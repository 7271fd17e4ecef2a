//! Edge-list file format and the machine-readable verification report.
//!
//! Edge files hold one "u,v" pair of nonnegative base-10 integers per line;
//! '#' lines are comments. Emission lists edges in ascending (u, v) order,
//! so parse -> emit -> parse is stable.

use std::io::{BufRead, Write};

use serde::Serialize;
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::graph::{DirectedGraph, VertexId};
use crate::verify::VerificationReport;

#[derive(Debug, Error)]
pub enum ParseError {
    #[error("line {line}: {message}")]
    Malformed { line: usize, message: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Parses an edge-list file. Tolerates surrounding whitespace, skips blank
/// and '#' lines, rejects anything non-numeric (including negatives).
pub fn parse_edge_list<R: BufRead>(reader: R) -> Result<Vec<(VertexId, VertexId)>, ParseError> {
    let mut pairs = Vec::new();
    for (i, line) in reader.lines().enumerate() {
        let line = line?;
        let line_no = i + 1;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let mut fields = trimmed.split(',');
        let (u, v) = match (fields.next(), fields.next(), fields.next()) {
            (Some(u), Some(v), None) => (u.trim(), v.trim()),
            _ => {
                return Err(ParseError::Malformed {
                    line: line_no,
                    message: format!("expected two comma-separated integers, got {trimmed:?}"),
                })
            }
        };
        let parse = |s: &str| {
            s.parse::<VertexId>().map_err(|_| ParseError::Malformed {
                line: line_no,
                message: format!("invalid vertex id {s:?}"),
            })
        };
        pairs.push((parse(u)?, parse(v)?));
    }
    Ok(pairs)
}

/// Remaps sparse vertex ids onto 0..k preserving order. Returns whether a
/// remap was needed (callers warn in that case).
pub fn compact_ids(pairs: &[(VertexId, VertexId)]) -> (Vec<(VertexId, VertexId)>, bool) {
    let mut ids: Vec<VertexId> = pairs.iter().flat_map(|&(u, v)| [u, v]).collect();
    ids.sort_unstable();
    ids.dedup();
    let contiguous = ids.len() as u64 == ids.last().map_or(0, |&m| m as u64 + 1);
    if contiguous {
        return (pairs.to_vec(), false);
    }
    let rank = |x: VertexId| ids.binary_search(&x).expect("id was collected") as VertexId;
    let remapped = pairs.iter().map(|&(u, v)| (rank(u), rank(v))).collect();
    (remapped, true)
}

/// Writes the edge list in ascending (u, v) order, one "u,v" line per edge.
pub fn write_edge_list<W: Write>(mut writer: W, g: &DirectedGraph) -> std::io::Result<()> {
    for e in g.edges() {
        writeln!(writer, "{},{}", e.source, e.target)?;
    }
    Ok(())
}

pub const REPORT_SCHEMA_VERSION: u32 = 1;

/// Machine-readable companion to [`VerificationReport`]: integers and
/// booleans only, with the average alpha as an exact "p/q" string.
#[derive(Debug, Serialize)]
pub struct ReportFile {
    pub schema_version: u32,
    pub tool_version: String,
    pub input_digest: String,
    pub vertex_count: usize,
    pub edge_count: usize,
    pub loop_count: u64,
    pub two_cycle_pairs: u64,
    pub three_cycle_count: u64,
    pub unblocked_edge_count: u64,
    pub alpha_avg: Option<String>,
    pub alpha_max: u64,
    pub is_fbd: bool,
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    let digest = Sha256::digest(bytes);
    digest.iter().map(|b| format!("{b:02x}")).collect()
}

impl ReportFile {
    pub fn new(report: &VerificationReport, input_digest: String) -> Self {
        ReportFile {
            schema_version: REPORT_SCHEMA_VERSION,
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            input_digest,
            vertex_count: report.vertex_count,
            edge_count: report.edge_count,
            loop_count: report.loop_count,
            two_cycle_pairs: report.two_cycle_pairs,
            three_cycle_count: report.three_cycle_count,
            unblocked_edge_count: report.unblocked_edge_count,
            alpha_avg: report.alpha_avg.map(|(p, q)| format!("{p}/{q}")),
            alpha_max: report.alpha_max,
            is_fbd: report.is_fbd,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_with_comments_and_whitespace() {
        let input = "# header\n0,1\n 1 , 2 \n\n2,0\n";
        let pairs = parse_edge_list(input.as_bytes()).unwrap();
        assert_eq!(pairs, vec![(0, 1), (1, 2), (2, 0)]);
    }

    #[test]
    fn parse_reports_line_numbers() {
        let err = parse_edge_list("0,1\na,b\n".as_bytes()).unwrap_err();
        match err {
            ParseError::Malformed { line, .. } => assert_eq!(line, 2),
            other => panic!("unexpected error {other}"),
        }
        assert!(parse_edge_list("0,-1\n".as_bytes()).is_err());
        assert!(parse_edge_list("0,1,2\n".as_bytes()).is_err());
    }

    #[test]
    fn emit_parse_round_trip() {
        let g = DirectedGraph::from_edge_list([(2, 0), (0, 1), (1, 2)]);
        let mut buf = Vec::new();
        write_edge_list(&mut buf, &g).unwrap();
        assert_eq!(String::from_utf8(buf.clone()).unwrap(), "0,1\n1,2\n2,0\n");
        let reparsed = DirectedGraph::from_edge_list(parse_edge_list(&buf[..]).unwrap());
        assert_eq!(reparsed, g);
    }

    #[test]
    fn compact_only_when_sparse() {
        let (same, remapped) = compact_ids(&[(0, 1), (1, 2)]);
        assert!(!remapped);
        assert_eq!(same, vec![(0, 1), (1, 2)]);
        let (packed, remapped) = compact_ids(&[(10, 20), (20, 30)]);
        assert!(remapped);
        assert_eq!(packed, vec![(0, 1), (1, 2)]);
    }
}
