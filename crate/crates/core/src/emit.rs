//! Table output: CSV, JSON lines and Markdown.

use std::fmt::Write as _;
use std::str::FromStr;

use serde::Serialize;

use crate::enumeration::CandidateRecord;
use crate::error::{Error, Result};
use crate::monodromy::Decision;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Format {
    Csv,
    Json,
    Md,
}

impl FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(Format::Csv),
            "json" | "jsonl" => Ok(Format::Json),
            "md" | "markdown" => Ok(Format::Md),
            _ => Err(Error::Argument(format!("unknown format {s:?}"))),
        }
    }
}

#[derive(Serialize)]
struct CandidateRow {
    number: Option<u32>,
    degree: u32,
    pi1: String,
    pi2: String,
    pi3: String,
    cover_source: String,
    cover_target: String,
}

impl From<&CandidateRecord> for CandidateRow {
    fn from(r: &CandidateRecord) -> Self {
        let [a, b, c] = r.datum.partitions();
        CandidateRow {
            number: r.reference_number,
            degree: r.datum.degree(),
            pi1: a.to_string(),
            pi2: b.to_string(),
            pi3: c.to_string(),
            cover_source: r.cover.source.to_string(),
            cover_target: r.cover.target.to_string(),
        }
    }
}

#[derive(Serialize)]
struct DecisionRow {
    number: Option<u32>,
    datum: String,
    verdict: String,
    layer: String,
    evidence: String,
    search_nodes: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    certificate: Option<[String; 3]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    all_count: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    connected_count: Option<String>,
}

impl DecisionRow {
    fn new(number: Option<u32>, d: &Decision) -> Self {
        DecisionRow {
            number,
            datum: d.datum.to_string(),
            verdict: d.verdict.to_string(),
            layer: d.layer.to_string(),
            evidence: d.evidence_summary(),
            search_nodes: d.search_nodes,
            certificate: d.certificate.as_ref().map(|c| c.sigmas().map(ToString::to_string)),
            all_count: d.counts.as_ref().map(|c| c.all_count.to_string()),
            connected_count: d.counts.as_ref().map(|c| c.connected_count.to_string()),
        }
    }
}

/// Header unquoted; text fields of the rows always quoted, as in the
/// fixture.
fn csv_text<T: Serialize>(rows: &[T], header: &[&str]) -> Result<String> {
    let mut out = header.join(",");
    out.push('\n');
    let mut w = csv::WriterBuilder::new()
        .has_headers(false)
        .quote_style(csv::QuoteStyle::NonNumeric)
        .from_writer(out.into_bytes());
    for row in rows {
        w.serialize(row).map_err(std::io::Error::from)?;
    }
    let bytes = w.into_inner().map_err(|e| e.into_error())?;
    Ok(String::from_utf8(bytes).expect("utf-8"))
}

fn json_lines<T: Serialize>(rows: &[T]) -> String {
    let mut out = String::new();
    for row in rows {
        out.push_str(&serde_json::to_string(row).expect("plain data"));
        out.push('\n');
    }
    out
}

fn markdown(header: &[&str], rows: impl Iterator<Item = Vec<String>>) -> String {
    let mut out = format!("| {} |\n", header.join(" | "));
    writeln!(out, "|{}", "---|".repeat(header.len())).unwrap();
    for cells in rows {
        writeln!(out, "| {} |", cells.join(" | ")).unwrap();
    }
    out
}

fn number(n: Option<u32>) -> String {
    n.map(|n| n.to_string()).unwrap_or_default()
}

const CANDIDATE_HEADER: [&str; 7] = ["number", "degree", "pi1", "pi2", "pi3", "cover_source", "cover_target"];

/// Candidate list in the column layout of the bundled fixture, minus the
/// verdict.
pub fn candidates(records: &[CandidateRecord], format: Format) -> Result<String> {
    let rows: Vec<CandidateRow> = records.iter().map(CandidateRow::from).collect();
    match format {
        Format::Csv => csv_text(&rows, &CANDIDATE_HEADER),
        Format::Json => Ok(json_lines(&rows)),
        Format::Md => Ok(markdown(
            &CANDIDATE_HEADER,
            rows.iter().map(|r| {
                vec![
                    number(r.number),
                    r.degree.to_string(),
                    r.pi1.clone(),
                    r.pi2.clone(),
                    r.pi3.clone(),
                    r.cover_source.clone(),
                    r.cover_target.clone(),
                ]
            }),
        )),
    }
}

const DECISION_HEADER: [&str; 6] = ["number", "datum", "verdict", "layer", "evidence", "search_nodes"];

/// Decisions with their evidence; JSON lines also carry the certificate
/// and counts in full.
pub fn decisions(items: &[(Option<u32>, Decision)], format: Format) -> Result<String> {
    let rows: Vec<DecisionRow> = items.iter().map(|(n, d)| DecisionRow::new(*n, d)).collect();
    match format {
        Format::Json => Ok(json_lines(&rows)),
        Format::Csv => {
            #[derive(Serialize)]
            struct Flat<'a>(Option<u32>, &'a str, &'a str, &'a str, &'a str, u64);
            let flat: Vec<Flat> = rows
                .iter()
                .map(|r| Flat(r.number, &r.datum, &r.verdict, &r.layer, &r.evidence, r.search_nodes))
                .collect();
            csv_text(&flat, &DECISION_HEADER)
        }
        Format::Md => Ok(markdown(
            &DECISION_HEADER,
            rows.iter().map(|r| {
                vec![
                    number(r.number),
                    format!("`{}`", r.datum),
                    r.verdict.clone(),
                    r.layer.clone(),
                    r.evidence.replace('|', "\\|"),
                    r.search_nodes.to_string(),
                ]
            }),
        )),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::enumeration::golden;
    use crate::monodromy::{decide, Policy};

    fn records() -> Vec<CandidateRecord> {
        ["5:(2,1,1,1)(4,1)(5)", "4:(3,1)(4)(4)"]
            .iter()
            .map(|s| CandidateRecord::new(s.parse().unwrap()).unwrap())
            .collect()
    }

    #[test]
    fn candidate_csv_matches_fixture_columns() {
        let text = candidates(&records(), Format::Csv).unwrap();
        let fixture: Vec<&str> = golden::FIXTURE.lines().collect();
        let mut lines = text.lines();
        assert_eq!(lines.next().unwrap(), "number,degree,pi1,pi2,pi3,cover_source,cover_target");
        let first = lines.next().unwrap();
        assert!(fixture[1].starts_with(first), "{first}");
    }

    #[test]
    fn candidate_formats() {
        let json = candidates(&records(), Format::Json).unwrap();
        assert_eq!(json.lines().count(), 2);
        let v: serde_json::Value = serde_json::from_str(json.lines().next().unwrap()).unwrap();
        assert_eq!(v["number"], 1);
        assert_eq!(v["cover_target"], "S(2,4,5)");
        let md = candidates(&records(), Format::Md).unwrap();
        assert_eq!(md.lines().count(), 4);
        assert!(md.lines().nth(1).unwrap().starts_with("|---|"));
    }

    #[test]
    fn decision_formats() {
        let d = decide(&"8:(2,2,2,2)(5,1,1,1)(6,2)".parse().unwrap(), &Policy::default(), None).unwrap();
        let items = vec![(Some(25), d)];
        let csv = decisions(&items, Format::Csv).unwrap();
        assert!(csv.lines().nth(1).unwrap().starts_with("25,"));
        assert!(csv.contains("\"exceptional\",\"VeryEvenData\""), "{csv}");
        let json = decisions(&items, Format::Json).unwrap();
        let v: serde_json::Value = serde_json::from_str(json.trim()).unwrap();
        assert_eq!(v["verdict"], "exceptional");
        assert!(v.get("certificate").is_none());
        assert!(decisions(&items, Format::Md).unwrap().contains("| 25 |"));
    }

    #[test]
    fn format_names() {
        assert_eq!("jsonl".parse::<Format>().unwrap(), Format::Json);
        assert!("xml".parse::<Format>().is_err());
    }
}
