//! The reference list of all 168 candidates with their table numbers and
//! known verdicts, shipped as CSV.

use std::collections::HashMap;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::datum::BranchDatum;
use crate::error::{Error, Result};
use crate::partition::Partition;

pub const FIXTURE: &str = include_str!("../../data/golden_candidates.csv");

/// SHA-256 of [`FIXTURE`]; also listed in the README.
pub const FIXTURE_SHA256: &str = "ccc55d81924a1d0414249e2856f7ea514f130087d6c476709ab465e545482a65";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum KnownVerdict {
    Realizable,
    Exceptional,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GoldenRow {
    pub number: u32,
    pub datum: BranchDatum,
    pub cover_source: String,
    pub cover_target: String,
    pub verdict: KnownVerdict,
}

#[derive(Deserialize)]
struct RawRow {
    number: u32,
    degree: u32,
    pi1: String,
    pi2: String,
    pi3: String,
    cover_source: String,
    cover_target: String,
    verdict: KnownVerdict,
}

pub fn fixture_digest() -> String {
    let digest = Sha256::digest(FIXTURE.as_bytes());
    digest.iter().map(|b| format!("{b:02x}")).collect()
}

/// Parses CSV text in the fixture format.
pub fn parse_rows(text: &str) -> Result<Vec<GoldenRow>> {
    let mut reader = csv::Reader::from_reader(text.as_bytes());
    let mut rows = Vec::new();
    for (line, raw) in reader.deserialize::<RawRow>().enumerate() {
        let raw = raw.map_err(|e| Error::Parse {
            position: line + 2,
            message: e.to_string(),
        })?;
        let parts: [Partition; 3] = [raw.pi1.parse()?, raw.pi2.parse()?, raw.pi3.parse()?];
        rows.push(GoldenRow {
            number: raw.number,
            datum: BranchDatum::infer(raw.degree, parts)?,
            cover_source: raw.cover_source,
            cover_target: raw.cover_target,
            verdict: raw.verdict,
        });
    }
    Ok(rows)
}

struct Table {
    rows: Vec<GoldenRow>,
    index: HashMap<BranchDatum, usize>,
}

fn table() -> &'static Table {
    static TABLE: OnceLock<Table> = OnceLock::new();
    TABLE.get_or_init(|| {
        let rows = parse_rows(FIXTURE).expect("bundled fixture parses");
        let index = rows.iter().enumerate().map(|(i, r)| (r.datum.clone(), i)).collect();
        Table { rows, index }
    })
}

/// All 168 rows, in table order.
pub fn rows() -> &'static [GoldenRow] {
    &table().rows
}

pub fn lookup(datum: &BranchDatum) -> Option<&'static GoldenRow> {
    let t = table();
    t.index.get(datum).map(|&i| &t.rows[i])
}

pub fn by_number(number: u32) -> Option<&'static GoldenRow> {
    rows().iter().find(|r| r.number == number)
}

pub fn number_of(datum: &BranchDatum) -> Option<u32> {
    lookup(datum).map(|r| r.number)
}
