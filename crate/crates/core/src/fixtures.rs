//! Reference reduction tables shipped with the crate.
//!
//! The JSON tables and the flat `tables.tsv` were keyed independently; the
//! TSV lists each row's coefficients in basis order, with weight `5z` for
//! rows over the `{1,2}`-entry basis.

use std::collections::BTreeMap;

use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::lincomb::{parse_rat, Rational};
use crate::relations::ReducedTable;
use crate::words::{SignedIndex, Word};

const FILES: &[(&str, &str)] = &[
    ("tables.tsv", include_str!("../fixtures/tables.tsv")),
    ("weight2.json", include_str!("../fixtures/weight2.json")),
    ("weight3.json", include_str!("../fixtures/weight3.json")),
    ("weight4.json", include_str!("../fixtures/weight4.json")),
    ("weight5.json", include_str!("../fixtures/weight5.json")),
    ("weight5_zlobin.json", include_str!("../fixtures/weight5_zlobin.json")),
];

const SUMS: &str = include_str!("../fixtures/SHA256SUMS");

fn file(name: &str) -> Result<&'static str> {
    FILES
        .iter()
        .find(|(n, _)| *n == name)
        .map(|(_, s)| *s)
        .ok_or_else(|| Error::Fixture(format!("no fixture named {name}")))
}

/// Reference table over the default basis, weights 2 to 5.
pub fn table(weight: usize) -> Result<ReducedTable> {
    parse_json(file(&format!("weight{weight}.json"))?)
}

/// Reference row(s) over the `{1,2}`-entry basis at weight 5.
pub fn zlobin_table() -> Result<ReducedTable> {
    parse_json(file("weight5_zlobin.json")?)
}

fn parse_json(s: &str) -> Result<ReducedTable> {
    let v: serde_json::Value = serde_json::from_str(s).map_err(|e| Error::Fixture(e.to_string()))?;
    ReducedTable::from_json(&v)
}

/// Rows of `tables.tsv` keyed by `(weight tag, word)`.
pub fn second_keying() -> Result<BTreeMap<(String, Word), Vec<Rational>>> {
    let mut out = BTreeMap::new();
    for (lineno, line) in file("tables.tsv")?.lines().enumerate() {
        if line.starts_with('#') || line.trim().is_empty() {
            continue;
        }
        let bad = || Error::Fixture(format!("tables.tsv line {}", lineno + 1));
        let mut parts = line.split('\t');
        let (Some(tag), Some(key), Some(vals), None) = (parts.next(), parts.next(), parts.next(), parts.next())
        else {
            return Err(bad());
        };
        let w = key.parse::<SignedIndex>()?.to_word()?.flatten();
        let vals: Vec<Rational> = vals.split(',').map(parse_rat).collect::<Result<_>>()?;
        if out.insert((tag.to_string(), w), vals).is_some() {
            return Err(bad());
        }
    }
    Ok(out)
}

/// Rows where the two keyings disagree, as `(tag, index)`. Rows present in
/// only one keying count as disagreements.
pub fn keying_mismatches() -> Result<Vec<(String, String)>> {
    let second = second_keying()?;
    let mut seen = 0usize;
    let mut out = Vec::new();
    let mut tables: Vec<(String, ReducedTable)> =
        (2..=5).map(|n| table(n).map(|t| (n.to_string(), t))).collect::<Result<_>>()?;
    tables.push(("5z".into(), zlobin_table()?));
    for (tag, t) in &tables {
        for (w, row) in &t.rows {
            match second.get(&(tag.clone(), w.clone())) {
                Some(r) if r == row => seen += 1,
                Some(_) => {
                    seen += 1;
                    out.push((tag.clone(), crate::relations::index_string(w)));
                }
                None => out.push((tag.clone(), crate::relations::index_string(w))),
            }
        }
    }
    if seen != second.len() {
        out.push(("tsv".into(), format!("{} rows unmatched", second.len() - seen)));
    }
    Ok(out)
}

/// Files whose SHA-256 differs from `SHA256SUMS`.
pub fn checksum_failures() -> Vec<String> {
    let mut listed = BTreeMap::new();
    for line in SUMS.lines() {
        if let Some((h, n)) = line.split_once("  ") {
            listed.insert(n.trim().to_string(), h.to_string());
        }
    }
    let mut out = Vec::new();
    for (name, body) in FILES {
        let got: String = Sha256::digest(body.as_bytes()).iter().map(|b| format!("{b:02x}")).collect();
        if listed.get(*name) != Some(&got) {
            out.push(name.to_string());
        }
    }
    out
}
