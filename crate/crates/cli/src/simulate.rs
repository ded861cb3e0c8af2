//! Batch folding of rating streams read from CSV.

use std::io::{Read, Write};

use anyhow::{anyhow, bail, Context};
use fuzzylex_core::{decision_coefficient, Lexicon, Rating, TermKind};
use serde::{Deserialize, Serialize};

/// One observation row: `surface,kind,candidate,theta`.
#[derive(Debug, Clone, PartialEq, Deserialize, Serialize)]
pub struct SimulationRecord {
    pub surface: String,
    pub kind: String,
    pub candidate: String,
    pub theta: f64,
}

#[derive(Debug, Serialize)]
struct ReportRow<'a> {
    surface: &'a str,
    kind: TermKind,
    candidate: &'a str,
    gamma: f64,
    alpha: f64,
    beta: f64,
    delta: f64,
    left_count: u64,
    right_count: u64,
    coefficient: f64,
    final_coefficient: f64,
    chosen: bool,
}

/// Folds every record, in order, into `lexicon` and writes one report row per
/// learned (word, candidate) pair. Candidates missing from the vocabulary are
/// registered under the row's kind first.
pub fn simulate(input: impl Read, lexicon: &mut Lexicon, out: impl Write) -> anyhow::Result<()> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .from_reader(input);
    let headers = reader.headers().context("reading CSV header")?.clone();
    if !headers.is_empty() {
        for column in ["surface", "kind", "candidate", "theta"] {
            if !headers.iter().any(|h| h == column) {
                bail!("line 1: missing column {column:?} (expected surface,kind,candidate,theta)");
            }
        }
    }

    for row in reader.records() {
        let row = row.map_err(|e| anyhow!("malformed CSV: {e}"))?;
        let line = row.position().map(|p| p.line()).unwrap_or(0);
        let record: SimulationRecord = row
            .deserialize(Some(&headers))
            .map_err(|e| anyhow!("line {line}: {e}"))?;
        fold_record(lexicon, &record).with_context(|| format!("line {line}"))?;
    }

    write_report(lexicon, out)
}

fn fold_record(lexicon: &mut Lexicon, record: &SimulationRecord) -> anyhow::Result<()> {
    let kind: TermKind = record.kind.parse()?;
    Rating::new(record.theta)?;
    if !lexicon.vocabulary().contains(kind, &record.candidate) {
        lexicon.add_term(kind, &record.candidate)?;
    }
    lexicon.record_rating(&record.surface, kind, &record.candidate, record.theta)?;
    Ok(())
}

pub fn write_report(lexicon: &Lexicon, out: impl Write) -> anyhow::Result<()> {
    let mut writer = csv::WriterBuilder::new().has_headers(false).from_writer(out);
    writer.write_record([
        "surface",
        "kind",
        "candidate",
        "gamma",
        "alpha",
        "beta",
        "delta",
        "left_count",
        "right_count",
        "coefficient",
        "final_coefficient",
        "chosen",
    ])?;
    for entry in lexicon.entries() {
        let decision = entry.decide()?;
        for (candidate, t) in entry.functions() {
            writer.serialize(ReportRow {
                surface: entry.surface(),
                kind: entry.kind(),
                candidate,
                gamma: t.gamma(),
                alpha: t.alpha(),
                beta: t.beta(),
                delta: t.delta(),
                left_count: t.left_count(),
                right_count: t.right_count(),
                coefficient: decision_coefficient(t),
                final_coefficient: decision.final_coefficient,
                chosen: candidate == decision.chosen,
            })?;
        }
    }
    writer.flush()?;
    Ok(())
}
