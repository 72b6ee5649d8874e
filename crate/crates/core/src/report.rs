//! Deterministic text renderings of clusters, pair scores and model
//! reports. Everything here is UTF-8 with LF line endings and byte-stable
//! for identical inputs.

use std::fmt::Write as _;

use crate::clustering::{ClusterSet, ModelRecord, ModelReport};
use crate::corpus::Vocabulary;
use crate::similarity::ScoredPair;

/// `cluster_id\tword` rows in canonical order. Cluster ids start at 1.
pub fn render_clusters_tsv(set: &ClusterSet, vocabulary: &Vocabulary) -> String {
    let mut out = String::from("cluster_id\tword\n");
    for (i, cluster) in set.clusters().iter().enumerate() {
        for &word in cluster {
            let _ = writeln!(
                out,
                "{}\t{}",
                i + 1,
                vocabulary.word(word).expect("cluster ids resolve")
            );
        }
    }
    out
}

/// Scored-pair rows with integer numerators and denominators plus the
/// 4-decimal display values, sorted by `(a, b)` as given.
pub fn render_pairs_tsv(pairs: &[ScoredPair], vocabulary: &Vocabulary) -> String {
    let mut out = String::from(
        "word_a\tword_b\tpre_match\tpre_denom\tfol_match\tfol_denom\tpre_value\tfol_value\n",
    );
    for pair in pairs {
        let _ = writeln!(
            out,
            "{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}",
            vocabulary.word(pair.a()).expect("pair ids resolve"),
            vocabulary.word(pair.b()).expect("pair ids resolve"),
            pair.preceding().matched(),
            pair.preceding().denom(),
            pair.following().matched(),
            pair.following().denom(),
            pair.preceding().display_value(),
            pair.following().display_value(),
        );
    }
    out
}

fn histogram_cell(record: &ModelRecord) -> String {
    if record.histogram.is_empty() {
        return "-".to_string();
    }
    record
        .histogram
        .iter()
        .map(|(size, count)| format!("{size}:{count}"))
        .collect::<Vec<_>>()
        .join(",")
}

const STATS_COLUMNS: [&str; 7] = [
    "n",
    "threshold",
    "clusters",
    "edges",
    "clustered_words",
    "max_cluster_size",
    "histogram",
];

fn record_cells(record: &ModelRecord, exact_threshold: bool) -> [String; 7] {
    [
        record.n.to_string(),
        if exact_threshold {
            record.threshold.to_string()
        } else {
            record.threshold.display_decimal()
        },
        record.clusters.to_string(),
        record.edges.to_string(),
        record.clustered_words.to_string(),
        record.max_cluster_size.to_string(),
        histogram_cell(record),
    ]
}

/// Machine-readable report: a header naming every field, then one row per
/// window size. Thresholds are exact fractions.
pub fn render_stats_tsv(report: &ModelReport) -> String {
    let mut out = STATS_COLUMNS.join("\t");
    out.push('\n');
    for record in &report.records {
        out.push_str(&record_cells(record, true).join("\t"));
        out.push('\n');
    }
    out
}

/// Aligned plain-text table of the same fields, thresholds shown as
/// 4-decimal values.
pub fn render_stats_table(report: &ModelReport) -> String {
    let rows: Vec<[String; 7]> = report
        .records
        .iter()
        .map(|r| record_cells(r, false))
        .collect();
    let mut widths: Vec<usize> = STATS_COLUMNS.iter().map(|c| c.len()).collect();
    for row in &rows {
        for (w, cell) in widths.iter_mut().zip(row.iter()) {
            *w = (*w).max(cell.len());
        }
    }

    let mut out = String::new();
    let render_row = |out: &mut String, cells: &[String]| {
        for (i, (cell, width)) in cells.iter().zip(&widths).enumerate() {
            if i > 0 {
                out.push_str("  ");
            }
            // Left-align the trailing histogram column, right-align numbers.
            if i == STATS_COLUMNS.len() - 1 {
                out.push_str(cell);
            } else {
                let _ = write!(out, "{cell:>width$}");
            }
        }
        while out.ends_with(' ') {
            out.pop();
        }
        out.push('\n');
    };

    let header: Vec<String> = STATS_COLUMNS.iter().map(|s| s.to_string()).collect();
    render_row(&mut out, &header);
    for row in &rows {
        render_row(&mut out, row);
    }
    out
}
