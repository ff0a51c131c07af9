//! The embedded reference table of the 32 singular-vertex links
//! (ϑ, Double?, Monodromy), against which the computed classification is
//! diffed, plus table export helpers.

use crate::angles::BaseFamily;
use crate::classifier::{LinkRecord, SubgroupType};

pub struct GoldenRow {
    pub index: usize,
    /// ϑᵢ as (numerator, denominator), with αᵢ = 2π·ϑᵢ.
    pub theta: &'static [(i64, i64)],
    pub is_double: bool,
    pub monodromy: SubgroupType,
}

use SubgroupType::{A4, D2, D3, D4, D6, S4};

pub const GOLDEN_TABLE: [GoldenRow; 32] = [
    GoldenRow { index: 1, theta: &[(1, 6), (1, 2), (1, 2)], is_double: true, monodromy: D6 },
    GoldenRow { index: 2, theta: &[(1, 4), (1, 4), (2, 3)], is_double: true, monodromy: S4 },
    GoldenRow { index: 3, theta: &[(1, 4), (1, 3), (1, 2)], is_double: true, monodromy: S4 },
    GoldenRow { index: 4, theta: &[(1, 4), (1, 3), (3, 4)], is_double: true, monodromy: S4 },
    GoldenRow { index: 5, theta: &[(1, 4), (1, 2), (1, 2)], is_double: true, monodromy: D4 },
    GoldenRow { index: 6, theta: &[(1, 4), (1, 2), (2, 3)], is_double: true, monodromy: S4 },
    GoldenRow { index: 7, theta: &[(1, 3), (1, 3), (1, 2)], is_double: true, monodromy: A4 },
    GoldenRow { index: 8, theta: &[(1, 3), (1, 3), (2, 3)], is_double: true, monodromy: A4 },
    GoldenRow { index: 9, theta: &[(1, 3), (1, 2), (1, 2)], is_double: true, monodromy: D3 },
    GoldenRow { index: 10, theta: &[(1, 3), (1, 2), (2, 3)], is_double: true, monodromy: A4 },
    GoldenRow { index: 11, theta: &[(1, 3), (1, 2), (3, 4)], is_double: true, monodromy: S4 },
    GoldenRow { index: 12, theta: &[(1, 2), (1, 2), (1, 2)], is_double: true, monodromy: D2 },
    GoldenRow { index: 13, theta: &[(1, 2), (1, 2), (2, 3)], is_double: true, monodromy: D3 },
    GoldenRow { index: 14, theta: &[(1, 2), (1, 2), (3, 4)], is_double: true, monodromy: D4 },
    GoldenRow { index: 15, theta: &[(1, 2), (1, 2), (5, 6)], is_double: true, monodromy: D6 },
    GoldenRow { index: 16, theta: &[(1, 2), (2, 3), (2, 3)], is_double: true, monodromy: A4 },
    GoldenRow { index: 17, theta: &[(1, 2), (2, 3), (3, 4)], is_double: true, monodromy: S4 },
    GoldenRow { index: 18, theta: &[(2, 3), (2, 3), (2, 3)], is_double: true, monodromy: A4 },
    GoldenRow { index: 19, theta: &[(2, 3), (3, 4), (3, 4)], is_double: true, monodromy: S4 },
    GoldenRow { index: 20, theta: &[(1, 3), (1, 2), (2, 3), (3, 4)], is_double: true, monodromy: S4 },
    GoldenRow { index: 21, theta: &[(1, 2), (1, 2), (1, 2), (2, 3)], is_double: true, monodromy: S4 },
    GoldenRow { index: 22, theta: &[(1, 2), (1, 2), (1, 2), (3, 4)], is_double: false, monodromy: S4 },
    GoldenRow { index: 23, theta: &[(1, 2), (1, 2), (2, 3), (2, 3)], is_double: true, monodromy: A4 },
    GoldenRow { index: 24, theta: &[(1, 2), (1, 2), (2, 3), (2, 3)], is_double: true, monodromy: S4 },
    GoldenRow { index: 25, theta: &[(1, 2), (1, 2), (2, 3), (3, 4)], is_double: true, monodromy: S4 },
    GoldenRow { index: 26, theta: &[(1, 2), (1, 2), (3, 4), (3, 4)], is_double: true, monodromy: S4 },
    GoldenRow { index: 27, theta: &[(1, 2), (2, 3), (2, 3), (3, 4)], is_double: false, monodromy: S4 },
    GoldenRow { index: 28, theta: &[(1, 2), (2, 3), (3, 4), (3, 4)], is_double: true, monodromy: S4 },
    GoldenRow { index: 29, theta: &[(2, 3), (2, 3), (2, 3), (2, 3)], is_double: true, monodromy: A4 },
    GoldenRow { index: 30, theta: &[(2, 3), (2, 3), (3, 4), (3, 4)], is_double: true, monodromy: S4 },
    GoldenRow { index: 31, theta: &[(3, 4), (3, 4), (3, 4), (3, 4)], is_double: false, monodromy: S4 },
    GoldenRow { index: 32, theta: &[(2, 3), (2, 3), (2, 3), (3, 4), (3, 4)], is_double: false, monodromy: S4 },
];

fn theta_pairs(record: &LinkRecord) -> Vec<(i64, i64)> {
    record.theta.iter().map(|t| (t.num(), t.den())).collect()
}

/// Row-by-row differences between the computed records and the embedded
/// table; empty iff they agree exactly.
pub fn diff_against_golden(records: &[LinkRecord]) -> Vec<String> {
    let mut diffs = Vec::new();
    if records.len() != GOLDEN_TABLE.len() {
        diffs.push(format!(
            "row count: computed {} != expected {}",
            records.len(),
            GOLDEN_TABLE.len()
        ));
    }
    for (r, g) in records.iter().zip(GOLDEN_TABLE.iter()) {
        if r.table_index != g.index {
            diffs.push(format!("row {}: index {} misplaced", g.index, r.table_index));
        }
        if theta_pairs(r) != g.theta {
            diffs.push(format!(
                "row {}: theta {:?} != expected {:?}",
                g.index,
                theta_pairs(r),
                g.theta
            ));
        }
        if r.is_double != g.is_double {
            diffs.push(format!(
                "row {}: double {} != expected {}",
                g.index, r.is_double, g.is_double
            ));
        }
        if r.monodromy != g.monodromy {
            diffs.push(format!(
                "row {}: monodromy {} != expected {}",
                g.index, r.monodromy, g.monodromy
            ));
        }
    }
    diffs
}

fn theta_string(record: &LinkRecord) -> String {
    record
        .theta
        .iter()
        .map(|t| format!("{}/{}", t.num(), t.den()))
        .collect::<Vec<_>>()
        .join(";")
}

fn bases_string(record: &LinkRecord) -> String {
    record
        .bases
        .iter()
        .map(|b| b.name())
        .collect::<Vec<_>>()
        .join("+")
}

fn degrees_string(record: &LinkRecord) -> String {
    record
        .degrees()
        .iter()
        .map(|d| d.to_string())
        .collect::<Vec<_>>()
        .join(";")
}

pub fn to_csv(records: &[LinkRecord]) -> String {
    let mut out = String::from("index,theta,double,monodromy,bases,degrees,realizations\n");
    for r in records {
        out.push_str(&format!(
            "{},{},{},{},{},{},{}\n",
            r.table_index,
            theta_string(r),
            if r.is_double { "Yes" } else { "No" },
            r.monodromy,
            bases_string(r),
            degrees_string(r),
            r.realizations.len()
        ));
    }
    out
}

/// Aligned plain-text rendering for terminal output.
pub fn format_table(records: &[LinkRecord]) -> String {
    let mut rows = vec![[
        "#".to_string(),
        "theta".to_string(),
        "double".to_string(),
        "monodromy".to_string(),
        "bases".to_string(),
        "degrees".to_string(),
        "covers".to_string(),
    ]];
    for r in records {
        rows.push([
            r.table_index.to_string(),
            theta_string(r).replace(';', " "),
            if r.is_double { "Yes" } else { "No" }.to_string(),
            r.monodromy.to_string(),
            bases_string(r),
            degrees_string(r),
            r.realizations.len().to_string(),
        ]);
    }
    let widths: Vec<usize> = (0..7)
        .map(|i| rows.iter().map(|r| r[i].len()).max().unwrap())
        .collect();
    let mut out = String::new();
    for (k, row) in rows.iter().enumerate() {
        let line: Vec<String> = row
            .iter()
            .zip(&widths)
            .map(|(cell, w)| format!("{cell:<w$}"))
            .collect();
        out.push_str(line.join("  ").trim_end());
        out.push('\n');
        if k == 0 {
            out.push_str(&"-".repeat(widths.iter().sum::<usize>() + 12));
            out.push('\n');
        }
    }
    out
}

/// Indices the reference table marks as non-doubles.
pub fn golden_non_double_indices() -> Vec<usize> {
    GOLDEN_TABLE
        .iter()
        .filter(|g| !g.is_double)
        .map(|g| g.index)
        .collect()
}

/// The links the reference table attributes to the prism family.
pub fn golden_d6_monodromy_indices() -> Vec<usize> {
    GOLDEN_TABLE
        .iter()
        .filter(|g| matches!(g.monodromy, SubgroupType::D6 | SubgroupType::D3 | SubgroupType::D2))
        .map(|g| g.index)
        .collect()
}

pub fn family_label(bases: &[BaseFamily]) -> String {
    bases
        .iter()
        .map(|b| b.name().to_uppercase())
        .collect::<Vec<_>>()
        .join("+")
}
