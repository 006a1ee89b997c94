//! Structured check results and their serialization.

use serde::{Deserialize, Serialize};
use std::io::Write;

/// One inequality `lhs ≤ rhs`, allowed to fail by at most `tolerance`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckRow {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
    pub lhs: f64,
    pub rhs: f64,
    pub margin: f64,
    pub tolerance: f64,
    pub pass: bool,
    /// Auxiliary measured quantity, such as a ratio.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub value: Option<f64>,
}

impl CheckRow {
    pub fn le(lhs: f64, rhs: f64, tolerance: f64) -> Self {
        let margin = rhs - lhs;
        CheckRow {
            k: None,
            label: None,
            lhs,
            rhs,
            margin,
            tolerance,
            pass: margin >= -tolerance,
            value: None,
        }
    }

    /// A recorded measurement with no bound attached; it passes when finite.
    pub fn measured(value: f64) -> Self {
        let mut row = CheckRow::le(value, f64::MAX, 0.0);
        row.pass = value.is_finite();
        row.value = Some(value);
        row
    }

    pub fn with_k(mut self, k: usize) -> Self {
        self.k = Some(k);
        self
    }

    pub fn with_label(mut self, label: &str) -> Self {
        self.label = Some(label.to_string());
        self
    }

    pub fn with_value(mut self, v: f64) -> Self {
        self.value = Some(v);
        self
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Provenance {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub h: Option<f64>,
    /// Largest relative refinement uncertainty among the FEM values used.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fem_uncertainty: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub enumerated: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mc_samples: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mc_standard_error: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckReport {
    pub check: String,
    #[serde(default)]
    pub instance: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub index_base: Option<usize>,
    pub inputs: serde_json::Value,
    /// Fields of the row closest to failing.
    pub lhs: f64,
    pub rhs: f64,
    pub margin: f64,
    pub tolerance: f64,
    pub pass: bool,
    /// Failing a hard check contradicts a proved statement.
    pub hard: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub empirical: Option<f64>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub rows: Vec<CheckRow>,
    #[serde(default)]
    pub provenance: Provenance,
}

impl CheckReport {
    pub fn from_rows(check: &str, inputs: serde_json::Value, rows: Vec<CheckRow>, hard: bool) -> Self {
        // NaN counts as the worst possible slack so broken rows surface.
        let slack = |r: &CheckRow| {
            let k = r.margin + r.tolerance;
            if k.is_nan() || (!r.pass && k >= 0.0) {
                f64::NEG_INFINITY
            } else {
                k
            }
        };
        let worst = rows
            .iter()
            .min_by(|a, b| slack(a).total_cmp(&slack(b)))
            .cloned()
            .unwrap_or_else(|| CheckRow::le(0.0, 0.0, 0.0));
        CheckReport {
            check: check.to_string(),
            instance: String::new(),
            index_base: None,
            inputs,
            lhs: worst.lhs,
            rhs: worst.rhs,
            margin: worst.margin,
            tolerance: worst.tolerance,
            pass: rows.iter().all(|r| r.pass),
            hard,
            empirical: None,
            rows,
            provenance: Provenance::default(),
        }
    }

    pub fn with_instance(mut self, id: impl Into<String>) -> Self {
        self.instance = id.into();
        self
    }

    pub fn with_index_base(mut self, base: usize) -> Self {
        self.index_base = Some(base);
        self
    }

    pub fn with_empirical(mut self, c: f64) -> Self {
        self.empirical = Some(c);
        self
    }

    pub fn with_provenance(mut self, p: Provenance) -> Self {
        self.provenance = p;
        self
    }

    /// Rows that fail.
    pub fn violations(&self) -> usize {
        self.rows.iter().filter(|r| !r.pass).count()
    }
}

/// One JSON object per line.
pub fn write_jsonl<W: Write>(reports: &[CheckReport], mut w: W) -> std::io::Result<()> {
    for r in reports {
        serde_json::to_writer(&mut w, r)?;
        writeln!(w)?;
    }
    Ok(())
}

#[derive(Serialize)]
struct SummaryLine<'a> {
    check: &'a str,
    instance: &'a str,
    lhs: f64,
    rhs: f64,
    margin: f64,
    pass: bool,
}

/// CSV summary: check, instance, lhs, rhs, margin, pass.
pub fn write_csv_summary<W: Write>(reports: &[CheckReport], w: W) -> Result<(), csv::Error> {
    let mut out = csv::Writer::from_writer(w);
    for r in reports {
        out.serialize(SummaryLine {
            check: &r.check,
            instance: &r.instance,
            lhs: r.lhs,
            rhs: r.rhs,
            margin: r.margin,
            pass: r.pass,
        })?;
    }
    out.flush()?;
    Ok(())
}
