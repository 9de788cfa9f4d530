use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::io::Write;

use serde::{Deserialize, Serialize};

use super::f1;
use crate::error::Result;
use crate::extract::{Feature, YesNo};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FeatureAccuracy {
    pub correct: usize,
    /// Matches whose gold value is non-null.
    pub total: usize,
    /// `None` when no gold value was available.
    pub accuracy: Option<f64>,
}

impl FeatureAccuracy {
    pub fn new(correct: usize, total: usize) -> Self {
        FeatureAccuracy {
            correct,
            total,
            accuracy: (total > 0).then(|| correct as f64 / total as f64),
        }
    }
}

/// Per-class F1 of one clinical feature.
///
/// A class that occurs neither in the gold labels nor in the predictions has
/// no F1 (`None`); `average` is the mean over the classes that have one.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClassF1 {
    pub y: Option<f64>,
    pub n: Option<f64>,
    pub average: Option<f64>,
    pub support_y: usize,
    pub support_n: usize,
}

impl ClassF1 {
    pub fn from_labels(preds: &[Option<YesNo>], golds: &[Option<YesNo>]) -> Self {
        let class = |c: YesNo| {
            let c = Some(c);
            let seen = preds.contains(&c) || golds.contains(&c);
            seen.then(|| f1(preds, golds, &c))
        };
        let y = class(YesNo::Y);
        let n = class(YesNo::N);
        let defined: Vec<f64> = [y, n].into_iter().flatten().collect();
        ClassF1 {
            y,
            n,
            average: (!defined.is_empty())
                .then(|| defined.iter().sum::<f64>() / defined.len() as f64),
            support_y: golds.iter().filter(|g| **g == Some(YesNo::Y)).count(),
            support_n: golds.iter().filter(|g| **g == Some(YesNo::N)).count(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MatchRecord {
    pub auto_case: usize,
    pub gold_case: usize,
    pub qs: f64,
    pub correct: usize,
    pub scored: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BulletinSummary {
    pub bulletin_id: String,
    pub auto_cases: usize,
    pub gold_cases: usize,
    pub matches: Vec<MatchRecord>,
}

/// One bin of the QS histogram; bins are the distinct QS values observed.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct QsBin {
    pub value: f64,
    /// Reduced fraction, e.g. `3/4`.
    pub fraction: String,
    pub count: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EvalReport {
    pub gold_cases: usize,
    pub auto_cases: usize,
    pub matches: usize,
    /// Mean QS over all matches; `None` without matches.
    pub average_qs: Option<f64>,
    pub total_qs: f64,
    pub accuracy: BTreeMap<Feature, FeatureAccuracy>,
    pub f1: BTreeMap<Feature, ClassF1>,
    pub qs_histogram: Vec<QsBin>,
    pub bulletins: Vec<BulletinSummary>,
    pub diagnostics: Vec<String>,
}

fn fmt_opt(v: Option<f64>) -> String {
    v.map_or_else(|| "null".to_string(), |x| format!("{x:.2}"))
}

impl EvalReport {
    pub fn write_json<W: Write>(&self, out: W) -> Result<()> {
        serde_json::to_writer_pretty(out, self)?;
        Ok(())
    }

    /// QS histogram as `bin,count` CSV, one row per distinct QS value.
    pub fn write_histogram_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut writer = csv::Writer::from_writer(out);
        writer.write_record(["bin", "count"])?;
        for bin in &self.qs_histogram {
            writer.write_record([format!("{:.4}", bin.value), bin.count.to_string()])?;
        }
        writer.flush()?;
        Ok(())
    }

    /// Plain-text summary tables.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(
            s,
            "{:<12} {:<11} {:<8} Average QS",
            "Human lists", "Auto lists", "Matches"
        );
        let _ = writeln!(
            s,
            "{:<12} {:<11} {:<8} {}",
            self.gold_cases,
            self.auto_cases,
            self.matches,
            fmt_opt(self.average_qs)
        );
        s.push('\n');
        let _ = writeln!(s, "{:<22} {:>8} {:>8}", "Feature", "Accuracy", "Scored");
        for (f, acc) in &self.accuracy {
            let _ = writeln!(
                s,
                "{:<22} {:>8} {:>8}",
                f.name(),
                fmt_opt(acc.accuracy),
                acc.total
            );
        }
        s.push('\n');
        let _ = writeln!(
            s,
            "{:<22} {:>6} {:>6} {:>8}",
            "Feature", "F1(Y)", "F1(N)", "Average"
        );
        for (f, score) in &self.f1 {
            let _ = writeln!(
                s,
                "{:<22} {:>6} {:>6} {:>8}",
                f.name(),
                fmt_opt(score.y),
                fmt_opt(score.n),
                fmt_opt(score.average)
            );
        }
        if !self.diagnostics.is_empty() {
            s.push_str("\nDiagnostics:\n");
            for d in &self.diagnostics {
                let _ = writeln!(s, "  {d}");
            }
        }
        s
    }
}
