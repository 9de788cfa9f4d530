//! Descriptive statistics over a line list: age and gender distributions
//! and day intervals between two dated events.

use std::collections::BTreeMap;
use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::extract::{Feature, Gender, LineListCase};

/// Half-open integer bin `[start, end)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Bin {
    pub start: i64,
    pub end: i64,
    pub count: usize,
}

/// Integer histogram with contiguous, equal-width bins. Cases lacking the
/// required features go to `null_count`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Histogram {
    pub bins: Vec<Bin>,
    pub null_count: usize,
}

impl Histogram {
    /// Bins `values` with the given width, starting at a multiple of it.
    /// Bins run without gaps from the lowest to the highest occupied one.
    pub fn from_values(values: &[i64], width: i64, null_count: usize) -> Self {
        assert!(width > 0, "bin width must be positive");
        let mut counts: BTreeMap<i64, usize> = BTreeMap::new();
        for &v in values {
            *counts.entry(v.div_euclid(width)).or_default() += 1;
        }
        let bins = match (counts.keys().next(), counts.keys().next_back()) {
            (Some(&lo), Some(&hi)) => (lo..=hi)
                .map(|k| Bin {
                    start: k * width,
                    end: (k + 1) * width,
                    count: counts.get(&k).copied().unwrap_or(0),
                })
                .collect(),
            _ => Vec::new(),
        };
        Histogram { bins, null_count }
    }

    /// Cases accounted for, binned or null.
    pub fn total(&self) -> usize {
        self.bins.iter().map(|b| b.count).sum::<usize>() + self.null_count
    }

    pub fn is_empty(&self) -> bool {
        self.bins.is_empty()
    }

    /// `bin_start,bin_end,count` rows followed by `null,,count`.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut writer = csv::Writer::from_writer(out);
        writer.write_record(["bin_start", "bin_end", "count"])?;
        for b in &self.bins {
            writer.write_record([b.start.to_string(), b.end.to_string(), b.count.to_string()])?;
        }
        writer.write_record([
            "null".to_string(),
            String::new(),
            self.null_count.to_string(),
        ])?;
        writer.flush()?;
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct GenderCounts {
    pub male: usize,
    pub female: usize,
    pub null: usize,
}

impl GenderCounts {
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut writer = csv::Writer::from_writer(out);
        writer.write_record(["gender", "count"])?;
        for (name, n) in [
            ("male", self.male),
            ("female", self.female),
            ("null", self.null),
        ] {
            writer.write_record([name.to_string(), n.to_string()])?;
        }
        writer.flush()?;
        Ok(())
    }
}

pub const AGE_BIN_WIDTH: i64 = 10;

/// Age histogram in decades, plus gender counts.
pub fn demographic_distribution(cases: &[LineListCase]) -> (Histogram, GenderCounts) {
    let ages: Vec<i64> = cases.iter().filter_map(|c| c.age).map(i64::from).collect();
    let age = Histogram::from_values(&ages, AGE_BIN_WIDTH, cases.len() - ages.len());
    let mut genders = GenderCounts::default();
    for c in cases {
        match c.gender {
            Some(Gender::Male) => genders.male += 1,
            Some(Gender::Female) => genders.female += 1,
            None => genders.null += 1,
        }
    }
    (age, genders)
}

/// Day differences `to - from` per case, one-day bins. Negative intervals
/// are kept. Both features must be dates.
pub fn interval_distribution(
    cases: &[LineListCase],
    from: Feature,
    to: Feature,
) -> Result<Histogram> {
    for f in [from, to] {
        if !f.is_date() {
            return Err(Error::NotADateFeature(f.name().to_string()));
        }
    }
    let mut days = Vec::new();
    for c in cases {
        if let (Some(a), Some(b)) = (c.date(from)?, c.date(to)?) {
            days.push((b - a).num_days());
        }
    }
    let nulls = cases.len() - days.len();
    Ok(Histogram::from_values(&days, 1, nulls))
}
