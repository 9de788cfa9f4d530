use std::io::{Read, Write};

use chrono::NaiveDate;

use super::features::{Feature, Gender, LineListCase, YesNo};
use crate::error::{Error, Result};

pub const CSV_HEADER: [&str; 11] = [
    "bulletin_id",
    "case",
    "age",
    "gender",
    "onset_date",
    "hospitalization_date",
    "outcome_date",
    "animal_contact",
    "secondary_contact",
    "comorbidities",
    "specified_hcw",
];

fn opt<T: ToString>(v: Option<T>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

/// Writes the line list as CSV; nulls are empty fields, dates ISO-8601.
pub fn write_csv<W: Write>(cases: &[LineListCase], out: W) -> Result<()> {
    let mut writer = csv::Writer::from_writer(out);
    writer.write_record(CSV_HEADER)?;
    for c in cases {
        writer.write_record([
            c.bulletin_id.clone(),
            c.case_ordinal.to_string(),
            opt(c.age),
            opt(c.gender.map(Gender::as_str)),
            opt(c.onset_date),
            opt(c.hospitalization_date),
            opt(c.outcome_date),
            opt(c.animal_contact.map(YesNo::as_str)),
            opt(c.secondary_contact.map(YesNo::as_str)),
            opt(c.comorbidities.map(YesNo::as_str)),
            opt(c.specified_hcw.map(YesNo::as_str)),
        ])?;
    }
    writer.flush()?;
    Ok(())
}

pub fn write_json<W: Write>(cases: &[LineListCase], out: W) -> Result<()> {
    serde_json::to_writer_pretty(out, cases)?;
    Ok(())
}

pub fn read_json<R: Read>(input: R) -> Result<Vec<LineListCase>> {
    Ok(serde_json::from_reader(input)?)
}

/// Reads a line-list CSV. Every column of [`CSV_HEADER`] must be present
/// (in any order); unknown columns are rejected. Gender accepts `M`/`F` as
/// well as `male`/`female`, flags accept `Y`/`N` in any case.
pub fn read_csv<R: Read>(input: R) -> Result<Vec<LineListCase>> {
    let mut reader = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_reader(input);
    let headers = reader.headers()?.clone();
    for h in headers.iter() {
        if !CSV_HEADER.contains(&h) {
            return Err(Error::Schema(format!("unknown column '{h}'")));
        }
    }
    let mut columns = [0usize; 11];
    for (slot, name) in columns.iter_mut().zip(CSV_HEADER) {
        *slot = headers
            .iter()
            .position(|h| h == name)
            .ok_or_else(|| Error::Schema(format!("missing column '{name}'")))?;
    }

    let mut cases = Vec::new();
    for (row, record) in reader.records().enumerate() {
        let record = record?;
        let line = row + 2;
        let field = |i: usize| record.get(columns[i]).unwrap_or("").trim();
        let bad = |i: usize| {
            Error::Schema(format!(
                "line {line}: invalid value '{}' in column '{}'",
                field(i),
                CSV_HEADER[i]
            ))
        };
        let parse_opt = |i: usize| -> Option<&str> { Some(field(i)).filter(|s| !s.is_empty()) };

        let date = |i: usize| -> Result<Option<NaiveDate>> {
            parse_opt(i)
                .map(|s| NaiveDate::parse_from_str(s, "%Y-%m-%d").map_err(|_| bad(i)))
                .transpose()
        };
        let flag = |i: usize| -> Result<Option<YesNo>> {
            parse_opt(i)
                .map(|s| YesNo::parse(s).ok_or_else(|| bad(i)))
                .transpose()
        };

        let bulletin_id = field(0).to_string();
        if bulletin_id.is_empty() {
            return Err(bad(0));
        }
        cases.push(LineListCase {
            bulletin_id,
            case_ordinal: match parse_opt(1) {
                Some(s) => s.parse().map_err(|_| bad(1))?,
                None => 0,
            },
            starting_sentence: None,
            age: parse_opt(2)
                .map(|s| s.parse().map_err(|_| bad(2)))
                .transpose()?,
            gender: parse_opt(3)
                .map(|s| Gender::from_word(s).ok_or_else(|| bad(3)))
                .transpose()?,
            onset_date: date(4)?,
            hospitalization_date: date(5)?,
            outcome_date: date(6)?,
            animal_contact: flag(7)?,
            secondary_contact: flag(8)?,
            comorbidities: flag(9)?,
            specified_hcw: flag(10)?,
        });
    }
    Ok(cases)
}

// Keep the column list in step with the feature enum.
const _: () = assert!(CSV_HEADER.len() == Feature::ALL.len() + 2);
