use std::fmt;
use std::str::FromStr;

use chrono::NaiveDate;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// The nine line-list columns.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Feature {
    Age,
    Gender,
    OnsetDate,
    HospitalizationDate,
    OutcomeDate,
    AnimalContact,
    SecondaryContact,
    Comorbidities,
    SpecifiedHcw,
}

impl Feature {
    pub const ALL: [Feature; 9] = [
        Feature::Age,
        Feature::Gender,
        Feature::OnsetDate,
        Feature::HospitalizationDate,
        Feature::OutcomeDate,
        Feature::AnimalContact,
        Feature::SecondaryContact,
        Feature::Comorbidities,
        Feature::SpecifiedHcw,
    ];

    pub const DATES: [Feature; 3] = [
        Feature::OnsetDate,
        Feature::HospitalizationDate,
        Feature::OutcomeDate,
    ];

    pub const CLINICAL: [Feature; 4] = [
        Feature::AnimalContact,
        Feature::SecondaryContact,
        Feature::Comorbidities,
        Feature::SpecifiedHcw,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Feature::Age => "age",
            Feature::Gender => "gender",
            Feature::OnsetDate => "onset_date",
            Feature::HospitalizationDate => "hospitalization_date",
            Feature::OutcomeDate => "outcome_date",
            Feature::AnimalContact => "animal_contact",
            Feature::SecondaryContact => "secondary_contact",
            Feature::Comorbidities => "comorbidities",
            Feature::SpecifiedHcw => "specified_hcw",
        }
    }

    /// Extraction level: 0 for demographics, 1 for dates, 2 for clinical.
    pub fn level(self) -> u8 {
        match self {
            Feature::Age | Feature::Gender => 0,
            Feature::OnsetDate | Feature::HospitalizationDate | Feature::OutcomeDate => 1,
            _ => 2,
        }
    }

    pub fn is_date(self) -> bool {
        self.level() == 1
    }
}

impl fmt::Display for Feature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Feature {
    type Err = Error;

    /// Accepts column names and the short forms `onset`, `hospitalization`,
    /// `outcome` and `hcw`.
    fn from_str(s: &str) -> Result<Self> {
        let key = s.trim().to_ascii_lowercase().replace('-', "_");
        let short = match key.as_str() {
            "onset" => Some(Feature::OnsetDate),
            "hospitalization" | "hospitalisation" => Some(Feature::HospitalizationDate),
            "outcome" => Some(Feature::OutcomeDate),
            "hcw" => Some(Feature::SpecifiedHcw),
            _ => None,
        };
        short
            .or_else(|| Feature::ALL.into_iter().find(|f| f.name() == key))
            .ok_or_else(|| Error::UnknownFeature(s.trim().to_string()))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Gender {
    Male,
    Female,
}

impl Gender {
    /// Maps a level-0 gender word onto a category.
    pub fn from_word(word: &str) -> Option<Self> {
        match word.to_ascii_lowercase().as_str() {
            "man" | "male" | "boy" | "he" | "m" => Some(Gender::Male),
            "woman" | "female" | "girl" | "housewife" | "she" | "f" => Some(Gender::Female),
            _ => None,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Gender::Male => "male",
            Gender::Female => "female",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum YesNo {
    Y,
    N,
}

impl YesNo {
    pub fn parse(s: &str) -> Option<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "y" | "yes" => Some(YesNo::Y),
            "n" | "no" => Some(YesNo::N),
            _ => None,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            YesNo::Y => "Y",
            YesNo::N => "N",
        }
    }
}

/// A single feature value, used where features are handled uniformly.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FeatureValue {
    Age(u32),
    Gender(Gender),
    Date(NaiveDate),
    Flag(YesNo),
}

/// One extracted (or annotated) patient row.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct LineListCase {
    pub bulletin_id: String,
    #[serde(rename = "case")]
    pub case_ordinal: usize,
    /// Index of the sentence that opened this case; not part of the table.
    #[serde(skip)]
    pub starting_sentence: Option<usize>,
    pub age: Option<u32>,
    pub gender: Option<Gender>,
    pub onset_date: Option<NaiveDate>,
    pub hospitalization_date: Option<NaiveDate>,
    pub outcome_date: Option<NaiveDate>,
    pub animal_contact: Option<YesNo>,
    pub secondary_contact: Option<YesNo>,
    pub comorbidities: Option<YesNo>,
    pub specified_hcw: Option<YesNo>,
}

impl LineListCase {
    pub fn get(&self, feature: Feature) -> Option<FeatureValue> {
        match feature {
            Feature::Age => self.age.map(FeatureValue::Age),
            Feature::Gender => self.gender.map(FeatureValue::Gender),
            Feature::OnsetDate => self.onset_date.map(FeatureValue::Date),
            Feature::HospitalizationDate => self.hospitalization_date.map(FeatureValue::Date),
            Feature::OutcomeDate => self.outcome_date.map(FeatureValue::Date),
            Feature::AnimalContact => self.animal_contact.map(FeatureValue::Flag),
            Feature::SecondaryContact => self.secondary_contact.map(FeatureValue::Flag),
            Feature::Comorbidities => self.comorbidities.map(FeatureValue::Flag),
            Feature::SpecifiedHcw => self.specified_hcw.map(FeatureValue::Flag),
        }
    }

    pub fn date(&self, feature: Feature) -> Result<Option<NaiveDate>> {
        match feature {
            Feature::OnsetDate => Ok(self.onset_date),
            Feature::HospitalizationDate => Ok(self.hospitalization_date),
            Feature::OutcomeDate => Ok(self.outcome_date),
            other => Err(Error::NotADateFeature(other.name().to_string())),
        }
    }

    pub fn set_date(&mut self, feature: Feature, value: Option<NaiveDate>) {
        match feature {
            Feature::OnsetDate => self.onset_date = value,
            Feature::HospitalizationDate => self.hospitalization_date = value,
            Feature::OutcomeDate => self.outcome_date = value,
            _ => {}
        }
    }

    pub fn flag(&self, feature: Feature) -> Option<YesNo> {
        match feature {
            Feature::AnimalContact => self.animal_contact,
            Feature::SecondaryContact => self.secondary_contact,
            Feature::Comorbidities => self.comorbidities,
            Feature::SpecifiedHcw => self.specified_hcw,
            _ => None,
        }
    }

    pub fn set_flag(&mut self, feature: Feature, value: Option<YesNo>) {
        match feature {
            Feature::AnimalContact => self.animal_contact = value,
            Feature::SecondaryContact => self.secondary_contact = value,
            Feature::Comorbidities => self.comorbidities = value,
            Feature::SpecifiedHcw => self.specified_hcw = value,
            _ => {}
        }
    }

    /// Clears one feature.
    pub fn erase(&mut self, feature: Feature) {
        match feature {
            Feature::Age => self.age = None,
            Feature::Gender => self.gender = None,
            f if f.is_date() => self.set_date(f, None),
            f => self.set_flag(f, None),
        }
    }

    pub fn non_null_count(&self) -> usize {
        Feature::ALL
            .iter()
            .filter(|&&f| self.get(f).is_some())
            .count()
    }
}

/// Seed indicator for one level-1 or level-2 feature.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FeatureSpec {
    pub feature: Feature,
    pub seed: String,
}

impl FeatureSpec {
    pub fn new(feature: Feature, seed: impl Into<String>) -> Result<Self> {
        if feature.level() == 0 {
            return Err(Error::Schema(format!(
                "feature '{feature}' is extracted by regex and takes no seed"
            )));
        }
        let seed = seed.into().trim().to_lowercase();
        if seed.is_empty() || seed.contains(char::is_whitespace) {
            return Err(Error::Schema(format!(
                "seed for '{feature}' must be a single word"
            )));
        }
        Ok(FeatureSpec { feature, seed })
    }

    pub fn level(&self) -> u8 {
        self.feature.level()
    }

    /// Default seeds for the seven seeded MERS features.
    pub fn defaults() -> Vec<FeatureSpec> {
        [
            (Feature::OnsetDate, "onset"),
            (Feature::HospitalizationDate, "hospitalized"),
            (Feature::OutcomeDate, "died"),
            (Feature::AnimalContact, "animals"),
            (Feature::SecondaryContact, "contact"),
            (Feature::Comorbidities, "comorbidities"),
            (Feature::SpecifiedHcw, "healthcare"),
        ]
        .into_iter()
        .map(|(feature, seed)| FeatureSpec {
            feature,
            seed: seed.to_string(),
        })
        .collect()
    }

    /// Applies `feature=seed` override lines to `base`. Blank lines and
    /// lines starting with `#` are ignored.
    pub fn apply_overrides(base: &mut Vec<FeatureSpec>, text: &str) -> Result<()> {
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (name, seed) = line.split_once('=').ok_or_else(|| {
                Error::Schema(format!(
                    "feature spec line {}: expected 'feature=seed', found '{line}'",
                    lineno + 1
                ))
            })?;
            let spec = FeatureSpec::new(name.parse()?, seed)?;
            match base.iter_mut().find(|s| s.feature == spec.feature) {
                Some(existing) => *existing = spec,
                None => base.push(spec),
            }
        }
        Ok(())
    }
}
