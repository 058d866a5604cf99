use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::CorpusError;

pub const MIN_TALE_NUMBER: u16 = 1;
pub const MAX_TALE_NUMBER: u16 = 299;

/// Tale-type index such as `60`, `111A`, `201D*` or `235*`.
///
/// Ordering follows the catalogue: number first, then variant letter, then stars.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AtuId {
    number: u16,
    letter: Option<char>,
    stars: u8,
}

impl AtuId {
    pub fn new(number: u16) -> Result<Self, CorpusError> {
        Self::with_variant(number, None, 0)
    }

    /// `letter` is normalized to uppercase; at most two stars are accepted.
    pub fn with_variant(number: u16, letter: Option<char>, stars: u8) -> Result<Self, CorpusError> {
        if !(MIN_TALE_NUMBER..=MAX_TALE_NUMBER).contains(&number) {
            return Err(CorpusError::NumberOutOfRange(u32::from(number)));
        }
        let letter = match letter {
            Some(c) if c.is_ascii_alphabetic() => Some(c.to_ascii_uppercase()),
            Some(c) => return Err(CorpusError::InvalidId(format!("{number}{c}"))),
            None => None,
        };
        if stars > 2 {
            return Err(CorpusError::InvalidId(format!(
                "{number} with {stars} stars"
            )));
        }
        Ok(Self {
            number,
            letter,
            stars,
        })
    }

    pub fn number(&self) -> u16 {
        self.number
    }

    pub fn letter(&self) -> Option<char> {
        self.letter
    }

    pub fn stars(&self) -> u8 {
        self.stars
    }

    pub fn has_variant(&self) -> bool {
        self.letter.is_some() || self.stars > 0
    }

    pub fn category(&self) -> Category {
        Category::of(u32::from(self.number)).expect("AtuId number is range-checked")
    }
}

impl fmt::Display for AtuId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.number)?;
        if let Some(c) = self.letter {
            write!(f, "{c}")?;
        }
        for _ in 0..self.stars {
            f.write_str("*")?;
        }
        Ok(())
    }
}

impl FromStr for AtuId {
    type Err = CorpusError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        let s = s.strip_prefix("ATU").map_or(s, str::trim_start);
        let digits_end = s.find(|c: char| !c.is_ascii_digit()).unwrap_or(s.len());
        if digits_end == 0 || digits_end > 3 {
            return Err(CorpusError::InvalidId(s.to_string()));
        }
        let number: u16 = s[..digits_end]
            .parse()
            .map_err(|_| CorpusError::InvalidId(s.to_string()))?;
        let mut rest = s[digits_end..].chars().peekable();
        let letter = rest.next_if(|c| c.is_ascii_alphabetic());
        let mut stars = 0u8;
        for c in rest {
            if c != '*' {
                return Err(CorpusError::InvalidId(s.to_string()));
            }
            stars = stars.saturating_add(1);
        }
        Self::with_variant(number, letter, stars)
    }
}

impl Serialize for AtuId {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for AtuId {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Minor category of an animal tale, fixed by index number ranges.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Category {
    /// 1-99
    WildAnimals,
    /// 100-149
    WildAndDomestic,
    /// 150-199
    WildAndHumans,
    /// 200-219
    DomesticAnimals,
    /// 220-299
    OtherAnimalsAndObjects,
}

impl Category {
    pub const ALL: [Category; 5] = [
        Category::WildAnimals,
        Category::WildAndDomestic,
        Category::WildAndHumans,
        Category::DomesticAnimals,
        Category::OtherAnimalsAndObjects,
    ];

    pub fn of(n: u32) -> Result<Self, CorpusError> {
        match n {
            1..=99 => Ok(Self::WildAnimals),
            100..=149 => Ok(Self::WildAndDomestic),
            150..=199 => Ok(Self::WildAndHumans),
            200..=219 => Ok(Self::DomesticAnimals),
            220..=299 => Ok(Self::OtherAnimalsAndObjects),
            _ => Err(CorpusError::NumberOutOfRange(n)),
        }
    }

    /// Inclusive index range covered by the category.
    pub fn range(self) -> (u16, u16) {
        match self {
            Self::WildAnimals => (1, 99),
            Self::WildAndDomestic => (100, 149),
            Self::WildAndHumans => (150, 199),
            Self::DomesticAnimals => (200, 219),
            Self::OtherAnimalsAndObjects => (220, 299),
        }
    }

    /// Stable identifier used in tables and CSV row labels.
    pub fn key(self) -> &'static str {
        match self {
            Self::WildAnimals => "wild_animals",
            Self::WildAndDomestic => "wild_and_domestic",
            Self::WildAndHumans => "wild_and_humans",
            Self::DomesticAnimals => "domestic_animals",
            Self::OtherAnimalsAndObjects => "other_animals_and_objects",
        }
    }

    pub fn title(self) -> &'static str {
        match self {
            Self::WildAnimals => "Wild Animals",
            Self::WildAndDomestic => "Wild Animals and Domestic Animals",
            Self::WildAndHumans => "Wild Animals and Humans",
            Self::DomesticAnimals => "Domestic Animals",
            Self::OtherAnimalsAndObjects => "Other Animals and Objects",
        }
    }
}

impl fmt::Display for Category {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.key())
    }
}

/// Category lookup for a bare index number.
pub fn category_of(n: u32) -> Result<Category, CorpusError> {
    Category::of(n)
}
