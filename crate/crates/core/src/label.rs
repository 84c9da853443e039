//! Closed tag sets shared across the pipeline.

use std::fmt;
use std::str::FromStr;

/// Per-token language tag carried by the input data.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Lang {
    En,
    Bn,
    Hi,
}

impl Lang {
    pub const ALL: [Lang; 3] = [Lang::En, Lang::Bn, Lang::Hi];

    pub fn as_str(self) -> &'static str {
        match self {
            Lang::En => "EN",
            Lang::Bn => "BN",
            Lang::Hi => "HI",
        }
    }
}

impl fmt::Display for Lang {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Lang {
    type Err = ();

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "EN" => Ok(Lang::En),
            "BN" => Ok(Lang::Bn),
            "HI" => Ok(Lang::Hi),
            _ => Err(()),
        }
    }
}

/// Tweet-level polarity class.
///
/// The declaration order is the canonical class order used for confusion
/// matrix rows/columns and for breaking ties in prediction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Label {
    Positive,
    Negative,
    Neutral,
}

impl Label {
    pub const ALL: [Label; 3] = [Label::Positive, Label::Negative, Label::Neutral];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Label::Positive => "positive",
            Label::Negative => "negative",
            Label::Neutral => "neutral",
        }
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Label {
    type Err = ();

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "positive" => Ok(Label::Positive),
            "negative" => Ok(Label::Negative),
            "neutral" => Ok(Label::Neutral),
            _ => Err(()),
        }
    }
}

/// Word-level polarity retrieved from a lexicon. `Unk` when the word is absent.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SentimentTag {
    Positive,
    Negative,
    Unk,
}

impl SentimentTag {
    /// Token text inserted into the augmented stream.
    pub fn token(self) -> &'static str {
        match self {
            SentimentTag::Positive => "<Positive>",
            SentimentTag::Negative => "<Negative>",
            SentimentTag::Unk => "<UNK>",
        }
    }
}
