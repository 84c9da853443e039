//! Per-language polarity word lists.
//!
//! A lexicon is two disjoint sets of romanized words, one positive and one
//! negative. There are no neutral entries: any word absent from both sets is
//! tagged [`SentimentTag::Unk`]. Only English and Bengali lexicons exist;
//! Hindi words are never looked up.
//!
//! Matching is exact on the stored string. Transliteration variants (for
//! example `A` versus `aa` for the same Bengali letter) are not reconciled.

use std::collections::BTreeSet;

use thiserror::Error;

use crate::label::{Lang, SentimentTag};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum LexiconError {
    #[error("word {word:?} appears in both the positive and negative lists")]
    Overlap { word: String },
    #[error("{list} list, line {line}: invalid UTF-8")]
    Decode { list: Polarity, line: usize },
    #[error("{list} list, line {line}: entry {entry:?} contains whitespace")]
    Whitespace {
        list: Polarity,
        line: usize,
        entry: String,
    },
    #[error("no sentiment lexicon is supported for language {0}")]
    UnsupportedLanguage(Lang),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Polarity {
    Positive,
    Negative,
}

impl std::fmt::Display for Polarity {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Polarity::Positive => "positive",
            Polarity::Negative => "negative",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LexiconOptions {
    /// Lowercase entries at load time and words at lookup time.
    pub case_fold: bool,
}

impl Default for LexiconOptions {
    fn default() -> Self {
        LexiconOptions { case_fold: true }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SentimentLexicon {
    language: Lang,
    positive: BTreeSet<String>,
    negative: BTreeSet<String>,
    case_fold: bool,
}

impl SentimentLexicon {
    /// A lexicon with no entries; every lookup yields `Unk`.
    pub fn empty(language: Lang) -> Self {
        SentimentLexicon {
            language,
            positive: BTreeSet::new(),
            negative: BTreeSet::new(),
            case_fold: true,
        }
    }

    /// Load from two line-oriented sources with default options (case folding on).
    pub fn load(positive: &[u8], negative: &[u8], language: Lang) -> Result<Self, LexiconError> {
        Self::load_with(positive, negative, language, LexiconOptions::default())
    }

    /// Load from two line-oriented sources.
    ///
    /// One word per line. Blank lines and lines starting with `#` are
    /// skipped, a leading UTF-8 BOM is stripped, and CRLF endings are
    /// accepted. Repeated words within one list collapse; a word present in
    /// both lists is an error.
    pub fn load_with(
        positive: &[u8],
        negative: &[u8],
        language: Lang,
        options: LexiconOptions,
    ) -> Result<Self, LexiconError> {
        if language == Lang::Hi {
            return Err(LexiconError::UnsupportedLanguage(language));
        }
        let positive = read_words(positive, Polarity::Positive, options.case_fold)?;
        let negative = read_words(negative, Polarity::Negative, options.case_fold)?;
        if let Some(word) = positive.intersection(&negative).next() {
            return Err(LexiconError::Overlap { word: word.clone() });
        }
        Ok(SentimentLexicon {
            language,
            positive,
            negative,
            case_fold: options.case_fold,
        })
    }

    pub fn language(&self) -> Lang {
        self.language
    }

    pub fn case_fold(&self) -> bool {
        self.case_fold
    }

    pub fn positive_words(&self) -> impl Iterator<Item = &str> {
        self.positive.iter().map(String::as_str)
    }

    pub fn negative_words(&self) -> impl Iterator<Item = &str> {
        self.negative.iter().map(String::as_str)
    }

    pub fn positive_len(&self) -> usize {
        self.positive.len()
    }

    pub fn negative_len(&self) -> usize {
        self.negative.len()
    }

    pub fn is_empty(&self) -> bool {
        self.positive.is_empty() && self.negative.is_empty()
    }

    pub fn lookup(&self, word: &str) -> SentimentTag {
        if self.is_empty() {
            return SentimentTag::Unk;
        }
        let folded;
        let key = if self.case_fold {
            folded = word.to_lowercase();
            folded.as_str()
        } else {
            word
        };
        if self.positive.contains(key) {
            SentimentTag::Positive
        } else if self.negative.contains(key) {
            SentimentTag::Negative
        } else {
            SentimentTag::Unk
        }
    }
}

fn read_words(
    source: &[u8],
    list: Polarity,
    case_fold: bool,
) -> Result<BTreeSet<String>, LexiconError> {
    let source = source.strip_prefix(b"\xEF\xBB\xBF").unwrap_or(source);
    let mut words = BTreeSet::new();
    for (i, raw) in source.split(|&b| b == b'\n').enumerate() {
        let line = i + 1;
        let text = std::str::from_utf8(raw).map_err(|_| LexiconError::Decode { list, line })?;
        let entry = text.trim();
        if entry.is_empty() || entry.starts_with('#') {
            continue;
        }
        if entry.chars().any(char::is_whitespace) {
            return Err(LexiconError::Whitespace {
                list,
                line,
                entry: entry.to_string(),
            });
        }
        let word = if case_fold {
            entry.to_lowercase()
        } else {
            entry.to_string()
        };
        words.insert(word);
    }
    Ok(words)
}
