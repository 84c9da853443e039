//! Language-tagged tweet files.
//!
//! A corpus file is UTF-8 with one tweet per line:
//!
//! ```text
//! id<TAB>label<TAB>tok/TAG tok/TAG ...     (labeled)
//! id<TAB>tok/TAG tok/TAG ...               (unlabeled)
//! ```
//!
//! `label` is one of `positive`, `negative`, `neutral`. `TAG` is one of `EN`,
//! `BN`, `HI` and is split off at the last `/` of each item, so surfaces may
//! themselves contain slashes (`http://x/EN`). Blank lines are ignored and
//! CRLF endings are accepted.

use std::collections::{BTreeMap, HashSet};
use std::fmt;

use thiserror::Error;

use crate::label::{Label, Lang};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TaggedToken {
    pub surface: String,
    pub lang: Lang,
}

impl TaggedToken {
    pub fn new(surface: impl Into<String>, lang: Lang) -> Self {
        TaggedToken {
            surface: surface.into(),
            lang,
        }
    }
}

impl fmt::Display for TaggedToken {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.surface, self.lang)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabeledTweet {
    pub id: String,
    pub tokens: Vec<TaggedToken>,
    pub label: Option<Label>,
}

impl LabeledTweet {
    /// Serialize back to the corpus line format (without newline).
    pub fn to_line(&self) -> String {
        let tokens = self
            .tokens
            .iter()
            .map(ToString::to_string)
            .collect::<Vec<_>>()
            .join(" ");
        match self.label {
            Some(label) => format!("{}\t{}\t{}", self.id, label, tokens),
            None => format!("{}\t{}", self.id, tokens),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TokenError {
    EmptyLine,
    MissingTag { index: usize, item: String },
    UnknownTag { index: usize, tag: String },
}

impl fmt::Display for TokenError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TokenError::EmptyLine => f.write_str("no tokens"),
            TokenError::MissingTag { index, item } => {
                write!(f, "item {index} ({item:?}) has no /TAG suffix")
            }
            TokenError::UnknownTag { index, tag } => {
                write!(f, "item {index} has unknown language tag {tag:?}")
            }
        }
    }
}

impl std::error::Error for TokenError {}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LineError {
    Fields { expected: &'static str, found: usize },
    EmptyId,
    UnknownLabel(String),
    Tokens(TokenError),
    DuplicateId(String),
}

impl fmt::Display for LineError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LineError::Fields { expected, found } => {
                write!(f, "expected {expected} tab-separated fields, found {found}")
            }
            LineError::EmptyId => f.write_str("empty id"),
            LineError::UnknownLabel(l) => write!(f, "unknown label {l:?}"),
            LineError::Tokens(e) => write!(f, "{e}"),
            LineError::DuplicateId(id) => write!(f, "duplicate id {id:?}"),
        }
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CorpusError {
    #[error("{}", format_bad_lines(.0))]
    BadLines(Vec<(usize, LineError)>),
}

impl CorpusError {
    pub fn lines(&self) -> &[(usize, LineError)] {
        match self {
            CorpusError::BadLines(v) => v,
        }
    }
}

fn format_bad_lines(lines: &[(usize, LineError)]) -> String {
    let mut out = format!("{} malformed corpus line(s):", lines.len());
    for (n, e) in lines {
        out.push_str(&format!("\n  line {n}: {e}"));
    }
    out
}

/// Parse the whitespace-separated `surface/TAG` items of one tweet.
pub fn parse_tagged_line(line: &str) -> Result<Vec<TaggedToken>, TokenError> {
    let mut tokens = Vec::new();
    for (index, item) in line.split_whitespace().enumerate() {
        let (surface, tag) = match item.rsplit_once('/') {
            Some((s, t)) if !s.is_empty() => (s, t),
            _ => {
                return Err(TokenError::MissingTag {
                    index,
                    item: item.to_string(),
                })
            }
        };
        let lang = tag.parse::<Lang>().map_err(|_| TokenError::UnknownTag {
            index,
            tag: tag.to_string(),
        })?;
        tokens.push(TaggedToken::new(surface, lang));
    }
    if tokens.is_empty() {
        return Err(TokenError::EmptyLine);
    }
    Ok(tokens)
}

/// Whether records carry a label column.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LabelMode {
    Labeled,
    Unlabeled,
    /// Decide per line from the number of tab-separated fields.
    Either,
}

fn parse_record(line: &str, mode: LabelMode) -> Result<LabeledTweet, LineError> {
    let fields: Vec<&str> = line.split('\t').collect();
    let (id, label, tokens) = match (mode, fields.as_slice()) {
        (LabelMode::Labeled | LabelMode::Either, [id, label, tokens]) => {
            let label = label
                .trim()
                .parse::<Label>()
                .map_err(|_| LineError::UnknownLabel(label.trim().to_string()))?;
            (*id, Some(label), *tokens)
        }
        (LabelMode::Unlabeled | LabelMode::Either, [id, tokens]) => (*id, None, *tokens),
        (LabelMode::Labeled, f) => {
            return Err(LineError::Fields {
                expected: "3",
                found: f.len(),
            })
        }
        (LabelMode::Unlabeled, f) => {
            return Err(LineError::Fields {
                expected: "2",
                found: f.len(),
            })
        }
        (LabelMode::Either, f) => {
            return Err(LineError::Fields {
                expected: "2 or 3",
                found: f.len(),
            })
        }
    };
    let id = id.trim();
    if id.is_empty() {
        return Err(LineError::EmptyId);
    }
    let tokens = parse_tagged_line(tokens).map_err(LineError::Tokens)?;
    Ok(LabeledTweet {
        id: id.to_string(),
        tokens,
        label,
    })
}

/// Parse a whole corpus. Every malformed line is reported, not just the first.
pub fn load_corpus(source: &str, mode: LabelMode) -> Result<Vec<LabeledTweet>, CorpusError> {
    let source = source.strip_prefix('\u{feff}').unwrap_or(source);
    let mut tweets = Vec::new();
    let mut bad = Vec::new();
    let mut seen = HashSet::new();
    for (i, line) in source.lines().enumerate() {
        let line = line.strip_suffix('\r').unwrap_or(line);
        if line.trim().is_empty() {
            continue;
        }
        match parse_record(line, mode) {
            Ok(tweet) => {
                if seen.insert(tweet.id.clone()) {
                    tweets.push(tweet);
                } else {
                    bad.push((i + 1, LineError::DuplicateId(tweet.id)));
                }
            }
            Err(e) => bad.push((i + 1, e)),
        }
    }
    if bad.is_empty() {
        Ok(tweets)
    } else {
        Err(CorpusError::BadLines(bad))
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CorpusStats {
    pub positive: usize,
    pub negative: usize,
    pub neutral: usize,
    pub unlabeled: usize,
    pub tweets: usize,
    pub tokens: usize,
    pub tokens_by_lang: BTreeMap<Lang, usize>,
}

impl CorpusStats {
    pub fn labeled(&self) -> usize {
        self.positive + self.negative + self.neutral
    }

    pub fn count(&self, label: Label) -> usize {
        match label {
            Label::Positive => self.positive,
            Label::Negative => self.negative,
            Label::Neutral => self.neutral,
        }
    }
}

impl fmt::Display for CorpusStats {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "tweets\t{}", self.tweets)?;
        writeln!(f, "positive\t{}", self.positive)?;
        writeln!(f, "negative\t{}", self.negative)?;
        writeln!(f, "neutral\t{}", self.neutral)?;
        writeln!(f, "unlabeled\t{}", self.unlabeled)?;
        write!(f, "tokens\t{}", self.tokens)?;
        for lang in Lang::ALL {
            write!(
                f,
                "\ntokens_{}\t{}",
                lang.as_str().to_lowercase(),
                self.tokens_by_lang.get(&lang).copied().unwrap_or(0)
            )?;
        }
        Ok(())
    }
}

pub fn corpus_stats(corpus: &[LabeledTweet]) -> CorpusStats {
    let mut stats = CorpusStats::default();
    for tweet in corpus {
        stats.tweets += 1;
        match tweet.label {
            Some(Label::Positive) => stats.positive += 1,
            Some(Label::Negative) => stats.negative += 1,
            Some(Label::Neutral) => stats.neutral += 1,
            None => stats.unlabeled += 1,
        }
        stats.tokens += tweet.tokens.len();
        for tok in &tweet.tokens {
            *stats.tokens_by_lang.entry(tok.lang).or_default() += 1;
        }
    }
    stats
}
