//! Sentiment polarity classification for language-tagged code-mixed social
//! media text (Bengali-English, Hindi-English).
//!
//! The pipeline is:
//!
//! 1. [`corpus`] parses `surface/TAG` token lines into [`corpus::LabeledTweet`]s.
//! 2. [`augment`] fuses each word with its language tag (`darun_BN`) and
//!    follows it with a polarity token (`<Positive>`, `<Negative>`, `<UNK>`)
//!    looked up in a [`lexicon::SentimentLexicon`].
//! 3. [`features`] extracts contiguous n-grams over the augmented stream,
//!    builds a frequency-filtered [`features::Vocabulary`] from training data
//!    and turns tweets into sparse term-frequency vectors.
//! 4. [`nb`] trains and applies a Laplace-smoothed Multinomial Naive Bayes
//!    model, and persists it in a checksummed text format.
//! 5. [`eval`] computes confusion matrices, per-class P/R/F, macro-F,
//!    stratified k-fold cross validation and grid tuning.
//!
//! [`pipeline`] wires those stages together.

pub mod augment;
pub mod corpus;
pub mod error;
pub mod eval;
pub mod features;
pub mod label;
pub mod lexicon;
pub mod nb;
pub mod pipeline;
pub mod synthetic;

pub use augment::{AugmentedToken, Augmenter, TokenKind};
pub use corpus::{CorpusStats, LabelMode, LabeledTweet, TaggedToken};
pub use error::{Error, Result};
pub use eval::{ConfusionMatrix, CvResult, EvalReport, GridResult};
pub use features::{SparseVector, Vocabulary};
pub use label::{Label, Lang, SentimentTag};
pub use lexicon::SentimentLexicon;
pub use nb::{ClassScores, NbModel};
pub use pipeline::{Params, Pipeline};
