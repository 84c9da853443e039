//! Multinomial Naive Bayes with add-one smoothing.
//!
//! For class `c` and vocabulary term `n`, with `N` the vocabulary size and
//! `Fr[n][c]` the total count of term `n` over all class-`c` training
//! vectors:
//!
//! ```text
//! P(w_n | c) = (1 + Fr[n][c]) / (N + sum_x Fr[x][c])
//! ```
//!
//! A tweet with term counts `f_n` is scored in log space as
//! `log P(c) + sum_n f_n * log P(w_n | c)`; the multinomial normalizer is a
//! shared constant and is never computed. Priors can be switched off, in
//! which case every class starts from zero.

mod file;

use thiserror::Error;

use crate::features::{SparseVector, Vocabulary};
use crate::label::Label;

pub use file::{FORMAT_VERSION, MAGIC};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ModelError {
    #[error("no training tweets for class {0}")]
    EmptyClass(Label),
    #[error("training example has label {0}, which is not a model class")]
    UnknownClass(Label),
    #[error("at least one class is required")]
    NoClasses,
    #[error("empty vocabulary: no n-gram meets the frequency cutoff")]
    EmptyVocabulary,
    #[error("feature index {index} out of range for vocabulary of size {size}")]
    IndexOutOfRange { index: u32, size: usize },
    #[error("not a model file (bad magic header)")]
    BadMagic,
    #[error("unsupported model format version {0} (expected {FORMAT_VERSION})")]
    UnsupportedVersion(String),
    #[error("model file is truncated")]
    Truncated,
    #[error("model checksum mismatch")]
    Checksum,
    #[error("model file line {line}: {message}")]
    Malformed { line: usize, message: String },
}

#[derive(Debug, Clone, PartialEq)]
pub struct NbModel {
    classes: Vec<Label>,
    log_prior: Vec<f64>,
    /// `log_word_prob[c][n]`.
    log_word_prob: Vec<Vec<f64>>,
    class_total_count: Vec<u64>,
    vocab: Vocabulary,
    use_priors: bool,
}

/// Per-class log scores, up to a shared additive constant.
#[derive(Debug, Clone, PartialEq)]
pub struct ClassScores {
    pub classes: Vec<Label>,
    pub scores: Vec<f64>,
}

/// Relative width within which two log scores count as tied. Products that
/// are equal as rationals can differ in the last bits once summed in log
/// space.
pub const TIE_TOLERANCE: f64 = 1e-12;

impl ClassScores {
    /// Highest score; ties go to the earliest class in canonical order.
    pub fn best(&self) -> Label {
        let max = self.scores.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let slack = TIE_TOLERANCE * max.abs().max(1.0);
        let best = self
            .scores
            .iter()
            .position(|&s| s >= max - slack)
            .unwrap_or(0);
        self.classes[best]
    }

    pub fn get(&self, label: Label) -> Option<f64> {
        self.classes
            .iter()
            .position(|&c| c == label)
            .map(|i| self.scores[i])
    }

    /// Posterior probabilities obtained by normalizing the scores.
    pub fn posteriors(&self) -> Vec<f64> {
        let max = self.scores.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let exp: Vec<f64> = self.scores.iter().map(|s| (s - max).exp()).collect();
        let z: f64 = exp.iter().sum();
        exp.into_iter().map(|e| e / z).collect()
    }
}

impl NbModel {
    /// Train over `classes` (sorted into canonical order). Each class needs at
    /// least one example, and every example's label must be one of `classes`.
    pub fn train(
        examples: &[(SparseVector, Label)],
        vocab: Vocabulary,
        classes: &[Label],
        use_priors: bool,
    ) -> Result<Self, ModelError> {
        let mut classes = classes.to_vec();
        classes.sort();
        classes.dedup();
        if classes.is_empty() {
            return Err(ModelError::NoClasses);
        }
        let m = vocab.len();
        if m == 0 {
            return Err(ModelError::EmptyVocabulary);
        }

        let mut tweets = vec![0usize; classes.len()];
        let mut freq = vec![vec![0u64; m]; classes.len()];
        for (vector, label) in examples {
            let c = classes
                .iter()
                .position(|l| l == label)
                .ok_or(ModelError::UnknownClass(*label))?;
            tweets[c] += 1;
            for &(i, count) in vector.entries() {
                let slot = freq[c]
                    .get_mut(i as usize)
                    .ok_or(ModelError::IndexOutOfRange { index: i, size: m })?;
                *slot += count as u64;
            }
        }
        if let Some(c) = tweets.iter().position(|&n| n == 0) {
            return Err(ModelError::EmptyClass(classes[c]));
        }

        let total: usize = tweets.iter().sum();
        let log_prior = tweets
            .iter()
            .map(|&n| (n as f64).ln() - (total as f64).ln())
            .collect();
        let class_total_count: Vec<u64> = freq.iter().map(|f| f.iter().sum()).collect();
        let log_word_prob = freq
            .iter()
            .zip(&class_total_count)
            .map(|(f, &sum)| {
                let log_denom = ((m as u64 + sum) as f64).ln();
                f.iter()
                    .map(|&count| ((1 + count) as f64).ln() - log_denom)
                    .collect()
            })
            .collect();

        Ok(NbModel {
            classes,
            log_prior,
            log_word_prob,
            class_total_count,
            vocab,
            use_priors,
        })
    }

    pub fn classes(&self) -> &[Label] {
        &self.classes
    }

    pub fn vocab(&self) -> &Vocabulary {
        &self.vocab
    }

    pub fn use_priors(&self) -> bool {
        self.use_priors
    }

    pub fn set_use_priors(&mut self, on: bool) {
        self.use_priors = on;
    }

    pub fn log_prior(&self) -> &[f64] {
        &self.log_prior
    }

    /// `log P(w_n | c)` for every term, for the class at position `class`.
    pub fn log_word_probs(&self, class: usize) -> &[f64] {
        &self.log_word_prob[class]
    }

    pub fn class_total_count(&self) -> &[u64] {
        &self.class_total_count
    }

    pub fn score(&self, vector: &SparseVector) -> Result<ClassScores, ModelError> {
        let m = self.vocab.len();
        if let Some(i) = vector.max_index() {
            if i as usize >= m {
                return Err(ModelError::IndexOutOfRange { index: i, size: m });
            }
        }
        let scores = self
            .classes
            .iter()
            .enumerate()
            .map(|(c, _)| {
                let probs = &self.log_word_prob[c];
                let likelihood: f64 = vector
                    .entries()
                    .iter()
                    .map(|&(i, f)| f as f64 * probs[i as usize])
                    .sum();
                if self.use_priors {
                    self.log_prior[c] + likelihood
                } else {
                    likelihood
                }
            })
            .collect();
        Ok(ClassScores {
            classes: self.classes.clone(),
            scores,
        })
    }

    pub fn predict(&self, vector: &SparseVector) -> Result<Label, ModelError> {
        self.score(vector).map(|s| s.best())
    }

    /// `sum_n P(w_n | c)` for every class; 1 up to rounding.
    pub fn probability_mass(&self) -> Vec<f64> {
        self.log_word_prob
            .iter()
            .map(|row| row.iter().map(|lp| lp.exp()).sum())
            .collect()
    }

    pub fn save(&self) -> String {
        file::write(self)
    }

    pub fn load(text: &str) -> Result<Self, ModelError> {
        file::read(text)
    }
}
