//! N-gram vocabulary and term-frequency vectors.

use std::collections::{BTreeMap, HashMap};

use thiserror::Error;

use crate::augment::AugmentedToken;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum FeatureError {
    #[error("cannot build a vocabulary from an empty training set")]
    EmptyTraining,
    #[error("ngram_max must be at least 1")]
    ZeroNgramMax,
    #[error("min_count must be at least 1")]
    ZeroMinCount,
    #[error("duplicate vocabulary term {0:?}")]
    DuplicateTerm(String),
}

/// All contiguous n-grams for n = 1..=`ngram_max`, grouped by order and in
/// stream order within each group. Tokens are joined by a single space.
pub fn extract_ngrams(tokens: &[AugmentedToken], ngram_max: usize) -> Vec<String> {
    let mut out = Vec::new();
    for n in 1..=ngram_max {
        if n > tokens.len() {
            break;
        }
        for window in tokens.windows(n) {
            let mut gram = String::with_capacity(window.iter().map(|t| t.text.len() + 1).sum());
            for (i, t) in window.iter().enumerate() {
                if i > 0 {
                    gram.push(' ');
                }
                gram.push_str(&t.text);
            }
            out.push(gram);
        }
    }
    out
}

/// Total occurrence count of every n-gram across the given streams.
pub fn count_ngrams<'a, I>(streams: I, ngram_max: usize) -> BTreeMap<String, usize>
where
    I: IntoIterator<Item = &'a [AugmentedToken]>,
{
    let mut counts = BTreeMap::new();
    for stream in streams {
        for gram in extract_ngrams(stream, ngram_max) {
            *counts.entry(gram).or_insert(0) += 1;
        }
    }
    counts
}

/// Training-corpus n-gram index.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Vocabulary {
    terms: Vec<String>,
    index: HashMap<String, u32>,
    ngram_max: usize,
    min_count: usize,
}

impl Vocabulary {
    /// Retain every n-gram whose total occurrence count is at least
    /// `min_count`. Indices follow lexicographic order of the term strings.
    pub fn build<'a, I>(streams: I, ngram_max: usize, min_count: usize) -> Result<Self, FeatureError>
    where
        I: IntoIterator<Item = &'a [AugmentedToken]>,
    {
        check_params(ngram_max, min_count)?;
        let mut streams = streams.into_iter().peekable();
        if streams.peek().is_none() {
            return Err(FeatureError::EmptyTraining);
        }
        let terms = count_ngrams(streams, ngram_max)
            .into_iter()
            .filter(|&(_, c)| c >= min_count)
            .map(|(t, _)| t)
            .collect();
        Self::from_terms(terms, ngram_max, min_count)
    }

    /// Use `terms` in the given order as indices 0..m.
    pub fn from_terms(
        terms: Vec<String>,
        ngram_max: usize,
        min_count: usize,
    ) -> Result<Self, FeatureError> {
        check_params(ngram_max, min_count)?;
        let mut index = HashMap::with_capacity(terms.len());
        for (i, t) in terms.iter().enumerate() {
            if index.insert(t.clone(), i as u32).is_some() {
                return Err(FeatureError::DuplicateTerm(t.clone()));
            }
        }
        Ok(Vocabulary {
            terms,
            index,
            ngram_max,
            min_count,
        })
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn ngram_max(&self) -> usize {
        self.ngram_max
    }

    pub fn min_count(&self) -> usize {
        self.min_count
    }

    pub fn terms(&self) -> &[String] {
        &self.terms
    }

    pub fn index_of(&self, term: &str) -> Option<usize> {
        self.index.get(term).map(|&i| i as usize)
    }

    pub fn term(&self, index: usize) -> Option<&str> {
        self.terms.get(index).map(String::as_str)
    }

    /// Term frequencies of in-vocabulary n-grams; out-of-vocabulary n-grams are dropped.
    pub fn vectorize(&self, tokens: &[AugmentedToken]) -> SparseVector {
        let mut counts: BTreeMap<u32, u32> = BTreeMap::new();
        for gram in extract_ngrams(tokens, self.ngram_max) {
            if let Some(&i) = self.index.get(&gram) {
                *counts.entry(i).or_insert(0) += 1;
            }
        }
        SparseVector {
            entries: counts.into_iter().collect(),
        }
    }
}

fn check_params(ngram_max: usize, min_count: usize) -> Result<(), FeatureError> {
    if ngram_max == 0 {
        return Err(FeatureError::ZeroNgramMax);
    }
    if min_count == 0 {
        return Err(FeatureError::ZeroMinCount);
    }
    Ok(())
}

/// `(index, count)` pairs with strictly increasing indices and counts >= 1.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SparseVector {
    entries: Vec<(u32, u32)>,
}

impl SparseVector {
    /// Build from arbitrary pairs: indices are sorted, duplicates summed and
    /// zero counts dropped.
    pub fn from_pairs<I: IntoIterator<Item = (u32, u32)>>(pairs: I) -> Self {
        let mut counts: BTreeMap<u32, u32> = BTreeMap::new();
        for (i, c) in pairs {
            if c > 0 {
                *counts.entry(i).or_insert(0) += c;
            }
        }
        SparseVector {
            entries: counts.into_iter().collect(),
        }
    }

    pub fn entries(&self) -> &[(u32, u32)] {
        &self.entries
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn total(&self) -> u64 {
        self.entries.iter().map(|&(_, c)| c as u64).sum()
    }

    pub fn max_index(&self) -> Option<u32> {
        self.entries.last().map(|&(i, _)| i)
    }
}
