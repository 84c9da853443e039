//! End-to-end wiring: augmentation, vocabulary, vectorization, training and
//! prediction.

use crate::augment::{AugmentedToken, Augmenter};
use crate::corpus::LabeledTweet;
use crate::error::Result;
use crate::features::{SparseVector, Vocabulary};
use crate::label::Label;
use crate::nb::{ClassScores, ModelError, NbModel};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Params {
    pub ngram_max: usize,
    pub min_count: usize,
    pub use_priors: bool,
}

impl Default for Params {
    /// Unigrams and bigrams, cutoff 2, empirical priors.
    fn default() -> Self {
        Params {
            ngram_max: 2,
            min_count: 2,
            use_priors: true,
        }
    }
}

/// Classes that occur among the labeled tweets, in canonical order.
pub fn present_classes(tweets: &[LabeledTweet]) -> Vec<Label> {
    Label::ALL
        .into_iter()
        .filter(|l| tweets.iter().any(|t| t.label == Some(*l)))
        .collect()
}

/// Build the vocabulary from `streams` and train on them.
pub fn fit_streams(
    streams: &[&[AugmentedToken]],
    labels: &[Label],
    classes: &[Label],
    params: Params,
) -> Result<NbModel> {
    let vocab = Vocabulary::build(streams.iter().copied(), params.ngram_max, params.min_count)?;
    if vocab.is_empty() {
        return Err(ModelError::EmptyVocabulary.into());
    }
    let examples: Vec<(SparseVector, Label)> = streams
        .iter()
        .zip(labels)
        .map(|(s, &l)| (vocab.vectorize(s), l))
        .collect();
    Ok(NbModel::train(&examples, vocab, classes, params.use_priors)?)
}

#[derive(Debug, Clone, Default)]
pub struct Pipeline {
    augmenter: Augmenter,
}

impl Pipeline {
    pub fn new(augmenter: Augmenter) -> Self {
        Pipeline { augmenter }
    }

    pub fn augmenter(&self) -> &Augmenter {
        &self.augmenter
    }

    pub fn augment_all(&self, tweets: &[LabeledTweet]) -> Vec<Vec<AugmentedToken>> {
        tweets.iter().map(|t| self.augmenter.augment(t)).collect()
    }

    /// Train on the labeled tweets over the classes present in them.
    /// Unlabeled tweets are ignored.
    pub fn fit(&self, tweets: &[LabeledTweet], params: Params) -> Result<NbModel> {
        let (streams, labels): (Vec<Vec<AugmentedToken>>, Vec<Label>) = tweets
            .iter()
            .filter_map(|t| t.label.map(|l| (self.augmenter.augment(t), l)))
            .unzip();
        let slices: Vec<&[AugmentedToken]> = streams.iter().map(Vec::as_slice).collect();
        fit_streams(&slices, &labels, &present_classes(tweets), params)
    }

    pub fn vectorize(&self, model: &NbModel, tweet: &LabeledTweet) -> SparseVector {
        model.vocab().vectorize(&self.augmenter.augment(tweet))
    }

    pub fn score(&self, model: &NbModel, tweet: &LabeledTweet) -> Result<ClassScores> {
        Ok(model.score(&self.vectorize(model, tweet))?)
    }

    pub fn predict(&self, model: &NbModel, tweet: &LabeledTweet) -> Result<Label> {
        Ok(model.predict(&self.vectorize(model, tweet))?)
    }

    pub fn predict_all(&self, model: &NbModel, tweets: &[LabeledTweet]) -> Result<Vec<Label>> {
        tweets.iter().map(|t| self.predict(model, t)).collect()
    }
}
