//! Language-tag fusion and sentiment-tag augmentation.
//!
//! `It's/EN a/EN darun/BN movie/EN` becomes
//! `It's_EN <UNK> a_EN <UNK> darun_BN <Positive> movie_EN <UNK>`
//! when `darun` is in the Bengali positive list.

use crate::corpus::{LabeledTweet, TaggedToken};
use crate::label::{Lang, SentimentTag};
use crate::lexicon::SentimentLexicon;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TokenKind {
    Word,
    SentiTag,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct AugmentedToken {
    pub text: String,
    pub kind: TokenKind,
}

impl AugmentedToken {
    pub fn senti(tag: SentimentTag) -> Self {
        AugmentedToken {
            text: tag.token().to_string(),
            kind: TokenKind::SentiTag,
        }
    }
}

/// `surface_LANG`.
pub fn attach_language_tag(token: &TaggedToken) -> AugmentedToken {
    AugmentedToken {
        text: format!("{}_{}", token.surface, token.lang),
        kind: TokenKind::Word,
    }
}

/// Routes by language: EN and BN consult their own lexicon using the bare
/// surface; HI always yields `Unk`.
pub fn sentiment_tag_for(
    token: &TaggedToken,
    en: &SentimentLexicon,
    bn: &SentimentLexicon,
) -> SentimentTag {
    match token.lang {
        Lang::En => en.lookup(&token.surface),
        Lang::Bn => bn.lookup(&token.surface),
        Lang::Hi => SentimentTag::Unk,
    }
}

/// Holds the two lexicons used for augmentation. Either may be empty.
#[derive(Debug, Clone)]
pub struct Augmenter {
    en: SentimentLexicon,
    bn: SentimentLexicon,
}

impl Default for Augmenter {
    fn default() -> Self {
        Augmenter {
            en: SentimentLexicon::empty(Lang::En),
            bn: SentimentLexicon::empty(Lang::Bn),
        }
    }
}

impl Augmenter {
    pub fn new(en: SentimentLexicon, bn: SentimentLexicon) -> Self {
        Augmenter { en, bn }
    }

    pub fn en(&self) -> &SentimentLexicon {
        &self.en
    }

    pub fn bn(&self) -> &SentimentLexicon {
        &self.bn
    }

    pub fn tag(&self, token: &TaggedToken) -> SentimentTag {
        sentiment_tag_for(token, &self.en, &self.bn)
    }

    pub fn augment_tokens(&self, tokens: &[TaggedToken]) -> Vec<AugmentedToken> {
        augment_tokens(tokens, &self.en, &self.bn)
    }

    pub fn augment(&self, tweet: &LabeledTweet) -> Vec<AugmentedToken> {
        self.augment_tokens(&tweet.tokens)
    }
}

/// Word, tag, word, tag, ... in input order; twice the input length.
pub fn augment_tokens(
    tokens: &[TaggedToken],
    en: &SentimentLexicon,
    bn: &SentimentLexicon,
) -> Vec<AugmentedToken> {
    let mut out = Vec::with_capacity(tokens.len() * 2);
    for tok in tokens {
        out.push(attach_language_tag(tok));
        out.push(AugmentedToken::senti(sentiment_tag_for(tok, en, bn)));
    }
    out
}

pub fn augment_tweet(
    tweet: &LabeledTweet,
    en: &SentimentLexicon,
    bn: &SentimentLexicon,
) -> Vec<AugmentedToken> {
    augment_tokens(&tweet.tokens, en, bn)
}

pub fn texts(stream: &[AugmentedToken]) -> Vec<&str> {
    stream.iter().map(|t| t.text.as_str()).collect()
}
