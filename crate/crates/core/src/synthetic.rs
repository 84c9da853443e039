//! Seeded synthetic corpora with known structure.

use rand::seq::IndexedRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::corpus::{LabeledTweet, TaggedToken};
use crate::label::{Label, Lang};

const FILLER: [&str; 24] = [
    "ami", "tumi", "movie", "dekhlam", "aaj", "kal", "yaar", "kya", "hai", "the", "match", "team",
    "bhai", "dekho", "khub", "ekta", "gaan", "song", "video", "nahi", "abhi", "ki", "ar", "time",
];

fn filler(rng: &mut ChaCha8Rng) -> TaggedToken {
    let word = FILLER.choose(rng).unwrap();
    let lang = Lang::ALL[rng.random_range(0..3)];
    TaggedToken::new(*word, lang)
}

fn marker(label: Label) -> TaggedToken {
    TaggedToken::new(format!("mark{}", label.as_str()), Lang::En)
}

/// `per_class` tweets of each class, each with 3-8 random filler tokens.
/// With `markers`, every tweet also carries one token unique to its class,
/// inserted at a random position.
pub fn separable_corpus(per_class: usize, seed: u64, markers: bool) -> Vec<LabeledTweet> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(per_class * 3);
    for i in 0..per_class {
        for label in Label::ALL {
            let len = rng.random_range(3..=8);
            let mut tokens: Vec<TaggedToken> = (0..len).map(|_| filler(&mut rng)).collect();
            if markers {
                let at = rng.random_range(0..=tokens.len());
                tokens.insert(at, marker(label));
            }
            out.push(LabeledTweet {
                id: format!("{}{i}", &label.as_str()[..3]),
                tokens,
                label: Some(label),
            });
        }
    }
    out
}

/// Every tweet starts with the words `x`, `y`, `z` in a class-specific order
/// followed by 2-5 filler tokens. All classes share the same unigram
/// multiset; only word order separates them.
pub fn bigram_signal_corpus(per_class: usize, seed: u64) -> Vec<LabeledTweet> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(per_class * 3);
    for i in 0..per_class {
        for label in Label::ALL {
            let order = match label {
                Label::Positive => ["x", "y", "z"],
                Label::Negative => ["z", "y", "x"],
                Label::Neutral => ["y", "z", "x"],
            };
            let mut tokens: Vec<TaggedToken> =
                order.iter().map(|w| TaggedToken::new(*w, Lang::En)).collect();
            let extra = rng.random_range(2..=5);
            tokens.extend((0..extra).map(|_| filler(&mut rng)));
            out.push(LabeledTweet {
                id: format!("{}{i}", &label.as_str()[..3]),
                tokens,
                label: Some(label),
            });
        }
    }
    out
}
