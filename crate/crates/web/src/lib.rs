//! Browser bindings for the sentiment pipeline. See `www/index.html`.

use std::fmt::Write;

use cmsent::corpus::{load_corpus, parse_tagged_line, LabelMode};
use cmsent::eval::kfold_cv;
use cmsent::{Augmenter, LabeledTweet, Lang, Params, Pipeline, SentimentLexicon};
use wasm_bindgen::prelude::*;

/// A pipeline configured with the lexicons pasted into the page.
#[wasm_bindgen]
pub struct Demo {
    pipeline: Pipeline,
}

#[wasm_bindgen]
impl Demo {
    /// Each argument is a word list, one word per line.
    #[wasm_bindgen(constructor)]
    pub fn new(en_pos: &str, en_neg: &str, bn_pos: &str, bn_neg: &str) -> Result<Demo, String> {
        let lexicon = |pos: &str, neg: &str, lang: Lang| {
            SentimentLexicon::load(pos.as_bytes(), neg.as_bytes(), lang)
                .map_err(|e| format!("{} lexicon: {e}", lang.as_str()))
        };
        let augmenter = Augmenter::new(
            lexicon(en_pos, en_neg, Lang::En)?,
            lexicon(bn_pos, bn_neg, Lang::Bn)?,
        );
        Ok(Demo {
            pipeline: Pipeline::new(augmenter),
        })
    }

    /// The augmented token stream for a line of `surface/TAG` tokens.
    pub fn augment(&self, tokens: &str) -> Result<String, String> {
        let tweet = tweet_from(tokens)?;
        let stream = self.pipeline.augmenter().augment(&tweet);
        Ok(stream.iter().map(|t| t.text.as_str()).collect::<Vec<_>>().join(" "))
    }

    /// Train on `corpus` and report class scores for one tweet.
    pub fn classify(
        &self,
        corpus: &str,
        tokens: &str,
        ngram_max: usize,
        min_count: usize,
        use_priors: bool,
    ) -> Result<String, String> {
        let train = load_corpus(corpus, LabelMode::Labeled).map_err(|e| e.to_string())?;
        let params = params(ngram_max, min_count, use_priors)?;
        let model = self.pipeline.fit(&train, params).map_err(|e| e.to_string())?;
        let tweet = tweet_from(tokens)?;
        let scores = self.pipeline.score(&model, &tweet).map_err(|e| e.to_string())?;

        let mut out = String::new();
        writeln!(out, "prediction: {}", scores.best()).unwrap();
        writeln!(out, "vocabulary: {} terms", model.vocab().len()).unwrap();
        writeln!(out, "\n{:<10}{:>14}{:>12}", "class", "log score", "posterior").unwrap();
        for ((class, score), post) in scores.classes.iter().zip(&scores.scores).zip(scores.posteriors()) {
            writeln!(out, "{:<10}{score:>14.4}{post:>12.4}", class.as_str()).unwrap();
        }
        let v = self.pipeline.vectorize(&model, &tweet);
        writeln!(out, "\nmatched terms:").unwrap();
        if v.is_empty() {
            writeln!(out, "  (none)").unwrap();
        }
        for &(index, count) in v.entries() {
            writeln!(out, "  {:<30} x{count}", model.vocab().term(index as usize).unwrap_or("?")).unwrap();
        }
        Ok(out)
    }

    /// Stratified k-fold cross validation on `corpus`.
    #[wasm_bindgen(js_name = crossValidate)]
    pub fn cross_validate(
        &self,
        corpus: &str,
        k: usize,
        seed: u32,
        ngram_max: usize,
        min_count: usize,
        use_priors: bool,
    ) -> Result<String, String> {
        let tweets = load_corpus(corpus, LabelMode::Labeled).map_err(|e| e.to_string())?;
        let params = params(ngram_max, min_count, use_priors)?;
        let result = kfold_cv(&self.pipeline, &tweets, k, seed as u64, params).map_err(|e| e.to_string())?;
        let mut out = String::new();
        for (i, fold) in result.folds.iter().enumerate() {
            writeln!(out, "fold {i}: n={} macro-F={:.4}", fold.report.total, fold.report.macro_f).unwrap();
        }
        writeln!(out, "\nmean over {k} folds").unwrap();
        out.push_str(&result.mean.to_table());
        Ok(out)
    }
}

fn params(ngram_max: usize, min_count: usize, use_priors: bool) -> Result<Params, String> {
    if ngram_max == 0 || min_count == 0 {
        return Err("n-gram size and minimum count must be at least 1".into());
    }
    Ok(Params {
        ngram_max,
        min_count,
        use_priors,
    })
}

fn tweet_from(tokens: &str) -> Result<LabeledTweet, String> {
    let tokens = parse_tagged_line(tokens).map_err(|e| e.to_string())?;
    Ok(LabeledTweet {
        id: "input".into(),
        tokens,
        label: None,
    })
}
