//! Confusion matrices, per-class precision/recall/F, macro-F, stratified
//! k-fold cross validation and grid tuning.
//!
//! The headline metric is the unweighted mean of the three per-class F
//! scores. It is not the harmonic mean of overall precision and recall: a
//! system reporting overall P=0.606 and R=0.524 can have macro-F 0.504,
//! below 2PR/(P+R)=0.562.

use std::fmt::{self, Write as _};

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::augment::AugmentedToken;
use crate::corpus::LabeledTweet;
use crate::error::{Error, Result};
use crate::features::Vocabulary;
use crate::label::Label;
use crate::nb::ModelError;
use crate::pipeline::{fit_streams, present_classes, Params, Pipeline};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum EvalError {
    #[error("gold has {gold} labels but predictions have {predicted}")]
    LengthMismatch { gold: usize, predicted: usize },
    #[error("nothing to evaluate")]
    Empty,
    #[error("k must be at least 2, got {0}")]
    TooFewFolds(usize),
    #[error("{k}-fold cross validation needs at least {k} tweets, got {n}")]
    TooFewTweets { k: usize, n: usize },
    #[error("class {label} has {count} tweet(s); stratified folding needs at least 2")]
    ClassTooSmall { label: Label, count: usize },
    #[error("tweet {0:?} has no label")]
    Unlabeled(String),
    #[error("parameter grid is empty")]
    EmptyGrid,
}

/// Rows are gold labels, columns predictions, both in canonical class order.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct ConfusionMatrix {
    pub counts: [[usize; 3]; 3],
}

impl ConfusionMatrix {
    pub fn new(gold: &[Label], predicted: &[Label]) -> Result<Self, EvalError> {
        if gold.len() != predicted.len() {
            return Err(EvalError::LengthMismatch {
                gold: gold.len(),
                predicted: predicted.len(),
            });
        }
        if gold.is_empty() {
            return Err(EvalError::Empty);
        }
        let mut cm = ConfusionMatrix::default();
        for (g, p) in gold.iter().zip(predicted) {
            cm.counts[g.index()][p.index()] += 1;
        }
        Ok(cm)
    }

    pub fn get(&self, gold: Label, predicted: Label) -> usize {
        self.counts[gold.index()][predicted.index()]
    }

    pub fn total(&self) -> usize {
        self.counts.iter().flatten().sum()
    }

    pub fn gold_total(&self, label: Label) -> usize {
        self.counts[label.index()].iter().sum()
    }

    pub fn predicted_total(&self, label: Label) -> usize {
        self.counts.iter().map(|row| row[label.index()]).sum()
    }

    pub fn add(&mut self, other: &ConfusionMatrix) {
        for (r, o) in self.counts.iter_mut().zip(&other.counts) {
            for (a, b) in r.iter_mut().zip(o) {
                *a += b;
            }
        }
    }
}

pub fn confusion(gold: &[Label], predicted: &[Label]) -> Result<ConfusionMatrix, EvalError> {
    ConfusionMatrix::new(gold, predicted)
}

#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct Prf {
    pub precision: f64,
    pub recall: f64,
    pub f: f64,
}

fn ratio(num: usize, den: usize) -> f64 {
    if den == 0 {
        0.0
    } else {
        num as f64 / den as f64
    }
}

/// Per-class P, R and F in canonical class order. A zero denominator yields 0.
pub fn per_class_prf(cm: &ConfusionMatrix) -> [Prf; 3] {
    Label::ALL.map(|l| {
        let tp = cm.get(l, l);
        let precision = ratio(tp, cm.predicted_total(l));
        let recall = ratio(tp, cm.gold_total(l));
        let f = if precision + recall == 0.0 {
            0.0
        } else {
            2.0 * precision * recall / (precision + recall)
        };
        Prf {
            precision,
            recall,
            f,
        }
    })
}

/// `(f_pos + f_neg + f_neu) / 3`.
pub fn macro_f(f_pos: f64, f_neg: f64, f_neu: f64) -> f64 {
    (f_pos + f_neg + f_neu) / 3.0
}

#[derive(Debug, Clone, PartialEq)]
pub struct EvalReport {
    pub per_class: [Prf; 3],
    /// Mean of per-class precision.
    pub precision: f64,
    /// Mean of per-class recall.
    pub recall: f64,
    pub macro_f: f64,
    pub total: usize,
    pub confusion: ConfusionMatrix,
}

impl EvalReport {
    pub fn from_confusion(cm: ConfusionMatrix) -> Self {
        let per_class = per_class_prf(&cm);
        let mean = |g: fn(&Prf) -> f64| macro_f(g(&per_class[0]), g(&per_class[1]), g(&per_class[2]));
        EvalReport {
            precision: mean(|p| p.precision),
            recall: mean(|p| p.recall),
            macro_f: mean(|p| p.f),
            per_class,
            total: cm.total(),
            confusion: cm,
        }
    }

    pub fn evaluate(gold: &[Label], predicted: &[Label]) -> Result<Self, EvalError> {
        ConfusionMatrix::new(gold, predicted).map(Self::from_confusion)
    }

    /// Element-wise mean of the given reports; confusion matrices and totals
    /// are summed.
    pub fn mean(reports: &[EvalReport]) -> Result<Self, EvalError> {
        if reports.is_empty() {
            return Err(EvalError::Empty);
        }
        let n = reports.len() as f64;
        let avg = |g: &dyn Fn(&EvalReport) -> f64| reports.iter().map(g).sum::<f64>() / n;
        let mut confusion = ConfusionMatrix::default();
        for r in reports {
            confusion.add(&r.confusion);
        }
        let per_class: [Prf; 3] = std::array::from_fn(|c| Prf {
            precision: avg(&|r| r.per_class[c].precision),
            recall: avg(&|r| r.per_class[c].recall),
            f: avg(&|r| r.per_class[c].f),
        });
        let mean = |g: fn(&Prf) -> f64| macro_f(g(&per_class[0]), g(&per_class[1]), g(&per_class[2]));
        Ok(EvalReport {
            precision: mean(|p| p.precision),
            recall: mean(|p| p.recall),
            macro_f: mean(|p| p.f),
            per_class,
            total: reports.iter().map(|r| r.total).sum(),
            confusion,
        })
    }

    pub fn f(&self, label: Label) -> f64 {
        self.per_class[label.index()].f
    }

    /// One `key value` pair per line.
    pub fn to_kv(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "total {}", self.total);
        for l in Label::ALL {
            let p = &self.per_class[l.index()];
            let _ = writeln!(out, "{l}.precision {:.6}", p.precision);
            let _ = writeln!(out, "{l}.recall {:.6}", p.recall);
            let _ = writeln!(out, "{l}.f {:.6}", p.f);
        }
        let _ = writeln!(out, "overall.precision {:.6}", self.precision);
        let _ = writeln!(out, "overall.recall {:.6}", self.recall);
        let _ = writeln!(out, "macro_f {:.6}", self.macro_f);
        for g in Label::ALL {
            for p in Label::ALL {
                let _ = writeln!(out, "confusion.{g}.{p} {}", self.confusion.get(g, p));
            }
        }
        out
    }

    pub fn to_table(&self) -> String {
        self.to_string()
    }
}

impl fmt::Display for EvalReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{:<10} {:>9} {:>9} {:>9}", "class", "precision", "recall", "f-score")?;
        for l in Label::ALL {
            let p = &self.per_class[l.index()];
            writeln!(f, "{:<10} {:>9.3} {:>9.3} {:>9.3}", l.as_str(), p.precision, p.recall, p.f)?;
        }
        writeln!(
            f,
            "{:<10} {:>9.3} {:>9.3} {:>9.3}",
            "overall", self.precision, self.recall, self.macro_f
        )?;
        writeln!(f)?;
        writeln!(f, "{:<10} {:>9} {:>9} {:>9}   (rows: gold, columns: predicted; n={})", "", "positive", "negative", "neutral", self.total)?;
        for g in Label::ALL {
            let row = &self.confusion.counts[g.index()];
            writeln!(f, "{:<10} {:>9} {:>9} {:>9}", g.as_str(), row[0], row[1], row[2])?;
        }
        Ok(())
    }
}

/// Fold number (0..k) for every label, preserving class proportions.
///
/// Each class's members are shuffled with a generator seeded from `seed`; the
/// classes are then concatenated in canonical order and dealt to folds
/// round-robin. Fold sizes differ by at most one.
pub fn stratified_folds(labels: &[Label], k: usize, seed: u64) -> Result<Vec<usize>, EvalError> {
    if k < 2 {
        return Err(EvalError::TooFewFolds(k));
    }
    if labels.len() < k {
        return Err(EvalError::TooFewTweets { k, n: labels.len() });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut order = Vec::with_capacity(labels.len());
    for class in Label::ALL {
        let mut members: Vec<usize> = (0..labels.len()).filter(|&i| labels[i] == class).collect();
        if members.len() == 1 {
            return Err(EvalError::ClassTooSmall {
                label: class,
                count: 1,
            });
        }
        members.shuffle(&mut rng);
        order.extend(members);
    }
    let mut folds = vec![0; labels.len()];
    for (pos, &i) in order.iter().enumerate() {
        folds[i] = pos % k;
    }
    Ok(folds)
}

#[derive(Debug, Clone)]
pub struct FoldResult {
    pub report: EvalReport,
    /// Corpus indices of the held-out tweets.
    pub test_indices: Vec<usize>,
    pub vocabulary: Vocabulary,
}

#[derive(Debug, Clone)]
pub struct CvResult {
    pub params: Params,
    pub k: usize,
    pub seed: u64,
    pub folds: Vec<FoldResult>,
    pub mean: EvalReport,
}

impl CvResult {
    pub fn to_kv(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "k {}", self.k);
        let _ = writeln!(out, "seed {}", self.seed);
        let _ = writeln!(out, "ngram_max {}", self.params.ngram_max);
        let _ = writeln!(out, "min_count {}", self.params.min_count);
        let _ = writeln!(out, "use_priors {}", self.params.use_priors);
        for (i, fold) in self.folds.iter().enumerate() {
            let _ = writeln!(out, "fold.{i}.total {}", fold.report.total);
            let _ = writeln!(out, "fold.{i}.vocab {}", fold.vocabulary.len());
            let _ = writeln!(out, "fold.{i}.macro_f {:.6}", fold.report.macro_f);
        }
        for line in self.mean.to_kv().lines() {
            let _ = writeln!(out, "mean.{line}");
        }
        out
    }
}

fn labels_of(tweets: &[LabeledTweet]) -> Result<Vec<Label>> {
    tweets
        .iter()
        .map(|t| t.label.ok_or_else(|| EvalError::Unlabeled(t.id.clone()).into()))
        .collect()
}

struct Prepared {
    streams: Vec<Vec<AugmentedToken>>,
    labels: Vec<Label>,
    classes: Vec<Label>,
    folds: Vec<usize>,
}

impl Prepared {
    fn new(pipeline: &Pipeline, tweets: &[LabeledTweet], k: usize, seed: u64) -> Result<Self> {
        let labels = labels_of(tweets)?;
        let folds = stratified_folds(&labels, k, seed)?;
        Ok(Prepared {
            streams: pipeline.augment_all(tweets),
            labels,
            classes: present_classes(tweets),
            folds,
        })
    }

    fn run(&self, k: usize, seed: u64, params: Params) -> Result<CvResult> {
        let mut folds = Vec::with_capacity(k);
        for fold in 0..k {
            let (test, train): (Vec<usize>, Vec<usize>) =
                (0..self.labels.len()).partition(|&i| self.folds[i] == fold);
            let train_streams: Vec<&[AugmentedToken]> =
                train.iter().map(|&i| self.streams[i].as_slice()).collect();
            let train_labels: Vec<Label> = train.iter().map(|&i| self.labels[i]).collect();
            let model = fit_streams(&train_streams, &train_labels, &self.classes, params)?;
            let mut predicted = Vec::with_capacity(test.len());
            for &i in &test {
                let v = model.vocab().vectorize(&self.streams[i]);
                predicted.push(model.predict(&v)?);
            }
            let gold: Vec<Label> = test.iter().map(|&i| self.labels[i]).collect();
            folds.push(FoldResult {
                report: EvalReport::evaluate(&gold, &predicted)?,
                test_indices: test,
                vocabulary: model.vocab().clone(),
            });
        }
        let reports: Vec<EvalReport> = folds.iter().map(|f| f.report.clone()).collect();
        Ok(CvResult {
            params,
            k,
            seed,
            mean: EvalReport::mean(&reports)?,
            folds,
        })
    }
}

/// Stratified k-fold cross validation. Vocabulary and model are rebuilt from
/// the training folds of each split; every tweet must be labeled.
pub fn kfold_cv(
    pipeline: &Pipeline,
    tweets: &[LabeledTweet],
    k: usize,
    seed: u64,
    params: Params,
) -> Result<CvResult> {
    Prepared::new(pipeline, tweets, k, seed)?.run(k, seed, params)
}

/// `ngram_max` in {1, 2} crossed with `min_count` in {1, 2, 3}.
pub fn default_grid(use_priors: bool) -> Vec<Params> {
    let mut grid = Vec::new();
    for ngram_max in 1..=2 {
        for min_count in 1..=3 {
            grid.push(Params {
                ngram_max,
                min_count,
                use_priors,
            });
        }
    }
    grid
}

#[derive(Debug, Clone)]
pub struct GridCell {
    pub params: Params,
    /// `None` when some fold's cutoff left an empty vocabulary.
    pub macro_f: Option<f64>,
}

#[derive(Debug, Clone)]
pub struct GridResult {
    pub cells: Vec<GridCell>,
    pub best: Params,
    pub best_macro_f: f64,
}

impl GridResult {
    pub fn to_kv(&self) -> String {
        let mut out = String::new();
        for c in &self.cells {
            let score = c.macro_f.map_or("failed".to_string(), |f| format!("{f:.6}"));
            let _ = writeln!(
                out,
                "cell.n{}.c{}.macro_f {}",
                c.params.ngram_max, c.params.min_count, score
            );
        }
        let _ = writeln!(out, "best.ngram_max {}", self.best.ngram_max);
        let _ = writeln!(out, "best.min_count {}", self.best.min_count);
        let _ = writeln!(out, "best.use_priors {}", self.best.use_priors);
        let _ = writeln!(out, "best.macro_f {:.6}", self.best_macro_f);
        out
    }
}

/// Cross-validate every grid cell on the same folds and keep the best mean
/// macro-F. Ties go to the smaller `ngram_max`, then the smaller `min_count`.
pub fn grid_tune(
    pipeline: &Pipeline,
    tweets: &[LabeledTweet],
    grid: &[Params],
    k: usize,
    seed: u64,
) -> Result<GridResult> {
    if grid.is_empty() {
        return Err(EvalError::EmptyGrid.into());
    }
    let prepared = Prepared::new(pipeline, tweets, k, seed)?;
    let mut cells: Vec<GridCell> = Vec::with_capacity(grid.len());
    for &params in grid {
        let macro_f = match prepared.run(k, seed, params) {
            Ok(r) => Some(r.mean.macro_f),
            Err(Error::Model(ModelError::EmptyVocabulary)) => None,
            Err(e) => return Err(e),
        };
        cells.push(GridCell { params, macro_f });
    }
    let mut ranked: Vec<&GridCell> = cells.iter().filter(|c| c.macro_f.is_some()).collect();
    ranked.sort_by_key(|c| (c.params.ngram_max, c.params.min_count));
    let mut best: Option<(Params, f64)> = None;
    for c in ranked {
        let f = c.macro_f.unwrap();
        if best.is_none_or(|(_, b)| f > b) {
            best = Some((c.params, f));
        }
    }
    let (best, best_macro_f) = best.ok_or(Error::Model(ModelError::EmptyVocabulary))?;
    Ok(GridResult {
        cells,
        best,
        best_macro_f,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use Label::*;

    #[test]
    fn perfect_diagonal() {
        let gold = [Positive; 5];
        let cm = confusion(&gold, &gold).unwrap();
        assert_eq!(cm.counts, [[5, 0, 0], [0, 0, 0], [0, 0, 0]]);
        let r = EvalReport::from_confusion(cm);
        assert_eq!(r.per_class[0], Prf { precision: 1.0, recall: 1.0, f: 1.0 });
        // Classes that never occur score 0 by convention.
        assert_eq!(r.per_class[1], Prf::default());
        assert_eq!(r.per_class[2], Prf::default());
    }

    #[test]
    fn all_classes_perfect() {
        let gold = [Positive, Negative, Neutral, Neutral];
        let r = EvalReport::evaluate(&gold, &gold).unwrap();
        for p in r.per_class {
            assert_eq!(p, Prf { precision: 1.0, recall: 1.0, f: 1.0 });
        }
        assert_eq!(r.macro_f, 1.0);
    }

    #[test]
    fn fully_off_diagonal() {
        let cm = confusion(&[Positive, Negative], &[Negative, Positive]).unwrap();
        assert_eq!(cm.counts, [[0, 1, 0], [1, 0, 0], [0, 0, 0]]);
        assert_eq!(EvalReport::from_confusion(cm).macro_f, 0.0);
    }

    #[test]
    fn confusion_errors() {
        assert_eq!(
            confusion(&[Positive], &[]).unwrap_err(),
            EvalError::LengthMismatch { gold: 1, predicted: 0 }
        );
        assert_eq!(confusion(&[], &[]).unwrap_err(), EvalError::Empty);
    }

    #[test]
    fn hand_prf() {
        // positive: TP=3, FP=1 (a negative predicted positive), FN=2.
        let gold = [Positive, Positive, Positive, Positive, Positive, Negative];
        let pred = [Positive, Positive, Positive, Neutral, Negative, Positive];
        let prf = per_class_prf(&confusion(&gold, &pred).unwrap());
        assert!((prf[0].precision - 0.75).abs() < 1e-12);
        assert!((prf[0].recall - 0.6).abs() < 1e-12);
        assert!((prf[0].f - 2.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn macro_f_arithmetic() {
        assert_eq!(macro_f(0.6, 0.3, 0.6), 0.5);
        assert_eq!(macro_f(1.0, 1.0, 1.0), 1.0);
    }

    #[test]
    fn kv_and_table_render() {
        let r = EvalReport::evaluate(&[Positive, Negative], &[Positive, Positive]).unwrap();
        let kv = r.to_kv();
        assert!(kv.contains("macro_f 0.222222\n"));
        assert!(kv.contains("confusion.negative.positive 1\n"));
        assert!(r.to_table().contains("overall"));
    }

    #[test]
    fn folds_are_stratified_and_balanced() {
        let labels: Vec<Label> = (0..25)
            .map(|i| match i % 5 {
                0 | 1 => Positive,
                2 | 3 => Negative,
                _ => Neutral,
            })
            .collect();
        let folds = stratified_folds(&labels, 5, 3).unwrap();
        for f in 0..5 {
            let members: Vec<Label> = (0..25).filter(|&i| folds[i] == f).map(|i| labels[i]).collect();
            assert_eq!(members.len(), 5);
            assert_eq!(members.iter().filter(|&&l| l == Positive).count(), 2);
            assert_eq!(members.iter().filter(|&&l| l == Neutral).count(), 1);
        }
        assert_eq!(folds, stratified_folds(&labels, 5, 3).unwrap());
        assert_ne!(folds, stratified_folds(&labels, 5, 4).unwrap());
    }

    #[test]
    fn fold_errors() {
        let labels = [Positive, Positive, Negative, Negative];
        assert_eq!(stratified_folds(&labels, 1, 0), Err(EvalError::TooFewFolds(1)));
        assert_eq!(
            stratified_folds(&labels, 5, 0),
            Err(EvalError::TooFewTweets { k: 5, n: 4 })
        );
        assert_eq!(
            stratified_folds(&[Positive, Positive, Neutral], 2, 0),
            Err(EvalError::ClassTooSmall { label: Neutral, count: 1 })
        );
    }

    #[test]
    fn mean_report_is_elementwise() {
        let a = EvalReport::evaluate(&[Positive, Negative], &[Positive, Negative]).unwrap();
        let b = EvalReport::evaluate(&[Positive, Negative], &[Negative, Positive]).unwrap();
        let m = EvalReport::mean(&[a.clone(), b]).unwrap();
        assert!((m.macro_f - a.macro_f / 2.0).abs() < 1e-15);
        assert_eq!(m.total, 4);
        assert_eq!(m.confusion.counts, [[1, 1, 0], [1, 1, 0], [0, 0, 0]]);
        assert_eq!(EvalReport::mean(&[]).unwrap_err(), EvalError::Empty);
    }

    fn arb_labels(n: usize) -> impl Strategy<Value = Vec<Label>> {
        proptest::collection::vec((0..3usize).prop_map(|i| Label::ALL[i]), n)
    }

    proptest! {
        #[test]
        fn confusion_matches_pairwise_count(
            (gold, pred) in (1usize..40).prop_flat_map(|n| (arb_labels(n), arb_labels(n)))
        ) {
            let cm = confusion(&gold, &pred).unwrap();
            prop_assert_eq!(cm.total(), gold.len());
            for g in Label::ALL {
                for p in Label::ALL {
                    let direct = gold.iter().zip(&pred).filter(|(a, b)| **a == g && **b == p).count();
                    prop_assert_eq!(cm.get(g, p), direct);
                }
            }
            let r = EvalReport::from_confusion(cm);
            for p in r.per_class {
                for x in [p.precision, p.recall, p.f] {
                    prop_assert!((0.0..=1.0).contains(&x));
                }
                if p.precision == 0.0 || p.recall == 0.0 {
                    prop_assert_eq!(p.f, 0.0);
                }
            }
            prop_assert_eq!(r.macro_f, (r.per_class[0].f + r.per_class[1].f + r.per_class[2].f) / 3.0);
        }
    }
}
