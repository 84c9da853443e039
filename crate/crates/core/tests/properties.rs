mod support;

use cmsent::corpus::{load_corpus, LabelMode};
use cmsent::eval::{default_grid, grid_tune, kfold_cv, stratified_folds, EvalError};
use cmsent::synthetic::{bigram_signal_corpus, separable_corpus};
use cmsent::{
    ClassScores, Error, Label, NbModel, Params, Pipeline, SparseVector, Vocabulary,
};
use proptest::prelude::*;
use support::Instance;

fn arb_instance() -> impl Strategy<Value = Instance> {
    (2usize..=3, 1usize..=15).prop_flat_map(|(num_classes, vocab_size)| {
        (num_classes..=10).prop_flat_map(move |tweets| {
            (
                proptest::collection::vec(proptest::collection::vec(0u32..=5, vocab_size), tweets),
                proptest::collection::vec(0..num_classes, tweets - num_classes),
            )
                .prop_map(move |(counts, extra)| {
                    let mut labels: Vec<usize> = (0..num_classes).collect();
                    labels.extend(extra);
                    Instance {
                        vocab_size,
                        counts,
                        labels,
                        num_classes,
                    }
                })
        })
    })
}

fn train(inst: &Instance, terms: Vec<String>, use_priors: bool) -> NbModel {
    let vocab = Vocabulary::from_terms(terms.clone(), 1, 1).unwrap();
    let classes = &Label::ALL[..inst.num_classes];
    // Map the instance's column n onto whatever index `terms` gives "t{n}".
    let examples: Vec<(SparseVector, Label)> = inst
        .counts
        .iter()
        .zip(&inst.labels)
        .map(|(row, &l)| {
            let v = SparseVector::from_pairs(row.iter().enumerate().map(|(n, &c)| {
                (vocab.index_of(&format!("t{n:02}")).unwrap() as u32, c)
            }));
            (v, classes[l])
        })
        .collect();
    NbModel::train(&examples, vocab, classes, use_priors).unwrap()
}

fn terms(n: usize) -> Vec<String> {
    (0..n).map(|i| format!("t{i:02}")).collect()
}

fn vector_for(model: &NbModel, test: &[u32]) -> SparseVector {
    SparseVector::from_pairs(test.iter().enumerate().map(|(n, &c)| {
        (model.vocab().index_of(&format!("t{n:02}")).unwrap() as u32, c)
    }))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn agrees_with_rational_oracle(inst in arb_instance(), priors: bool, seed in 0u32..1000) {
        let model = train(&inst, terms(inst.vocab_size), priors);
        let test: Vec<u32> = (0..inst.vocab_size).map(|n| (seed as usize * 7 + n * 3) as u32 % 6).collect();
        let (want, _) = inst.predict(&test, priors);
        prop_assert_eq!(model.predict(&vector_for(&model, &test)).unwrap(), Label::ALL[want]);
    }

    #[test]
    fn vocabulary_order_does_not_matter(inst in arb_instance(), test in proptest::collection::vec(0u32..4, 15)) {
        let forward = train(&inst, terms(inst.vocab_size), true);
        let mut rev = terms(inst.vocab_size);
        rev.reverse();
        let backward = train(&inst, rev, true);
        let test = &test[..inst.vocab_size];
        let a = forward.score(&vector_for(&forward, test)).unwrap();
        let b = backward.score(&vector_for(&backward, test)).unwrap();
        for (x, y) in a.scores.iter().zip(&b.scores) {
            prop_assert!((x - y).abs() <= 1e-9 * x.abs().max(1.0));
        }
        prop_assert_eq!(a.best(), b.best());
    }

    #[test]
    fn shared_offset_leaves_prediction_unchanged(inst in arb_instance(), offset in -1e3f64..1e3) {
        let model = train(&inst, terms(inst.vocab_size), true);
        let test = vec![1u32; inst.vocab_size];
        let s = model.score(&vector_for(&model, &test)).unwrap();
        let shifted = ClassScores {
            classes: s.classes.clone(),
            scores: s.scores.iter().map(|x| x + offset).collect(),
        };
        prop_assert_eq!(s.best(), shifted.best());
    }

    #[test]
    fn one_more_occurrence_adds_that_terms_log_probability(
        inst in arb_instance(),
        term in 0usize..15,
    ) {
        let model = train(&inst, terms(inst.vocab_size), false);
        let term = term % inst.vocab_size;
        let mut test = vec![0u32; inst.vocab_size];
        let before = model.score(&vector_for(&model, &test)).unwrap();
        test[term] = 1;
        let after = model.score(&vector_for(&model, &test)).unwrap();
        let idx = model.vocab().index_of(&format!("t{term:02}")).unwrap();
        for c in 0..model.classes().len() {
            let delta = after.scores[c] - before.scores[c];
            prop_assert!((delta - model.log_word_probs(c)[idx]).abs() < 1e-12);
            // Strictly negative unless the vocabulary has a single term.
            prop_assert!(delta < 0.0 || (inst.vocab_size == 1 && delta == 0.0));
        }
    }

    #[test]
    fn training_is_deterministic(inst in arb_instance()) {
        prop_assert_eq!(train(&inst, terms(inst.vocab_size), true), train(&inst, terms(inst.vocab_size), true));
    }
}

#[test]
fn class_neutral_term_never_changes_prediction() {
    // "even" has the same count and each class the same total mass, so its
    // probability is equal across classes.
    let vocab = Vocabulary::from_terms(vec!["even".into(), "p".into(), "n".into()], 1, 1).unwrap();
    let examples = vec![
        (SparseVector::from_pairs([(0, 2), (1, 3)]), Label::Positive),
        (SparseVector::from_pairs([(0, 2), (2, 3)]), Label::Negative),
    ];
    let model = NbModel::train(&examples, vocab, &[Label::Positive, Label::Negative], true).unwrap();
    assert_eq!(model.log_word_probs(0)[0], model.log_word_probs(1)[0]);
    for base in [[(1, 1)], [(2, 1)], [(2, 0)]] {
        let want = model.predict(&SparseVector::from_pairs(base)).unwrap();
        for extra in 1..20 {
            let v = SparseVector::from_pairs(base.into_iter().chain([(0, extra)]));
            assert_eq!(model.predict(&v).unwrap(), want);
        }
    }
}

#[test]
fn doubling_counts_doubles_likelihood() {
    let vocab = Vocabulary::from_terms(vec!["a".into(), "b".into()], 1, 1).unwrap();
    let examples = vec![
        (SparseVector::from_pairs([(0, 3), (1, 1)]), Label::Positive),
        (SparseVector::from_pairs([(1, 2)]), Label::Negative),
        (SparseVector::from_pairs([(0, 1), (1, 1)]), Label::Neutral),
    ];
    let model = NbModel::train(&examples, vocab, &Label::ALL, false).unwrap();
    let once = model.score(&SparseVector::from_pairs([(0, 2)])).unwrap();
    let twice = model.score(&SparseVector::from_pairs([(0, 4)])).unwrap();
    for (a, b) in once.scores.iter().zip(&twice.scores) {
        assert!((2.0 * a - b).abs() < 1e-12);
    }
    assert_eq!(once.best(), twice.best());
}

#[test]
fn leave_one_out() {
    let corpus = load_corpus(
        "a\tpositive\tgood/EN x/EN\nb\tpositive\tgood/EN y/EN\nc\tnegative\tbad/EN x/EN\nd\tnegative\tbad/EN y/EN\ne\tneutral\tok/EN x/EN\nf\tneutral\tok/EN y/EN\n",
        LabelMode::Labeled,
    )
    .unwrap();
    let params = Params { min_count: 1, ..Params::default() };
    let cv = kfold_cv(&Pipeline::default(), &corpus, corpus.len(), 1, params).unwrap();
    assert_eq!(cv.folds.len(), 6);
    assert!(cv.folds.iter().all(|f| f.report.total == 1 && f.test_indices.len() == 1));
    assert_eq!(cv.mean.total, 6);
}

#[test]
fn two_fold_on_four_tweets() {
    let corpus = load_corpus(
        "a\tpositive\tgood/EN\nb\tpositive\tgreat/EN\nc\tnegative\tbad/EN\nd\tnegative\tawful/EN\n",
        LabelMode::Labeled,
    )
    .unwrap();
    let params = Params { min_count: 1, ..Params::default() };
    let cv = kfold_cv(&Pipeline::default(), &corpus, 2, 0, params).unwrap();
    assert_eq!(cv.folds.len(), 2);
    for f in &cv.folds {
        assert_eq!(f.report.total, 2);
        let labels: Vec<_> = f.test_indices.iter().map(|&i| corpus[i].label.unwrap()).collect();
        assert!(labels.contains(&Label::Positive) && labels.contains(&Label::Negative));
    }
}

#[test]
fn same_seed_same_folds_and_scores() {
    let corpus = separable_corpus(30, 4, false);
    let labels: Vec<Label> = corpus.iter().map(|t| t.label.unwrap()).collect();
    assert_eq!(stratified_folds(&labels, 10, 11).unwrap(), stratified_folds(&labels, 10, 11).unwrap());
    let p = Pipeline::default();
    let a = kfold_cv(&p, &corpus, 10, 11, Params::default()).unwrap();
    let b = kfold_cv(&p, &corpus, 10, 11, Params::default()).unwrap();
    assert_eq!(a.mean.macro_f.to_bits(), b.mean.macro_f.to_bits());
    assert_eq!(a.to_kv(), b.to_kv());
}

#[test]
fn separable_corpus_scores_perfectly() {
    let corpus = separable_corpus(100, 9, true);
    let cv = kfold_cv(&Pipeline::default(), &corpus, 10, 1, Params::default()).unwrap();
    assert_eq!(cv.mean.macro_f, 1.0);
    for fold in &cv.folds {
        assert_eq!(fold.report.macro_f, 1.0);
    }
}

#[test]
fn cv_rejects_bad_inputs() {
    let corpus = load_corpus("a\tpositive\tgood/EN\nb\tnegative\tbad/EN\nc\tnegative\tbad/EN\n", LabelMode::Labeled).unwrap();
    let err = kfold_cv(&Pipeline::default(), &corpus, 2, 0, Params::default()).unwrap_err();
    assert!(matches!(err, Error::Eval(EvalError::ClassTooSmall { label: Label::Positive, count: 1 })));
    let unlabeled = load_corpus("a\tgood/EN\nb\tbad/EN\n", LabelMode::Unlabeled).unwrap();
    let err = kfold_cv(&Pipeline::default(), &unlabeled, 2, 0, Params::default()).unwrap_err();
    assert!(matches!(err, Error::Eval(EvalError::Unlabeled(_))));
}

#[test]
fn single_cell_grid() {
    let corpus = separable_corpus(20, 2, true);
    let cell = Params { ngram_max: 1, min_count: 3, use_priors: false };
    let r = grid_tune(&Pipeline::default(), &corpus, &[cell], 5, 0).unwrap();
    assert_eq!(r.best, cell);
    assert_eq!(r.cells.len(), 1);
}

#[test]
fn tuner_picks_bigrams_when_signal_is_in_word_order() {
    let corpus = bigram_signal_corpus(40, 6);
    let r = grid_tune(&Pipeline::default(), &corpus, &default_grid(true), 10, 0).unwrap();
    assert_eq!(r.best.ngram_max, 2, "{}", r.to_kv());
    let unigram_best = r
        .cells
        .iter()
        .filter(|c| c.params.ngram_max == 1)
        .filter_map(|c| c.macro_f)
        .fold(0.0, f64::max);
    assert!(r.best_macro_f > unigram_best + 0.3, "{}", r.to_kv());
}

#[test]
fn tie_break_prefers_smaller_parameters() {
    // Every cell is perfect on this corpus, so the first cell wins.
    let mut text = String::new();
    for i in 0..15 {
        for label in Label::ALL {
            text.push_str(&format!("{label}{i}\t{label}\tmark{label}/EN common/HI\n"));
        }
    }
    let corpus = load_corpus(&text, LabelMode::Labeled).unwrap();
    let r = grid_tune(&Pipeline::default(), &corpus, &default_grid(true), 5, 0).unwrap();
    assert!(r.cells.iter().all(|c| c.macro_f == Some(1.0)));
    assert_eq!((r.best.ngram_max, r.best.min_count), (1, 1));
}
