#![allow(dead_code)]

//! Exact-rational Multinomial Naive Bayes, written directly from the
//! class-conditional product and the add-one estimate without touching the
//! library's training or scoring code.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

/// `counts[t][n]` is the count of term `n` in training tweet `t`.
#[derive(Debug, Clone, PartialEq)]
pub struct Instance {
    pub vocab_size: usize,
    pub counts: Vec<Vec<u32>>,
    /// Class index (0..num_classes) for each training tweet.
    pub labels: Vec<usize>,
    pub num_classes: usize,
}

pub fn rat(n: u64, d: u64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

impl Instance {
    /// `(1 + Fr[n][c]) / (N + sum_x Fr[x][c])`.
    pub fn word_prob(&self, class: usize, term: usize) -> BigRational {
        let mut fr_n = 0u64;
        let mut fr_all = 0u64;
        for (row, &l) in self.counts.iter().zip(&self.labels) {
            if l == class {
                fr_n += row[term] as u64;
                fr_all += row.iter().map(|&c| c as u64).sum::<u64>();
            }
        }
        rat(1 + fr_n, self.vocab_size as u64 + fr_all)
    }

    pub fn prior(&self, class: usize) -> BigRational {
        let n = self.labels.iter().filter(|&&l| l == class).count() as u64;
        rat(n, self.labels.len() as u64)
    }

    /// Unnormalized posterior `prior * prod_n P(w_n|c)^f_n`.
    pub fn posterior(&self, class: usize, test: &[u32], use_priors: bool) -> BigRational {
        let mut p = if use_priors {
            self.prior(class)
        } else {
            BigRational::one()
        };
        for (n, &f) in test.iter().enumerate() {
            let w = self.word_prob(class, n);
            for _ in 0..f {
                p *= &w;
            }
        }
        p
    }

    /// Argmax class index; the first maximal class wins.
    pub fn predict(&self, test: &[u32], use_priors: bool) -> (usize, bool) {
        let posts: Vec<BigRational> = (0..self.num_classes)
            .map(|c| self.posterior(c, test, use_priors))
            .collect();
        let mut best = 0;
        for c in 1..posts.len() {
            if posts[c] > posts[best] {
                best = c;
            }
        }
        let tied = posts
            .iter()
            .enumerate()
            .any(|(c, p)| c != best && *p == posts[best]);
        (best, tied)
    }

    pub fn mass(&self, class: usize) -> BigRational {
        (0..self.vocab_size)
            .map(|n| self.word_prob(class, n))
            .fold(BigRational::zero(), |a, b| a + b)
    }
}

pub fn to_f64(r: &BigRational) -> f64 {
    use num_traits::ToPrimitive;
    r.to_f64().unwrap()
}

/// Print a one-line verdict for an acceptance criterion and fail the test if
/// it did not hold.
pub fn verdict(id: &str, name: &str, ok: bool, detail: impl AsRef<str>) {
    let tag = if ok { "PASS" } else { "FAIL" };
    println!("[{tag}] {id}: {name} ({})", detail.as_ref());
    assert!(ok, "{id} failed: {}", detail.as_ref());
}
