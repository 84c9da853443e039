//! Model file format, version 1.
//!
//! ```text
//! cmsent-model 1
//! ngram_max <n>
//! min_count <k>
//! use_priors <true|false>
//! classes <label> <label> ...
//! vocab <m>
//! <term 0>
//! ...
//! <term m-1>
//! class <label> <log prior> <token mass>      (one line per class)
//! probs
//! <log p(term 0|class 0)> <log p(term 0|class 1)> ...   (m lines)
//! sha256 <64 hex digits>
//! ```
//!
//! Floating point values are the 16-hex-digit IEEE-754 bit patterns of the
//! `f64`, so a round trip is bit-exact. The digest covers every byte before
//! the `sha256` line.

use std::fmt::Write as _;

use sha2::{Digest, Sha256};

use super::{ModelError, NbModel};
use crate::features::Vocabulary;
use crate::label::Label;

pub const MAGIC: &str = "cmsent-model";
pub const FORMAT_VERSION: &str = "1";

fn hex_f64(x: f64) -> String {
    format!("{:016x}", x.to_bits())
}

fn digest(body: &str) -> String {
    Sha256::digest(body.as_bytes())
        .iter()
        .fold(String::with_capacity(64), |mut s, b| {
            let _ = write!(s, "{b:02x}");
            s
        })
}

pub(super) fn write(model: &NbModel) -> String {
    let mut out = String::new();
    let vocab = &model.vocab;
    let _ = writeln!(out, "{MAGIC} {FORMAT_VERSION}");
    let _ = writeln!(out, "ngram_max {}", vocab.ngram_max());
    let _ = writeln!(out, "min_count {}", vocab.min_count());
    let _ = writeln!(out, "use_priors {}", model.use_priors);
    let classes: Vec<&str> = model.classes.iter().map(|c| c.as_str()).collect();
    let _ = writeln!(out, "classes {}", classes.join(" "));
    let _ = writeln!(out, "vocab {}", vocab.len());
    for term in vocab.terms() {
        out.push_str(term);
        out.push('\n');
    }
    for (c, label) in model.classes.iter().enumerate() {
        let _ = writeln!(
            out,
            "class {} {} {}",
            label,
            hex_f64(model.log_prior[c]),
            model.class_total_count[c]
        );
    }
    out.push_str("probs\n");
    for n in 0..vocab.len() {
        let row: Vec<String> = model.log_word_prob.iter().map(|r| hex_f64(r[n])).collect();
        out.push_str(&row.join(" "));
        out.push('\n');
    }
    let sum = digest(&out);
    let _ = writeln!(out, "sha256 {sum}");
    out
}

struct Lines<'a> {
    iter: std::iter::Enumerate<std::str::Split<'a, char>>,
    last: usize,
}

impl<'a> Lines<'a> {
    fn next(&mut self) -> Result<(usize, &'a str), ModelError> {
        let (i, line) = self.iter.next().ok_or(ModelError::Truncated)?;
        self.last = i + 1;
        Ok((i + 1, line))
    }

    fn field(&mut self, key: &str) -> Result<(usize, &'a str), ModelError> {
        let (n, line) = self.next()?;
        match line.split_once(' ') {
            Some((k, v)) if k == key => Ok((n, v)),
            _ => Err(malformed(n, format!("expected `{key} ...`"))),
        }
    }
}

fn malformed(line: usize, message: impl Into<String>) -> ModelError {
    ModelError::Malformed {
        line,
        message: message.into(),
    }
}

fn parse_num<T: std::str::FromStr>(line: usize, s: &str, what: &str) -> Result<T, ModelError> {
    s.parse()
        .map_err(|_| malformed(line, format!("invalid {what} {s:?}")))
}

fn parse_f64(line: usize, s: &str) -> Result<f64, ModelError> {
    if s.len() != 16 {
        return Err(malformed(line, format!("invalid float {s:?}")));
    }
    u64::from_str_radix(s, 16)
        .map(f64::from_bits)
        .map_err(|_| malformed(line, format!("invalid float {s:?}")))
}

pub(super) fn read(text: &str) -> Result<NbModel, ModelError> {
    let first = text.split('\n').next().unwrap_or("");
    let version = match first.trim_end_matches('\r').split_once(' ') {
        Some((MAGIC, v)) => v,
        _ => return Err(ModelError::BadMagic),
    };
    if version != FORMAT_VERSION {
        return Err(ModelError::UnsupportedVersion(version.to_string()));
    }

    let trailer_at = text
        .trim_end_matches('\n')
        .rfind('\n')
        .map(|i| i + 1)
        .ok_or(ModelError::Truncated)?;
    let (body, trailer) = text.split_at(trailer_at);
    let recorded = match trailer.trim_end().split_once(' ') {
        Some(("sha256", sum)) => sum,
        _ => return Err(ModelError::Truncated),
    };
    if digest(body) != recorded {
        return Err(ModelError::Checksum);
    }

    let mut lines = Lines {
        iter: body.split('\n').enumerate(),
        last: 0,
    };
    lines.next()?;
    let (n, v) = lines.field("ngram_max")?;
    let ngram_max: usize = parse_num(n, v, "ngram_max")?;
    let (n, v) = lines.field("min_count")?;
    let min_count: usize = parse_num(n, v, "min_count")?;
    let (n, v) = lines.field("use_priors")?;
    let use_priors: bool = parse_num(n, v, "use_priors flag")?;
    let (n, v) = lines.field("classes")?;
    let classes = v
        .split(' ')
        .map(|s| s.parse::<Label>().map_err(|_| malformed(n, format!("unknown class {s:?}"))))
        .collect::<Result<Vec<_>, _>>()?;
    if classes.is_empty() || classes.windows(2).any(|w| w[0] >= w[1]) {
        return Err(malformed(n, "classes must be distinct and in canonical order"));
    }
    let (n, v) = lines.field("vocab")?;
    let m: usize = parse_num(n, v, "vocabulary size")?;
    let mut terms = Vec::with_capacity(m);
    for _ in 0..m {
        terms.push(lines.next()?.1.to_string());
    }
    let vocab = Vocabulary::from_terms(terms, ngram_max, min_count)
        .map_err(|e| malformed(lines.last, e.to_string()))?;

    let mut log_prior = Vec::with_capacity(classes.len());
    let mut class_total_count = Vec::with_capacity(classes.len());
    for &label in &classes {
        let (n, v) = lines.field("class")?;
        let parts: Vec<&str> = v.split(' ').collect();
        match parts.as_slice() {
            [name, prior, mass] if *name == label.as_str() => {
                log_prior.push(parse_f64(n, prior)?);
                class_total_count.push(parse_num(n, mass, "token mass")?);
            }
            _ => return Err(malformed(n, format!("expected `class {label} <prior> <mass>`"))),
        }
    }
    let (n, line) = lines.next()?;
    if line != "probs" {
        return Err(malformed(n, "expected `probs`"));
    }
    let mut log_word_prob = vec![Vec::with_capacity(m); classes.len()];
    for _ in 0..m {
        let (n, line) = lines.next()?;
        let cells: Vec<&str> = line.split(' ').collect();
        if cells.len() != classes.len() {
            return Err(malformed(n, format!("expected {} columns", classes.len())));
        }
        for (c, cell) in cells.iter().enumerate() {
            log_word_prob[c].push(parse_f64(n, cell)?);
        }
    }
    match lines.iter.next() {
        Some((_, "")) | None => {}
        Some((i, _)) => return Err(malformed(i + 1, "unexpected trailing content")),
    }

    Ok(NbModel {
        classes,
        log_prior,
        log_word_prob,
        class_total_count,
        vocab,
        use_priors,
    })
}
