//! Google-BLEU (GLEU): the minimum of n-gram precision and recall over all
//! orders 1..=max_n, with counts pooled across pairs at corpus level.

use std::collections::HashMap;
use std::ops::AddAssign;

use thiserror::Error;

use crate::prompt::split_tokens;

pub const DEFAULT_MAX_ORDER: usize = 4;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GleuError {
    #[error("reference has no tokens")]
    EmptyReference,
    #[error("n-gram order must be at least 1")]
    ZeroOrder,
}

/// Matched and total n-gram counts for one pair or a pooled corpus.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct GleuCounts {
    pub overlap: usize,
    pub candidate_total: usize,
    pub reference_total: usize,
}

impl GleuCounts {
    pub fn score(&self) -> f64 {
        if self.candidate_total == 0 || self.reference_total == 0 {
            return 0.0;
        }
        let precision = self.overlap as f64 / self.candidate_total as f64;
        let recall = self.overlap as f64 / self.reference_total as f64;
        precision.min(recall)
    }
}

impl AddAssign for GleuCounts {
    fn add_assign(&mut self, rhs: Self) {
        self.overlap += rhs.overlap;
        self.candidate_total += rhs.candidate_total;
        self.reference_total += rhs.reference_total;
    }
}

fn ngram_counts<'a, 't>(
    tokens: &'a [&'t str],
    max_n: usize,
) -> (HashMap<&'a [&'t str], usize>, usize) {
    let mut counts: HashMap<&[&str], usize> = HashMap::new();
    let mut total = 0;
    for n in 1..=max_n.min(tokens.len()) {
        for gram in tokens.windows(n) {
            *counts.entry(gram).or_default() += 1;
            total += 1;
        }
    }
    (counts, total)
}

/// Counts for a token-level pair.
pub fn gleu_counts_tokens(
    candidate: &[&str],
    reference: &[&str],
    max_n: usize,
) -> Result<GleuCounts, GleuError> {
    if max_n == 0 {
        return Err(GleuError::ZeroOrder);
    }
    if reference.is_empty() {
        return Err(GleuError::EmptyReference);
    }
    let (cand, candidate_total) = ngram_counts(candidate, max_n);
    let (refs, reference_total) = ngram_counts(reference, max_n);
    let overlap = cand
        .iter()
        .map(|(gram, c)| refs.get(gram).map_or(0, |r| (*c).min(*r)))
        .sum();
    Ok(GleuCounts {
        overlap,
        candidate_total,
        reference_total,
    })
}

pub fn gleu_counts(
    candidate: &str,
    reference: &str,
    max_n: usize,
) -> Result<GleuCounts, GleuError> {
    gleu_counts_tokens(&split_tokens(candidate), &split_tokens(reference), max_n)
}

/// Sentence-level GLEU under the default tokenizer.
pub fn gleu(candidate: &str, reference: &str, max_n: usize) -> Result<f64, GleuError> {
    Ok(gleu_counts(candidate, reference, max_n)?.score())
}

/// Corpus-level GLEU: counts are summed over pairs before the final min.
pub fn corpus_gleu<'a, I>(pairs: I, max_n: usize) -> Result<f64, GleuError>
where
    I: IntoIterator<Item = (&'a str, &'a str)>,
{
    let mut pooled = GleuCounts::default();
    for (candidate, reference) in pairs {
        pooled += gleu_counts(candidate, reference, max_n)?;
    }
    Ok(pooled.score())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identical_is_one() {
        assert_eq!(gleu("MATCH (n) RETURN n", "MATCH (n) RETURN n", 4), Ok(1.0));
        assert_eq!(gleu("x", "x", 4), Ok(1.0));
    }

    #[test]
    fn disjoint_is_zero() {
        assert_eq!(gleu("alpha beta", "gamma delta", 4), Ok(0.0));
        assert_eq!(gleu("", "gamma", 4), Ok(0.0));
    }

    #[test]
    fn empty_reference_is_an_error() {
        assert_eq!(gleu("x", "   ", 4), Err(GleuError::EmptyReference));
        assert_eq!(gleu("x", "x", 0), Err(GleuError::ZeroOrder));
    }

    #[test]
    fn prefix_candidate() {
        // Candidate tokens MATCH ( n ) RETURN n are a prefix of the 8 reference
        // tokens: all 6+5+4+3 = 18 candidate n-grams match, the reference has
        // 8+7+6+5 = 26, so the score is 18/26.
        let c = gleu_counts("MATCH (n) RETURN n", "MATCH (n) RETURN n.name", 4).unwrap();
        assert_eq!(
            c,
            GleuCounts {
                overlap: 18,
                candidate_total: 18,
                reference_total: 26
            }
        );
        assert_eq!(c.score(), 18.0 / 26.0);
    }
}
