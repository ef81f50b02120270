//! Term embeddings for similarity pruning.

use crate::provider::ProviderError;

/// Dimension of the built-in embedding.
pub const EMBEDDING_DIM: usize = 256;

pub trait Embedder: Send + Sync {
    fn embed(&self, term: &str) -> Result<Vec<f32>, ProviderError>;
}

/// Bag of hashed character trigrams over the lowercased term, padded with a
/// space on each side, L2-normalized.
#[derive(Debug, Clone, Copy, Default)]
pub struct TrigramEmbedder;

impl Embedder for TrigramEmbedder {
    fn embed(&self, term: &str) -> Result<Vec<f32>, ProviderError> {
        if term.is_empty() {
            return Err(ProviderError::InvalidInput(
                "cannot embed an empty term".into(),
            ));
        }
        let padded: Vec<char> = std::iter::once(' ')
            .chain(term.to_lowercase().chars())
            .chain(std::iter::once(' '))
            .collect();
        let mut vector = vec![0f32; EMBEDDING_DIM];
        let mut buf = [0u8; 12];
        for tri in padded.windows(3) {
            let mut len = 0;
            for c in tri {
                len += c.encode_utf8(&mut buf[len..]).len();
            }
            let bucket = (fnv1a(&buf[..len]) % EMBEDDING_DIM as u64) as usize;
            vector[bucket] += 1.0;
        }
        let norm = vector.iter().map(|v| v * v).sum::<f32>().sqrt();
        for v in &mut vector {
            *v /= norm;
        }
        Ok(vector)
    }
}

fn fnv1a(bytes: &[u8]) -> u64 {
    const OFFSET: u64 = 0xcbf2_9ce4_8422_2325;
    const PRIME: u64 = 0x0000_0100_0000_01b3;
    bytes
        .iter()
        .fold(OFFSET, |h, &b| (h ^ u64::from(b)).wrapping_mul(PRIME))
}

/// Cosine similarity; 0 when either vector is zero or dimensions differ.
pub fn cosine(a: &[f32], b: &[f32]) -> f64 {
    if a.len() != b.len() {
        return 0.0;
    }
    let (mut dot, mut na, mut nb) = (0f64, 0f64, 0f64);
    for (x, y) in a.iter().zip(b) {
        let (x, y) = (f64::from(*x), f64::from(*y));
        dot += x * y;
        na += x * x;
        nb += y * y;
    }
    if na == 0.0 || nb == 0.0 {
        return 0.0;
    }
    (dot / (na.sqrt() * nb.sqrt())).clamp(-1.0, 1.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deterministic_and_normalized() {
        let a = TrigramEmbedder.embed("actor").unwrap();
        let b = TrigramEmbedder.embed("actor").unwrap();
        assert_eq!(a, b);
        assert_eq!(a.len(), EMBEDDING_DIM);
        let norm: f32 = a.iter().map(|v| v * v).sum::<f32>().sqrt();
        assert!((norm - 1.0).abs() < 1e-6);
        assert_eq!(TrigramEmbedder.embed("ACTOR").unwrap(), a);
    }

    #[test]
    fn plural_is_closer_than_noise() {
        let actor = TrigramEmbedder.embed("actor").unwrap();
        let actors = TrigramEmbedder.embed("actors").unwrap();
        let zzz = TrigramEmbedder.embed("zzz").unwrap();
        assert!(cosine(&actor, &actors) > cosine(&actor, &zzz));
    }

    #[test]
    fn empty_term_is_rejected() {
        assert!(matches!(
            TrigramEmbedder.embed(""),
            Err(ProviderError::InvalidInput(_))
        ));
    }

    #[test]
    fn fnv_reference_values() {
        assert_eq!(fnv1a(b""), 0xcbf2_9ce4_8422_2325);
        assert_eq!(fnv1a(b"a"), 0xaf63_dc4c_8601_ec8c);
    }

    #[test]
    fn cosine_edge_cases() {
        assert_eq!(cosine(&[0.0, 0.0], &[1.0, 0.0]), 0.0);
        assert_eq!(cosine(&[1.0], &[1.0, 0.0]), 0.0);
        assert!((cosine(&[1.0, 1.0], &[2.0, 2.0]) - 1.0).abs() < 1e-12);
    }
}
