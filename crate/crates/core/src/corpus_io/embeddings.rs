//! The AXEB v1 binary embedding container.
//!
//! Layout, all integers little-endian:
//!
//! ```text
//! "AXEB" | u16 version = 1 | u32 dim | u32 n_sentences
//! repeated n_sentences times: u32 n_tokens | n_tokens * dim f32 (LE)
//! ```
//!
//! Values are stored as 32-bit floats and widened to `f64` on load.

use std::fs;
use std::path::Path;

use crate::corpus_io::TokenizedSentence;
use crate::error::{Error, Result};

pub const AXEB_MAGIC: [u8; 4] = *b"AXEB";
pub const AXEB_VERSION: u16 = 1;

/// Row-major matrix of token vectors for one sentence.
#[derive(Clone, Debug, PartialEq)]
pub struct SentenceMatrix {
    dim: usize,
    data: Vec<f64>,
}

impl SentenceMatrix {
    pub fn from_rows(dim: usize, rows: &[Vec<f64>]) -> Result<Self> {
        let mut data = Vec::with_capacity(rows.len() * dim);
        for row in rows {
            if row.len() != dim {
                return Err(Error::DimensionMismatch(dim, row.len()));
            }
            data.extend_from_slice(row);
        }
        Ok(SentenceMatrix { dim, data })
    }

    pub fn rows(&self) -> usize {
        self.data.len().checked_div(self.dim).unwrap_or(0)
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.dim..(i + 1) * self.dim]
    }

    pub fn iter_rows(&self) -> impl ExactSizeIterator<Item = &[f64]> + '_ {
        self.data.chunks_exact(self.dim)
    }
}

/// Per-token contextual vectors aligned 1:1 with a corpus.
#[derive(Clone, Debug, PartialEq)]
pub struct TokenEmbeddingStore {
    dim: usize,
    sentences: Vec<SentenceMatrix>,
}

impl TokenEmbeddingStore {
    /// Builds a store from nested rows (`sentences[k][i]` is token `i` of sentence `k`).
    pub fn from_nested(dim: usize, sentences: &[Vec<Vec<f64>>]) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidEmbeddings("dim must be positive".into()));
        }
        let sentences = sentences
            .iter()
            .map(|rows| SentenceMatrix::from_rows(dim, rows))
            .collect::<Result<Vec<_>>>()?;
        Ok(TokenEmbeddingStore { dim, sentences })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.sentences.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sentences.is_empty()
    }

    pub fn sentence(&self, k: usize) -> &SentenceMatrix {
        &self.sentences[k]
    }

    pub fn sentences(&self) -> &[SentenceMatrix] {
        &self.sentences
    }

    /// Checks sentence and row counts against the companion corpus.
    pub fn check_alignment(&self, corpus: &[TokenizedSentence]) -> Result<()> {
        for (k, sentence) in corpus.iter().enumerate() {
            let found = self.sentences.get(k).map_or(0, SentenceMatrix::rows);
            if found != sentence.len() || k >= self.sentences.len() {
                return Err(Error::RowCountMismatch {
                    index: k,
                    id: sentence.id.clone(),
                    expected: sentence.len(),
                    found,
                });
            }
        }
        if self.sentences.len() > corpus.len() {
            return Err(Error::InvalidEmbeddings(format!(
                "{} embedding blocks but only {} corpus sentences",
                self.sentences.len(),
                corpus.len()
            )));
        }
        Ok(())
    }
}

struct Cursor<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn take(&mut self, n: usize) -> Result<&'a [u8]> {
        if self.bytes.len() - self.pos < n {
            return Err(Error::InvalidEmbeddings(format!(
                "truncated file at byte {}",
                self.pos
            )));
        }
        let slice = &self.bytes[self.pos..self.pos + n];
        self.pos += n;
        Ok(slice)
    }

    fn u16(&mut self) -> Result<u16> {
        Ok(u16::from_le_bytes(self.take(2)?.try_into().unwrap()))
    }

    fn u32(&mut self) -> Result<u32> {
        Ok(u32::from_le_bytes(self.take(4)?.try_into().unwrap()))
    }
}

/// Decodes an AXEB byte buffer without reference to a corpus.
pub fn decode_embeddings(bytes: &[u8]) -> Result<TokenEmbeddingStore> {
    let mut cur = Cursor { bytes, pos: 0 };
    if bytes.len() < 4 || cur.take(4)? != AXEB_MAGIC {
        return Err(Error::UnrecognizedFormat("missing AXEB magic bytes".into()));
    }
    let version = cur.u16()?;
    if version != AXEB_VERSION {
        return Err(Error::UnrecognizedFormat(format!(
            "unsupported AXEB version {version}"
        )));
    }
    let dim = cur.u32()? as usize;
    if dim == 0 {
        return Err(Error::InvalidEmbeddings("dim = 0".into()));
    }
    let n_sentences = cur.u32()? as usize;
    let mut sentences = Vec::with_capacity(n_sentences.min(1 << 20));
    for k in 0..n_sentences {
        let n_tokens = cur.u32()? as usize;
        let raw = cur.take(n_tokens * dim * 4)?;
        let data: Vec<f64> = raw
            .chunks_exact(4)
            .map(|b| f32::from_le_bytes(b.try_into().unwrap()) as f64)
            .collect();
        if let Some(pos) = data.iter().position(|v| !v.is_finite()) {
            return Err(Error::InvalidEmbeddings(format!(
                "non-finite value (NaN/Inf) in sentence block {k}, token {}",
                pos / dim + 1
            )));
        }
        sentences.push(SentenceMatrix { dim, data });
    }
    if cur.pos != bytes.len() {
        return Err(Error::InvalidEmbeddings(format!(
            "{} trailing bytes after the last sentence block",
            bytes.len() - cur.pos
        )));
    }
    Ok(TokenEmbeddingStore { dim, sentences })
}

/// Reads an AXEB file and checks it against the corpus it accompanies.
pub fn read_embeddings(
    path: impl AsRef<Path>,
    corpus: &[TokenizedSentence],
) -> Result<TokenEmbeddingStore> {
    let path = path.as_ref();
    let bytes = fs::read(path).map_err(|e| Error::io(path, e))?;
    let store = decode_embeddings(&bytes)?;
    store.check_alignment(corpus)?;
    Ok(store)
}

pub fn encode_embeddings(store: &TokenEmbeddingStore) -> Vec<u8> {
    let total: usize = store.sentences.iter().map(|s| s.data.len()).sum();
    let mut out = Vec::with_capacity(14 + 4 * store.sentences.len() + 4 * total);
    out.extend_from_slice(&AXEB_MAGIC);
    out.extend_from_slice(&AXEB_VERSION.to_le_bytes());
    out.extend_from_slice(&(store.dim as u32).to_le_bytes());
    out.extend_from_slice(&(store.sentences.len() as u32).to_le_bytes());
    for s in &store.sentences {
        out.extend_from_slice(&(s.rows() as u32).to_le_bytes());
        for v in &s.data {
            out.extend_from_slice(&(*v as f32).to_le_bytes());
        }
    }
    out
}

pub fn write_embeddings(path: impl AsRef<Path>, store: &TokenEmbeddingStore) -> Result<()> {
    let path = path.as_ref();
    fs::write(path, encode_embeddings(store)).map_err(|e| Error::io(path, e))
}
