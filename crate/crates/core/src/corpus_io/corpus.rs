use std::collections::HashSet;
use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// The seventeen Universal Dependencies part-of-speech tags.
pub const UD_TAGS: [&str; 17] = [
    "ADJ", "ADP", "ADV", "AUX", "CCONJ", "DET", "INTJ", "NOUN", "NUM", "PART", "PRON", "PROPN",
    "PUNCT", "SCONJ", "SYM", "VERB", "X",
];

pub fn is_ud_tag(tag: &str) -> bool {
    UD_TAGS.contains(&tag)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Token {
    pub form: String,
    pub upos: String,
    /// 1-based index of the governor; 0 marks the root.
    pub head: usize,
}

impl Token {
    pub fn new(form: impl Into<String>, upos: impl Into<String>, head: usize) -> Self {
        Token {
            form: form.into(),
            upos: upos.into(),
            head,
        }
    }
}

/// One parsed sentence, the unit of prediction.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TokenizedSentence {
    pub id: String,
    pub text: String,
    pub tokens: Vec<Token>,
}

impl TokenizedSentence {
    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }

    /// Zero-based index of the root token.
    pub fn root(&self) -> Option<usize> {
        self.tokens.iter().position(|t| t.head == 0)
    }

    /// Zero-based index of the governor of token `i`, `None` for the root.
    pub fn governor(&self, i: usize) -> Option<usize> {
        match self.tokens[i].head {
            0 => None,
            h => Some(h - 1),
        }
    }

    /// Checks the per-sentence invariants.
    pub fn validate(&self) -> Result<()> {
        let invalid = |message: String| Error::InvalidSentence {
            id: self.id.clone(),
            message,
        };
        if self.tokens.is_empty() {
            return Err(invalid("token list is empty".into()));
        }
        let n = self.tokens.len();
        let mut roots = 0;
        for (i, tok) in self.tokens.iter().enumerate() {
            if tok.head > n {
                return Err(invalid(format!(
                    "head out of range: token {} has head {} but the sentence has {n} tokens",
                    i + 1,
                    tok.head
                )));
            }
            if tok.head == i + 1 {
                return Err(invalid(format!("token {} is its own head", i + 1)));
            }
            if tok.head == 0 {
                roots += 1;
            }
            if !is_ud_tag(&tok.upos) {
                return Err(invalid(format!(
                    "token {} has unknown UPOS tag {:?}",
                    i + 1,
                    tok.upos
                )));
            }
        }
        if roots != 1 {
            return Err(invalid(format!("expected exactly one root, found {roots}")));
        }
        Ok(())
    }
}

/// Validates a whole corpus: every sentence plus id uniqueness.
pub fn validate_corpus(corpus: &[TokenizedSentence]) -> Result<()> {
    let mut seen = HashSet::with_capacity(corpus.len());
    for sentence in corpus {
        sentence.validate()?;
        if !seen.insert(sentence.id.as_str()) {
            return Err(Error::DuplicateId(sentence.id.clone()));
        }
    }
    Ok(())
}

/// Reads a corpus JSONL file, one sentence per line. Blank lines are skipped.
pub fn read_corpus(path: impl AsRef<Path>) -> Result<Vec<TokenizedSentence>> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    let mut corpus = Vec::new();
    let mut seen = HashSet::new();
    for (lineno, line) in BufReader::new(file).lines().enumerate() {
        let line = line.map_err(|e| Error::io(path, e))?;
        if line.trim().is_empty() {
            continue;
        }
        let sentence: TokenizedSentence =
            serde_json::from_str(&line).map_err(|e| Error::MalformedLine {
                path: path.to_path_buf(),
                line: lineno + 1,
                message: e.to_string(),
            })?;
        sentence.validate()?;
        if !seen.insert(sentence.id.clone()) {
            return Err(Error::DuplicateId(sentence.id));
        }
        corpus.push(sentence);
    }
    Ok(corpus)
}

pub fn write_corpus(path: impl AsRef<Path>, corpus: &[TokenizedSentence]) -> Result<()> {
    let path = path.as_ref();
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    let mut out = BufWriter::new(file);
    for sentence in corpus {
        serde_json::to_writer(&mut out, sentence)?;
        out.write_all(b"\n").map_err(|e| Error::io(path, e))?;
    }
    out.flush().map_err(|e| Error::io(path, e))
}
