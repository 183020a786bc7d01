//! Symbols, finite words and cylinders.
//!
//! Symbols are plain indices into the alphabet of the owning subshift. Each
//! shift supplies a name table for the text form, e.g. `a1 a2 A1 A2` for the
//! Dyck brackets or `+1 -2` for the Kalikow walk/scenery pairs.

use std::fmt;
use std::ops::{Deref, DerefMut};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Symbol(pub u8);

impl Symbol {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl From<u8> for Symbol {
    fn from(value: u8) -> Self {
        Symbol(value)
    }
}

/// A finite word; the empty word is always admissible.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Word(pub Vec<Symbol>);

impl Word {
    pub fn new() -> Self {
        Word(Vec::new())
    }

    pub fn from_indices(indices: &[u8]) -> Self {
        Word(indices.iter().copied().map(Symbol).collect())
    }

    pub fn indices(&self) -> Vec<u8> {
        self.0.iter().map(|s| s.0).collect()
    }

    /// Concatenation `self · other`.
    pub fn concat(&self, other: &[Symbol]) -> Word {
        let mut out = Vec::with_capacity(self.len() + other.len());
        out.extend_from_slice(&self.0);
        out.extend_from_slice(other);
        Word(out)
    }

    /// Parses a space separated word using a symbol-name table. Plain decimal
    /// indices are accepted as a fallback.
    pub fn parse_with(text: &str, names: &[String]) -> Result<Word> {
        let mut out = Vec::new();
        for tok in text.split(|c: char| c.is_whitespace() || c == ',').filter(|t| !t.is_empty()) {
            if let Some(pos) = names.iter().position(|n| n == tok) {
                out.push(Symbol(pos as u8));
            } else if let Ok(i) = tok.parse::<u8>() {
                if (i as usize) < names.len() {
                    out.push(Symbol(i));
                } else {
                    return Err(Error::InvalidWord(format!("symbol index {i} out of range")));
                }
            } else {
                return Err(Error::InvalidWord(format!("unknown symbol `{tok}`")));
            }
        }
        Ok(Word(out))
    }

    pub fn display_with(&self, names: &[String]) -> String {
        self.0
            .iter()
            .map(|s| names.get(s.index()).cloned().unwrap_or_else(|| s.0.to_string()))
            .collect::<Vec<_>>()
            .join(" ")
    }
}

impl Deref for Word {
    type Target = Vec<Symbol>;
    fn deref(&self) -> &Self::Target {
        &self.0
    }
}

impl DerefMut for Word {
    fn deref_mut(&mut self) -> &mut Self::Target {
        &mut self.0
    }
}

impl From<Vec<Symbol>> for Word {
    fn from(v: Vec<Symbol>) -> Self {
        Word(v)
    }
}

impl From<&[Symbol]> for Word {
    fn from(v: &[Symbol]) -> Self {
        Word(v.to_vec())
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|s| s.0.to_string()).collect();
        write!(f, "{}", parts.join(" "))
    }
}

/// The cylinder `[word]_base = { x : x_{base..base+|word|-1} = word }`.
///
/// For shift-invariant measures the weight does not depend on `base`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Cylinder {
    pub word: Word,
    pub base: i64,
}

impl Cylinder {
    pub fn new(word: Word, base: i64) -> Self {
        Cylinder { word, base }
    }
}

/// Names `0, 1, ..., m-1`.
pub fn index_names(m: usize) -> Vec<String> {
    (0..m).map(|i| i.to_string()).collect()
}
