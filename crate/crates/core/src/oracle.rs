//! The subshift-oracle abstraction.
//!
//! Every concrete shift in this crate is presented through [`SubshiftOracle`]:
//! an alphabet size plus a predicate on finite words. A word is admissible iff
//! it occurs in some point of the subshift, so the language is factorial and
//! every admissible word has admissible one-symbol extensions on both sides.

use crate::word::{index_names, Symbol, Word};

pub trait SubshiftOracle: Send + Sync {
    fn name(&self) -> &str;

    fn alphabet_size(&self) -> usize;

    /// Does `word` occur in some point of the shift?
    fn admissible(&self, word: &[Symbol]) -> bool;

    /// Admissibility of `prefix · next`, where `prefix` is already known to be
    /// admissible. Implementations override this with an incremental check.
    fn admissible_extension(&self, prefix: &[Symbol], next: Symbol) -> bool {
        let mut w = Vec::with_capacity(prefix.len() + 1);
        w.extend_from_slice(prefix);
        w.push(next);
        self.admissible(&w)
    }

    /// Display names of the symbols, indexed by symbol.
    fn symbol_names(&self) -> Vec<String> {
        index_names(self.alphabet_size())
    }

    fn format_word(&self, word: &[Symbol]) -> String {
        Word::from(word).display_with(&self.symbol_names())
    }

    fn parse_word(&self, text: &str) -> crate::Result<Word> {
        Word::parse_with(text, &self.symbol_names())
    }

    fn symbols(&self) -> Vec<Symbol> {
        (0..self.alphabet_size()).map(|i| Symbol(i as u8)).collect()
    }
}

impl<T: SubshiftOracle + ?Sized> SubshiftOracle for &T {
    fn name(&self) -> &str {
        (**self).name()
    }
    fn alphabet_size(&self) -> usize {
        (**self).alphabet_size()
    }
    fn admissible(&self, word: &[Symbol]) -> bool {
        (**self).admissible(word)
    }
    fn admissible_extension(&self, prefix: &[Symbol], next: Symbol) -> bool {
        (**self).admissible_extension(prefix, next)
    }
    fn symbol_names(&self) -> Vec<String> {
        (**self).symbol_names()
    }
}

impl<T: SubshiftOracle + ?Sized> SubshiftOracle for Box<T> {
    fn name(&self) -> &str {
        (**self).name()
    }
    fn alphabet_size(&self) -> usize {
        (**self).alphabet_size()
    }
    fn admissible(&self, word: &[Symbol]) -> bool {
        (**self).admissible(word)
    }
    fn admissible_extension(&self, prefix: &[Symbol], next: Symbol) -> bool {
        (**self).admissible_extension(prefix, next)
    }
    fn symbol_names(&self) -> Vec<String> {
        (**self).symbol_names()
    }
}

/// The full shift on `m` symbols.
#[derive(Debug, Clone)]
pub struct FullShift {
    size: usize,
    name: String,
}

impl FullShift {
    pub fn new(size: usize) -> Self {
        assert!((2..=256).contains(&size), "full shift needs 2..=256 symbols");
        FullShift { size, name: format!("full-{size}") }
    }
}

impl SubshiftOracle for FullShift {
    fn name(&self) -> &str {
        &self.name
    }
    fn alphabet_size(&self) -> usize {
        self.size
    }
    fn admissible(&self, word: &[Symbol]) -> bool {
        word.iter().all(|s| s.index() < self.size)
    }
    fn admissible_extension(&self, _prefix: &[Symbol], next: Symbol) -> bool {
        next.index() < self.size
    }
}
