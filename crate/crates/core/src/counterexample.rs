//! A subshift whose measure of maximal entropy is an equilibrium but not Gibbs.
//!
//! Alphabet `{0, 1, 2}`; a point is admissible when every window of length
//! `2^n + 1` (for every `n ≥ 2`) holds at most `n` zeros. Zeros therefore have
//! zero density and every invariant measure misses them, while single zeros
//! can still be inserted anywhere.
//!
//! A finite word is decided by extending it with nonzero symbols on both sides,
//! the most permissive extension. Any window then meets the word in an
//! interval of length at most `min(2^n + 1, |w|)`, so it is enough to slide
//! windows of those lengths across the word.

use crate::oracle::SubshiftOracle;
use crate::word::Symbol;

#[derive(Debug, Clone, Default)]
pub struct CounterexampleShift;

pub fn counterexample_oracle() -> CounterexampleShift {
    CounterexampleShift
}

impl CounterexampleShift {
    pub const ZERO: Symbol = Symbol(0);
}

/// Window scales `(window_len, max_zeros)` that can bind on a word of length `len`.
fn scales(len: usize) -> impl Iterator<Item = (usize, usize)> {
    let mut n = 2usize;
    let mut done = false;
    std::iter::from_fn(move || {
        if done {
            return None;
        }
        let full = (1usize << n) + 1;
        let item = (full.min(len), n);
        if full >= len {
            done = true;
        }
        n += 1;
        Some(item)
    })
}

impl SubshiftOracle for CounterexampleShift {
    fn name(&self) -> &str {
        "counterexample"
    }

    fn alphabet_size(&self) -> usize {
        3
    }

    fn admissible(&self, word: &[Symbol]) -> bool {
        if word.iter().any(|s| s.index() > 2) {
            return false;
        }
        let len = word.len();
        let mut prefix = Vec::with_capacity(len + 1);
        prefix.push(0usize);
        for s in word {
            let last = *prefix.last().unwrap();
            prefix.push(last + usize::from(*s == Self::ZERO));
        }
        if prefix[len] == 0 {
            return true;
        }
        scales(len).all(|(w, max)| (0..=len - w).all(|start| prefix[start + w] - prefix[start] <= max))
    }

    fn admissible_extension(&self, prefix: &[Symbol], next: Symbol) -> bool {
        if next.index() > 2 {
            return false;
        }
        if next != Self::ZERO {
            return true;
        }
        // only windows containing the new last position can newly fail
        let len = prefix.len() + 1;
        let zeros_in_suffix = |w: usize| 1 + prefix[len - w..].iter().filter(|s| **s == Self::ZERO).count();
        scales(len).all(|(w, max)| zeros_in_suffix(w) <= max)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::language::{count_words, enumerate_language, DEFAULT_CAP};
    use crate::word::Word;

    fn adm(ix: &[u8]) -> bool {
        counterexample_oracle().admissible(&Word::from_indices(ix))
    }

    /// Independent check: embed the word in a long zero-free context and slide
    /// every window of every scale over all of it.
    fn brute(ix: &[u8]) -> bool {
        let pad = 40;
        let mut x = vec![1u8; pad];
        x.extend_from_slice(ix);
        x.extend(std::iter::repeat_n(1u8, pad));
        let mut n = 2;
        while (1usize << n) < x.len() {
            let w = (1usize << n) + 1;
            for k in 0..=x.len() - w {
                if x[k..k + w].iter().filter(|&&c| c == 0).count() > n {
                    return false;
                }
            }
            n += 1;
        }
        true
    }

    #[test]
    fn spec_examples() {
        assert!(adm(&[0, 0]));
        assert!(!adm(&[0, 0, 0]));
        assert!(adm(&[1, 2, 1, 2]));
        assert!(adm(&[]));
        assert!(adm(&[0]));
        assert!(!adm(&[3]));
    }

    #[test]
    fn agrees_with_padded_brute_force() {
        let x = counterexample_oracle();
        for n in 1..=9 {
            let mut via_ext = 0;
            for bits in 0..3u32.pow(n as u32) {
                let mut v = bits;
                let w: Vec<u8> = (0..n)
                    .map(|_| {
                        let d = (v % 3) as u8;
                        v /= 3;
                        d
                    })
                    .collect();
                let a = adm(&w);
                assert_eq!(a, brute(&w), "word {w:?}");
                if a {
                    via_ext += 1;
                }
            }
            assert_eq!(count_words(&x, n, DEFAULT_CAP).unwrap(), via_ext);
        }
    }

    #[test]
    fn zero_spacing() {
        // two zeros need distance; three zeros need a length-9 span
        assert!(adm(&[0, 1, 1, 0, 1, 1, 1, 1, 0]));
        assert!(!adm(&[0, 1, 0, 1, 0]));
        assert!(adm(&[0, 1, 1, 1, 1, 0]));
        for w in enumerate_language(&x_ref(), 6).unwrap() {
            assert!(w.iter().filter(|s| s.0 == 0).count() <= 3);
        }
    }

    fn x_ref() -> CounterexampleShift {
        counterexample_oracle()
    }
}
