//! Language enumeration and finite-level entropy/pressure estimates.
//!
//! Enumeration is a depth-first walk of the prefix tree of the language: only
//! admissible prefixes are extended, which is exact because the language of a
//! subshift is factorial. Children are visited in symbol order, so results are
//! lexicographically sorted.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::oracle::SubshiftOracle;
use crate::potential::LocalPotential;
use crate::word::{Symbol, Word};

/// Default bound on the number of words produced at the target length.
pub const DEFAULT_CAP: u64 = 10_000_000;

fn dfs<O, F>(oracle: &O, n: usize, cap: u64, buf: &mut Vec<Symbol>, count: &mut u64, visit: &mut F) -> Result<()>
where
    O: SubshiftOracle + ?Sized,
    F: FnMut(&[Symbol]),
{
    if buf.len() == n {
        *count += 1;
        if *count > cap {
            return Err(Error::CapExceeded { cap, length: n });
        }
        visit(buf);
        return Ok(());
    }
    for s in 0..oracle.alphabet_size() {
        let s = Symbol(s as u8);
        if oracle.admissible_extension(buf, s) {
            buf.push(s);
            let r = dfs(oracle, n, cap, buf, count, visit);
            buf.pop();
            r?;
        }
    }
    Ok(())
}

/// Calls `visit` on every admissible word of length `n` in lexicographic
/// order and returns how many there were.
pub fn visit_language<O, F>(oracle: &O, n: usize, cap: u64, mut visit: F) -> Result<u64>
where
    O: SubshiftOracle + ?Sized,
    F: FnMut(&[Symbol]),
{
    let mut buf = Vec::with_capacity(n);
    let mut count = 0;
    dfs(oracle, n, cap, &mut buf, &mut count, &mut visit)?;
    Ok(count)
}

pub fn enumerate_language_capped<O: SubshiftOracle + ?Sized>(oracle: &O, n: usize, cap: u64) -> Result<Vec<Word>> {
    let mut out = Vec::new();
    visit_language(oracle, n, cap, |w| out.push(Word::from(w)))?;
    Ok(out)
}

/// All admissible words of length `n`, sorted, using [`DEFAULT_CAP`].
pub fn enumerate_language<O: SubshiftOracle + ?Sized>(oracle: &O, n: usize) -> Result<Vec<Word>> {
    enumerate_language_capped(oracle, n, DEFAULT_CAP)
}

pub fn count_words<O: SubshiftOracle + ?Sized>(oracle: &O, n: usize, cap: u64) -> Result<u64> {
    visit_language(oracle, n, cap, |_| {})
}

/// One row of a [`LanguageTable`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct LanguageRow {
    pub n: usize,
    pub count: u64,
}

/// Word counts `b_1..b_n` of a language.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct LanguageTable {
    pub rows: Vec<LanguageRow>,
}

impl LanguageTable {
    pub fn counts(&self) -> Vec<u64> {
        self.rows.iter().map(|r| r.count).collect()
    }

    pub fn count(&self, n: usize) -> Option<u64> {
        self.rows.iter().find(|r| r.n == n).map(|r| r.count)
    }
}

/// Counts of all lengths `1..=n_max` in one pass over the prefix tree. The cap
/// applies to each level.
pub fn language_table<O: SubshiftOracle + ?Sized>(oracle: &O, n_max: usize, cap: u64) -> Result<LanguageTable> {
    fn walk<O: SubshiftOracle + ?Sized>(
        oracle: &O,
        n_max: usize,
        cap: u64,
        buf: &mut Vec<Symbol>,
        counts: &mut [u64],
    ) -> Result<()> {
        if buf.len() == n_max {
            return Ok(());
        }
        for s in 0..oracle.alphabet_size() {
            let s = Symbol(s as u8);
            if oracle.admissible_extension(buf, s) {
                buf.push(s);
                let level = buf.len();
                counts[level - 1] += 1;
                if counts[level - 1] > cap {
                    return Err(Error::CapExceeded { cap, length: level });
                }
                let r = walk(oracle, n_max, cap, buf, counts);
                buf.pop();
                r?;
            }
        }
        Ok(())
    }
    let mut counts = vec![0u64; n_max];
    walk(oracle, n_max, cap, &mut Vec::with_capacity(n_max), &mut counts)?;
    Ok(LanguageTable {
        rows: counts.into_iter().enumerate().map(|(i, count)| LanguageRow { n: i + 1, count }).collect(),
    })
}

/// `(1/n)·log|L_n(X)|`.
///
/// Since `log|L_n|` is subadditive this never undershoots `h_top`; it
/// approaches it from above at a rate that depends on the shift.
pub fn entropy_estimate<O: SubshiftOracle + ?Sized>(oracle: &O, n: usize) -> Result<f64> {
    entropy_estimate_capped(oracle, n, DEFAULT_CAP)
}

pub fn entropy_estimate_capped<O: SubshiftOracle + ?Sized>(oracle: &O, n: usize, cap: u64) -> Result<f64> {
    if n == 0 {
        return Err(Error::InvalidParams("entropy estimate needs n >= 1".into()));
    }
    let count = count_words(oracle, n, cap)?;
    Ok((count as f64).ln() / n as f64)
}

/// Running `log Σ exp(x)` that is exact for sums of zeros.
#[derive(Debug, Clone, Copy)]
struct LogSumExp {
    max: f64,
    scaled: f64,
}

impl LogSumExp {
    fn new() -> Self {
        LogSumExp { max: f64::NEG_INFINITY, scaled: 0.0 }
    }

    fn push(&mut self, x: f64) {
        if x > self.max {
            self.scaled = if self.max == f64::NEG_INFINITY { 1.0 } else { self.scaled * (self.max - x).exp() + 1.0 };
            self.max = x;
        } else {
            self.scaled += (x - self.max).exp();
        }
    }

    fn value(&self) -> f64 {
        self.scaled.ln() + self.max
    }
}

/// `(1/n)·log Σ_{a∈L_n} exp(S(a))` where `S(a)` sums `f` over the positions of
/// `a` at which the whole range-`r` window lies inside `a`.
///
/// Against the sup-over-cylinder form of the partition function this
/// truncation costs at most `(2r/n)·‖f‖_∞`; see [`pressure_truncation_bound`].
pub fn pressure_estimate<O: SubshiftOracle + ?Sized>(oracle: &O, f: &LocalPotential, n: usize) -> Result<f64> {
    pressure_estimate_capped(oracle, f, n, DEFAULT_CAP)
}

pub fn pressure_estimate_capped<O: SubshiftOracle + ?Sized>(
    oracle: &O,
    f: &LocalPotential,
    n: usize,
    cap: u64,
) -> Result<f64> {
    let r = f.range();
    if n <= 2 * r {
        return Err(Error::Range { n, range: r, min: 2 * r });
    }
    if f.alphabet() < oracle.alphabet_size() {
        return Err(Error::InvalidPotential(format!(
            "potential alphabet {} smaller than shift alphabet {}",
            f.alphabet(),
            oracle.alphabet_size()
        )));
    }

    fn walk<O: SubshiftOracle + ?Sized>(
        oracle: &O,
        f: &LocalPotential,
        n: usize,
        cap: u64,
        buf: &mut Vec<Symbol>,
        partial: f64,
        leaves: &mut u64,
        acc: &mut LogSumExp,
    ) -> Result<()> {
        if buf.len() == n {
            *leaves += 1;
            if *leaves > cap {
                return Err(Error::CapExceeded { cap, length: n });
            }
            acc.push(partial);
            return Ok(());
        }
        let w = f.window_len();
        for s in 0..oracle.alphabet_size() {
            let s = Symbol(s as u8);
            if oracle.admissible_extension(buf, s) {
                buf.push(s);
                let next = if buf.len() >= w { partial + f.value(&buf[buf.len() - w..]) } else { partial };
                let res = walk(oracle, f, n, cap, buf, next, leaves, acc);
                buf.pop();
                res?;
            }
        }
        Ok(())
    }

    let mut acc = LogSumExp::new();
    let mut leaves = 0;
    walk(oracle, f, n, cap, &mut Vec::with_capacity(n), 0.0, &mut leaves, &mut acc)?;
    if leaves == 0 {
        return Err(Error::InvalidParams(format!("no admissible words of length {n}")));
    }
    Ok(acc.value() / n as f64)
}

/// `(2r/n)·‖f‖_∞ + (1/n)·log_multiplicity`, the documented error of
/// [`pressure_estimate`] against the true pressure. `log_multiplicity` bounds
/// `|log Z_n − n·P|` for the untruncated sum; for one-step SFTs it comes from
/// the Perron data (`sft::partition_log_constant`).
pub fn pressure_truncation_bound(f: &LocalPotential, n: usize, log_multiplicity: f64) -> f64 {
    let r = f.range() as f64;
    (2.0 * r / n as f64) * f.sup_norm() + log_multiplicity / n as f64
}

/// Fraction of `samples` that read `target` starting at `offset`.
pub fn empirical_cylinder_weight(samples: &[Word], target: &[Symbol], offset: usize) -> Result<f64> {
    let hits = cylinder_hits(samples, target, offset)?;
    Ok(hits as f64 / samples.len() as f64)
}

/// Number of `samples` that read `target` starting at `offset`.
pub fn cylinder_hits(samples: &[Word], target: &[Symbol], offset: usize) -> Result<u64> {
    if samples.is_empty() {
        return Err(Error::EmptySamples);
    }
    let mut hits = 0;
    for (index, s) in samples.iter().enumerate() {
        if s.len() < offset + target.len() {
            return Err(Error::SampleTooShort { index, len: s.len(), offset, target: target.len() });
        }
        if &s[offset..offset + target.len()] == target {
            hits += 1;
        }
    }
    Ok(hits)
}
