//! Locally constant potentials, their variations, and the Gibbs log-cocycle.
//!
//! A potential of range `r` is a table over the `(2r+1)`-windows of the ambient
//! full shift, centred at coordinate 0. Entries for windows that never occur in
//! a given subshift are allowed and simply never read there.

use std::collections::HashMap;
use std::ops::Range;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::word::{Symbol, Word};

#[derive(Debug, Clone, PartialEq)]
pub struct LocalPotential {
    range: usize,
    alphabet: usize,
    values: Vec<f64>,
}

impl LocalPotential {
    pub fn new(range: usize, alphabet: usize, values: Vec<f64>) -> Result<Self> {
        if alphabet == 0 {
            return Err(Error::InvalidPotential("empty alphabet".into()));
        }
        let expected = table_len(alphabet, range)?;
        if values.len() != expected {
            return Err(Error::InvalidPotential(format!(
                "range {range} over {alphabet} symbols needs {expected} values, got {}",
                values.len()
            )));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidPotential("non-finite value".into()));
        }
        Ok(LocalPotential { range, alphabet, values })
    }

    pub fn zero(range: usize, alphabet: usize) -> Self {
        let n = table_len(alphabet, range).expect("table size");
        LocalPotential { range, alphabet, values: vec![0.0; n] }
    }

    /// A site potential: `f(x) = values[x_0]`.
    pub fn site(values: &[f64]) -> Self {
        LocalPotential::new(0, values.len(), values.to_vec()).expect("valid site potential")
    }

    pub fn from_fn<F: Fn(&[Symbol]) -> f64>(range: usize, alphabet: usize, f: F) -> Self {
        let len = 2 * range + 1;
        let n = table_len(alphabet, range).expect("table size");
        let mut window = vec![Symbol(0); len];
        let values = (0..n)
            .map(|code| {
                decode_into(code, alphabet, &mut window);
                f(&window)
            })
            .collect();
        LocalPotential { range, alphabet, values }
    }

    pub fn range(&self) -> usize {
        self.range
    }

    pub fn alphabet(&self) -> usize {
        self.alphabet
    }

    pub fn window_len(&self) -> usize {
        2 * self.range + 1
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Value on a window of length `2r+1` (the centre is coordinate 0).
    pub fn value(&self, window: &[Symbol]) -> f64 {
        debug_assert_eq!(window.len(), self.window_len());
        self.values[encode(window, self.alphabet)]
    }

    /// Value of `f∘T^i` on a finite word, if the window around `i` fits.
    pub fn value_at(&self, word: &[Symbol], i: usize) -> Option<f64> {
        let r = self.range;
        if i < r || i + r >= word.len() {
            return None;
        }
        Some(self.value(&word[i - r..=i + r]))
    }

    pub fn sup_norm(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// Sum of `f∘T^i` over the positions of `word` where the window fits.
    pub fn interior_sum(&self, word: &[Symbol]) -> f64 {
        let w = self.window_len();
        if word.len() < w {
            return 0.0;
        }
        word.windows(w).map(|win| self.value(win)).sum()
    }

    /// The same function viewed as a potential of a larger range.
    pub fn lift(&self, range: usize) -> Self {
        assert!(range >= self.range);
        let pad = range - self.range;
        LocalPotential::from_fn(range, self.alphabet, |w| self.value(&w[pad..w.len() - pad]))
    }

    fn combine(&self, other: &Self, op: impl Fn(f64, f64) -> f64) -> Result<Self> {
        if self.alphabet != other.alphabet {
            return Err(Error::InvalidPotential("alphabets differ".into()));
        }
        let r = self.range.max(other.range);
        let a = self.lift(r);
        let b = other.lift(r);
        let values = a.values.iter().zip(&b.values).map(|(x, y)| op(*x, *y)).collect();
        Ok(LocalPotential { range: r, alphabet: self.alphabet, values })
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.combine(other, |x, y| x + y)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.combine(other, |x, y| x - y)
    }

    pub fn scale(&self, c: f64) -> Self {
        LocalPotential { range: self.range, alphabet: self.alphabet, values: self.values.iter().map(|v| v * c).collect() }
    }

    pub fn add_constant(&self, c: f64) -> Self {
        LocalPotential { range: self.range, alphabet: self.alphabet, values: self.values.iter().map(|v| v + c).collect() }
    }

    /// Site values, if this is a range-0 potential.
    pub fn site_values(&self) -> Option<&[f64]> {
        (self.range == 0).then_some(&self.values[..])
    }

    pub fn to_file(&self) -> PotentialFile {
        let mut window = vec![Symbol(0); self.window_len()];
        let entries = self
            .values
            .iter()
            .enumerate()
            .filter(|(_, v)| **v != 0.0)
            .map(|(code, v)| {
                decode_into(code, self.alphabet, &mut window);
                PotentialEntry { word: window.iter().map(|s| s.0).collect(), value: *v }
            })
            .collect();
        PotentialFile { range: self.range, alphabet: self.alphabet, entries }
    }

    pub fn from_file(file: &PotentialFile) -> Result<Self> {
        let mut f = LocalPotential::zero(file.range, file.alphabet);
        for e in &file.entries {
            if e.word.len() != f.window_len() {
                return Err(Error::InvalidPotential(format!(
                    "entry {:?} has length {}, expected {}",
                    e.word,
                    e.word.len(),
                    f.window_len()
                )));
            }
            if e.word.iter().any(|s| *s as usize >= file.alphabet) {
                return Err(Error::InvalidPotential(format!("entry {:?} leaves the alphabet", e.word)));
            }
            if !e.value.is_finite() {
                return Err(Error::InvalidPotential("non-finite value".into()));
            }
            let w: Vec<Symbol> = e.word.iter().map(|s| Symbol(*s)).collect();
            f.values[encode(&w, file.alphabet)] = e.value;
        }
        Ok(f)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: PotentialFile = serde_json::from_str(text)?;
        Self::from_file(&file)
    }
}

/// On-disk form: `{"range": r, "alphabet": m, "entries": [{"word": [...], "value": v}]}`,
/// missing entries are 0.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PotentialFile {
    pub range: usize,
    pub alphabet: usize,
    #[serde(default)]
    pub entries: Vec<PotentialEntry>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PotentialEntry {
    pub word: Vec<u8>,
    pub value: f64,
}

fn table_len(alphabet: usize, range: usize) -> Result<usize> {
    let len = 2 * range + 1;
    let mut n: usize = 1;
    for _ in 0..len {
        n = n
            .checked_mul(alphabet)
            .filter(|n| *n <= 1 << 24)
            .ok_or_else(|| Error::InvalidPotential(format!("table for range {range} over {alphabet} symbols is too large")))?;
    }
    Ok(n)
}

fn encode(window: &[Symbol], alphabet: usize) -> usize {
    window.iter().fold(0, |acc, s| acc * alphabet + s.index())
}

fn decode_into(mut code: usize, alphabet: usize, out: &mut [Symbol]) {
    for slot in out.iter_mut().rev() {
        *slot = Symbol((code % alphabet) as u8);
        code /= alphabet;
    }
}

/// `v_k(f)`: the largest change of `f` between windows that agree on the
/// central `2k+1` coordinates. `v_0(f)` is `‖f‖_∞` by convention, and
/// `v_k(f) = 0` for `k ≥ r`. The sup runs over the ambient full shift.
pub fn variation(f: &LocalPotential, k: usize) -> f64 {
    if k == 0 {
        return f.sup_norm();
    }
    if k >= f.range {
        return 0.0;
    }
    let lo = f.range - k;
    let hi = f.range + k + 1;
    let mut window = vec![Symbol(0); f.window_len()];
    let mut spans: HashMap<Vec<Symbol>, (f64, f64)> = HashMap::new();
    for (code, v) in f.values.iter().enumerate() {
        decode_into(code, f.alphabet, &mut window);
        let e = spans.entry(window[lo..hi].to_vec()).or_insert((*v, *v));
        e.0 = e.0.min(*v);
        e.1 = e.1.max(*v);
    }
    spans.values().fold(0.0, |m, (a, b)| m.max(b - a))
}

/// `‖f‖_SV = Σ_{k≥1} v_{k-1}(f)`; only `k ≤ r` contribute.
pub fn sv_norm(f: &LocalPotential) -> f64 {
    (0..=f.range).map(|k| variation(f, k)).sum()
}

/// Two equal-length words that agree outside `window`, standing for two points
/// that agree outside it and share the same (unspecified) continuation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FinitePair {
    x: Word,
    y: Word,
    window: Range<usize>,
}

impl FinitePair {
    pub fn new(x: Word, y: Word, window: Range<usize>) -> Result<Self> {
        if x.len() != y.len() {
            return Err(Error::InvalidPair(format!("lengths {} and {} differ", x.len(), y.len())));
        }
        if window.start > window.end || window.end > x.len() {
            return Err(Error::InvalidPair(format!("window {window:?} outside words of length {}", x.len())));
        }
        if let Some(i) = (0..x.len()).find(|i| !window.contains(i) && x[*i] != y[*i]) {
            return Err(Error::InvalidPair(format!("words differ at {i}, outside window {window:?}")));
        }
        Ok(FinitePair { x, y, window })
    }

    pub fn x(&self) -> &Word {
        &self.x
    }

    pub fn y(&self) -> &Word {
        &self.y
    }

    pub fn window(&self) -> Range<usize> {
        self.window.clone()
    }

    pub fn swapped(&self) -> Self {
        FinitePair { x: self.y.clone(), y: self.x.clone(), window: self.window.clone() }
    }
}

/// `log φ_f(x, y) = Σ_n f(T^n x) − f(T^n y)`.
///
/// Every window that sees a difference must lie inside the words, so the pair
/// needs `2r` agreeing symbols on each side of its window. Terms outside that
/// zone cancel exactly, which makes the sum exact.
pub fn log_cocycle(f: &LocalPotential, pair: &FinitePair) -> Result<f64> {
    let r = f.range;
    let len = pair.x.len();
    let w = pair.window.clone();
    if w.is_empty() {
        return Ok(0.0);
    }
    if w.start < 2 * r || w.end + 2 * r > len {
        return Err(Error::WindowCoverage { start: w.start, end: w.end, margin: 2 * r, len });
    }
    let mut total = 0.0;
    for i in w.start - r..w.end + r {
        total += f.value(&pair.x[i - r..=i + r]) - f.value(&pair.y[i - r..=i + r]);
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn w(ix: &[u8]) -> Word {
        Word::from_indices(ix)
    }

    #[test]
    fn variation_examples() {
        let site = LocalPotential::site(&[0.0, 1.0]);
        assert_eq!(variation(&site, 0), 1.0);
        assert_eq!(variation(&site, 1), 0.0);
        let triple_zero = LocalPotential::from_fn(1, 2, |x| if x.iter().all(|s| s.0 == 0) { 1.0 } else { 0.0 });
        assert_eq!(variation(&triple_zero, 0), 1.0);
        assert_eq!(variation(&triple_zero, 1), 0.0);

        // range 2: windows agreeing on the centre 3 can still differ at the ends
        let f = LocalPotential::from_fn(2, 2, |x| 2.0 * x[0].0 as f64 + x[2].0 as f64 - x[4].0 as f64);
        assert_eq!(variation(&f, 1), 3.0);
        assert_eq!(variation(&f, 2), 0.0);
        assert_eq!(sv_norm(&f), 3.0 + 3.0);
    }

    #[test]
    fn sv_norm_examples() {
        assert_eq!(sv_norm(&LocalPotential::zero(1, 3)), 0.0);
        assert_eq!(sv_norm(&LocalPotential::site(&[0.0, 1.0])), 1.0);
        let f = LocalPotential::from_fn(1, 2, |x| x[0].0 as f64 - 0.5 * x[1].0 as f64);
        assert!((sv_norm(&f.scale(2.0)) - 2.0 * sv_norm(&f)).abs() < 1e-15);
    }

    #[test]
    fn cocycle_examples() {
        let c = 0.7;
        let f = LocalPotential::site(&[0.0, c]);
        let same = FinitePair::new(w(&[0, 1, 0]), w(&[0, 1, 0]), 1..2).unwrap();
        assert_eq!(log_cocycle(&f, &same).unwrap(), 0.0);
        let single = FinitePair::new(w(&[0, 1, 0]), w(&[0, 0, 0]), 1..2).unwrap();
        assert_eq!(log_cocycle(&f, &single).unwrap(), c);
    }

    #[test]
    fn cocycle_matches_termwise_sum_on_golden_mean_pair() {
        // pair differing on a 2-block inside 0·(10|00)·0... of the golden-mean shift
        let f = LocalPotential::site(&[0.3, -1.1]);
        let x = w(&[0, 1, 0, 0, 1, 0]);
        let y = w(&[0, 0, 1, 0, 1, 0]);
        let pair = FinitePair::new(x.clone(), y.clone(), 1..3).unwrap();
        let oracle: f64 = x.iter().zip(y.iter()).map(|(a, b)| f.values()[a.index()] - f.values()[b.index()]).sum();
        assert!((log_cocycle(&f, &pair).unwrap() - oracle).abs() < 1e-15);
    }

    #[test]
    fn coverage_is_checked() {
        let f = LocalPotential::zero(1, 2);
        let pair = FinitePair::new(w(&[0, 1, 0, 0]), w(&[0, 0, 0, 0]), 1..2).unwrap();
        assert!(matches!(log_cocycle(&f, &pair), Err(Error::WindowCoverage { .. })));
        let pair = FinitePair::new(w(&[0, 0, 1, 0]), w(&[0, 0, 0, 0]), 2..3).unwrap();
        assert!(matches!(log_cocycle(&f, &pair), Err(Error::WindowCoverage { .. })));
        let pair = FinitePair::new(w(&[0, 0, 0, 1, 0, 0, 0]), w(&[0; 7]), 3..4).unwrap();
        assert!(log_cocycle(&f, &pair).is_ok());
        assert!(FinitePair::new(w(&[1, 0]), w(&[0, 0]), 1..2).is_err());
        assert!(FinitePair::new(w(&[1, 0]), w(&[0]), 0..1).is_err());
    }

    #[test]
    fn file_format_round_trip() {
        let text = r#"{"range": 1, "alphabet": 2, "entries": [{"word": [0,0,0], "value": 1.5}, {"word": [1,0,1], "value": -2}]}"#;
        let f = LocalPotential::from_json(text).unwrap();
        assert_eq!(f.value(&w(&[0, 0, 0])), 1.5);
        assert_eq!(f.value(&w(&[1, 0, 1])), -2.0);
        assert_eq!(f.value(&w(&[1, 1, 1])), 0.0);
        assert_eq!(LocalPotential::from_file(&f.to_file()).unwrap(), f);
        assert!(LocalPotential::from_json(r#"{"range": 0, "alphabet": 2, "entries": [{"word": [0,0], "value": 1}]}"#).is_err());
        assert!(LocalPotential::from_json(r#"{"range": 0, "alphabet": 2, "entries": [{"word": [2], "value": 1}]}"#).is_err());
    }

    #[test]
    fn lift_preserves_values() {
        let f = LocalPotential::site(&[1.0, -1.0, 0.5]);
        let g = f.lift(1);
        assert_eq!(g.value(&w(&[2, 1, 0])), -1.0);
        assert_eq!(g.interior_sum(&w(&[0, 1, 2, 2])), f.value(&w(&[1])) + f.value(&w(&[2])));
    }

    fn arb_potential(range: usize) -> impl Strategy<Value = LocalPotential> {
        let n = 2usize.pow((2 * range + 1) as u32);
        prop::collection::vec(-2.0f64..2.0, n).prop_map(move |v| LocalPotential::new(range, 2, v).unwrap())
    }

    /// Random triple of words over {0,1} of length 14 that coincide outside 4..10.
    fn arb_triple() -> impl Strategy<Value = (Word, Word, Word)> {
        let outer = prop::collection::vec(0u8..2, 14);
        let inner = prop::collection::vec(prop::collection::vec(0u8..2, 6), 3);
        (outer, inner).prop_map(|(base, inner)| {
            let mk = |mid: &[u8]| {
                let mut v = base.clone();
                v[4..10].copy_from_slice(mid);
                Word::from_indices(&v)
            };
            (mk(&inner[0]), mk(&inner[1]), mk(&inner[2]))
        })
    }

    proptest! {
        #[test]
        fn cocycle_identity_and_antisymmetry(f in arb_potential(1), (x, y, z) in arb_triple()) {
            let xy = FinitePair::new(x.clone(), y.clone(), 4..10).unwrap();
            let yz = FinitePair::new(y.clone(), z.clone(), 4..10).unwrap();
            let xz = FinitePair::new(x.clone(), z.clone(), 4..10).unwrap();
            let a = log_cocycle(&f, &xy).unwrap();
            let b = log_cocycle(&f, &yz).unwrap();
            let c = log_cocycle(&f, &xz).unwrap();
            prop_assert!((a + b - c).abs() < 1e-12);
            prop_assert!((a + log_cocycle(&f, &xy.swapped()).unwrap()).abs() < 1e-12);
        }

        #[test]
        fn cocycle_is_linear_in_potential(f in arb_potential(1), g in arb_potential(0), (x, y, _z) in arb_triple()) {
            let g = LocalPotential::new(0, 2, g.values()[..2].to_vec()).unwrap();
            let pair = FinitePair::new(x, y, 4..10).unwrap();
            let sum = f.add(&g).unwrap();
            let lhs = log_cocycle(&sum, &pair).unwrap();
            let rhs = log_cocycle(&f, &pair).unwrap() + log_cocycle(&g, &pair).unwrap();
            prop_assert!((lhs - rhs).abs() < 1e-12);
        }

        #[test]
        fn cocycle_is_lipschitz_in_sv_norm(f in arb_potential(1), g in arb_potential(1), (x, y, _z) in arb_triple()) {
            let pair = FinitePair::new(x, y, 4..10).unwrap();
            let diff = (log_cocycle(&f, &pair).unwrap() - log_cocycle(&g, &pair).unwrap()).abs();
            let window = 6.0;
            let c = 2.0 * (window + 2.0 * 1.0);
            prop_assert!(diff <= c * sv_norm(&f.sub(&g).unwrap()) + 1e-12);
        }
    }
}
