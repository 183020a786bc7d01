//! Block swaps and conformality checks.
//!
//! A swap `ξ_{a,b}` exchanges the blocks `a` and `b` in a fixed window. It is a
//! homeomorphism of the shift exactly when `a` and `b` can sit in the same
//! contexts. From a black-box oracle that is only checkable for contexts of a
//! bounded pad, so [`find_swaps`] is exact for one-step SFTs (pad ≥ 1) and an
//! over-approximation in general.

use std::collections::BTreeMap;
use std::hash::{Hash, Hasher};

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::language::{cylinder_hits, visit_language, DEFAULT_CAP};
use crate::measure::{BernoulliMeasure, CylinderWeight};
use crate::oracle::SubshiftOracle;
use crate::potential::{log_cocycle, FinitePair, LocalPotential};
use crate::word::{Symbol, Word};

#[derive(Debug, Clone, Eq, Serialize)]
pub struct SwapInvolution {
    pub a: Word,
    pub b: Word,
}

impl SwapInvolution {
    /// Stored in lexicographic order, so `ξ_{a,b}` and `ξ_{b,a}` coincide.
    pub fn new(a: Word, b: Word) -> Result<Self> {
        if a.len() != b.len() {
            return Err(Error::InvalidPair(format!("block lengths {} and {} differ", a.len(), b.len())));
        }
        Ok(if a <= b { SwapInvolution { a, b } } else { SwapInvolution { a: b, b: a } })
    }

    pub fn window_length(&self) -> usize {
        self.a.len()
    }

    /// `self` with the roles of the blocks exchanged (same involution).
    pub fn reversed(&self) -> Self {
        SwapInvolution { a: self.b.clone(), b: self.a.clone() }
    }

    fn key(&self) -> (&Word, &Word) {
        if self.a <= self.b {
            (&self.a, &self.b)
        } else {
            (&self.b, &self.a)
        }
    }

    /// Applies `ξ_{a,b}` to the block of `x` starting at `at`; other blocks are
    /// left alone.
    pub fn apply(&self, x: &[Symbol], at: usize) -> Word {
        let n = self.window_length();
        let mut out = Word::from(x);
        if at + n <= x.len() {
            let block = &x[at..at + n];
            if block == &self.a[..] {
                out[at..at + n].copy_from_slice(&self.b);
            } else if block == &self.b[..] {
                out[at..at + n].copy_from_slice(&self.a);
            }
        }
        out
    }
}

impl PartialEq for SwapInvolution {
    fn eq(&self, other: &Self) -> bool {
        self.key() == other.key()
    }
}

impl Hash for SwapInvolution {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.key().hash(state);
    }
}

type Contexts = BTreeMap<Word, Vec<(Word, Word)>>;

/// For each admissible block of length `n`, the sorted list of `(left, right)`
/// pad-length contexts it can sit in.
fn context_table<O: SubshiftOracle + ?Sized>(oracle: &O, n: usize, pad: usize) -> Result<Contexts> {
    let mut table: Contexts = BTreeMap::new();
    visit_language(oracle, n + 2 * pad, DEFAULT_CAP, |w| {
        let mid = Word::from(&w[pad..pad + n]);
        table.entry(mid).or_default().push((Word::from(&w[..pad]), Word::from(&w[pad + n..])));
    })?;
    Ok(table)
}

/// All unordered pairs of admissible length-`n` blocks with identical
/// pad-`context_pad` context sets, in lexicographic order.
pub fn find_swaps<O: SubshiftOracle + ?Sized>(oracle: &O, n: usize, context_pad: usize) -> Result<Vec<SwapInvolution>> {
    if n == 0 {
        return Err(Error::InvalidParams("swap window must have length at least 1".into()));
    }
    let table = context_table(oracle, n, context_pad)?;
    let mut classes: BTreeMap<&[(Word, Word)], Vec<&Word>> = BTreeMap::new();
    for (block, ctx) in &table {
        classes.entry(ctx.as_slice()).or_default().push(block);
    }
    let mut out = Vec::new();
    for blocks in classes.values() {
        for (i, a) in blocks.iter().enumerate() {
            for b in &blocks[i + 1..] {
                out.push(SwapInvolution::new((*a).clone(), (*b).clone())?);
            }
        }
    }
    out.sort_by(|x, y| (&x.a, &x.b).cmp(&(&y.a, &y.b)));
    Ok(out)
}

/// What is being tested for conformality.
pub enum MeasureModel<'a> {
    Exact(&'a dyn CylinderWeight),
    /// Sample paths read at a fixed offset.
    Empirical { samples: &'a [Word], offset: usize },
}

impl MeasureModel<'_> {
    fn mode(&self) -> &'static str {
        match self {
            MeasureModel::Exact(_) => "exact",
            MeasureModel::Empirical { .. } => "empirical",
        }
    }
}

/// Minimum number of hits on each of the two cylinders for an empirical
/// comparison to count.
pub const MIN_HITS: u64 = 30;

fn serialize_extended<S: Serializer>(x: &f64, s: S) -> std::result::Result<S::Ok, S::Error> {
    if x.is_finite() {
        s.serialize_f64(*x)
    } else if x.is_nan() {
        s.serialize_str("nan")
    } else if *x > 0.0 {
        s.serialize_str("inf")
    } else {
        s.serialize_str("-inf")
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Witness {
    pub left: Word,
    pub right: Word,
    #[serde(serialize_with = "serialize_extended")]
    pub log_weight_a: f64,
    #[serde(serialize_with = "serialize_extended")]
    pub log_weight_b: f64,
    pub log_cocycle: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub hits_a: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub hits_b: Option<u64>,
    /// Half-width of the 3σ band on the log-ratio (empirical mode only).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub band: Option<f64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ConformalReport {
    pub swap: SwapInvolution,
    pub pad: usize,
    /// The deviation of largest magnitude, with its sign:
    /// `log μ(l a r) − log μ(l b r) − log φ_f`.
    #[serde(serialize_with = "serialize_extended")]
    pub max_log_deviation: f64,
    pub witness: Option<Witness>,
    pub mode: &'static str,
    pub contexts: usize,
    /// Contexts where both cylinders are null (exact) or under-sampled (empirical).
    pub inconclusive: usize,
    /// Empirical mode: every conclusive context stayed within its 3σ band.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub within_band: Option<bool>,
}

impl ConformalReport {
    pub fn passes(&self, tol: f64) -> bool {
        match self.within_band {
            Some(ok) => ok,
            None => self.max_log_deviation.abs() <= tol,
        }
    }
}

/// Compares `μ(l·a·r)` with `μ(l·b·r)·φ_f` for every swap and every admissible
/// pad-length context `(l, r)`. Exact cocycle evaluation needs
/// `context_pad ≥ 2·range(f)`.
pub fn check_conformal<O: SubshiftOracle + ?Sized>(
    model: &MeasureModel<'_>,
    f: &LocalPotential,
    swaps: &[SwapInvolution],
    context_pad: usize,
    oracle: &O,
) -> Result<Vec<ConformalReport>> {
    if context_pad < 2 * f.range() {
        return Err(Error::InvalidParams(format!(
            "context pad {context_pad} is below twice the potential range {}",
            f.range()
        )));
    }
    let mut tables: BTreeMap<usize, Contexts> = BTreeMap::new();
    let mut reports = Vec::with_capacity(swaps.len());
    for swap in swaps {
        let n = swap.window_length();
        if let std::collections::btree_map::Entry::Vacant(e) = tables.entry(n) {
            e.insert(context_table(oracle, n, context_pad)?);
        }
        let table = &tables[&n];
        let empty = Vec::new();
        let ctx = table.get(&swap.a).unwrap_or(&empty);
        let mut report = ConformalReport {
            swap: swap.clone(),
            pad: context_pad,
            max_log_deviation: 0.0,
            witness: None,
            mode: model.mode(),
            contexts: ctx.len(),
            inconclusive: 0,
            within_band: matches!(model, MeasureModel::Empirical { .. }).then_some(true),
        };
        for (l, r) in ctx {
            let x = l.concat(&swap.a).concat(r);
            let y = l.concat(&swap.b).concat(r);
            let pair = FinitePair::new(x.clone(), y.clone(), context_pad..context_pad + n)?;
            let phi = log_cocycle(f, &pair)?;
            let (wa, wb, hits, band) = match model {
                MeasureModel::Exact(mu) => {
                    let (wa, wb) = (mu.log_weight(&x), mu.log_weight(&y));
                    if wa == f64::NEG_INFINITY && wb == f64::NEG_INFINITY {
                        report.inconclusive += 1;
                        continue;
                    }
                    (wa, wb, None, None)
                }
                MeasureModel::Empirical { samples, offset } => {
                    let ha = cylinder_hits(samples, &x, *offset)?;
                    let hb = cylinder_hits(samples, &y, *offset)?;
                    if ha < MIN_HITS || hb < MIN_HITS {
                        report.inconclusive += 1;
                        continue;
                    }
                    let total = samples.len() as f64;
                    // delta-method σ of log(p̂_a/p̂_b) for two binomial proportions
                    let var = (1.0 - ha as f64 / total) / ha as f64 + (1.0 - hb as f64 / total) / hb as f64;
                    ((ha as f64 / total).ln(), (hb as f64 / total).ln(), Some((ha, hb)), Some(3.0 * var.sqrt()))
                }
            };
            let dev = wa - wb - phi;
            if let (Some(b), Some(ok)) = (band, report.within_band.as_mut()) {
                *ok &= dev.abs() <= b;
            }
            if report.witness.is_none() || dev.abs() > report.max_log_deviation.abs() {
                report.max_log_deviation = dev;
                report.witness = Some(Witness {
                    left: l.clone(),
                    right: r.clone(),
                    log_weight_a: wa,
                    log_weight_b: wb,
                    log_cocycle: phi,
                    hits_a: hits.map(|h| h.0),
                    hits_b: hits.map(|h| h.1),
                    band,
                });
            }
        }
        if report.within_band == Some(true) && report.inconclusive == report.contexts {
            report.within_band = None;
        }
        reports.push(report);
    }
    Ok(reports)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SingularRow {
    pub n: usize,
    pub admissible: u64,
    pub containing_zero: u64,
    pub exactly_one_zero: u64,
    pub mu_containing_zero: f64,
    pub mu_zero_free: f64,
}

/// For the counterexample shift and its measure of maximal entropy (the
/// uniform Bernoulli measure on `{1, 2}`): at each length, words containing a
/// zero carry no mass, yet the holonomy that writes a single `0` maps the
/// full-mass zero-free words onto the positive-count set of one-zero words.
pub fn singular_witness_counterexample(n_max: usize) -> Result<Vec<SingularRow>> {
    let oracle = crate::counterexample::counterexample_oracle();
    let mu = BernoulliMeasure::new(vec![0.0, 0.5, 0.5])?;
    let zero = Symbol(0);
    let mut rows = Vec::with_capacity(n_max);
    for n in 1..=n_max {
        let mut row =
            SingularRow { n, admissible: 0, containing_zero: 0, exactly_one_zero: 0, mu_containing_zero: 0.0, mu_zero_free: 0.0 };
        visit_language(&oracle, n, DEFAULT_CAP, |w| {
            row.admissible += 1;
            let zeros = w.iter().filter(|s| **s == zero).count();
            let weight = mu.weight(w);
            if zeros > 0 {
                row.containing_zero += 1;
                row.mu_containing_zero += weight;
            } else {
                row.mu_zero_free += weight;
            }
            if zeros == 1 {
                row.exactly_one_zero += 1;
            }
        })?;
        rows.push(row);
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::language::enumerate_language;
    use crate::oracle::FullShift;
    use crate::sft::{equilibrium_markov, MarkovMeasure, Sft, TransitionMatrix};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn w(ix: &[u8]) -> Word {
        Word::from_indices(ix)
    }

    fn golden() -> Sft {
        Sft::new("golden", TransitionMatrix::golden_mean())
    }

    /// Brute-force exchangeability: compare admissibility of `l a r` and `l b r`
    /// over every pair of pad-length words of the ambient full shift.
    fn exchangeable(oracle: &dyn SubshiftOracle, a: &Word, b: &Word, pad: usize) -> bool {
        let full = FullShift::new(oracle.alphabet_size());
        let sides = enumerate_language(&full, pad).unwrap();
        sides.iter().all(|l| {
            sides.iter().all(|r| oracle.admissible(&l.concat(a).concat(r)) == oracle.admissible(&l.concat(b).concat(r)))
        })
    }

    #[test]
    fn swap_examples() {
        let full = FullShift::new(2);
        assert_eq!(find_swaps(&full, 1, 1).unwrap(), vec![SwapInvolution::new(w(&[0]), w(&[1])).unwrap()]);
        assert!(find_swaps(&golden(), 1, 1).unwrap().is_empty());
        assert!(find_swaps(&golden(), 2, 1).unwrap().is_empty());
        assert_eq!(find_swaps(&golden(), 3, 1).unwrap(), vec![SwapInvolution::new(w(&[0, 0, 0]), w(&[0, 1, 0])).unwrap()]);
    }

    #[test]
    fn swaps_match_brute_force_on_golden_mean() {
        let g = golden();
        for n in 1..=5 {
            let found = find_swaps(&g, n, 1).unwrap();
            let words = enumerate_language(&g, n).unwrap();
            let mut expected = Vec::new();
            for (i, a) in words.iter().enumerate() {
                for b in &words[i + 1..] {
                    if exchangeable(&g, a, b, 1) {
                        expected.push(SwapInvolution::new(a.clone(), b.clone()).unwrap());
                    }
                }
            }
            assert_eq!(found, expected, "n = {n}");
        }
    }

    #[test]
    fn sft_swaps_are_stable_in_pad() {
        let a = TransitionMatrix::new(vec![vec![1, 1, 0], vec![0, 1, 1], vec![1, 0, 1]]).unwrap();
        for sft in [golden(), Sft::new("three", a)] {
            for n in 1..=4 {
                let base = find_swaps(&sft, n, 1).unwrap();
                for pad in 2..=3 {
                    assert_eq!(find_swaps(&sft, n, pad).unwrap(), base);
                }
            }
        }
    }

    #[test]
    fn full_shift_swaps_everything() {
        let full = FullShift::new(3);
        for n in 1..=3 {
            let m = 3usize.pow(n as u32);
            assert_eq!(find_swaps(&full, n, 1).unwrap().len(), m * (m - 1) / 2);
        }
    }

    #[test]
    fn composition_law() {
        let g = golden();
        for n in 3..=6 {
            let swaps = find_swaps(&g, n, 1).unwrap();
            for s in &swaps {
                for t in &swaps {
                    if s.b == t.a {
                        assert!(swaps.contains(&SwapInvolution::new(s.a.clone(), t.b.clone()).unwrap()));
                    }
                }
            }
        }
    }

    #[test]
    fn swap_is_an_involution() {
        let s = SwapInvolution::new(w(&[1, 0]), w(&[0, 0])).unwrap();
        assert_eq!(s, s.reversed());
        let x = w(&[1, 1, 0, 1]);
        let once = s.apply(&x, 1);
        assert_eq!(once, w(&[1, 0, 0, 1]));
        assert_eq!(s.apply(&once, 1), x);
        assert_eq!(s.apply(&x, 2), x);
    }

    #[test]
    fn conformal_examples() {
        let full = FullShift::new(2);
        let swaps = find_swaps(&full, 1, 1).unwrap();
        let zero = LocalPotential::zero(0, 2);
        let uniform = BernoulliMeasure::uniform(2);
        let rep = check_conformal(&MeasureModel::Exact(&uniform), &zero, &swaps, 1, &full).unwrap();
        assert_eq!(rep[0].max_log_deviation, 0.0);
        assert_eq!(rep[0].contexts, 4);
        let skew = BernoulliMeasure::new(vec![0.75, 0.25]).unwrap();
        let rep = check_conformal(&MeasureModel::Exact(&skew), &zero, &swaps, 1, &full).unwrap();
        assert!((rep[0].max_log_deviation.abs() - 3f64.ln()).abs() < 1e-12);
    }

    #[test]
    fn sft_equilibrium_is_conformal() {
        let g = golden();
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..5 {
            let f = [rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0)];
            let mu = equilibrium_markov(g.matrix(), &f).unwrap();
            let pot = LocalPotential::site(&f);
            for n in 3..=6 {
                let swaps = find_swaps(&g, n, 1).unwrap();
                for rep in check_conformal(&MeasureModel::Exact(&mu), &pot, &swaps, 1, &g).unwrap() {
                    assert!(rep.max_log_deviation.abs() <= 1e-10, "{rep:?}");
                }
            }
        }
    }

    #[test]
    fn reversing_a_swap_negates_the_deviation() {
        let g = golden();
        let mu = MarkovMeasure::two_state(0.3, 1.0).unwrap();
        let pot = LocalPotential::site(&[0.2, -0.4]);
        for s in find_swaps(&g, 4, 1).unwrap() {
            let r1 = &check_conformal(&MeasureModel::Exact(&mu), &pot, std::slice::from_ref(&s), 1, &g).unwrap()[0];
            let r2 = &check_conformal(&MeasureModel::Exact(&mu), &pot, &[s.reversed()], 1, &g).unwrap()[0];
            assert!((r1.max_log_deviation + r2.max_log_deviation).abs() < 1e-12);
        }
    }

    #[test]
    fn pad_must_cover_the_potential() {
        let full = FullShift::new(2);
        let swaps = find_swaps(&full, 1, 1).unwrap();
        let f = LocalPotential::zero(1, 2);
        let mu = BernoulliMeasure::uniform(2);
        assert!(check_conformal(&MeasureModel::Exact(&mu), &f, &swaps, 1, &full).is_err());
        assert!(check_conformal(&MeasureModel::Exact(&mu), &f, &swaps, 2, &full).is_ok());
    }

    #[test]
    fn empirical_mode_bands_and_inconclusive() {
        let full = FullShift::new(2);
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let samples: Vec<Word> = (0..20_000).map(|_| Word::from_indices(&[rng.gen_range(0..2), rng.gen_range(0..2), rng.gen_range(0..2)])).collect();
        let swaps = find_swaps(&full, 1, 1).unwrap();
        let zero = LocalPotential::zero(0, 2);
        let model = MeasureModel::Empirical { samples: &samples, offset: 0 };
        let rep = &check_conformal(&model, &zero, &swaps, 1, &full).unwrap()[0];
        assert_eq!(rep.mode, "empirical");
        assert_eq!(rep.within_band, Some(true));
        assert_eq!(rep.inconclusive, 0);

        let few = &samples[..100];
        let model = MeasureModel::Empirical { samples: few, offset: 0 };
        let rep = &check_conformal(&model, &zero, &swaps, 1, &full).unwrap()[0];
        assert_eq!(rep.inconclusive, rep.contexts);
        assert_eq!(rep.within_band, None);
    }

    #[test]
    fn report_json_shape() {
        let full = FullShift::new(2);
        let swaps = find_swaps(&full, 1, 1).unwrap();
        let mu = BernoulliMeasure::new(vec![1.0, 0.0]).unwrap();
        let rep = check_conformal(&MeasureModel::Exact(&mu), &LocalPotential::zero(0, 2), &swaps, 1, &full).unwrap();
        let v = serde_json::to_value(&rep[0]).unwrap();
        assert_eq!(v["mode"], "exact");
        assert_eq!(v["pad"], 1);
        assert_eq!(v["max_log_deviation"], "inf");
        assert_eq!(v["swap"]["a"], serde_json::json!([0]));
    }

    #[test]
    fn singular_witness() {
        let rows = singular_witness_counterexample(8).unwrap();
        assert_eq!(rows[0].admissible, 3);
        for r in &rows {
            assert_eq!(r.mu_containing_zero, 0.0);
            assert!((r.mu_zero_free - 1.0).abs() < 1e-12);
            assert!(r.containing_zero > 0);
            assert_eq!(r.exactly_one_zero, r.n as u64 * (1 << (r.n - 1)));
        }
        assert!(rows[4].exactly_one_zero > 0);
    }
}
