//! Random-walk-in-random-scenery shifts over a full-shift scenery.
//!
//! A point is a sequence of pairs `(x_i, y_i)` with `x_i = ±1` a walk step
//! and `y_i` the scenery symbol read at the walker's current location. The
//! walker reads and then steps, so position `i` sits at
//! `location(i) = Σ_{k<i} x_k`. A finite word is admissible exactly when any
//! two positions at the same location read the same symbol.
//!
//! Symbols are encoded as `2·y + [x = +1]`, displayed as `+3`, `-1`, ...
//! with scenery symbols numbered from 1.

use std::collections::HashMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::language::visit_language;
use crate::measure::CylinderWeight;
use crate::oracle::SubshiftOracle;
use crate::sft::MarkovMeasure;
use crate::word::{Symbol, Word};

/// Smallest hit count for a conclusive Monte Carlo comparison.
pub const MIN_HITS: u64 = 100;

/// Lazily sampled past and future walks stop once the chance of ever
/// returning falls below this.
const RETURN_CUTOFF: f64 = 1e-15;
const MAX_TAIL_STEPS: usize = 1_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct KalikowConfig {
    /// `N`: the scenery alphabet is `{1, …, N}`.
    pub scenery_size: usize,
    /// Probability of a `+1` step.
    pub p: f64,
}

impl KalikowConfig {
    pub fn new(scenery_size: usize, p: f64) -> Result<Self> {
        if !(2..=127).contains(&scenery_size) {
            return Err(Error::InvalidParams(format!("scenery size {scenery_size} outside 2..=127")));
        }
        if !(p > 0.0 && p < 1.0) {
            return Err(Error::InvalidParams(format!("p = {p} outside (0, 1)")));
        }
        Ok(KalikowConfig { scenery_size, p })
    }
}

/// A walk over `{−1, +1}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct WalkWord {
    pub steps: Vec<i8>,
}

impl WalkWord {
    pub fn new(steps: Vec<i8>) -> Result<Self> {
        if steps.iter().any(|s| *s != 1 && *s != -1) {
            return Err(Error::InvalidWord("walk steps must be ±1".into()));
        }
        Ok(WalkWord { steps })
    }

    /// Parses a string of `+` and `-`.
    pub fn parse(text: &str) -> Result<Self> {
        let steps = text
            .chars()
            .filter(|c| !c.is_whitespace())
            .map(|c| match c {
                '+' => Ok(1),
                '-' => Ok(-1),
                _ => Err(Error::InvalidWord(format!("unexpected `{c}` in walk `{text}`"))),
            })
            .collect::<Result<Vec<i8>>>()?;
        Ok(WalkWord { steps })
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    /// `Φ`, the total displacement.
    pub fn phi(&self) -> i64 {
        self.steps.iter().map(|s| *s as i64).sum()
    }

    /// `Φ_0 = 0, Φ_1, …, Φ_n`.
    pub fn partial_sums(&self) -> Vec<i64> {
        let mut out = Vec::with_capacity(self.steps.len() + 1);
        let mut acc = 0i64;
        out.push(0);
        for s in &self.steps {
            acc += *s as i64;
            out.push(acc);
        }
        out
    }

    /// Locations read by the `n` positions: `Φ_0, …, Φ_{n−1}`.
    pub fn locations(&self) -> Vec<i64> {
        let mut sums = self.partial_sums();
        sums.pop();
        sums
    }

    /// `Φ > 0`, `0 ≤ Φ_j < Φ` for `j < n`: the walk climbs from its start to
    /// its end reading only locations `0..Φ`.
    pub fn is_strict_excursion(&self) -> bool {
        let phi = self.phi();
        let sums = self.partial_sums();
        phi > 0 && sums[..sums.len() - 1].iter().all(|s| (0..phi).contains(s))
    }

    pub fn format(&self) -> String {
        self.steps.iter().map(|s| if *s > 0 { '+' } else { '-' }).collect()
    }
}

/// All strict excursions of length `n` and displacement `phi`.
pub fn strict_excursions(n: usize, phi: i64) -> Vec<WalkWord> {
    fn go(n: usize, phi: i64, pos: i64, acc: &mut Vec<i8>, out: &mut Vec<WalkWord>) {
        if acc.len() == n {
            if pos == phi {
                out.push(WalkWord { steps: acc.clone() });
            }
            return;
        }
        let left = (n - acc.len()) as i64;
        for s in [1i8, -1] {
            let next = pos + s as i64;
            let last = acc.len() + 1 == n;
            let ok = if last { next == phi } else { (0..phi).contains(&next) };
            if ok && (phi - next).abs() < left {
                acc.push(s);
                go(n, phi, next, acc, out);
                acc.pop();
            }
        }
    }
    let mut out = Vec::new();
    if phi > 0 {
        go(n, phi, 0, &mut Vec::new(), &mut out);
    }
    out
}

/// A word of `(step, scenery)` pairs; scenery symbols are stored from 0.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct KalikowWord {
    pub walk: WalkWord,
    pub scenery: Vec<u8>,
}

impl KalikowWord {
    pub fn new(walk: WalkWord, scenery: Vec<u8>) -> Result<Self> {
        if walk.len() != scenery.len() {
            return Err(Error::InvalidWord("walk and scenery lengths differ".into()));
        }
        Ok(KalikowWord { walk, scenery })
    }

    pub fn len(&self) -> usize {
        self.scenery.len()
    }

    pub fn is_empty(&self) -> bool {
        self.scenery.is_empty()
    }

    pub fn to_word(&self) -> Word {
        Word(self.walk.steps.iter().zip(&self.scenery).map(|(s, y)| encode(*s, *y)).collect())
    }

    pub fn from_word(word: &[Symbol]) -> Self {
        let (steps, scenery) = word.iter().map(|s| decode(*s)).unzip();
        KalikowWord { walk: WalkWord { steps }, scenery }
    }

    /// Reads a word such as `+1 -2 +1`.
    pub fn parse(text: &str, scenery_size: usize) -> Result<Self> {
        let w = kalikow_oracle(KalikowConfig::new(scenery_size, 0.5)?).parse_word(text)?;
        Ok(KalikowWord::from_word(&w))
    }
}

fn encode(step: i8, y: u8) -> Symbol {
    Symbol(2 * y + (step > 0) as u8)
}

fn decode(s: Symbol) -> (i8, u8) {
    (if s.0 % 2 == 1 { 1 } else { -1 }, s.0 / 2)
}

#[derive(Debug, Clone)]
pub struct KalikowOracle {
    scenery_size: usize,
    name: String,
}

pub fn kalikow_oracle(config: KalikowConfig) -> KalikowOracle {
    KalikowOracle { scenery_size: config.scenery_size, name: format!("kalikow-{}", config.scenery_size) }
}

impl SubshiftOracle for KalikowOracle {
    fn name(&self) -> &str {
        &self.name
    }

    fn alphabet_size(&self) -> usize {
        2 * self.scenery_size
    }

    fn admissible(&self, word: &[Symbol]) -> bool {
        let mut seen: HashMap<i64, u8> = HashMap::new();
        let mut loc = 0i64;
        for s in word {
            if s.index() >= self.alphabet_size() {
                return false;
            }
            let (step, y) = decode(*s);
            if *seen.entry(loc).or_insert(y) != y {
                return false;
            }
            loc += step as i64;
        }
        true
    }

    fn admissible_extension(&self, prefix: &[Symbol], next: Symbol) -> bool {
        if next.index() >= self.alphabet_size() {
            return false;
        }
        let target: i64 = prefix.iter().map(|s| decode(*s).0 as i64).sum();
        let y = decode(next).1;
        let mut loc = 0i64;
        for s in prefix {
            let (step, ys) = decode(*s);
            if loc == target && ys != y {
                return false;
            }
            loc += step as i64;
        }
        true
    }

    fn symbol_names(&self) -> Vec<String> {
        (0..self.alphabet_size())
            .map(|i| {
                let (step, y) = decode(Symbol(i as u8));
                format!("{}{}", if step > 0 { '+' } else { '-' }, y + 1)
            })
            .collect()
    }
}

/// `H(p) = −p log p − (1−p) log(1−p)`.
pub fn binary_entropy(p: f64) -> f64 {
    crate::stats::entropy(&[p, 1.0 - p])
}

/// Entropy of `μ_p`: `|2p − 1|·log N + H(p)`.
pub fn mu_p_entropy(config: &KalikowConfig) -> f64 {
    (2.0 * config.p - 1.0).abs() * (config.scenery_size as f64).ln() + binary_entropy(config.p)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OptimalP {
    pub p_plus: f64,
    pub p_minus: f64,
    pub h_top: f64,
    /// Best grid points above and below 1/2, and the grid spacing.
    pub grid_argmax_plus: f64,
    pub grid_argmax_minus: f64,
    pub grid_max: f64,
    pub grid_spacing: f64,
}

const GRID_POINTS: usize = 10_000;

/// The two entropy-maximizing walk biases `N²/(1+N²)`, `1/(1+N²)` and the
/// topological entropy `log((N²+1)/N)`, with a grid scan of `mu_p_entropy`
/// for comparison.
pub fn optimal_p(config: &KalikowConfig) -> OptimalP {
    let n = config.scenery_size as f64;
    let n2 = n * n;
    let h = |p: f64| mu_p_entropy(&KalikowConfig { p, ..*config });
    let spacing = 1.0 / GRID_POINTS as f64;
    let mut best_plus = (f64::NEG_INFINITY, 0.0);
    let mut best_minus = (f64::NEG_INFINITY, 0.0);
    for i in 1..GRID_POINTS {
        let p = i as f64 * spacing;
        let v = h(p);
        let slot = if p > 0.5 { &mut best_plus } else { &mut best_minus };
        if v > slot.0 {
            *slot = (v, p);
        }
    }
    OptimalP {
        p_plus: n2 / (1.0 + n2),
        p_minus: 1.0 / (1.0 + n2),
        h_top: ((n2 + 1.0) / n).ln(),
        grid_argmax_plus: best_plus.1,
        grid_argmax_minus: best_minus.1,
        grid_max: best_plus.0.max(best_minus.0),
        grid_spacing: spacing,
    }
}

/// The measure `μ_p`: i.i.d. steps and an i.i.d. uniform scenery, read along
/// the walk.
#[derive(Debug, Clone, Copy)]
pub struct MuP {
    pub config: KalikowConfig,
}

impl CylinderWeight for MuP {
    /// `p^{#up}(1−p)^{#down}·N^{−#locations}` on admissible words, else 0.
    fn weight(&self, word: &[Symbol]) -> f64 {
        self.log_weight(word).exp()
    }

    fn log_weight(&self, word: &[Symbol]) -> f64 {
        let oracle = kalikow_oracle(self.config);
        if !oracle.admissible(word) {
            return f64::NEG_INFINITY;
        }
        let w = KalikowWord::from_word(word);
        let ups = w.walk.steps.iter().filter(|s| **s > 0).count() as f64;
        let downs = w.len() as f64 - ups;
        let mut locs = w.walk.locations();
        locs.sort_unstable();
        locs.dedup();
        ups * self.config.p.ln() + downs * (1.0 - self.config.p).ln()
            - locs.len() as f64 * (self.config.scenery_size as f64).ln()
    }
}

/// A `μ_p` sample of `length` positions.
pub fn sample_mu_p(config: &KalikowConfig, length: usize, seed: u64) -> KalikowWord {
    sample_mu_p_with(config, length, &mut ChaCha8Rng::seed_from_u64(seed))
}

pub fn sample_mu_p_with<R: Rng>(config: &KalikowConfig, length: usize, rng: &mut R) -> KalikowWord {
    let mut scenery: HashMap<i64, u8> = HashMap::new();
    let mut loc = 0i64;
    let mut steps = Vec::with_capacity(length);
    let mut reads = Vec::with_capacity(length);
    for _ in 0..length {
        let y = *scenery.entry(loc).or_insert_with(|| rng.gen_range(0..config.scenery_size) as u8);
        let step: i8 = if rng.gen::<f64>() < config.p { 1 } else { -1 };
        reads.push(y);
        steps.push(step);
        loc += step as i64;
    }
    KalikowWord { walk: WalkWord { steps }, scenery: reads }
}

/// `−Σ μ[w] log μ[w]` over words of length `k`, by enumeration.
pub fn block_entropy_exact(config: &KalikowConfig, k: usize) -> Result<f64> {
    let mu = MuP { config: *config };
    let mut h = 0.0;
    visit_language(&kalikow_oracle(*config), k, crate::language::DEFAULT_CAP, |w| {
        let lw = mu.log_weight(w);
        h -= lw.exp() * lw;
    })?;
    Ok(h)
}

/// Plug-in block entropy of the overlapping length-`k` windows of a sample.
pub fn block_entropy_plugin(sample: &KalikowWord, k: usize) -> f64 {
    let word = sample.to_word();
    if k == 0 || word.len() < k {
        return 0.0;
    }
    let mut counts: HashMap<&[Symbol], u64> = HashMap::new();
    for w in word.windows(k) {
        *counts.entry(w).or_insert(0) += 1;
    }
    let total = (word.len() - k + 1) as f64;
    counts.values().map(|c| {
        let q = *c as f64 / total;
        -q * q.ln()
    }).sum()
}

/// Closed-form `μ_p([w]_0) = (1/N)^Φ p^{(n+Φ)/2} (1−p)^{(n−Φ)/2}` for a
/// strict excursion.
pub fn excursion_weight(config: &KalikowConfig, w: &KalikowWord) -> Result<f64> {
    if !w.walk.is_strict_excursion() {
        return Err(Error::InvalidWord(format!("`{}` is not a strict excursion", w.walk.format())));
    }
    if !kalikow_oracle(*config).admissible(&w.to_word()) {
        return Err(Error::InvalidWord("scenery reads are inconsistent".into()));
    }
    let n = w.len() as f64;
    let phi = w.walk.phi() as f64;
    let p = config.p;
    Ok((1.0 / config.scenery_size as f64).powf(phi) * p.powf((n + phi) / 2.0) * (1.0 - p).powf((n - phi) / 2.0))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExcursionMonteCarlo {
    pub trials: u64,
    pub seed: u64,
    /// Trials landing in the event that the past stays below the window's
    /// start and the future stays at or above its end.
    pub event_hits: u64,
    pub hits_w1: u64,
    pub hits_w2: u64,
    pub ratio: f64,
    pub sigma: f64,
    pub within_band: bool,
    pub inconclusive: bool,
    /// Conditional mass of all strict excursions with this `(n, Φ)`.
    pub family_mass_exact: f64,
    pub family_mass_empirical: f64,
    pub family_mass_sigma: f64,
    pub family_within_band: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExcursionReport {
    pub n: usize,
    pub phi: i64,
    pub p: f64,
    pub scenery_size: usize,
    pub weight_w1: f64,
    pub weight_w2: f64,
    pub exact_ratio: f64,
    pub monte_carlo: Option<ExcursionMonteCarlo>,
}

impl ExcursionReport {
    pub fn passes(&self) -> bool {
        (self.exact_ratio - 1.0).abs() <= 1e-12
            && self.monte_carlo.as_ref().is_none_or(|m| !m.inconclusive && m.within_band && m.family_within_band)
    }
}

/// Walk backward from location 0 and report whether every earlier position
/// sits strictly below it.
fn past_stays_below(p: f64, rng: &mut impl Rng) -> bool {
    let ratio = (1.0 - p) / p;
    let mut loc = 0i64;
    for _ in 0..MAX_TAIL_STEPS {
        // loc(j) = loc(j+1) − x_j
        loc -= if rng.gen::<f64>() < p { 1 } else { -1 };
        if loc >= 0 {
            return false;
        }
        if ratio.powi(-loc as i32) < RETURN_CUTOFF {
            return true;
        }
    }
    false
}

/// Walk forward from the window's end and report whether every later
/// position reads a location at or above it.
fn future_stays_above(p: f64, rng: &mut impl Rng) -> bool {
    let ratio = (1.0 - p) / p;
    let mut height = 0i64;
    for _ in 0..MAX_TAIL_STEPS {
        height += if rng.gen::<f64>() < p { 1 } else { -1 };
        if height < 0 {
            return false;
        }
        if ratio.powi(height as i32 + 1) < RETURN_CUTOFF {
            return true;
        }
    }
    false
}

/// Compares two strict excursions of equal `(n, Φ)`. Exact mode evaluates the
/// closed-form weights. With `trials > 0` it also samples `μ_p` around a
/// window at time 0, conditions on the event that the past stays strictly
/// below the window's start and the future at or above its end, and compares
/// the hit counts of the two cylinders (`σ = ratio·√(1/c₁ + 1/c₂)`).
pub fn excursion_invariance_test(
    config: &KalikowConfig,
    w1: &KalikowWord,
    w2: &KalikowWord,
    trials: u64,
    seed: u64,
) -> Result<ExcursionReport> {
    let n = w1.len();
    let phi = w1.walk.phi();
    if w2.len() != n || w2.walk.phi() != phi {
        return Err(Error::InvalidWord("excursions must share length and displacement".into()));
    }
    let weight_w1 = excursion_weight(config, w1)?;
    let weight_w2 = excursion_weight(config, w2)?;
    let mut report = ExcursionReport {
        n,
        phi,
        p: config.p,
        scenery_size: config.scenery_size,
        weight_w1,
        weight_w2,
        exact_ratio: weight_w1 / weight_w2,
        monte_carlo: None,
    };
    if trials == 0 {
        return Ok(report);
    }
    if config.p <= 0.5 {
        return Err(Error::InvalidParams("Monte Carlo conditioning needs p > 1/2".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (mut event, mut c1, mut c2, mut family) = (0u64, 0u64, 0u64, 0u64);
    let mut steps = vec![0i8; n];
    let mut reads = vec![0u8; n];
    let mut scenery: HashMap<i64, u8> = HashMap::new();
    for _ in 0..trials {
        scenery.clear();
        let mut loc = 0i64;
        for i in 0..n {
            reads[i] = *scenery.entry(loc).or_insert_with(|| rng.gen_range(0..config.scenery_size) as u8);
            steps[i] = if rng.gen::<f64>() < config.p { 1 } else { -1 };
            loc += steps[i] as i64;
        }
        if !past_stays_below(config.p, &mut rng) || !future_stays_above(config.p, &mut rng) {
            continue;
        }
        event += 1;
        let walk = WalkWord { steps: steps.clone() };
        if walk.phi() == phi && walk.is_strict_excursion() {
            family += 1;
        }
        if steps == w1.walk.steps && reads == w1.scenery {
            c1 += 1;
        }
        if steps == w2.walk.steps && reads == w2.scenery {
            c2 += 1;
        }
    }
    let ratio = c1 as f64 / c2 as f64;
    let sigma = ratio * (1.0 / c1 as f64 + 1.0 / c2 as f64).sqrt();
    let inconclusive = c1.min(c2) < MIN_HITS;
    let walks = strict_excursions(n, phi).len() as f64;
    let family_mass_exact = walks * config.p.powf((n as f64 + phi as f64) / 2.0)
        * (1.0 - config.p).powf((n as f64 - phi as f64) / 2.0);
    let family_mass_empirical = family as f64 / event.max(1) as f64;
    let family_mass_sigma = crate::stats::binomial_sigma(family_mass_exact, event.max(1));
    report.monte_carlo = Some(ExcursionMonteCarlo {
        trials,
        seed,
        event_hits: event,
        hits_w1: c1,
        hits_w2: c2,
        ratio,
        sigma,
        within_band: !inconclusive && (ratio - 1.0).abs() <= 3.0 * sigma,
        inconclusive,
        family_mass_exact,
        family_mass_empirical,
        family_mass_sigma,
        family_within_band: (family_mass_empirical - family_mass_exact).abs() <= 3.0 * family_mass_sigma,
    });
    Ok(report)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SceneryReport {
    pub n: usize,
    pub phi: i64,
    pub k: usize,
    pub trials: u64,
    pub seed: u64,
    /// Scenery pattern compared on both sides, on locations
    /// `loc(k) + window_start ..` (the most likely pattern of the scenery law).
    pub window_start: i64,
    pub pattern: Vec<u8>,
    /// `2^{−n}·ν(pattern)`, shared by both events.
    pub exact_mass: f64,
    pub hits_a: u64,
    pub hits_b: u64,
    pub empirical_a: f64,
    pub empirical_b: f64,
    pub ratio: f64,
    pub sigma: f64,
    pub within_band: bool,
    pub inconclusive: bool,
}

impl SceneryReport {
    pub fn passes(&self) -> bool {
        !self.inconclusive && self.within_band
    }
}

/// Most likely path of length `len` under a Markov law.
fn most_likely_pattern(nu: &MarkovMeasure, len: usize) -> Vec<u8> {
    let m = nu.size();
    let mut score: Vec<f64> = nu.stationary.iter().map(|p| p.ln()).collect();
    let mut back: Vec<Vec<usize>> = Vec::new();
    for _ in 1..len {
        let mut next = vec![f64::NEG_INFINITY; m];
        let mut arg = vec![0usize; m];
        for j in 0..m {
            for i in 0..m {
                let v = score[i] + nu.transition[i][j].ln();
                if v > next[j] {
                    next[j] = v;
                    arg[j] = i;
                }
            }
        }
        score = next;
        back.push(arg);
    }
    let mut s = (0..m).max_by(|a, b| score[*a].total_cmp(&score[*b])).unwrap_or(0);
    let mut out = vec![s as u8];
    for arg in back.iter().rev() {
        s = arg[s];
        out.push(s as u8);
    }
    out.reverse();
    out
}

/// Lazily extended stationary Markov scenery on `Z`: rightward by the chain,
/// leftward by its time reversal.
struct LazyScenery<'a> {
    nu: &'a MarkovMeasure,
    reversed: &'a [Vec<f64>],
    right: Vec<u8>,
    left: Vec<u8>,
}

impl<'a> LazyScenery<'a> {
    fn new(nu: &'a MarkovMeasure, reversed: &'a [Vec<f64>], rng: &mut impl Rng) -> Self {
        let first = MarkovMeasure::draw(rng, &nu.stationary) as u8;
        LazyScenery { nu, reversed, right: vec![first], left: Vec::new() }
    }

    fn at(&mut self, loc: i64, rng: &mut impl Rng) -> u8 {
        if loc >= 0 {
            while self.right.len() <= loc as usize {
                let last = *self.right.last().unwrap() as usize;
                self.right.push(MarkovMeasure::draw(rng, &self.nu.transition[last]) as u8);
            }
            self.right[loc as usize]
        } else {
            let i = (-loc - 1) as usize;
            while self.left.len() <= i {
                let last = *self.left.last().unwrap_or(&self.right[0]) as usize;
                self.left.push(MarkovMeasure::draw(rng, &self.reversed[last]) as u8);
            }
            self.left[i]
        }
    }
}

/// Samples `ν̂ = (symmetric walk × ν)∘π⁻¹` on times `0..k+n` and compares the
/// events "walk equals `a` on `[k, k+n)` and the scenery around `loc(k)`
/// shows the pattern" and the same with `b`; the holonomy exchanging `a` and
/// `b` while keeping the scenery should preserve their mass.
pub fn scenery_measure_invariance_test(
    nu: &MarkovMeasure,
    a: &WalkWord,
    b: &WalkWord,
    k: usize,
    trials: u64,
    seed: u64,
) -> Result<SceneryReport> {
    if a.len() != b.len() || a.phi() != b.phi() {
        return Err(Error::InvalidWord("walks must share length and displacement".into()));
    }
    if nu.stationary.iter().any(|p| *p <= 0.0) {
        return Err(Error::InvalidParams("scenery law needs a positive stationary vector".into()));
    }
    let n = a.len();
    let locs: Vec<i64> = a.locations().into_iter().chain(b.locations()).collect();
    let (lo, hi) = (locs.iter().copied().min().unwrap_or(0), locs.iter().copied().max().unwrap_or(0));
    let pattern = most_likely_pattern(nu, (hi - lo + 1) as usize);
    let pattern_word = Word(pattern.iter().map(|s| Symbol(*s)).collect());
    let exact_mass = 0.5f64.powi(n as i32) * nu.weight(&pattern_word);
    let m = nu.size();
    let reversed: Vec<Vec<f64>> = (0..m)
        .map(|i| (0..m).map(|j| nu.stationary[j] * nu.transition[j][i] / nu.stationary[i]).collect())
        .collect();

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (mut ha, mut hb) = (0u64, 0u64);
    let mut walk = vec![0i8; k + n];
    for _ in 0..trials {
        for s in walk.iter_mut() {
            *s = if rng.gen::<bool>() { 1 } else { -1 };
        }
        let window = &walk[k..];
        let is_a = window == a.steps.as_slice();
        let is_b = window == b.steps.as_slice();
        let mut scenery = LazyScenery::new(nu, &reversed, &mut rng);
        // read the scenery along the whole path, as the projection does
        let mut loc = 0i64;
        for s in &walk[..k] {
            scenery.at(loc, &mut rng);
            loc += *s as i64;
        }
        let start = loc;
        for s in window {
            scenery.at(loc, &mut rng);
            loc += *s as i64;
        }
        if !(is_a || is_b) {
            continue;
        }
        let matches = (lo..=hi).zip(&pattern).all(|(d, z)| scenery.at(start + d, &mut rng) == *z);
        if matches {
            ha += is_a as u64;
            hb += is_b as u64;
        }
    }
    let ratio = ha as f64 / hb as f64;
    let sigma = ratio * (1.0 / ha as f64 + 1.0 / hb as f64).sqrt();
    let inconclusive = ha.min(hb) < MIN_HITS;
    Ok(SceneryReport {
        n,
        phi: a.phi(),
        k,
        trials,
        seed,
        window_start: lo,
        pattern,
        exact_mass,
        hits_a: ha,
        hits_b: hb,
        empirical_a: ha as f64 / trials as f64,
        empirical_b: hb as f64 / trials as f64,
        ratio,
        sigma,
        within_band: !inconclusive && (ratio - 1.0).abs() <= 3.0 * sigma,
        inconclusive,
    })
}
