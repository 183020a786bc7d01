//! One-step shifts of finite type, Perron data and their Markov equilibria.
//!
//! For a site potential `f` the relevant transfer matrix is
//! `B_ij = A_ij·exp(f_j)`. Its Perron root gives the pressure and its left and
//! right eigenvectors give the unique equilibrium, a stationary Markov chain.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::measure::CylinderWeight;
use crate::oracle::SubshiftOracle;
use crate::word::{Symbol, Word};

/// Square 0/1 matrix; `rows[i][j] = 1` allows `i` to be followed by `j`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "MatrixFile", into = "MatrixFile")]
pub struct TransitionMatrix {
    size: usize,
    rows: Vec<Vec<u8>>,
}

#[derive(Serialize, Deserialize)]
struct MatrixFile {
    size: usize,
    rows: Vec<Vec<u8>>,
}

impl TryFrom<MatrixFile> for TransitionMatrix {
    type Error = Error;
    fn try_from(file: MatrixFile) -> Result<Self> {
        if file.rows.len() != file.size {
            return Err(Error::InvalidMatrix(format!("size {} but {} rows", file.size, file.rows.len())));
        }
        TransitionMatrix::new(file.rows)
    }
}

impl From<TransitionMatrix> for MatrixFile {
    fn from(m: TransitionMatrix) -> Self {
        MatrixFile { size: m.size, rows: m.rows }
    }
}

impl TransitionMatrix {
    pub fn new(rows: Vec<Vec<u8>>) -> Result<Self> {
        let size = rows.len();
        if !(1..=256).contains(&size) {
            return Err(Error::InvalidMatrix(format!("size {size} out of range")));
        }
        for (i, row) in rows.iter().enumerate() {
            if row.len() != size {
                return Err(Error::InvalidMatrix(format!("row {i} has length {}", row.len())));
            }
            if row.iter().any(|a| *a > 1) {
                return Err(Error::InvalidMatrix(format!("row {i} is not 0/1")));
            }
            if row.iter().all(|a| *a == 0) {
                return Err(Error::InvalidMatrix(format!("row {i} is zero")));
            }
        }
        if let Some(j) = (0..size).find(|j| rows.iter().all(|r| r[*j] == 0)) {
            return Err(Error::InvalidMatrix(format!("column {j} is zero")));
        }
        Ok(TransitionMatrix { size, rows })
    }

    pub fn golden_mean() -> Self {
        TransitionMatrix::new(vec![vec![1, 1], vec![1, 0]]).unwrap()
    }

    pub fn full(m: usize) -> Self {
        TransitionMatrix::new(vec![vec![1; m]; m]).unwrap()
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn rows(&self) -> &[Vec<u8>] {
        &self.rows
    }

    #[inline]
    pub fn allows(&self, i: usize, j: usize) -> bool {
        self.rows[i][j] == 1
    }

    fn reach_all(&self, transpose: bool) -> bool {
        let mut seen = vec![false; self.size];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(i) = stack.pop() {
            for j in 0..self.size {
                let edge = if transpose { self.allows(j, i) } else { self.allows(i, j) };
                if edge && !seen[j] {
                    seen[j] = true;
                    stack.push(j);
                }
            }
        }
        seen.into_iter().all(|s| s)
    }

    /// Strong connectivity of the transition graph.
    pub fn is_irreducible(&self) -> bool {
        self.reach_all(false) && self.reach_all(true)
    }

    /// `A^k > 0` entrywise for some `k ≤ m²`.
    pub fn is_mixing(&self) -> bool {
        let m = self.size;
        let mut power: Vec<Vec<bool>> = self.rows.iter().map(|r| r.iter().map(|a| *a == 1).collect()).collect();
        for _ in 0..m * m {
            if power.iter().all(|r| r.iter().all(|a| *a)) {
                return true;
            }
            power = (0..m)
                .map(|i| (0..m).map(|j| (0..m).any(|k| power[i][k] && self.allows(k, j))).collect())
                .collect();
        }
        false
    }
}

/// The vertex shift defined by a transition matrix. Since no row or column is
/// zero, every word with allowed consecutive pairs extends to a bi-infinite
/// point, so that is the admissibility test.
#[derive(Debug, Clone)]
pub struct Sft {
    name: String,
    matrix: TransitionMatrix,
}

impl Sft {
    pub fn new(name: impl Into<String>, matrix: TransitionMatrix) -> Self {
        Sft { name: name.into(), matrix }
    }

    pub fn matrix(&self) -> &TransitionMatrix {
        &self.matrix
    }
}

impl SubshiftOracle for Sft {
    fn name(&self) -> &str {
        &self.name
    }

    fn alphabet_size(&self) -> usize {
        self.matrix.size
    }

    fn admissible(&self, word: &[Symbol]) -> bool {
        word.iter().all(|s| s.index() < self.matrix.size)
            && word.windows(2).all(|p| self.matrix.allows(p[0].index(), p[1].index()))
    }

    fn admissible_extension(&self, prefix: &[Symbol], next: Symbol) -> bool {
        next.index() < self.matrix.size && prefix.last().is_none_or(|s| self.matrix.allows(s.index(), next.index()))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PerronData {
    pub lambda: f64,
    /// Normalized so that `left · right = 1`.
    pub left: Vec<f64>,
    /// Normalized to sum 1.
    pub right: Vec<f64>,
}

const PERRON_TOL: f64 = 1e-13;
const PERRON_MAX_ITER: usize = 1_000_000;

fn check_site(a: &TransitionMatrix, f: &[f64]) -> Result<()> {
    if f.len() != a.size {
        return Err(Error::InvalidPotential(format!("{} site values for {} symbols", f.len(), a.size)));
    }
    if f.iter().any(|v| !v.is_finite()) {
        return Err(Error::InvalidPotential("non-finite site value".into()));
    }
    Ok(())
}

/// Power iteration on `M + I` (aperiodic even when `M` is periodic), starting
/// from the all-ones vector. Stops once the Collatz–Wielandt bounds
/// `min (Mx)_i/x_i ≤ λ ≤ max (Mx)_i/x_i` agree to relative `PERRON_TOL`.
fn power_iterate(m: &[Vec<f64>]) -> Result<(f64, Vec<f64>)> {
    let n = m.len();
    let mut x = vec![1.0 / n as f64; n];
    for _ in 0..PERRON_MAX_ITER {
        let mx: Vec<f64> = (0..n).map(|i| (0..n).map(|j| m[i][j] * x[j]).sum()).collect();
        let (lo, hi) = mx.iter().zip(&x).fold((f64::INFINITY, 0.0f64), |(lo, hi), (y, xi)| {
            let q = y / xi;
            (lo.min(q), hi.max(q))
        });
        if hi - lo <= PERRON_TOL * hi {
            return Ok((0.5 * (lo + hi), x));
        }
        let next: Vec<f64> = mx.iter().zip(&x).map(|(y, xi)| y + xi).collect();
        let s: f64 = next.iter().sum();
        x = next.into_iter().map(|v| v / s).collect();
    }
    Err(Error::NoConvergence { iterations: PERRON_MAX_ITER })
}

/// Weighted matrix with `f` shifted by its maximum, which keeps the entries
/// in `[0, 1]` and makes the eigenvectors invariant under adding constants.
fn weighted(a: &TransitionMatrix, f: &[f64]) -> (Vec<Vec<f64>>, f64) {
    let top = f.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let b = (0..a.size)
        .map(|i| (0..a.size).map(|j| if a.allows(i, j) { (f[j] - top).exp() } else { 0.0 }).collect())
        .collect();
    (b, top)
}

fn perron_shifted(a: &TransitionMatrix, f: &[f64]) -> Result<(PerronData, f64)> {
    check_site(a, f)?;
    if !a.is_irreducible() {
        return Err(Error::Reducible);
    }
    let (b, top) = weighted(a, f);
    let bt: Vec<Vec<f64>> = (0..a.size).map(|i| (0..a.size).map(|j| b[j][i]).collect()).collect();
    let (lambda, right) = power_iterate(&b)?;
    let (_, left) = power_iterate(&bt)?;
    let dot: f64 = left.iter().zip(&right).map(|(l, v)| l * v).sum();
    let left = left.into_iter().map(|l| l / dot).collect();
    Ok((PerronData { lambda, left, right }, top))
}

/// Perron data of `B_ij = A_ij·exp(f_j)`.
pub fn perron(a: &TransitionMatrix, f: &[f64]) -> Result<PerronData> {
    let (mut data, top) = perron_shifted(a, f)?;
    data.lambda *= top.exp();
    Ok(data)
}

/// `P(f) = log λ`.
pub fn pressure_exact(a: &TransitionMatrix, f: &[f64]) -> Result<f64> {
    let (data, top) = perron_shifted(a, f)?;
    Ok(data.lambda.ln() + top)
}

/// Stationary Markov measure `μ([w]) = π_{w_0} Π P_{w_i w_{i+1}}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MarkovMeasure {
    pub stationary: Vec<f64>,
    pub transition: Vec<Vec<f64>>,
}

impl MarkovMeasure {
    pub fn new(stationary: Vec<f64>, transition: Vec<Vec<f64>>) -> Result<Self> {
        let m = stationary.len();
        if m == 0 || transition.len() != m || transition.iter().any(|r| r.len() != m) {
            return Err(Error::InvalidParams("shape mismatch".into()));
        }
        let bad = |x: &f64| !(0.0..=1.0).contains(x);
        if stationary.iter().any(bad) || transition.iter().flatten().any(bad) {
            return Err(Error::InvalidParams("entries outside [0, 1]".into()));
        }
        if (stationary.iter().sum::<f64>() - 1.0).abs() > 1e-9 {
            return Err(Error::InvalidParams("stationary vector does not sum to 1".into()));
        }
        for (i, row) in transition.iter().enumerate() {
            if (row.iter().sum::<f64>() - 1.0).abs() > 1e-9 {
                return Err(Error::InvalidParams(format!("row {i} does not sum to 1")));
            }
        }
        for j in 0..m {
            let pj: f64 = (0..m).map(|i| stationary[i] * transition[i][j]).sum();
            if (pj - stationary[j]).abs() > 1e-9 {
                return Err(Error::InvalidParams("stationary vector is not invariant".into()));
            }
        }
        Ok(MarkovMeasure { stationary, transition })
    }

    /// The i.i.d. chain with marginal `p`.
    pub fn bernoulli(p: &[f64]) -> Result<Self> {
        MarkovMeasure::new(p.to_vec(), vec![p.to_vec(); p.len()])
    }

    /// Two-state chain with flip probabilities `a = P(0→1)`, `b = P(1→0)`.
    pub fn two_state(a: f64, b: f64) -> Result<Self> {
        if !(a > 0.0 && b > 0.0 && a <= 1.0 && b <= 1.0) {
            return Err(Error::InvalidParams("flip probabilities must lie in (0, 1]".into()));
        }
        MarkovMeasure::new(vec![b / (a + b), a / (a + b)], vec![vec![1.0 - a, a], vec![b, 1.0 - b]])
    }

    pub fn size(&self) -> usize {
        self.stationary.len()
    }

    /// Every positive transition is allowed by `a`.
    pub fn compatible_with(&self, a: &TransitionMatrix) -> bool {
        a.size == self.size()
            && (0..a.size).all(|i| (0..a.size).all(|j| self.transition[i][j] == 0.0 || a.allows(i, j)))
    }

    /// `∫ f dμ` for a site potential.
    pub fn integral(&self, f: &[f64]) -> f64 {
        self.stationary.iter().zip(f).map(|(p, v)| p * v).sum()
    }

    /// `P_μ(f) = h_μ + ∫ f dμ`.
    pub fn measure_pressure(&self, f: &[f64]) -> f64 {
        entropy_markov(self) + self.integral(f)
    }

    pub(crate) fn draw(rng: &mut impl Rng, probs: &[f64]) -> usize {
        let u: f64 = rng.gen();
        let mut acc = 0.0;
        for (i, p) in probs.iter().enumerate() {
            acc += p;
            if u < acc {
                return i;
            }
        }
        probs.iter().rposition(|p| *p > 0.0).unwrap_or(0)
    }

    /// A path of length `len` started from the stationary law.
    pub fn sample<R: Rng>(&self, len: usize, rng: &mut R) -> Word {
        let mut out = Vec::with_capacity(len);
        if len == 0 {
            return Word(out);
        }
        let mut s = Self::draw(rng, &self.stationary);
        out.push(Symbol(s as u8));
        for _ in 1..len {
            s = Self::draw(rng, &self.transition[s]);
            out.push(Symbol(s as u8));
        }
        Word(out)
    }
}

impl CylinderWeight for MarkovMeasure {
    fn weight(&self, word: &[Symbol]) -> f64 {
        let Some(first) = word.first() else { return 1.0 };
        if first.index() >= self.size() || word.iter().any(|s| s.index() >= self.size()) {
            return 0.0;
        }
        word.windows(2).fold(self.stationary[first.index()], |acc, p| acc * self.transition[p[0].index()][p[1].index()])
    }

    fn log_weight(&self, word: &[Symbol]) -> f64 {
        let Some(first) = word.first() else { return 0.0 };
        if word.iter().any(|s| s.index() >= self.size()) {
            return f64::NEG_INFINITY;
        }
        word.windows(2)
            .fold(self.stationary[first.index()].ln(), |acc, p| acc + self.transition[p[0].index()][p[1].index()].ln())
    }
}

/// The equilibrium of the site potential `f`:
/// `P_ij = A_ij·e^{f_j}·v_j/(λ v_i)` and `π_i = l_i v_i`.
pub fn equilibrium_markov(a: &TransitionMatrix, f: &[f64]) -> Result<MarkovMeasure> {
    let (data, top) = perron_shifted(a, f)?;
    let m = a.size;
    let v = &data.right;
    // rows are renormalized; the exact rows already sum to 1, this only keeps
    // rounding from pushing entries past 1
    let transition = (0..m)
        .map(|i| {
            let row: Vec<f64> = (0..m)
                .map(|j| if a.allows(i, j) { (f[j] - top).exp() * v[j] / (data.lambda * v[i]) } else { 0.0 })
                .collect();
            let s: f64 = row.iter().sum();
            row.into_iter().map(|x| x / s).collect()
        })
        .collect();
    let stationary: Vec<f64> = data.left.iter().zip(v).map(|(l, r)| l * r).collect();
    let s: f64 = stationary.iter().sum();
    let stationary = stationary.into_iter().map(|x| (x / s).min(1.0)).collect();
    Ok(MarkovMeasure { stationary, transition })
}

/// `−Σ_i π_i Σ_j P_ij log P_ij`.
pub fn entropy_markov(mu: &MarkovMeasure) -> f64 {
    let mut h = 0.0;
    for (pi, row) in mu.stationary.iter().zip(&mu.transition) {
        for p in row {
            if *p > 0.0 {
                h -= pi * p * p.ln();
            }
        }
    }
    h
}

/// A constant `K` with `|log Z_n − n·P(f)| ≤ K` for every `n ≥ 1`, where
/// `Z_n = Σ_{|w|=n} exp(Σ_i f(w_i))`. Writing `Z_n = (e^f)ᵀ B^{n−1} 1` and
/// bounding `1` between multiples of the right eigenvector gives
/// `K = max |log(c/(λ v_i))|` over the extreme entries of `v`, `c = Σ e^{f_i} v_i`.
pub fn partition_log_constant(a: &TransitionMatrix, f: &[f64]) -> Result<f64> {
    let (data, top) = perron_shifted(a, f)?;
    let v = &data.right;
    let c: f64 = f.iter().zip(v).map(|(fi, vi)| (fi - top).exp() * vi).sum();
    let vmax = v.iter().cloned().fold(0.0, f64::max);
    let vmin = v.iter().cloned().fold(f64::INFINITY, f64::min);
    let lo = (c / (data.lambda * vmax)).ln();
    let hi = (c / (data.lambda * vmin)).ln();
    Ok(lo.abs().max(hi.abs()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::language::{pressure_estimate, pressure_truncation_bound};
    use crate::potential::LocalPotential;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    const PHI: f64 = 1.618_033_988_749_895;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol * (1.0 + b.abs())
    }

    fn eigen_residual(a: &TransitionMatrix, f: &[f64], d: &PerronData) -> f64 {
        let m = a.size();
        let b = |i: usize, j: usize| if a.allows(i, j) { f[j].exp() } else { 0.0 };
        let mut worst = 0.0f64;
        for i in 0..m {
            let bv: f64 = (0..m).map(|j| b(i, j) * d.right[j]).sum();
            let lb: f64 = (0..m).map(|j| d.left[j] * b(j, i)).sum();
            worst = worst.max((bv - d.lambda * d.right[i]).abs()).max((lb - d.lambda * d.left[i]).abs());
        }
        worst
    }

    #[test]
    fn perron_examples() {
        let full = TransitionMatrix::full(2);
        assert!(close(perron(&full, &[0.0, 0.0]).unwrap().lambda, 2.0, 1e-13));
        let g = TransitionMatrix::golden_mean();
        let d = perron(&g, &[0.0, 0.0]).unwrap();
        assert!(close(d.lambda, (1.0 + 5f64.sqrt()) / 2.0, 1e-13));
        assert!(eigen_residual(&g, &[0.0, 0.0], &d) < 1e-12);
        let dot: f64 = d.left.iter().zip(&d.right).map(|(l, v)| l * v).sum();
        assert!(close(dot, 1.0, 1e-14));
        assert!(close(perron(&full, &[2f64.ln(), 0.0]).unwrap().lambda, 3.0, 1e-13));
    }

    #[test]
    fn perron_handles_periodic_matrices() {
        let cycle = TransitionMatrix::new(vec![vec![0, 1], vec![1, 0]]).unwrap();
        let d = perron(&cycle, &[0.0, 0.0]).unwrap();
        assert!(close(d.lambda, 1.0, 1e-13));
        // period 2 with a weighted loop-free cycle through three states
        let three = TransitionMatrix::new(vec![vec![0, 1, 1], vec![1, 0, 0], vec![1, 0, 0]]).unwrap();
        let d = perron(&three, &[0.3, -0.2, 0.7]).unwrap();
        // λ² = e^{f_0}(e^{f_1} + e^{f_2})
        let lam = (0.3f64.exp() * ((-0.2f64).exp() + 0.7f64.exp())).sqrt();
        assert!(close(d.lambda, lam, 1e-12));
    }

    #[test]
    fn reducible_is_rejected() {
        let a = TransitionMatrix::new(vec![vec![1, 1], vec![0, 1]]).unwrap();
        assert!(!a.is_irreducible());
        assert!(matches!(perron(&a, &[0.0, 0.0]), Err(Error::Reducible)));
        assert!(TransitionMatrix::new(vec![vec![0, 0], vec![1, 1]]).is_err());
        assert!(TransitionMatrix::new(vec![vec![1, 0], vec![1, 0]]).is_err());
    }

    #[test]
    fn mixing() {
        assert!(TransitionMatrix::full(3).is_mixing());
        assert!(TransitionMatrix::golden_mean().is_mixing());
        assert!(!TransitionMatrix::new(vec![vec![0, 1], vec![1, 0]]).unwrap().is_mixing());
    }

    #[test]
    fn matrix_json() {
        let a = TransitionMatrix::from_json(r#"{"size": 2, "rows": [[1,1],[1,0]]}"#).unwrap();
        assert_eq!(a, TransitionMatrix::golden_mean());
        let text = serde_json::to_string(&a).unwrap();
        assert_eq!(TransitionMatrix::from_json(&text).unwrap(), a);
        assert!(TransitionMatrix::from_json(r#"{"size": 3, "rows": [[1,1],[1,0]]}"#).is_err());
    }

    #[test]
    fn equilibrium_examples() {
        let full = TransitionMatrix::full(2);
        let mu = equilibrium_markov(&full, &[0.0, 0.0]).unwrap();
        for p in mu.stationary.iter().chain(mu.transition.iter().flatten()) {
            assert!(close(*p, 0.5, 1e-13));
        }
        let mu = equilibrium_markov(&full, &[3f64.ln(), 0.0]).unwrap();
        assert!(close(mu.stationary[0], 0.75, 1e-13));
        assert!(close(mu.transition[1][0], 0.75, 1e-13));
        assert!(close(mu.measure_pressure(&[3f64.ln(), 0.0]), 4f64.ln(), 1e-12));
        assert!(close(entropy_markov(&mu), 4f64.ln() - 0.75 * 3f64.ln(), 1e-12));

        let g = TransitionMatrix::golden_mean();
        let parry = equilibrium_markov(&g, &[0.0, 0.0]).unwrap();
        assert!(close(entropy_markov(&parry), PHI.ln(), 1e-12));
        // right eigenvector ∝ (λ, 1): P_00 = 1/λ, P_01 = 1/λ²
        assert!(close(parry.transition[0][0], 1.0 / PHI, 1e-12));
        assert!(close(parry.transition[0][1], 1.0 / (PHI * PHI), 1e-12));
        assert!(MarkovMeasure::new(parry.stationary.clone(), parry.transition.clone()).is_ok());
        assert!(entropy_markov(&MarkovMeasure::bernoulli(&[0.5, 0.5]).unwrap()) - 2f64.ln() < 1e-15);
    }

    #[test]
    fn pressure_examples() {
        assert!(close(pressure_exact(&TransitionMatrix::full(5), &[0.0; 5]).unwrap(), 5f64.ln(), 1e-13));
        assert!(close(pressure_exact(&TransitionMatrix::golden_mean(), &[0.0; 2]).unwrap(), PHI.ln(), 1e-13));
    }

    #[test]
    fn cylinder_weights_are_consistent() {
        let g = TransitionMatrix::golden_mean();
        let mu = equilibrium_markov(&g, &[0.4, -0.9]).unwrap();
        assert_eq!(mu.weight(&[]), 1.0);
        let w = Word::from_indices(&[0, 1, 0, 0]);
        let right: f64 = (0..2).map(|s| mu.weight(&w.concat(&[Symbol(s)]))).sum();
        let left: f64 = (0..2).map(|s| mu.weight(&Word::from_indices(&[s]).concat(&w))).sum();
        assert!(close(right, mu.weight(&w), 1e-14));
        assert!(close(left, mu.weight(&w), 1e-14));
        assert_eq!(mu.weight(&Word::from_indices(&[1, 1])), 0.0);
    }

    #[test]
    fn pressure_estimate_agrees_within_bound() {
        let g = TransitionMatrix::golden_mean();
        let sft = Sft::new("golden", g.clone());
        for f in [[0.0, 0.0], [0.5, -1.0], [-2.0, 1.5]] {
            let exact = pressure_exact(&g, &f).unwrap();
            let pot = LocalPotential::site(&f);
            let k = partition_log_constant(&g, &f).unwrap();
            for n in [1usize, 5, 14] {
                let est = pressure_estimate(&sft, &pot, n).unwrap();
                assert!((est - exact).abs() <= pressure_truncation_bound(&pot, n, k) + 1e-12, "f={f:?} n={n}");
            }
        }
    }

    fn random_compatible(a: &TransitionMatrix, rng: &mut ChaCha8Rng) -> MarkovMeasure {
        // random positive weights on allowed edges, then the stationary vector of the resulting chain
        let m = a.size();
        let p: Vec<Vec<f64>> = (0..m)
            .map(|i| {
                let w: Vec<f64> = (0..m).map(|j| if a.allows(i, j) { rng.gen_range(0.05..1.0) } else { 0.0 }).collect();
                let s: f64 = w.iter().sum();
                w.into_iter().map(|x| x / s).collect()
            })
            .collect();
        let mut pi = vec![1.0 / m as f64; m];
        for _ in 0..5000 {
            let next: Vec<f64> = (0..m).map(|j| (0..m).map(|i| pi[i] * (p[i][j] + if i == j { 1.0 } else { 0.0 }) / 2.0).sum()).collect();
            pi = next;
        }
        MarkovMeasure { stationary: pi, transition: p }
    }

    #[test]
    fn variational_inequality() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let g = TransitionMatrix::golden_mean();
        let f = [0.7, -0.3];
        let top = pressure_exact(&g, &f).unwrap();
        let eq = equilibrium_markov(&g, &f).unwrap();
        assert!((eq.measure_pressure(&f) - top).abs() < 1e-10);
        for _ in 0..100 {
            let mu = random_compatible(&g, &mut rng);
            assert!(mu.compatible_with(&g));
            let pm = mu.measure_pressure(&f);
            assert!(pm <= top + 1e-10);
            let gap = mu.transition[0][0] - eq.transition[0][0];
            if gap.abs() > 1e-4 {
                assert!(pm < top - 1e-10);
            }
        }
    }

    #[test]
    fn sampling_is_admissible_and_deterministic() {
        let g = TransitionMatrix::golden_mean();
        let mu = equilibrium_markov(&g, &[0.0, 0.0]).unwrap();
        let sft = Sft::new("golden", g);
        let a = mu.sample(500, &mut ChaCha8Rng::seed_from_u64(3));
        let b = mu.sample(500, &mut ChaCha8Rng::seed_from_u64(3));
        assert_eq!(a, b);
        assert!(sft.admissible(&a));
    }

    fn arb_irreducible() -> impl Strategy<Value = TransitionMatrix> {
        prop::collection::vec(0u8..2, 9).prop_filter_map("irreducible", |bits| {
            let rows = bits.chunks(3).map(|c| c.to_vec()).collect();
            TransitionMatrix::new(rows).ok().filter(|a| a.is_irreducible())
        })
    }

    proptest! {
        #[test]
        fn constants_do_not_move_the_equilibrium(a in arb_irreducible(), f in prop::array::uniform3(-3.0f64..3.0), c in -5.0f64..5.0) {
            let g: Vec<f64> = f.iter().map(|x| x + c).collect();
            let m1 = equilibrium_markov(&a, &f).unwrap();
            let m2 = equilibrium_markov(&a, &g).unwrap();
            for (x, y) in m1.stationary.iter().zip(&m2.stationary) {
                prop_assert!((x - y).abs() < 1e-13);
            }
            for (x, y) in m1.transition.iter().flatten().zip(m2.transition.iter().flatten()) {
                prop_assert!((x - y).abs() < 1e-13);
            }
            let shift = pressure_exact(&a, &g).unwrap() - pressure_exact(&a, &f).unwrap();
            prop_assert!((shift - c).abs() < 1e-12);
        }

        #[test]
        fn perron_vectors_are_eigenvectors(a in arb_irreducible(), f in prop::array::uniform3(-2.0f64..2.0)) {
            let d = perron(&a, &f).unwrap();
            prop_assert!(d.left.iter().chain(&d.right).all(|x| *x > 0.0));
            prop_assert!(eigen_residual(&a, &f, &d) <= 1e-12 * d.lambda.max(1.0));
            let mu = equilibrium_markov(&a, &f).unwrap();
            prop_assert!(MarkovMeasure::new(mu.stationary.clone(), mu.transition.clone()).is_ok());
            prop_assert!(mu.compatible_with(&a));
            prop_assert!((mu.measure_pressure(&f) - d.lambda.ln()).abs() < 1e-10);
        }
    }

    #[test]
    fn exact_dyadic_constant_shift() {
        let g = TransitionMatrix::golden_mean();
        let f = [0.5, -0.25];
        let m1 = equilibrium_markov(&g, &f).unwrap();
        let m2 = equilibrium_markov(&g, &[f[0] + 2.0, f[1] + 2.0]).unwrap();
        assert_eq!(m1, m2);
    }
}
