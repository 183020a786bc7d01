//! The Dyck shift `D₂` on two bracket types.
//!
//! Symbols are `a1 a2 A1 A2`: the two openers and their closers. A word is in
//! the language iff the stack reduction never pairs an opener with a closer
//! of the other type; closers that find an empty stack are unmatched and
//! legal, as are openers left on the stack.
//!
//! A shift-invariant measure with at least as many openers as closers is
//! summarized by `(μ₃, μ₄, μ₁⁺)`: the closer frequencies and the type law of
//! unmatched openers. With `s = μ₊ − μ₋ = 1 − 2(μ₃ + μ₄)` the remaining
//! frequencies are `μ₁ = μ₁⁺ s + μ₃` and `μ₂ = μ₂⁺ s + μ₄`. The other branch
//! (more closers) is the image under reversing the word and swapping openers
//! with closers.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::oracle::SubshiftOracle;
use crate::potential::LocalPotential;
use crate::stats::entropy;
use crate::word::{Symbol, Word};

pub const A1: Symbol = Symbol(0);
pub const A2: Symbol = Symbol(1);
pub const C1: Symbol = Symbol(2);
pub const C2: Symbol = Symbol(3);

#[derive(Debug, Clone, Default)]
pub struct DyckOracle;

pub fn dyck_oracle() -> DyckOracle {
    DyckOracle
}

fn is_opener(s: Symbol) -> bool {
    s.0 < 2
}

/// Bracket type 0 or 1.
fn kind(s: Symbol) -> u8 {
    s.0 % 2
}

/// Runs the stack reduction; `None` if some closer meets an opener of the
/// other type.
fn reduce(word: &[Symbol]) -> Option<Vec<u8>> {
    let mut stack = Vec::new();
    for &s in word {
        if s.0 > 3 {
            return None;
        }
        if is_opener(s) {
            stack.push(kind(s));
        } else {
            match stack.last() {
                None => {}
                Some(&k) if k == kind(s) => {
                    stack.pop();
                }
                Some(_) => return None,
            }
        }
    }
    Some(stack)
}

impl SubshiftOracle for DyckOracle {
    fn name(&self) -> &str {
        "dyck"
    }

    fn alphabet_size(&self) -> usize {
        4
    }

    fn admissible(&self, word: &[Symbol]) -> bool {
        reduce(word).is_some()
    }

    fn admissible_extension(&self, prefix: &[Symbol], next: Symbol) -> bool {
        if next.0 > 3 {
            return false;
        }
        if is_opener(next) {
            return true;
        }
        match reduce(prefix) {
            Some(stack) => stack.last().is_none_or(|k| *k == kind(next)),
            None => false,
        }
    }

    fn symbol_names(&self) -> Vec<String> {
        ["a1", "a2", "A1", "A2"].iter().map(|s| s.to_string()).collect()
    }
}

/// Values of a site potential on `a1, a2, A1, A2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DyckSitePotential {
    pub f: [f64; 4],
}

impl DyckSitePotential {
    pub fn new(f: [f64; 4]) -> Result<Self> {
        if f.iter().any(|x| !x.is_finite()) {
            return Err(Error::InvalidPotential("non-finite Dyck potential".into()));
        }
        Ok(DyckSitePotential { f })
    }

    pub fn zero() -> Self {
        DyckSitePotential { f: [0.0; 4] }
    }

    /// The potential seen after reversing words and swapping openers with closers.
    pub fn mirrored(&self) -> Self {
        let [f1, f2, f3, f4] = self.f;
        DyckSitePotential { f: [f3, f4, f1, f2] }
    }

    pub fn to_local(&self) -> LocalPotential {
        LocalPotential::site(&self.f)
    }
}

/// The six-parameter description of a shift-invariant Dyck measure.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DyckParams {
    /// Frequencies of `a1, a2, A1, A2`.
    pub mu: [f64; 4],
    /// Type law of the unmatched brackets (openers when `μ₊ ≥ μ₋`).
    pub mu1p: f64,
    pub mu2p: f64,
}

const PARAM_TOL: f64 = 1e-12;

impl DyckParams {
    /// Canonical-branch parameters from the independent coordinates.
    pub fn from_independent(mu3: f64, mu4: f64, mu1p: f64) -> Result<Self> {
        let s = 1.0 - 2.0 * (mu3 + mu4);
        let p = DyckParams { mu: [mu1p * s + mu3, (1.0 - mu1p) * s + mu4, mu3, mu4], mu1p, mu2p: 1.0 - mu1p };
        p.validate()?;
        Ok(p)
    }

    pub fn mu_plus(&self) -> f64 {
        self.mu[0] + self.mu[1]
    }

    pub fn mu_minus(&self) -> f64 {
        self.mu[2] + self.mu[3]
    }

    /// More openers than closers (ties count as canonical).
    pub fn is_canonical(&self) -> bool {
        self.mu_plus() >= self.mu_minus()
    }

    pub fn mirrored(&self) -> Self {
        let [m1, m2, m3, m4] = self.mu;
        DyckParams { mu: [m3, m4, m1, m2], mu1p: self.mu1p, mu2p: self.mu2p }
    }

    fn canonical(&self) -> Self {
        if self.is_canonical() {
            *self
        } else {
            self.mirrored()
        }
    }

    pub fn validate(&self) -> Result<()> {
        let all = [self.mu[0], self.mu[1], self.mu[2], self.mu[3], self.mu1p, self.mu2p];
        if all.iter().any(|x| !(-PARAM_TOL..=1.0 + PARAM_TOL).contains(x)) {
            return Err(Error::InvalidParams(format!("parameters outside [0, 1]: {self:?}")));
        }
        if (self.mu.iter().sum::<f64>() - 1.0).abs() > PARAM_TOL || (self.mu1p + self.mu2p - 1.0).abs() > PARAM_TOL {
            return Err(Error::InvalidParams(format!("parameters do not sum to 1: {self:?}")));
        }
        let c = self.canonical();
        let s = c.mu_plus() - c.mu_minus();
        if (c.mu[0] - c.mu1p * s - c.mu[2]).abs() > PARAM_TOL || (c.mu[1] - c.mu2p * s - c.mu[3]).abs() > PARAM_TOL {
            return Err(Error::InvalidParams(format!("inconsistent bracket frequencies: {self:?}")));
        }
        Ok(())
    }

    /// Open at every coordinate of the parameter domain.
    fn is_interior(&self) -> bool {
        let c = self.canonical();
        c.mu[2] > 0.0 && c.mu[3] > 0.0 && c.mu[2] + c.mu[3] < 0.5 && c.mu1p > 0.0 && c.mu1p < 1.0
    }
}

/// `H(μ₊, μ₃, μ₄) + (μ₊ − μ₋)·H(μ₁⁺, μ₂⁺) + Σ f_i μ_i` on the canonical branch
/// (mirrored first if the parameters have more closers), with `H ≥ 0`.
pub fn pressure_fn(params: &DyckParams, f: &DyckSitePotential) -> Result<f64> {
    params.validate()?;
    let (p, f) = if params.is_canonical() { (*params, *f) } else { (params.mirrored(), f.mirrored()) };
    let s = p.mu_plus() - p.mu_minus();
    let energy: f64 = p.mu.iter().zip(&f.f).map(|(m, v)| m * v).sum();
    Ok(entropy(&[p.mu_plus(), p.mu[2], p.mu[3]]) + s * entropy(&[p.mu1p, p.mu2p]) + energy)
}

/// `(∂P/∂μ₃, ∂P/∂μ₄, ∂P/∂μ₁⁺)` in the independent coordinates.
pub fn pressure_gradient(params: &DyckParams, f: &DyckSitePotential) -> Result<[f64; 3]> {
    params.validate()?;
    if !params.is_canonical() {
        return Err(Error::InvalidParams("gradient is taken on the branch with more openers".into()));
    }
    if !params.is_interior() {
        return Err(Error::Boundary(format!("{params:?}")));
    }
    let [f1, f2, f3, f4] = f.f;
    let (m3, m4, q) = (params.mu[2], params.mu[3], params.mu1p);
    let h = entropy(&[q, 1.0 - q]);
    let common = -2.0 * h - 2.0 * f1 * q - 2.0 * f2 * (1.0 - q);
    let plus = 1.0 - m3 - m4;
    let s = 1.0 - 2.0 * (m3 + m4);
    Ok([
        (plus / m3).ln() + common + f1 + f3,
        (plus / m4).ln() + common + f2 + f4,
        s * ((1.0 - q) / q).ln() + (f1 - f2) * s,
    ])
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DyckEquilibrium {
    /// Parameters of the equilibrium measure itself.
    pub params: DyckParams,
    /// The maximum sits on the branch with more closers.
    pub reversed: bool,
    pub pressure: f64,
    /// Log-residuals of the three stationarity equations, in the frame of the
    /// branch that was solved.
    pub residuals: [f64; 3],
    /// `false` when the maximum is on the face `μ₊ = μ₋`, where the third
    /// equation is replaced by the constraint.
    pub interior: bool,
    /// `pressure` minus the best value found at random parameter points.
    pub maximality_margin: f64,
}

/// `log(1 + e^x)` without overflow.
fn softplus(x: f64) -> f64 {
    if x > 0.0 {
        x + (-x).exp().ln_1p()
    } else {
        x.exp().ln_1p()
    }
}

struct Branch {
    params: DyckParams,
    pressure: f64,
    residuals: [f64; 3],
    interior: bool,
}

/// Largest pressure on the canonical branch. The first two equations give
/// `μ₁⁺` and `μ₄/μ₃` in closed form; the third reduces to the decreasing scalar
/// equation `g(μ₃) = 0` with
/// `g(μ₃) = log(1 − (1+r)μ₃) − log μ₃ + 2 log μ₂⁺ + f₁ + f₃ − 2f₂`.
fn solve_canonical(f: &DyckSitePotential) -> Result<Branch> {
    let [f1, f2, f3, f4] = f.f;
    let d12 = f1 - f2;
    let log_q = -softplus(-d12);
    let log_q2 = -softplus(d12);
    let q = log_q.exp();
    let log_r = (f2 + f4) - (f1 + f3);
    let r = log_r.exp();
    let c = 2.0 * log_q2 + f1 + f3 - 2.0 * f2;
    let g = |m: f64| (1.0 - (1.0 + r) * m).ln() - m.ln() + c;
    let dg = |m: f64| -(1.0 + r) / (1.0 - (1.0 + r) * m) - 1.0 / m;

    let top = 0.5 / (1.0 + r);
    let (mu3, interior) = if g(top) >= 0.0 {
        (top, false)
    } else {
        let mut lo = 1e-300f64.max(top * 1e-300);
        let mut hi = top;
        if g(lo) <= 0.0 {
            return Err(Error::RootNotFound(format!("no sign change on [{lo:e}, {hi}]")));
        }
        let mut m = 0.5 * (lo + hi);
        let mut converged = false;
        for _ in 0..400 {
            let gm = g(m);
            if gm == 0.0 {
                converged = true;
                break;
            }
            if gm > 0.0 {
                lo = m;
            } else {
                hi = m;
            }
            let newton = m - gm / dg(m);
            let next = if newton > lo && newton < hi { newton } else { 0.5 * (lo + hi) };
            if (next - m).abs() <= 1e-16 * m {
                m = next;
                converged = true;
                break;
            }
            m = next;
        }
        if !converged {
            return Err(Error::RootNotFound(format!("bracket [{lo:e}, {hi:e}] after 400 steps")));
        }
        (m, true)
    };
    let mu4 = r * mu3;
    let params = DyckParams::from_independent(mu3, mu4, q)?;
    let plus = 1.0 - mu3 - mu4;
    let residuals = [
        (mu3 / mu4).ln() - (f1 + f3 - f2 - f4),
        log_q - log_q2 - d12,
        if interior { plus.ln() + 2.0 * log_q2 - mu3.ln() - (2.0 * f2 - f1 - f3) } else { 0.0 },
    ];
    let pressure = pressure_fn(&params, f)?;
    Ok(Branch { params, pressure, residuals, interior })
}

/// The best value of `pressure_fn` over `count` random parameter points on
/// both branches.
pub fn random_pressure_max(f: &DyckSitePotential, count: usize, seed: u64) -> Result<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut best = f64::NEG_INFINITY;
    for i in 0..count {
        let (a, b) = loop {
            let a: f64 = rng.gen_range(1e-6..0.5);
            let b: f64 = rng.gen_range(1e-6..0.5);
            if a + b < 0.5 {
                break (a, b);
            }
        };
        let q = rng.gen_range(1e-6..1.0 - 1e-6);
        let p = DyckParams::from_independent(a, b, q)?;
        let p = if i % 2 == 0 { p } else { p.mirrored() };
        best = best.max(pressure_fn(&p, f)?);
    }
    Ok(best)
}

/// The equilibrium of a site potential: the canonical branch for `f` and for
/// its mirror are both solved and the larger pressure wins.
pub fn solve_equilibrium(f: &DyckSitePotential) -> Result<DyckEquilibrium> {
    let direct = solve_canonical(f)?;
    let mirror = solve_canonical(&f.mirrored())?;
    let (branch, reversed) = if mirror.pressure > direct.pressure { (mirror, true) } else { (direct, false) };
    let params = if reversed { branch.params.mirrored() } else { branch.params };
    let margin = branch.pressure - random_pressure_max(f, 1000, 0x5eed)?;
    Ok(DyckEquilibrium {
        params,
        reversed,
        pressure: branch.pressure,
        residuals: branch.residuals,
        interior: branch.interior,
        maximality_margin: margin,
    })
}

fn draw2(rng: &mut impl Rng, p_first: f64) -> u8 {
    if rng.gen::<f64>() < p_first {
        0
    } else {
        1
    }
}

/// A sample of the measure described by `params` on a window of `length`
/// symbols. Open/close marks are i.i.d. `(μ₊, μ₋)`, closers get i.i.d. types
/// `(μ₃, μ₄)/μ₋`, an opener matched by a closer takes its type, and unmatched
/// openers get i.i.d. types `(μ₁⁺, μ₂⁺)`. Matching is resolved with `length`
/// extra symbols of lookahead; openers still open after that are treated as
/// unmatched.
pub fn sample_dyck(params: &DyckParams, length: usize, seed: u64) -> Result<Word> {
    sample_dyck_with(params, length, &mut ChaCha8Rng::seed_from_u64(seed))
}

pub fn sample_dyck_with<R: Rng>(params: &DyckParams, length: usize, rng: &mut R) -> Result<Word> {
    params.validate()?;
    if !params.is_canonical() {
        let mut w = sample_dyck_with(&params.mirrored(), length, rng)?;
        w.reverse();
        for s in w.iter_mut() {
            *s = Symbol((s.0 + 2) % 4);
        }
        return Ok(w);
    }
    let total = 2 * length;
    let p_open = params.mu_plus();
    let minus = params.mu_minus();
    let p_c1 = if minus > 0.0 { params.mu[2] / minus } else { 0.5 };
    let mut out = vec![Symbol(0); total];
    for slot in out.iter_mut() {
        *slot = if rng.gen::<f64>() < p_open {
            // provisional type, kept only if the opener stays unmatched
            Symbol(draw2(rng, params.mu1p))
        } else {
            Symbol(2 + draw2(rng, p_c1))
        };
    }
    let mut stack: Vec<usize> = Vec::new();
    for i in 0..total {
        if is_opener(out[i]) {
            stack.push(i);
        } else if let Some(j) = stack.pop() {
            out[j] = Symbol(kind(out[i]));
        }
    }
    out.truncate(length);
    Ok(Word(out))
}
