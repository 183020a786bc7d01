//! β-shifts.
//!
//! `X_β` is the set of digit sequences all of whose tails are lexicographically
//! at most `ω(β)`, the quasi-greedy expansion of 1. The module computes `ω`
//! exactly (see [`number`]), counts the language and its free words, and
//! derives the cylinder brackets and the Parry density from those counts.
//!
//! Free words are the length-`n` words after which any admissible word may
//! follow. A suffix of `w` that is strictly below the matching prefix of `ω`
//! imposes nothing on the continuation; a suffix equal to `ω_0..ω_{m-1}` forces
//! the continuation below `σ^m ω`, which is harmless only when `σ^m ω = ω`.
//! That happens exactly when `ω` is purely periodic (a terminating greedy
//! expansion) and `m` is a multiple of its period, so freeness is decided
//! from the word alone and no probing of continuations is needed.

pub mod number;

use std::sync::{Arc, Mutex};

use num_traits::ToPrimitive;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::oracle::SubshiftOracle;
use crate::word::Symbol;

pub use number::{BetaNumber, Quadratic};

#[derive(Debug)]
enum Orbit {
    /// Greedy expansion still running; holds the current orbit point `T^n 1`.
    Running(Quadratic),
    /// Greedy expansion terminated; `ω` repeats a block of this minimal period.
    Periodic(usize),
}

#[derive(Debug)]
struct Omega {
    digits: Vec<u8>,
    orbit: Orbit,
}

/// A β-shift with its expansion of 1, extended on demand.
#[derive(Debug, Clone)]
pub struct BetaShift {
    beta: BetaNumber,
    value: f64,
    alphabet: usize,
    name: String,
    omega: Arc<Mutex<Omega>>,
}

fn minimal_period(block: &[u8]) -> usize {
    let n = block.len();
    (1..=n).find(|p| n.is_multiple_of(*p) && (0..n).all(|i| block[i] == block[i % p])).unwrap_or(n)
}

impl Omega {
    fn extend(&mut self, beta: &Quadratic, len: usize) -> Result<()> {
        while self.digits.len() < len {
            match &self.orbit {
                Orbit::Periodic(p) => {
                    let d = self.digits[self.digits.len() - p];
                    self.digits.push(d);
                }
                Orbit::Running(t) => {
                    let x = beta.mul(t);
                    let k = x.floor();
                    let digit = k
                        .to_u8()
                        .filter(|d| *d < u8::MAX)
                        .ok_or_else(|| Error::InvalidBeta("digit does not fit the alphabet".into()))?;
                    let next = x.sub_integer(&k);
                    self.digits.push(digit);
                    if next.is_zero() {
                        // finite greedy expansion d_0..d_{N-1}: ω = (d_0..d_{N-1} − 1)^∞
                        let last = self.digits.len() - 1;
                        self.digits[last] -= 1;
                        let p = minimal_period(&self.digits);
                        self.digits.truncate(p);
                        self.orbit = Orbit::Periodic(p);
                    } else {
                        self.orbit = Orbit::Running(next);
                    }
                }
            }
        }
        Ok(())
    }
}

impl BetaShift {
    pub fn new(beta: BetaNumber) -> Result<Self> {
        let mut omega = Omega { digits: Vec::new(), orbit: Orbit::Running(Quadratic::integer(1)) };
        omega.extend(beta.value(), 1)?;
        let alphabet = omega.digits[0] as usize + 1;
        Ok(BetaShift {
            value: beta.to_f64(),
            name: format!("beta-{}", beta.label()),
            beta,
            alphabet,
            omega: Arc::new(Mutex::new(omega)),
        })
    }

    pub fn golden() -> Self {
        BetaShift::new(BetaNumber::golden()).expect("golden mean is a valid base")
    }

    pub fn parse(text: &str) -> Result<Self> {
        BetaShift::new(BetaNumber::parse(text)?)
    }

    pub fn beta(&self) -> &BetaNumber {
        &self.beta
    }

    pub fn value(&self) -> f64 {
        self.value
    }

    /// Runs `f` on the first `len` digits of `ω`.
    pub fn with_omega<T>(&self, len: usize, f: impl FnOnce(&[u8]) -> T) -> T {
        let mut guard = self.omega.lock().unwrap_or_else(|e| e.into_inner());
        guard.extend(self.beta.value(), len).expect("digits are bounded by the first digit");
        f(&guard.digits[..len])
    }

    pub fn omega(&self, len: usize) -> Vec<u8> {
        self.with_omega(len, |d| d.to_vec())
    }

    /// Minimal period of `ω` when the greedy expansion of 1 terminates;
    /// determined once `len` digits have been examined without termination
    /// being ruled out.
    pub fn period(&self, len: usize) -> Option<usize> {
        let mut guard = self.omega.lock().unwrap_or_else(|e| e.into_inner());
        guard.extend(self.beta.value(), len).expect("digits are bounded by the first digit");
        match guard.orbit {
            Orbit::Periodic(p) => Some(p),
            Orbit::Running(_) => None,
        }
    }

    /// `σ^m ω = ω`.
    fn returns_to_omega(&self, m: usize) -> bool {
        m == 0 || self.period(m + 1).is_some_and(|p| m.is_multiple_of(p))
    }

    /// Every suffix of `w` is strictly below the same-length prefix of `ω`,
    /// except where the prefix is a full return of `ω` to itself.
    pub fn is_free(&self, word: &[Symbol]) -> bool {
        if !self.admissible(word) {
            return false;
        }
        let n = word.len();
        let equal_suffixes: Vec<usize> =
            self.with_omega(n, |om| (1..=n).filter(|m| word[n - m..].iter().zip(om).all(|(s, o)| s.0 == *o)).collect());
        equal_suffixes.into_iter().all(|m| self.returns_to_omega(m))
    }
}

impl SubshiftOracle for BetaShift {
    fn name(&self) -> &str {
        &self.name
    }

    fn alphabet_size(&self) -> usize {
        self.alphabet
    }

    fn admissible(&self, word: &[Symbol]) -> bool {
        let n = word.len();
        if word.iter().any(|s| s.index() >= self.alphabet) {
            return false;
        }
        self.with_omega(n, |om| {
            (0..n).all(|start| {
                let suffix = &word[start..];
                for (s, o) in suffix.iter().zip(om) {
                    if s.0 != *o {
                        return s.0 < *o;
                    }
                }
                true
            })
        })
    }

    /// Only suffixes of `prefix` that coincide with a prefix of `ω` constrain
    /// the next digit.
    fn admissible_extension(&self, prefix: &[Symbol], next: Symbol) -> bool {
        let n = prefix.len();
        if next.index() >= self.alphabet {
            return false;
        }
        self.with_omega(n + 1, |om| {
            (0..=n).all(|m| {
                let tied = prefix[n - m..].iter().zip(om).all(|(s, o)| s.0 == *o);
                !tied || next.0 <= om[m]
            })
        })
    }
}

/// The shift as a subshift oracle.
pub fn beta_oracle(shift: &BetaShift) -> BetaShift {
    shift.clone()
}

/// First `n` digits of the quasi-greedy expansion of 1.
pub fn omega_expansion(beta: &BetaNumber, n: usize) -> Result<Vec<u8>> {
    if n == 0 {
        return Err(Error::InvalidParams("need at least one digit".into()));
    }
    Ok(BetaShift::new(beta.clone())?.omega(n))
}

/// `c = β^{-1}·Π_{j≥1}(1 − β^{-j})`, truncated once `β^{-j} < 1e-18`.
pub fn lower_constant(beta: f64) -> f64 {
    let mut c = 1.0 / beta;
    let mut t = 1.0 / beta;
    while t >= 1e-18 {
        c *= 1.0 - t;
        t /= beta;
    }
    c
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BetaCounts {
    /// `b[i] = |L_β(i+1)|`.
    pub b: Vec<u64>,
    /// `f[i] = |F_β(i+1)|`.
    pub f: Vec<u64>,
    /// Recursion sequences started at `k = 1`, indexed like `b`.
    pub u: Vec<u64>,
    pub v: Vec<u64>,
    pub c: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BetaCountRow {
    pub n: usize,
    pub b_n: u64,
    pub f_n: u64,
    pub u_n: u64,
    pub v_n: u64,
}

impl BetaCounts {
    pub fn rows(&self) -> Vec<BetaCountRow> {
        (0..self.b.len())
            .map(|i| BetaCountRow { n: i + 1, b_n: self.b[i], f_n: self.f[i], u_n: self.u[i], v_n: self.v[i] })
            .collect()
    }
}

/// One walk of the prefix tree up to depth `n`, tallying every node, free
/// nodes, and (when `head` is given) nodes that start with `head`.
fn tally(shift: &BetaShift, n: usize, head: &[Symbol], cap: u64) -> Result<Vec<[u64; 4]>> {
    fn walk(shift: &BetaShift, n: usize, head: &[Symbol], cap: u64, buf: &mut Vec<Symbol>, out: &mut [[u64; 4]]) -> Result<()> {
        if buf.len() == n {
            return Ok(());
        }
        for s in 0..shift.alphabet_size() {
            let s = Symbol(s as u8);
            if !shift.admissible_extension(buf, s) {
                continue;
            }
            buf.push(s);
            let depth = buf.len();
            let row = &mut out[depth - 1];
            row[0] += 1;
            if row[0] > cap {
                return Err(Error::CapExceeded { cap, length: depth });
            }
            let free = shift.is_free(buf);
            let headed = depth >= head.len() && buf[..head.len()] == *head;
            row[1] += free as u64;
            row[2] += headed as u64;
            row[3] += (headed && free) as u64;
            let r = walk(shift, n, head, cap, buf, out);
            buf.pop();
            r?;
        }
        Ok(())
    }
    let mut out = vec![[0u64; 4]; n];
    walk(shift, n, head, cap, &mut Vec::with_capacity(n), &mut out)?;
    Ok(out)
}

/// `b_1..b_n`, `f_1..f_n` by enumeration, with the recursion sequences alongside.
pub fn count_language(shift: &BetaShift, n: usize) -> Result<BetaCounts> {
    if n == 0 {
        return Err(Error::InvalidParams("n must be at least 1".into()));
    }
    let t = tally(shift, n, &[], crate::language::DEFAULT_CAP)?;
    let rec = recursion_sequences(shift, 1, n)?;
    Ok(BetaCounts {
        b: t.iter().map(|r| r[0]).collect(),
        f: t.iter().map(|r| r[1]).collect(),
        u: rec.u,
        v: rec.v,
        c: lower_constant(shift.value),
    })
}

/// `|F_β(n)|`.
pub fn count_free(shift: &BetaShift, n: usize) -> Result<u64> {
    Ok(count_language(shift, n)?.f[n - 1])
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RecursionSequences {
    pub k: usize,
    /// `u[i]` is `u_{k+i}`.
    pub u: Vec<u64>,
    pub v: Vec<u64>,
}

/// `u_j = Σ_{i=1}^{j-1} ω_i u_{j-i} + 1` and `v_j = Σ_{i=1}^{j-1} ω_i v_{j-i}`
/// for `j > k`, with `u_k = v_k = 1` and terms below `k` read as 0. Here
/// `ω_i` is the expansion digit at index `i − 1`.
pub fn recursion_sequences(shift: &BetaShift, k: usize, n: usize) -> Result<RecursionSequences> {
    if k == 0 || n < k {
        return Err(Error::InvalidParams(format!("need n ≥ k ≥ 1, got k = {k}, n = {n}")));
    }
    let om = shift.omega(n);
    let digit = |i: usize| om[i - 1] as u64;
    let len = n - k + 1;
    let (mut u, mut v) = (vec![0u64; len], vec![0u64; len]);
    u[0] = 1;
    v[0] = 1;
    let overflow = || Error::InvalidParams(format!("recursion overflows u64 before n = {n}"));
    for j in k + 1..=n {
        let (mut su, mut sv) = (1u64, 0u64);
        for i in 1..j {
            if j - i < k {
                break;
            }
            let idx = j - i - k;
            su = digit(i).checked_mul(u[idx]).and_then(|x| x.checked_add(su)).ok_or_else(overflow)?;
            sv = digit(i).checked_mul(v[idx]).and_then(|x| x.checked_add(sv)).ok_or_else(overflow)?;
        }
        u[j - k] = su;
        v[j - k] = sv;
    }
    Ok(RecursionSequences { k, u, v })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CylinderEstimate {
    pub y: Vec<u8>,
    pub n: usize,
    pub lower: f64,
    pub upper: f64,
    pub b_n: u64,
    pub f_n: u64,
    /// Admissible length-`n` words starting with `y`.
    pub b_n_y: u64,
    /// Free length-`n` words starting with `y`.
    pub f_n_y: u64,
}

impl CylinderEstimate {
    pub fn ratio(&self) -> f64 {
        self.upper / self.lower
    }
}

/// Bracket `f_n(y)/b_n ≤ μ([y]_0) ≤ b_n(y)/f_n` for every shift-invariant
/// measure that is uniform on the conditioning events, with counts taken over
/// length-`n` words beginning with `y`.
pub fn cylinder_estimate(shift: &BetaShift, y: &[Symbol], n: usize) -> Result<CylinderEstimate> {
    if n <= y.len() {
        return Err(Error::InvalidParams(format!("n = {n} must exceed the length of y")));
    }
    let yv = y.iter().map(|s| s.0).collect();
    if !shift.admissible(y) {
        return Ok(CylinderEstimate { y: yv, n, lower: 0.0, upper: 0.0, b_n: 0, f_n: 0, b_n_y: 0, f_n_y: 0 });
    }
    let t = tally(shift, n, y, crate::language::DEFAULT_CAP)?[n - 1];
    let [b_n, f_n, b_n_y, f_n_y] = t;
    Ok(CylinderEstimate {
        y: yv,
        n,
        lower: f_n_y as f64 / b_n as f64,
        upper: b_n_y as f64 / f_n as f64,
        b_n,
        f_n,
        b_n_y,
        f_n_y,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ParryDensity {
    pub x: f64,
    pub n_terms: usize,
    /// `Σ_{n<n_terms} 1[x ≤ t_n]·β^{-n}`.
    pub value: f64,
    /// Bound on the omitted terms, `β^{-N}/(1 − β^{-1})`.
    pub tail_bound: f64,
    /// `Σ_{n<n_terms} t_n β^{-n}`, the integral of the partial sum over `[0, 1]`.
    pub integral: f64,
    pub normalized: f64,
}

impl BetaShift {
    /// Orbit points `t_n = Σ_k ω_{n+k} β^{-(k+1)}` of the quasi-greedy orbit of 1.
    pub fn orbit(&self, n_terms: usize) -> Vec<f64> {
        let beta = self.value;
        let mut k_max = 1;
        while beta.powi(-(k_max as i32)) > 1e-18 && k_max < 4000 {
            k_max += 1;
        }
        let om = self.omega(n_terms + k_max);
        (0..n_terms)
            .map(|n| {
                let mut t = 0.0;
                let mut scale = 1.0 / beta;
                for k in 0..k_max {
                    t += om[n + k] as f64 * scale;
                    scale /= beta;
                }
                t
            })
            .collect()
    }
}

/// Partial sums of `h_β(x) = Σ_n 1[x ≤ T^n 1]·β^{-n}`, along the quasi-greedy
/// orbit of 1 (which differs from the greedy orbit only on a null set of `x`).
pub fn parry_density(shift: &BetaShift, x: f64, n_terms: usize) -> Result<ParryDensity> {
    if !(0.0..1.0).contains(&x) {
        return Err(Error::InvalidParams(format!("x = {x} outside [0, 1)")));
    }
    if n_terms == 0 {
        return Err(Error::InvalidParams("n_terms must be at least 1".into()));
    }
    let beta = shift.value;
    let orbit = shift.orbit(n_terms);
    let (mut value, mut integral, mut scale) = (0.0, 0.0, 1.0);
    for t in &orbit {
        if x <= *t {
            value += scale;
        }
        integral += t * scale;
        scale /= beta;
    }
    let tail_bound = scale / (1.0 - 1.0 / beta);
    Ok(ParryDensity { x, n_terms, value, tail_bound, integral, normalized: value / integral })
}

/// The first `len` digits of `ω` and its period, if the expansion terminates.
pub fn describe_omega(shift: &BetaShift, len: usize) -> OmegaReport {
    OmegaReport {
        beta: shift.beta.label().to_string(),
        value: shift.value,
        digits: shift.omega(len),
        period: shift.period(len),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OmegaReport {
    pub beta: String,
    pub value: f64,
    pub digits: Vec<u8>,
    pub period: Option<usize>,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::language::{count_words, DEFAULT_CAP};
    use crate::oracle::FullShift;
    use crate::word::Word;

    fn w(ix: &[u8]) -> Word {
        Word::from_indices(ix)
    }

    fn golden() -> BetaShift {
        BetaShift::golden()
    }

    fn b18() -> BetaShift {
        BetaShift::parse("1.8").unwrap()
    }

    /// Independent float iteration of `T_β` from 1, for the first digits.
    fn float_digits(beta: f64, n: usize) -> Vec<u8> {
        let mut t = 1.0;
        (0..n)
            .map(|_| {
                let x = beta * t;
                let d = x.floor();
                t = x - d;
                d as u8
            })
            .collect()
    }

    #[test]
    fn omega_examples() {
        assert_eq!(omega_expansion(&BetaNumber::integer(2).unwrap(), 6).unwrap(), vec![1; 6]);
        assert_eq!(golden().omega(8), vec![1, 0, 1, 0, 1, 0, 1, 0]);
        assert_eq!(golden().period(8), Some(2));
        let d = b18().omega(30);
        assert_eq!(d[..20], float_digits(1.8, 20)[..]);
        assert_eq!(&d[..12], &[1, 1, 0, 1, 0, 1, 0, 1, 0, 0, 1, 0]);
        assert_eq!(b18().period(200), None);
        assert_eq!(BetaShift::parse("3").unwrap().omega(3), vec![2, 2, 2]);
        assert_eq!(BetaShift::parse("2.5").unwrap().omega(12), float_digits(2.5, 12));
    }

    #[test]
    fn omega_sums_to_one() {
        for shift in [golden(), b18(), BetaShift::parse("2.5").unwrap(), BetaShift::parse("sqrt(3)").unwrap()] {
            let beta = shift.value();
            let s: f64 = shift.omega(200).iter().enumerate().map(|(n, d)| *d as f64 * beta.powi(-(n as i32 + 1))).sum();
            assert!((s - 1.0).abs() < 1e-12, "{}: {s}", shift.name());
        }
    }

    #[test]
    fn omega_is_shift_maximal() {
        for shift in [golden(), b18(), BetaShift::parse("2.5").unwrap(), BetaShift::parse("1.3").unwrap()] {
            let om = shift.omega(200);
            for k in 1..200 {
                assert!(om[k..] <= om[..200 - k], "{} tail {k}", shift.name());
            }
        }
    }

    #[test]
    fn oracle_examples() {
        let g = golden();
        assert!(!g.admissible(&w(&[1, 1])));
        assert!(g.admissible(&w(&[1, 0, 1, 0, 1])));
        assert!(g.admissible(&w(&[0, 0, 0, 0])));
        assert!(b18().admissible(&w(&[0; 9])));
        assert!(!g.admissible(&w(&[2])));
        assert_eq!(count_words(&g, 3, DEFAULT_CAP).unwrap(), 5);
    }

    fn all_words(alphabet: u8, n: usize) -> Vec<Word> {
        let full = FullShift::new(alphabet as usize);
        crate::language::enumerate_language(&full, n).unwrap()
    }

    #[test]
    fn extension_agrees_with_full_check() {
        for shift in [golden(), b18(), BetaShift::parse("2.5").unwrap()] {
            for n in 1..=7 {
                for word in all_words(shift.alphabet_size() as u8, n) {
                    if shift.admissible(&word[..n - 1]) {
                        assert_eq!(shift.admissible_extension(&word[..n - 1], word[n - 1]), shift.admissible(&word));
                    }
                }
            }
        }
    }

    #[test]
    fn counts_match_naive_filter() {
        for shift in [golden(), b18(), BetaShift::parse("2.5").unwrap()] {
            let counts = count_language(&shift, 10).unwrap();
            for n in 1..=10 {
                let words = all_words(shift.alphabet_size() as u8, n);
                let b = words.iter().filter(|x| shift.admissible(x)).count() as u64;
                // freeness by brute force: every admissible follower up to length 8 stays admissible
                let followers: Vec<Word> = (1..=8).flat_map(|m| all_words(shift.alphabet_size() as u8, m)).filter(|s| shift.admissible(s)).collect();
                let f = if n <= 6 {
                    Some(words.iter().filter(|x| shift.admissible(x) && followers.iter().all(|s| shift.admissible(&x.concat(s)))).count() as u64)
                } else {
                    None
                };
                assert_eq!(counts.b[n - 1], b, "{} b_{n}", shift.name());
                if let Some(f) = f {
                    assert_eq!(counts.f[n - 1], f, "{} f_{n}", shift.name());
                }
            }
        }
    }

    #[test]
    fn counting_examples() {
        let two = BetaShift::parse("2").unwrap();
        assert_eq!(count_language(&two, 4).unwrap().b[3], 16);
        assert_eq!(count_free(&two, 5).unwrap(), 32);
        let c = count_language(&golden(), 4).unwrap();
        assert_eq!(c.b, vec![2, 3, 5, 8]);
        assert_eq!(c.f, vec![1, 2, 3, 5]);
        let c = count_language(&golden(), 20).unwrap();
        let est = (c.b[19] as f64).ln() / 20.0;
        assert!((est - golden().value().ln()).abs() < 0.05);
    }

    #[test]
    fn golden_counts_are_fibonacci() {
        let c = count_language(&golden(), 16).unwrap();
        let mut fib = vec![2u64, 3];
        while fib.len() < 16 {
            let k = fib.len();
            fib.push(fib[k - 1] + fib[k - 2]);
        }
        assert_eq!(c.b, fib);
    }

    #[test]
    fn one_point_eight_counts() {
        let c = count_language(&b18(), 14).unwrap();
        assert_eq!(c.b, vec![2, 4, 7, 13, 23, 42, 75, 136, 244, 440, 791, 1425, 2564, 4617]);
        assert_eq!(c.f, vec![1, 2, 3, 6, 10, 19, 33, 61, 108, 196, 351, 634, 1139, 2053]);
    }

    #[test]
    fn recursion_examples() {
        let g = golden();
        let r = recursion_sequences(&g, 1, 6).unwrap();
        assert_eq!(r.u[0], 1);
        assert_eq!(r.v[0], 1);
        assert_eq!(r.v[1], 1);
        for k in 1..=4 {
            let r = recursion_sequences(&b18(), k, k).unwrap();
            assert_eq!((r.u[0], r.v[0]), (1, 1));
        }
    }

    #[test]
    fn u_is_the_running_sum_of_v() {
        for shift in [golden(), b18(), BetaShift::parse("2.5").unwrap()] {
            let r = recursion_sequences(&shift, 1, 30).unwrap();
            let mut acc = 0;
            for j in 0..30 {
                acc += r.v[j];
                assert_eq!(r.u[j], acc, "{} n = {}", shift.name(), j + 1);
            }
        }
    }

    #[test]
    fn growth_bounds() {
        for shift in [golden(), b18()] {
            let beta = shift.value();
            let c = lower_constant(beta);
            let counts = count_language(&shift, 16).unwrap();
            for n in 1..=16 {
                let (b, f) = (counts.b[n - 1] as f64, counts.f[n - 1] as f64);
                let bn = beta.powi(n as i32);
                assert!(c * bn <= f && f <= bn, "{} n = {n}", shift.name());
                assert!(1.0 <= b / f && b / f <= beta / (c * (beta - 1.0)));
            }
        }
    }

    #[test]
    fn lower_constant_values() {
        assert!((lower_constant(golden().value()) - 0.07466).abs() < 1e-4);
        assert!((lower_constant(1.8) - 0.11336).abs() < 1e-4);
    }

    #[test]
    fn sandwich_bounds() {
        // v_n ≤ f_n(y) and b_n(y) ≤ u_n with k = |y|. For β = 1.8 and y = 1 only
        // the upper half holds (f_3(1) = 1 < v_3 = 2).
        let cases: Vec<(BetaShift, Vec<u8>, bool)> = vec![
            (golden(), vec![0], true),
            (golden(), vec![1], true),
            (golden(), vec![1, 0], true),
            (b18(), vec![0], true),
            (b18(), vec![1], false),
            (b18(), vec![1, 0], true),
        ];
        for (shift, y, both) in cases {
            let k = y.len();
            let r = recursion_sequences(&shift, k, 16).unwrap();
            for n in k + 1..=16 {
                let est = cylinder_estimate(&shift, &w(&y), n).unwrap();
                assert!(est.b_n_y <= r.u[n - k], "{} y={y:?} n={n}", shift.name());
                if both {
                    assert!(r.v[n - k] <= est.f_n_y, "{} y={y:?} n={n}", shift.name());
                }
            }
        }
        let est = cylinder_estimate(&b18(), &w(&[1]), 3).unwrap();
        let r = recursion_sequences(&b18(), 1, 3).unwrap();
        assert!(est.f_n_y < r.v[2]);
    }

    #[test]
    fn cylinder_examples() {
        let two = BetaShift::parse("2").unwrap();
        let est = cylinder_estimate(&two, &w(&[1, 0, 1]), 8).unwrap();
        assert_eq!((est.lower, est.upper), (0.125, 0.125));
        let g = golden();
        let est = cylinder_estimate(&g, &w(&[1, 1]), 6).unwrap();
        assert_eq!((est.lower, est.upper), (0.0, 0.0));
        // the Parry measure of [0] is 1/(1 + β^{-2}) ≈ 0.7236 and must sit inside
        let parry0 = 1.0 / (1.0 + g.value().powi(-2));
        let mut last_width = f64::INFINITY;
        for n in [2, 4, 8, 12, 16] {
            let est = cylinder_estimate(&g, &w(&[0]), n).unwrap();
            assert!(est.lower <= parry0 && parry0 <= est.upper);
            let width = est.upper - est.lower;
            assert!(width <= last_width + 1e-12);
            last_width = width;
        }
    }

    #[test]
    fn cylinder_ratio_is_pinched() {
        for shift in [golden(), b18()] {
            let beta = shift.value();
            let c = lower_constant(beta);
            let bound = (beta / (beta - 1.0) / c).powi(2);
            for y in [vec![0u8], vec![1], vec![1, 0]] {
                for n in y.len() + 1..=16 {
                    let est = cylinder_estimate(&shift, &w(&y), n).unwrap();
                    assert!(est.lower > 0.0);
                    assert!(est.ratio() <= bound, "{} y={y:?} n={n} ratio {}", shift.name(), est.ratio());
                }
            }
        }
    }

    #[test]
    fn parry_examples() {
        let two = BetaShift::parse("2").unwrap();
        for x in [0.0, 0.3, 0.77, 0.999] {
            assert!((parry_density(&two, x, 100).unwrap().normalized - 1.0).abs() < 1e-9);
        }
        let g = golden();
        let h5 = parry_density(&g, 0.5, 200).unwrap().value;
        let h9 = parry_density(&g, 0.9, 200).unwrap().value;
        assert!((h5 / h9 - g.value()).abs() < 1e-9);
        assert!(parry_density(&g, 1.0, 10).is_err());
    }

    #[test]
    fn parry_density_is_nonincreasing() {
        for shift in [golden(), b18(), BetaShift::parse("2.5").unwrap()] {
            let mut last = f64::INFINITY;
            for i in 0..500 {
                let h = parry_density(&shift, i as f64 / 500.0, 120).unwrap();
                assert!(h.value <= last);
                assert!(h.tail_bound < 1e-9);
                last = h.value;
            }
        }
    }

    #[test]
    fn parry_normalization_matches_grid_integral() {
        let shift = b18();
        let dens = parry_density(&shift, 0.0, 150).unwrap();
        let m = 10_000;
        let grid: f64 = (0..m).map(|i| parry_density(&shift, (i as f64 + 0.5) / m as f64, 150).unwrap().value).sum::<f64>() / m as f64;
        assert!((grid - dens.integral).abs() < 1e-3);
    }

    #[test]
    fn concurrent_readers_agree() {
        let shift = b18();
        let reference = BetaShift::parse("1.8").unwrap().omega(300);
        std::thread::scope(|s| {
            for len in [50, 120, 300, 7] {
                let shift = shift.clone();
                let reference = &reference;
                s.spawn(move || assert_eq!(shift.omega(len), reference[..len]));
            }
        });
    }
}
