//! The end-to-end checks behind `verify-all` and the `acceptance` test target.
//!
//! Every check runs at a fixed tolerance and seed and reports a one-line
//! summary. The runtime budget is part of each check.

use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::beta::{count_language, cylinder_estimate, lower_constant, parry_density, BetaShift};
use crate::counterexample::counterexample_oracle;
use crate::dyck::{dyck_oracle, pressure_fn, pressure_gradient, solve_equilibrium, DyckParams, DyckSitePotential};
use crate::error::Result;
use crate::gibbsrel::{check_conformal, find_swaps, singular_witness_counterexample, MeasureModel};
use crate::kalikow::{
    excursion_invariance_test, mu_p_entropy, optimal_p, scenery_measure_invariance_test, KalikowConfig, KalikowWord,
    WalkWord,
};
use crate::language::{entropy_estimate, entropy_estimate_capped, pressure_estimate, pressure_truncation_bound};
use crate::potential::LocalPotential;
use crate::sft::{equilibrium_markov, partition_log_constant, pressure_exact, MarkovMeasure, Sft, TransitionMatrix};
use crate::word::Symbol;

/// Checks whose finite-size targets are out of reach at the prescribed
/// lengths: both entropy estimates converge like `log n / n` or slower.
pub const KNOWN_SHORTFALLS: [u32; 2] = [3, 9];

#[derive(Debug, Clone, Serialize)]
pub struct Outcome {
    pub id: u32,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
    pub seconds: f64,
    pub budget_seconds: f64,
}

impl Outcome {
    pub fn line(&self) -> String {
        format!(
            "[{}] {:>2} {} ({:.2}s of {:.0}s): {}",
            if self.passed { "PASS" } else { "FAIL" },
            self.id,
            self.name,
            self.seconds,
            self.budget_seconds,
            self.detail
        )
    }
}

struct Check {
    passed: bool,
    detail: String,
}

pub struct Criterion {
    pub id: u32,
    pub name: &'static str,
    pub budget_seconds: f64,
    run: fn() -> Result<Check>,
}

impl Criterion {
    pub fn run(&self) -> Outcome {
        let start = Instant::now();
        let result = (self.run)();
        let seconds = start.elapsed().as_secs_f64();
        let (passed, detail) = match result {
            Ok(c) => (c.passed, c.detail),
            Err(e) => (false, format!("error: {e}")),
        };
        let slow = seconds >= self.budget_seconds;
        Outcome {
            id: self.id,
            name: self.name,
            passed: passed && !slow,
            detail: if slow { format!("{detail}; over the time budget") } else { detail },
            seconds,
            budget_seconds: self.budget_seconds,
        }
    }
}

pub fn criteria() -> Vec<Criterion> {
    vec![
        Criterion { id: 1, name: "walk-in-scenery maximizers", budget_seconds: 1.0, run: c1_kalikow_closed_forms },
        Criterion { id: 2, name: "walk-in-scenery symmetric entropy", budget_seconds: 1.0, run: c2_kalikow_half },
        Criterion { id: 3, name: "Dyck equilibrium at zero", budget_seconds: 30.0, run: c3_dyck_zero },
        Criterion { id: 4, name: "Dyck pressure gradient", budget_seconds: 5.0, run: c4_dyck_gradient },
        Criterion { id: 5, name: "golden-mean conformality", budget_seconds: 5.0, run: c5_sft_conformal },
        Criterion { id: 6, name: "pressure estimate vs exact", budget_seconds: 60.0, run: c6_pressure },
        Criterion { id: 7, name: "beta-shift counts and cylinders", budget_seconds: 60.0, run: c7_beta_counts },
        Criterion { id: 8, name: "Parry density", budget_seconds: 1.0, run: c8_parry },
        Criterion { id: 9, name: "counterexample shift", budget_seconds: 120.0, run: c9_counterexample },
        Criterion { id: 10, name: "walk-in-scenery invariance", budget_seconds: 120.0, run: c10_kalikow_mc },
    ]
}

pub fn run_all() -> Vec<Outcome> {
    criteria().iter().map(Criterion::run).collect()
}

fn check(passed: bool, detail: String) -> Result<Check> {
    Ok(Check { passed, detail })
}

fn c1_kalikow_closed_forms() -> Result<Check> {
    let o = optimal_p(&KalikowConfig::new(2, 0.5)?);
    let h_err = (o.h_top - 2.5f64.ln()).abs();
    let grid_err = (o.grid_argmax_plus - 0.8).abs().max((o.grid_argmax_minus - 0.2).abs());
    check(
        o.p_plus == 0.8 && o.p_minus == 0.2 && h_err <= 1e-12 && grid_err <= 1e-4,
        format!("p+ = {}, p- = {}, |h_top - log 2.5| = {h_err:.1e}, grid offset {grid_err:.1e}", o.p_plus, o.p_minus),
    )
}

fn c2_kalikow_half() -> Result<Check> {
    let err = (mu_p_entropy(&KalikowConfig::new(2, 0.5)?) - 2f64.ln()).abs();
    check(err <= 1e-12, format!("|h - log 2| = {err:.1e}"))
}

fn c3_dyck_zero() -> Result<Check> {
    let eq = solve_equilibrium(&DyckSitePotential::zero())?;
    let p = eq.params;
    let param_err = (p.mu[2] - 1.0 / 6.0).abs().max((p.mu[3] - 1.0 / 6.0).abs()).max((p.mu1p - 0.5).abs());
    let log3 = 3f64.ln();
    let p_err = (eq.pressure - log3).abs();
    let est = entropy_estimate(&dyck_oracle(), 12)?;
    let est_err = (est - log3).abs();
    check(
        param_err <= 1e-10 && p_err <= 1e-10 && est_err <= 0.05,
        format!(
            "parameter error {param_err:.1e}, |P - log 3| = {p_err:.1e}, (1/12)log|L_12| = {est:.4} ({est_err:.4} from log 3, tolerance 0.05)"
        ),
    )
}

fn c4_dyck_gradient() -> Result<Check> {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let h = 1e-6;
    let mut worst = 0.0f64;
    for _ in 0..100 {
        let (a, b) = loop {
            let a: f64 = rng.gen_range(0.01..0.49);
            let b: f64 = rng.gen_range(0.01..0.49);
            if a + b < 0.49 {
                break (a, b);
            }
        };
        let q = rng.gen_range(0.01..0.99);
        let f = DyckSitePotential::new([0; 4].map(|_| rng.gen_range(-1.0..1.0)))?;
        let grad = pressure_gradient(&DyckParams::from_independent(a, b, q)?, &f)?;
        let at = |a: f64, b: f64, q: f64| -> Result<f64> { pressure_fn(&DyckParams::from_independent(a, b, q)?, &f) };
        let fd = [
            (at(a + h, b, q)? - at(a - h, b, q)?) / (2.0 * h),
            (at(a, b + h, q)? - at(a, b - h, q)?) / (2.0 * h),
            (at(a, b, q + h)? - at(a, b, q - h)?) / (2.0 * h),
        ];
        for k in 0..3 {
            worst = worst.max((grad[k] - fd[k]).abs());
        }
    }
    check(worst <= 1e-5, format!("max |analytic - central difference| = {worst:.1e} over 100 points"))
}

fn c5_sft_conformal() -> Result<Check> {
    let golden = Sft::new("golden", TransitionMatrix::golden_mean());
    let mut swaps = Vec::new();
    for n in 1..=5 {
        swaps.extend(find_swaps(&golden, n, 1)?);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let (mut worst, mut contexts) = (0.0f64, 0usize);
    for _ in 0..20 {
        let values = vec![rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0)];
        let mu = equilibrium_markov(golden.matrix(), &values)?;
        let f = LocalPotential::site(&values);
        for r in check_conformal(&MeasureModel::Exact(&mu), &f, &swaps, 1, &golden)? {
            worst = worst.max(r.max_log_deviation.abs());
            contexts += r.contexts;
        }
    }
    check(
        !swaps.is_empty() && worst <= 1e-10,
        format!("{} swaps, {contexts} swap-context checks, max log-deviation {worst:.1e}", swaps.len()),
    )
}

fn random_irreducible(rng: &mut ChaCha8Rng) -> Result<TransitionMatrix> {
    loop {
        let rows: Vec<Vec<u8>> = (0..3).map(|_| (0..3).map(|_| rng.gen_bool(0.6) as u8).collect()).collect();
        if let Ok(m) = TransitionMatrix::new(rows) {
            if m.is_irreducible() {
                return Ok(m);
            }
        }
    }
}

fn c6_pressure() -> Result<Check> {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let n = 14;
    let (mut ok, mut worst_ratio) = (true, 0.0f64);
    for s in 0..3 {
        let m = random_irreducible(&mut rng)?;
        let sft = Sft::new(format!("random-{s}"), m.clone());
        for _ in 0..10 {
            let values: Vec<f64> = (0..3).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let f = LocalPotential::site(&values);
            let exact = pressure_exact(&m, &values)?;
            let est = pressure_estimate(&sft, &f, n)?;
            let bound = pressure_truncation_bound(&f, n, partition_log_constant(&m, &values)?);
            ok &= (est - exact).abs() <= bound;
            worst_ratio = worst_ratio.max((est - exact).abs() / bound);
        }
    }
    check(ok, format!("30 potentials, worst |estimate - exact| / bound = {worst_ratio:.3}"))
}

fn beta_suite(shift: &BetaShift, n_max: usize) -> Result<(bool, String)> {
    let counts = count_language(shift, n_max)?;
    let beta = shift.value();
    let c = lower_constant(beta);
    let slack = 1.0 + 1e-12;
    let mut ok = true;
    for (i, (b, f)) in counts.b.iter().zip(&counts.f).enumerate() {
        let n = (i + 1) as i32;
        let (b, f) = (*b as f64, *f as f64);
        ok &= c * beta.powi(n) <= f * slack && f <= beta.powi(n) * slack;
        ok &= 1.0 <= b / f * slack && b / f <= beta / (c * (beta - 1.0)) * slack;
    }
    let cap = (beta / (beta - 1.0)).powi(2) / (c * c);
    let mut worst = 0.0f64;
    for y in [&[0u8][..], &[1], &[1, 0]] {
        let y: Vec<Symbol> = y.iter().map(|s| Symbol(*s)).collect();
        for n in y.len() + 1..=n_max {
            let r = cylinder_estimate(shift, &y, n)?.ratio();
            worst = worst.max(r);
            ok &= r <= cap * slack;
        }
    }
    Ok((ok, format!("{}: worst cylinder ratio {worst:.3} (cap {cap:.3})", shift.beta().label())))
}

fn c7_beta_counts() -> Result<Check> {
    let golden = BetaShift::golden();
    let counts = count_language(&golden, 16)?;
    let mut fib = vec![2u64, 3];
    while fib.len() < 16 {
        fib.push(fib[fib.len() - 1] + fib[fib.len() - 2]);
    }
    let fib_ok = counts.b == fib;
    let (g_ok, g_detail) = beta_suite(&golden, 16)?;
    let (e_ok, e_detail) = beta_suite(&BetaShift::parse("1.8")?, 16)?;
    check(fib_ok && g_ok && e_ok, format!("Fibonacci counts {}; {g_detail}; {e_detail}", if fib_ok { "ok" } else { "wrong" }))
}

fn c8_parry() -> Result<Check> {
    let two = BetaShift::parse("2")?;
    let mut worst = 0.0f64;
    for i in 0..100 {
        let d = parry_density(&two, i as f64 / 100.0, 200)?;
        worst = worst.max((d.normalized - 1.0).abs());
    }
    let golden = BetaShift::golden();
    let ratio = parry_density(&golden, 0.5, 200)?.value / parry_density(&golden, 0.9, 200)?.value;
    let ratio_err = (ratio - golden.value()).abs();
    check(
        worst <= 1e-9 && ratio_err <= 1e-9,
        format!("β = 2 max |h - 1| = {worst:.1e}; golden |h(0.5)/h(0.9) - β| = {ratio_err:.1e}"),
    )
}

fn c9_counterexample() -> Result<Check> {
    // |L_16| is just above the default cap
    let est = entropy_estimate_capped(&counterexample_oracle(), 16, 20_000_000)?;
    let err = (est - 2f64.ln()).abs();
    let rows = singular_witness_counterexample(12)?;
    let singular = rows.iter().all(|r| r.mu_containing_zero == 0.0 && r.containing_zero > 0);
    check(
        err <= 0.05 && singular,
        format!(
            "(1/16)log|L_16| = {est:.4} ({err:.4} from log 2, tolerance 0.05); zero-containing words null with positive count for n <= 12: {singular}"
        ),
    )
}

const EXCURSION_PAIRS: [(&str, &str); 5] = [
    ("+1 -2 +1 +2", "+2 -1 +2 +1"),
    ("+1 -2 +1 +2 +1", "+1 +2 -1 +2 +1"),
    ("+2 -2 +2 +2 +1", "+1 +1 -2 +1 +2"),
    ("+1 -1 +1 -1 +1 +1", "+2 -1 +2 -1 +2 +1"),
    ("+1 -2 +1 +2 +1 +2", "+2 +2 +1 -2 +1 +2"),
];

fn c10_kalikow_mc() -> Result<Check> {
    let config = KalikowConfig::new(2, 0.8)?;
    let trials = 1_000_000;
    let mut ok = true;
    let mut worst = 0.0f64;
    for (i, (a, b)) in EXCURSION_PAIRS.iter().enumerate() {
        let r = excursion_invariance_test(&config, &KalikowWord::parse(a, 2)?, &KalikowWord::parse(b, 2)?, trials, 100 + i as u64)?;
        let mc = r.monte_carlo.expect("trials > 0");
        ok &= !mc.inconclusive && mc.within_band;
        worst = worst.max((mc.ratio - 1.0).abs() / mc.sigma);
    }
    let uniform = scenery_measure_invariance_test(
        &MarkovMeasure::bernoulli(&[0.5, 0.5])?,
        &WalkWord::parse("+-+-")?,
        &WalkWord::parse("--++")?,
        5,
        trials,
        201,
    )?;
    let markov = scenery_measure_invariance_test(
        &MarkovMeasure::two_state(0.2, 0.5)?,
        &WalkWord::parse("++-+-+")?,
        &WalkWord::parse("-+++-+")?,
        7,
        trials,
        202,
    )?;
    ok &= uniform.passes() && markov.passes();
    check(
        ok,
        format!(
            "5 excursion pairs, worst |ratio - 1| = {worst:.2}σ; scenery ratios {:.3} ± {:.3} (uniform), {:.3} ± {:.3} (Markov)",
            uniform.ratio, uniform.sigma, markov.ratio, markov.sigma
        ),
    )
}
