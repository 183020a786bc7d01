//! Small statistics helpers for the Monte Carlo checks.

/// Standard deviation of the mean of `n` Bernoulli(`p`) trials.
pub fn binomial_sigma(p: f64, n: u64) -> f64 {
    (p * (1.0 - p) / n as f64).sqrt()
}

pub fn mean(xs: &[f64]) -> f64 {
    xs.iter().sum::<f64>() / xs.len() as f64
}

/// Standard error of the mean of a correlated series by the method of batch
/// means: split into `batches` contiguous blocks and use the spread of the
/// block averages.
pub fn batch_means_sigma(xs: &[f64], batches: usize) -> f64 {
    assert!(batches >= 2 && xs.len() >= batches);
    let size = xs.len() / batches;
    let means: Vec<f64> = (0..batches).map(|b| mean(&xs[b * size..(b + 1) * size])).collect();
    let m = mean(&means);
    let var = means.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (batches - 1) as f64;
    (var / batches as f64).sqrt()
}

/// Shannon entropy `−Σ p log p` with `0 log 0 = 0`.
pub fn entropy(p: &[f64]) -> f64 {
    p.iter().filter(|x| **x > 0.0).map(|x| -x * x.ln()).sum()
}
