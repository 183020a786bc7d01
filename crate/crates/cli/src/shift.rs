use std::fs;

use subshift::beta::BetaShift;
use subshift::{counterexample_oracle, dyck_oracle, kalikow_oracle, KalikowConfig, Sft, SubshiftOracle, TransitionMatrix};

/// A parsed `--shift` selector.
pub struct Shift {
    pub label: String,
    pub oracle: Box<dyn SubshiftOracle>,
    /// Set for one-step SFTs, where exact Perron data is available.
    pub matrix: Option<TransitionMatrix>,
    pub beta: Option<BetaShift>,
    /// Closed-form topological entropy, when known.
    pub h_top: Option<f64>,
}

pub const SELECTORS: &str = "full:N, golden, golden-beta, beta:X, dyck, counterexample, kalikow:N, sft:PATH";

impl Shift {
    pub fn parse(text: &str) -> Result<Shift, String> {
        let (head, arg) = match text.split_once(':') {
            Some((h, a)) => (h, Some(a)),
            None => (text, None),
        };
        let label = text.to_string();
        match (head, arg) {
            ("full", Some(m)) => {
                let m: usize = m.parse().map_err(|_| format!("bad alphabet size in `{text}`"))?;
                if !(1..=255).contains(&m) {
                    return Err(format!("alphabet size {m} out of range"));
                }
                Ok(Shift::sft(label, TransitionMatrix::full(m), Some((m as f64).ln())))
            }
            ("golden", None) => {
                let phi = (1.0 + 5f64.sqrt()) / 2.0;
                Ok(Shift::sft(label, TransitionMatrix::golden_mean(), Some(phi.ln())))
            }
            ("sft", Some(path)) => {
                let text = fs::read_to_string(path).map_err(|e| format!("cannot read {path}: {e}"))?;
                let matrix = TransitionMatrix::from_json(&text).map_err(|e| e.to_string())?;
                Ok(Shift::sft(label, matrix, None))
            }
            ("golden-beta", None) => Shift::beta(label, "golden"),
            ("beta", Some(x)) => Shift::beta(label, x),
            ("dyck", None) => Ok(Shift::plain(label, Box::new(dyck_oracle()), Some(3f64.ln()))),
            ("counterexample", None) => Ok(Shift::plain(label, Box::new(counterexample_oracle()), Some(2f64.ln()))),
            ("kalikow", Some(n)) => {
                let n: usize = n.parse().map_err(|_| format!("bad scenery size in `{text}`"))?;
                let config = KalikowConfig::new(n, 0.5).map_err(|e| e.to_string())?;
                let n = n as f64;
                Ok(Shift::plain(label, Box::new(kalikow_oracle(config)), Some(((n * n + 1.0) / n).ln())))
            }
            _ => Err(format!("unknown shift `{text}`; expected one of {SELECTORS}")),
        }
    }

    fn sft(label: String, matrix: TransitionMatrix, h_top: Option<f64>) -> Shift {
        Shift {
            oracle: Box::new(Sft::new(label.clone(), matrix.clone())),
            label,
            matrix: Some(matrix),
            beta: None,
            h_top,
        }
    }

    fn beta(label: String, x: &str) -> Result<Shift, String> {
        let shift = BetaShift::parse(x).map_err(|e| e.to_string())?;
        let h_top = Some(shift.value().ln());
        Ok(Shift { oracle: Box::new(shift.clone()), label, matrix: None, beta: Some(shift), h_top })
    }

    fn plain(label: String, oracle: Box<dyn SubshiftOracle>, h_top: Option<f64>) -> Shift {
        Shift { label, oracle, matrix: None, beta: None, h_top }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn selectors_parse() {
        for s in ["full:3", "golden", "golden-beta", "beta:1.8", "beta:sqrt(3)", "dyck", "counterexample", "kalikow:2"] {
            let shift = Shift::parse(s).unwrap();
            assert_eq!(shift.label, s);
        }
        assert_eq!(Shift::parse("full:3").unwrap().oracle.alphabet_size(), 3);
        assert!(Shift::parse("golden").unwrap().matrix.is_some());
        assert!(Shift::parse("beta:1.8").unwrap().beta.is_some());
    }

    #[test]
    fn bad_selectors_are_rejected() {
        for s in ["", "full", "full:x", "full:0", "beta:", "kalikow:1", "sft:/nonexistent.json", "dyck:2"] {
            assert!(Shift::parse(s).is_err(), "{s}");
        }
    }
}
