//! Exact bases for β-expansions: rationals and quadratic irrationals.
//!
//! Digits of the expansion of 1 are floors of orbit points, so every digit is
//! a sign decision. Working in `Q(√d)` makes each decision exact, and a
//! terminating greedy expansion is detected as an exact zero.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// `a + b·√d` with rational `a`, `b`; `d` is 0 for plain rationals, otherwise a
/// positive non-square integer.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Quadratic {
    pub a: BigRational,
    pub b: BigRational,
    pub d: BigInt,
}

impl Quadratic {
    pub fn rational(a: BigRational) -> Self {
        Quadratic { a, b: BigRational::zero(), d: BigInt::zero() }
    }

    pub fn integer(k: i64) -> Self {
        Quadratic::rational(BigRational::from_integer(BigInt::from(k)))
    }

    pub fn with_root(a: BigRational, b: BigRational, d: BigInt) -> Result<Self> {
        if d.is_negative() {
            return Err(Error::InvalidBeta(format!("√{d} is not real")));
        }
        let r = d.sqrt();
        if &r * &r == d {
            // perfect square: fold into the rational part
            return Ok(Quadratic::rational(a + b * BigRational::from_integer(r)));
        }
        Ok(Quadratic { a, b, d })
    }

    fn same_field(&self, other: &Self) -> BigInt {
        if self.b.is_zero() {
            other.d.clone()
        } else {
            debug_assert!(other.b.is_zero() || self.d == other.d);
            self.d.clone()
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let d = self.same_field(other);
        let dr = BigRational::from_integer(d.clone());
        Quadratic {
            a: &self.a * &other.a + &self.b * &other.b * dr,
            b: &self.a * &other.b + &self.b * &other.a,
            d,
        }
    }

    pub fn sub_integer(&self, k: &BigInt) -> Self {
        Quadratic { a: &self.a - BigRational::from_integer(k.clone()), b: self.b.clone(), d: self.d.clone() }
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    /// Exact sign: −1, 0 or 1.
    pub fn signum(&self) -> i32 {
        let sign = |x: &BigRational| {
            if x.is_positive() {
                1
            } else if x.is_negative() {
                -1
            } else {
                0
            }
        };
        let (sa, sb) = (sign(&self.a), sign(&self.b));
        if sb == 0 {
            return sa;
        }
        if sa == 0 || sa == sb {
            return sb;
        }
        // opposite signs: compare a² with b²·d (never equal, d is not a square)
        let a2 = &self.a * &self.a;
        let b2d = &self.b * &self.b * BigRational::from_integer(self.d.clone());
        if a2 > b2d {
            sa
        } else {
            sb
        }
    }

    pub fn to_f64(&self) -> f64 {
        let a = self.a.to_f64().unwrap_or(f64::NAN);
        if self.b.is_zero() {
            return a;
        }
        let b = self.b.to_f64().unwrap_or(f64::NAN);
        a + b * self.d.to_f64().unwrap_or(f64::NAN).sqrt()
    }

    /// `⌊x⌋`. The irrational part is bracketed exactly with an integer square
    /// root, `⌊√(b²d)⌋ ≤ |b|√d < ⌊√(b²d)⌋ + 1`, so the float value is never
    /// trusted (it cancels badly once the coefficients grow); exact sign tests
    /// settle the last step.
    pub fn floor(&self) -> BigInt {
        let mut k = if self.b.is_zero() {
            self.a.floor().to_integer()
        } else {
            let b2d = &self.b * &self.b * BigRational::from_integer(self.d.clone());
            let root = b2d.floor().to_integer().sqrt();
            let s = if self.b.is_positive() { root } else { -root - 1 };
            (&self.a + BigRational::from_integer(s)).floor().to_integer()
        };
        while self.sub_integer(&k).signum() < 0 {
            k -= 1;
        }
        while self.sub_integer(&(&k + 1)).signum() >= 0 {
            k += 1;
        }
        k
    }
}

/// A base `β > 1`, held exactly.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BetaNumber {
    value: Quadratic,
    label: String,
}

impl BetaNumber {
    pub fn new(value: Quadratic, label: impl Into<String>) -> Result<Self> {
        if value.sub_integer(&BigInt::one()).signum() <= 0 {
            return Err(Error::InvalidBeta(format!("β = {} is not greater than 1", value.to_f64())));
        }
        Ok(BetaNumber { value, label: label.into() })
    }

    /// `(1 + √5)/2`.
    pub fn golden() -> Self {
        let half = BigRational::new(BigInt::one(), BigInt::from(2));
        let value = Quadratic::with_root(half.clone(), half, BigInt::from(5)).unwrap();
        BetaNumber::new(value, "golden").unwrap()
    }

    pub fn integer(m: u32) -> Result<Self> {
        BetaNumber::new(Quadratic::integer(m as i64), m.to_string())
    }

    /// Accepts `golden`, integers, decimals such as `1.8`, fractions `p/q`
    /// and `sqrt(d)`.
    pub fn parse(text: &str) -> Result<Self> {
        let t = text.trim();
        if t.eq_ignore_ascii_case("golden") || t.eq_ignore_ascii_case("golden-beta") {
            return Ok(BetaNumber::golden());
        }
        if let Some(inner) = t.strip_prefix("sqrt(").and_then(|r| r.strip_suffix(')')) {
            let d: BigInt = inner.trim().parse().map_err(|_| Error::InvalidBeta(format!("cannot parse `{text}`")))?;
            let q = Quadratic::with_root(BigRational::zero(), BigRational::one(), d)?;
            return BetaNumber::new(q, t);
        }
        let r = parse_rational(t).ok_or_else(|| Error::InvalidBeta(format!("cannot parse `{text}`")))?;
        BetaNumber::new(Quadratic::rational(r), t)
    }

    pub fn value(&self) -> &Quadratic {
        &self.value
    }

    pub fn to_f64(&self) -> f64 {
        self.value.to_f64()
    }

    pub fn label(&self) -> &str {
        &self.label
    }
}

impl fmt::Display for BetaNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label)
    }
}

fn parse_rational(t: &str) -> Option<BigRational> {
    if let Some((p, q)) = t.split_once('/') {
        let p: BigInt = p.trim().parse().ok()?;
        let q: BigInt = q.trim().parse().ok()?;
        return (!q.is_zero()).then(|| BigRational::new(p, q));
    }
    let (int, frac) = t.split_once('.').unwrap_or((t, ""));
    if int.is_empty() && frac.is_empty() {
        return None;
    }
    if !int.chars().all(|c| c.is_ascii_digit()) || !frac.chars().all(|c| c.is_ascii_digit()) {
        return None;
    }
    let digits = format!("{int}{frac}");
    let num: BigInt = digits.parse().ok()?;
    let den = num_traits::pow(BigInt::from(10), frac.len());
    Some(BigRational::new(num, den))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_forms() {
        assert_eq!(BetaNumber::parse("1.8").unwrap().value().a, BigRational::new(9.into(), 5.into()));
        assert_eq!(BetaNumber::parse("9/5").unwrap().value(), BetaNumber::parse("1.80").unwrap().value());
        assert!((BetaNumber::parse("golden").unwrap().to_f64() - 1.618_033_988_749_895).abs() < 1e-15);
        assert!((BetaNumber::parse("sqrt(3)").unwrap().to_f64() - 3f64.sqrt()).abs() < 1e-15);
        assert_eq!(BetaNumber::parse("sqrt(4)").unwrap().value(), &Quadratic::integer(2));
        assert!(BetaNumber::parse("1").is_err());
        assert!(BetaNumber::parse("0.5").is_err());
        assert!(BetaNumber::parse("abc").is_err());
        assert!(BetaNumber::parse("1/0").is_err());
    }

    #[test]
    fn exact_signs_and_floors() {
        let g = BetaNumber::golden();
        let phi = g.value();
        // φ² = φ + 1 exactly
        let sq = phi.mul(phi);
        let diff = Quadratic { a: &sq.a - &phi.a - BigRational::one(), b: &sq.b - &phi.b, d: sq.d.clone() };
        assert!(diff.is_zero());
        assert_eq!(phi.floor(), BigInt::one());
        assert_eq!(sq.floor(), BigInt::from(2));
        // 1 − √2/√2-ish cancellation: 7/5 − √2 < 0 < 3/2 − √2
        let close = Quadratic::with_root(BigRational::new(7.into(), 5.into()), -BigRational::one(), 2.into()).unwrap();
        assert_eq!(close.signum(), -1);
        let above = Quadratic::with_root(BigRational::new(3.into(), 2.into()), -BigRational::one(), 2.into()).unwrap();
        assert_eq!(above.signum(), 1);
        assert_eq!(Quadratic::integer(3).floor(), BigInt::from(3));
    }
}
