//! Value backends for the trees.
//!
//! Dispersed updates and diluted queries multiply stored values by ratios of
//! segment widths, so intermediate node values are fractions even when every
//! input is an integer. [`Rational`] keeps those fractions exact (used by the
//! correctness suites); `f64` is the fast backend used for benchmarking.

use std::fmt;
use std::str::FromStr;

use num_integer::Integer;
use serde_json::Value;

use crate::error::{invalid, Error, Result};

/// A positive ratio of two segment-length counts, kept in lowest terms.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Ratio {
    num: u64,
    den: u64,
}

impl Ratio {
    pub const ONE: Ratio = Ratio { num: 1, den: 1 };

    /// Builds `num/den` in lowest terms. Both parts must be positive.
    pub fn new(num: u64, den: u64) -> Result<Self> {
        if num == 0 || den == 0 {
            return Err(invalid(format!(
                "ratio parts must be positive, got {num}/{den}"
            )));
        }
        let g = num.gcd(&den);
        Ok(Ratio {
            num: num / g,
            den: den / g,
        })
    }

    pub fn num(self) -> u64 {
        self.num
    }

    pub fn den(self) -> u64 {
        self.den
    }

    pub fn is_one(self) -> bool {
        self.num == self.den
    }

    pub fn to_f64(self) -> f64 {
        self.num as f64 / self.den as f64
    }
}

impl fmt::Display for Ratio {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

/// Fraction of a segment covered by a trimmed sub-segment: `part_width / whole_width`.
///
/// Requires `0 < part_width <= whole_width`.
pub fn ratio(part_width: u64, whole_width: u64) -> Result<Ratio> {
    if part_width == 0 || whole_width == 0 {
        return Err(invalid(format!(
            "segment widths must be positive, got {part_width}/{whole_width}"
        )));
    }
    if part_width > whole_width {
        return Err(invalid(format!(
            "trimmed width {part_width} exceeds segment width {whole_width}"
        )));
    }
    Ratio::new(part_width, whole_width)
}

/// Arithmetic the trees need from a value type.
pub trait Scalar: Copy + PartialEq + fmt::Debug + fmt::Display + Send + Sync + 'static {
    /// Short backend name as used on the command line.
    const BACKEND: &'static str;

    fn zero() -> Self;

    fn from_i64(v: i64) -> Self;

    fn checked_add(self, rhs: Self) -> Result<Self>;

    fn checked_neg(self) -> Result<Self>;

    /// Multiplies by a cell count (node size, trimmed width).
    fn mul_count(self, count: u64) -> Result<Self>;

    /// Multiplies by `r.num() / r.den()`.
    fn scale(self, r: Ratio) -> Result<Self>;

    fn to_f64(self) -> f64;

    fn is_zero(self) -> bool {
        self == Self::zero()
    }

    fn checked_sub(self, rhs: Self) -> Result<Self> {
        self.checked_add(rhs.checked_neg()?)
    }

    fn to_json(self) -> Value;

    fn from_json(v: &Value) -> Result<Self>;
}

impl Scalar for f64 {
    const BACKEND: &'static str = "float";

    #[inline]
    fn zero() -> Self {
        0.0
    }

    #[inline]
    fn from_i64(v: i64) -> Self {
        v as f64
    }

    #[inline]
    fn checked_add(self, rhs: Self) -> Result<Self> {
        Ok(self + rhs)
    }

    #[inline]
    fn checked_neg(self) -> Result<Self> {
        Ok(-self)
    }

    #[inline]
    fn mul_count(self, count: u64) -> Result<Self> {
        Ok(self * count as f64)
    }

    #[inline]
    fn scale(self, r: Ratio) -> Result<Self> {
        Ok(self * r.num as f64 / r.den as f64)
    }

    #[inline]
    fn to_f64(self) -> f64 {
        self
    }

    fn to_json(self) -> Value {
        serde_json::Number::from_f64(self)
            .map(Value::Number)
            .unwrap_or(Value::Null)
    }

    fn from_json(v: &Value) -> Result<Self> {
        v.as_f64()
            .ok_or_else(|| invalid(format!("expected a JSON number, got {v}")))
    }
}

/// Exact fraction with a 128-bit numerator and a 64-bit denominator.
///
/// Always stored in lowest terms with a positive denominator, so derived
/// equality is value equality. Every operation is checked; overflow surfaces
/// as [`Error::Overflow`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Rational {
    num: i128,
    den: u64,
}

impl Rational {
    pub const ZERO: Rational = Rational { num: 0, den: 1 };

    pub fn new(num: i128, den: u64) -> Result<Self> {
        if den == 0 {
            return Err(invalid("rational denominator must be nonzero"));
        }
        Ok(Self::reduced(num, den))
    }

    pub fn integer(v: i128) -> Self {
        Rational { num: v, den: 1 }
    }

    pub fn numer(self) -> i128 {
        self.num
    }

    pub fn denom(self) -> u64 {
        self.den
    }

    pub fn is_integer(self) -> bool {
        self.den == 1
    }

    fn reduced(num: i128, den: u64) -> Self {
        let g = num.unsigned_abs().gcd(&(den as u128));
        if g <= 1 {
            return Rational { num, den };
        }
        Rational {
            num: num / g as i128,
            den: (den as u128 / g) as u64,
        }
    }

    fn checked_mul_frac(self, num: u64, den: u64) -> Result<Self> {
        let g1 = self.num.unsigned_abs().gcd(&(den as u128));
        let g2 = num.gcd(&self.den);
        // g1 == 0 only when self.num == 0 and den == 0, which Ratio rules out.
        let g1 = g1.max(1);
        let a = self.num / g1 as i128;
        let n = (num / g2) as i128;
        let new_num = a.checked_mul(n).ok_or(Error::Overflow)?;
        let d = self.den / g2;
        let q = (den as u128 / g1) as u64;
        let new_den = d.checked_mul(q).ok_or(Error::Overflow)?;
        Ok(Self::reduced(new_num, new_den))
    }
}

impl Default for Rational {
    fn default() -> Self {
        Rational::ZERO
    }
}

impl Scalar for Rational {
    const BACKEND: &'static str = "rational";

    fn zero() -> Self {
        Rational::ZERO
    }

    fn from_i64(v: i64) -> Self {
        Rational::integer(v as i128)
    }

    fn checked_add(self, rhs: Self) -> Result<Self> {
        if self.den == rhs.den {
            let num = self.num.checked_add(rhs.num).ok_or(Error::Overflow)?;
            return Ok(Self::reduced(num, self.den));
        }
        let g = self.den.gcd(&rhs.den);
        let lhs_mul = (rhs.den / g) as i128;
        let rhs_mul = (self.den / g) as i128;
        let num = self
            .num
            .checked_mul(lhs_mul)
            .and_then(|a| rhs.num.checked_mul(rhs_mul).and_then(|b| a.checked_add(b)))
            .ok_or(Error::Overflow)?;
        // lcm of the two denominators
        let den = (self.den / g).checked_mul(rhs.den).ok_or(Error::Overflow)?;
        Ok(Self::reduced(num, den))
    }

    fn checked_neg(self) -> Result<Self> {
        let num = self.num.checked_neg().ok_or(Error::Overflow)?;
        Ok(Rational { num, den: self.den })
    }

    fn mul_count(self, count: u64) -> Result<Self> {
        if count == 0 {
            return Ok(Rational::ZERO);
        }
        self.checked_mul_frac(count, 1)
    }

    fn scale(self, r: Ratio) -> Result<Self> {
        self.checked_mul_frac(r.num, r.den)
    }

    fn to_f64(self) -> f64 {
        self.num as f64 / self.den as f64
    }

    fn to_json(self) -> Value {
        Value::String(self.to_string())
    }

    fn from_json(v: &Value) -> Result<Self> {
        match v {
            Value::String(s) => s.parse(),
            Value::Number(n) => n
                .as_i64()
                .map(Rational::from_i64)
                .ok_or_else(|| invalid(format!("non-integer JSON number {n} for rational cell"))),
            other => Err(invalid(format!("expected \"p/q\" string, got {other}"))),
        }
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den == 1 {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/{}", self.num, self.den)
        }
    }
}

impl FromStr for Rational {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || invalid(format!("cannot parse {s:?} as a rational"));
        match s.split_once('/') {
            Some((p, q)) => {
                let num: i128 = p.trim().parse().map_err(|_| bad())?;
                let den: u64 = q.trim().parse().map_err(|_| bad())?;
                Rational::new(num, den)
            }
            None => Ok(Rational::integer(s.trim().parse().map_err(|_| bad())?)),
        }
    }
}

impl From<i64> for Rational {
    fn from(v: i64) -> Self {
        Rational::from_i64(v)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn q(num: i128, den: u64) -> Rational {
        Rational::new(num, den).unwrap()
    }

    #[test]
    fn scale_examples() {
        assert_eq!(
            Rational::from(8).scale(Ratio::new(2, 4).unwrap()).unwrap(),
            Rational::from(4)
        );
        assert_eq!(8.0f64.scale(ratio(2, 4).unwrap()).unwrap(), 4.0);
        let v = q(-7, 3);
        assert_eq!(v.scale(Ratio::ONE).unwrap(), v);
        assert_eq!(
            Rational::from(5).scale(ratio(1, 3).unwrap()).unwrap(),
            q(5, 3)
        );
    }

    #[test]
    fn ratio_examples() {
        assert_eq!(ratio(2, 4).unwrap(), Ratio::new(1, 2).unwrap());
        assert_eq!(ratio(3, 3).unwrap(), Ratio::ONE);
        let r = ratio(1, 6).unwrap();
        assert_eq!((r.num(), r.den()), (1, 6));
    }

    #[test]
    fn ratio_rejects_bad_widths() {
        assert!(matches!(ratio(0, 4), Err(Error::InvalidArgument(_))));
        assert!(matches!(ratio(3, 0), Err(Error::InvalidArgument(_))));
        assert!(matches!(ratio(5, 4), Err(Error::InvalidArgument(_))));
    }

    #[test]
    fn normalization() {
        let v = q(6, 4);
        assert_eq!((v.numer(), v.denom()), (3, 2));
        let z = q(0, 9);
        assert_eq!(z, Rational::ZERO);
        assert!(Rational::new(1, 0).is_err());
    }

    #[test]
    fn add_mixed_denominators() {
        assert_eq!(q(1, 6).checked_add(q(1, 4)).unwrap(), q(5, 12));
        assert_eq!(q(1, 2).checked_add(q(1, 2)).unwrap(), Rational::from(1));
        assert_eq!(q(1, 3).checked_sub(q(1, 3)).unwrap(), Rational::ZERO);
    }

    #[test]
    fn overflow_is_reported() {
        let big = Rational::integer(i128::MAX);
        assert_eq!(big.checked_add(Rational::from(1)), Err(Error::Overflow));
        assert_eq!(big.mul_count(2), Err(Error::Overflow));
        let tiny = q(1, u64::MAX);
        assert_eq!(tiny.checked_add(q(1, u64::MAX - 1)), Err(Error::Overflow));
        assert_eq!(
            Rational::integer(i128::MIN).checked_neg(),
            Err(Error::Overflow)
        );
    }

    #[test]
    fn parse_and_display() {
        assert_eq!("3/6".parse::<Rational>().unwrap(), q(1, 2));
        assert_eq!("-5".parse::<Rational>().unwrap(), Rational::from(-5));
        assert_eq!(q(-5, 3).to_string(), "-5/3");
        assert_eq!(Rational::from(7).to_string(), "7");
        assert!("1/0".parse::<Rational>().is_err());
        assert!("x".parse::<Rational>().is_err());
    }

    #[test]
    fn json_round_trip() {
        let v = q(-11, 4);
        assert_eq!(Rational::from_json(&v.to_json()).unwrap(), v);
        assert_eq!(f64::from_json(&2.5f64.to_json()).unwrap(), 2.5);
    }

    proptest! {
        #[test]
        fn scale_distributes(a in -1_000_000i64..1_000_000, b in -1_000_000i64..1_000_000,
                             p in 1u64..4096, w in 1u64..4096) {
            let r = ratio(p.min(w), w).unwrap();
            let lhs = Rational::from(a).checked_add(Rational::from(b)).unwrap().scale(r).unwrap();
            let rhs = Rational::from(a).scale(r).unwrap()
                .checked_add(Rational::from(b).scale(r).unwrap()).unwrap();
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn scale_inverts(v in -1_000_000_000i64..1_000_000_000, p in 1u64..4096, q in 1u64..4096) {
            let there = Rational::from(v).scale(Ratio::new(p, q).unwrap()).unwrap();
            prop_assert_eq!(there.scale(Ratio::new(q, p).unwrap()).unwrap(), Rational::from(v));
        }

        #[test]
        fn float_tracks_rational(v in -1_000_000_000i64..1_000_000_000, p in 1u64..=4096, w in 1u64..=4096) {
            let r = ratio(p.min(w), w).unwrap();
            let exact = Rational::from(v).scale(r).unwrap().to_f64();
            let float = (v as f64).scale(r).unwrap();
            let tol = 1e-12 * exact.abs().max(1.0);
            prop_assert!((exact - float).abs() <= tol, "{} vs {}", exact, float);
        }
    }
}
