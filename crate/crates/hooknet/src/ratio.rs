//! Exact rational scalars as they appear in reports.
//!
//! All analytical quantities are kept as arbitrary-precision rationals end
//! to end; floating point only enters when empirical statistics are compared
//! against them. JSON carries rationals as `{"num": "...", "den": "..."}`
//! string pairs so that readers never lose precision, and CSV renders a
//! decimal expansion with a fixed number of significant digits.

use num_bigint::{BigInt, Sign};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// A reduced exact rational, serialized as numerator/denominator strings.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Exact(pub BigRational);

impl Exact {
    pub fn zero() -> Self {
        Exact(BigRational::zero())
    }

    pub fn from_int(n: i64) -> Self {
        Exact(BigRational::from_integer(BigInt::from(n)))
    }

    /// `num / den`, panicking on a zero denominator.
    pub fn ratio(num: i64, den: i64) -> Self {
        Exact(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    /// Nearest double; reports use this only for comparisons, never storage.
    pub fn to_f64(&self) -> f64 {
        rational_to_f64(&self.0)
    }
}

impl From<BigRational> for Exact {
    fn from(r: BigRational) -> Self {
        Exact(r)
    }
}

impl std::fmt::Display for Exact {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.0.denom().is_one() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl Serialize for Exact {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("Exact", 2)?;
        st.serialize_field("num", &self.0.numer().to_string())?;
        st.serialize_field("den", &self.0.denom().to_string())?;
        st.end()
    }
}

impl<'de> Deserialize<'de> for Exact {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Raw {
            num: String,
            den: String,
        }
        let raw = Raw::deserialize(d)?;
        let num: BigInt = raw.num.parse().map_err(D::Error::custom)?;
        let den: BigInt = raw.den.parse().map_err(D::Error::custom)?;
        if den.is_zero() {
            return Err(D::Error::custom("zero denominator"));
        }
        Ok(Exact(BigRational::new(num, den)))
    }
}

/// Convert without precision cliffs: exact for anything that fits, and a
/// quotient of leading-digit approximations for giant operands.
pub fn rational_to_f64(r: &BigRational) -> f64 {
    if let (Some(n), Some(d)) = (r.numer().to_f64(), r.denom().to_f64()) {
        if n.is_finite() && d.is_finite() && d != 0.0 {
            return n / d;
        }
    }
    // Fall back to scaling both parts down by a common power of two.
    let bits = r.numer().bits().max(r.denom().bits());
    let shift = bits.saturating_sub(128) as u64;
    let n = (r.numer() >> shift).to_f64().unwrap_or(f64::NAN);
    let d = (r.denom() >> shift).to_f64().unwrap_or(f64::NAN);
    n / d
}

/// Decimal expansion with `sig` significant digits, for CSV output.
pub fn decimal_string(r: &BigRational, sig: usize) -> String {
    if r.is_zero() {
        return "0".into();
    }
    let neg = r.is_negative();
    let a = r.abs();
    // Scale into [10^(sig-1), 10^sig) and round half away from zero.
    let mut exp10: i64 = 0;
    let ten = BigInt::from(10);
    let mut lo = BigInt::from(1);
    for _ in 1..sig {
        lo *= &ten;
    }
    let hi = &lo * &ten;
    let mut num = a.numer().clone();
    let mut den = a.denom().clone();
    while &num * &lo >= &den * &hi {
        den *= &ten;
        exp10 += 1;
    }
    while &num < &(&den * &lo) {
        num *= &ten;
        exp10 -= 1;
    }
    let digits: BigInt = (&num + (&den >> 1u32)) / &den;
    let digits = if digits >= hi {
        exp10 += 1;
        digits / &ten
    } else {
        digits
    };
    let ds = digits.to_string();
    let point = exp10 + sig as i64; // digits before the decimal point
    let mantissa = if point <= 0 {
        format!("0.{}{}", "0".repeat(-point as usize), ds)
    } else if (point as usize) < ds.len() {
        format!("{}.{}", &ds[..point as usize], &ds[point as usize..])
    } else {
        format!("{}{}", ds, "0".repeat(point as usize - ds.len()))
    };
    let trimmed = if mantissa.contains('.') {
        mantissa.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        mantissa
    };
    if neg {
        format!("-{}", trimmed)
    } else {
        trimmed
    }
}

/// Sum of a slice of rationals.
pub fn sum(rs: &[BigRational]) -> BigRational {
    rs.iter().fold(BigRational::zero(), |a, b| a + b)
}

/// Exact rational from an integer pair.
pub fn rat(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// Exact rational from an integer.
pub fn int(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// Sign of a rational: -1, 0, or 1.
pub fn sign_of(r: &BigRational) -> i8 {
    match r.numer().sign() {
        Sign::Minus => -1,
        Sign::NoSign => 0,
        Sign::Plus => 1,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn serde_round_trip() {
        let x = Exact::ratio(12, 21);
        let s = serde_json::to_string(&x).unwrap();
        assert_eq!(s, r#"{"num":"4","den":"7"}"#);
        let back: Exact = serde_json::from_str(&s).unwrap();
        assert_eq!(back, x);
    }

    #[test]
    fn display_reduces() {
        assert_eq!(Exact::ratio(12, 21).to_string(), "4/7");
        assert_eq!(Exact::ratio(-4, 2).to_string(), "-2");
        assert_eq!(Exact::zero().to_string(), "0");
    }

    #[test]
    fn decimal_digits() {
        assert_eq!(decimal_string(&rat(1, 3), 12), "0.333333333333");
        assert_eq!(decimal_string(&rat(-5, 2), 12), "-2.5");
        assert_eq!(decimal_string(&rat(2, 1), 12), "2");
        assert_eq!(decimal_string(&rat(1999, 1000), 3), "2");
        assert_eq!(decimal_string(&int(0), 12), "0");
    }

    #[test]
    fn zero_denominator_rejected() {
        let err = serde_json::from_str::<Exact>(r#"{"num":"1","den":"0"}"#);
        assert!(err.is_err());
    }
}
