//! Exact complex numbers with rational parts, parsed from decimal strings.

use std::fmt;
use std::ops::{Add, Mul, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Pow, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::MapError;
use crate::rigorous_geom::{exact_rational, Interval, IntervalBox};

/// Parses a decimal literal such as `-6`, `3.75`, `.5` or `1e-3` exactly.
pub fn parse_decimal(text: &str) -> Result<BigRational, MapError> {
    let bad = || MapError::BadNumber(text.to_string());
    let s = text.trim();
    let (mantissa, exponent) = match s.find(['e', 'E']) {
        Some(pos) => {
            let exp: i32 = s[pos + 1..].parse().map_err(|_| bad())?;
            (&s[..pos], exp)
        }
        None => (s, 0),
    };
    let (negative, digits) = match mantissa.as_bytes().first() {
        Some(b'-') => (true, &mantissa[1..]),
        Some(b'+') => (false, &mantissa[1..]),
        _ => (false, mantissa),
    };
    let (int_part, frac_part) = match digits.find('.') {
        Some(pos) => (&digits[..pos], &digits[pos + 1..]),
        None => (digits, ""),
    };
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(bad());
    }
    if !int_part.bytes().chain(frac_part.bytes()).all(|b| b.is_ascii_digit()) {
        return Err(bad());
    }
    let all_digits = format!("{int_part}{frac_part}");
    let numer = BigInt::from_str(&all_digits).map_err(|_| bad())?;
    let scale = exponent - frac_part.len() as i32;
    let ten = BigInt::from(10);
    let mut value = BigRational::from_integer(numer);
    if scale >= 0 {
        value *= BigRational::from_integer(Pow::pow(&ten, scale as u32));
    } else {
        value /= BigRational::from_integer(Pow::pow(&ten, (-scale) as u32));
    }
    Ok(if negative { -value } else { value })
}

/// A complex number with exact rational real and imaginary parts.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "[String; 2]", into = "[String; 2]")]
pub struct ExactComplex {
    pub re: BigRational,
    pub im: BigRational,
}

impl ExactComplex {
    pub fn new(re: BigRational, im: BigRational) -> Self {
        Self { re, im }
    }

    pub fn zero() -> Self {
        Self::new(BigRational::zero(), BigRational::zero())
    }

    pub fn one() -> Self {
        Self::new(BigRational::one(), BigRational::zero())
    }

    pub fn parse(re: &str, im: &str) -> Result<Self, MapError> {
        Ok(Self::new(parse_decimal(re)?, parse_decimal(im)?))
    }

    /// Parses `"re,im"` (the imaginary part may be omitted).
    pub fn parse_pair(text: &str) -> Result<Self, MapError> {
        let mut parts = text.split(',');
        let re = parts.next().unwrap_or("");
        let im = parts.next().unwrap_or("0");
        if parts.next().is_some() {
            return Err(MapError::BadNumber(text.to_string()));
        }
        Self::parse(re, im)
    }

    pub fn from_f64(re: f64, im: f64) -> Option<Self> {
        Some(Self::new(exact_rational(re)?, exact_rational(im)?))
    }

    pub fn real(x: BigRational) -> Self {
        Self::new(x, BigRational::zero())
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn norm_sqr(&self) -> BigRational {
        &self.re * &self.re + &self.im * &self.im
    }

    pub fn enclosure(&self) -> IntervalBox {
        IntervalBox::from_parts(
            Interval::from_rational(&self.re),
            Interval::from_rational(&self.im),
        )
    }

    /// Total bit length of numerators and denominators, a proxy for the
    /// cost of further exact arithmetic.
    pub fn bit_size(&self) -> u64 {
        self.re.numer().bits() + self.re.denom().bits() + self.im.numer().bits() + self.im.denom().bits()
    }

    pub fn approx(&self) -> (f64, f64) {
        let c = self.enclosure().center();
        (c.0, c.1)
    }

    pub fn abs_upper(&self) -> BigRational {
        // |re| + |im| bounds the modulus from above
        self.re.abs() + self.im.abs()
    }
}

impl Add for &ExactComplex {
    type Output = ExactComplex;
    fn add(self, rhs: &ExactComplex) -> ExactComplex {
        ExactComplex::new(&self.re + &rhs.re, &self.im + &rhs.im)
    }
}

impl Sub for &ExactComplex {
    type Output = ExactComplex;
    fn sub(self, rhs: &ExactComplex) -> ExactComplex {
        ExactComplex::new(&self.re - &rhs.re, &self.im - &rhs.im)
    }
}

impl Mul for &ExactComplex {
    type Output = ExactComplex;
    fn mul(self, rhs: &ExactComplex) -> ExactComplex {
        ExactComplex::new(
            &self.re * &rhs.re - &self.im * &rhs.im,
            &self.re * &rhs.im + &self.im * &rhs.re,
        )
    }
}

fn rational_to_decimal_string(q: &BigRational) -> String {
    // Terminating decimals print exactly; others print as p/q.
    let mut denom = q.denom().clone();
    let two = BigInt::from(2);
    let five = BigInt::from(5);
    let mut twos = 0u32;
    let mut fives = 0u32;
    while (&denom % &two).is_zero() {
        denom /= &two;
        twos += 1;
    }
    while (&denom % &five).is_zero() {
        denom /= &five;
        fives += 1;
    }
    if !denom.is_one() {
        return format!("{}/{}", q.numer(), q.denom());
    }
    let places = twos.max(fives);
    let scaled = q * BigRational::from_integer(Pow::pow(&BigInt::from(10), places));
    let n = scaled.to_integer();
    if places == 0 {
        return n.to_string();
    }
    let negative = n.is_negative();
    let digits = n.abs().to_string();
    let places = places as usize;
    let padded = if digits.len() <= places {
        format!("{}{}", "0".repeat(places + 1 - digits.len()), digits)
    } else {
        digits
    };
    let (int_part, frac_part) = padded.split_at(padded.len() - places);
    format!("{}{}.{}", if negative { "-" } else { "" }, int_part, frac_part)
}

impl fmt::Display for ExactComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{},{}",
            rational_to_decimal_string(&self.re),
            rational_to_decimal_string(&self.im)
        )
    }
}

impl TryFrom<[String; 2]> for ExactComplex {
    type Error = MapError;
    fn try_from(value: [String; 2]) -> Result<Self, Self::Error> {
        Self::parse(&value[0], &value[1])
    }
}

impl From<ExactComplex> for [String; 2] {
    fn from(value: ExactComplex) -> Self {
        [
            rational_to_decimal_string(&value.re),
            rational_to_decimal_string(&value.im),
        ]
    }
}

/// Decimal (or `p/q`) rendering of an exact rational.
pub fn format_rational(q: &BigRational) -> String {
    rational_to_decimal_string(q)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn parses_decimal_forms() {
        assert_eq!(parse_decimal("-6").unwrap(), q(-6, 1));
        assert_eq!(parse_decimal("3.75").unwrap(), q(15, 4));
        assert_eq!(parse_decimal(".5").unwrap(), q(1, 2));
        assert_eq!(parse_decimal("1e-3").unwrap(), q(1, 1000));
        assert_eq!(parse_decimal("2.5E2").unwrap(), q(250, 1));
        assert_eq!(parse_decimal("+0.1").unwrap(), q(1, 10));
        assert!(parse_decimal("").is_err());
        assert!(parse_decimal("1.2.3").is_err());
        assert!(parse_decimal("abc").is_err());
        assert!(parse_decimal("-").is_err());
    }

    #[test]
    fn formats_round_trip() {
        for s in ["-6", "3.75", "0.1", "-0.05", "0", "12.5"] {
            let v = parse_decimal(s).unwrap();
            assert_eq!(parse_decimal(&format_rational(&v)).unwrap(), v);
        }
        assert_eq!(format_rational(&q(1, 3)), "1/3");
        assert_eq!(format_rational(&q(-1, 20)), "-0.05");
    }

    #[test]
    fn complex_arithmetic() {
        let a = ExactComplex::parse("1", "2").unwrap();
        let b = ExactComplex::parse("3", "-1").unwrap();
        assert_eq!(&a * &b, ExactComplex::parse("5", "5").unwrap());
        assert_eq!(&a + &b, ExactComplex::parse("4", "1").unwrap());
        assert_eq!(&a - &b, ExactComplex::parse("-2", "3").unwrap());
    }
}
