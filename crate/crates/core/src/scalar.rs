//! Scalar types shared by the exact and floating backends.
//!
//! Exact computations run over [`BigRational`]. Log-weights such as
//! `ln(n choose k)` are carried symbolically as [`LogWeight`], an element of
//! the Q-vector space spanned by `1` and `ln p` for primes `p`. Those numbers
//! are Q-linearly independent, so equality of log-weights is decidable.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Num, One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Scalar field usable by the generic elimination and simplex routines.
///
/// Pivot decisions compare `abs(x) > eps`; exact fields pass `eps = 0`.
pub trait Field: Clone + PartialOrd + fmt::Debug + Num + Signed + 'static {
    fn to_f64(&self) -> f64;
}

impl Field for f64 {
    fn to_f64(&self) -> f64 {
        *self
    }
}

impl Field for BigRational {
    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }
}

pub fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// Parses `"p/q"`, an integer, or a plain decimal (`"-0.25"`, `"1.5e-3"`).
pub fn parse_rational(text: &str) -> Result<BigRational> {
    let s = text.trim();
    if s.is_empty() {
        return Err(Error::Parse("empty number".into()));
    }
    if let Some((p, q)) = s.split_once('/') {
        let p = BigInt::from_str(p.trim()).map_err(|_| bad_number(text))?;
        let q = BigInt::from_str(q.trim()).map_err(|_| bad_number(text))?;
        if q.is_zero() {
            return Err(Error::Parse(format!("zero denominator in `{text}`")));
        }
        return Ok(BigRational::new(p, q));
    }
    let (mantissa, exponent) = match s.find(['e', 'E']) {
        Some(pos) => {
            let e: i32 = s[pos + 1..].parse().map_err(|_| bad_number(text))?;
            (&s[..pos], e)
        }
        None => (s, 0),
    };
    let (negative, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (whole, frac) = digits.split_once('.').unwrap_or((digits, ""));
    if whole.is_empty() && frac.is_empty()
        || !whole
            .chars()
            .chain(frac.chars())
            .all(|c| c.is_ascii_digit())
    {
        return Err(bad_number(text));
    }
    let joined = format!("{whole}{frac}");
    let numer = BigInt::from_str(&joined).map_err(|_| bad_number(text))?;
    let scale = exponent - frac.len() as i32;
    let ten = BigInt::from(10u32);
    let mut value = if scale >= 0 {
        BigRational::from_integer(numer * num_traits::pow(ten, scale as usize))
    } else {
        BigRational::new(numer, num_traits::pow(ten, (-scale) as usize))
    };
    if negative {
        value = -value;
    }
    Ok(value)
}

fn bad_number(text: &str) -> Error {
    Error::Parse(format!("invalid rational number `{text}`"))
}

/// Canonical text form: `"p"` for integers, `"p/q"` otherwise.
pub fn format_rational(q: &BigRational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// `r + sum_p q_p ln(p)` with rational coefficients over primes `p`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct LogWeight {
    rational: BigRational,
    logs: BTreeMap<u64, BigRational>,
}

impl LogWeight {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn from_rational(q: BigRational) -> Self {
        Self {
            rational: q,
            logs: BTreeMap::new(),
        }
    }

    /// `ln(k)` for a positive integer `k`, factored over primes.
    pub fn ln_int(k: u64) -> Result<Self> {
        if k == 0 {
            return Err(Error::Parse("ln(0) is undefined".into()));
        }
        let mut out = Self::zero();
        for (p, e) in factorize(k) {
            out.add_log(p, int(e as i64));
        }
        Ok(out)
    }

    /// `ln(p/q)` for a positive rational.
    pub fn ln_rational(q: &BigRational) -> Result<Self> {
        if !q.is_positive() {
            return Err(Error::Parse(format!(
                "ln of non-positive value {}",
                format_rational(q)
            )));
        }
        let num = q
            .numer()
            .to_u64()
            .ok_or_else(|| Error::Parse("ln argument too large".into()))?;
        let den = q
            .denom()
            .to_u64()
            .ok_or_else(|| Error::Parse("ln argument too large".into()))?;
        Ok(&Self::ln_int(num)? - &Self::ln_int(den)?)
    }

    /// `ln(n choose k)`, exact.
    pub fn ln_binomial(n: u64, k: u64) -> Self {
        assert!(k <= n, "binomial coefficient with k > n");
        let mut out = Self::zero();
        for p in primes_up_to(n) {
            let e = legendre(n, p) as i64 - legendre(k, p) as i64 - legendre(n - k, p) as i64;
            if e != 0 {
                out.add_log(p, int(e));
            }
        }
        out
    }

    fn add_log(&mut self, prime: u64, coeff: BigRational) {
        let entry = self.logs.entry(prime).or_insert_with(BigRational::zero);
        *entry += coeff;
        if entry.is_zero() {
            self.logs.remove(&prime);
        }
    }

    pub fn rational_part(&self) -> &BigRational {
        &self.rational
    }

    pub fn is_rational(&self) -> bool {
        self.logs.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.rational.is_zero() && self.logs.is_empty()
    }

    pub fn scale(&self, factor: &BigRational) -> Self {
        if factor.is_zero() {
            return Self::zero();
        }
        Self {
            rational: &self.rational * factor,
            logs: self.logs.iter().map(|(p, q)| (*p, q * factor)).collect(),
        }
    }

    pub fn to_f64(&self) -> f64 {
        self.logs
            .iter()
            .fold(Field::to_f64(&self.rational), |acc, (p, q)| {
                acc + Field::to_f64(q) * (*p as f64).ln()
            })
    }
}

impl Add for &LogWeight {
    type Output = LogWeight;
    fn add(self, rhs: &LogWeight) -> LogWeight {
        let mut out = self.clone();
        out.rational += &rhs.rational;
        for (p, q) in &rhs.logs {
            out.add_log(*p, q.clone());
        }
        out
    }
}

impl Sub for &LogWeight {
    type Output = LogWeight;
    fn sub(self, rhs: &LogWeight) -> LogWeight {
        self + &(-rhs)
    }
}

impl Neg for &LogWeight {
    type Output = LogWeight;
    fn neg(self) -> LogWeight {
        self.scale(&-BigRational::one())
    }
}

impl From<BigRational> for LogWeight {
    fn from(q: BigRational) -> Self {
        Self::from_rational(q)
    }
}

impl fmt::Display for LogWeight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.logs.is_empty() {
            return f.write_str(&format_rational(&self.rational));
        }
        let mut first = true;
        if !self.rational.is_zero() {
            f.write_str(&format_rational(&self.rational))?;
            first = false;
        }
        for (p, q) in &self.logs {
            let sign = if q.is_negative() {
                "-"
            } else if first {
                ""
            } else {
                "+"
            };
            let mag = q.abs();
            if mag.is_one() {
                write!(f, "{sign}ln({p})")?;
            } else {
                write!(f, "{sign}{}*ln({p})", format_rational(&mag))?;
            }
            first = false;
        }
        Ok(())
    }
}

impl FromStr for LogWeight {
    type Err = Error;

    /// Accepts signed sums of rationals and `[q*]ln(r)` terms,
    /// e.g. `"ln(2)"`, `"1/7"`, `"1/2 - 3*ln(5/2)"`.
    fn from_str(text: &str) -> Result<Self> {
        let compact: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        if compact.is_empty() {
            return Err(Error::Parse("empty log-weight".into()));
        }
        let mut out = LogWeight::zero();
        for term in split_terms(&compact) {
            let (negative, body) = match term.strip_prefix('-') {
                Some(rest) => (true, rest),
                None => (false, term.strip_prefix('+').unwrap_or(term)),
            };
            let mut value = match body.find("ln(") {
                Some(pos) => {
                    if !body.ends_with(')') {
                        return Err(Error::Parse(format!("malformed ln term `{term}`")));
                    }
                    let arg = parse_rational(&body[pos + 3..body.len() - 1])?;
                    let coeff = match &body[..pos] {
                        "" => BigRational::one(),
                        c => parse_rational(c.strip_suffix('*').unwrap_or(c))?,
                    };
                    LogWeight::ln_rational(&arg)?.scale(&coeff)
                }
                None => LogWeight::from_rational(parse_rational(body)?),
            };
            if negative {
                value = -&value;
            }
            out = &out + &value;
        }
        Ok(out)
    }
}

/// Splits at top-level `+`/`-`, keeping exponent signs (`1e-3`) and
/// parenthesized arguments intact.
fn split_terms(s: &str) -> Vec<&str> {
    let bytes = s.as_bytes();
    let mut terms = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    for (i, &b) in bytes.iter().enumerate() {
        match b {
            b'(' => depth += 1,
            b')' => depth -= 1,
            b'+' | b'-' if depth == 0 && i > start => {
                let prev = bytes[i - 1];
                let exponent_sign = (prev == b'e' || prev == b'E')
                    && i >= 2
                    && (bytes[i - 2].is_ascii_digit() || bytes[i - 2] == b'.');
                if !exponent_sign && prev != b'*' {
                    terms.push(&s[start..i]);
                    start = i;
                }
            }
            _ => {}
        }
    }
    terms.push(&s[start..]);
    terms
}

fn factorize(mut k: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2u64;
    while p * p <= k {
        let mut e = 0;
        while k % p == 0 {
            k /= p;
            e += 1;
        }
        if e > 0 {
            out.push((p, e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if k > 1 {
        out.push((k, 1));
    }
    out
}

fn primes_up_to(n: u64) -> impl Iterator<Item = u64> {
    (2..=n).filter(|&p| factorize(p).len() == 1 && factorize(p)[0].1 == 1)
}

/// Exponent of `p` in `n!`.
fn legendre(n: u64, p: u64) -> u64 {
    let mut total = 0;
    let mut q = p;
    while q <= n {
        total += n / q;
        match q.checked_mul(p) {
            Some(next) => q = next,
            None => break,
        }
    }
    total
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_rationals_and_decimals() {
        assert_eq!(parse_rational("1/7").unwrap(), rat(1, 7));
        assert_eq!(parse_rational("-3").unwrap(), int(-3));
        assert_eq!(parse_rational("0.25").unwrap(), rat(1, 4));
        assert_eq!(parse_rational("1.5e-2").unwrap(), rat(3, 200));
        assert_eq!(parse_rational("2E3").unwrap(), int(2000));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("abc").is_err());
        assert!(parse_rational(".").is_err());
    }

    #[test]
    fn ln_binomial_matches_factored_form() {
        // C(4,2) = 6 = 2 * 3
        let w = LogWeight::ln_binomial(4, 2);
        assert_eq!(w, LogWeight::ln_int(6).unwrap());
        assert_eq!(w.to_string(), "ln(2)+ln(3)");
        assert!((w.to_f64() - 6f64.ln()).abs() < 1e-14);
        assert!(LogWeight::ln_binomial(5, 0).is_zero());
        assert_eq!(LogWeight::ln_binomial(5, 2), LogWeight::ln_binomial(5, 3));
    }

    #[test]
    fn log_weight_parse_and_display() {
        let w: LogWeight = "1/2 - 3*ln(5/2) + ln(4)".parse().unwrap();
        // 1/2 - 3 ln5 + 3 ln2 + 2 ln2
        assert_eq!(w.to_string(), "1/2+5*ln(2)-3*ln(5)");
        let back: LogWeight = w.to_string().parse().unwrap();
        assert_eq!(back, w);
        let z: LogWeight = "ln(2) - ln(2)".parse().unwrap();
        assert!(z.is_zero());
        assert_eq!(z.to_string(), "0");
        let e: LogWeight = "1e-3".parse().unwrap();
        assert_eq!(e, LogWeight::from_rational(rat(1, 1000)));
        assert!("ln(0)".parse::<LogWeight>().is_err());
        assert!("ln(-2)".parse::<LogWeight>().is_err());
    }

    #[test]
    fn ln_of_one_is_zero() {
        assert!(LogWeight::ln_int(1).unwrap().is_zero());
    }
}
