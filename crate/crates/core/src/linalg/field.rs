//! Coefficient fields and their scalars.
//!
//! Two families are supported: the rationals, with arbitrary-precision
//! numerators and denominators, and prime fields `Z/p`. A [`Scalar`] does not
//! carry its modulus; every arithmetic operation goes through the owning
//! [`FieldSpec`].

use std::fmt;
use std::str::FromStr;

use num::bigint::Sign;
use num::{BigInt, BigRational, One, Signed, ToPrimitive, Zero};

use super::LinalgError;

pub type Rational = BigRational;

/// The coefficient field every matrix and chain lives over.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub enum FieldSpec {
    #[default]
    Rationals,
    Prime(u64),
}

/// A field element in canonical form: lowest-terms rational with positive
/// denominator, or a residue in `[0, p)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Scalar {
    Rational(Rational),
    Residue(u64),
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d.saturating_mul(d) <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

impl FieldSpec {
    pub const F2: FieldSpec = FieldSpec::Prime(2);

    /// Checked constructor for `Z/p`.
    pub fn prime(p: u64) -> Result<Self, LinalgError> {
        if p > u32::MAX as u64 {
            return Err(LinalgError::ModulusTooLarge(p));
        }
        if !is_prime(p) {
            return Err(LinalgError::NotPrime(p));
        }
        Ok(FieldSpec::Prime(p))
    }

    pub fn modulus(&self) -> Option<u64> {
        match self {
            FieldSpec::Rationals => None,
            FieldSpec::Prime(p) => Some(*p),
        }
    }

    pub fn zero(&self) -> Scalar {
        match self {
            FieldSpec::Rationals => Scalar::Rational(Rational::zero()),
            FieldSpec::Prime(_) => Scalar::Residue(0),
        }
    }

    pub fn one(&self) -> Scalar {
        match self {
            FieldSpec::Rationals => Scalar::Rational(Rational::one()),
            FieldSpec::Prime(_) => Scalar::Residue(1),
        }
    }

    pub fn from_i64(&self, v: i64) -> Scalar {
        match self {
            FieldSpec::Rationals => Scalar::Rational(Rational::from_integer(BigInt::from(v))),
            FieldSpec::Prime(p) => Scalar::Residue(v.rem_euclid(*p as i64) as u64),
        }
    }

    pub fn from_bigint(&self, v: &BigInt) -> Scalar {
        match self {
            FieldSpec::Rationals => Scalar::Rational(Rational::from_integer(v.clone())),
            FieldSpec::Prime(p) => Scalar::Residue(reduce_bigint(v, *p)),
        }
    }

    /// Maps a rational into the field. Over `Z/p` this fails when `p` divides
    /// the denominator.
    pub fn from_rational(&self, q: &Rational) -> Result<Scalar, LinalgError> {
        match self {
            FieldSpec::Rationals => Ok(Scalar::Rational(q.clone())),
            FieldSpec::Prime(p) => {
                let num = reduce_bigint(q.numer(), *p);
                let den = reduce_bigint(q.denom(), *p);
                if den == 0 {
                    return Err(LinalgError::DenominatorVanishes { value: q.to_string(), modulus: *p });
                }
                Ok(Scalar::Residue(mul_mod(num, inv_mod(den, *p), *p)))
            }
        }
    }

    pub fn is_zero(&self, a: &Scalar) -> bool {
        match a {
            Scalar::Rational(q) => q.is_zero(),
            Scalar::Residue(r) => *r == 0,
        }
    }

    pub fn is_one(&self, a: &Scalar) -> bool {
        match a {
            Scalar::Rational(q) => q.is_one(),
            Scalar::Residue(r) => *r == 1,
        }
    }

    pub fn add(&self, a: &Scalar, b: &Scalar) -> Scalar {
        match (self, a, b) {
            (FieldSpec::Rationals, Scalar::Rational(x), Scalar::Rational(y)) => Scalar::Rational(x + y),
            (FieldSpec::Prime(p), Scalar::Residue(x), Scalar::Residue(y)) => Scalar::Residue((x + y) % p),
            _ => mismatch(self),
        }
    }

    pub fn sub(&self, a: &Scalar, b: &Scalar) -> Scalar {
        match (self, a, b) {
            (FieldSpec::Rationals, Scalar::Rational(x), Scalar::Rational(y)) => Scalar::Rational(x - y),
            (FieldSpec::Prime(p), Scalar::Residue(x), Scalar::Residue(y)) => Scalar::Residue((x + p - y) % p),
            _ => mismatch(self),
        }
    }

    pub fn mul(&self, a: &Scalar, b: &Scalar) -> Scalar {
        match (self, a, b) {
            (FieldSpec::Rationals, Scalar::Rational(x), Scalar::Rational(y)) => Scalar::Rational(x * y),
            (FieldSpec::Prime(p), Scalar::Residue(x), Scalar::Residue(y)) => Scalar::Residue(mul_mod(*x, *y, *p)),
            _ => mismatch(self),
        }
    }

    pub fn neg(&self, a: &Scalar) -> Scalar {
        match (self, a) {
            (FieldSpec::Rationals, Scalar::Rational(x)) => Scalar::Rational(-x),
            (FieldSpec::Prime(p), Scalar::Residue(x)) => Scalar::Residue((p - x) % p),
            _ => mismatch(self),
        }
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inv(&self, a: &Scalar) -> Option<Scalar> {
        if self.is_zero(a) {
            return None;
        }
        Some(match (self, a) {
            (FieldSpec::Rationals, Scalar::Rational(x)) => Scalar::Rational(x.recip()),
            (FieldSpec::Prime(p), Scalar::Residue(x)) => Scalar::Residue(inv_mod(*x, *p)),
            _ => mismatch(self),
        })
    }

    pub fn div(&self, a: &Scalar, b: &Scalar) -> Option<Scalar> {
        self.inv(b).map(|bi| self.mul(a, &bi))
    }

    /// True when the scalar belongs to this field and is in canonical form.
    pub fn contains(&self, a: &Scalar) -> bool {
        match (self, a) {
            (FieldSpec::Rationals, Scalar::Rational(q)) => q.denom().is_positive(),
            (FieldSpec::Prime(p), Scalar::Residue(r)) => r < p,
            _ => false,
        }
    }

    /// Parses a decimal, integer or `a/b` literal into the field.
    pub fn parse_scalar(&self, s: &str) -> Result<Scalar, LinalgError> {
        let q = parse_rational(s)?;
        self.from_rational(&q)
    }
}

fn mismatch(field: &FieldSpec) -> ! {
    panic!("scalar does not belong to field {field}")
}

fn reduce_bigint(v: &BigInt, p: u64) -> u64 {
    let m = BigInt::from(p);
    let r = ((v % &m) + &m) % &m;
    r.to_u64().expect("residue fits in u64")
}

fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn inv_mod(a: u64, p: u64) -> u64 {
    // Fermat: a^(p-2)
    let mut result = 1u64;
    let mut base = a % p;
    let mut exp = p - 2;
    while exp > 0 {
        if exp & 1 == 1 {
            result = mul_mod(result, base, p);
        }
        base = mul_mod(base, base, p);
        exp >>= 1;
    }
    result
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldSpec::Rationals => write!(f, "q"),
            FieldSpec::Prime(2) => write!(f, "f2"),
            FieldSpec::Prime(p) => write!(f, "fp:{p}"),
        }
    }
}

impl FromStr for FieldSpec {
    type Err = LinalgError;

    /// Accepts `q`, `f2` and `fp:<prime>`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim() {
            "q" | "Q" => Ok(FieldSpec::Rationals),
            "f2" | "F2" => Ok(FieldSpec::F2),
            other => {
                let p = other
                    .strip_prefix("fp:")
                    .and_then(|p| p.parse::<u64>().ok())
                    .ok_or_else(|| LinalgError::BadField(other.to_string()))?;
                FieldSpec::prime(p)
            }
        }
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Rational(q) => write!(f, "{}", format_rational(q)),
            Scalar::Residue(r) => write!(f, "{r}"),
        }
    }
}

/// Lowest-terms `a/b`, or `a` when the denominator is one.
pub fn format_rational(q: &Rational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// Parses `a/b`, an integer, or a finite decimal (with optional exponent)
/// into an exact rational.
pub fn parse_rational(s: &str) -> Result<Rational, LinalgError> {
    let t = s.trim();
    let bad = || LinalgError::BadRational(s.to_string());
    if t.is_empty() {
        return Err(bad());
    }
    if let Some((n, d)) = t.split_once('/') {
        let n: BigInt = n.trim().parse().map_err(|_| bad())?;
        let d: BigInt = d.trim().parse().map_err(|_| bad())?;
        if d.is_zero() {
            return Err(bad());
        }
        return Ok(Rational::new(n, d));
    }
    let (mantissa, exponent) = match t.find(['e', 'E']) {
        Some(pos) => (&t[..pos], t[pos + 1..].parse::<i32>().map_err(|_| bad())?),
        None => (t, 0),
    };
    let (negative, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = digits.split_once('.').unwrap_or((digits, ""));
    if (int_part.is_empty() && frac_part.is_empty())
        || !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit())
    {
        return Err(bad());
    }
    let all: String = format!("{int_part}{frac_part}");
    let mut numer: BigInt = if all.is_empty() { BigInt::zero() } else { all.parse().map_err(|_| bad())? };
    if negative {
        numer = -numer;
    }
    let scale = exponent - frac_part.len() as i32;
    let ten = BigInt::from(10);
    let q = if scale >= 0 {
        Rational::from_integer(numer * num::pow(ten, scale as usize))
    } else {
        Rational::new(numer, num::pow(ten, (-scale) as usize))
    };
    Ok(q)
}

/// Truncated decimal expansion of `sqrt(q)` with `digits` fractional digits,
/// computed with integer square roots so the text is reproducible.
pub fn sqrt_decimal(q: &Rational, digits: usize) -> String {
    if q.is_negative() {
        return "NaN".to_string();
    }
    let scale = num::pow(BigInt::from(10), 2 * digits);
    let scaled = (q.numer() * scale) / q.denom();
    let root = scaled.sqrt();
    let (sign, mag) = root.into_parts();
    debug_assert_ne!(sign, Sign::Minus);
    let s = mag.to_string();
    if digits == 0 {
        return s;
    }
    let padded = format!("{:0>width$}", s, width = digits + 1);
    let (ip, fp) = padded.split_at(padded.len() - digits);
    format!("{ip}.{fp}")
}
