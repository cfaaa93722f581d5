//! Exact index values.
//!
//! Most indices are rational. Fowlkes-Mallows is the square root of a
//! rational, so values are kept in the form `offset + sign * sqrt(radicand)`
//! with the radicand folded into the offset whenever it is a perfect square.

use alloc::string::String;

use num_bigint::Sign;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

pub use num_bigint::BigInt;
pub use num_rational::BigRational;
/// Significant digits used by [`IndexValue::to_decimal`].
pub const DECIMAL_DIGITS: usize = 15;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum IndexValue {
    Exact(BigRational),
    /// `offset + sqrt(radicand)` (or `offset - sqrt(radicand)` when
    /// `negated`), where `radicand > 0` is not the square of a rational.
    Surd {
        offset: BigRational,
        negated: bool,
        radicand: BigRational,
    },
}

impl IndexValue {
    pub fn ratio(numer: impl Into<BigInt>, denom: impl Into<BigInt>) -> Self {
        IndexValue::Exact(BigRational::new(numer.into(), denom.into()))
    }

    pub fn integer(value: i64) -> Self {
        IndexValue::Exact(BigRational::from_integer(value.into()))
    }

    /// Square root of a non-negative rational.
    pub fn sqrt_of(radicand: BigRational) -> Self {
        assert!(!radicand.is_negative(), "square root of a negative value");
        match exact_sqrt(&radicand) {
            Some(root) => IndexValue::Exact(root),
            None => IndexValue::Surd {
                offset: BigRational::zero(),
                negated: false,
                radicand,
            },
        }
    }

    pub fn as_exact(&self) -> Option<&BigRational> {
        match self {
            IndexValue::Exact(r) => Some(r),
            IndexValue::Surd { .. } => None,
        }
    }

    pub fn is_one(&self) -> bool {
        matches!(self, IndexValue::Exact(r) if r.is_one())
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, IndexValue::Exact(r) if r.is_zero())
    }

    /// `1 - self`.
    pub fn one_minus(&self) -> Self {
        match self {
            IndexValue::Exact(r) => IndexValue::Exact(BigRational::one() - r),
            IndexValue::Surd {
                offset,
                negated,
                radicand,
            } => IndexValue::Surd {
                offset: BigRational::one() - offset,
                negated: !negated,
                radicand: radicand.clone(),
            },
        }
    }

    /// Rounded to [`DECIMAL_DIGITS`] significant digits in positional notation.
    pub fn to_decimal(&self) -> String {
        self.to_decimal_digits(DECIMAL_DIGITS)
    }

    pub fn to_decimal_digits(&self, digits: usize) -> String {
        match self {
            IndexValue::Exact(r) => rational_to_decimal(r, digits),
            IndexValue::Surd {
                offset,
                negated,
                radicand,
            } => {
                // Bracket the irrational value and refine until both ends
                // round to the same digits.
                let mut scale_digits = 2 * digits as u32 + 8;
                loop {
                    let (lo, hi) = sqrt_bracket(radicand, scale_digits);
                    let (lo, hi) = if *negated {
                        (offset - hi, offset - lo)
                    } else {
                        (offset + lo, offset + hi)
                    };
                    let a = rational_to_decimal(&lo, digits);
                    if a == rational_to_decimal(&hi, digits) {
                        return a;
                    }
                    scale_digits *= 2;
                }
            }
        }
    }

    /// Nearest `f64`, through a 17-digit rendering.
    pub fn to_f64(&self) -> f64 {
        self.to_decimal_digits(17)
            .parse()
            .expect("decimal rendering parses")
    }
}

fn exact_sqrt(r: &BigRational) -> Option<BigRational> {
    let num_root = r.numer().sqrt();
    let den_root = r.denom().sqrt();
    if &(&num_root * &num_root) == r.numer() && &(&den_root * &den_root) == r.denom() {
        Some(BigRational::new(num_root, den_root))
    } else {
        None
    }
}

/// Rationals `lo < sqrt(r) < hi` with `hi - lo = 10^-scale_digits`.
fn sqrt_bracket(r: &BigRational, scale_digits: u32) -> (BigRational, BigRational) {
    // sqrt(p/q) = sqrt(p*q) / q
    let scale = BigInt::from(10u32).pow(scale_digits);
    let radicand = r.numer() * r.denom() * &scale * &scale;
    let floor = radicand.sqrt();
    let denom = r.denom() * &scale;
    let lo = BigRational::new(floor.clone(), denom.clone());
    let hi = BigRational::new(floor + 1u32, denom);
    (lo, hi)
}

/// Positional rendering of `r` rounded half away from zero to `digits`
/// significant digits, trailing zeros trimmed.
pub fn rational_to_decimal(r: &BigRational, digits: usize) -> String {
    assert!(digits > 0);
    if r.is_zero() {
        return String::from("0");
    }
    let negative = r.is_negative();
    let num = r.numer().abs();
    let den = r.denom().clone();
    let ten = BigInt::from(10u32);

    // exponent e with 10^e <= |r| < 10^(e+1)
    let mut exp: i64 = num.to_str_radix(10).len() as i64 - den.to_str_radix(10).len() as i64;
    let pow10 = |e: i64| ten.pow(e.unsigned_abs() as u32);
    let ge_pow = |e: i64| {
        if e >= 0 {
            num >= &den * pow10(e)
        } else {
            &num * pow10(e) >= den
        }
    };
    if !ge_pow(exp) {
        exp -= 1;
    }
    debug_assert!(ge_pow(exp) && !ge_pow(exp + 1));

    // scaled = round(|r| * 10^(digits - 1 - exp))
    let shift = digits as i64 - 1 - exp;
    let (sn, sd) = if shift >= 0 {
        (&num * pow10(shift), den.clone())
    } else {
        (num.clone(), &den * pow10(shift))
    };
    let (q, rem) = sn.div_rem(&sd);
    let mut scaled = if rem * 2u32 >= sd { q + 1u32 } else { q };
    let mut shift = shift;
    if scaled == pow10(digits as i64) {
        scaled /= &ten;
        shift -= 1;
    }

    let mut text = scaled.to_str_radix(10);
    let mut out = String::new();
    if negative {
        out.push('-');
    }
    if shift <= 0 {
        out.push_str(&text);
        for _ in 0..(-shift) {
            out.push('0');
        }
        return out;
    }
    let shift = shift as usize;
    if text.len() <= shift {
        let mut padded = String::from("0.");
        for _ in 0..(shift - text.len()) {
            padded.push('0');
        }
        padded.push_str(&text);
        text = padded;
    } else {
        text.insert(text.len() - shift, '.');
    }
    out.push_str(text.trim_end_matches('0').trim_end_matches('.'));
    out
}

/// Numerator and denominator as decimal integer strings, sign on the numerator.
pub fn ratio_parts(r: &BigRational) -> (String, String) {
    debug_assert!(r.denom().sign() == Sign::Plus);
    (r.numer().to_str_radix(10), r.denom().to_str_radix(10))
}
