//! Exact rational scalars.
//!
//! [`Rational`] is an arbitrary-precision fraction kept in lowest terms with a
//! positive denominator. Everything in the crate is computed over it.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde_json::Value;

use crate::error::{Error, Result};

pub type Rational = BigRational;

/// `num / den` as an exact rational. Panics on a zero denominator.
pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Binomial coefficient C(n, k) with C(n, k) = 0 for k < 0 or k > n.
pub fn binomial(n: i64, k: i64) -> BigInt {
    if k < 0 || n < 0 || k > n {
        return BigInt::zero();
    }
    num_integer::binomial(BigInt::from(n), BigInt::from(k))
}

/// `base^exp` for a signed exponent; a negative exponent gives `1/base^|exp|`.
pub fn pow_i(base: &Rational, exp: i64) -> Rational {
    if exp >= 0 {
        num_traits::pow(base.clone(), exp as usize)
    } else {
        num_traits::pow(base.recip(), exp.unsigned_abs() as usize)
    }
}

/// Plain text form: `3`, `-1/2`.
pub fn fmt_rational(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// LaTeX form with the sign pulled out front: `\frac{1}{2}`, `-\frac{3}{4}`, `5`.
pub fn latex_rational(r: &Rational) -> String {
    if r.is_integer() {
        return r.numer().to_string();
    }
    let sign = if r.is_negative() { "-" } else { "" };
    format!("{sign}\\frac{{{}}}{{{}}}", r.numer().abs(), r.denom())
}

/// The `[numerator, denominator]` pair used by every JSON emitter.
pub fn rational_to_json(r: &Rational) -> Value {
    Value::Array(vec![bigint_to_json(r.numer()), bigint_to_json(r.denom())])
}

pub fn rational_from_json(v: &Value) -> Result<Rational> {
    let pair = v
        .as_array()
        .filter(|a| a.len() == 2)
        .ok_or_else(|| Error::Json(format!("expected [num, den], got {v}")))?;
    let num = bigint_from_json(&pair[0])?;
    let den = bigint_from_json(&pair[1])?;
    if !den.is_positive() {
        return Err(Error::Json(format!("denominator must be positive, got {den}")));
    }
    let r = Rational::new(num.clone(), den.clone());
    // reject non-canonical pairs so that parse(render(x)) is the only way in
    if r.numer() != &num || r.denom() != &den {
        return Err(Error::Json(format!("[{num}, {den}] is not in lowest terms")));
    }
    Ok(r)
}

fn bigint_to_json(n: &BigInt) -> Value {
    // arbitrary_precision keeps the digits verbatim
    Value::Number(n.to_string().parse().expect("integer literal is valid JSON"))
}

fn bigint_from_json(v: &Value) -> Result<BigInt> {
    match v {
        Value::Number(num) => num
            .as_str()
            .parse::<BigInt>()
            .map_err(|_| Error::Json(format!("expected an integer, got {num}"))),
        other => Err(Error::Json(format!("expected an integer, got {other}"))),
    }
}

/// Whether `num/den` is already in canonical form.
pub fn is_lowest_terms(num: &BigInt, den: &BigInt) -> bool {
    den.is_positive() && num.gcd(den).is_one()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lowest_terms_and_sign() {
        let r = rat(6, -4);
        assert_eq!(r.numer(), &BigInt::from(-3));
        assert_eq!(r.denom(), &BigInt::from(2));
        assert!(is_lowest_terms(r.numer(), r.denom()));
    }

    #[test]
    fn reciprocal_product_is_one() {
        for (a, b) in [(3, 7), (-5, 2), (1, 1), (-12, 35)] {
            let x = rat(a, b);
            assert_eq!(&x * x.recip(), Rational::one());
        }
    }

    #[test]
    fn binomial_edges() {
        assert_eq!(binomial(5, 2), BigInt::from(10));
        assert_eq!(binomial(5, -1), BigInt::zero());
        assert_eq!(binomial(3, 4), BigInt::zero());
        assert_eq!(binomial(0, 0), BigInt::one());
    }

    #[test]
    fn pow_negative_exponent() {
        assert_eq!(pow_i(&int(2), -3), rat(1, 8));
        assert_eq!(pow_i(&int(3), 0), int(1));
    }

    #[test]
    fn json_pair() {
        let r = rat(-691, 2730);
        let v = rational_to_json(&r);
        assert_eq!(v.to_string(), "[-691,2730]");
        assert_eq!(rational_from_json(&v).unwrap(), r);
        assert!(rational_from_json(&serde_json::json!([2, 4])).is_err());
        assert!(rational_from_json(&serde_json::json!([1, 0])).is_err());
    }

    #[test]
    fn json_pair_big() {
        let big: Rational = Rational::from_integer(BigInt::from(10).pow(40)) / int(7);
        let back = rational_from_json(&rational_to_json(&big)).unwrap();
        assert_eq!(back, big);
    }

    #[test]
    fn text_forms() {
        assert_eq!(fmt_rational(&rat(-1, 2)), "-1/2");
        assert_eq!(fmt_rational(&int(4)), "4");
        assert_eq!(latex_rational(&rat(-3, 4)), "-\\frac{3}{4}");
    }
}
