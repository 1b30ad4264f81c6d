//! Rational scalars and the few helpers the rest of the crate leans on.

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Signed, Zero};

/// Arbitrary-precision rational, the base field everywhere.
pub type Rat = BigRational;

/// Integer as a rational.
pub fn rint(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

/// Fraction from machine integers. Panics if `d == 0`.
pub fn rfrac(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

/// Integer power with exact semantics; negative exponents require a
/// nonzero base.
pub fn rpow(x: &Rat, e: i32) -> Rat {
    if e == 0 {
        return Rat::one();
    }
    assert!(!(x.is_zero() && e < 0), "zero raised to a negative power");
    let mut acc = Rat::one();
    for _ in 0..e.unsigned_abs() {
        acc *= x;
    }
    if e < 0 {
        acc.recip()
    } else {
        acc
    }
}

/// Render as `p` or `p/q`, lowest terms, sign on the numerator.
pub fn rat_str(x: &Rat) -> String {
    if x.is_integer() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// Parse `p` or `p/q`. Whitespace is not tolerated; the denominator must
/// be nonzero.
pub fn parse_rat(s: &str) -> Result<Rat, String> {
    let parse_int = |t: &str| -> Result<BigInt, String> {
        t.parse::<BigInt>()
            .map_err(|_| format!("invalid integer {t:?}"))
    };
    match s.split_once('/') {
        None => Ok(Rat::from_integer(parse_int(s)?)),
        Some((num, den)) => {
            let d = parse_int(den)?;
            if d.is_zero() {
                return Err(format!("zero denominator in {s:?}"));
            }
            Ok(Rat::new(parse_int(num)?, d))
        }
    }
}

/// True if `x` is a (possibly negative) unit times one, i.e. `±1`.
pub fn is_pm_one(x: &Rat) -> bool {
    x.abs().is_one()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn powers() {
        assert_eq!(rpow(&rfrac(2, 3), 2), rfrac(4, 9));
        assert_eq!(rpow(&rfrac(2, 3), -1), rfrac(3, 2));
        assert_eq!(rpow(&rint(7), 0), rint(1));
    }

    #[test]
    fn parse_round_trip() {
        for s in ["0", "-4", "5/3", "-7/2"] {
            let x = parse_rat(s).unwrap();
            assert_eq!(rat_str(&x), s);
        }
        assert!(parse_rat("1/0").is_err());
        assert!(parse_rat("a").is_err());
    }
}
