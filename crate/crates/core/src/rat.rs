//! Exact rational scalars. All formula values and weights are `BigRational`;
//! nothing in the crate touches floating point.

use num::bigint::{BigInt, Sign};
use num::{BigRational, One, Signed, Zero};

pub type Rat = BigRational;

pub fn rat(numer: i64, denom: i64) -> Rat {
    Rat::new(BigInt::from(numer), BigInt::from(denom))
}

pub fn rat_int(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

/// Renders `p/q` without the denominator when it is 1. This is the wire
/// format used by model specs and reports.
pub fn format_rat(r: &Rat) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Parses `p` or `p/q` with q > 0. Decimal points are rejected.
pub fn parse_rat(s: &str) -> Option<Rat> {
    let s = s.trim();
    match s.split_once('/') {
        None => {
            let n: BigInt = s.parse().ok()?;
            Some(Rat::from_integer(n))
        }
        Some((p, q)) => {
            let p: BigInt = p.trim().parse().ok()?;
            let q: BigInt = q.trim().parse().ok()?;
            if q.sign() != Sign::Plus {
                return None;
            }
            Some(Rat::new(p, q))
        }
    }
}

pub fn abs(r: &Rat) -> Rat {
    r.abs()
}

pub fn zero() -> Rat {
    Rat::zero()
}

pub fn one() -> Rat {
    Rat::one()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_format_round_trip() {
        for s in ["0", "1", "-1", "1/2", "-3/4", "22/7"] {
            let r = parse_rat(s).unwrap();
            assert_eq!(format_rat(&r), s);
        }
    }

    #[test]
    fn rejects_bad_input() {
        assert!(parse_rat("1.5").is_none());
        assert!(parse_rat("1/-2").is_none());
        assert!(parse_rat("1/0").is_none());
    }

    #[test]
    fn normalizes() {
        assert_eq!(parse_rat("2/4").unwrap(), rat(1, 2));
    }
}
