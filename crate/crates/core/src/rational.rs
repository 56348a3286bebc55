//! Exact rational scalars.

use alloc::string::String;
use core::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// The scalar field of every computation in this crate.
pub type Q = BigRational;

pub fn q(num: i64, den: i64) -> Q {
    Q::new(BigInt::from(num), BigInt::from(den))
}

pub fn qi(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn zero() -> Q {
    Q::zero()
}

pub fn one() -> Q {
    Q::one()
}

/// `Some(k)` when `x` is an integer that fits in `i64`.
pub fn as_i64(x: &Q) -> Option<i64> {
    if x.is_integer() {
        x.to_integer().to_i64()
    } else {
        None
    }
}

pub fn is_positive(x: &Q) -> bool {
    x.is_positive()
}

/// `"num/den"`, or just `"num"` for integers.
pub fn to_string(x: &Q) -> String {
    use alloc::format;
    if x.is_integer() {
        format!("{}", x.numer())
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// Parses `"a"`, `"-a"` or `"a/b"` with integer `a, b` and `b != 0`.
pub fn parse(s: &str) -> Option<Q> {
    let s = s.trim();
    match s.split_once('/') {
        Some((n, d)) => {
            let n = BigInt::from_str(n.trim()).ok()?;
            let d = BigInt::from_str(d.trim()).ok()?;
            if d.is_zero() {
                None
            } else {
                Some(Q::new(n, d))
            }
        }
        None => BigInt::from_str(s).ok().map(Q::from_integer),
    }
}

pub fn factorial(k: u32) -> Q {
    let mut acc = BigInt::one();
    for i in 2..=k {
        acc *= BigInt::from(i);
    }
    Q::from_integer(acc)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_round_trips() {
        for s in ["0", "-3", "7/2", "-110/3"] {
            assert_eq!(to_string(&parse(s).unwrap()), s);
        }
        assert_eq!(parse("4/2"), Some(qi(2)));
        assert_eq!(parse("1/0"), None);
        assert_eq!(parse("x"), None);
    }

    #[test]
    fn integer_detection() {
        assert_eq!(as_i64(&q(10, 5)), Some(2));
        assert_eq!(as_i64(&q(1, 2)), None);
    }
}
