//! Small helpers over arbitrary-precision rationals.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// Exact square root of a nonnegative rational in lowest terms, when both
/// numerator and denominator are perfect integer squares.
pub fn perfect_square(q: &BigRational) -> Option<BigRational> {
    if q.is_negative() {
        return None;
    }
    if q.is_zero() {
        return Some(BigRational::zero());
    }
    let n = q.numer();
    let d = q.denom();
    let sn = n.sqrt();
    let sd = d.sqrt();
    if &(&sn * &sn) == n && &(&sd * &sd) == d {
        Some(BigRational::new(sn, sd))
    } else {
        None
    }
}

/// Renders `q` as `p` or `p/q` without spaces; exact and stable.
pub fn fmt_rat(q: &BigRational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn perfect_square_examples() {
        assert_eq!(perfect_square(&rat(9, 4)), Some(rat(3, 2)));
        assert_eq!(perfect_square(&int(2)), None);
        assert_eq!(perfect_square(&int(0)), Some(int(0)));
        assert_eq!(perfect_square(&int(-4)), None);
        assert_eq!(perfect_square(&rat(1225, 36)), Some(rat(35, 6)));
    }
}
