//! Canonical JSON helpers: exact rationals travel as "num/den" strings and
//! big integers as decimal strings, never as floats.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;

use crate::{Error, Result};

/// Formats a rational as "num" when integral, else "num/den".
pub fn rational_to_string(r: &BigRational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Parses "num" or "num/den" into an exact rational.
pub fn rational_from_str(s: &str) -> Result<BigRational> {
    let bad = || Error::InvalidParams(format!("cannot parse rational '{s}'"));
    match s.split_once('/') {
        None => {
            let n: BigInt = s.trim().parse().map_err(|_| bad())?;
            Ok(BigRational::from_integer(n))
        }
        Some((num, den)) => {
            let n: BigInt = num.trim().parse().map_err(|_| bad())?;
            let d: BigInt = den.trim().parse().map_err(|_| bad())?;
            if d == BigInt::from(0) {
                return Err(bad());
            }
            Ok(BigRational::new(n, d))
        }
    }
}

/// Parses a comma-separated coordinate list of rationals, e.g. "1,0" or
/// "3/2,1/2".
pub fn coords_from_str(s: &str) -> Result<Vec<BigRational>> {
    s.split(',').map(|p| rational_from_str(p.trim())).collect()
}
