//! Univariate q-series with exact rational exponents and arbitrary-precision
//! integer coefficients, truncated above an exact cutoff.
//!
//! A series is exact for every exponent strictly below `cutoff`; terms at or
//! above the cutoff are dropped. Exponents may be any rationals (the
//! Drinfeld-Sokolov specialization produces half-integer steps and arbitrary
//! rational offsets), so terms live in an ordered map keyed by exponent.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::jsonio::rational_to_string;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QSeries {
    cutoff: BigRational,
    terms: BTreeMap<BigRational, BigInt>,
}

impl QSeries {
    pub fn zero(cutoff: BigRational) -> Self {
        QSeries {
            cutoff,
            terms: BTreeMap::new(),
        }
    }

    pub fn zero_int(cutoff: u32) -> Self {
        QSeries::zero(BigRational::from_integer(BigInt::from(cutoff)))
    }

    /// The single term q^exponent.
    pub fn monomial(exponent: BigRational, cutoff: BigRational) -> Self {
        let mut s = QSeries::zero(cutoff);
        s.add_term(exponent, BigInt::one());
        s
    }

    pub fn one(cutoff: BigRational) -> Self {
        QSeries::monomial(BigRational::zero(), cutoff)
    }

    pub fn cutoff(&self) -> &BigRational {
        &self.cutoff
    }

    pub fn terms(&self) -> &BTreeMap<BigRational, BigInt> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, exponent: &BigRational) -> BigInt {
        self.terms.get(exponent).cloned().unwrap_or_else(BigInt::zero)
    }

    /// Smallest exponent with nonzero coefficient, if any.
    pub fn leading_exponent(&self) -> Option<&BigRational> {
        self.terms.keys().next()
    }

    pub fn add_term(&mut self, exponent: BigRational, coeff: BigInt) {
        if coeff.is_zero() || exponent >= self.cutoff {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(exponent) {
            Entry::Vacant(slot) => {
                slot.insert(coeff);
            }
            Entry::Occupied(mut slot) => {
                *slot.get_mut() += coeff;
                if slot.get().is_zero() {
                    slot.remove();
                }
            }
        }
    }

    pub fn add(&self, other: &QSeries) -> QSeries {
        let cutoff = self.cutoff.clone().min(other.cutoff.clone());
        let mut out = QSeries::zero(cutoff);
        for (e, c) in &self.terms {
            out.add_term(e.clone(), c.clone());
        }
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &QSeries) -> QSeries {
        let cutoff = self.cutoff.clone().min(other.cutoff.clone());
        let mut out = QSeries::zero(cutoff);
        for (e, c) in &self.terms {
            out.add_term(e.clone(), c.clone());
        }
        for (e, c) in &other.terms {
            out.add_term(e.clone(), -c.clone());
        }
        out
    }

    pub fn scale(&self, c: &BigInt) -> QSeries {
        let mut out = QSeries::zero(self.cutoff.clone());
        for (e, v) in &self.terms {
            out.add_term(e.clone(), v * c);
        }
        out
    }

    /// Multiplies by q^shift, shifting the cutoff along.
    pub fn shift(&self, shift: &BigRational) -> QSeries {
        let mut out = QSeries::zero(&self.cutoff + shift);
        for (e, c) in &self.terms {
            out.add_term(e + shift, c.clone());
        }
        out
    }

    /// Product, exact below min(a.cutoff + lead(b), b.cutoff + lead(a)).
    /// An empty factor yields the zero series with the other cutoff kept.
    pub fn mul(&self, other: &QSeries) -> QSeries {
        let lead_a = self.leading_exponent().cloned();
        let lead_b = other.leading_exponent().cloned();
        let cutoff = match (lead_a, lead_b) {
            (Some(la), Some(lb)) => {
                (&self.cutoff + lb).min(&other.cutoff + la)
            }
            _ => self.cutoff.clone().min(other.cutoff.clone()),
        };
        let mut out = QSeries::zero(cutoff);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                out.add_term(ea + eb, ca * cb);
            }
        }
        out
    }

    /// First exponent (below both cutoffs) where the two series differ.
    pub fn first_mismatch(&self, other: &QSeries) -> Option<(BigRational, BigInt, BigInt)> {
        let limit = self.cutoff.clone().min(other.cutoff.clone());
        let mut exps: Vec<&BigRational> = self
            .terms
            .keys()
            .chain(other.terms.keys())
            .filter(|e| **e < limit)
            .collect();
        exps.sort();
        exps.dedup();
        for e in exps {
            let a = self.coefficient(e);
            let b = other.coefficient(e);
            if a != b {
                return Some((e.clone(), a, b));
            }
        }
        None
    }

    /// Canonical JSON value: cutoff plus the sorted term list.
    pub fn to_json(&self) -> serde_json::Value {
        let terms: Vec<serde_json::Value> = self
            .terms
            .iter()
            .map(|(e, c)| {
                serde_json::json!([rational_to_string(e), c.to_string()])
            })
            .collect();
        serde_json::json!({
            "cutoff": rational_to_string(&self.cutoff),
            "terms": terms,
        })
    }
}

impl std::fmt::Display for QSeries {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0 + O(q^{})", rational_to_string(&self.cutoff));
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(e, c)| {
                if e.is_zero() {
                    format!("{c}")
                } else if e.is_one() {
                    format!("{c}*q")
                } else {
                    format!("{c}*q^{}", rational_to_string(e))
                }
            })
            .collect();
        write!(
            f,
            "{} + O(q^{})",
            parts.join(" + "),
            rational_to_string(&self.cutoff)
        )
    }
}

/// Expansion of 1 / prod_{j=1}^{trunc} (1 - q^j)^colors: generating function
/// of `colors`-colored partitions, exact below exponent trunc + 1.
pub fn colored_partition_series(colors: usize, trunc: u32) -> QSeries {
    let mut coeffs: Vec<BigInt> = vec![BigInt::zero(); trunc as usize + 1];
    coeffs[0] = BigInt::one();
    for _ in 0..colors {
        for j in 1..=trunc as usize {
            for d in j..=trunc as usize {
                let add = coeffs[d - j].clone();
                coeffs[d] += add;
            }
        }
    }
    let mut out = QSeries::zero_int(trunc + 1);
    for (d, c) in coeffs.into_iter().enumerate() {
        out.add_term(BigRational::from_integer(BigInt::from(d)), c);
    }
    out
}

/// Finite product prod_{j=1}^{trunc} (1 - q^j)^colors as a polynomial,
/// truncated above `trunc`.
pub fn euler_factor_polynomial(colors: usize, trunc: u32) -> QSeries {
    let mut out = QSeries::one(BigRational::from_integer(BigInt::from(trunc + 1)));
    for _ in 0..colors {
        for j in 1..=trunc {
            let mut factor = QSeries::one(out.cutoff().clone());
            factor.add_term(
                BigRational::from_integer(BigInt::from(j)),
                BigInt::from(-1),
            );
            out = out.mul(&factor);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn int(n: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(n))
    }

    #[test]
    fn partition_generating_function() {
        // 1/prod(1-q^j) = 1 + q + 2q^2 + 3q^3 + 5q^4 + ...
        let p = colored_partition_series(1, 6);
        let expect = [1i64, 1, 2, 3, 5, 7, 11];
        for (d, e) in expect.iter().enumerate() {
            assert_eq!(p.coefficient(&int(d as i64)), BigInt::from(*e));
        }
    }

    #[test]
    fn colored_partitions_two_colors() {
        // 1/prod(1-q^j)^2 = 1 + 2q + 5q^2 + 10q^3 + ...
        let p = colored_partition_series(2, 4);
        let expect = [1i64, 2, 5, 10, 20];
        for (d, e) in expect.iter().enumerate() {
            assert_eq!(p.coefficient(&int(d as i64)), BigInt::from(*e));
        }
    }

    #[test]
    fn euler_times_partitions_is_one() {
        let t = 10;
        let prod = euler_factor_polynomial(1, t).mul(&colored_partition_series(1, t));
        assert_eq!(prod.coefficient(&int(0)), BigInt::one());
        for d in 1..=t as i64 {
            assert_eq!(prod.coefficient(&int(d)), BigInt::zero(), "grade {d}");
        }
    }

    #[test]
    fn mul_cutoff_respects_leading_exponents() {
        // (q^2 + ...) exact below 5 times 1 exact below 3 is exact below 5.
        let a = QSeries::monomial(int(2), int(5));
        let b = QSeries::one(int(3));
        let prod = a.mul(&b);
        assert_eq!(prod.cutoff(), &int(5));
    }

    #[test]
    fn shift_moves_cutoff() {
        let a = QSeries::one(int(3)).shift(&BigRational::new(1.into(), 2.into()));
        assert_eq!(
            a.leading_exponent().unwrap(),
            &BigRational::new(1.into(), 2.into())
        );
        assert_eq!(a.cutoff(), &BigRational::new(7.into(), 2.into()));
    }

    #[test]
    fn first_mismatch_reports_lowest_exponent() {
        let mut a = QSeries::one(int(4));
        a.add_term(int(2), BigInt::from(3));
        let mut b = QSeries::one(int(4));
        b.add_term(int(2), BigInt::from(4));
        b.add_term(int(3), BigInt::from(9));
        let (e, ca, cb) = a.first_mismatch(&b).unwrap();
        assert_eq!(e, int(2));
        assert_eq!((ca, cb), (BigInt::from(3), BigInt::from(4)));
    }
}
