//! Branching coefficients, level duality, and characters of simple
//! W-algebra modules.
//!
//! The central objects are the coefficient series
//!
//!   B^lambda_mu = q^{(lambda-mu | lambda-mu+2 rho_odd)} / prod_j (1-q^j)^n,
//!
//! their alternating Weyl sums (the branching functions of an osp Weyl
//! module into sp Weyl modules), the exponents
//!
//!   Delta_{w.lambda, mu} = m_k^osp(mu) - m_k^sp(lambda)
//!                        + (w.lambda - mu | w.lambda - mu + 2 rho_odd),
//!
//! and the dual level ell with 1/(k + h_sp) + 1/(ell + h_sp) = 2.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::charseries::{weyl_module_character_in, DenomType, FormalCharacter};
use crate::jsonio::rational_to_string;
use crate::qseries::{colored_partition_series, QSeries};
use crate::report::IdentityReport;
use crate::rootdata::{
    bilinear, dot_act_ints, is_dominant_ints, rho_sp_ints, rho_vectors, weyl_elements,
    Convention, Weight, WeylElement,
};
use crate::{Error, Result};

/// Which algebra a conformal weight refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sector {
    Sp,
    Osp,
}

fn rat(v: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(v))
}

fn rat_half() -> BigRational {
    BigRational::new(BigInt::one(), BigInt::from(2))
}

/// An exact level k for sp(2n) together with its derived data.
///
/// The dual level ell satisfies 1/(k + h_sp) + 1/(ell + h_sp) = 2, or
/// equivalently ell = -(n+1) + (k+n+1)/(2k+2n+1); the constructor computes
/// both forms and checks that they agree. The level is `bad` when
/// k + h_sp lies in {0, 1/2}, i.e. at the sp critical level or at the pole
/// of the duality map (which is also the osp critical level).
#[derive(Debug, Clone)]
pub struct LevelParam {
    pub k: BigRational,
    pub n: usize,
    pub h_sp: BigRational,
    pub h_osp: BigRational,
    ell: Option<BigRational>,
}

impl LevelParam {
    pub fn new(k: BigRational, n: usize) -> Result<LevelParam> {
        if n == 0 {
            return Err(Error::ZeroRank);
        }
        let h_sp = rat(n as i64 + 1);
        let h_osp = rat(n as i64) + rat_half();
        let shifted = &k + &h_sp;
        let bad = shifted.is_zero() || shifted == rat_half();
        let ell = if bad {
            None
        } else {
            // 1/(k+h) + 1/(ell+h) = 2  =>  ell + h = (k+h)/(2(k+h) - 1)
            let ell_a = &shifted / (&shifted * rat(2) - rat(1)) - &h_sp;
            // ell = -(n+1) + (k+n+1)/(2k+2n+1)
            let ell_b = -&h_sp
                + (&k + rat(n as i64 + 1)) / (&k * rat(2) + rat(2 * n as i64 + 1));
            assert_eq!(ell_a, ell_b, "the two closed forms of ell must agree");
            Some(ell_a)
        };
        Ok(LevelParam {
            k,
            n,
            h_sp,
            h_osp,
            ell,
        })
    }

    pub fn bad(&self) -> bool {
        self.ell.is_none()
    }

    pub fn ell(&self) -> Result<&BigRational> {
        self.ell.as_ref().ok_or(Error::DualityPole)
    }
}

/// Conformal weight m_k^g(mu) = (mu | mu + 2 rho_g) / (2 (k + h_g)) for
/// g = sp(2n) or osp(1|2n), with mu a C-side weight.
pub fn conformal_weight(sector: Sector, mu: &Weight, k: &BigRational) -> Result<BigRational> {
    let n = mu.rank();
    let rho = rho_vectors(n)?;
    let (rho_g, h_g) = match sector {
        Sector::Sp => (rho.rho_sp, rat(n as i64 + 1)),
        Sector::Osp => (rho.rho_osp, rat(n as i64) + rat_half()),
    };
    let shifted = k + &h_g;
    if shifted.is_zero() {
        return Err(Error::CriticalLevel(match sector {
            Sector::Sp => "sp",
            Sector::Osp => "osp",
        }));
    }
    let arg = mu.add(&rho_g.scale(&rat(2)))?;
    Ok(bilinear(mu, &arg)? / (shifted * rat(2)))
}

/// The quadratic exponent (v | v + 2 rho_odd) = sum_i v_i (v_i + 1) / 2 of
/// an integer weight; always a nonnegative integer.
pub fn odd_shifted_norm(v: &[i64]) -> i64 {
    v.iter().map(|&c| c * (c + 1) / 2).sum()
}

/// The Verma-level branching coefficient
/// B^lambda_mu = q^{(lambda-mu | lambda-mu+2 rho_odd)} / prod (1-q^j)^n:
/// n-colored partition counts shifted by the quadratic leading exponent.
pub fn b_coefficient(lambda: &[i64], mu: &[i64], trunc: u32) -> QSeries {
    let n = lambda.len();
    let v: Vec<i64> = lambda.iter().zip(mu).map(|(a, b)| a - b).collect();
    let e = odd_shifted_norm(&v);
    if e > trunc as i64 {
        return QSeries::zero_int(trunc + 1);
    }
    let shifted = colored_partition_series(n, trunc).shift(&rat(e));
    clamp_cutoff(shifted, trunc)
}

fn clamp_cutoff(series: QSeries, trunc: u32) -> QSeries {
    let limit = rat(trunc as i64 + 1);
    if series.cutoff() <= &limit {
        series
    } else {
        let mut out = QSeries::zero(limit);
        for (e, c) in series.terms() {
            out.add_term(e.clone(), c.clone());
        }
        out
    }
}

/// The alternating Weyl sum sum_w (-1)^{l(w)} B^{w . lambda}_mu over the
/// rho_sp-shifted dot action. When lambda + rho_sp is singular the terms
/// cancel in pairs and the result is identically zero; for dominant lambda
/// and mu this is the branching function of ch V^k_osp(mu) along
/// ch V^k_sp(lambda), so all coefficients are nonnegative.
pub fn branching_function(lambda: &[i64], mu: &[i64], trunc: u32) -> Result<QSeries> {
    let n = lambda.len();
    let two_rho_sp: Vec<i64> = rho_sp_ints(n).iter().map(|r| 2 * r).collect();
    let mut numerator = QSeries::zero_int(trunc + 1);
    for w in weyl_elements(n)? {
        let moved = dot_act_ints(&w, lambda, &two_rho_sp);
        let v: Vec<i64> = moved.iter().zip(mu).map(|(a, b)| a - b).collect();
        let e = odd_shifted_norm(&v);
        if e <= trunc as i64 {
            numerator.add_term(rat(e), BigInt::from(w.det() as i64));
        }
    }
    Ok(clamp_cutoff(
        numerator.mul(&colored_partition_series(n, trunc)),
        trunc,
    ))
}

/// Dominant weights lambda that can contribute to the branching identity
/// for mu at this truncation.
///
/// The B-series of (w . lambda, mu) starts at grade
/// E_w = |w(lambda+rho_sp) - (mu+rho_osp)|^2 - n/8. For lambda, mu both
/// dominant, lambda + rho_sp and mu + rho_osp have strictly decreasing
/// strictly positive coordinates, so the rearrangement inequality gives
/// min_w E_w = E_id (sign flips and disorder only increase the distance to
/// a positive decreasing vector). Hence lambda contributes only if
///
///   E_id = [ sum_i (2(lambda_i - mu_i) + 1)^2 - n ] / 8  <=  trunc,
///
/// a finite quadratic box, which we enumerate.
pub fn contributing_weights(n: usize, mu: &[i64], trunc: u32) -> Vec<Vec<i64>> {
    let budget = 8 * trunc as i64 + n as i64;
    let mut spread = 0i64;
    while (2 * (spread + 1) - 1) * (2 * (spread + 1) - 1) <= budget {
        spread += 1;
    }
    let top = mu.iter().copied().max().unwrap_or(0) + spread;
    let mut out = Vec::new();
    let mut stack: Vec<Vec<i64>> = vec![vec![]];
    while let Some(prefix) = stack.pop() {
        if prefix.len() == n {
            let cost: i64 = prefix
                .iter()
                .zip(mu)
                .map(|(l, m)| {
                    let t = 2 * (l - m) + 1;
                    t * t
                })
                .sum();
            if cost <= budget {
                out.push(prefix);
            }
            continue;
        }
        let hi = prefix.last().copied().unwrap_or(top);
        for c in 0..=hi {
            let mut next = prefix.clone();
            next.push(c);
            stack.push(next);
        }
    }
    out.sort();
    out
}

/// Checks the branching identity
/// ch V^k_osp(mu) = sum_{lambda in P_+} ch V^k_sp(lambda)
///                  sum_w (-1)^{l(w)} B^{w . lambda}_mu
/// exactly, term by term, below the truncation on a shared exactness
/// region. Both sides are k-independent, so the identity is verified as a
/// formal series identity.
pub fn verify_branching_identity(n: usize, mu: &[i64], trunc: u32) -> Result<IdentityReport> {
    if !is_dominant_ints(mu) {
        return Err(Error::NotDominant(format!("{mu:?}")));
    }
    // Shared floors: wide enough for the finite character of E_mu plus the
    // full truncation slack.
    let s_mu: Vec<i64> = mu
        .iter()
        .scan(0i64, |acc, c| {
            *acc += c;
            Some(*acc)
        })
        .collect();
    let floors: Vec<i64> = (0..n)
        .map(|l| -s_mu[l] - 2 * (trunc as i64 + 1))
        .collect();

    let lhs = weyl_module_character_in(DenomType::Osp, mu, trunc, &floors)?;

    let lambdas = contributing_weights(n, mu, trunc);
    let conservative = trunc as i64 + mu.iter().copied().max().unwrap_or(0) + 2 * n as i64;
    for lambda in &lambdas {
        assert!(
            lambda[0] <= conservative,
            "quadratic enumeration bound exceeded the conservative cap"
        );
    }
    let summands: Vec<Result<FormalCharacter>> = lambdas
        .par_iter()
        .map(|lambda| {
            let b = branching_function(lambda, mu, trunc)?;
            if b.is_zero() {
                return Ok(FormalCharacter::zero(n, Convention::CSide, trunc));
            }
            let ch = weyl_module_character_in(DenomType::Sp, lambda, trunc, &floors)?;
            ch.mul_univariate(&b)
        })
        .collect();
    let mut rhs = FormalCharacter::zero(n, Convention::CSide, trunc);
    for s in summands {
        rhs = rhs.add(&s?)?;
    }

    let mismatch = lhs.first_mismatch(&rhs);
    Ok(IdentityReport::new(
        "branching",
        serde_json::json!({ "n": n, "mu": mu }),
        trunc,
        mismatch,
    ))
}

/// Delta_{w . lambda, mu} as an exact rational.
pub fn delta_exponent(
    lambda: &[i64],
    mu: &[i64],
    w: &WeylElement,
    k: &BigRational,
) -> Result<BigRational> {
    let n = lambda.len();
    let lam_w = Weight::from_ints(lambda, Convention::CSide);
    let mu_w = Weight::from_ints(mu, Convention::CSide);
    let m_osp = conformal_weight(Sector::Osp, &mu_w, k)?;
    let m_sp = conformal_weight(Sector::Sp, &lam_w, k)?;
    let two_rho_sp: Vec<i64> = rho_sp_ints(n).iter().map(|r| 2 * r).collect();
    let moved = dot_act_ints(w, lambda, &two_rho_sp);
    let v: Vec<i64> = moved.iter().zip(mu).map(|(a, b)| a - b).collect();
    Ok(m_osp - m_sp + rat(odd_shifted_norm(&v)))
}

/// The right-hand side of the Delta identity:
/// m_ell^sp(w . lambda - 2(ell+h_sp) mu) - (w . lambda - 2(ell+h_sp) mu | rho_check).
pub fn delta_exponent_dual(
    lambda: &[i64],
    mu: &[i64],
    w: &WeylElement,
    level: &LevelParam,
) -> Result<BigRational> {
    let n = lambda.len();
    let ell = level.ell()?.clone();
    let rho = rho_vectors(n)?;
    let two_rho_sp: Vec<i64> = rho_sp_ints(n).iter().map(|r| 2 * r).collect();
    let moved = dot_act_ints(w, lambda, &two_rho_sp);
    let moved_w = Weight::from_ints(&moved, Convention::CSide);
    let mu_w = Weight::from_ints(mu, Convention::CSide);
    let scale = (&ell + &level.h_sp) * rat(2);
    let nu = moved_w.sub(&mu_w.scale(&scale))?;
    let m = conformal_weight(Sector::Sp, &nu, &ell)?;
    Ok(m - bilinear(&nu, &rho.rho_check)?)
}

/// Verifies the Delta identity for one (lambda, mu, w, k), comparing both
/// exact rationals.
pub fn verify_delta_lemma(
    lambda: &[i64],
    mu: &[i64],
    w: &WeylElement,
    k: &BigRational,
) -> Result<IdentityReport> {
    let level = LevelParam::new(k.clone(), lambda.len())?;
    let lhs = delta_exponent(lambda, mu, w, k)?;
    let rhs = delta_exponent_dual(lambda, mu, w, &level)?;
    let params = serde_json::json!({
        "n": lambda.len(),
        "lambda": lambda,
        "mu": mu,
        "k": rational_to_string(k),
    });
    if lhs != rhs {
        return Ok(IdentityReport::failed_with_detail(
            "delta-lemma",
            params,
            0,
            format!(
                "lhs = {}, rhs = {}",
                rational_to_string(&lhs),
                rational_to_string(&rhs)
            ),
        ));
    }
    Ok(IdentityReport::verified("delta-lemma", params, 0))
}

/// Randomized Delta-identity check: `cases` samples with coordinates up to
/// 5 in absolute value and k = a/b, 1 <= b <= 7, avoiding the critical and
/// pole levels.
pub fn verify_delta_lemma_random(n: usize, cases: u32, seed: u64) -> Result<IdentityReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let elements: Vec<WeylElement> = weyl_elements(n)?.collect();
    let mut checked = 0u32;
    while checked < cases {
        let lambda: Vec<i64> = (0..n).map(|_| rng.gen_range(-5..=5)).collect();
        let mu: Vec<i64> = (0..n).map(|_| rng.gen_range(-5..=5)).collect();
        let b = rng.gen_range(1..=7i64);
        let a = rng.gen_range(-7 * b..=7 * b);
        let k = BigRational::new(BigInt::from(a), BigInt::from(b));
        let level = LevelParam::new(k.clone(), n)?;
        if level.bad() {
            continue;
        }
        let w = &elements[rng.gen_range(0..elements.len())];
        let report = verify_delta_lemma(&lambda, &mu, w, &k)?;
        if !report.passed() {
            return Ok(report.with_detail(format!("failed after {checked} cases")));
        }
        checked += 1;
    }
    Ok(IdentityReport::verified(
        "delta-lemma",
        serde_json::json!({ "n": n, "cases": cases, "seed": seed }),
        0,
    ))
}

/// Character of the simple W-algebra module attached to (lambda, mu, k),
/// computed along both routes of the Delta identity.
pub struct WModuleRoutes {
    /// sum_w (-1)^{l(w)} q^{m_ell(nu_w) - (nu_w | rho_check)} / prod (1-q^j)^n
    pub via_mell: QSeries,
    /// sum_w (-1)^{l(w)} q^{Delta_{w . lambda, mu}} / prod (1-q^j)^n
    pub via_delta: QSeries,
}

pub fn w_module_character_routes(
    lambda: &[i64],
    mu: &[i64],
    k: &BigRational,
    trunc: u32,
) -> Result<WModuleRoutes> {
    let n = lambda.len();
    if !is_dominant_ints(lambda) {
        return Err(Error::NotDominant(format!("{lambda:?}")));
    }
    if !is_dominant_ints(mu) {
        return Err(Error::NotDominant(format!("{mu:?}")));
    }
    let level = LevelParam::new(k.clone(), n)?;
    let mut exps_mell = Vec::new();
    let mut exps_delta = Vec::new();
    for w in weyl_elements(n)? {
        let sign = BigInt::from(w.det() as i64);
        exps_mell.push((delta_exponent_dual(lambda, mu, &w, &level)?, sign.clone()));
        exps_delta.push((delta_exponent(lambda, mu, &w, k)?, sign));
    }
    let build = |exps: Vec<(BigRational, BigInt)>| -> QSeries {
        let min = exps.iter().map(|(e, _)| e.clone()).min().unwrap();
        let cutoff = &min + rat(trunc as i64 + 1);
        let mut numerator = QSeries::zero(cutoff);
        for (e, c) in exps {
            numerator.add_term(e, c);
        }
        numerator.mul(&colored_partition_series(n, trunc))
    };
    Ok(WModuleRoutes {
        via_mell: build(exps_mell),
        via_delta: build(exps_delta),
    })
}

/// Character of the simple W-module, with the two computation routes
/// compared term by term; errors if they disagree (they are equal exactly
/// when the Delta identity holds).
pub fn w_module_character(
    lambda: &[i64],
    mu: &[i64],
    k: &BigRational,
    trunc: u32,
) -> Result<QSeries> {
    let routes = w_module_character_routes(lambda, mu, k, trunc)?;
    if let Some((e, a, b)) = routes.via_mell.first_mismatch(&routes.via_delta) {
        return Err(Error::InvalidParams(format!(
            "dual-route mismatch at q^{}: {} vs {}",
            rational_to_string(&e),
            a,
            b
        )));
    }
    Ok(routes.via_mell)
}

/// Random dominant weight with coordinates bounded by `max`.
pub fn random_dominant_weight(rng: &mut ChaCha8Rng, n: usize, max: i64) -> Vec<i64> {
    let mut coords: Vec<i64> = (0..n).map(|_| rng.gen_range(0..=max)).collect();
    coords.sort_unstable_by(|a, b| b.cmp(a));
    coords
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn level_param_duality() {
        let lp = LevelParam::new(rat(1), 1).unwrap();
        // k = 1, n = 1: ell = -2 + 3/5 = -7/5
        assert_eq!(
            lp.ell().unwrap(),
            &BigRational::new(BigInt::from(-7), BigInt::from(5))
        );
        let shifted = &lp.k + &lp.h_sp;
        let dual = lp.ell().unwrap() + &lp.h_sp;
        assert_eq!(
            shifted.recip() + dual.recip(),
            rat(2),
            "1/(k+h) + 1/(ell+h) = 2"
        );
    }

    #[test]
    fn level_param_bad_cases() {
        // k + h = 0 and k + h = 1/2 are both rejected
        let lp = LevelParam::new(rat(-2), 1).unwrap();
        assert!(lp.bad());
        let half = BigRational::new(BigInt::from(-3), BigInt::from(2));
        let lp = LevelParam::new(half, 1).unwrap();
        assert!(lp.bad());
        assert!(lp.ell().is_err());
    }

    #[test]
    fn conformal_weight_examples() {
        // mu = 0 -> 0
        let zero = Weight::from_ints(&[0], Convention::CSide);
        assert_eq!(
            conformal_weight(Sector::Sp, &zero, &rat(1)).unwrap(),
            rat(0)
        );
        // n=1, mu = 2 e_1, k = 1: (mu | mu + 2 rho_sp) = 4, m = 4/(2*3) = 2/3
        let mu = Weight::from_ints(&[2], Convention::CSide);
        assert_eq!(
            conformal_weight(Sector::Sp, &mu, &rat(1)).unwrap(),
            BigRational::new(BigInt::from(2), BigInt::from(3))
        );
    }

    #[test]
    fn conformal_weight_critical_level() {
        let mu = Weight::from_ints(&[1], Convention::CSide);
        assert!(conformal_weight(Sector::Sp, &mu, &rat(-2)).is_err());
    }

    #[test]
    fn b_coefficient_diagonal_is_partition_series() {
        let b = b_coefficient(&[3], &[3], 6);
        let expect = [1i64, 1, 2, 3, 5, 7, 11];
        for (d, e) in expect.iter().enumerate() {
            assert_eq!(b.coefficient(&rat(d as i64)), BigInt::from(*e));
        }
    }

    #[test]
    fn b_coefficient_leading_exponent() {
        // lambda - mu = e_1: exponent 1*2/2 = 1
        let b = b_coefficient(&[1], &[0], 4);
        assert_eq!(b.leading_exponent(), Some(&rat(1)));
    }

    #[test]
    fn branching_function_vacuum_leading_term() {
        let s = branching_function(&[0], &[0], 4).unwrap();
        assert_eq!(s.coefficient(&rat(0)), BigInt::one());
    }

    #[test]
    fn branching_function_singular_shift_vanishes() {
        // n=2: lambda = (0,1) has lambda + rho = (2,2) singular, so the
        // alternating sum cancels exactly
        let lambda = [0i64, 1];
        let s = branching_function(&lambda, &[0, 0], 8).unwrap();
        assert!(s.is_zero(), "{s}");
    }

    #[test]
    fn delta_exponent_rank1_flip() {
        // n=1, lambda=mu=0, w = sign flip, k=1: Delta = 1
        let flip = WeylElement::new(vec![0], vec![-1]);
        let d = delta_exponent(&[0], &[0], &flip, &rat(1)).unwrap();
        assert_eq!(d, rat(1));
    }

    #[test]
    fn delta_lemma_spot_cases() {
        let id = WeylElement::identity(2);
        let k = BigRational::new(BigInt::from(1), BigInt::from(3));
        let r = verify_delta_lemma(&[0, 0], &[0, 0], &id, &k).unwrap();
        assert!(r.passed());
        let r = verify_delta_lemma_random(1, 50, 7).unwrap();
        assert!(r.passed());
    }

    #[test]
    fn branching_identity_rank1() {
        let r = verify_branching_identity(1, &[0], 6).unwrap();
        assert!(r.passed(), "{r:?}");
        let r = verify_branching_identity(1, &[1], 6).unwrap();
        assert!(r.passed(), "{r:?}");
    }

    #[test]
    fn w_module_vacuum_leading_term() {
        let k = BigRational::new(BigInt::from(1), BigInt::from(4));
        let s = w_module_character(&[0], &[0], &k, 4).unwrap();
        assert_eq!(s.leading_exponent(), Some(&rat(0)));
        assert_eq!(s.coefficient(&rat(0)), BigInt::one());
    }

    #[test]
    fn w_module_matches_shifted_branching() {
        // after multiplying by q^{m_k^osp(mu) - m_k^sp(lambda)}, the
        // branching function equals the W-module character
        let lambda = [1i64, 0];
        let mu = [1i64, 1];
        let k = BigRational::new(BigInt::from(2), BigInt::from(5));
        let trunc = 5;
        let wch = w_module_character(&lambda, &mu, &k, trunc).unwrap();
        let lam_w = Weight::from_ints(&lambda, Convention::CSide);
        let mu_w = Weight::from_ints(&mu, Convention::CSide);
        let offset = conformal_weight(Sector::Osp, &mu_w, &k).unwrap()
            - conformal_weight(Sector::Sp, &lam_w, &k).unwrap();
        let shifted = branching_function(&lambda, &mu, trunc)
            .unwrap()
            .shift(&offset);
        assert!(wch.first_mismatch(&shifted).is_none());
    }
}
