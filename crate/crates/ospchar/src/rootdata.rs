//! Root data for C_n, B_n and osp(1|2n) in one shared coordinate system,
//! plus the hyperoctahedral Weyl group.
//!
//! Coordinate convention: every weight is a vector of exact rationals in a
//! fixed basis, tagged C-side or B-side.
//!
//! - C-side weights are written in the basis e_1, ..., e_n with
//!   (e_i | e_j) = delta_ij / 2, so the pairing is half the dot product.
//!   Simple roots of sp(2n): e_i - e_{i+1} and 2 e_n; odd simple root of
//!   osp(1|2n): e_n.
//! - B-side weights use an orthonormal basis eps_1, ..., eps_n, so the
//!   pairing is the plain dot product. Simple roots of so(2n+1):
//!   eps_i - eps_{i+1} and eps_n.
//!
//! With this choice the rescaling map that identifies C-side weights with
//! B-side weights is the identity on coordinates; it only flips the
//! convention tag. No irrational coordinate ever arises.
//!
//! Rank-one degenerations: for n = 1 both root systems collapse to A_1.
//! We take theta = 2 e_1 = theta_s_vee on the C side and theta = eps_1,
//! theta_s_vee = 2 eps_1 on the B side, which is the unique reading that
//! keeps every inequality in this crate uniform in n.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Which normalization a weight's coordinates refer to.
///
/// C-side: pairing = dot/2. B-side: pairing = dot.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Convention {
    CSide,
    BSide,
}

/// Algebra type selector for root data.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum AlgType {
    /// so(2n+1), B-side coordinates.
    B,
    /// sp(2n), C-side coordinates.
    C,
    /// osp(1|2n), C-side coordinates; the odd simple root is e_n.
    Osp,
}

fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

fn rat_half() -> BigRational {
    BigRational::new(BigInt::one(), BigInt::from(2))
}

/// An exact-rational weight in the shared epsilon-coordinate system.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Weight {
    coords: Vec<BigRational>,
    convention: Convention,
}

impl Weight {
    pub fn new(coords: Vec<BigRational>, convention: Convention) -> Self {
        Weight { coords, convention }
    }

    pub fn from_ints(coords: &[i64], convention: Convention) -> Self {
        Weight {
            coords: coords.iter().map(|&c| rat(c)).collect(),
            convention,
        }
    }

    pub fn zero(n: usize, convention: Convention) -> Self {
        Weight {
            coords: vec![BigRational::zero(); n],
            convention,
        }
    }

    pub fn rank(&self) -> usize {
        self.coords.len()
    }

    pub fn convention(&self) -> Convention {
        self.convention
    }

    pub fn coords(&self) -> &[BigRational] {
        &self.coords
    }

    /// Integer coordinates, if every coordinate is an integer.
    pub fn to_ints(&self) -> Option<Vec<i64>> {
        self.coords
            .iter()
            .map(|c| {
                if c.is_integer() {
                    i64::try_from(c.to_integer()).ok()
                } else {
                    None
                }
            })
            .collect()
    }

    /// Re-tags the weight with the other convention, keeping coordinates.
    ///
    /// This is the sqrt(2)-rescaling of the B/C identification, which is the
    /// identity on coordinates in this basis.
    pub fn retag(&self, convention: Convention) -> Weight {
        Weight {
            coords: self.coords.clone(),
            convention,
        }
    }

    pub fn add(&self, other: &Weight) -> Result<Weight> {
        self.check_compatible(other)?;
        Ok(Weight {
            coords: self
                .coords
                .iter()
                .zip(&other.coords)
                .map(|(a, b)| a + b)
                .collect(),
            convention: self.convention,
        })
    }

    pub fn sub(&self, other: &Weight) -> Result<Weight> {
        self.check_compatible(other)?;
        Ok(Weight {
            coords: self
                .coords
                .iter()
                .zip(&other.coords)
                .map(|(a, b)| a - b)
                .collect(),
            convention: self.convention,
        })
    }

    pub fn scale(&self, c: &BigRational) -> Weight {
        Weight {
            coords: self.coords.iter().map(|x| x * c).collect(),
            convention: self.convention,
        }
    }

    fn check_compatible(&self, other: &Weight) -> Result<()> {
        if self.convention != other.convention {
            return Err(Error::ConventionMismatch(
                self.convention,
                other.convention,
            ));
        }
        if self.rank() != other.rank() {
            return Err(Error::RankMismatch(self.rank(), other.rank()));
        }
        Ok(())
    }
}

impl std::fmt::Display for Weight {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let parts: Vec<String> = self.coords.iter().map(|c| c.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// Invariant bilinear form. C-side: dot/2; B-side: dot.
///
/// Errors on mismatched conventions or ranks.
pub fn bilinear(x: &Weight, y: &Weight) -> Result<BigRational> {
    x.check_compatible(y)?;
    let dot: BigRational = x
        .coords
        .iter()
        .zip(&y.coords)
        .map(|(a, b)| a * b)
        .sum();
    Ok(match x.convention {
        Convention::CSide => dot * rat_half(),
        Convention::BSide => dot,
    })
}

/// Simple roots of the requested type at rank n, in internal coordinates.
///
/// C: e_i - e_{i+1} (i < n) and 2 e_n, norms 1 and 2.
/// Osp: e_i - e_{i+1} and e_n (odd), with |e_n|^2 = 1/2.
/// B: eps_i - eps_{i+1} and eps_n, norms 2 and 1.
pub fn simple_roots(ty: AlgType, n: usize) -> Result<Vec<Weight>> {
    if n == 0 {
        return Err(Error::ZeroRank);
    }
    let convention = match ty {
        AlgType::B => Convention::BSide,
        AlgType::C | AlgType::Osp => Convention::CSide,
    };
    let mut roots = Vec::with_capacity(n);
    for i in 0..n - 1 {
        let mut c = vec![0i64; n];
        c[i] = 1;
        c[i + 1] = -1;
        roots.push(Weight::from_ints(&c, convention));
    }
    let mut last = vec![0i64; n];
    last[n - 1] = match ty {
        AlgType::C => 2,
        AlgType::B | AlgType::Osp => 1,
    };
    roots.push(Weight::from_ints(&last, convention));
    Ok(roots)
}

/// Positive even roots of sp(2n) (equivalently the even roots of osp(1|2n)):
/// e_i - e_j, e_i + e_j for i < j, and 2 e_i.
pub fn positive_even_roots(n: usize) -> Vec<Vec<i64>> {
    let mut roots = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            let mut a = vec![0i64; n];
            a[i] = 1;
            a[j] = -1;
            roots.push(a);
            let mut b = vec![0i64; n];
            b[i] = 1;
            b[j] = 1;
            roots.push(b);
        }
    }
    for i in 0..n {
        let mut c = vec![0i64; n];
        c[i] = 2;
        roots.push(c);
    }
    roots
}

/// Positive odd roots of osp(1|2n): e_1, ..., e_n.
pub fn positive_odd_roots(n: usize) -> Vec<Vec<i64>> {
    (0..n)
        .map(|i| {
            let mut c = vec![0i64; n];
            c[i] = 1;
            c
        })
        .collect()
}

/// The Weyl vectors used throughout, all C-side.
///
/// rho_sp = sum (n-i+1) e_i, rho_odd = (1/2) sum e_i,
/// rho_osp = rho_sp - rho_odd, rho_check = sum (2(n-i)+1) e_i
/// (the Weyl covector, (rho_check | alpha) = 1 for simple alpha of sp(2n)).
/// The identity rho_osp = rho_check / 2 holds exactly.
#[derive(Debug, Clone)]
pub struct RhoVectors {
    pub rho_sp: Weight,
    pub rho_osp: Weight,
    pub rho_odd: Weight,
    pub rho_check: Weight,
}

pub fn rho_vectors(n: usize) -> Result<RhoVectors> {
    if n == 0 {
        return Err(Error::ZeroRank);
    }
    let rho_sp: Vec<i64> = (0..n).map(|i| (n - i) as i64).collect();
    let rho_check: Vec<i64> = (0..n).map(|i| 2 * (n - 1 - i) as i64 + 1).collect();
    let rho_sp = Weight::from_ints(&rho_sp, Convention::CSide);
    let rho_check = Weight::from_ints(&rho_check, Convention::CSide);
    let rho_odd = Weight::new(vec![rat_half(); n], Convention::CSide);
    let rho_osp = rho_sp.sub(&rho_odd)?;
    Ok(RhoVectors {
        rho_sp,
        rho_osp,
        rho_odd,
        rho_check,
    })
}

/// rho_sp as integer coordinates (n, n-1, ..., 1).
pub fn rho_sp_ints(n: usize) -> Vec<i64> {
    (0..n).map(|i| (n - i) as i64).collect()
}

/// 2 * rho_osp as integer coordinates (2(n-i)+1).
pub fn two_rho_osp_ints(n: usize) -> Vec<i64> {
    (0..n).map(|i| 2 * (n - 1 - i) as i64 + 1).collect()
}

/// Dual Coxeter number: n+1 for C, 2n-1 for B, n+1/2 for osp(1|2n).
pub fn dual_coxeter(ty: AlgType, n: usize) -> Result<BigRational> {
    if n == 0 {
        return Err(Error::ZeroRank);
    }
    Ok(match ty {
        AlgType::C => rat(n as i64 + 1),
        AlgType::B => rat(2 * n as i64 - 1),
        AlgType::Osp => rat(n as i64) + rat_half(),
    })
}

/// Coxeter number: 2n for both B_n and C_n.
pub fn coxeter(n: usize) -> i64 {
    2 * n as i64
}

/// Default cap on the rank for full Weyl-group enumeration
/// (2^8 * 8! is about 10^7 elements).
pub const WEYL_RANK_CAP: usize = 8;

/// A signed permutation of n letters: the image of the basis vector
/// e_{perm[i]} is signs[i] * e_i, i.e. acting on coordinates,
/// (w x)_i = signs[i] * x_{perm[i]}.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct WeylElement {
    perm: Vec<usize>,
    signs: Vec<i8>,
    length: u32,
    det: i8,
}

impl WeylElement {
    /// Builds an element from its permutation and sign data, computing
    /// length and determinant.
    pub fn new(perm: Vec<usize>, signs: Vec<i8>) -> Self {
        let length = signed_perm_length(&perm, &signs);
        let det = if length % 2 == 0 { 1 } else { -1 };
        WeylElement {
            perm,
            signs,
            length,
            det,
        }
    }

    pub fn identity(n: usize) -> Self {
        WeylElement::new((0..n).collect(), vec![1; n])
    }

    pub fn rank(&self) -> usize {
        self.perm.len()
    }

    pub fn length(&self) -> u32 {
        self.length
    }

    pub fn det(&self) -> i8 {
        self.det
    }

    pub fn perm(&self) -> &[usize] {
        &self.perm
    }

    pub fn signs(&self) -> &[i8] {
        &self.signs
    }

    /// Group composition: (self * other) acts as self after other.
    pub fn compose(&self, other: &WeylElement) -> WeylElement {
        let n = self.rank();
        debug_assert_eq!(n, other.rank());
        let mut perm = vec![0usize; n];
        let mut signs = vec![1i8; n];
        for i in 0..n {
            perm[i] = other.perm[self.perm[i]];
            signs[i] = self.signs[i] * other.signs[self.perm[i]];
        }
        WeylElement::new(perm, signs)
    }

    /// Inverse element.
    pub fn inverse(&self) -> WeylElement {
        let n = self.rank();
        let mut perm = vec![0usize; n];
        let mut signs = vec![1i8; n];
        for i in 0..n {
            perm[self.perm[i]] = i;
            signs[self.perm[i]] = self.signs[i];
        }
        WeylElement::new(perm, signs)
    }

    /// Linear action on integer coordinates.
    pub fn act_ints(&self, coords: &[i64]) -> Vec<i64> {
        (0..coords.len())
            .map(|i| self.signs[i] as i64 * coords[self.perm[i]])
            .collect()
    }
}

/// Length of a signed permutation: the number of positive roots of C_n sent
/// to negative roots. Writing the image map as e_j -> t_j e_{pi(j)},
///
///   l(w) = #{ j : t_j < 0 }
///        + #{ j < j' : pi(j') < pi(j) }
///        + 2 * #{ j < j' : t_j < 0, pi(j) < pi(j') }.
fn signed_perm_length(perm: &[usize], signs: &[i8]) -> u32 {
    let n = perm.len();
    // pi = perm^{-1}, t_j = signs[perm^{-1}(j)]
    let mut pi = vec![0usize; n];
    let mut t = vec![1i8; n];
    for i in 0..n {
        pi[perm[i]] = i;
        t[perm[i]] = signs[i];
    }
    let mut len = 0u32;
    for j in 0..n {
        if t[j] < 0 {
            len += 1;
        }
        for j2 in j + 1..n {
            if pi[j2] < pi[j] {
                len += 1;
            } else if t[j] < 0 {
                len += 2;
            }
        }
    }
    len
}

/// Iterator over all 2^n * n! Weyl group elements of C_n, in a fixed
/// deterministic order (permutations in lexicographic order, then sign
/// masks in binary order).
pub fn weyl_elements(n: usize) -> Result<impl Iterator<Item = WeylElement>> {
    weyl_elements_capped(n, WEYL_RANK_CAP)
}

pub fn weyl_elements_capped(
    n: usize,
    cap: usize,
) -> Result<impl Iterator<Item = WeylElement>> {
    if n == 0 {
        return Err(Error::ZeroRank);
    }
    if n > cap {
        return Err(Error::RankCapExceeded { n, cap });
    }
    let perms = lex_permutations(n);
    Ok(perms.into_iter().flat_map(move |perm| {
        (0..(1u32 << n)).map(move |mask| {
            let signs: Vec<i8> = (0..n)
                .map(|i| if mask & (1 << i) != 0 { -1 } else { 1 })
                .collect();
            WeylElement::new(perm.clone(), signs)
        })
    }))
}

fn lex_permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut current = Vec::with_capacity(n);
    let mut used = vec![false; n];
    fn rec(
        n: usize,
        current: &mut Vec<usize>,
        used: &mut Vec<bool>,
        out: &mut Vec<Vec<usize>>,
    ) {
        if current.len() == n {
            out.push(current.clone());
            return;
        }
        for i in 0..n {
            if !used[i] {
                used[i] = true;
                current.push(i);
                rec(n, current, used, out);
                current.pop();
                used[i] = false;
            }
        }
    }
    rec(n, &mut current, &mut used, &mut out);
    out
}

/// Linear Weyl action on a weight: permutes and sign-flips coordinates.
pub fn act(w: &WeylElement, lambda: &Weight) -> Weight {
    let coords = (0..lambda.rank())
        .map(|i| {
            let c = &lambda.coords[w.perm[i]];
            if w.signs[i] < 0 {
                -c
            } else {
                c.clone()
            }
        })
        .collect();
    Weight::new(coords, lambda.convention)
}

/// Shifted (dot) action: w . lambda = w(lambda + rho) - rho.
pub fn dot_act(w: &WeylElement, lambda: &Weight, rho: &Weight) -> Result<Weight> {
    let shifted = lambda.add(rho)?;
    act(w, &shifted).sub(rho)
}

/// Dot action on integer coordinates with rho given doubled (so that
/// half-integer Weyl vectors stay in exact integer arithmetic). Panics if
/// the result is not integral, which cannot happen for the Weyl vectors of
/// this crate.
pub fn dot_act_ints(w: &WeylElement, lambda: &[i64], two_rho: &[i64]) -> Vec<i64> {
    let doubled: Vec<i64> = lambda
        .iter()
        .zip(two_rho)
        .map(|(l, r)| 2 * l + r)
        .collect();
    let moved = w.act_ints(&doubled);
    moved
        .iter()
        .zip(two_rho)
        .map(|(m, r)| {
            let v = m - r;
            debug_assert!(v % 2 == 0, "dot action left the integer lattice");
            v / 2
        })
        .collect()
}

/// Regular / singular classification with respect to the even roots.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Regularity {
    Regular,
    Singular,
}

/// A weight is regular iff it pairs nonzero with every even root, i.e. iff
/// its coordinates have pairwise distinct nonzero absolute values.
pub fn classify(lambda: &Weight) -> Regularity {
    let n = lambda.rank();
    for i in 0..n {
        if lambda.coords[i].is_zero() {
            return Regularity::Singular;
        }
        for j in i + 1..n {
            if lambda.coords[i].abs() == lambda.coords[j].abs() {
                return Regularity::Singular;
            }
        }
    }
    Regularity::Regular
}

/// Dominant representative of the Weyl orbit of lambda, together with the
/// minimal-length w such that lambda = act(w, dominant).
///
/// For regular lambda the w is unique; for singular lambda ties are broken
/// by minimizing the length (the minimal coset representative modulo the
/// stabilizer of the dominant weight), which makes the result deterministic.
pub fn dominant_rep(lambda: &Weight) -> (WeylElement, Weight) {
    let n = lambda.rank();
    let mut abs: Vec<BigRational> = lambda.coords.iter().map(|c| c.abs()).collect();
    abs.sort_by(|a, b| b.cmp(a));
    let dominant = Weight::new(abs.clone(), lambda.convention);

    // Initial w: order-preserving assignment within each block of equal
    // absolute values.
    let mut used = vec![false; n];
    let mut perm = vec![0usize; n];
    let mut signs = vec![1i8; n];
    for i in 0..n {
        let target = lambda.coords[i].abs();
        let pos = (0..n)
            .find(|&p| !used[p] && abs[p] == target)
            .expect("absolute value present in sorted list");
        used[pos] = true;
        perm[i] = pos;
        signs[i] = if lambda.coords[i] < BigRational::zero() {
            -1
        } else {
            1
        };
    }
    let mut w = WeylElement::new(perm, signs);
    debug_assert_eq!(act(&w, &dominant), *lambda);

    // Minimize over the stabilizer coset: repeatedly right-multiply by a
    // simple reflection fixing the dominant weight while that shortens w.
    let stab_gens = stabilizer_simple_reflections(&dominant);
    loop {
        let mut improved = false;
        for g in &stab_gens {
            let cand = w.compose(g);
            if cand.length() < w.length() {
                w = cand;
                improved = true;
            }
        }
        if !improved {
            break;
        }
    }
    debug_assert_eq!(act(&w, &dominant), *lambda);
    (w, dominant)
}

fn stabilizer_simple_reflections(dominant: &Weight) -> Vec<WeylElement> {
    let n = dominant.rank();
    let mut gens = Vec::new();
    for i in 0..n - 1 {
        if dominant.coords[i] == dominant.coords[i + 1] {
            let mut perm: Vec<usize> = (0..n).collect();
            perm.swap(i, i + 1);
            gens.push(WeylElement::new(perm, vec![1; n]));
        }
    }
    if dominant.coords[n - 1].is_zero() {
        let mut signs = vec![1i8; n];
        signs[n - 1] = -1;
        gens.push(WeylElement::new((0..n).collect(), signs));
    }
    gens
}

/// True iff the integer coordinates form a partition (weakly decreasing,
/// nonnegative), i.e. the weight is dominant integral for sp(2n).
pub fn is_dominant_ints(coords: &[i64]) -> bool {
    coords.windows(2).all(|w| w[0] >= w[1]) && *coords.last().unwrap_or(&0) >= 0
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(coords: &[i64]) -> Weight {
        Weight::from_ints(coords, Convention::CSide)
    }

    #[test]
    fn simple_roots_c2_with_norms() {
        let roots = simple_roots(AlgType::C, 2).unwrap();
        assert_eq!(roots[0], w(&[1, -1]));
        assert_eq!(roots[1], w(&[0, 2]));
        assert_eq!(bilinear(&roots[0], &roots[0]).unwrap(), rat(1));
        assert_eq!(bilinear(&roots[1], &roots[1]).unwrap(), rat(2));
    }

    #[test]
    fn simple_roots_osp1_norm_half() {
        let roots = simple_roots(AlgType::Osp, 1).unwrap();
        assert_eq!(roots, vec![w(&[1])]);
        assert_eq!(bilinear(&roots[0], &roots[0]).unwrap(), rat_half());
    }

    #[test]
    fn simple_roots_b2_with_norms() {
        let roots = simple_roots(AlgType::B, 2).unwrap();
        assert_eq!(roots[0], Weight::from_ints(&[1, -1], Convention::BSide));
        assert_eq!(roots[1], Weight::from_ints(&[0, 1], Convention::BSide));
        assert_eq!(bilinear(&roots[0], &roots[0]).unwrap(), rat(2));
        assert_eq!(bilinear(&roots[1], &roots[1]).unwrap(), rat(1));
    }

    #[test]
    fn zero_rank_rejected() {
        assert_eq!(simple_roots(AlgType::C, 0), Err(Error::ZeroRank));
        assert!(rho_vectors(0).is_err());
    }

    #[test]
    fn bilinear_rejects_mixed_conventions() {
        let x = w(&[1]);
        let y = Weight::from_ints(&[1], Convention::BSide);
        assert!(matches!(
            bilinear(&x, &y),
            Err(Error::ConventionMismatch(_, _))
        ));
    }

    #[test]
    fn bilinear_bside_orthonormal() {
        let e1 = Weight::from_ints(&[1, 0], Convention::BSide);
        let e2 = Weight::from_ints(&[0, 1], Convention::BSide);
        assert_eq!(bilinear(&e1, &e2).unwrap(), rat(0));
        assert_eq!(bilinear(&e1, &e1).unwrap(), rat(1));
    }

    #[test]
    fn rho_vectors_n2() {
        let r = rho_vectors(2).unwrap();
        assert_eq!(r.rho_sp, w(&[2, 1]));
        assert_eq!(r.rho_check, w(&[3, 1]));
        assert_eq!(r.rho_osp, r.rho_check.scale(&rat_half()));
        assert_eq!(
            r.rho_osp.coords(),
            &[BigRational::new(3.into(), 2.into()), rat_half()]
        );
    }

    #[test]
    fn rho_check_pairs_to_one_with_simple_roots() {
        for n in 1..=6 {
            let r = rho_vectors(n).unwrap();
            for alpha in simple_roots(AlgType::C, n).unwrap() {
                assert_eq!(bilinear(&r.rho_check, &alpha).unwrap(), rat(1));
            }
            // rho_osp = rho_check / 2 exactly
            assert_eq!(r.rho_osp, r.rho_check.scale(&rat_half()));
        }
    }

    #[test]
    fn rho_odd_norm_is_n_eighths() {
        for n in 1..=4 {
            let r = rho_vectors(n).unwrap();
            assert_eq!(
                bilinear(&r.rho_odd, &r.rho_odd).unwrap(),
                BigRational::new(BigInt::from(n), BigInt::from(8))
            );
        }
    }

    #[test]
    fn dual_coxeter_values() {
        assert_eq!(dual_coxeter(AlgType::C, 2).unwrap(), rat(3));
        assert_eq!(dual_coxeter(AlgType::B, 2).unwrap(), rat(3));
        assert_eq!(
            dual_coxeter(AlgType::Osp, 2).unwrap(),
            BigRational::new(5.into(), 2.into())
        );
    }

    #[test]
    fn weyl_group_small_ranks() {
        let elems: Vec<_> = weyl_elements(1).unwrap().collect();
        assert_eq!(elems.len(), 2);
        let mut lens: Vec<u32> = elems.iter().map(|e| e.length()).collect();
        lens.sort_unstable();
        assert_eq!(lens, vec![0, 1]);

        let elems: Vec<_> = weyl_elements(2).unwrap().collect();
        assert_eq!(elems.len(), 8);
        let det_sum: i64 = elems.iter().map(|e| e.det() as i64).sum();
        assert_eq!(det_sum, 0);
    }

    #[test]
    fn weyl_group_cardinality_up_to_rank_5() {
        let mut expected = 1u64;
        for n in 1..=5usize {
            expected = expected * 2 * n as u64;
            let count = weyl_elements(n).unwrap().count() as u64;
            assert_eq!(count, expected, "|W(C_{n})| = 2^n n!");
        }
    }

    #[test]
    fn weyl_rank_cap_enforced() {
        assert!(matches!(
            weyl_elements_capped(4, 3).err(),
            Some(Error::RankCapExceeded { .. })
        ));
    }

    #[test]
    fn identity_has_length_zero() {
        let id = WeylElement::identity(3);
        assert_eq!(id.length(), 0);
        assert_eq!(id.det(), 1);
        let lam = w(&[3, 1, -2]);
        assert_eq!(act(&id, &lam), lam);
    }

    #[test]
    fn det_matches_sign_formula() {
        for e in weyl_elements(3).unwrap() {
            let mut parity = 0;
            for i in 0..3 {
                for j in i + 1..3 {
                    if e.perm()[i] > e.perm()[j] {
                        parity += 1;
                    }
                }
            }
            let flips = e.signs().iter().filter(|&&s| s < 0).count();
            let det = if (parity + flips) % 2 == 0 { 1 } else { -1 };
            assert_eq!(e.det() as i32, det);
            assert_eq!(e.det(), if e.length() % 2 == 0 { 1 } else { -1 });
        }
    }

    /// Length via direct root counting must agree with the combinatorial
    /// formula.
    #[test]
    fn length_matches_root_counting() {
        for n in 1..=3usize {
            let pos = positive_even_roots(n);
            for e in weyl_elements(n).unwrap() {
                let mut count = 0;
                for root in &pos {
                    let img = e.act_ints(root);
                    // img is a negative root iff its first nonzero entry is < 0
                    let first = img.iter().find(|&&c| c != 0).unwrap();
                    if *first < 0 {
                        count += 1;
                    }
                }
                assert_eq!(e.length(), count, "length of {:?}", e);
            }
        }
    }

    /// Length must also agree with graph distance in the Cayley graph of the
    /// simple reflections (reduced word length).
    #[test]
    fn length_matches_reduced_words() {
        use std::collections::HashMap;
        for n in 1..=3usize {
            let mut gens = Vec::new();
            for i in 0..n - 1 {
                let mut perm: Vec<usize> = (0..n).collect();
                perm.swap(i, i + 1);
                gens.push(WeylElement::new(perm, vec![1; n]));
            }
            let mut signs = vec![1i8; n];
            signs[n - 1] = -1;
            gens.push(WeylElement::new((0..n).collect(), signs));

            let mut dist: HashMap<(Vec<usize>, Vec<i8>), u32> = HashMap::new();
            let id = WeylElement::identity(n);
            dist.insert((id.perm().to_vec(), id.signs().to_vec()), 0);
            let mut frontier = vec![id];
            while let Some(e) = frontier.pop() {
                let d = dist[&(e.perm().to_vec(), e.signs().to_vec())];
                for g in &gens {
                    let next = e.compose(g);
                    let key = (next.perm().to_vec(), next.signs().to_vec());
                    if !dist.contains_key(&key) || dist[&key] > d + 1 {
                        dist.insert(key, d + 1);
                        frontier.push(next);
                    }
                }
            }
            for e in weyl_elements(n).unwrap() {
                let key = (e.perm().to_vec(), e.signs().to_vec());
                assert_eq!(e.length(), dist[&key]);
            }
        }
    }

    #[test]
    fn dot_action_rank1_example() {
        // n=1, w = sign flip, lambda = 0, rho = (1): w . 0 = (-2)
        let flip = WeylElement::new(vec![0], vec![-1]);
        let lam = w(&[0]);
        let rho = w(&[1]);
        assert_eq!(dot_act(&flip, &lam, &rho).unwrap(), w(&[-2]));
        assert_eq!(dot_act_ints(&flip, &[0], &[2]), vec![-2]);
    }

    #[test]
    fn classify_examples() {
        assert_eq!(classify(&w(&[0, 0])), Regularity::Singular);
        let rho = rho_vectors(2).unwrap().rho_sp;
        assert_eq!(classify(&rho), Regularity::Regular);
        assert_eq!(classify(&w(&[2, -2])), Regularity::Singular);
    }

    #[test]
    fn dominant_rep_roundtrip_and_minimality() {
        // Brute-force minimality over boxes for n = 2, 3.
        for n in 2..=3usize {
            let elems: Vec<_> = weyl_elements(n).unwrap().collect();
            let mut coords = vec![-2i64; n];
            loop {
                let lam = w(&coords);
                let (wmin, dom) = dominant_rep(&lam);
                assert_eq!(act(&wmin, &dom), lam);
                assert!(is_dominant_ints(&dom.to_ints().unwrap()));
                let best = elems
                    .iter()
                    .filter(|e| act(e, &dom) == lam)
                    .map(|e| e.length())
                    .min()
                    .unwrap();
                assert_eq!(wmin.length(), best, "lambda = {:?}", coords);

                // advance the coordinate counter over [-2, 2]^n
                let mut k = 0;
                loop {
                    if k == n {
                        break;
                    }
                    coords[k] += 1;
                    if coords[k] <= 2 {
                        break;
                    }
                    coords[k] = -2;
                    k += 1;
                }
                if k == n {
                    break;
                }
            }
        }
    }

    /// Lemma on regular/singular splits: over a coordinate box, the regular
    /// dominant weights are exactly the rho-shifted dominant ones, and every
    /// weight is act(w, dominant) for its dominant representative.
    #[test]
    fn regular_dominant_set_is_shifted_dominant_lattice() {
        for n in 2..=3usize {
            let rho = rho_vectors(n).unwrap().rho_sp;
            let bound = if n == 2 { 10 } else { 6 };
            // enumerate dominant weights with first coordinate <= bound
            let mut stack = vec![Vec::<i64>::new()];
            let mut dominants = Vec::new();
            while let Some(prefix) = stack.pop() {
                if prefix.len() == n {
                    dominants.push(prefix);
                    continue;
                }
                let hi = prefix.last().copied().unwrap_or(bound);
                for c in 0..=hi {
                    let mut next = prefix.clone();
                    next.push(c);
                    stack.push(next);
                }
            }
            for dom in dominants {
                let lam = w(&dom);
                let regular = classify(&lam) == Regularity::Regular;
                // regular dominant <=> lam - rho is dominant (i.e. lam in P_+ + rho)
                let shifted: Vec<i64> = lam
                    .sub(&rho)
                    .unwrap()
                    .to_ints()
                    .unwrap_or_else(|| vec![-1]);
                assert_eq!(regular, is_dominant_ints(&shifted), "{:?}", dom);
            }
        }
    }
}
