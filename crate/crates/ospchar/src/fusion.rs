//! Fusion rings: finite tensor-product decomposition, affine fusion at
//! positive integer level via Kac-Walton folding, the product-form
//! W-algebra fusion, and the induced osp(1|2n) fusion ring.
//!
//! Tensor multiplicities come from exact character products followed by
//! iterated highest-weight stripping. Affine fusion folds those
//! multiplicities through the shifted affine Weyl group at level k: a
//! shifted weight x = psi + rho is reflected into the alcove
//! 0 < x_n < ... < x_1 < k + h_vee, picking up a sign per reflection;
//! weights landing on a wall are dropped.
//!
//! The W-algebra fusion ring at k = -h_vee + p/q factors into a left ring
//! and a right ring. The left ring is the sp(2n) fusion at level p - h_vee.
//! The right ring lives on the coweight alphabet P_check(q) = 2 P^B: its
//! labels are doubled so(2n+1) weights, its tensor multiplicities are the
//! so(2n+1) ones, and the folding runs through the coprincipal alcove
//! with wall (x | theta_s_vee) = q. The naive alternative (sp(2n) fusion
//! at level q - h_vee with labels zeroed outside P_check(q)) produces
//! tables that are neither associative nor compatible with the
//! spinor-parity grading once n >= 2, so it cannot be the fusion ring of a
//! braided category; the dual-side folding is, and at n = 1 both recipes
//! coincide and match the Virasoro minimal-model fusion rules.

use std::collections::{BTreeMap, HashMap};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::admissible::{enumerate_weights, AdmissibleLevel, LevelKind, WeightSet};
use crate::charseries::{inverse_root_product, weyl_module_character_in, DenomType, FormalCharacter};
use crate::rootdata::{
    dot_act_ints, is_dominant_ints, positive_even_roots, rho_sp_ints, two_rho_osp_ints,
    weyl_elements, AlgType, Convention, Weight,
};
use crate::{Error, Result};

/// Multiplicity map of a finite decomposition.
pub type MultMap = BTreeMap<Vec<i64>, u64>;

/// Finite characters of simple sp(2n)-modules, cached by highest weight.
pub struct TensorEngine {
    n: usize,
    char_cache: HashMap<Vec<i64>, BTreeMap<Vec<i64>, BigInt>>,
}

impl TensorEngine {
    pub fn new(n: usize) -> Self {
        TensorEngine {
            n,
            char_cache: HashMap::new(),
        }
    }

    /// Weight multiplicities of the simple module E_lambda: the grade-0
    /// slice of the Weyl-module character with floors containing the
    /// convex hull of the Weyl orbit of lambda.
    pub fn finite_character(&mut self, lambda: &[i64]) -> Result<&BTreeMap<Vec<i64>, BigInt>> {
        if !self.char_cache.contains_key(lambda) {
            let floors: Vec<i64> = lambda
                .iter()
                .scan(0i64, |acc, c| {
                    *acc += c;
                    Some(-*acc)
                })
                .collect();
            let ch = weyl_module_character_in(DenomType::Sp, lambda, 0, &floors)?;
            self.char_cache.insert(lambda.to_vec(), ch.grade_slice(0));
        }
        Ok(&self.char_cache[lambda])
    }

    /// Dimension of E_lambda by the Weyl dimension formula
    /// prod_{alpha > 0} (lambda + rho | alpha) / (rho | alpha).
    pub fn dimension(&self, lambda: &[i64]) -> Result<BigInt> {
        weyl_dimension(lambda)
    }

    /// Multiplicities of E_phi inside E_lambda tensor E_nu, by character
    /// multiplication and iterated highest-weight stripping.
    pub fn tensor_decompose(&mut self, lambda: &[i64], nu: &[i64]) -> Result<MultMap> {
        if !is_dominant_ints(lambda) {
            return Err(Error::NotDominant(format!("{lambda:?}")));
        }
        if !is_dominant_ints(nu) {
            return Err(Error::NotDominant(format!("{nu:?}")));
        }
        let a = self.finite_character(lambda)?.clone();
        let b = self.finite_character(nu)?.clone();
        let mut product: BTreeMap<Vec<i64>, BigInt> = BTreeMap::new();
        for (wa, ca) in &a {
            for (wb, cb) in &b {
                let w: Vec<i64> = wa.iter().zip(wb).map(|(x, y)| x + y).collect();
                let entry = product.entry(w).or_insert_with(BigInt::zero);
                *entry += ca * cb;
                if entry.is_zero() {
                    // keep the map free of explicit zeros
                }
            }
        }
        product.retain(|_, c| !c.is_zero());

        let rho_check = two_rho_osp_ints(self.n);
        let height =
            |w: &[i64]| -> i64 { w.iter().zip(&rho_check).map(|(c, r)| c * r).sum() };
        let mut out = MultMap::new();
        while !product.is_empty() {
            let top = product
                .keys()
                .max_by_key(|w| (height(w), (*w).clone()))
                .expect("nonempty")
                .clone();
            assert!(
                is_dominant_ints(&top),
                "stripping reached a non-dominant leading weight {top:?}"
            );
            let mult = product[&top].clone();
            assert!(mult.is_positive(), "negative multiplicity at {top:?}");
            let ch = self.finite_character(&top)?.clone();
            for (w, c) in &ch {
                let entry = product.entry(w.clone()).or_insert_with(BigInt::zero);
                *entry -= c * &mult;
            }
            product.retain(|_, c| !c.is_zero());
            let m: u64 = u64::try_from(&mult)
                .map_err(|_| Error::InvalidParams("multiplicity overflow".into()))?;
            out.insert(top, m);
        }
        Ok(out)
    }
}

/// Weyl dimension formula for sp(2n), evaluated in exact arithmetic.
pub fn weyl_dimension(lambda: &[i64]) -> Result<BigInt> {
    let n = lambda.len();
    if !is_dominant_ints(lambda) {
        return Err(Error::NotDominant(format!("{lambda:?}")));
    }
    let rho = rho_sp_ints(n);
    let shifted: Vec<i64> = lambda.iter().zip(&rho).map(|(l, r)| l + r).collect();
    let mut num = BigInt::one();
    let mut den = BigInt::one();
    for alpha in positive_even_roots(n) {
        let dot = |x: &[i64]| -> i64 { x.iter().zip(&alpha).map(|(a, b)| a * b).sum() };
        num *= BigInt::from(dot(&shifted));
        den *= BigInt::from(dot(&rho));
    }
    let ratio = BigRational::new(num, den);
    assert!(ratio.is_integer(), "Weyl dimension must be an integer");
    Ok(ratio.to_integer())
}

/// Stand-alone tensor decomposition (a fresh engine per call).
pub fn tensor_decompose(lambda: &[i64], nu: &[i64]) -> Result<MultMap> {
    TensorEngine::new(lambda.len()).tensor_decompose(lambda, nu)
}

// Brings x = psi + rho into the fundamental alcove of the shifted affine
// Weyl action at level kappa = level + h_vee, tracking the sign. Returns
// None if x lands on a wall.
fn fold_to_alcove(mut x: Vec<i64>, kappa: i64) -> Option<(Vec<i64>, i64)> {
    let mut sign = 1i64;
    loop {
        // finite part: sort |x| descending; zeros and collisions are walls
        let mut neg = 0usize;
        for c in &x {
            if *c == 0 {
                return None;
            }
            if *c < 0 {
                neg += 1;
            }
        }
        let mut abs: Vec<i64> = x.iter().map(|c| c.abs()).collect();
        let mut inversions = 0usize;
        for i in 0..abs.len() {
            for j in i + 1..abs.len() {
                if abs[i] == abs[j] {
                    return None;
                }
                if abs[i] < abs[j] {
                    inversions += 1;
                }
            }
        }
        abs.sort_unstable_by(|a, b| b.cmp(a));
        if (neg + inversions) % 2 == 1 {
            sign = -sign;
        }
        x = abs;
        // affine wall (x | theta_vee) = x_1 = kappa
        if x[0] == kappa {
            return None;
        }
        if x[0] < kappa {
            return Some((x, sign));
        }
        x[0] = 2 * kappa - x[0];
        sign = -sign;
    }
}

/// Affine (WZW) fusion multiplicities of sp(2n) at positive integer level,
/// by Kac-Walton folding of the finite tensor multiplicities.
pub fn affine_fusion(lambda: &[i64], nu: &[i64], level: i64, n: usize) -> Result<MultMap> {
    if level <= 0 {
        return Err(Error::InvalidParams("level must be a positive integer".into()));
    }
    if lambda.len() != n || nu.len() != n {
        return Err(Error::RankMismatch(lambda.len(), n));
    }
    for label in [lambda, nu] {
        if !is_dominant_ints(label) || label[0] > level {
            return Err(Error::LabelOutsideAlphabet(format!("{label:?}")));
        }
    }
    let kappa = level + n as i64 + 1;
    let rho = rho_sp_ints(n);
    let tensor = tensor_decompose(lambda, nu)?;
    let mut out: BTreeMap<Vec<i64>, i64> = BTreeMap::new();
    for (psi, mult) in tensor {
        let x: Vec<i64> = psi.iter().zip(&rho).map(|(a, b)| a + b).collect();
        if let Some((dom, sign)) = fold_to_alcove(x, kappa) {
            let phi: Vec<i64> = dom.iter().zip(&rho).map(|(a, b)| a - b).collect();
            *out.entry(phi).or_insert(0) += sign * mult as i64;
        }
    }
    let mut result = MultMap::new();
    for (phi, c) in out {
        if c < 0 {
            return Err(Error::InvalidParams(format!(
                "negative folded multiplicity at {phi:?}"
            )));
        }
        if c > 0 {
            result.insert(phi, c as u64);
        }
    }
    Ok(result)
}

// ---------------------------------------------------------------------------
// The dual-side (so(2n+1)) ring on doubled coordinates.
// ---------------------------------------------------------------------------

// Positive roots of so(2n+1) in doubled epsilon-coordinates:
// 2(eps_i - eps_j), 2(eps_i + eps_j), 2 eps_i.
fn b_positive_roots_doubled(n: usize) -> Vec<Vec<i64>> {
    let mut roots = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            let mut a = vec![0i64; n];
            a[i] = 2;
            a[j] = -2;
            roots.push(a);
            let mut b = vec![0i64; n];
            b[i] = 2;
            b[j] = 2;
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

// A doubled B-weight: weakly decreasing, nonnegative, all coordinates of
// one parity (even = non-spinor, odd = spinor).
fn is_doubled_b_dominant(x: &[i64]) -> bool {
    is_dominant_ints(x) && x.iter().all(|c| (c - x[0]) % 2 == 0)
}

/// Weight multiplicities of the simple so(2n+1)-module with doubled
/// highest weight x (so spinor modules have odd coordinates). The weights
/// come back doubled as well.
pub fn b_finite_character(x: &[i64]) -> Result<BTreeMap<Vec<i64>, BigInt>> {
    let n = x.len();
    if !is_doubled_b_dominant(x) {
        return Err(Error::NotDominant(format!("{x:?}")));
    }
    // doubled rho_B = (2n-1, 2n-3, ..., 1); the dot action needs it doubled
    // once more
    let four_rho: Vec<i64> = two_rho_osp_ints(n).iter().map(|r| 2 * r).collect();
    let mut numerator_terms = Vec::new();
    for w in weyl_elements(n)? {
        let moved = dot_act_ints(&w, x, &four_rho);
        numerator_terms.push((moved, 0u32, BigInt::from(w.det() as i64)));
    }
    let numerator = FormalCharacter::polynomial(n, Convention::CSide, 0, numerator_terms.clone());
    let s_x: Vec<i64> = x
        .iter()
        .scan(0i64, |acc, c| {
            *acc += c;
            Some(*acc)
        })
        .collect();
    let mut max_stair = vec![i64::MIN; n];
    for (coords, _, _) in &numerator_terms {
        let mut acc = 0i64;
        for (l, c) in coords.iter().enumerate() {
            acc += c;
            max_stair[l] = max_stair[l].max(acc);
        }
    }
    let denom_floors: Vec<i64> = (0..n).map(|l| -s_x[l] - max_stair[l]).collect();
    let denom = inverse_root_product(n, &b_positive_roots_doubled(n), &denom_floors)?;
    Ok(denom.mul(&numerator)?.grade_slice(0))
}

/// Dimension of the simple so(2n+1)-module with doubled highest weight x.
pub fn b_dimension(x: &[i64]) -> Result<BigInt> {
    let n = x.len();
    if !is_doubled_b_dominant(x) {
        return Err(Error::NotDominant(format!("{x:?}")));
    }
    let two_rho = two_rho_osp_ints(n);
    let shifted: Vec<i64> = x.iter().zip(&two_rho).map(|(a, b)| a + b).collect();
    let mut num = BigInt::one();
    let mut den = BigInt::one();
    for alpha in b_positive_roots_doubled(n) {
        let dot = |v: &[i64]| -> i64 { v.iter().zip(&alpha).map(|(a, b)| a * b).sum() };
        num *= BigInt::from(dot(&shifted));
        den *= BigInt::from(dot(&two_rho));
    }
    let ratio = BigRational::new(num, den);
    assert!(ratio.is_integer(), "Weyl dimension must be an integer");
    Ok(ratio.to_integer())
}

/// Tensor multiplicities of simple so(2n+1)-modules in doubled
/// coordinates, by character multiplication and stripping.
pub fn b_tensor_decompose(a: &[i64], b: &[i64]) -> Result<MultMap> {
    let n = a.len();
    let ca = b_finite_character(a)?;
    let cb = b_finite_character(b)?;
    let mut product: BTreeMap<Vec<i64>, BigInt> = BTreeMap::new();
    for (wa, ma) in &ca {
        for (wb, mb) in &cb {
            let w: Vec<i64> = wa.iter().zip(wb).map(|(x, y)| x + y).collect();
            *product.entry(w).or_insert_with(BigInt::zero) += ma * mb;
        }
    }
    product.retain(|_, c| !c.is_zero());
    let rho_check = two_rho_osp_ints(n);
    let height = |w: &[i64]| -> i64 { w.iter().zip(&rho_check).map(|(c, r)| c * r).sum() };
    let mut out = MultMap::new();
    while !product.is_empty() {
        let top = product
            .keys()
            .max_by_key(|w| (height(w), (*w).clone()))
            .expect("nonempty")
            .clone();
        assert!(
            is_doubled_b_dominant(&top),
            "stripping reached a non-dominant leading weight {top:?}"
        );
        let mult = product[&top].clone();
        assert!(mult.is_positive(), "negative multiplicity at {top:?}");
        let ch = b_finite_character(&top)?;
        for (w, c) in &ch {
            let entry = product.entry(w.clone()).or_insert_with(BigInt::zero);
            *entry -= c * &mult;
        }
        product.retain(|_, c| !c.is_zero());
        let m: u64 = u64::try_from(&mult)
            .map_err(|_| Error::InvalidParams("multiplicity overflow".into()))?;
        out.insert(top, m);
    }
    Ok(out)
}

/// Fusion on the coweight alphabet P_check(q) (doubled so(2n+1) weights
/// with 2 m_1 <= q - 2n): so(2n+1) tensor multiplicities folded through
/// the coprincipal alcove with affine wall (x | theta_s_vee) = q, i.e.
/// x_1 = q in doubled coordinates. Each coordinate keeps its parity under
/// the folding, so the spinor grading is additive.
pub fn b_affine_fusion(a: &[i64], b: &[i64], q: i64, n: usize) -> Result<MultMap> {
    if a.len() != n || b.len() != n {
        return Err(Error::RankMismatch(a.len(), n));
    }
    for label in [a, b] {
        if !in_p_check(label, q, n) {
            return Err(Error::LabelOutsideAlphabet(format!("{label:?}")));
        }
    }
    let two_rho_b = two_rho_osp_ints(n);
    let tensor = b_tensor_decompose(a, b)?;
    let mut out: BTreeMap<Vec<i64>, i64> = BTreeMap::new();
    for (psi, mult) in tensor {
        let x: Vec<i64> = psi.iter().zip(&two_rho_b).map(|(s, r)| s + r).collect();
        if let Some((dom, sign)) = fold_to_alcove(x, q) {
            let phi: Vec<i64> = dom.iter().zip(&two_rho_b).map(|(s, r)| s - r).collect();
            *out.entry(phi).or_insert(0) += sign * mult as i64;
        }
    }
    let mut result = MultMap::new();
    for (phi, c) in out {
        if c < 0 {
            return Err(Error::InvalidParams(format!(
                "negative folded multiplicity at {phi:?}"
            )));
        }
        if c > 0 {
            debug_assert!(in_p_check(&phi, q, n), "folded label left the alcove");
            result.insert(phi, c as u64);
        }
    }
    Ok(result)
}

/// A pair label (lambda, lambda') of the W-algebra fusion ring.
pub type PairLabel = (Vec<i64>, Vec<i64>);

fn in_pc_level_one(label: &[i64], p: i64, n: usize) -> bool {
    is_dominant_ints(label) && label[0] <= p - (n as i64 + 1)
}

fn in_p_check(label: &[i64], q: i64, n: usize) -> bool {
    is_dominant_ints(label)
        && label[0] <= q - 2 * n as i64
        && label.iter().all(|c| (c - label[0]) % 2 == 0)
}

/// Validates that k = -h_vee + p/q is principal non-degenerate admissible
/// and not of coboundary type, as the product-form fusion requires.
pub fn validate_w_fusion_level(n: usize, p: i64, q: i64) -> Result<AdmissibleLevel> {
    let level = AdmissibleLevel::classify(AlgType::C, n, p, q)?;
    if level.kind != LevelKind::Principal {
        return Err(Error::InvalidParams(format!(
            "w-fusion needs a principal admissible level; (p,q)=({p},{q}) is {:?}",
            level.kind
        )));
    }
    if !level.nondegenerate {
        return Err(Error::InvalidParams(format!(
            "w-fusion needs a non-degenerate level: q = {q} < h = {}",
            2 * n
        )));
    }
    if level.coboundary {
        return Err(Error::InvalidParams(
            "coboundary levels have a different simple-module parameterization; refusing".into(),
        ));
    }
    Ok(level)
}

/// W-algebra fusion at k = -h_vee + p/q (principal non-degenerate): the
/// product of the sp(2n) fusion at level p - h_vee on the left labels and
/// the dual-side folded fusion on the right labels. Labels live in
/// P(p,1) x P_check(q); modules outside that set are zero, and the
/// dual-side ring already closes on P_check(q).
pub fn w_fusion(
    a: &PairLabel,
    b: &PairLabel,
    p: i64,
    q: i64,
    n: usize,
) -> Result<BTreeMap<PairLabel, u64>> {
    validate_w_fusion_level(n, p, q)?;
    for (left, right) in [a, b] {
        if !in_pc_level_one(left, p, n) {
            return Err(Error::LabelOutsideAlphabet(format!("{left:?}")));
        }
        if !in_p_check(right, q, n) {
            return Err(Error::LabelOutsideAlphabet(format!("{right:?}")));
        }
    }
    let h_vee = n as i64 + 1;
    let left = affine_fusion(&a.0, &b.0, p - h_vee, n)?;
    let right = b_affine_fusion(&a.1, &b.1, q, n)?;
    let mut out = BTreeMap::new();
    for (phi, m1) in &left {
        for (phi2, m2) in &right {
            out.insert((phi.clone(), phi2.clone()), m1 * m2);
        }
    }
    Ok(out)
}

/// Fusion of simple osp(1|2n) modules under the thm-style parameterization
/// k = -h_vee + u/v: labels are B-side weights of P^B (integer = ordinary
/// sector, half-integer = Ramond). The label mu transports to the C-side
/// coweight 2 mu, the right-factor W fusion at (u, 2u - v) is computed,
/// and the support transports back.
pub fn osp_fusion(
    mu: &Weight,
    nu: &Weight,
    u: i64,
    v: i64,
    n: usize,
) -> Result<BTreeMap<Vec<BigRational>, u64>> {
    let p_w = u;
    let q_w = 2 * u - v;
    let alphabet = enumerate_weights(WeightSet::PB, q_w, 2 * u, n)?;
    let transport = |w: &Weight| -> Result<Vec<i64>> {
        if w.convention() != Convention::BSide {
            return Err(Error::InvalidParams("osp labels are B-side weights".into()));
        }
        if !alphabet.iter().any(|a| a.coords() == w.coords()) {
            return Err(Error::LabelOutsideAlphabet(format!("{w}")));
        }
        w.coords()
            .iter()
            .map(|c| {
                let doubled = c * BigRational::from_integer(BigInt::from(2));
                if doubled.is_integer() {
                    i64::try_from(doubled.to_integer())
                        .map_err(|_| Error::InvalidParams("coordinate overflow".into()))
                } else {
                    Err(Error::InvalidParams(format!("not a weight of P^B: {w}")))
                }
            })
            .collect()
    };
    let mu_c = transport(mu)?;
    let nu_c = transport(nu)?;
    let zero = vec![0i64; n];
    let fused = w_fusion(&(zero.clone(), mu_c), &(zero, nu_c), p_w, q_w, n)?;
    let half = BigRational::new(BigInt::one(), BigInt::from(2));
    let mut out = BTreeMap::new();
    for ((left, right), m) in fused {
        assert!(left.iter().all(|c| *c == 0), "left factor of a right-sector product");
        let back: Vec<BigRational> = right
            .iter()
            .map(|c| BigRational::from_integer(BigInt::from(*c)) * &half)
            .collect();
        out.insert(back, m);
    }
    Ok(out)
}

/// A symmetric fusion table over a fixed alphabet.
#[derive(Debug, Clone, Serialize)]
pub struct FusionTable<L: Ord + Clone + Serialize> {
    pub alphabet: Vec<L>,
    /// (i, j) with i <= j -> {k -> multiplicity}, indices into the alphabet.
    pub constants: BTreeMap<(usize, usize), BTreeMap<usize, u64>>,
    pub meta: serde_json::Value,
}

impl<L: Ord + Clone + Serialize + Sync + Send> FusionTable<L> {
    /// Builds the table by evaluating `product` on all unordered pairs, in
    /// parallel with a deterministic merge.
    pub fn build(
        alphabet: Vec<L>,
        meta: serde_json::Value,
        product: impl Fn(&L, &L) -> Result<BTreeMap<L, u64>> + Sync,
    ) -> Result<FusionTable<L>> {
        let index: BTreeMap<L, usize> = alphabet
            .iter()
            .cloned()
            .enumerate()
            .map(|(i, l)| (l, i))
            .collect();
        let mut pairs = Vec::new();
        for i in 0..alphabet.len() {
            for j in i..alphabet.len() {
                pairs.push((i, j));
            }
        }
        let rows: Vec<Result<((usize, usize), BTreeMap<usize, u64>)>> = pairs
            .par_iter()
            .map(|&(i, j)| {
                let prod = product(&alphabet[i], &alphabet[j])?;
                let mut row = BTreeMap::new();
                for (l, m) in prod {
                    let k = *index.get(&l).ok_or_else(|| {
                        Error::LabelOutsideAlphabet("fusion product left the alphabet".into())
                    })?;
                    row.insert(k, m);
                }
                Ok(((i, j), row))
            })
            .collect();
        let mut constants = BTreeMap::new();
        for r in rows {
            let (key, row) = r?;
            constants.insert(key, row);
        }
        Ok(FusionTable {
            alphabet,
            constants,
            meta,
        })
    }

    pub fn product(&self, i: usize, j: usize) -> &BTreeMap<usize, u64> {
        let key = if i <= j { (i, j) } else { (j, i) };
        &self.constants[&key]
    }

    pub fn constant(&self, i: usize, j: usize, k: usize) -> u64 {
        self.product(i, j).get(&k).copied().unwrap_or(0)
    }

    /// Checks the ring axioms: the unit at `unit_index`, commutativity
    /// (structural), and full associativity. Returns the first violation.
    pub fn check_axioms(&self, unit_index: usize) -> Option<String> {
        let size = self.alphabet.len();
        for b in 0..size {
            let row = self.product(unit_index, b);
            if row.len() != 1 || row.get(&b) != Some(&1) {
                return Some(format!("unit row at {b} is {row:?}"));
            }
        }
        for a in 0..size {
            for b in 0..size {
                for c in 0..size {
                    for y in 0..size {
                        let lhs: u64 = (0..size)
                            .map(|x| self.constant(a, b, x) * self.constant(x, c, y))
                            .sum();
                        let rhs: u64 = (0..size)
                            .map(|x| self.constant(b, c, x) * self.constant(a, x, y))
                            .sum();
                        if lhs != rhs {
                            return Some(format!(
                                "associativity fails at ({a},{b},{c}) -> {y}: {lhs} vs {rhs}"
                            ));
                        }
                    }
                }
            }
        }
        None
    }

    pub fn to_json(&self) -> serde_json::Value {
        let triples: Vec<serde_json::Value> = self
            .constants
            .iter()
            .flat_map(|((i, j), row)| {
                row.iter()
                    .map(move |(k, m)| serde_json::json!([i, j, k, m]))
            })
            .collect();
        serde_json::json!({
            "version": 1,
            "meta": self.meta,
            "alphabet": serde_json::to_value(&self.alphabet).expect("alphabet serializes"),
            "constants": triples,
        })
    }
}

/// The affine fusion table of sp(2n) at a positive integer level.
pub fn affine_fusion_table(n: usize, level: i64) -> Result<FusionTable<Vec<i64>>> {
    let alphabet: Vec<Vec<i64>> = enumerate_weights(WeightSet::PC, level + n as i64 + 1, 1, n)?
        .iter()
        .map(|w| w.to_ints().expect("integral alphabet"))
        .collect();
    FusionTable::build(
        alphabet,
        serde_json::json!({ "kind": "affine", "n": n, "level": level }),
        |a, b| affine_fusion(a, b, level, n),
    )
}

/// The W-algebra fusion table at k = -h_vee + p/q over
/// P(p,1) x P_check(q).
pub fn w_fusion_table(n: usize, p: i64, q: i64) -> Result<FusionTable<PairLabel>> {
    validate_w_fusion_level(n, p, q)?;
    let left: Vec<Vec<i64>> = enumerate_weights(WeightSet::PC, p, 1, n)?
        .iter()
        .map(|w| w.to_ints().expect("integral alphabet"))
        .collect();
    let right: Vec<Vec<i64>> = enumerate_weights(WeightSet::PCheck, q, 1, n)?
        .iter()
        .map(|w| w.to_ints().expect("integral alphabet"))
        .collect();
    let mut alphabet = Vec::new();
    for l in &left {
        for r in &right {
            alphabet.push((l.clone(), r.clone()));
        }
    }
    alphabet.sort();
    FusionTable::build(
        alphabet,
        serde_json::json!({ "kind": "w-fusion", "n": n, "p": p, "q": q }),
        |a, b| w_fusion(a, b, p, q, n),
    )
}

/// The osp fusion table over P^B for k = -h_vee + u/v, with labels stored
/// as coordinate strings ("num/den" per entry).
pub fn osp_fusion_table(n: usize, u: i64, v: i64) -> Result<FusionTable<Vec<String>>> {
    let q_w = 2 * u - v;
    let alphabet_weights = enumerate_weights(WeightSet::PB, q_w, 2 * u, n)?;
    let alphabet: Vec<Vec<String>> = alphabet_weights
        .iter()
        .map(|w| {
            w.coords()
                .iter()
                .map(crate::jsonio::rational_to_string)
                .collect()
        })
        .collect();
    let weights_by_label: BTreeMap<Vec<String>, Weight> = alphabet
        .iter()
        .cloned()
        .zip(alphabet_weights.iter().cloned())
        .collect();
    FusionTable::build(
        alphabet,
        serde_json::json!({ "kind": "osp-fusion", "n": n, "u": u, "v": v }),
        |a, b| {
            let wa = &weights_by_label[a];
            let wb = &weights_by_label[b];
            let prod = osp_fusion(wa, wb, u, v, n)?;
            let mut out = BTreeMap::new();
            for (coords, m) in prod {
                let label: Vec<String> =
                    coords.iter().map(crate::jsonio::rational_to_string).collect();
                out.insert(label, m);
            }
            Ok(out)
        },
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mm(entries: &[(&[i64], u64)]) -> MultMap {
        entries.iter().map(|(w, m)| (w.to_vec(), *m)).collect()
    }

    #[test]
    fn tensor_unit() {
        let t = tensor_decompose(&[0, 0], &[2, 1]).unwrap();
        assert_eq!(t, mm(&[(&[2, 1], 1)]));
    }

    #[test]
    fn tensor_rank1_clebsch_gordan() {
        // sl_2: 2 tensor 2 = 1 + 3
        let t = tensor_decompose(&[1], &[1]).unwrap();
        assert_eq!(t, mm(&[(&[0], 1), (&[2], 1)]));
    }

    #[test]
    fn tensor_sp4_standard_squared() {
        // 4 tensor 4 = 1 + 5 + 10, total dimension 16
        let t = tensor_decompose(&[1, 0], &[1, 0]).unwrap();
        let total: BigInt = t
            .iter()
            .map(|(w, m)| weyl_dimension(w).unwrap() * BigInt::from(*m))
            .sum();
        assert_eq!(total, BigInt::from(16));
        assert_eq!(t.len(), 3);
    }

    #[test]
    fn weyl_dimensions() {
        assert_eq!(weyl_dimension(&[0, 0]).unwrap(), BigInt::from(1));
        assert_eq!(weyl_dimension(&[1, 0]).unwrap(), BigInt::from(4));
        assert_eq!(weyl_dimension(&[1, 1]).unwrap(), BigInt::from(5));
        assert_eq!(weyl_dimension(&[2, 0]).unwrap(), BigInt::from(10));
        assert_eq!(weyl_dimension(&[2, 2]).unwrap(), BigInt::from(14));
    }

    #[test]
    fn affine_fusion_rank1_level1() {
        let f = affine_fusion(&[1], &[1], 1, 1).unwrap();
        assert_eq!(f, mm(&[(&[0], 1)]));
    }

    #[test]
    fn affine_fusion_unit() {
        for level in 1..=3 {
            let f = affine_fusion(&[0, 0], &[1, 1], level, 2).unwrap();
            assert_eq!(f, mm(&[(&[1, 1], 1)]));
        }
    }

    #[test]
    fn affine_fusion_saturates_to_tensor() {
        // level >= (lambda + nu | theta) = lambda_1 + nu_1
        let lambda = [2i64, 1];
        let nu = [1i64, 1];
        let tensor = tensor_decompose(&lambda, &nu).unwrap();
        let fused = affine_fusion(&lambda, &nu, 3, 2).unwrap();
        assert_eq!(tensor, fused);
    }

    #[test]
    fn affine_fusion_rejects_outside_alphabet() {
        assert!(matches!(
            affine_fusion(&[3], &[0], 2, 1),
            Err(Error::LabelOutsideAlphabet(_))
        ));
    }

    #[test]
    fn affine_table_axioms_small() {
        for (n, level) in [(1usize, 2i64), (2, 2)] {
            let t = affine_fusion_table(n, level).unwrap();
            let unit = t
                .alphabet
                .iter()
                .position(|l| l.iter().all(|c| *c == 0))
                .unwrap();
            assert_eq!(t.check_axioms(unit), None);
        }
    }

    #[test]
    fn w_fusion_unit_and_zero_convention() {
        // (p,q) = (4,7) at n=2
        let zero = (vec![0i64, 0], vec![0i64, 0]);
        let b = (vec![1i64, 0], vec![2i64, 0]);
        let f = w_fusion(&zero, &b, 4, 7, 2).unwrap();
        assert_eq!(f.len(), 1);
        assert_eq!(f[&b], 1);
    }

    #[test]
    fn w_fusion_rejects_degenerate_level() {
        // q = 3 < h = 4 at n = 2
        assert!(w_fusion(
            &(vec![0, 0], vec![0, 0]),
            &(vec![0, 0], vec![0, 0]),
            4,
            3,
            2
        )
        .is_err());
    }

    #[test]
    fn osp_fusion_unit() {
        let alphabet = enumerate_weights(WeightSet::PB, 7, 8, 2).unwrap();
        let zero = alphabet
            .iter()
            .find(|w| w.coords().iter().all(|c| c.is_zero()))
            .unwrap();
        for nu in &alphabet {
            let f = osp_fusion(zero, nu, 4, 1, 2).unwrap();
            assert_eq!(f.len(), 1, "unit fusion with {nu}");
            assert_eq!(f[&nu.coords().to_vec()], 1);
        }
    }

    #[test]
    fn osp_fusion_sector_parity() {
        // ordinary x ordinary and ramond x ramond land in the ordinary
        // sector; mixed products land in the ramond sector
        let alphabet = enumerate_weights(WeightSet::PB, 7, 8, 2).unwrap();
        for a in &alphabet {
            for b in &alphabet {
                let spin_a = a.to_ints().is_none();
                let spin_b = b.to_ints().is_none();
                let f = osp_fusion(a, b, 4, 1, 2).unwrap();
                for coords in f.keys() {
                    let spinor = coords.iter().any(|c| !c.is_integer());
                    assert_eq!(spinor, spin_a ^ spin_b, "{a} x {b} -> {coords:?}");
                }
            }
        }
    }
}
