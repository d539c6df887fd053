//! Truncated formal character arithmetic: affine denominators, theta sums,
//! Verma and Weyl-module characters, and the Drinfeld-Sokolov
//! specialization.
//!
//! A formal character is a finite map (weight, q-grade) -> integer together
//! with a global rational q-offset and a truncation order. Grades above the
//! truncation are dropped. Because the inverse denominators have infinite
//! weight support at every grade, each character additionally carries an
//! explicit *exactness region* described by staircase floors, and all
//! operations preserve the following invariant.
//!
//! Exactness invariant. Write s_l(v) = v_1 + ... + v_l for the partial
//! coordinate sums of a weight v. A character with truncation T and floors
//! f_1, ..., f_n guarantees the cell (v, d) exactly when
//!
//!   d <= T   and   s_l(v) >= f_l - 2(T - d)   for every l.
//!
//! Every stored term inside that region is the exact coefficient of the
//! full (untruncated) series, and absent cells inside the region are exact
//! zeros. Characters with finite support carry no floors and are exact at
//! every weight below their truncation.
//!
//! Why the region survives multiplication by denominator factors: every
//! factor of the affine denominators moves cells by steps (w, g) where
//! either g >= 1 and |s_l(w)| <= 2g (paid moves: e^{±alpha} q^g costs at
//! least one grade per root application, and roots have |s_l| <= 2), or
//! g = 0 and s_l(w) <= 0 for all l (the free directions are negatives of
//! positive roots, whose partial sums are nonnegative). A dropped cell at
//! grade d' with s_l < f_l - 2(T - d') therefore only reaches cells at
//! grade d >= d' with s_l < f_l - 2(T - d): it can never re-enter the
//! region. Cells above the ceilings s_l <= s_l(start) + 2d are identically
//! zero in the full series for the same reason, which bounds the work.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::jsonio::rational_to_string;
use crate::qseries::{colored_partition_series, QSeries};
use crate::report::{IdentityReport, Mismatch};
use crate::rootdata::{
    dot_act_ints, is_dominant_ints, positive_even_roots, positive_odd_roots, rho_sp_ints,
    two_rho_osp_ints, weyl_elements, Convention,
};
use crate::{Error, Result};

/// Largest rank supported by the packed term keys.
pub const MAX_RANK: usize = 6;

/// Which affine denominator to expand.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DenomType {
    Sp,
    Osp,
}

fn check_rank(n: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::ZeroRank);
    }
    if n > MAX_RANK {
        return Err(Error::RankCapExceeded { n, cap: MAX_RANK });
    }
    Ok(())
}

// Packed term key: coordinate i in bits [16i, 16i+16) biased by 0x8000,
// grade in the top 32 bits.
fn pack_key(coords: &[i64], grade: u32) -> u128 {
    debug_assert!(coords.len() <= MAX_RANK);
    let mut key = (grade as u128) << 96;
    for (i, &c) in coords.iter().enumerate() {
        debug_assert!((-0x8000..0x8000).contains(&c), "coordinate overflow");
        let biased = (c + 0x8000) as u128;
        key |= biased << (16 * i);
    }
    key
}

fn unpack_key(key: u128, n: usize) -> (Vec<i64>, u32) {
    let grade = (key >> 96) as u32;
    let coords = (0..n)
        .map(|i| (((key >> (16 * i)) & 0xffff) as i64) - 0x8000)
        .collect();
    (coords, grade)
}

fn staircase(coords: &[i64]) -> Vec<i64> {
    let mut s = Vec::with_capacity(coords.len());
    let mut acc = 0i64;
    for &c in coords {
        acc += c;
        s.push(acc);
    }
    s
}

/// A truncated formal character.
#[derive(Debug, Clone)]
pub struct FormalCharacter {
    n: usize,
    convention: Convention,
    trunc: u32,
    q_offset: BigRational,
    floors: Option<Vec<i64>>,
    terms: HashMap<u128, BigInt>,
}

impl FormalCharacter {
    /// The zero character, exact everywhere below `trunc`.
    pub fn zero(n: usize, convention: Convention, trunc: u32) -> Self {
        FormalCharacter {
            n,
            convention,
            trunc,
            q_offset: BigRational::zero(),
            floors: None,
            terms: HashMap::new(),
        }
    }

    /// A finite character from explicit terms (complete: no floors).
    pub fn polynomial(
        n: usize,
        convention: Convention,
        trunc: u32,
        terms: impl IntoIterator<Item = (Vec<i64>, u32, BigInt)>,
    ) -> Self {
        let mut out = FormalCharacter::zero(n, convention, trunc);
        for (coords, grade, coeff) in terms {
            out.add_term(&coords, grade, coeff);
        }
        out
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn convention(&self) -> Convention {
        self.convention
    }

    pub fn trunc(&self) -> u32 {
        self.trunc
    }

    pub fn q_offset(&self) -> &BigRational {
        &self.q_offset
    }

    pub fn with_q_offset(mut self, offset: BigRational) -> Self {
        self.q_offset = offset;
        self
    }

    pub fn floors(&self) -> Option<&[i64]> {
        self.floors.as_deref()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// True when the cell is inside the exactness region.
    pub fn guaranteed(&self, coords: &[i64], grade: u32) -> bool {
        if grade > self.trunc {
            return false;
        }
        match &self.floors {
            None => true,
            Some(f) => {
                let slack = 2 * (self.trunc - grade) as i64;
                staircase(coords)
                    .iter()
                    .zip(f)
                    .all(|(s, fl)| *s >= fl - slack)
            }
        }
    }

    /// Exact coefficient, or None when the cell lies outside the exactness
    /// region.
    pub fn coefficient(&self, coords: &[i64], grade: u32) -> Option<BigInt> {
        if !self.guaranteed(coords, grade) {
            return None;
        }
        Some(
            self.terms
                .get(&pack_key(coords, grade))
                .cloned()
                .unwrap_or_else(BigInt::zero),
        )
    }

    fn add_term(&mut self, coords: &[i64], grade: u32, coeff: BigInt) {
        if coeff.is_zero() || grade > self.trunc {
            return;
        }
        let key = pack_key(coords, grade);
        let entry = self.terms.entry(key).or_insert_with(BigInt::zero);
        *entry += coeff;
        if entry.is_zero() {
            self.terms.remove(&key);
        }
    }

    fn prune_to_region(&mut self) {
        if self.floors.is_none() {
            return;
        }
        let n = self.n;
        let trunc = self.trunc;
        let floors = self.floors.clone().unwrap();
        self.terms.retain(|key, _| {
            let (coords, grade) = unpack_key(*key, n);
            if grade > trunc {
                return false;
            }
            let slack = 2 * (trunc - grade) as i64;
            staircase(&coords)
                .iter()
                .zip(&floors)
                .all(|(s, fl)| *s >= fl - slack)
        });
    }

    fn check_compatible(&self, other: &FormalCharacter) -> Result<()> {
        if self.convention != other.convention {
            return Err(Error::ConventionMismatch(self.convention, other.convention));
        }
        if self.n != other.n {
            return Err(Error::RankMismatch(self.n, other.n));
        }
        Ok(())
    }

    /// Floors of the intersection region when combining two characters into
    /// one of truncation `t_new`.
    fn combined_floors(&self, other: &FormalCharacter, t_new: u32) -> Option<Vec<i64>> {
        let adjust = |fl: &Option<Vec<i64>>, t_old: u32| -> Option<Vec<i64>> {
            fl.as_ref().map(|f| {
                f.iter()
                    .map(|x| x + 2 * (t_new as i64 - t_old as i64))
                    .collect()
            })
        };
        match (
            adjust(&self.floors, self.trunc),
            adjust(&other.floors, other.trunc),
        ) {
            (None, None) => None,
            (Some(a), None) => Some(a),
            (None, Some(b)) => Some(b),
            (Some(a), Some(b)) => {
                Some(a.iter().zip(&b).map(|(x, y)| *x.max(y)).collect())
            }
        }
    }

    pub fn add(&self, other: &FormalCharacter) -> Result<FormalCharacter> {
        self.linear_combine(other, 1)
    }

    pub fn sub(&self, other: &FormalCharacter) -> Result<FormalCharacter> {
        self.linear_combine(other, -1)
    }

    fn linear_combine(&self, other: &FormalCharacter, sign: i64) -> Result<FormalCharacter> {
        self.check_compatible(other)?;
        if self.q_offset != other.q_offset {
            return Err(Error::InvalidParams(
                "cannot add characters with different q-offsets".into(),
            ));
        }
        let trunc = self.trunc.min(other.trunc);
        let floors = self.combined_floors(other, trunc);
        let mut out = FormalCharacter {
            n: self.n,
            convention: self.convention,
            trunc,
            q_offset: self.q_offset.clone(),
            floors,
            terms: HashMap::new(),
        };
        for (key, c) in &self.terms {
            let (coords, grade) = unpack_key(*key, self.n);
            out.add_term(&coords, grade, c.clone());
        }
        let s = BigInt::from(sign);
        for (key, c) in &other.terms {
            let (coords, grade) = unpack_key(*key, self.n);
            out.add_term(&coords, grade, c * &s);
        }
        out.prune_to_region();
        Ok(out)
    }

    /// Product of two characters. At most one factor may carry an exactness
    /// region; the other must be a finite (complete) character. Truncations
    /// combine as min, q-offsets add.
    pub fn mul(&self, other: &FormalCharacter) -> Result<FormalCharacter> {
        self.check_compatible(other)?;
        let (regioned, complete) = match (&self.floors, &other.floors) {
            (Some(_), Some(_)) => {
                return Err(Error::InvalidParams(
                    "cannot multiply two characters that both carry exactness regions".into(),
                ))
            }
            (Some(_), None) => (self, other),
            _ => (other, self),
        };
        let trunc = self.trunc.min(other.trunc);
        // New floors: f' = f + max_b (s_l(b) - 2 grade(b)) + 2(T' - T_regioned),
        // so that every contribution a = v - b needed for a guaranteed result
        // cell v lies inside the regioned factor's region.
        let floors = regioned.floors.as_ref().map(|f| {
            let mut adj = vec![i64::MIN; regioned.n];
            for key in complete.terms.keys() {
                let (coords, grade) = unpack_key(*key, complete.n);
                for (l, s) in staircase(&coords).iter().enumerate() {
                    adj[l] = adj[l].max(s - 2 * grade as i64);
                }
            }
            f.iter()
                .zip(&adj)
                .map(|(fl, a)| {
                    fl.saturating_add(*a)
                        .saturating_add(2 * (trunc as i64 - regioned.trunc as i64))
                })
                .collect::<Vec<i64>>()
        });
        let mut out = FormalCharacter {
            n: self.n,
            convention: self.convention,
            trunc,
            q_offset: &self.q_offset + &other.q_offset,
            floors,
            terms: HashMap::new(),
        };
        if complete.terms.is_empty() {
            out.floors = None;
            return Ok(out);
        }
        for (kb, cb) in &complete.terms {
            let (bcoords, bgrade) = unpack_key(*kb, complete.n);
            for (ka, ca) in &regioned.terms {
                let (acoords, agrade) = unpack_key(*ka, regioned.n);
                let grade = agrade + bgrade;
                if grade > trunc {
                    continue;
                }
                let coords: Vec<i64> = acoords
                    .iter()
                    .zip(&bcoords)
                    .map(|(x, y)| x + y)
                    .collect();
                out.add_term(&coords, grade, ca * cb);
            }
        }
        out.prune_to_region();
        Ok(out)
    }

    /// Multiplies by e^{lambda}: shifts every weight and the floors.
    pub fn shift_weight(&self, lambda: &[i64]) -> FormalCharacter {
        let shift = staircase(lambda);
        let floors = self
            .floors
            .as_ref()
            .map(|f| f.iter().zip(&shift).map(|(fl, s)| fl + s).collect());
        let mut terms = HashMap::with_capacity(self.terms.len());
        for (key, c) in &self.terms {
            let (coords, grade) = unpack_key(*key, self.n);
            let moved: Vec<i64> = coords.iter().zip(lambda).map(|(a, b)| a + b).collect();
            terms.insert(pack_key(&moved, grade), c.clone());
        }
        FormalCharacter {
            n: self.n,
            convention: self.convention,
            trunc: self.trunc,
            q_offset: self.q_offset.clone(),
            floors,
            terms,
        }
    }

    /// Multiplies by a univariate q-series with nonnegative integer
    /// exponents (weight-free terms).
    pub fn mul_univariate(&self, series: &QSeries) -> Result<FormalCharacter> {
        let mut poly_terms = Vec::new();
        for (e, c) in series.terms() {
            if !e.is_integer() || e.is_negative() {
                return Err(Error::InvalidParams(
                    "univariate factor must have nonnegative integer exponents".into(),
                ));
            }
            let d = u32::try_from(e.to_integer()).map_err(|_| {
                Error::InvalidParams("univariate exponent overflow".into())
            })?;
            poly_terms.push((vec![0i64; self.n], d, c.clone()));
        }
        let cutoff = series.cutoff();
        let t_b: u32 = if cutoff.is_integer() {
            let c = cutoff.to_integer();
            u32::try_from(c - BigInt::one()).unwrap_or(0)
        } else {
            u32::try_from(cutoff.floor().to_integer()).unwrap_or(0)
        };
        let poly = FormalCharacter::polynomial(self.n, self.convention, t_b, poly_terms);
        self.mul(&poly)
    }

    /// Terms of one q-grade as a sorted weight -> coefficient map.
    pub fn grade_slice(&self, grade: u32) -> std::collections::BTreeMap<Vec<i64>, BigInt> {
        let mut out = std::collections::BTreeMap::new();
        for (key, c) in &self.terms {
            let (coords, g) = unpack_key(*key, self.n);
            if g == grade {
                out.insert(coords, c.clone());
            }
        }
        out
    }

    /// Sum of all coefficients at one grade (the dimension of that graded
    /// piece when all coefficients are multiplicities).
    pub fn total_at_grade(&self, grade: u32) -> BigInt {
        let mut total = BigInt::zero();
        for (key, c) in &self.terms {
            let (_, g) = unpack_key(*key, self.n);
            if g == grade {
                total += c;
            }
        }
        total
    }

    /// Sorted term list: (coords, grade, coeff) ordered by grade then
    /// coordinates.
    pub fn sorted_terms(&self) -> Vec<(Vec<i64>, u32, BigInt)> {
        let mut items: Vec<(Vec<i64>, u32, BigInt)> = self
            .terms
            .iter()
            .map(|(k, c)| {
                let (coords, grade) = unpack_key(*k, self.n);
                (coords, grade, c.clone())
            })
            .collect();
        items.sort_by(|a, b| (a.1, &a.0).cmp(&(b.1, &b.0)));
        items
    }

    /// First cell (ordered by grade, then coordinates) where the two
    /// characters differ on the intersection of their exactness regions.
    pub fn first_mismatch(&self, other: &FormalCharacter) -> Option<Mismatch> {
        let mut keys: Vec<u128> = self
            .terms
            .keys()
            .chain(other.terms.keys())
            .copied()
            .collect();
        keys.sort_by_cached_key(|k| {
            let (coords, grade) = unpack_key(*k, self.n);
            (grade, coords)
        });
        keys.dedup();
        for key in keys {
            let (coords, grade) = unpack_key(key, self.n);
            if !self.guaranteed(&coords, grade) || !other.guaranteed(&coords, grade) {
                continue;
            }
            let a = self.terms.get(&key).cloned().unwrap_or_else(BigInt::zero);
            let b = other.terms.get(&key).cloned().unwrap_or_else(BigInt::zero);
            if a != b {
                return Some(Mismatch {
                    coords,
                    grade,
                    lhs: a.to_string(),
                    rhs: b.to_string(),
                });
            }
        }
        None
    }

    /// Canonical JSON form: sorted term list, offset as "num/den".
    pub fn to_json(&self) -> serde_json::Value {
        let terms: Vec<serde_json::Value> = self
            .sorted_terms()
            .into_iter()
            .map(|(coords, grade, coeff)| {
                serde_json::json!([coords, grade, coeff.to_string()])
            })
            .collect();
        serde_json::json!({
            "n": self.n,
            "convention": match self.convention {
                Convention::CSide => "C",
                Convention::BSide => "B",
            },
            "trunc": self.trunc,
            "offset": rational_to_string(&self.q_offset),
            "floors": self.floors,
            "terms": terms,
        })
    }
}

// ---------------------------------------------------------------------------
// Dense product grid for denominator expansions.
// ---------------------------------------------------------------------------

// One factor of an affine denominator: (1 - e^w q^g)^{-1} for bosonic
// directions, (1 + e^w q^g) for fermionic ones, (1 - e^w q^g) for forward
// (non-inverted) multiplication.
enum Factor {
    GeometricInverse { w: Vec<i64>, g: u32 },
    Binomial { w: Vec<i64>, g: u32, sign: i64 },
}

/// Dense (staircase-indexed) accumulation grid. Cell (v, d) lives at the
/// staircase point s(v) with f_l - 2(T-d) <= s_l <= 2d; everything outside
/// is either unreachable from e^0 or outside the exactness region.
struct Grid {
    n: usize,
    trunc: u32,
    floors: Vec<i64>,
    lo: Vec<Vec<i64>>,
    dims: Vec<Vec<usize>>,
    grade_offset: Vec<usize>,
    data: Vec<BigInt>,
}

impl Grid {
    fn new(n: usize, trunc: u32, floors: &[i64]) -> Result<Grid> {
        if floors.iter().any(|&f| f > 0) {
            return Err(Error::InvalidParams(
                "exactness floors must be nonpositive (the expansion starts at e^0)".into(),
            ));
        }
        let mut lo = Vec::new();
        let mut dims = Vec::new();
        let mut grade_offset = Vec::new();
        let mut total = 0usize;
        for d in 0..=trunc {
            let slack = 2 * (trunc - d) as i64;
            let ceil = 2 * d as i64;
            let lo_d: Vec<i64> = floors.iter().map(|f| f - slack).collect();
            let dims_d: Vec<usize> = lo_d
                .iter()
                .map(|l| usize::try_from(ceil - l + 1).unwrap_or(0))
                .collect();
            grade_offset.push(total);
            total += dims_d.iter().product::<usize>();
            lo.push(lo_d);
            dims.push(dims_d);
        }
        let mut data = vec![BigInt::zero(); total];
        // start from 1 = e^0 q^0
        let start = Grid::index_static(&lo, &dims, &grade_offset, &vec![0i64; n], 0)
            .expect("origin inside grid");
        data[start] = BigInt::one();
        Ok(Grid {
            n,
            trunc,
            floors: floors.to_vec(),
            lo,
            dims,
            grade_offset,
            data,
        })
    }

    fn index_static(
        lo: &[Vec<i64>],
        dims: &[Vec<usize>],
        grade_offset: &[usize],
        s: &[i64],
        d: u32,
    ) -> Option<usize> {
        let d = d as usize;
        let mut idx = 0usize;
        for (l, sv) in s.iter().enumerate() {
            let rel = sv - lo[d][l];
            if rel < 0 || rel as usize >= dims[d][l] {
                return None;
            }
            idx = idx * dims[d][l] + rel as usize;
        }
        Some(grade_offset[d] + idx)
    }

    fn index(&self, s: &[i64], d: u32) -> Option<usize> {
        if d > self.trunc {
            return None;
        }
        Grid::index_static(&self.lo, &self.dims, &self.grade_offset, s, d)
    }

    fn apply(&mut self, factor: &Factor) {
        match factor {
            Factor::GeometricInverse { w, g } => self.mul_geometric(w, *g),
            Factor::Binomial { w, g, sign } => self.mul_binomial(w, *g, *sign),
        }
    }

    // out[c] = in[c] + out[c - (w, g)]: ascending grades; for g = 0 the
    // source has componentwise larger staircase (w is a negative root), so
    // descending staircase order within a grade visits sources first.
    fn mul_geometric(&mut self, w: &[i64], g: u32) {
        let sw = staircase(w);
        let n = self.n;
        let mut s = vec![0i64; n];
        for d in 0..=self.trunc {
            if d < g {
                continue;
            }
            let dims = self.dims[d as usize].clone();
            let lo = self.lo[d as usize].clone();
            let count: usize = dims.iter().product();
            for flat in 0..count {
                // descending enumeration of the staircase box
                let mut rem = flat;
                for l in (0..n).rev() {
                    let pos = rem % dims[l];
                    rem /= dims[l];
                    s[l] = lo[l] + (dims[l] - 1 - pos) as i64;
                }
                let src: Vec<i64> = s.iter().zip(&sw).map(|(a, b)| a - b).collect();
                if let Some(si) = self.index(&src, d - g) {
                    if !self.data[si].is_zero() {
                        let add = self.data[si].clone();
                        let ti = self.index(&s, d).expect("target inside grid");
                        self.data[ti] += add;
                    }
                }
            }
        }
    }

    // out[c] = in[c] + sign * in[c - (w, g)]: descending grades; for g = 0
    // ascending staircase order reads the source before it is overwritten.
    fn mul_binomial(&mut self, w: &[i64], g: u32, sign: i64) {
        let sw = staircase(w);
        let n = self.n;
        let sign = BigInt::from(sign);
        let mut s = vec![0i64; n];
        for d in (g..=self.trunc).rev() {
            let dims = self.dims[d as usize].clone();
            let lo = self.lo[d as usize].clone();
            let count: usize = dims.iter().product();
            for flat in 0..count {
                let mut rem = flat;
                for l in (0..n).rev() {
                    let pos = rem % dims[l];
                    rem /= dims[l];
                    s[l] = lo[l] + pos as i64;
                }
                let src: Vec<i64> = s.iter().zip(&sw).map(|(a, b)| a - b).collect();
                if let Some(si) = self.index(&src, d - g) {
                    if !self.data[si].is_zero() {
                        let add = &self.data[si] * &sign;
                        let ti = self.index(&s, d).expect("target inside grid");
                        self.data[ti] += add;
                    }
                }
            }
        }
    }

    fn extract(&self, convention: Convention) -> FormalCharacter {
        let mut terms = HashMap::new();
        let n = self.n;
        let mut s = vec![0i64; n];
        let mut coords = vec![0i64; n];
        for d in 0..=self.trunc {
            let dims = &self.dims[d as usize];
            let lo = &self.lo[d as usize];
            let count: usize = dims.iter().product();
            for flat in 0..count {
                let idx = self.grade_offset[d as usize] + flat;
                if self.data[idx].is_zero() {
                    continue;
                }
                let mut rem = flat;
                for l in (0..n).rev() {
                    let pos = rem % dims[l];
                    rem /= dims[l];
                    s[l] = lo[l] + pos as i64;
                }
                let mut prev = 0i64;
                for l in 0..n {
                    coords[l] = s[l] - prev;
                    prev = s[l];
                }
                terms.insert(pack_key(&coords, d), self.data[idx].clone());
            }
        }
        FormalCharacter {
            n,
            convention,
            trunc: self.trunc,
            q_offset: BigRational::zero(),
            floors: Some(self.floors.clone()),
            terms,
        }
    }
}

// Factor lists. The affine denominator of sp(2n) is
//   R_sp = prod_{j>=1} (1-q^j)^n prod_{alpha>0} (1-e^alpha q^j)(1-e^{-alpha} q^{j-1}),
// and the osp(1|2n) one divides out the fermionic factors
//   R_osp^{-1} = R_sp^{-1} prod_{alpha odd>0} prod_{j>=1} (1+e^alpha q^j)(1+e^{-alpha} q^{j-1}).
// Only factors whose leading move has grade <= trunc can contribute.
fn denominator_inverse_factors(ty: DenomType, n: usize, trunc: u32) -> Vec<Factor> {
    let mut factors = Vec::new();
    let neg = |alpha: &[i64]| alpha.iter().map(|c| -c).collect::<Vec<i64>>();
    for alpha in positive_even_roots(n) {
        for j in 1..=trunc + 1 {
            if j - 1 <= trunc {
                factors.push(Factor::GeometricInverse {
                    w: neg(&alpha),
                    g: j - 1,
                });
            }
            if j <= trunc {
                factors.push(Factor::GeometricInverse {
                    w: alpha.clone(),
                    g: j,
                });
            }
        }
    }
    for j in 1..=trunc {
        for _ in 0..n {
            factors.push(Factor::GeometricInverse {
                w: vec![0; n],
                g: j,
            });
        }
    }
    if let DenomType::Osp = ty {
        for alpha in positive_odd_roots(n) {
            for j in 1..=trunc + 1 {
                if j - 1 <= trunc {
                    factors.push(Factor::Binomial {
                        w: neg(&alpha),
                        g: j - 1,
                        sign: 1,
                    });
                }
                if j <= trunc {
                    factors.push(Factor::Binomial {
                        w: alpha.clone(),
                        g: j,
                        sign: 1,
                    });
                }
            }
        }
    }
    factors
}

fn denominator_forward_factors(n: usize, trunc: u32) -> Vec<Factor> {
    let mut factors = Vec::new();
    let neg = |alpha: &[i64]| alpha.iter().map(|c| -c).collect::<Vec<i64>>();
    for alpha in positive_even_roots(n) {
        for j in 1..=trunc + 1 {
            if j - 1 <= trunc {
                factors.push(Factor::Binomial {
                    w: neg(&alpha),
                    g: j - 1,
                    sign: -1,
                });
            }
            if j <= trunc {
                factors.push(Factor::Binomial {
                    w: alpha.clone(),
                    g: j,
                    sign: -1,
                });
            }
        }
    }
    for j in 1..=trunc {
        for _ in 0..n {
            factors.push(Factor::Binomial {
                w: vec![0; n],
                g: j,
                sign: -1,
            });
        }
    }
    factors
}

/// Staircase floors of the box that carries the theta sum at this
/// truncation: each coordinate m satisfies m(m+1)/2 <= trunc, so the most
/// negative coordinate is the smallest m with that property.
pub fn theta_support_floors(n: usize, trunc: u32) -> Vec<i64> {
    let mut lo = 0i64;
    while (lo - 1) * lo / 2 <= trunc as i64 {
        lo -= 1;
    }
    (1..=n as i64).map(|l| lo * l).collect()
}

/// Default exactness floors for stand-alone denominator and Verma
/// characters: a symmetric staircase of width 2(trunc + 2) per coordinate.
pub fn default_floors(n: usize, trunc: u32) -> Vec<i64> {
    let w = 2 * (trunc as i64 + 2);
    (1..=n as i64).map(|l| -w * l).collect()
}

/// Expansion of the inverse affine denominator with explicit exactness
/// floors. The constant term (weight 0, grade 0) is 1.
pub fn denominator_inverse_in(
    ty: DenomType,
    n: usize,
    trunc: u32,
    floors: &[i64],
) -> Result<FormalCharacter> {
    check_rank(n)?;
    if floors.len() != n {
        return Err(Error::InvalidParams("floors must have length n".into()));
    }
    let mut grid = Grid::new(n, trunc, floors)?;
    for factor in denominator_inverse_factors(ty, n, trunc) {
        grid.apply(&factor);
    }
    Ok(grid.extract(Convention::CSide))
}

/// Inverse affine denominator with the default floors.
pub fn denominator_inverse(ty: DenomType, n: usize, trunc: u32) -> Result<FormalCharacter> {
    denominator_inverse_in(ty, n, trunc, &default_floors(n, trunc))
}

/// The theta-like sum over the weight lattice,
/// sum_{lambda in Z^n} e^lambda q^{(lambda | lambda + 2 rho_odd)} with
/// exponent sum_i m_i (m_i + 1)/2, restricted to exponents <= trunc.
/// Complete: the support is finite.
pub fn theta_sum(n: usize, trunc: u32) -> Result<FormalCharacter> {
    check_rank(n)?;
    let mut out = FormalCharacter::zero(n, Convention::CSide, trunc);
    let mut coords = vec![0i64; n];
    fn rec(
        out: &mut FormalCharacter,
        coords: &mut Vec<i64>,
        pos: usize,
        used: i64,
        trunc: i64,
    ) {
        if pos == coords.len() {
            out.add_term(&coords.clone(), used as u32, BigInt::one());
            return;
        }
        let mut m = 0i64;
        loop {
            let cost = m * (m + 1) / 2;
            if used + cost > trunc {
                break;
            }
            coords[pos] = m;
            rec(out, coords, pos + 1, used + cost, trunc);
            m += 1;
        }
        let mut m = -1i64;
        loop {
            let cost = m * (m + 1) / 2;
            if used + cost > trunc {
                break;
            }
            coords[pos] = m;
            rec(out, coords, pos + 1, used + cost, trunc);
            m -= 1;
        }
        coords[pos] = 0;
    }
    rec(&mut out, &mut coords, 0, 0, trunc as i64);
    Ok(out)
}

/// Checks the super-denominator identity
/// R_osp^{-1} R_sp prod_{j<=trunc}(1-q^j)^n = theta_sum term by term below
/// the truncation, on a staircase region containing the theta support.
pub fn verify_triple_product(n: usize, trunc: u32) -> Result<IdentityReport> {
    check_rank(n)?;
    // floors two staircase steps below the theta box so that spurious
    // support just outside the box would also be caught
    let floors: Vec<i64> = theta_support_floors(n, trunc)
        .iter()
        .map(|f| f - 2)
        .collect();
    let mut lhs = denominator_inverse_in(DenomType::Osp, n, trunc, &floors)?;
    // R_sp, followed by the extra Euler product prod_{j<=trunc}(1-q^j)^n.
    let mut forward = denominator_forward_factors(n, trunc);
    for j in 1..=trunc {
        for _ in 0..n {
            forward.push(Factor::Binomial {
                w: vec![0; n],
                g: j,
                sign: -1,
            });
        }
    }
    for factor in forward {
        let (w, g, sign) = match factor {
            Factor::Binomial { w, g, sign } => (w, g, sign),
            _ => unreachable!(),
        };
        let poly = FormalCharacter::polynomial(
            n,
            Convention::CSide,
            trunc,
            [
                (vec![0i64; n], 0u32, BigInt::one()),
                (w, g, BigInt::from(sign)),
            ],
        );
        lhs = lhs.mul(&poly)?;
    }
    let rhs = theta_sum(n, trunc)?;
    let mismatch = lhs.first_mismatch(&rhs);
    Ok(IdentityReport::new(
        "triple-product",
        serde_json::json!({ "n": n }),
        trunc,
        mismatch,
    ))
}

/// Grade-0 expansion of prod_d (1 - e^{-d})^{-1} over positive directions
/// d (every partial sum s_l(d) must be nonnegative, which is what makes
/// the staircase floors sound), exact on the given floors. This is the
/// denominator of a finite Weyl character formula for any root system
/// whose positive roots fit the staircase cone.
pub fn inverse_root_product(
    n: usize,
    directions: &[Vec<i64>],
    floors: &[i64],
) -> Result<FormalCharacter> {
    check_rank(n)?;
    if floors.len() != n {
        return Err(Error::InvalidParams("floors must have length n".into()));
    }
    for d in directions {
        let stair = staircase(d);
        if d.len() != n || stair.iter().any(|s| *s < 0) || d.iter().all(|c| *c == 0) {
            return Err(Error::InvalidParams(format!(
                "direction {d:?} is not in the positive staircase cone"
            )));
        }
    }
    let mut grid = Grid::new(n, 0, floors)?;
    for d in directions {
        let w: Vec<i64> = d.iter().map(|c| -c).collect();
        grid.apply(&Factor::GeometricInverse { w, g: 0 });
    }
    Ok(grid.extract(Convention::CSide))
}

/// Verma module character ch M^k(lambda) = e^lambda / R, exact on the
/// region with the given floors.
pub fn verma_character_in(
    ty: DenomType,
    lambda: &[i64],
    trunc: u32,
    floors: &[i64],
) -> Result<FormalCharacter> {
    check_rank(lambda.len())?;
    let shifted_floors: Vec<i64> = floors
        .iter()
        .zip(staircase(lambda))
        .map(|(f, s)| f - s)
        .collect();
    let denom = denominator_inverse_in(ty, lambda.len(), trunc, &shifted_floors)?;
    Ok(denom.shift_weight(lambda))
}

pub fn verma_character(ty: DenomType, lambda: &[i64], trunc: u32) -> Result<FormalCharacter> {
    let floors: Vec<i64> = default_floors(lambda.len(), trunc)
        .iter()
        .zip(staircase(lambda))
        .map(|(f, s)| f + s)
        .collect();
    verma_character_in(ty, lambda, trunc, &floors)
}

/// The alternating Weyl numerator sum_w (-1)^{l(w)} e^{w . mu} at grade 0
/// (dot action with rho_sp for Sp, rho_osp for Osp).
pub fn weyl_numerator(ty: DenomType, mu: &[i64], trunc: u32) -> Result<FormalCharacter> {
    let n = mu.len();
    check_rank(n)?;
    let two_rho: Vec<i64> = match ty {
        DenomType::Sp => rho_sp_ints(n).iter().map(|r| 2 * r).collect(),
        DenomType::Osp => two_rho_osp_ints(n),
    };
    let mut terms = Vec::new();
    for w in weyl_elements(n)? {
        let moved = dot_act_ints(&w, mu, &two_rho);
        terms.push((moved, 0u32, BigInt::from(w.det() as i64)));
    }
    Ok(FormalCharacter::polynomial(
        n,
        Convention::CSide,
        trunc,
        terms,
    ))
}

/// Weyl (local) module character
/// ch V^k(mu) = sum_w (-1)^{l(w)} ch M^k(w(mu + rho) - rho), mu dominant.
/// The grade-0 slice is the finite character of E_mu.
pub fn weyl_module_character_in(
    ty: DenomType,
    mu: &[i64],
    trunc: u32,
    floors: &[i64],
) -> Result<FormalCharacter> {
    let n = mu.len();
    check_rank(n)?;
    if !is_dominant_ints(mu) {
        return Err(Error::NotDominant(format!("{mu:?}")));
    }
    let numerator = weyl_numerator(ty, mu, trunc)?;
    // Denominator floors compensate the largest staircase over numerator
    // terms so the product is exact on the requested floors.
    let mut max_stair = vec![i64::MIN; n];
    for (coords, _, _) in numerator.sorted_terms() {
        for (l, s) in staircase(&coords).iter().enumerate() {
            max_stair[l] = max_stair[l].max(*s);
        }
    }
    let denom_floors: Vec<i64> = floors
        .iter()
        .zip(&max_stair)
        .map(|(f, m)| f - m)
        .collect();
    let denom = denominator_inverse_in(ty, n, trunc, &denom_floors)?;
    denom.mul(&numerator)
}

/// Weyl module character with floors wide enough to contain the finite
/// character of E_mu (all weights of E_mu lie in the convex hull of W mu).
pub fn weyl_module_character(ty: DenomType, mu: &[i64], trunc: u32) -> Result<FormalCharacter> {
    let n = mu.len();
    let s = staircase(mu);
    let floors: Vec<i64> = (0..n)
        .map(|l| -s[l] - 2 * (trunc as i64 + 1))
        .collect();
    weyl_module_character_in(ty, mu, trunc, &floors)
}

/// Drinfeld-Sokolov specialization of a finite character: each weight v
/// maps to q^{-(v | rho_check)}, the whole series is multiplied by
/// q^{prefactor} / prod_{j<=trunc}(1-q^j)^n.
///
/// The input must be complete (it is R ch M, a finite object; for a Verma
/// module this is just e^mu).
pub fn ds_specialize(
    input: &FormalCharacter,
    prefactor: &BigRational,
    n: usize,
    trunc: u32,
) -> Result<QSeries> {
    if input.floors.is_some() {
        return Err(Error::InvalidParams(
            "ds_specialize expects a complete (finite) character".into(),
        ));
    }
    if input.n != n {
        return Err(Error::RankMismatch(input.n, n));
    }
    let rho_check = two_rho_osp_ints(n); // = rho_check coordinates
    let mut exponents: Vec<(BigRational, BigInt)> = Vec::new();
    for (coords, grade, coeff) in input.sorted_terms() {
        // (v | rho_check) = (1/2) * dot(v, rho_check) on the C side
        let dot: i64 = coords.iter().zip(&rho_check).map(|(a, b)| a * b).sum();
        let pairing = BigRational::new(BigInt::from(dot), BigInt::from(2));
        let e = BigRational::from_integer(BigInt::from(grade)) - pairing
            + prefactor
            + input.q_offset.clone();
        exponents.push((e, coeff));
    }
    if exponents.is_empty() {
        return Ok(QSeries::zero_int(trunc + 1));
    }
    let min_e = exponents.iter().map(|(e, _)| e.clone()).min().unwrap();
    let cutoff = &min_e + BigRational::from_integer(BigInt::from(trunc + 1));
    let mut poly = QSeries::zero(cutoff);
    for (e, c) in exponents {
        poly.add_term(e, c);
    }
    Ok(poly.mul(&colored_partition_series(n, trunc)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn int(v: i64) -> BigInt {
        BigInt::from(v)
    }

    #[test]
    fn denominator_constant_term_is_one() {
        for n in 1..=3 {
            for ty in [DenomType::Sp, DenomType::Osp] {
                let d = denominator_inverse(ty, n, 2).unwrap();
                assert_eq!(d.coefficient(&vec![0; n], 0), Some(int(1)));
            }
        }
    }

    #[test]
    fn denominator_sp_rank1_grade0_is_geometric() {
        // grade-0 slice of 1/R_sp at n=1: sum_{m>=0} e^{-2m e_1}
        let d = denominator_inverse_in(DenomType::Sp, 1, 0, &[-9]).unwrap();
        for m in 0..=4i64 {
            assert_eq!(d.coefficient(&[-2 * m], 0), Some(int(1)), "m={m}");
            assert_eq!(d.coefficient(&[-2 * m - 1], 0), Some(int(0)));
        }
    }

    #[test]
    fn denominator_osp_rank1_grade0_has_fermionic_factor() {
        // (1 + e^{-e_1}) sum_{m>=0} e^{-2m e_1}: every nonpositive coordinate
        // appears exactly once
        let d = denominator_inverse_in(DenomType::Osp, 1, 0, &[-9]).unwrap();
        for c in -8..=0i64 {
            assert_eq!(d.coefficient(&[c], 0), Some(int(1)), "c={c}");
        }
        // unreachable above the starting weight, so an exact zero
        assert_eq!(d.coefficient(&[1], 0), Some(int(0)));
    }

    #[test]
    fn theta_rank1_small() {
        let t = theta_sum(1, 1).unwrap();
        // m(m+1)/2 <= 1: m in {-2, -1, 0, 1}; grades 1, 0, 0, 1
        assert_eq!(t.coefficient(&[0], 0), Some(int(1)));
        assert_eq!(t.coefficient(&[-1], 0), Some(int(1)));
        assert_eq!(t.coefficient(&[1], 1), Some(int(1)));
        assert_eq!(t.coefficient(&[-2], 1), Some(int(1)));
        assert_eq!(t.coefficient(&[2], 1), Some(int(0)));
        assert_eq!(t.num_terms(), 4);
    }

    #[test]
    fn triple_product_small_ranks() {
        for (n, trunc) in [(1u32, 6u32), (2, 4)] {
            let report = verify_triple_product(n as usize, trunc).unwrap();
            assert!(report.passed(), "triple product failed: {report:?}");
        }
    }

    #[test]
    fn verma_highest_weight_and_first_step() {
        let v = verma_character(DenomType::Sp, &[0], 2).unwrap();
        assert_eq!(v.coefficient(&[0], 0), Some(int(1)));
        assert_eq!(v.coefficient(&[-2], 0), Some(int(1)));
        let v = verma_character(DenomType::Osp, &[0], 2).unwrap();
        assert_eq!(v.coefficient(&[-1], 0), Some(int(1)));
        let v = verma_character(DenomType::Sp, &[3, 1], 2).unwrap();
        assert_eq!(v.coefficient(&[3, 1], 0), Some(int(1)));
    }

    #[test]
    fn weyl_module_trivial_grade0() {
        let v = weyl_module_character(DenomType::Sp, &[0, 0], 2).unwrap();
        let slice = v.grade_slice(0);
        assert_eq!(slice.len(), 1);
        assert_eq!(slice[&vec![0, 0]], int(1));
        let v = weyl_module_character(DenomType::Osp, &[0], 2).unwrap();
        let slice = v.grade_slice(0);
        assert_eq!(slice.len(), 1);
    }

    #[test]
    fn weyl_module_standard_sp4() {
        // E_{omega_1} of sp(4) is the 4-dimensional standard module
        let v = weyl_module_character(DenomType::Sp, &[1, 0], 0).unwrap();
        assert_eq!(v.total_at_grade(0), int(4));
    }

    #[test]
    fn weyl_module_rejects_non_dominant() {
        assert!(matches!(
            weyl_module_character(DenomType::Sp, &[0, 1], 1),
            Err(Error::NotDominant(_))
        ));
    }

    #[test]
    fn ds_specialize_partition_function() {
        // input e^0, prefactor 0, n=1: 1/prod(1-q^j)
        let one = FormalCharacter::polynomial(
            1,
            Convention::CSide,
            6,
            [(vec![0i64], 0u32, int(1))],
        );
        let s = ds_specialize(&one, &BigRational::zero(), 1, 6).unwrap();
        let expect = [1i64, 1, 2, 3, 5, 7, 11];
        for (d, e) in expect.iter().enumerate() {
            let key = BigRational::from_integer(BigInt::from(d as i64));
            assert_eq!(s.coefficient(&key), int(*e), "grade {d}");
        }
    }

    #[test]
    fn ds_specialize_offset_is_prefactor() {
        let one = FormalCharacter::polynomial(
            1,
            Convention::CSide,
            4,
            [(vec![0i64], 0u32, int(1))],
        );
        let pre = BigRational::new(2.into(), 3.into());
        let s = ds_specialize(&one, &pre, 1, 4).unwrap();
        assert_eq!(s.leading_exponent(), Some(&pre));
    }

    #[test]
    fn sp_denominator_times_inverse_is_one() {
        // R_sp * (1/R_sp) = 1 symbolically at small truncation
        for trunc in [0u32, 3, 6] {
            let floors = vec![-(2 * trunc as i64 + 6)];
            let mut prod = denominator_inverse_in(DenomType::Sp, 1, trunc, &floors).unwrap();
            for factor in denominator_forward_factors(1, trunc) {
                let (w, g, sign) = match factor {
                    Factor::Binomial { w, g, sign } => (w, g, sign),
                    _ => unreachable!(),
                };
                let poly = FormalCharacter::polynomial(
                    1,
                    Convention::CSide,
                    trunc,
                    [
                        (vec![0i64], 0u32, BigInt::one()),
                        (w, g, BigInt::from(sign)),
                    ],
                );
                prod = prod.mul(&poly).unwrap();
            }
            let one = FormalCharacter::polynomial(
                1,
                Convention::CSide,
                trunc,
                [(vec![0i64], 0u32, int(1))],
            );
            assert!(prod.first_mismatch(&one).is_none(), "trunc {trunc}");
        }
    }

    #[test]
    fn region_guarantee_is_reported() {
        let d = denominator_inverse_in(DenomType::Sp, 1, 1, &[-4]).unwrap();
        // inside the region at top grade
        assert!(d.guaranteed(&[-4], 1));
        // below the floor at top grade
        assert!(!d.guaranteed(&[-5], 1));
        assert_eq!(d.coefficient(&[-7], 1), None);
        // the slack widens the region at lower grades
        assert!(d.guaranteed(&[-5], 0));
    }

    #[test]
    fn add_requires_matching_offsets() {
        let a = FormalCharacter::polynomial(1, Convention::CSide, 2, [(vec![0i64], 0u32, int(1))]);
        let b = a.clone().with_q_offset(BigRational::new(1.into(), 2.into()));
        assert!(a.add(&b).is_err());
        assert!(a.add(&a).is_ok());
    }

    #[test]
    fn mul_rejects_two_regions() {
        let a = denominator_inverse(DenomType::Sp, 1, 1).unwrap();
        assert!(a.mul(&a).is_err());
    }
}
