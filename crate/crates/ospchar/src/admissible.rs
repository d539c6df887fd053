//! Admissible levels, admissible weight sets for C_n and B_n, the
//! coordinate bijections between them, and the decomposition tables of the
//! simple affine osp(1|2n) vertex superalgebra.
//!
//! All weight sets are cut out by the same pattern: a dominance condition
//! plus one linear inequality against theta or theta_s_vee, with the branch
//! chosen by the parity of the denominator q (odd = principal, even =
//! coprincipal; r_vee = 2 for both B_n and C_n). In coordinates:
//!
//!   P^C(p, q odd):  integer partitions with c_1 <= p - (n+1)
//!   P^C(p, q even): integer partitions with c_1 + c_2 <= p - 2n
//!   P^B(p, q odd):  dominant (half-)integers with m_1 + m_2 <= p - (2n-1)
//!   P^B(p, q even): dominant (half-)integers with 2 m_1 <= p - 2n
//!   P^B_Q = P^B restricted to integer coordinates (the non-spinor class)
//!   P_check(p):     dominant coweights (equal-parity integers) with c_1 <= p - 2n
//!
//! For n = 1 the pairings against theta degenerate (both root systems are
//! A_1); the uniform reading used here is theta = 2 e_1 = theta_s_vee on
//! the C side and theta = eps_1, theta_s_vee = 2 eps_1 on the B side.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use serde::Serialize;

use crate::branching::LevelParam;
use crate::jsonio::rational_to_string;
use crate::report::IdentityReport;
use crate::rootdata::{AlgType, Convention, Weight};
use crate::{Error, Result};

/// The four weight-set families.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WeightSet {
    /// Admissible sp(2n) weights P^C(p, q).
    PC,
    /// Admissible so(2n+1) weights P^B(p, q), including spinor weights.
    PB,
    /// Non-spinor admissible so(2n+1) weights, P^B(p, q) intersected with
    /// the root lattice Z^n.
    PBQ,
    /// Dominant C_n coweights with (lambda | theta) <= p - 2n; the middle
    /// set of the embedding chain. Only the first parameter enters.
    PCheck,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum LevelKind {
    Principal,
    Coprincipal,
    NotAdmissible,
}

/// Classification of a shifted level k + h_vee = p/q.
#[derive(Debug, Clone, Serialize)]
pub struct AdmissibleLevel {
    pub ty: AlgType,
    pub n: usize,
    pub p: i64,
    pub q: i64,
    pub kind: LevelKind,
    pub nondegenerate: bool,
    pub coboundary: bool,
}

fn gcd(a: i64, b: i64) -> i64 {
    num_integer::Integer::gcd(&a, &b)
}

impl AdmissibleLevel {
    /// Classifies (p, q) for the given type: principal iff gcd(q, 2) = 1
    /// and p >= h_vee, coprincipal iff gcd(q, 2) = 2 and p >= h.
    /// Non-degenerate means q >= h (principal) or q >= 2 h_vee
    /// (coprincipal); coboundary means q = h (principal) or q = 2 times
    /// the dual algebra's h_vee (coprincipal).
    pub fn classify(ty: AlgType, n: usize, p: i64, q: i64) -> Result<AdmissibleLevel> {
        if n == 0 {
            return Err(Error::ZeroRank);
        }
        if matches!(ty, AlgType::Osp) {
            return Err(Error::InvalidParams(
                "admissible-level bookkeeping is for the B/C pair".into(),
            ));
        }
        let (h_vee, dual_h_vee) = match ty {
            AlgType::C => (n as i64 + 1, 2 * n as i64 - 1),
            AlgType::B => (2 * n as i64 - 1, n as i64 + 1),
            AlgType::Osp => unreachable!(),
        };
        let h = 2 * n as i64;
        let kind = if p <= 0 || q <= 0 || gcd(p, q) != 1 {
            LevelKind::NotAdmissible
        } else if q % 2 == 1 && p >= h_vee {
            LevelKind::Principal
        } else if q % 2 == 0 && p >= h {
            LevelKind::Coprincipal
        } else {
            LevelKind::NotAdmissible
        };
        let (nondegenerate, coboundary) = match kind {
            LevelKind::Principal => (q >= h, q == h),
            LevelKind::Coprincipal => (q >= 2 * h_vee, q == 2 * dual_h_vee),
            LevelKind::NotAdmissible => (false, false),
        };
        Ok(AdmissibleLevel {
            ty,
            n,
            p,
            q,
            kind,
            nondegenerate,
            coboundary,
        })
    }

    pub fn is_admissible(&self) -> bool {
        self.kind != LevelKind::NotAdmissible
    }

    /// The level itself, k = -h_vee + p/q.
    pub fn level(&self) -> BigRational {
        let h_vee = match self.ty {
            AlgType::C => BigRational::from_integer(BigInt::from(self.n as i64 + 1)),
            AlgType::B => BigRational::from_integer(BigInt::from(2 * self.n as i64 - 1)),
            AlgType::Osp => unreachable!(),
        };
        BigRational::new(BigInt::from(self.p), BigInt::from(self.q)) - h_vee
    }
}

fn validate_params(p: i64, q: i64) -> Result<()> {
    if p <= 0 || q <= 0 {
        return Err(Error::InvalidParams(format!(
            "weight-set parameters must be positive, got p={p}, q={q}"
        )));
    }
    if gcd(p, q) != 1 {
        return Err(Error::InvalidParams(format!(
            "weight-set parameters must be coprime, got p={p}, q={q}"
        )));
    }
    Ok(())
}

// Dominant length-n integer tuples c_1 >= ... >= c_n >= 0 with c_1 <= top,
// in lexicographically sorted order.
fn partitions_with_top(n: usize, top: i64) -> Vec<Vec<i64>> {
    if top < 0 {
        return Vec::new();
    }
    let mut out = Vec::new();
    let mut stack = vec![Vec::<i64>::new()];
    while let Some(prefix) = stack.pop() {
        if prefix.len() == n {
            out.push(prefix);
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

/// Enumerates a weight set, sorted by coordinates.
///
/// P^C and P_check weights are C-side; P^B and P^B_Q weights are B-side
/// (spinor members of P^B have half-integer coordinates).
pub fn enumerate_weights(set: WeightSet, p: i64, q: i64, n: usize) -> Result<Vec<Weight>> {
    if n == 0 {
        return Err(Error::ZeroRank);
    }
    validate_params(p, q)?;
    let h = 2 * n as i64;
    let out: Vec<Weight> = match set {
        WeightSet::PC => {
            let principal = q % 2 == 1;
            let cap = if principal {
                p - (n as i64 + 1)
            } else if n == 1 {
                p - 2
            } else {
                p - h
            };
            partitions_with_top(n, cap)
                .into_iter()
                .filter(|c| principal || n == 1 || c[0] + c[1] <= p - h)
                .map(|c| Weight::from_ints(&c, Convention::CSide))
                .collect()
        }
        WeightSet::PB | WeightSet::PBQ => {
            let principal = q % 2 == 1;
            let mut members: Vec<Vec<BigRational>> = Vec::new();
            // integer (non-spinor) class
            let int_cap = if principal {
                if n == 1 {
                    p - 1
                } else {
                    p - (h - 1)
                }
            } else {
                (p - h).div_euclid(2)
            };
            for c in partitions_with_top(n, int_cap) {
                let ok = if principal {
                    n == 1 || c[0] + c[1] <= p - (h - 1)
                } else {
                    2 * c[0] <= p - h
                };
                if ok {
                    members.push(
                        c.iter()
                            .map(|&x| BigRational::from_integer(x.into()))
                            .collect(),
                    );
                }
            }
            // spinor class: m_i = k_i + 1/2
            if matches!(set, WeightSet::PB) {
                let spin_cap = if principal {
                    if n == 1 {
                        // m_1 = k_1 + 1/2 <= p - 1, k_1 integer
                        p - 2
                    } else {
                        // m_1 + m_2 = k_1 + k_2 + 1 <= p - (2n - 1)
                        p - h
                    }
                } else {
                    // 2 m_1 = 2 k_1 + 1 <= p - 2n
                    (p - h - 1).div_euclid(2)
                };
                let half = BigRational::new(BigInt::one(), BigInt::from(2));
                for c in partitions_with_top(n, spin_cap) {
                    let ok = if principal {
                        n == 1 || c[0] + c[1] + 1 <= p - (h - 1)
                    } else {
                        2 * c[0] + 1 <= p - h
                    };
                    if ok {
                        members.push(
                            c.iter()
                                .map(|&x| BigRational::from_integer(BigInt::from(x)) + &half)
                                .collect(),
                        );
                    }
                }
            }
            members.sort();
            members
                .into_iter()
                .map(|c| Weight::new(c, Convention::BSide))
                .collect()
        }
        WeightSet::PCheck => {
            // dominant coweights: equal-parity integer tuples, c_1 <= p - 2n
            partitions_with_top(n, p - h)
                .into_iter()
                .filter(|c| c.iter().all(|x| (x - c[0]) % 2 == 0))
                .map(|c| Weight::from_ints(&c, Convention::CSide))
                .collect()
        }
    };
    Ok(out)
}

fn coordinate_set(weights: &[Weight]) -> Vec<Vec<BigRational>> {
    let mut coords: Vec<Vec<BigRational>> =
        weights.iter().map(|w| w.coords().to_vec()).collect();
    coords.sort();
    coords
}

/// Checks the coordinate-level bijections between C-side and B-side
/// admissible sets, and the embedding chain inclusions:
///
/// - P^C(p, 1) = P^B_Q(2p-1, 2p) as coordinate sets (the rescaling map is
///   the identity on coordinates),
/// - for odd p >= 2n, P^C(p, 2) = P^B_Q(p-1, p),
/// - P_check(p) is contained in the dominant integer weights with
///   c_1 <= p - 2n, which are contained in P^C(p, 1).
pub fn verify_bijections(n: usize, p: i64) -> Result<IdentityReport> {
    let params = serde_json::json!({ "n": n, "p": p });
    let mut checked = Vec::new();

    if p >= n as i64 + 1 {
        let lhs = coordinate_set(&enumerate_weights(WeightSet::PC, p, 1, n)?);
        let rhs = coordinate_set(&enumerate_weights(WeightSet::PBQ, 2 * p - 1, 2 * p, n)?);
        if lhs != rhs {
            return Ok(IdentityReport::failed_with_detail(
                "bijections",
                params,
                0,
                format!(
                    "P^C({p},1) has {} weights but P^B_Q({},{}) has {}",
                    lhs.len(),
                    2 * p - 1,
                    2 * p,
                    rhs.len()
                ),
            ));
        }
        checked.push("v=1");
    }

    if p % 2 == 1 && p >= 2 * n as i64 {
        let lhs = coordinate_set(&enumerate_weights(WeightSet::PC, p, 2, n)?);
        let rhs = coordinate_set(&enumerate_weights(WeightSet::PBQ, p - 1, p, n)?);
        if lhs != rhs {
            return Ok(IdentityReport::failed_with_detail(
                "bijections",
                params,
                0,
                format!("P^C({p},2) and P^B_Q({},{}) differ", p - 1, p),
            ));
        }
        checked.push("v=2");
    }

    // embedding chain: P_check(p) in {dominant, c_1 <= p-2n} in P^C(p,1)
    let chain_ok = {
        let check = enumerate_weights(WeightSet::PCheck, p, 1, n)?;
        let middle: Vec<Vec<i64>> = partitions_with_top(n, p - 2 * n as i64);
        let outer = coordinate_set(&enumerate_weights(WeightSet::PC, p, 1, n)?);
        let middle_rat: Vec<Vec<BigRational>> = middle
            .iter()
            .map(|c| {
                c.iter()
                    .map(|&x| BigRational::from_integer(x.into()))
                    .collect()
            })
            .collect();
        check
            .iter()
            .all(|w| middle_rat.contains(&w.coords().to_vec()))
            && middle_rat.iter().all(|c| outer.contains(c))
    };
    if !chain_ok {
        return Ok(IdentityReport::failed_with_detail(
            "bijections",
            params,
            0,
            "embedding chain inclusion failed".into(),
        ));
    }
    checked.push("embedding-chain");

    Ok(IdentityReport::verified("bijections", params, 0).with_detail(checked.join(",")))
}

/// Sector of a decomposition row.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SectorKind {
    Ordinary,
    Ramond,
}

/// One row of the decomposition table: the simple module labelled mu
/// decomposes as a sum over lambda of L_k(lambda) tensor L_ell(lambda, mu).
#[derive(Debug, Clone, Serialize)]
pub struct DecompositionRow {
    pub mu: Vec<String>,
    pub sector: SectorKind,
    /// (lambda, W-algebra label (lambda, mu)) pairs.
    pub summands: Vec<(Vec<i64>, (Vec<i64>, Vec<String>))>,
}

/// The full decomposition data for k = -(n+1) + u/v.
#[derive(Debug, Clone, Serialize)]
pub struct DecompositionTable {
    pub n: usize,
    pub u: i64,
    pub v: i64,
    pub k: String,
    pub ell: String,
    pub ell_classification: AdmissibleLevel,
    /// How the label sets are matched: the explicit coordinate bijection
    /// for v = 1, 2, or fusion-ring generation for general v.
    pub identification: String,
    pub lambda_alphabet: Vec<Vec<i64>>,
    pub pb_alphabet: Vec<Vec<String>>,
    pub pbq_alphabet: Vec<Vec<String>>,
    pub rows: Vec<DecompositionRow>,
}

fn format_coords(w: &Weight) -> Vec<String> {
    w.coords().iter().map(rational_to_string).collect()
}

/// Builds the decomposition table of L_k(osp(1|2n)) for k = -(n+1) + u/v:
/// ordinary simple modules are labelled by the non-spinor weights of P^B,
/// Ramond twisted ones by the spinor complement, and each decomposes over
/// the lambda alphabet P^C(u, v).
pub fn decomposition_table(n: usize, u: i64, v: i64) -> Result<DecompositionTable> {
    let k_level = AdmissibleLevel::classify(AlgType::C, n, u, v)?;
    if !k_level.is_admissible() {
        return Err(Error::InvalidParams(format!(
            "k = -(n+1) + {u}/{v} is not admissible for sp(2n) at n={n}"
        )));
    }
    let q_ell = 2 * u - v;
    if q_ell <= 0 {
        return Err(Error::InvalidParams(
            "the dual level denominator 2u - v must be positive".into(),
        ));
    }
    let ell_level = AdmissibleLevel::classify(AlgType::C, n, u, q_ell)?;
    if !ell_level.is_admissible() || !ell_level.nondegenerate {
        return Err(Error::InvalidParams(format!(
            "ell = -(n+1) + {u}/{q_ell} must be non-degenerate admissible (kind {:?}, nondegenerate {})",
            ell_level.kind, ell_level.nondegenerate
        )));
    }
    // ell from the duality map must agree with -(n+1) + u/(2u-v)
    let k = k_level.level();
    let lp = LevelParam::new(k.clone(), n)?;
    let ell = ell_level.level();
    assert_eq!(lp.ell()?, &ell);

    let lambda_alphabet: Vec<Vec<i64>> = enumerate_weights(WeightSet::PC, u, v, n)?
        .iter()
        .map(|w| w.to_ints().expect("P^C weights are integral"))
        .collect();
    // P^B(q, 2p) when ell is principal, P^B(q/2, p) when coprincipal.
    let (pb_p, pb_q) = match ell_level.kind {
        LevelKind::Principal => (q_ell, 2 * u),
        LevelKind::Coprincipal => (q_ell / 2, u),
        LevelKind::NotAdmissible => unreachable!(),
    };
    let pb = enumerate_weights(WeightSet::PB, pb_p, pb_q, n)?;
    let pbq = enumerate_weights(WeightSet::PBQ, pb_p, pb_q, n)?;

    let mut rows = Vec::new();
    for mu in &pb {
        let spinor = mu.to_ints().is_none();
        let mu_coords = format_coords(mu);
        let summands = lambda_alphabet
            .iter()
            .map(|lambda| (lambda.clone(), (lambda.clone(), mu_coords.clone())))
            .collect();
        rows.push(DecompositionRow {
            mu: mu_coords,
            sector: if spinor {
                SectorKind::Ramond
            } else {
                SectorKind::Ordinary
            },
            summands,
        });
    }

    Ok(DecompositionTable {
        n,
        u,
        v,
        k: rational_to_string(&k),
        ell: rational_to_string(&ell),
        ell_classification: ell_level,
        identification: if v == 1 || v == 2 {
            format!("explicit coordinate bijection (v = {v})")
        } else {
            "fusion-ring generation (no explicit bijection constructed)".to_string()
        },
        lambda_alphabet,
        pb_alphabet: pb.iter().map(format_coords).collect(),
        pbq_alphabet: pbq.iter().map(format_coords).collect(),
        rows,
    })
}

impl DecompositionTable {
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("table serialization cannot fail")
    }

    /// CSV with columns mu, sector, summands.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("mu,sector,summands\n");
        for row in &self.rows {
            let mu = row.mu.join(" ");
            let sector = match row.sector {
                SectorKind::Ordinary => "ordinary",
                SectorKind::Ramond => "ramond",
            };
            let summands: Vec<String> = row
                .summands
                .iter()
                .map(|(lambda, (l2, mu2))| {
                    format!(
                        "({})x({};{})",
                        lambda
                            .iter()
                            .map(|c| c.to_string())
                            .collect::<Vec<_>>()
                            .join(" "),
                        l2.iter()
                            .map(|c| c.to_string())
                            .collect::<Vec<_>>()
                            .join(" "),
                        mu2.join(" ")
                    )
                })
                .collect();
            out.push_str(&format!("{mu},{sector},{}\n", summands.join(";")));
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(weights: &[Weight]) -> Vec<Vec<i64>> {
        weights.iter().map(|w| w.to_ints().unwrap()).collect()
    }

    #[test]
    fn pc_examples() {
        // P^C(4,1) at n=2: c_1 <= 1
        let s = enumerate_weights(WeightSet::PC, 4, 1, 2).unwrap();
        assert_eq!(ints(&s), vec![vec![0, 0], vec![1, 0], vec![1, 1]]);
        // P^C(h_vee, 1) = {0}
        let s = enumerate_weights(WeightSet::PC, 3, 1, 2).unwrap();
        assert_eq!(ints(&s), vec![vec![0, 0]]);
    }

    #[test]
    fn pbq_example() {
        // P^B_Q(7, 8) at n=2: integers with 2 m_1 <= 3
        let s = enumerate_weights(WeightSet::PBQ, 7, 8, 2).unwrap();
        assert_eq!(ints(&s), vec![vec![0, 0], vec![1, 0], vec![1, 1]]);
    }

    #[test]
    fn pb_includes_spinors() {
        let s = enumerate_weights(WeightSet::PB, 7, 8, 2).unwrap();
        assert_eq!(s.len(), 6);
        let spinors: Vec<_> = s.iter().filter(|w| w.to_ints().is_none()).collect();
        assert_eq!(spinors.len(), 3);
        // (1/2,1/2), (3/2,1/2), (3/2,3/2)
        let half = BigRational::new(BigInt::one(), BigInt::from(2));
        assert!(spinors
            .iter()
            .any(|w| w.coords() == [half.clone(), half.clone()]));
    }

    #[test]
    fn parameters_validated() {
        assert!(enumerate_weights(WeightSet::PC, 4, 2, 2).is_err()); // gcd != 1
        assert!(enumerate_weights(WeightSet::PC, 0, 1, 2).is_err());
        assert!(enumerate_weights(WeightSet::PC, 4, -1, 2).is_err());
    }

    #[test]
    fn pc_cardinality_is_binomial() {
        // |P^C(p,1)| = C(p-1, n)
        fn binom(a: i64, b: i64) -> i64 {
            let mut r = 1i64;
            for i in 0..b {
                r = r * (a - i) / (i + 1);
            }
            r
        }
        for n in 1..=4usize {
            for p in (n as i64 + 1)..=12 {
                let s = enumerate_weights(WeightSet::PC, p, 1, n).unwrap();
                assert_eq!(s.len() as i64, binom(p - 1, n as i64), "n={n} p={p}");
            }
        }
    }

    #[test]
    fn every_enumerated_weight_satisfies_its_inequalities() {
        use crate::rootdata::bilinear;
        // re-check P^C(5,2) at n=2 against (lambda | theta_s_vee) <= p - h
        // computed through the bilinear form itself
        let theta_s_vee = Weight::from_ints(&[2, 2], Convention::CSide);
        for w in enumerate_weights(WeightSet::PC, 5, 2, 2).unwrap() {
            let pairing = bilinear(&w, &theta_s_vee).unwrap();
            assert!(pairing <= BigRational::from_integer(BigInt::from(5 - 4)));
        }
        // and P^B(7,8) against (mu | 2 eps_1) <= p - h
        let theta_s_vee_b = Weight::from_ints(&[2, 0], Convention::BSide);
        for w in enumerate_weights(WeightSet::PB, 7, 8, 2).unwrap() {
            let pairing = bilinear(&w, &theta_s_vee_b).unwrap();
            assert!(pairing <= BigRational::from_integer(BigInt::from(7 - 4)));
        }
    }

    #[test]
    fn bijections_hold_in_stated_ranges() {
        for n in 1..=4usize {
            for p in (n as i64 + 1)..=10 {
                let r = verify_bijections(n, p).unwrap();
                assert!(r.passed(), "n={n}, p={p}: {r:?}");
            }
            for p in (2 * n as i64..=11).filter(|p| p % 2 == 1) {
                let r = verify_bijections(n, p).unwrap();
                assert!(r.passed(), "odd p: n={n}, p={p}: {r:?}");
            }
        }
    }

    #[test]
    fn admissible_level_classification() {
        // k = 1 at n = 2: p/q = 4/1, principal, degenerate (q < h)
        let l = AdmissibleLevel::classify(AlgType::C, 2, 4, 1).unwrap();
        assert_eq!(l.kind, LevelKind::Principal);
        assert!(!l.nondegenerate);
        // ell for (2,4,1): p/q = 4/7: principal non-degenerate
        let l = AdmissibleLevel::classify(AlgType::C, 2, 4, 7).unwrap();
        assert_eq!(l.kind, LevelKind::Principal);
        assert!(l.nondegenerate);
        assert!(!l.coboundary);
        // coprincipal coboundary for C_2: q = 4n - 2 = 6
        let l = AdmissibleLevel::classify(AlgType::C, 2, 5, 6).unwrap();
        assert_eq!(l.kind, LevelKind::Coprincipal);
        assert!(l.nondegenerate);
        assert!(l.coboundary);
        // not admissible: p below h_vee
        let l = AdmissibleLevel::classify(AlgType::C, 2, 2, 1).unwrap();
        assert_eq!(l.kind, LevelKind::NotAdmissible);
        // gcd condition
        let l = AdmissibleLevel::classify(AlgType::C, 2, 4, 6).unwrap();
        assert_eq!(l.kind, LevelKind::NotAdmissible);
    }

    #[test]
    fn decomposition_table_vacuum_case() {
        let t = decomposition_table(2, 4, 1).unwrap();
        assert_eq!(t.k, "1");
        assert_eq!(t.ell, "-17/7");
        assert_eq!(t.lambda_alphabet.len(), 3);
        assert_eq!(t.pbq_alphabet.len(), 3);
        assert_eq!(t.pb_alphabet.len(), 6);
        let ramond: Vec<_> = t
            .rows
            .iter()
            .filter(|r| r.sector == SectorKind::Ramond)
            .collect();
        assert_eq!(ramond.len(), 3);
        for row in &t.rows {
            assert_eq!(row.summands.len(), 3);
        }
    }

    #[test]
    fn decomposition_table_single_summand() {
        // (n=2, u=3, v=1): k = 0, P^C(3,1) = {0}
        let t = decomposition_table(2, 3, 1).unwrap();
        assert_eq!(t.k, "0");
        assert_eq!(t.lambda_alphabet, vec![vec![0, 0]]);
    }

    #[test]
    fn decomposition_table_rejects_bad_parameters() {
        assert!(decomposition_table(2, 2, 1).is_err()); // k not admissible
        assert!(decomposition_table(2, 4, 2).is_err()); // gcd(4,2) != 1
    }
}
