//! Mixed volumes of boxes.
//!
//! For boxes `Vol(Σ λ_i K_i) = Π_j Σ_i λ_i w_ij`, so the mixed volume of
//! `K_1, …, K_n` is `perm(W) / n!` where row `r` of `W` holds the widths of
//! the `r`-th body. This is the reference route. The second route
//! differentiates the volume polynomial along each body and is used to
//! cross-check certificates.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::cubefam::{minkowski_combine, BoxBody};
use crate::diffop::{apply, op_from_box, SlabPolynomial};
use crate::error::{Error, Result};
use crate::exactlin::rational::{clear_denominators, factorial, sign_power};

/// Dimension envelope for permanent evaluation.
pub const MAX_PERMANENT_DIM: usize = 12;

/// A list of bodies with multiplicities summing to the ambient dimension.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawTuple", into = "RawTuple")]
pub struct BodyTuple {
    n: usize,
    entries: Vec<(BoxBody, usize)>,
}

#[derive(Serialize, Deserialize)]
struct RawEntry {
    body: BoxBody,
    multiplicity: usize,
}

#[derive(Serialize, Deserialize)]
struct RawTuple {
    n: usize,
    entries: Vec<RawEntry>,
}

impl TryFrom<RawTuple> for BodyTuple {
    type Error = Error;

    fn try_from(raw: RawTuple) -> Result<Self> {
        BodyTuple::new(
            raw.n,
            raw.entries
                .into_iter()
                .map(|e| (e.body, e.multiplicity))
                .collect(),
        )
    }
}

impl From<BodyTuple> for RawTuple {
    fn from(t: BodyTuple) -> Self {
        RawTuple {
            n: t.n,
            entries: t
                .entries
                .into_iter()
                .map(|(body, multiplicity)| RawEntry { body, multiplicity })
                .collect(),
        }
    }
}

fn check_parts(n: usize, parts: &[(&BoxBody, usize)]) -> Result<()> {
    for (b, m) in parts {
        if b.dim() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: b.dim(),
            });
        }
        if *m == 0 {
            return Err(Error::InvalidParameters("multiplicity must be at least 1".into()));
        }
    }
    let total: usize = parts.iter().map(|(_, m)| m).sum();
    if total != n {
        return Err(Error::InvalidParameters(format!(
            "multiplicities sum to {total}, expected {n}"
        )));
    }
    if n > MAX_PERMANENT_DIM {
        return Err(Error::InvalidParameters(format!(
            "dimension {n} exceeds the supported maximum {MAX_PERMANENT_DIM}"
        )));
    }
    Ok(())
}

impl BodyTuple {
    pub fn new(n: usize, entries: Vec<(BoxBody, usize)>) -> Result<Self> {
        let parts: Vec<(&BoxBody, usize)> = entries.iter().map(|(b, m)| (b, *m)).collect();
        check_parts(n, &parts)?;
        Ok(Self { n, entries })
    }

    /// One slot per body.
    pub fn from_bodies(bodies: Vec<BoxBody>) -> Result<Self> {
        let n = bodies.first().map_or(0, BoxBody::dim);
        Self::new(n, bodies.into_iter().map(|b| (b, 1)).collect())
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn entries(&self) -> &[(BoxBody, usize)] {
        &self.entries
    }

    fn parts(&self) -> Vec<(&BoxBody, usize)> {
        self.entries.iter().map(|(b, m)| (b, *m)).collect()
    }
}

/// Permanent of a square rational matrix by Ryser's formula with Gray-code
/// updates, after scaling rows to integers.
pub fn permanent(rows: &[Vec<BigRational>]) -> BigRational {
    let n = rows.len();
    if n == 0 {
        return BigRational::one();
    }
    let mut scale = BigInt::one();
    let a: Vec<Vec<BigInt>> = rows
        .iter()
        .map(|r| {
            assert_eq!(r.len(), n, "permanent needs a square matrix");
            let (ints, l) = clear_denominators(r);
            scale *= l;
            ints
        })
        .collect();

    // perm(A) = (-1)^n Σ_{S ⊆ cols} (-1)^{|S|} Π_i Σ_{j∈S} a_ij
    let mut row_sums = vec![BigInt::zero(); n];
    let mut total = BigInt::zero();
    let mut gray: u64 = 0;
    for step in 1u64..(1 << n) {
        let next = step ^ (step >> 1);
        let j = (gray ^ next).trailing_zeros() as usize;
        let adding = next >> j & 1 == 1;
        for (s, row) in row_sums.iter_mut().zip(&a) {
            if adding {
                *s += &row[j];
            } else {
                *s -= &row[j];
            }
        }
        gray = next;
        let prod: BigInt = row_sums.iter().product();
        if gray.count_ones() % 2 == n as u32 % 2 {
            total += prod;
        } else {
            total -= prod;
        }
    }
    BigRational::new(total, scale)
}

pub(crate) fn mixed_volume_parts(n: usize, parts: &[(&BoxBody, usize)]) -> BigRational {
    let rows: Vec<Vec<BigRational>> = parts
        .iter()
        .flat_map(|(b, m)| std::iter::repeat_n(b.widths().to_vec(), *m))
        .collect();
    permanent(&rows) / BigRational::from_integer(factorial(n))
}

pub(crate) fn mixed_volume_parts_via_derivatives(n: usize, parts: &[(&BoxBody, usize)]) -> Result<BigRational> {
    let mut ordered: Vec<&(&BoxBody, usize)> = parts.iter().collect();
    // high-degree operators first keep the intermediate polynomials small
    ordered.sort_by_key(|p| std::cmp::Reverse(p.1));
    let mut p = SlabPolynomial::volume(n);
    for (body, m) in ordered {
        p = apply(&op_from_box(body, *m)?, &p)?;
    }
    Ok(p.constant() / BigRational::from_integer(factorial(n)))
}

/// `V(K_1[m_1], …, K_r[m_r])` through the permanent of the width matrix.
pub fn mixed_volume(t: &BodyTuple) -> BigRational {
    mixed_volume_parts(t.n, &t.parts())
}

/// `V = (1/n!) D_{h_{K_1}} ⋯ D_{h_{K_n}} V` evaluated symbolically.
pub fn mixed_volume_via_derivatives(t: &BodyTuple) -> BigRational {
    mixed_volume_parts_via_derivatives(t.n, &t.parts())
        .expect("validated tuple has consistent dimensions")
}

/// Both sides of an inequality `lhs >= rhs`, evaluated exactly.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Comparison {
    pub lhs: BigRational,
    pub rhs: BigRational,
    pub holds: bool,
}

impl Comparison {
    fn at_least(lhs: BigRational, rhs: BigRational) -> Self {
        let holds = lhs >= rhs;
        Self { lhs, rhs, holds }
    }

    pub fn is_equality(&self) -> bool {
        self.lhs == self.rhs
    }
}

fn tail_parts(c: &[BoxBody]) -> impl Iterator<Item = (&BoxBody, usize)> {
    c.iter().map(|b| (b, 1))
}

/// `V(K,L,C…)² >= V(K,K,C…) V(L,L,C…)`.
pub fn af_check(k: &BoxBody, l: &BoxBody, c: &[BoxBody]) -> Result<Comparison> {
    let n = k.dim();
    if n < 2 || c.len() != n - 2 {
        return Err(Error::InvalidParameters(format!(
            "need n >= 2 and n - 2 mixing bodies, got n = {n} with {}",
            c.len()
        )));
    }
    let eval = |head: Vec<(&BoxBody, usize)>| -> Result<BigRational> {
        let parts: Vec<(&BoxBody, usize)> = head.into_iter().chain(tail_parts(c)).collect();
        check_parts(n, &parts)?;
        Ok(mixed_volume_parts(n, &parts))
    };
    let kl = eval(vec![(k, 1), (l, 1)])?;
    let kk = eval(vec![(k, 2)])?;
    let ll = eval(vec![(l, 2)])?;
    Ok(Comparison::at_least(&kl * &kl, kk * ll))
}

/// `V(K1[k],K2[l],C…)^{k+l} >= V(K1[k+l],C…)^k V(K2[k+l],C…)^l`.
pub fn iterated_af_check(
    k1: &BoxBody,
    k2: &BoxBody,
    k: usize,
    l: usize,
    c: &[BoxBody],
) -> Result<Comparison> {
    let n = k1.dim();
    if k == 0 || l == 0 || k + l > n || c.len() != n - k - l {
        return Err(Error::InvalidParameters(format!(
            "need k, l >= 1, k + l <= n and n - k - l mixing bodies (n = {n}, k = {k}, l = {l}, {} given)",
            c.len()
        )));
    }
    let eval = |head: Vec<(&BoxBody, usize)>| -> Result<BigRational> {
        let parts: Vec<(&BoxBody, usize)> = head.into_iter().chain(tail_parts(c)).collect();
        check_parts(n, &parts)?;
        Ok(mixed_volume_parts(n, &parts))
    };
    let mixed = eval(vec![(k1, k), (k2, l)])?;
    let pure1 = eval(vec![(k1, k + l)])?;
    let pure2 = eval(vec![(k2, k + l)])?;
    let pow = |q: &BigRational, e: usize| -> BigRational { num_traits::pow(q.clone(), e) };
    Ok(Comparison::at_least(
        pow(&mixed, k + l),
        pow(&pure1, k) * pow(&pure2, l),
    ))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolarizationCheck {
    pub lhs: BigRational,
    pub rhs: BigRational,
    pub equal: bool,
}

/// `V(R_1,…,R_k,tail) = (1/k!) Σ_{δ∈{0,1}^k} (-1)^{k+|δ|} V((Σ δ_r R_r)[k], tail)`.
///
/// The `δ = 0` term is the mixed volume of a point and vanishes; it is
/// still evaluated.
pub fn polarization_identity_check(r: &[BoxBody], tail: &[(BoxBody, usize)]) -> Result<PolarizationCheck> {
    let k = r.len();
    if k == 0 {
        return Err(Error::InvalidParameters("need at least one body to polarize".into()));
    }
    let n = r[0].dim();
    if k >= 31 {
        return Err(Error::InvalidParameters(format!("too many bodies: {k}")));
    }
    let tail: Vec<(&BoxBody, usize)> = tail.iter().map(|(b, m)| (b, *m)).collect();

    let mut lhs_parts: Vec<(&BoxBody, usize)> = r.iter().map(|b| (b, 1)).collect();
    lhs_parts.extend(tail.iter().copied());
    check_parts(n, &lhs_parts)?;
    let lhs = mixed_volume_parts(n, &lhs_parts);

    let origin = BoxBody::point(vec![BigRational::zero(); n]);
    let mut sum = BigRational::zero();
    for delta in 0u32..(1 << k) {
        let mut terms: Vec<(BigRational, &BoxBody)> = vec![(BigRational::one(), &origin)];
        terms.extend(
            (0..k)
                .filter(|&i| delta >> i & 1 == 1)
                .map(|i| (BigRational::one(), &r[i])),
        );
        let combined = minkowski_combine(&terms)?;
        let mut parts = vec![(&combined, k)];
        parts.extend(tail.iter().copied());
        check_parts(n, &parts)?;
        let v = mixed_volume_parts(n, &parts);
        sum += sign_power(k + delta.count_ones() as usize) * v;
    }
    let rhs = sum / BigRational::from_integer(factorial(k));
    Ok(PolarizationCheck {
        equal: lhs == rhs,
        lhs,
        rhs,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactlin::rational::{int, rat};
    use proptest::prelude::*;

    /// Sum over all permutations; test oracle only.
    fn permutation_sum(rows: &[Vec<BigRational>]) -> BigRational {
        fn rec(rows: &[Vec<BigRational>], r: usize, used: &mut Vec<bool>) -> BigRational {
            if r == rows.len() {
                return BigRational::one();
            }
            let mut acc = BigRational::zero();
            for j in 0..rows.len() {
                if !used[j] && !rows[r][j].is_zero() {
                    used[j] = true;
                    acc += &rows[r][j] * rec(rows, r + 1, used);
                    used[j] = false;
                }
            }
            acc
        }
        rec(rows, 0, &mut vec![false; rows.len()])
    }

    fn b(w: &[i64]) -> BoxBody {
        BoxBody::from_i64(w).unwrap()
    }

    #[test]
    fn mixed_volume_examples() {
        let cube = BoxBody::unit_cube(4);
        let t = BodyTuple::new(4, vec![(cube, 4)]).unwrap();
        assert_eq!(mixed_volume(&t), int(1));
        assert_eq!(mixed_volume_via_derivatives(&t), int(1));

        // (λ1 + 3λ2)(2λ1 + λ2) = 2λ1² + 7λ1λ2 + 3λ2², mixed coefficient 7/2
        let t = BodyTuple::from_bodies(vec![b(&[1, 2]), b(&[3, 1])]).unwrap();
        assert_eq!(mixed_volume(&t), rat(7, 2));
        assert_eq!(mixed_volume_via_derivatives(&t), rat(7, 2));

        let point = BoxBody::point(vec![int(3), int(-1), int(2)]);
        let t = BodyTuple::from_bodies(vec![point, b(&[1, 2, 3]), b(&[2, 2, 2])]).unwrap();
        assert_eq!(mixed_volume(&t), int(0));

        let k = BoxBody::new(vec![rat(1, 2), int(3), rat(5, 3)]).unwrap();
        let t = BodyTuple::new(3, vec![(k.clone(), 3)]).unwrap();
        assert_eq!(mixed_volume_via_derivatives(&t), crate::cubefam::volume(&k));
    }

    #[test]
    fn tuple_validation() {
        assert!(BodyTuple::new(3, vec![(b(&[1, 1, 1]), 2)]).is_err());
        assert!(BodyTuple::new(2, vec![(b(&[1, 1, 1]), 2)]).is_err());
        assert!(BodyTuple::new(2, vec![(b(&[1, 1]), 0), (b(&[1, 1]), 2)]).is_err());
        let s = r#"{"n":2,"entries":[{"body":{"n":2,"widths":["1","2"]},"multiplicity":1},{"body":{"n":2,"widths":["3","1"]},"multiplicity":1}]}"#;
        let t: BodyTuple = serde_json::from_str(s).unwrap();
        assert_eq!(mixed_volume(&t), rat(7, 2));
    }

    #[test]
    fn af_examples() {
        let k = b(&[1, 2]);
        let r = af_check(&k, &k, &[]).unwrap();
        assert!(r.holds && r.is_equality());
        let r = af_check(&k, &b(&[2, 4]), &[]).unwrap();
        assert!(r.holds && r.is_equality());
        let r = af_check(&k, &b(&[3, 1]), &[]).unwrap();
        assert_eq!((r.lhs.clone(), r.rhs.clone()), (rat(49, 4), int(6)));
        assert!(r.holds);
        assert!(af_check(&k, &k, std::slice::from_ref(&k)).is_err());
    }

    #[test]
    fn iterated_af_examples() {
        let (k, l) = (b(&[1, 2, 3]), b(&[2, 1, 5]));
        let c = vec![b(&[1, 1, 2])];
        let plain = af_check(&k, &l, &c).unwrap();
        let iter = iterated_af_check(&k, &l, 1, 1, &c).unwrap();
        assert_eq!(plain, iter);
        assert!(iterated_af_check(&k, &k, 2, 1, &[]).unwrap().is_equality());
        assert!(iterated_af_check(&k, &l, 0, 1, &c).is_err());
        assert!(iterated_af_check(&k, &l, 2, 2, &[]).is_err());
    }

    #[test]
    fn iterated_af_random_n4() {
        let k = BoxBody::new(vec![rat(1, 2), int(3), rat(7, 4), int(2)]).unwrap();
        let l = BoxBody::new(vec![int(5), rat(1, 3), int(1), rat(9, 2)]).unwrap();
        assert!(iterated_af_check(&k, &l, 2, 2, &[]).unwrap().holds);
    }

    #[test]
    fn polarization_examples() {
        let tail = vec![(b(&[1, 2, 3]), 1), (b(&[2, 1, 1]), 1)];
        let r = polarization_identity_check(&[b(&[3, 1, 2])], &tail).unwrap();
        assert!(r.equal);

        let k = b(&[1, 2, 3]);
        let tail = vec![(b(&[2, 1, 1]), 1)];
        let r = polarization_identity_check(&[k.clone(), k.clone()], &tail).unwrap();
        let direct = mixed_volume(&BodyTuple::new(3, vec![(k, 2), tail[0].clone()]).unwrap());
        assert!(r.equal);
        assert_eq!(r.rhs, direct);

        let rs = vec![b(&[1, 2, 3, 1, 2]), b(&[2, 1, 1, 3, 1]), b(&[1, 1, 2, 2, 3])];
        let tail = vec![(b(&[3, 2, 1, 1, 1]), 1), (b(&[1, 3, 1, 2, 2]), 1)];
        let r = polarization_identity_check(&rs, &tail).unwrap();
        let mut rows: Vec<Vec<BigRational>> = rs.iter().map(|x| x.widths().to_vec()).collect();
        rows.extend(tail.iter().map(|(x, _)| x.widths().to_vec()));
        let oracle = permutation_sum(&rows) / int(120);
        assert_eq!(r.lhs, oracle);
        assert!(r.equal);

        assert!(polarization_identity_check(&rs, &[]).is_err());
    }

    fn pos_rat() -> impl Strategy<Value = BigRational> {
        (0i64..=9, 1i64..=4).prop_map(|(p, q)| rat(p, q))
    }

    fn width_matrix(max: usize) -> impl Strategy<Value = Vec<Vec<BigRational>>> {
        (1..=max).prop_flat_map(|n| proptest::collection::vec(proptest::collection::vec(pos_rat(), n), n))
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn ryser_matches_permutation_sum(rows in width_matrix(6)) {
            prop_assert_eq!(permanent(&rows), permutation_sum(&rows));
        }

        #[test]
        fn routes_agree(rows in width_matrix(6)) {
            let bodies: Vec<BoxBody> = rows.into_iter().map(|w| BoxBody::new(w).unwrap()).collect();
            let t = BodyTuple::from_bodies(bodies).unwrap();
            prop_assert_eq!(mixed_volume(&t), mixed_volume_via_derivatives(&t));
        }

        #[test]
        fn multilinear_in_first_slot(rows in width_matrix(5), extra in proptest::collection::vec(pos_rat(), 5), a in pos_rat(), c in pos_rat()) {
            let n = rows.len();
            let bodies: Vec<BoxBody> = rows.into_iter().map(|w| BoxBody::new(w).unwrap()).collect();
            let other = BoxBody::new(extra[..n].to_vec()).unwrap();
            let mixed = minkowski_combine(&[(a.clone(), &bodies[0]), (c.clone(), &other)]).unwrap();
            let with = |first: &BoxBody| {
                let mut v = vec![first.clone()];
                v.extend(bodies[1..].iter().cloned());
                mixed_volume(&BodyTuple::from_bodies(v).unwrap())
            };
            prop_assert_eq!(with(&mixed), a * with(&bodies[0]) + c * with(&other));
        }
    }
}
