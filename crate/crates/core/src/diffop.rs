//! Constant-coefficient differential operators acting on the cube's volume
//! polynomial `V = s_1 ⋯ s_n`.
//!
//! `V` is multilinear, so `∂_j²` annihilates it and every polynomial reached
//! from it by differentiation. Operators are therefore stored by their
//! squarefree monomials only: a degree-`k` operator is a map from `k`-subsets
//! of `[n]` to coefficients, which is exactly its class modulo the annihilator
//! of `V`. Multilinear polynomials are stored the same way.
//!
//! The directional derivative along the support vector of a box with widths
//! `w` acts on slab coordinates as `Σ_j w_j ∂_j`.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::cubefam::{minkowski_combine, BoxBody};
use crate::error::{Error, Result};
use crate::exactlin::rational::{factorial, serde_str, sign_power};
use crate::exactlin::{nullspace_basis, rank, RatMatrix};

/// Largest supported dimension for subset bitmasks.
pub const MAX_DIM: usize = 30;

/// A subset of `{0, …, n-1}` stored as a bitmask. Ordered lexicographically
/// by sorted index list, so `{0,1} < {0,1,2} < {0,2} < {1}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Subset(u32);

impl Subset {
    pub const EMPTY: Subset = Subset(0);

    pub fn full(n: usize) -> Self {
        Subset(((1u64 << n) - 1) as u32)
    }

    pub fn from_indices(idx: &[usize]) -> Self {
        Subset(idx.iter().fold(0, |m, &i| m | (1 << i)))
    }

    pub fn bits(self) -> u32 {
        self.0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn contains(self, i: usize) -> bool {
        self.0 >> i & 1 == 1
    }

    pub fn is_subset_of(self, other: Subset) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn is_disjoint(self, other: Subset) -> bool {
        self.0 & other.0 == 0
    }

    pub fn union(self, other: Subset) -> Subset {
        Subset(self.0 | other.0)
    }

    pub fn minus(self, other: Subset) -> Subset {
        Subset(self.0 & !other.0)
    }

    pub fn max_index(self) -> Option<usize> {
        (self.0 != 0).then(|| 31 - self.0.leading_zeros() as usize)
    }

    pub fn indices(self) -> Vec<usize> {
        (0..32).filter(|&i| self.contains(i)).collect()
    }
}

impl Ord for Subset {
    fn cmp(&self, other: &Self) -> Ordering {
        if self.0 == other.0 {
            return Ordering::Equal;
        }
        let p = (self.0 ^ other.0).trailing_zeros();
        // the lists agree below p; the one holding p continues with p, the
        // other either ends there (a proper prefix) or continues above p
        let (lacking, flip) = if self.contains(p as usize) {
            (other.0, false)
        } else {
            (self.0, true)
        };
        let ord = if lacking >> p == 0 {
            Ordering::Greater
        } else {
            Ordering::Less
        };
        if flip {
            ord.reverse()
        } else {
            ord
        }
    }
}

impl PartialOrd for Subset {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Subset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let idx: Vec<String> = self.indices().iter().map(|i| (i + 1).to_string()).collect();
        write!(f, "{{{}}}", idx.join(","))
    }
}

/// All `k`-subsets of `[n]` in lexicographic order.
pub fn k_subsets(n: usize, k: usize) -> Vec<Subset> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Subset>) {
        if cur.len() == k {
            out.push(Subset::from_indices(cur));
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if k <= n {
        rec(0, n, k, &mut Vec::with_capacity(k), &mut out);
    }
    out
}

fn accumulate(map: &mut BTreeMap<Subset, BigRational>, key: Subset, v: BigRational) {
    if v.is_zero() {
        return;
    }
    match map.entry(key) {
        std::collections::btree_map::Entry::Occupied(mut e) => {
            *e.get_mut() += v;
            if e.get().is_zero() {
                e.remove();
            }
        }
        std::collections::btree_map::Entry::Vacant(e) => {
            e.insert(v);
        }
    }
}

fn check_dim(n: usize) -> Result<()> {
    if n > MAX_DIM {
        return Err(Error::InvalidParameters(format!(
            "dimension {n} exceeds the supported maximum {MAX_DIM}"
        )));
    }
    Ok(())
}

/// A multilinear polynomial in the slab variables `s_1, …, s_n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SlabPolynomial {
    n: usize,
    terms: BTreeMap<Subset, BigRational>,
}

impl SlabPolynomial {
    pub fn zero(n: usize) -> Self {
        Self {
            n,
            terms: BTreeMap::new(),
        }
    }

    /// The volume polynomial `s_1 ⋯ s_n`.
    pub fn volume(n: usize) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(Subset::full(n), BigRational::one());
        Self { n, terms }
    }

    pub fn from_terms(n: usize, terms: impl IntoIterator<Item = (Subset, BigRational)>) -> Result<Self> {
        check_dim(n)?;
        let mut map = BTreeMap::new();
        for (s, c) in terms {
            if !s.is_subset_of(Subset::full(n)) {
                return Err(Error::InvalidSubset(format!("{s} not within [{n}]")));
            }
            accumulate(&mut map, s, c);
        }
        Ok(Self { n, terms: map })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Subset, &BigRational)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, s: Subset) -> BigRational {
        self.terms.get(&s).cloned().unwrap_or_else(BigRational::zero)
    }

    /// Value of a degree-zero polynomial (its constant term).
    pub fn constant(&self) -> BigRational {
        self.coefficient(Subset::EMPTY)
    }
}

impl fmt::Display for SlabPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms = self.terms.iter().map(|(s, c)| {
            let mono: Vec<String> = s.indices().iter().map(|i| format!("s{}", i + 1)).collect();
            (c, mono.join("*"))
        });
        f.write_str(&signed_sum(terms))
    }
}

/// `c1*m1 - c2*m2 + …`, omitting unit coefficients.
fn signed_sum<'a>(terms: impl Iterator<Item = (&'a BigRational, String)>) -> String {
    let mut out = String::new();
    for (c, mono) in terms {
        let mag = c.abs();
        let sep = match (out.is_empty(), c.is_negative()) {
            (true, false) => "",
            (true, true) => "-",
            (false, false) => " + ",
            (false, true) => " - ",
        };
        out += sep;
        out += &match (mag.is_one(), mono.is_empty()) {
            (_, true) => mag.to_string(),
            (true, false) => mono,
            (false, false) => format!("{mag}*{mono}"),
        };
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

/// A homogeneous degree-`k` operator `Σ_{|S|=k} c_S ∂^S`, kept squarefree.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawOperator", into = "RawOperator")]
pub struct SlabOperator {
    n: usize,
    k: usize,
    terms: BTreeMap<Subset, BigRational>,
}

#[derive(Serialize, Deserialize)]
struct RawTerm {
    #[serde(rename = "S")]
    s: Vec<usize>,
    #[serde(with = "serde_str")]
    c: BigRational,
}

#[derive(Serialize, Deserialize)]
struct RawOperator {
    n: usize,
    k: usize,
    terms: Vec<RawTerm>,
}

impl TryFrom<RawOperator> for SlabOperator {
    type Error = Error;

    fn try_from(raw: RawOperator) -> Result<Self> {
        check_dim(raw.n)?;
        let mut terms = Vec::with_capacity(raw.terms.len());
        for t in raw.terms {
            let mut idx = t.s.clone();
            idx.sort_unstable();
            idx.dedup();
            if idx.len() != t.s.len() || idx.iter().any(|&i| i >= raw.n) {
                return Err(Error::InvalidSubset(format!("{:?}", t.s)));
            }
            terms.push((Subset::from_indices(&idx), t.c));
        }
        SlabOperator::new(raw.n, raw.k, terms)
    }
}

impl From<SlabOperator> for RawOperator {
    fn from(op: SlabOperator) -> Self {
        RawOperator {
            n: op.n,
            k: op.k,
            terms: op
                .terms
                .into_iter()
                .map(|(s, c)| RawTerm { s: s.indices(), c })
                .collect(),
        }
    }
}

impl SlabOperator {
    pub fn new(n: usize, k: usize, terms: impl IntoIterator<Item = (Subset, BigRational)>) -> Result<Self> {
        check_dim(n)?;
        let mut map = BTreeMap::new();
        for (s, c) in terms {
            if s.len() != k || !s.is_subset_of(Subset::full(n)) {
                return Err(Error::InvalidSubset(format!(
                    "{s} is not a {k}-subset of [{n}]"
                )));
            }
            accumulate(&mut map, s, c);
        }
        Ok(Self { n, k, terms: map })
    }

    pub fn zero(n: usize, k: usize) -> Self {
        Self {
            n,
            k,
            terms: BTreeMap::new(),
        }
    }

    /// `c ∂^S` with `k = |S|`.
    pub fn monomial(n: usize, s: Subset, c: BigRational) -> Result<Self> {
        Self::new(n, s.len(), [(s, c)])
    }

    /// Operator with integer coefficients on 0-based index lists.
    pub fn from_i64(n: usize, terms: &[(&[usize], i64)]) -> Result<Self> {
        let k = terms.first().map_or(0, |(s, _)| s.len());
        Self::new(
            n,
            k,
            terms
                .iter()
                .map(|(s, c)| (Subset::from_indices(s), BigRational::from_integer((*c).into()))),
        )
    }

    /// First-order operator `Σ_j w_j ∂_j`.
    pub fn linear(weights: &[BigRational]) -> Result<Self> {
        Self::new(
            weights.len(),
            1,
            weights
                .iter()
                .enumerate()
                .map(|(j, w)| (Subset::from_indices(&[j]), w.clone())),
        )
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn degree(&self) -> usize {
        self.k
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Subset, &BigRational)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, s: Subset) -> BigRational {
        self.terms.get(&s).cloned().unwrap_or_else(BigRational::zero)
    }

    /// Coefficients listed against `k_subsets(n, k)`.
    pub fn coefficient_vector(&self) -> Vec<BigRational> {
        k_subsets(self.n, self.k)
            .into_iter()
            .map(|s| self.coefficient(s))
            .collect()
    }

    pub fn from_coefficient_vector(n: usize, k: usize, v: &[BigRational]) -> Result<Self> {
        let subsets = k_subsets(n, k);
        if subsets.len() != v.len() {
            return Err(Error::DimensionMismatch {
                expected: subsets.len(),
                found: v.len(),
            });
        }
        Self::new(n, k, subsets.into_iter().zip(v.iter().cloned()))
    }

    fn same_shape(&self, other: &Self) -> Result<()> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                found: other.n,
            });
        }
        if self.k != other.k {
            return Err(Error::InvalidParameters(format!(
                "degree mismatch: {} vs {}",
                self.k, other.k
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.same_shape(other)?;
        let mut terms = self.terms.clone();
        for (s, c) in &other.terms {
            accumulate(&mut terms, *s, c.clone());
        }
        Ok(Self { terms, ..*self })
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        let mut terms = BTreeMap::new();
        for (s, v) in &self.terms {
            accumulate(&mut terms, *s, v * c);
        }
        Self { terms, ..*self }
    }

    /// Product of two operators, keeping only squarefree monomials.
    pub fn compose(&self, other: &Self) -> Result<Self> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                found: other.n,
            });
        }
        let mut terms = BTreeMap::new();
        for (s, a) in &self.terms {
            for (t, b) in &other.terms {
                if s.is_disjoint(*t) {
                    accumulate(&mut terms, s.union(*t), a * b);
                }
            }
        }
        Ok(Self {
            n: self.n,
            k: self.k + other.k,
            terms,
        })
    }
}

impl fmt::Display for SlabOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms = self.terms.iter().map(|(s, c)| {
            let d: String = s.indices().iter().map(|i| format!("d{}", i + 1)).collect();
            (c, d)
        });
        f.write_str(&signed_sum(terms))
    }
}

/// Squarefree part of `(D_{h_K})^k`: coefficient `k! Π_{j∈S} w_j` on each
/// `k`-subset `S`. For `k > n` the operator annihilates `V` and the zero
/// operator is returned.
pub fn op_from_box(body: &BoxBody, k: usize) -> Result<SlabOperator> {
    if k == 0 {
        return Err(Error::InvalidParameters("operator degree must be at least 1".into()));
    }
    let n = body.dim();
    check_dim(n)?;
    if k > n {
        return Ok(SlabOperator::zero(n, k));
    }
    let kf = BigRational::from_integer(factorial(k));
    let w = body.widths();
    SlabOperator::new(
        n,
        k,
        k_subsets(n, k).into_iter().map(|s| {
            let prod: BigRational = s.indices().iter().map(|&j| &w[j]).product();
            (s, &kf * prod)
        }),
    )
}

/// Formal differentiation: `a` applied to `p`.
pub fn apply(a: &SlabOperator, p: &SlabPolynomial) -> Result<SlabPolynomial> {
    if a.n != p.n {
        return Err(Error::DimensionMismatch {
            expected: a.n,
            found: p.n,
        });
    }
    let mut out = BTreeMap::new();
    for (u, pc) in &p.terms {
        for (s, ac) in &a.terms {
            if s.is_subset_of(*u) {
                accumulate(&mut out, u.minus(*s), ac * pc);
            }
        }
    }
    Ok(SlabPolynomial { n: p.n, terms: out })
}

/// `D_{h_{B_1}} ⋯ D_{h_{B_r}} V` for the given boxes.
pub fn derive_volume(n: usize, bodies: &[&BoxBody]) -> Result<SlabPolynomial> {
    let mut p = SlabPolynomial::volume(n);
    for b in bodies {
        if b.dim() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: b.dim(),
            });
        }
        p = apply(&SlabOperator::linear(b.widths())?, &p)?;
    }
    Ok(p)
}

fn require_nondegenerate(bodies: &[&BoxBody], role: &str) -> Result<()> {
    match bodies.iter().position(|b| !b.is_nondegenerate()) {
        Some(i) => Err(Error::DegenerateBody(format!(
            "{role} #{i} has a zero width"
        ))),
        None => Ok(()),
    }
}

fn check_hodge_shape(n: usize, k: usize, c_len: usize) -> Result<()> {
    if k == 0 || 2 * k > n {
        return Err(Error::InvalidParameters(format!(
            "need 1 <= k <= n/2, got n = {n}, k = {k}"
        )));
    }
    if c_len != n - 2 * k {
        return Err(Error::InvalidParameters(format!(
            "expected {} mixing bodies, got {c_len}",
            n - 2 * k
        )));
    }
    Ok(())
}

fn primitivity_target(l: &BoxBody, c: &[BoxBody]) -> Result<SlabPolynomial> {
    let mut bodies = vec![l];
    bodies.extend(c.iter());
    derive_volume(l.dim(), &bodies)
}

/// Basis of the degree-`k` operators `α` with `α D_L D_{C_1} ⋯ D_{C_{n-2k}} V = 0`.
///
/// Support vectors of nondegenerate boxes span every slab direction, so
/// vanishing against all `M` reduces to identical vanishing of this
/// degree-`(k-1)` polynomial. Basis vectors come from the reduced row
/// echelon form, listed against the lexicographic order of `k`-subsets.
pub fn primitive_space_basis(k: usize, l: &BoxBody, c: &[BoxBody]) -> Result<Vec<SlabOperator>> {
    let n = l.dim();
    check_hodge_shape(n, k, c.len())?;
    let mut all = vec![l];
    all.extend(c.iter());
    require_nondegenerate(&all, "body")?;

    let target = primitivity_target(l, c)?;
    let cols = k_subsets(n, k);
    let rows = k_subsets(n, k - 1);
    let m = RatMatrix::from_fn(rows.len(), cols.len(), |r, s| {
        let (u, s) = (rows[r], cols[s]);
        if u.is_disjoint(s) {
            target.coefficient(u.union(s))
        } else {
            BigRational::zero()
        }
    });
    nullspace_basis(&m)
        .into_iter()
        .map(|v| SlabOperator::from_coefficient_vector(n, k, &v))
        .collect()
}

pub fn is_primitive(alpha: &SlabOperator, l: &BoxBody, c: &[BoxBody]) -> Result<bool> {
    check_hodge_shape(l.dim(), alpha.k, c.len())?;
    Ok(apply(alpha, &primitivity_target(l, c)?)?.is_zero())
}

/// `a · b · D_{C_1} ⋯ D_{C_{n-2k}} V`, a number.
pub fn hr_form(a: &SlabOperator, b: &SlabOperator, c: &[BoxBody]) -> Result<BigRational> {
    a.same_shape(b)?;
    check_hodge_shape(a.n, a.k, c.len())?;
    let bodies: Vec<&BoxBody> = c.iter().collect();
    let p = derive_volume(a.n, &bodies)?;
    let ab = a.compose(b)?;
    Ok(apply(&ab, &p)?.constant())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HrCheck {
    /// `α² D_{C_1} ⋯ D_{C_{n-2k}} V`.
    pub value: BigRational,
    /// `(-1)^k value >= 0`.
    pub sign_ok: bool,
    /// `value == 0` exactly when `α V == 0`.
    pub equality_iff_zero_ok: bool,
}

pub fn hr_check(alpha: &SlabOperator, l: &BoxBody, c: &[BoxBody]) -> Result<HrCheck> {
    if !is_primitive(alpha, l, c)? {
        return Err(Error::NotPrimitive);
    }
    let value = hr_form(alpha, alpha, c)?;
    let signed = sign_power(alpha.k) * &value;
    let annihilates = apply(alpha, &SlabPolynomial::volume(alpha.n))?.is_zero();
    Ok(HrCheck {
        sign_ok: !signed.is_negative(),
        equality_iff_zero_ok: value.is_zero() == annihilates,
        value,
    })
}

/// `α = Σ_i x_i (D_{h_{K_i}})^k` with every `K_i` a nondegenerate box.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PowerCombination {
    pub k: usize,
    pub terms: Vec<(BigRational, BoxBody)>,
    /// Shift values `t` used to replace degenerate boxes `B` by `B + tΔ`.
    pub shifts: Vec<BigRational>,
}

impl PowerCombination {
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficients(&self) -> Vec<BigRational> {
        self.terms.iter().map(|(x, _)| x.clone()).collect()
    }

    pub fn bodies(&self) -> Vec<BoxBody> {
        self.terms.iter().map(|(_, b)| b.clone()).collect()
    }

    /// `Σ x_i · op_from_box(K_i, k)`.
    pub fn to_operator(&self, n: usize) -> Result<SlabOperator> {
        let mut acc = SlabOperator::zero(n, self.k);
        for (x, b) in &self.terms {
            acc = acc.add(&op_from_box(b, self.k)?.scale(x))?;
        }
        Ok(acc)
    }
}

/// Weights `c_t` with `Σ_t c_t q(t) = q(0)` for every polynomial of degree
/// `< shifts.len()` (Lagrange basis at zero; the Vandermonde solution).
fn extrapolation_weights(shifts: &[BigRational]) -> Vec<BigRational> {
    shifts
        .iter()
        .enumerate()
        .map(|(i, ti)| {
            shifts
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != i)
                .fold(BigRational::one(), |acc, (_, tj)| acc * (-tj) / (ti - tj))
        })
        .collect()
}

/// Write `α` as a combination of `k`-th powers of derivatives along
/// nondegenerate boxes.
///
/// Each monomial `∂^S`, `S = {j_1 < … < j_k}`, is polarized as
/// `k! ∂^S = Σ_{δ ∈ {0,1}^k} (-1)^{k+|δ|} (D_{B_{T(δ)}})^k` where `B_T` has
/// width 1 on `T(δ) = {j_r : δ_r = 1}` and 0 elsewhere. Each degenerate
/// `B_T` is then removed with the shifts `t = 1, …, k+1`: `(D_{B_T + tΔ})^k`
/// is a polynomial of degree `k` in `t` whose value at `t = 0` is
/// `(D_{B_T})^k`. Equal boxes are merged and cancelled terms dropped.
pub fn express_as_powers(alpha: &SlabOperator) -> Result<PowerCombination> {
    let (n, k) = (alpha.n, alpha.k);
    if k == 0 {
        return Err(Error::InvalidParameters("operator degree must be at least 1".into()));
    }
    let shifts: Vec<BigRational> = (1..=k + 1)
        .map(|t| BigRational::from_integer(BigInt::from(t)))
        .collect();
    if alpha.is_zero() {
        return Ok(PowerCombination {
            k,
            terms: Vec::new(),
            shifts,
        });
    }
    let weights = extrapolation_weights(&shifts);
    let cube = BoxBody::unit_cube(n);
    let kf = BigRational::from_integer(factorial(k));

    let mut order: Vec<BoxBody> = Vec::new();
    let mut coef: HashMap<BoxBody, BigRational> = HashMap::new();
    let mut push = |b: BoxBody, x: BigRational| {
        if let Some(v) = coef.get_mut(&b) {
            *v += x;
        } else {
            order.push(b.clone());
            coef.insert(b, x);
        }
    };

    for (s, c) in &alpha.terms {
        let idx = s.indices();
        let scaled = c / &kf;
        for delta in 1u32..(1 << k) {
            let chosen: Vec<usize> = (0..k).filter(|&r| delta >> r & 1 == 1).map(|r| idx[r]).collect();
            let sign = sign_power(k + chosen.len());
            let mut indicator = vec![BigRational::zero(); n];
            for &j in &chosen {
                indicator[j] = BigRational::one();
            }
            let b_t = BoxBody::new(indicator)?;
            for (t, w) in shifts.iter().zip(&weights) {
                let shifted = minkowski_combine(&[(BigRational::one(), &b_t), (t.clone(), &cube)])?;
                push(shifted, &scaled * &sign * w);
            }
        }
    }

    let terms = order
        .into_iter()
        .filter_map(|b| {
            let x = coef.remove(&b)?;
            (!x.is_zero()).then_some((x, b))
        })
        .collect();
    Ok(PowerCombination { k, terms, shifts })
}

/// The cube's h-vector `(C(n,0), …, C(n,n))`.
pub fn h_vector_cube(n: usize) -> Vec<u64> {
    let mut h = Vec::with_capacity(n + 1);
    let mut c: u64 = 1;
    for k in 0..=n {
        h.push(c);
        c = c * (n - k) as u64 / (k + 1) as u64;
    }
    h
}

/// Rank of the pairing `(a, b) ↦ hr_form(a, b, C)` on all squarefree
/// degree-`k` operators.
pub fn pairing_rank(n: usize, k: usize, c: &[BoxBody]) -> Result<usize> {
    check_hodge_shape(n, k, c.len())?;
    let bodies: Vec<&BoxBody> = c.iter().collect();
    let p = derive_volume(n, &bodies)?;
    let subsets = k_subsets(n, k);
    let g = RatMatrix::from_fn(subsets.len(), subsets.len(), |i, j| {
        let (s, t) = (subsets[i], subsets[j]);
        if s.is_disjoint(t) {
            p.coefficient(s.union(t))
        } else {
            BigRational::zero()
        }
    });
    Ok(rank(&g))
}
