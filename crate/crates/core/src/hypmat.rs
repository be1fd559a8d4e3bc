//! Hyperbolic matrices: symmetric matrices with a one-dimensional positive
//! eigenspace.
//!
//! For symmetric positive matrices three conditions coincide: exact inertia
//! has one positive eigenvalue; the reverse Cauchy-Schwarz inequality holds
//! on the nonnegative orthant; every principal minor satisfies
//! `(-1)^{|I|} det M_I <= 0`. Every decision here is made through exact
//! determinants and inertia, never through floating-point eigenvalues.

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactlin::rational::{is_nonnegative, is_strictly_positive, serde_str, sign_power};
use crate::exactlin::{det, inertia, inertia_with_pivots, nullspace_basis, principal_submatrix, RatMatrix};

/// Default cap on exhaustive subset enumeration (about 4M subsets).
pub const DEFAULT_ENUMERATION_CAP: usize = 22;

/// A principal submatrix with `(-1)^{|I|} det M_I > 0`. Indices are 0-based.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    #[serde(rename = "I")]
    pub subset: Vec<usize>,
    #[serde(with = "serde_str")]
    pub det: BigRational,
}

impl Violation {
    /// `(-1)^{|I|}`.
    pub fn parity_sign(&self) -> i32 {
        if self.subset.len().is_multiple_of(2) {
            1
        } else {
            -1
        }
    }

    /// `(-1)^{|I|} det M_I`, positive for a genuine violation.
    pub fn signed_det(&self) -> BigRational {
        sign_power(self.subset.len()) * &self.det
    }

    /// Recompute the minor from `m` and confirm the sign.
    pub fn verify(&self, m: &RatMatrix) -> Result<bool> {
        let d = det(&principal_submatrix(m, &self.subset)?)?;
        Ok(d == self.det && self.signed_det().is_positive())
    }
}

pub fn check_symmetric_positive(m: &RatMatrix) -> Result<()> {
    if !m.is_square() {
        return Err(Error::NotSquare {
            rows: m.rows(),
            cols: m.cols(),
        });
    }
    if !m.is_symmetric() {
        return Err(Error::NotSymmetric);
    }
    for i in 0..m.rows() {
        for j in 0..m.cols() {
            if !m[(i, j)].is_positive() {
                return Err(Error::NotPositive(i, j));
            }
        }
    }
    Ok(())
}

pub fn is_hyperbolic(m: &RatMatrix) -> Result<bool> {
    check_symmetric_positive(m)?;
    Ok(inertia(m)?.positive == 1)
}

/// First violating principal minor, by size then lexicographically.
pub fn sylvester_violation(m: &RatMatrix) -> Result<Option<Violation>> {
    check_symmetric_positive(m)?;
    let all: Vec<usize> = (0..m.rows()).collect();
    sylvester_violation_within(m, &all, DEFAULT_ENUMERATION_CAP)
}

fn combinations(pool: &[usize], size: usize) -> Vec<Vec<usize>> {
    fn rec(pool: &[usize], size: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == size {
            out.push(cur.clone());
            return;
        }
        for i in start..pool.len() {
            if pool.len() - i < size - cur.len() {
                break;
            }
            cur.push(pool[i]);
            rec(pool, size, i + 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(pool, size, 0, &mut Vec::with_capacity(size), &mut out);
    out
}

/// [`sylvester_violation`] restricted to subsets of `core`; the returned
/// indices refer to `m`. Evaluation is parallel, selection deterministic.
pub fn sylvester_violation_within(m: &RatMatrix, core: &[usize], cap: usize) -> Result<Option<Violation>> {
    check_symmetric_positive(m)?;
    let mut pool = core.to_vec();
    pool.sort_unstable();
    pool.dedup();
    if pool.len() != core.len() || pool.iter().any(|&i| i >= m.rows()) {
        return Err(Error::InvalidSubset(format!("bad core {core:?}")));
    }
    if pool.len() > cap {
        return Err(Error::EnumerationTooLarge {
            dim: pool.len(),
            cap,
        });
    }
    for size in 1..=pool.len() {
        let found = combinations(&pool, size)
            .into_par_iter()
            .map(|subset| -> Result<Option<Violation>> {
                let d = det(&principal_submatrix(m, &subset)?)?;
                let v = Violation { subset, det: d };
                Ok(v.signed_det().is_positive().then_some(v))
            })
            .find_map_first(|r| match r {
                Ok(None) => None,
                other => Some(other),
            });
        if let Some(r) = found {
            return r;
        }
    }
    Ok(None)
}

/// `<x,My>² >= <x,Mx><y,My>` for `x, y >= 0`.
pub fn af_form_check(m: &RatMatrix, x: &[BigRational], y: &[BigRational]) -> Result<bool> {
    if !is_nonnegative(x) || !is_nonnegative(y) {
        return Err(Error::InvalidParameters("x and y must be nonnegative".into()));
    }
    let xy = m.pairing(x, y)?;
    let xx = m.pairing(x, x)?;
    let yy = m.pairing(y, y)?;
    Ok(&xy * &xy >= xx * yy)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EqualityWitness {
    pub x: Vec<BigRational>,
    pub y: Vec<BigRational>,
}

fn independent(a: &[BigRational], b: &[BigRational]) -> bool {
    (0..a.len()).any(|i| (0..i).any(|j| &a[i] * &b[j] != &a[j] * &b[i]))
}

/// Linearly independent `x, y > 0` with `<x,My>² = <x,Mx><y,My>` for a
/// singular positive `M`: take `z ∈ ker M`, `y` the all-ones vector (bumped
/// in its first entry if parallel to `z`), and `x = z + b y` with
/// `b = 1 + max_i(-z_i)`.
pub fn equality_witness(m: &RatMatrix) -> Result<EqualityWitness> {
    check_symmetric_positive(m)?;
    if m.is_zero() {
        return Err(Error::ZeroMatrix);
    }
    if !det(m)?.is_zero() {
        return Err(Error::Nonsingular);
    }
    let n = m.rows();
    let z = nullspace_basis(m)
        .into_iter()
        .next()
        .ok_or_else(|| Error::CheckFailed("singular matrix with empty kernel".into()))?;
    let mut y = vec![BigRational::one(); n];
    if !independent(&z, &y) {
        y[0] += BigRational::one();
    }
    let worst = z.iter().map(|v| -v).max().unwrap_or_else(BigRational::zero);
    let b = BigRational::one() + worst.max(BigRational::zero());
    let x: Vec<BigRational> = z.iter().zip(&y).map(|(zi, yi)| zi + &b * yi).collect();

    let xy = m.pairing(&x, &y)?;
    let ok = is_strictly_positive(&x)
        && is_strictly_positive(&y)
        && independent(&x, &y)
        && &xy * &xy == m.pairing(&x, &x)? * m.pairing(&y, &y)?;
    if !ok {
        return Err(Error::CheckFailed("equality witness does not re-verify".into()));
    }
    Ok(EqualityWitness { x, y })
}

fn positive_index(m: &RatMatrix, idx: &[usize]) -> Result<usize> {
    if idx.is_empty() {
        return Ok(0);
    }
    Ok(inertia(&principal_submatrix(m, idx)?)?.positive)
}

/// Shrink a non-hyperbolic matrix to a small index set `J` on which `M_J`
/// still has at least two positive eigenvalues and no single index can be
/// dropped.
///
/// Starts from the pivot set of the exact inertia computation (a
/// nonsingular principal submatrix carrying all nonzero inertia), then
/// removes indices from the highest down while exact inertia allows.
pub fn greedy_core(m: &RatMatrix) -> Result<Vec<usize>> {
    check_symmetric_positive(m)?;
    let (full, pivots) = inertia_with_pivots(m)?;
    if full.positive < 2 {
        return Err(Error::AlreadyHyperbolic);
    }
    let mut core = pivots;
    core.sort_unstable();
    if positive_index(m, &core)? < 2 {
        return Err(Error::CheckFailed("pivot set lost positive inertia".into()));
    }
    loop {
        let mut removed = false;
        for pos in (0..core.len()).rev() {
            let mut trial = core.clone();
            trial.remove(pos);
            if positive_index(m, &trial)? >= 2 {
                core = trial;
                removed = true;
            }
        }
        if !removed {
            return Ok(core);
        }
    }
}
