//! Matrices of mixed volumes `M_ij = V(K_i[k], K_j[k], C_1, …, C_{n-2k})`.

use std::collections::HashMap;

use num_rational::BigRational;
use rayon::prelude::*;

use crate::cubefam::BoxBody;
use crate::error::{Error, Result};
use crate::exactlin::{det, RatMatrix};
use crate::hypmat::{sylvester_violation, Violation};
use crate::mixvol::{mixed_volume_parts, mixed_volume_parts_via_derivatives, MAX_PERMANENT_DIM};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FedotovMatrix {
    pub n: usize,
    pub k: usize,
    pub bodies: Vec<BoxBody>,
    pub c_list: Vec<BoxBody>,
    pub entries: RatMatrix,
}

impl FedotovMatrix {
    pub fn size(&self) -> usize {
        self.bodies.len()
    }
}

pub(crate) fn check_shape(n: usize, k: usize, m: usize, c_len: usize) -> Result<()> {
    if m == 0 {
        return Err(Error::InvalidParameters("at least one body is required".into()));
    }
    if k == 0 || 2 * k + c_len != n {
        return Err(Error::InvalidParameters(format!(
            "2k + |C| must equal n (k = {k}, |C| = {c_len}, n = {n})"
        )));
    }
    if n > MAX_PERMANENT_DIM {
        return Err(Error::InvalidParameters(format!(
            "dimension {n} exceeds the supported maximum {MAX_PERMANENT_DIM}"
        )));
    }
    Ok(())
}

fn dimension_of(bodies: &[BoxBody], c_list: &[BoxBody]) -> Result<usize> {
    let n = bodies
        .first()
        .or(c_list.first())
        .map(BoxBody::dim)
        .ok_or_else(|| Error::InvalidParameters("at least one body is required".into()))?;
    for b in bodies.iter().chain(c_list) {
        if b.dim() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: b.dim(),
            });
        }
    }
    Ok(n)
}

/// Symmetric matrix of `f(K_i, K_j)` evaluated once per unordered pair of
/// distinct width vectors.
fn pairwise<F>(bodies: &[BoxBody], f: F) -> Result<RatMatrix>
where
    F: Fn(&BoxBody, &BoxBody) -> Result<BigRational> + Sync,
{
    let mut slot: HashMap<&[BigRational], usize> = HashMap::new();
    let mut reps: Vec<&BoxBody> = Vec::new();
    let class: Vec<usize> = bodies
        .iter()
        .map(|b| {
            *slot.entry(b.widths()).or_insert_with(|| {
                reps.push(b);
                reps.len() - 1
            })
        })
        .collect();
    let u = reps.len();
    let pairs: Vec<(usize, usize)> = (0..u).flat_map(|i| (i..u).map(move |j| (i, j))).collect();
    let values = pairs
        .par_iter()
        .map(|&(i, j)| f(reps[i], reps[j]))
        .collect::<Result<Vec<_>>>()?;
    let mut table = vec![vec![BigRational::default(); u]; u];
    for (&(i, j), v) in pairs.iter().zip(values) {
        table[j][i] = v.clone();
        table[i][j] = v;
    }
    let m = bodies.len();
    Ok(RatMatrix::from_fn(m, m, |i, j| table[class[i]][class[j]].clone()))
}

fn parts<'a>(a: &'a BoxBody, b: &'a BoxBody, k: usize, c_list: &'a [BoxBody]) -> Vec<(&'a BoxBody, usize)> {
    let mut p = vec![(a, k), (b, k)];
    p.extend(c_list.iter().map(|c| (c, 1)));
    p
}

/// Builds the matrix through width permanents.
pub fn build_matrix(bodies: &[BoxBody], k: usize, c_list: &[BoxBody]) -> Result<FedotovMatrix> {
    let n = dimension_of(bodies, c_list)?;
    check_shape(n, k, bodies.len(), c_list.len())?;
    let entries = pairwise(bodies, |a, b| Ok(mixed_volume_parts(n, &parts(a, b, k, c_list))))?;
    Ok(FedotovMatrix {
        n,
        k,
        bodies: bodies.to_vec(),
        c_list: c_list.to_vec(),
        entries,
    })
}

/// The same entries through symbolic differentiation of the volume
/// polynomial; used only for independent re-checks.
pub fn matrix_via_derivatives(bodies: &[BoxBody], k: usize, c_list: &[BoxBody]) -> Result<RatMatrix> {
    let n = dimension_of(bodies, c_list)?;
    check_shape(n, k, bodies.len(), c_list.len())?;
    pairwise(bodies, |a, b| mixed_volume_parts_via_derivatives(n, &parts(a, b, k, c_list)))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ShephardReport {
    pub m: usize,
    pub det: BigRational,
    pub subsets_checked: u64,
    /// A principal minor with the wrong sign; its presence means a bug.
    pub violation: Option<Violation>,
}

impl ShephardReport {
    pub fn passed(&self) -> bool {
        self.violation.is_none()
    }
}

/// Checks `(-1)^{|I|} det M_I <= 0` on every principal subset of a `k = 1`
/// matrix.
pub fn shephard_verify(m: &FedotovMatrix) -> Result<ShephardReport> {
    if m.k != 1 {
        return Err(Error::InvalidParameters(format!(
            "Shephard check needs k = 1, got k = {}",
            m.k
        )));
    }
    let violation = sylvester_violation(&m.entries)?;
    let size = m.size();
    Ok(ShephardReport {
        m: size,
        det: det(&m.entries)?,
        subsets_checked: if violation.is_none() { (1u64 << size) - 1 } else { 0 },
        violation,
    })
}
