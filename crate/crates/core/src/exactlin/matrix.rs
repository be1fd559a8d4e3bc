//! Dense exact rational matrices.
//!
//! Determinants use Bareiss elimination on integer-scaled rows, so the only
//! divisions are exact integer divisions. Inertia comes from symmetric
//! Gaussian reduction with diagonal pivots, falling back to a 2x2 pivot when
//! every remaining diagonal entry is zero.

use std::fmt;
use std::ops::Index;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::rational::{clear_denominators, dot};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RatMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigRational>,
}

impl RatMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<BigRational>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch {
                expected: rows * cols,
                found: data.len(),
            });
        }
        Ok(Self { rows, cols, data })
    }

    pub fn from_rows(rows: Vec<Vec<BigRational>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            if row.len() != c {
                return Err(Error::DimensionMismatch {
                    expected: c,
                    found: row.len(),
                });
            }
            data.extend(row);
        }
        Ok(Self {
            rows: r,
            cols: c,
            data,
        })
    }

    /// Convenience constructor from small integers.
    pub fn from_i64(rows: &[&[i64]]) -> Result<Self> {
        Self::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&v| BigRational::from_integer(v.into())).collect())
                .collect(),
        )
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> BigRational) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, n, |i, j| {
            if i == j {
                BigRational::one()
            } else {
                BigRational::zero()
            }
        })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self::from_fn(rows, cols, |_, _| BigRational::zero())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn row(&self, i: usize) -> &[BigRational] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<BigRational>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn is_symmetric(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| (0..i).all(|j| self[(i, j)] == self[(j, i)]))
    }

    /// All entries strictly positive.
    pub fn is_positive(&self) -> bool {
        self.data.iter().all(Signed::is_positive)
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].clone())
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                found: other.rows,
            });
        }
        Ok(Self::from_fn(self.rows, other.cols, |i, j| {
            (0..self.cols).fold(BigRational::zero(), |acc, t| {
                acc + &self[(i, t)] * &other[(t, j)]
            })
        }))
    }

    pub fn mul_vec(&self, v: &[BigRational]) -> Result<Vec<BigRational>> {
        if v.len() != self.cols {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                found: v.len(),
            });
        }
        Ok((0..self.rows).map(|i| dot(self.row(i), v)).collect())
    }

    /// The bilinear pairing `<x, M y>`.
    pub fn pairing(&self, x: &[BigRational], y: &[BigRational]) -> Result<BigRational> {
        if x.len() != self.rows {
            return Err(Error::DimensionMismatch {
                expected: self.rows,
                found: x.len(),
            });
        }
        let my = self.mul_vec(y)?;
        Ok(dot(x, &my))
    }
}

impl Index<(usize, usize)> for RatMatrix {
    type Output = BigRational;

    fn index(&self, (i, j): (usize, usize)) -> &BigRational {
        &self.data[i * self.cols + j]
    }
}

impl fmt::Display for RatMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(ToString::to_string).collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}

/// Signature of a symmetric matrix: counts of positive, negative and zero
/// eigenvalues.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Inertia {
    pub positive: usize,
    pub negative: usize,
    pub zero: usize,
}

impl Inertia {
    pub fn dim(&self) -> usize {
        self.positive + self.negative + self.zero
    }
}

impl fmt::Display for Inertia {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.positive, self.negative, self.zero)
    }
}

fn ensure_square(m: &RatMatrix) -> Result<()> {
    if m.is_square() {
        Ok(())
    } else {
        Err(Error::NotSquare {
            rows: m.rows,
            cols: m.cols,
        })
    }
}

/// Exact determinant by fraction-free (Bareiss) elimination.
pub fn det(m: &RatMatrix) -> Result<BigRational> {
    ensure_square(m)?;
    let n = m.rows;
    if n == 0 {
        return Ok(BigRational::one());
    }
    let mut scale = BigInt::one();
    let mut a: Vec<Vec<BigInt>> = (0..n)
        .map(|i| {
            let (row, l) = clear_denominators(m.row(i));
            scale *= l;
            row
        })
        .collect();

    let mut negate = false;
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                Some(i) => {
                    a.swap(i, k);
                    negate = !negate;
                }
                None => return Ok(BigRational::zero()),
            }
        }
        let (top, bottom) = a.split_at_mut(k + 1);
        let pivot_row = &top[k];
        for row in bottom.iter_mut() {
            for j in k + 1..n {
                let v = &row[j] * &pivot_row[k] - &row[k] * &pivot_row[j];
                row[j] = v / &prev;
            }
            row[k] = BigInt::zero();
        }
        prev = a[k][k].clone();
    }
    let d = a[n - 1][n - 1].clone();
    let d = if negate { -d } else { d };
    Ok(BigRational::new(d, scale))
}

/// Exact inertia of a symmetric matrix.
pub fn inertia(m: &RatMatrix) -> Result<Inertia> {
    inertia_with_pivots(m).map(|(i, _)| i)
}

/// Exact inertia together with the indices used as pivots.
///
/// The principal submatrix on the returned pivot indices is nonsingular and
/// carries all of the positive and negative inertia of `m`.
pub fn inertia_with_pivots(m: &RatMatrix) -> Result<(Inertia, Vec<usize>)> {
    ensure_square(m)?;
    if !m.is_symmetric() {
        return Err(Error::NotSymmetric);
    }
    let n = m.rows;
    let mut a = m.to_rows();
    let mut active: Vec<usize> = (0..n).collect();
    let mut pivots = Vec::new();
    let (mut pos, mut neg) = (0, 0);

    loop {
        if let Some(slot) = active.iter().position(|&p| !a[p][p].is_zero()) {
            let p = active.remove(slot);
            let d = a[p][p].clone();
            if d.is_positive() {
                pos += 1;
            } else {
                neg += 1;
            }
            let col: Vec<(usize, BigRational)> = active
                .iter()
                .filter(|&&r| !a[r][p].is_zero())
                .map(|&r| (r, &a[r][p] / &d))
                .collect();
            for (ri, (r, f)) in col.iter().enumerate() {
                for (s, _) in &col[ri..] {
                    let v = &a[*r][*s] - f * &a[p][*s];
                    a[*s][*r] = v.clone();
                    a[*r][*s] = v;
                }
            }
            pivots.push(p);
            continue;
        }

        let pair = active.iter().enumerate().find_map(|(ii, &i)| {
            active[ii + 1..]
                .iter()
                .find(|&&j| !a[i][j].is_zero())
                .map(|&j| (i, j))
        });
        let Some((i, j)) = pair else { break };
        // [[0, e], [e, 0]] has one positive and one negative eigenvalue.
        pos += 1;
        neg += 1;
        active.retain(|&r| r != i && r != j);
        let e = a[i][j].clone();
        let rows: Vec<(usize, BigRational, BigRational)> = active
            .iter()
            .map(|&r| (r, a[r][i].clone(), a[r][j].clone()))
            .collect();
        for (ri, (r, ri_i, ri_j)) in rows.iter().enumerate() {
            for (s, si_i, si_j) in &rows[ri..] {
                let corr = (ri_i * si_j + ri_j * si_i) / &e;
                if corr.is_zero() {
                    continue;
                }
                let v = &a[*r][*s] - corr;
                a[*s][*r] = v.clone();
                a[*r][*s] = v;
            }
        }
        pivots.push(i);
        pivots.push(j);
    }

    Ok((
        Inertia {
            positive: pos,
            negative: neg,
            zero: active.len(),
        },
        pivots,
    ))
}

/// Reduced row echelon form; returns the reduced rows and pivot columns.
fn rref(m: &RatMatrix) -> (Vec<Vec<BigRational>>, Vec<usize>) {
    let mut a = m.to_rows();
    let (rows, cols) = (m.rows, m.cols);
    let mut pivot_cols = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(p, r);
        let inv = a[r][c].recip();
        for v in a[r].iter_mut() {
            *v *= &inv;
        }
        for i in 0..rows {
            if i == r || a[i][c].is_zero() {
                continue;
            }
            let f = a[i][c].clone();
            for j in c..cols {
                let sub = &f * &a[r][j];
                a[i][j] -= sub;
            }
        }
        pivot_cols.push(c);
        r += 1;
    }
    (a, pivot_cols)
}

pub fn rank(m: &RatMatrix) -> usize {
    rref(m).1.len()
}

/// Basis of the right kernel `{z : M z = 0}`, one vector per free column of
/// the reduced row echelon form.
pub fn nullspace_basis(m: &RatMatrix) -> Vec<Vec<BigRational>> {
    let (a, pivot_cols) = rref(m);
    let mut is_pivot = vec![false; m.cols];
    for &c in &pivot_cols {
        is_pivot[c] = true;
    }
    (0..m.cols)
        .filter(|&c| !is_pivot[c])
        .map(|free| {
            let mut v = vec![BigRational::zero(); m.cols];
            v[free] = BigRational::one();
            for (row, &pc) in pivot_cols.iter().enumerate() {
                v[pc] = -a[row][free].clone();
            }
            v
        })
        .collect()
}

/// Principal submatrix on `subset`, taken in ascending index order.
pub fn principal_submatrix(m: &RatMatrix, subset: &[usize]) -> Result<RatMatrix> {
    ensure_square(m)?;
    if subset.is_empty() {
        return Err(Error::InvalidSubset("empty subset".into()));
    }
    let mut idx = subset.to_vec();
    idx.sort_unstable();
    idx.dedup();
    if idx.len() != subset.len() {
        return Err(Error::InvalidSubset(format!("repeated index in {subset:?}")));
    }
    if let Some(&bad) = idx.iter().find(|&&i| i >= m.rows) {
        return Err(Error::InvalidSubset(format!(
            "index {bad} out of range for dimension {}",
            m.rows
        )));
    }
    Ok(RatMatrix::from_fn(idx.len(), idx.len(), |i, j| {
        m[(idx[i], idx[j])].clone()
    }))
}
