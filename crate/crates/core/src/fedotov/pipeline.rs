//! Explicit non-hyperbolic mixed volume matrices of boxes.
//!
//! For `k = 2`: a primitive operator `α` with `α² (D_Δ)^{n-4} V > 0` is
//! written as `Σ x_i (D_{K_i})²`; appending the cube gives a matrix with
//! `<x,My> = 0 < <x,Mx>` for `y = e_{m+1}`. For `k > 2` the same data is
//! polarized into the bodies `K_{iδ}`.

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::cubefam::BoxBody;
use crate::diffop::{apply, express_as_powers, hr_check, primitive_space_basis, PowerCombination, SlabOperator, SlabPolynomial};
use crate::error::{Error, Result};
use crate::exactlin::rational::factorial;
use crate::exactlin::RatMatrix;
use crate::hypmat::{greedy_core, is_hyperbolic, sylvester_violation_within, Violation};
use crate::mixvol::MAX_PERMANENT_DIM;

use super::certificate::{indexed, Certificate, CertificateKind, IndexedBody, Trace, CERTIFICATE_VERSION};
use super::matrix::{build_matrix, FedotovMatrix};
use super::polar::{delta_label, deltas, polarization_sign, polarized_body};

/// Intermediate data of the `k = 2` construction.
#[derive(Clone, Debug)]
pub struct K2Base {
    pub n: usize,
    pub alpha: SlabOperator,
    /// `α² (D_Δ)^{n-4} V`.
    pub alpha_square: BigRational,
    pub powers: PowerCombination,
    /// `x_1, …, x_m, 0`.
    pub x: Vec<BigRational>,
    /// `e_{m+1}`.
    pub y: Vec<BigRational>,
    pub matrix: FedotovMatrix,
    pub x_my: BigRational,
    pub x_mx: BigRational,
}

impl K2Base {
    /// Number of power terms, before the cube is appended.
    pub fn m(&self) -> usize {
        self.powers.len()
    }
}

fn check(cond: bool, what: &str) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(Error::CheckFailed(what.into()))
    }
}

pub fn check_construct_bounds(n: usize, k: usize) -> Result<()> {
    if k < 2 {
        return Err(Error::InvalidParameters(format!("k must be at least 2, got {k}")));
    }
    if 2 * k > n {
        return Err(Error::InvalidParameters(format!("2k <= n is required, got n = {n}, k = {k}")));
    }
    if n > MAX_PERMANENT_DIM {
        return Err(Error::InvalidParameters(format!("n = {n} exceeds the supported maximum {MAX_PERMANENT_DIM}")));
    }
    Ok(())
}

pub fn k2_base(n: usize) -> Result<K2Base> {
    check_construct_bounds(n, 2)?;
    let cube = BoxBody::unit_cube(n);
    let c = vec![cube.clone(); n - 4];

    let v = SlabPolynomial::volume(n);
    let mut alpha = None;
    for a in primitive_space_basis(2, &cube, &c)? {
        if !apply(&a, &v)?.is_zero() {
            alpha = Some(a);
            break;
        }
    }
    let alpha = alpha.ok_or_else(|| Error::CheckFailed("primitive space acts trivially on V".into()))?;
    let hr = hr_check(&alpha, &cube, &c)?;
    check(hr.sign_ok && hr.value.is_positive(), "Hodge-Riemann value is not strictly positive")?;

    let powers = express_as_powers(&alpha)?;
    check(powers.to_operator(n)? == alpha, "power combination does not reproduce alpha")?;
    check(powers.terms.iter().all(|(_, b)| b.is_nondegenerate()), "degenerate body among the powers")?;

    let mut bodies = powers.bodies();
    bodies.push(cube);
    let m1 = bodies.len();
    let matrix = build_matrix(&bodies, 2, &c)?;
    let mut x = powers.coefficients();
    x.push(BigRational::zero());
    let mut y = vec![BigRational::zero(); m1];
    y[m1 - 1] = BigRational::one();

    let x_my = matrix.entries.pairing(&x, &y)?;
    let x_mx = matrix.entries.pairing(&x, &x)?;
    check(x_my.is_zero(), "<x,My> is not zero")?;
    check(x_mx == &hr.value / BigRational::from_integer(factorial(n)), "<x,Mx> differs from alpha^2 V / n!")?;
    check(!is_hyperbolic(&matrix.entries)?, "matrix is unexpectedly hyperbolic")?;

    Ok(K2Base {
        n,
        alpha,
        alpha_square: hr.value,
        powers,
        x,
        y,
        matrix,
        x_my,
        x_mx,
    })
}

/// Shrinks to an inertia core, then enumerates principal minors inside it.
pub fn locate_violation(m: &RatMatrix, cap: usize) -> Result<(Vec<usize>, Violation)> {
    let core = greedy_core(m)?;
    let v = sylvester_violation_within(m, &core, cap)?
        .ok_or_else(|| Error::CheckFailed(format!("no violating minor inside core {core:?}")))?;
    Ok((core, v))
}

pub fn certificate_from_base(base: &K2Base, cap: usize) -> Result<Certificate> {
    let (core, violation) = locate_violation(&base.matrix.entries, cap)?;
    Ok(Certificate {
        version: CERTIFICATE_VERSION,
        kind: CertificateKind::HodgeRiemann,
        n: base.n,
        k: 2,
        bodies: indexed(&base.matrix.bodies),
        c_list: base.matrix.c_list.iter().map(|b| b.widths().to_vec()).collect(),
        x: base.x.clone(),
        y: base.y.clone(),
        x_my: Some(base.x_my.clone()),
        x_mx: Some(base.x_mx.clone()),
        matrix: base.matrix.entries.to_rows(),
        violation,
        trace: Trace {
            alpha: Some(base.alpha.clone()),
            alpha_square: Some(base.alpha_square.clone()),
            shifts: base.powers.shifts.clone(),
            base_m: Some(base.m()),
            core,
            ..Trace::default()
        },
    })
}

pub fn construct_counterexample_k2(n: usize, cap: usize) -> Result<Certificate> {
    certificate_from_base(&k2_base(n)?, cap)
}

#[derive(Clone, Debug)]
pub struct Reduction {
    pub certificate: Certificate,
    pub matrix: FedotovMatrix,
    /// `(1/k!²) Σ_{δ,ε} (-1)^{k+|δ|} (-1)^{k+|ε|} M̃_{iδ,jε}`, which must
    /// reproduce the base matrix.
    pub collapsed: RatMatrix,
}

/// Collapses a polarized matrix back to the `(m+1) x (m+1)` base size.
pub fn collapse(tilde: &RatMatrix, k: usize) -> Result<RatMatrix> {
    let ds = deltas(k);
    let w = ds.len();
    if !tilde.rows().is_multiple_of(w) {
        return Err(Error::DimensionMismatch {
            expected: w,
            found: tilde.rows(),
        });
    }
    let groups = tilde.rows() / w;
    let signs: Vec<BigRational> = ds.iter().map(|d| polarization_sign(k, d)).collect();
    let norm = BigRational::from_integer(factorial(k).pow(2));
    Ok(RatMatrix::from_fn(groups, groups, |i, j| {
        let mut acc = BigRational::zero();
        for (p, sp) in signs.iter().enumerate() {
            for (q, sq) in signs.iter().enumerate() {
                acc += sp * sq * &tilde[(i * w + p, j * w + q)];
            }
        }
        acc / &norm
    }))
}

/// Lifts the `k = 2` construction in the same dimension to degree `k`.
/// `k = 2` is accepted and yields a matrix that collapses to the base.
pub fn reduce_to_general_k(base: &K2Base, k: usize, cap: usize) -> Result<Reduction> {
    let n = base.n;
    check_construct_bounds(n, k)?;
    let cube = BoxBody::unit_cube(n);
    let ds = deltas(k);
    let kfact = BigRational::from_integer(factorial(k));
    let lead = ds.iter().position(|d| d[0] == 1 && d[1..].iter().all(|&b| b == 0)).expect("(1,0,…,0) is listed");

    let groups = base.matrix.bodies.len();
    let mut bodies = Vec::with_capacity(groups * ds.len());
    let mut labels = Vec::with_capacity(groups * ds.len());
    let mut x = Vec::with_capacity(groups * ds.len());
    for (i, (kb, xi)) in base.matrix.bodies.iter().zip(&base.x).enumerate() {
        for d in &ds {
            let body = polarized_body(kb, &cube, d)?;
            check(body.is_nondegenerate(), "degenerate polarized body")?;
            bodies.push(body);
            labels.push((i, delta_label(d)));
            x.push(polarization_sign(k, d) * xi / &kfact);
        }
    }
    let mut y = vec![BigRational::zero(); bodies.len()];
    y[(groups - 1) * ds.len() + lead] = BigRational::one();

    let c = vec![cube; n - 2 * k];
    let matrix = build_matrix(&bodies, k, &c)?;
    let collapsed = collapse(&matrix.entries, k)?;
    check(collapsed == base.matrix.entries, "double polarization does not reproduce the base matrix")?;
    let x_my = matrix.entries.pairing(&x, &y)?;
    let x_mx = matrix.entries.pairing(&x, &x)?;
    check(x_my == base.x_my, "<x~,M~y~> differs from <x,My>")?;
    check(x_mx == base.x_mx, "<x~,M~x~> differs from <x,Mx>")?;

    let (core, violation) = locate_violation(&matrix.entries, cap)?;
    let body_entries = indexed(&bodies)
        .into_iter()
        .zip(labels)
        .map(|(b, (i, d))| IndexedBody {
            base: Some(i),
            delta: Some(d),
            ..b
        })
        .collect();
    let certificate = Certificate {
        version: CERTIFICATE_VERSION,
        kind: CertificateKind::PolarizedReduction,
        n,
        k,
        bodies: body_entries,
        c_list: c.iter().map(|b| b.widths().to_vec()).collect(),
        x,
        y,
        x_my: Some(x_my),
        x_mx: Some(x_mx),
        matrix: matrix.entries.to_rows(),
        violation,
        trace: Trace {
            alpha: Some(base.alpha.clone()),
            alpha_square: Some(base.alpha_square.clone()),
            shifts: base.powers.shifts.clone(),
            base_m: Some(base.m()),
            base_x_my: Some(base.x_my.clone()),
            base_x_mx: Some(base.x_mx.clone()),
            core,
            ..Trace::default()
        },
    };
    Ok(Reduction {
        certificate,
        matrix,
        collapsed,
    })
}

/// `k = 2` directly, `k > 2` through the reduction from the `k = 2` base in
/// the same dimension.
pub fn construct(n: usize, k: usize, cap: usize) -> Result<Certificate> {
    check_construct_bounds(n, k)?;
    let base = k2_base(n)?;
    if k == 2 {
        certificate_from_base(&base, cap)
    } else {
        Ok(reduce_to_general_k(&base, k, cap)?.certificate)
    }
}
