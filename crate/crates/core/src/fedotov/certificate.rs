//! Self-contained witnesses of a principal minor with the forbidden sign,
//! and their independent re-verification.

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::cubefam::BoxBody;
use crate::diffop::{hr_form, is_primitive, SlabOperator};
use crate::error::{Error, Result};
use crate::exactlin::rational::{factorial, serde_str, sign_power};
use crate::exactlin::{det, principal_submatrix, RatMatrix};
use crate::hypmat::Violation;

use super::matrix::{check_shape, matrix_via_derivatives};
use super::polar::{delta_label, deltas, polarization_sign, polarized_body};

pub const CERTIFICATE_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CertificateKind {
    /// Primitive operator written as powers, plus the reference cube.
    HodgeRiemann,
    /// Bodies `K_{iδ}` obtained from a `k = 2` construction.
    PolarizedReduction,
    /// Random instance; no `x`, `y` data.
    DirectSearch,
}

impl CertificateKind {
    pub fn as_str(self) -> &'static str {
        match self {
            Self::HodgeRiemann => "hodge-riemann",
            Self::PolarizedReduction => "polarized-reduction",
            Self::DirectSearch => "direct-search",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IndexedBody {
    pub index: usize,
    #[serde(with = "serde_str::vec")]
    pub widths: Vec<BigRational>,
    /// Index `i` of the underlying `k = 2` body, for reductions.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub base: Option<usize>,
    /// `δ` as a binary string, for reductions.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub delta: Option<String>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Trace {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha: Option<SlabOperator>,
    /// `α² (D_Δ)^{n-4} V`.
    #[serde(default, skip_serializing_if = "Option::is_none", with = "serde_str::option")]
    pub alpha_square: Option<BigRational>,
    #[serde(default, skip_serializing_if = "Vec::is_empty", with = "serde_str::vec")]
    pub shifts: Vec<BigRational>,
    /// Number of power terms `m` before the reference cube was appended.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub base_m: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none", with = "serde_str::option")]
    pub base_x_my: Option<BigRational>,
    #[serde(default, skip_serializing_if = "Option::is_none", with = "serde_str::option")]
    pub base_x_mx: Option<BigRational>,
    /// Index set handed to the exhaustive minor search.
    #[serde(default)]
    pub core: Vec<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub trial: Option<u64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Certificate {
    pub version: u32,
    pub kind: CertificateKind,
    pub n: usize,
    pub k: usize,
    pub bodies: Vec<IndexedBody>,
    #[serde(with = "serde_str::matrix")]
    pub c_list: Vec<Vec<BigRational>>,
    #[serde(default, with = "serde_str::vec")]
    pub x: Vec<BigRational>,
    #[serde(default, with = "serde_str::vec")]
    pub y: Vec<BigRational>,
    #[serde(default, skip_serializing_if = "Option::is_none", with = "serde_str::option")]
    pub x_my: Option<BigRational>,
    #[serde(default, skip_serializing_if = "Option::is_none", with = "serde_str::option")]
    pub x_mx: Option<BigRational>,
    #[serde(with = "serde_str::matrix")]
    pub matrix: Vec<Vec<BigRational>>,
    pub violation: Violation,
    pub trace: Trace,
}

impl Certificate {
    /// Pretty JSON with keys in sorted order and a trailing newline.
    pub fn to_json(&self) -> String {
        let value = serde_json::to_value(self).expect("certificate serializes");
        let mut s = serde_json::to_string_pretty(&value).expect("value serializes");
        s.push('\n');
        s
    }

    pub fn from_json(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }

    pub fn body_boxes(&self) -> Result<Vec<BoxBody>> {
        self.bodies.iter().map(|b| BoxBody::new(b.widths.clone())).collect()
    }

    pub fn c_boxes(&self) -> Result<Vec<BoxBody>> {
        self.c_list.iter().map(|w| BoxBody::new(w.clone())).collect()
    }

    pub fn matrix(&self) -> Result<RatMatrix> {
        RatMatrix::from_rows(self.matrix.clone())
    }
}

pub(crate) fn indexed(bodies: &[BoxBody]) -> Vec<IndexedBody> {
    bodies
        .iter()
        .enumerate()
        .map(|(index, b)| IndexedBody {
            index,
            widths: b.widths().to_vec(),
            base: None,
            delta: None,
        })
        .collect()
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Verification {
    pub failures: Vec<String>,
    /// Matrix entries recomputed through the derivative path.
    pub entries_checked: usize,
}

impl Verification {
    pub fn valid(&self) -> bool {
        self.failures.is_empty()
    }

    fn fail(&mut self, msg: impl Into<String>) {
        self.failures.push(msg.into());
    }
}

/// Parses and verifies; a malformed file is reported as a failure.
pub fn verify_certificate_json(s: &str) -> Verification {
    match Certificate::from_json(s) {
        Ok(c) => verify_certificate(&c),
        Err(e) => Verification {
            failures: vec![format!("malformed certificate: {e}")],
            entries_checked: 0,
        },
    }
}

/// Re-derives every claim of the certificate from the widths alone.
///
/// Matrix entries are recomputed by symbolic differentiation of the volume
/// polynomial (the builder uses permanents), minors by fraction-free
/// elimination.
pub fn verify_certificate(c: &Certificate) -> Verification {
    let mut v = Verification::default();
    if let Err(e) = verify_into(c, &mut v) {
        v.fail(format!("aborted: {e}"));
    }
    v
}

fn verify_into(c: &Certificate, v: &mut Verification) -> Result<()> {
    if c.version != CERTIFICATE_VERSION {
        v.fail(format!("unsupported version {}", c.version));
        return Ok(());
    }
    let m = c.bodies.len();
    if let Err(e) = check_shape(c.n, c.k, m, c.c_list.len()) {
        v.fail(format!("shape: {e}"));
        return Ok(());
    }
    for (pos, b) in c.bodies.iter().enumerate() {
        if b.index != pos {
            v.fail(format!("body at position {pos} carries index {}", b.index));
        }
    }
    let widths = c.bodies.iter().map(|b| &b.widths).chain(&c.c_list);
    for w in widths {
        if w.len() != c.n {
            v.fail(format!("width list of length {} in dimension {}", w.len(), c.n));
            return Ok(());
        }
        if !w.iter().all(Signed::is_positive) {
            v.fail("degenerate body (a width is not positive)");
            return Ok(());
        }
    }
    let bodies = c.body_boxes()?;
    let c_boxes = c.c_boxes()?;

    let stored = match c.matrix() {
        Ok(s) if s.rows() == m && s.cols() == m => s,
        _ => {
            v.fail(format!("matrix is not {m} x {m}"));
            return Ok(());
        }
    };
    let recomputed = matrix_via_derivatives(&bodies, c.k, &c_boxes)?;
    v.entries_checked = m * m;
    let mismatches = (0..m)
        .flat_map(|i| (0..m).map(move |j| (i, j)))
        .filter(|&(i, j)| stored[(i, j)] != recomputed[(i, j)])
        .count();
    if mismatches > 0 {
        v.fail(format!("{mismatches} matrix entries differ from recomputed mixed volumes"));
    }

    verify_violation(c, &recomputed, v)?;
    match c.kind {
        CertificateKind::DirectSearch => {
            if !c.x.is_empty() || !c.y.is_empty() {
                v.fail("direct-search certificate carries x or y");
            }
        }
        CertificateKind::HodgeRiemann | CertificateKind::PolarizedReduction => {
            verify_pairings(c, &recomputed, v)?;
        }
    }
    match c.kind {
        CertificateKind::HodgeRiemann => verify_hodge_trace(c, &bodies, &c_boxes, v)?,
        CertificateKind::PolarizedReduction => verify_reduction(c, &bodies, v)?,
        CertificateKind::DirectSearch => {}
    }
    Ok(())
}

fn verify_violation(c: &Certificate, m: &RatMatrix, v: &mut Verification) -> Result<()> {
    let subset = &c.violation.subset;
    let sorted = subset.windows(2).all(|w| w[0] < w[1]);
    if subset.is_empty() || !sorted || subset.iter().any(|&i| i >= m.rows()) {
        v.fail(format!("violating subset {subset:?} is not a sorted index set"));
        return Ok(());
    }
    let d = det(&principal_submatrix(m, subset)?)?;
    if d != c.violation.det {
        v.fail(format!("det M_I is {d}, certificate states {}", c.violation.det));
    }
    if !(sign_power(subset.len()) * &d).is_positive() {
        v.fail(format!("(-1)^|I| det M_I = {} is not positive", sign_power(subset.len()) * &d));
    }
    Ok(())
}

fn verify_pairings(c: &Certificate, m: &RatMatrix, v: &mut Verification) -> Result<()> {
    if c.x.len() != m.rows() || c.y.len() != m.rows() {
        v.fail("x and y must have one entry per body");
        return Ok(());
    }
    let xy = m.pairing(&c.x, &c.y)?;
    let xx = m.pairing(&c.x, &c.x)?;
    if !xy.is_zero() {
        v.fail(format!("<x,My> = {xy}, expected 0"));
    }
    if !xx.is_positive() {
        v.fail(format!("<x,Mx> = {xx} is not positive"));
    }
    if c.x_my.as_ref() != Some(&xy) {
        v.fail("stored <x,My> does not match");
    }
    if c.x_mx.as_ref() != Some(&xx) {
        v.fail("stored <x,Mx> does not match");
    }
    Ok(())
}

fn is_unit(e: &[BigRational], at: usize) -> bool {
    e.iter()
        .enumerate()
        .all(|(i, q)| if i == at { q.is_one() } else { q.is_zero() })
}

fn verify_hodge_trace(c: &Certificate, bodies: &[BoxBody], c_boxes: &[BoxBody], v: &mut Verification) -> Result<()> {
    let cube = BoxBody::unit_cube(c.n);
    let last = bodies.len() - 1;
    if c.k != 2 || c_boxes.iter().any(|b| b.widths() != cube.widths()) {
        v.fail("expected k = 2 with every C the unit cube");
        return Ok(());
    }
    if bodies[last].widths() != cube.widths() || !is_unit(&c.y, last) || c.x.get(last).is_some_and(|q| !q.is_zero()) {
        v.fail("expected the unit cube last, y = e_last and x_last = 0");
    }
    let (Some(alpha), Some(square)) = (&c.trace.alpha, &c.trace.alpha_square) else {
        v.fail("trace lacks the primitive operator");
        return Ok(());
    };
    if alpha.dim() != c.n || alpha.degree() != 2 {
        v.fail("trace operator has the wrong shape");
        return Ok(());
    }
    if !is_primitive(alpha, &cube, c_boxes)? {
        v.fail("trace operator is not primitive");
    }
    if &hr_form(alpha, alpha, c_boxes)? != square {
        v.fail("trace alpha_square does not match");
    }
    if c.x_mx.as_ref() != Some(&(square / BigRational::from_integer(factorial(c.n)))) {
        v.fail("<x,Mx> differs from alpha_square / n!");
    }
    let mut sum = SlabOperator::zero(c.n, 2);
    for (x, b) in c.x.iter().zip(bodies).take(last) {
        sum = sum.add(&crate::diffop::op_from_box(b, 2)?.scale(x))?;
    }
    if &sum != alpha {
        v.fail("sum of x_i (D_{K_i})^2 differs from the trace operator");
    }
    Ok(())
}

/// Reconstructs the `k = 2` data behind a reduction and checks the
/// double polarization identity against it.
fn verify_reduction(c: &Certificate, bodies: &[BoxBody], v: &mut Verification) -> Result<()> {
    let k = c.k;
    let ds = deltas(k);
    if c.n < 4 || !bodies.len().is_multiple_of(ds.len()) {
        v.fail("body count is not a multiple of 2^k - 1");
        return Ok(());
    }
    let groups = bodies.len() / ds.len();
    let lead = ds.iter().position(|d| d[0] == 1 && d[1..].iter().all(|&b| b == 0)).expect("(1,0,…,0) is listed");
    let cube = BoxBody::unit_cube(c.n);
    if c.c_list.iter().any(|w| w.as_slice() != cube.widths()) {
        v.fail("expected every C to be the unit cube");
    }
    let kfact = BigRational::from_integer(factorial(k));

    let mut base_bodies = Vec::with_capacity(groups);
    let mut base_x = Vec::with_capacity(groups);
    for i in 0..groups {
        let kb = &bodies[i * ds.len() + lead];
        let xi = &c.x[i * ds.len() + lead] * &kfact * polarization_sign(k, &ds[lead]);
        for (p, d) in ds.iter().enumerate() {
            let at = i * ds.len() + p;
            let entry = &c.bodies[at];
            if entry.base != Some(i) || entry.delta.as_deref() != Some(delta_label(d).as_str()) {
                v.fail(format!("body {at} is not labelled ({i}, {})", delta_label(d)));
                return Ok(());
            }
            if polarized_body(kb, &cube, d)?.widths() != bodies[at].widths() {
                v.fail(format!("body {at} is not (d1+d2)K_{i} + (d3+...)cube"));
            }
            if c.x[at] != polarization_sign(k, d) * &xi / &kfact {
                v.fail(format!("x entry {at} is not the polarized coefficient"));
            }
        }
        base_bodies.push(kb.clone());
        base_x.push(xi);
    }
    if !is_unit(&c.y, (groups - 1) * ds.len() + lead) || base_bodies[groups - 1].widths() != cube.widths() {
        v.fail("y must select the unit cube with delta (1,0,...,0)");
    }
    if c.trace.base_m != Some(groups - 1) {
        v.fail("trace base_m does not match the body count");
    }

    let base_c = vec![cube; c.n - 4];
    let base = matrix_via_derivatives(&base_bodies, 2, &base_c)?;
    let mut base_y = vec![BigRational::zero(); groups];
    base_y[groups - 1] = BigRational::one();
    let xy = base.pairing(&base_x, &base_y)?;
    let xx = base.pairing(&base_x, &base_x)?;
    if !xy.is_zero() || c.trace.base_x_my.as_ref() != Some(&xy) {
        v.fail(format!("base <x,My> = {xy} is not zero or not as stored"));
    }
    if c.trace.base_x_mx.as_ref() != Some(&xx) || c.x_mx.as_ref() != Some(&xx) {
        v.fail(format!("base <x,Mx> = {xx} differs from the reduced pairing"));
    }
    Ok(())
}

/// Convenience used by callers that want an error instead of a report.
pub fn ensure_valid(c: &Certificate) -> Result<()> {
    let r = verify_certificate(c);
    if r.valid() {
        Ok(())
    } else {
        Err(Error::CheckFailed(r.failures.join("; ")))
    }
}
