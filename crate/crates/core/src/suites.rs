//! Randomized and exhaustive property suites over exact arithmetic.
//!
//! Every case draws from its own ChaCha stream `(seed, suite, case)`, so a
//! suite's outcome depends only on the seed, never on scheduling.

use num_integer::binomial;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::cubefam::{minkowski_combine, BoxBody};
use crate::diffop::{
    apply, express_as_powers, h_vector_cube, hr_check, hr_form, is_primitive, op_from_box, pairing_rank,
    primitive_space_basis, SlabOperator, SlabPolynomial,
};
use crate::error::Result;
use crate::exactlin::rational::{factorial, int, rat, sign_power};
use crate::exactlin::{det, inertia, RatMatrix};
use crate::fedotov::{build_matrix, construct, random_search, shephard_verify, verify_certificate, SearchConfig};
use crate::hypmat::{af_form_check, equality_witness, is_hyperbolic, sylvester_violation, DEFAULT_ENUMERATION_CAP};
use crate::mixvol::{
    af_check, iterated_af_check, mixed_volume, mixed_volume_via_derivatives, polarization_identity_check, BodyTuple,
};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SuiteReport {
    pub name: String,
    pub cases: usize,
    pub failures: Vec<String>,
    /// Extra counts worth reporting (e.g. how many cases hit each branch).
    pub detail: String,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

fn stream(seed: u64, suite: u64, case: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream((suite << 32) | case as u64);
    rng
}

/// Runs `cases` independent checks in parallel; each returns `Ok(None)` on
/// success, `Ok(Some(reason))` on a property failure.
fn run_cases<F>(name: String, seed: u64, suite: u64, cases: usize, f: F) -> SuiteReport
where
    F: Fn(&mut ChaCha8Rng) -> Result<Option<String>> + Sync,
{
    run_tallied(name, seed, suite, cases, |rng| Ok((f(rng)?, false))).0
}

/// As [`run_cases`], also counting the cases whose check reports `true`.
fn run_tallied<F>(name: String, seed: u64, suite: u64, cases: usize, f: F) -> (SuiteReport, usize)
where
    F: Fn(&mut ChaCha8Rng) -> Result<(Option<String>, bool)> + Sync,
{
    let outcomes: Vec<(Option<String>, bool)> = (0..cases)
        .into_par_iter()
        .map(|i| {
            let mut rng = stream(seed, suite, i);
            match f(&mut rng) {
                Ok((fail, tally)) => (fail.map(|r| format!("case {i}: {r}")), tally),
                Err(e) => (Some(format!("case {i}: error: {e}")), false),
            }
        })
        .collect();
    let tally = outcomes.iter().filter(|o| o.1).count();
    let report = SuiteReport {
        name,
        cases,
        failures: outcomes.into_iter().filter_map(|o| o.0).collect(),
        detail: String::new(),
    };
    (report, tally)
}

fn pos_rat(rng: &mut ChaCha8Rng) -> BigRational {
    rat(rng.gen_range(1..=12), rng.gen_range(1..=4))
}

fn any_rat(rng: &mut ChaCha8Rng) -> BigRational {
    rat(rng.gen_range(-12..=12), rng.gen_range(1..=4))
}

fn rand_box(rng: &mut ChaCha8Rng, n: usize) -> BoxBody {
    let w = (0..n).map(|_| pos_rat(rng)).collect();
    let o = (0..n).map(|_| any_rat(rng)).collect();
    BoxBody::with_offset(w, o).expect("positive widths")
}

fn rand_boxes(rng: &mut ChaCha8Rng, n: usize, count: usize) -> Vec<BoxBody> {
    (0..count).map(|_| rand_box(rng, n)).collect()
}

fn widths_of(bodies: &[BoxBody]) -> String {
    bodies.iter().map(BoxBody::describe).collect::<Vec<_>>().join(" ")
}

/// Alexandrov-Fenchel `V(K,L,C…)² >= V(K,K,C…) V(L,L,C…)`.
pub fn af_suite(n: usize, cases: usize, seed: u64) -> SuiteReport {
    run_cases(format!("alexandrov-fenchel n={n}"), seed, 1 + n as u64, cases, |rng| {
        let k = rand_box(rng, n);
        let l = rand_box(rng, n);
        let c = rand_boxes(rng, n, n - 2);
        let r = af_check(&k, &l, &c)?;
        Ok((!r.holds).then(|| format!("{} < {} for {}", r.lhs, r.rhs, widths_of(&[k, l]))))
    })
}

/// `(-1)^{|I|} det M_I <= 0` on every principal minor of random `k = 1`
/// matrices.
pub fn shephard_suite(cases: usize, seed: u64) -> SuiteReport {
    run_cases("shephard minors".into(), seed, 10, cases, |rng| {
        let n = rng.gen_range(2..=6);
        let m = rng.gen_range(1..=6);
        let bodies = rand_boxes(rng, n, m);
        let c = rand_boxes(rng, n, n - 2);
        let r = shephard_verify(&build_matrix(&bodies, 1, &c)?)?;
        Ok(r.violation.map(|v| format!("minor {:?} has det {} (n={n}, m={m})", v.subset, v.det)))
    })
}

/// Homothetic bodies: the Shephard matrix is singular, and the equality
/// witness re-verifies.
pub fn homothety_suite(cases: usize, seed: u64) -> SuiteReport {
    run_cases("shephard homothety equality".into(), seed, 11, cases, |rng| {
        let n = rng.gen_range(2..=6);
        let m = rng.gen_range(2..=5);
        let base = rand_box(rng, n);
        let bodies: Vec<BoxBody> = (0..m)
            .map(|_| minkowski_combine(&[(pos_rat(rng), &base)]))
            .collect::<Result<_>>()?;
        let c = rand_boxes(rng, n, n - 2);
        let fm = build_matrix(&bodies, 1, &c)?;
        let r = shephard_verify(&fm)?;
        if !r.passed() || !r.det.is_zero() {
            return Ok(Some(format!("det {} passed {}", r.det, r.passed())));
        }
        // equality_witness re-verifies internally and errors otherwise
        let w = equality_witness(&fm.entries)?;
        let xy = fm.entries.pairing(&w.x, &w.y)?;
        let ok = &xy * &xy == fm.entries.pairing(&w.x, &w.x)? * fm.entries.pairing(&w.y, &w.y)?;
        Ok((!ok).then(|| "witness does not attain equality".into()))
    })
}

/// Two bodies, any `k`: `det M <= 0`.
pub fn two_body_suite(cases: usize, seed: u64) -> SuiteReport {
    run_cases("two-body determinant".into(), seed, 12, cases, |rng| {
        let n = rng.gen_range(2..=6);
        let k = rng.gen_range(1..=n / 2);
        let bodies = rand_boxes(rng, n, 2);
        let c = rand_boxes(rng, n, n - 2 * k);
        let d = det(&build_matrix(&bodies, k, &c)?.entries)?;
        Ok(d.is_positive().then(|| format!("det {d} > 0 (n={n}, k={k})")))
    })
}

/// `V(K1[k],K2[l],C…)^{k+l} >= V(K1[k+l],C…)^k V(K2[k+l],C…)^l`.
pub fn iterated_af_suite(cases: usize, seed: u64) -> SuiteReport {
    run_cases("iterated alexandrov-fenchel".into(), seed, 13, cases, |rng| {
        let n = rng.gen_range(2..=6);
        let k = rng.gen_range(1..n);
        let l = rng.gen_range(1..=n - k);
        let k1 = rand_box(rng, n);
        let k2 = rand_box(rng, n);
        let c = rand_boxes(rng, n, n - k - l);
        let r = iterated_af_check(&k1, &k2, k, l, &c)?;
        Ok((!r.holds).then(|| format!("n={n} k={k} l={l}: {} < {}", r.lhs, r.rhs)))
    })
}

fn random_positive_symmetric(rng: &mut ChaCha8Rng, d: usize) -> RatMatrix {
    let mut m = RatMatrix::zeros(d, d).to_rows();
    for i in 0..d {
        for j in i..d {
            let v = pos_rat(rng);
            m[i][j] = v.clone();
            m[j][i] = v;
        }
    }
    RatMatrix::from_rows(m).expect("square")
}

/// Exact inertia against principal minor signs; half the cases are
/// Shephard matrices so both branches occur.
pub fn hyperbolicity_suite(cases: usize, seed: u64) -> SuiteReport {
    let (mut report, hyperbolic) = run_tallied("hyperbolicity equivalence".into(), seed, 14, cases, |rng| {
        let d = rng.gen_range(1..=6);
        let m = if rng.gen_bool(0.5) {
            random_positive_symmetric(rng, d)
        } else {
            let n = rng.gen_range(2..=5);
            let bodies = rand_boxes(rng, n, d);
            let c = rand_boxes(rng, n, n - 2);
            build_matrix(&bodies, 1, &c)?.entries
        };
        let hyp = is_hyperbolic(&m)?;
        let fail = match sylvester_violation(&m)? {
            Some(v) if hyp => Some(format!("hyperbolic yet minor {:?} violates", v.subset)),
            Some(v) => (!v.verify(&m)?).then(|| "violation does not re-verify".into()),
            None if !hyp => Some("not hyperbolic yet no violating minor".into()),
            None => {
                let mut fail = None;
                for _ in 0..20 {
                    let x: Vec<BigRational> = (0..d).map(|_| rat(rng.gen_range(0..=6), rng.gen_range(1..=3))).collect();
                    let y: Vec<BigRational> = (0..d).map(|_| rat(rng.gen_range(0..=6), rng.gen_range(1..=3))).collect();
                    if !af_form_check(&m, &x, &y)? {
                        fail = Some("reverse Cauchy-Schwarz fails on a hyperbolic matrix".into());
                        break;
                    }
                }
                fail
            }
        };
        Ok((fail, hyp))
    });
    report.detail = format!("{hyperbolic} hyperbolic, {} not", cases - hyperbolic);
    report
}

fn random_tuple(rng: &mut ChaCha8Rng, n: usize) -> Result<BodyTuple> {
    let mut entries = Vec::new();
    let mut left = n;
    while left > 0 {
        let mult = rng.gen_range(1..=left);
        entries.push((rand_box(rng, n), mult));
        left -= mult;
    }
    BodyTuple::new(n, entries)
}

/// Permanent route against the symbolic derivative route.
pub fn oracle_suite(cases: usize, seed: u64) -> SuiteReport {
    run_cases("mixed volume oracle equivalence".into(), seed, 15, cases, |rng| {
        let n = rng.gen_range(1..=6);
        let t = random_tuple(rng, n)?;
        let (a, b) = (mixed_volume(&t), mixed_volume_via_derivatives(&t));
        Ok((a != b || !a.is_positive()).then(|| format!("permanent {a} vs derivatives {b}")))
    })
}

fn random_combination(rng: &mut ChaCha8Rng, basis: &[SlabOperator], n: usize, k: usize) -> Result<SlabOperator> {
    let mut acc = SlabOperator::zero(n, k);
    for b in basis {
        acc = acc.add(&b.scale(&rat(rng.gen_range(-5..=5), rng.gen_range(1..=3))))?;
    }
    Ok(acc)
}

/// `(-1)^k α² D_{C_1} ⋯ V >= 0` on primitive `α`, equality iff `αV = 0`.
pub fn hodge_riemann_suite(cases: usize, seed: u64) -> SuiteReport {
    run_cases("hodge-riemann positivity".into(), seed, 16, cases, |rng| {
        let n = rng.gen_range(2..=6);
        let k = rng.gen_range(1..=n / 2);
        let l = rand_box(rng, n);
        let c = rand_boxes(rng, n, n - 2 * k);
        let basis = primitive_space_basis(k, &l, &c)?;
        let alpha = random_combination(rng, &basis, n, k)?;
        let r = hr_check(&alpha, &l, &c)?;
        Ok((!r.sign_ok || !r.equality_iff_zero_ok).then(|| format!("n={n} k={k} value {}", r.value)))
    })
}

/// Primitive dimension `C(n,k) - C(n,k-1)` and pairing rank `C(n,k)` with
/// every body the cube.
pub fn hodge_dimension_suite(dims: &[usize]) -> SuiteReport {
    let mut failures = Vec::new();
    let mut cases = 0;
    for &n in dims {
        let h = h_vector_cube(n);
        let expected: Vec<u64> = (0..=n).map(|k| binomial(n as u64, k as u64)).collect();
        if h != expected || h.iter().sum::<u64>() != 1 << n {
            failures.push(format!("h-vector for n={n} is {h:?}"));
        }
        let cube = BoxBody::unit_cube(n);
        for k in 1..=n / 2 {
            cases += 1;
            let c = vec![cube.clone(); n - 2 * k];
            let dim = primitive_space_basis(k, &cube, &c).map(|b| b.len());
            let want = (h[k] - h[k - 1]) as usize;
            if dim.as_ref().ok() != Some(&want) {
                failures.push(format!("n={n} k={k}: primitive dimension {dim:?}, expected {want}"));
            }
            let rank = pairing_rank(n, k, &c);
            if rank.as_ref().ok() != Some(&(h[k] as usize)) {
                failures.push(format!("n={n} k={k}: pairing rank {rank:?}, expected {}", h[k]));
            }
        }
    }
    SuiteReport {
        name: "cube h-vector".into(),
        cases,
        failures,
        detail: String::new(),
    }
}

/// `α = ∂₁∂₂ + ∂₃∂₄ − ∂₁∂₃ − ∂₂∂₄` in dimension 4 is primitive with
/// `α² V = 4`.
pub fn explicit_hr_value() -> SuiteReport {
    let mut failures = Vec::new();
    let check = || -> Result<Vec<String>> {
        let mut f = Vec::new();
        let alpha = SlabOperator::from_i64(4, &[(&[0, 1], 1), (&[2, 3], 1), (&[0, 2], -1), (&[1, 3], -1)])?;
        let cube = BoxBody::unit_cube(4);
        if !is_primitive(&alpha, &cube, &[])? {
            f.push("alpha is not primitive".into());
        }
        let first = apply(&op_from_box(&cube, 1)?, &SlabPolynomial::volume(4))?;
        if !apply(&alpha, &first)?.is_zero() {
            f.push("alpha does not annihilate (D_cube) V".into());
        }
        let v = hr_form(&alpha, &alpha, &[])?;
        if v != int(4) {
            f.push(format!("alpha^2 V = {v}, expected 4"));
        }
        let r = hr_check(&alpha, &cube, &[])?;
        if !r.sign_ok || !r.equality_iff_zero_ok {
            f.push("Hodge-Riemann check fails".into());
        }
        Ok(f)
    };
    match check() {
        Ok(f) => failures.extend(f),
        Err(e) => failures.push(format!("error: {e}")),
    }
    SuiteReport {
        name: "explicit hodge-riemann value".into(),
        cases: 1,
        failures,
        detail: String::new(),
    }
}

/// `hr_form(D_K^k, D_{K'}^k, C) / n! = V(K[k], K'[k], C…)`.
pub fn consistency_suite(cases: usize, seed: u64) -> SuiteReport {
    run_cases("operator and mixed volume consistency".into(), seed, 17, cases, |rng| {
        let n = rng.gen_range(2..=6);
        let k = rng.gen_range(1..=n / 2);
        let a = rand_box(rng, n);
        let b = rand_box(rng, n);
        let c = rand_boxes(rng, n, n - 2 * k);
        let lhs = hr_form(&op_from_box(&a, k)?, &op_from_box(&b, k)?, &c)? / BigRational::from_integer(factorial(n));
        let mut entries = vec![(a, k), (b, k)];
        entries.extend(c.into_iter().map(|x| (x, 1)));
        let rhs = mixed_volume(&BodyTuple::new(n, entries)?);
        Ok((lhs != rhs).then(|| format!("{lhs} vs {rhs}")))
    })
}

/// `express_as_powers` reproduces random operators with nondegenerate boxes.
pub fn power_roundtrip_suite(cases: usize, seed: u64) -> SuiteReport {
    run_cases("power combination roundtrip".into(), seed, 18, cases, |rng| {
        let n = rng.gen_range(1..=5);
        let k = rng.gen_range(1..=n.min(2));
        let coeffs: Vec<BigRational> = crate::diffop::k_subsets(n, k)
            .iter()
            .map(|_| if rng.gen_bool(0.6) { any_rat(rng) } else { BigRational::zero() })
            .collect();
        let alpha = SlabOperator::from_coefficient_vector(n, k, &coeffs)?;
        let p = express_as_powers(&alpha)?;
        if p.terms.iter().any(|(_, b)| !b.is_nondegenerate()) {
            return Ok(Some("degenerate body in combination".into()));
        }
        Ok((p.to_operator(n)? != alpha).then(|| format!("roundtrip differs for {alpha}")))
    })
}

/// Determinant, inertia and congruence identities.
pub fn linear_algebra_suite(cases: usize, seed: u64) -> SuiteReport {
    run_cases("exact linear algebra".into(), seed, 19, cases, |rng| {
        let d = rng.gen_range(1..=8);
        let a = RatMatrix::from_fn(d, d, |_, _| any_rat(rng));
        if det(&a)? != det(&a.transpose())? {
            return Ok(Some("det differs from det of transpose".into()));
        }
        let s = rng.gen_range(1..=6);
        let mut rows = RatMatrix::zeros(s, s).to_rows();
        for i in 0..s {
            for j in i..s {
                let v = any_rat(rng);
                rows[i][j] = v.clone();
                rows[j][i] = v;
            }
        }
        let m = RatMatrix::from_rows(rows)?;
        let p = RatMatrix::from_fn(s, s, |_, _| any_rat(rng));
        let inm = inertia(&m)?;
        if !det(&p)?.is_zero() && inertia(&p.transpose().mul(&m)?.mul(&p)?)? != inm {
            return Ok(Some("inertia changed under congruence".into()));
        }
        let dm = det(&m)?;
        let sign_ok = if inm.zero > 0 {
            dm.is_zero()
        } else {
            !dm.is_zero() && (sign_power(inm.negative) * &dm).is_positive()
        };
        Ok((!sign_ok).then(|| format!("det {dm} inconsistent with inertia {inm}")))
    })
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for pos in 0..=p.len() {
            let mut q = p.clone();
            q.insert(pos, n - 1);
            out.push(q);
        }
    }
    out
}

/// Permutation symmetry (all orders, `n <= 5`), multilinearity and
/// positivity of mixed volumes.
pub fn symmetry_suite(cases: usize, seed: u64) -> SuiteReport {
    run_cases("mixed volume symmetry and multilinearity".into(), seed, 20, cases, |rng| {
        let n = rng.gen_range(1..=5);
        let bodies = rand_boxes(rng, n, n);
        let reference = mixed_volume(&BodyTuple::from_bodies(bodies.clone())?);
        if !reference.is_positive() {
            return Ok(Some("mixed volume of nondegenerate boxes is not positive".into()));
        }
        for p in permutations(n) {
            let t = BodyTuple::from_bodies(p.iter().map(|&i| bodies[i].clone()).collect())?;
            if mixed_volume(&t) != reference {
                return Ok(Some(format!("order {p:?} changes the value")));
            }
        }
        let (a, b) = (pos_rat(rng), pos_rat(rng));
        let other = rand_box(rng, n);
        let mixed = minkowski_combine(&[(a.clone(), &bodies[0]), (b.clone(), &other)])?;
        let mut with_mixed = bodies.clone();
        with_mixed[0] = mixed;
        let mut with_other = bodies.clone();
        with_other[0] = other;
        let lhs = mixed_volume(&BodyTuple::from_bodies(with_mixed)?);
        let rhs = a * &reference + b * mixed_volume(&BodyTuple::from_bodies(with_other)?);
        Ok((lhs != rhs).then(|| format!("multilinearity: {lhs} vs {rhs}")))
    })
}

/// `V(R_1,…,R_k,tail)` against its polarization into pure powers.
pub fn polarization_suite(cases: usize, seed: u64) -> SuiteReport {
    run_cases("polarization identity".into(), seed, 21, cases, |rng| {
        let n = rng.gen_range(1..=6);
        let k = rng.gen_range(1..=n.min(3));
        let r = rand_boxes(rng, n, k);
        let tail: Vec<(BoxBody, usize)> = rand_boxes(rng, n, n - k).into_iter().map(|b| (b, 1)).collect();
        let c = polarization_identity_check(&r, &tail)?;
        Ok((!c.equal).then(|| format!("{} vs {}", c.lhs, c.rhs)))
    })
}

/// Explicit constructions re-verified independently, and the random search
/// at `k = 1` (where no violation can exist).
pub fn certificate_suite(seed: u64) -> SuiteReport {
    let mut failures = Vec::new();
    let mut cases = 0;
    for (n, k) in [(4, 2), (5, 2), (6, 2), (6, 3)] {
        cases += 1;
        match construct(n, k, DEFAULT_ENUMERATION_CAP) {
            Ok(c) => {
                let v = verify_certificate(&c);
                if !v.valid() {
                    failures.push(format!("n={n} k={k}: {}", v.failures.join("; ")));
                }
            }
            Err(e) => failures.push(format!("n={n} k={k}: {e}")),
        }
    }
    for n in 2..=5 {
        cases += 1;
        match random_search(&SearchConfig::new(n, 1, 5, 40, seed, DEFAULT_ENUMERATION_CAP)) {
            Ok(o) if o.certificate.is_none() && o.stats.hyperbolic == 40 => {}
            Ok(o) => failures.push(format!("k=1 search in n={n} reports {:?}", o.stats)),
            Err(e) => failures.push(format!("k=1 search in n={n}: {e}")),
        }
    }
    SuiteReport {
        name: "certificates".into(),
        cases,
        failures,
        detail: String::new(),
    }
}

/// Every suite with the case counts used by the self-test.
pub fn run_all(seed: u64) -> Vec<SuiteReport> {
    let mut out: Vec<SuiteReport> = (2..=6).map(|n| af_suite(n, 1000, seed)).collect();
    out.push(shephard_suite(200, seed));
    out.push(homothety_suite(50, seed));
    out.push(two_body_suite(200, seed));
    out.push(iterated_af_suite(200, seed));
    out.push(hyperbolicity_suite(500, seed));
    out.push(oracle_suite(500, seed));
    out.push(hodge_riemann_suite(100, seed));
    out.push(hodge_dimension_suite(&[1, 2, 3, 4, 5, 6]));
    out.push(explicit_hr_value());
    out.push(consistency_suite(200, seed));
    out.push(power_roundtrip_suite(200, seed));
    out.push(linear_algebra_suite(200, seed));
    out.push(symmetry_suite(100, seed));
    out.push(polarization_suite(100, seed));
    out.push(certificate_suite(seed));
    out
}
