//! Subcommand bodies. Each returns an [`Outcome`] holding both renderings;
//! bounds problems come back as [`UsageError`] naming the flag.

use std::fmt;
use std::path::Path;

use num_traits::Zero;
use serde::Deserialize;
use serde_json::{json, Value};

use mixcert::cubefam::BoxBody;
use mixcert::diffop::{h_vector_cube, hr_check, pairing_rank, primitive_space_basis};
use mixcert::exactlin::rational::{format_rational, sign_power};
use mixcert::fedotov::{
    build_matrix, check_construct_bounds, construct as build_certificate, random_search, shephard_verify,
    trial_instance, verify_certificate, verify_certificate_json, Certificate, SearchConfig,
};
use mixcert::mixvol::{mixed_volume, mixed_volume_via_derivatives, BodyTuple, MAX_PERMANENT_DIM};
use mixcert::suites::run_all;
use mixcert::Error;

use crate::ShephardArgs;

#[derive(Debug)]
pub struct UsageError(String);

impl UsageError {
    pub fn flag(flag: &str, msg: &str) -> Self {
        Self(format!("{flag}: {msg}"))
    }
}

impl fmt::Display for UsageError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

pub struct Outcome {
    pub text: String,
    pub json: Value,
    pub ok: bool,
    pub failures: Vec<String>,
    /// Preferred content for `--output` (a certificate file).
    pub artifact: Option<String>,
}

impl Outcome {
    pub fn json_string(&self) -> String {
        let mut s = serde_json::to_string_pretty(&self.json).expect("value serializes");
        s.push('\n');
        s
    }

    fn failed(text: String, failures: Vec<String>) -> Self {
        Self {
            json: json!({ "ok": false, "failures": failures }),
            text,
            ok: false,
            failures,
            artifact: None,
        }
    }
}

fn q(v: &mixcert::exactlin::BigRational) -> String {
    format_rational(v)
}

fn read_file(path: &Path, flag: &str) -> Result<String, UsageError> {
    std::fs::read_to_string(path).map_err(|e| UsageError::flag(flag, &format!("{}: {e}", path.display())))
}

fn check_dim(n: usize) -> Result<(), UsageError> {
    if n > MAX_PERMANENT_DIM {
        return Err(UsageError::flag("--n", &format!("at most {MAX_PERMANENT_DIM} is supported, got {n}")));
    }
    Ok(())
}

fn check_degree(n: usize, k: usize, min_k: usize) -> Result<(), UsageError> {
    if k < min_k {
        return Err(UsageError::flag("--k", &format!("must be at least {min_k}, got {k}")));
    }
    if 2 * k > n {
        return Err(UsageError::flag("--n", &format!("2k <= n is required, got n = {n}, k = {k}")));
    }
    check_dim(n)
}

/// Engine errors that stem from a flag value.
fn engine_error(e: Error) -> Result<Outcome, UsageError> {
    match e {
        Error::EnumerationTooLarge { dim, cap } => Err(UsageError::flag(
            "--max-core-size",
            &format!("core of size {dim} exceeds the limit {cap}"),
        )),
        other => Ok(Outcome::failed(format!("error: {other}\n"), vec![other.to_string()])),
    }
}

pub fn mixvol(file: &Path) -> Result<Outcome, UsageError> {
    let tuple: BodyTuple = serde_json::from_str(&read_file(file, "FILE")?)
        .map_err(|e| UsageError::flag("FILE", &format!("not a body tuple: {e}")))?;
    let a = mixed_volume(&tuple);
    let b = mixed_volume_via_derivatives(&tuple);
    let agree = a == b;
    let mut text = format!("n = {}\n", tuple.dim());
    for (body, mult) in tuple.entries() {
        text += &format!("  {} x{mult}\n", body.describe());
    }
    text += &format!("mixed volume (permanent):   {}\n", q(&a));
    text += &format!("mixed volume (derivatives): {}\n", q(&b));
    text += &format!("routes agree: {}\n", if agree { "yes" } else { "NO" });
    Ok(Outcome {
        json: json!({ "n": tuple.dim(), "permanent": q(&a), "derivatives": q(&b), "agree": agree }),
        text,
        ok: agree,
        failures: if agree { vec![] } else { vec!["permanent and derivative routes disagree".into()] },
        artifact: None,
    })
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ShephardInput {
    bodies: Vec<BoxBody>,
    #[serde(default)]
    c_list: Vec<BoxBody>,
}

pub fn shephard(a: &ShephardArgs) -> Result<Outcome, UsageError> {
    let (bodies, c) = match &a.file {
        Some(path) => {
            let input: ShephardInput = serde_json::from_str(&read_file(path, "FILE")?)
                .map_err(|e| UsageError::flag("FILE", &format!("expected {{\"bodies\", \"c_list\"}}: {e}")))?;
            (input.bodies, input.c_list)
        }
        None => {
            if a.n < 2 {
                return Err(UsageError::flag("--n", &format!("must be at least 2, got {}", a.n)));
            }
            check_dim(a.n)?;
            if a.m == 0 || a.m > mixcert::hypmat::DEFAULT_ENUMERATION_CAP {
                return Err(UsageError::flag("--m", &format!("must be between 1 and 22, got {}", a.m)));
            }
            trial_instance(&SearchConfig::new(a.n, 1, a.m, 1, a.seed, 0), 0)
        }
    };
    if bodies.iter().chain(&c).any(|b| !b.is_nondegenerate()) {
        return Err(UsageError::flag("FILE", "every body needs positive widths"));
    }
    let fm = build_matrix(&bodies, 1, &c).map_err(|e| UsageError::flag("FILE", &e.to_string()))?;
    let report = match shephard_verify(&fm) {
        Ok(r) => r,
        Err(e) => return engine_error(e),
    };
    let mut text = format!("k = 1 matrix, n = {}, m = {}\n", fm.n, fm.size());
    for (i, b) in fm.bodies.iter().enumerate() {
        text += &format!("  K{i} = {}\n", b.describe());
    }
    text += &format!("{}", fm.entries);
    text += &format!("det M = {}\n", q(&report.det));
    text += &format!("principal minors checked: {}\n", report.subsets_checked);
    match &report.violation {
        None => text += "(-1)^|I| det M_I <= 0 for every I: yes\n",
        Some(v) => text += &format!("VIOLATION at I = {:?}, det = {}\n", v.subset, q(&v.det)),
    }
    let rows: Vec<Vec<String>> = fm.entries.to_rows().iter().map(|r| r.iter().map(q).collect()).collect();
    Ok(Outcome {
        json: json!({
            "n": fm.n,
            "m": fm.size(),
            "bodies": fm.bodies.iter().map(|b| b.widths().iter().map(q).collect::<Vec<_>>()).collect::<Vec<_>>(),
            "c_list": fm.c_list.iter().map(|b| b.widths().iter().map(q).collect::<Vec<_>>()).collect::<Vec<_>>(),
            "matrix": rows,
            "det": q(&report.det),
            "subsets_checked": report.subsets_checked,
            "violation": report.violation,
            "passed": report.passed(),
        }),
        text,
        ok: report.passed(),
        failures: report.violation.iter().map(|v| format!("minor {:?} has the wrong sign", v.subset)).collect(),
        artifact: None,
    })
}

fn certificate_text(c: &Certificate) -> String {
    let mut t = format!("certificate: {}, n = {}, k = {}\n", c.kind.as_str(), c.n, c.k);
    t += &format!("bodies: {}", c.bodies.len());
    if let Some(m) = c.trace.base_m {
        t += &format!(" (from {m} power terms plus the unit cube)");
    }
    t += "\n";
    if let Some(v) = &c.x_my {
        t += &format!("<x,My> = {}\n", q(v));
    }
    if let Some(v) = &c.x_mx {
        t += &format!("<x,Mx> = {}\n", q(v));
    }
    if let Some(v) = &c.trace.base_x_mx {
        t += &format!("base <x,Mx> = {}\n", q(v));
    }
    let signed = sign_power(c.violation.subset.len()) * &c.violation.det;
    t += &format!("core: {:?}\n", c.trace.core);
    t += &format!(
        "violation: I = {:?}, det M_I = {}, (-1)^|I| det M_I = {}\n",
        c.violation.subset,
        q(&c.violation.det),
        q(&signed)
    );
    t
}

pub fn construct(n: usize, k: usize, cap: usize) -> Result<Outcome, UsageError> {
    if n < 4 {
        return Err(UsageError::flag("--n", &format!("at least 4 is required, got {n}")));
    }
    check_degree(n, k, 2)?;
    check_construct_bounds(n, k).map_err(|e| UsageError::flag("--n", &e.to_string()))?;
    let cert = match build_certificate(n, k, cap) {
        Ok(c) => c,
        Err(e) => return engine_error(e),
    };
    let ver = verify_certificate(&cert);
    let mut text = certificate_text(&cert);
    text += &verification_line(&ver);
    Ok(Outcome {
        json: serde_json::to_value(&cert).expect("certificate serializes"),
        text,
        ok: ver.valid(),
        failures: ver.failures,
        artifact: Some(cert.to_json()),
    })
}

fn verification_line(v: &mixcert::fedotov::Verification) -> String {
    if v.valid() {
        format!("independent verification: valid ({} entries recomputed)\n", v.entries_checked)
    } else {
        format!("independent verification: INVALID\n  {}\n", v.failures.join("\n  "))
    }
}

pub fn search(n: usize, k: usize, m: usize, trials: u64, seed: u64, cap: usize) -> Result<Outcome, UsageError> {
    check_degree(n, k, 1)?;
    if m == 0 {
        return Err(UsageError::flag("--m", "must be at least 1"));
    }
    let cfg = SearchConfig::new(n, k, m, trials, seed, cap);
    let out = match random_search(&cfg) {
        Ok(o) => o,
        Err(e) => return engine_error(e),
    };
    let s = &out.stats;
    let mut text = format!("random search: n = {n}, k = {k}, m = {m}, seed = {seed}\n");
    text += &format!("trials: {}, hyperbolic: {}, not hyperbolic: {}\n", s.trials, s.hyperbolic, s.non_hyperbolic);
    let mut ok = true;
    let mut failures = vec![];
    let artifact = match &out.certificate {
        None => {
            text += "no violating minor found\n";
            None
        }
        Some(c) => {
            text += &format!("first hit: trial {}\n", s.first_hit.unwrap_or_default());
            text += &certificate_text(c);
            let ver = verify_certificate(c);
            text += &verification_line(&ver);
            ok = ver.valid();
            failures = ver.failures;
            Some(c.to_json())
        }
    };
    Ok(Outcome {
        json: json!({
            "n": n, "k": k, "m": m, "seed": seed,
            "stats": {
                "trials": s.trials,
                "hyperbolic": s.hyperbolic,
                "non_hyperbolic": s.non_hyperbolic,
                "first_hit": s.first_hit,
            },
            "certificate": out.certificate,
        }),
        text,
        ok,
        failures,
        artifact,
    })
}

pub fn verify(file: &Path) -> Result<Outcome, UsageError> {
    let raw = read_file(file, "FILE")?;
    let ver = verify_certificate_json(&raw);
    let mut text = match Certificate::from_json(&raw) {
        Ok(c) => certificate_text(&c),
        Err(_) => String::new(),
    };
    text += &verification_line(&ver);
    Ok(Outcome {
        json: json!({ "valid": ver.valid(), "failures": ver.failures, "entries_checked": ver.entries_checked }),
        text,
        ok: ver.valid(),
        failures: ver.failures,
        artifact: None,
    })
}

pub fn primitive(n: usize, k: usize) -> Result<Outcome, UsageError> {
    check_degree(n, k, 1)?;
    let cube = BoxBody::unit_cube(n);
    let c = vec![cube.clone(); n - 2 * k];
    let compute = || -> mixcert::Result<_> {
        let basis = primitive_space_basis(k, &cube, &c)?;
        let checks = basis.iter().map(|a| hr_check(a, &cube, &c)).collect::<mixcert::Result<Vec<_>>>()?;
        Ok((basis, checks, pairing_rank(n, k, &c)?))
    };
    let (basis, checks, rank) = match compute() {
        Ok(v) => v,
        Err(e) => return engine_error(e),
    };
    let h = h_vector_cube(n);
    let expected_dim = (h[k] - h[k - 1]) as usize;
    let mut failures = vec![];
    if basis.len() != expected_dim {
        failures.push(format!("dimension {} differs from h_k - h_(k-1) = {expected_dim}", basis.len()));
    }
    if rank != h[k] as usize {
        failures.push(format!("pairing rank {rank} differs from h_k = {}", h[k]));
    }
    for (i, r) in checks.iter().enumerate() {
        if !r.sign_ok || !r.equality_iff_zero_ok || r.value.is_zero() {
            failures.push(format!("basis element {i} fails the Hodge-Riemann check"));
        }
    }
    let mut text = format!("primitive operators of degree {k} in dimension {n} (every body the unit cube)\n");
    text += &format!("h-vector: {}\n", h.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(" "));
    text += &format!("dimension: {} (h_k - h_(k-1) = {expected_dim})\n", basis.len());
    text += &format!("pairing rank: {rank} (h_k = {})\n", h[k]);
    text += "basis (indices 1-based; value is alpha^2 (D_cube)^(n-2k) V):\n";
    for (i, (a, r)) in basis.iter().zip(&checks).enumerate() {
        text += &format!("  [{i}] {a}\n      value {}, (-1)^k value >= 0: {}\n", q(&r.value), if r.sign_ok { "yes" } else { "NO" });
    }
    Ok(Outcome {
        json: json!({
            "n": n,
            "k": k,
            "h_vector": h,
            "dimension": basis.len(),
            "expected_dimension": expected_dim,
            "pairing_rank": rank,
            "basis": basis,
            "hr_values": checks.iter().map(|r| q(&r.value)).collect::<Vec<_>>(),
            "ok": failures.is_empty(),
        }),
        text,
        ok: failures.is_empty(),
        failures,
        artifact: None,
    })
}

pub fn selftest(seed: u64) -> Outcome {
    let reports = run_all(seed);
    let mut text = String::new();
    let mut failures = vec![];
    for r in &reports {
        let status = if r.passed() { "PASS" } else { "FAIL" };
        text += &format!("{status} {} ({} cases)", r.name, r.cases);
        if !r.detail.is_empty() {
            text += &format!(" [{}]", r.detail);
        }
        text += "\n";
        for f in r.failures.iter().take(5) {
            text += &format!("    {f}\n");
        }
        failures.extend(r.failures.iter().map(|f| format!("{}: {f}", r.name)));
    }
    let passed = reports.iter().filter(|r| r.passed()).count();
    text += &format!("{passed}/{} suites passed\n", reports.len());
    Outcome {
        json: json!({
            "seed": seed,
            "suites": reports.iter().map(|r| json!({
                "name": r.name, "cases": r.cases, "passed": r.passed(), "failures": r.failures, "detail": r.detail,
            })).collect::<Vec<_>>(),
            "ok": failures.is_empty(),
        }),
        text,
        ok: failures.is_empty(),
        failures,
        artifact: None,
    }
}
