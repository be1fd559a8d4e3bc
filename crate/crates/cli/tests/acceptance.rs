//! Acceptance suite: one PASS/FAIL line per criterion, exact checks only.
//! Runs the `mixcert` binary for the end-to-end criteria and the library
//! suites for the property criteria.

use std::path::Path;
use std::process::{Command, Output};
use std::time::{Duration, Instant};

use mixcert::diffop::{h_vector_cube, pairing_rank, primitive_space_basis};
use mixcert::exactlin::rational::sign_power;
use mixcert::fedotov::{verify_certificate, Certificate, CertificateKind};
use mixcert::cubefam::BoxBody;
use mixcert::suites::{
    af_suite, explicit_hr_value, homothety_suite, hyperbolicity_suite, iterated_af_suite, oracle_suite,
    shephard_suite, two_body_suite, SuiteReport,
};
use num_traits::{Signed, Zero};

const SEED: u64 = 20240917;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_mixcert"))
}

fn run(args: &[&str]) -> (Output, Duration) {
    let start = Instant::now();
    let out = bin().args(args).output().expect("binary runs");
    (out, start.elapsed())
}

struct Criterion {
    id: usize,
    name: &'static str,
    failures: Vec<String>,
    note: String,
}

impl Criterion {
    fn new(id: usize, name: &'static str) -> Self {
        Self {
            id,
            name,
            failures: Vec::new(),
            note: String::new(),
        }
    }

    fn require(&mut self, cond: bool, what: impl Into<String>) {
        if !cond {
            self.failures.push(what.into());
        }
    }

    fn absorb(&mut self, r: &SuiteReport) {
        for f in r.failures.iter().take(3) {
            self.failures.push(format!("{}: {f}", r.name));
        }
        if r.failures.len() > 3 {
            self.failures.push(format!("{}: {} more failures", r.name, r.failures.len() - 3));
        }
    }
}

fn construct_criterion(c: &mut Criterion, n: usize, k: usize, limit: Duration, dir: &Path) {
    let path = dir.join(format!("cert_n{n}_k{k}.json"));
    let (out, elapsed) = run(&[
        "fedotov", "construct", "--n", &n.to_string(), "--k", &k.to_string(),
        "--output", path.to_str().unwrap(),
    ]);
    c.require(out.status.code() == Some(0), format!("construct exit status {:?}", out.status.code()));
    c.require(elapsed < limit, format!("runtime {elapsed:?} exceeds {limit:?}"));
    let raw = match std::fs::read_to_string(&path) {
        Ok(s) => s,
        Err(e) => {
            c.failures.push(format!("certificate not written: {e}"));
            return;
        }
    };
    let cert = match Certificate::from_json(&raw) {
        Ok(x) => x,
        Err(e) => {
            c.failures.push(format!("certificate does not parse: {e}"));
            return;
        }
    };
    c.require(cert.to_json() == raw, "certificate does not round-trip byte-exactly");
    c.require(cert.n == n && cert.k == k, "wrong (n, k) in certificate");
    let want_kind = if k == 2 { CertificateKind::HodgeRiemann } else { CertificateKind::PolarizedReduction };
    c.require(cert.kind == want_kind, format!("kind {:?}", cert.kind));
    c.require(cert.x_my.as_ref().is_some_and(Zero::is_zero), "<x,My> is not 0");
    c.require(cert.x_mx.as_ref().is_some_and(Signed::is_positive), "<x,Mx> is not positive");
    let signed = sign_power(cert.violation.subset.len()) * &cert.violation.det;
    c.require(signed.is_positive(), "(-1)^|I| det M_I is not positive");
    if k > 2 {
        c.require(
            cert.trace.base_x_mx.is_some() && cert.trace.base_x_mx == cert.x_mx,
            "<x~,M~x~> differs from <x,Mx>",
        );
        c.require(cert.trace.base_x_my.as_ref().is_some_and(Zero::is_zero), "base <x,My> is not 0");
        c.require(cert.bodies.len() == (cert.trace.base_m.unwrap_or(0) + 1) * ((1 << k) - 1), "body count");
    }
    let v = verify_certificate(&cert);
    c.require(v.valid(), format!("library verifier: {:?}", v.failures));
    let (vout, _) = run(&["fedotov", "verify", path.to_str().unwrap()]);
    c.require(vout.status.code() == Some(0), "`fedotov verify` does not exit 0");
    c.note = format!(
        "{} bodies, I = {:?}, <x,Mx> = {}, {:.2?}",
        cert.bodies.len(),
        cert.violation.subset,
        cert.x_mx.as_ref().map(|q| q.to_string()).unwrap_or_default(),
        elapsed
    );
}

fn criterion_1(dir: &Path) -> Criterion {
    let mut c = Criterion::new(1, "k=2 counterexample certificate (n=4)");
    construct_criterion(&mut c, 4, 2, Duration::from_secs(60), dir);
    c
}

fn criterion_2(dir: &Path) -> Criterion {
    let mut c = Criterion::new(2, "general-k counterexample via reduction (n=6, k=3)");
    construct_criterion(&mut c, 6, 3, Duration::from_secs(600), dir);
    c
}

fn criterion_3() -> Criterion {
    let mut c = Criterion::new(3, "cube h-vector: pairing rank and primitive dimension");
    let binom = |n: u64, k: u64| -> u64 { (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1)) };
    for n in 4..=6usize {
        let h = h_vector_cube(n);
        let cube = BoxBody::unit_cube(n);
        for k in 1..=n / 2 {
            let cs = vec![cube.clone(); n - 2 * k];
            let want_rank = binom(n as u64, k as u64) as usize;
            let want_dim = want_rank - binom(n as u64, k as u64 - 1) as usize;
            c.require(h[k] as usize == want_rank, format!("h_{k} for n={n}"));
            let rank = pairing_rank(n, k, &cs).ok();
            c.require(rank == Some(want_rank), format!("n={n} k={k}: rank {rank:?} != {want_rank}"));
            let dim = primitive_space_basis(k, &cube, &cs).ok().map(|b| b.len());
            c.require(dim == Some(want_dim), format!("n={n} k={k}: dimension {dim:?} != {want_dim}"));
        }
    }
    let (out, _) = run(&["hodge", "primitive", "--n", "4", "--k", "2", "--format", "json"]);
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap_or_default();
    c.require(out.status.code() == Some(0) && report["dimension"] == 2, "`hodge primitive --n 4 --k 2` does not report dimension 2");
    c
}

fn criterion_4() -> Criterion {
    let mut c = Criterion::new(4, "explicit Hodge-Riemann value alpha^2 V = 4 (n=4, k=2)");
    c.absorb(&explicit_hr_value());
    c
}

fn criterion_5() -> Criterion {
    let mut c = Criterion::new(5, "Alexandrov-Fenchel on 1000 instances per n in 2..=6");
    let start = Instant::now();
    for n in 2..=6 {
        let r = af_suite(n, 1000, SEED);
        c.require(r.cases == 1000, "case count");
        c.absorb(&r);
    }
    let elapsed = start.elapsed();
    c.require(elapsed < Duration::from_secs(60), format!("runtime {elapsed:?}"));
    c.note = format!("5000 instances, {elapsed:.2?}");
    c
}

fn criterion_6() -> Criterion {
    let mut c = Criterion::new(6, "Shephard minors (200 instances) and homothety equality");
    let r = shephard_suite(200, SEED);
    c.require(r.cases == 200, "case count");
    c.absorb(&r);
    c.absorb(&homothety_suite(50, SEED));
    let (out, _) = run(&["shephard", "--n", "5", "--m", "6", "--seed", "3"]);
    c.require(out.status.code() == Some(0), "`shephard` command does not pass");
    c
}

fn criterion_7() -> Criterion {
    let mut c = Criterion::new(7, "two-body determinant (200) and iterated Alexandrov-Fenchel (200)");
    c.absorb(&two_body_suite(200, SEED));
    c.absorb(&iterated_af_suite(200, SEED));
    c
}

fn criterion_8() -> Criterion {
    let mut c = Criterion::new(8, "inertia vs principal minors on 500 symmetric positive matrices");
    let r = hyperbolicity_suite(500, SEED);
    c.absorb(&r);
    c.note = r.detail.clone();
    c
}

fn criterion_9() -> Criterion {
    let mut c = Criterion::new(9, "permanent and derivative mixed volumes agree on 500 tuples");
    c.absorb(&oracle_suite(500, SEED));
    c
}

fn criterion_10(dir: &Path) -> Criterion {
    let mut c = Criterion::new(10, "byte-identical output across runs and thread counts");
    let commands: Vec<Vec<&str>> = vec![
        vec!["fedotov", "construct", "--n", "4", "--k", "2", "--format", "json"],
        vec!["fedotov", "construct", "--n", "6", "--k", "3", "--format", "json"],
        vec!["fedotov", "search", "--n", "4", "--k", "2", "--m", "3", "--trials", "60", "--seed", "5", "--format", "json"],
        vec!["fedotov", "search", "--n", "4", "--k", "1", "--m", "4", "--trials", "30", "--seed", "5"],
        vec!["hodge", "primitive", "--n", "6", "--k", "3", "--format", "json"],
        vec!["shephard", "--n", "4", "--m", "5", "--seed", "9", "--format", "json"],
        vec!["selftest", "--seed", "11", "--format", "json"],
    ];
    let path = dir.join("cert.json");
    let p = path.to_str().unwrap().to_string();
    let construct = vec!["fedotov", "construct", "--n", "5", "--k", "2", "--output", p.as_str()];
    let verify = vec!["fedotov", "verify", p.as_str()];
    let mut checked = 0;
    for cmd in commands.iter().chain([&construct, &verify]) {
        let mut outputs = Vec::new();
        for threads in ["1", "1", "4"] {
            let mut args = cmd.clone();
            args.extend(["--threads", threads]);
            let (out, _) = run(&args);
            let file = if cmd == &construct { std::fs::read(&path).unwrap_or_default() } else { Vec::new() };
            outputs.push((out.status.code(), out.stdout, file));
        }
        checked += 1;
        c.require(outputs[0].0 == Some(0), format!("{} exits {:?}", cmd.join(" "), outputs[0].0));
        c.require(
            outputs.windows(2).all(|w| w[0] == w[1]),
            format!("{} differs between runs", cmd.join(" ")),
        );
    }
    c.note = format!("{checked} commands, 3 runs each (threads 1, 1, 4)");
    c
}

fn main() {
    let dir = std::env::temp_dir().join(format!("mixcert-acceptance-{}", std::process::id()));
    std::fs::create_dir_all(&dir).expect("temp dir");
    let criteria = [
        criterion_1(&dir),
        criterion_2(&dir),
        criterion_3(),
        criterion_4(),
        criterion_5(),
        criterion_6(),
        criterion_7(),
        criterion_8(),
        criterion_9(),
        criterion_10(&dir),
    ];
    let _ = std::fs::remove_dir_all(&dir);

    let mut failed = 0;
    for c in &criteria {
        let status = if c.failures.is_empty() { "PASS" } else { "FAIL" };
        if c.note.is_empty() {
            println!("{status} [{:>2}] {}", c.id, c.name);
        } else {
            println!("{status} [{:>2}] {} ({})", c.id, c.name, c.note);
        }
        for f in &c.failures {
            println!("       {f}");
        }
        failed += usize::from(!c.failures.is_empty());
    }
    println!("acceptance: {}/{} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
