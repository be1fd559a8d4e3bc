//! Randomized direct search for non-hyperbolic mixed volume matrices.

use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::cubefam::BoxBody;
use crate::error::{Error, Result};
use crate::exactlin::inertia;

use super::certificate::{indexed, Certificate, CertificateKind, Trace, CERTIFICATE_VERSION};
use super::matrix::{build_matrix, check_shape, FedotovMatrix};
use super::pipeline::locate_violation;

/// `{1/4, 1/2, …, 4}`.
pub fn default_grid() -> Vec<BigRational> {
    (1..=16).map(|p| BigRational::new(p.into(), 4.into())).collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchConfig {
    pub n: usize,
    pub k: usize,
    pub m: usize,
    pub trials: u64,
    pub seed: u64,
    pub grid: Vec<BigRational>,
    /// Cap on exhaustive minor enumeration.
    pub cap: usize,
}

impl SearchConfig {
    pub fn new(n: usize, k: usize, m: usize, trials: u64, seed: u64, cap: usize) -> Self {
        Self {
            n,
            k,
            m,
            trials,
            seed,
            grid: default_grid(),
            cap,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SearchStats {
    pub trials: u64,
    pub hyperbolic: u64,
    pub non_hyperbolic: u64,
    pub first_hit: Option<u64>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchOutcome {
    pub certificate: Option<Certificate>,
    pub stats: SearchStats,
}

/// The instance examined in a given trial: `m` bodies and `n - 2k` fixed
/// bodies, widths drawn uniformly from the grid. Trials use independent
/// streams of one seed, so the outcome does not depend on scheduling.
pub fn trial_instance(cfg: &SearchConfig, trial: u64) -> (Vec<BoxBody>, Vec<BoxBody>) {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    rng.set_stream(trial);
    let mut draw = |count: usize| -> Vec<BoxBody> {
        (0..count)
            .map(|_| {
                let w = (0..cfg.n)
                    .map(|_| cfg.grid[rng.gen_range(0..cfg.grid.len())].clone())
                    .collect();
                BoxBody::new(w).expect("grid values are positive")
            })
            .collect()
    };
    let bodies = draw(cfg.m);
    let c = draw(cfg.n - 2 * cfg.k);
    (bodies, c)
}

pub fn random_search(cfg: &SearchConfig) -> Result<SearchOutcome> {
    check_shape(cfg.n, cfg.k, cfg.m, cfg.n.saturating_sub(2 * cfg.k))?;
    if 2 * cfg.k > cfg.n {
        return Err(Error::InvalidParameters(format!("2k <= n is required, got n = {}, k = {}", cfg.n, cfg.k)));
    }
    if cfg.grid.is_empty() || cfg.grid.iter().any(|q| q <= &BigRational::default()) {
        return Err(Error::InvalidParameters("grid must be nonempty and positive".into()));
    }
    let results: Vec<Option<FedotovMatrix>> = (0..cfg.trials)
        .into_par_iter()
        .map(|t| -> Result<Option<FedotovMatrix>> {
            let (bodies, c) = trial_instance(cfg, t);
            let m = build_matrix(&bodies, cfg.k, &c)?;
            Ok((inertia(&m.entries)?.positive != 1).then_some(m))
        })
        .collect::<Result<_>>()?;

    let non_hyperbolic = results.iter().filter(|r| r.is_some()).count() as u64;
    let first = results.into_iter().enumerate().find_map(|(t, r)| r.map(|m| (t as u64, m)));
    let stats = SearchStats {
        trials: cfg.trials,
        hyperbolic: cfg.trials - non_hyperbolic,
        non_hyperbolic,
        first_hit: first.as_ref().map(|(t, _)| *t),
    };
    let certificate = match first {
        None => None,
        Some((trial, m)) => {
            let (core, violation) = locate_violation(&m.entries, cfg.cap)?;
            Some(Certificate {
                version: CERTIFICATE_VERSION,
                kind: CertificateKind::DirectSearch,
                n: cfg.n,
                k: cfg.k,
                bodies: indexed(&m.bodies),
                c_list: m.c_list.iter().map(|b| b.widths().to_vec()).collect(),
                x: Vec::new(),
                y: Vec::new(),
                x_my: None,
                x_mx: None,
                matrix: m.entries.to_rows(),
                violation,
                trace: Trace {
                    core,
                    seed: Some(cfg.seed),
                    trial: Some(trial),
                    ..Trace::default()
                },
            })
        }
    };
    Ok(SearchOutcome { certificate, stats })
}
