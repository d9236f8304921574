//! Experiment harness: algorithmic error rates over (n, oracle, repetition)
//! grids, end-to-end secret recovery, CNOT-distance scans, and the
//! advantage-scale extrapolation.

mod cnot;
mod report;
pub mod stats;

pub use cnot::{cnot_distance_experiment, CnotDistanceRow};
pub use report::{
    linear_fit_extrapolate, parse_report, report, ErrorRateRecord, ErrorRateTable, FitResult,
    Repetition, ReportFormat,
};

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::circuit::{
    build_simon_circuit_with_secret, classical_oracle_eval_with_secret, Bitstring, Circuit,
    OracleKind,
};
use crate::gf2::{dot_mod2, solve_secret, Basis, Gf2Matrix};
use crate::sim::{
    find_device, noise_model_from_device, run_ideal, run_noisy_fast, NoiseModel, ShotRecord,
    SimError, DEFAULT_QUBIT_CAP,
};
use crate::transpile::{place, route, CouplingMap, PlacementStrategy, TranspileError};

#[derive(Debug, Error)]
pub enum BenchError {
    #[error("invalid experiment config: {0}")]
    Config(String),
    #[error("simulation failed at n={n}{}: {source}", fmt_rep(.repetition))]
    Sim {
        n: usize,
        repetition: Option<usize>,
        source: SimError,
    },
    #[error("transpilation failed at n={n}{}: {source}", fmt_rep(.repetition))]
    Transpile {
        n: usize,
        repetition: Option<usize>,
        source: TranspileError,
    },
    #[error("cannot compute an error rate over zero shot records")]
    EmptyRecords,
    #[error("cannot report an empty table")]
    EmptyTable,
    #[error("unknown report format {0:?} (expected csv or json)")]
    UnknownFormat(String),
    #[error("report parse error: {0}")]
    ReportParse(String),
    #[error("linear fit needs at least 2 distinct n values, got {distinct_n}")]
    DegenerateFit { distinct_n: usize },
    #[error(
        "secret recovery exhausted its budget: {} attempts used, rank {}, {} non-orthogonal rows seen",
        .0.attempts_used, .0.rank, .0.non_orthogonal_rows
    )]
    RecoveryExhausted(RecoveryFailure),
    #[error(
        "recovered candidate {candidate} failed oracle verification after {} attempts ({} non-orthogonal rows): noise corrupted the system",
        .failure.attempts_used, .failure.non_orthogonal_rows
    )]
    RecoveryVerification {
        candidate: Bitstring,
        failure: RecoveryFailure,
    },
    #[error("io error: {0}")]
    Io(String),
}

fn fmt_rep(rep: &Option<usize>) -> String {
    match rep {
        Some(r) => format!(" repetition {r}"),
        None => String::new(),
    }
}

impl BenchError {
    /// CLI exit code class: 1 for usage/config problems, 2 for failures in
    /// the experiment itself.
    pub fn is_usage_error(&self) -> bool {
        matches!(
            self,
            BenchError::Config(_)
                | BenchError::UnknownFormat(_)
                | BenchError::ReportParse(_)
                | BenchError::Io(_)
        )
    }
}

fn default_shots() -> usize {
    4096
}

fn default_repetitions() -> usize {
    3
}

fn default_multiplier() -> f64 {
    1.0
}

fn default_placement() -> String {
    "greedy".to_string()
}

/// Custom noise parameters for the `noisy:custom` backend.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct CustomNoise {
    pub p1: f64,
    pub p2: f64,
    pub readout: f64,
}

/// Experiment description, mirrored one-to-one by the JSON config file.
///
/// Defaults follow the benchmarked protocols: 4096 shots per job and 3
/// repetitions (use 30 for simulator-style runs).
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    /// Inclusive [low, high] range of register sizes.
    pub n_range: (usize, usize),
    pub oracles: Vec<OracleKind>,
    /// "ideal", "noisy:<device>", or "noisy:custom" (with `custom_noise`).
    pub backend: String,
    /// "all-to-all", "eagle127", or "file:<path>".
    pub topology: String,
    #[serde(default = "default_shots")]
    pub shots: usize,
    #[serde(default = "default_repetitions")]
    pub repetitions: usize,
    pub seed: u64,
    #[serde(default = "default_multiplier")]
    pub swap_error_multiplier: f64,
    #[serde(default)]
    pub custom_noise: Option<CustomNoise>,
    /// Overrides the all-ones secret; requires a single-n range of the
    /// secret's length.
    #[serde(default)]
    pub secret: Option<Bitstring>,
    /// "greedy" or "trivial"; ignored on all-to-all topologies where
    /// placement is moot.
    #[serde(default = "default_placement")]
    pub placement: String,
}

impl ExperimentConfig {
    pub fn from_json(text: &str) -> Result<Self, BenchError> {
        serde_json::from_str(text).map_err(|e| BenchError::Config(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self, BenchError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| BenchError::Io(format!("{}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    fn secret_for(&self, n: usize) -> Bitstring {
        self.secret.unwrap_or_else(|| Bitstring::ones(n))
    }
}

#[derive(Clone, Debug)]
enum Backend {
    Ideal,
    Noisy(NoiseModel),
}

impl Backend {
    fn label(config: &ExperimentConfig) -> String {
        config.backend.clone()
    }
}

#[derive(Clone, Debug)]
enum Topology {
    AllToAll,
    Fixed(CouplingMap),
}

/// Config checked and expanded into concrete simulator inputs.
struct ResolvedConfig {
    backend: Backend,
    backend_label: String,
    topology: Topology,
    placement: PlacementStrategy,
}

fn resolve(config: &ExperimentConfig) -> Result<ResolvedConfig, BenchError> {
    let bad = |msg: String| BenchError::Config(msg);
    let (lo, hi) = config.n_range;
    if lo < 2 || lo > hi {
        return Err(bad(format!("n_range ({lo}, {hi}) must satisfy 2 <= low <= high")));
    }
    if 2 * hi > DEFAULT_QUBIT_CAP {
        return Err(bad(format!(
            "n = {hi} needs {} qubits, beyond the simulator cap of {DEFAULT_QUBIT_CAP}",
            2 * hi
        )));
    }
    if config.oracles.is_empty() {
        return Err(bad("at least one oracle kind is required".to_string()));
    }
    if config.shots == 0 {
        return Err(bad("shots must be >= 1".to_string()));
    }
    if config.repetitions == 0 {
        return Err(bad("repetitions must be >= 1".to_string()));
    }
    if let Some(secret) = &config.secret {
        if lo != hi {
            return Err(bad("a secret override requires a single-n range".to_string()));
        }
        if secret.len() != lo {
            return Err(bad(format!(
                "secret length {} does not match n = {lo}",
                secret.len()
            )));
        }
        if secret.is_zero() {
            return Err(bad("secret override must be nonzero".to_string()));
        }
    }

    let backend = match config.backend.as_str() {
        "ideal" => Backend::Ideal,
        other => match other.strip_prefix("noisy:") {
            Some("custom") => {
                let custom = config.custom_noise.ok_or_else(|| {
                    bad("backend noisy:custom requires a custom_noise block".to_string())
                })?;
                let model = NoiseModel::new(custom.p1, custom.p2, custom.readout)
                    .and_then(|m| m.with_swap_multiplier(config.swap_error_multiplier))
                    .map_err(|e| bad(e.to_string()))?;
                Backend::Noisy(model)
            }
            Some(device) => {
                let params = find_device(device).map_err(|e| bad(e.to_string()))?;
                let model = noise_model_from_device(&params, config.swap_error_multiplier)
                    .map_err(|e| bad(e.to_string()))?;
                Backend::Noisy(model)
            }
            None => return Err(bad(format!("unknown backend {other:?}"))),
        },
    };

    let topology = match config.topology.as_str() {
        "all-to-all" => Topology::AllToAll,
        "eagle127" => Topology::Fixed(CouplingMap::preset("eagle127").expect("preset exists")),
        other => match other.strip_prefix("file:") {
            Some(path) => Topology::Fixed(
                CouplingMap::load(&PathBuf::from(path)).map_err(|e| bad(e.to_string()))?,
            ),
            None => return Err(bad(format!("unknown topology {other:?}"))),
        },
    };

    let placement: PlacementStrategy = config
        .placement
        .parse()
        .map_err(|e: String| bad(e))?;

    Ok(ResolvedConfig {
        backend,
        backend_label: Backend::label(config),
        topology,
        placement,
    })
}

fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    let mut z = x;
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Deterministic sub-seed derivation; stable across runs and independent of
/// execution order.
pub fn derive_seed(master: u64, parts: &[u64]) -> u64 {
    parts
        .iter()
        .fold(splitmix64(master), |acc, &p| splitmix64(acc ^ p))
}

fn oracle_tag(kind: OracleKind) -> u64 {
    match kind {
        OracleKind::Simple => 1,
        OracleKind::Complex => 2,
    }
}

/// Fraction of shots whose register-1 outcome is not orthogonal to the
/// secret: `count(z . s = 1) / shots`.
pub fn algorithmic_error_rate(records: &[ShotRecord], secret: &Bitstring) -> Result<f64, BenchError> {
    if records.is_empty() {
        return Err(BenchError::EmptyRecords);
    }
    let mut invalid = 0usize;
    for r in records {
        let dot = dot_mod2(&r.register1, secret)
            .map_err(|e| BenchError::Config(format!("record/secret mismatch: {e}")))?;
        invalid += dot as usize;
    }
    Ok(invalid as f64 / records.len() as f64)
}

/// A Simon circuit placed, routed, and compacted for one (n, oracle) cell.
struct PreparedJob {
    n: usize,
    secret: Bitstring,
    compact: Circuit,
    inserted_swap_count: usize,
}

fn prepare_job(
    config: &ExperimentConfig,
    resolved: &ResolvedConfig,
    n: usize,
    kind: OracleKind,
) -> Result<PreparedJob, BenchError> {
    let secret = config.secret_for(n);
    let circuit = build_simon_circuit_with_secret(kind, &secret)
        .map_err(|e| BenchError::Config(e.to_string()))?;
    let owned;
    let (map, strategy) = match &resolved.topology {
        Topology::AllToAll => {
            owned = CouplingMap::all_to_all(2 * n).expect("nonzero size");
            // Placement is moot on a complete graph.
            (&owned, PlacementStrategy::Trivial)
        }
        Topology::Fixed(map) => (map, resolved.placement),
    };
    let wrap = |source: TranspileError| BenchError::Transpile {
        n,
        repetition: None,
        source,
    };
    let layout = place(
        &circuit,
        map,
        strategy,
        derive_seed(config.seed, &[1, n as u64, oracle_tag(kind)]),
    )
    .map_err(wrap)?;
    let routed = route(&circuit, map, &layout).map_err(wrap)?;
    debug_assert!(crate::transpile::validate_routed(&routed.circuit, map).is_ok());
    let (compact, _active) = routed.compact();
    Ok(PreparedJob {
        n,
        secret,
        compact,
        inserted_swap_count: routed.inserted_swap_count,
    })
}

fn simulate_job(
    job: &PreparedJob,
    backend: &Backend,
    shots: usize,
    seed: u64,
    repetition: Option<usize>,
) -> Result<Vec<ShotRecord>, BenchError> {
    let wrap = |source: SimError| BenchError::Sim {
        n: job.n,
        repetition,
        source,
    };
    match backend {
        Backend::Ideal => run_ideal(&job.compact, shots, seed).map_err(wrap),
        // Noisy jobs go through the Pauli-frame engine: identical in
        // distribution to the trajectory engine for this gate set, and the
        // only way n = 12 grids finish in minutes rather than days.
        Backend::Noisy(model) => run_noisy_fast(&job.compact, model, shots, seed).map_err(wrap),
    }
}

/// Runs the full (n, oracle, repetition) grid described by the config.
///
/// Each (n, oracle) cell is placed and routed once (the placement seed is
/// derived from the master seed), so repetitions differ only in their noise
/// and sampling randomness. Emits one row per repetition plus a mean row
/// per cell, in canonical order. Deterministic for a fixed master seed at
/// any thread count.
pub fn run_experiment(config: &ExperimentConfig) -> Result<ErrorRateTable, BenchError> {
    let resolved = resolve(config)?;
    let (lo, hi) = config.n_range;
    let mut rows = Vec::new();
    for n in lo..=hi {
        for &kind in &config.oracles {
            let job = prepare_job(config, &resolved, n, kind)?;
            let mut rates = Vec::with_capacity(config.repetitions);
            for rep in 0..config.repetitions {
                let job_seed = derive_seed(config.seed, &[2, n as u64, oracle_tag(kind), rep as u64]);
                let records =
                    simulate_job(&job, &resolved.backend, config.shots, job_seed, Some(rep))?;
                let rate = algorithmic_error_rate(&records, &job.secret)?;
                rates.push(rate);
                rows.push(ErrorRateRecord {
                    n,
                    oracle: kind,
                    backend: resolved.backend_label.clone(),
                    repetition: Repetition::Index(rep),
                    shots: config.shots,
                    error_rate: rate,
                    seed: job_seed,
                });
            }
            rows.push(ErrorRateRecord {
                n,
                oracle: kind,
                backend: resolved.backend_label.clone(),
                repetition: Repetition::Mean,
                shots: config.shots,
                error_rate: stats::mean(&rates),
                seed: config.seed,
            });
        }
    }
    Ok(ErrorRateTable::new(rows))
}

/// Where routing first starts paying for the topology: the smallest n in
/// the config range whose routed circuit contains inserted SWAPs.
pub fn first_n_with_swaps(config: &ExperimentConfig) -> Result<Option<usize>, BenchError> {
    let resolved = resolve(config)?;
    let (lo, hi) = config.n_range;
    for n in lo..=hi {
        for &kind in &config.oracles {
            let job = prepare_job(config, &resolved, n, kind)?;
            if job.inserted_swap_count > 0 {
                return Ok(Some(n));
            }
        }
    }
    Ok(None)
}

/// Successful end of the recovery pipeline.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RecoverySuccess {
    pub secret: Bitstring,
    pub attempts_used: usize,
    /// Rows observed during recovery that were not orthogonal to the true
    /// secret (noise indicator; zero on an ideal backend).
    pub non_orthogonal_rows: usize,
}

/// What the recovery loop had seen when it gave up.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RecoveryFailure {
    pub attempts_used: usize,
    pub non_orthogonal_rows: usize,
    pub rank: usize,
}

/// Runs single shots, accumulating linearly independent register-1 rows
/// until rank n-1, then solves for the secret and verifies it against the
/// classical oracle (`f(0) = f(s)`).
///
/// The config must describe a single n and exactly one oracle kind, and the
/// attempt budget must be at least n-1 (the information-theoretic minimum).
pub fn recover_secret_end_to_end(
    config: &ExperimentConfig,
    max_attempts: usize,
) -> Result<RecoverySuccess, BenchError> {
    let resolved = resolve(config)?;
    let (lo, hi) = config.n_range;
    if lo != hi {
        return Err(BenchError::Config(
            "secret recovery requires a single-n range".to_string(),
        ));
    }
    if config.oracles.len() != 1 {
        return Err(BenchError::Config(
            "secret recovery requires exactly one oracle kind".to_string(),
        ));
    }
    let n = lo;
    if max_attempts + 1 < n {
        return Err(BenchError::Config(format!(
            "max_attempts = {max_attempts} cannot reach rank {} for n = {n}",
            n - 1
        )));
    }
    let kind = config.oracles[0];
    let job = prepare_job(config, &resolved, n, kind)?;
    let oracle = |x: &Bitstring| {
        classical_oracle_eval_with_secret(kind, &job.secret, x).expect("length checked")
    };

    let mut basis = Basis::new(n);
    let mut observed = Gf2Matrix::new(n);
    let mut non_orthogonal = 0usize;
    for attempt in 0..max_attempts {
        let seed = derive_seed(config.seed, &[3, attempt as u64]);
        let records = simulate_job(&job, &resolved.backend, 1, seed, Some(attempt))?;
        let z = records[0].register1;
        observed.push(&z).expect("width n row");
        if dot_mod2(&z, &job.secret).expect("equal lengths") == 1 {
            non_orthogonal += 1;
        }
        if z.is_zero() {
            continue;
        }
        basis.add_if_independent(&z).expect("width n row");
        if basis.rank() == n - 1 {
            let candidate = solve_secret(&basis).expect("rank is n-1");
            let failure = RecoveryFailure {
                attempts_used: attempt + 1,
                non_orthogonal_rows: non_orthogonal,
                rank: basis.rank(),
            };
            if oracle(&Bitstring::zeros(n)) == oracle(&candidate) {
                return Ok(RecoverySuccess {
                    secret: candidate,
                    attempts_used: attempt + 1,
                    non_orthogonal_rows: non_orthogonal,
                });
            }
            return Err(BenchError::RecoveryVerification { candidate, failure });
        }
    }
    Err(BenchError::RecoveryExhausted(RecoveryFailure {
        attempts_used: max_attempts,
        non_orthogonal_rows: non_orthogonal,
        rank: basis.rank(),
    }))
}
