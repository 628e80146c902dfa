//! Run configuration, read from TOML.
//!
//! ```toml
//! [problem]
//! benchmark = "kelvin_helmholtz"   # spiral | kelvin_helmholtz | richtmyer_meshkov | quadrant
//! seed = 7
//! modes = 10
//! epsilon = 0.01
//!
//! [grid]
//! n = 64
//! bc = "periodic"                  # periodic | outflow | reflective
//!
//! [solver]
//! gamma = 1.4
//! cfl = 0.9
//! t_end = 2.0
//! snapshot_times = [0.5, 1.0]
//!
//! [output]
//! dir = "out/kh"
//!
//! [convergence]                    # only read by `godunov convergence`
//! levels = [32, 64, 128]
//! reference = 256
//! ```
//!
//! Every key except `problem.benchmark` has a default; `t_end` and `bc`
//! default to the benchmark's. Unknown keys are rejected.

use std::path::{Path, PathBuf};

use godunov_core::benchmarks::{Benchmark, InitialCondition, Quadrants};
use godunov_core::grid::{BoundaryCondition, MeshHierarchy};
use godunov_core::solver::SolverConfig;
use godunov_core::thermo::{GasParams, PrimitiveState};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{CliError, Result};

/// Environment variable that replaces `output.dir`.
pub const OUTPUT_DIR_ENV: &str = "GODUNOV_OUTPUT_DIR";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    pub problem: ProblemSection,
    #[serde(default)]
    pub grid: GridSection,
    #[serde(default)]
    pub solver: SolverSection,
    #[serde(default)]
    pub output: OutputSection,
    pub convergence: Option<ConvergenceSection>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemSection {
    pub benchmark: String,
    #[serde(default)]
    pub seed: u64,
    pub modes: Option<usize>,
    pub epsilon: Option<f64>,
    /// Quadrant states as `[rho, u, v, p]`, for `benchmark = "quadrant"`.
    pub quadrants: Option<QuadrantSection>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QuadrantSection {
    pub ne: [f64; 4],
    pub nw: [f64; 4],
    pub sw: [f64; 4],
    pub se: [f64; 4],
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSection {
    pub n: Option<usize>,
    pub bc: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SolverSection {
    pub gamma: f64,
    pub cfl: f64,
    pub t_end: Option<f64>,
    pub cadence: usize,
    pub monitor_entropy: bool,
    pub snapshot_times: Vec<f64>,
}

impl Default for SolverSection {
    fn default() -> Self {
        let d = SolverConfig::default();
        Self {
            gamma: d.gas.gamma,
            cfl: d.cfl,
            t_end: None,
            cadence: d.cadence,
            monitor_entropy: d.monitor_entropy,
            snapshot_times: Vec::new(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSection {
    pub dir: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConvergenceSection {
    pub levels: Vec<usize>,
    pub reference: usize,
}

pub const DEFAULT_N: usize = 64;

/// A validated configuration with benchmark defaults filled in.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub benchmark: Benchmark,
    pub ic: InitialCondition,
    pub seed: u64,
    pub modes: usize,
    pub epsilon: f64,
    pub n: usize,
    pub bc: BoundaryCondition,
    pub solver: SolverConfig,
    pub output_dir: PathBuf,
    pub convergence: Option<MeshHierarchy>,
    /// SHA-256 of the configuration text, hex encoded.
    pub hash: String,
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(CliError::io(path))?;
        Self::parse(&text, path)
    }

    /// Parse and validate `text`; `origin` is only used in messages.
    pub fn parse(text: &str, origin: &Path) -> Result<Self> {
        let file: ConfigFile = toml::from_str(text).map_err(|e| CliError::ConfigParse {
            path: origin.to_path_buf(),
            source: Box::new(e),
        })?;
        let hash = hex::encode(Sha256::digest(text.as_bytes()));
        Self::from_file(file, hash)
    }

    pub fn from_file(file: ConfigFile, hash: String) -> Result<Self> {
        let p = &file.problem;
        let benchmark = Benchmark::from_name(&p.benchmark).ok_or_else(|| {
            bad(format!(
                "problem.benchmark: unknown benchmark {:?}",
                p.benchmark
            ))
        })?;
        let modes = p.modes.unwrap_or(Benchmark::DEFAULT_MODES);
        let epsilon = p.epsilon.unwrap_or(Benchmark::DEFAULT_EPSILON);
        if modes == 0 {
            return Err(bad("problem.modes: must be at least 1"));
        }
        // Interfaces must not touch each other or the pressure core.
        let eps_max = match benchmark {
            Benchmark::KelvinHelmholtz => 0.25,
            Benchmark::RichtmyerMeshkov => 0.15,
            _ => f64::INFINITY,
        };
        if !(epsilon >= 0.0 && epsilon < eps_max) {
            return Err(bad(format!(
                "problem.epsilon: {epsilon} outside [0, {eps_max})"
            )));
        }
        let gas =
            GasParams::new(file.solver.gamma).map_err(|e| bad(format!("solver.gamma: {e}")))?;

        let mut ic = InitialCondition::for_benchmark(benchmark, modes, epsilon, p.seed);
        match (&p.quadrants, benchmark) {
            (Some(q), Benchmark::Quadrant) => ic = InitialCondition::Quadrant(quadrants(q)?),
            (Some(_), _) => {
                return Err(bad(
                    "problem.quadrants: only valid with benchmark = \"quadrant\"",
                ))
            }
            _ => {}
        }

        let n = file.grid.n.unwrap_or(DEFAULT_N);
        if n == 0 {
            return Err(bad("grid.n: must be positive"));
        }
        let bc = match &file.grid.bc {
            Some(s) => s
                .parse()
                .map_err(|_| bad(format!("grid.bc: unknown boundary condition {s:?}")))?,
            None => benchmark.default_bc(),
        };

        let s = &file.solver;
        let solver = SolverConfig {
            cfl: s.cfl,
            gas,
            t_end: s.t_end.unwrap_or(benchmark.default_t_end()),
            cadence: s.cadence,
            snapshot_times: s.snapshot_times.clone(),
            monitor_entropy: s.monitor_entropy,
        };
        solver
            .validate()
            .map_err(|e| bad(format!("[solver]: {e}")))?;

        let convergence = match &file.convergence {
            Some(c) => Some(
                MeshHierarchy::new(c.levels.clone(), c.reference)
                    .map_err(|e| bad(format!("[convergence]: {e}")))?,
            ),
            None => None,
        };

        let output_dir = match std::env::var_os(OUTPUT_DIR_ENV) {
            Some(dir) if !dir.is_empty() => PathBuf::from(dir),
            _ => file
                .output
                .dir
                .clone()
                .unwrap_or_else(|| PathBuf::from("output").join(benchmark.name())),
        };

        Ok(Self {
            benchmark,
            ic,
            seed: p.seed,
            modes,
            epsilon,
            n,
            bc,
            solver,
            output_dir,
            convergence,
            hash,
        })
    }

    pub fn gas(&self) -> GasParams {
        self.solver.gas
    }
}

fn bad(msg: impl Into<String>) -> CliError {
    CliError::Config(msg.into())
}

fn quadrants(q: &QuadrantSection) -> Result<Quadrants> {
    let state = |name: &str, s: [f64; 4]| {
        let w = PrimitiveState::new(s[0], s[1], s[2], s[3]);
        if w.is_admissible() {
            Ok(w)
        } else {
            Err(bad(format!(
                "problem.quadrants.{name}: need rho > 0 and p > 0, got {s:?}"
            )))
        }
    };
    Ok(Quadrants {
        ne: state("ne", q.ne)?,
        nw: state("nw", q.nw)?,
        sw: state("sw", q.sw)?,
        se: state("se", q.se)?,
    })
}
