//! File formats.
//!
//! Every file starts with the line
//! `# godunov <version> config=<sha256> benchmark=<name>`.
//!
//! Field files then carry `# nx,ny,dx,dy,t,gamma`, a comment line with those
//! values, and the table `i,j,x_c,y_c,rho,mx,my,E,p,S` in row-major order
//! (`i` fastest). Cesàro, first-variance and W1 dumps use the same layout with
//! one derived value per column.

use std::fs::{self, File};
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use godunov_core::analysis::{ScalarField, Variable, VariableErrors};
use godunov_core::benchmarks::InitialCondition;
use godunov_core::grid::{BoundaryCondition, Field2D, GridSpec};
use godunov_core::solver::DiagnosticsRecord;
use godunov_core::thermo::{ConservedState, GasParams, PrimitiveState};
use serde::{Deserialize, Serialize};

use crate::config::{QuadrantSection, RunConfig};
use crate::error::{CliError, Result};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Identifies the producer of a file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Provenance {
    pub config_hash: String,
    pub benchmark: String,
}

impl Provenance {
    pub fn of(cfg: &RunConfig) -> Self {
        Self {
            config_hash: cfg.hash.clone(),
            benchmark: cfg.benchmark.name().to_string(),
        }
    }

    pub fn header(&self) -> String {
        format!(
            "# godunov {VERSION} config={} benchmark={}",
            self.config_hash, self.benchmark
        )
    }
}

/// Mesh and time line of a field file.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FieldMeta {
    pub nx: usize,
    pub ny: usize,
    pub dx: f64,
    pub dy: f64,
    pub t: f64,
    pub gamma: f64,
}

const META_COLUMNS: &str = "# nx,ny,dx,dy,t,gamma";

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FieldRow {
    pub i: usize,
    pub j: usize,
    pub x_c: f64,
    pub y_c: f64,
    pub rho: f64,
    pub mx: f64,
    pub my: f64,
    #[serde(rename = "E")]
    pub e: f64,
    pub p: f64,
    #[serde(rename = "S")]
    pub s: f64,
}

/// Contents of a field file.
#[derive(Debug, Clone, PartialEq)]
pub struct FieldFile {
    pub provenance: Option<Provenance>,
    pub meta: FieldMeta,
    pub rows: Vec<FieldRow>,
}

impl FieldFile {
    /// Rebuild the conserved field from the `rho, mx, my, E` columns.
    pub fn to_field(&self, bc: BoundaryCondition) -> godunov_core::Result<Field2D> {
        let m = &self.meta;
        let spec = GridSpec::new(m.nx, m.ny, m.nx as f64 * m.dx, m.ny as f64 * m.dy, bc)?;
        let values: Vec<ConservedState> = self
            .rows
            .iter()
            .map(|r| ConservedState::new(r.rho, r.mx, r.my, r.e))
            .collect();
        Field2D::from_interior(spec, &values)
    }

    pub fn column(&self, var: Variable) -> Vec<f64> {
        self.rows
            .iter()
            .map(|r| match var {
                Variable::Rho => r.rho,
                Variable::Mx => r.mx,
                Variable::My => r.my,
                Variable::E => r.e,
                Variable::P => r.p,
                Variable::S => r.s,
            })
            .collect()
    }
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    if let Some(dir) = path.parent() {
        fs::create_dir_all(dir).map_err(CliError::io(dir))?;
    }
    Ok(BufWriter::new(
        File::create(path).map_err(CliError::io(path))?,
    ))
}

/// Write one column per entry of [`Variable::DUMP`] in the field layout.
/// `extra` is appended to the provenance line.
pub fn write_columns(
    path: &Path,
    prov: &Provenance,
    extra: &str,
    origin: (f64, f64),
    meta: FieldMeta,
    columns: &[ScalarField; 6],
) -> Result<()> {
    let mut out = create(path)?;
    let io = |e| CliError::io(path)(e);
    writeln!(out, "{}{extra}", prov.header()).map_err(io)?;
    writeln!(out, "{META_COLUMNS}").map_err(io)?;
    writeln!(
        out,
        "# {},{},{:?},{:?},{:?},{:?}",
        meta.nx, meta.ny, meta.dx, meta.dy, meta.t, meta.gamma
    )
    .map_err(io)?;
    let mut w = csv::Writer::from_writer(out);
    for j in 0..meta.ny {
        for i in 0..meta.nx {
            let c = j * meta.nx + i;
            w.serialize(FieldRow {
                i,
                j,
                x_c: origin.0 + (i as f64 + 0.5) * meta.dx,
                y_c: origin.1 + (j as f64 + 0.5) * meta.dy,
                rho: columns[0].values[c],
                mx: columns[1].values[c],
                my: columns[2].values[c],
                e: columns[3].values[c],
                p: columns[4].values[c],
                s: columns[5].values[c],
            })
            .map_err(CliError::csv(path))?;
        }
    }
    w.flush().map_err(io)
}

/// Snapshot of a solution at time `t`.
pub fn write_field(
    path: &Path,
    prov: &Provenance,
    field: &Field2D,
    t: f64,
    gas: GasParams,
) -> Result<()> {
    let columns = Variable::DUMP.map(|v| ScalarField::from_field(field, v, gas));
    let spec = field.spec();
    let meta = FieldMeta {
        nx: field.nx(),
        ny: field.ny(),
        dx: field.dx(),
        dy: field.dy(),
        t,
        gamma: gas.gamma,
    };
    write_columns(path, prov, "", (spec.x0, spec.y0), meta, &columns)
}

pub fn read_field(path: &Path) -> Result<FieldFile> {
    let bad = |reason: &str| CliError::FieldFormat {
        path: path.to_path_buf(),
        reason: reason.to_string(),
    };
    let mut reader = BufReader::new(File::open(path).map_err(CliError::io(path))?);
    let mut comments = Vec::new();
    loop {
        let mut line = String::new();
        let n = reader.read_line(&mut line).map_err(CliError::io(path))?;
        if n == 0 {
            return Err(bad("missing mesh line"));
        }
        let line = line.trim_end().to_string();
        if line == META_COLUMNS {
            let mut values = String::new();
            reader.read_line(&mut values).map_err(CliError::io(path))?;
            comments.push(values.trim_end().to_string());
            break;
        }
        comments.push(line);
    }
    let values = comments.pop().unwrap_or_default();
    let provenance = comments.iter().find_map(|c| parse_provenance(c));
    let fields: Vec<&str> = values
        .strip_prefix('#')
        .ok_or_else(|| bad("mesh values must follow the mesh header as a comment"))?
        .trim()
        .split(',')
        .collect();
    if fields.len() != 6 {
        return Err(bad("mesh line needs nx,ny,dx,dy,t,gamma"));
    }
    let int = |s: &str| {
        s.trim()
            .parse::<usize>()
            .map_err(|_| bad("nx and ny must be integers"))
    };
    let num = |s: &str| {
        s.trim()
            .parse::<f64>()
            .map_err(|_| bad("dx, dy, t and gamma must be numbers"))
    };
    let meta = FieldMeta {
        nx: int(fields[0])?,
        ny: int(fields[1])?,
        dx: num(fields[2])?,
        dy: num(fields[3])?,
        t: num(fields[4])?,
        gamma: num(fields[5])?,
    };
    let mut rows = Vec::with_capacity(meta.nx * meta.ny);
    for row in csv::Reader::from_reader(reader).deserialize() {
        rows.push(row.map_err(CliError::csv(path))?);
    }
    let ordered = rows.len() == meta.nx * meta.ny
        && rows
            .iter()
            .enumerate()
            .all(|(c, r): (usize, &FieldRow)| r.i == c % meta.nx && r.j == c / meta.nx);
    if !ordered {
        return Err(bad("rows must cover the mesh in row-major order"));
    }
    Ok(FieldFile {
        provenance,
        meta,
        rows,
    })
}

fn parse_provenance(line: &str) -> Option<Provenance> {
    let rest = line.strip_prefix("# godunov ")?;
    let mut hash = None;
    let mut bench = None;
    for token in rest.split_whitespace() {
        if let Some(h) = token.strip_prefix("config=") {
            hash = Some(h.to_string());
        } else if let Some(b) = token.strip_prefix("benchmark=") {
            bench = Some(b.to_string());
        }
    }
    Some(Provenance {
        config_hash: hash?,
        benchmark: bench?,
    })
}

#[derive(Serialize)]
struct DiagnosticsRow {
    t: f64,
    dt: f64,
    mass: f64,
    energy: f64,
    eta: f64,
    weak_bv: f64,
    max_r_sigma: f64,
    min_rho: f64,
    #[serde(rename = "max_E")]
    max_e: f64,
    step: usize,
    eta_balance: f64,
    max_r_sigma_scaled: f64,
    entropy_violations: usize,
}

/// `t,dt,mass,energy,eta,weak_bv,max_r_sigma,min_rho,max_E`, followed by
/// `step,eta_balance,max_r_sigma_scaled,entropy_violations`.
pub fn write_diagnostics(
    path: &Path,
    prov: &Provenance,
    records: &[DiagnosticsRecord],
) -> Result<()> {
    let mut out = create(path)?;
    writeln!(out, "{}", prov.header()).map_err(CliError::io(path))?;
    let mut w = csv::Writer::from_writer(out);
    for r in records {
        w.serialize(DiagnosticsRow {
            t: r.t,
            dt: r.dt,
            mass: r.total_mass,
            energy: r.total_energy,
            eta: r.total_eta,
            weak_bv: r.weak_bv,
            max_r_sigma: r.max_r_sigma,
            min_rho: r.min_rho,
            max_e: r.max_e,
            step: r.step,
            eta_balance: r.eta_balance,
            max_r_sigma_scaled: r.max_r_sigma_scaled,
            entropy_violations: r.cell_entropy_violations,
        })
        .map_err(CliError::csv(path))?;
    }
    w.flush().map_err(CliError::io(path))
}

#[derive(Serialize)]
struct ErrorCsvRow {
    n: usize,
    #[serde(rename = "E1")]
    e1: f64,
    order_e1: Option<f64>,
    #[serde(rename = "E2")]
    e2: f64,
    order_e2: Option<f64>,
    #[serde(rename = "E3")]
    e3: f64,
    order_e3: Option<f64>,
    #[serde(rename = "E4")]
    e4: f64,
    order_e4: Option<f64>,
}

/// `n,E1,order_e1,…,E4,order_e4`; orders are empty on the first row.
pub fn write_error_csv(path: &Path, prov: &Provenance, errors: &VariableErrors) -> Result<()> {
    let mut out = create(path)?;
    writeln!(out, "{} variable={}", prov.header(), errors.variable.name())
        .map_err(CliError::io(path))?;
    let mut w = csv::Writer::from_writer(out);
    for r in &errors.rows {
        w.serialize(ErrorCsvRow {
            n: r.n,
            e1: r.errors[0],
            order_e1: r.orders[0],
            e2: r.errors[1],
            order_e2: r.orders[1],
            e3: r.errors[2],
            order_e3: r.orders[2],
            e4: r.errors[3],
            order_e4: r.orders[3],
        })
        .map_err(CliError::csv(path))?;
    }
    w.flush().map_err(CliError::io(path))
}

pub fn write_text(path: &Path, prov: &Provenance, body: &str) -> Result<()> {
    let mut out = create(path)?;
    write!(out, "{}\n{body}", prov.header()).map_err(CliError::io(path))?;
    out.flush().map_err(CliError::io(path))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PerturbationRecord {
    pub name: String,
    pub seed: u64,
    pub epsilon: f64,
    pub a: Vec<f64>,
    pub b: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Conventions {
    /// Norm of E1-E4.
    pub error_norm: String,
    /// Transfer of coarse solutions to the reference mesh.
    pub transfer: String,
    /// Wavenumber of Fourier mode `m` in the interface perturbation.
    pub fourier_mode: String,
    pub prng: String,
}

impl Default for Conventions {
    fn default() -> Self {
        Self {
            error_norm: "spatial L1 at the final time, per variable".into(),
            transfer: "piecewise-constant prolongation to the reference mesh".into(),
            fourier_mode: "cos(b_m + 2 m pi x), m = 1..modes".into(),
            prng: "splitmix64; a uniform [0,1) normalised to sum 1, then b uniform [-pi,pi)".into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub n: usize,
    pub steps: usize,
    pub t_final: f64,
    pub status: String,
}

/// Everything needed to replay a run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub version: String,
    pub config_hash: String,
    pub command: String,
    pub benchmark: String,
    pub gamma: f64,
    pub cfl: f64,
    pub t_end: f64,
    pub bc: String,
    pub seed: u64,
    pub modes: usize,
    pub epsilon: f64,
    pub cadence: usize,
    pub snapshot_times: Vec<f64>,
    pub n: Option<usize>,
    pub levels: Option<Vec<usize>>,
    pub reference: Option<usize>,
    pub status: String,
    pub runs: Vec<RunRecord>,
    pub outputs: Vec<String>,
    pub quadrants: Option<QuadrantSection>,
    pub conventions: Conventions,
    pub perturbations: Vec<PerturbationRecord>,
}

impl Manifest {
    pub fn new(cfg: &RunConfig, command: &str) -> Self {
        let names: &[&str] = match &cfg.ic {
            InitialCondition::KelvinHelmholtz { .. } => &["lower", "upper"],
            _ => &["interface"],
        };
        let perturbations = cfg
            .ic
            .perturbations()
            .into_iter()
            .zip(names)
            .map(|(p, name)| PerturbationRecord {
                name: name.to_string(),
                seed: p.seed,
                epsilon: p.epsilon,
                a: p.a.clone(),
                b: p.b.clone(),
            })
            .collect();
        let quadrants = match &cfg.ic {
            InitialCondition::Quadrant(q) => {
                let s = |w: PrimitiveState| [w.rho, w.u, w.v, w.p];
                Some(QuadrantSection {
                    ne: s(q.ne),
                    nw: s(q.nw),
                    sw: s(q.sw),
                    se: s(q.se),
                })
            }
            _ => None,
        };
        let hierarchy = cfg
            .convergence
            .as_ref()
            .filter(|_| command == "convergence");
        Self {
            version: VERSION.to_string(),
            config_hash: cfg.hash.clone(),
            command: command.to_string(),
            benchmark: cfg.benchmark.name().to_string(),
            gamma: cfg.solver.gas.gamma,
            cfl: cfg.solver.cfl,
            t_end: cfg.solver.t_end,
            bc: cfg.bc.as_str().to_string(),
            seed: cfg.seed,
            modes: cfg.modes,
            epsilon: cfg.epsilon,
            cadence: cfg.solver.cadence,
            snapshot_times: cfg.solver.snapshot_times.clone(),
            n: hierarchy.is_none().then_some(cfg.n),
            levels: hierarchy.map(|h| h.levels.clone()),
            reference: hierarchy.map(|h| h.reference_n),
            status: "running".into(),
            runs: Vec::new(),
            outputs: Vec::new(),
            quadrants,
            conventions: Conventions::default(),
            perturbations,
        }
    }

    pub fn write(&self, path: &Path, prov: &Provenance) -> Result<()> {
        let body = toml::to_string(self).map_err(|e| CliError::Config(e.to_string()))?;
        write_text(path, prov, &body)
    }

    pub fn read(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(CliError::io(path))?;
        toml::from_str(&text).map_err(|e| CliError::ConfigParse {
            path: path.to_path_buf(),
            source: Box::new(e),
        })
    }
}

/// Records written files relative to the output directory.
#[derive(Debug)]
pub struct OutputDir {
    pub root: PathBuf,
    pub written: Vec<String>,
}

impl OutputDir {
    pub fn new(root: PathBuf) -> Result<Self> {
        fs::create_dir_all(&root).map_err(CliError::io(&root))?;
        Ok(Self {
            root,
            written: Vec::new(),
        })
    }

    pub fn path(&mut self, name: &str) -> PathBuf {
        self.written.push(name.to_string());
        self.root.join(name)
    }
}
