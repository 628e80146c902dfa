//! Unsplit first-order Godunov update with forward-Euler time stepping.
//!
//! ```text
//! U_ij^{n+1} = U_ij - dt/dx (F_{i+1/2,j} - F_{i-1/2,j}) - dt/dy (G_{i,j+1/2} - G_{i,j-1/2})
//! ```
//!
//! where every face flux is the physical flux of the exact Riemann solution
//! sampled on the face.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};
use crate::grid::{project_initial, BoundaryCondition, Field2D, GridSpec};
use crate::math::compensated_sum;
use crate::riemann::{sample, solve_star, RiemannInput};
use crate::thermo::{
    cons_to_prim, entropy_quantities_prim, flux_prim, hessian_eigen_bounds, Axis, ConservedState,
    EntropyQuantities, GasParams, PrimitiveState,
};

#[derive(Debug, Clone, PartialEq)]
pub struct SolverConfig {
    /// Courant number in `(0, 1]`.
    pub cfl: f64,
    pub gas: GasParams,
    pub t_end: f64,
    /// Steps between diagnostic records. The initial and final states are
    /// always recorded.
    pub cadence: usize,
    /// Times at which the field is stored; steps are shortened to hit them.
    pub snapshot_times: Vec<f64>,
    /// Evaluate face entropy production, the per-cell entropy inequality and
    /// the entropy balance on every step.
    pub monitor_entropy: bool,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            cfl: 0.9,
            gas: GasParams::AIR,
            t_end: 0.0,
            cadence: 10,
            snapshot_times: Vec::new(),
            monitor_entropy: true,
        }
    }
}

impl SolverConfig {
    pub fn new(t_end: f64) -> Self {
        Self {
            t_end,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.cfl > 0.0 && self.cfl <= 1.0) {
            return Err(Error::InvalidParameter("cfl must lie in (0, 1]"));
        }
        GasParams::new(self.gas.gamma)?;
        if !(self.t_end >= 0.0 && self.t_end.is_finite()) {
            return Err(Error::InvalidParameter(
                "t_end must be finite and non-negative",
            ));
        }
        if self.cadence == 0 {
            return Err(Error::InvalidParameter(
                "diagnostic cadence must be at least 1",
            ));
        }
        if self
            .snapshot_times
            .iter()
            .any(|&t| !(t >= 0.0 && t <= self.t_end))
        {
            return Err(Error::InvalidParameter(
                "snapshot times must lie in [0, t_end]",
            ));
        }
        Ok(())
    }
}

/// Diagnostics of one recorded step. Maxima and counters cover all steps since
/// the previous record.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiagnosticsRecord {
    pub step: usize,
    pub t: f64,
    pub dt: f64,
    pub total_mass: f64,
    pub total_mx: f64,
    pub total_my: f64,
    pub total_energy: f64,
    /// `∫η dx`.
    pub total_eta: f64,
    /// `∫η dx` plus the entropy that has left through the boundary so far.
    pub eta_balance: f64,
    /// `Σ_faces |[[U]]|² |σ| dt`, accumulated since `t = 0`.
    pub weak_bv: f64,
    /// Largest face entropy production `r_σ`.
    pub max_r_sigma: f64,
    /// Largest `r_σ / scale`, see [`face_entropy_production_scaled`].
    pub max_r_sigma_scaled: f64,
    /// Largest one-step increase of `∫η dx` relative to `∫|η| dx`.
    pub max_eta_increase: f64,
    /// Largest one-step increase of the entropy balance relative to `∫|η| dx`.
    pub max_balance_increase: f64,
    pub min_rho: f64,
    pub max_e: f64,
    /// Smallest lower eigenvalue bound of the entropy Hessian over all cells.
    pub hessian_bound_min: f64,
    /// Cells where the discrete cell entropy inequality failed beyond round-off.
    pub cell_entropy_violations: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Snapshot {
    pub t: f64,
    pub field: Field2D,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunOutput {
    pub field: Field2D,
    pub t: f64,
    pub steps: usize,
    pub diagnostics: Vec<DiagnosticsRecord>,
    pub snapshots: Vec<Snapshot>,
}

/// A run that stopped early. `field` is the last admissible state.
#[derive(Debug, Clone, PartialEq)]
pub struct RunFailure {
    pub error: Error,
    pub field: Field2D,
    pub t: f64,
    pub steps: usize,
    pub diagnostics: Vec<DiagnosticsRecord>,
    pub snapshots: Vec<Snapshot>,
}

impl fmt::Display for RunFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "run aborted at t={} after {} steps: {}",
            self.t, self.steps, self.error
        )
    }
}

impl core::error::Error for RunFailure {
    fn source(&self) -> Option<&(dyn core::error::Error + 'static)> {
        Some(&self.error)
    }
}

/// Largest stable step: `cfl / max_K ((|u|+a)/dx + (|v|+a)/dy)`, shortened so
/// that `t + dt` does not pass `t_end`.
pub fn compute_dt(field: &Field2D, cfg: &SolverConfig, t: f64) -> Result<f64> {
    let (dx, dy) = (field.dx(), field.dy());
    let mut rate: f64 = 0.0;
    for ((i, j), u) in field.interior() {
        let v = cons_to_prim(&u, cfg.gas).map_err(|e| with_cell(e, i, j))?;
        let a = v.sound_speed(cfg.gas);
        rate = rate.max((v.u.abs() + a) / dx + (v.v.abs() + a) / dy);
    }
    let dt = cfg.cfl / rate;
    let remaining = cfg.t_end - t;
    Ok(if dt >= remaining {
        remaining.max(0.0)
    } else {
        dt
    })
}

fn with_cell(e: Error, i: usize, j: usize) -> Error {
    match e {
        Error::NonPhysical { state, .. } => Error::NonPhysical {
            cell: Some((i, j)),
            state,
        },
        other => other,
    }
}

/// Entropy production `r_σ = [[ν]] · F_n(U^RP) - [[ψ_n]]` of one face, with
/// `U_L` on the low side along `axis`.
pub fn face_entropy_production(
    left: &ConservedState,
    right: &ConservedState,
    axis: Axis,
    gas: GasParams,
) -> Result<f64> {
    Ok(face_entropy_production_scaled(left, right, axis, gas)?.0)
}

/// `r_σ` together with its round-off scale
/// `Σ_i (|ν_L,i| + |ν_R,i|) |F_i| + |ψ_L| + |ψ_R|`.
///
/// The jumps are differences of these quantities, so a face whose states
/// agree to the last few bits has `r_σ` of order `ε · scale` and no smaller.
pub fn face_entropy_production_scaled(
    left: &ConservedState,
    right: &ConservedState,
    axis: Axis,
    gas: GasParams,
) -> Result<(f64, f64)> {
    let pl = cons_to_prim(left, gas)?;
    let pr = cons_to_prim(right, gas)?;
    let face = face_state(&pl, &pr, axis, gas)?;
    let f = flux_prim(&face, axis, gas);
    let el = entropy_quantities_prim(&pl, gas);
    let er = entropy_quantities_prim(&pr, gas);
    Ok(entropy_production(&el, &er, &f, axis))
}

fn entropy_production(
    el: &EntropyQuantities,
    er: &EntropyQuantities,
    f: &ConservedState,
    axis: Axis,
) -> (f64, f64) {
    let f = f.to_array();
    let mut r = 0.0;
    let mut scale = 0.0;
    for ((nl, nr), fk) in el.nu.iter().zip(&er.nu).zip(&f) {
        r += (nr - nl) * fk;
        scale += (nl.abs() + nr.abs()) * fk.abs();
    }
    let (psi_l, psi_r) = (el.psi(axis), er.psi(axis));
    (r - (psi_r - psi_l), scale + psi_l.abs() + psi_r.abs())
}

/// Riemann solution on the face, in the grid frame.
fn face_state(
    left: &PrimitiveState,
    right: &PrimitiveState,
    axis: Axis,
    gas: GasParams,
) -> Result<PrimitiveState> {
    let rp = RiemannInput::along(axis, *left, *right);
    let star = solve_star(&rp, gas)?;
    Ok(sample(0.0, &rp, &star, gas).rotate_to(axis))
}

/// Per-step output of [`Stepper::step`].
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct StepReport {
    pub max_r_sigma: f64,
    pub max_r_sigma_scaled: f64,
    /// `Σ_faces |[[U]]|² |σ| dt` for this step.
    pub weak_bv: f64,
    /// `dt ∮ q(U^RP)·n dS`; zero for periodic boundaries.
    pub boundary_eta_outflux: f64,
    pub cell_entropy_violations: usize,
    /// `∫η dx` of the updated field, when entropy monitoring is enabled.
    pub total_eta: Option<f64>,
    /// `∫|η| dx` of the updated field, when entropy monitoring is enabled.
    pub total_abs_eta: Option<f64>,
}

#[derive(Debug, Clone, Copy, Default)]
struct Face {
    flux: ConservedState,
    q: f64,
}

/// Reusable buffers for the update of one grid.
#[derive(Debug, Clone)]
pub struct Stepper {
    prim: Vec<PrimitiveState>,
    ent: Vec<EntropyQuantities>,
    fx: Vec<Face>,
    fy: Vec<Face>,
    next: Vec<ConservedState>,
}

const NO_ENTROPY: EntropyQuantities = EntropyQuantities {
    s_thermo: 0.0,
    eta: 0.0,
    q_x: 0.0,
    q_y: 0.0,
    nu: [0.0; 4],
    psi_x: 0.0,
    psi_y: 0.0,
};

impl Stepper {
    pub fn new(spec: &GridSpec) -> Self {
        let cells = (spec.nx + 2) * (spec.ny + 2);
        Self {
            prim: vec![PrimitiveState::new(0.0, 0.0, 0.0, 0.0); cells],
            ent: vec![NO_ENTROPY; cells],
            fx: vec![Face::default(); (spec.nx + 1) * spec.ny],
            fy: vec![Face::default(); spec.nx * (spec.ny + 1)],
            next: vec![ConservedState::ZERO; spec.nx * spec.ny],
        }
    }

    /// Advance `field` by `dt`. On error the field is left untouched.
    pub fn step(
        &mut self,
        field: &mut Field2D,
        dt: f64,
        gas: GasParams,
        monitor: bool,
    ) -> Result<StepReport> {
        let spec = *field.spec();
        let (nx, ny) = (spec.nx, spec.ny);
        let stride = nx + 2;
        let idx = |i: usize, j: usize| j * stride + i;
        if self.fx.len() != (nx + 1) * ny || self.fy.len() != nx * (ny + 1) {
            *self = Stepper::new(&spec);
        }
        field.fill_ghosts();
        let raw = field.raw();

        // Primitive variables on interior and edge ghosts (corners are unused).
        for jj in 0..ny + 2 {
            for ii in 0..nx + 2 {
                let corner = (ii == 0 || ii == nx + 1) && (jj == 0 || jj == ny + 1);
                if corner {
                    continue;
                }
                let k = idx(ii, jj);
                let v = cons_to_prim(&raw[k], gas).map_err(|e| {
                    with_cell(
                        e,
                        ii.saturating_sub(1).min(nx - 1),
                        jj.saturating_sub(1).min(ny - 1),
                    )
                })?;
                self.prim[k] = v;
                if monitor {
                    self.ent[k] = entropy_quantities_prim(&v, gas);
                }
            }
        }

        let mut report = StepReport {
            max_r_sigma: f64::NEG_INFINITY,
            max_r_sigma_scaled: f64::NEG_INFINITY,
            ..StepReport::default()
        };
        let periodic = spec.bc == BoundaryCondition::Periodic;
        let (dx, dy) = (spec.dx(), spec.dy());
        let mut bv = 0.0;

        for j in 0..ny {
            for i in 0..=nx {
                let (kl, kr) = (idx(i, j + 1), idx(i + 1, j + 1));
                let face = face_state(&self.prim[kl], &self.prim[kr], Axis::X, gas)?;
                let flux = flux_prim(&face, Axis::X, gas);
                let mut q = 0.0;
                if monitor {
                    q = entropy_quantities_prim(&face, gas).q_x;
                    let (r, scale) =
                        entropy_production(&self.ent[kl], &self.ent[kr], &flux, Axis::X);
                    record_production(&mut report, r, scale);
                }
                let counted = if periodic { i < nx } else { i > 0 && i < nx };
                if counted {
                    bv += (raw[kr] - raw[kl]).norm_sq() * dy;
                }
                self.fx[j * (nx + 1) + i] = Face { flux, q };
            }
        }
        for j in 0..=ny {
            for i in 0..nx {
                let (kl, kr) = (idx(i + 1, j), idx(i + 1, j + 1));
                let face = face_state(&self.prim[kl], &self.prim[kr], Axis::Y, gas)?;
                let flux = flux_prim(&face, Axis::Y, gas);
                let mut q = 0.0;
                if monitor {
                    q = entropy_quantities_prim(&face, gas).q_y;
                    let (r, scale) =
                        entropy_production(&self.ent[kl], &self.ent[kr], &flux, Axis::Y);
                    record_production(&mut report, r, scale);
                }
                let counted = if periodic { j < ny } else { j > 0 && j < ny };
                if counted {
                    bv += (raw[kr] - raw[kl]).norm_sq() * dx;
                }
                self.fy[j * nx + i] = Face { flux, q };
            }
        }
        report.weak_bv = bv * dt;

        let (lx, ly) = (dt / dx, dt / dy);
        let mut etas = Vec::new();
        let mut violations = 0;
        for j in 0..ny {
            for i in 0..nx {
                let (w, e) = (self.fx[j * (nx + 1) + i], self.fx[j * (nx + 1) + i + 1]);
                let (s, n) = (self.fy[j * nx + i], self.fy[(j + 1) * nx + i]);
                let old = raw[idx(i + 1, j + 1)];
                let change = (e.flux - w.flux) * lx + (n.flux - s.flux) * ly;
                let new = old - change;
                let v = cons_to_prim(&new, gas).map_err(|err| with_cell(err, i, j))?;
                if monitor {
                    let eta_old = self.ent[idx(i + 1, j + 1)].eta;
                    let eta_new = entropy_quantities_prim(&v, gas).eta;
                    let qx = (e.q - w.q) * lx;
                    let qy = (n.q - s.q) * ly;
                    let bound = eta_old - (qx + qy);
                    let tol = 1e-12
                        * (eta_old.abs()
                            + (e.q.abs() + w.q.abs()) * lx
                            + (n.q.abs() + s.q.abs()) * ly);
                    if eta_new - bound > tol {
                        violations += 1;
                    }
                    etas.push(eta_new);
                }
                self.next[j * nx + i] = new;
            }
        }

        if monitor {
            let area = dx * dy;
            report.total_eta = Some(compensated_sum(etas.iter().copied()) * area);
            report.total_abs_eta = Some(compensated_sum(etas.iter().map(|e| e.abs())) * area);
            if !periodic {
                let mut out = Vec::with_capacity(2 * (nx + ny));
                for j in 0..ny {
                    out.push(self.fx[j * (nx + 1) + nx].q * dy);
                    out.push(-self.fx[j * (nx + 1)].q * dy);
                }
                for i in 0..nx {
                    out.push(self.fy[ny * nx + i].q * dx);
                    out.push(-self.fy[i].q * dx);
                }
                report.boundary_eta_outflux = compensated_sum(out) * dt;
            }
            if violations > 0 {
                log::warn!("cell entropy inequality violated in {violations} cells (dt={dt})");
            }
        } else {
            report.max_r_sigma = 0.0;
            report.max_r_sigma_scaled = 0.0;
        }
        report.cell_entropy_violations = violations;

        let data = field.raw_mut();
        for j in 0..ny {
            for i in 0..nx {
                data[idx(i + 1, j + 1)] = self.next[j * nx + i];
            }
        }
        field.fill_ghosts();
        Ok(report)
    }
}

fn record_production(report: &mut StepReport, r: f64, scale: f64) {
    report.max_r_sigma = report.max_r_sigma.max(r);
    let scaled = if scale > 0.0 { r / scale } else { 0.0 };
    report.max_r_sigma_scaled = report.max_r_sigma_scaled.max(scaled);
}

/// One forward-Euler step of size `dt`.
pub fn step(field: &Field2D, dt: f64, cfg: &SolverConfig) -> Result<Field2D> {
    let mut out = field.clone();
    Stepper::new(field.spec()).step(&mut out, dt, cfg.gas, false)?;
    Ok(out)
}

struct Totals {
    eta: f64,
    abs_eta: f64,
}

fn entropy_totals(field: &Field2D, gas: GasParams) -> Result<Totals> {
    let mut etas = Vec::with_capacity(field.nx() * field.ny());
    for ((i, j), u) in field.interior() {
        let v = cons_to_prim(&u, gas).map_err(|e| with_cell(e, i, j))?;
        etas.push(entropy_quantities_prim(&v, gas).eta);
    }
    let area = field.spec().cell_area();
    Ok(Totals {
        eta: compensated_sum(etas.iter().copied()) * area,
        abs_eta: compensated_sum(etas.iter().map(|e| e.abs())) * area,
    })
}

/// Aggregates of the steps since the previous record.
#[derive(Default)]
struct Window {
    max_r_sigma: Option<f64>,
    max_r_sigma_scaled: Option<f64>,
    max_eta_increase: Option<f64>,
    max_balance_increase: Option<f64>,
    violations: usize,
}

impl Window {
    fn absorb(&mut self, r: &StepReport) {
        let bump = |slot: &mut Option<f64>, v: f64| *slot = Some(slot.map_or(v, |s| s.max(v)));
        bump(&mut self.max_r_sigma, r.max_r_sigma);
        bump(&mut self.max_r_sigma_scaled, r.max_r_sigma_scaled);
        self.violations += r.cell_entropy_violations;
    }
}

struct RunState {
    t: f64,
    steps: usize,
    weak_bv: f64,
    outflux: f64,
    eta: Option<Totals>,
    last_dt: f64,
}

fn make_record(
    field: &Field2D,
    gas: GasParams,
    state: &RunState,
    window: &Window,
) -> Result<DiagnosticsRecord> {
    let totals = field.totals();
    let eta = match &state.eta {
        Some(t) => t.eta,
        None => entropy_totals(field, gas)?.eta,
    };
    let mut min_rho = f64::INFINITY;
    let mut max_e = f64::NEG_INFINITY;
    let mut hess = f64::INFINITY;
    for (_, u) in field.interior() {
        min_rho = min_rho.min(u.rho);
        max_e = max_e.max(u.e_total);
        hess = hess.min(hessian_eigen_bounds(&u, gas).lower);
    }
    Ok(DiagnosticsRecord {
        step: state.steps,
        t: state.t,
        dt: state.last_dt,
        total_mass: totals.rho,
        total_mx: totals.mx,
        total_my: totals.my,
        total_energy: totals.e_total,
        total_eta: eta,
        eta_balance: eta + state.outflux,
        weak_bv: state.weak_bv,
        max_r_sigma: window.max_r_sigma.unwrap_or(0.0),
        max_r_sigma_scaled: window.max_r_sigma_scaled.unwrap_or(0.0),
        max_eta_increase: window.max_eta_increase.unwrap_or(0.0),
        max_balance_increase: window.max_balance_increase.unwrap_or(0.0),
        min_rho,
        max_e,
        hessian_bound_min: hess,
        cell_entropy_violations: window.violations,
    })
}

/// Project `ic` onto the grid and advance it to `cfg.t_end`.
#[allow(clippy::result_large_err)]
pub fn run<F>(
    ic: F,
    spec: GridSpec,
    cfg: &SolverConfig,
) -> core::result::Result<RunOutput, RunFailure>
where
    F: Fn(f64, f64) -> PrimitiveState,
{
    run_from(project_initial(ic, spec, cfg.gas), cfg)
}

/// Advance an initial field to `cfg.t_end`.
#[allow(clippy::result_large_err)]
pub fn run_from(
    mut field: Field2D,
    cfg: &SolverConfig,
) -> core::result::Result<RunOutput, RunFailure> {
    let gas = cfg.gas;
    let mut diagnostics = Vec::new();
    let mut snapshots = Vec::new();
    let mut times = cfg.snapshot_times.clone();
    times.sort_by(f64::total_cmp);
    times.dedup();
    let mut pending = times.into_iter().peekable();

    let mut state = RunState {
        t: 0.0,
        steps: 0,
        weak_bv: 0.0,
        outflux: 0.0,
        eta: None,
        last_dt: 0.0,
    };

    macro_rules! bail {
        ($err:expr) => {
            return Err(RunFailure {
                error: $err,
                field,
                t: state.t,
                steps: state.steps,
                diagnostics,
                snapshots,
            })
        };
    }

    if let Err(e) = cfg.validate() {
        bail!(e);
    }
    field.fill_ghosts();
    if cfg.monitor_entropy {
        match entropy_totals(&field, gas) {
            Ok(t) => state.eta = Some(t),
            Err(e) => bail!(e),
        }
    }
    match make_record(&field, gas, &state, &Window::default()) {
        Ok(r) => diagnostics.push(r),
        Err(e) => bail!(e),
    }
    while pending.peek().is_some_and(|&ts| ts <= state.t) {
        snapshots.push(Snapshot {
            t: state.t,
            field: field.clone(),
        });
        pending.next();
    }

    let mut stepper = Stepper::new(field.spec());
    let mut window = Window::default();
    while state.t < cfg.t_end {
        let mut dt = match compute_dt(&field, cfg, state.t) {
            Ok(dt) => dt,
            Err(e) => bail!(e),
        };
        let mut t_next = state.t + dt;
        if dt >= cfg.t_end - state.t {
            t_next = cfg.t_end;
        }
        if let Some(&ts) = pending.peek() {
            if ts < t_next {
                dt = ts - state.t;
                t_next = ts;
            }
        }
        if !(dt > 0.0) {
            bail!(Error::InvalidParameter("time step underflow"));
        }

        let mut next = field.clone();
        let report = match stepper.step(&mut next, dt, gas, cfg.monitor_entropy) {
            Ok(r) => r,
            Err(e) => bail!(e),
        };
        field = next;
        state.t = t_next;
        state.steps += 1;
        state.last_dt = dt;
        state.weak_bv += report.weak_bv;
        window.absorb(&report);

        if let (Some(prev), Some(eta), Some(abs_eta)) =
            (&state.eta, report.total_eta, report.total_abs_eta)
        {
            let scale = prev.abs_eta.max(abs_eta).max(f64::MIN_POSITIVE);
            let rise = (eta - prev.eta) / scale;
            let balance_rise = (eta + report.boundary_eta_outflux - prev.eta) / scale;
            let bump = |slot: &mut Option<f64>, v: f64| *slot = Some(slot.map_or(v, |s| s.max(v)));
            bump(&mut window.max_eta_increase, rise);
            bump(&mut window.max_balance_increase, balance_rise);
            state.outflux += report.boundary_eta_outflux;
            state.eta = Some(Totals { eta, abs_eta });
        }

        while pending.peek().is_some_and(|&ts| ts <= state.t) {
            snapshots.push(Snapshot {
                t: state.t,
                field: field.clone(),
            });
            pending.next();
        }
        let last = state.t >= cfg.t_end;
        if last || state.steps.is_multiple_of(cfg.cadence) {
            match make_record(&field, gas, &state, &window) {
                Ok(r) => diagnostics.push(r),
                Err(e) => bail!(e),
            }
            window = Window::default();
        }
    }
    log::debug!("run finished: t={} after {} steps", state.t, state.steps);

    Ok(RunOutput {
        field,
        t: state.t,
        steps: state.steps,
        diagnostics,
        snapshots,
    })
}
