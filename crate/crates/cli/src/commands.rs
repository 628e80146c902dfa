use std::io::Write;

use godunov_core::analysis::{
    cesaro_scalar, compute_errors, first_variance_scalar, order_table, wasserstein_field,
    ScalarField, SolutionSequence, Variable,
};
use godunov_core::grid::{project_initial, Field2D, GridSpec};
use godunov_core::riemann::{sample, solve_star, RiemannInput, WaveSpeeds};
use godunov_core::solver::{run_from, RunFailure, RunOutput};
use godunov_core::thermo::{GasParams, PrimitiveState};

use crate::config::RunConfig;
use crate::error::{CliError, Result};
use crate::output::{
    write_columns, write_diagnostics, write_error_csv, write_field, write_text, FieldMeta,
    Manifest, OutputDir, Provenance, RunRecord, VERSION,
};

fn initial_field(cfg: &RunConfig, n: usize) -> Result<Field2D> {
    let spec = GridSpec::unit_square(n, cfg.bc)?;
    Ok(project_initial(|x, y| cfg.ic.state(x, y), spec, cfg.gas()))
}

fn fmt_time(t: f64) -> String {
    format!("{t:.6}")
}

/// Write the outputs of one run into `prefix` and return how it ended.
fn write_run(
    out: &mut OutputDir,
    prov: &Provenance,
    cfg: &RunConfig,
    prefix: &str,
    result: std::result::Result<RunOutput, RunFailure>,
) -> Result<(RunRecord, Field2D, Option<RunFailure>)> {
    let gas = cfg.gas();
    let (field, t, steps, diagnostics, snapshots, failure) = match result {
        Ok(o) => (o.field, o.t, o.steps, o.diagnostics, o.snapshots, None),
        Err(f) => (
            f.field.clone(),
            f.t,
            f.steps,
            f.diagnostics.clone(),
            f.snapshots.clone(),
            Some(f),
        ),
    };
    for s in &snapshots {
        let path = out.path(&format!("{prefix}snapshot_t{}.csv", fmt_time(s.t)));
        write_field(&path, prov, &s.field, s.t, gas)?;
    }
    let name = if failure.is_some() {
        "last_admissible.csv"
    } else {
        "final.csv"
    };
    write_field(&out.path(&format!("{prefix}{name}")), prov, &field, t, gas)?;
    write_diagnostics(
        &out.path(&format!("{prefix}diagnostics.csv")),
        prov,
        &diagnostics,
    )?;
    let status = match &failure {
        Some(f) => format!("aborted: {}", f.error),
        None => "completed".to_string(),
    };
    let record = RunRecord {
        n: field.nx(),
        steps,
        t_final: t,
        status,
    };
    Ok((record, field, failure))
}

/// `godunov run`: one solution with snapshots, diagnostics and a manifest.
/// Outputs written before a non-physical state stay on disk.
pub fn cmd_run(cfg: &RunConfig) -> Result<()> {
    let prov = Provenance::of(cfg);
    let mut out = OutputDir::new(cfg.output_dir.clone())?;
    let mut manifest = Manifest::new(cfg, "run");
    let initial = initial_field(cfg, cfg.n)?;
    log::info!(
        "{} n={} t_end={} -> {}",
        cfg.benchmark.name(),
        cfg.n,
        cfg.solver.t_end,
        out.root.display()
    );
    let (record, _, failure) = write_run(&mut out, &prov, cfg, "", run_from(initial, &cfg.solver))?;
    manifest.status = record.status.clone();
    manifest.runs.push(record);
    finish(out, manifest, &prov, failure)
}

fn finish(
    mut out: OutputDir,
    mut manifest: Manifest,
    prov: &Provenance,
    failure: Option<RunFailure>,
) -> Result<()> {
    let path = out.root.join("manifest.toml");
    manifest.outputs = std::mem::take(&mut out.written);
    manifest.write(&path, prov)?;
    match failure {
        Some(f) => Err(f.into()),
        None => Ok(()),
    }
}

/// `godunov convergence`: the reference and every level with identical
/// physics, then the error tables and the averaged fields.
///
/// Levels run from coarse to fine after the reference. If one fails, tables
/// cover the levels finished before it.
pub fn cmd_convergence(cfg: &RunConfig) -> Result<()> {
    let hierarchy = cfg
        .convergence
        .clone()
        .ok_or_else(|| CliError::Config("missing [convergence] section".into()))?;
    if hierarchy.levels.len() < 2 {
        return Err(godunov_core::Error::InsufficientLevels {
            levels: hierarchy.levels.len(),
        }
        .into());
    }
    let prov = Provenance::of(cfg);
    let mut out = OutputDir::new(cfg.output_dir.clone())?;
    let mut manifest = Manifest::new(cfg, "convergence");

    let solve =
        |n: usize, out: &mut OutputDir| -> Result<(RunRecord, Field2D, Option<RunFailure>)> {
            log::info!(
                "{} n={} t_end={}",
                cfg.benchmark.name(),
                n,
                cfg.solver.t_end
            );
            let result = run_from(initial_field(cfg, n)?, &cfg.solver);
            write_run(out, &prov, cfg, &format!("n{n}/"), result)
        };

    let (record, reference, failure) = solve(hierarchy.reference_n, &mut out)?;
    manifest.runs.push(record);
    if failure.is_some() {
        manifest.status = "aborted: reference run failed".into();
        return finish(out, manifest, &prov, failure);
    }

    let mut fields = Vec::new();
    let mut failure = None;
    for &n in &hierarchy.levels {
        let (record, field, failed) = solve(n, &mut out)?;
        manifest.runs.push(record);
        if failed.is_some() {
            failure = failed;
            break;
        }
        fields.push(field);
    }

    if fields.len() >= 2 {
        let seq = SolutionSequence {
            fields,
            reference,
            variables: Variable::ERRORS.to_vec(),
        };
        write_tables(&mut out, &prov, &seq, cfg.gas(), cfg.solver.t_end)?;
    }
    manifest.status = match &failure {
        Some(f) => format!("partial: {}", f.error),
        None => "completed".into(),
    };
    finish(out, manifest, &prov, failure)
}

fn write_tables(
    out: &mut OutputDir,
    prov: &Provenance,
    seq: &SolutionSequence,
    gas: GasParams,
    t: f64,
) -> Result<()> {
    let report = compute_errors(seq, gas)?;
    for v in &report.variables {
        let name = v.variable.name();
        write_error_csv(&out.path(&format!("errors_{name}.csv")), prov, v)?;
        write_text(
            &out.path(&format!("errors_{name}.txt")),
            prov,
            &order_table(v),
        )?;
    }
    let mut total = String::from("n,E4_total\n");
    for (n, e) in report.levels.iter().zip(&report.e4_total) {
        total.push_str(&format!("{n},{e:?}\n"));
    }
    write_text(&out.path("errors_e4_total.csv"), prov, &total)?;

    // Averaged fields at the reference resolution, one column per variable.
    let reference = &seq.reference;
    let (nx, ny) = (reference.nx(), reference.ny());
    let sets: Vec<Vec<ScalarField>> = Variable::DUMP
        .iter()
        .map(|&v| {
            let mut all = seq
                .fields
                .iter()
                .map(|f| ScalarField::from_field(f, v, gas).prolong_to(nx, ny))
                .collect::<godunov_core::Result<Vec<_>>>()?;
            all.push(ScalarField::from_field(reference, v, gas));
            Ok(all)
        })
        .collect::<godunov_core::Result<_>>()?;
    let origin = (reference.spec().x0, reference.spec().y0);
    for (k, n) in seq
        .fields
        .iter()
        .map(Field2D::nx)
        .enumerate()
        .map(|(i, n)| (i + 1, n))
    {
        let meta = FieldMeta {
            nx,
            ny,
            dx: reference.dx(),
            dy: reference.dy(),
            t,
            gamma: gas.gamma,
        };
        let each = |f: &dyn Fn(&[ScalarField]) -> godunov_core::Result<ScalarField>| {
            let cols: Vec<ScalarField> = sets
                .iter()
                .map(|s| f(s))
                .collect::<godunov_core::Result<_>>()?;
            Ok::<_, CliError>(<[ScalarField; 6]>::try_from(cols).expect("six dump variables"))
        };
        let cesaro = each(&|s| cesaro_scalar(s, k))?;
        let variance = each(&|s| first_variance_scalar(s, k))?;
        let w1 = each(&|s| wasserstein_field(s, k, s))?;
        for (kind, cols) in [("cesaro", cesaro), ("variance", variance), ("w1", w1)] {
            let extra = format!(" kind={kind} k={k} n={n}");
            let path = out.path(&format!("{kind}_k{k}.csv"));
            write_columns(&path, prov, &extra, origin, meta, &cols)?;
        }
    }
    Ok(())
}

/// `godunov riemann`: star region and sampled states as `key = value` lines
/// followed by a `xi,rho,u,p` table.
pub fn cmd_riemann(
    left: [f64; 3],
    right: [f64; 3],
    gamma: f64,
    xi: &[f64],
    out: &mut impl Write,
) -> Result<()> {
    let gas = GasParams::new(gamma).map_err(|e| CliError::Config(format!("--gamma: {e}")))?;
    let state = |flag: &str, s: [f64; 3]| {
        let w = PrimitiveState::new(s[0], s[1], 0.0, s[2]);
        if w.is_admissible() && s[1].is_finite() {
            Ok(w)
        } else {
            Err(CliError::Config(format!(
                "{flag}: need rho > 0 and p > 0, got {s:?}"
            )))
        }
    };
    let rp = RiemannInput::new(state("--left", left)?, state("--right", right)?);
    let star = solve_star(&rp, gas)?;
    let wave = |w: WaveSpeeds| match w {
        WaveSpeeds::Shock(s) => format!("shock speed={s:?}"),
        WaveSpeeds::Rarefaction { head, tail } => {
            format!("rarefaction head={head:?} tail={tail:?}")
        }
    };
    let io = |e| CliError::io("<stdout>")(e);
    writeln!(out, "# godunov {VERSION} riemann gamma={gamma:?}").map_err(io)?;
    writeln!(out, "p_star = {:?}", star.p_star).map_err(io)?;
    writeln!(out, "u_star = {:?}", star.u_star).map_err(io)?;
    writeln!(out, "rho_star_l = {:?}", star.rho_star_l).map_err(io)?;
    writeln!(out, "rho_star_r = {:?}", star.rho_star_r).map_err(io)?;
    writeln!(out, "pattern = {}", star.pattern.as_str()).map_err(io)?;
    writeln!(out, "left_wave = {}", wave(star.left_speeds)).map_err(io)?;
    writeln!(out, "right_wave = {}", wave(star.right_speeds)).map_err(io)?;
    writeln!(out, "iterations = {}", star.iterations).map_err(io)?;
    if !xi.is_empty() {
        writeln!(out, "xi,rho,u,p").map_err(io)?;
        for &x in xi {
            let w = sample(x, &rp, &star, gas);
            writeln!(out, "{x:?},{:?},{:?},{:?}", w.rho, w.u, w.p).map_err(io)?;
        }
    }
    Ok(())
}
