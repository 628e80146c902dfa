use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use godunov_cli::commands::{cmd_convergence, cmd_riemann, cmd_run};
use godunov_cli::config::OUTPUT_DIR_ENV;
use godunov_cli::output::{read_field, write_field, Manifest, Provenance};
use godunov_cli::{CliError, RunConfig};
use godunov_core::analysis::Variable;
use godunov_core::benchmarks::Benchmark;
use godunov_core::grid::{project_initial, BoundaryCondition, GridSpec};
use godunov_core::solver::run_from;
use godunov_core::GasParams;

fn config(dir: &Path, body: &str) -> RunConfig {
    let text = format!("{body}\n[output]\ndir = {:?}\n", dir.to_str().unwrap());
    RunConfig::parse(&text, Path::new("test.toml")).unwrap()
}

fn godunov(args: &[&str], envs: &[(&str, &Path)]) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_godunov"));
    cmd.args(args)
        .env_remove(OUTPUT_DIR_ENV)
        .env("RUST_LOG", "warn");
    for (k, v) in envs {
        cmd.env(k, v);
    }
    cmd.output().unwrap()
}

fn write_config(dir: &Path, body: &str) -> PathBuf {
    let path = dir.join("config.toml");
    fs::write(&path, body).unwrap();
    path
}

#[test]
fn defaults_follow_the_benchmark() {
    let cfg = RunConfig::parse("[problem]\nbenchmark = \"rm\"\n", Path::new("x")).unwrap();
    assert_eq!(cfg.benchmark, Benchmark::RichtmyerMeshkov);
    assert_eq!(cfg.solver.t_end, 4.0);
    assert_eq!(cfg.bc, BoundaryCondition::Periodic);
    assert_eq!((cfg.n, cfg.modes, cfg.epsilon), (64, 10, 0.01));
    assert_eq!(cfg.hash.len(), 64);
}

#[test]
fn malformed_configs_are_rejected_with_exit_2() {
    let cases = [
        ("[problem]\nbenchmark = \"spiral\"\nspeed = 3\n", "speed"),
        ("[problem]\nbenchmark = \"sod\"\n", "sod"),
        ("[problem]\nbenchmark = \"spiral\"\n[solver]\ncfl = 2.0\n", "cfl"),
        ("[problem]\nbenchmark = \"spiral\"\n[grid]\nbc = \"open\"\n", "grid.bc"),
        ("[problem]\nbenchmark = \"kh\"\nepsilon = 0.3\n", "epsilon"),
        ("[problem]\nbenchmark = \"spiral\"\n[convergence]\nlevels = [32, 48]\nreference = 128\n", "convergence"),
        ("[problem\nbenchmark = 1", "line 1"),
    ];
    for (text, needle) in cases {
        let err = RunConfig::parse(text, Path::new("bad.toml")).unwrap_err();
        assert_eq!(err.exit_code(), 2, "{text}");
        assert!(
            err.to_string().contains(needle),
            "{err} should mention {needle}"
        );
    }
}

#[test]
fn quadrant_states_are_read_and_checked() {
    let base = "[problem]\nbenchmark = \"quadrant\"\n[problem.quadrants]\nne = [1.0, 0.0, 0.0, 1.0]\nnw = [0.5, 0.1, 0.0, 1.0]\nsw = [1.0, 0.0, 0.0, 1.0]\n";
    let ok = RunConfig::parse(
        &format!("{base}se = [2.0, 0.0, 0.3, 4.0]\n"),
        Path::new("q"),
    )
    .unwrap();
    assert_eq!(ok.ic.state(0.25, 0.75).rho, 0.5);
    let err = RunConfig::parse(
        &format!("{base}se = [2.0, 0.0, 0.3, -4.0]\n"),
        Path::new("q"),
    )
    .unwrap_err();
    assert!(err.to_string().contains("quadrants.se"));
    let err = RunConfig::parse(
        "[problem]\nbenchmark = \"spiral\"\n[problem.quadrants]\nne = [1,0,0,1]\nnw = [1,0,0,1]\nsw = [1,0,0,1]\nse = [1,0,0,1]\n",
        Path::new("q"),
    );
    assert!(err.is_err());
}

#[test]
fn zero_end_time_writes_the_projected_data() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = config(
        dir.path(),
        "[problem]\nbenchmark = \"kh\"\nseed = 3\n[grid]\nn = 16\n[solver]\nt_end = 0.0",
    );
    cmd_run(&cfg).unwrap();
    let file = read_field(&dir.path().join("final.csv")).unwrap();
    assert_eq!(file.meta.t, 0.0);
    assert_eq!(file.provenance.as_ref().unwrap().config_hash, cfg.hash);
    let spec = GridSpec::unit_square(16, cfg.bc).unwrap();
    let projected = project_initial(|x, y| cfg.ic.state(x, y), spec, cfg.gas());
    assert_eq!(file.to_field(cfg.bc).unwrap(), projected);
}

#[test]
fn run_writes_snapshots_diagnostics_and_manifest() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = config(
        dir.path(),
        "[problem]\nbenchmark = \"kelvin_helmholtz\"\nseed = 5\nmodes = 4\n[grid]\nn = 16\n[solver]\nt_end = 0.1\nsnapshot_times = [0.05]",
    );
    cmd_run(&cfg).unwrap();
    for name in [
        "final.csv",
        "snapshot_t0.050000.csv",
        "diagnostics.csv",
        "manifest.toml",
    ] {
        let text = fs::read_to_string(dir.path().join(name)).unwrap();
        assert!(
            text.starts_with(&format!(
                "# godunov {} config={} benchmark=kelvin_helmholtz",
                env!("CARGO_PKG_VERSION"),
                cfg.hash
            )),
            "{name}"
        );
    }
    let diag = fs::read_to_string(dir.path().join("diagnostics.csv")).unwrap();
    assert!(diag
        .lines()
        .nth(1)
        .unwrap()
        .starts_with("t,dt,mass,energy,eta,weak_bv,max_r_sigma,min_rho,max_E"));

    let manifest = Manifest::read(&dir.path().join("manifest.toml")).unwrap();
    assert_eq!(manifest.status, "completed");
    assert_eq!(manifest.perturbations.len(), 2);
    let lower = &manifest.perturbations[0];
    let expected = godunov_core::benchmarks::PerturbationSpec::sample(4, 0.01, 5);
    assert_eq!(
        (lower.seed, &lower.a, &lower.b),
        (5, &expected.a, &expected.b)
    );
    assert_eq!(manifest.perturbations[1].seed, 6);
    assert!(manifest
        .outputs
        .contains(&"snapshot_t0.050000.csv".to_string()));

    // The written state is the solver's, to the last bit.
    let out = run_from(
        project_initial(
            |x, y| cfg.ic.state(x, y),
            GridSpec::unit_square(16, cfg.bc).unwrap(),
            cfg.gas(),
        ),
        &cfg.solver,
    )
    .unwrap();
    let file = read_field(&dir.path().join("final.csv")).unwrap();
    assert_eq!(
        file.to_field(cfg.bc).unwrap().interior_values(),
        out.field.interior_values()
    );
    assert_eq!(file.meta.t, 0.1);
}

#[test]
fn field_files_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let gas = GasParams::AIR;
    let spec = GridSpec::new(5, 3, 1.0, 0.6, BoundaryCondition::Outflow).unwrap();
    let field = project_initial(godunov_core::benchmarks::spiral_ic, spec, gas);
    let prov = Provenance {
        config_hash: "abc".into(),
        benchmark: "spiral".into(),
    };
    let path = dir.path().join("f.csv");
    write_field(&path, &prov, &field, 0.25, gas).unwrap();
    let back = read_field(&path).unwrap();
    assert_eq!(back.provenance, Some(prov));
    assert_eq!(
        (back.meta.nx, back.meta.ny, back.meta.t, back.meta.gamma),
        (5, 3, 0.25, 1.4)
    );
    assert_eq!(back.to_field(BoundaryCondition::Outflow).unwrap(), field);
    let s = back.column(Variable::S);
    let expected: Vec<f64> = field
        .interior()
        .map(|(_, u)| Variable::S.extract(&u, gas))
        .collect();
    assert_eq!(s, expected);
    let row = back.rows[7];
    assert_eq!((row.i, row.j), (2, 1));
    assert!((row.x_c - 0.5).abs() < 1e-15 && (row.y_c - 0.3).abs() < 1e-15);

    fs::write(&path, "# nx,ny,dx,dy,t,gamma\n# 2,2,0.5,0.5,0,1.4\ni,j,x_c,y_c,rho,mx,my,E,p,S\n0,0,0,0,1,0,0,1,1,1\n").unwrap();
    assert!(matches!(
        read_field(&path),
        Err(CliError::FieldFormat { .. })
    ));
}

#[test]
fn riemann_reports_star_region_and_samples() {
    let mut buf = Vec::new();
    cmd_riemann(
        [1.0, 0.0, 1.0],
        [0.125, 0.0, 0.1],
        1.4,
        &[-10.0, 0.0, 10.0],
        &mut buf,
    )
    .unwrap();
    let text = String::from_utf8(buf).unwrap();
    let value = |key: &str| -> f64 {
        let line = text
            .lines()
            .find(|l| l.starts_with(&format!("{key} = ")))
            .unwrap();
        line.split(" = ").nth(1).unwrap().parse().unwrap()
    };
    assert!((value("p_star") - 0.303130).abs() < 1e-5);
    assert!((value("u_star") - 0.927453).abs() < 1e-5);
    assert!(text.contains("pattern = RS"));
    assert!(text.contains("right_wave = shock speed="));
    let rows: Vec<&str> = text
        .lines()
        .skip_while(|l| *l != "xi,rho,u,p")
        .skip(1)
        .collect();
    assert_eq!(rows[0], "-10.0,1.0,0.0,1.0");
    assert_eq!(rows[2], "10.0,0.125,0.0,0.1");

    let mut buf = Vec::new();
    cmd_riemann([0.7, 0.2, 2.0], [0.7, 0.2, 2.0], 1.4, &[], &mut buf).unwrap();
    let text = String::from_utf8(buf).unwrap();
    assert!(text.contains("p_star = 2.0\n") && text.contains("pattern = RR"));
}

#[test]
fn riemann_binary_exit_codes() {
    let ok = godunov(
        &[
            "riemann",
            "--left",
            "1,0,1",
            "--right",
            "0.125,0,0.1",
            "--xi",
            "-1,0,1",
        ],
        &[],
    );
    assert!(
        ok.status.success(),
        "{}",
        String::from_utf8_lossy(&ok.stderr)
    );
    assert!(String::from_utf8_lossy(&ok.stdout).contains("p_star = 0.3031"));
    let vacuum = godunov(&["riemann", "--left", "1,-10,1", "--right", "1,10,1"], &[]);
    assert_eq!(vacuum.status.code(), Some(4));
    assert!(String::from_utf8_lossy(&vacuum.stderr).contains("vacuum"));
    let bad = godunov(&["riemann", "--left", "-1,0,1", "--right", "1,0,1"], &[]);
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn run_binary_respects_output_override_and_reports_config_errors() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_config(
        dir.path(),
        "[problem]\nbenchmark = \"spiral\"\n[grid]\nn = 8\n[solver]\nt_end = 0.05\n[output]\ndir = \"ignored\"\n",
    );
    let target = dir.path().join("elsewhere");
    let out = godunov(
        &["run", path.to_str().unwrap()],
        &[(OUTPUT_DIR_ENV, &target)],
    );
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    assert!(target.join("final.csv").exists());
    assert!(!dir.path().join("ignored").exists());

    let bad = write_config(
        dir.path(),
        "[problem]\nbenchmark = \"spiral\"\n[grid]\nn = 8\nnx = 3\n",
    );
    let out = godunov(&["run", bad.to_str().unwrap()], &[]);
    assert_eq!(out.status.code(), Some(2));
    let msg = String::from_utf8_lossy(&out.stderr);
    assert!(msg.contains("nx") && msg.contains("line 5"), "{msg}");
}

#[test]
fn failed_run_keeps_partial_outputs() {
    let dir = tempfile::tempdir().unwrap();
    // The two halves fly apart faster than the gas can follow.
    let cfg = config(
        dir.path(),
        "[problem]\nbenchmark = \"quadrant\"\n[problem.quadrants]\nne = [1.0, 20.0, 0.0, 0.1]\nse = [1.0, 20.0, 0.0, 0.1]\nnw = [1.0, -20.0, 0.0, 0.1]\nsw = [1.0, -20.0, 0.0, 0.1]\n[grid]\nn = 8\n[solver]\nt_end = 0.1",
    );
    let err = cmd_run(&cfg).unwrap_err();
    assert_eq!(err.exit_code(), 4, "{err}");
    assert!(dir.path().join("last_admissible.csv").exists());
    assert!(dir.path().join("diagnostics.csv").exists());
    let manifest = Manifest::read(&dir.path().join("manifest.toml")).unwrap();
    assert!(manifest.status.starts_with("aborted"));
    assert_eq!(manifest.quadrants.unwrap().ne, [1.0, 20.0, 0.0, 0.1]);
}

#[test]
fn exit_codes_follow_the_error_kind() {
    use godunov_core::{ConservedState, Error};
    let code = |e: Error| CliError::from(e).exit_code();
    assert_eq!(
        code(Error::NonPhysical {
            cell: None,
            state: ConservedState::ZERO
        }),
        3
    );
    assert_eq!(
        code(Error::Vacuum {
            critical: 1.0,
            delta_u: 2.0
        }),
        4
    );
    assert_eq!(code(Error::InsufficientLevels { levels: 1 }), 5);
    assert_eq!(
        code(Error::NoConvergence {
            iterations: 3,
            residual: 1.0
        }),
        1
    );
}

const CONVERGENCE: &str = "[problem]\nbenchmark = \"spiral\"\n[solver]\nt_end = 0.1\n[convergence]\nlevels = [8, 16]\nreference = 32";

#[test]
fn convergence_writes_tables_and_dumps() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = config(dir.path(), CONVERGENCE);
    cmd_convergence(&cfg).unwrap();
    for v in Variable::ERRORS {
        let csv = fs::read_to_string(dir.path().join(format!("errors_{}.csv", v.name()))).unwrap();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(
            lines[1],
            "n,E1,order_e1,E2,order_e2,E3,order_e3,E4,order_e4"
        );
        assert_eq!(lines.len(), 4);
        assert!(lines[2].starts_with("8,") && lines[3].starts_with("16,"));
        let txt = fs::read_to_string(dir.path().join(format!("errors_{}.txt", v.name()))).unwrap();
        assert!(txt.contains("order"));
    }
    for k in 1..=2 {
        for kind in ["cesaro", "variance", "w1"] {
            let f = read_field(&dir.path().join(format!("{kind}_k{k}.csv"))).unwrap();
            assert_eq!((f.meta.nx, f.meta.t), (32, 0.1));
        }
    }
    // With one level the average is that level and its spread is zero.
    let var = read_field(&dir.path().join("variance_k1.csv")).unwrap();
    assert!(var.column(Variable::Rho).iter().all(|&x| x == 0.0));
    let manifest = Manifest::read(&dir.path().join("manifest.toml")).unwrap();
    assert_eq!(manifest.levels, Some(vec![8, 16]));
    assert_eq!(
        manifest.runs.iter().map(|r| r.n).collect::<Vec<_>>(),
        vec![32, 8, 16]
    );
}

#[test]
fn convergence_reruns_are_bit_identical() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = config(dir.path(), CONVERGENCE);
    let names = [
        "errors_rho.csv",
        "errors_S.csv",
        "errors_e4_total.csv",
        "w1_k2.csv",
        "manifest.toml",
    ];
    cmd_convergence(&cfg).unwrap();
    let first: Vec<Vec<u8>> = names
        .iter()
        .map(|n| fs::read(dir.path().join(n)).unwrap())
        .collect();
    cmd_convergence(&cfg).unwrap();
    for (name, before) in names.iter().zip(first) {
        assert_eq!(fs::read(dir.path().join(name)).unwrap(), before, "{name}");
    }
}

#[test]
fn convergence_needs_two_levels() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_config(
        dir.path(),
        "[problem]\nbenchmark = \"spiral\"\n[convergence]\nlevels = [16]\nreference = 32\n",
    );
    let out = godunov(
        &["convergence", path.to_str().unwrap()],
        &[(OUTPUT_DIR_ENV, dir.path())],
    );
    assert_eq!(out.status.code(), Some(5));
}

#[test]
fn shipped_configs_are_valid() {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs");
    let mut seen = 0;
    for entry in fs::read_dir(&dir).unwrap() {
        let path = entry.unwrap().path();
        if path.extension().is_some_and(|e| e == "toml") {
            RunConfig::load(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
            seen += 1;
        }
    }
    assert!(seen >= 4);
}
