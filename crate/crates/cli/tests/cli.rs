use nmkdv_core::asymptotics::ASYM_CSV_HEADER;
use nmkdv_core::exec::Execution;
use nmkdv_core::scattering::{scatter_grid, spectral_csv_row, KGrid, ScatterOptions, StepProfile, SPECTRAL_CSV_HEADER};
use nmkdv_core::validation::FieldGrid;
use std::path::PathBuf;
use std::process::Command;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_nmkdv"))
}

fn tmp(name: &str) -> PathBuf {
    let dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("cli-tests");
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

fn run_to(args: &[&str], out: &PathBuf) -> (i32, String) {
    let o = bin().args(args).arg("--output").arg(out).output().unwrap();
    let text = std::fs::read_to_string(out).unwrap_or_default();
    (o.status.code().unwrap(), text)
}

fn value(text: &str, key: &str) -> f64 {
    text.lines().find_map(|l| l.strip_prefix(&format!("{key}="))).unwrap_or_else(|| panic!("{key} missing")).parse().unwrap()
}

fn body(text: &str) -> Vec<&str> {
    text.lines().filter(|l| !l.starts_with('#')).collect()
}

#[test]
fn kappa_pure_step() {
    let (code, text) = run_to(&["kappa", "--profile", "pure-step", "--A", "1"], &tmp("kappa.txt"));
    assert_eq!(code, 0);
    assert!(text.starts_with("# nmkdv "));
    let (r, f) = (value(&text, "kappa_root"), value(&text, "kappa_formula"));
    assert!((r - 0.5).abs() <= 1e-8 && (f - 0.5).abs() <= 1e-8, "{r} {f}");
    assert!(value(&text, "reldiff") <= 1e-8);
}

#[test]
fn soliton_grid_and_residual() {
    let out = tmp("soliton.csv");
    let (code, text) = run_to(&["soliton", "--A", "2", "--gamma0", "-1", "--x", "-10:10:0.01", "--t", "-1:1:0.01"], &out);
    assert_eq!(code, 0);
    let g = FieldGrid::from_csv(&text).unwrap();
    assert_eq!((g.nx(), g.nt()), (2001, 201));
    let (ix, it) = (g.x_values.iter().position(|&x| x == 0.0).unwrap(), g.t_values.iter().position(|&t| t == 0.0).unwrap());
    // A / (1 - gamma0 e^0) with A = 2, gamma0 = -1
    assert_eq!(g.u[it][ix], 1.0);
    // decimals read back reproduce the file body exactly
    assert_eq!(g.to_csv().lines().collect::<Vec<_>>(), body(&text));

    let (code, stats) = run_to(&["residual", "--input", out.to_str().unwrap()], &tmp("residual.csv"));
    assert_eq!(code, 0);
    let rows = body(&stats);
    assert_eq!(rows[0], "max_abs,rms,argmax_x,argmax_t,count");
    let cells: Vec<&str> = rows[1].split(',').collect();
    assert!(cells[0].parse::<f64>().unwrap() < 1e-5);
    assert_eq!(cells[4], (1995 * 197).to_string());
}

#[test]
fn scatter_rows_match_direct_scattering() {
    let (code, text) = run_to(&["scatter", "--profile", "bump-step", "--set", "n_k=16", "--set", "k_max=10"], &tmp("scatter.csv"));
    assert_eq!(code, 0);
    let rows = body(&text);
    assert_eq!(rows[0], SPECTRAL_CSV_HEADER);
    let grid = KGrid { n: 16, k_max: 10.0, ..KGrid::default() };
    let direct = scatter_grid(&StepProfile::bump_step(2.0, -0.8, -1.0, 0.4), &grid.points(), &ScatterOptions::default(), Execution::Sequential).unwrap();
    assert_eq!(rows.len(), direct.len() + 1);
    for (row, s) in rows[1..].iter().zip(&direct) {
        assert_eq!(*row, spectral_csv_row(s).unwrap());
    }
}

#[test]
fn asym_rays_csv_and_jsonl() {
    let args = ["asym", "--profile", "pure-step", "--A", "2", "--xi=-1,-4", "--t", "-2:2:1"];
    let (code, text) = run_to(&args, &tmp("asym.csv"));
    assert_eq!(code, 0);
    let rows = body(&text);
    assert_eq!(rows[0], ASYM_CSV_HEADER);
    // t = 0 is skipped: 2 rays x 4 times
    assert_eq!(rows.len(), 9);
    for r in &rows[1..] {
        let c: Vec<&str> = r.split(',').collect();
        let t: f64 = c[1].parse().unwrap();
        assert_eq!(c[3], if t > 0.0 { "R_II" } else { "R_IV" });
        if t < 0.0 {
            // pure step: delta(0) = 1, so the leading R_IV term is A
            assert!((c[4].parse::<f64>().unwrap() - 2.0).abs() < 1e-9);
        }
    }
    let mut j = args.to_vec();
    j.extend(["--format", "jsonl"]);
    let (code, text) = run_to(&j, &tmp("asym.jsonl"));
    assert_eq!(code, 0);
    let recs: Vec<serde_json::Value> = body(&text).iter().map(|l| serde_json::from_str(l).unwrap()).collect();
    assert_eq!(recs.len(), 8);
    assert_eq!(recs[0].as_object().unwrap().len(), ASYM_CSV_HEADER.split(',').count());
}

#[test]
fn identical_config_gives_identical_bytes() {
    let args = ["asym", "--profile", "pure-step", "--x", "-30:30:6", "--t", "-1:1:0.5", "--set", "alpha=0.9"];
    let a = run_to(&args, &tmp("det-a.csv"));
    let b = run_to(&args, &tmp("det-b.csv"));
    assert_eq!((a.0, b.0), (0, 0));
    assert_eq!(std::fs::read(tmp("det-a.csv")).unwrap(), std::fs::read(tmp("det-b.csv")).unwrap());
    assert!(a.1.lines().next().unwrap().contains(" alpha=0.9 "));
}

#[test]
fn config_file_and_overrides() {
    let cfg = tmp("run.cfg");
    std::fs::write(&cfg, "# sweep settings\nprofile = pure-step\nA = 2 # amplitude\nkappa_delta = 0.4\n").unwrap();
    let (code, text) = run_to(&["soliton", "--config", cfg.to_str().unwrap(), "--set", "x=-1:1:0.5", "--t=-1:1:0.5"], &tmp("cfg.csv"));
    assert_eq!(code, 0);
    let meta = text.lines().next().unwrap();
    assert!(meta.contains(" A=2 ") && meta.contains(" kappa_delta=0.4 ") && meta.contains(" x=-1:1:0.5 "), "{meta}");
}

#[test]
fn config_errors_exit_2() {
    let cases: &[&[&str]] = &[
        &["kappa", "--set", "bogus=1"],
        &["kappa", "--set", "k_min=abc"],
        &["soliton", "--x", "1:0:0.1"],
        &["soliton", "--gamma0", "0.5"],
        &["kappa", "--profile", "no-such-profile"],
        &["kappa", "--config", "/nonexistent/file.cfg"],
        &["residual", "--input", "/nonexistent/grid.csv"],
        &["frobnicate"],
    ];
    for args in cases {
        let code = bin().args(*args).output().unwrap().status.code();
        assert_eq!(code, Some(2), "{args:?}");
    }
    let o = bin().arg("kappa").env("NMKDV_THREADS", "zero").output().unwrap();
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn help_lists_keys() {
    let o = bin().arg("--help").output().unwrap();
    assert_eq!(o.status.code(), Some(0));
    let s = String::from_utf8(o.stdout).unwrap();
    for cmd in ["scatter", "kappa", "soliton", "asym", "residual", "validate"] {
        assert!(s.contains(cmd), "{cmd}");
    }
    assert!(s.contains("kappa_delta") && s.contains("delta_abs_tol"));
}

#[test]
fn deviation_file_profile() {
    let dev = tmp("bump.dev");
    let mut s = String::from("x,du\n");
    for j in 0..=40 {
        let x = -2.6 + 0.08 * j as f64;
        s.push_str(&format!("{x},{}\n", -0.8 * (-(x + 1.0) * (x + 1.0) / 0.16).exp()));
    }
    std::fs::write(&dev, s).unwrap();
    let (code, text) = run_to(&["kappa", "--profile", dev.to_str().unwrap(), "--A", "2"], &tmp("dev-kappa.txt"));
    assert_eq!(code, 0, "{text}");
    // the sampled bump is close to the bump-step preset (kappa = 0.9218)
    assert!((value(&text, "kappa_root") - 0.9218).abs() < 5e-3);
    assert!(value(&text, "reldiff") <= 1e-5);
}

#[test]
fn thread_cap_does_not_change_output() {
    let args = ["soliton", "--x", "-2:2:0.5", "--t", "-1:1:0.5"];
    let a = bin().args(args).env("NMKDV_THREADS", "1").output().unwrap();
    let b = bin().args(args).env("NMKDV_THREADS", "3").output().unwrap();
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
}
