//! Subcommands through the library entry points and through the binary.

use std::fs;
use std::path::Path;
use std::process::Command;

use dirac_delay::cli::io::{read_potential, read_spectra, write_spectra};
use dirac_delay::cli::{
    cmd_forward, cmd_invert, cmd_oracle_check, cmd_roundtrip, cmd_spectra, CliError,
    ExperimentConfig,
};
use dirac_delay::forward::{compute_v, delta_closed};
use dirac_delay::inverse::zero_window;
use dirac_delay::{Complex64, DelayParameter, SpectralData, Spectrum, TestPotential};

fn cfg(out: &Path) -> ExperimentConfig {
    ExperimentConfig {
        m_pot: 400,
        m_aux: 400,
        out: out.to_path_buf(),
        ..ExperimentConfig::default()
    }
}

fn bin(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_dirac-delay"))
        .args(args)
        .output()
        .expect("binary runs");
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8_lossy(&out.stdout).into_owned(),
        String::from_utf8_lossy(&out.stderr).into_owned(),
    )
}

fn rows(path: &Path) -> Vec<Vec<f64>> {
    fs::read_to_string(path)
        .unwrap()
        .lines()
        .skip(1)
        .map(|l| l.split(',').map(|f| f.parse().unwrap()).collect())
        .collect()
}

#[test]
fn forward_of_zero_potential_is_minus_sine() {
    let dir = tempfile::tempdir().unwrap();
    let c = ExperimentConfig {
        potential: Some("P0".into()),
        lambda_min: -3.0,
        lambda_max: 3.0,
        lambda_step: 0.5,
        ..cfg(dir.path())
    };
    cmd_forward(&c).unwrap();
    let table = rows(&dir.path().join("forward.csv"));
    assert_eq!(table.len(), 13);
    for r in table {
        let l = r[0];
        assert!((r[1] + (l * std::f64::consts::PI).sin()).abs() < 1e-15);
        assert!((r[3] - (l * std::f64::consts::PI).cos()).abs() < 1e-15);
        assert_eq!(r[2], 0.0);
    }
}

#[test]
fn forward_matches_library_bit_for_bit() {
    let dir = tempfile::tempdir().unwrap();
    let c = ExperimentConfig {
        potential: Some("P1".into()),
        lambda_min: -2.0,
        lambda_max: 2.0,
        lambda_step: 0.25,
        ..cfg(dir.path())
    };
    cmd_forward(&c).unwrap();
    let v = compute_v(&TestPotential::P1.sample(c.delay(), 400).unwrap(), 400).unwrap();
    for r in rows(&dir.path().join("forward.csv")) {
        let l = Complex64::new(r[0], 0.0);
        assert_eq!(Complex64::new(r[1], r[2]), delta_closed(1, &v, l).unwrap());
        assert_eq!(Complex64::new(r[3], r[4]), delta_closed(2, &v, l).unwrap());
    }
}

#[test]
fn spectra_of_zero_potential_are_the_lattice() {
    let dir = tempfile::tempdir().unwrap();
    let c = ExperimentConfig {
        potential: Some("P0".into()),
        nmax: 3,
        ..cfg(dir.path())
    };
    cmd_spectra(&c).unwrap();
    let data = read_spectra(&dir.path().join("spectra.csv")).unwrap();
    assert_eq!(data, SpectralData::lattice(3).unwrap());
}

#[test]
fn outputs_are_byte_identical_across_runs() {
    let d1 = tempfile::tempdir().unwrap();
    let d2 = tempfile::tempdir().unwrap();
    for d in [&d1, &d2] {
        let c = ExperimentConfig {
            potential: Some("P2".into()),
            nmax: 8,
            ..cfg(d.path())
        };
        cmd_spectra(&c).unwrap();
        cmd_forward(&c).unwrap();
    }
    for name in [
        "spectra.csv",
        "kappa.csv",
        "known.csv",
        "potential.csv",
        "forward.csv",
    ] {
        assert_eq!(
            fs::read(d1.path().join(name)).unwrap(),
            fs::read(d2.path().join(name)).unwrap(),
            "{name}"
        );
    }
}

#[test]
fn lattice_spectra_and_zero_window_invert_to_zero() {
    let dir = tempfile::tempdir().unwrap();
    let a = DelayParameter::new(1.1).unwrap();
    let spectra = dir.path().join("s.csv");
    write_spectra(&spectra, &SpectralData::lattice(6).unwrap()).unwrap();
    let w = zero_window(a, 40).unwrap();
    let known = dir.path().join("k.csv");
    dirac_delay::cli::io::write_potential(&known, w.q.grid(), w.q.values(), w.p.values()).unwrap();
    let c = ExperimentConfig {
        spectra: Some(spectra),
        known: Some(known),
        ..cfg(dir.path())
    };
    cmd_invert(&c).unwrap();
    let (q, p) = read_potential(&dir.path().join("reconstruction.csv")).unwrap();
    assert!(q.max_abs() < 1e-13 && p.max_abs() < 1e-13);
}

#[test]
fn spectra_then_invert_reconstructs_within_tolerance() {
    let dir = tempfile::tempdir().unwrap();
    let c = ExperimentConfig {
        potential: Some("P1".into()),
        nmax: 30,
        m_pot: 800,
        m_aux: 800,
        ..cfg(dir.path())
    };
    cmd_spectra(&c).unwrap();
    let c = ExperimentConfig {
        spectra: Some(dir.path().join("spectra.csv")),
        known: Some(dir.path().join("known.csv")),
        potential: Some(dir.path().join("potential.csv").display().to_string()),
        tolerance: Some(1e-3),
        ..c
    };
    let report = cmd_invert(&c).unwrap();
    assert!(report.passed, "{:?}", report.checks);
    assert_eq!(report.checks.len(), 1);
    assert!(!report.regions.is_empty());
}

#[test]
fn single_spectrum_is_an_input_error() {
    let dir = tempfile::tempdir().unwrap();
    let spectra = dir.path().join("s.csv");
    fs::write(
        &spectra,
        "j,n,lambda_re,lambda_im\n1,-1,-1,0\n1,0,0,0\n1,1,1,0\n",
    )
    .unwrap();
    let c = ExperimentConfig {
        spectra: Some(spectra),
        known: Some(dir.path().join("missing.csv")),
        ..cfg(dir.path())
    };
    let err = cmd_invert(&c).unwrap_err();
    assert!(matches!(err, CliError::Numerics(_)));
    assert_eq!(err.exit_code(), 2);
}

#[test]
fn window_gap_is_named() {
    let dir = tempfile::tempdir().unwrap();
    let a = DelayParameter::new(1.1).unwrap();
    let spectra = dir.path().join("s.csv");
    write_spectra(
        &spectra,
        &SpectralData::new(
            Spectrum::lattice(1, 4).unwrap(),
            Spectrum::lattice(2, 4).unwrap(),
        )
        .unwrap(),
    )
    .unwrap();
    let w = zero_window(a, 40).unwrap();
    let short = w.q.restrict(w.interval.lo, w.interval.lo + 0.05);
    let known = dir.path().join("k.csv");
    dirac_delay::cli::io::write_potential(&known, short.grid(), short.values(), short.values())
        .unwrap();
    let c = ExperimentConfig {
        spectra: Some(spectra),
        known: Some(known),
        ..cfg(dir.path())
    };
    let err = cmd_invert(&c).unwrap_err();
    assert!(
        err.to_string().contains("does not cover the subinterval"),
        "{err}"
    );
    assert_eq!(err.exit_code(), 2);
}

#[test]
fn roundtrip_of_zero_potential_is_exact() {
    let dir = tempfile::tempdir().unwrap();
    let c = ExperimentConfig {
        potential: Some("P0".into()),
        ladder: vec![4, 8],
        ..cfg(dir.path())
    };
    let report = cmd_roundtrip(&c).unwrap();
    assert!(report.passed);
    assert!(report.convergence.iter().all(|r| r.relative_l2 < 1e-12));
    let mut names: Vec<&str> = report.checks.iter().map(|c| c.name.as_str()).collect();
    let total = names.len();
    names.sort();
    names.dedup();
    assert_eq!(names.len(), total);
}

#[test]
fn oracle_check_passes_for_zero_potential() {
    let dir = tempfile::tempdir().unwrap();
    let c = ExperimentConfig {
        potential: Some("P0".into()),
        oracle_samples: 5,
        tolerance: Some(1e-12),
        ..cfg(dir.path())
    };
    assert!(cmd_oracle_check(&c).unwrap().passed);
}

#[test]
fn binary_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    let (code, _, err) = bin(&["forward", "--potential", "/no/such/file.csv", "--out", out]);
    assert_eq!(code, 2, "{err}");
    assert!(err.contains("/no/such/file.csv"));
    let (code, _, _) = bin(&["spectra", "--potential", "P1", "--nmax", "0", "--out", out]);
    assert_eq!(code, 2);
    let (code, _, _) = bin(&["roundtrip", "--potential", "P1", "--a", "1.0", "--out", out]);
    assert_eq!(code, 2);
    let (code, _, _) = bin(&["frobnicate"]);
    assert_eq!(code, 2);
    let (code, stdout, _) = bin(&[
        "oracle-check",
        "--potential",
        "P1",
        "--m-pot",
        "300",
        "--m-aux",
        "300",
        "--tolerance",
        "1e-15",
        "--out",
        out,
    ]);
    assert_eq!(code, 1);
    assert!(
        stdout.contains("worst deviation") && stdout.contains("FAIL"),
        "{stdout}"
    );
    let (code, _, _) = bin(&[
        "forward",
        "--potential",
        "P0",
        "--lambda-min",
        "-1",
        "--lambda-max",
        "1",
        "--out",
        out,
    ]);
    assert_eq!(code, 0);
    assert!(dir.path().join("forward-report.json").exists());
}

#[test]
fn config_file_with_flag_override() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("c.json");
    fs::write(
        &config,
        format!(
            r#"{{"potential": "P0", "lambda_min": 0.0, "lambda_max": 1.0, "lambda_step": 0.5, "m_aux": 200, "out": "{}"}}"#,
            dir.path().display()
        ),
    )
    .unwrap();
    let (code, _, err) = bin(&[
        "forward",
        "--config",
        config.to_str().unwrap(),
        "--lambda-max",
        "2",
    ]);
    assert_eq!(code, 0, "{err}");
    assert_eq!(rows(&dir.path().join("forward.csv")).len(), 5);
}
