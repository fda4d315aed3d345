//! The five experiment drivers. Each writes its files under `config.out`
//! and returns a [`RunReport`].

use std::path::{Path, PathBuf};

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::config::{ExperimentConfig, PotentialSource};
use super::io::{
    fmt_f64, read_potential, read_spectra, write_potential, write_spectra, write_table,
};
use super::report::{ConvergenceRow, RegionRow, RunReport};
use super::CliError;
use crate::domain::{Interval, PotentialPair, SpectralData};
use crate::eigensolver::{compute_spectra_with, SpectraResult};
use crate::forward::oracle::delta_oracle;
use crate::forward::{compute_v, delta_closed, CharacteristicFunction};
use crate::grid::UniformGrid;
use crate::inverse::{
    known_window, run_algorithm1, InverseConfig, PotentialSegment, ReconstructionReport, SegmentTag,
};

/// Default bound on the relative L2 reconstruction error.
pub const RECONSTRUCTION_TOLERANCE: f64 = 5e-2;
/// Default bound on `|Δ_closed − Δ_oracle| / (1 + |Δ_oracle|)`.
pub const ORACLE_TOLERANCE: f64 = 1e-6;
/// Largest accepted jump between adjacent reconstruction stages.
pub const SEAM_TOLERANCE: f64 = 1e-3;
/// Allowed growth of an error from one truncation order to the next.
pub const LADDER_SLACK: f64 = 1.1;
/// Errors below this count as zero when comparing consecutive orders.
pub const LADDER_FLOOR: f64 = 1e-10;
const ORACLE_RE: f64 = 20.0;
const ORACLE_IM: f64 = 1.0;

fn out_path(cfg: &ExperimentConfig, name: &str) -> PathBuf {
    cfg.out.join(name)
}

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

/// The configured potential on `[a, π]`.
pub fn load_potential(cfg: &ExperimentConfig) -> Result<PotentialPair, CliError> {
    let a = cfg.delay();
    match cfg.potential_source()? {
        PotentialSource::Builtin(p) => Ok(p.sample(a, cfg.m_pot)?),
        PotentialSource::File(path) => {
            let (q, p) = read_potential(&path)?;
            Ok(PotentialPair::new(a, q, p)?)
        }
    }
}

/// Potential data on the known window, read from a CSV file.
pub fn load_known(path: &Path) -> Result<PotentialSegment, CliError> {
    let (q, p) = read_potential(path)?;
    let g = *q.grid();
    Ok(PotentialSegment::new(
        SegmentTag::Known,
        Interval::new(g.lo(), g.hi()),
        q,
        p,
    )?)
}

/// `pot` interpolated onto `grid`.
fn on_grid(pot: &PotentialPair, grid: UniformGrid) -> Result<PotentialPair, CliError> {
    if *pot.grid() == grid {
        return Ok(pot.clone());
    }
    Ok(PotentialPair::new(
        pot.a(),
        pot.q().resample(grid)?,
        pot.p().resample(grid)?,
    )?)
}

fn inverse_config(cfg: &ExperimentConfig) -> InverseConfig {
    InverseConfig {
        m_aux: cfg.m_aux,
        m_out: cfg.m_aux,
        ..InverseConfig::default()
    }
}

fn write_reconstruction(path: &Path, rep: &ReconstructionReport) -> Result<(), CliError> {
    let r = &rep.result;
    write_potential(path, r.grid(), r.q().values(), r.p().values())
}

/// Region rows and the whole-interval relative error against `truth`.
fn score(
    n_max: usize,
    rep: &ReconstructionReport,
    truth: &PotentialPair,
) -> Result<(Vec<RegionRow>, ConvergenceRow), CliError> {
    let reference = on_grid(truth, *rep.result.grid())?;
    let rows = rep
        .region_errors(&reference)?
        .into_iter()
        .map(|e| RegionRow {
            n_max,
            region: e.tag.name().to_string(),
            nodes: e.nodes,
            l2: e.l2,
            relative_l2: if e.reference_l2 > 0.0 {
                e.l2 / e.reference_l2
            } else {
                e.l2
            },
            max: e.max,
        })
        .collect();
    let conv = ConvergenceRow {
        n_max,
        relative_l2: reference.relative_l2_error(&rep.result)?,
        max_seam: rep.max_seam_jump(),
    };
    Ok((rows, conv))
}

/// `Δ₁, Δ₂` on the real λ-grid, written to `forward.csv`.
pub fn cmd_forward(cfg: &ExperimentConfig) -> Result<RunReport, CliError> {
    let mut report = RunReport::new("forward", cfg);
    let pot = report.timed("load", || load_potential(cfg))?;
    let v = report.timed("aux-v", || compute_v(&pot, cfg.m_aux))?;
    let grid = cfg.lambda_grid();
    let rows = report.timed("evaluate", || {
        grid.iter()
            .map(|&l| {
                let d1 = delta_closed(1, &v, c(l))?;
                let d2 = delta_closed(2, &v, c(l))?;
                Ok(vec![
                    fmt_f64(l),
                    fmt_f64(d1.re),
                    fmt_f64(d1.im),
                    fmt_f64(d2.re),
                    fmt_f64(d2.im),
                ])
            })
            .collect::<crate::Result<Vec<_>>>()
    })?;
    let path = out_path(cfg, "forward.csv");
    write_table(
        &path,
        &["lambda", "delta1_re", "delta1_im", "delta2_re", "delta2_im"],
        rows,
    )?;
    report.files.push(path);
    Ok(report)
}

fn kappa_notes(res: &SpectraResult) -> Vec<String> {
    let mut notes: Vec<String> = res
        .diagnostics
        .iter()
        .map(|d| {
            format!(
                "j={}: |κ| < 1/2 from |n| = {}; max |κ| inner {:.3e}, outer {:.3e}; Σ|κ|² = {:.3e}{}",
                d.j,
                d.localized_from,
                d.inner_max,
                d.outer_max,
                d.l2_sq,
                if d.decay_violated { "; outer residuals exceed inner ones" } else { "" }
            )
        })
        .collect();
    for &(j, n, count) in &res.irregular_boxes {
        notes.push(match count {
            Some(k) => format!(
                "unit box j={j}, n={n} holds {k} zeros; resolved jointly with its neighbours"
            ),
            None => format!(
                "unit box j={j}, n={n} could not be counted; resolved jointly with its neighbours"
            ),
        });
    }
    notes
}

/// Both spectra to `spectra.csv` and the residuals `κ` to `kappa.csv`. The
/// sampled potential and its known window go to `potential.csv` and
/// `known.csv`, ready for `invert`.
pub fn cmd_spectra(cfg: &ExperimentConfig) -> Result<RunReport, CliError> {
    let mut report = RunReport::new("spectra", cfg);
    let pot = report.timed("load", || load_potential(cfg))?;
    let cf = report.timed("aux-v", || {
        CharacteristicFunction::from_potential(&pot, cfg.m_aux)
    })?;
    let res = report.timed("eigensolver", || compute_spectra_with(&cf, cfg.nmax))?;
    let path = out_path(cfg, "spectra.csv");
    write_spectra(&path, &res.data)?;
    report.files.push(path);
    let kappa = out_path(cfg, "kappa.csv");
    let rows = [1u8, 2].into_iter().flat_map(|j| {
        res.data
            .spectrum(j)
            .kappas()
            .map(move |(n, k)| {
                vec![
                    j.to_string(),
                    n.to_string(),
                    fmt_f64(k.re),
                    fmt_f64(k.im),
                    fmt_f64(k.norm()),
                ]
            })
            .collect::<Vec<_>>()
    });
    write_table(
        &kappa,
        &["j", "n", "kappa_re", "kappa_im", "kappa_abs"],
        rows,
    )?;
    report.files.push(kappa);
    let input = out_path(cfg, "potential.csv");
    write_potential(&input, pot.grid(), pot.q().values(), pot.p().values())?;
    report.files.push(input);
    let window = known_window(&pot);
    let known = out_path(cfg, "known.csv");
    write_potential(
        &known,
        window.q.grid(),
        window.q.values(),
        window.p.values(),
    )?;
    report.files.push(known);
    report.notes = kappa_notes(&res);
    Ok(report)
}

/// Reconstruction from `--spectra` and `--known`, written to
/// `reconstruction.csv`. With `--potential` the result is scored against it.
pub fn cmd_invert(cfg: &ExperimentConfig) -> Result<RunReport, CliError> {
    let mut report = RunReport::new("invert", cfg);
    let spectra = cfg
        .spectra
        .as_deref()
        .ok_or_else(|| CliError::Config("invert needs --spectra".into()))?;
    let known = cfg
        .known
        .as_deref()
        .ok_or_else(|| CliError::Config("invert needs --known".into()))?;
    let data: SpectralData = report.timed("read", || read_spectra(spectra))?;
    let window = load_known(known)?;
    let rep = report.timed("reconstruct", || {
        run_algorithm1(&data, &window, cfg.delay(), inverse_config(cfg))
    })?;
    let path = out_path(cfg, "reconstruction.csv");
    write_reconstruction(&path, &rep)?;
    report.files.push(path);
    report.notes.extend(rep.seams.iter().map(|s| {
        format!(
            "seam {}|{} at x = {:.6}: jump {:.3e}",
            s.left.name(),
            s.right.name(),
            s.x,
            s.jump
        )
    }));
    if cfg.potential.is_some() {
        let truth = load_potential(cfg)?;
        let (rows, conv) = score(data.n_max(), &rep, &truth)?;
        report.check(
            "relative_l2",
            conv.relative_l2,
            cfg.tolerance.unwrap_or(RECONSTRUCTION_TOLERANCE),
        );
        report.regions = rows;
        report.convergence.push(conv);
    } else {
        report.notes.push(format!(
            "no reference potential; largest seam jump {:.3e}",
            rep.max_seam_jump()
        ));
    }
    Ok(report)
}

/// Largest `e_{k+1} − slack·e_k` along a ladder.
fn ladder_excess(errors: &[f64]) -> f64 {
    errors
        .windows(2)
        .map(|w| w[1] - LADDER_SLACK * w[0])
        .fold(f64::NEG_INFINITY, f64::max)
}

/// Spectra and reconstruction for every `N` of the ladder, with the
/// convergence table in `roundtrip.csv` and the last reconstruction in
/// `reconstruction.csv`.
pub fn cmd_roundtrip(cfg: &ExperimentConfig) -> Result<RunReport, CliError> {
    let mut report = RunReport::new("roundtrip", cfg);
    let pot = report.timed("load", || load_potential(cfg))?;
    let a = cfg.delay();
    let cf = report
        .timed("aux-v", || {
            CharacteristicFunction::from_potential(&pot, cfg.m_aux)
        })
        .map_err(|e| e.in_stage("forward"))?;
    let window = known_window(&pot);
    let mut last = None;
    for &n in &cfg.ladder {
        let res = report
            .timed(&format!("spectra N={n}"), || compute_spectra_with(&cf, n))
            .map_err(|e| e.in_stage("spectra"))?;
        let rep = report.timed(&format!("invert N={n}"), || {
            run_algorithm1(&res.data, &window, a, inverse_config(cfg))
        })?;
        let (rows, conv) = score(n, &rep, &pot)?;
        report.regions.extend(rows);
        report.convergence.push(conv);
        last = Some(rep);
    }
    let tol = cfg.tolerance.unwrap_or(RECONSTRUCTION_TOLERANCE);
    let totals: Vec<f64> = report.convergence.iter().map(|r| r.relative_l2).collect();
    let final_row = report.convergence.last().cloned().expect("nonempty ladder");
    if totals.len() > 1 {
        report.check("nonincreasing:total", ladder_excess(&totals), LADDER_FLOOR);
        let mut names: Vec<String> = report.regions.iter().map(|r| r.region.clone()).collect();
        names.sort();
        names.dedup();
        for name in names {
            let errs: Vec<f64> = report
                .regions
                .iter()
                .filter(|r| r.region == name)
                .map(|r| r.l2)
                .collect();
            report.check(
                &format!("nonincreasing:{name}"),
                ladder_excess(&errs),
                LADDER_FLOOR,
            );
        }
    }
    report.check("relative_l2", final_row.relative_l2, tol);
    report.check("max_seam", final_row.max_seam, SEAM_TOLERANCE);

    let table = out_path(cfg, "roundtrip.csv");
    let rows = report.regions.iter().map(|r| {
        vec![
            r.n_max.to_string(),
            r.region.clone(),
            r.nodes.to_string(),
            fmt_f64(r.l2),
            fmt_f64(r.relative_l2),
            fmt_f64(r.max),
        ]
    });
    write_table(
        &table,
        &["n_max", "region", "nodes", "l2", "relative_l2", "max"],
        rows,
    )?;
    report.files.push(table);
    if let Some(rep) = last {
        let path = out_path(cfg, "reconstruction.csv");
        write_reconstruction(&path, &rep)?;
        report.files.push(path);
    }
    Ok(report)
}

/// Random points of the strip `|Re λ| <= 20, |Im λ| <= 1`.
pub fn oracle_points(seed: u64, count: usize) -> Vec<Complex64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            Complex64::new(
                rng.gen_range(-ORACLE_RE..=ORACLE_RE),
                rng.gen_range(-ORACLE_IM..=ORACLE_IM),
            )
        })
        .collect()
}

/// Closed form against the direct solution at random λ, written to
/// `oracle.csv`.
pub fn cmd_oracle_check(cfg: &ExperimentConfig) -> Result<RunReport, CliError> {
    let mut report = RunReport::new("oracle-check", cfg);
    let pot = report.timed("load", || load_potential(cfg))?;
    let v = report.timed("aux-v", || compute_v(&pot, cfg.m_aux))?;
    let points = oracle_points(cfg.seed, cfg.oracle_samples);
    let mut rows = Vec::with_capacity(2 * points.len());
    let mut worst = (0.0f64, 1u8, Complex64::new(0.0, 0.0));
    let start = std::time::Instant::now();
    for &l in &points {
        for j in [1u8, 2] {
            let closed = delta_closed(j, &v, l)?;
            let oracle = delta_oracle(j, &pot, l)?;
            let dev = (closed - oracle).norm() / (1.0 + oracle.norm());
            if dev > worst.0 || dev.is_nan() {
                worst = (dev, j, l);
            }
            rows.push(vec![
                j.to_string(),
                fmt_f64(l.re),
                fmt_f64(l.im),
                fmt_f64(closed.re),
                fmt_f64(closed.im),
                fmt_f64(oracle.re),
                fmt_f64(oracle.im),
                fmt_f64(dev),
            ]);
        }
    }
    report.timings.push(super::report::StageTiming {
        stage: "compare".into(),
        seconds: start.elapsed().as_secs_f64(),
    });
    let path = out_path(cfg, "oracle.csv");
    write_table(
        &path,
        &[
            "j",
            "lambda_re",
            "lambda_im",
            "closed_re",
            "closed_im",
            "oracle_re",
            "oracle_im",
            "deviation",
        ],
        rows,
    )?;
    report.files.push(path);
    report.check(
        "oracle_deviation",
        worst.0,
        cfg.tolerance.unwrap_or(ORACLE_TOLERANCE),
    );
    report.notes.push(format!(
        "worst deviation {:.3e} for j={} at λ = {}{:+}i",
        worst.0, worst.1, worst.2.re, worst.2.im
    ));
    Ok(report)
}
