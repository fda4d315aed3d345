//! Reconstruction of `(q, p)` on `[a, π]` from two spectra and the potentials
//! on the a-priori-known window `(3a/2, π/2+a/4)`.
//!
//! The pipeline runs, in order: product re-synthesis of `Δ_j` at the
//! integers, Fourier synthesis of `u`, the `w` recombination, and the edge,
//! `γ`, `δ` and `η` regions. The pieces are then stitched onto one grid.

pub mod fourier;
pub mod product;
pub mod regions;
pub mod tail;

use num_complex::Complex64;

pub use fourier::{jump_locations, synthesize_u, FourierSeries, Jump};
pub use product::{delta_from_spectrum, integer_table};
pub use regions::{
    assemble, compute_w, compute_w_from_series, compute_w_on, reconstruct_delta, reconstruct_edge,
    reconstruct_eta, reconstruct_gamma, AuxW, CorrectionKind, CorrectionPair, PotentialSegment,
    SegmentTag,
};
pub use tail::{integer_table_with_tail, predict_tail};

use crate::domain::{DelayParameter, Interval, PotentialPair, RegionLayout, SpectralData};
use crate::error::{Error, Result};
use crate::forward::{aux_grids, AuxU, CharacteristicTable, DEFAULT_CELLS};
use crate::grid::SampledFunction;

/// Grid sizes of the reconstruction.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct InverseConfig {
    /// Cells of the `u` grid on `[a−π, π−a]`.
    pub m_aux: usize,
    /// Cells of the `w` grid and of the output grid on `[a, π]`.
    pub m_out: usize,
    /// Fit and remove the jumps of `u` before summing its Fourier series.
    pub jump_correction: bool,
    /// Complete the truncated products with predicted eigenvalues past `N`.
    pub tail_correction: bool,
}

impl Default for InverseConfig {
    fn default() -> Self {
        Self {
            m_aux: DEFAULT_CELLS,
            m_out: DEFAULT_CELLS,
            jump_correction: true,
            tail_correction: true,
        }
    }
}

/// Values of the two segments meeting at an interior breakpoint.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Seam {
    pub x: f64,
    pub left: SegmentTag,
    pub right: SegmentTag,
    /// `max(|Δq|, |Δp|)` across the breakpoint.
    pub jump: f64,
}

/// Output of [`run_algorithm1`].
#[derive(Debug, Clone)]
pub struct ReconstructionReport {
    pub result: PotentialPair,
    pub layout: RegionLayout,
    /// Known window, edge, `γ`, `δ` and `η` pieces, in precedence order.
    pub segments: Vec<PotentialSegment>,
    pub corrections: Vec<CorrectionPair>,
    pub f: PotentialSegment,
    pub g: PotentialSegment,
    /// Stage that supplied each node of `result`.
    pub assignment: Vec<SegmentTag>,
    pub n_max: usize,
    pub config: InverseConfig,
    pub seams: Vec<Seam>,
    pub series: FourierSeries,
    pub u: AuxU,
    pub w: AuxW,
}

impl ReconstructionReport {
    pub fn max_seam_jump(&self) -> f64 {
        self.seams.iter().map(|s| s.jump).fold(0.0, f64::max)
    }

    /// Number of output nodes supplied by each stage.
    pub fn node_counts(&self) -> Vec<(SegmentTag, usize)> {
        let mut out: Vec<(SegmentTag, usize)> = Vec::new();
        for &tag in &self.assignment {
            match out.iter_mut().find(|(t, _)| *t == tag) {
                Some((_, c)) => *c += 1,
                None => out.push((tag, 1)),
            }
        }
        out.sort();
        out
    }

    /// Per-stage errors against a reference potential on the output grid.
    pub fn region_errors(&self, truth: &PotentialPair) -> Result<Vec<RegionError>> {
        let grid = self.result.grid();
        let reference = if truth.grid() == grid {
            truth.clone()
        } else {
            PotentialPair::new(
                truth.a(),
                truth.q().resample(*grid)?,
                truth.p().resample(*grid)?,
            )?
        };
        let h = grid.step();
        let mut out: Vec<RegionError> = Vec::new();
        for (k, &tag) in self.assignment.iter().enumerate() {
            let dq = self.result.q().values()[k] - reference.q().values()[k];
            let dp = self.result.p().values()[k] - reference.p().values()[k];
            let e2 = dq.norm_sqr() + dp.norm_sqr();
            let r2 = reference.q().values()[k].norm_sqr() + reference.p().values()[k].norm_sqr();
            let entry = match out.iter_mut().position(|r| r.tag == tag) {
                Some(i) => &mut out[i],
                None => {
                    out.push(RegionError {
                        tag,
                        nodes: 0,
                        l2: 0.0,
                        reference_l2: 0.0,
                        max: 0.0,
                    });
                    out.last_mut().expect("just pushed")
                }
            };
            entry.nodes += 1;
            entry.l2 += e2 * h;
            entry.reference_l2 += r2 * h;
            entry.max = entry.max.max(dq.norm().max(dp.norm()));
        }
        for r in &mut out {
            r.l2 = r.l2.sqrt();
            r.reference_l2 = r.reference_l2.sqrt();
        }
        out.sort_by_key(|r| r.tag);
        Ok(out)
    }
}

/// Error of one stage's nodes against a reference.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RegionError {
    pub tag: SegmentTag,
    pub nodes: usize,
    pub l2: f64,
    pub reference_l2: f64,
    pub max: f64,
}

/// The potentials of `pot` on the known window, as the a-priori data.
pub fn known_window(pot: &PotentialPair) -> PotentialSegment {
    let layout = RegionLayout::new(pot.a());
    let iv = layout.known();
    PotentialSegment {
        tag: SegmentTag::Known,
        interval: iv,
        q: pot.q().restrict(iv.lo, iv.hi),
        p: pot.p().restrict(iv.lo, iv.hi),
    }
}

/// Zero potentials on the known window.
pub fn zero_window(a: DelayParameter, cells: usize) -> Result<PotentialSegment> {
    let iv = RegionLayout::new(a).known();
    let grid = crate::grid::UniformGrid::new(iv.lo, iv.hi, cells)?;
    PotentialSegment::new(
        SegmentTag::Known,
        iv,
        SampledFunction::zeros(grid),
        SampledFunction::zeros(grid),
    )
}

/// Runs the full reconstruction.
///
/// Stage failures come back wrapped in [`Error::Stage`] naming the stage.
pub fn run_algorithm1(
    data: &SpectralData,
    known: &PotentialSegment,
    a: DelayParameter,
    cfg: InverseConfig,
) -> Result<ReconstructionReport> {
    let xis: Vec<f64> = jump_locations(a).iter().map(|l| l.0).collect();
    let table = |j: u8| {
        if cfg.tail_correction {
            integer_table_with_tail(data.spectrum(j), &xis)
        } else {
            integer_table(data.spectrum(j))
        }
        .map_err(|e| e.in_stage("product"))
    };
    let (t1, t2) = (table(1)?, table(2)?);
    reconstruct_from_tables(&t1, &t2, known, a, cfg)
}

/// The reconstruction after the product stage, from tables of `Δ₁(n)` and
/// `Δ₂(n)` at the integers `|n| <= N`.
pub fn reconstruct_from_tables(
    t1: &CharacteristicTable,
    t2: &CharacteristicTable,
    known: &PotentialSegment,
    a: DelayParameter,
    cfg: InverseConfig,
) -> Result<ReconstructionReport> {
    let layout = RegionLayout::new(a);
    let window = layout.known();
    if let Some(gap) = known.uncovered(window).first() {
        return Err(Error::Input(format!(
            "known window data does not cover the subinterval {gap} of {window}"
        ))
        .in_stage("known-window"));
    }
    let known = PotentialSegment {
        tag: SegmentTag::Known,
        interval: window,
        q: known.q.clone(),
        p: known.p.clone(),
    };

    let series = if cfg.jump_correction {
        FourierSeries::with_jumps(t1, t2, &jump_locations(a))
    } else {
        FourierSeries::plain(t1, t2)
    }
    .map_err(|e| e.in_stage("fourier"))?;
    let grids = aux_grids(a, cfg.m_aux).map_err(|e| e.in_stage("fourier"))?;
    let u = series
        .sample(&grids, a)
        .map_err(|e| e.in_stage("fourier"))?;
    let w = compute_w_from_series(&series, a, cfg.m_out).map_err(|e| e.in_stage("w"))?;

    let edge = reconstruct_edge(&w, &layout);
    let (gamma_corr, gamma) = reconstruct_gamma(&w, &layout).map_err(|e| e.in_stage("gamma"))?;

    let h = w.grid().step();
    let f_pieces: Vec<&PotentialSegment> = edge.iter().chain(gamma.iter()).collect();
    let f = assemble(SegmentTag::F, layout.f_support(), h, &f_pieces)
        .map_err(|e| e.in_stage("assemble-f"))?;
    let (delta_corr, delta) =
        reconstruct_delta(&w, &f, &layout).map_err(|e| e.in_stage("delta"))?;

    let g = assemble(SegmentTag::G, layout.g_support(), h, &[&edge[0], &known])
        .map_err(|e| e.in_stage("assemble-g"))?;
    let (eta_corr, eta) = reconstruct_eta(&w, &f, &g, &layout).map_err(|e| e.in_stage("eta"))?;

    let mut segments = vec![known];
    segments.extend(edge);
    segments.extend(gamma);
    segments.push(delta);
    segments.push(eta);
    let mut corrections = gamma_corr;
    corrections.push(delta_corr);
    corrections.push(eta_corr);

    let out_grid = *w.grid();
    let mut q = Vec::with_capacity(out_grid.len());
    let mut p = Vec::with_capacity(out_grid.len());
    let mut assignment = Vec::with_capacity(out_grid.len());
    for x in out_grid.nodes() {
        let seg = segments
            .iter()
            .find(|s| s.interval.contains(x))
            .ok_or_else(|| Error::Input(format!("no stage covers x = {x}")).in_stage("stitch"))?;
        let (qv, pv) = seg.at(x);
        q.push(qv);
        p.push(pv);
        assignment.push(seg.tag);
    }
    let result = PotentialPair::new(
        a,
        SampledFunction::new(out_grid, q)?,
        SampledFunction::new(out_grid, p)?,
    )
    .map_err(|e| e.in_stage("stitch"))?;
    let seams = seams(&segments);

    Ok(ReconstructionReport {
        result,
        layout,
        segments,
        corrections,
        f,
        g,
        assignment,
        n_max: series.n_max,
        config: cfg,
        seams,
        series,
        u,
        w,
    })
}

fn seams(segments: &[PotentialSegment]) -> Vec<Seam> {
    let mut pieces: Vec<&PotentialSegment> = segments
        .iter()
        .filter(|s| !s.interval.is_degenerate())
        .collect();
    pieces.sort_by(|l, r| l.interval.lo.total_cmp(&r.interval.lo));
    pieces
        .windows(2)
        .map(|pair| {
            let x = pair[1].interval.lo;
            let (ql, pl) = pair[0].at(x);
            let (qr, pr) = pair[1].at(x);
            Seam {
                x,
                left: pair[0].tag,
                right: pair[1].tag,
                jump: (ql - qr).norm().max((pl - pr).norm()),
            }
        })
        .collect()
}

/// `q, p` of a reconstruction at `x` (linear interpolation).
pub fn evaluate(report: &ReconstructionReport, x: f64) -> (Complex64, Complex64) {
    (report.result.q().at(x), report.result.p().at(x))
}

/// Interval of `[a, π]` a tag is responsible for, for display.
pub fn tag_intervals(layout: &RegionLayout, tag: SegmentTag) -> Vec<Interval> {
    match tag {
        SegmentTag::Known => vec![layout.known()],
        SegmentTag::Edge => layout.edge().to_vec(),
        SegmentTag::Gamma => layout.gamma().to_vec(),
        SegmentTag::Delta => vec![layout.delta()],
        SegmentTag::Eta => vec![layout.eta()],
        SegmentTag::F => vec![layout.f_support()],
        SegmentTag::G => vec![layout.g_support()],
    }
}
