//! Region-by-region recovery of `(q, p)` from `w₁, w₂`.
//!
//! Every nonlinear region uses the same bilinear correction
//!
//! ```text
//! c₁(x) = ∫_{x+a/2}^{π} [A₁(t) K₂(s) − A₂(t) K₁(s)] dt
//! c₂(x) = ∫_{x+a/2}^{π} [A₁(t) K₁(s) + A₂(t) K₂(s)] dt,   s = t − x + a/2
//! ```
//!
//! with `(A, K) = (w, w)` for `γ`, `(f, w)` for `δ` and `(f, g)` for `η`,
//! and the potentials are `q = w₁ + c₁`, `p = w₂ + c₂` there.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::domain::{DelayParameter, Interval, RegionLayout};
use crate::error::{Error, Result};
use crate::forward::AuxU;
use crate::grid::{trapezoid, SampledFunction, UniformGrid};
use crate::inverse::fourier::FourierSeries;

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

/// `w₁, w₂` on `[a, π]`.
#[derive(Debug, Clone, PartialEq)]
pub struct AuxW {
    pub a: DelayParameter,
    pub w1: SampledFunction,
    pub w2: SampledFunction,
}

impl AuxW {
    pub fn grid(&self) -> &UniformGrid {
        self.w1.grid()
    }
}

/// `(w₁, w₂)` from `u` at `y = π+a−2x` and at `−y`.
fn combine(plus: (Complex64, Complex64), minus: (Complex64, Complex64)) -> (Complex64, Complex64) {
    let (u1p, u2p) = plus;
    let (u1m, u2m) = minus;
    (
        -(u1p + I * u2p) - (u1m - I * u2m),
        (I * u1p - u2p) - (I * u1m + u2m),
    )
}

/// `w₁(x) = −(u₁+iu₂)(π+a−2x) − (u₁−iu₂)(2x−π−a)`,
/// `w₂(x) = (iu₁−u₂)(π+a−2x) − (iu₁+u₂)(2x−π−a)` on `cells` cells of `[a, π]`.
///
/// Arguments on `±(π−2a)` use the limit from `|y| > π−2a`, the side that
/// belongs to the edge regions.
pub fn compute_w_on(u: &AuxU, cells: usize) -> Result<AuxW> {
    let a = u.a.value();
    let grid = UniformGrid::new(a, PI, cells)?;
    let mut w1 = Vec::with_capacity(grid.len());
    let mut w2 = Vec::with_capacity(grid.len());
    for x in grid.nodes() {
        let y = PI + a - 2.0 * x;
        let (v1, v2) = combine(u.outer_at(y), u.outer_at(-y));
        w1.push(v1);
        w2.push(v2);
    }
    Ok(AuxW {
        a: u.a,
        w1: SampledFunction::new(grid, w1)?,
        w2: SampledFunction::new(grid, w2)?,
    })
}

/// `w` on `cells` cells of `[a, π]`, evaluating the series for `u` exactly
/// at both arguments.
pub fn compute_w_from_series(
    series: &FourierSeries,
    a: DelayParameter,
    cells: usize,
) -> Result<AuxW> {
    let av = a.value();
    let grid = UniformGrid::new(av, PI, cells)?;
    let mut w1 = Vec::with_capacity(grid.len());
    let mut w2 = Vec::with_capacity(grid.len());
    for x in grid.nodes() {
        let y = PI + av - 2.0 * x;
        let (v1, v2) = combine(series.eval(y), series.eval(-y));
        w1.push(v1);
        w2.push(v2);
    }
    Ok(AuxW {
        a,
        w1: SampledFunction::new(grid, w1)?,
        w2: SampledFunction::new(grid, w2)?,
    })
}

/// [`compute_w_on`] with as many cells as `u` has in total.
pub fn compute_w(u: &AuxU) -> AuxW {
    let cells = u.u1.pieces().iter().map(|p| p.grid().cells()).sum();
    compute_w_on(u, cells).expect("u's pieces have at least two cells each")
}

/// Which stage produced a piece of the reconstruction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SegmentTag {
    Known,
    Edge,
    Gamma,
    Delta,
    Eta,
    F,
    G,
}

impl SegmentTag {
    pub fn name(self) -> &'static str {
        match self {
            Self::Known => "known",
            Self::Edge => "edge",
            Self::Gamma => "gamma",
            Self::Delta => "delta",
            Self::Eta => "eta",
            Self::F => "f",
            Self::G => "g",
        }
    }
}

/// `q, p` recovered on `interval`. The samples live on a uniform grid that
/// covers the closed interval, so the segment can be evaluated anywhere in it.
#[derive(Debug, Clone, PartialEq)]
pub struct PotentialSegment {
    pub tag: SegmentTag,
    pub interval: Interval,
    pub q: SampledFunction,
    pub p: SampledFunction,
}

impl PotentialSegment {
    pub fn new(
        tag: SegmentTag,
        interval: Interval,
        q: SampledFunction,
        p: SampledFunction,
    ) -> Result<Self> {
        if q.grid() != p.grid() {
            return Err(Error::Input(format!(
                "{} segment: q and p must share one grid",
                tag.name()
            )));
        }
        Ok(Self {
            tag,
            interval,
            q,
            p,
        })
    }

    /// Parts of `interval` not reached by the samples (tolerance half a cell).
    pub fn uncovered(&self, interval: Interval) -> Vec<Interval> {
        let g = self.q.grid();
        let tol = 0.5 * g.step();
        let mut gaps = Vec::new();
        if g.lo() > interval.lo + tol {
            gaps.push(Interval::new(interval.lo, g.lo().min(interval.hi)));
        }
        if g.hi() < interval.hi - tol {
            gaps.push(Interval::new(g.hi().max(interval.lo), interval.hi));
        }
        gaps
    }

    pub fn covers(&self, interval: Interval) -> bool {
        self.uncovered(interval).is_empty()
    }

    /// Node range of the samples lying in `interval`.
    fn inside(&self) -> (usize, usize) {
        let g = self.q.grid();
        let tol = 1e-9 * g.step();
        let first = (0..g.len()).find(|&k| g.node(k) >= self.interval.lo - tol);
        let last = (0..g.len())
            .rev()
            .find(|&k| g.node(k) <= self.interval.hi + tol);
        match (first, last) {
            (Some(f), Some(l)) if l > f => (f, l),
            _ => (0, g.cells()),
        }
    }

    /// `(q(x), p(x))` interpolated from the samples inside `interval` only,
    /// extrapolating linearly past its ends.
    pub fn at(&self, x: f64) -> (Complex64, Complex64) {
        let g = self.q.grid();
        let (first, last) = self.inside();
        let r = (x - g.lo()) / g.step();
        let k = (r.floor() as i64).clamp(first as i64, last as i64 - 1) as usize;
        let t = r - k as f64;
        let lerp = |v: &[Complex64]| {
            if t.abs() < 1e-9 {
                v[k]
            } else if (t - 1.0).abs() < 1e-9 {
                v[k + 1]
            } else {
                v[k] * (1.0 - t) + v[k + 1] * t
            }
        };
        (lerp(self.q.values()), lerp(self.p.values()))
    }
}

/// Kind of bilinear correction.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CorrectionKind {
    Gamma,
    Delta,
    Eta,
}

/// Correction pair on one region, with the ranges of outer (`t`) and inner
/// (`s = t − x + a/2`) arguments consumed while evaluating nodes inside it.
#[derive(Debug, Clone, PartialEq)]
pub struct CorrectionPair {
    pub kind: CorrectionKind,
    pub region: Interval,
    pub c1: SampledFunction,
    pub c2: SampledFunction,
    pub outer_span: (f64, f64),
    pub inner_span: (f64, f64),
}

struct Span(f64, f64);

impl Span {
    fn new() -> Self {
        Span(f64::INFINITY, f64::NEG_INFINITY)
    }

    fn add(&mut self, x: f64) {
        self.0 = self.0.min(x);
        self.1 = self.1.max(x);
    }
}

/// Evaluates the correction on the nodes of `grid` covering `region`.
fn correction<A, K>(
    kind: CorrectionKind,
    region: Interval,
    grid: &UniformGrid,
    a: f64,
    outer: A,
    inner: K,
) -> Result<CorrectionPair>
where
    A: Fn(f64) -> (Complex64, Complex64),
    K: Fn(f64) -> (Complex64, Complex64),
{
    let (k0, k1) = grid.covering_range(region.lo, region.hi);
    let sub = UniformGrid::new(grid.node(k0), grid.node(k1), k1 - k0)?;
    let h = grid.step();
    let mut outer_span = Span::new();
    let mut inner_span = Span::new();
    let mut c1 = Vec::with_capacity(sub.len());
    let mut c2 = Vec::with_capacity(sub.len());
    for x in sub.nodes() {
        let lo = x + 0.5 * a;
        let shift = 0.5 * a - x;
        let cells = ((PI - lo) / h).ceil().max(1.0) as usize;
        if region.contains(x) && lo < PI {
            outer_span.add(lo);
            outer_span.add(PI);
            inner_span.add(lo + shift);
            inner_span.add(PI + shift);
        }
        let first = trapezoid(lo, PI, cells, |t| {
            let (a1, a2) = outer(t);
            let (k1, k2) = inner(t + shift);
            a1 * k2 - a2 * k1
        });
        let second = trapezoid(lo, PI, cells, |t| {
            let (a1, a2) = outer(t);
            let (k1, k2) = inner(t + shift);
            a1 * k1 + a2 * k2
        });
        c1.push(first);
        c2.push(second);
    }
    Ok(CorrectionPair {
        kind,
        region,
        c1: SampledFunction::new(sub, c1)?,
        c2: SampledFunction::new(sub, c2)?,
        outer_span: (outer_span.0, outer_span.1),
        inner_span: (inner_span.0, inner_span.1),
    })
}

fn corrected_segment(tag: SegmentTag, w: &AuxW, corr: &CorrectionPair) -> Result<PotentialSegment> {
    let q = corr.c1.map(|x, c| w.w1.at(x) + c);
    let p = corr.c2.map(|x, c| w.w2.at(x) + c);
    PotentialSegment::new(tag, corr.region, q, p)
}

/// `q = w₁`, `p = w₂` on `[a, 3a/2]` and `[π−a/2, π]`.
pub fn reconstruct_edge(w: &AuxW, layout: &RegionLayout) -> Vec<PotentialSegment> {
    layout
        .edge()
        .into_iter()
        .map(|iv| PotentialSegment {
            tag: SegmentTag::Edge,
            interval: iv,
            q: w.w1.restrict(iv.lo, iv.hi),
            p: w.w2.restrict(iv.lo, iv.hi),
        })
        .collect()
}

/// `q = w₁ + γ₁`, `p = w₂ + γ₂` on `[π−a, 2a]` and `[π/2+3a/4, π−a/2)`.
/// Degenerate pieces are skipped.
///
/// The kernels only see `w` on `[π−a/2, π]` (outer) and `[a, 3a/2]`
/// (inner); both are read from the edge pieces, one-sided at their ends.
pub fn reconstruct_gamma(
    w: &AuxW,
    layout: &RegionLayout,
) -> Result<(Vec<CorrectionPair>, Vec<PotentialSegment>)> {
    let a = layout.a.value();
    let edge = reconstruct_edge(w, layout);
    let (near, far) = (&edge[0], &edge[1]);
    let mut corrections = Vec::new();
    let mut segments = Vec::new();
    for iv in layout.gamma() {
        if iv.is_degenerate() {
            continue;
        }
        let corr = correction(
            CorrectionKind::Gamma,
            iv,
            w.grid(),
            a,
            |t| far.at(t),
            |s| near.at(s),
        )?;
        segments.push(corrected_segment(SegmentTag::Gamma, w, &corr)?);
        corrections.push(corr);
    }
    Ok((corrections, segments))
}

fn require_cover(seg: &PotentialSegment, interval: Interval, what: &str) -> Result<()> {
    match seg.uncovered(interval).first() {
        None => Ok(()),
        Some(gap) => Err(Error::Input(format!(
            "{what} does not cover the subinterval {gap} of {interval}"
        ))),
    }
}

/// `q = w₁ + δ₁`, `p = w₂ + δ₂` on `I₂ = (2a, π/2+3a/4)`, with `f` the
/// already recovered potentials on `[π/2+3a/4, π]`.
pub fn reconstruct_delta(
    w: &AuxW,
    f: &PotentialSegment,
    layout: &RegionLayout,
) -> Result<(CorrectionPair, PotentialSegment)> {
    require_cover(f, layout.f_support(), "f")?;
    let edge = reconstruct_edge(w, layout);
    let iv = layout.delta();
    let corr = correction(
        CorrectionKind::Delta,
        iv,
        w.grid(),
        layout.a.value(),
        |t| f.at(t),
        |s| edge[0].at(s),
    )?;
    let seg = corrected_segment(SegmentTag::Delta, w, &corr)?;
    Ok((corr, seg))
}

/// `q = w₁ + η₁`, `p = w₂ + η₂` on `I₃ = [π/2+a/4, π−a)`, with `f` on
/// `[π/2+3a/4, π]` and `g` on `[a, π/2+a/4)`.
pub fn reconstruct_eta(
    w: &AuxW,
    f: &PotentialSegment,
    g: &PotentialSegment,
    layout: &RegionLayout,
) -> Result<(CorrectionPair, PotentialSegment)> {
    require_cover(f, layout.f_support(), "f")?;
    require_cover(g, layout.g_support(), "a-priori data g")?;
    let iv = layout.eta();
    let corr = correction(
        CorrectionKind::Eta,
        iv,
        w.grid(),
        layout.a.value(),
        |t| f.at(t),
        |s| g.at(s),
    )?;
    let seg = corrected_segment(SegmentTag::Eta, w, &corr)?;
    Ok((corr, seg))
}

/// Samples a piecewise definition on a grid spanning exactly `interval`:
/// each node takes the first piece whose interval contains it.
pub fn assemble(
    tag: SegmentTag,
    interval: Interval,
    spacing: f64,
    pieces: &[&PotentialSegment],
) -> Result<PotentialSegment> {
    let grid = UniformGrid::with_spacing(interval.lo, interval.hi, spacing)?;
    let mut q = Vec::with_capacity(grid.len());
    let mut p = Vec::with_capacity(grid.len());
    for x in grid.nodes() {
        let piece = pieces
            .iter()
            .find(|s| s.interval.contains(x))
            .ok_or_else(|| {
                Error::Input(format!(
                    "no recovered piece covers x = {x} while assembling {}",
                    tag.name()
                ))
            })?;
        let (qv, pv) = piece.at(x);
        q.push(qv);
        p.push(pv);
    }
    PotentialSegment::new(
        tag,
        interval,
        SampledFunction::new(grid, q)?,
        SampledFunction::new(grid, p)?,
    )
}
