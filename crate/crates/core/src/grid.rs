//! Uniform grids, complex samples on them, and the piecewise-linear
//! interpolation and trapezoid quadrature every other module is built on.
//! [`PiecewiseFunction`] chains several sampled pieces to carry jumps.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Relative distance (in cells) below which an abscissa is treated as a node.
const NODE_SNAP: f64 = 1e-9;

/// `m` equal subintervals of `[lo, hi]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UniformGrid {
    lo: f64,
    hi: f64,
    m: usize,
}

impl UniformGrid {
    pub fn new(lo: f64, hi: f64, m: usize) -> Result<Self> {
        if !(lo.is_finite() && hi.is_finite()) || lo >= hi {
            return Err(Error::Domain(format!(
                "grid bounds must satisfy lo < hi, got [{lo}, {hi}]"
            )));
        }
        if m < 2 {
            return Err(Error::Domain(format!(
                "grid needs at least 2 subintervals, got {m}"
            )));
        }
        Ok(Self { lo, hi, m })
    }

    /// Grid on `[lo, hi]` whose spacing does not exceed `h`.
    pub fn with_spacing(lo: f64, hi: f64, h: f64) -> Result<Self> {
        let m = ((hi - lo) / h - 1e-9).ceil().max(2.0) as usize;
        Self::new(lo, hi, m)
    }

    pub fn lo(&self) -> f64 {
        self.lo
    }

    pub fn hi(&self) -> f64 {
        self.hi
    }

    /// Number of subintervals.
    pub fn cells(&self) -> usize {
        self.m
    }

    pub fn len(&self) -> usize {
        self.m + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn step(&self) -> f64 {
        (self.hi - self.lo) / self.m as f64
    }

    pub fn node(&self, k: usize) -> f64 {
        if k == self.m {
            self.hi
        } else {
            self.lo + (self.hi - self.lo) * (k as f64 / self.m as f64)
        }
    }

    pub fn nodes(&self) -> impl Iterator<Item = f64> + '_ {
        (0..=self.m).map(move |k| self.node(k))
    }

    pub fn contains(&self, x: f64, tol: f64) -> bool {
        x >= self.lo - tol && x <= self.hi + tol
    }

    /// Index of the node equal to `x` up to the snapping tolerance.
    pub fn node_index(&self, x: f64) -> Option<usize> {
        let r = (x - self.lo) / self.step();
        let k = r.round();
        if (r - k).abs() <= NODE_SNAP && k >= 0.0 && k <= self.m as f64 {
            Some(k as usize)
        } else {
            None
        }
    }

    /// Smallest index range `k0..=k1` whose nodes cover `[lo, hi]`, widened
    /// to at least two cells when the grid allows it.
    pub fn covering_range(&self, lo: f64, hi: f64) -> (usize, usize) {
        let h = self.step();
        let r0 = ((lo - self.lo) / h + NODE_SNAP).floor().max(0.0) as usize;
        let r1 = ((hi - self.lo) / h - NODE_SNAP).ceil().max(0.0) as usize;
        let mut k0 = r0.min(self.m);
        let mut k1 = r1.min(self.m).max(k0);
        while k1 - k0 < 2 {
            if k1 < self.m {
                k1 += 1;
            } else if k0 > 0 {
                k0 -= 1;
            } else {
                break;
            }
        }
        (k0, k1)
    }

    /// Locates `x` (already clamped to the grid) as a cell index and a
    /// fractional offset in `[0, 1]`; node hits return an offset of exactly 0.
    fn locate(&self, x: f64) -> (usize, f64) {
        let r = (x - self.lo) / self.step();
        let k = r.round();
        if (r - k).abs() <= NODE_SNAP {
            let k = (k.max(0.0) as usize).min(self.m);
            return if k == self.m {
                (self.m - 1, 1.0)
            } else {
                (k, 0.0)
            };
        }
        let k = (r.floor().max(0.0) as usize).min(self.m - 1);
        (k, (r - k as f64).clamp(0.0, 1.0))
    }
}

/// Complex values tabulated on a [`UniformGrid`].
#[derive(Debug, Clone, PartialEq)]
pub struct SampledFunction {
    grid: UniformGrid,
    values: Vec<Complex64>,
}

impl SampledFunction {
    pub fn new(grid: UniformGrid, values: Vec<Complex64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::Input(format!(
                "expected {} samples for the grid, got {}",
                grid.len(),
                values.len()
            )));
        }
        Ok(Self { grid, values })
    }

    pub fn from_fn(grid: UniformGrid, f: impl Fn(f64) -> Complex64) -> Self {
        let values = grid.nodes().map(f).collect();
        Self { grid, values }
    }

    pub fn zeros(grid: UniformGrid) -> Self {
        Self {
            grid,
            values: vec![Complex64::new(0.0, 0.0); grid.len()],
        }
    }

    pub fn grid(&self) -> &UniformGrid {
        &self.grid
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn map(&self, f: impl Fn(f64, Complex64) -> Complex64) -> Self {
        let values = self
            .grid
            .nodes()
            .zip(&self.values)
            .map(|(x, &v)| f(x, v))
            .collect();
        Self {
            grid: self.grid,
            values,
        }
    }

    /// Piecewise-linear interpolant at `x`. Abscissae up to half a cell
    /// outside the grid are clamped to the nearest endpoint.
    pub fn interpolate(&self, x: f64) -> Result<Complex64> {
        let tol = 0.5 * self.grid.step();
        if !x.is_finite() || !self.grid.contains(x, tol) {
            return Err(Error::Range(format!(
                "x = {x} lies outside [{}, {}]",
                self.grid.lo, self.grid.hi
            )));
        }
        Ok(self.at(x))
    }

    /// Unchecked interpolation with clamping; for hot loops whose arguments
    /// are in range by construction.
    #[inline]
    pub fn at(&self, x: f64) -> Complex64 {
        let x = x.clamp(self.grid.lo, self.grid.hi);
        let (k, theta) = self.grid.locate(x);
        if theta == 0.0 {
            self.values[k]
        } else if theta == 1.0 {
            self.values[k + 1]
        } else {
            self.values[k] * (1.0 - theta) + self.values[k + 1] * theta
        }
    }

    /// Composite trapezoid integral over `[x_lo, x_hi]`; partial cells at
    /// off-node bounds integrate the linear interpolant exactly.
    pub fn integrate(&self, x_lo: f64, x_hi: f64) -> Result<Complex64> {
        let tol = 1e-12 * (self.grid.hi - self.grid.lo).max(1.0);
        if !(x_lo.is_finite() && x_hi.is_finite()) || x_lo > x_hi {
            return Err(Error::Range(format!(
                "integration bounds must satisfy lo <= hi, got [{x_lo}, {x_hi}]"
            )));
        }
        if !self.grid.contains(x_lo, tol) || !self.grid.contains(x_hi, tol) {
            return Err(Error::Range(format!(
                "integration bounds [{x_lo}, {x_hi}] exceed [{}, {}]",
                self.grid.lo, self.grid.hi
            )));
        }
        let lo = x_lo.clamp(self.grid.lo, self.grid.hi);
        let hi = x_hi.clamp(self.grid.lo, self.grid.hi);
        if lo == hi {
            return Ok(Complex64::new(0.0, 0.0));
        }
        let (k_lo, t_lo) = self.grid.locate(lo);
        let (k_hi, t_hi) = self.grid.locate(hi);
        let h = self.grid.step();
        let f_lo = self.at(lo);
        let f_hi = self.at(hi);
        if k_lo == k_hi {
            return Ok((f_lo + f_hi) * (0.5 * (hi - lo)));
        }
        // [lo, x_{k_lo+1}] + full cells + [x_{k_hi}, hi]
        let mut sum = (f_lo + self.values[k_lo + 1]) * (0.5 * (1.0 - t_lo) * h);
        for k in (k_lo + 1)..k_hi {
            sum += (self.values[k] + self.values[k + 1]) * (0.5 * h);
        }
        sum += (self.values[k_hi] + f_hi) * (0.5 * t_hi * h);
        Ok(sum)
    }

    /// Trapezoid integral over the whole grid.
    pub fn integral(&self) -> Complex64 {
        let h = self.grid.step();
        let inner: Complex64 = self.values[1..self.grid.m].iter().sum();
        (inner + (self.values[0] + self.values[self.grid.m]) * 0.5) * h
    }

    /// Trapezoid L2 norm over the whole grid.
    pub fn l2_norm(&self) -> f64 {
        let h = self.grid.step();
        let m = self.grid.m;
        let inner: f64 = self.values[1..m].iter().map(|v| v.norm_sqr()).sum();
        ((inner + 0.5 * (self.values[0].norm_sqr() + self.values[m].norm_sqr())) * h).sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    /// Copy of the samples on the smallest node range covering `[lo, hi]`.
    pub fn restrict(&self, lo: f64, hi: f64) -> Self {
        let (k0, k1) = self.grid.covering_range(lo, hi);
        let grid = UniformGrid {
            lo: self.grid.node(k0),
            hi: self.grid.node(k1),
            m: k1 - k0,
        };
        Self {
            grid,
            values: self.values[k0..=k1].to_vec(),
        }
    }

    /// Samples this function's interpolant on another grid.
    pub fn resample(&self, grid: UniformGrid) -> Result<Self> {
        let values = grid
            .nodes()
            .map(|x| self.interpolate(x))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { grid, values })
    }
}

/// Contiguous pieces, each sampled on its own uniform grid. The pieces
/// share their end abscissae, where the function may jump.
#[derive(Debug, Clone, PartialEq)]
pub struct PiecewiseFunction {
    pieces: Vec<SampledFunction>,
}

impl PiecewiseFunction {
    pub fn new(pieces: Vec<SampledFunction>) -> Result<Self> {
        if pieces.is_empty() {
            return Err(Error::Input(
                "a piecewise function needs at least one piece".into(),
            ));
        }
        for pair in pieces.windows(2) {
            let (l, r) = (pair[0].grid(), pair[1].grid());
            if (l.hi() - r.lo()).abs() > 1e-12 * l.hi().abs().max(1.0) {
                return Err(Error::Input(format!(
                    "pieces are not contiguous: {} then {}",
                    l.hi(),
                    r.lo()
                )));
            }
        }
        Ok(Self { pieces })
    }

    /// Samples `f(piece, x)` on each grid.
    pub fn from_fn(grids: &[UniformGrid], f: impl Fn(usize, f64) -> Complex64) -> Result<Self> {
        Self::new(
            grids
                .iter()
                .enumerate()
                .map(|(i, &g)| SampledFunction::from_fn(g, |x| f(i, x)))
                .collect(),
        )
    }

    pub fn zeros(grids: &[UniformGrid]) -> Result<Self> {
        Self::new(grids.iter().map(|&g| SampledFunction::zeros(g)).collect())
    }

    pub fn pieces(&self) -> &[SampledFunction] {
        &self.pieces
    }

    pub fn grids(&self) -> Vec<UniformGrid> {
        self.pieces.iter().map(|p| *p.grid()).collect()
    }

    pub fn lo(&self) -> f64 {
        self.pieces[0].grid().lo()
    }

    pub fn hi(&self) -> f64 {
        self.pieces[self.pieces.len() - 1].grid().hi()
    }

    /// Interior abscissae where consecutive pieces meet.
    pub fn breaks(&self) -> Vec<f64> {
        self.pieces[1..].iter().map(|p| p.grid().lo()).collect()
    }

    fn piece_index(&self, x: f64, right: bool) -> usize {
        let last = self.pieces.len() - 1;
        let tol = |g: &UniformGrid| NODE_SNAP * g.step();
        if right {
            (0..=last)
                .find(|&i| {
                    let g = self.pieces[i].grid();
                    x < g.hi() - tol(g) || i == last
                })
                .unwrap_or(last)
        } else {
            (0..=last)
                .find(|&i| {
                    let g = self.pieces[i].grid();
                    x <= g.hi() + tol(g)
                })
                .unwrap_or(last)
        }
    }

    /// Interpolant at `x`; at a break the left piece's limit is used.
    pub fn at(&self, x: f64) -> Complex64 {
        self.pieces[self.piece_index(x, false)].at(x)
    }

    /// Interpolant at `x`; at a break the right piece's limit is used.
    pub fn at_right(&self, x: f64) -> Complex64 {
        self.pieces[self.piece_index(x, true)].at(x)
    }

    pub fn map(&self, f: impl Fn(f64, Complex64) -> Complex64) -> Self {
        Self {
            pieces: self.pieces.iter().map(|p| p.map(&f)).collect(),
        }
    }

    pub fn max_abs(&self) -> f64 {
        self.pieces.iter().map(|p| p.max_abs()).fold(0.0, f64::max)
    }

    pub fn integral(&self) -> Complex64 {
        self.pieces.iter().map(|p| p.integral()).sum()
    }

    pub fn l2_norm(&self) -> f64 {
        self.pieces
            .iter()
            .map(|p| p.l2_norm().powi(2))
            .sum::<f64>()
            .sqrt()
    }

    /// Every sample as `(piece, x, value)`, piece by piece.
    pub fn samples(&self) -> impl Iterator<Item = (usize, f64, Complex64)> + '_ {
        self.pieces.iter().enumerate().flat_map(|(i, p)| {
            p.grid()
                .nodes()
                .zip(p.values().iter().copied())
                .map(move |(x, v)| (i, x, v))
        })
    }

    /// Samples on a single grid, taking left limits at breaks.
    pub fn to_uniform(&self, grid: UniformGrid) -> SampledFunction {
        SampledFunction::from_fn(grid, |x| self.at(x))
    }
}

/// Composite trapezoid rule for `f` on `cells` equal pieces of `[lo, hi]`.
pub fn trapezoid(lo: f64, hi: f64, cells: usize, f: impl Fn(f64) -> Complex64) -> Complex64 {
    if hi <= lo || cells == 0 {
        return Complex64::new(0.0, 0.0);
    }
    let h = (hi - lo) / cells as f64;
    let mut sum = (f(lo) + f(hi)) * 0.5;
    for k in 1..cells {
        sum += f(lo + k as f64 * h);
    }
    sum * h
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn interpolates_linear_data() {
        let g = UniformGrid::new(0.0, 1.0, 2).unwrap();
        let f = SampledFunction::from_fn(g, c);
        assert_eq!(f.interpolate(0.5).unwrap(), c(0.5));
        assert!((f.interpolate(0.3).unwrap() - c(0.3)).norm() < 1e-15);
    }

    #[test]
    fn node_values_are_exact() {
        let g = UniformGrid::new(-1.3, 2.9, 37).unwrap();
        let f = SampledFunction::from_fn(g, |x| Complex64::new(x.sin(), x.cos() * x));
        for k in 0..g.len() {
            assert_eq!(f.interpolate(g.node(k)).unwrap(), f.values()[k]);
        }
    }

    #[test]
    fn interpolation_matches_exp_within_1e6() {
        let g = UniformGrid::new(0.0, 1.0, 1000).unwrap();
        let f = SampledFunction::from_fn(g, |x| Complex64::new(0.0, x).exp());
        let x = 0.3333;
        assert!((f.interpolate(x).unwrap() - Complex64::new(0.0, x).exp()).norm() < 1e-6);
    }

    #[test]
    fn out_of_range_is_rejected() {
        let g = UniformGrid::new(0.0, 1.0, 10).unwrap();
        let f = SampledFunction::zeros(g);
        assert!(f.interpolate(1.04).is_ok());
        assert!(matches!(f.interpolate(1.2), Err(Error::Range(_))));
        assert!(matches!(f.integrate(0.5, 0.2), Err(Error::Range(_))));
        assert!(matches!(f.integrate(-0.5, 0.2), Err(Error::Range(_))));
    }

    #[test]
    fn grid_invariants() {
        assert!(UniformGrid::new(1.0, 1.0, 4).is_err());
        assert!(UniformGrid::new(0.0, 1.0, 1).is_err());
        let g = UniformGrid::new(0.0, 3.0, 7).unwrap();
        let nodes: Vec<f64> = g.nodes().collect();
        assert!(nodes.windows(2).all(|w| w[0] < w[1]));
        assert_eq!(*nodes.last().unwrap(), 3.0);
    }

    #[test]
    fn integrates_constants_and_quadratics() {
        let g = UniformGrid::new(0.0, 1.0, 1000).unwrap();
        let one = SampledFunction::from_fn(g, |_| c(1.0));
        assert!((one.integrate(0.0, 1.0).unwrap() - c(1.0)).norm() < 1e-13);
        assert_eq!(one.integrate(0.3, 0.3).unwrap(), c(0.0));
        let sq = SampledFunction::from_fn(g, |x| c(x * x));
        assert!((sq.integrate(0.0, 1.0).unwrap() - c(1.0 / 3.0)).norm() < 1e-6);
    }

    #[test]
    fn quadrature_converges_at_second_order() {
        let err = |m: usize| {
            let g = UniformGrid::new(0.0, 2.0, m).unwrap();
            let f = SampledFunction::from_fn(g, |x| Complex64::new(x.cos(), x.exp()));
            let exact = Complex64::new(0.7f64.sin() - 0.2f64.sin(), 0.7f64.exp() - 0.2f64.exp());
            (f.integrate(0.2, 0.7).unwrap() - exact).norm()
        };
        let ratio = err(100) / err(200);
        assert!(ratio > 3.5, "ratio {ratio}");
    }

    #[test]
    fn interpolation_converges_at_second_order() {
        let err = |m: usize| {
            let g = UniformGrid::new(0.0, 2.0, m).unwrap();
            let f = SampledFunction::from_fn(g, |x| Complex64::new(x.sin(), 0.0));
            (0..50)
                .map(|i| 0.013 + i as f64 * 0.039)
                .map(|x| (f.at(x) - c(x.sin())).norm())
                .fold(0.0, f64::max)
        };
        let ratio = err(64) / err(128);
        assert!(ratio > 3.5, "ratio {ratio}");
    }

    #[test]
    fn restriction_covers_interval() {
        let g = UniformGrid::new(0.0, 1.0, 10).unwrap();
        let f = SampledFunction::from_fn(g, c);
        let r = f.restrict(0.25, 0.55);
        assert!(r.grid().lo() <= 0.25 && r.grid().hi() >= 0.55);
        assert_eq!(r.grid().cells(), 4);
        let tiny = f.restrict(0.5, 0.5);
        assert!(tiny.grid().cells() >= 2);
    }

    proptest! {
        #[test]
        fn integration_is_additive(x0 in 0.0..1.0f64, d1 in 0.0..1.0f64, d2 in 0.0..1.0f64) {
            let g = UniformGrid::new(0.0, 3.0, 97).unwrap();
            let f = SampledFunction::from_fn(g, |x| Complex64::new((3.0 * x).sin(), x * x - 1.0));
            let x1 = x0 + d1;
            let x2 = x1 + d2;
            let whole = f.integrate(x0, x2).unwrap();
            let parts = f.integrate(x0, x1).unwrap() + f.integrate(x1, x2).unwrap();
            prop_assert!((whole - parts).norm() <= 1e-12 * whole.norm().max(1.0));
        }
    }
}
