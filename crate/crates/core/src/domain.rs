//! Domain types: the delay parameter, the region geometry it induces on
//! `[a, π]`, potential pairs and truncated spectra.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::grid::{SampledFunction, UniformGrid};

const GEOMETRY_TOL: f64 = 1e-12;

/// Constant delay `a`, restricted to `π/3 <= a < 2π/5`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DelayParameter(f64);

impl DelayParameter {
    pub const MIN: f64 = PI / 3.0;
    pub const MAX: f64 = 2.0 * PI / 5.0;

    pub fn new(a: f64) -> Result<Self> {
        // accept a = π/3 computed with a rounding error of a few ulps
        if (Self::MIN - 1e-14..Self::MAX).contains(&a) {
            Ok(Self(a.max(Self::MIN)))
        } else {
            Err(Error::Domain(format!(
                "delay a = {a} outside [π/3, 2π/5) = [{:.6}, {:.6})",
                Self::MIN,
                Self::MAX
            )))
        }
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

/// Closed real interval; `lo > hi` never occurs, `lo == hi` is degenerate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub fn new(lo: f64, hi: f64) -> Self {
        Self { lo, hi: hi.max(lo) }
    }

    pub fn length(&self) -> f64 {
        self.hi - self.lo
    }

    /// Degenerate intervals carry no measure and are skipped everywhere.
    pub fn is_degenerate(&self) -> bool {
        self.length() <= GEOMETRY_TOL
    }

    pub fn contains(&self, x: f64) -> bool {
        x >= self.lo - GEOMETRY_TOL && x <= self.hi + GEOMETRY_TOL
    }
}

impl std::fmt::Display for Interval {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "[{:.6}, {:.6}]", self.lo, self.hi)
    }
}

/// Breakpoints of `[a, π]` and the subintervals the reconstruction visits.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RegionLayout {
    pub a: DelayParameter,
    /// `a, 3a/2, π/2+a/4, π−a, 2a, π/2+3a/4, π−a/2, π`
    pub breakpoints: [f64; 8],
}

impl RegionLayout {
    pub fn new(a: DelayParameter) -> Self {
        let v = a.value();
        Self {
            a,
            breakpoints: [
                v,
                1.5 * v,
                PI / 2.0 + v / 4.0,
                PI - v,
                2.0 * v,
                PI / 2.0 + 0.75 * v,
                PI - v / 2.0,
                PI,
            ],
        }
    }

    fn iv(&self, i: usize, j: usize) -> Interval {
        Interval::new(self.breakpoints[i], self.breakpoints[j])
    }

    /// `[a, 3a/2]` and `[π−a/2, π]`, read off directly from `w`.
    pub fn edge(&self) -> [Interval; 2] {
        [self.iv(0, 1), self.iv(6, 7)]
    }

    /// `[π−a, 2a]` and `[π/2+3a/4, π−a/2)`, corrected by `γ`.
    pub fn gamma(&self) -> [Interval; 2] {
        [self.iv(3, 4), self.iv(5, 6)]
    }

    /// `I₂ = (2a, π/2+3a/4)`, corrected by `δ`.
    pub fn delta(&self) -> Interval {
        self.iv(4, 5)
    }

    /// `I₃ = [π/2+a/4, π−a)`, corrected by `η`.
    pub fn eta(&self) -> Interval {
        self.iv(2, 3)
    }

    /// A-priori-known window `(3a/2, π/2+a/4)`.
    pub fn known(&self) -> Interval {
        self.iv(1, 2)
    }

    /// `I₁ = [a,3a/2] ∪ [π−a,2a] ∪ [π/2+3a/4, π]`.
    pub fn i1(&self) -> [Interval; 3] {
        [self.iv(0, 1), self.iv(3, 4), self.iv(5, 7)]
    }

    /// Support of `f₁, f₂`: `[π/2+3a/4, π]`.
    pub fn f_support(&self) -> Interval {
        self.iv(5, 7)
    }

    /// Support of `g₁, g₂`: `[a, π/2+a/4)`.
    pub fn g_support(&self) -> Interval {
        self.iv(0, 2)
    }

    pub fn full(&self) -> Interval {
        self.iv(0, 7)
    }
}

/// `region_layout(a)`: validates `a` and derives the breakpoints.
pub fn region_layout(a: f64) -> Result<RegionLayout> {
    Ok(RegionLayout::new(DelayParameter::new(a)?))
}

/// The unknowns `(q, p)` on `[a, π]`; `Q = [[q, p], [p, −q]]` there and zero on `(0, a)`.
#[derive(Debug, Clone, PartialEq)]
pub struct PotentialPair {
    a: DelayParameter,
    q: SampledFunction,
    p: SampledFunction,
}

impl PotentialPair {
    pub fn new(a: DelayParameter, q: SampledFunction, p: SampledFunction) -> Result<Self> {
        if q.grid() != p.grid() {
            return Err(Error::Input("q and p must share one grid".into()));
        }
        let g = q.grid();
        if (g.lo() - a.value()).abs() > 1e-9 || (g.hi() - PI).abs() > 1e-9 {
            return Err(Error::Input(format!(
                "potential grid [{}, {}] does not span [a, π] = [{}, {}]",
                g.lo(),
                g.hi(),
                a.value(),
                PI
            )));
        }
        Ok(Self { a, q, p })
    }

    /// Samples `q` and `p` on `m` cells of `[a, π]`.
    pub fn from_fns(
        a: DelayParameter,
        m: usize,
        q: impl Fn(f64) -> Complex64,
        p: impl Fn(f64) -> Complex64,
    ) -> Result<Self> {
        let grid = UniformGrid::new(a.value(), PI, m)?;
        Ok(Self {
            a,
            q: SampledFunction::from_fn(grid, q),
            p: SampledFunction::from_fn(grid, p),
        })
    }

    pub fn zero(a: DelayParameter, m: usize) -> Result<Self> {
        let zero = |_| Complex64::new(0.0, 0.0);
        Self::from_fns(a, m, zero, zero)
    }

    pub fn a(&self) -> DelayParameter {
        self.a
    }

    pub fn q(&self) -> &SampledFunction {
        &self.q
    }

    pub fn p(&self) -> &SampledFunction {
        &self.p
    }

    pub fn grid(&self) -> &UniformGrid {
        self.q.grid()
    }

    /// Matrix `Q(x)` as rows; zero for `x < a`.
    pub fn matrix_at(&self, x: f64) -> [[Complex64; 2]; 2] {
        if x < self.a.value() {
            let z = Complex64::new(0.0, 0.0);
            return [[z, z], [z, z]];
        }
        let (q, p) = (self.q.at(x), self.p.at(x));
        [[q, p], [p, -q]]
    }

    /// Joint relative L2 distance `‖(q−q̃, p−p̃)‖ / ‖(q, p)‖` on the shared grid.
    pub fn relative_l2_error(&self, reconstructed: &PotentialPair) -> Result<f64> {
        let (num, den) = self.l2_error_parts(reconstructed, self.a.value(), PI)?;
        Ok(if den > 0.0 { num / den } else { num })
    }

    /// Absolute L2 error and reference norm over `[lo, hi]`, both evaluated
    /// on the nodes of `self`'s grid inside the interval.
    pub fn l2_error_parts(&self, other: &PotentialPair, lo: f64, hi: f64) -> Result<(f64, f64)> {
        if self.grid() != other.grid() {
            return Err(Error::Input("potentials live on different grids".into()));
        }
        let g = self.grid();
        let h = g.step();
        let (mut num, mut den) = (0.0, 0.0);
        for (k, x) in g.nodes().enumerate() {
            if x < lo - 1e-12 || x > hi + 1e-12 {
                continue;
            }
            let w = if k == 0 || k == g.cells() { 0.5 * h } else { h };
            let dq = self.q.values()[k] - other.q.values()[k];
            let dp = self.p.values()[k] - other.p.values()[k];
            num += w * (dq.norm_sqr() + dp.norm_sqr());
            den += w * (self.q.values()[k].norm_sqr() + self.p.values()[k].norm_sqr());
        }
        Ok((num.sqrt(), den.sqrt()))
    }
}

/// Truncated spectrum `{λ_{n,j}}_{|n| <= N}` of `L_j(Q)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    j: u8,
    values: Vec<Complex64>,
}

impl Spectrum {
    /// `values[k]` holds `λ_{k−N, j}`; the length must be odd.
    pub fn new(j: u8, values: Vec<Complex64>) -> Result<Self> {
        if j != 1 && j != 2 {
            return Err(Error::Input(format!(
                "boundary index j must be 1 or 2, got {j}"
            )));
        }
        if values.len() < 3 || values.len().is_multiple_of(2) {
            return Err(Error::Input(format!(
                "spectrum needs 2N+1 entries with N >= 1, got {}",
                values.len()
            )));
        }
        Ok(Self { j, values })
    }

    /// Unperturbed spectrum `λ_{n,j} = n − (j−1)/2`.
    pub fn lattice(j: u8, n_max: usize) -> Result<Self> {
        let values = (-(n_max as i64)..=n_max as i64)
            .map(|n| Complex64::new(lattice_point(j, n), 0.0))
            .collect();
        Self::new(j, values)
    }

    pub fn j(&self) -> u8 {
        self.j
    }

    pub fn n_max(&self) -> usize {
        self.values.len() / 2
    }

    pub fn get(&self, n: i64) -> Option<Complex64> {
        let k = n + self.n_max() as i64;
        usize::try_from(k)
            .ok()
            .and_then(|k| self.values.get(k).copied())
    }

    pub fn indices(&self) -> impl Iterator<Item = i64> {
        let n = self.n_max() as i64;
        -n..=n
    }

    /// `(n, λ_{n,j})` pairs in increasing `n`.
    pub fn iter(&self) -> impl Iterator<Item = (i64, Complex64)> + '_ {
        self.indices().zip(self.values.iter().copied())
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    /// Residual `κ_{n,j} = λ_{n,j} − n + (j−1)/2`.
    pub fn kappa(&self, n: i64) -> Option<Complex64> {
        self.get(n).map(|l| l - lattice_point(self.j, n))
    }

    pub fn kappas(&self) -> impl Iterator<Item = (i64, Complex64)> + '_ {
        self.iter().map(|(n, l)| (n, l - lattice_point(self.j, n)))
    }

    /// Partial sum `Σ |κ_{n,j}|²` over the stored range.
    pub fn kappa_l2_sq(&self) -> f64 {
        self.kappas().map(|(_, k)| k.norm_sqr()).sum()
    }
}

/// Asymptotic position `n − (j−1)/2`.
pub fn lattice_point(j: u8, n: i64) -> f64 {
    n as f64 - if j == 2 { 0.5 } else { 0.0 }
}

/// The two spectra consumed by the inverse problem.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralData {
    spectrum1: Spectrum,
    spectrum2: Spectrum,
}

impl SpectralData {
    pub fn new(spectrum1: Spectrum, spectrum2: Spectrum) -> Result<Self> {
        if spectrum1.j() != 1 || spectrum2.j() != 2 {
            return Err(Error::Input(
                "spectral data needs the j=1 spectrum first and the j=2 spectrum second".into(),
            ));
        }
        if spectrum1.n_max() != spectrum2.n_max() {
            return Err(Error::Input(format!(
                "spectra truncated at different orders: N1 = {}, N2 = {}",
                spectrum1.n_max(),
                spectrum2.n_max()
            )));
        }
        Ok(Self {
            spectrum1,
            spectrum2,
        })
    }

    pub fn lattice(n_max: usize) -> Result<Self> {
        Self::new(Spectrum::lattice(1, n_max)?, Spectrum::lattice(2, n_max)?)
    }

    pub fn spectrum(&self, j: u8) -> &Spectrum {
        if j == 1 {
            &self.spectrum1
        } else {
            &self.spectrum2
        }
    }

    pub fn n_max(&self) -> usize {
        self.spectrum1.n_max()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn layout_at_lower_endpoint_degenerates_middle_piece() {
        let l = region_layout(PI / 3.0).unwrap();
        let [e0, mid, tail] = l.i1();
        assert!((e0.lo - PI / 3.0).abs() < 1e-15 && (e0.hi - PI / 2.0).abs() < 1e-15);
        assert!(mid.is_degenerate());
        assert!((mid.lo - 2.0 * PI / 3.0).abs() < 1e-15);
        assert!((tail.lo - 0.75 * PI).abs() < 1e-15 && tail.hi == PI);
    }

    #[test]
    fn layout_breakpoints_for_a_1_1() {
        let l = region_layout(1.1).unwrap();
        let expected = [
            1.1,
            1.65,
            1.845_796_326_794_896_6,
            2.041_592_653_589_793,
            2.2,
            2.395_796_326_794_896_6,
            2.591_592_653_589_793,
            PI,
        ];
        for (b, e) in l.breakpoints.iter().zip(expected) {
            assert!((b - e).abs() < 1e-12, "{b} vs {e}");
        }
    }

    #[test]
    fn delay_outside_range_is_rejected() {
        assert!(matches!(region_layout(1.0), Err(Error::Domain(_))));
        assert!(region_layout(2.0 * PI / 5.0).is_err());
        assert!(region_layout(f64::NAN).is_err());
    }

    #[test]
    fn breakpoints_are_monotone_and_measures_add_up() {
        let steps = 2000;
        for i in 0..steps {
            let a = PI / 3.0 + (2.0 * PI / 5.0 - PI / 3.0) * i as f64 / steps as f64;
            let l = region_layout(a).unwrap();
            assert!(
                l.breakpoints.windows(2).all(|w| w[0] <= w[1] + 1e-15),
                "a = {a}"
            );
            let i1: f64 = l.i1().iter().map(Interval::length).sum();
            let total = i1 + l.delta().length() + l.eta().length() + l.known().length();
            assert!((total - (PI - a)).abs() < 1e-12, "a = {a}");
        }
    }

    #[test]
    fn spectrum_rejects_bad_shapes() {
        assert!(Spectrum::new(3, vec![Complex64::new(0.0, 0.0); 3]).is_err());
        assert!(Spectrum::new(1, vec![Complex64::new(0.0, 0.0); 4]).is_err());
        assert!(Spectrum::new(1, vec![Complex64::new(0.0, 0.0); 1]).is_err());
        let s1 = Spectrum::lattice(1, 2).unwrap();
        let s2 = Spectrum::lattice(2, 3).unwrap();
        assert!(matches!(SpectralData::new(s1, s2), Err(Error::Input(_))));
    }

    #[test]
    fn lattice_residuals_vanish() {
        let s = Spectrum::lattice(2, 4).unwrap();
        assert_eq!(s.get(-4), Some(Complex64::new(-4.5, 0.0)));
        assert!(s.kappas().all(|(_, k)| k == Complex64::new(0.0, 0.0)));
        assert_eq!(s.get(5), None);
    }
}
