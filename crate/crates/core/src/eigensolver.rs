//! Zeros of `Δ_j` near the lattice `n − (j−1)/2`, found by Newton iteration
//! from the asymptotic seed and certified by the argument principle.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::domain::{lattice_point, PotentialPair, SpectralData, Spectrum};
use crate::error::{Error, Result};
use crate::forward::CharacteristicFunction;

const MAX_NEWTON: usize = 50;
const RESIDUAL_TOL: f64 = 1e-11;
const STEP_TOL: f64 = 1e-12;
const SEARCH_RADIUS: f64 = 0.5;

/// Axis-aligned rectangle in the complex plane.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Rect {
    pub re_lo: f64,
    pub re_hi: f64,
    pub im_lo: f64,
    pub im_hi: f64,
}

impl Rect {
    pub fn new(re_lo: f64, re_hi: f64, im_lo: f64, im_hi: f64) -> Self {
        Self {
            re_lo,
            re_hi,
            im_lo,
            im_hi,
        }
    }

    /// `[c−½, c+½] × [−1, 1]` around the lattice point of `(j, n)`.
    pub fn unit_box(j: u8, n: i64) -> Self {
        let c = lattice_point(j, n);
        Self::new(c - 0.5, c + 0.5, -1.0, 1.0)
    }

    /// Strip holding every lattice point with `|n| <= n_max`, a quarter unit
    /// away from the neighbouring lattice points.
    pub fn strip(j: u8, n_max: usize, half_height: f64) -> Self {
        let n = n_max as i64;
        Self::new(
            lattice_point(j, -n) - 0.25,
            lattice_point(j, n) + 0.25,
            -half_height,
            half_height,
        )
    }

    fn grow(&self, d: f64) -> Self {
        Self::new(
            self.re_lo - d,
            self.re_hi + d,
            self.im_lo - d,
            self.im_hi + d,
        )
    }

    pub fn contains(&self, z: Complex64) -> bool {
        z.re >= self.re_lo && z.re <= self.re_hi && z.im >= self.im_lo && z.im <= self.im_hi
    }

    fn corners(&self) -> [Complex64; 4] {
        [
            Complex64::new(self.re_lo, self.im_lo),
            Complex64::new(self.re_hi, self.im_lo),
            Complex64::new(self.re_hi, self.im_hi),
            Complex64::new(self.re_lo, self.im_hi),
        ]
    }
}

impl std::fmt::Display for Rect {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "[{}, {}] x [{}, {}]",
            self.re_lo, self.re_hi, self.im_lo, self.im_hi
        )
    }
}

/// `∮ Δ′/Δ dz` by trapezoid on each side with spacing at most `spacing`.
/// `None` when `Δ` vanishes (or overflows) at a sample.
fn log_derivative_integral(
    cf: &CharacteristicFunction,
    j: u8,
    rect: &Rect,
    spacing: f64,
) -> Option<Complex64> {
    let corners = rect.corners();
    let mut total = Complex64::new(0.0, 0.0);
    for side in 0..4 {
        let (z0, z1) = (corners[side], corners[(side + 1) % 4]);
        let len = (z1 - z0).norm();
        let pieces = (len / spacing).ceil().max(4.0) as usize;
        let dz = (z1 - z0) / pieces as f64;
        let mut sum = Complex64::new(0.0, 0.0);
        for k in 0..=pieces {
            let z = z0 + dz * k as f64;
            let (d, dd) = cf.eval(j, z);
            let ratio = dd / d;
            if d.norm() == 0.0 || !ratio.is_finite() {
                return None;
            }
            let w = if k == 0 || k == pieces { 0.5 } else { 1.0 };
            sum += ratio * w;
        }
        total += sum * dz;
    }
    Some(total)
}

/// Number of zeros of `Δ_j` inside `rect` by the argument principle.
///
/// The trapezoid spacing is halved until two successive windings agree and
/// sit within 0.1 of an integer; a contour that will not settle is nudged
/// outward a few times before giving up with [`Error::BoundaryZero`].
pub fn verify_count(j: u8, cf: &CharacteristicFunction, rect: &Rect) -> Result<i64> {
    if j != 1 && j != 2 {
        return Err(Error::Input(format!(
            "boundary index j must be 1 or 2, got {j}"
        )));
    }
    const RETRIES: usize = 3;
    const LEVELS: usize = 7;
    for retry in 0..=RETRIES {
        let r = rect.grow(0.0137 * retry as f64);
        let mut previous: Option<f64> = None;
        for level in 0..LEVELS {
            let spacing = 0.05 / (1 << level) as f64;
            let Some(integral) = log_derivative_integral(cf, j, &r, spacing) else {
                break;
            };
            let winding = (integral / Complex64::new(0.0, 2.0 * PI)).re;
            if let Some(prev) = previous {
                if (winding - prev).abs() < 0.05 && (winding - winding.round()).abs() < 0.1 {
                    return Ok(winding.round() as i64);
                }
            }
            previous = Some(winding);
        }
    }
    Err(Error::BoundaryZero {
        rect: rect.to_string(),
        retries: RETRIES,
    })
}

fn newton(
    cf: &CharacteristicFunction,
    j: u8,
    n: i64,
    seed: Complex64,
    start: Complex64,
) -> Result<Complex64> {
    let mut z = start;
    for _ in 0..MAX_NEWTON {
        let (d, dd) = cf.eval(j, z);
        if d.norm() == 0.0 {
            return Ok(z);
        }
        let step = d / dd;
        if !step.is_finite() {
            break;
        }
        z -= step;
        if (z - seed).norm() >= SEARCH_RADIUS {
            return Err(Error::OutOfBox {
                j,
                n,
                re: z.re,
                im: z.im,
            });
        }
        if d.norm() < RESIDUAL_TOL && step.norm() < STEP_TOL {
            return Ok(z);
        }
    }
    Err(Error::NoConvergence {
        j,
        n,
        iterations: MAX_NEWTON,
        last_re: z.re,
        last_im: z.im,
    })
}

/// Zero of `Δ_j` within distance 1/2 of `n − (j−1)/2`.
///
/// Newton from the lattice point first; on failure the disk is scanned on a
/// coarse grid and Newton restarts from the smallest samples of `|Δ_j|`.
pub fn find_eigenvalue(j: u8, cf: &CharacteristicFunction, n: i64) -> Result<Complex64> {
    if j != 1 && j != 2 {
        return Err(Error::Input(format!(
            "boundary index j must be 1 or 2, got {j}"
        )));
    }
    let seed = Complex64::new(lattice_point(j, n), 0.0);
    let first = match newton(cf, j, n, seed, seed) {
        Ok(z) => return Ok(z),
        Err(e) => e,
    };

    const SCAN: i32 = 10;
    let mut samples: Vec<(f64, Complex64)> = Vec::new();
    for ix in -SCAN..=SCAN {
        for iy in -SCAN..=SCAN {
            let off = Complex64::new(ix as f64, iy as f64) * (0.45 / SCAN as f64);
            if off.norm() < 0.45 {
                let z = seed + off;
                samples.push((cf.delta(j, z).norm(), z));
            }
        }
    }
    samples.sort_by(|x, y| x.0.total_cmp(&y.0));
    for &(_, start) in samples.iter().take(4) {
        if let Ok(z) = newton(cf, j, n, seed, start) {
            return Ok(z);
        }
    }
    Err(first)
}

/// Outcome of [`compute_spectra`].
#[derive(Debug, Clone)]
pub struct SpectraResult {
    pub data: SpectralData,
    /// Unit boxes that did not hold exactly one zero reachable from the seed,
    /// as `(j, n, count)` (`None` when the contour could not be evaluated).
    pub irregular_boxes: Vec<(u8, i64, Option<i64>)>,
    pub diagnostics: [KappaDiagnostics; 2],
}

/// Residual summary for one spectrum.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KappaDiagnostics {
    pub j: u8,
    /// Every `|n| >= localized_from` satisfies `|κ_{n,j}| < 1/2`.
    pub localized_from: i64,
    /// `max |κ|` over `|n| < N/2`.
    pub inner_max: f64,
    /// `max |κ|` over `N/2 <= |n| <= N`.
    pub outer_max: f64,
    /// `Σ |κ|²` over the stored range.
    pub l2_sq: f64,
    /// Set when the outer residuals exceed the inner ones.
    pub decay_violated: bool,
}

impl KappaDiagnostics {
    pub fn of(spectrum: &Spectrum) -> Self {
        let n_max = spectrum.n_max() as f64;
        let mut inner: f64 = 0.0;
        let mut outer: f64 = 0.0;
        let mut localized_from = 0;
        for (n, k) in spectrum.kappas() {
            let abs = k.norm();
            if (n.abs() as f64) < n_max / 2.0 {
                inner = inner.max(abs);
            } else {
                outer = outer.max(abs);
            }
            if abs >= SEARCH_RADIUS {
                localized_from = localized_from.max(n.abs() + 1);
            }
        }
        Self {
            j: spectrum.j(),
            localized_from,
            inner_max: inner,
            outer_max: outer,
            l2_sq: spectrum.kappa_l2_sq(),
            decay_violated: outer > inner,
        }
    }
}

/// Newton without the seed disk, kept inside `bound`.
fn newton_in(
    cf: &CharacteristicFunction,
    j: u8,
    start: Complex64,
    bound: &Rect,
) -> Option<Complex64> {
    let mut z = start;
    for _ in 0..MAX_NEWTON {
        let (d, dd) = cf.eval(j, z);
        if d.norm() == 0.0 {
            return Some(z);
        }
        let step = d / dd;
        if !step.is_finite() {
            return None;
        }
        z -= step;
        if !bound.contains(z) {
            return None;
        }
        if d.norm() < RESIDUAL_TOL && step.norm() < STEP_TOL {
            return Some(z);
        }
    }
    None
}

/// All `count` zeros of `Δ_j` inside `rect`, with multiplicity, ordered by
/// real part and then imaginary part.
fn roots_in_rect(
    cf: &CharacteristicFunction,
    j: u8,
    rect: &Rect,
    count: usize,
    n: i64,
) -> Result<Vec<Complex64>> {
    const SPACING: f64 = 0.04;
    let nx = ((rect.re_hi - rect.re_lo) / SPACING).ceil() as usize;
    let ny = ((rect.im_hi - rect.im_lo) / SPACING).ceil() as usize;
    let point = |ix: usize, iy: usize| {
        Complex64::new(
            rect.re_lo + (rect.re_hi - rect.re_lo) * ix as f64 / nx as f64,
            rect.im_lo + (rect.im_hi - rect.im_lo) * iy as f64 / ny as f64,
        )
    };
    let mut table = vec![vec![0.0; ny + 1]; nx + 1];
    for (ix, col) in table.iter_mut().enumerate() {
        for (iy, v) in col.iter_mut().enumerate() {
            *v = cf.delta(j, point(ix, iy)).norm();
        }
    }
    let mut minima = Vec::new();
    for ix in 0..=nx {
        for iy in 0..=ny {
            let v = table[ix][iy];
            let mut is_min = true;
            for dx in -1i64..=1 {
                for dy in -1i64..=1 {
                    let (x, y) = (ix as i64 + dx, iy as i64 + dy);
                    if (dx, dy) == (0, 0) || x < 0 || y < 0 || x > nx as i64 || y > ny as i64 {
                        continue;
                    }
                    if table[x as usize][y as usize] < v {
                        is_min = false;
                    }
                }
            }
            if is_min {
                minima.push((v, point(ix, iy)));
            }
        }
    }
    minima.sort_by(|x, y| x.0.total_cmp(&y.0));
    let bound = rect.grow(0.05);
    let mut roots: Vec<Complex64> = Vec::new();
    for &(_, start) in &minima {
        if let Some(z) = newton_in(cf, j, start, &bound) {
            if rect.contains(z) && roots.iter().all(|r| (r - z).norm() > 1e-7) {
                roots.push(z);
            }
        }
    }
    let mut with_multiplicity = Vec::new();
    for &z in &roots {
        let gap = roots
            .iter()
            .filter(|&&r| r != z)
            .map(|r| (r - z).norm())
            .fold(0.02, f64::min);
        let r = 0.4 * gap;
        let m = verify_count(j, cf, &Rect::new(z.re - r, z.re + r, z.im - r, z.im + r))
            .unwrap_or(1)
            .max(1);
        for _ in 0..m {
            with_multiplicity.push(z);
        }
    }
    if with_multiplicity.len() != count {
        return Err(Error::Multiplicity {
            j,
            n,
            count: count as i64,
        });
    }
    // real parts equal to 1e-8 count as ties, broken by the imaginary part
    let key = |z: &Complex64| (z.re * 1e8).round();
    with_multiplicity.sort_by(|x, y| key(x).total_cmp(&key(y)).then(x.im.total_cmp(&y.im)));
    Ok(with_multiplicity)
}

/// Zeros for the index run `lo..=hi` of irregular boxes. The run is widened
/// (and the rectangle made taller) until the argument principle finds as
/// many zeros as indices; the zeros are then indexed in order of real part.
fn resolve_cluster(
    cf: &CharacteristicFunction,
    j: u8,
    mut lo: i64,
    mut hi: i64,
) -> Result<(i64, i64, Vec<Complex64>)> {
    const WIDENINGS: usize = 8;
    let mut half_height = 1.0;
    for _ in 0..WIDENINGS {
        let rect = Rect::new(
            lattice_point(j, lo) - 0.5,
            lattice_point(j, hi) + 0.5,
            -half_height,
            half_height,
        );
        if let Ok(count) = verify_count(j, cf, &rect) {
            if count == hi - lo + 1 {
                let roots = roots_in_rect(cf, j, &rect, count as usize, lo)?;
                return Ok((lo, hi, roots));
            }
        }
        lo -= 1;
        hi += 1;
        half_height += 0.5;
    }
    Err(Error::Multiplicity {
        j,
        n: lo,
        count: hi - lo + 1,
    })
}

/// Both truncated spectra for `|n| <= n_max`.
///
/// Each root is first sought by [`find_eigenvalue`] and certified on its
/// unit box. Boxes where that fails (no root, several roots, or a root
/// outside the seed disk) are recorded in `irregular_boxes`, grouped into
/// runs, and resolved jointly on a widened rectangle whose zeros are indexed
/// in order of real part.
pub fn compute_spectra_with(cf: &CharacteristicFunction, n_max: usize) -> Result<SpectraResult> {
    if n_max == 0 {
        return Err(Error::Input("truncation order N must be at least 1".into()));
    }
    let n = n_max as i64;
    let mut spectra = Vec::with_capacity(2);
    let mut irregular_boxes = Vec::new();
    for j in [1u8, 2] {
        let mut values: Vec<Option<Complex64>> = Vec::with_capacity(2 * n_max + 1);
        let mut irregular = Vec::new();
        for k in -n..=n {
            let count = verify_count(j, cf, &Rect::unit_box(j, k)).ok();
            let root = find_eigenvalue(j, cf, k).ok();
            if count != Some(1) || root.is_none() {
                irregular_boxes.push((j, k, count));
                irregular.push(k);
            }
            values.push(root);
        }
        let mut i = 0;
        let mut resolved_to = i64::MIN;
        while i < irregular.len() {
            let lo = irregular[i];
            let mut hi = lo;
            i += 1;
            while i < irregular.len() && irregular[i] == hi + 1 {
                hi += 1;
                i += 1;
            }
            if hi <= resolved_to {
                continue;
            }
            let (lo, hi, roots) = resolve_cluster(cf, j, lo.max(resolved_to + 1), hi)?;
            for (k, z) in (lo..=hi).zip(roots) {
                if k.abs() <= n {
                    values[(k + n) as usize] = Some(z);
                }
            }
            resolved_to = hi;
        }
        let values = values
            .into_iter()
            .zip(-n..=n)
            .map(|(v, k)| {
                v.ok_or(Error::NoConvergence {
                    j,
                    n: k,
                    iterations: MAX_NEWTON,
                    last_re: f64::NAN,
                    last_im: f64::NAN,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        spectra.push(Spectrum::new(j, values)?);
    }
    let s2 = spectra.pop().expect("two spectra");
    let s1 = spectra.pop().expect("two spectra");
    let diagnostics = [KappaDiagnostics::of(&s1), KappaDiagnostics::of(&s2)];
    Ok(SpectraResult {
        data: SpectralData::new(s1, s2)?,
        irregular_boxes,
        diagnostics,
    })
}

/// [`compute_spectra_with`] for a potential, with `aux_cells` cells for `v`.
pub fn compute_spectra(
    pot: &PotentialPair,
    n_max: usize,
    aux_cells: usize,
) -> Result<SpectraResult> {
    if n_max == 0 {
        return Err(Error::Input("truncation order N must be at least 1".into()));
    }
    let cf = CharacteristicFunction::from_potential(pot, aux_cells)?;
    compute_spectra_with(&cf, n_max)
}
