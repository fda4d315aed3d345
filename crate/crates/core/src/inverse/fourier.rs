//! `u₁, u₂` from the integer samples of `Δ₁, Δ₂`:
//!
//! ```text
//! u₁(x) = (1/2π) Σ Δ₁(n) e^{−inx}
//! u₂(x) = (1/2π) Σ (Δ₂(n) − (−1)ⁿ) e^{−inx}
//! ```
//!
//! Summation is direct and runs in increasing `n` at every node, so equal
//! inputs give bitwise-equal outputs.
//!
//! `u` jumps at the ends `±(π−a)` of its support and at `±(π−2a)`, so the
//! plain partial sums ring there and converge to the midpoint at the jump.
//! [`FourierSeries::with_jumps`] removes this: the jumps and slope jumps at
//! the known locations are fitted by least squares to the upper half of the
//! coefficients, only the remainder is summed, and the exact step and kink
//! functions are added back.

use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::domain::DelayParameter;
use crate::error::{Error, Result};
use crate::forward::{AuxU, CharacteristicTable};
use crate::grid::{PiecewiseFunction, SampledFunction, UniformGrid};

fn partial_sum(coeffs: &[Complex64], n_max: i64, x: f64) -> Complex64 {
    let mut acc = Complex64::new(0.0, 0.0);
    for (c, n) in coeffs.iter().zip(-n_max..=n_max) {
        acc += c * Complex64::from_polar(1.0, -(n as f64) * x);
    }
    acc / (2.0 * PI)
}

/// Plain partial sums at the nodes of `grids` (the pieces of `u`).
pub fn synthesize_u(
    t1: &CharacteristicTable,
    t2: &CharacteristicTable,
    grids: &[UniformGrid],
    a: DelayParameter,
) -> Result<AuxU> {
    FourierSeries::plain(t1, t2)?.sample(grids, a)
}

/// Fourier coefficients of `u₁, u₂` checked for shape.
fn coefficients(
    t1: &CharacteristicTable,
    t2: &CharacteristicTable,
) -> Result<(usize, Vec<Complex64>, Vec<Complex64>)> {
    if t1.j != 1 || t2.j != 2 {
        return Err(Error::Input(
            "expected the Δ₁ table first and the Δ₂ table second".into(),
        ));
    }
    let n1 = t1
        .integer_order()
        .ok_or_else(|| Error::Input("Δ₁ table is not sampled at the integers −N..N".into()))?;
    let n2 = t2
        .integer_order()
        .ok_or_else(|| Error::Input("Δ₂ table is not sampled at the integers −N..N".into()))?;
    if n1 != n2 {
        return Err(Error::Input(format!(
            "tables truncated at different orders: {n1} and {n2}"
        )));
    }
    let n = n1 as i64;
    let c1 = &t1.values;
    let c2: Vec<Complex64> = t2
        .values
        .iter()
        .zip(-n..=n)
        .map(|(d, k)| d - if k.rem_euclid(2) == 0 { 1.0 } else { -1.0 })
        .collect();
    Ok((n1, c1.clone(), c2))
}

/// `−e^{iλξ}/(iλ)` for `order = 0` and `e^{iλξ}/(iλ)²` for `order = 1`: the
/// leading terms of `∫ f e^{iλx} dx` from a unit jump and a unit slope jump
/// of `f` at `ξ`.
pub(crate) fn jump_basis(lambda: Complex64, xi: f64, order: usize) -> Complex64 {
    let il = Complex64::new(0.0, 1.0) * lambda;
    let e = (il * xi).exp();
    if order == 0 {
        -e / il
    } else {
        e / (il * il)
    }
}

/// `Σ J_k basis₀(ξ_k) + Σ D_k basis₁(ξ_k)` with `amps = [J…, D…]`.
pub(crate) fn jump_model(lambda: Complex64, xis: &[f64], amps: &[Complex64]) -> Complex64 {
    let k = xis.len();
    xis.iter()
        .enumerate()
        .map(|(i, &xi)| {
            amps[i] * jump_basis(lambda, xi, 0) + amps[i + k] * jump_basis(lambda, xi, 1)
        })
        .sum()
}

/// Least-squares amplitudes `[J…, D…]` of [`jump_model`] matching each of
/// `rhs` at `points`.
pub(crate) fn fit_jumps(
    points: &[Complex64],
    rhs: &[&[Complex64]],
    xis: &[f64],
) -> Result<Vec<Vec<Complex64>>> {
    let k = xis.len();
    let design = DMatrix::from_fn(points.len(), 2 * k, |r, c| {
        jump_basis(points[r], xis[c % k], c / k)
    });
    let svd = design.svd(true, true);
    rhs.iter()
        .map(|values| {
            let b = DVector::from_column_slice(values);
            svd.solve(&b, 1e-12)
                .map(|sol| sol.iter().copied().collect())
                .map_err(|e| Error::Input(format!("jump fit failed: {e}")))
        })
        .collect()
}

/// Jump of `u₁, u₂` and of their derivatives at `at`, right minus left.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Jump {
    pub at: f64,
    /// Side whose limit is returned when evaluating exactly at `at`.
    pub right_at_node: bool,
    pub size: [Complex64; 2],
    pub slope: [Complex64; 2],
}

/// `(1/2π) Σ_{n≠0} −e^{in(ξ−x)}/(in)`: unit step at `ξ` with zero mean.
/// Points within `1e-9` of `ξ` count as `ξ` itself.
fn unit_step(xi: f64, x: f64, right: bool) -> f64 {
    let t = if (xi - x).abs() < 1e-9 {
        if right {
            2.0 * PI
        } else {
            0.0
        }
    } else {
        (xi - x).rem_euclid(2.0 * PI)
    };
    -(PI - t) / (2.0 * PI)
}

/// `(1/2π) Σ_{n≠0} e^{in(ξ−x)}/(in)²`: unit slope jump at `ξ`, zero mean.
fn unit_kink(xi: f64, x: f64) -> f64 {
    let t = (xi - x).rem_euclid(2.0 * PI);
    -(PI * PI / 6.0 - PI * t / 2.0 + t * t / 4.0) / PI
}

/// Truncated Fourier series of `u₁, u₂`, optionally split into a summed
/// remainder plus closed-form step and kink functions.
#[derive(Debug, Clone, PartialEq)]
pub struct FourierSeries {
    pub n_max: usize,
    /// Coefficients of the summed part, for `n = −N..=N`.
    pub c1: Vec<Complex64>,
    pub c2: Vec<Complex64>,
    pub jumps: Vec<Jump>,
}

impl FourierSeries {
    pub fn plain(t1: &CharacteristicTable, t2: &CharacteristicTable) -> Result<Self> {
        let (n_max, c1, c2) = coefficients(t1, t2)?;
        Ok(Self {
            n_max,
            c1,
            c2,
            jumps: Vec::new(),
        })
    }

    /// Series with jumps fitted at `locations`, each given as
    /// `(position, take the right limit at the position)`.
    ///
    /// The fit uses `N/2 <= |n| <= N`; with fewer than two equations per
    /// unknown the plain series is returned.
    pub fn with_jumps(
        t1: &CharacteristicTable,
        t2: &CharacteristicTable,
        locations: &[(f64, bool)],
    ) -> Result<Self> {
        let (n_max, c1, c2) = coefficients(t1, t2)?;
        let n = n_max as i64;
        let band: Vec<i64> = (-n..=n).filter(|k| 2 * k.abs() >= n && *k != 0).collect();
        let unknowns = 2 * locations.len();
        if locations.is_empty() || band.len() < 2 * unknowns {
            return Ok(Self {
                n_max,
                c1,
                c2,
                jumps: Vec::new(),
            });
        }
        let xis: Vec<f64> = locations.iter().map(|l| l.0).collect();
        let points: Vec<Complex64> = band
            .iter()
            .map(|&k| Complex64::new(k as f64, 0.0))
            .collect();
        let pick = |c: &[Complex64]| -> Vec<Complex64> {
            band.iter().map(|&k| c[(k + n) as usize]).collect()
        };
        let fitted = fit_jumps(&points, &[&pick(&c1), &pick(&c2)], &xis)?;
        let jumps: Vec<Jump> = locations
            .iter()
            .enumerate()
            .map(|(i, &(at, right_at_node))| Jump {
                at,
                right_at_node,
                size: [fitted[0][i], fitted[1][i]],
                slope: [
                    fitted[0][i + locations.len()],
                    fitted[1][i + locations.len()],
                ],
            })
            .collect();
        let subtract = |coeffs: &[Complex64], which: usize| -> Vec<Complex64> {
            coeffs
                .iter()
                .zip(-n..=n)
                .map(|(&c, k)| {
                    if k == 0 {
                        c
                    } else {
                        c - jump_model(Complex64::new(k as f64, 0.0), &xis, &fitted[which])
                    }
                })
                .collect()
        };
        let r1 = subtract(&c1, 0);
        let r2 = subtract(&c2, 1);
        Ok(Self {
            n_max,
            c1: r1,
            c2: r2,
            jumps,
        })
    }

    /// `(u₁(x), u₂(x))`; exactly at a jump the limit chosen by the jump's
    /// `right_at_node` is returned.
    pub fn eval(&self, x: f64) -> (Complex64, Complex64) {
        self.eval_sided(x, None)
    }

    /// As [`FourierSeries::eval`], with `side = Some(right)` overriding the
    /// limit taken at a jump.
    pub fn eval_sided(&self, x: f64, side: Option<bool>) -> (Complex64, Complex64) {
        let n = self.n_max as i64;
        let mut u1 = partial_sum(&self.c1, n, x);
        let mut u2 = partial_sum(&self.c2, n, x);
        for j in &self.jumps {
            let step = unit_step(j.at, x, side.unwrap_or(j.right_at_node));
            let kink = unit_kink(j.at, x);
            u1 += j.size[0] * step + j.slope[0] * kink;
            u2 += j.size[1] * step + j.slope[1] * kink;
        }
        (u1, u2)
    }

    /// Samples on consecutive pieces; the first node of a piece takes the
    /// right limit and the last node the left limit.
    pub fn sample(&self, grids: &[UniformGrid], a: DelayParameter) -> Result<AuxU> {
        let mut u1 = Vec::with_capacity(grids.len());
        let mut u2 = Vec::with_capacity(grids.len());
        for g in grids {
            let m = g.cells();
            let (c1, c2): (Vec<_>, Vec<_>) = g
                .nodes()
                .enumerate()
                .map(|(k, x)| {
                    let side = match k {
                        0 => Some(true),
                        k if k == m => Some(false),
                        _ => None,
                    };
                    self.eval_sided(x, side)
                })
                .unzip();
            u1.push(SampledFunction::new(*g, c1)?);
            u2.push(SampledFunction::new(*g, c2)?);
        }
        Ok(AuxU {
            a,
            u1: PiecewiseFunction::new(u1)?,
            u2: PiecewiseFunction::new(u2)?,
        })
    }
}

/// Discontinuities of `u` for delay `a`: the support ends `±(π−a)`, limits
/// taken from inside, and `±(π−2a)`, limits taken from outside.
pub fn jump_locations(a: DelayParameter) -> [(f64, bool); 4] {
    let l = PI - a.value();
    let m = PI - 2.0 * a.value();
    [(-l, true), (-m, false), (m, true), (l, false)]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::forward::{aux_grids, integer_points};

    fn tables(n: usize) -> (CharacteristicTable, CharacteristicTable) {
        let pts = integer_points(n);
        let d1 = vec![Complex64::new(0.0, 0.0); pts.len()];
        let d2 = pts
            .iter()
            .map(|p| Complex64::new((p.re * PI).cos(), 0.0))
            .collect();
        (
            CharacteristicTable::new(1, pts.clone(), d1).unwrap(),
            CharacteristicTable::new(2, pts, d2).unwrap(),
        )
    }

    #[test]
    fn unperturbed_tables_give_zero() {
        let a = DelayParameter::new(1.1).unwrap();
        let (t1, t2) = tables(10);
        let u = synthesize_u(&t1, &t2, &aux_grids(a, 100).unwrap(), a).unwrap();
        assert!(u.u1.max_abs() < 1e-15);
        assert!(u.u2.max_abs() < 1e-14);
    }

    #[test]
    fn single_mode() {
        let a = DelayParameter::new(1.1).unwrap();
        let (mut t1, t2) = tables(5);
        t1.values[5 + 3] = Complex64::new(2.0 * PI, 0.0);
        let u = synthesize_u(&t1, &t2, &aux_grids(a, 64).unwrap(), a).unwrap();
        for (_, x, v) in u.u1.samples() {
            assert!((v - Complex64::from_polar(1.0, -3.0 * x)).norm() < 1e-14);
        }
    }

    #[test]
    fn mismatched_orders_are_rejected() {
        let a = DelayParameter::new(1.1).unwrap();
        let (t1, _) = tables(5);
        let (_, t2) = tables(6);
        assert!(matches!(
            synthesize_u(&t1, &t2, &aux_grids(a, 64).unwrap(), a),
            Err(Error::Input(_))
        ));
    }
}
