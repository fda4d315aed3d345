//! Characteristic functions `Δ₁, Δ₂` of the boundary value problems
//! `y₁(0) = 0, y_j(π) = 0` for `B y′ + Q(x) y(x−a) = λ y`.
//!
//! The production path goes through the transform densities `v₁, v₂` on
//! `[a−π, π−a]`:
//!
//! ```text
//! Δ₁(λ) = −sin λπ + ∫ v₁ sin λx dx + ∫ v₂ cos λx dx
//! Δ₂(λ) =  cos λπ + ∫ v₂ sin λx dx − ∫ v₁ cos λx dx
//! ```
//!
//! [`oracle`] rebuilds the same functions from the fundamental matrix and is
//! kept independent of this path for cross-validation.

pub mod oracle;
pub mod transform;

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::domain::{DelayParameter, PotentialPair};
use crate::error::{Error, Result};
use crate::grid::{trapezoid, PiecewiseFunction, SampledFunction, UniformGrid};

pub use oracle::{delta_oracle, fundamental_matrix, fundamental_matrix_at, FundamentalMatrix};
pub use transform::{exp_transform, piecewise_exp_transform};

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

/// Default number of cells for potential and auxiliary grids.
pub const DEFAULT_CELLS: usize = 2000;

/// Transform densities `v₁, v₂` on `[a−π, π−a]`, sampled on the three
/// pieces of [`aux_grids`]; `v` jumps at `π−2a`.
#[derive(Debug, Clone, PartialEq)]
pub struct AuxV {
    pub a: DelayParameter,
    pub v1: PiecewiseFunction,
    pub v2: PiecewiseFunction,
}

/// Exponential recombination `u₁, u₂` of `v` on `[a−π, π−a]`, on the same
/// pieces; `u` jumps at `±(π−2a)`.
#[derive(Debug, Clone, PartialEq)]
pub struct AuxU {
    pub a: DelayParameter,
    pub u1: PiecewiseFunction,
    pub u2: PiecewiseFunction,
}

/// Uniform grid on `[a−π, π−a]`.
pub fn aux_grid(a: DelayParameter, cells: usize) -> Result<UniformGrid> {
    UniformGrid::new(a.value() - PI, PI - a.value(), cells)
}

/// `[a−π, 2a−π]`, `[2a−π, π−2a]`, `[π−2a, π−a]` with about `cells` cells in
/// total at a common spacing. The outer pieces get equal counts, so the
/// reflection `x ↦ −x` maps nodes to nodes.
pub fn aux_grids(a: DelayParameter, cells: usize) -> Result<[UniformGrid; 3]> {
    let l = PI - a.value();
    let m = PI - 2.0 * a.value();
    let outer = ((cells as f64 * (l - m) / (2.0 * l)).round() as usize).max(2);
    let central = cells.saturating_sub(2 * outer).max(2);
    Ok([
        UniformGrid::new(-l, -m, outer)?,
        UniformGrid::new(-m, m, central)?,
        UniformGrid::new(m, l, outer)?,
    ])
}

/// Tabulates `v₁, v₂` on the pieces of [`aux_grids`].
///
/// On the outer pieces the densities are pure reflections of the
/// potentials; on the central piece the bilinear correction integral is
/// added, evaluated per node by trapezoid on the potential's spacing. The
/// central piece carries the limit from inside at `π−2a`.
pub fn compute_v(pot: &PotentialPair, cells: usize) -> Result<AuxV> {
    let a = pot.a().value();
    let grids = aux_grids(pot.a(), cells)?;
    let (q, p) = (pot.q(), pot.p());
    let h_pot = pot.grid().step();

    let density = |piece: usize, x: f64| -> (Complex64, Complex64) {
        let arg = 0.5 * (PI + a - x);
        let mut a1 = 0.5 * p.at(arg);
        let mut a2 = -0.5 * q.at(arg);
        if piece == 1 {
            let t0 = 0.5 * (PI + 2.0 * a - x);
            if t0 < PI {
                let cells = ((PI - t0) / h_pot).ceil().max(1.0) as usize;
                let shift = 0.5 * (x - PI);
                let sym = trapezoid(t0, PI, cells, |t| {
                    let s = t + shift;
                    q.at(t) * q.at(s) + p.at(t) * p.at(s)
                });
                let skew = trapezoid(t0, PI, cells, |t| {
                    let s = t + shift;
                    q.at(t) * p.at(s) - p.at(t) * q.at(s)
                });
                a1 -= 0.5 * sym;
                a2 += 0.5 * skew;
            }
        }
        (a1, a2)
    };
    let mut v1 = Vec::with_capacity(3);
    let mut v2 = Vec::with_capacity(3);
    for (i, g) in grids.iter().enumerate() {
        let (c1, c2): (Vec<_>, Vec<_>) = g.nodes().map(|x| density(i, x)).unzip();
        v1.push(SampledFunction::new(*g, c1)?);
        v2.push(SampledFunction::new(*g, c2)?);
    }
    Ok(AuxV {
        a: pot.a(),
        v1: PiecewiseFunction::new(v1)?,
        v2: PiecewiseFunction::new(v2)?,
    })
}

/// Applies `f(value at x, value at −x)` node by node on reflection-symmetric
/// pieces.
fn reflect_combine(
    f1: &PiecewiseFunction,
    f2: &PiecewiseFunction,
    f: impl Fn([Complex64; 2], [Complex64; 2]) -> (Complex64, Complex64),
) -> (PiecewiseFunction, PiecewiseFunction) {
    let n = f1.pieces().len();
    let mut out1 = Vec::with_capacity(n);
    let mut out2 = Vec::with_capacity(n);
    for i in 0..n {
        let (p1, p2) = (&f1.pieces()[i], &f2.pieces()[i]);
        let (r1, r2) = (&f1.pieces()[n - 1 - i], &f2.pieces()[n - 1 - i]);
        let m = p1.grid().cells();
        let (c1, c2): (Vec<_>, Vec<_>) = (0..=m)
            .map(|k| {
                f(
                    [p1.values()[k], p2.values()[k]],
                    [r1.values()[m - k], r2.values()[m - k]],
                )
            })
            .unzip();
        out1.push(SampledFunction::new(*p1.grid(), c1).expect("grid length preserved"));
        out2.push(SampledFunction::new(*p1.grid(), c2).expect("grid length preserved"));
    }
    (
        PiecewiseFunction::new(out1).expect("pieces stay contiguous"),
        PiecewiseFunction::new(out2).expect("pieces stay contiguous"),
    )
}

/// `u₁ = (v₁(x)−v₁(−x))/2i + (v₂(x)+v₂(−x))/2`,
/// `u₂ = (v₂(x)−v₂(−x))/2i − (v₁(x)+v₁(−x))/2`.
pub fn compute_u(v: &AuxV) -> AuxU {
    let (u1, u2) = reflect_combine(&v.v1, &v.v2, |[a1, a2], [b1, b2]| {
        (
            (a1 - b1) / (2.0 * I) + (a2 + b2) * 0.5,
            (a2 - b2) / (2.0 * I) - (a1 + b1) * 0.5,
        )
    });
    AuxU { a: v.a, u1, u2 }
}

impl AuxU {
    /// Algebraic inverse of [`compute_u`].
    pub fn to_v(&self) -> AuxV {
        let (v1, v2) = reflect_combine(&self.u1, &self.u2, |[a1, a2], [b1, b2]| {
            let plus = a1 + I * a2; // (u₁+iu₂)(x)
            let minus = b1 - I * b2; // (u₁−iu₂)(−x)
            ((minus - plus) / (2.0 * I), (plus + minus) * 0.5)
        });
        AuxV { a: self.a, v1, v2 }
    }

    /// `(u₁, u₂)` at `y`, taking at `±(π−2a)` the limit from `|y| > π−2a`.
    pub fn outer_at(&self, y: f64) -> (Complex64, Complex64) {
        if y >= 0.0 {
            (self.u1.at_right(y), self.u2.at_right(y))
        } else {
            (self.u1.at(y), self.u2.at(y))
        }
    }
}

fn check_index(j: u8) -> Result<()> {
    if j == 1 || j == 2 {
        Ok(())
    } else {
        Err(Error::Input(format!(
            "boundary index j must be 1 or 2, got {j}"
        )))
    }
}

/// Sine and cosine transforms of `f` at `λ` with their `λ`-derivatives:
/// `(∫f sin, ∫f cos, d/dλ ∫f sin, d/dλ ∫f cos)`.
fn sin_cos_transforms(f: &PiecewiseFunction, lambda: Complex64) -> [Complex64; 4] {
    let (ep, dp) = piecewise_exp_transform(f, lambda);
    let (em, dm) = piecewise_exp_transform(f, -lambda);
    [
        (ep - em) / (2.0 * I),
        (ep + em) * 0.5,
        (dp + dm) / (2.0 * I),
        (dp - dm) * 0.5,
    ]
}

/// `Δ_j(λ)` from the transform densities.
pub fn delta_closed(j: u8, v: &AuxV, lambda: Complex64) -> Result<Complex64> {
    check_index(j)?;
    let [s1, c1, _, _] = sin_cos_transforms(&v.v1, lambda);
    let [s2, c2, _, _] = sin_cos_transforms(&v.v2, lambda);
    let lp = lambda * PI;
    Ok(if j == 1 {
        -lp.sin() + s1 + c2
    } else {
        lp.cos() + s2 - c1
    })
}

/// `dΔ_j/dλ` by differentiation under the integral sign.
pub fn delta_derivative(j: u8, v: &AuxV, lambda: Complex64) -> Result<Complex64> {
    check_index(j)?;
    let [_, _, ds1, dc1] = sin_cos_transforms(&v.v1, lambda);
    let [_, _, ds2, dc2] = sin_cos_transforms(&v.v2, lambda);
    let lp = lambda * PI;
    Ok(if j == 1 {
        -PI * lp.cos() + ds1 + dc2
    } else {
        -PI * lp.sin() + ds2 - dc1
    })
}

/// Fast evaluator of `Δ_j` and `Δ_j′` through `Δ_j(λ) = Δ_j⁰(λ) + ∫ u_j e^{iλx}`,
/// one exponential transform per evaluation.
#[derive(Debug, Clone)]
pub struct CharacteristicFunction {
    v: AuxV,
    u: AuxU,
}

impl CharacteristicFunction {
    pub fn new(v: AuxV) -> Self {
        let u = compute_u(&v);
        Self { v, u }
    }

    pub fn from_potential(pot: &PotentialPair, cells: usize) -> Result<Self> {
        Ok(Self::new(compute_v(pot, cells)?))
    }

    pub fn aux_v(&self) -> &AuxV {
        &self.v
    }

    pub fn aux_u(&self) -> &AuxU {
        &self.u
    }

    pub fn a(&self) -> DelayParameter {
        self.v.a
    }

    /// `(Δ_j(λ), Δ_j′(λ))`. Panics unless `j ∈ {1, 2}`.
    pub fn eval(&self, j: u8, lambda: Complex64) -> (Complex64, Complex64) {
        let lp = lambda * PI;
        match j {
            1 => {
                let (e, d) = piecewise_exp_transform(&self.u.u1, lambda);
                (-lp.sin() + e, -PI * lp.cos() + d)
            }
            2 => {
                let (e, d) = piecewise_exp_transform(&self.u.u2, lambda);
                (lp.cos() + e, -PI * lp.sin() + d)
            }
            _ => panic!("boundary index j must be 1 or 2, got {j}"),
        }
    }

    pub fn delta(&self, j: u8, lambda: Complex64) -> Complex64 {
        self.eval(j, lambda).0
    }

    /// `Δ_j` sampled at the given points.
    pub fn table(&self, j: u8, points: &[Complex64]) -> Result<CharacteristicTable> {
        check_index(j)?;
        let values = points.iter().map(|&l| self.delta(j, l)).collect();
        CharacteristicTable::new(j, points.to_vec(), values)
    }

    /// `Δ_j(n)` at the integers `|n| <= n_max`.
    pub fn integer_table(&self, j: u8, n_max: usize) -> Result<CharacteristicTable> {
        self.table(j, &integer_points(n_max))
    }
}

/// Integers `−N..=N` as complex evaluation points.
pub fn integer_points(n_max: usize) -> Vec<Complex64> {
    let n = n_max as i64;
    (-n..=n).map(|k| Complex64::new(k as f64, 0.0)).collect()
}

/// Values `Δ_j(λ)` at a list of evaluation points.
#[derive(Debug, Clone, PartialEq)]
pub struct CharacteristicTable {
    pub j: u8,
    pub points: Vec<Complex64>,
    pub values: Vec<Complex64>,
}

impl CharacteristicTable {
    pub fn new(j: u8, points: Vec<Complex64>, values: Vec<Complex64>) -> Result<Self> {
        check_index(j)?;
        if points.len() != values.len() {
            return Err(Error::Input(format!(
                "table has {} points but {} values",
                points.len(),
                values.len()
            )));
        }
        Ok(Self { j, points, values })
    }

    /// `N` when the points are exactly the integers `−N..=N`.
    pub fn integer_order(&self) -> Option<usize> {
        let len = self.points.len();
        if len.is_multiple_of(2) {
            return None;
        }
        let n = (len / 2) as i64;
        let ok = self
            .points
            .iter()
            .zip(-n..=n)
            .all(|(p, k)| p.re == k as f64 && p.im == 0.0);
        ok.then_some(n as usize)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::potentials::TestPotential;

    fn p1(cells: usize) -> PotentialPair {
        TestPotential::P1
            .sample(DelayParameter::new(1.1).unwrap(), cells)
            .unwrap()
    }

    #[test]
    fn zero_potential_gives_zero_densities() {
        let a = DelayParameter::new(1.1).unwrap();
        let v = compute_v(&PotentialPair::zero(a, 200).unwrap(), 200).unwrap();
        assert_eq!(v.v1.max_abs(), 0.0);
        assert_eq!(v.v2.max_abs(), 0.0);
        let u = compute_u(&v);
        assert_eq!(u.u1.max_abs(), 0.0);
        assert_eq!(u.u2.max_abs(), 0.0);
    }

    #[test]
    fn outer_branch_is_integral_free() {
        let a = DelayParameter::new(1.1).unwrap();
        let pot = PotentialPair::from_fns(
            a,
            2000,
            |_| Complex64::new(0.0, 0.0),
            |_| Complex64::new(1.0, 0.0),
        )
        .unwrap();
        let v = compute_v(&pot, 2000).unwrap();
        let x = PI - 1.1 - 0.01;
        assert!((v.v1.at(x) - 0.5).norm() < 1e-14);
        assert!(v.v2.at(x).norm() < 1e-14);
    }

    #[test]
    fn outer_branch_matches_reflected_potentials_at_nodes() {
        let pot = p1(1000);
        let a = 1.1;
        let v = compute_v(&pot, 1000).unwrap();
        for ((piece, x, v1), (_, _, v2)) in v.v1.samples().zip(v.v2.samples()) {
            if piece != 1 {
                let arg = 0.5 * (PI + a - x);
                assert!((v1 - 0.5 * pot.p().at(arg)).norm() < 1e-15);
                assert!((v2 + 0.5 * pot.q().at(arg)).norm() < 1e-15);
            }
        }
    }

    #[test]
    fn v_jumps_at_the_right_inner_break_only() {
        let a = 1.1;
        let v = compute_v(&p1(2000), 2000).unwrap();
        let m = PI - 2.0 * a;
        assert!((v.v1.at(-m) - v.v1.at_right(-m)).norm() < 1e-12);
        assert!((v.v1.at(m) - v.v1.at_right(m)).norm() > 1e-3);
    }

    #[test]
    fn central_value_matches_fine_quadrature() {
        // v₁(0) = ½p((π+a)/2) − ½∫_{(π+2a)/2}^{π} [q(t)q(t−π/2) + p(t)p(t−π/2)] dt
        let a = 1.1;
        let v = compute_v(&p1(2000), 2000).unwrap();
        let t0 = 0.5 * (PI + 2.0 * a);
        let n = 200_000;
        let h = (PI - t0) / n as f64;
        let f = |t: f64| {
            let s = t - PI / 2.0;
            t.sin() * s.sin() + (2.0 * t).cos() * (2.0 * s).cos()
        };
        let g = |t: f64| {
            let s = t - PI / 2.0;
            t.sin() * (2.0 * s).cos() - (2.0 * t).cos() * s.sin()
        };
        let simpson = |f: &dyn Fn(f64) -> f64| {
            let mut s = f(t0) + f(PI);
            for k in 1..n {
                s += f(t0 + k as f64 * h) * if k % 2 == 1 { 4.0 } else { 2.0 };
            }
            s * h / 3.0
        };
        let v1 = 0.5 * (2.0 * 0.5 * (PI + a)).cos() - 0.5 * simpson(&f);
        let v2 = -0.5 * (0.5 * (PI + a)).sin() + 0.5 * simpson(&g);
        assert!(
            (v.v1.at(0.0) - v1).norm() < 1e-6,
            "{} vs {v1}",
            v.v1.at(0.0)
        );
        assert!(
            (v.v2.at(0.0) - v2).norm() < 1e-6,
            "{} vs {v2}",
            v.v2.at(0.0)
        );
    }

    #[test]
    fn u_of_even_real_v1_is_minus_v1() {
        let a = DelayParameter::new(1.1).unwrap();
        let grids = aux_grids(a, 100).unwrap();
        let v = AuxV {
            a,
            v1: PiecewiseFunction::from_fn(&grids, |_, x: f64| Complex64::new((x * x).cos(), 0.0))
                .unwrap(),
            v2: PiecewiseFunction::zeros(&grids).unwrap(),
        };
        let u = compute_u(&v);
        assert!(u.u1.max_abs() < 1e-15);
        for ((_, _, u2), (_, _, v1)) in u.u2.samples().zip(v.v1.samples()) {
            assert!((u2 + v1).norm() < 1e-15);
        }
    }

    #[test]
    fn zero_potential_delta_is_unperturbed() {
        let a = DelayParameter::new(1.1).unwrap();
        let v = compute_v(&PotentialPair::zero(a, 100).unwrap(), 100).unwrap();
        let l = Complex64::new(7.0, 0.0);
        assert_eq!(delta_closed(1, &v, l).unwrap(), -(l * PI).sin());
        assert_eq!(delta_closed(2, &v, l).unwrap(), (l * PI).cos());
        assert!(delta_closed(1, &v, l).unwrap().norm() < 1e-14);
        assert!((delta_closed(2, &v, l).unwrap() + 1.0).norm() < 1e-14);
        let z = Complex64::new(0.0, 0.0);
        assert!((delta_derivative(1, &v, z).unwrap() + PI).norm() < 1e-15);
        assert!((delta_derivative(2, &v, Complex64::new(0.5, 0.0)).unwrap() + PI).norm() < 1e-14);
        assert!(delta_closed(3, &v, l).is_err());
    }

    #[test]
    fn derivative_matches_central_difference() {
        let v = compute_v(&p1(2000), 2000).unwrap();
        let l = Complex64::new(2.2, 0.0);
        let eps = 1e-5;
        for j in [1, 2] {
            let fd = (delta_closed(j, &v, l + eps).unwrap()
                - delta_closed(j, &v, l - eps).unwrap())
                / (2.0 * eps);
            let d = delta_derivative(j, &v, l).unwrap();
            assert!((d - fd).norm() < 1e-6, "j={j}: {d} vs {fd}");
        }
    }

    #[test]
    fn fast_evaluator_matches_sine_cosine_form() {
        let pot = TestPotential::P2
            .sample(DelayParameter::new(1.2).unwrap(), 800)
            .unwrap();
        let cf = CharacteristicFunction::from_potential(&pot, 800).unwrap();
        for &l in &[Complex64::new(-5.3, 0.2), Complex64::new(13.1, -0.7)] {
            for j in [1, 2] {
                let (d, dd) = cf.eval(j, l);
                assert!((d - delta_closed(j, cf.aux_v(), l).unwrap()).norm() < 1e-12);
                assert!((dd - delta_derivative(j, cf.aux_v(), l).unwrap()).norm() < 1e-11);
            }
        }
    }

    #[test]
    fn real_potentials_give_conjugate_symmetric_delta() {
        let cf = CharacteristicFunction::from_potential(&p1(500), 500).unwrap();
        let l = Complex64::new(3.7, 0.6);
        for j in [1, 2] {
            assert!((cf.delta(j, l.conj()) - cf.delta(j, l).conj()).norm() < 1e-12);
        }
    }

    #[test]
    fn integer_tables_are_recognised() {
        let cf = CharacteristicFunction::from_potential(&p1(200), 200).unwrap();
        assert_eq!(cf.integer_table(1, 4).unwrap().integer_order(), Some(4));
        let t = cf.table(2, &[Complex64::new(0.5, 0.0)]).unwrap();
        assert_eq!(t.integer_order(), None);
    }
}
