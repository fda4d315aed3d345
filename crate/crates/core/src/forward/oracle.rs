//! Fundamental-matrix route to `Δ_j`, used to cross-check the transform path.
//!
//! For `a ∈ [π/3, π/2)` the solution with `Y(0) = I` splits as
//! `Y = Y₀ + Y₁ + Y₂` with
//!
//! ```text
//! Y₀(x) = [[cos λx, −sin λx], [sin λx, cos λx]]
//! Y₁(x) = B ∫_a^x  Y₀(x−t) Q(t) Y₀(t−a) dt
//! Y₂(x) = B ∫_2a^x Y₀(x−t) Q(t) Y₁(t−a) dt
//! ```
//!
//! Every integral is split at the nodes of the potential grid (and, for
//! `Y₂`, at the shifted nodes where `Y₁(t−a)` has kinks) and integrated by
//! five-point Gauss–Legendre on each piece.

use num_complex::Complex64;

use crate::domain::PotentialPair;
use crate::error::{Error, Result};

pub type Mat2 = [[Complex64; 2]; 2];

const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };
const ONE: Complex64 = Complex64 { re: 1.0, im: 0.0 };

/// `B = [[0, 1], [−1, 0]]`.
pub const B: Mat2 = [[ZERO, ONE], [Complex64 { re: -1.0, im: 0.0 }, ZERO]];

pub const IDENTITY: Mat2 = [[ONE, ZERO], [ZERO, ONE]];

const GL_NODES: [f64; 5] = [
    -0.906_179_845_938_664,
    -0.538_469_310_105_683_1,
    0.0,
    0.538_469_310_105_683_1,
    0.906_179_845_938_664,
];
const GL_WEIGHTS: [f64; 5] = [
    0.236_926_885_056_189_1,
    0.478_628_670_499_366_5,
    128.0 / 225.0,
    0.478_628_670_499_366_5,
    0.236_926_885_056_189_1,
];

pub fn mat_mul(x: &Mat2, y: &Mat2) -> Mat2 {
    [
        [
            x[0][0] * y[0][0] + x[0][1] * y[1][0],
            x[0][0] * y[0][1] + x[0][1] * y[1][1],
        ],
        [
            x[1][0] * y[0][0] + x[1][1] * y[1][0],
            x[1][0] * y[0][1] + x[1][1] * y[1][1],
        ],
    ]
}

fn mat_add(x: &Mat2, y: &Mat2) -> Mat2 {
    [
        [x[0][0] + y[0][0], x[0][1] + y[0][1]],
        [x[1][0] + y[1][0], x[1][1] + y[1][1]],
    ]
}

fn mat_scale(x: &Mat2, s: f64) -> Mat2 {
    [[x[0][0] * s, x[0][1] * s], [x[1][0] * s, x[1][1] * s]]
}

pub fn det(x: &Mat2) -> Complex64 {
    x[0][0] * x[1][1] - x[0][1] * x[1][0]
}

/// Rotation `Y₀(x, λ)`.
pub fn y0(x: f64, lambda: Complex64) -> Mat2 {
    let (s, c) = ((lambda * x).sin(), (lambda * x).cos());
    [[c, -s], [s, c]]
}

/// `Y(x, λ)` together with its three terms.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FundamentalMatrix {
    pub x: f64,
    pub lambda: Complex64,
    pub y: Mat2,
    pub y0: Mat2,
    pub y1: Mat2,
    pub y2: Mat2,
}

impl FundamentalMatrix {
    /// Entry `y_{r,c}` with one-based indices.
    pub fn entry(&self, r: usize, c: usize) -> Complex64 {
        self.y[r - 1][c - 1]
    }
}

/// Gauss–Legendre integral of a matrix function on `[lo, hi]`.
fn gauss(lo: f64, hi: f64, f: &impl Fn(f64) -> Mat2) -> Mat2 {
    let half = 0.5 * (hi - lo);
    let mid = 0.5 * (hi + lo);
    let mut acc = [[ZERO; 2]; 2];
    for (node, w) in GL_NODES.iter().zip(GL_WEIGHTS) {
        acc = mat_add(&acc, &mat_scale(&f(mid + half * node), w * half));
    }
    acc
}

struct Oracle<'a> {
    pot: &'a PotentialPair,
    lambda: Complex64,
    a: f64,
    h: f64,
    /// `C(a + k h) = ∫_a^{a+kh} Y₀(−r) Q(r) Y₀(r−a) dr`
    cumulative: Vec<Mat2>,
}

impl<'a> Oracle<'a> {
    fn new(pot: &'a PotentialPair, lambda: Complex64) -> Self {
        let grid = *pot.grid();
        let a = pot.a().value();
        let mut this = Self {
            pot,
            lambda,
            a,
            h: grid.step(),
            cumulative: Vec::with_capacity(grid.len()),
        };
        let mut acc = [[ZERO; 2]; 2];
        let mut cumulative = vec![acc];
        for k in 0..grid.cells() {
            let piece = gauss(grid.node(k), grid.node(k + 1), &|r| this.first_kernel(r));
            acc = mat_add(&acc, &piece);
            cumulative.push(acc);
        }
        this.cumulative = cumulative;
        this
    }

    fn first_kernel(&self, r: f64) -> Mat2 {
        let q = self.pot.matrix_at(r);
        mat_mul(
            &mat_mul(&y0(-r, self.lambda), &q),
            &y0(r - self.a, self.lambda),
        )
    }

    /// `C(s)` for `s ∈ [a, π]`.
    fn c(&self, s: f64) -> Mat2 {
        if s <= self.a {
            return [[ZERO; 2]; 2];
        }
        let k = (((s - self.a) / self.h).floor() as usize).min(self.cumulative.len() - 1);
        let start = self.pot.grid().node(k);
        if s <= start {
            return self.cumulative[k];
        }
        mat_add(
            &self.cumulative[k],
            &gauss(start, s, &|r| self.first_kernel(r)),
        )
    }

    /// `Y₁(s) = B Y₀(s) C(s)`, using `Y₀(s−r) = Y₀(s) Y₀(−r)`.
    fn y1(&self, s: f64) -> Mat2 {
        mat_mul(&B, &mat_mul(&y0(s, self.lambda), &self.c(s)))
    }

    fn second_kernel(&self, t: f64) -> Mat2 {
        let q = self.pot.matrix_at(t);
        mat_mul(&mat_mul(&y0(-t, self.lambda), &q), &self.y1(t - self.a))
    }

    /// `∫_{2a}^{x} Y₀(−t) Q(t) Y₁(t−a) dt` split at potential nodes and
    /// their shifts by `a`.
    fn second_integral(&self, x: f64) -> Mat2 {
        let lo = 2.0 * self.a;
        if x <= lo {
            return [[ZERO; 2]; 2];
        }
        let grid = self.pot.grid();
        let mut cuts: Vec<f64> = grid
            .nodes()
            .flat_map(|t| [t, t + self.a])
            .filter(|&t| t > lo && t < x)
            .collect();
        cuts.push(lo);
        cuts.push(x);
        cuts.sort_by(f64::total_cmp);
        cuts.dedup_by(|u, v| (*u - *v).abs() < 1e-14);
        cuts.windows(2).fold([[ZERO; 2]; 2], |acc, w| {
            mat_add(&acc, &gauss(w[0], w[1], &|t| self.second_kernel(t)))
        })
    }
}

/// `Y(x, λ)` for `x ∈ [0, π]`.
pub fn fundamental_matrix_at(
    pot: &PotentialPair,
    x: f64,
    lambda: Complex64,
) -> Result<FundamentalMatrix> {
    if !(0.0..=std::f64::consts::PI + 1e-12).contains(&x) {
        return Err(Error::Range(format!("x = {x} outside [0, π]")));
    }
    let y_0 = y0(x, lambda);
    let zero = [[ZERO; 2]; 2];
    let (y_1, y_2) = if x <= pot.a().value() {
        (zero, zero)
    } else {
        let oracle = Oracle::new(pot, lambda);
        let rot = mat_mul(&B, &y0(x, lambda));
        let y_1 = mat_mul(&rot, &oracle.c(x));
        let y_2 = mat_mul(&rot, &oracle.second_integral(x));
        (y_1, y_2)
    };
    Ok(FundamentalMatrix {
        x,
        lambda,
        y: mat_add(&mat_add(&y_0, &y_1), &y_2),
        y0: y_0,
        y1: y_1,
        y2: y_2,
    })
}

/// `Y(π, λ)`.
pub fn fundamental_matrix(pot: &PotentialPair, lambda: Complex64) -> FundamentalMatrix {
    fundamental_matrix_at(pot, std::f64::consts::PI, lambda).expect("π is in range")
}

/// `Δ_j(λ) = y_{j,2}(π, λ)`.
pub fn delta_oracle(j: u8, pot: &PotentialPair, lambda: Complex64) -> Result<Complex64> {
    match j {
        1 | 2 => Ok(fundamental_matrix(pot, lambda).entry(j as usize, 2)),
        _ => Err(Error::Input(format!(
            "boundary index j must be 1 or 2, got {j}"
        ))),
    }
}
