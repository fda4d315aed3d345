//! Exact integrals of a piecewise-linear interpolant against `exp(iλx)`.
//!
//! Plain trapezoid on `v(x) e^{iλx}` loses accuracy like `(λh)²`; integrating
//! the linear interpolant of `v` exactly against the exponential keeps the
//! error at the `O(h²)` interpolation level for every `λ`.

use num_complex::Complex64;

use crate::grid::{PiecewiseFunction, SampledFunction};

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

/// Phases are recomputed exactly every `RESYNC` nodes to bound recurrence drift.
const RESYNC: usize = 64;

/// `∫_0^1 σ^j e^{iθσ} dσ` for `j = 0, 1, 2`.
fn unit_moments(theta: Complex64) -> [Complex64; 3] {
    if theta.norm() < 1.0 {
        let it = I * theta;
        let mut out = [Complex64::new(0.0, 0.0); 3];
        let mut term = Complex64::new(1.0, 0.0); // (iθ)^n / n!
        for n in 0..30 {
            for (j, o) in out.iter_mut().enumerate() {
                *o += term / (n + j + 1) as f64;
            }
            term = term * it / (n + 1) as f64;
            if term.norm() < 1e-18 {
                break;
            }
        }
        out
    } else {
        let it = I * theta;
        let e = it.exp();
        let m0 = (e - 1.0) / it;
        let m1 = (e - m0) / it;
        let m2 = (e - m1 * 2.0) / it;
        [m0, m1, m2]
    }
}

/// `E(λ) = ∫ L[f](x) e^{iλx} dx` over `f`'s grid and its derivative
/// `E'(λ) = ∫ i x L[f](x) e^{iλx} dx`, both exact for the linear interpolant.
pub fn exp_transform(f: &SampledFunction, lambda: Complex64) -> (Complex64, Complex64) {
    let g = f.grid();
    let h = g.step();
    let [m0, m1, m2] = unit_moments(lambda * h);
    let (m0, m1, m2) = (m0 * h, m1 * h, m2 * h);
    let vals = f.values();
    let step = (I * lambda * h).exp();

    let mut s0 = Complex64::new(0.0, 0.0); // Σ f_k e_k
    let mut s1 = Complex64::new(0.0, 0.0); // Σ Δf_k e_k
    let mut sx0 = Complex64::new(0.0, 0.0); // Σ x_k f_k e_k
    let mut sx1 = Complex64::new(0.0, 0.0); // Σ x_k Δf_k e_k
    let mut phase = Complex64::new(0.0, 0.0);
    for k in 0..g.cells() {
        let x = g.node(k);
        if k % RESYNC == 0 {
            phase = (I * lambda * x).exp();
        }
        let fk = vals[k];
        let df = vals[k + 1] - fk;
        let a = fk * phase;
        let b = df * phase;
        s0 += a;
        s1 += b;
        sx0 += a * x;
        sx1 += b * x;
        phase *= step;
    }
    let value = s0 * m0 + s1 * m1;
    let derivative = I * (sx0 * m0 + sx1 * m1 + (s0 * m1 + s1 * m2) * h);
    (value, derivative)
}

/// [`exp_transform`] summed over the pieces.
pub fn piecewise_exp_transform(f: &PiecewiseFunction, lambda: Complex64) -> (Complex64, Complex64) {
    f.pieces().iter().map(|p| exp_transform(p, lambda)).fold(
        (Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0)),
        |acc, t| (acc.0 + t.0, acc.1 + t.1),
    )
}
