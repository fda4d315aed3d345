//! Eigenvalues beyond the truncation, predicted from the stored ones.
//!
//! With `Δ_j = Δ⁰_j + U_j`, where `U_j` is the transform of `u_j`, every
//! stored eigenvalue gives `U_j(λ_n) = −Δ⁰_j(λ_n)` exactly. The jump model
//! fitted to these values on `N/2 <= |n| <= N` continues `U_j` past `N`, and
//! the zeros of `Δ⁰_j + model` next to the lattice points stand in for the
//! missing eigenvalues. Their factors complete the truncated product.

use std::f64::consts::PI;

use num_complex::Complex64;

use super::fourier::{fit_jumps, jump_model};
use super::product::integer_table;
use crate::domain::{lattice_point, Spectrum};
use crate::error::Result;
use crate::forward::CharacteristicTable;

/// Predicted eigenvalues run to `|n| = TAIL_FACTOR · N`.
pub const TAIL_FACTOR: usize = 16;

fn unperturbed(j: u8, lambda: Complex64) -> (Complex64, Complex64) {
    let z = lambda * PI;
    match j {
        1 => (-z.sin(), -PI * z.cos()),
        _ => (z.cos(), -PI * z.sin()),
    }
}

/// Predicted `(n, λ_{n,j})` for `N < |n| <= extent`, in increasing `|n|`.
///
/// Empty when the band holds fewer than two values per fitted amplitude.
pub fn predict_tail(
    spectrum: &Spectrum,
    xis: &[f64],
    extent: usize,
) -> Result<Vec<(i64, Complex64)>> {
    let j = spectrum.j();
    let n = spectrum.n_max() as i64;
    let band: Vec<(i64, Complex64)> = spectrum
        .iter()
        .filter(|(k, _)| 2 * k.abs() >= n && *k != 0)
        .collect();
    if xis.is_empty() || band.len() < 4 * xis.len() {
        return Ok(Vec::new());
    }
    let points: Vec<Complex64> = band.iter().map(|b| b.1).collect();
    let values: Vec<Complex64> = points.iter().map(|&l| -unperturbed(j, l).0).collect();
    let amps = fit_jumps(&points, &[&values], xis)?.remove(0);
    let h = 1e-6;
    let residual = |l: Complex64| unperturbed(j, l).0 + jump_model(l, xis, &amps);
    let mut out = Vec::new();
    for k in (n + 1)..=(extent as i64) {
        for idx in [k, -k] {
            let start = Complex64::new(lattice_point(j, idx), 0.0);
            let mut l = start;
            for _ in 0..30 {
                let slope = unperturbed(j, l).1
                    + (jump_model(l + h, xis, &amps) - jump_model(l - h, xis, &amps)) / (2.0 * h);
                let step = residual(l) / slope;
                l -= step;
                if step.norm() < 1e-15 * (1.0 + l.norm()) {
                    break;
                }
            }
            if l.is_finite() && (l - start).norm() < 0.25 {
                out.push((idx, l));
            }
        }
    }
    Ok(out)
}

/// `Δ_j(n)` at the integers `|n| <= N` from the product over the stored
/// eigenvalues and the predicted tail.
pub fn integer_table_with_tail(spectrum: &Spectrum, xis: &[f64]) -> Result<CharacteristicTable> {
    let mut table = integer_table(spectrum)?;
    let tail = predict_tail(spectrum, xis, TAIL_FACTOR * spectrum.n_max())?;
    let j = spectrum.j();
    for (value, point) in table.values.iter_mut().zip(&table.points) {
        let mut factor = Complex64::new(1.0, 0.0);
        for &(k, l) in &tail {
            factor *= (l - point) / (lattice_point(j, k) - point);
        }
        *value *= factor;
    }
    Ok(table)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lattice_spectra_predict_the_lattice() {
        for j in [1u8, 2] {
            let s = Spectrum::lattice(j, 20).unwrap();
            let tail = predict_tail(&s, &[-1.0, 0.5], 60).unwrap();
            assert_eq!(tail.len(), 80);
            for (k, l) in tail {
                assert!((l - lattice_point(j, k)).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn short_band_gives_no_tail() {
        let s = Spectrum::lattice(1, 3).unwrap();
        assert!(predict_tail(&s, &[-1.0, 0.5], 30).unwrap().is_empty());
    }

    #[test]
    fn single_jump_tail_is_recovered() {
        // U(λ) = J·basis₀(ξ) exactly: every zero of Δ⁰ + U lies on the model
        let (j, xi, jump) = (1u8, 0.7, Complex64::new(0.3, 0.1));
        let amps = [jump, Complex64::new(0.0, 0.0)];
        let root = |k: i64| {
            let mut l = Complex64::new(k as f64, 0.0);
            for _ in 0..50 {
                let f = unperturbed(j, l).0 + jump_model(l, &[xi], &amps);
                let d = unperturbed(j, l).1
                    + (jump_model(l + 1e-6, &[xi], &amps) - jump_model(l - 1e-6, &[xi], &amps))
                        / 2e-6;
                l -= f / d;
            }
            l
        };
        let n = 30;
        let s = Spectrum::new(
            j,
            (-n..=n)
                .map(|k| {
                    if k == 0 {
                        Complex64::new(0.0, 0.0)
                    } else {
                        root(k)
                    }
                })
                .collect(),
        )
        .unwrap();
        for (k, l) in predict_tail(&s, &[xi], 90).unwrap() {
            assert!((l - root(k)).norm() < 1e-10, "{k}");
        }
    }
}
