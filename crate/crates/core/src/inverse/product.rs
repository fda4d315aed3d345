//! Characteristic functions rebuilt from their zeros.
//!
//! The canonical products carry `exp(λ/n)` convergence factors. Dividing by
//! the unperturbed products of `−sin πλ` and `cos πλ` cancels them exactly,
//! leaving
//!
//! ```text
//! Δ₁(λ) = −sin πλ · Π_{|n|<=N} (λ_{n,1} − λ) / (n − λ)
//! Δ₂(λ) =  cos πλ · Π_{|n|<=N} (λ_{n,2} − λ) / (n − ½ − λ)
//! ```
//!
//! The pole of the factor nearest to `λ` is cancelled analytically against
//! the zero of the trigonometric prefactor.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::domain::{lattice_point, Spectrum};
use crate::error::Result;
use crate::forward::CharacteristicTable;

/// `sin z / z`.
fn sinc(z: Complex64) -> Complex64 {
    if z.norm() < 1e-4 {
        let z2 = z * z;
        1.0 - z2 / 6.0 + z2 * z2 / 120.0
    } else {
        z.sin() / z
    }
}

fn sign(m: i64) -> f64 {
    if m.rem_euclid(2) == 0 {
        1.0
    } else {
        -1.0
    }
}

/// Truncated product representation of `Δ_j(λ)` built from `S`.
pub fn delta_from_spectrum(spectrum: &Spectrum, lambda: Complex64) -> Complex64 {
    let j = spectrum.j();
    if spectrum.values().contains(&lambda) {
        return Complex64::new(0.0, 0.0);
    }
    let n_max = spectrum.n_max() as i64;
    // nearest lattice index
    let m = match j {
        1 => lambda.re.round() as i64,
        _ => (lambda.re + 0.5).round() as i64,
    };
    let mut value = if m.abs() <= n_max {
        // prefactor / (lattice_m − λ), with d = λ − lattice_m
        let d = lambda - lattice_point(j, m);
        let ratio = match j {
            1 => sign(m) * PI * sinc(PI * d),
            _ => -sign(m) * PI * sinc(PI * d),
        };
        ratio * (spectrum.get(m).expect("index in range") - lambda)
    } else {
        match j {
            1 => -(lambda * PI).sin(),
            _ => (lambda * PI).cos(),
        }
    };
    for (n, z) in spectrum.iter() {
        if n == m {
            continue;
        }
        value *= (z - lambda) / (lattice_point(j, n) - lambda);
    }
    value
}

/// `Δ_j(n)` at the integers `|n| <= N` of the spectrum's own truncation.
pub fn integer_table(spectrum: &Spectrum) -> Result<CharacteristicTable> {
    let points = crate::forward::integer_points(spectrum.n_max());
    let values = points
        .iter()
        .map(|&l| delta_from_spectrum(spectrum, l))
        .collect();
    CharacteristicTable::new(spectrum.j(), points, values)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lattice_spectra_reproduce_unperturbed_functions() {
        let s1 = Spectrum::lattice(1, 6).unwrap();
        let s2 = Spectrum::lattice(2, 6).unwrap();
        assert!((delta_from_spectrum(&s1, Complex64::new(0.5, 0.0)) + 1.0).norm() < 1e-14);
        assert!((delta_from_spectrum(&s2, Complex64::new(0.0, 0.0)) - 1.0).norm() < 1e-14);
        for &l in &[
            Complex64::new(2.0, 0.0),
            Complex64::new(-3.5, 0.0),
            Complex64::new(1.3, 0.4),
            Complex64::new(4.0 + 1e-9, 0.0),
            Complex64::new(-2.5 - 1e-9, 1e-10),
            Complex64::new(9.2, -0.3),
        ] {
            assert!(
                (delta_from_spectrum(&s1, l) + (l * PI).sin()).norm() < 1e-13,
                "{l}"
            );
            assert!(
                (delta_from_spectrum(&s2, l) - (l * PI).cos()).norm() < 1e-13,
                "{l}"
            );
        }
    }

    #[test]
    fn stored_eigenvalue_gives_exact_zero() {
        let mut v: Vec<Complex64> = (-3..=3).map(|n| Complex64::new(n as f64, 0.0)).collect();
        v[4] = Complex64::new(1.1, 0.05);
        let s = Spectrum::new(1, v).unwrap();
        assert_eq!(
            delta_from_spectrum(&s, Complex64::new(1.1, 0.05)),
            Complex64::new(0.0, 0.0)
        );
    }

    #[test]
    fn removable_singularity_is_continuous() {
        let v: Vec<Complex64> = (-4..=4)
            .map(|n| Complex64::new(n as f64 + 0.1 / (1.0 + (n * n) as f64), 0.02))
            .collect();
        let s = Spectrum::new(1, v).unwrap();
        let at = delta_from_spectrum(&s, Complex64::new(2.0, 0.0));
        let near = delta_from_spectrum(&s, Complex64::new(2.0 + 1e-7, 0.0));
        assert!((at - near).norm() < 1e-6);
        // limit formula for Δ₁ at an integer m
        let m = 2i64;
        let mut expected = Complex64::new(PI, 0.0) * (s.get(m).unwrap() - m as f64);
        for (n, z) in s.iter() {
            if n != m {
                expected *= (z - m as f64) / (n - m) as f64;
            }
        }
        assert!((at - expected).norm() < 1e-13);
    }
}
