// Eigenvalues of both problems for the real test potential, with the
// residuals κ = λ − (n − (j−1)/2) and an argument-principle count over the
// whole strip.
//
// cargo run --release --example spectra

use dirac_delay::eigensolver::{compute_spectra_with, verify_count, Rect};
use dirac_delay::forward::CharacteristicFunction;
use dirac_delay::{DelayParameter, TestPotential};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let a = DelayParameter::new(1.1)?;
    let n_max = 20;
    let pot = TestPotential::P1.sample(a, 1000)?;
    let cf = CharacteristicFunction::from_potential(&pot, 1000)?;
    let res = compute_spectra_with(&cf, n_max)?;

    for j in [1u8, 2] {
        println!("j = {j}");
        for (n, k) in res
            .data
            .spectrum(j)
            .kappas()
            .filter(|(n, _)| n.abs() <= 4 || n.abs() == n_max as i64)
        {
            let l = res.data.spectrum(j).get(n).unwrap();
            println!(
                "  n = {n:>3}  λ = {:>+10.6}{:+.6}i  |κ| = {:.2e}",
                l.re,
                l.im,
                k.norm()
            );
        }
        let count = verify_count(j, &cf, &Rect::strip(j, n_max, 2.0))?;
        println!("  zeros in the strip: {count} (expected {})", 2 * n_max + 1);
    }
    for d in &res.diagnostics {
        println!(
            "j = {}: |κ| < 1/2 from |n| = {}, Σ|κ|² = {:.4}",
            d.j, d.localized_from, d.l2_sq
        );
    }
    for (j, n, count) in &res.irregular_boxes {
        println!("unit box j = {j}, n = {n} held {count:?} zeros; resolved with its neighbours");
    }
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().unwrap();
}
