// Characteristic functions of the built-in potentials: the closed form
// through the auxiliary densities against a direct solve of the delayed
// system.
//
// cargo run --release --example forward

use dirac_delay::forward::oracle::delta_oracle;
use dirac_delay::forward::{compute_v, delta_closed};
use dirac_delay::{Complex64, DelayParameter, TestPotential};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let a = DelayParameter::new(1.1)?;
    let m = 1000;
    let lambdas = [
        Complex64::new(0.0, 0.0),
        Complex64::new(2.5, 0.0),
        Complex64::new(-7.3, 0.4),
        Complex64::new(12.0, -0.8),
    ];
    for pot in [TestPotential::P0, TestPotential::P1, TestPotential::P2] {
        let pair = pot.sample(a, m)?;
        let v = compute_v(&pair, m)?;
        println!("{pot}");
        for &l in &lambdas {
            for j in [1u8, 2] {
                let closed = delta_closed(j, &v, l)?;
                let direct = delta_oracle(j, &pair, l)?;
                println!(
                    "  Δ{j}({:>5.1}{:+.1}i) = {:>+.9}{:+.9}i   |closed − direct| = {:.1e}",
                    l.re,
                    l.im,
                    closed.re,
                    closed.im,
                    (closed - direct).norm()
                );
            }
        }
    }
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().unwrap();
}
