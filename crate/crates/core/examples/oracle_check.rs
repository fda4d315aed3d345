// Worst disagreement between the two formulas for Δ over random points of
// the strip |Re λ| <= 20, |Im λ| <= 1.
//
// cargo run --release --example oracle_check

use dirac_delay::cli::commands::oracle_points;
use dirac_delay::forward::oracle::delta_oracle;
use dirac_delay::forward::{compute_v, delta_closed};
use dirac_delay::{DelayParameter, TestPotential};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let a = DelayParameter::new(1.1)?;
    let m = 1000;
    for pot in [TestPotential::P1, TestPotential::P2] {
        let pair = pot.sample(a, m)?;
        let v = compute_v(&pair, m)?;
        let mut worst = (0.0, 0.0.into());
        for l in oracle_points(7, 20) {
            for j in [1u8, 2] {
                let oracle = delta_oracle(j, &pair, l)?;
                let dev = (delta_closed(j, &v, l)? - oracle).norm() / (1.0 + oracle.norm());
                if dev > worst.0 {
                    worst = (dev, l);
                }
            }
        }
        println!(
            "{pot}: worst scaled deviation {:.2e} at λ = {:.3}",
            worst.0, worst.1
        );
    }
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().unwrap();
}
