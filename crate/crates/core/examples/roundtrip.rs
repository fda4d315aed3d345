// Potential → spectra → potential over increasing truncation orders, with
// and without the jump and tail corrections of the inverse pipeline.
//
// cargo run --release --example roundtrip

use dirac_delay::eigensolver::compute_spectra_with;
use dirac_delay::forward::CharacteristicFunction;
use dirac_delay::inverse::{known_window, run_algorithm1, InverseConfig};
use dirac_delay::{DelayParameter, TestPotential};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let a = DelayParameter::new(1.1)?;
    let m = 1000;
    let pot = TestPotential::P1.sample(a, m)?;
    let cf = CharacteristicFunction::from_potential(&pot, m)?;
    let window = known_window(&pot);

    println!(
        "{:>4}  {:>10}  {:>10}  {:>10}",
        "N", "corrected", "no tail", "plain"
    );
    for n in [10, 20, 40] {
        let data = compute_spectra_with(&cf, n)?.data;
        let mut row = Vec::new();
        for (jump_correction, tail_correction) in [(true, true), (true, false), (false, false)] {
            let cfg = InverseConfig {
                m_aux: m,
                m_out: m,
                jump_correction,
                tail_correction,
            };
            let rep = run_algorithm1(&data, &window, a, cfg)?;
            row.push(pot.relative_l2_error(&rep.result)?);
        }
        println!(
            "{n:>4}  {:>10.2e}  {:>10.2e}  {:>10.2e}",
            row[0], row[1], row[2]
        );
    }
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().unwrap();
}
