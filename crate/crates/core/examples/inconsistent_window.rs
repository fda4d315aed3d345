// Spectra of one potential with the window of another. The pipeline does
// not reject the data; the mismatch shows up as jumps between stages.
//
// cargo run --release --example inconsistent_window

use dirac_delay::eigensolver::compute_spectra_with;
use dirac_delay::forward::CharacteristicFunction;
use dirac_delay::inverse::{known_window, run_algorithm1, InverseConfig};
use dirac_delay::{DelayParameter, TestPotential};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let a = DelayParameter::new(1.1)?;
    let m = 800;
    let pot = TestPotential::P1.sample(a, m)?;
    let data = compute_spectra_with(&CharacteristicFunction::from_potential(&pot, m)?, 30)?.data;
    let cfg = InverseConfig {
        m_aux: m,
        m_out: m,
        ..InverseConfig::default()
    };
    for (label, window) in [
        ("own window", known_window(&pot)),
        ("P2 window", known_window(&TestPotential::P2.sample(a, m)?)),
    ] {
        let rep = run_algorithm1(&data, &window, a, cfg)?;
        println!("{label}: largest seam jump {:.2e}", rep.max_seam_jump());
    }
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().unwrap();
}
