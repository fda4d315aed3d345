// Reconstruction of the complex test potential from its two spectra and
// the known window, with errors and stage boundaries.
//
// cargo run --release --example inversion

use dirac_delay::eigensolver::compute_spectra_with;
use dirac_delay::forward::CharacteristicFunction;
use dirac_delay::inverse::{known_window, run_algorithm1, InverseConfig};
use dirac_delay::{DelayParameter, TestPotential};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let a = DelayParameter::new(1.15)?;
    let m = 1000;
    let pot = TestPotential::P2.sample(a, m)?;
    let cf = CharacteristicFunction::from_potential(&pot, m)?;
    let data = compute_spectra_with(&cf, 40)?.data;

    let cfg = InverseConfig {
        m_aux: m,
        m_out: m,
        ..InverseConfig::default()
    };
    let rep = run_algorithm1(&data, &known_window(&pot), a, cfg)?;

    println!(
        "relative L2 error: {:.3e}",
        pot.relative_l2_error(&rep.result)?
    );
    for e in rep.region_errors(&pot)? {
        println!(
            "  {:<6} {:>4} nodes  L2 {:.2e}  max {:.2e}",
            e.tag.name(),
            e.nodes,
            e.l2,
            e.max
        );
    }
    for s in &rep.seams {
        println!(
            "  {:>6} | {:<6} at {:.4}: jump {:.1e}",
            s.left.name(),
            s.right.name(),
            s.x,
            s.jump
        );
    }
    for x in [1.2, 1.7, 2.3, 3.0] {
        let (q, p) = dirac_delay::inverse::evaluate(&rep, x);
        let (tq, tp) = (TestPotential::P2.q(x), TestPotential::P2.p(x));
        println!(
            "  x = {x}: |q − q_true| = {:.1e}, |p − p_true| = {:.1e}",
            (q - tq).norm(),
            (p - tp).norm()
        );
    }
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().unwrap();
}
