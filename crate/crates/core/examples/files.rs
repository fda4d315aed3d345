// The CSV formats: spectra and the known window written by the `spectra`
// subcommand, read back and inverted as `invert` does.
//
// cargo run --release --example files

use dirac_delay::cli::{cmd_invert, cmd_spectra, ExperimentConfig};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let out = std::env::temp_dir().join(format!("dirac-delay-files-{}", std::process::id()));
    let cfg = ExperimentConfig {
        potential: Some("P1".into()),
        nmax: 15,
        m_pot: 600,
        m_aux: 600,
        out: out.clone(),
        ..ExperimentConfig::default()
    };
    let spectra = cmd_spectra(&cfg)?;
    for f in &spectra.files {
        println!("wrote {}", f.display());
    }
    println!(
        "{}",
        std::fs::read_to_string(out.join("spectra.csv"))?
            .lines()
            .take(4)
            .collect::<Vec<_>>()
            .join("\n")
    );

    let cfg = ExperimentConfig {
        spectra: Some(out.join("spectra.csv")),
        known: Some(out.join("known.csv")),
        potential: Some(out.join("potential.csv").display().to_string()),
        ..cfg
    };
    let report = cmd_invert(&cfg)?;
    for c in &report.checks {
        println!(
            "{}: {:.2e} (tolerance {:.0e}) {}",
            c.name,
            c.value,
            c.tolerance,
            if c.passed { "pass" } else { "fail" }
        );
    }
    std::fs::remove_dir_all(&out)?;
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().unwrap();
}
