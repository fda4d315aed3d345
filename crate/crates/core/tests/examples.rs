//! Every example runs to completion.

#[allow(dead_code)]
mod forward_example {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/forward.rs"));
}

#[allow(dead_code)]
mod spectra_example {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/spectra.rs"));
}

#[allow(dead_code)]
mod inversion_example {
    include!(concat!(
        env!("CARGO_MANIFEST_DIR"),
        "/examples/inversion.rs"
    ));
}

#[allow(dead_code)]
mod roundtrip_example {
    include!(concat!(
        env!("CARGO_MANIFEST_DIR"),
        "/examples/roundtrip.rs"
    ));
}

#[allow(dead_code)]
mod oracle_check_example {
    include!(concat!(
        env!("CARGO_MANIFEST_DIR"),
        "/examples/oracle_check.rs"
    ));
}

#[allow(dead_code)]
mod files_example {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/files.rs"));
}

#[allow(dead_code)]
mod inconsistent_window_example {
    include!(concat!(
        env!("CARGO_MANIFEST_DIR"),
        "/examples/inconsistent_window.rs"
    ));
}

#[test]
fn forward_example_runs() {
    forward_example::run_example().expect("forward example should run");
}

#[test]
fn spectra_example_runs() {
    spectra_example::run_example().expect("spectra example should run");
}

#[test]
fn inversion_example_runs() {
    inversion_example::run_example().expect("inversion example should run");
}

#[test]
fn roundtrip_example_runs() {
    roundtrip_example::run_example().expect("roundtrip example should run");
}

#[test]
fn oracle_check_example_runs() {
    oracle_check_example::run_example().expect("oracle_check example should run");
}

#[test]
fn files_example_runs() {
    files_example::run_example().expect("files example should run");
}

#[test]
fn inconsistent_window_example_runs() {
    inconsistent_window_example::run_example().expect("inconsistent_window example should run");
}
