//! The fixture data files shipped in `fixtures/` must stay byte-identical
//! to the built-in constants so external tools and the library agree.

use beztraj_core::fixture::{PSS_EXAMPLE_FIXTURE, VEHICLE_TWO_PARAM_FIXTURE};

fn repo_file(name: &str) -> String {
    let path = std::path::Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../../fixtures")
        .join(name);
    std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()))
}

#[test]
fn vehicle_fixture_file_matches_constant() {
    assert_eq!(repo_file("vehicle_two_param.dnf"), VEHICLE_TWO_PARAM_FIXTURE);
}

#[test]
fn benchmark_fixture_file_matches_constant() {
    assert_eq!(repo_file("pss_example.dnf"), PSS_EXAMPLE_FIXTURE);
}
