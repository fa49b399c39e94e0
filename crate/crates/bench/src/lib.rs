//! Fixture loading shared by the benches.

use std::path::PathBuf;

use crnx::io::parse_crn;
use crnx::ReactionNetwork;

pub fn fixture(name: &str) -> ReactionNetwork {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../fixtures")
        .join(format!("{name}.crn"));
    let text = std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
    parse_crn(&text).unwrap().network
}
