//! Shared fixtures for unit tests.

use crate::cfg::{parse_cfg, Cfg, CfgFormat};
use crate::path::Path;

/// The eleven-vertex binary-search CFG used as the worked example across the
/// test suite: one loop {2,3,4,5,6,8}, entry 2, exits 2 and 5.
pub(crate) fn binsearch() -> Cfg {
    parse_cfg(
        include_str!("../tests/golden/binsearch.json"),
        CfgFormat::EdgeListJson,
    )
    .expect("fixture parses")
}

/// Build a path from display names.
pub(crate) fn path_of(cfg: &Cfg, names: &[&str]) -> Path {
    Path::new(
        names
            .iter()
            .map(|n| cfg.find(n).unwrap_or_else(|| panic!("no vertex named {n:?}")))
            .collect(),
    )
}

/// Order-insensitive path-set equality with a readable failure message.
pub(crate) fn assert_path_set_eq(cfg: &Cfg, got: &[Path], want: &[Vec<&str>]) {
    let mut got_names: Vec<Vec<String>> = got.iter().map(|p| cfg.names_of(p)).collect();
    got_names.sort();
    let mut want_names: Vec<Vec<String>> =
        want.iter().map(|p| p.iter().map(|s| s.to_string()).collect()).collect();
    want_names.sort();
    assert_eq!(got_names, want_names);
}
