use std::path::{Path, PathBuf};

use crate::error::{CliError, Result};
use crate::scenario_file::ScenarioFile;

/// The built-in corpus, in presentation order.
pub const BUILTINS: &[(&str, &str)] = &[
    ("punctured-plane-magnetic", include_str!("../scenarios/punctured-plane-magnetic.json")),
    ("two-holes-flat", include_str!("../scenarios/two-holes-flat.json")),
    ("torus-unit", include_str!("../scenarios/torus-unit.json")),
    ("genus-2-declared", include_str!("../scenarios/genus-2-declared.json")),
    ("s2xs2-rational", include_str!("../scenarios/s2xs2-rational.json")),
    ("s2xs2-irrational", include_str!("../scenarios/s2xs2-irrational.json")),
    ("aharonov-bohm", include_str!("../scenarios/aharonov-bohm.json")),
];

pub fn names() -> impl Iterator<Item = &'static str> {
    BUILTINS.iter().map(|(n, _)| *n)
}

pub fn builtin(name: &str) -> Option<ScenarioFile> {
    BUILTINS
        .iter()
        .find(|(n, _)| *n == name)
        .map(|(n, text)| ScenarioFile::from_json(text, &format!("builtin:{n}")).expect("built-in scenarios parse"))
}

/// A built-in name or a path to a scenario file, with the directory that
/// relative CSV references resolve against.
pub fn resolve(arg: &str) -> Result<(ScenarioFile, PathBuf)> {
    if let Some(f) = builtin(arg) {
        return Ok((f, PathBuf::from(".")));
    }
    let path = Path::new(arg);
    if path.exists() {
        let dir = path.parent().map(Path::to_path_buf).unwrap_or_else(|| PathBuf::from("."));
        return Ok((ScenarioFile::read(path)?, dir));
    }
    Err(CliError::UnknownScenario(arg.to_string()))
}
