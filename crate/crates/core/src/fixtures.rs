//! The bundled example processes.

use crate::error::{Error, Result};
use crate::lmp::Lmp;
use crate::model::ModelFile;
use crate::nlmp::Nlmp;

pub const NAMES: [&str; 8] = [
    "two-chain",
    "three-sink",
    "fan",
    "fan-loop",
    "dirac-pair",
    "nd-branch",
    "coarse-pair-left",
    "coarse-pair-right",
];

pub fn source(name: &str) -> Option<&'static str> {
    Some(match name {
        "two-chain" => include_str!("../fixtures/two-chain.json"),
        "three-sink" => include_str!("../fixtures/three-sink.json"),
        "fan" => include_str!("../fixtures/fan.json"),
        "fan-loop" => include_str!("../fixtures/fan-loop.json"),
        "dirac-pair" => include_str!("../fixtures/dirac-pair.json"),
        "nd-branch" => include_str!("../fixtures/nd-branch.json"),
        "coarse-pair-left" => include_str!("../fixtures/coarse-pair-left.json"),
        "coarse-pair-right" => include_str!("../fixtures/coarse-pair-right.json"),
        _ => return None,
    })
}

pub fn model_file(name: &str) -> Result<ModelFile> {
    let text = source(name).ok_or_else(|| Error::Model(format!("no fixture named {name:?}")))?;
    ModelFile::parse(text)
}

pub fn lmp(name: &str) -> Result<Lmp> {
    model_file(name)?.to_lmp()
}

pub fn nlmp(name: &str) -> Result<Nlmp> {
    model_file(name)?.to_nlmp()
}

/// Directory holding the fixture files and the report corpus.
pub fn corpus_dir() -> std::path::PathBuf {
    std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures")
}

pub fn two_chain() -> Lmp {
    lmp("two-chain").expect("bundled fixture")
}

pub fn three_sink() -> Lmp {
    lmp("three-sink").expect("bundled fixture")
}

pub fn fan() -> Lmp {
    lmp("fan").expect("bundled fixture")
}

pub fn fan_loop() -> Lmp {
    lmp("fan-loop").expect("bundled fixture")
}

pub fn dirac_pair() -> Lmp {
    lmp("dirac-pair").expect("bundled fixture")
}

pub fn nd_branch() -> Nlmp {
    nlmp("nd-branch").expect("bundled fixture")
}

pub fn coarse_pair() -> (Lmp, Lmp) {
    (lmp("coarse-pair-left").expect("bundled fixture"), lmp("coarse-pair-right").expect("bundled fixture"))
}
