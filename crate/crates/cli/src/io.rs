//! Loading inputs and writing results.

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;

use lmpbench::lmp::Lmp;
use lmpbench::measurable::{FinSpace, Partition, Rel, StateSet};
use lmpbench::model::{Model, ModelFile};
use lmpbench::nlmp::{embed_lmp, Nlmp};
use lmpbench::{fixtures, Error};
use serde_json::Value;

use crate::Format;

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Core(Error),
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Core(Error::TooLarge { .. }) => 4,
            CliError::Core(_) | CliError::Io(_) => 3,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "{m}"),
            CliError::Core(e) => write!(f, "{e}"),
            CliError::Io(m) => write!(f, "{m}"),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Core(e)
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;

/// A model path; `fixture:<name>` names a bundled fixture.
pub fn load_file(path: &Path) -> CliResult<ModelFile> {
    let s = path.to_string_lossy();
    if let Some(name) = s.strip_prefix("fixture:") {
        return Ok(fixtures::model_file(name)?);
    }
    Ok(ModelFile::load(path)?)
}

pub fn load_lmp(path: &Path) -> CliResult<Lmp> {
    Ok(load_file(path)?.to_lmp()?)
}

/// NLMP files as they are; LMP files embedded.
pub fn load_nlmp(path: &Path) -> CliResult<Nlmp> {
    Ok(match load_file(path)?.to_model()? {
        Model::Lmp(l) => embed_lmp(&l),
        Model::Nlmp(n) => n,
    })
}

pub fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> CliResult<T> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| CliError::Core(Error::Model(format!("{}: {e}", path.display()))))
}

pub fn load_relation(path: &Path, left: &FinSpace, right: &FinSpace) -> CliResult<Rel> {
    let pairs: Vec<(String, String)> = read_json(path)?;
    Ok(Rel::from_names(left, right, &pairs)?)
}

pub fn load_map(path: &Path, source: &FinSpace, target: &FinSpace) -> CliResult<Vec<usize>> {
    let m: BTreeMap<String, String> = read_json(path)?;
    let mut out = vec![None; source.len()];
    for (s, t) in &m {
        out[source.index_of(s)?] = Some(target.index_of(t)?);
    }
    out.into_iter()
        .enumerate()
        .map(|(i, t)| t.ok_or_else(|| CliError::Core(Error::Model(format!("map has no image for {:?}", source.name(i))))))
        .collect()
}

pub fn load_family(path: &Path, space: &FinSpace) -> CliResult<Vec<StateSet>> {
    let sets: Vec<Vec<String>> = read_json(path)?;
    sets.iter().map(|s| Ok(space.set_of(s)?)).collect()
}

/// `s,t` looked up in the two spaces.
pub fn parse_pair(text: &str, left: &FinSpace, right: &FinSpace) -> CliResult<(usize, usize)> {
    let (s, t) = text.split_once(',').ok_or_else(|| CliError::Usage(format!("expected s,t but got {text:?}")))?;
    Ok((left.index_of(s.trim())?, right.index_of(t.trim())?))
}

pub fn classes(space: &FinSpace, p: &Partition) -> Vec<Vec<String>> {
    p.blocks().iter().map(|&b| space.names_of(b)).collect()
}

pub fn fmt_classes(c: &[Vec<String>]) -> String {
    c.iter().map(|b| format!("{{{}}}", b.join(", "))).collect::<Vec<_>>().join(" ")
}

pub fn fmt_pairs(pairs: &[(String, String)]) -> String {
    if pairs.is_empty() {
        return "(none)".into();
    }
    pairs.iter().map(|(a, b)| format!("({a}, {b})")).collect::<Vec<_>>().join(" ")
}

/// Print either the JSON value or the human text.
pub fn emit(format: Format, json: Value, human: impl FnOnce() -> String) {
    match format {
        Format::Json => println!("{}", serde_json::to_string_pretty(&json).expect("value serializes")),
        Format::Human => {
            let text = human();
            if text.ends_with('\n') {
                print!("{text}");
            } else {
                println!("{text}");
            }
        }
    }
}

pub fn verdict_code(holds: bool) -> u8 {
    if holds { 0 } else { 1 }
}
