//! JSON model files.
//!
//! ```json
//! {
//!   "kind": "lmp",
//!   "labels": ["a"],
//!   "states": ["x", "y"],
//!   "sigma": [["x"], ["y"]],
//!   "kernels": { "a": { "x": { "y": "1" } } }
//! }
//! ```
//!
//! `sigma` lists the atoms and may be omitted for the powerset. For NLMPs
//! each state maps to a list of measures. A weight on a target state is
//! credited to the atom containing it.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lmp::{validate_lmp, KernelRow, Lmp};
use crate::measurable::FinSpace;
use crate::nlmp::{validate_nlmp, Nlmp, TransitionRow};
use crate::rational::Rational;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Kind {
    Lmp,
    Nlmp,
}

type Weights = BTreeMap<String, Rational>;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Kernels {
    Deterministic(BTreeMap<String, BTreeMap<String, Weights>>),
    Nondeterministic(BTreeMap<String, BTreeMap<String, Vec<Weights>>>),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelFile {
    pub kind: Kind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
    pub labels: Vec<String>,
    pub states: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sigma: Option<Vec<Vec<String>>>,
    pub kernels: Kernels,
}

/// A loaded process of either kind.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Model {
    Lmp(Lmp),
    Nlmp(Nlmp),
}

fn space_atoms(space: &FinSpace) -> Option<Vec<Vec<String>>> {
    (!space.is_powerset()).then(|| space.atom_names())
}

impl ModelFile {
    pub fn parse(text: &str) -> Result<Self> {
        let mut file: ModelFile = serde_json::from_str(text).map_err(|e| Error::Model(e.to_string()))?;
        // an nlmp whose rows are all empty parses as the deterministic shape
        if let (Kind::Nlmp, Kernels::Deterministic(table)) = (file.kind, &file.kernels) {
            if table.values().all(BTreeMap::is_empty) {
                let keys = table.keys().map(|k| (k.clone(), BTreeMap::new())).collect();
                file.kernels = Kernels::Nondeterministic(keys);
            }
        }
        Ok(file)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::Model(format!("{}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("model serializes");
        s.push('\n');
        s
    }

    fn space(&self) -> Result<FinSpace> {
        FinSpace::new(&self.states, self.sigma.as_deref())
    }

    pub fn to_model(&self) -> Result<Model> {
        match self.kind {
            Kind::Lmp => self.to_lmp().map(Model::Lmp),
            Kind::Nlmp => self.to_nlmp().map(Model::Nlmp),
        }
    }

    pub fn to_lmp(&self) -> Result<Lmp> {
        if self.kind != Kind::Lmp {
            return Err(Error::Model("expected an lmp model".into()));
        }
        let table = match &self.kernels {
            Kernels::Deterministic(t) => t,
            Kernels::Nondeterministic(_) => return Err(Error::Model("lmp kernels map targets to weights".into())),
        };
        let mut rows = Vec::new();
        for (label, per) in table {
            for (state, w) in per {
                rows.push(KernelRow {
                    label: label.clone(),
                    state: state.clone(),
                    targets: w.iter().map(|(t, x)| (t.clone(), x.clone())).collect(),
                });
            }
        }
        validate_lmp(self.space()?, &self.labels, &rows)
    }

    pub fn to_nlmp(&self) -> Result<Nlmp> {
        if self.kind != Kind::Nlmp {
            return Err(Error::Model("expected an nlmp model".into()));
        }
        let mut rows = Vec::new();
        match &self.kernels {
            Kernels::Nondeterministic(table) => {
                for (label, per) in table {
                    for (state, list) in per {
                        rows.push(TransitionRow {
                            label: label.clone(),
                            state: state.clone(),
                            measures: list.iter().map(|w| w.iter().map(|(t, x)| (t.clone(), x.clone())).collect()).collect(),
                        });
                    }
                }
            }
            Kernels::Deterministic(table) => {
                if table.values().any(|per| !per.is_empty()) {
                    return Err(Error::Model("nlmp kernels map states to lists of measures".into()));
                }
            }
        }
        validate_nlmp(self.space()?, &self.labels, &rows)
    }

    pub fn from_lmp(lmp: &Lmp, note: Option<String>) -> Self {
        let mut table: BTreeMap<String, BTreeMap<String, Weights>> = BTreeMap::new();
        for label in lmp.labels() {
            table.insert(label.clone(), BTreeMap::new());
        }
        for row in lmp.rows() {
            table.get_mut(&row.label).expect("known label").insert(row.state, row.targets.into_iter().collect());
        }
        ModelFile {
            kind: Kind::Lmp,
            note,
            labels: lmp.labels().to_vec(),
            states: lmp.space().names().to_vec(),
            sigma: space_atoms(lmp.space()),
            kernels: Kernels::Deterministic(table),
        }
    }

    pub fn from_nlmp(n: &Nlmp, note: Option<String>) -> Self {
        let mut table: BTreeMap<String, BTreeMap<String, Vec<Weights>>> = BTreeMap::new();
        for label in n.labels() {
            table.insert(label.clone(), BTreeMap::new());
        }
        for row in n.rows() {
            table
                .get_mut(&row.label)
                .expect("known label")
                .insert(row.state, row.measures.into_iter().map(|m| m.into_iter().collect()).collect());
        }
        ModelFile {
            kind: Kind::Nlmp,
            note,
            labels: n.labels().to_vec(),
            states: n.space().names().to_vec(),
            sigma: space_atoms(n.space()),
            kernels: Kernels::Nondeterministic(table),
        }
    }
}

pub fn load_model(path: impl AsRef<Path>) -> Result<Model> {
    ModelFile::load(path)?.to_model()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn lmp_round_trip() {
        for name in fixtures::NAMES {
            let file = fixtures::model_file(name).unwrap();
            let model = file.to_model().unwrap();
            let back = match &model {
                Model::Lmp(l) => ModelFile::from_lmp(l, file.note.clone()),
                Model::Nlmp(n) => ModelFile::from_nlmp(n, file.note.clone()),
            };
            assert_eq!(back.to_model().unwrap(), model);
            let text = back.to_json();
            assert_eq!(ModelFile::parse(&text).unwrap(), back, "{name}");
        }
    }

    #[test]
    fn rejects_unknown_fields_and_floats() {
        let bad = r#"{"kind":"lmp","labels":["a"],"states":["x"],"kernels":{},"extra":1}"#;
        assert!(ModelFile::parse(bad).is_err());
        let float = r#"{"kind":"lmp","labels":["a"],"states":["x"],"kernels":{"a":{"x":{"x":0.5}}}}"#;
        assert!(ModelFile::parse(float).is_err());
    }

    #[test]
    fn empty_nlmp_kernels_accepted() {
        let text = r#"{"kind":"nlmp","labels":["a"],"states":["x"],"kernels":{"a":{}}}"#;
        let n = ModelFile::parse(text).unwrap().to_nlmp().unwrap();
        assert!(n.transitions(0, 0).is_empty());
    }
}
