//! The inclusion table between bisimilarity notions for pairs of LMPs.

use std::fmt;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::bisim::{delta_bisimilarity, delta_span, ext_bisimilarity, is_span, oplus_bisimilarity, state_bisimilarity, vee_bisimilarity};
use crate::error::{Error, Result};
use crate::lmp::{direct_sum, Lmp};
use crate::measurable::{descend, Rel};
use crate::model::ModelFile;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Notion {
    Delta,
    /// Images of spans that were built and verified, here from Δ couplings.
    Span,
    Ext,
    /// (~s)×: state bisimilarity on the sum, descended.
    State,
    Vee,
    Oplus,
}

impl Notion {
    pub const ALL: [Notion; 6] = [Notion::Delta, Notion::Span, Notion::Ext, Notion::State, Notion::Vee, Notion::Oplus];

    pub fn symbol(self) -> &'static str {
        match self {
            Notion::Delta => "~Δ",
            Notion::Span => "~∧",
            Notion::Ext => "~×",
            Notion::State => "(~s)×",
            Notion::Vee => "~∨",
            Notion::Oplus => "~⊕",
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Notion::Delta => "delta",
            Notion::Span => "span",
            Notion::Ext => "ext",
            Notion::State => "state",
            Notion::Vee => "vee",
            Notion::Oplus => "oplus",
        }
    }

    fn index(self) -> usize {
        Notion::ALL.iter().position(|&n| n == self).expect("listed")
    }
}

impl fmt::Display for Notion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Notion {
    type Err = Error;

    /// Accepts the names above; `event` is ∨ and `times` is ×.
    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "delta" => Notion::Delta,
            "span" | "wedge" => Notion::Span,
            "ext" | "external" | "times" => Notion::Ext,
            "state" => Notion::State,
            "vee" | "event" => Notion::Vee,
            "oplus" => Notion::Oplus,
            _ => return Err(Error::Model(format!("unknown notion {s:?}"))),
        })
    }
}

/// The relation a notion puts between the two processes.
pub fn notion_relation(notion: Notion, left: &Lmp, right: &Lmp) -> Result<Rel> {
    match notion {
        Notion::Delta => delta_bisimilarity(left, right),
        Notion::Span => {
            let d = delta_bisimilarity(left, right)?;
            let mut out = Rel::new(left.len(), right.len());
            if let Some((apex, f, g)) = delta_span(left, right, &d)? {
                let rep = is_span(left, right, &apex, &f, &g)?;
                if rep.verdict.holds {
                    out = rep.image;
                }
            }
            Ok(out)
        }
        Notion::Ext => ext_bisimilarity(left, right),
        Notion::State => {
            let (sum, tags) = direct_sum(left, right)?;
            Ok(descend(&tags, &state_bisimilarity(&sum)))
        }
        Notion::Vee => vee_bisimilarity(left, right),
        Notion::Oplus => oplus_bisimilarity(left, right),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Expectation {
    Holds,
    /// Refuted only by examples built on non-measurable sets.
    NotFinite,
    Open,
}

/// Known status of row ⊆ column.
pub fn expectation(row: Notion, col: Notion) -> Expectation {
    use Expectation::*;
    const TABLE: [[Expectation; 6]; 6] = [
        [Holds, Holds, Holds, Holds, Holds, Holds],
        [Open, Holds, Holds, Holds, Holds, Holds],
        [NotFinite, NotFinite, Holds, Holds, Holds, Holds],
        [NotFinite, NotFinite, Open, Holds, Holds, Holds],
        [NotFinite, NotFinite, NotFinite, NotFinite, Holds, Open],
        [NotFinite, NotFinite, NotFinite, NotFinite, NotFinite, Holds],
    ];
    TABLE[row.index()][col.index()]
}

pub const NOT_FINITE: &str = "n/a — not refutable at finite scale";

/// One corpus entry.
#[derive(Clone, Debug)]
pub struct CorpusPair {
    pub left_name: String,
    pub right_name: String,
    pub left: Lmp,
    pub right: Lmp,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Counterexample {
    pub left: String,
    pub right: String,
    pub pair: (String, String),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Cell {
    pub row: Notion,
    pub col: Notion,
    pub expectation: Expectation,
    /// `None` without data.
    pub counterexample: Option<Option<Counterexample>>,
}

impl Cell {
    pub fn text(&self) -> String {
        let Some(observed) = &self.counterexample else { return "no data".into() };
        match (self.expectation, observed) {
            (Expectation::NotFinite, _) => NOT_FINITE.into(),
            (Expectation::Holds, None) => "✓".into(),
            (Expectation::Open, None) => "? held on corpus".into(),
            (_, Some(c)) => format!("✗ {} / {} at ({}, {})", c.left, c.right, c.pair.0, c.pair.1),
        }
    }

    /// A known inclusion that failed on the corpus.
    pub fn is_violation(&self) -> bool {
        self.expectation == Expectation::Holds && matches!(self.counterexample, Some(Some(_)))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Report {
    pub pairs: usize,
    pub cells: Vec<Cell>,
}

impl Report {
    pub fn cell(&self, row: Notion, col: Notion) -> &Cell {
        &self.cells[row.index() * 6 + col.index()]
    }

    pub fn to_markdown(&self) -> String {
        let mut s = format!("Inclusions between bisimilarities, row ⊆ column, over {} corpus pairs.\n\n", self.pairs);
        s.push_str("| ⊆ |");
        for n in Notion::ALL {
            s.push_str(&format!(" {} |", n.symbol()));
        }
        s.push_str("\n|---|");
        s.push_str(&"---|".repeat(6));
        s.push('\n');
        for row in Notion::ALL {
            s.push_str(&format!("| {} |", row.symbol()));
            for col in Notion::ALL {
                s.push_str(&format!(" {} |", self.cell(row, col).text()));
            }
            s.push('\n');
        }
        s.push_str("\n~∧ counts spans built from Δ couplings and verified as spans of zigzags.\n");
        s
    }
}

/// Evaluate every notion on every pair and fill the table.
pub fn classification_report(corpus: &[CorpusPair]) -> Result<Report> {
    let mut relations = Vec::new();
    for p in corpus {
        let rels: Vec<Rel> = Notion::ALL.iter().map(|&n| notion_relation(n, &p.left, &p.right)).collect::<Result<_>>()?;
        relations.push(rels);
    }
    let mut cells = Vec::new();
    for row in Notion::ALL {
        for col in Notion::ALL {
            let counterexample = (!corpus.is_empty()).then(|| {
                corpus.iter().zip(&relations).find_map(|(p, rels)| {
                    let (r, c) = (&rels[row.index()], &rels[col.index()]);
                    r.pairs().find(|&(s, t)| !c.contains(s, t)).map(|(s, t)| Counterexample {
                        left: p.left_name.clone(),
                        right: p.right_name.clone(),
                        pair: (p.left.space().name(s).to_string(), p.right.space().name(t).to_string()),
                    })
                })
            });
            cells.push(Cell { row, col, expectation: expectation(row, col), counterexample });
        }
    }
    Ok(Report { pairs: corpus.len(), cells })
}

#[derive(Deserialize)]
struct CorpusIndex {
    pairs: Vec<(String, String)>,
}

/// Pairs listed in `corpus.json` of `dir`; a directory without one is an
/// empty corpus.
pub fn load_corpus(dir: impl AsRef<Path>) -> Result<Vec<CorpusPair>> {
    let dir = dir.as_ref();
    let index = dir.join("corpus.json");
    if !index.exists() {
        return Ok(Vec::new());
    }
    let text = std::fs::read_to_string(&index).map_err(|e| Error::Model(format!("{}: {e}", index.display())))?;
    let index: CorpusIndex = serde_json::from_str(&text).map_err(|e| Error::Model(e.to_string()))?;
    index
        .pairs
        .into_iter()
        .map(|(l, r)| {
            Ok(CorpusPair {
                left: ModelFile::load(dir.join(&l))?.to_lmp()?,
                right: ModelFile::load(dir.join(&r))?.to_lmp()?,
                left_name: l.trim_end_matches(".json").to_string(),
                right_name: r.trim_end_matches(".json").to_string(),
            })
        })
        .collect()
}

pub fn report_table(dir: impl AsRef<Path>) -> Result<String> {
    Ok(classification_report(&load_corpus(dir)?)?.to_markdown())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn shipped() -> std::path::PathBuf {
        Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures")
    }

    #[test]
    fn shipped_table_matches_golden() {
        let got = report_table(shipped()).unwrap();
        let want = std::fs::read_to_string(shipped().join("expected_table.md")).unwrap();
        assert_eq!(got, want);
    }

    #[test]
    fn known_inclusions_hold_on_corpus() {
        let r = classification_report(&load_corpus(shipped()).unwrap()).unwrap();
        assert!(r.cells.iter().all(|c| !c.is_violation()));
    }

    #[test]
    fn empty_corpus_has_no_data() {
        let r = classification_report(&[]).unwrap();
        assert!(r.cells.iter().all(|c| c.text() == "no data"));
    }

    #[test]
    fn identical_pairs_coincide_on_diagonal() {
        let l = fixtures::fan();
        let rels: Vec<Rel> = Notion::ALL.iter().map(|&n| notion_relation(n, &l, &l).unwrap()).collect();
        for r in &rels {
            assert!(Rel::identity(l.len()).is_subset(r));
        }
    }

    #[test]
    fn duplicate_pair_never_flips_a_cell() {
        let mut corpus = load_corpus(shipped()).unwrap();
        let before = classification_report(&corpus).unwrap();
        corpus.push(corpus[0].clone());
        let after = classification_report(&corpus).unwrap();
        for (a, b) in before.cells.iter().zip(&after.cells) {
            assert_eq!(a.counterexample.as_ref().unwrap().is_none(), b.counterexample.as_ref().unwrap().is_none());
        }
    }

    #[test]
    fn notion_names_parse() {
        for n in Notion::ALL {
            assert_eq!(n.name().parse::<Notion>().unwrap(), n);
        }
        assert_eq!("event".parse::<Notion>().unwrap(), Notion::Vee);
    }
}
