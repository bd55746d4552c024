//! JSON input documents.

use std::collections::BTreeMap;
use std::path::Path;
use std::sync::Arc;

use mucofix::demos::{ClassDecl, ClassTable};
use mucofix::lattice::validate_lattice;
use mucofix::{FiniteLattice, FinitePoset, LatticeError, MutualPair};
use serde::Deserialize;

use crate::CliError;

/// `{"elements": [...], "leq": [[lo, hi], ...]}`; the order is the
/// reflexive-transitive closure of `leq`.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LatticeDoc {
    pub elements: Vec<String>,
    #[serde(default)]
    pub leq: Vec<(String, String)>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PairDoc {
    #[serde(rename = "O")]
    pub o: LatticeDoc,
    #[serde(rename = "P")]
    pub p: LatticeDoc,
    #[serde(rename = "F")]
    pub f: BTreeMap<String, String>,
    #[serde(rename = "G")]
    pub g: BTreeMap<String, String>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ClassDoc {
    pub name: String,
    #[serde(default)]
    pub generic: bool,
    #[serde(default)]
    pub superclass: Option<String>,
}

/// A document of either kind, told apart by its keys.
#[derive(Debug, Clone)]
pub enum Document {
    Lattice(LatticeDoc),
    Pair(PairDoc),
}

pub fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

fn json_err(what: &str, e: serde_json::Error) -> CliError {
    CliError::Input(format!("malformed {what}: {e}"))
}

pub fn parse_document(text: &str) -> Result<Document, CliError> {
    let value: serde_json::Value = serde_json::from_str(text).map_err(|e| json_err("document", e))?;
    if value.get("O").is_some() || value.get("F").is_some() {
        serde_json::from_value(value).map(Document::Pair).map_err(|e| json_err("pair document", e))
    } else {
        serde_json::from_value(value).map(Document::Lattice).map_err(|e| json_err("lattice document", e))
    }
}

impl LatticeDoc {
    /// Builds the poset; duplicate edges are harmless. Unknown names and
    /// duplicate elements are input errors, order violations are returned
    /// as `Ok(Err(..))` so callers can report them as check failures.
    pub fn poset(&self) -> Result<Result<FinitePoset, LatticeError>, CliError> {
        let index = |name: &str| {
            self.elements
                .iter()
                .position(|e| e == name)
                .ok_or_else(|| CliError::Input(format!("leq mentions unknown element `{name}`")))
        };
        let mut edges = Vec::with_capacity(self.leq.len());
        for (lo, hi) in &self.leq {
            edges.push((index(lo)?, index(hi)?));
        }
        match FinitePoset::from_edges(self.elements.clone(), &edges) {
            Err(e @ (LatticeError::NotAPoset(_) | LatticeError::NotALattice { .. })) => Ok(Err(e)),
            Err(e) => Err(CliError::Input(e.to_string())),
            Ok(p) => Ok(Ok(p)),
        }
    }

    /// The lattice, treating any order failure as an input error.
    pub fn lattice(&self) -> Result<FiniteLattice, CliError> {
        let poset = self.poset()?.map_err(|e| CliError::Input(e.to_string()))?;
        validate_lattice(poset).map_err(|e| CliError::Input(e.to_string()))
    }
}

fn table(map: &BTreeMap<String, String>, from: &FiniteLattice, to: &FiniteLattice, name: &str) -> Result<Vec<usize>, CliError> {
    for k in map.keys() {
        if from.index_of(k).is_none() {
            return Err(CliError::Input(format!("{name} maps unknown element `{k}`")));
        }
    }
    from.elements()
        .map(|x| {
            let label = from.label(x);
            let image = map
                .get(label)
                .ok_or_else(|| CliError::Input(format!("{name} has no image for `{label}`")))?;
            to.index_of(image)
                .ok_or_else(|| CliError::Input(format!("{name}({label}) = `{image}` is not an element")))
        })
        .collect()
}

impl PairDoc {
    pub fn pair(&self) -> Result<MutualPair, CliError> {
        let o = Arc::new(self.o.lattice()?);
        let p = Arc::new(self.p.lattice()?);
        let f = table(&self.f, &o, &p, "F")?;
        let g = table(&self.g, &p, &o, "G")?;
        MutualPair::new(o, p, f, g).map_err(|e| CliError::Input(e.to_string()))
    }
}

pub fn load_pair(path: &Path) -> Result<MutualPair, CliError> {
    match parse_document(&read(path)?)? {
        Document::Pair(doc) => doc.pair(),
        Document::Lattice(_) => Err(CliError::Input(format!("{} holds a lattice, expected a pair", path.display()))),
    }
}

pub fn parse_class_table(text: &str) -> Result<ClassTable, CliError> {
    let docs: Vec<ClassDoc> = serde_json::from_str(text).map_err(|e| json_err("class table", e))?;
    let decls: Vec<ClassDecl> = docs
        .into_iter()
        .map(|d| ClassDecl {
            name: d.name,
            generic: d.generic,
            superclass: d.superclass,
        })
        .collect();
    ClassTable::new(&decls).map_err(|e| CliError::Input(e.to_string()))
}
