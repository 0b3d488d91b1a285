//! Text formats: automaton and witness documents, DOT export, reports.

use std::collections::HashMap;
use std::fmt::Write as _;

use indexmap::IndexMap;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::algebra::GeneratedMonoid;
use crate::automaton::{AutomatonError, Semiautomaton};
use crate::covering::{CoveringError, CoveringWitness, HomImageWitness};
use crate::pipeline::TreeReport;

pub const FORMAT_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum IoError {
    #[error("line {line}, column {column}: {message}")]
    Syntax { line: usize, column: usize, message: String },
    #[error("unsupported format_version {found}, expected {FORMAT_VERSION}")]
    Version { found: u32 },
    #[error("duplicate label `{label}` in `{field}`")]
    DuplicateLabel { field: &'static str, label: String },
    #[error("`transitions` has a row for `{symbol}`, which is not in `alphabet`")]
    UnknownSymbol { symbol: String },
    #[error("`transitions` has no row for symbol `{symbol}`")]
    MissingRow { symbol: String },
    #[error("row for symbol `{symbol}` has {found} entries, expected {expected}")]
    RaggedRow { symbol: String, expected: usize, found: usize },
    #[error("row for symbol `{symbol}`, entry {position}: unknown state `{label}`")]
    UnknownState { symbol: String, position: usize, label: String },
    #[error("`{field}` mentions unknown label `{label}`")]
    UnknownLabel { field: &'static str, label: String },
    #[error("`{field}` maps `{label}` twice")]
    DuplicateEntry { field: &'static str, label: String },
    #[error("`{field}` has no entry for `{label}`")]
    MissingEntry { field: &'static str, label: String },
    #[error("expected a {expected} witness, found {found}")]
    WrongKind { expected: WitnessKind, found: WitnessKind },
    #[error(transparent)]
    Automaton(#[from] AutomatonError),
    #[error(transparent)]
    Covering(#[from] CoveringError),
}

impl From<serde_json::Error> for IoError {
    fn from(e: serde_json::Error) -> Self {
        IoError::Syntax {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        }
    }
}

/// On-disk form of a semiautomaton: one row per symbol, listing the target
/// of every state in declaration order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AutomatonDocument {
    pub format_version: u32,
    pub states: Vec<String>,
    pub alphabet: Vec<String>,
    pub transitions: IndexMap<String, Vec<String>>,
}

fn unique<'a>(field: &'static str, labels: &'a [String]) -> Result<HashMap<&'a str, usize>, IoError> {
    let mut index = HashMap::with_capacity(labels.len());
    for (i, l) in labels.iter().enumerate() {
        if index.insert(l.as_str(), i).is_some() {
            return Err(IoError::DuplicateLabel { field, label: l.clone() });
        }
    }
    Ok(index)
}

impl AutomatonDocument {
    pub fn from_automaton(a: &Semiautomaton) -> Self {
        let transitions = a
            .alphabet()
            .iter()
            .enumerate()
            .map(|(x, sym)| {
                let row = (0..a.state_count()).map(|s| a.state_label(a.step(s, x)).to_string()).collect();
                (sym.clone(), row)
            })
            .collect();
        AutomatonDocument {
            format_version: FORMAT_VERSION,
            states: a.states().to_vec(),
            alphabet: a.alphabet().to_vec(),
            transitions,
        }
    }

    pub fn to_automaton(&self) -> Result<Semiautomaton, IoError> {
        if self.format_version != FORMAT_VERSION {
            return Err(IoError::Version {
                found: self.format_version,
            });
        }
        let state_index = unique("states", &self.states)?;
        let symbol_index = unique("alphabet", &self.alphabet)?;
        if let Some(symbol) = self.transitions.keys().find(|k| !symbol_index.contains_key(k.as_str())) {
            return Err(IoError::UnknownSymbol { symbol: symbol.clone() });
        }
        let n = self.states.len();
        let mut delta = vec![vec![0; self.alphabet.len()]; n];
        for (x, symbol) in self.alphabet.iter().enumerate() {
            let row = self
                .transitions
                .get(symbol)
                .ok_or_else(|| IoError::MissingRow { symbol: symbol.clone() })?;
            if row.len() != n {
                return Err(IoError::RaggedRow {
                    symbol: symbol.clone(),
                    expected: n,
                    found: row.len(),
                });
            }
            for (s, label) in row.iter().enumerate() {
                delta[s][x] = *state_index.get(label.as_str()).ok_or_else(|| IoError::UnknownState {
                    symbol: symbol.clone(),
                    position: s,
                    label: label.clone(),
                })?;
            }
        }
        Ok(Semiautomaton::new(self.states.clone(), self.alphabet.clone(), delta)?)
    }
}

pub fn parse_automaton(text: &str) -> Result<Semiautomaton, IoError> {
    serde_json::from_str::<AutomatonDocument>(text)?.to_automaton()
}

pub fn emit_automaton(a: &Semiautomaton) -> String {
    to_pretty(&AutomatonDocument::from_automaton(a))
}

fn to_pretty<T: Serialize>(value: &T) -> String {
    let mut text = serde_json::to_string_pretty(value).expect("documents serialize");
    text.push('\n');
    text
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum WitnessKind {
    Covering,
    HomImage,
}

impl std::fmt::Display for WitnessKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            WitnessKind::Covering => "covering",
            WitnessKind::HomImage => "hom-image",
        })
    }
}

/// Label pairs for `φ` and `ξ`.
///
/// For a covering, `phi` holds `(upper state, lower state)` for the domain
/// only and `xi` holds `(lower symbol, upper symbol)`. For a homomorphic
/// image both maps run from source to target: `phi` is
/// `(source state, target state)` and `xi` is `(source symbol, target symbol)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WitnessDocument {
    pub format_version: u32,
    pub kind: WitnessKind,
    pub phi: Vec<(String, String)>,
    pub xi: Vec<(String, String)>,
}

/// A witness document resolved against its two automata.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Witness {
    Covering(CoveringWitness),
    HomImage(HomImageWitness),
}

fn lookup(field: &'static str, index: &HashMap<&str, usize>, label: &str) -> Result<usize, IoError> {
    index.get(label).copied().ok_or_else(|| IoError::UnknownLabel {
        field,
        label: label.to_string(),
    })
}

/// Builds a map from the pairs, indexed by the first component.
fn resolve_pairs(
    field: &'static str,
    pairs: &[(String, String)],
    from: &[String],
    to: &[String],
) -> Result<Vec<Option<usize>>, IoError> {
    let from_index = unique(field, from)?;
    let to_index = unique(field, to)?;
    let mut map = vec![None; from.len()];
    for (a, b) in pairs {
        let i = lookup(field, &from_index, a)?;
        let j = lookup(field, &to_index, b)?;
        if map[i].replace(j).is_some() {
            return Err(IoError::DuplicateEntry { field, label: a.clone() });
        }
    }
    Ok(map)
}

fn total(field: &'static str, map: Vec<Option<usize>>, labels: &[String]) -> Result<Vec<usize>, IoError> {
    map.into_iter()
        .enumerate()
        .map(|(i, m)| {
            m.ok_or_else(|| IoError::MissingEntry {
                field,
                label: labels[i].clone(),
            })
        })
        .collect()
}

impl WitnessDocument {
    pub fn from_covering(w: &CoveringWitness) -> Self {
        let (upper, lower) = (w.upper(), w.lower());
        WitnessDocument {
            format_version: FORMAT_VERSION,
            kind: WitnessKind::Covering,
            phi: w
                .phi()
                .iter()
                .enumerate()
                .filter_map(|(s, l)| l.map(|l| (upper.state_label(s).to_string(), lower.state_label(l).to_string())))
                .collect(),
            xi: w
                .xi()
                .iter()
                .enumerate()
                .map(|(a, &b)| (lower.symbol_label(a).to_string(), upper.symbol_label(b).to_string()))
                .collect(),
        }
    }

    pub fn from_hom_image(w: &HomImageWitness) -> Self {
        let (source, target) = (w.source(), w.target());
        WitnessDocument {
            format_version: FORMAT_VERSION,
            kind: WitnessKind::HomImage,
            phi: w
                .phi()
                .iter()
                .enumerate()
                .map(|(s, &t)| (source.state_label(s).to_string(), target.state_label(t).to_string()))
                .collect(),
            xi: w
                .xi()
                .iter()
                .enumerate()
                .map(|(a, &b)| (source.symbol_label(a).to_string(), target.symbol_label(b).to_string()))
                .collect(),
        }
    }

    /// Resolves labels against `upper` and `lower`; for a homomorphic image
    /// these are the source and the target. The covering equation is not
    /// checked here.
    pub fn resolve(&self, upper: &Semiautomaton, lower: &Semiautomaton) -> Result<Witness, IoError> {
        if self.format_version != FORMAT_VERSION {
            return Err(IoError::Version {
                found: self.format_version,
            });
        }
        match self.kind {
            WitnessKind::Covering => {
                let phi = resolve_pairs("phi", &self.phi, upper.states(), lower.states())?;
                let xi = resolve_pairs("xi", &self.xi, lower.alphabet(), upper.alphabet())?;
                let xi = total("xi", xi, lower.alphabet())?;
                Ok(Witness::Covering(CoveringWitness::new(upper.clone(), lower.clone(), phi, xi)?))
            }
            WitnessKind::HomImage => {
                let phi = resolve_pairs("phi", &self.phi, upper.states(), lower.states())?;
                let phi = total("phi", phi, upper.states())?;
                let xi = resolve_pairs("xi", &self.xi, upper.alphabet(), lower.alphabet())?;
                let xi = total("xi", xi, upper.alphabet())?;
                Ok(Witness::HomImage(HomImageWitness::new(upper.clone(), lower.clone(), phi, xi)?))
            }
        }
    }

    pub fn to_covering(&self, upper: &Semiautomaton, lower: &Semiautomaton) -> Result<CoveringWitness, IoError> {
        match self.resolve(upper, lower)? {
            Witness::Covering(w) => Ok(w),
            Witness::HomImage(_) => Err(IoError::WrongKind {
                expected: WitnessKind::Covering,
                found: WitnessKind::HomImage,
            }),
        }
    }

    pub fn to_hom_image(&self, source: &Semiautomaton, target: &Semiautomaton) -> Result<HomImageWitness, IoError> {
        match self.resolve(source, target)? {
            Witness::HomImage(w) => Ok(w),
            Witness::Covering(_) => Err(IoError::WrongKind {
                expected: WitnessKind::HomImage,
                found: WitnessKind::Covering,
            }),
        }
    }
}

pub fn parse_witness(text: &str) -> Result<WitnessDocument, IoError> {
    let doc: WitnessDocument = serde_json::from_str(text)?;
    if doc.format_version != FORMAT_VERSION {
        return Err(IoError::Version {
            found: doc.format_version,
        });
    }
    Ok(doc)
}

pub fn emit_witness(doc: &WitnessDocument) -> String {
    to_pretty(doc)
}

fn dot_id(label: &str) -> String {
    format!("\"{}\"", label.replace('\\', "\\\\").replace('"', "\\\""))
}

/// The automaton graph in DOT. Nodes and edges follow state order, then
/// symbol order. With `merge_parallel`, edges sharing both endpoints become
/// one edge labelled `a,b`; otherwise every `(state, symbol)` gets its own
/// edge.
pub fn export_dot(a: &Semiautomaton, merge_parallel: bool) -> String {
    let mut out = String::from("digraph automaton {\n    rankdir=LR;\n");
    for s in a.states() {
        let _ = writeln!(out, "    {};", dot_id(s));
    }
    for s in 0..a.state_count() {
        let mut edges: IndexMap<usize, Vec<&str>> = IndexMap::new();
        let mut single = Vec::new();
        for x in 0..a.symbol_count() {
            if merge_parallel {
                edges.entry(a.step(s, x)).or_default().push(a.symbol_label(x));
            } else {
                single.push((a.step(s, x), vec![a.symbol_label(x)]));
            }
        }
        for (t, labels) in edges.into_iter().chain(single) {
            let _ = writeln!(
                out,
                "    {} -> {} [label={}];",
                dot_id(a.state_label(s)),
                dot_id(a.state_label(t)),
                dot_id(&labels.join(","))
            );
        }
    }
    out.push_str("}\n");
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MonoidElement {
    pub word: String,
    pub image: Vec<String>,
    pub class: &'static str,
}

/// `T(A)` with shortlex witness words and the multiplication table over
/// element indices.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MonoidReport {
    pub order: usize,
    pub elements: Vec<MonoidElement>,
    pub table: Vec<Vec<usize>>,
}

impl MonoidReport {
    pub fn new(a: &Semiautomaton, t: &GeneratedMonoid) -> Self {
        let elements = t
            .elements()
            .iter()
            .enumerate()
            .map(|(i, e)| MonoidElement {
                word: t.monoid().label(i).to_string(),
                image: e.image().iter().map(|&s| a.state_label(s).to_string()).collect(),
                class: if e.is_identity() {
                    "identity"
                } else if e.is_permutation() {
                    "permutation"
                } else if e.is_reset() {
                    "reset"
                } else {
                    "other"
                },
            })
            .collect();
        MonoidReport {
            order: t.order(),
            elements,
            table: t.monoid().table(),
        }
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("order: {}\nelements:\n", self.order);
        let width = self.elements.iter().map(|e| e.word.len()).max().unwrap_or(0);
        for (i, e) in self.elements.iter().enumerate() {
            let _ = writeln!(out, "  {i:>3}  {:<width$}  [{}]  {}", e.word, e.image.join(" "), e.class);
        }
        out.push_str("table:\n");
        let cell = self.order.saturating_sub(1).to_string().len();
        for row in &self.table {
            let cells: Vec<String> = row.iter().map(|x| format!("{x:>cell$}")).collect();
            let _ = writeln!(out, "  {}", cells.join(" "));
        }
        out
    }
}

/// Tree report plus the outcome of the full verification pass.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DecomposeReport {
    pub tree: TreeReport,
    pub verify_len: usize,
    pub verified: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub violation: Option<String>,
}

impl DecomposeReport {
    pub fn to_text(&self) -> String {
        let t = &self.tree;
        let mut out = String::new();
        let _ = writeln!(out, "covers: {} states, {} symbols", t.covered_states, t.covered_symbols);
        let _ = writeln!(out, "complete: {}", if t.complete { "yes" } else { "no" });
        let states = t.tree_states.map_or("overflow".to_string(), |n| n.to_string());
        let _ = writeln!(out, "leaves: {} (tree states {states}, covering domain {})", t.leaf_count, t.domain_size);
        match &self.violation {
            None => {
                let _ = writeln!(out, "verified: yes (words up to length {})", self.verify_len);
            }
            Some(e) => {
                let _ = writeln!(out, "verified: no ({e})");
            }
        }
        out.push_str("components:\n");
        for l in &t.leaves {
            let _ = writeln!(out, "  {} x {}", l.count, l.component);
        }
        out.push_str("nodes:\n");
        for n in &t.nodes {
            let mut line = format!("{}{} [symbols {}", "  ".repeat(n.depth + 1), n.kind, n.symbols);
            if let Some(s) = n.states {
                let _ = write!(line, ", states {s}");
            }
            if let Some(c) = n.covers_states {
                let _ = write!(line, ", covers {c} states, witness {}", n.witness);
            }
            line.push(']');
            out.push_str(&line);
            out.push('\n');
        }
        out
    }

    pub fn to_json(&self) -> String {
        to_pretty(self)
    }
}
