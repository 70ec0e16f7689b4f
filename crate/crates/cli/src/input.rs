//! File formats and the little expression grammars used on the command line.
//!
//! A system file describes a generalized Boolean dynamical system over the
//! power set of a finite atom list:
//!
//! ```json
//! {
//!   "atoms": ["x", "y"],
//!   "labels": ["a"],
//!   "actions": { "a": { "x": ["y"] } },
//!   "ideals": { "a": ["y"] },
//!   "unital": true
//! }
//! ```
//!
//! Atoms missing from an action map to zero; labels missing from `ideals`
//! default to the range of their action. An action file describes a finite
//! partial action of a free group by its one-step maps:
//!
//! ```json
//! {
//!   "points": ["x", "y"],
//!   "generators": [
//!     { "name": "a", "v": ["x"], "v_inv": ["y"], "rho": { "y": "x" } }
//!   ]
//! }
//! ```
//!
//! `rho` sends a point of the carrier `v_inv` to its image in `v`; the
//! carriers themselves are optional and, when present, are cross-checked
//! against the ones the maps imply.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use anyhow::{bail, Context, Result};
use serde::Deserialize;

use bdsys_core::action::{FreeWord, Letter};
use bdsys_core::gbds::{Gbds, Word};
use bdsys_core::openset::OpenSet;
use bdsys_core::paths::{Correspondence, CylinderBasic};
use bdsys_core::reconstruct::FinitePartialAction;
use bdsys_core::stone::{BooleanAlgebra, Element};

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct SystemFile {
    atoms: Vec<String>,
    labels: Vec<String>,
    actions: BTreeMap<String, BTreeMap<String, Vec<String>>>,
    #[serde(default)]
    ideals: Option<BTreeMap<String, Vec<String>>>,
    #[serde(default = "default_true")]
    unital: bool,
}

fn default_true() -> bool {
    true
}

/// Loads a system file without checking the dynamical laws, so that broken
/// systems can still be fed to `validate` for a report.
pub fn load_system_unchecked(path: &Path) -> Result<Gbds> {
    let text = fs::read_to_string(path)
        .with_context(|| format!("cannot read {}", path.display()))?;
    let file: SystemFile = serde_json::from_str(&text)
        .with_context(|| format!("{} is not a valid system file", path.display()))?;
    if !file.unital {
        bail!("only systems on a unital algebra are modeled");
    }
    let algebra = BooleanAlgebra::new(file.atoms)?;
    for name in file.actions.keys() {
        if !file.labels.contains(name) {
            bail!("action for unknown label '{name}'");
        }
    }
    if let Some(ideals) = &file.ideals {
        for name in ideals.keys() {
            if !file.labels.contains(name) {
                bail!("ideal for unknown label '{name}'");
            }
        }
    }
    let mut atom_images = Vec::new();
    let mut ideal_gens = Vec::new();
    for label in &file.labels {
        let map = file
            .actions
            .get(label)
            .with_context(|| format!("no action given for label '{label}'"))?;
        for name in map.keys() {
            algebra
                .atom_index(name)
                .with_context(|| format!("action '{label}' names unknown atom '{name}'"))?;
        }
        let mut images = Vec::new();
        let mut range = algebra.zero();
        for atom in algebra.atom_names() {
            let img = match map.get(atom) {
                Some(names) => algebra
                    .elem_from_names(names)
                    .with_context(|| format!("image of '{atom}' under '{label}'"))?,
                None => algebra.zero(),
            };
            range = range.join(&img);
            images.push(img);
        }
        let gen = match file.ideals.as_ref().and_then(|m| m.get(label)) {
            Some(names) => algebra
                .elem_from_names(names)
                .with_context(|| format!("ideal of '{label}'"))?,
            None => range,
        };
        atom_images.push(images);
        ideal_gens.push(gen);
    }
    Ok(Gbds::from_parts(algebra, file.labels, atom_images, ideal_gens)?)
}

/// Loads a system file and insists it satisfies the dynamical laws.
pub fn load_system(path: &Path) -> Result<Gbds> {
    let sys = load_system_unchecked(path)?;
    let report = sys.validate();
    if let Some(bad) = report.items.iter().find(|i| !i.pass) {
        bail!("{} violates '{}': {}", path.display(), bad.label, bad.detail);
    }
    Ok(sys)
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ActionFile {
    points: Vec<String>,
    generators: Vec<GeneratorFile>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct GeneratorFile {
    name: String,
    #[serde(default)]
    v: Option<Vec<String>>,
    #[serde(default)]
    v_inv: Option<Vec<String>>,
    rho: BTreeMap<String, String>,
}

/// A carrier pair as declared in the file, to be checked against the maps.
pub struct DeclaredCarriers {
    pub v: Option<Vec<String>>,
    pub v_inv: Option<Vec<String>>,
}

pub fn load_action(path: &Path) -> Result<(FinitePartialAction, Vec<DeclaredCarriers>)> {
    let text = fs::read_to_string(path)
        .with_context(|| format!("cannot read {}", path.display()))?;
    let file: ActionFile = serde_json::from_str(&text)
        .with_context(|| format!("{} is not a valid action file", path.display()))?;
    let index = |name: &str| -> Result<usize> {
        file.points
            .iter()
            .position(|p| p == name)
            .with_context(|| format!("unknown point '{name}'"))
    };
    let mut names = Vec::new();
    let mut forward = Vec::new();
    let mut declared = Vec::new();
    for g in file.generators {
        let mut map = vec![None; file.points.len()];
        for (from, to) in &g.rho {
            map[index(from)?] = Some(index(to)?);
        }
        names.push(g.name);
        forward.push(map);
        declared.push(DeclaredCarriers { v: g.v, v_inv: g.v_inv });
    }
    let action = FinitePartialAction::new(file.points, names, forward)?;
    Ok((action, declared))
}

/// `a.b.a`, or `ε` (also the empty string) for the empty word.
pub fn parse_word(sys: &Gbds, text: &str) -> Result<Word> {
    if text.is_empty() || text == "ε" {
        return Ok(Word::empty());
    }
    let mut letters = Vec::new();
    for name in text.split('.') {
        letters.push(sys.label_index(name)?);
    }
    Ok(Word::new(letters))
}

/// `a.b^-1.a`: a dot-separated free group word, `^-1` marking inverses.
pub fn parse_free_word(sys: &Gbds, text: &str) -> Result<FreeWord> {
    if text.is_empty() || text == "ε" {
        return Ok(FreeWord::identity());
    }
    let mut letters = Vec::new();
    for token in text.split('.') {
        let (name, inverse) = match token.strip_suffix("^-1") {
            Some(name) => (name, true),
            None => (token, false),
        };
        letters.push(Letter { label: sys.label_index(name)?, inverse });
    }
    Ok(FreeWord::from_letters(letters))
}

/// Comma-separated atom names; the empty string is the zero element.
pub fn parse_atoms(algebra: &BooleanAlgebra, text: &str) -> Result<Element> {
    if text.is_empty() {
        return Ok(algebra.zero());
    }
    Ok(algebra.elem_from_names(&text.split(',').collect::<Vec<_>>())?)
}

/// `full`, `empty`, or a union of cylinders `WORD:ATOMS` joined by `+`,
/// e.g. `a:y+:x` for N(a, {y}) ∪ N(ε, {x}).
pub fn parse_set(corr: &Correspondence, text: &str) -> Result<OpenSet> {
    match text {
        "full" => return Ok(OpenSet::full(corr)),
        "empty" => return Ok(OpenSet::empty(corr)),
        _ => {}
    }
    let sys = corr.sys();
    let mut set = OpenSet::empty(corr);
    for piece in text.split('+') {
        let Some((word, atoms)) = piece.split_once(':') else {
            bail!("cylinder '{piece}' is missing the ':' between word and atoms");
        };
        let cyl = CylinderBasic::new(sys, parse_word(sys, word)?, parse_atoms(sys.algebra(), atoms)?)?;
        set = set.union(&OpenSet::from_cylinder(corr, &cyl));
    }
    Ok(set)
}
