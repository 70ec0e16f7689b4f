//! Compact open subsets of the boundary path space in a canonical normal
//! form: a finite union of atomic cylinders held at a common depth.
//!
//! A piece `(w, b)` stands for the paths whose first `|w|` edges spell `w`
//! with atom `b` at the deepest position; over the empty word it collects the
//! paths whose range vertex is `b`. Every set is stored at a depth: pieces
//! either have full-depth words, or shorter words ending at a singular atom,
//! in which case the piece is a single path that stops there. Distinct pieces
//! at a common depth are disjoint and every valid piece is nonempty, so set
//! algebra reduces to operations on the piece sets once depths are aligned.

use std::collections::BTreeSet;
use std::fmt;

use crate::error::{Error, Result};
use crate::gbds::Word;
use crate::paths::{cylinder_intersect_raw, cylinder_member, BoundaryPath, Correspondence, CylinderBasic};

/// One atomic cylinder: a word and the atom at its deepest position.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Cyl {
    pub word: Word,
    pub atom: usize,
}

/// A compact open set in normal form.
#[derive(Clone, Debug)]
pub struct OpenSet {
    corr: Correspondence,
    depth: usize,
    pieces: BTreeSet<Cyl>,
}

impl OpenSet {
    pub fn empty(corr: &Correspondence) -> OpenSet {
        OpenSet { corr: corr.clone(), depth: 0, pieces: BTreeSet::new() }
    }

    /// The whole boundary path space. Depth one, not zero: paths whose first
    /// edge has the empty-range marker lie in no empty-word cylinder, so the
    /// covering needs one edge of lookahead.
    pub fn full(corr: &Correspondence) -> OpenSet {
        let mut pieces = BTreeSet::new();
        for e in corr.edges() {
            pieces.insert(Cyl { word: Word::single(e.label), atom: e.atom });
        }
        for &v in corr.singular_vertices() {
            pieces.insert(Cyl { word: Word::empty(), atom: v });
        }
        OpenSet { corr: corr.clone(), depth: 1, pieces }
    }

    /// The basic cylinder as an open set: one piece per atom of the element.
    pub fn from_cylinder(corr: &Correspondence, cyl: &CylinderBasic) -> OpenSet {
        let pieces = cyl
            .elem()
            .atom_ids()
            .map(|atom| Cyl { word: cyl.word().clone(), atom })
            .collect();
        OpenSet { corr: corr.clone(), depth: cyl.word().len(), pieces }
    }

    /// Builds a set from raw pieces, validating the normal-form invariants:
    /// atoms inside their word ideals, words at full depth or stopped at a
    /// singular atom.
    pub fn from_pieces(
        corr: &Correspondence,
        depth: usize,
        pieces: impl IntoIterator<Item = Cyl>,
    ) -> Result<OpenSet> {
        let sys = corr.sys();
        let mut set = BTreeSet::new();
        for p in pieces {
            if !sys.word_ideal_gen(&p.word).contains_atom(p.atom) {
                return Err(Error::Precondition(format!(
                    "atom '{}' lies outside the ideal of word {}",
                    sys.algebra().atom_name(p.atom),
                    sys.word_string(&p.word)
                )));
            }
            if p.word.len() > depth {
                return Err(Error::Invalid(format!(
                    "piece at word {} exceeds depth {depth}",
                    sys.word_string(&p.word)
                )));
            }
            if p.word.len() < depth && !corr.is_singular(p.atom) {
                return Err(Error::Invalid(format!(
                    "piece at word {} sits above depth {depth} but continues past '{}'",
                    sys.word_string(&p.word),
                    sys.algebra().atom_name(p.atom)
                )));
            }
            set.insert(p);
        }
        Ok(OpenSet { corr: corr.clone(), depth, pieces: set })
    }

    pub fn corr(&self) -> &Correspondence {
        &self.corr
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn pieces(&self) -> &BTreeSet<Cyl> {
        &self.pieces
    }

    /// Every valid piece contains a path, so emptiness is piece emptiness.
    pub fn is_empty(&self) -> bool {
        self.pieces.is_empty()
    }

    /// Rewrites the set at a deeper depth by the exact one-step expansion:
    /// a full-depth piece with a regular terminal atom splits over the
    /// continuation edges; pieces at singular atoms stay as point pieces.
    pub fn refine_to(&self, depth: usize) -> OpenSet {
        if depth <= self.depth {
            return self.clone();
        }
        let mut pieces = self.pieces.clone();
        for d in self.depth..depth {
            let mut next = BTreeSet::new();
            for p in &pieces {
                if p.word.len() == d && !self.corr.is_singular(p.atom) {
                    for e in self.corr.continuations(p.atom) {
                        let mut word = p.word.clone();
                        word.push(e.label);
                        next.insert(Cyl { word, atom: e.atom });
                    }
                } else {
                    next.insert(p.clone());
                }
            }
            pieces = next;
        }
        OpenSet { corr: self.corr.clone(), depth, pieces }
    }

    fn aligned(&self, other: &OpenSet) -> (OpenSet, OpenSet) {
        assert_eq!(
            self.corr, other.corr,
            "open set operands must come from the same system"
        );
        let d = self.depth.max(other.depth);
        (self.refine_to(d), other.refine_to(d))
    }

    pub fn union(&self, other: &OpenSet) -> OpenSet {
        let (a, b) = self.aligned(other);
        OpenSet {
            corr: a.corr,
            depth: a.depth,
            pieces: a.pieces.union(&b.pieces).cloned().collect(),
        }
    }

    pub fn intersect(&self, other: &OpenSet) -> OpenSet {
        let (a, b) = self.aligned(other);
        OpenSet {
            corr: a.corr,
            depth: a.depth,
            pieces: a.pieces.intersection(&b.pieces).cloned().collect(),
        }
    }

    pub fn difference(&self, other: &OpenSet) -> OpenSet {
        let (a, b) = self.aligned(other);
        OpenSet {
            corr: a.corr,
            depth: a.depth,
            pieces: a.pieces.difference(&b.pieces).cloned().collect(),
        }
    }

    pub fn complement(&self) -> OpenSet {
        OpenSet::full(&self.corr).difference(self)
    }

    pub fn is_subset(&self, other: &OpenSet) -> bool {
        self.difference(other).is_empty()
    }

    /// Pointwise membership, uniform over all piece shapes.
    pub fn contains_path(&self, path: &BoundaryPath) -> bool {
        let sys = self.corr.sys();
        self.pieces.iter().any(|p| {
            let cyl = CylinderBasic::new(sys, p.word.clone(), sys.algebra().atom_elem(p.atom))
                .expect("pieces are valid cylinders");
            cylinder_member(sys, path, &cyl)
        })
    }

    pub fn describe(&self) -> String {
        if self.pieces.is_empty() {
            return "∅".to_string();
        }
        let sys = self.corr.sys();
        self.pieces
            .iter()
            .map(|p| format!("N({}, {})", sys.word_string(&p.word), sys.algebra().atom_name(p.atom)))
            .collect::<Vec<_>>()
            .join(" ∪ ")
    }
}

impl fmt::Display for OpenSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.describe())
    }
}

impl PartialEq for OpenSet {
    fn eq(&self, other: &Self) -> bool {
        let (a, b) = self.aligned(other);
        a.pieces == b.pieces
    }
}

impl Eq for OpenSet {}

/// The exact intersection of two basic cylinders, in normal form.
pub fn cylinder_intersect(corr: &Correspondence, c1: &CylinderBasic, c2: &CylinderBasic) -> OpenSet {
    let raw = cylinder_intersect_raw(corr.sys(), c1, c2);
    OpenSet::from_cylinder(corr, &raw)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::gbds::Gbds;
    use crate::paths::build_correspondence;

    fn cyl(sys: &Gbds, names: &[&str], atoms: &[&str]) -> CylinderBasic {
        let word = sys.word_from_names(names).unwrap();
        let elem = sys.algebra().elem_from_names(atoms).unwrap();
        CylinderBasic::new(sys, word, elem).unwrap()
    }

    #[test]
    fn unit_cylinder_covers_the_sink_boundary() {
        let sys = fixtures::sink();
        let corr = build_correspondence(&sys);
        let nx = OpenSet::from_cylinder(&corr, &cyl(&sys, &[], &["x"]));
        let ny = OpenSet::from_cylinder(&corr, &cyl(&sys, &[], &["y"]));
        assert_eq!(nx.union(&ny), OpenSet::full(&corr));
        assert!(nx.intersect(&ny).is_empty());
    }

    #[test]
    fn marker_paths_escape_every_empty_word_cylinder() {
        let sys = fixtures::sink_with_spare();
        let corr = build_correspondence(&sys);
        let whole = OpenSet::from_cylinder(&corr, &cyl(&sys, &[], &["x", "y", "z"]));
        let gap = OpenSet::full(&corr).difference(&whole);
        assert!(!gap.is_empty());
        let marker_path = BoundaryPath::parse(&sys, "e:a@z").unwrap();
        assert!(gap.contains_path(&marker_path));
        assert!(!whole.contains_path(&marker_path));
        assert!(OpenSet::full(&corr).contains_path(&marker_path));
        // the gap is exactly that one point
        assert_eq!(gap.pieces().len(), 1);
    }

    #[test]
    fn refinement_preserves_membership() {
        for sys in [fixtures::sink(), fixtures::full_shift(), fixtures::sink_with_spare()] {
            let corr = build_correspondence(&sys);
            let paths = corr.enumerate_boundary(4, 3);
            let mut sets = vec![OpenSet::full(&corr), OpenSet::empty(&corr)];
            for label in 0..sys.label_count() {
                let word = Word::single(label);
                let gen = sys.ideal_gen(label).clone();
                let c = CylinderBasic::new(&sys, word, gen).unwrap();
                sets.push(OpenSet::from_cylinder(&corr, &c));
            }
            for s in &sets {
                let deeper = s.refine_to(s.depth() + 2);
                assert_eq!(s, &deeper);
                for p in &paths {
                    assert_eq!(s.contains_path(p), deeper.contains_path(p));
                }
            }
        }
    }

    #[test]
    fn boolean_laws_hold_in_normal_form() {
        let sys = fixtures::sink();
        let corr = build_correspondence(&sys);
        let a = OpenSet::from_cylinder(&corr, &cyl(&sys, &["a"], &["y"]));
        let b = OpenSet::from_cylinder(&corr, &cyl(&sys, &[], &["x"]));
        let c = OpenSet::from_cylinder(&corr, &cyl(&sys, &[], &["y"]));
        assert_eq!(a.union(&b).intersect(&c), a.intersect(&c).union(&b.intersect(&c)));
        assert_eq!(a.complement().complement(), a);
        assert_eq!(a.difference(&b), a.intersect(&b.complement()));
        assert!(a.is_subset(&b), "every path through the sink edge has range x");
        assert!(OpenSet::from_cylinder(&corr, &cyl(&sys, &["a"], &["y"]))
            .difference(&OpenSet::full(&corr))
            .is_empty());
    }

    #[test]
    fn cylinder_intersection_agrees_with_membership() {
        let shift = fixtures::full_shift();
        let corr = build_correspondence(&shift);
        let ca = cyl(&shift, &["a"], &["*"]);
        let cab = cyl(&shift, &["a", "b"], &["*"]);
        let meet = cylinder_intersect(&corr, &ca, &cab);
        assert_eq!(meet, OpenSet::from_cylinder(&corr, &cab));
        let cb = cyl(&shift, &["b"], &["*"]);
        assert!(cylinder_intersect(&corr, &ca, &cb).is_empty());
        for p in corr.enumerate_boundary(2, 2) {
            let lhs = cylinder_member(&shift, &p, &ca) && cylinder_member(&shift, &p, &cab);
            assert_eq!(lhs, meet.contains_path(&p));
        }
    }

    #[test]
    fn every_piece_has_a_continuation_witness() {
        // the graph search the emptiness rule leans on: from any piece's
        // terminal atom a singular vertex or a cycle is reachable
        for sys in [
            fixtures::sink(),
            fixtures::full_shift(),
            fixtures::sink_with_spare(),
            fixtures::swap(),
            fixtures::all_sink(),
        ] {
            let corr = build_correspondence(&sys);
            let full = OpenSet::full(&corr).refine_to(3);
            let paths = corr.enumerate_boundary(6, 4);
            for p in full.pieces() {
                let mut seen = vec![false; sys.algebra().atom_count()];
                let mut frontier = vec![p.atom];
                let mut witnessed = corr.is_singular(p.atom);
                while let Some(v) = frontier.pop() {
                    if seen[v] {
                        witnessed = true;
                        continue;
                    }
                    seen[v] = true;
                    if corr.is_singular(v) {
                        witnessed = true;
                    }
                    for e in corr.continuations(v) {
                        frontier.push(e.d());
                    }
                }
                assert!(witnessed, "piece with unreachable boundary");
                let single = OpenSet::from_pieces(&corr, full.depth(), [p.clone()]).unwrap();
                assert!(
                    paths.iter().any(|mu| single.contains_path(mu)),
                    "piece {} contains no enumerated path",
                    single.describe()
                );
            }
        }
    }

    #[test]
    fn from_pieces_rejects_broken_invariants() {
        let sys = fixtures::sink();
        let corr = build_correspondence(&sys);
        let a = sys.word_from_names(&["a"]).unwrap();
        // atom outside the word ideal
        assert!(OpenSet::from_pieces(&corr, 1, [Cyl { word: a.clone(), atom: 0 }]).is_err());
        // shallow piece with a regular terminal
        assert!(OpenSet::from_pieces(&corr, 1, [Cyl { word: Word::empty(), atom: 0 }]).is_err());
        // too deep
        assert!(OpenSet::from_pieces(&corr, 0, [Cyl { word: a, atom: 1 }]).is_err());
    }
}
