//! Invariant open subsets of the boundary and the restricted system an
//! invariant set carries.
//!
//! An open set is invariant when no word of the partial action moves any of
//! it outside itself. Certification is by exhaustive check over reduced
//! words up to a depth, and the certificate travels with the set: the
//! restricted system refuses words longer than what was certified instead
//! of silently assuming invariance. The restricted system is kept lazily,
//! as operations on compact opens inside the carrier, since its algebra of
//! opens has no finite atom list in general.

use crate::action::{act_on_openset, domain_of, reduced_words, Bisection, FreeWord};
use crate::error::{Error, Result};
use crate::gbds::Word;
use crate::openset::{Cyl, OpenSet};
use crate::paths::Correspondence;
use crate::report::CheckReport;

/// An open set together with the word depth to which its invariance has
/// been verified.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InvariantSet {
    carrier: OpenSet,
    depth: usize,
}

impl InvariantSet {
    pub fn carrier(&self) -> &OpenSet {
        &self.carrier
    }

    pub fn certified_depth(&self) -> usize {
        self.depth
    }

    /// The whole boundary, invariant at any depth.
    pub fn whole(corr: &Correspondence, depth: usize) -> InvariantSet {
        InvariantSet { carrier: OpenSet::full(corr), depth }
    }

    pub fn empty(corr: &Correspondence, depth: usize) -> InvariantSet {
        InvariantSet { carrier: OpenSet::empty(corr), depth }
    }
}

/// The outcome of an invariance check: a certificate, or the word and piece
/// that escape.
#[derive(Clone, Debug)]
pub enum Invariance {
    Invariant(InvariantSet),
    Counterexample { t: FreeWord, piece: Cyl },
}

impl Invariance {
    pub fn is_invariant(&self) -> bool {
        matches!(self, Invariance::Invariant(_))
    }

    pub fn into_certificate(self) -> Option<InvariantSet> {
        match self {
            Invariance::Invariant(set) => Some(set),
            Invariance::Counterexample { .. } => None,
        }
    }
}

/// Checks that every reduced word up to `depth` keeps the set inside
/// itself, reporting the first escaping piece otherwise.
pub fn check_invariance(set: &OpenSet, depth: usize) -> Invariance {
    let corr = set.corr().clone();
    for t in reduced_words(corr.sys().label_count(), depth) {
        if t.is_identity() {
            continue;
        }
        let cut = set.intersect(&domain_of(&corr, &t.inverse()));
        let moved = act_on_openset(&t, &cut).expect("the cut lies inside the domain");
        let escaped = moved.difference(set);
        if let Some(piece) = escaped.pieces().iter().next() {
            return Invariance::Counterexample { t, piece: piece.clone() };
        }
    }
    Invariance::Invariant(InvariantSet { carrier: set.clone(), depth })
}

/// The system an invariant open set carries, with compact opens inside the
/// carrier standing in for algebra elements.
#[derive(Clone, Debug)]
pub struct LazyBds {
    corr: Correspondence,
    base: InvariantSet,
}

/// Restricts the boundary system to an invariant open set.
pub fn restrict(corr: &Correspondence, base: &InvariantSet) -> LazyBds {
    LazyBds { corr: corr.clone(), base: base.clone() }
}

impl LazyBds {
    pub fn base(&self) -> &OpenSet {
        self.base.carrier()
    }

    pub fn certified_depth(&self) -> usize {
        self.base.certified_depth()
    }

    /// Whether a compact open belongs to the restricted system.
    pub fn member(&self, s: &OpenSet) -> bool {
        s.is_subset(self.base.carrier())
    }

    fn budget(&self, needed: usize) -> Result<()> {
        let certified = self.base.certified_depth();
        if needed > certified {
            return Err(Error::DepthExceeded { certified, needed });
        }
        Ok(())
    }

    /// The action of one label: pull the part of `s` lying over the label's
    /// carrier back through it.
    pub fn apply(&self, label: usize, s: &OpenSet) -> Result<OpenSet> {
        self.budget(1)?;
        if !self.member(s) {
            return Err(Error::Precondition(
                "the operand lies outside the carrier".to_string(),
            ));
        }
        let g = FreeWord::generator(label);
        let cut = s.intersect(&domain_of(&self.corr, &g));
        act_on_openset(&g.inverse(), &cut)
    }

    /// The action of a word, first letter first. Refuses words longer than
    /// the invariance certificate covers.
    pub fn apply_word(&self, word: &Word, s: &OpenSet) -> Result<OpenSet> {
        self.budget(word.len())?;
        let mut cur = s.clone();
        for &label in word.letters() {
            cur = self.apply(label, &cur)?;
        }
        Ok(cur)
    }

    /// The generator of the label's ideal in the restricted system: the
    /// image of the whole carrier under the label.
    pub fn ideal_gen(&self, label: usize) -> Result<OpenSet> {
        self.apply(label, self.base.carrier())
    }
}

/// The degree of a nonzero bisection under the canonical grading.
pub fn grading_degree(b: &Bisection) -> Result<i64> {
    b.degree()
}

/// Verifies that the restricted system behaves like a system: the action
/// maps stay inside the carrier, are lattice homomorphisms bounded by their
/// ideals, and compose letterwise on words the certificate covers.
pub fn homomorphism_check(lazy: &LazyBds) -> CheckReport {
    let mut report = CheckReport::new("restricted system structure");
    let corr = lazy.corr.clone();
    let sys = corr.sys();
    let base = lazy.base().clone();

    let mut sets: Vec<OpenSet> = vec![base.clone(), OpenSet::empty(&corr)];
    for p in base.pieces() {
        sets.push(
            OpenSet::from_pieces(&corr, base.depth(), [p.clone()])
                .expect("pieces of a valid set stay valid"),
        );
    }
    for i in (2..sets.len()).step_by(2) {
        let j = if i + 1 < sets.len() { i + 1 } else { 2 };
        sets.push(sets[i].union(&sets[j]));
    }

    let mut inside_ok = true;
    let mut lattice_ok = true;
    let mut bound_ok = true;
    for label in 0..sys.label_count() {
        let gen = match lazy.ideal_gen(label) {
            Ok(g) => g,
            Err(_) => {
                inside_ok = false;
                continue;
            }
        };
        inside_ok &= gen.is_subset(&base);
        for s in &sets {
            let Ok(img) = lazy.apply(label, s) else {
                inside_ok = false;
                continue;
            };
            inside_ok &= img.is_subset(&base);
            bound_ok &= img.is_subset(&gen);
            for t in &sets {
                let Ok(img_t) = lazy.apply(label, t) else { continue };
                let Ok(join) = lazy.apply(label, &s.union(t)) else {
                    lattice_ok = false;
                    continue;
                };
                let Ok(meet) = lazy.apply(label, &s.intersect(t)) else {
                    lattice_ok = false;
                    continue;
                };
                lattice_ok &= join == img.union(&img_t);
                lattice_ok &= meet == img.intersect(&img_t);
            }
        }
    }
    report.push("images stay inside", inside_ok, "the carrier absorbs every label");
    report.push("lattice homomorphism", lattice_ok, "labels preserve joins and meets");
    report.push("ideal bound", bound_ok, "images lie under the label's generator");

    let mut words_ok = true;
    for w in sys.wstar(lazy.certified_depth()) {
        for s in sets.iter().take(4) {
            let folded = w.letters().iter().try_fold(s.clone(), |cur, &l| {
                lazy.apply(l, &cur)
            });
            match (lazy.apply_word(&w, s), folded) {
                (Ok(a), Ok(b)) => words_ok &= a == b,
                _ => words_ok = false,
            }
        }
    }
    report.push("words fold letterwise", words_ok, "apply_word agrees with iteration");

    let too_deep = sys.wstar(lazy.certified_depth() + 1).into_iter().find(|w| {
        w.len() == lazy.certified_depth() + 1
    });
    let refusal_ok = match too_deep {
        Some(w) => matches!(
            lazy.apply_word(&w, &base),
            Err(Error::DepthExceeded { certified, needed })
                if certified == lazy.certified_depth() && needed == w.len()
        ),
        None => true,
    };
    report.push(
        "certificate honored",
        refusal_ok,
        "words beyond the certified depth are refused",
    );

    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::paths::{build_correspondence, CylinderBasic};

    #[test]
    fn single_orbit_systems_have_no_proper_invariant_sets() {
        let sys = fixtures::sink();
        let corr = build_correspondence(&sys);
        let word = sys.word_from_names(&["a"]).unwrap();
        let edge = OpenSet::from_cylinder(
            &corr,
            &CylinderBasic::new(&sys, word, sys.ideal_gen(0).clone()).unwrap(),
        );
        match check_invariance(&edge, 2) {
            Invariance::Counterexample { t, piece } => {
                assert_eq!(t.describe(&sys), "a⁻¹");
                assert_eq!(piece.word.len(), 0);
            }
            Invariance::Invariant(_) => panic!("the edge cylinder moves off itself"),
        }
        assert!(check_invariance(&OpenSet::full(&corr), 3).is_invariant());
        assert!(check_invariance(&OpenSet::empty(&corr), 3).is_invariant());
    }

    #[test]
    fn orbit_closures_split_the_spare_sink() {
        let sys = fixtures::sink_with_spare();
        let corr = build_correspondence(&sys);
        let y = sys.algebra().atom_index("y").unwrap();
        let z = sys.algebra().atom_index("z").unwrap();
        let a = sys.word_from_names(&["a"]).unwrap();
        let orbit = |atom: usize| {
            OpenSet::from_pieces(
                &corr,
                1,
                [
                    Cyl { word: a.clone(), atom },
                    Cyl { word: Word::empty(), atom },
                ],
            )
            .unwrap()
        };
        let first = check_invariance(&orbit(y), 3);
        let second = check_invariance(&orbit(z), 3);
        assert!(first.is_invariant() && second.is_invariant());
        let both = orbit(y).union(&orbit(z));
        assert_eq!(both, OpenSet::full(&corr));

        let lazy = restrict(&corr, &first.into_certificate().unwrap());
        let gen = lazy.ideal_gen(0).unwrap();
        assert_eq!(gen.describe(), "N(ε, y)");
        let report = homomorphism_check(&lazy);
        assert!(report.passed(), "{}", report.render());
    }

    #[test]
    fn everything_is_invariant_without_action() {
        let sys = fixtures::all_sink();
        let corr = build_correspondence(&sys);
        let p = sys.algebra().atom_index("p").unwrap();
        let one = OpenSet::from_pieces(&corr, 0, [Cyl { word: Word::empty(), atom: p }]).unwrap();
        let cert = check_invariance(&one, 2).into_certificate().unwrap();
        let lazy = restrict(&corr, &cert);
        assert!(lazy.ideal_gen(0).unwrap().is_empty());
        assert!(homomorphism_check(&lazy).passed());
    }

    #[test]
    fn certificates_bound_word_length() {
        let sys = fixtures::full_shift();
        let corr = build_correspondence(&sys);
        let cert = check_invariance(&OpenSet::full(&corr), 1).into_certificate().unwrap();
        let lazy = restrict(&corr, &cert);
        let ab = sys.word_from_names(&["a", "b"]).unwrap();
        match lazy.apply_word(&ab, lazy.base()) {
            Err(Error::DepthExceeded { certified, needed }) => {
                assert_eq!((certified, needed), (1, 2));
            }
            other => panic!("expected a depth refusal, got {other:?}"),
        }
        let a = sys.word_from_names(&["a"]).unwrap();
        let back = lazy.apply_word(&a, lazy.base()).unwrap();
        assert_eq!(back, OpenSet::full(&corr));
    }

    #[test]
    fn restriction_to_the_whole_space_is_the_system_itself() {
        for sys in [fixtures::sink(), fixtures::full_shift(), fixtures::swap()] {
            let corr = build_correspondence(&sys);
            let lazy = restrict(&corr, &InvariantSet::whole(&corr, 2));
            let report = homomorphism_check(&lazy);
            assert!(report.passed(), "{}", report.render());
            for label in 0..sys.label_count() {
                let gen = lazy.ideal_gen(label).unwrap();
                let expected = OpenSet::from_cylinder(
                    &corr,
                    &CylinderBasic::new(&sys, Word::empty(), sys.ideal_gen(label).clone())
                        .unwrap(),
                );
                assert_eq!(gen, expected);
            }
        }
    }

    #[test]
    fn degrees_pass_through_the_grading() {
        let sys = fixtures::full_shift();
        let corr = build_correspondence(&sys);
        let a = sys.word_from_names(&["a"]).unwrap();
        let s = Bisection::shift_isometry(&corr, &a, sys.ideal_gen(0)).unwrap();
        assert_eq!(grading_degree(&s).unwrap(), 1);
        assert_eq!(grading_degree(&s.star()).unwrap(), -1);
        assert!(grading_degree(&Bisection::zero(&corr)).is_err());
    }
}
