//! Generalized Boolean dynamical systems.
//!
//! A system is a finite Boolean algebra together with a finite label set, one
//! action per label, and one ideal per label that contains the action's
//! range. An action is a Boolean homomorphism sending zero to zero; on a
//! finite algebra that is the same thing as an assignment of pairwise
//! disjoint images to the atoms, which in turn is dual to a partial function
//! on atoms (each atom of the image remembers the unique atom it came from).
//! That dual partial function, [`Gbds::src`], drives most path and filter
//! computations downstream.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::report::CheckReport;
use crate::stone::{BooleanAlgebra, Element, FilterContext, Ideal};

/// A word over the label alphabet, stored as label indices.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Word(Vec<usize>);

impl Word {
    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn new(letters: Vec<usize>) -> Self {
        Word(letters)
    }

    pub fn single(label: usize) -> Self {
        Word(vec![label])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn letters(&self) -> &[usize] {
        &self.0
    }

    pub fn letter(&self, i: usize) -> usize {
        self.0[i]
    }

    pub fn first(&self) -> Option<usize> {
        self.0.first().copied()
    }

    pub fn last(&self) -> Option<usize> {
        self.0.last().copied()
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        Word(v)
    }

    pub fn push(&mut self, label: usize) {
        self.0.push(label);
    }

    /// Prefix of length `n`.
    pub fn prefix(&self, n: usize) -> Word {
        Word(self.0[..n].to_vec())
    }

    /// Suffix starting at position `n` (0-based).
    pub fn suffix(&self, n: usize) -> Word {
        Word(self.0[n..].to_vec())
    }

    pub fn starts_with(&self, prefix: &Word) -> bool {
        self.0.len() >= prefix.0.len() && self.0[..prefix.0.len()] == prefix.0[..]
    }

    /// `other` such that `self = prefix . other`, if `prefix` is a prefix.
    pub fn strip_prefix(&self, prefix: &Word) -> Option<Word> {
        self.starts_with(prefix).then(|| self.suffix(prefix.len()))
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Word{:?}", self.0)
    }
}

#[derive(Debug)]
struct GbdsInner {
    algebra: BooleanAlgebra,
    labels: Vec<String>,
    /// Per label, per atom: the image of that atom under the action.
    atom_images: Vec<Vec<Element>>,
    /// Per label: generator of the declared ideal for that label.
    ideal_gens: Vec<Element>,
    /// Per label, per atom `b`: the unique atom `a` with `b` in the image of
    /// `a`, when it exists. Ambiguous on systems that fail validation.
    src: Vec<Vec<Option<usize>>>,
}

/// A generalized Boolean dynamical system. Cheap to clone.
#[derive(Clone)]
pub struct Gbds {
    inner: Arc<GbdsInner>,
}

impl PartialEq for Gbds {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.inner, &other.inner)
            || (self.inner.algebra == other.inner.algebra
                && self.inner.labels == other.inner.labels
                && self.inner.atom_images == other.inner.atom_images
                && self.inner.ideal_gens == other.inner.ideal_gens)
    }
}

impl Eq for Gbds {}

impl Gbds {
    /// Assembles a system, checking only structural well-formedness (label
    /// names, element compatibility). Semantic laws are the business of
    /// [`Gbds::validate`], so deliberately broken systems can be built and
    /// inspected.
    pub fn from_parts(
        algebra: BooleanAlgebra,
        labels: Vec<String>,
        atom_images: Vec<Vec<Element>>,
        ideal_gens: Vec<Element>,
    ) -> Result<Self> {
        for (i, l) in labels.iter().enumerate() {
            if l.is_empty() || labels[..i].contains(l) {
                return Err(Error::Invalid(format!("bad label name '{l}'")));
            }
        }
        if atom_images.len() != labels.len() || ideal_gens.len() != labels.len() {
            return Err(Error::Invalid("one action and one ideal per label required".into()));
        }
        for (l, images) in labels.iter().zip(&atom_images) {
            if images.len() != algebra.atom_count() {
                return Err(Error::Invalid(format!(
                    "action '{l}' must give an image for each of the {} atoms",
                    algebra.atom_count()
                )));
            }
            for img in images {
                if img.algebra() != &algebra {
                    return Err(Error::AlgebraMismatch);
                }
            }
        }
        for g in &ideal_gens {
            if g.algebra() != &algebra {
                return Err(Error::AlgebraMismatch);
            }
        }
        let src = atom_images
            .iter()
            .map(|images| {
                (0..algebra.atom_count())
                    .map(|b| images.iter().position(|img| img.contains_atom(b)))
                    .collect()
            })
            .collect();
        Ok(Gbds {
            inner: Arc::new(GbdsInner { algebra, labels, atom_images, ideal_gens, src }),
        })
    }

    /// Builds and validates; errors with the first violation if the system
    /// does not satisfy the laws.
    pub fn new(
        algebra: BooleanAlgebra,
        labels: Vec<String>,
        atom_images: Vec<Vec<Element>>,
        ideal_gens: Vec<Element>,
    ) -> Result<Self> {
        let sys = Gbds::from_parts(algebra, labels, atom_images, ideal_gens)?;
        let report = sys.validate();
        if let Some(bad) = report.items.iter().find(|i| !i.pass) {
            return Err(Error::Invalid(format!("{}: {}", bad.label, bad.detail)));
        }
        Ok(sys)
    }

    pub fn algebra(&self) -> &BooleanAlgebra {
        &self.inner.algebra
    }

    pub fn labels(&self) -> &[String] {
        &self.inner.labels
    }

    pub fn label_count(&self) -> usize {
        self.inner.labels.len()
    }

    pub fn label_name(&self, label: usize) -> &str {
        &self.inner.labels[label]
    }

    pub fn label_index(&self, name: &str) -> Result<usize> {
        self.inner
            .labels
            .iter()
            .position(|l| l == name)
            .ok_or_else(|| Error::UnknownLabel(name.to_string()))
    }

    pub fn word_from_names<S: AsRef<str>>(&self, names: &[S]) -> Result<Word> {
        let mut w = Word::empty();
        for n in names {
            w.push(self.label_index(n.as_ref())?);
        }
        Ok(w)
    }

    pub fn word_string(&self, word: &Word) -> String {
        if word.is_empty() {
            return "ε".to_string();
        }
        word.letters().iter().map(|&l| self.label_name(l)).collect::<Vec<_>>().join("")
    }

    /// Image of a single atom under one action.
    pub fn atom_image(&self, label: usize, atom: usize) -> &Element {
        &self.inner.atom_images[label][atom]
    }

    /// The dual partial function on atoms: the unique atom whose image
    /// contains `atom`, if any.
    pub fn src(&self, label: usize, atom: usize) -> Option<usize> {
        self.inner.src[label][atom]
    }

    /// Iterated source along a word: the atom that reaches `atom` by applying
    /// the whole word, resolved letter by letter from the last one.
    pub fn src_word(&self, word: &Word, atom: usize) -> Option<usize> {
        let mut cur = atom;
        for &l in word.letters().iter().rev() {
            cur = self.src(l, cur)?;
        }
        Some(cur)
    }

    /// Applies one action to an element.
    pub fn apply(&self, label: usize, elem: &Element) -> Element {
        let mut out = self.inner.algebra.zero();
        for atom in elem.atom_ids() {
            out = out.join(&self.inner.atom_images[label][atom]);
        }
        out
    }

    /// Applies a word of actions, first letter first; the empty word is the
    /// identity.
    pub fn apply_word(&self, word: &Word, elem: &Element) -> Element {
        let mut cur = elem.clone();
        for &l in word.letters() {
            cur = self.apply(l, &cur);
        }
        cur
    }

    /// Labels whose word action does not kill `elem`; single letters only.
    /// The labels with `apply(label, elem) != 0`, in label order.
    pub fn delta(&self, elem: &Element) -> Vec<usize> {
        (0..self.label_count()).filter(|&l| !self.apply(l, elem).is_zero()).collect()
    }

    pub fn lambda(&self, elem: &Element) -> usize {
        self.delta(elem).len()
    }

    /// An element is regular when no nonzero part of it is killed by every
    /// action. Equivalently: each of its atoms survives some label. Zero is
    /// regular vacuously.
    pub fn is_regular(&self, elem: &Element) -> bool {
        elem.atom_ids().all(|a| {
            let atom = self.inner.algebra.atom_elem(a);
            (0..self.label_count()).any(|l| !self.apply(l, &atom).is_zero())
        })
    }

    /// The range ideal of a label: everything below the image of the unit.
    pub fn range_ideal(&self, label: usize) -> Ideal {
        Ideal::new(self.apply(label, &self.inner.algebra.unit()))
    }

    pub fn declared_ideal(&self, label: usize) -> Ideal {
        Ideal::new(self.inner.ideal_gens[label].clone())
    }

    pub fn ideal_gen(&self, label: usize) -> &Element {
        &self.inner.ideal_gens[label]
    }

    /// Generator of the word ideal: the declared ideal for single letters,
    /// pushed forward along the rest of the word. The empty word yields the
    /// unit (the whole algebra).
    pub fn word_ideal_gen(&self, word: &Word) -> Element {
        match word.first() {
            None => self.inner.algebra.unit(),
            Some(first) => {
                let rest = word.suffix(1);
                self.apply_word(&rest, &self.inner.ideal_gens[first])
            }
        }
    }

    pub fn word_ideal(&self, word: &Word) -> Ideal {
        Ideal::new(self.word_ideal_gen(word))
    }

    /// Canonical filter context over a word: the whole algebra for the empty
    /// word, the word ideal otherwise.
    pub fn word_context(&self, word: &Word) -> FilterContext {
        if word.is_empty() {
            FilterContext::Whole
        } else {
            FilterContext::Within(self.word_ideal(word))
        }
    }

    /// Words whose word ideal is nonzero, in length-then-lex order (lex by
    /// label index), up to the given length. Always contains the empty word
    /// when the algebra is nontrivial.
    pub fn wstar(&self, max_len: usize) -> Vec<Word> {
        let mut out = Vec::new();
        let mut frontier = vec![Word::empty()];
        for len in 0..=max_len {
            let mut next = Vec::new();
            for w in &frontier {
                if !self.word_ideal_gen(w).is_zero() {
                    out.push(w.clone());
                    if len < max_len {
                        for l in 0..self.label_count() {
                            let mut ext = w.clone();
                            ext.push(l);
                            next.push(ext);
                        }
                    }
                }
            }
            frontier = next;
        }
        out
    }

    /// Checks the semantic laws and reports every violation: disjoint atom
    /// images per action, the homomorphism identities on all element pairs,
    /// zero preservation, and the declared ideals containing the ranges.
    pub fn validate(&self) -> CheckReport {
        let mut report = CheckReport::new("system validation");
        let algebra = &self.inner.algebra;
        for (li, label) in self.inner.labels.iter().enumerate() {
            let images = &self.inner.atom_images[li];
            let mut overlap = None;
            'outer: for a in 0..algebra.atom_count() {
                for b in a + 1..algebra.atom_count() {
                    if !images[a].meet(&images[b]).is_zero() {
                        overlap = Some((a, b));
                        break 'outer;
                    }
                }
            }
            match overlap {
                None => report.pass(format!("action '{label}': atom images disjoint")),
                Some((a, b)) => report.fail(
                    format!("action '{label}': atom images disjoint"),
                    format!(
                        "images of atoms '{}' and '{}' overlap",
                        algebra.atom_name(a),
                        algebra.atom_name(b)
                    ),
                ),
            }

            let mut hom_ok = true;
            let mut hom_detail = String::new();
            let elems: Vec<Element> = algebra.elements().collect();
            'pairs: for x in &elems {
                for y in &elems {
                    let lhs = self.apply(li, &x.meet(y));
                    let rhs = self.apply(li, x).meet(&self.apply(li, y));
                    if lhs != rhs {
                        hom_ok = false;
                        hom_detail = format!("meet law fails at {x}, {y}");
                        break 'pairs;
                    }
                    let lhs = self.apply(li, &x.join(y));
                    let rhs = self.apply(li, x).join(&self.apply(li, y));
                    if lhs != rhs {
                        hom_ok = false;
                        hom_detail = format!("join law fails at {x}, {y}");
                        break 'pairs;
                    }
                    let lhs = self.apply(li, &x.minus(y));
                    let rhs = self.apply(li, x).minus(&self.apply(li, y));
                    if lhs != rhs {
                        hom_ok = false;
                        hom_detail = format!("difference law fails at {x}, {y}");
                        break 'pairs;
                    }
                }
            }
            report.push(format!("action '{label}': homomorphism laws"), hom_ok, hom_detail);

            let zero_ok = self.apply(li, &algebra.zero()).is_zero();
            report.push(format!("action '{label}': zero preserved"), zero_ok, "");

            let range = self.apply(li, &algebra.unit());
            if range.leq(&self.inner.ideal_gens[li]) {
                report.pass(format!("ideal for '{label}' contains the range"));
            } else {
                report.fail(
                    format!("ideal for '{label}' contains the range"),
                    format!("R_{label} ⊄ I_{label}"),
                );
            }
        }
        report
    }
}

impl fmt::Debug for Gbds {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "Gbds(atoms={:?}, labels={:?})",
            self.inner.algebra.atom_names(),
            self.inner.labels
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn sink_word_actions() {
        let sys = fixtures::sink();
        let alg = sys.algebra().clone();
        let x = alg.elem_from_names(&["x"]).unwrap();
        let a = sys.word_from_names(&["a"]).unwrap();
        let aa = sys.word_from_names(&["a", "a"]).unwrap();
        assert_eq!(sys.apply_word(&a, &x), alg.elem_from_names(&["y"]).unwrap());
        assert!(sys.apply_word(&aa, &x).is_zero());
        assert_eq!(sys.apply_word(&Word::empty(), &x), x);
    }

    #[test]
    fn word_action_composes() {
        let sys = fixtures::full_shift();
        let alg = sys.algebra().clone();
        for w1 in sys.wstar(2) {
            for w2 in sys.wstar(2) {
                for e in alg.elements() {
                    assert_eq!(
                        sys.apply_word(&w1.concat(&w2), &e),
                        sys.apply_word(&w2, &sys.apply_word(&w1, &e))
                    );
                }
            }
        }
    }

    #[test]
    fn delta_and_regularity_on_sink() {
        let sys = fixtures::sink();
        let alg = sys.algebra().clone();
        let x = alg.elem_from_names(&["x"]).unwrap();
        let y = alg.elem_from_names(&["y"]).unwrap();
        assert_eq!(sys.delta(&y), Vec::<usize>::new());
        assert_eq!(sys.delta(&x), vec![0]);
        assert_eq!(sys.lambda(&alg.unit()), 1);
        assert!(sys.is_regular(&x));
        assert!(!sys.is_regular(&y));
        assert!(!sys.is_regular(&alg.unit()));
        assert!(sys.is_regular(&alg.zero()));
    }

    #[test]
    fn word_ideals_and_wstar_on_sink() {
        let sys = fixtures::sink();
        let alg = sys.algebra().clone();
        let a = sys.word_from_names(&["a"]).unwrap();
        let aa = sys.word_from_names(&["a", "a"]).unwrap();
        assert_eq!(sys.word_ideal_gen(&a), alg.elem_from_names(&["y"]).unwrap());
        assert!(sys.word_ideal_gen(&aa).is_zero());
        assert_eq!(sys.word_ideal_gen(&Word::empty()), alg.unit());
        let words = sys.wstar(3);
        assert_eq!(words, vec![Word::empty(), a]);
    }

    #[test]
    fn word_ideal_gen_stays_in_last_letter_ideal() {
        for sys in [fixtures::full_shift(), fixtures::sink(), fixtures::sink_with_spare()] {
            for w in sys.wstar(4) {
                if let Some(last) = w.last() {
                    assert!(sys.word_ideal_gen(&w).leq(sys.ideal_gen(last)));
                }
            }
        }
    }

    #[test]
    fn src_is_dual_to_atom_images() {
        let sys = fixtures::sink_with_spare();
        let alg = sys.algebra().clone();
        for b in 0..alg.atom_count() {
            match sys.src(0, b) {
                Some(a) => assert!(sys.atom_image(0, a).contains_atom(b)),
                None => {
                    for a in 0..alg.atom_count() {
                        assert!(!sys.atom_image(0, a).contains_atom(b));
                    }
                }
            }
        }
    }

    #[test]
    fn validation_flags_overlap_and_missing_range() {
        let alg = BooleanAlgebra::new(vec!["x", "y"]).unwrap();
        let y = alg.elem_from_names(&["y"]).unwrap();
        // both atoms map onto y: images overlap
        let bad = Gbds::from_parts(
            alg.clone(),
            vec!["a".into()],
            vec![vec![y.clone(), y.clone()]],
            vec![y.clone()],
        )
        .unwrap();
        let report = bad.validate();
        assert!(!report.passed());
        assert!(report
            .items
            .iter()
            .any(|i| !i.pass && i.detail.contains("'x'") && i.detail.contains("'y'")));

        // ideal {0} does not contain the range
        let bad2 = Gbds::from_parts(
            alg.clone(),
            vec!["a".into()],
            vec![vec![y.clone(), alg.zero()]],
            vec![alg.zero()],
        )
        .unwrap();
        let report2 = bad2.validate();
        assert!(report2.items.iter().any(|i| !i.pass && i.detail.contains("⊄")));
    }

    #[test]
    fn all_zero_actions_give_zero_range_ideal() {
        let alg = BooleanAlgebra::new(vec!["u"]).unwrap();
        let sys = Gbds::new(alg.clone(), vec!["a".into()], vec![vec![alg.zero()]], vec![alg.zero()])
            .unwrap();
        assert!(sys.range_ideal(0).is_zero());
        assert_eq!(sys.wstar(2), vec![Word::empty()]);
    }
}
