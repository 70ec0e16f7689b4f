//! Finite Boolean algebras presented by their atoms.
//!
//! A finite Boolean algebra is the powerset lattice of its atom set, so an
//! element is just a set of atoms and we store it as a bitmask. Ideals and
//! filters of a finite algebra are principal; we keep only their generators.
//! Ultrafilters correspond to atoms: the ultrafilters of the algebra are the
//! sets `{ B : a in B }` for an atom `a`, and the ultrafilters of a principal
//! ideal with generator `g` are the same sets cut down to `{ B <= g }` for
//! atoms `a <= g`.

use std::cmp::Ordering;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

pub const MAX_ATOMS: usize = 64;

#[derive(Debug)]
struct Inner {
    atoms: Vec<String>,
}

/// A finite Boolean algebra with a fixed atom order. Cheap to clone.
/// Equality is structural: two algebras are the same iff their atom lists
/// coincide (names and order).
#[derive(Clone)]
pub struct BooleanAlgebra {
    inner: Arc<Inner>,
}

impl BooleanAlgebra {
    pub fn new<S: Into<String>>(atoms: Vec<S>) -> Result<Self> {
        let atoms: Vec<String> = atoms.into_iter().map(Into::into).collect();
        if atoms.len() > MAX_ATOMS {
            return Err(Error::TooManyAtoms { max: MAX_ATOMS, got: atoms.len() });
        }
        for (i, a) in atoms.iter().enumerate() {
            if a.is_empty() || atoms[..i].contains(a) {
                return Err(Error::Invalid(format!("bad atom name '{a}'")));
            }
        }
        Ok(BooleanAlgebra { inner: Arc::new(Inner { atoms }) })
    }

    pub fn atom_count(&self) -> usize {
        self.inner.atoms.len()
    }

    pub fn atom_names(&self) -> &[String] {
        &self.inner.atoms
    }

    pub fn atom_name(&self, atom: usize) -> &str {
        &self.inner.atoms[atom]
    }

    pub fn atom_index(&self, name: &str) -> Result<usize> {
        self.inner
            .atoms
            .iter()
            .position(|a| a == name)
            .ok_or_else(|| Error::UnknownAtom(name.to_string()))
    }

    fn full_mask(&self) -> u64 {
        if self.atom_count() == 64 {
            u64::MAX
        } else {
            (1u64 << self.atom_count()) - 1
        }
    }

    pub fn unit(&self) -> Element {
        Element { algebra: self.clone(), mask: self.full_mask() }
    }

    pub fn zero(&self) -> Element {
        Element { algebra: self.clone(), mask: 0 }
    }

    pub fn atom_elem(&self, atom: usize) -> Element {
        assert!(atom < self.atom_count(), "atom index out of range");
        Element { algebra: self.clone(), mask: 1u64 << atom }
    }

    pub fn elem_from_mask(&self, mask: u64) -> Element {
        assert_eq!(mask & !self.full_mask(), 0, "mask has bits outside the algebra");
        Element { algebra: self.clone(), mask }
    }

    pub fn elem_from_names<S: AsRef<str>>(&self, names: &[S]) -> Result<Element> {
        let mut mask = 0u64;
        for n in names {
            mask |= 1u64 << self.atom_index(n.as_ref())?;
        }
        Ok(Element { algebra: self.clone(), mask })
    }

    /// All 2^n elements, in mask order (zero first, unit last).
    pub fn elements(&self) -> impl Iterator<Item = Element> + '_ {
        (0..=self.full_mask()).map(move |mask| Element { algebra: self.clone(), mask })
    }

    /// All ultrafilters of the algebra, one per atom, in atom order.
    pub fn ultrafilters(&self) -> Vec<Ultrafilter> {
        (0..self.atom_count())
            .map(|atom| Ultrafilter { atom, context: FilterContext::Whole, algebra: self.clone() })
            .collect()
    }
}

impl PartialEq for BooleanAlgebra {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.inner, &other.inner) || self.inner.atoms == other.inner.atoms
    }
}
impl Eq for BooleanAlgebra {}

impl PartialOrd for BooleanAlgebra {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for BooleanAlgebra {
    fn cmp(&self, other: &Self) -> Ordering {
        self.inner.atoms.cmp(&other.inner.atoms)
    }
}

impl std::hash::Hash for BooleanAlgebra {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.inner.atoms.hash(state);
    }
}

impl fmt::Debug for BooleanAlgebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BooleanAlgebra{:?}", self.inner.atoms)
    }
}

/// An element of a finite Boolean algebra: a set of atoms.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Element {
    algebra: BooleanAlgebra,
    mask: u64,
}

impl Element {
    pub fn algebra(&self) -> &BooleanAlgebra {
        &self.algebra
    }

    pub fn mask(&self) -> u64 {
        self.mask
    }

    pub fn is_zero(&self) -> bool {
        self.mask == 0
    }

    pub fn is_unit(&self) -> bool {
        self.mask == self.algebra.full_mask()
    }

    pub fn atom_ids(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.algebra.atom_count()).filter(move |i| self.mask & (1 << i) != 0)
    }

    pub fn atom_count(&self) -> usize {
        self.mask.count_ones() as usize
    }

    pub fn contains_atom(&self, atom: usize) -> bool {
        self.mask & (1 << atom) != 0
    }

    fn check_same(&self, other: &Element) -> Result<()> {
        if self.algebra == other.algebra {
            Ok(())
        } else {
            Err(Error::AlgebraMismatch)
        }
    }

    pub fn try_meet(&self, other: &Element) -> Result<Element> {
        self.check_same(other)?;
        Ok(Element { algebra: self.algebra.clone(), mask: self.mask & other.mask })
    }

    pub fn try_join(&self, other: &Element) -> Result<Element> {
        self.check_same(other)?;
        Ok(Element { algebra: self.algebra.clone(), mask: self.mask | other.mask })
    }

    /// Relative complement `self \ other`.
    pub fn try_minus(&self, other: &Element) -> Result<Element> {
        self.check_same(other)?;
        Ok(Element { algebra: self.algebra.clone(), mask: self.mask & !other.mask })
    }

    /// Panicking shorthand for `try_meet`; both operands must come from the
    /// same algebra.
    pub fn meet(&self, other: &Element) -> Element {
        self.try_meet(other).expect("meet across algebras")
    }

    pub fn join(&self, other: &Element) -> Element {
        self.try_join(other).expect("join across algebras")
    }

    pub fn minus(&self, other: &Element) -> Element {
        self.try_minus(other).expect("difference across algebras")
    }

    pub fn complement(&self) -> Element {
        Element { algebra: self.algebra.clone(), mask: self.algebra.full_mask() & !self.mask }
    }

    pub fn leq(&self, other: &Element) -> bool {
        assert!(self.algebra == other.algebra, "order across algebras");
        self.mask & !other.mask == 0
    }

    pub fn atom_names(&self) -> Vec<&str> {
        self.atom_ids().map(|i| self.algebra.atom_name(i)).collect()
    }
}

impl PartialOrd for Element {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Element {
    fn cmp(&self, other: &Self) -> Ordering {
        self.algebra.cmp(&other.algebra).then(self.mask.cmp(&other.mask))
    }
}

impl fmt::Debug for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}}}", self.atom_names().join(","))
    }
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}}}", self.atom_names().join(","))
    }
}

/// A (principal) ideal: all elements below a fixed generator.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug, Hash)]
pub struct Ideal {
    gen: Element,
}

impl Ideal {
    pub fn new(gen: Element) -> Self {
        Ideal { gen }
    }

    pub fn generator(&self) -> &Element {
        &self.gen
    }

    pub fn contains(&self, elem: &Element) -> bool {
        elem.leq(&self.gen)
    }

    /// The ideal `{0}`.
    pub fn is_zero(&self) -> bool {
        self.gen.is_zero()
    }

    pub fn atoms(&self) -> impl Iterator<Item = usize> + '_ {
        self.gen.atom_ids()
    }

    /// All elements of the ideal, in mask order.
    pub fn elements(&self) -> Vec<Element> {
        let algebra = self.gen.algebra().clone();
        let bits: Vec<usize> = self.gen.atom_ids().collect();
        let n = bits.len();
        (0u64..(1 << n))
            .map(|sub| {
                let mut mask = 0u64;
                for (j, &bit) in bits.iter().enumerate() {
                    if sub & (1 << j) != 0 {
                        mask |= 1 << bit;
                    }
                }
                algebra.elem_from_mask(mask)
            })
            .collect()
    }

    /// Ultrafilters of the ideal viewed as a Boolean algebra with unit `gen`,
    /// one per atom below the generator.
    pub fn ultrafilters(&self) -> Vec<Ultrafilter> {
        self.gen
            .atom_ids()
            .map(|atom| Ultrafilter {
                atom,
                context: FilterContext::Within(self.clone()),
                algebra: self.gen.algebra().clone(),
            })
            .collect()
    }
}

/// Where a filter lives: the whole algebra, or inside a principal ideal.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug, Hash)]
pub enum FilterContext {
    Whole,
    Within(Ideal),
}

impl FilterContext {
    pub fn admits(&self, elem: &Element) -> bool {
        match self {
            FilterContext::Whole => true,
            FilterContext::Within(ideal) => ideal.contains(elem),
        }
    }

    /// Elements of the context, in mask order.
    pub fn elements(&self, algebra: &BooleanAlgebra) -> Vec<Element> {
        match self {
            FilterContext::Whole => algebra.elements().collect(),
            FilterContext::Within(ideal) => ideal.elements(),
        }
    }
}

/// A (principal) filter: all elements of the context above a nonzero
/// generator.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug)]
pub struct Filter {
    gen: Element,
    context: FilterContext,
}

impl Filter {
    pub fn new(gen: Element, context: FilterContext) -> Result<Self> {
        if gen.is_zero() {
            return Err(Error::Invalid("a filter cannot contain the zero element".into()));
        }
        if !context.admits(&gen) {
            return Err(Error::Invalid(format!(
                "generator {gen} lies outside the filter's context"
            )));
        }
        Ok(Filter { gen, context })
    }

    pub fn in_algebra(gen: Element) -> Result<Self> {
        Filter::new(gen, FilterContext::Whole)
    }

    pub fn generator(&self) -> &Element {
        &self.gen
    }

    pub fn context(&self) -> &FilterContext {
        &self.context
    }

    pub fn contains(&self, elem: &Element) -> bool {
        self.gen.leq(elem) && self.context.admits(elem)
    }

    pub fn elements(&self) -> Vec<Element> {
        self.context
            .elements(self.gen.algebra())
            .into_iter()
            .filter(|e| self.contains(e))
            .collect()
    }

    pub fn is_ultra(&self) -> bool {
        self.gen.atom_count() == 1
    }

    /// Prime filter test, by the definition: whenever a join of two context
    /// elements is in the filter, one of them already is.
    pub fn is_prime(&self) -> bool {
        let elems = self.context.elements(self.gen.algebra());
        for a in &elems {
            for b in &elems {
                if self.contains(&a.join(b)) && !self.contains(a) && !self.contains(b) {
                    return false;
                }
            }
        }
        true
    }
}

/// An ultrafilter, stored by its atom. In a finite algebra the ultrafilters
/// of the context are exactly the filters generated by a single atom.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug, Hash)]
pub struct Ultrafilter {
    atom: usize,
    context: FilterContext,
    algebra: BooleanAlgebra,
}

impl Ultrafilter {
    pub fn new(algebra: &BooleanAlgebra, atom: usize, context: FilterContext) -> Result<Self> {
        let atom_elem = algebra.atom_elem(atom);
        if !context.admits(&atom_elem) {
            return Err(Error::Invalid(format!(
                "atom '{}' lies outside the ultrafilter's context",
                algebra.atom_name(atom)
            )));
        }
        Ok(Ultrafilter { atom, context, algebra: algebra.clone() })
    }

    pub fn atom(&self) -> usize {
        self.atom
    }

    pub fn context(&self) -> &FilterContext {
        &self.context
    }

    pub fn contains(&self, elem: &Element) -> bool {
        elem.contains_atom(self.atom) && self.context.admits(elem)
    }

    pub fn to_filter(&self) -> Filter {
        Filter { gen: self.algebra.atom_elem(self.atom), context: self.context.clone() }
    }
}
