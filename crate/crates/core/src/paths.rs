//! The edge correspondence of a system and its boundary path space.
//!
//! Vertices are atoms, edges are (label, atom) pairs with the atom inside the
//! label's ideal. A boundary path is a singular vertex, a finite edge path
//! ending at a singular vertex, or an eventually periodic edge path stored as
//! a lasso in canonical form.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::gbds::{Gbds, Word};
use crate::semigroup::{canonical_lasso, FilterE, FilterWord};
use crate::stone::{Element, Ultrafilter};

/// An edge `e^α_η`: a label together with an atom of the label's ideal.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Edge {
    pub label: usize,
    pub atom: usize,
}

impl Edge {
    pub fn new(sys: &Gbds, label: usize, atom: usize) -> Result<Edge> {
        if label >= sys.label_count() {
            return Err(Error::UnknownLabel(format!("label index {label}")));
        }
        if !sys.ideal_gen(label).contains_atom(atom) {
            return Err(Error::Precondition(format!(
                "atom '{}' is not in the ideal of label '{}'",
                sys.algebra().atom_name(atom),
                sys.label_name(label)
            )));
        }
        Ok(Edge { label, atom })
    }

    /// The domain vertex: the edge's own atom.
    pub fn d(&self) -> usize {
        self.atom
    }

    /// The range vertex, or `None` for the empty-range marker, which occurs
    /// exactly when the atom lies outside the label's action range.
    pub fn r(&self, sys: &Gbds) -> Option<usize> {
        sys.src(self.label, self.atom)
    }

    pub fn describe(&self, sys: &Gbds) -> String {
        format!("e:{}@{}", sys.label_name(self.label), sys.algebra().atom_name(self.atom))
    }
}

/// The full edge graph of a system: every edge, the continuation lists, and
/// the singular vertices. Built once, then shared; cheap to clone.
#[derive(Clone, Debug)]
pub struct Correspondence {
    inner: std::sync::Arc<CorrInner>,
}

#[derive(Debug)]
struct CorrInner {
    sys: Gbds,
    edges: Vec<Edge>,
    continuations: Vec<Vec<Edge>>,
    singular: Vec<usize>,
}

impl PartialEq for Correspondence {
    fn eq(&self, other: &Self) -> bool {
        std::sync::Arc::ptr_eq(&self.inner, &other.inner) || self.inner.sys == other.inner.sys
    }
}

impl Eq for Correspondence {}

/// Assembles the correspondence of a system.
pub fn build_correspondence(sys: &Gbds) -> Correspondence {
    Correspondence::new(sys)
}

impl Correspondence {
    pub fn new(sys: &Gbds) -> Correspondence {
        let mut edges = Vec::new();
        for label in 0..sys.label_count() {
            for atom in sys.ideal_gen(label).atom_ids() {
                edges.push(Edge { label, atom });
            }
        }
        edges.sort();
        let mut continuations = vec![Vec::new(); sys.algebra().atom_count()];
        for e in &edges {
            if let Some(v) = e.r(sys) {
                continuations[v].push(*e);
            }
        }
        let singular =
            (0..sys.algebra().atom_count()).filter(|&v| continuations[v].is_empty()).collect();
        Correspondence {
            inner: std::sync::Arc::new(CorrInner { sys: sys.clone(), edges, continuations, singular }),
        }
    }

    pub fn sys(&self) -> &Gbds {
        &self.inner.sys
    }

    pub fn edges(&self) -> &[Edge] {
        &self.inner.edges
    }

    /// Edges whose range is the given vertex; the ways a path at `v` extends.
    pub fn continuations(&self, v: usize) -> &[Edge] {
        &self.inner.continuations[v]
    }

    /// Vertices from which no path continues: no edge has them as range.
    /// These coincide with the atoms killed by every action.
    pub fn singular_vertices(&self) -> &[usize] {
        &self.inner.singular
    }

    pub fn is_singular(&self, v: usize) -> bool {
        self.inner.continuations[v].is_empty()
    }

    /// Every boundary path within the bounds: all singular vertices, all
    /// finite paths up to `max_len` edges, and all lassos with prefix up to
    /// `max_len` and cycle up to `max_period` edges, in canonical form.
    pub fn enumerate_boundary(&self, max_len: usize, max_period: usize) -> Vec<BoundaryPath> {
        let sys = self.sys();
        let mut out = BTreeSet::new();
        for &v in self.singular_vertices() {
            out.insert(BoundaryPath::Vertex(v));
        }

        // finite paths grow from their singular tail by prepending edges
        if max_len >= 1 {
            let mut frontier: Vec<Vec<Edge>> = self
                .edges()
                .iter()
                .filter(|e| self.is_singular(e.d()))
                .map(|e| vec![*e])
                .collect();
            while let Some(path) = frontier.pop() {
                if path.len() < max_len {
                    for front in self.prepends(&path[0]) {
                        let mut longer = vec![front];
                        longer.extend_from_slice(&path);
                        frontier.push(longer);
                    }
                }
                out.insert(
                    BoundaryPath::finite(sys, path).expect("prepended edges stay chained"),
                );
            }
        }

        // edge cycles by forward extension, closed back into their first edge
        let mut cycles: Vec<Vec<Edge>> = Vec::new();
        let mut stack: Vec<Vec<Edge>> = self.edges().iter().map(|e| vec![*e]).collect();
        while let Some(chain) = stack.pop() {
            let last = chain[chain.len() - 1];
            if chain[0].r(sys) == Some(last.d()) {
                cycles.push(chain.clone());
            }
            if chain.len() < max_period {
                for &e in self.continuations(last.d()) {
                    let mut longer = chain.clone();
                    longer.push(e);
                    stack.push(longer);
                }
            }
        }

        // each cycle takes every backward prefix up to max_len
        for cycle in cycles {
            let mut layer: Vec<Vec<Edge>> = vec![Vec::new()];
            let mut prefixes = layer.clone();
            for _ in 0..max_len {
                let mut next = Vec::new();
                for p in &layer {
                    let front = *p.first().unwrap_or(&cycle[0]);
                    for e in self.prepends(&front) {
                        let mut longer = vec![e];
                        longer.extend_from_slice(p);
                        next.push(longer);
                    }
                }
                if next.is_empty() {
                    break;
                }
                prefixes.extend(next.iter().cloned());
                layer = next;
            }
            for p in prefixes {
                out.insert(
                    BoundaryPath::lasso(sys, p, cycle.clone()).expect("chained cycle edges"),
                );
            }
        }
        out.into_iter().collect()
    }

    /// Edges that can sit in front of a path whose first edge is `front`:
    /// their domain must be the range of `front`. Marker-ranged paths extend
    /// no further.
    fn prepends(&self, front: &Edge) -> Vec<Edge> {
        let sys = self.sys();
        match front.r(sys) {
            None => Vec::new(),
            Some(v) => (0..sys.label_count())
                .filter(|&label| sys.ideal_gen(label).contains_atom(v))
                .map(|label| Edge { label, atom: v })
                .collect(),
        }
    }
}

/// A point of the boundary path space.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum BoundaryPath {
    /// A singular vertex: the empty path at that vertex.
    Vertex(usize),
    /// A nonempty finite edge path whose terminal vertex is singular.
    Finite(Vec<Edge>),
    /// `prefix · cycle · cycle · …` in canonical form: the cycle is primitive
    /// as an edge sequence and no prefix tail can be absorbed into it.
    Lasso { prefix: Vec<Edge>, cycle: Vec<Edge> },
}

impl BoundaryPath {
    pub fn vertex(sys: &Gbds, v: usize) -> Result<BoundaryPath> {
        if v >= sys.algebra().atom_count() {
            return Err(Error::UnknownAtom(format!("atom index {v}")));
        }
        let elem = sys.algebra().atom_elem(v);
        if sys.is_regular(&elem) {
            return Err(Error::Precondition(format!(
                "vertex '{}' is not singular, paths cannot stop there",
                sys.algebra().atom_name(v)
            )));
        }
        Ok(BoundaryPath::Vertex(v))
    }

    pub fn finite(sys: &Gbds, edges: Vec<Edge>) -> Result<BoundaryPath> {
        if edges.is_empty() {
            return Err(Error::Invalid("a finite path needs at least one edge".into()));
        }
        check_edges(sys, &edges)?;
        check_chain(sys, &edges, None)?;
        let last = edges[edges.len() - 1];
        let elem = sys.algebra().atom_elem(last.d());
        if sys.is_regular(&elem) {
            return Err(Error::Precondition(format!(
                "finite paths must end at a singular vertex, '{}' is not",
                sys.algebra().atom_name(last.d())
            )));
        }
        Ok(BoundaryPath::Finite(edges))
    }

    pub fn lasso(sys: &Gbds, prefix: Vec<Edge>, cycle: Vec<Edge>) -> Result<BoundaryPath> {
        if cycle.is_empty() {
            return Err(Error::Invalid("a lasso needs a nonempty cycle".into()));
        }
        check_edges(sys, &prefix)?;
        check_edges(sys, &cycle)?;
        let mut all = prefix.clone();
        all.extend_from_slice(&cycle);
        check_chain(sys, &all, Some(cycle[0]))?;
        let mut prefix = prefix;
        let mut cycle = cycle;
        canonical_lasso(&mut prefix, &mut cycle);
        Ok(BoundaryPath::Lasso { prefix, cycle })
    }

    /// Number of stored edges; lassos report prefix plus one period.
    pub fn stored_len(&self) -> usize {
        match self {
            BoundaryPath::Vertex(_) => 0,
            BoundaryPath::Finite(edges) => edges.len(),
            BoundaryPath::Lasso { prefix, cycle } => prefix.len() + cycle.len(),
        }
    }

    pub fn is_lasso(&self) -> bool {
        matches!(self, BoundaryPath::Lasso { .. })
    }

    /// Edge at 1-based position `k`; lassos repeat forever, finite paths and
    /// vertices run out.
    pub fn edge_at(&self, k: usize) -> Option<Edge> {
        assert!(k >= 1, "edge positions are 1-based");
        match self {
            BoundaryPath::Vertex(_) => None,
            BoundaryPath::Finite(edges) => edges.get(k - 1).copied(),
            BoundaryPath::Lasso { prefix, cycle } => {
                let np = prefix.len();
                if k <= np {
                    Some(prefix[k - 1])
                } else {
                    Some(cycle[(k - np - 1) % cycle.len()])
                }
            }
        }
    }

    /// The label word along the first `len` edges.
    pub fn word_prefix(&self, len: usize) -> Option<Word> {
        let mut w = Word::empty();
        for k in 1..=len {
            w.push(self.edge_at(k)?.label);
        }
        Some(w)
    }

    /// The range vertex of the path: the vertex itself, or the range of the
    /// first edge, `None` being the empty-range marker.
    pub fn range_atom(&self, sys: &Gbds) -> Option<usize> {
        match self {
            BoundaryPath::Vertex(v) => Some(*v),
            _ => self.edge_at(1).expect("nonempty").r(sys),
        }
    }

    /// Removes the first edge. Vertex paths cannot be shifted.
    pub fn shift(&self, sys: &Gbds) -> Result<BoundaryPath> {
        match self {
            BoundaryPath::Vertex(v) => Err(Error::Precondition(format!(
                "cannot shift the vertex path at '{}'",
                sys.algebra().atom_name(*v)
            ))),
            BoundaryPath::Finite(edges) => {
                if edges.len() == 1 {
                    Ok(BoundaryPath::Vertex(edges[0].d()))
                } else {
                    BoundaryPath::finite(sys, edges[1..].to_vec())
                }
            }
            BoundaryPath::Lasso { prefix, cycle } => {
                if prefix.is_empty() {
                    let mut rotated = cycle.clone();
                    rotated.rotate_left(1);
                    BoundaryPath::lasso(sys, Vec::new(), rotated)
                } else {
                    BoundaryPath::lasso(sys, prefix[1..].to_vec(), cycle.clone())
                }
            }
        }
    }

    /// Renders the parseable form: `v:atom`, edges joined by `|`, or
    /// `lasso(prefix;cycle)`.
    pub fn to_spec(&self, sys: &Gbds) -> String {
        let join = |edges: &[Edge]| {
            edges.iter().map(|e| e.describe(sys)).collect::<Vec<_>>().join("|")
        };
        match self {
            BoundaryPath::Vertex(v) => format!("v:{}", sys.algebra().atom_name(*v)),
            BoundaryPath::Finite(edges) => join(edges),
            BoundaryPath::Lasso { prefix, cycle } => {
                format!("lasso({};{})", join(prefix), join(cycle))
            }
        }
    }

    /// Parses the `to_spec` form back into a validated path.
    pub fn parse(sys: &Gbds, spec: &str) -> Result<BoundaryPath> {
        let spec = spec.trim();
        if let Some(name) = spec.strip_prefix("v:") {
            let atom = sys.algebra().atom_index(name.trim())?;
            return BoundaryPath::vertex(sys, atom);
        }
        if let Some(body) = spec.strip_prefix("lasso(").and_then(|s| s.strip_suffix(')')) {
            let (p, c) = body.split_once(';').ok_or_else(|| {
                Error::Invalid("lasso(...) needs a ';' between prefix and cycle".into())
            })?;
            return BoundaryPath::lasso(sys, parse_edges(sys, p)?, parse_edges(sys, c)?);
        }
        BoundaryPath::finite(sys, parse_edges(sys, spec)?)
    }
}

fn parse_edges(sys: &Gbds, s: &str) -> Result<Vec<Edge>> {
    let s = s.trim();
    if s.is_empty() {
        return Ok(Vec::new());
    }
    s.split('|')
        .map(|tok| {
            let tok = tok.trim();
            let body = tok
                .strip_prefix("e:")
                .ok_or_else(|| Error::Invalid(format!("edge '{tok}' must look like e:label@atom")))?;
            let (label, atom) = body
                .split_once('@')
                .ok_or_else(|| Error::Invalid(format!("edge '{tok}' must look like e:label@atom")))?;
            Edge::new(sys, sys.label_index(label.trim())?, sys.algebra().atom_index(atom.trim())?)
        })
        .collect()
}

fn check_edges(sys: &Gbds, edges: &[Edge]) -> Result<()> {
    for e in edges {
        Edge::new(sys, e.label, e.atom)?;
    }
    Ok(())
}

/// Consecutive edges must satisfy d(eᵢ) = r(eᵢ₊₁); with `wrap` the last edge
/// must flow back into the given first cycle edge.
fn check_chain(sys: &Gbds, edges: &[Edge], wrap: Option<Edge>) -> Result<()> {
    for i in 0..edges.len().saturating_sub(1) {
        if edges[i + 1].r(sys) != Some(edges[i].d()) {
            return Err(Error::Precondition(format!(
                "edges {} and {} do not chain: range {:?} vs domain {}",
                edges[i].describe(sys),
                edges[i + 1].describe(sys),
                edges[i + 1].r(sys).map(|v| sys.algebra().atom_name(v).to_string()),
                sys.algebra().atom_name(edges[i].d())
            )));
        }
    }
    if let (Some(first), Some(last)) = (wrap, edges.last()) {
        if first.r(sys) != Some(last.d()) {
            return Err(Error::Precondition(format!(
                "cycle does not close: {} has range {:?}, needs {}",
                first.describe(sys),
                first.r(sys).map(|v| sys.algebra().atom_name(v).to_string()),
                sys.algebra().atom_name(last.d())
            )));
        }
    }
    Ok(())
}

/// The dual of the action morphism: sends an ultrafilter of the `αβ` ideal to
/// `{A in the α ideal : θ_β(A) ∈ η}`, which is an ultrafilter or, only over
/// the empty word, the empty-range marker.
pub fn dual_f(
    sys: &Gbds,
    alpha: &Word,
    beta: &Word,
    eta: &Ultrafilter,
) -> Result<Option<Ultrafilter>> {
    let full = alpha.concat(beta);
    expect_context(sys, &full, eta)?;
    match sys.src_word(beta, eta.atom()) {
        Some(a) => Ok(Some(
            Ultrafilter::new(sys.algebra(), a, sys.word_context(alpha))
                .expect("sources along a word stay inside the word ideal"),
        )),
        None => Ok(None),
    }
}

/// Restricts an ultrafilter of the `β` ideal to the `αβ` ideal. Fails when
/// the atom falls outside the smaller ideal.
pub fn restrict_g(sys: &Gbds, alpha: &Word, beta: &Word, filter: &Ultrafilter) -> Result<Ultrafilter> {
    expect_context(sys, beta, filter)?;
    let full = alpha.concat(beta);
    let atom = filter.atom();
    if !sys.word_ideal_gen(&full).contains_atom(atom) {
        return Err(Error::Precondition(format!(
            "atom '{}' has empty intersection with the ideal of word {}",
            sys.algebra().atom_name(atom),
            sys.word_string(&full)
        )));
    }
    Ok(Ultrafilter::new(sys.algebra(), atom, sys.word_context(&full)).expect("checked membership"))
}

/// Upward closure from the `αβ` ideal into the `β` ideal; total, and inverse
/// to [`restrict_g`] wherever that is defined.
pub fn upclose_h(sys: &Gbds, alpha: &Word, beta: &Word, filter: &Ultrafilter) -> Result<Ultrafilter> {
    let full = alpha.concat(beta);
    expect_context(sys, &full, filter)?;
    Ok(Ultrafilter::new(sys.algebra(), filter.atom(), sys.word_context(beta))
        .expect("the αβ ideal sits inside the β ideal"))
}

fn expect_context(sys: &Gbds, word: &Word, filter: &Ultrafilter) -> Result<()> {
    if *filter.context() != sys.word_context(word) {
        return Err(Error::Precondition(format!(
            "ultrafilter context does not match the ideal of word {}",
            sys.word_string(word)
        )));
    }
    Ok(())
}

/// The range of a path with at least one edge, computed through the dual
/// morphisms: restrict the deepest edge ultrafilter into the full word ideal,
/// then pull it back along the whole word.
pub fn range_of_path(sys: &Gbds, path: &BoundaryPath) -> Result<Option<Ultrafilter>> {
    let n = path.stored_len();
    if n == 0 {
        return Err(Error::Precondition("range_of_path needs at least one edge".into()));
    }
    let word = path.word_prefix(n).expect("stored edges exist");
    let last = path.edge_at(n).expect("stored edges exist");
    let head = word.prefix(n - 1);
    let tail = Word::single(last.label);
    let eta = Ultrafilter::new(sys.algebra(), last.atom, sys.word_context(&tail))
        .expect("edge atoms lie in their label ideals");
    let restricted = restrict_g(sys, &head, &tail, &eta)?;
    dual_f(sys, &Word::empty(), &word, &restricted)
}

/// Translates a tight filter into its boundary path: each level generator is
/// an atom and becomes the edge atom at that position. Finite-type filters
/// over the empty word land on their base vertex.
pub fn tight_to_boundary(sys: &Gbds, filter: &FilterE) -> Result<BoundaryPath> {
    if !filter.is_tight() {
        return Err(Error::Precondition(format!("filter is not tight: {}", filter.describe())));
    }
    let level_atom =
        |g: &Element| g.atom_ids().next().expect("tight level generators are atoms");
    match filter.word() {
        FilterWord::Finite(w) => {
            if w.is_empty() {
                let base = filter.base().expect("empty-word filters carry a base");
                BoundaryPath::vertex(sys, level_atom(base))
            } else {
                let edges = (0..w.len())
                    .map(|i| Edge { label: w.letter(i), atom: level_atom(&filter.levels()[i]) })
                    .collect();
                BoundaryPath::finite(sys, edges)
            }
        }
        FilterWord::Lasso { prefix, cycle } => {
            let np = prefix.len();
            let pedges = (0..np)
                .map(|i| Edge { label: prefix.letter(i), atom: level_atom(&filter.levels()[i]) })
                .collect();
            let cedges = (0..cycle.len())
                .map(|i| Edge {
                    label: cycle.letter(i),
                    atom: level_atom(&filter.levels()[np + i]),
                })
                .collect();
            BoundaryPath::lasso(sys, pedges, cedges)
        }
    }
}

/// The inverse translation: the levels of the filter are the path's edge
/// atoms, the word is the path's label word.
pub fn boundary_to_tight(sys: &Gbds, path: &BoundaryPath) -> Result<FilterE> {
    match path {
        BoundaryPath::Vertex(v) => {
            FilterE::finite(sys, Word::empty(), sys.algebra().atom_elem(*v))
        }
        BoundaryPath::Finite(edges) => {
            let word = Word::new(edges.iter().map(|e| e.label).collect());
            let top = sys.algebra().atom_elem(edges[edges.len() - 1].atom);
            FilterE::finite(sys, word, top)
        }
        BoundaryPath::Lasso { prefix, cycle } => {
            let pw = Word::new(prefix.iter().map(|e| e.label).collect());
            let cw = Word::new(cycle.iter().map(|e| e.label).collect());
            let levels = prefix
                .iter()
                .chain(cycle)
                .map(|e| sys.algebra().atom_elem(e.atom))
                .collect();
            FilterE::lasso(sys, pw, cw, levels)
        }
    }
}

/// A basic cylinder `𝒩(word, elem)` with `elem` inside the word ideal.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug)]
pub struct CylinderBasic {
    word: Word,
    elem: Element,
}

impl CylinderBasic {
    pub fn new(sys: &Gbds, word: Word, elem: Element) -> Result<CylinderBasic> {
        if elem.algebra() != sys.algebra() {
            return Err(Error::AlgebraMismatch);
        }
        if !elem.leq(&sys.word_ideal_gen(&word)) {
            return Err(Error::Precondition(format!(
                "element {} lies outside the ideal of word {}",
                elem,
                sys.word_string(&word)
            )));
        }
        Ok(CylinderBasic { word, elem })
    }

    pub fn word(&self) -> &Word {
        &self.word
    }

    pub fn elem(&self) -> &Element {
        &self.elem
    }
}

/// Pointwise membership: the path starts with the cylinder's word and the
/// element belongs to the ultrafilter at that depth. Over the empty word the
/// element must contain the path's range vertex, so marker-ranged paths are
/// members of no empty-word cylinder.
pub fn cylinder_member(sys: &Gbds, path: &BoundaryPath, cyl: &CylinderBasic) -> bool {
    let n = cyl.word.len();
    if n == 0 {
        return match path.range_atom(sys) {
            Some(v) => cyl.elem.contains_atom(v),
            None => false,
        };
    }
    match path.word_prefix(n) {
        Some(w) if w == cyl.word => {
            let edge = path.edge_at(n).expect("prefix exists");
            cyl.elem.contains_atom(edge.atom)
        }
        _ => false,
    }
}

/// The exact four-case intersection of two basic cylinders, again a basic
/// cylinder; incomparable words give the empty cylinder over the empty word.
pub fn cylinder_intersect_raw(
    sys: &Gbds,
    c1: &CylinderBasic,
    c2: &CylinderBasic,
) -> CylinderBasic {
    if c1.word == c2.word {
        return CylinderBasic { word: c1.word.clone(), elem: c1.elem.meet(&c2.elem) };
    }
    if let Some(tail) = c2.word.strip_prefix(&c1.word) {
        let elem = sys.apply_word(&tail, &c1.elem).meet(&c2.elem);
        return CylinderBasic { word: c2.word.clone(), elem };
    }
    if let Some(tail) = c1.word.strip_prefix(&c2.word) {
        let elem = sys.apply_word(&tail, &c2.elem).meet(&c1.elem);
        return CylinderBasic { word: c1.word.clone(), elem };
    }
    CylinderBasic { word: Word::empty(), elem: sys.algebra().zero() }
}
