//! The partial action of the free group on labels over the boundary path
//! space, and the inverse monoid of compact open bisections it generates.
//!
//! A reduced word t of the shape α·β⁻¹ acts by stripping the prefix β and
//! grafting α in its place; its carrier U_t is the cylinder over α cut down
//! to the atoms shared by both word ideals. Words of any other shape act
//! nowhere. All set-level images are computed exactly on the cylinder
//! normal form, so the axiom checks compare open sets by equality rather
//! than by sampling alone.

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use crate::error::{Error, Result};
use crate::exec::{map_vec, Strategy};
use crate::gbds::{Gbds, Word};
use crate::openset::{Cyl, OpenSet};
use crate::paths::{cylinder_member, BoundaryPath, Correspondence, CylinderBasic, Edge};
use crate::report::CheckReport;
use crate::stone::Element;

/// One free-group letter: a label or its formal inverse.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Letter {
    pub label: usize,
    pub inverse: bool,
}

impl Letter {
    pub fn flip(self) -> Letter {
        Letter { label: self.label, inverse: !self.inverse }
    }

    fn cancels(self, other: Letter) -> bool {
        self.label == other.label && self.inverse != other.inverse
    }
}

/// A reduced word in the free group over the label alphabet.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Default)]
pub struct FreeWord {
    letters: Vec<Letter>,
}

impl FreeWord {
    pub fn identity() -> FreeWord {
        FreeWord { letters: Vec::new() }
    }

    pub fn generator(label: usize) -> FreeWord {
        FreeWord { letters: vec![Letter { label, inverse: false }] }
    }

    /// Collects letters with cancellation, so any sequence gives the reduced
    /// form of its product.
    pub fn from_letters(letters: impl IntoIterator<Item = Letter>) -> FreeWord {
        let mut out: Vec<Letter> = Vec::new();
        for l in letters {
            if out.last().is_some_and(|last| last.cancels(l)) {
                out.pop();
            } else {
                out.push(l);
            }
        }
        FreeWord { letters: out }
    }

    /// The element α·β⁻¹, with any common tail of α and β cancelled.
    pub fn from_pos_neg(alpha: &Word, beta: &Word) -> FreeWord {
        let pos = alpha
            .letters()
            .iter()
            .map(|&label| Letter { label, inverse: false });
        let neg = beta
            .letters()
            .iter()
            .rev()
            .map(|&label| Letter { label, inverse: true });
        FreeWord::from_letters(pos.chain(neg))
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_identity(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn mul(&self, other: &FreeWord) -> FreeWord {
        FreeWord::from_letters(self.letters.iter().chain(other.letters.iter()).copied())
    }

    pub fn inverse(&self) -> FreeWord {
        FreeWord { letters: self.letters.iter().rev().map(|l| l.flip()).collect() }
    }

    /// Splits the word as (α, β) when it has the shape α·β⁻¹; words that mix
    /// an inverse before a plain letter have no split and act nowhere.
    pub fn pos_neg(&self) -> Option<(Word, Word)> {
        let split = self
            .letters
            .iter()
            .position(|l| l.inverse)
            .unwrap_or(self.letters.len());
        if self.letters[split..].iter().any(|l| !l.inverse) {
            return None;
        }
        let alpha = Word::new(self.letters[..split].iter().map(|l| l.label).collect());
        let beta = Word::new(self.letters[split..].iter().rev().map(|l| l.label).collect());
        Some((alpha, beta))
    }

    pub fn describe(&self, sys: &Gbds) -> String {
        if self.letters.is_empty() {
            return "ε".to_string();
        }
        self.letters
            .iter()
            .map(|l| {
                let name = sys.label_name(l.label);
                if l.inverse {
                    format!("{name}⁻¹")
                } else {
                    name.to_string()
                }
            })
            .collect::<Vec<_>>()
            .join("·")
    }
}

/// Every reduced word of length at most `max_len`, identity first, in
/// breadth-first order.
pub fn reduced_words(label_count: usize, max_len: usize) -> Vec<FreeWord> {
    let mut out = vec![FreeWord::identity()];
    let mut layer = vec![FreeWord::identity()];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for w in &layer {
            for label in 0..label_count {
                for inverse in [false, true] {
                    let l = Letter { label, inverse };
                    if w.letters().last().is_some_and(|last| last.cancels(l)) {
                        continue;
                    }
                    let mut letters = w.letters().to_vec();
                    letters.push(l);
                    next.push(FreeWord { letters });
                }
            }
        }
        out.extend(next.iter().cloned());
        layer = next;
    }
    out
}

fn shared_gen(sys: &Gbds, alpha: &Word, beta: &Word) -> Element {
    sys.word_ideal_gen(alpha).meet(&sys.word_ideal_gen(beta))
}

/// The carrier U_t: the range of φ_t and the domain of φ_{t⁻¹}. The
/// identity carries the whole space, which is strictly more than the unit
/// cylinder whenever some edge has an empty range.
pub fn domain_of(corr: &Correspondence, t: &FreeWord) -> OpenSet {
    if t.is_identity() {
        return OpenSet::full(corr);
    }
    let Some((alpha, beta)) = t.pos_neg() else {
        return OpenSet::empty(corr);
    };
    let sys = corr.sys();
    let elem = shared_gen(sys, &alpha, &beta);
    let cyl = CylinderBasic::new(sys, alpha, elem)
        .expect("the meet of word ideal generators lies under the word ideal");
    OpenSet::from_cylinder(corr, &cyl)
}

fn prepend(sys: &Gbds, label: usize, path: BoundaryPath) -> Result<BoundaryPath> {
    let front = path
        .range_atom(sys)
        .expect("paths inside a carrier have atom ranges");
    let e = Edge::new(sys, label, front)?;
    match path {
        BoundaryPath::Vertex(_) => BoundaryPath::finite(sys, vec![e]),
        BoundaryPath::Finite(edges) => {
            let mut all = vec![e];
            all.extend(edges);
            BoundaryPath::finite(sys, all)
        }
        BoundaryPath::Lasso { prefix, cycle } => {
            let mut all = vec![e];
            all.extend(prefix);
            BoundaryPath::lasso(sys, all, cycle)
        }
    }
}

/// Applies φ_t to one path of U_{t⁻¹}: strip β, then graft α on the front.
pub fn act(corr: &Correspondence, t: &FreeWord, path: &BoundaryPath) -> Result<BoundaryPath> {
    let sys = corr.sys();
    if t.is_identity() {
        return Ok(path.clone());
    }
    let Some((alpha, beta)) = t.pos_neg() else {
        return Err(Error::Domain(format!(
            "{} acts nowhere on the boundary",
            t.describe(sys)
        )));
    };
    let guard = CylinderBasic::new(sys, beta.clone(), shared_gen(sys, &alpha, &beta))
        .expect("the meet of word ideal generators lies under the word ideal");
    if !cylinder_member(sys, path, &guard) {
        return Err(Error::Domain(format!(
            "path {} lies outside the domain of {}",
            path.to_spec(sys),
            t.describe(sys)
        )));
    }
    let mut current = path.clone();
    for _ in 0..beta.len() {
        current = current.shift(sys)?;
    }
    for &label in alpha.letters().iter().rev() {
        current = prepend(sys, label, current)?;
    }
    Ok(current)
}

/// Applies φ_t to a whole open set, which must sit inside U_{t⁻¹}. The
/// image is exact: each piece trades its β prefix for α.
pub fn act_on_openset(t: &FreeWord, set: &OpenSet) -> Result<OpenSet> {
    let corr = set.corr().clone();
    let sys = corr.sys();
    if t.is_identity() {
        return Ok(set.clone());
    }
    let Some((alpha, beta)) = t.pos_neg() else {
        if set.is_empty() {
            return Ok(OpenSet::empty(&corr));
        }
        return Err(Error::Precondition(format!(
            "{} acts nowhere, yet the set is nonempty",
            t.describe(sys)
        )));
    };
    let dom_gen = shared_gen(sys, &alpha, &beta);
    let refined = set.refine_to(set.depth().max(beta.len()));
    let mut pieces = Vec::new();
    for p in refined.pieces() {
        let Some(tail) = p.word.strip_prefix(&beta) else {
            return Err(Error::Precondition(format!(
                "piece N({}, {}) lies outside the domain of {}",
                sys.word_string(&p.word),
                sys.algebra().atom_name(p.atom),
                t.describe(sys)
            )));
        };
        let stem = sys
            .src_word(&tail, p.atom)
            .expect("piece atoms have source chains");
        if !dom_gen.contains_atom(stem) {
            return Err(Error::Precondition(format!(
                "piece N({}, {}) misses the carrier of {}",
                sys.word_string(&p.word),
                sys.algebra().atom_name(p.atom),
                t.describe(sys)
            )));
        }
        pieces.push(Cyl { word: alpha.concat(&tail), atom: p.atom });
    }
    let depth = refined.depth() - beta.len() + alpha.len();
    OpenSet::from_pieces(&corr, depth, pieces)
}

/// Verifies the partial-action axioms over all reduced words up to `depth`,
/// with `samples` extra random word pairs and pointwise probes.
pub fn check_axioms(
    corr: &Correspondence,
    depth: usize,
    samples: usize,
    seed: u64,
    strategy: Strategy,
) -> CheckReport {
    let sys = corr.sys();
    let mut report = CheckReport::new(format!(
        "partial action axioms up to word length {depth}"
    ));
    let full = OpenSet::full(corr);
    let ident = FreeWord::identity();
    let words = reduced_words(sys.label_count(), depth);
    let pool = corr.enumerate_boundary(depth + 2, depth.max(2));

    report.push(
        "identity carrier",
        domain_of(corr, &ident) == full,
        "U_e is the whole boundary",
    );
    let id_fixes = pool
        .iter()
        .all(|p| act(corr, &ident, p).map(|q| &q == p).unwrap_or(false));
    report.push("identity action", id_fixes, "φ_e fixes every enumerated path");

    // composition carriers: φ_t(U_t⁻¹ ∩ U_s) = U_t ∩ U_ts, exhaustive on
    // short pairs and sampled on the rest
    let short: Vec<FreeWord> = words
        .iter()
        .filter(|w| w.len() <= depth.min(2))
        .cloned()
        .collect();
    let mut pairs: Vec<(FreeWord, FreeWord)> = short
        .iter()
        .flat_map(|t| short.iter().map(move |s| (t.clone(), s.clone())))
        .collect();
    let mut rng = StdRng::seed_from_u64(seed);
    for _ in 0..samples {
        let t = words[rng.gen_range(0..words.len())].clone();
        let s = words[rng.gen_range(0..words.len())].clone();
        pairs.push((t, s));
    }
    let failures: Vec<String> = map_vec(strategy, &pairs, |(t, s)| {
        let dom = domain_of(corr, &t.inverse()).intersect(&domain_of(corr, s));
        let rhs = domain_of(corr, t).intersect(&domain_of(corr, &t.mul(s)));
        match act_on_openset(t, &dom) {
            Ok(lhs) if lhs == rhs => None,
            Ok(lhs) => Some(format!(
                "({}, {}): image {} differs from {}",
                t.describe(sys),
                s.describe(sys),
                lhs.describe(),
                rhs.describe()
            )),
            Err(e) => Some(format!("({}, {}): {e}", t.describe(sys), s.describe(sys))),
        }
    })
    .into_iter()
    .flatten()
    .collect();
    report.push(
        "composition carriers",
        failures.is_empty(),
        failures.first().cloned().unwrap_or_else(|| {
            format!("{} word pairs compared exactly", pairs.len())
        }),
    );

    // a length-additive product never enlarges the composite domain
    let semi_ok = pairs
        .iter()
        .filter(|(t, s)| t.mul(s).len() == t.len() + s.len())
        .all(|(t, s)| {
            domain_of(corr, &t.mul(s).inverse()).is_subset(&domain_of(corr, &s.inverse()))
        });
    report.push(
        "semi-saturation",
        semi_ok,
        "U_(ts)⁻¹ ⊆ U_s⁻¹ whenever |ts| = |t| + |s|",
    );

    let mut orth_ok = true;
    for l1 in 0..sys.label_count() {
        for l2 in (l1 + 1)..sys.label_count() {
            let u1 = domain_of(corr, &FreeWord::generator(l1));
            let u2 = domain_of(corr, &FreeWord::generator(l2));
            orth_ok &= u1.intersect(&u2).is_empty();
        }
    }
    report.push(
        "orthogonal letter carriers",
        orth_ok,
        "distinct letters have disjoint ranges",
    );

    // pulling the whole space back letter by letter lands on the cylinder
    // of the composite word ideal
    let mut pullback_ok = true;
    let mut pullback_detail = String::from("U pulled back along every positive word");
    'outer: for alpha in sys.wstar(depth) {
        if alpha.is_empty() {
            continue;
        }
        let mut set = OpenSet::full(corr);
        for &label in alpha.letters() {
            let g = FreeWord::generator(label);
            let cut = set.intersect(&domain_of(corr, &g));
            set = match act_on_openset(&g.inverse(), &cut) {
                Ok(s) => s,
                Err(e) => {
                    pullback_ok = false;
                    pullback_detail = format!("{}: {e}", sys.word_string(&alpha));
                    break 'outer;
                }
            };
        }
        let expected = CylinderBasic::new(sys, Word::empty(), sys.word_ideal_gen(&alpha))
            .expect("word ideal generators lie under the unit");
        if set != OpenSet::from_cylinder(corr, &expected) {
            pullback_ok = false;
            pullback_detail = format!(
                "{}: pullback {} is not the word ideal cylinder",
                sys.word_string(&alpha),
                set.describe()
            );
            break;
        }
    }
    report.push("word ideal pullback", pullback_ok, pullback_detail);

    let clopen_ok = words.iter().all(|t| {
        let u = domain_of(corr, t);
        u.union(&u.complement()) == full && u.intersect(&u.complement()).is_empty()
    });
    report.push("clopen carriers", clopen_ok, "every U_t splits the boundary");

    // pointwise probes: domain membership matches act, and composition
    // agrees wherever both factors are defined
    let mut probes = Vec::new();
    if !pool.is_empty() {
        for _ in 0..samples {
            let t = words[rng.gen_range(0..words.len())].clone();
            let s = words[rng.gen_range(0..words.len())].clone();
            let p = pool[rng.gen_range(0..pool.len())].clone();
            probes.push((t, s, p));
        }
    }
    let probe_failures: Vec<String> = map_vec(strategy, &probes, |(t, s, p)| {
        let in_s = domain_of(corr, &s.inverse()).contains_path(p);
        let moved = act(corr, s, p);
        if moved.is_ok() != in_s {
            return Some(format!(
                "membership in U_{}⁻¹ disagrees with φ at {}",
                s.describe(sys),
                p.to_spec(sys)
            ));
        }
        let Ok(mid) = moved else { return None };
        if !domain_of(corr, &t.inverse()).contains_path(&mid) {
            return None;
        }
        let two_step = act(corr, t, &mid);
        let one_step = act(corr, &t.mul(s), p);
        match (two_step, one_step) {
            (Ok(a), Ok(b)) if a == b => None,
            _ => Some(format!(
                "φ_{} ∘ φ_{} splits from φ_{} at {}",
                t.describe(sys),
                s.describe(sys),
                t.mul(s).describe(sys),
                p.to_spec(sys)
            )),
        }
    })
    .into_iter()
    .flatten()
    .collect();
    report.push(
        "pointwise composition",
        probe_failures.is_empty(),
        probe_failures
            .first()
            .cloned()
            .unwrap_or_else(|| format!("{} random probes", probes.len())),
    );

    report
}

/// A compact open bisection: a germ word together with the part of its
/// domain it is restricted to. These are the slices of the transformation
/// groupoid, with the zero slice represented by any word over an empty set.
#[derive(Clone, Debug)]
pub struct Bisection {
    t: FreeWord,
    source: OpenSet,
}

impl Bisection {
    pub fn new(t: FreeWord, source: OpenSet) -> Result<Bisection> {
        let corr = source.corr().clone();
        if !source.is_subset(&domain_of(&corr, &t.inverse())) {
            return Err(Error::Precondition(format!(
                "source escapes the domain of {}",
                t.describe(corr.sys())
            )));
        }
        Ok(Bisection { t, source })
    }

    pub fn zero(corr: &Correspondence) -> Bisection {
        Bisection { t: FreeWord::identity(), source: OpenSet::empty(corr) }
    }

    pub fn unit(corr: &Correspondence) -> Bisection {
        Bisection { t: FreeWord::identity(), source: OpenSet::full(corr) }
    }

    /// The idempotent over the range cylinder of an algebra element.
    pub fn projection(corr: &Correspondence, a: &Element) -> Bisection {
        let cyl = CylinderBasic::new(corr.sys(), Word::empty(), a.clone())
            .expect("every element lies under the unit");
        Bisection {
            t: FreeWord::identity(),
            source: OpenSet::from_cylinder(corr, &cyl),
        }
    }

    /// The partial isometry grafting α over the range atoms B ≤ gen I_α.
    pub fn shift_isometry(corr: &Correspondence, alpha: &Word, b: &Element) -> Result<Bisection> {
        let sys = corr.sys();
        if !b.leq(&sys.word_ideal_gen(alpha)) {
            return Err(Error::Precondition(format!(
                "element {b} escapes the ideal of word {}",
                sys.word_string(alpha)
            )));
        }
        let cyl = CylinderBasic::new(sys, Word::empty(), b.clone())?;
        Ok(Bisection {
            t: FreeWord::from_pos_neg(alpha, &Word::empty()),
            source: OpenSet::from_cylinder(corr, &cyl),
        })
    }

    pub fn word(&self) -> &FreeWord {
        &self.t
    }

    pub fn source(&self) -> &OpenSet {
        &self.source
    }

    pub fn target(&self) -> OpenSet {
        act_on_openset(&self.t, &self.source).expect("sources stay inside domains")
    }

    pub fn is_zero(&self) -> bool {
        self.source.is_empty()
    }

    /// Composition in operator order: `self` is applied after `other`.
    pub fn mul(&self, other: &Bisection) -> Bisection {
        let corr = self.source.corr().clone();
        let t = self.t.mul(&other.t);
        let reach = self.source.intersect(&domain_of(&corr, &other.t));
        let source = other
            .source
            .intersect(&act_on_openset(&other.t.inverse(), &reach).expect("cut to the carrier"));
        Bisection { t, source }
    }

    pub fn star(&self) -> Bisection {
        Bisection { t: self.t.inverse(), source: self.target() }
    }

    /// The grading degree |α| − |β| of a nonzero slice.
    pub fn degree(&self) -> Result<i64> {
        if self.source.is_empty() {
            return Err(Error::Domain("the zero bisection has no degree".to_string()));
        }
        let (alpha, beta) = self
            .t
            .pos_neg()
            .expect("nonzero bisections carry two-sided words");
        Ok(alpha.len() as i64 - beta.len() as i64)
    }

    pub fn describe(&self) -> String {
        let sys = self.source.corr().sys();
        if self.is_zero() {
            return "0".to_string();
        }
        format!("[{} on {}]", self.t.describe(sys), self.source.describe())
    }
}

impl PartialEq for Bisection {
    fn eq(&self, other: &Self) -> bool {
        if self.source.is_empty() && other.source.is_empty() {
            return true;
        }
        self.t == other.t && self.source == other.source
    }
}

impl Eq for Bisection {}

/// Verifies the generating relations of the bisection monoid: projections
/// multiply as meets, shifts intertwine projections through the action,
/// distinct letters are orthogonal, and regular range cylinders split into
/// their one-step shifts.
pub fn ck_check(corr: &Correspondence, max_len: usize) -> CheckReport {
    let sys = corr.sys();
    let algebra = sys.algebra();
    let mut report = CheckReport::new("Cuntz-Krieger relations for bisections");
    let elems: Vec<Element> = algebra.elements().collect();

    let proj_ok = elems.iter().all(|a| {
        let pa = Bisection::projection(corr, a);
        pa.star() == pa
            && pa.mul(&pa) == pa
            && elems.iter().all(|b| {
                Bisection::projection(corr, &a.meet(b)) == pa.mul(&Bisection::projection(corr, b))
            })
    });
    report.push(
        "projection lattice",
        proj_ok,
        "P_A P_B = P_A∧B with P self-adjoint idempotent",
    );

    let mut words: Vec<Word> = sys.wstar(max_len);
    words.retain(|w| !w.is_empty());

    let mut intertwine_ok = true;
    for alpha in &words {
        let gen = sys.word_ideal_gen(alpha);
        for b in algebra.elements() {
            if !b.leq(&gen) {
                continue;
            }
            let s = Bisection::shift_isometry(corr, alpha, &b).expect("b lies under the word ideal");
            for a in algebra.elements() {
                let lhs = Bisection::projection(corr, &a).mul(&s);
                let rhs = s.mul(&Bisection::projection(corr, &sys.apply_word(alpha, &a)));
                if lhs != rhs {
                    intertwine_ok = false;
                }
            }
        }
    }
    report.push(
        "projection intertwining",
        intertwine_ok,
        "P_A S_α,B = S_α,B P_θ_α(A)",
    );

    let mut orth_ok = true;
    for alpha in &words {
        for beta in &words {
            let comparable = alpha.starts_with(beta) || beta.starts_with(alpha);
            if comparable && alpha != beta {
                continue;
            }
            let ga = sys.word_ideal_gen(alpha);
            let gb = sys.word_ideal_gen(beta);
            let sa = Bisection::shift_isometry(corr, alpha, &ga).expect("generator under ideal");
            let sb = Bisection::shift_isometry(corr, beta, &gb).expect("generator under ideal");
            let prod = sa.star().mul(&sb);
            let expected = if alpha == beta {
                Bisection::projection(corr, &ga.meet(&gb))
            } else {
                Bisection::zero(corr)
            };
            if prod != expected {
                orth_ok = false;
            }
        }
    }
    report.push(
        "isometry orthogonality",
        orth_ok,
        "S_α* S_β = δ_αβ P over incomparable words",
    );

    let mut cover_ok = true;
    let mut cover_detail = String::from("regular cylinders split into one-step shifts");
    for a in algebra.elements() {
        if a.is_zero() || !sys.is_regular(&a) {
            continue;
        }
        let base = OpenSet::from_cylinder(
            corr,
            &CylinderBasic::new(sys, Word::empty(), a.clone()).expect("element under unit"),
        );
        let mut union = OpenSet::empty(corr);
        let mut disjoint = true;
        for label in 0..sys.label_count() {
            let image = sys.apply(label, &a);
            if image.is_zero() {
                continue;
            }
            let word = Word::single(label);
            let piece = OpenSet::from_cylinder(
                corr,
                &CylinderBasic::new(sys, word.clone(), image.clone()).expect("image under ideal"),
            );
            disjoint &= union.intersect(&piece).is_empty();
            union = union.union(&piece);
            let s = Bisection::shift_isometry(corr, &word, &image).expect("image under ideal");
            if s.mul(&s.star()) != Bisection::new(FreeWord::identity(), piece).expect("idempotent") {
                cover_ok = false;
                cover_detail = format!("S S* mismatch at {a}");
            }
        }
        if !(disjoint && union == base) {
            cover_ok = false;
            cover_detail = format!("cover of N(ε, {a}) is not exact");
        }
    }
    report.push("regular range cover", cover_ok, cover_detail);

    report
}

/// Verifies that every slice over a word pair factors through the letter
/// isometries: telescoping products, polar identities, the two-sided form,
/// and the unit built from range and edge cylinders.
pub fn factorization_check(corr: &Correspondence, max_len: usize) -> CheckReport {
    let sys = corr.sys();
    let algebra = sys.algebra();
    let mut report = CheckReport::new("factorization through letter isometries");
    let words: Vec<Word> = sys.wstar(max_len);

    let mut pull_ok = true;
    let mut tele_ok = true;
    let mut polar_ok = true;
    for alpha in &words {
        if alpha.is_empty() {
            continue;
        }
        let gen = sys.word_ideal_gen(alpha);
        for a in algebra.elements() {
            if !a.leq(&gen) {
                continue;
            }
            let source = OpenSet::from_cylinder(
                corr,
                &CylinderBasic::new(sys, Word::empty(), a.clone()).expect("element under unit"),
            );
            let graft = OpenSet::from_cylinder(
                corr,
                &CylinderBasic::new(sys, alpha.clone(), a.clone()).expect("element under ideal"),
            );
            let back = act_on_openset(&FreeWord::from_pos_neg(&Word::empty(), alpha), &graft);
            pull_ok &= back.map(|s| s == source).unwrap_or(false);

            let s = Bisection::shift_isometry(corr, alpha, &a).expect("element under ideal");
            let mut acc: Option<Bisection> = None;
            for (i, &label) in alpha.letters().iter().enumerate() {
                let piece = if i + 1 == alpha.len() {
                    a.clone()
                } else {
                    sys.ideal_gen(label).clone()
                };
                let factor = Bisection::shift_isometry(corr, &Word::single(label), &piece)
                    .expect("piece under letter ideal");
                acc = Some(match acc {
                    None => factor,
                    Some(prev) => prev.mul(&factor),
                });
            }
            tele_ok &= acc.expect("alpha is nonempty") == s;

            polar_ok &= s.star().mul(&s) == Bisection::projection(corr, &a);
            let range = Bisection::new(FreeWord::identity(), graft).expect("idempotent");
            polar_ok &= s.mul(&s.star()) == range;
        }
    }
    report.push("inverse collapse", pull_ok, "φ_α⁻¹ N(α, A) = N(ε, A)");
    report.push("telescoping", tele_ok, "S_α,A is the product of its letters");
    report.push("polar identities", polar_ok, "S* S and S S* are the two idempotents");

    let mut two_sided_ok = true;
    for alpha in &words {
        for beta in &words {
            let both = sys
                .word_ideal_gen(alpha)
                .meet(&sys.word_ideal_gen(beta));
            for a in algebra.elements() {
                if a.is_zero() || !a.leq(&both) {
                    continue;
                }
                let sa = Bisection::shift_isometry(corr, alpha, &a).expect("element under ideal");
                let sb = Bisection::shift_isometry(corr, beta, &a).expect("element under ideal");
                let prod = sa.mul(&sb.star());
                let source = OpenSet::from_cylinder(
                    corr,
                    &CylinderBasic::new(sys, beta.clone(), a.clone()).expect("element under ideal"),
                );
                let direct = Bisection::new(FreeWord::from_pos_neg(alpha, beta), source)
                    .expect("source inside carrier");
                two_sided_ok &= prod == direct;
            }
        }
    }
    report.push(
        "two-sided slices",
        two_sided_ok,
        "S_α,A S_β,A* is the slice of α·β⁻¹ over N(β, A)",
    );

    let mut cumulative = Bisection::projection(corr, &algebra.unit()).source().clone();
    for label in 0..sys.label_count() {
        let s = Bisection::shift_isometry(corr, &Word::single(label), sys.ideal_gen(label))
            .expect("generator under ideal");
        cumulative = cumulative.union(&s.target());
    }
    report.push(
        "unit exhaustion",
        cumulative == OpenSet::full(corr),
        "range and edge cylinders cover the boundary",
    );

    report
}
