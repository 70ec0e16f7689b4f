//! The inverse semigroup attached to a system, its idempotent order, and
//! filters over the idempotent semilattice.
//!
//! Elements are `(left, mid, right)` triples over words plus an absorbing
//! zero. Filters are stored as complete families of principal generators,
//! one per word prefix; eventually periodic filters carry a lasso word and
//! one period of generators.

use std::collections::BTreeSet;
use std::fmt;

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use crate::error::{Error, Result};
use crate::exec::{map_vec, Strategy};
use crate::gbds::{Gbds, Word};
use crate::report::CheckReport;
use crate::stone::{Element, Ideal};

/// An element of the inverse semigroup: zero, or a triple whose middle part
/// lives in the word ideals of both words.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum SgElem {
    Zero,
    Triple { left: Word, mid: Element, right: Word },
}

impl SgElem {
    /// Builds a triple, checking the word-ideal memberships. An empty middle
    /// collapses to `Zero`, matching the semigroup identification.
    pub fn triple(sys: &Gbds, left: Word, mid: Element, right: Word) -> Result<SgElem> {
        if mid.algebra() != sys.algebra() {
            return Err(Error::AlgebraMismatch);
        }
        if mid.is_zero() {
            return Ok(SgElem::Zero);
        }
        for w in [&left, &right] {
            let cap = sys.word_ideal_gen(w);
            if !mid.leq(&cap) {
                return Err(Error::Precondition(format!(
                    "{} is not in the ideal of word {}",
                    mid,
                    sys.word_string(w)
                )));
            }
        }
        Ok(SgElem::Triple { left, mid, right })
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, SgElem::Zero)
    }

    /// Zero and diagonal triples `(w, A, w)` are exactly the idempotents.
    pub fn is_idempotent(&self) -> bool {
        match self {
            SgElem::Zero => true,
            SgElem::Triple { left, right, .. } => left == right,
        }
    }

    pub fn describe(&self, sys: &Gbds) -> String {
        match self {
            SgElem::Zero => "0".to_string(),
            SgElem::Triple { left, mid, right } => {
                format!("({}, {}, {})", sys.word_string(left), mid, sys.word_string(right))
            }
        }
    }
}

/// The four-case product. Zero absorbs; a triple whose middle collapses to
/// the empty element is returned as zero.
pub fn multiply(sys: &Gbds, s: &SgElem, t: &SgElem) -> SgElem {
    let (SgElem::Triple { left: al, mid: am, right: ar }, SgElem::Triple { left: bl, mid: bm, right: br }) =
        (s, t)
    else {
        return SgElem::Zero;
    };
    let (left, mid, right) = if ar == bl {
        (al.clone(), am.meet(bm), br.clone())
    } else if let Some(tail) = bl.strip_prefix(ar) {
        (al.concat(&tail), sys.apply_word(&tail, am).meet(bm), br.clone())
    } else if let Some(tail) = ar.strip_prefix(bl) {
        (al.clone(), am.meet(&sys.apply_word(&tail, bm)), br.concat(&tail))
    } else {
        return SgElem::Zero;
    };
    if mid.is_zero() {
        SgElem::Zero
    } else {
        SgElem::Triple { left, mid, right }
    }
}

/// The involution: swap the words, keep the middle.
pub fn star(s: &SgElem) -> SgElem {
    match s {
        SgElem::Zero => SgElem::Zero,
        SgElem::Triple { left, mid, right } => {
            SgElem::Triple { left: right.clone(), mid: mid.clone(), right: left.clone() }
        }
    }
}

/// The natural order on idempotents: `e ≤ f` iff the word of `e` extends the
/// word of `f` and the middle of `e` sits inside the pushed-forward middle of
/// `f`. Errors on non-idempotent input.
pub fn idempotent_leq(sys: &Gbds, e: &SgElem, f: &SgElem) -> Result<bool> {
    for s in [e, f] {
        if !s.is_idempotent() {
            return Err(Error::Precondition(format!(
                "idempotent order needs idempotents, got {}",
                s.describe(sys)
            )));
        }
    }
    Ok(match (e, f) {
        (SgElem::Zero, _) => true,
        (_, SgElem::Zero) => false,
        (SgElem::Triple { left: ew, mid: em, .. }, SgElem::Triple { left: fw, mid: fm, .. }) => {
            match ew.strip_prefix(fw) {
                Some(tail) => em.leq(&sys.apply_word(&tail, fm)),
                None => false,
            }
        }
    })
}

/// All elements with both words of length at most `max_len`: zero first, then
/// triples ordered by (left, right, middle mask).
pub fn enumerate_semigroup(sys: &Gbds, max_len: usize) -> Vec<SgElem> {
    let words = sys.wstar(max_len);
    let mut out = vec![SgElem::Zero];
    for left in &words {
        for right in &words {
            let cap = sys.word_ideal_gen(left).meet(&sys.word_ideal_gen(right));
            for mid in Ideal::new(cap).elements() {
                if !mid.is_zero() {
                    out.push(SgElem::Triple {
                        left: left.clone(),
                        mid,
                        right: right.clone(),
                    });
                }
            }
        }
    }
    out
}

/// Checks the semigroup laws over all elements with words up to `max_len`:
/// associativity, the involution laws, and the idempotent order against the
/// product characterization. `max_triples` caps the associativity sweep; when
/// the full cube is larger, triples are sampled with `seed`.
pub fn check_semigroup_laws(
    sys: &Gbds,
    max_len: usize,
    max_triples: Option<usize>,
    seed: u64,
    strategy: Strategy,
) -> CheckReport {
    let elems = enumerate_semigroup(sys, max_len);
    let n = elems.len();
    let mut report = CheckReport::new(format!(
        "semigroup laws over {n} elements (words up to length {max_len})"
    ));

    let full = n * n * n;
    let triples: Vec<(usize, usize, usize)> = match max_triples {
        Some(cap) if full > cap => {
            let mut rng = StdRng::seed_from_u64(seed);
            (0..cap)
                .map(|_| (rng.gen_range(0..n), rng.gen_range(0..n), rng.gen_range(0..n)))
                .collect()
        }
        _ => (0..n)
            .flat_map(|i| (0..n).flat_map(move |j| (0..n).map(move |k| (i, j, k))))
            .collect(),
    };
    let failures = map_vec(strategy, &triples, |&(i, j, k)| {
        let left = multiply(sys, &multiply(sys, &elems[i], &elems[j]), &elems[k]);
        let right = multiply(sys, &elems[i], &multiply(sys, &elems[j], &elems[k]));
        if left == right {
            None
        } else {
            Some(format!(
                "({}, {}, {}) associates to {} vs {}",
                elems[i].describe(sys),
                elems[j].describe(sys),
                elems[k].describe(sys),
                left.describe(sys),
                right.describe(sys)
            ))
        }
    });
    match failures.into_iter().flatten().next() {
        None => report.pass(format!("associativity on {} triples", triples.len())),
        Some(d) => report.fail("associativity", d),
    }

    let inv = map_vec(strategy, &elems, |s| {
        let ss = star(s);
        if star(&ss) != *s {
            return Some(format!("star is not involutive on {}", s.describe(sys)));
        }
        if multiply(sys, &multiply(sys, s, &ss), s) != *s {
            return Some(format!("s·s*·s ≠ s for {}", s.describe(sys)));
        }
        if multiply(sys, &multiply(sys, &ss, s), &ss) != ss {
            return Some(format!("s*·s·s* ≠ s* for {}", s.describe(sys)));
        }
        None
    });
    match inv.into_iter().flatten().next() {
        None => report.pass("involution and generalized-inverse laws"),
        Some(d) => report.fail("involution and generalized-inverse laws", d),
    }

    let idem: Vec<&SgElem> = elems.iter().filter(|e| e.is_idempotent()).collect();
    let pairs: Vec<(usize, usize)> =
        (0..idem.len()).flat_map(|i| (0..idem.len()).map(move |j| (i, j))).collect();
    let idem_failures = map_vec(strategy, &pairs, |&(i, j)| {
        let ef = multiply(sys, idem[i], idem[j]);
        let fe = multiply(sys, idem[j], idem[i]);
        if ef != fe {
            return Some(format!(
                "idempotents {} and {} do not commute",
                idem[i].describe(sys),
                idem[j].describe(sys)
            ));
        }
        if !ef.is_idempotent() {
            return Some(format!("product of idempotents {} not idempotent", ef.describe(sys)));
        }
        let leq = idempotent_leq(sys, idem[i], idem[j]).expect("filtered to idempotents");
        if leq != (ef == *idem[i]) {
            return Some(format!(
                "order mismatch: {} ≤ {} is {leq} but e·f {} e",
                idem[i].describe(sys),
                idem[j].describe(sys),
                if ef == *idem[i] { "=" } else { "≠" }
            ));
        }
        None
    });
    match idem_failures.into_iter().flatten().next() {
        None => report.pass(format!("idempotent semilattice on {} idempotents", idem.len())),
        Some(d) => report.fail("idempotent semilattice", d),
    }

    report
}

/// The word of a filter: a finite word, or a lasso standing for the
/// eventually periodic infinite word `prefix · cycle · cycle · …`.
///
/// The cycle records one period of (letter, generator) pairs, so its letters
/// may repeat: a filter can alternate generators under a single looping
/// letter, and the stored cycle is then that letter repeated.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum FilterWord {
    Finite(Word),
    Lasso { prefix: Word, cycle: Word },
}

impl FilterWord {
    pub fn is_lasso(&self) -> bool {
        matches!(self, FilterWord::Lasso { .. })
    }
}

/// Joins the sources of all atoms of `gen` under one letter. `None` when some
/// atom lies outside the letter's range, in which case no element can be
/// pushed forward into the filter above.
fn pull(sys: &Gbds, letter: usize, gen: &Element) -> Option<Element> {
    let algebra = sys.algebra();
    let mut out = algebra.zero();
    for b in gen.atom_ids() {
        let a = sys.src(letter, b)?;
        out = out.join(&algebra.atom_elem(a));
    }
    Some(out)
}

/// Rewrites a lasso of pairs into canonical form: the cycle is shrunk to its
/// primitive root, then trailing prefix entries equal to the cycle tail are
/// absorbed by rotating the cycle. Two lassos describe the same infinite
/// sequence exactly when their canonical forms coincide.
pub(crate) fn canonical_lasso<T: Clone + PartialEq>(prefix: &mut Vec<T>, cycle: &mut Vec<T>) {
    let n = cycle.len();
    assert!(n > 0, "lasso cycles are nonempty");
    for d in 1..n {
        if n % d == 0 && (d..n).all(|i| cycle[i] == cycle[i % d]) {
            cycle.truncate(d);
            break;
        }
    }
    while !prefix.is_empty() && prefix.last() == cycle.last() {
        prefix.pop();
        cycle.rotate_right(1);
    }
}

/// Lasso validation walks the word-ideal chain until the (phase, ideal)
/// state repeats; this caps the walk on adversarial inputs.
const LASSO_WALK_CAP: usize = 4096;

/// A filter over the idempotent semilattice, stored as its complete family
/// of principal generators per word prefix.
///
/// `levels[k]` generates the filter at prefix length `k + 1`. `base` is the
/// generator at the empty prefix; `None` marks the family whose level zero is
/// empty, which happens exactly when some atom of the first generator lies
/// outside the first letter's range. Completeness pins every level below the
/// deepest stored one, so equality of the stored data is equality of filters.
#[derive(Clone, Debug)]
pub struct FilterE {
    sys: Gbds,
    word: FilterWord,
    base: Option<Element>,
    levels: Vec<Element>,
}

impl PartialEq for FilterE {
    fn eq(&self, other: &Self) -> bool {
        self.word == other.word && self.base == other.base && self.levels == other.levels
    }
}

impl Eq for FilterE {}

impl PartialOrd for FilterE {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for FilterE {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (&self.word, &self.base, &self.levels).cmp(&(&other.word, &other.base, &other.levels))
    }
}

impl FilterE {
    /// Validates a family of generators against a word and stores it. Checks
    /// nonzeroness, membership in the word ideals, and completeness at every
    /// index, reporting the first failing index. Lasso families are also
    /// checked across the period seam and put into canonical form.
    pub fn from_family(
        sys: &Gbds,
        word: FilterWord,
        base: Option<Element>,
        levels: Vec<Element>,
    ) -> Result<FilterE> {
        for g in levels.iter().chain(base.as_ref()) {
            if g.algebra() != sys.algebra() {
                return Err(Error::AlgebraMismatch);
            }
        }
        match word {
            FilterWord::Finite(w) => Self::from_finite_family(sys, w, base, levels),
            FilterWord::Lasso { prefix, cycle } => {
                Self::from_lasso_family(sys, prefix, cycle, base, levels)
            }
        }
    }

    fn from_finite_family(
        sys: &Gbds,
        word: Word,
        base: Option<Element>,
        levels: Vec<Element>,
    ) -> Result<FilterE> {
        let n = word.len();
        if levels.len() != n {
            return Err(Error::Invalid(format!(
                "word {} needs {n} level generators beyond the base, got {}",
                sys.word_string(&word),
                levels.len()
            )));
        }
        if n == 0 {
            return match base {
                Some(b) if !b.is_zero() => Ok(FilterE {
                    sys: sys.clone(),
                    word: FilterWord::Finite(word),
                    base: Some(b),
                    levels,
                }),
                _ => Err(Error::Invalid(
                    "a filter over the empty word needs a nonzero base generator".into(),
                )),
            };
        }
        let mut ideal_gen = sys.ideal_gen(word.letter(0)).clone();
        for k in 1..=n {
            if k >= 2 {
                ideal_gen = sys.apply(word.letter(k - 1), &ideal_gen);
            }
            let g = &levels[k - 1];
            if g.is_zero() {
                return Err(Error::IncompleteFamily {
                    index: k,
                    detail: "level generator is empty".into(),
                });
            }
            if !g.leq(&ideal_gen) {
                return Err(Error::IncompleteFamily {
                    index: k,
                    detail: format!("generator {g} lies outside the word ideal {ideal_gen}"),
                });
            }
        }
        for k in (2..=n).rev() {
            let expected = pull(sys, word.letter(k - 1), &levels[k - 1]);
            if expected.as_ref() != Some(&levels[k - 2]) {
                return Err(Error::IncompleteFamily {
                    index: k - 1,
                    detail: format!(
                        "completeness forces level {} to be generated by {}",
                        k - 1,
                        describe_gen(&expected)
                    ),
                });
            }
        }
        let expected = pull(sys, word.letter(0), &levels[0]);
        if base != expected {
            return Err(Error::IncompleteFamily {
                index: 0,
                detail: format!(
                    "completeness forces the base to be {}",
                    describe_gen(&expected)
                ),
            });
        }
        Ok(FilterE { sys: sys.clone(), word: FilterWord::Finite(word), base, levels })
    }

    fn from_lasso_family(
        sys: &Gbds,
        prefix: Word,
        cycle: Word,
        base: Option<Element>,
        levels: Vec<Element>,
    ) -> Result<FilterE> {
        let np = prefix.len();
        let nc = cycle.len();
        if nc == 0 {
            return Err(Error::Invalid("a lasso word needs a nonempty cycle".into()));
        }
        let n = np + nc;
        if levels.len() != n {
            return Err(Error::Invalid(format!(
                "lasso with prefix {} and cycle {} needs {n} level generators, got {}",
                sys.word_string(&prefix),
                sys.word_string(&cycle),
                levels.len()
            )));
        }
        let letter_at = |k: usize| {
            if k <= np {
                prefix.letter(k - 1)
            } else {
                cycle.letter((k - np - 1) % nc)
            }
        };
        let level_at = |k: usize| -> &Element {
            if k <= n {
                &levels[k - 1]
            } else {
                &levels[np + (k - np - 1) % nc]
            }
        };

        let mut ideal_gen = sys.ideal_gen(letter_at(1)).clone();
        let mut seen = BTreeSet::new();
        let cap = np + nc * LASSO_WALK_CAP;
        let mut k = 0;
        loop {
            k += 1;
            if k > cap {
                return Err(Error::Unsupported(format!(
                    "lasso ideal chain did not stabilize within {cap} levels"
                )));
            }
            if k >= 2 {
                ideal_gen = sys.apply(letter_at(k), &ideal_gen);
            }
            let g = level_at(k);
            if g.is_zero() {
                return Err(Error::IncompleteFamily {
                    index: k,
                    detail: "level generator is empty".into(),
                });
            }
            if !g.leq(&ideal_gen) {
                return Err(Error::IncompleteFamily {
                    index: k,
                    detail: format!("generator {g} lies outside the word ideal {ideal_gen}"),
                });
            }
            if k >= 2 {
                let expected = pull(sys, letter_at(k), g);
                if expected.as_ref() != Some(level_at(k - 1)) {
                    return Err(Error::IncompleteFamily {
                        index: k - 1,
                        detail: format!(
                            "completeness forces level {} to be generated by {}",
                            k - 1,
                            describe_gen(&expected)
                        ),
                    });
                }
            }
            if k > np && !seen.insert(((k - np - 1) % nc, ideal_gen.mask())) {
                break;
            }
        }
        let expected = pull(sys, letter_at(1), level_at(1));
        if base != expected {
            return Err(Error::IncompleteFamily {
                index: 0,
                detail: format!(
                    "completeness forces the base to be {}",
                    describe_gen(&expected)
                ),
            });
        }

        let mut ppairs: Vec<(usize, Element)> =
            (1..=np).map(|k| (letter_at(k), level_at(k).clone())).collect();
        let mut cpairs: Vec<(usize, Element)> =
            (np + 1..=n).map(|k| (letter_at(k), level_at(k).clone())).collect();
        canonical_lasso(&mut ppairs, &mut cpairs);
        let canon_prefix = Word::new(ppairs.iter().map(|p| p.0).collect());
        let canon_cycle = Word::new(cpairs.iter().map(|p| p.0).collect());
        let canon_levels: Vec<Element> =
            ppairs.into_iter().chain(cpairs).map(|p| p.1).collect();
        let canon_base = pull(sys, canon_cycle_first(&canon_prefix, &canon_cycle), &canon_levels[0]);
        Ok(FilterE {
            sys: sys.clone(),
            word: FilterWord::Lasso { prefix: canon_prefix, cycle: canon_cycle },
            base: canon_base,
            levels: canon_levels,
        })
    }

    /// The filter of finite type over `word` generated at the deepest level
    /// by `top`; completeness determines every level below, including the
    /// base.
    pub fn finite(sys: &Gbds, word: Word, top: Element) -> Result<FilterE> {
        if top.algebra() != sys.algebra() {
            return Err(Error::AlgebraMismatch);
        }
        if top.is_zero() {
            return Err(Error::Invalid("a filter generator must be nonzero".into()));
        }
        let n = word.len();
        if n == 0 {
            return Ok(FilterE {
                sys: sys.clone(),
                word: FilterWord::Finite(word),
                base: Some(top),
                levels: Vec::new(),
            });
        }
        if !top.leq(&sys.word_ideal_gen(&word)) {
            return Err(Error::Precondition(format!(
                "generator {} lies outside the ideal of word {}",
                top,
                sys.word_string(&word)
            )));
        }
        let mut levels = vec![sys.algebra().zero(); n];
        levels[n - 1] = top;
        for k in (2..=n).rev() {
            levels[k - 2] = pull(sys, word.letter(k - 1), &levels[k - 1])
                .expect("levels above the base sit inside action ranges");
        }
        let base = pull(sys, word.letter(0), &levels[0]);
        Ok(FilterE { sys: sys.clone(), word: FilterWord::Finite(word), base, levels })
    }

    /// The eventually periodic filter over `prefix · cycle^∞` with the given
    /// stored levels; the base is derived, the rest is validated.
    pub fn lasso(sys: &Gbds, prefix: Word, cycle: Word, levels: Vec<Element>) -> Result<FilterE> {
        if cycle.is_empty() {
            return Err(Error::Invalid("a lasso word needs a nonempty cycle".into()));
        }
        if levels.is_empty() || levels[0].algebra() != sys.algebra() {
            return Err(Error::Invalid("lasso filters need one level per stored position".into()));
        }
        let first = prefix.first().unwrap_or_else(|| cycle.first().expect("nonempty cycle"));
        let base = pull(sys, first, &levels[0]);
        Self::from_family(sys, FilterWord::Lasso { prefix, cycle }, base, levels)
    }

    pub fn sys(&self) -> &Gbds {
        &self.sys
    }

    pub fn word(&self) -> &FilterWord {
        &self.word
    }

    /// Generator at the empty prefix; `None` is the empty level-zero marker.
    pub fn base(&self) -> Option<&Element> {
        self.base.as_ref()
    }

    pub fn levels(&self) -> &[Element] {
        &self.levels
    }

    /// Generator at prefix length `k ≥ 1`. Lassos repeat with their period;
    /// finite words run out past their length.
    pub fn level_at(&self, k: usize) -> Option<&Element> {
        assert!(k >= 1, "level 0 is the base");
        match &self.word {
            FilterWord::Finite(_) => self.levels.get(k - 1),
            FilterWord::Lasso { prefix, cycle } => {
                let (np, nc) = (prefix.len(), cycle.len());
                if k <= np + nc {
                    Some(&self.levels[k - 1])
                } else {
                    Some(&self.levels[np + (k - np - 1) % nc])
                }
            }
        }
    }

    /// Letter at position `k ≥ 1` of the (possibly infinite) word.
    pub fn letter_at(&self, k: usize) -> Option<usize> {
        assert!(k >= 1, "positions are 1-based");
        match &self.word {
            FilterWord::Finite(w) => (k <= w.len()).then(|| w.letter(k - 1)),
            FilterWord::Lasso { prefix, cycle } => {
                let np = prefix.len();
                if k <= np {
                    Some(prefix.letter(k - 1))
                } else {
                    Some(cycle.letter((k - np - 1) % cycle.len()))
                }
            }
        }
    }

    /// Whether the diagonal idempotent `(w, A, w)` belongs to this filter:
    /// `w` must be a prefix of the filter's word and `A` must contain the
    /// generator at that depth. Zero and non-idempotents belong to no filter.
    pub fn contains_idempotent(&self, e: &SgElem) -> bool {
        let SgElem::Triple { left, mid, right } = e else { return false };
        if left != right {
            return false;
        }
        let k = left.len();
        for i in 1..=k {
            if self.letter_at(i) != Some(left.letter(i - 1)) {
                return false;
            }
        }
        if k == 0 {
            return match &self.base {
                Some(b) => b.leq(mid),
                None => false,
            };
        }
        match self.level_at(k) {
            Some(g) => g.leq(mid),
            None => false,
        }
    }

    /// Tightness: a finite-type filter is tight when its deepest generator is
    /// a single atom that no action maps anywhere; a lasso filter is tight
    /// when every stored level is a single atom.
    pub fn is_tight(&self) -> bool {
        match &self.word {
            FilterWord::Finite(w) => {
                let top = if w.is_empty() {
                    self.base.as_ref().expect("empty-word filters carry a base")
                } else {
                    &self.levels[self.levels.len() - 1]
                };
                top.atom_count() == 1 && !self.sys.is_regular(top)
            }
            FilterWord::Lasso { .. } => self.levels.iter().all(|g| g.atom_count() == 1),
        }
    }

    pub fn describe(&self) -> String {
        let sys = &self.sys;
        let mut out = match &self.word {
            FilterWord::Finite(w) => format!("word {}", sys.word_string(w)),
            FilterWord::Lasso { prefix, cycle } => {
                let mut s = "word ".to_string();
                if !prefix.is_empty() {
                    s.push_str(&sys.word_string(prefix));
                }
                s.push('(');
                s.push_str(&sys.word_string(cycle));
                s.push_str(")^∞");
                s
            }
        };
        out.push_str(": F0 = ");
        out.push_str(&describe_gen(&self.base));
        for (i, g) in self.levels.iter().enumerate() {
            out.push_str(&format!(", F{} = ↑{}", i + 1, g));
        }
        if self.word.is_lasso() {
            out.push_str(", …");
        }
        out
    }
}

impl fmt::Display for FilterE {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.describe())
    }
}

fn describe_gen(gen: &Option<Element>) -> String {
    match gen {
        None => "∅".to_string(),
        Some(g) => format!("↑{g}"),
    }
}

fn canon_cycle_first(prefix: &Word, cycle: &Word) -> usize {
    prefix.first().unwrap_or_else(|| cycle.first().expect("nonempty cycle"))
}

/// Validates a family against a word; the free-function spelling of
/// [`FilterE::from_family`].
pub fn filter_from_family(
    sys: &Gbds,
    word: FilterWord,
    base: Option<Element>,
    levels: Vec<Element>,
) -> Result<FilterE> {
    FilterE::from_family(sys, word, base, levels)
}

/// Splits a filter back into its word and family of generators.
pub fn family_from_filter(filter: &FilterE) -> (FilterWord, Option<Element>, Vec<Element>) {
    (filter.word.clone(), filter.base.clone(), filter.levels.to_vec())
}

/// All filters of finite type whose word has length at most `max_len`, in
/// (word, generator mask) order.
pub fn enumerate_finite_filters(sys: &Gbds, max_len: usize) -> Vec<FilterE> {
    let mut out = Vec::new();
    for word in sys.wstar(max_len) {
        for top in sys.word_ideal(&word).elements() {
            if !top.is_zero() {
                out.push(
                    FilterE::finite(sys, word.clone(), top)
                        .expect("generators inside the word ideal form valid filters"),
                );
            }
        }
    }
    out
}

/// All eventually periodic filters with canonical prefix length at most
/// `max_len` and period at most `max_period`, deduplicated through the
/// canonical form. The period bound counts stored (letter, generator) pairs,
/// so alternating generators under a looping letter need period 2.
pub fn enumerate_lasso_filters(sys: &Gbds, max_len: usize, max_period: usize) -> Vec<FilterE> {
    let mut set = BTreeSet::new();
    let prefixes = sys.wstar(max_len);
    for cycle in all_letter_words(sys.label_count(), max_period) {
        for prefix in &prefixes {
            let full = prefix.concat(&cycle);
            let cap = sys.word_ideal_gen(&full);
            if cap.is_zero() {
                continue;
            }
            for deepest in Ideal::new(cap.clone()).elements() {
                if deepest.is_zero() {
                    continue;
                }
                let n = full.len();
                let mut levels = vec![sys.algebra().zero(); n];
                levels[n - 1] = deepest;
                let mut ok = true;
                for k in (2..=n).rev() {
                    match pull(sys, full.letter(k - 1), &levels[k - 1]) {
                        Some(g) => levels[k - 2] = g,
                        None => {
                            ok = false;
                            break;
                        }
                    }
                }
                if !ok {
                    continue;
                }
                let base = pull(sys, full.letter(0), &levels[0]);
                let word =
                    FilterWord::Lasso { prefix: prefix.clone(), cycle: cycle.clone() };
                if let Ok(filter) = FilterE::from_family(sys, word, base, levels) {
                    set.insert(filter);
                }
            }
        }
    }
    set.into_iter().collect()
}

/// Every word over the full label alphabet with length in `1..=max_len`,
/// without the nonzero-ideal restriction; lasso cycles may pass through
/// letters whose standalone ideal membership only holds in context.
fn all_letter_words(labels: usize, max_len: usize) -> Vec<Word> {
    let mut out = Vec::new();
    let mut frontier = vec![Word::empty()];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for w in &frontier {
            for l in 0..labels {
                let mut ext = w.clone();
                ext.push(l);
                out.push(ext.clone());
                next.push(ext);
            }
        }
        frontier = next;
    }
    out
}

/// All tight filters within the bounds: finite type with word length at most
/// `max_len`, lasso type with canonical prefix at most `max_len` and period
/// at most `max_period`. Finite filters first.
pub fn tight_filters(sys: &Gbds, max_len: usize, max_period: usize) -> Vec<FilterE> {
    let mut out: Vec<FilterE> = enumerate_finite_filters(sys, max_len)
        .into_iter()
        .filter(FilterE::is_tight)
        .collect();
    out.extend(
        enumerate_lasso_filters(sys, max_len, max_period)
            .into_iter()
            .filter(FilterE::is_tight),
    );
    out
}
