//! Brute-force oracle used by the integration suites. Everything here is
//! recomputed straight from the defining tables of a system (atom images and
//! declared ideal generators) with plain masks and vectors; none of the
//! library's semigroup, path, open-set, or action machinery is consulted.

#![allow(dead_code)]

use std::collections::BTreeSet;

use bdsys_core::gbds::Gbds;

/// Raw tables of a system: the only inputs the oracle trusts.
pub struct RawSys {
    pub atoms: usize,
    pub labels: usize,
    pub atom_names: Vec<String>,
    pub label_names: Vec<String>,
    /// `img[l][a]`: mask of the image of atom `a` under letter `l`.
    pub img: Vec<Vec<u64>>,
    /// Declared ideal generator mask per letter.
    pub gens: Vec<u64>,
    /// `src[l][c]`: the unique atom whose image under `l` contains `c`.
    pub src: Vec<Vec<Option<usize>>>,
}

impl RawSys {
    pub fn of(sys: &Gbds) -> RawSys {
        let atoms = sys.algebra().atom_count();
        let labels = sys.label_count();
        let img: Vec<Vec<u64>> = (0..labels)
            .map(|l| (0..atoms).map(|a| sys.atom_image(l, a).mask()).collect())
            .collect();
        let src = (0..labels)
            .map(|l| {
                (0..atoms)
                    .map(|c| (0..atoms).find(|&a| img[l][a] >> c & 1 == 1))
                    .collect()
            })
            .collect();
        RawSys {
            atoms,
            labels,
            atom_names: sys.algebra().atom_names().to_vec(),
            label_names: sys.labels().to_vec(),
            img,
            gens: (0..labels).map(|l| sys.ideal_gen(l).mask()).collect(),
            src,
        }
    }

    pub fn unit(&self) -> u64 {
        (1u64 << self.atoms) - 1
    }

    pub fn apply(&self, l: usize, mask: u64) -> u64 {
        (0..self.atoms).filter(|&a| mask >> a & 1 == 1).fold(0, |acc, a| acc | self.img[l][a])
    }

    /// First letter acts first.
    pub fn apply_word(&self, word: &[usize], mask: u64) -> u64 {
        word.iter().fold(mask, |m, &l| self.apply(l, m))
    }

    /// Dual walk: the last letter's source first. `c ∈ θ_w(A)` iff this
    /// lands inside `A`.
    pub fn src_word(&self, word: &[usize], atom: usize) -> Option<usize> {
        word.iter().rev().try_fold(atom, |c, &l| self.src[l][c])
    }

    pub fn word_ideal(&self, word: &[usize]) -> u64 {
        match word.split_first() {
            None => self.unit(),
            Some((&first, rest)) => self.apply_word(rest, self.gens[first]),
        }
    }

    /// All label words up to `max_len`, shortest first.
    pub fn words(&self, max_len: usize) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new()];
        let mut layer = vec![Vec::new()];
        for _ in 0..max_len {
            let mut next = Vec::new();
            for w in &layer {
                for l in 0..self.labels {
                    let mut longer = w.clone();
                    longer.push(l);
                    next.push(longer);
                }
            }
            out.extend(next.iter().cloned());
            layer = next;
        }
        out
    }

    /// The words whose word ideal is nonzero.
    pub fn wstar(&self, max_len: usize) -> Vec<Vec<usize>> {
        self.words(max_len).into_iter().filter(|w| self.word_ideal(w) != 0).collect()
    }

    pub fn mask_name(&self, mask: u64) -> String {
        let names: Vec<&str> = (0..self.atoms)
            .filter(|&a| mask >> a & 1 == 1)
            .map(|a| self.atom_names[a].as_str())
            .collect();
        if names.is_empty() { "∅".into() } else { format!("{{{}}}", names.join(",")) }
    }

    pub fn word_name(&self, word: &[usize]) -> String {
        if word.is_empty() {
            "ε".into()
        } else {
            word.iter().map(|&l| self.label_names[l].as_str()).collect()
        }
    }
}

// ---------------------------------------------------------------------------
// inverse semigroup of triples

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug)]
pub enum OSg {
    Zero,
    T(Vec<usize>, u64, Vec<usize>),
}

fn strip<'a>(longer: &'a [usize], prefix: &[usize]) -> Option<&'a [usize]> {
    longer.strip_prefix(prefix)
}

/// The four-case product read off the definition: cancel the inner words
/// against each other, push the surviving middle through the leftover tail.
pub fn o_mul(raw: &RawSys, s: &OSg, t: &OSg) -> OSg {
    let (OSg::T(al, a, be), OSg::T(ga, b, de)) = (s, t) else {
        return OSg::Zero;
    };
    let (left, mid, right) = if let Some(rest) = strip(ga, be) {
        let mut l = al.clone();
        l.extend_from_slice(rest);
        (l, raw.apply_word(rest, *a) & b, de.clone())
    } else if let Some(rest) = strip(be, ga) {
        let mut r = de.clone();
        r.extend_from_slice(rest);
        (al.clone(), a & raw.apply_word(rest, *b), r)
    } else {
        return OSg::Zero;
    };
    if mid == 0 {
        OSg::Zero
    } else {
        OSg::T(left, mid, right)
    }
}

pub fn o_star(s: &OSg) -> OSg {
    match s {
        OSg::Zero => OSg::Zero,
        OSg::T(al, a, be) => OSg::T(be.clone(), *a, al.clone()),
    }
}

/// Every element with both words within `max_len`, zero included.
pub fn o_enumerate(raw: &RawSys, max_len: usize) -> Vec<OSg> {
    let words = raw.words(max_len);
    let mut out = vec![OSg::Zero];
    for al in &words {
        let ia = raw.word_ideal(al);
        if ia == 0 {
            continue;
        }
        for be in &words {
            let cap = ia & raw.word_ideal(be);
            for mid in 1..(1u64 << raw.atoms) {
                if mid & !cap == 0 {
                    out.push(OSg::T(al.clone(), mid, be.clone()));
                }
            }
        }
    }
    out
}

pub fn o_is_idempotent(raw: &RawSys, e: &OSg) -> bool {
    o_mul(raw, e, e) == *e
}

/// `e ≤ f` among idempotents.
pub fn o_idem_leq(raw: &RawSys, e: &OSg, f: &OSg) -> bool {
    o_mul(raw, e, f) == *e
}

// ---------------------------------------------------------------------------
// filters in the idempotent semilattice, as literal subsets

/// The nonzero idempotents with words up to `max_len`.
pub fn o_idempotents(raw: &RawSys, max_len: usize) -> Vec<OSg> {
    o_enumerate(raw, max_len)
        .into_iter()
        .filter(|e| *e != OSg::Zero && o_is_idempotent(raw, e))
        .collect()
}

/// Every subset of the pool that is a filter: nonempty, closed under meet
/// (the product), upward closed. Exact when the pool is the whole
/// idempotent set. Pools stay tiny, so plain subset enumeration is fine.
pub fn o_filters(raw: &RawSys, pool: &[OSg]) -> Vec<BTreeSet<usize>> {
    let n = pool.len();
    assert!(n <= 20, "filter oracle is for exhaustively small pools, got {n}");
    let mut out = Vec::new();
    'subsets: for bits in 1u64..(1 << n) {
        let members: Vec<usize> = (0..n).filter(|&i| bits >> i & 1 == 1).collect();
        for &i in &members {
            for &j in &members {
                let meet = o_mul(raw, &pool[i], &pool[j]);
                if !members.iter().any(|&k| pool[k] == meet) {
                    continue 'subsets;
                }
            }
            for k in 0..n {
                if o_idem_leq(raw, &pool[i], &pool[k]) && bits >> k & 1 == 0 {
                    continue 'subsets;
                }
            }
        }
        out.push(members.into_iter().collect());
    }
    out
}

pub fn o_is_ultra(raw: &RawSys, pool: &[OSg], all: &[BTreeSet<usize>], f: &BTreeSet<usize>) -> bool {
    let _ = (raw, pool);
    !all.iter().any(|g| g != f && f.is_subset(g))
}

/// The cover condition, quantified literally: for every member `e` and every
/// subset `Z` of the idempotents below `e`, if `Z` covers `e` (meets every
/// nonzero idempotent below `e`) then the filter meets `Z`.
pub fn o_is_tight(raw: &RawSys, pool: &[OSg], f: &BTreeSet<usize>) -> bool {
    for &ei in f {
        let below: Vec<usize> =
            (0..pool.len()).filter(|&j| o_idem_leq(raw, &pool[j], &pool[ei])).collect();
        let m = below.len();
        assert!(m <= 16, "cover oracle needs a small down-set, got {m}");
        for zbits in 0u64..(1 << m) {
            let z: Vec<usize> = (0..m).filter(|&i| zbits >> i & 1 == 1).map(|i| below[i]).collect();
            let covers = below
                .iter()
                .all(|&fj| z.iter().any(|&zj| o_mul(raw, &pool[zj], &pool[fj]) != OSg::Zero));
            if covers && !z.iter().any(|zj| f.contains(zj)) {
                return false;
            }
        }
    }
    true
}

// ---------------------------------------------------------------------------
// boundary paths

pub type OEdge = (usize, usize);

/// A boundary path in the oracle's own canonical form.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug)]
pub enum OPath {
    V(usize),
    F(Vec<OEdge>),
    L { prefix: Vec<OEdge>, cycle: Vec<OEdge> },
}

impl RawSys {
    pub fn edge_ok(&self, (l, c): OEdge) -> bool {
        l < self.labels && self.gens[l] >> c & 1 == 1
    }

    pub fn edge_r(&self, (l, c): OEdge) -> Option<usize> {
        self.src[l][c]
    }

    pub fn all_edges(&self) -> Vec<OEdge> {
        (0..self.labels)
            .flat_map(|l| (0..self.atoms).map(move |c| (l, c)))
            .filter(|&e| self.edge_ok(e))
            .collect()
    }

    pub fn is_singular(&self, v: usize) -> bool {
        !self.all_edges().iter().any(|&e| self.edge_r(e) == Some(v))
    }
}

/// Primitive-root shrink plus prefix absorption; rotations of pure cycles
/// stay distinct on purpose (they start at different vertices).
pub fn o_canonical_lasso(mut prefix: Vec<OEdge>, mut cycle: Vec<OEdge>) -> (Vec<OEdge>, Vec<OEdge>) {
    let n = cycle.len();
    for d in 1..=n {
        if n % d == 0 && (0..n).all(|i| cycle[i] == cycle[i % d]) {
            cycle.truncate(d);
            break;
        }
    }
    while let Some(&last) = prefix.last() {
        if last != *cycle.last().unwrap() {
            break;
        }
        prefix.pop();
        let tail = cycle.pop().unwrap();
        cycle.insert(0, tail);
    }
    (prefix, cycle)
}

/// Boundary paths within the bounds, recomputed by raw walks: vertex paths
/// at singular atoms, finite chains ending at singular atoms, and prefixed
/// cycles. Chain rule between neighbours: `d(e_i) = r(e_{i+1})`.
pub fn o_boundary(raw: &RawSys, max_len: usize, max_period: usize) -> BTreeSet<OPath> {
    let mut out = BTreeSet::new();
    for v in 0..raw.atoms {
        if raw.is_singular(v) {
            out.insert(OPath::V(v));
        }
    }
    let edges = raw.all_edges();

    // finite: grow leftward from a singular last edge
    let mut frontier: Vec<Vec<OEdge>> = edges
        .iter()
        .filter(|&&(_, c)| raw.is_singular(c))
        .map(|&e| vec![e])
        .collect();
    while let Some(path) = frontier.pop() {
        if path.is_empty() || path.len() > max_len {
            continue;
        }
        out.insert(OPath::F(path.clone()));
        if path.len() < max_len {
            if let Some(v) = raw.edge_r(path[0]) {
                for &(l, c) in &edges {
                    if c == v {
                        let mut longer = vec![(l, c)];
                        longer.extend_from_slice(&path);
                        frontier.push(longer);
                    }
                }
            }
        }
    }

    // cycles of every rotation, then all prefixes
    let mut cycles = Vec::new();
    let mut stack: Vec<Vec<OEdge>> = edges.iter().map(|&e| vec![e]).collect();
    while let Some(chain) = stack.pop() {
        let last = *chain.last().unwrap();
        if raw.edge_r(chain[0]) == Some(last.1) {
            cycles.push(chain.clone());
        }
        if chain.len() < max_period {
            for &e in &edges {
                if raw.edge_r(e) == Some(last.1) {
                    let mut longer = chain.clone();
                    longer.push(e);
                    stack.push(longer);
                }
            }
        }
    }
    for cycle in cycles {
        let mut prefixes: Vec<Vec<OEdge>> = vec![Vec::new()];
        let mut layer: Vec<Vec<OEdge>> = vec![Vec::new()];
        for _ in 0..max_len {
            let mut next = Vec::new();
            for p in &layer {
                let front = *p.first().unwrap_or(&cycle[0]);
                if let Some(v) = raw.edge_r(front) {
                    for &(l, c) in &edges {
                        if c == v {
                            let mut longer = vec![(l, c)];
                            longer.extend_from_slice(p);
                            next.push(longer);
                        }
                    }
                }
            }
            if next.is_empty() {
                break;
            }
            prefixes.extend(next.iter().cloned());
            layer = next;
        }
        for p in prefixes {
            let (prefix, cyc) = o_canonical_lasso(p, cycle.clone());
            out.insert(OPath::L { prefix, cycle: cyc });
        }
    }
    out
}

impl OPath {
    /// The k-th edge, 1-based; lassos repeat their cycle forever.
    pub fn edge_at(&self, k: usize) -> Option<OEdge> {
        match self {
            OPath::V(_) => None,
            OPath::F(edges) => edges.get(k - 1).copied(),
            OPath::L { prefix, cycle } => {
                if k <= prefix.len() {
                    Some(prefix[k - 1])
                } else {
                    Some(cycle[(k - prefix.len() - 1) % cycle.len()])
                }
            }
        }
    }

    pub fn len_bound(&self) -> Option<usize> {
        match self {
            OPath::V(_) => Some(0),
            OPath::F(edges) => Some(edges.len()),
            OPath::L { .. } => None,
        }
    }

    /// Range atom of the whole path; `None` both for marker-ranged paths
    /// and is never confused with vertices (those return their vertex).
    pub fn range_atom(&self, raw: &RawSys) -> Option<usize> {
        match self {
            OPath::V(v) => Some(*v),
            _ => raw.edge_r(self.edge_at(1).unwrap()),
        }
    }

    /// Same spec grammar the library prints, rebuilt locally so golden
    /// reports can be compared byte for byte.
    pub fn spec(&self, raw: &RawSys) -> String {
        let edge = |&(l, c): &OEdge| format!("{}@{}", raw.label_names[l], raw.atom_names[c]);
        match self {
            OPath::V(v) => format!("v:{}", raw.atom_names[*v]),
            OPath::F(edges) => {
                format!("e:{}", edges.iter().map(edge).collect::<Vec<_>>().join("|"))
            }
            OPath::L { prefix, cycle } => format!(
                "lasso({};{})",
                prefix.iter().map(edge).collect::<Vec<_>>().join("|"),
                cycle.iter().map(edge).collect::<Vec<_>>().join("|")
            ),
        }
    }
}

/// Pointwise cylinder membership, straight from the definition: the path
/// starts with the word and its atom at that depth lies in the element. At
/// depth zero the path's range atom decides; marker-ranged paths lie in no
/// depth-zero cylinder.
pub fn o_member(raw: &RawSys, path: &OPath, word: &[usize], mask: u64) -> bool {
    if word.is_empty() {
        return match path.range_atom(raw) {
            Some(v) => mask >> v & 1 == 1,
            None => false,
        };
    }
    if let Some(n) = path.len_bound() {
        if n < word.len() {
            return false;
        }
    }
    for (i, &l) in word.iter().enumerate() {
        if path.edge_at(i + 1).map(|e| e.0) != Some(l) {
            return false;
        }
    }
    let atom = path.edge_at(word.len()).unwrap().1;
    mask >> atom & 1 == 1
}

/// The basis lemma's four cases for intersecting two cylinders.
pub fn o_cyl_meet(
    raw: &RawSys,
    (w1, m1): (&[usize], u64),
    (w2, m2): (&[usize], u64),
) -> (Vec<usize>, u64) {
    if let Some(rest) = strip(w2, w1) {
        (w2.to_vec(), raw.apply_word(rest, m1) & m2)
    } else if let Some(rest) = strip(w1, w2) {
        (w1.to_vec(), m1 & raw.apply_word(rest, m2))
    } else {
        (Vec::new(), 0)
    }
}

// ---------------------------------------------------------------------------
// the partial action, pointwise

pub type OLetter = (usize, bool); // (label, inverted)

pub fn o_reduced_words(labels: usize, max_len: usize) -> Vec<Vec<OLetter>> {
    let mut out = vec![Vec::new()];
    let mut layer: Vec<Vec<OLetter>> = vec![Vec::new()];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for w in &layer {
            for l in 0..labels {
                for inv in [false, true] {
                    if let Some(&(pl, pinv)) = w.last() {
                        if pl == l && pinv != inv {
                            continue;
                        }
                    }
                    let mut longer = w.clone();
                    longer.push((l, inv));
                    next.push(longer);
                }
            }
        }
        out.extend(next.iter().cloned());
        layer = next;
    }
    out
}

fn o_canon(path: OPath) -> OPath {
    match path {
        OPath::L { prefix, cycle } => {
            let (p, c) = o_canonical_lasso(prefix, cycle);
            OPath::L { prefix: p, cycle: c }
        }
        other => other,
    }
}

/// One letter of the action: a generator prepends its edge at the range
/// atom, an inverse strips the first edge.
pub fn o_act_letter(raw: &RawSys, (l, inv): OLetter, path: &OPath) -> Option<OPath> {
    if !inv {
        let v = path.range_atom(raw)?;
        if !raw.edge_ok((l, v)) {
            return None;
        }
        let e = (l, v);
        Some(o_canon(match path {
            OPath::V(_) => OPath::F(vec![e]),
            OPath::F(edges) => {
                let mut longer = vec![e];
                longer.extend_from_slice(edges);
                OPath::F(longer)
            }
            OPath::L { prefix, cycle } => {
                let mut longer = vec![e];
                longer.extend_from_slice(prefix);
                OPath::L { prefix: longer, cycle: cycle.clone() }
            }
        }))
    } else {
        match path {
            OPath::V(_) => None,
            OPath::F(edges) => {
                if edges[0].0 != l {
                    return None;
                }
                Some(if edges.len() == 1 {
                    OPath::V(edges[0].1)
                } else {
                    OPath::F(edges[1..].to_vec())
                })
            }
            OPath::L { prefix, cycle } => {
                let first = *prefix.first().unwrap_or(&cycle[0]);
                if first.0 != l {
                    return None;
                }
                Some(o_canon(if prefix.is_empty() {
                    let mut rotated = cycle[1..].to_vec();
                    rotated.push(cycle[0]);
                    OPath::L { prefix: Vec::new(), cycle: rotated }
                } else {
                    OPath::L { prefix: prefix[1..].to_vec(), cycle: cycle.clone() }
                }))
            }
        }
    }
}

/// Rightmost letter first, as composition reads.
pub fn o_act_word(raw: &RawSys, word: &[OLetter], path: &OPath) -> Option<OPath> {
    word.iter().rev().try_fold(path.clone(), |p, &letter| o_act_letter(raw, letter, &p))
}

/// Shift: strip the first edge whatever its label.
pub fn o_shift(raw: &RawSys, path: &OPath) -> Option<OPath> {
    let l = path.edge_at(1)?.0;
    o_act_letter(raw, (l, true), path)
}

// ---------------------------------------------------------------------------
// groupoid element counts over a finite path pool

/// Raw germ triples `(target, word, source)` for reduced words up to the
/// bound, and shift pairs `(target, n, source)` with witnesses up to the
/// cap. Both as plain sets.
pub fn o_groupoid_counts(
    raw: &RawSys,
    pool: &[OPath],
    word_len: usize,
    shift_cap: usize,
) -> (usize, usize) {
    let mut germs = BTreeSet::new();
    for t in o_reduced_words(raw.labels, word_len) {
        for y in pool {
            if let Some(x) = o_act_word(raw, &t, y) {
                germs.insert((x, t.clone(), y.clone()));
            }
        }
    }

    let mut shifts: Vec<Vec<Option<OPath>>> = Vec::new();
    for p in pool {
        let mut row = vec![Some(p.clone())];
        for k in 1..=shift_cap {
            let next = row[k - 1].as_ref().and_then(|q| o_shift(raw, q));
            row.push(next);
        }
        shifts.push(row);
    }
    let mut pairs = BTreeSet::new();
    for (xi, x) in pool.iter().enumerate() {
        for (yi, y) in pool.iter().enumerate() {
            for k in 0..=shift_cap {
                for l in 0..=shift_cap {
                    if let (Some(a), Some(b)) = (&shifts[xi][k], &shifts[yi][l]) {
                        if a == b {
                            pairs.insert((x.clone(), k as i64 - l as i64, y.clone()));
                        }
                    }
                }
            }
        }
    }
    (germs.len(), pairs.len())
}
