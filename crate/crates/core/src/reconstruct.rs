//! Rebuilding a system from a partial action of the free group on a finite
//! set of points.
//!
//! Points become atoms, each letter's partial bijection becomes the dual of
//! an action map, and the carrier of a letter's inverse becomes the ideal
//! generator. The itinerary of a point walks backward through the letter
//! ranges and spells out the boundary path the point corresponds to; the
//! conjugacy checks confirm that this is an equivariant bijection. The
//! reverse direction starts from a system whose boundary is finite, reads
//! off the action of each letter on the boundary, and round-trips.

use std::collections::{BTreeMap, BTreeSet};

use crate::action::{act, domain_of, reduced_words, FreeWord, Letter};
use crate::error::{Error, Result};
use crate::gbds::Gbds;
use crate::paths::{build_correspondence, BoundaryPath, Edge};
use crate::report::CheckReport;
use crate::stone::BooleanAlgebra;

/// A partial action of the free group on a finite discrete space: one
/// partial bijection per generator, with pairwise disjoint ranges.
#[derive(Clone, Debug)]
pub struct FinitePartialAction {
    points: Vec<String>,
    generators: Vec<String>,
    v_pos: Vec<u64>,
    v_neg: Vec<u64>,
    forward: Vec<Vec<Option<usize>>>,
    backward: Vec<Vec<Option<usize>>>,
}

impl FinitePartialAction {
    /// Builds from the forward maps alone; carriers are derived. Rejects
    /// maps that are not injective, leave the point set, or whose ranges
    /// overlap across generators, since no system induces such an action.
    pub fn new(
        points: Vec<String>,
        generators: Vec<String>,
        forward: Vec<Vec<Option<usize>>>,
    ) -> Result<FinitePartialAction> {
        let n = points.len();
        if n > 64 {
            return Err(Error::TooManyAtoms { max: 64, got: n });
        }
        for (i, p) in points.iter().enumerate() {
            if p.is_empty() || points[..i].contains(p) {
                return Err(Error::Invalid(format!("bad point name '{p}'")));
            }
        }
        for (i, g) in generators.iter().enumerate() {
            if g.is_empty() || generators[..i].contains(g) {
                return Err(Error::Invalid(format!("bad generator name '{g}'")));
            }
        }
        if forward.len() != generators.len() {
            return Err(Error::Invalid("one map per generator required".to_string()));
        }
        let mut v_pos = vec![0u64; generators.len()];
        let mut v_neg = vec![0u64; generators.len()];
        let mut backward = vec![vec![None; n]; generators.len()];
        let mut taken = 0u64;
        for (a, map) in forward.iter().enumerate() {
            if map.len() != n {
                return Err(Error::Invalid(format!(
                    "map for '{}' must cover all {n} points",
                    generators[a]
                )));
            }
            for (q, image) in map.iter().enumerate() {
                let Some(r) = *image else { continue };
                if r >= n {
                    return Err(Error::Invalid(format!(
                        "map for '{}' leaves the point set at {q}",
                        generators[a]
                    )));
                }
                if backward[a][r].is_some() {
                    return Err(Error::Invalid(format!(
                        "map for '{}' is not injective at '{}'",
                        generators[a], points[r]
                    )));
                }
                if taken & (1 << r) != 0 {
                    return Err(Error::Invalid(format!(
                        "point '{}' lies in the range of two generators",
                        points[r]
                    )));
                }
                taken |= 1 << r;
                backward[a][r] = Some(q);
                v_neg[a] |= 1 << q;
                v_pos[a] |= 1 << r;
            }
        }
        Ok(FinitePartialAction { points, generators, v_pos, v_neg, forward, backward })
    }

    pub fn point_count(&self) -> usize {
        self.points.len()
    }

    pub fn points(&self) -> &[String] {
        &self.points
    }

    pub fn generators(&self) -> &[String] {
        &self.generators
    }

    pub fn range_mask(&self, generator: usize) -> u64 {
        self.v_pos[generator]
    }

    pub fn domain_mask(&self, generator: usize) -> u64 {
        self.v_neg[generator]
    }

    pub fn act_letter(&self, l: Letter, q: usize) -> Option<usize> {
        if l.inverse {
            self.backward[l.label][q]
        } else {
            self.forward[l.label][q]
        }
    }

    /// Applies the composite of a reduced word, rightmost letter first.
    pub fn act_word(&self, t: &FreeWord, q: usize) -> Option<usize> {
        let mut cur = q;
        for &l in t.letters().iter().rev() {
            cur = self.act_letter(l, cur)?;
        }
        Some(cur)
    }

    /// The set of points where t labels a germ: the domain of the composite
    /// of t⁻¹.
    pub fn carrier_mask(&self, t: &FreeWord) -> u64 {
        let back = t.inverse();
        let mut mask = 0u64;
        for q in 0..self.points.len() {
            if self.act_word(&back, q).is_some() {
                mask |= 1 << q;
            }
        }
        mask
    }

    /// Reports the partial-action laws over reduced words up to `max_len`.
    pub fn validate(&self, max_len: usize) -> CheckReport {
        let mut report = CheckReport::new("finite partial action laws");
        let words = reduced_words(self.generators.len(), max_len);
        let ident = FreeWord::identity();
        let id_ok = (0..self.points.len()).all(|q| self.act_word(&ident, q) == Some(q));
        report.push("identity", id_ok, "the empty word fixes every point");

        let mut comp_ok = true;
        let mut semi_ok = true;
        for t in &words {
            for s in &words {
                let ts = t.mul(s);
                for q in 0..self.points.len() {
                    if let Some(mid) = self.act_word(s, q) {
                        if let Some(end) = self.act_word(t, mid) {
                            comp_ok &= self.act_word(&ts, q) == Some(end);
                        }
                    }
                }
                if ts.len() == t.len() + s.len() {
                    let d = self.carrier_mask(&ts.inverse());
                    semi_ok &= d & self.carrier_mask(&s.inverse()) == d;
                }
            }
        }
        report.push("composition", comp_ok, "composites refine the reduced word");
        report.push("semi-saturation", semi_ok, "length-additive products shrink domains");

        let mut orth_ok = true;
        for a in 0..self.generators.len() {
            for b in (a + 1)..self.generators.len() {
                orth_ok &= self.v_pos[a] & self.v_pos[b] == 0;
            }
        }
        report.push("orthogonal ranges", orth_ok, "generator ranges are disjoint");
        report
    }

    /// The system whose boundary action this is: atoms are points, the dual
    /// of each letter map is the action, and the ideal of a letter is
    /// generated by the letter's domain.
    pub fn derive_bds(&self) -> Result<Gbds> {
        let algebra = BooleanAlgebra::new(self.points.clone())?;
        let n = self.points.len();
        let mut atom_images = Vec::new();
        for a in 0..self.generators.len() {
            let images = (0..n)
                .map(|s| match self.backward[a][s] {
                    Some(prev) => algebra.atom_elem(prev),
                    None => algebra.zero(),
                })
                .collect();
            atom_images.push(images);
        }
        let ideal_gens = (0..self.generators.len())
            .map(|a| algebra.elem_from_mask(self.v_neg[a]))
            .collect();
        Gbds::new(algebra, self.generators.clone(), atom_images, ideal_gens)
    }

    /// Walks a point backward through the generator ranges: each step names
    /// the unique letter whose range holds the current point and the point
    /// it came from. Returns the steps and the index where the walk closed
    /// into a cycle, if it did.
    pub fn itinerary(&self, start: usize) -> (Vec<(usize, usize)>, Option<usize>) {
        let mut seen: BTreeMap<usize, usize> = BTreeMap::new();
        seen.insert(start, 0);
        let mut steps = Vec::new();
        let mut cur = start;
        loop {
            let Some(letter) = (0..self.generators.len()).find(|&a| self.v_pos[a] & (1 << cur) != 0)
            else {
                return (steps, None);
            };
            let prev = self.backward[letter][cur].expect("ranges invert");
            steps.push((letter, prev));
            if let Some(&at) = seen.get(&prev) {
                return (steps, Some(at));
            }
            seen.insert(prev, steps.len());
            cur = prev;
        }
    }

    /// The boundary path of the derived system that each point corresponds
    /// to: its itinerary spelled as edges.
    pub fn conjugacy_map(&self, derived: &Gbds) -> Result<Vec<BoundaryPath>> {
        let mut out = Vec::new();
        for q in 0..self.points.len() {
            let (steps, closed) = self.itinerary(q);
            let edges: Vec<Edge> = steps
                .iter()
                .map(|&(letter, prev)| Edge::new(derived, letter, prev))
                .collect::<Result<_>>()?;
            let path = match closed {
                None if edges.is_empty() => BoundaryPath::vertex(derived, q)?,
                None => BoundaryPath::finite(derived, edges)?,
                Some(m) => {
                    let prefix = edges[..m].to_vec();
                    let cycle = edges[m..].to_vec();
                    BoundaryPath::lasso(derived, prefix, cycle)?
                }
            };
            out.push(path);
        }
        Ok(out)
    }

    /// Confirms that the itinerary map conjugates this action onto the
    /// boundary action of the derived system: a bijection matching letter
    /// maps, carriers, and germs of short words.
    pub fn verify_conjugacy(&self, derived: &Gbds) -> Result<CheckReport> {
        let mut report = CheckReport::new("conjugacy onto the derived boundary");
        let corr = build_correspondence(derived);
        let n = self.points.len();
        let boundary = corr.enumerate_boundary(n, n);
        let map = self.conjugacy_map(derived)?;

        report.push(
            "boundary size",
            boundary.len() == n,
            format!("{} boundary paths for {} points", boundary.len(), n),
        );
        let image: BTreeSet<&BoundaryPath> = map.iter().collect();
        let onto = image.len() == n && map.iter().all(|p| boundary.contains(p));
        report.push("itineraries biject", onto, "distinct points hit distinct paths");

        let mut letters_ok = true;
        for a in 0..self.generators.len() {
            let g = FreeWord::generator(a);
            for q in 0..n {
                match self.forward[a][q] {
                    Some(r) => {
                        letters_ok &= act(&corr, &g, &map[q]).map(|p| p == map[r]).unwrap_or(false)
                    }
                    None => letters_ok &= act(&corr, &g, &map[q]).is_err(),
                }
            }
        }
        report.push("letters intertwine", letters_ok, "each generator matches its map");

        let mut carriers_ok = true;
        let mut germs_ok = true;
        for t in reduced_words(self.generators.len(), 2) {
            let u = domain_of(&corr, &t);
            let mut pulled = 0u64;
            for q in 0..n {
                if u.contains_path(&map[q]) {
                    pulled |= 1 << q;
                }
                match self.act_word(&t, q) {
                    Some(r) => {
                        germs_ok &= act(&corr, &t, &map[q]).map(|p| p == map[r]).unwrap_or(false)
                    }
                    None => germs_ok &= act(&corr, &t, &map[q]).is_err(),
                }
            }
            carriers_ok &= pulled == self.carrier_mask(&t);
        }
        report.push("carriers pull back", carriers_ok, "V_t is the preimage of U_t");
        report.push("short germs correspond", germs_ok, "words up to length 2 agree");

        Ok(report)
    }
}

/// Splits a universe of points into the coarsest classes on which every
/// given mask is constant.
pub fn disjointify(universe: u64, masks: &[u64]) -> Vec<u64> {
    let mut classes: BTreeMap<Vec<bool>, u64> = BTreeMap::new();
    for b in 0..64 {
        if universe & (1 << b) == 0 {
            continue;
        }
        let signature: Vec<bool> = masks.iter().map(|m| m & (1 << b) != 0).collect();
        *classes.entry(signature).or_insert(0) |= 1 << b;
    }
    classes.into_values().collect()
}

/// Names a vertex whose continuations branch somewhere after a cycle, which
/// forces the boundary to be infinite; None means the boundary is finite.
fn infinite_boundary_witness(sys: &Gbds) -> Option<usize> {
    let corr = build_correspondence(sys);
    let n = sys.algebra().atom_count();
    // reach[v] = atoms reachable by one or more continuation steps
    let mut step = vec![0u64; n];
    for v in 0..n {
        for e in corr.continuations(v) {
            step[v] |= 1 << e.d();
        }
    }
    let mut reach = step.clone();
    loop {
        let mut grew = false;
        for v in 0..n {
            let mut next = reach[v];
            let mut bits = reach[v];
            while bits != 0 {
                let w = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                next |= reach[w];
            }
            if next != reach[v] {
                reach[v] = next;
                grew = true;
            }
        }
        if !grew {
            break;
        }
    }
    for v in 0..n {
        if reach[v] & (1 << v) == 0 {
            continue;
        }
        let mut candidates = reach[v] | (1 << v);
        while candidates != 0 {
            let u = candidates.trailing_zeros() as usize;
            candidates &= candidates - 1;
            if corr.continuations(u).len() >= 2 {
                return Some(u);
            }
        }
    }
    None
}

/// Reads the boundary action of a system with finite boundary off as a
/// finite partial action, derives a system from it, and verifies the
/// conjugacy between the two boundaries.
pub fn roundtrip(sys: &Gbds) -> Result<CheckReport> {
    if let Some(v) = infinite_boundary_witness(sys) {
        return Err(Error::Unsupported(format!(
            "the boundary is infinite: continuations branch at '{}' within reach of a cycle",
            sys.algebra().atom_name(v)
        )));
    }
    let corr = build_correspondence(sys);
    let n = sys.algebra().atom_count();
    let paths = corr.enumerate_boundary(n, n);
    let names: Vec<String> = paths.iter().map(|p| p.to_spec(sys)).collect();
    let mut forward = Vec::new();
    for a in 0..sys.label_count() {
        let g = FreeWord::generator(a);
        let map = paths
            .iter()
            .map(|p| match act(&corr, &g, p) {
                Ok(q) => paths.iter().position(|r| r == &q),
                Err(_) => None,
            })
            .collect();
        forward.push(map);
    }
    let fpa = FinitePartialAction::new(names, sys.labels().to_vec(), forward)?;
    let derived = fpa.derive_bds()?;
    let mut report = CheckReport::new(format!(
        "boundary action round trip over {} points",
        fpa.point_count()
    ));
    report.push("action laws", fpa.validate(2).passed(), "read-off action is lawful");
    report.merge(fpa.verify_conjugacy(&derived)?);
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn sink_action() -> FinitePartialAction {
        FinitePartialAction::new(
            vec!["p".into(), "q".into()],
            vec!["a".into()],
            vec![vec![None, Some(0)]],
        )
        .unwrap()
    }

    #[test]
    fn derive_produces_the_expected_system() {
        let fpa = sink_action();
        let derived = fpa.derive_bds().unwrap();
        let algebra = BooleanAlgebra::new(vec!["p", "q"]).unwrap();
        let expected = Gbds::new(
            algebra.clone(),
            vec!["a".into()],
            vec![vec![algebra.atom_elem(1), algebra.zero()]],
            vec![algebra.atom_elem(1)],
        )
        .unwrap();
        assert_eq!(derived, expected);
        assert!(fpa.verify_conjugacy(&derived).unwrap().passed());
    }

    #[test]
    fn itineraries_stop_and_close() {
        let fpa = sink_action();
        // p came from q along a; q came from nowhere
        assert_eq!(fpa.itinerary(0), (vec![(0, 1)], None));
        assert_eq!(fpa.itinerary(1), (vec![], None));

        let cyclic = FinitePartialAction::new(
            vec!["u".into(), "v".into()],
            vec!["a".into()],
            vec![vec![Some(1), Some(0)]],
        )
        .unwrap();
        let (steps, closed) = cyclic.itinerary(0);
        assert_eq!(steps.len(), 2);
        assert_eq!(closed, Some(0));
        let derived = cyclic.derive_bds().unwrap();
        let map = cyclic.conjugacy_map(&derived).unwrap();
        assert!(map.iter().all(|p| p.is_lasso()));
        assert!(cyclic.verify_conjugacy(&derived).unwrap().passed());
    }

    #[test]
    fn constructor_rejects_broken_maps() {
        // not injective
        assert!(FinitePartialAction::new(
            vec!["p".into(), "q".into()],
            vec!["a".into()],
            vec![vec![Some(0), Some(0)]],
        )
        .is_err());
        // ranges overlap across generators
        assert!(FinitePartialAction::new(
            vec!["p".into(), "q".into()],
            vec!["a".into(), "b".into()],
            vec![vec![None, Some(0)], vec![Some(0), None]],
        )
        .is_err());
        // leaves the point set
        assert!(FinitePartialAction::new(
            vec!["p".into()],
            vec!["a".into()],
            vec![vec![Some(3)]],
        )
        .is_err());
    }

    #[test]
    fn finite_boundaries_round_trip() {
        for sys in [
            fixtures::sink(),
            fixtures::sink_with_spare(),
            fixtures::all_sink(),
            fixtures::swap(),
        ] {
            let report = roundtrip(&sys).unwrap();
            assert!(report.passed(), "{}", report.render());
        }
    }

    #[test]
    fn branching_after_a_cycle_is_rejected() {
        let err = roundtrip(&fixtures::full_shift()).unwrap_err();
        match err {
            Error::Unsupported(msg) => assert!(msg.contains("infinite")),
            other => panic!("expected Unsupported, got {other:?}"),
        }
    }

    #[test]
    fn disjointify_partitions_the_universe() {
        let masks = [0b1011u64, 0b0110, 0b1000];
        let classes = disjointify(0b1111, &masks);
        let mut union = 0u64;
        for (i, c) in classes.iter().enumerate() {
            assert_ne!(*c, 0);
            assert_eq!(union & c, 0, "class {i} overlaps");
            union |= c;
            for m in &masks {
                assert!(c & m == *c || c & m == 0, "mask splits a class");
            }
        }
        assert_eq!(union, 0b1111);
    }
}
