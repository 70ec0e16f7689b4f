//! Two groupoid models over the boundary path space and the isomorphism
//! between them.
//!
//! The transformation model stores germs (target, t, source) of the partial
//! free-group action. The shift model stores triples (target, n, source)
//! together with a witness pair (k, l): shifting the target k times and the
//! source l times lands on the same path, with k - l = n. The degree map
//! t = α·β⁻¹ ↦ |α| - |β| carries one model onto the other, and `iso_check`
//! verifies bijectivity, multiplicativity, and ampleness on an enumerated
//! block of both.

use std::collections::BTreeMap;

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use crate::action::{act, domain_of, reduced_words, Bisection, FreeWord};
use crate::error::{Error, Result};
use crate::exec::{map_vec, Strategy};
use crate::gbds::Gbds;
use crate::openset::OpenSet;
use crate::paths::{BoundaryPath, Correspondence};
use crate::report::CheckReport;

/// How far the witness scan walks before giving up on a triple.
const WITNESS_CAP: usize = 64;

/// A germ of the partial action: t moves the source path to the target path.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug)]
pub struct GElem {
    target: BoundaryPath,
    t: FreeWord,
    source: BoundaryPath,
}

impl GElem {
    pub fn new(corr: &Correspondence, t: FreeWord, source: BoundaryPath) -> Result<GElem> {
        let target = act(corr, &t, &source)?;
        Ok(GElem { target, t, source })
    }

    pub fn unit(path: BoundaryPath) -> GElem {
        GElem { target: path.clone(), t: FreeWord::identity(), source: path }
    }

    pub fn target(&self) -> &BoundaryPath {
        &self.target
    }

    pub fn word(&self) -> &FreeWord {
        &self.t
    }

    pub fn source(&self) -> &BoundaryPath {
        &self.source
    }

    pub fn inverse(&self, corr: &Correspondence) -> GElem {
        GElem::new(corr, self.t.inverse(), self.target.clone())
            .expect("targets lie in the carrier of the inverse")
    }

    pub fn describe(&self, sys: &Gbds) -> String {
        format!(
            "({} ←{}← {})",
            self.target.to_spec(sys),
            self.t.describe(sys),
            self.source.to_spec(sys)
        )
    }
}

/// Composes two germs; the right factor is applied first.
pub fn g_compose(corr: &Correspondence, g1: &GElem, g2: &GElem) -> Result<GElem> {
    if g1.source != g2.target {
        return Err(Error::Precondition(
            "germs compose only when source and target meet".to_string(),
        ));
    }
    GElem::new(corr, g1.t.mul(&g2.t), g2.source.clone())
}

/// Every germ with a word of length at most `max_word` whose source lies in
/// the enumerated boundary block.
pub fn enumerate_gelems(
    corr: &Correspondence,
    max_word: usize,
    pool: &[BoundaryPath],
) -> Vec<GElem> {
    let mut out = Vec::new();
    for t in reduced_words(corr.sys().label_count(), max_word) {
        for y in pool {
            if let Ok(g) = GElem::new(corr, t.clone(), y.clone()) {
                out.push(g);
            }
        }
    }
    out
}

/// A shift-model element: the target and source become equal after k and l
/// shifts, and the difference k - l is the stored degree.
#[derive(Clone, Debug)]
pub struct RdElem {
    target: BoundaryPath,
    n: i64,
    source: BoundaryPath,
    k: usize,
    l: usize,
}

fn shift_times(sys: &Gbds, path: &BoundaryPath, times: usize) -> Option<BoundaryPath> {
    let mut cur = path.clone();
    for _ in 0..times {
        cur = cur.shift(sys).ok()?;
    }
    Some(cur)
}

impl RdElem {
    /// Finds the minimal witness pair for the triple, scanning source shifts
    /// upward; fails if none exists within the cap.
    pub fn new(corr: &Correspondence, target: BoundaryPath, n: i64, source: BoundaryPath) -> Result<RdElem> {
        let sys = corr.sys();
        for l in 0..=WITNESS_CAP {
            let k_signed = n + l as i64;
            if k_signed < 0 {
                continue;
            }
            let k = k_signed as usize;
            if k > WITNESS_CAP {
                break;
            }
            let (Some(a), Some(b)) = (shift_times(sys, &target, k), shift_times(sys, &source, l))
            else {
                continue;
            };
            if a == b {
                return Ok(RdElem { target, n, source, k, l });
            }
        }
        Err(Error::Precondition(format!(
            "no shift witness for degree {n} between {} and {}",
            target.to_spec(sys),
            source.to_spec(sys)
        )))
    }

    pub fn target(&self) -> &BoundaryPath {
        &self.target
    }

    pub fn degree(&self) -> i64 {
        self.n
    }

    pub fn source(&self) -> &BoundaryPath {
        &self.source
    }

    pub fn witness(&self) -> (usize, usize) {
        (self.k, self.l)
    }

    pub fn inverse(&self, corr: &Correspondence) -> RdElem {
        RdElem::new(corr, self.source.clone(), -self.n, self.target.clone())
            .expect("witnesses swap sides")
    }

    pub fn describe(&self, sys: &Gbds) -> String {
        format!(
            "({} ←{}← {})",
            self.target.to_spec(sys),
            self.n,
            self.source.to_spec(sys)
        )
    }
}

impl PartialEq for RdElem {
    fn eq(&self, other: &Self) -> bool {
        self.target == other.target && self.n == other.n && self.source == other.source
    }
}

impl Eq for RdElem {}

/// Composes two shift-model elements; degrees add.
pub fn rd_compose(corr: &Correspondence, r1: &RdElem, r2: &RdElem) -> Result<RdElem> {
    if r1.source != r2.target {
        return Err(Error::Precondition(
            "shift triples compose only when source and target meet".to_string(),
        ));
    }
    RdElem::new(corr, r1.target.clone(), r1.n + r2.n, r2.source.clone())
}

/// The degree map from germs to shift triples. The witness it certifies is
/// the word split itself: stripping |α| from the target meets stripping |β|
/// from the source.
pub fn theta(corr: &Correspondence, g: &GElem) -> Result<RdElem> {
    let sys = corr.sys();
    let (alpha, beta) = g
        .t
        .pos_neg()
        .expect("realized germs carry two-sided words");
    let front = shift_times(sys, &g.target, alpha.len());
    let back = shift_times(sys, &g.source, beta.len());
    if front.is_none() || front != back {
        return Err(Error::Invalid(format!(
            "the word split of {} is not a shift witness",
            g.describe(sys)
        )));
    }
    RdElem::new(
        corr,
        g.target.clone(),
        alpha.len() as i64 - beta.len() as i64,
        g.source.clone(),
    )
}

fn piece_through(
    set: &OpenSet,
    path: &BoundaryPath,
) -> Option<OpenSet> {
    let corr = set.corr().clone();
    for p in set.pieces() {
        let single = OpenSet::from_pieces(&corr, set.depth(), [p.clone()])
            .expect("pieces of a valid set stay valid");
        if single.contains_path(path) {
            return Some(single);
        }
    }
    None
}

/// Compares the two groupoid models over an enumerated block: the degree
/// map must be a bijection on triples, compose multiplicatively, respect
/// units and inverses, and every germ must sit inside a compact open
/// bisection of the action.
pub fn iso_check(
    corr: &Correspondence,
    depth: usize,
    samples: usize,
    seed: u64,
    strategy: Strategy,
) -> CheckReport {
    let sys = corr.sys();
    let mut report = CheckReport::new(format!("groupoid models compared at depth {depth}"));
    let pool = corr.enumerate_boundary(depth, depth.max(1));
    let germs = enumerate_gelems(corr, depth, &pool);

    // the word split always witnesses the degree
    let imaged: Vec<(GElem, Result<RdElem>)> = germs
        .iter()
        .map(|g| (g.clone(), theta(corr, g)))
        .collect();
    let total_ok = imaged.iter().all(|(_, r)| r.is_ok());
    report.push(
        "degree map total",
        total_ok,
        format!("{} germs carried over", germs.len()),
    );
    let images: Vec<(GElem, RdElem)> = imaged
        .into_iter()
        .filter_map(|(g, r)| r.ok().map(|rd| (g, rd)))
        .collect();

    // injectivity: distinct germs land on distinct triples
    let mut keys: BTreeMap<(BoundaryPath, i64, BoundaryPath), usize> = BTreeMap::new();
    for (_, rd) in &images {
        *keys
            .entry((rd.target.clone(), rd.n, rd.source.clone()))
            .or_insert(0) += 1;
    }
    let collisions: Vec<_> = keys.iter().filter(|(_, &c)| c > 1).collect();
    report.push(
        "degree map injective",
        collisions.is_empty(),
        format!("{} distinct triples", keys.len()),
    );

    // surjectivity: every witnessed triple over the pool comes from the
    // germ its witness words construct, and unwitnessed triples come from
    // no germ at all
    let degrees: Vec<i64> = (-(depth as i64)..=depth as i64).collect();
    let mut rd_jobs = Vec::new();
    for x in &pool {
        for y in &pool {
            for &n in &degrees {
                rd_jobs.push((x.clone(), n, y.clone()));
            }
        }
    }
    let surj_failures: Vec<String> = map_vec(strategy, &rd_jobs, |(x, n, y)| {
        match RdElem::new(corr, x.clone(), *n, y.clone()) {
            Ok(rd) => {
                let (k, l) = rd.witness();
                let alpha = x.word_prefix(k).expect("witness shifts stay inside the path");
                let beta = y.word_prefix(l).expect("witness shifts stay inside the path");
                let t = FreeWord::from_pos_neg(&alpha, &beta);
                match GElem::new(corr, t, y.clone()) {
                    Ok(g) if g.target() == x => match theta(corr, &g) {
                        Ok(back) if back == rd => None,
                        _ => Some(format!("round trip failed at {}", rd.describe(sys))),
                    },
                    _ => Some(format!("no germ realizes {}", rd.describe(sys))),
                }
            }
            Err(_) => {
                let hit = images
                    .iter()
                    .any(|(_, rd)| rd.target == *x && rd.n == *n && rd.source == *y);
                if hit {
                    Some(format!(
                        "a germ lands on the unwitnessed triple ({}, {n}, {})",
                        x.to_spec(sys),
                        y.to_spec(sys)
                    ))
                } else {
                    None
                }
            }
        }
    })
    .into_iter()
    .flatten()
    .collect();
    report.push(
        "degree map surjective",
        surj_failures.is_empty(),
        surj_failures
            .first()
            .cloned()
            .unwrap_or_else(|| format!("{} triples scanned", rd_jobs.len())),
    );

    // units and inverses
    let units_ok = pool.iter().all(|p| {
        let u = GElem::unit(p.clone());
        theta(corr, &u).map(|rd| rd.n == 0 && rd.witness() == (0, 0)).unwrap_or(false)
    });
    report.push("units preserved", units_ok, "unit germs land on degree zero");

    let mut rng = StdRng::seed_from_u64(seed);
    let mut inv_ok = true;
    let mut mult_ok = true;
    let mut mult_detail = String::from("no composable pairs sampled");
    if !images.is_empty() {
        let mut checked = 0;
        for _ in 0..samples {
            let (g1, r1) = &images[rng.gen_range(0..images.len())];
            let (g2, r2) = &images[rng.gen_range(0..images.len())];
            let gi = g1.inverse(corr);
            let ri = theta(corr, &gi).expect("inverse germs carry over");
            inv_ok &= ri == r1.inverse(corr);
            let unit_back = g_compose(corr, &gi, g1).expect("inverse composes with itself");
            inv_ok &= unit_back == GElem::unit(g1.source().clone());
            if g1.source() == g2.target() {
                checked += 1;
                let g12 = g_compose(corr, g1, g2).expect("sources and targets meet");
                let direct = theta(corr, &g12).expect("composites carry over");
                match rd_compose(corr, r1, r2) {
                    Ok(r12) => {
                        mult_ok &= r12 == direct;
                        mult_ok &= r12.degree() == r1.degree() + r2.degree();
                    }
                    Err(e) => {
                        mult_ok = false;
                        mult_detail = format!("composite lost its witness: {e}");
                    }
                }
            }
        }
        if mult_ok && checked > 0 {
            mult_detail = format!("{checked} composable pairs agree");
        }
    }
    report.push("inverses preserved", inv_ok, "θ(g⁻¹) = θ(g)⁻¹ and g⁻¹g is a unit");
    report.push("multiplicative", mult_ok, mult_detail);

    // ampleness: each germ lives inside a compact open bisection whose word
    // is the germ word
    let mut ample_ok = true;
    let mut ample_detail = format!("{} germs boxed", germs.len());
    for g in &germs {
        let dom = domain_of(corr, &g.word().inverse());
        let Some(piece) = piece_through(&dom, g.source()) else {
            ample_ok = false;
            ample_detail = format!("no piece holds {}", g.describe(sys));
            break;
        };
        match Bisection::new(g.word().clone(), piece) {
            Ok(b) => {
                if !b.target().contains_path(g.target()) {
                    ample_ok = false;
                    ample_detail = format!("bisection misses the target of {}", g.describe(sys));
                    break;
                }
            }
            Err(e) => {
                ample_ok = false;
                ample_detail = format!("{}: {e}", g.describe(sys));
                break;
            }
        }
    }
    report.push("ample cover", ample_ok, ample_detail);

    report
}
