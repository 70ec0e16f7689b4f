//! Random instances for the randomized check drivers.
//!
//! Systems are drawn by sampling a random partial source map per label, so
//! the atom images are disjoint by construction and the laws hold for free.
//! Actions are drawn as random partial bijections with disjoint ranges,
//! which is exactly the class the reconstruction applies to.

use rand::Rng;

use crate::gbds::Gbds;
use crate::reconstruct::FinitePartialAction;
use crate::stone::BooleanAlgebra;

const ATOM_NAMES: [&str; 4] = ["w", "x", "y", "z"];
const LABEL_NAMES: [&str; 3] = ["a", "b", "c"];

/// A random system with 1 to 4 atoms and 1 to 3 labels.
pub fn random_gbds(rng: &mut impl Rng) -> Gbds {
    let n = rng.gen_range(1..=4);
    let k = rng.gen_range(1..=3);
    let algebra = BooleanAlgebra::new(ATOM_NAMES[..n].to_vec()).expect("short atom list");
    let mut atom_images = Vec::new();
    let mut ideal_gens = Vec::new();
    for _ in 0..k {
        let src: Vec<Option<usize>> = (0..n)
            .map(|_| rng.gen_bool(0.7).then(|| rng.gen_range(0..n)))
            .collect();
        let mut masks = vec![0u64; n];
        let mut range = 0u64;
        for (b, s) in src.iter().enumerate() {
            if let Some(s) = s {
                masks[*s] |= 1 << b;
                range |= 1 << b;
            }
        }
        // the declared ideal covers the range and sometimes stretches past it
        let gen = range | if rng.gen_bool(0.4) { rng.gen_range(0..(1u64 << n)) } else { 0 };
        atom_images.push(masks.iter().map(|&m| algebra.elem_from_mask(m)).collect());
        ideal_gens.push(algebra.elem_from_mask(gen));
    }
    let labels = LABEL_NAMES[..k].iter().map(|s| s.to_string()).collect();
    Gbds::new(algebra, labels, atom_images, ideal_gens)
        .expect("source-derived systems satisfy the laws")
}

/// A random partial action on 1 to 6 points with 1 to 3 generators, ranges
/// disjoint by construction.
pub fn random_partial_action(rng: &mut impl Rng) -> FinitePartialAction {
    let n = rng.gen_range(1..=6);
    let k = rng.gen_range(1..=3);
    let points: Vec<String> = (0..n).map(|i| format!("p{i}")).collect();
    let mut ranges: Vec<Vec<usize>> = vec![Vec::new(); k];
    for q in 0..n {
        if rng.gen_bool(0.6) {
            ranges[rng.gen_range(0..k)].push(q);
        }
    }
    let mut forward = vec![vec![None; n]; k];
    for (a, range) in ranges.iter().enumerate() {
        let mut avail: Vec<usize> = (0..n).collect();
        for &r in range {
            let pick = rng.gen_range(0..avail.len());
            forward[a][avail.swap_remove(pick)] = Some(r);
        }
    }
    let generators = LABEL_NAMES[..k].iter().map(|s| s.to_string()).collect();
    FinitePartialAction::new(points, generators, forward)
        .expect("disjoint ranges and fresh domains give a lawful action")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exec::Strategy;
    use crate::paths::{boundary_to_tight, build_correspondence, tight_to_boundary};
    use crate::semigroup::check_semigroup_laws;
    use rand::rngs::StdRng;
    use rand::SeedableRng;

    #[test]
    fn random_systems_are_lawful_all_the_way_down() {
        let mut rng = StdRng::seed_from_u64(5);
        for _ in 0..40 {
            let sys = random_gbds(&mut rng);
            assert!(sys.validate().passed());
            let laws = check_semigroup_laws(&sys, 2, Some(400), 5, Strategy::Sequential);
            assert!(laws.passed(), "{}", laws.render());
            let corr = build_correspondence(&sys);
            for p in corr.enumerate_boundary(3, 2) {
                let filter = boundary_to_tight(&sys, &p).unwrap();
                assert!(filter.is_tight());
                assert_eq!(tight_to_boundary(&sys, &filter).unwrap(), p);
            }
        }
    }

    #[test]
    fn random_actions_reconstruct() {
        let mut rng = StdRng::seed_from_u64(9);
        for _ in 0..40 {
            let fpa = random_partial_action(&mut rng);
            assert!(fpa.validate(2).passed());
            let derived = fpa.derive_bds().unwrap();
            let report = fpa.verify_conjugacy(&derived).unwrap();
            assert!(report.passed(), "{}", report.render());
        }
    }
}
