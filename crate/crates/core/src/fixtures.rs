//! Small named systems used across tests, benches, and docs.

use crate::gbds::Gbds;
use crate::stone::BooleanAlgebra;

/// One atom `*`, labels `a` and `b`, both acting as the identity, ideals the
/// whole algebra. Every infinite word is a path; no singular vertices.
pub fn full_shift() -> Gbds {
    let alg = BooleanAlgebra::new(vec!["*"]).unwrap();
    let unit = alg.unit();
    Gbds::new(
        alg.clone(),
        vec!["a".into(), "b".into()],
        vec![vec![unit.clone()], vec![unit.clone()]],
        vec![unit.clone(), unit],
    )
    .unwrap()
}

/// Atoms `x`, `y`; one label `a` sending `x` to `{y}` and killing `y`; ideal
/// generated by `{y}`. The atom `y` is a dead end, so the only paths are the
/// vertex path at `y` and the single edge into it.
pub fn sink() -> Gbds {
    let alg = BooleanAlgebra::new(vec!["x", "y"]).unwrap();
    let y = alg.elem_from_names(&["y"]).unwrap();
    Gbds::new(
        alg.clone(),
        vec!["a".into()],
        vec![vec![y.clone(), alg.zero()]],
        vec![y],
    )
    .unwrap()
}

/// Like [`sink`] but with a third atom `z` added to the declared ideal while
/// staying outside the range. The ideal strictly contains the range, so the
/// edge `(a, z)` has an empty range side.
pub fn sink_with_spare() -> Gbds {
    let alg = BooleanAlgebra::new(vec!["x", "y", "z"]).unwrap();
    let y = alg.elem_from_names(&["y"]).unwrap();
    let yz = alg.elem_from_names(&["y", "z"]).unwrap();
    Gbds::new(
        alg.clone(),
        vec!["a".into()],
        vec![vec![y, alg.zero(), alg.zero()]],
        vec![yz],
    )
    .unwrap()
}

/// Two atoms swapped by a single label: `a` sends `u` to `{v}` and `v` to
/// `{u}`. The atom orbit has period two under a period-one letter loop, which
/// exercises every place where letter periods and orbit periods can differ.
pub fn swap() -> Gbds {
    let alg = BooleanAlgebra::new(vec!["u", "v"]).unwrap();
    let u = alg.elem_from_names(&["u"]).unwrap();
    let v = alg.elem_from_names(&["v"]).unwrap();
    Gbds::new(alg.clone(), vec!["a".into()], vec![vec![v, u]], vec![alg.unit()]).unwrap()
}

/// Two atoms, one label, action identically zero, ideal zero. Every atom is
/// singular; the only words with nonzero ideal are empty.
pub fn all_sink() -> Gbds {
    let alg = BooleanAlgebra::new(vec!["p", "q"]).unwrap();
    Gbds::new(
        alg.clone(),
        vec!["a".into()],
        vec![vec![alg.zero(), alg.zero()]],
        vec![alg.zero()],
    )
    .unwrap()
}

/// A deliberately broken system: both atoms map onto the same image, so the
/// action is not a homomorphism. Only constructible through `from_parts`;
/// exists to exercise validation reporting.
pub fn corrupted() -> Gbds {
    let alg = BooleanAlgebra::new(vec!["x", "y"]).unwrap();
    let y = alg.elem_from_names(&["y"]).unwrap();
    Gbds::from_parts(
        alg.clone(),
        vec!["a".into()],
        vec![vec![y.clone(), y.clone()]],
        vec![y],
    )
    .unwrap()
}
