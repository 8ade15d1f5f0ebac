use std::sync::Arc;

use relqh_core::rational::{frac, int};
use relqh_core::{
    EngineConfig, Family, Insertion, OpenEngine, OpenKey, OwdvvKind, RelClass, SignConvention, Space, Store,
};

use Insertion::ExtPdl;

fn g(j: u32) -> Insertion {
    Insertion::g(j)
}

fn eng(family: Family, n: u32) -> OpenEngine {
    OpenEngine::new(Space::new(family, n).unwrap())
}

fn rep(c: Insertion, times: usize) -> Vec<Insertion> {
    vec![c; times]
}

#[test]
fn boundary_counts() {
    let q3 = eng(Family::QuadricOdd, 3);
    assert_eq!(q3.boundary_count(1, &[]), Some(3));
    assert_eq!(q3.boundary_count(3, &rep(g(2), 8)), Some(1));
    assert_eq!(q3.boundary_count(1, &[g(2)]), Some(2));
    assert_eq!(q3.boundary_count(1, &[g(2), g(2)]), Some(1));
}

#[test]
fn plain_open_values() {
    let q3 = eng(Family::QuadricOdd, 3);
    assert_eq!(q3.open_invariant(1, 3, &[]).unwrap(), int(2));
    assert_eq!(eng(Family::QuadricOdd, 5).open_invariant(1, 3, &[]).unwrap(), int(-2));
    assert_eq!(q3.open_invariant(3, 9, &[]).unwrap(), int(96));
    assert_eq!(q3.open_invariant(1, 1, &[g(3)]).unwrap(), int(2));
    assert_eq!(q3.open_invariant(1, 1, &[g(2), g(2)]).unwrap(), int(2));
    assert_eq!(q3.open_invariant(2, 4, &[g(2)]).unwrap(), int(0));
    let q4 = eng(Family::QuadricEven, 4);
    assert_eq!(q4.open_invariant(1, 1, &rep(g(2), 3)).unwrap(), int(2));
    let mut cs = rep(g(2), 5);
    cs.push(g(3));
    assert_eq!(q4.open_invariant(2, 1, &cs).unwrap(), int(116));
    assert_eq!(q4.open_invariant(1, 1, &[g(2), ExtPdl, ExtPdl]).unwrap(), int(-2));
    for cs in [vec![], vec![g(2)], vec![g(4), g(2)], vec![g(3), g(3)], vec![ExtPdl, g(4)]] {
        assert_eq!(q4.open_invariant(1, 2, &cs).unwrap(), int(0));
    }
}

#[test]
fn enhanced_values() {
    let q3 = eng(Family::QuadricOdd, 3);
    assert_eq!(q3.enhanced_invariant(0, 0, &[Insertion::DIAMOND, g(0)]).unwrap(), int(1));
    assert_eq!(q3.enhanced_invariant(1, 0, &[g(3), Insertion::DIAMOND]).unwrap(), int(-2));
    let p3 = eng(Family::ProjSpace, 3);
    assert_eq!(p3.enhanced_invariant(1, 0, &[g(1), g(3)]).unwrap(), frac(-1, 2));
    assert_eq!(p3.enhanced_invariant(1, 0, &[Insertion::DIAMOND, Insertion::DIAMOND]).unwrap(), int(2));
    // Plain k = 0 invariants vanish for β in the image of ϖ.
    assert_eq!(p3.open_invariant(2, 0, &[g(1), g(3)]).unwrap(), int(0));
}

#[test]
fn open_closed_relation() {
    let q4 = eng(Family::QuadricEven, 4);
    assert_eq!(q4.open_closed_evaluate(1, &[g(4)]).unwrap(), int(2));
    assert_eq!(q4.open_closed_evaluate(2, &rep(g(2), 7)).unwrap(), int(412));
    let s = eng(Family::QuadricSurface, 2);
    let v = s.open_closed_evaluate(1, &[g(2)]).unwrap();
    assert_eq!(v, s.open_invariant(1, 1, &[g(2)]).unwrap());
    assert!(eng(Family::QuadricOdd, 3).open_closed_evaluate(1, &[g(3)]).is_err());
}

#[test]
fn odd_quadric_reductions() {
    let q3 = eng(Family::QuadricOdd, 3);
    let s = q3.space();
    let key = OpenKey::new(s, 1, 1, &[g(2), g(2)], true);
    assert!(q3.odd_quadric_reduce(&key).is_ok());
    assert_eq!(q3.open_invariant(1, 1, &[g(2), g(2)]).unwrap(), int(2));
    let mut cs = rep(g(3), 3);
    cs.extend(rep(g(2), 2));
    assert_eq!(q3.open_invariant(3, 1, &cs).unwrap(), int(32));
    // β = 2 with no interior constraints needs k = 6, so (2, 5) is zero by degree.
    assert_eq!(q3.boundary_count(2, &[]), Some(6));
    assert_eq!(q3.open_invariant(2, 5, &[]).unwrap(), int(0));
}

#[test]
fn open_residuals_vanish() {
    let q3 = eng(Family::QuadricOdd, 3);
    let h = RelClass::HhatPower;
    for beta in 0..=3 {
        for k in 0..=13 {
            let r = q3.owdvv_residual(OwdvvKind::Cor2, None, h(1), h(2), beta, k, &[]).unwrap();
            assert_eq!(r, int(0), "β={beta} k={k}");
        }
    }
    let q5 = eng(Family::QuadricOdd, 5);
    for beta in 0..=2 {
        for k in 0..=16 {
            let r = q5.owdvv_residual(OwdvvKind::Cor1, Some(h(2)), h(2), h(1), beta, k, &[]).unwrap();
            assert_eq!(r, int(0), "β={beta} k={k}");
        }
    }
}

#[test]
fn sign_change() {
    let flipped = OpenEngine::with_store(
        Space::quadric(3).unwrap(),
        Arc::new(Store::new()),
        EngineConfig::default(),
        SignConvention { seed_sign: -1, r: 2 },
    );
    assert_eq!(flipped.open_invariant(1, 3, &[]).unwrap(), int(-2));
    assert_eq!(flipped.open_invariant(3, 9, &[]).unwrap(), int(96));
    let report = relqh_core::open::verify_sign_change(Space::quadric(3).unwrap(), 3).unwrap();
    assert!(report.mismatches.is_empty(), "{:?}", report.mismatches);
}
