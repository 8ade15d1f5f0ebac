use relqh_core::rational::int;
use relqh_core::{AbsClass, AbsCurve, ClosedEngine, ClosedKey, Error, Family, Space};

use AbsClass::{HPower as h, Pdl, SurfL, SurfLL, SurfLStar};

fn eng(family: Family, n: u32) -> ClosedEngine {
    ClosedEngine::new(Space::new(family, n).unwrap())
}

fn d(k: u32) -> AbsCurve {
    AbsCurve::Degree(k)
}

#[test]
fn published_closed_values() {
    assert_eq!(eng(Family::QuadricOdd, 3).closed_invariant(d(1), &[h(2), h(2), h(2)]).unwrap(), int(8));
    assert_eq!(eng(Family::QuadricOdd, 5).closed_invariant(d(1), &[h(0), h(5), h(5)]).unwrap(), int(0));
    let q4 = eng(Family::QuadricEven, 4);
    assert_eq!(q4.closed_invariant(d(2), &[h(4), h(4), h(4)]).unwrap(), int(8));
    assert_eq!(q4.closed_invariant(d(1), &[Pdl, Pdl, h(4)]).unwrap(), int(-4));
    assert_eq!(q4.closed_invariant(d(2), &[Pdl, h(2), h(2), h(3)]).unwrap(), int(0));
    let s = eng(Family::QuadricSurface, 2);
    assert_eq!(s.closed_invariant(AbsCurve::Bidegree(1, 0), &[SurfLL, SurfL]).unwrap(), int(1));
    assert_eq!(s.closed_invariant(AbsCurve::Bidegree(0, 1), &[SurfLL, SurfLStar]).unwrap(), int(1));
    assert_eq!(eng(Family::ProjSpace, 3).closed_invariant(d(1), &[h(3), h(3)]).unwrap(), int(1));
}

#[test]
fn line_counts_on_quadrics() {
    // GW₁(h^i,h^j,h^k) for i+j+k = 2n is 0 with a unit, 4 with a point, 8 otherwise.
    for n in 3..=6 {
        let e = ClosedEngine::new(Space::quadric(n).unwrap());
        assert_eq!(e.closed_invariant(d(1), &[h(n - 1), h(n)]).unwrap(), int(4));
        for i in 0..=n {
            for j in i..=n {
                let Some(k) = (2 * n).checked_sub(i + j) else { continue };
                if k < j || k > n {
                    continue;
                }
                let expect = if i == 0 {
                    0
                } else if k == n {
                    4
                } else {
                    8
                };
                assert_eq!(e.closed_invariant(d(1), &[h(i), h(j), h(k)]).unwrap(), int(expect), "n={n} ({i},{j},{k})");
            }
        }
    }
}

#[test]
fn even_quadric_reduction() {
    let e = eng(Family::QuadricEven, 4);
    let key = ClosedKey::new(e.space(), d(1), &[h(2), h(3), h(3)]);
    assert_eq!(e.eval_reduction(&e.wdvv_reduce_even_quadric(&key).unwrap()).unwrap(), int(8));
    let bad = ClosedKey::new(e.space(), d(1), &[Pdl, Pdl, Pdl, Pdl]);
    assert!(matches!(e.wdvv_reduce_even_quadric(&bad), Err(Error::Precondition(_))));
    let four = ClosedKey::new(e.space(), d(1), &[h(2), h(2), h(2), h(3)]);
    let a = e.eval_reduction(&e.reduce_ordered(&four, false).unwrap()).unwrap();
    let b = e.eval_reduction(&e.reduce_ordered(&four, true).unwrap()).unwrap();
    assert_eq!(a, b);
}

#[test]
fn divisorial_reduction() {
    let p3 = eng(Family::ProjSpace, 3);
    assert_eq!(p3.closed_invariant(d(1), &[h(3), h(3)]).unwrap(), int(1));
    // Two points and two lines fail the dimension count; four lines are needed.
    assert_eq!(p3.closed_invariant(d(2), &[h(3), h(3), h(2), h(2)]).unwrap(), int(0));
    let conic = ClosedKey::new(p3.space(), d(2), &[h(3), h(3), h(2), h(2), h(2), h(2)]);
    let a = p3.eval_reduction(&p3.reduce_ordered(&conic, false).unwrap()).unwrap();
    let b = p3.eval_reduction(&p3.reduce_ordered(&conic, true).unwrap()).unwrap();
    assert_eq!(a, b);
    assert_eq!(a, int(4));
    let s = eng(Family::QuadricSurface, 2);
    assert_eq!(s.closed_invariant(AbsCurve::Bidegree(1, 1), &[SurfLL; 3]).unwrap(), int(1));
}

#[test]
fn residuals_vanish() {
    let q3 = eng(Family::QuadricOdd, 3);
    for beta in 0..=3 {
        for u in 0..=3 {
            for v in 0..=3 {
                for w in 0..=3 {
                    for y in 0..=3 {
                        assert_eq!(q3.wdvv_residual(h(u), h(v), h(w), h(y), d(beta), &[]).unwrap(), int(0));
                    }
                }
            }
        }
    }
    let q4 = eng(Family::QuadricEven, 4);
    assert_eq!(q4.wdvv_residual(Pdl, h(1), h(2), h(3), d(2), &[]).unwrap(), int(0));
}
