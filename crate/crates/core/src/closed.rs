//! Closed genus-zero invariants: axiom normalization, seeds, and WDVV
//! first reconstruction.

use std::sync::Arc;

use num::{One, Zero};

use crate::error::{Error, Result};
use crate::geometry::{AbsClass, AbsCombo, AbsCurve, Family, Geometry, Space};
use crate::key::{ClosedKey, CoreKey};
use crate::multiset::Multiset;
use crate::rational::{int, Rational};
use crate::reduction::{solve, sum_products, Ctx, Linear, Product, Reduction};
use crate::store::{Provenance, Store};

#[derive(Clone, Debug, Default)]
pub struct EngineConfig {
    /// Lift the default ℙⁿ caps (n ≤ 9, degree ≤ 6).
    pub allow_large_pn: bool,
}

pub const PN_MAX_N: u32 = 9;
pub const PN_MAX_DEGREE: u32 = 6;

#[derive(Clone, Debug, PartialEq)]
pub struct Evaluation {
    pub value: Rational,
    pub provenance: Provenance,
}

pub struct ClosedEngine {
    geom: Arc<Geometry>,
    store: Arc<Store>,
    config: EngineConfig,
    /// Nonzero entries (m, l, g^{ml}) of the inverse pairing.
    ginv: Vec<(AbsClass, AbsClass, Rational)>,
}

impl ClosedEngine {
    pub fn new(space: Space) -> ClosedEngine {
        ClosedEngine::with_store(space, Arc::new(Store::new()), EngineConfig::default())
    }

    pub fn with_store(space: Space, store: Arc<Store>, config: EngineConfig) -> ClosedEngine {
        let geom = Arc::new(Geometry::new(space));
        let pd = geom.pairing();
        let mut ginv = vec![];
        for (i, a) in pd.basis.iter().enumerate() {
            for (j, b) in pd.basis.iter().enumerate() {
                if !pd.g_inv[i][j].is_zero() {
                    ginv.push((*a, *b, pd.g_inv[i][j].clone()));
                }
            }
        }
        ClosedEngine { geom, store, config, ginv }
    }

    pub fn geometry(&self) -> &Geometry {
        &self.geom
    }

    pub fn space(&self) -> Space {
        self.geom.space()
    }

    pub fn store(&self) -> &Arc<Store> {
        &self.store
    }

    pub fn config(&self) -> &EngineConfig {
        &self.config
    }

    fn deg(&self, c: AbsClass) -> i64 {
        self.geom.abs_degree(c) as i64
    }

    fn degree_ok(&self, beta: AbsCurve, total: i64, l: usize) -> bool {
        let n = self.geom.n() as i64;
        2 * n - 6 + 2 * self.geom.chern(beta) + 2 * l as i64 == total
    }

    pub fn admissible(&self, beta: AbsCurve, cs: &[AbsClass]) -> bool {
        self.degree_ok(beta, cs.iter().map(|c| self.deg(*c)).sum(), cs.len())
    }

    fn validate(&self, beta: AbsCurve, cs: &[AbsClass]) -> Result<()> {
        self.geom.check_curve(beta)?;
        for c in cs {
            self.geom.check_abs(*c)?;
        }
        if self.space().family() == Family::ProjSpace && !self.config.allow_large_pn {
            let n = self.geom.n();
            if n > PN_MAX_N || beta.energy() > PN_MAX_DEGREE {
                return Err(Error::Unsupported(format!(
                    "projective space beyond n ≤ {PN_MAX_N}, degree ≤ {PN_MAX_DEGREE} needs the large-ℙⁿ flag"
                )));
            }
        }
        Ok(())
    }

    pub fn seed(&self, beta: AbsCurve, cs: &[AbsClass]) -> Option<Rational> {
        let n = self.geom.n();
        match (self.space().family(), beta, cs) {
            (
                Family::QuadricOdd | Family::QuadricEven,
                AbsCurve::Degree(1),
                [AbsClass::HPower(a), AbsClass::HPower(b)],
            ) if *a == n - 1 && *b == n => Some(int(4)),
            (Family::ProjSpace, AbsCurve::Degree(1), [AbsClass::HPower(a), AbsClass::HPower(b)])
                if *a == n && *b == n =>
            {
                Some(int(1))
            }
            (Family::QuadricSurface, AbsCurve::Bidegree(1, 0) | AbsCurve::Bidegree(0, 1), [AbsClass::SurfLL]) => {
                Some(int(1))
            }
            _ => None,
        }
    }

    /// Degree, zero, unit and divisor axioms, the all-PD(L) vanishing, and
    /// seeds. What remains is a multiple of one core key.
    fn normalize_inner(&self, beta: AbsCurve, cs: &[AbsClass]) -> (Linear, Provenance) {
        let axiom = |l: Linear| (l, Provenance::Axiom);
        if !self.admissible(beta, cs) {
            return axiom(Linear::zero());
        }
        if beta.is_zero() {
            if let [a, b, c] = cs {
                return axiom(Linear::constant(self.geom.triple_integral(*a, *b, *c)));
            }
            return axiom(Linear::zero());
        }
        let mut factor = Rational::one();
        let mut rest: Vec<AbsClass> = Vec::with_capacity(cs.len());
        for &c in cs {
            match self.deg(c) {
                0 => return axiom(Linear::zero()),
                2 => {
                    factor *= self.geom.divisor_integral_abs(beta, c).expect("degree-2 class");
                    if factor.is_zero() {
                        return axiom(Linear::zero());
                    }
                }
                _ => rest.push(c),
            }
        }
        if self.space().family() == Family::QuadricEven && rest.iter().all(|c| *c == AbsClass::Pdl) {
            return axiom(Linear::zero());
        }
        rest.sort();
        if let Some(s) = self.seed(beta, &rest) {
            return (Linear::constant(factor * s), Provenance::Seed);
        }
        let key = ClosedKey { space: self.space(), beta, constraints: rest };
        (Linear::key(factor, CoreKey::Closed(key)), Provenance::Wdvv)
    }

    pub fn normalize(&self, beta: AbsCurve, cs: &[AbsClass]) -> Result<Linear> {
        self.validate(beta, cs)?;
        Ok(self.normalize_inner(beta, cs).0)
    }

    /// Multilinear extension of `normalize` to combinations of basis classes.
    pub fn normalize_combos(&self, beta: AbsCurve, combos: &[AbsCombo]) -> Linear {
        let mut out = Linear::zero();
        let mut idx = vec![0usize; combos.len()];
        if combos.iter().any(|c| c.is_empty()) {
            return out;
        }
        let mut classes = Vec::with_capacity(combos.len());
        loop {
            let mut coeff = Rational::one();
            classes.clear();
            for (c, &i) in combos.iter().zip(&idx) {
                coeff *= &c[i].0;
                classes.push(c[i].1);
            }
            let lin = self.normalize_inner(beta, &classes).0;
            if !lin.is_zero() {
                out.add_assign(lin.scaled(&coeff));
            }
            let mut pos = 0;
            loop {
                if pos == combos.len() {
                    return out;
                }
                idx[pos] += 1;
                if idx[pos] < combos[pos].len() {
                    break;
                }
                idx[pos] = 0;
                pos += 1;
            }
        }
    }

    pub fn closed_invariant(&self, beta: AbsCurve, cs: &[AbsClass]) -> Result<Rational> {
        Ok(self.evaluate(beta, cs)?.value)
    }

    pub fn evaluate(&self, beta: AbsCurve, cs: &[AbsClass]) -> Result<Evaluation> {
        self.validate(beta, cs)?;
        let (lin, prov) = self.normalize_inner(beta, cs);
        let mut ctx = Ctx::default();
        let value = self.eval_linear(&lin, &mut ctx)?;
        let provenance = if lin.terms.is_empty() { prov } else { Provenance::Wdvv };
        Ok(Evaluation { value, provenance })
    }

    pub(crate) fn eval_linear(&self, lin: &Linear, ctx: &mut Ctx) -> Result<Rational> {
        let mut acc = lin.constant.clone();
        for (c, k) in &lin.terms {
            match k {
                CoreKey::Closed(key) => acc += c * self.core_value(key, ctx)?,
                CoreKey::Open(_) => return Err(Error::Internal("open key in a closed expression".into())),
            }
        }
        Ok(acc)
    }

    /// Value of a normalized key, memoized in the store.
    pub(crate) fn core_value(&self, key: &ClosedKey, ctx: &mut Ctx) -> Result<Rational> {
        let ck = key.canonical();
        if let Some(v) = self.store.get(&ck) {
            return Ok(v);
        }
        let core = CoreKey::Closed(key.clone());
        ctx.enter(&core)?;
        let res = stacker::maybe_grow(256 * 1024, 8 * 1024 * 1024, || {
            let red = self.reduce(key)?;
            solve(&red, |k| match k {
                CoreKey::Closed(c) => self.core_value(c, ctx),
                CoreKey::Open(_) => Err(Error::Internal("open key in a closed reduction".into())),
            })
        });
        ctx.leave(&core);
        let v = res?;
        self.store.put(&ck, v.clone(), Provenance::Wdvv)?;
        Ok(v)
    }

    /// Evaluate every dependency of a reduction and solve it.
    pub fn eval_reduction(&self, red: &Reduction) -> Result<Rational> {
        let mut ctx = Ctx::default();
        solve(red, |k| match k {
            CoreKey::Closed(c) => self.core_value(c, &mut ctx),
            CoreKey::Open(_) => Err(Error::Internal("open key in a closed reduction".into())),
        })
    }

    fn check_normalized(&self, key: &ClosedKey) -> Result<()> {
        if key.space != self.space() {
            return Err(Error::Precondition(format!("key for {} given to the {} engine", key.space, self.space())));
        }
        if key.beta.is_zero() || key.constraints.len() < 3 {
            return Err(Error::Precondition(format!("{} has no WDVV reduction", key.canonical())));
        }
        if key.constraints.iter().any(|c| self.deg(*c) <= 2) {
            return Err(Error::Precondition(format!("{} is not normalized", key.canonical())));
        }
        if self.seed(key.beta, &key.constraints).is_some() {
            return Err(Error::Precondition(format!("{} is a seed", key.canonical())));
        }
        Ok(())
    }

    /// The decomposable constraint a = D ∪ b used as pivot, returned as (a, b, D).
    fn pivot_split(&self, key: &ClosedKey) -> Result<(AbsClass, AbsClass, AbsClass)> {
        if self.space().family() == Family::QuadricSurface {
            return if key.constraints.contains(&AbsClass::SurfLL) {
                Ok((AbsClass::SurfLL, AbsClass::SurfLStar, AbsClass::SurfL))
            } else {
                Err(Error::Precondition(format!("{} has no point constraint", key.canonical())))
            };
        }
        key.constraints
            .iter()
            .find_map(|c| match c {
                AbsClass::HPower(j) if *j >= 2 => Some((*c, AbsClass::HPower(j - 1), AbsClass::HPower(1))),
                _ => None,
            })
            .ok_or_else(|| Error::Precondition(format!("{} has no h-power to peel", key.canonical())))
    }

    pub fn reduce(&self, key: &ClosedKey) -> Result<Reduction> {
        self.reduce_ordered(key, false)
    }

    /// Same reduction with the roles of the two free slots exchanged; used to
    /// cross-check that the result does not depend on the order.
    pub fn reduce_ordered(&self, key: &ClosedKey, swap: bool) -> Result<Reduction> {
        self.check_normalized(key)?;
        let (a, b, d) = self.pivot_split(key)?;
        let mut others = key.constraints.clone();
        let pos = others.iter().position(|c| *c == a).expect("pivot present");
        others.remove(pos);
        let (w, y) = if swap { (others[1], others[0]) } else { (others[0], others[1]) };
        let products = self.wdvv_products(b, d, w, y, key.beta, &others[2..]);
        Reduction::from_relation(CoreKey::Closed(key.clone()), products)
    }

    pub fn wdvv_reduce_even_quadric(&self, key: &ClosedKey) -> Result<Reduction> {
        if self.space().family() != Family::QuadricEven {
            return Err(Error::Precondition("even-quadric reduction on another family".into()));
        }
        self.reduce(key)
    }

    pub fn wdvv_reduce_divisorial(&self, key: &ClosedKey) -> Result<Reduction> {
        if self.space().family() == Family::QuadricEven {
            return Err(Error::Precondition("even quadric cohomology is not generated by divisors".into()));
        }
        self.reduce(key)
    }

    /// LHS − RHS of WDVV at fixed β and extra insertions, as products of
    /// normalized invariants.
    pub fn wdvv_products(
        &self,
        u: AbsClass,
        v: AbsClass,
        w: AbsClass,
        y: AbsClass,
        beta: AbsCurve,
        extras: &[AbsClass],
    ) -> Vec<Product> {
        let splits = Multiset::from_items(extras).splits();
        let mut out = vec![];
        let mut buf_a = Vec::with_capacity(extras.len() + 3);
        let mut buf_b = Vec::with_capacity(extras.len() + 3);
        for (b1, b2) in beta.splits() {
            for (s1, s2, weight) in &splits {
                let d1: i64 = s1.iter().map(|c| self.deg(*c)).sum();
                let d2: i64 = s2.iter().map(|c| self.deg(*c)).sum();
                for (m, l, g) in &self.ginv {
                    let (dm, dl) = (self.deg(*m), self.deg(*l));
                    let wt = weight * g;
                    for (sgn, p, q, r) in [(1, u, v, w), (-1, v, w, u)] {
                        // ∂p∂q∂m Φ_{β₁} · g^{ml} · ∂l∂r∂y Φ_{β₂}
                        if !self.degree_ok(b1, self.deg(p) + self.deg(q) + dm + d1, 3 + s1.len())
                            || !self.degree_ok(b2, dl + self.deg(r) + self.deg(y) + d2, 3 + s2.len())
                        {
                            continue;
                        }
                        buf_a.clear();
                        buf_a.extend([p, q, *m]);
                        buf_a.extend_from_slice(s1);
                        let left = self.normalize_inner(b1, &buf_a).0;
                        if left.is_zero() {
                            continue;
                        }
                        buf_b.clear();
                        buf_b.extend([*l, r, y]);
                        buf_b.extend_from_slice(s2);
                        let right = self.normalize_inner(b2, &buf_b).0;
                        if right.is_zero() {
                            continue;
                        }
                        left.times(&right, &(int(sgn) * &wt), &mut out);
                    }
                }
            }
        }
        out
    }

    pub fn wdvv_residual(
        &self,
        u: AbsClass,
        v: AbsClass,
        w: AbsClass,
        y: AbsClass,
        beta: AbsCurve,
        extras: &[AbsClass],
    ) -> Result<Rational> {
        self.validate(beta, &[u, v, w, y])?;
        self.validate(beta, extras)?;
        let products = self.wdvv_products(u, v, w, y, beta, extras);
        let mut ctx = Ctx::default();
        sum_products(&products, |k| match k {
            CoreKey::Closed(c) => self.core_value(c, &mut ctx),
            CoreKey::Open(_) => Err(Error::Internal("open key in WDVV".into())),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use AbsClass::*;

    fn eng(family: Family, n: u32) -> ClosedEngine {
        ClosedEngine::new(Space::new(family, n).unwrap())
    }

    #[test]
    fn lines_through_quadric_cycles() {
        let e = eng(Family::QuadricOdd, 3);
        assert_eq!(e.closed_invariant(AbsCurve::Degree(1), &[HPower(2), HPower(2), HPower(2)]).unwrap(), int(8));
        assert_eq!(e.closed_invariant(AbsCurve::Degree(1), &[HPower(2), HPower(3)]).unwrap(), int(4));
        let e5 = eng(Family::QuadricOdd, 5);
        assert_eq!(e5.closed_invariant(AbsCurve::Degree(1), &[HPower(0), HPower(5), HPower(5)]).unwrap(), int(0));
    }

    #[test]
    fn even_quadric_values() {
        let e = eng(Family::QuadricEven, 4);
        assert_eq!(e.closed_invariant(AbsCurve::Degree(2), &[HPower(4), HPower(4), HPower(4)]).unwrap(), int(8));
        assert_eq!(e.closed_invariant(AbsCurve::Degree(1), &[Pdl, Pdl, HPower(4)]).unwrap(), int(-4));
        assert_eq!(e.closed_invariant(AbsCurve::Degree(2), &[Pdl, HPower(2), HPower(2), HPower(3)]).unwrap(), int(0));
        let e6 = eng(Family::QuadricEven, 6);
        assert_eq!(e6.closed_invariant(AbsCurve::Degree(1), &[Pdl, Pdl, HPower(6)]).unwrap(), int(4));
    }

    #[test]
    fn even_quadric_reduction_matches_direct_value() {
        let e = eng(Family::QuadricEven, 4);
        let key = ClosedKey::new(e.space(), AbsCurve::Degree(1), &[HPower(2), HPower(3), HPower(3)]);
        let red = e.wdvv_reduce_even_quadric(&key).unwrap();
        assert_eq!(e.eval_reduction(&red).unwrap(), int(8));
        for dep in red.dependencies() {
            assert!(
                dep < CoreKey::Closed(key.clone()) || matches!(dep, CoreKey::Closed(ref d) if d.constraints.len() < 3)
            );
        }
        let bad = ClosedKey::new(e.space(), AbsCurve::Degree(1), &[Pdl, Pdl, Pdl, Pdl]);
        assert!(matches!(e.wdvv_reduce_even_quadric(&bad), Err(Error::Precondition(_))));
        // GW₁(h²,h²,h²,h²) fails the degree gate on Q⁴; (h²,h²,h²,h³) is the
        // smallest admissible four-point key.
        assert_eq!(e.closed_invariant(AbsCurve::Degree(1), &[HPower(2); 4]).unwrap(), int(0));
        let four = ClosedKey::new(e.space(), AbsCurve::Degree(1), &[HPower(2), HPower(2), HPower(2), HPower(3)]);
        let a = e.eval_reduction(&e.reduce_ordered(&four, false).unwrap()).unwrap();
        let b = e.eval_reduction(&e.reduce_ordered(&four, true).unwrap()).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn classical_counts_in_p3() {
        let e = eng(Family::ProjSpace, 3);
        let d = |k| AbsCurve::Degree(k);
        assert_eq!(e.closed_invariant(d(1), &[HPower(3), HPower(3)]).unwrap(), int(1));
        // Lines meeting four general lines.
        assert_eq!(e.closed_invariant(d(1), &[HPower(2); 4]).unwrap(), int(2));
        // Conics: (points, lines) = (4,0), (3,2), (2,4), (1,6), (0,8).
        let conic = |p: usize, l: usize| {
            let mut cs = vec![HPower(3); p];
            cs.extend(vec![HPower(2); l]);
            e.closed_invariant(d(2), &cs).unwrap()
        };
        assert_eq!(conic(4, 0), int(0));
        assert_eq!(conic(3, 2), int(1));
        assert_eq!(conic(2, 4), int(4));
        assert_eq!(conic(1, 6), int(18));
        assert_eq!(conic(0, 8), int(92));
    }

    #[test]
    fn surface_counts() {
        let e = eng(Family::QuadricSurface, 2);
        let b = AbsCurve::Bidegree;
        assert_eq!(e.closed_invariant(b(1, 0), &[SurfLL, SurfL]).unwrap(), int(1));
        assert_eq!(e.closed_invariant(b(0, 1), &[SurfLL, SurfLStar]).unwrap(), int(1));
        assert_eq!(e.closed_invariant(b(1, 0), &[SurfLL, SurfLStar]).unwrap(), int(0));
        // One (1,1)-curve through three general points; two points do not
        // satisfy the dimension count.
        assert_eq!(e.closed_invariant(b(1, 1), &[SurfLL; 3]).unwrap(), int(1));
        assert_eq!(e.closed_invariant(b(1, 1), &[SurfLL; 2]).unwrap(), int(0));
        // Classical: twelve (2,2)-curves... of genus 0 through seven points.
        assert_eq!(e.closed_invariant(b(2, 2), &[SurfLL; 7]).unwrap(), int(12));
    }

    #[test]
    fn residual_vanishes_and_detects_corruption() {
        let e = eng(Family::QuadricEven, 4);
        let r = e.wdvv_residual(Pdl, HPower(1), HPower(2), HPower(3), AbsCurve::Degree(2), &[]).unwrap();
        assert_eq!(r, int(0));

        let store = Arc::new(Store::new());
        let bad = ClosedEngine::with_store(
            Space::new(Family::QuadricOdd, 3).unwrap(),
            store.clone(),
            EngineConfig::default(),
        );
        let key = ClosedKey::new(bad.space(), AbsCurve::Degree(1), &[HPower(2), HPower(2), HPower(2)]);
        store.put(&key.canonical(), int(9), Provenance::Wdvv).unwrap();
        let mut nonzero = 0;
        for u in 0..=3 {
            for v in 0..=3 {
                for w in 0..=3 {
                    for y in 0..=3 {
                        for (beta, extras) in [(2, vec![]), (2, vec![HPower(2)]), (3, vec![HPower(3)])] {
                            let r = bad
                                .wdvv_residual(
                                    HPower(u),
                                    HPower(v),
                                    HPower(w),
                                    HPower(y),
                                    AbsCurve::Degree(beta),
                                    &extras,
                                )
                                .unwrap();
                            if !r.is_zero() {
                                nonzero += 1;
                            }
                        }
                    }
                }
            }
        }
        assert!(nonzero > 0);
    }

    #[test]
    fn large_projective_spaces_are_gated() {
        let e = eng(Family::ProjSpace, 11);
        assert!(matches!(
            e.closed_invariant(AbsCurve::Degree(1), &[HPower(11), HPower(11)]),
            Err(Error::Unsupported(_))
        ));
        let big = ClosedEngine::with_store(
            Space::projective(11).unwrap(),
            Arc::new(Store::new()),
            EngineConfig { allow_large_pn: true },
        );
        assert_eq!(big.closed_invariant(AbsCurve::Degree(1), &[HPower(11), HPower(11)]).unwrap(), int(1));
    }
}
