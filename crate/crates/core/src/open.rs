//! Open genus-zero invariants: axiom normalization, wall-crossing, the
//! open-closed relation, the open WDVV recursion on odd quadrics, and the
//! closed-form low-degree values of ℝℙⁿ ⊂ ℙⁿ.

use std::sync::Arc;

use num::{One, Zero};

use crate::closed::{ClosedEngine, EngineConfig, Evaluation};
use crate::error::{invalid, Error, Result};
use crate::geometry::{AbsCombo, Family, Geometry, RelClass, Space};
use crate::key::{CoreKey, Insertion, OpenKey};
use crate::multiset::Multiset;
use crate::rational::{binomial, frac, int, sign, Rational};
use crate::reduction::{sum_products, Ctx, Linear, Product, Reduction};
use crate::store::{Provenance, Store};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OwdvvKind {
    /// The relation with three interior slots u, v, w.
    Cor1,
    /// The relation with two interior slots v, w and two boundary derivatives.
    Cor2,
}

/// Sign of the base disk count and the modulus r of the sign-changed family.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SignConvention {
    pub seed_sign: i8,
    pub r: u32,
}

impl Default for SignConvention {
    fn default() -> Self {
        SignConvention { seed_sign: 1, r: 2 }
    }
}

pub struct OpenEngine {
    closed: ClosedEngine,
    convention: SignConvention,
    seed_override: Option<Rational>,
    /// Nonzero (l, m, g^{lm}) of the inverse pairing in the adapted basis.
    ginv: Vec<(usize, usize, Rational)>,
}

impl OpenEngine {
    pub fn new(space: Space) -> OpenEngine {
        OpenEngine::with_store(space, Arc::new(Store::new()), EngineConfig::default(), SignConvention::default())
    }

    /// A store must only ever be shared between engines with the same sign convention.
    pub fn with_store(space: Space, store: Arc<Store>, config: EngineConfig, convention: SignConvention) -> OpenEngine {
        let closed = ClosedEngine::with_store(space, store, config);
        let ad = closed.geometry().adapted();
        let mut ginv = vec![];
        for (l, row) in ad.g_inv.iter().enumerate() {
            for (m, v) in row.iter().enumerate() {
                if !v.is_zero() {
                    ginv.push((l, m, v.clone()));
                }
            }
        }
        OpenEngine { closed, convention, seed_override: None, ginv }
    }

    /// Replace the base disk count outright. Only meaningful for mutation
    /// tests: every other value is then derived from a wrong input.
    pub fn with_seed_override(mut self, seed: Rational) -> OpenEngine {
        self.seed_override = Some(seed);
        self
    }

    pub fn closed(&self) -> &ClosedEngine {
        &self.closed
    }

    pub fn geometry(&self) -> &Geometry {
        self.closed.geometry()
    }

    pub fn space(&self) -> Space {
        self.closed.space()
    }

    pub fn convention(&self) -> SignConvention {
        self.convention
    }

    fn n(&self) -> i64 {
        self.geometry().n() as i64
    }

    /// The base disk count: OGW_{1,3} on odd quadrics, OGW_{1,2} on ℙⁿ.
    pub fn seed_value(&self) -> Rational {
        if let Some(s) = &self.seed_override {
            return s.clone();
        }
        let n = self.n();
        let s = int(self.convention.seed_sign as i64);
        match self.space().family() {
            Family::QuadricOdd => s * sign((n - 2) * (n - 3) / 2) * int(2),
            _ => s * int(2),
        }
    }

    fn ins_deg(&self, c: Insertion) -> i64 {
        match c {
            Insertion::Rel(r) => self.geometry().rel_degree(r) as i64,
            Insertion::ExtPdl => self.n(),
        }
    }

    fn degree_ok(&self, beta: u32, k: u32, total: i64, l: usize) -> bool {
        let n = self.n();
        n - 3 + self.geometry().maslov(beta) + k as i64 + 2 * l as i64 == k as i64 * n + total
    }

    fn bc_raw(&self, beta: u32, total: i64, l: usize) -> Option<u32> {
        let n = self.n();
        let rhs = n - 3 + self.geometry().maslov(beta) + 2 * l as i64 - total;
        (rhs >= 0 && rhs % (n - 1) == 0).then(|| (rhs / (n - 1)) as u32)
    }

    /// The unique k allowed by the degree axiom, if any.
    pub fn boundary_count(&self, beta: u32, cs: &[Insertion]) -> Option<u32> {
        self.bc_raw(beta, cs.iter().map(|c| self.ins_deg(*c)).sum(), cs.len())
    }

    fn validate(&self, cs: &[Insertion]) -> Result<()> {
        for c in cs {
            match c {
                Insertion::Rel(r) => self.geometry().check_rel(*r)?,
                Insertion::ExtPdl if self.space().family() == Family::QuadricEven => {}
                Insertion::ExtPdl => return invalid("PD(L) insertions exist only on even quadrics"),
            }
        }
        Ok(())
    }

    /// Whether open WDVV and the relative product use the enhanced invariants.
    fn uses_enhanced(&self) -> bool {
        self.space().lagrangian_trivial()
    }

    fn normalize_inner(&self, beta: u32, k: u32, cs: &[Insertion], enhanced: bool) -> Result<(Linear, Provenance)> {
        let geom = self.geometry();
        let enhanced = enhanced && self.uses_enhanced();
        let axiom = |l: Linear| Ok((l, Provenance::Axiom));
        if k == 0 && !enhanced && geom.in_image_of_varpi(beta) {
            return axiom(Linear::zero());
        }
        let total: i64 = cs.iter().map(|c| self.ins_deg(*c)).sum();
        if !self.degree_ok(beta, k, total, cs.len()) {
            return axiom(Linear::zero());
        }
        if beta == 0 {
            return axiom(match (k, cs) {
                (1, [Insertion::Rel(RelClass::HhatPower(0))]) => Linear::constant(int(-1)),
                (0, [Insertion::Rel(a), Insertion::Rel(b)]) => Linear::constant(geom.p_real(&geom.rel_cup(*a, *b))),
                _ => Linear::zero(),
            });
        }
        let mut factor = Rational::one();
        let mut k = k;
        let mut diamonds = 0;
        let mut rest: Vec<Insertion> = Vec::with_capacity(cs.len());
        for &c in cs {
            match c {
                Insertion::Rel(RelClass::HhatPower(0)) => return axiom(Linear::zero()),
                Insertion::Rel(RelClass::HhatPower(1)) => {
                    factor *= geom.divisor_integral_rel(beta, RelClass::HhatPower(1))?;
                    if factor.is_zero() {
                        return axiom(Linear::zero());
                    }
                }
                Insertion::Rel(RelClass::Diamond) => {
                    // Trade Γ_⋄ for a boundary point.
                    diamonds += 1;
                    k += 1;
                    factor = -factor;
                }
                c => rest.push(c),
            }
        }
        rest.sort();
        let via = if diamonds > 0 { Provenance::WallCrossing } else { Provenance::Axiom };
        match self.space().family() {
            Family::QuadricOdd => {
                if rest.is_empty() && beta == 1 && k == 3 {
                    return Ok((Linear::constant(factor * self.seed_value()), Provenance::Seed));
                }
                let key = OpenKey { space: self.space(), beta, k, constraints: rest, enhanced: true };
                let via = if diamonds > 0 { via } else { Provenance::Owdvv };
                Ok((Linear::key(factor, CoreKey::Open(key)), via))
            }
            Family::ProjSpace => {
                let v = self.projective_value(beta, k, &rest)?;
                let via = if beta == 1 && k == 2 && rest.is_empty() { Provenance::Seed } else { via };
                Ok((Linear::constant(factor * v), via))
            }
            Family::QuadricEven | Family::QuadricSurface => {
                if k != 1 {
                    return Ok((Linear::zero(), via));
                }
                let lin = self.open_closed_linear(beta, &rest);
                Ok((lin.scaled(&factor), Provenance::OpenClosed))
            }
        }
    }

    /// The degree-one disk counts of ℝℙⁿ; everything else is out of reach.
    fn projective_value(&self, beta: u32, k: u32, rest: &[Insertion]) -> Result<Rational> {
        let n = self.geometry().n();
        let eps = sign((n as i64 - 1) / 2);
        let g = |j: u32| Insertion::Rel(RelClass::HhatPower(j));
        if beta == 1 {
            match (k, rest) {
                (2, []) => return Ok(self.seed_value()),
                (1, [a]) if *a == g(n.div_ceil(2)) => return Ok(Rational::zero()),
                (0, [a]) if *a == g(n) => return Ok(eps),
                (0, [Insertion::Rel(RelClass::HhatPower(i)), Insertion::Rel(RelClass::HhatPower(j))])
                    if i + j == n + 1 =>
                {
                    return Ok(eps * frac(1, 2))
                }
                _ => {}
            }
        }
        let tags: Vec<String> = rest.iter().map(Insertion::tag).collect();
        Err(Error::Unsupported(format!(
            "open invariant of ℙ^{n} with β={beta}, k={k}, constraints [{}] is beyond the degree-one values",
            tags.join(",")
        )))
    }

    /// Σ_{ϖ(β̂)=β} (−1)^{n+1+w_s(β̂)} GW_β̂(η, PD(L), ρ(I)) with η = ((−1)^{n/2}/2)·PD(L).
    fn open_closed_linear(&self, beta: u32, cs: &[Insertion]) -> Linear {
        let geom = self.geometry();
        let n = self.n();
        let dl = geom.delta_l().expect("[L] ≠ 0");
        let mut combos: Vec<AbsCombo> = vec![dl.clone(), dl.clone()];
        for c in cs {
            combos.push(match c {
                Insertion::Rel(r) => geom.rho(*r),
                Insertion::ExtPdl => dl.clone(),
            });
        }
        let eta = sign(n / 2) * frac(1, 2);
        let mut out = Linear::zero();
        for b in geom.varpi_preimages(beta) {
            let s = sign(n + 1) * int(geom.spin_sign(b)) * &eta;
            out.add_assign(self.closed.normalize_combos(b, &combos).scaled(&s));
        }
        out
    }

    pub fn normalize(&self, beta: u32, k: u32, cs: &[Insertion], enhanced: bool) -> Result<Linear> {
        self.validate(cs)?;
        Ok(self.normalize_inner(beta, k, cs, enhanced)?.0)
    }

    pub fn evaluate(&self, beta: u32, k: u32, cs: &[Insertion], enhanced: bool) -> Result<Evaluation> {
        self.validate(cs)?;
        let (lin, via) = self.normalize_inner(beta, k, cs, enhanced)?;
        let mut ctx = Ctx::default();
        let value = self.eval_linear(&lin, &mut ctx)?;
        Ok(Evaluation { value, provenance: via })
    }

    pub fn open_invariant(&self, beta: u32, k: u32, cs: &[Insertion]) -> Result<Rational> {
        Ok(self.evaluate(beta, k, cs, false)?.value)
    }

    pub fn enhanced_invariant(&self, beta: u32, k: u32, cs: &[Insertion]) -> Result<Rational> {
        Ok(self.evaluate(beta, k, cs, true)?.value)
    }

    /// The k = 1 invariant through closed invariants with two PD(L) insertions.
    pub fn open_closed_evaluate(&self, beta: u32, cs: &[Insertion]) -> Result<Rational> {
        if self.space().lagrangian_trivial() {
            return Err(Error::Precondition("the open-closed relation needs [L] ≠ 0".into()));
        }
        self.validate(cs)?;
        let lin = self.open_closed_linear(beta, cs);
        self.eval_linear(&lin, &mut Ctx::default())
    }

    fn eval_linear(&self, lin: &Linear, ctx: &mut Ctx) -> Result<Rational> {
        let mut acc = lin.constant.clone();
        for (c, k) in &lin.terms {
            acc += c * self.core_value(k, ctx)?;
        }
        Ok(acc)
    }

    fn core_value(&self, key: &CoreKey, ctx: &mut Ctx) -> Result<Rational> {
        match key {
            CoreKey::Closed(c) => self.closed.core_value(c, ctx),
            CoreKey::Open(o) => self.open_core_value(o, ctx),
        }
    }

    fn open_core_value(&self, key: &OpenKey, ctx: &mut Ctx) -> Result<Rational> {
        let ck = key.canonical();
        if let Some(v) = self.closed.store().get(&ck) {
            return Ok(v);
        }
        let core = CoreKey::Open(key.clone());
        ctx.enter(&core)?;
        let res = stacker::maybe_grow(256 * 1024, 8 * 1024 * 1024, || -> Result<Rational> {
            let red = self.odd_quadric_reduce(key)?;
            let pivot = sum_products(&red.pivot, |k| self.core_value(k, ctx))?;
            if key.constraints.is_empty() {
                let expected = int(2) * int(2 * key.beta as i64 - key.k as i64 + 1);
                if pivot != expected {
                    return Err(Error::Internal(format!("pivot {pivot} for {ck}, expected {expected}")));
                }
            }
            if pivot.is_zero() {
                return Err(Error::Internal(format!("zero pivot for {ck}")));
            }
            let rest = sum_products(&red.rest, |k| self.core_value(k, ctx))?;
            Ok(-rest / pivot)
        });
        ctx.leave(&core);
        let v = res?;
        self.closed.store().put(&ck, v.clone(), Provenance::Owdvv)?;
        Ok(v)
    }

    /// Express a normalized odd-quadric open invariant through lower ones.
    pub fn odd_quadric_reduce(&self, key: &OpenKey) -> Result<Reduction> {
        if self.space().family() != Family::QuadricOdd || key.space != self.space() {
            return Err(Error::Precondition("open recursion runs on odd quadrics only".into()));
        }
        let n = self.geometry().n();
        let mut js = vec![];
        for c in &key.constraints {
            match c {
                Insertion::Rel(RelClass::HhatPower(j)) if *j >= 2 => js.push(*j),
                _ => return Err(Error::Precondition(format!("{} is not normalized", key.canonical()))),
            }
        }
        js.sort();
        if key.beta == 0 {
            return Err(Error::Precondition("degree-zero invariants are fixed by the axioms".into()));
        }
        let g = RelClass::HhatPower;
        let products = match js.as_slice() {
            [] => {
                if key.beta == 1 && key.k == 3 {
                    return Err(Error::Precondition("the base disk count is an input".into()));
                }
                let (b, k) = (key.beta as i64, key.k as i64);
                if n as i64 * (2 * b - k + 1) != 3 - k || 2 * b - k + 1 == 0 {
                    return Err(Error::Internal(format!("degree identity fails for {}", key.canonical())));
                }
                let r = (n - 1) / 2;
                self.owdvv_products(OwdvvKind::Cor2, None, g(r + 1), g(r + 1), key.beta + 1, key.k - 1, &[])?
            }
            [j] => {
                if key.k == 0 {
                    return Err(Error::Internal(format!("{} needs k ≥ 1", key.canonical())));
                }
                self.owdvv_products(OwdvvKind::Cor2, None, g(1), g(j - 1), key.beta, key.k - 1, &[])?
            }
            [j1, j2, rest @ ..] => {
                let extras: Vec<RelClass> = rest.iter().map(|j| g(*j)).collect();
                self.owdvv_products(OwdvvKind::Cor1, Some(g(*j2)), g(j1 - 1), g(1), key.beta, key.k, &extras)?
            }
        };
        let red = Reduction::from_relation(CoreKey::Open(key.clone()), products)?;
        if red.pivot.is_empty() {
            return Err(Error::Internal(format!("{} does not appear in its relation", key.canonical())));
        }
        Ok(red)
    }

    fn open_lin(&self, beta: u32, k: u32, cs: &[Insertion]) -> Result<Linear> {
        Ok(self.normalize_inner(beta, k, cs, true)?.0)
    }

    /// Σ_{ϖ(β̂)=β} (−1)^{w_s(β̂)} GW_β̂ on combinations, i.e. a coefficient of ρ*Φ.
    fn phi(&self, beta: u32, combos: &[AbsCombo]) -> Linear {
        let geom = self.geometry();
        let mut out = Linear::zero();
        if combos.iter().any(|c| c.is_empty()) {
            return out;
        }
        for b in geom.varpi_preimages(beta) {
            out.add_assign(self.closed.normalize_combos(b, combos).scaled(&int(geom.spin_sign(b))));
        }
        out
    }

    /// LHS − RHS of the open WDVV relation at T^β, after `k` further
    /// derivatives in s and one derivative per extra class.
    #[allow(clippy::too_many_arguments)]
    pub fn owdvv_products(
        &self,
        kind: OwdvvKind,
        u: Option<RelClass>,
        v: RelClass,
        w: RelClass,
        beta: u32,
        k: u32,
        extras: &[RelClass],
    ) -> Result<Vec<Product>> {
        let geom = self.geometry();
        let ad = geom.adapted();
        let kc = ad.k_cut;
        let rel = |c: RelClass| Insertion::Rel(c);
        let splits = Multiset::from_items(extras).splits();
        let gamma = |j: usize| Insertion::Rel(geom.rel_basis()[j]);
        let mut out = vec![];
        let with = |head: &[Insertion], tail: &[RelClass]| -> Vec<Insertion> {
            head.iter().copied().chain(tail.iter().map(|c| rel(*c))).collect()
        };
        let combos = |head: Vec<AbsCombo>, tail: &[RelClass]| -> Vec<AbsCombo> {
            head.into_iter().chain(tail.iter().map(|c| geom.rho(*c))).collect()
        };
        let deg_of = |cs: &[Insertion]| -> i64 { cs.iter().map(|c| self.ins_deg(*c)).sum() };
        for b1 in 0..=beta {
            let b2 = beta - b1;
            for (s1, s2, wt) in &splits {
                match kind {
                    OwdvvKind::Cor1 => {
                        let u = u.ok_or_else(|| Error::Invalid("the three-slot relation needs u".into()))?;
                        for (l, m, g) in &self.ginv {
                            if *l <= kc {
                                let a = self.open_lin(b1, k, &with(&[rel(u), gamma(*l)], s1))?;
                                if !a.is_zero() {
                                    let b = self
                                        .phi(b2, &combos(vec![ad.vectors[*m].clone(), geom.rho(w), geom.rho(v)], s2));
                                    a.times(&b, &(wt * g), &mut out);
                                }
                            }
                            if *m <= kc {
                                let a =
                                    self.phi(b1, &combos(vec![geom.rho(u), geom.rho(w), ad.vectors[*l].clone()], s1));
                                if !a.is_zero() {
                                    let b = self.open_lin(b2, k, &with(&[gamma(*m), rel(v)], s2))?;
                                    a.times(&b, &-(wt * g), &mut out);
                                }
                            }
                        }
                        // ∂u∂sΩ̄ · ∂w∂vΩ̄
                        let left = with(&[rel(u)], s1);
                        if let Some(k1) = self.bc_raw(b1, deg_of(&left), left.len()) {
                            if k1 >= 1 && k1 - 1 <= k {
                                let i = k1 - 1;
                                let a = self.open_lin(b1, k1, &left)?;
                                if !a.is_zero() {
                                    let b = self.open_lin(b2, k - i, &with(&[rel(w), rel(v)], s2))?;
                                    a.times(&b, &-(wt * binomial(k, i)), &mut out);
                                }
                            }
                        }
                        // ∂u∂wΩ̄ · ∂v∂sΩ̄
                        let left = with(&[rel(u), rel(w)], s1);
                        if let Some(i) = self.bc_raw(b1, deg_of(&left), left.len()) {
                            if i <= k {
                                let a = self.open_lin(b1, i, &left)?;
                                if !a.is_zero() {
                                    let b = self.open_lin(b2, k - i + 1, &with(&[rel(v)], s2))?;
                                    a.times(&b, &(wt * binomial(k, i)), &mut out);
                                }
                            }
                        }
                    }
                    OwdvvKind::Cor2 => {
                        for (l, m, g) in &self.ginv {
                            if *l <= kc {
                                let a = self.open_lin(b1, k + 1, &with(&[gamma(*l)], s1))?;
                                if !a.is_zero() {
                                    let b = self
                                        .phi(b2, &combos(vec![ad.vectors[*m].clone(), geom.rho(w), geom.rho(v)], s2));
                                    a.times(&b, &(wt * g), &mut out);
                                }
                            }
                        }
                        // ∂s²Ω̄ · ∂w∂vΩ̄
                        let left = with(&[], s1);
                        if let Some(k1) = self.bc_raw(b1, deg_of(&left), left.len()) {
                            if k1 >= 2 && k1 - 2 <= k {
                                let i = k1 - 2;
                                let a = self.open_lin(b1, k1, &left)?;
                                if !a.is_zero() {
                                    let b = self.open_lin(b2, k - i, &with(&[rel(w), rel(v)], s2))?;
                                    a.times(&b, &-(wt * binomial(k, i)), &mut out);
                                }
                            }
                        }
                        // −∂s∂wΩ̄ · ∂v∂sΩ̄ on the right
                        let left = with(&[rel(w)], s1);
                        if let Some(k1) = self.bc_raw(b1, deg_of(&left), left.len()) {
                            if k1 >= 1 && k1 - 1 <= k {
                                let i = k1 - 1;
                                let a = self.open_lin(b1, k1, &left)?;
                                if !a.is_zero() {
                                    let b = self.open_lin(b2, k - i + 1, &with(&[rel(v)], s2))?;
                                    a.times(&b, &(wt * binomial(k, i)), &mut out);
                                }
                            }
                        }
                    }
                }
            }
        }
        Ok(out)
    }

    #[allow(clippy::too_many_arguments)]
    pub fn owdvv_residual(
        &self,
        kind: OwdvvKind,
        u: Option<RelClass>,
        v: RelClass,
        w: RelClass,
        beta: u32,
        k: u32,
        extras: &[RelClass],
    ) -> Result<Rational> {
        if kind == OwdvvKind::Cor2 && !self.space().lagrangian_trivial() {
            return Err(Error::Precondition("the two-slot relation needs [L] = 0".into()));
        }
        let mut all: Vec<Insertion> = extras.iter().map(|c| Insertion::Rel(*c)).collect();
        all.extend([Insertion::Rel(v), Insertion::Rel(w)]);
        all.extend(u.map(Insertion::Rel));
        self.validate(&all)?;
        let products = self.owdvv_products(kind, u, v, w, beta, k, extras)?;
        let mut ctx = Ctx::default();
        sum_products(&products, |key| self.core_value(key, &mut ctx))
    }
}

/// Outcome of comparing a sign-changed family with the original.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SignReport {
    pub checked: usize,
    pub mismatches: Vec<String>,
}

/// (β, k, constraints) of a plain open invariant.
pub type OpenSpec = (u32, u32, Vec<Insertion>);

/// Constraint multisets on an odd quadric with β ≤ `beta_max` for which the
/// degree axiom has a solution, with at most one unit, two divisor and
/// `max_diamond` Γ_⋄ insertions.
pub fn enumerate_open_keys(engine: &OpenEngine, beta_max: u32, max_diamond: u32) -> Vec<OpenSpec> {
    let n = engine.geometry().n();
    let mut out = vec![];
    for beta in 0..=beta_max {
        let budget = engine.geometry().maslov(beta) + n as i64; // bounds Σ(|A|−2)
        let mut stack: Vec<(u32, Vec<Insertion>, i64)> = vec![(0, vec![], 0)];
        // Depth-first over h-power exponents 2..=n, then fix units, divisors, diamonds.
        let mut interiors: Vec<Vec<Insertion>> = vec![];
        while let Some((j, cur, used)) = stack.pop() {
            if j > n {
                interiors.push(cur);
                continue;
            }
            if j < 2 {
                stack.push((2, cur, used));
                continue;
            }
            let cost = 2 * j as i64 - 2;
            let mut c = 0;
            loop {
                let mut next = cur.clone();
                next.extend(std::iter::repeat_n(Insertion::g(j), c));
                stack.push((j + 1, next, used + cost * c as i64));
                c += 1;
                if used + cost * c as i64 > budget {
                    break;
                }
            }
        }
        for int_part in interiors {
            for units in 0..=1 {
                for divs in 0..=2 {
                    for d in 0..=max_diamond {
                        let mut cs = int_part.clone();
                        cs.extend(std::iter::repeat_n(Insertion::g(0), units));
                        cs.extend(std::iter::repeat_n(Insertion::g(1), divs));
                        cs.extend(std::iter::repeat_n(Insertion::DIAMOND, d as usize));
                        cs.sort();
                        if let Some(k) = engine.boundary_count(beta, &cs) {
                            out.push((beta, k, cs));
                        }
                    }
                }
            }
        }
    }
    out.sort();
    out
}

/// Values of the family computed with `convention` on the given keys.
pub fn sign_flipped_family(
    space: Space,
    convention: SignConvention,
    keys: &[OpenSpec],
) -> Result<Vec<(OpenSpec, Rational)>> {
    if space.family() != Family::QuadricOdd {
        return Err(Error::Precondition("sign changes are studied on odd quadrics".into()));
    }
    let engine = OpenEngine::with_store(space, Arc::new(Store::new()), EngineConfig::default(), convention);
    keys.iter().map(|key| Ok((key.clone(), engine.open_invariant(key.0, key.1, &key.2)?))).collect()
}

/// Check OGW^flip = (−1)^{(k+r−1)/2}·OGW with r the number of Γ_⋄ insertions.
pub fn verify_sign_change(space: Space, beta_max: u32) -> Result<SignReport> {
    let base = OpenEngine::new(space);
    let keys = enumerate_open_keys(&base, beta_max, 2);
    let flipped = sign_flipped_family(space, SignConvention { seed_sign: -1, r: 2 }, &keys)?;
    let mut report = SignReport::default();
    for ((beta, k, cs), fv) in flipped {
        let v = base.open_invariant(beta, k, &cs)?;
        let r = cs.iter().filter(|c| **c == Insertion::DIAMOND).count() as i64;
        let e = k as i64 + r - 1;
        let expected = if v.is_zero() {
            Rational::zero()
        } else if e.rem_euclid(2) != 0 {
            // Only even k + r − 1 can carry a nonzero value.
            report.mismatches.push(format!("nonzero value at odd k+r-1: β={beta} k={k}"));
            continue;
        } else {
            sign(e / 2) * &v
        };
        report.checked += 1;
        if fv != expected {
            let tags: Vec<String> = cs.iter().map(Insertion::tag).collect();
            report.mismatches.push(format!("β={beta} k={k} [{}]: {fv} vs {expected}", tags.join(",")));
        }
    }
    Ok(report)
}
