//! Property suites behind `relqh verify`.

use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use relqh_core::open::{enumerate_open_keys, verify_sign_change};
use relqh_core::rational::int;
use relqh_core::rings::{
    ci_presentation, relative_quantum_table, small_quantum_table, stated_presentations, verify_associativity,
    verify_grading, verify_homomorphism, verify_presentation, verify_unit, Report,
};
use relqh_core::{
    AbsClass, AbsCurve, ClosedEngine, ClosedKey, EngineConfig, Error, Family, Insertion, OpenEngine, OpenKey,
    OwdvvKind, Provenance, Rational, RelClass, Result, SignConvention, Space, Store,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Suite {
    Axioms,
    Vanishing,
    Wdvv,
    Owdvv,
    Assoc,
    Rings,
    Signs,
    All,
}

/// Counts for one named check; `skipped` are cases outside the supported
/// range (ℙⁿ open invariants beyond degree one) or outside a relation's
/// hypotheses.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SuiteResult {
    pub name: String,
    pub checked: usize,
    pub skipped: usize,
    pub failures: Vec<String>,
}

impl SuiteResult {
    fn new(name: impl Into<String>) -> Self {
        SuiteResult { name: name.into(), ..Default::default() }
    }

    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok && self.failures.len() < 20 {
            self.failures.push(what());
        } else if !ok {
            self.failures.push(String::new());
        }
    }

    /// Fold a value-or-error into the counts; unsupported keys are skipped.
    fn eval<T>(&mut self, r: Result<T>) -> Result<Option<T>> {
        match r {
            Ok(v) => Ok(Some(v)),
            Err(Error::Unsupported(_) | Error::Precondition(_)) => {
                self.skipped += 1;
                Ok(None)
            }
            Err(e) => Err(e),
        }
    }

    fn absorb(&mut self, r: Report) {
        self.checked += r.checked;
        self.failures.extend(r.failures);
    }

    pub fn passed(&self) -> bool {
        self.failures.is_empty() && self.checked > 0
    }
}

pub const SEED: u64 = 0x5eed;

pub fn run(suite: Suite, budget: u32) -> Result<Vec<SuiteResult>> {
    let all = suite == Suite::All;
    let mut out = vec![];
    if all || suite == Suite::Axioms {
        out.extend(axioms(budget, SEED, 500)?);
    }
    if all || suite == Suite::Vanishing {
        out.extend(vanishing(budget)?);
    }
    if all || suite == Suite::Wdvv {
        out.extend(wdvv(budget)?);
    }
    if all || suite == Suite::Owdvv {
        out.extend(owdvv(budget)?);
    }
    if all || suite == Suite::Assoc {
        out.extend(assoc()?);
    }
    if all || suite == Suite::Rings {
        out.extend(rings()?);
    }
    if all || suite == Suite::Signs {
        out.extend(signs(budget)?);
    }
    Ok(out)
}

fn z() -> Rational {
    int(0)
}

pub fn family_spaces(family: Family) -> Vec<Space> {
    let s = |n| Space::new(family, n).expect("valid space");
    match family {
        Family::ProjSpace => vec![s(3), s(5)],
        Family::QuadricOdd => vec![s(3), s(5)],
        Family::QuadricEven => vec![s(4), s(6)],
        Family::QuadricSurface => vec![s(2)],
    }
}

const FAMILIES: [Family; 4] = [Family::QuadricOdd, Family::QuadricEven, Family::QuadricSurface, Family::ProjSpace];

fn random_curve(g: &relqh_core::Geometry, budget: u32, rng: &mut ChaCha8Rng) -> AbsCurve {
    let e = rng.gen_range(0..=budget);
    *g.curves_of_energy(e).choose(rng).expect("curves exist")
}

/// Degree, unit, zero and divisor axioms plus order independence on
/// `count` random admissible keys per family, closed and open.
pub fn axioms(budget: u32, seed: u64, count: usize) -> Result<Vec<SuiteResult>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = vec![];
    for family in FAMILIES {
        let mut res = SuiteResult::new(format!("closed axioms {}", family.code()));
        let engines: Vec<ClosedEngine> = family_spaces(family).into_iter().map(ClosedEngine::new).collect();
        let mut admissible = 0;
        let mut tries = 0;
        while admissible < count && tries < 200 * count {
            tries += 1;
            let e = engines.choose(&mut rng).unwrap();
            let g = e.geometry();
            let beta = random_curve(g, budget, &mut rng);
            let l = rng.gen_range(1..=6);
            let cs: Vec<AbsClass> = (0..l).map(|_| *g.abs_basis().choose(&mut rng).unwrap()).collect();
            let v = e.closed_invariant(beta, &cs)?;
            if !e.admissible(beta, &cs) {
                res.check(v == z(), || format!("{} {beta} {cs:?}: degree gate gave {v}", e.space()));
                continue;
            }
            admissible += 1;
            let mut shuffled = cs.clone();
            shuffled.shuffle(&mut rng);
            res.check(e.closed_invariant(beta, &shuffled)? == v, || format!("{} order dependence", e.space()));
            if beta.is_zero() {
                let expected = match cs.as_slice() {
                    [a, b, c] => g.triple_integral(*a, *b, *c),
                    _ => z(),
                };
                res.check(v == expected, || format!("{} zero axiom {cs:?}", e.space()));
            } else {
                if cs.contains(&AbsClass::HPower(0)) {
                    res.check(v == z(), || format!("{} unit axiom {beta} {cs:?}", e.space()));
                }
                if let Some(pos) = cs.iter().position(|c| g.abs_degree(*c) == 2) {
                    let mut rest = cs.clone();
                    let d = rest.remove(pos);
                    let expected = g.divisor_integral_abs(beta, d)? * e.closed_invariant(beta, &rest)?;
                    res.check(v == expected, || format!("{} divisor axiom {beta} {cs:?}", e.space()));
                }
            }
        }
        res.check(admissible == count, || format!("only {admissible} admissible closed keys sampled"));
        out.push(res);

        let mut res = SuiteResult::new(format!("open axioms {}", family.code()));
        let engines: Vec<OpenEngine> = family_spaces(family).into_iter().map(OpenEngine::new).collect();
        let mut admissible = 0;
        let mut tries = 0;
        while admissible < count && tries < 200 * count {
            tries += 1;
            let e = engines.choose(&mut rng).unwrap();
            let g = e.geometry();
            let max_beta = if family == Family::ProjSpace { 1 } else { budget };
            let beta = rng.gen_range(0..=max_beta);
            let l = rng.gen_range(0..=5);
            let mut pool: Vec<Insertion> = g.rel_basis().iter().map(|c| Insertion::Rel(*c)).collect();
            if family == Family::QuadricEven {
                pool.push(Insertion::ExtPdl);
            }
            let cs: Vec<Insertion> = (0..l).map(|_| *pool.choose(&mut rng).unwrap()).collect();
            let Some(k) = e.boundary_count(beta, &cs) else {
                let k = rng.gen_range(0..=6);
                if let Some(v) = res.eval(e.open_invariant(beta, k, &cs))? {
                    res.check(v == z(), || format!("{} degree gate β={beta} k={k} {cs:?}", e.space()));
                }
                continue;
            };
            let Some(v) = res.eval(e.open_invariant(beta, k, &cs))? else { continue };
            admissible += 1;
            let mut shuffled = cs.clone();
            shuffled.shuffle(&mut rng);
            if let Some(w) = res.eval(e.open_invariant(beta, k, &shuffled))? {
                res.check(w == v, || format!("{} order dependence", e.space()));
            }
            let unit = Insertion::g(0);
            if beta == 0 && k == 1 && cs == [unit] {
                res.check(v == int(-1), || "unit axiom (0,1,1)".into());
            } else if cs.contains(&unit) {
                res.check(v == z(), || format!("{} unit axiom β={beta} k={k} {cs:?}", e.space()));
            }
            if k == 0 && g.in_image_of_varpi(beta) {
                res.check(v == z(), || format!("{} plain k=0 vanishing β={beta} {cs:?}", e.space()));
            }
            if !e.space().lagrangian_trivial() && k >= 2 {
                res.check(v == z(), || format!("{} k ≥ 2 vanishing", e.space()));
            }
            if beta == 0 && !(k == 1 && cs == [unit]) && !(k == 0 && cs.len() == 2) {
                res.check(v == z(), || format!("{} zero axiom k={k} {cs:?}", e.space()));
            }
            if beta > 0 {
                if let Some(pos) = cs.iter().position(|c| *c == Insertion::g(1)) {
                    let mut rest = cs.clone();
                    rest.remove(pos);
                    if let Some(w) = res.eval(e.open_invariant(beta, k, &rest))? {
                        let f = g.divisor_integral_rel(beta, RelClass::HhatPower(1))?;
                        res.check(v == f * w, || format!("{} divisor axiom β={beta} {cs:?}", e.space()));
                    }
                }
            }
            if e.space().lagrangian_trivial() {
                // OGW-bar_{β,k+1}(I) = −OGW-bar_{β,k}(Γ_⋄, I)
                let mut with = cs.clone();
                with.push(Insertion::DIAMOND);
                if let (Some(a), Some(b)) =
                    (res.eval(e.enhanced_invariant(beta, k + 1, &cs))?, res.eval(e.enhanced_invariant(beta, k, &with))?)
                {
                    res.check(a == -b, || format!("{} wall-crossing β={beta} k={k} {cs:?}", e.space()));
                }
            }
        }
        res.check(admissible == count, || format!("only {admissible} admissible open keys sampled"));
        out.push(res);
    }
    Ok(out)
}

/// All multisets of size ≤ `max_len` over `items`.
fn multisets<T: Copy>(items: &[T], max_len: usize) -> Vec<Vec<T>> {
    let mut out = vec![vec![]];
    let mut frontier: Vec<(usize, Vec<T>)> = vec![(0, vec![])];
    for _ in 0..max_len {
        let mut next = vec![];
        for (start, cur) in &frontier {
            for (i, x) in items.iter().enumerate().skip(*start) {
                let mut v = cur.clone();
                v.push(*x);
                out.push(v.clone());
                next.push((i, v));
            }
        }
        frontier = next;
    }
    out
}

pub fn vanishing(budget: u32) -> Result<Vec<SuiteResult>> {
    let mut out = vec![];
    let mut res = SuiteResult::new("odd quadrics: even k vanishes");
    for space in family_spaces(Family::QuadricOdd) {
        let e = OpenEngine::new(space);
        for (beta, k, cs) in enumerate_open_keys(&e, budget, 0) {
            if k % 2 == 0 {
                let v = e.open_invariant(beta, k, &cs)?;
                res.check(v == z(), || format!("{space} β={beta} k={k} {cs:?} = {v}"));
            }
        }
    }
    out.push(res);

    let mut res = SuiteResult::new("even quadrics: odd PD(L) count and pure PD(L) vanish");
    for space in family_spaces(Family::QuadricEven) {
        let e = ClosedEngine::new(space);
        let g = e.geometry();
        for d in 0..=budget {
            let beta = AbsCurve::Degree(d);
            for cs in multisets(g.abs_basis(), 5) {
                let pdl = cs.iter().filter(|c| **c == AbsClass::Pdl).count();
                let all_pdl = !cs.is_empty() && pdl == cs.len();
                if (pdl % 2 == 1 || (all_pdl && d > 0)) && e.admissible(beta, &cs) {
                    let v = e.closed_invariant(beta, &cs)?;
                    res.check(v == z(), || format!("{space} GW_{d}({cs:?}) = {v}"));
                }
            }
        }
    }
    out.push(res);

    let mut res = SuiteResult::new("[L] ≠ 0: k ≥ 2 vanishes");
    for space in [Space::quadric(4)?, Space::quadric(6)?, Space::quadric(2)?] {
        let e = OpenEngine::new(space);
        let mut pool: Vec<Insertion> = e.geometry().rel_basis().iter().map(|c| Insertion::Rel(*c)).collect();
        if space.family() == Family::QuadricEven {
            pool.push(Insertion::ExtPdl);
        }
        for beta in 0..=budget {
            for cs in multisets(&pool, 4) {
                if let Some(k) = e.boundary_count(beta, &cs) {
                    if k >= 2 {
                        let v = e.open_invariant(beta, k, &cs)?;
                        res.check(v == z(), || format!("{space} β={beta} k={k} {cs:?} = {v}"));
                    }
                }
            }
        }
    }
    out.push(res);
    Ok(out)
}

fn closed_residuals(e: &ClosedEngine, budget: u32, res: &mut SuiteResult) -> Result<()> {
    let g = e.geometry();
    let basis = g.abs_basis().to_vec();
    let mut extras: Vec<Vec<AbsClass>> = vec![vec![]];
    extras.extend(basis.iter().map(|b| vec![*b]));
    for en in 0..=budget {
        for beta in g.curves_of_energy(en) {
            for &u in &basis {
                for &v in &basis {
                    for &w in &basis {
                        for &y in &basis {
                            for ex in &extras {
                                let r = e.wdvv_residual(u, v, w, y, beta, ex)?;
                                res.check(r == z(), || {
                                    format!("{} {beta} ({u:?},{v:?},{w:?},{y:?}) {ex:?}: {r}", e.space())
                                });
                            }
                        }
                    }
                }
            }
        }
    }
    Ok(())
}

pub fn wdvv(budget: u32) -> Result<Vec<SuiteResult>> {
    let mut out = vec![];
    for family in FAMILIES {
        let mut res = SuiteResult::new(format!("WDVV residuals {}", family.code()));
        for space in family_spaces(family).into_iter().take(1) {
            closed_residuals(&ClosedEngine::new(space), budget, &mut res)?;
        }
        out.push(res);
    }
    // A single wrong cached value must surface in some residual.
    let mut res = SuiteResult::new("WDVV mutation detected");
    let space = Space::quadric(3)?;
    let key = ClosedKey::new(space, AbsCurve::Degree(1), &[AbsClass::HPower(2); 3]);
    let right = ClosedEngine::new(space).closed_invariant(AbsCurve::Degree(1), &key.constraints)?;
    let bad = Arc::new(Store::new());
    bad.put(&key.canonical(), right + int(1), Provenance::Wdvv)?;
    let e = ClosedEngine::with_store(space, bad, EngineConfig::default());
    let mut probe = SuiteResult::new("");
    closed_residuals(&e, budget.max(2), &mut probe)?;
    res.check(!probe.failures.is_empty(), || "perturbed GW₁(h²,h²,h²) went unnoticed".into());
    out.push(res);
    Ok(out)
}

fn open_residuals(e: &OpenEngine, budget: u32, res: &mut SuiteResult) -> Result<()> {
    let basis = e.geometry().rel_basis().to_vec();
    let kinds: &[OwdvvKind] =
        if e.space().lagrangian_trivial() { &[OwdvvKind::Cor1, OwdvvKind::Cor2] } else { &[OwdvvKind::Cor1] };
    let max_k = 2 * budget * e.geometry().n() + 4;
    for &kind in kinds {
        let us: Vec<Option<RelClass>> =
            if kind == OwdvvKind::Cor1 { basis.iter().map(|u| Some(*u)).collect() } else { vec![None] };
        for u in &us {
            for &v in &basis {
                for &w in &basis {
                    for beta in 0..=budget {
                        for k in 0..=max_k {
                            let Some(r) = res.eval(e.owdvv_residual(kind, *u, v, w, beta, k, &[]))? else { continue };
                            res.check(r == z(), || {
                                format!("{} {kind:?} {u:?} {v:?} {w:?} β={beta} k={k}: {r}", e.space())
                            });
                        }
                    }
                }
            }
        }
    }
    Ok(())
}

pub fn owdvv(budget: u32) -> Result<Vec<SuiteResult>> {
    let mut out = vec![];
    for family in FAMILIES {
        let mut res = SuiteResult::new(format!("open WDVV residuals {}", family.code()));
        for space in family_spaces(family).into_iter().take(1) {
            open_residuals(&OpenEngine::new(space), budget, &mut res)?;
        }
        out.push(res);
    }
    let mut res = SuiteResult::new("open WDVV mutation detected");
    let store = Arc::new(Store::new());
    let space = Space::quadric(3)?;
    let key = OpenKey::new(space, 1, 1, &[Insertion::g(2), Insertion::g(2)], true);
    store.put(&key.canonical(), int(3), Provenance::Owdvv)?;
    let e = OpenEngine::with_store(space, store, EngineConfig::default(), SignConvention::default());
    let mut probe = SuiteResult::new("");
    let caught = match open_residuals(&e, budget.max(2), &mut probe) {
        Ok(()) => !probe.failures.is_empty(),
        Err(Error::Internal(_)) => true,
        Err(err) => return Err(err),
    };
    res.check(caught, || "perturbed OGW_{1,1}(Γ₂,Γ₂) went unnoticed".into());
    out.push(res);
    Ok(out)
}

pub fn ring_spaces() -> Vec<Space> {
    [Family::QuadricOdd, Family::QuadricEven, Family::QuadricSurface, Family::ProjSpace]
        .into_iter()
        .flat_map(family_spaces)
        .collect()
}

pub fn assoc() -> Result<Vec<SuiteResult>> {
    let mut out = vec![];
    for space in ring_spaces() {
        let mut res = SuiteResult::new(format!("associativity, grading, unit {space}"));
        let abs = small_quantum_table(&ClosedEngine::new(space))?;
        let rel = relative_quantum_table(&OpenEngine::new(space))?;
        for t in [&abs, &rel] {
            res.absorb(verify_associativity(t));
            res.absorb(verify_grading(t));
            res.absorb(verify_unit(t));
        }
        out.push(res);
    }
    let mut res = SuiteResult::new("associativity mutation detected");
    let mut t = relative_quantum_table(&OpenEngine::new(Space::quadric(3)?))?;
    t.entries[1][2][3].add_term(int(1), 0);
    t.entries[2][1][3].add_term(int(1), 0);
    res.check(!verify_associativity(&t).passed(), || "perturbed table passed".into());
    out.push(res);
    Ok(out)
}

pub fn rings() -> Result<Vec<SuiteResult>> {
    let mut out = vec![];
    for space in ring_spaces() {
        let mut res = SuiteResult::new(format!("presentations and relative map {space}"));
        let abs = small_quantum_table(&ClosedEngine::new(space))?;
        let rel = relative_quantum_table(&OpenEngine::new(space))?;
        for t in [&abs, &rel] {
            for st in stated_presentations(space, t.side) {
                res.absorb(verify_presentation(t, &st));
            }
        }
        res.absorb(verify_homomorphism(&abs, &rel));
        out.push(res);
    }
    let mut res = SuiteResult::new("complete-intersection presentation");
    for (n, trivial) in [(3, true), (5, true), (7, true), (4, false), (6, false)] {
        let ci = ci_presentation(n, &[2], &[], trivial)?;
        let space = Space::quadric(n)?;
        let stated = &stated_presentations(space, relqh_core::geometry::Side::Relative)[0].presentation;
        let mut a: Vec<String> = ci.relations.iter().map(ToString::to_string).collect();
        let mut b: Vec<String> = stated.relations.iter().map(ToString::to_string).collect();
        a.sort();
        b.sort();
        res.check(a == b, || format!("n={n}: {a:?} vs {b:?}"));
    }
    for (n, degrees) in [(3, vec![2, 2]), (5, vec![2, 2, 2]), (5, vec![3, 2])] {
        res.check(ci_presentation(n, &degrees, &[], false).is_err(), || format!("n={n} {degrees:?} passed the gate"));
    }
    out.push(res);
    Ok(out)
}

pub fn signs(budget: u32) -> Result<Vec<SuiteResult>> {
    let mut res = SuiteResult::new("sign-changed family");
    let space = Space::quadric(3)?;
    let report = verify_sign_change(space, budget)?;
    res.checked += report.checked;
    res.failures.extend(report.mismatches);
    let flipped = OpenEngine::with_store(
        space,
        Arc::new(Store::new()),
        EngineConfig::default(),
        SignConvention { seed_sign: -1, r: 2 },
    );
    res.check(flipped.open_invariant(1, 3, &[])? == int(-2), || "flipped seed".into());
    res.check(flipped.open_invariant(3, 9, &[])? == int(96), || "flipped (3,9)".into());
    Ok(vec![res])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn multisets_count() {
        assert_eq!(multisets(&[1, 2, 3], 2).len(), 1 + 3 + 6);
    }

    #[test]
    fn quick_suites_pass() {
        for r in axioms(2, 7, 40).unwrap().into_iter().chain(vanishing(1).unwrap()).chain(signs(1).unwrap()) {
            assert!(r.passed(), "{}: {:?}", r.name, r.failures);
        }
    }
}
