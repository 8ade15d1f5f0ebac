use num::Zero;

use super::novikov::NovikovPoly;
use super::presentation::StatedPresentation;
use super::table::{Element, StructureConstants};
use crate::geometry::{Family, Geometry, Side};
use crate::linalg;
use crate::rational::Rational;

/// Outcome of one check suite: how many cases ran and which failed.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Report {
    pub name: String,
    pub checked: usize,
    pub failures: Vec<String>,
}

impl Report {
    fn new(name: impl Into<String>) -> Report {
        Report { name: name.into(), ..Default::default() }
    }

    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok {
            self.failures.push(what());
        }
    }

    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

fn is_zero(e: &Element) -> bool {
    e.iter().all(NovikovPoly::is_zero)
}

fn sub(a: &Element, b: &Element) -> Element {
    a.iter().zip(b).map(|(x, y)| x.sub(y)).collect()
}

pub fn verify_associativity(t: &StructureConstants) -> Report {
    let mut r = Report::new(format!("associativity {} {:?}", t.space, t.side));
    let r_ = t.rank();
    for a in 0..r_ {
        for b in 0..r_ {
            let ab = &t.entries[a][b];
            for c in 0..r_ {
                let left = t.mul(ab, &t.basis(c));
                let right = t.mul(&t.basis(a), &t.entries[b][c]);
                let res = sub(&left, &right);
                r.check(is_zero(&res), || {
                    format!("({}∘{})∘{}: residual {}", t.names[a], t.names[b], t.names[c], t.format(&res))
                });
            }
        }
    }
    r
}

/// deg(c) + μ(T^e) = deg a + deg b for every nonzero coefficient.
pub fn verify_grading(t: &StructureConstants) -> Report {
    let geom = Geometry::new(t.space);
    let mut r = Report::new(format!("grading {} {:?}", t.space, t.side));
    for a in 0..t.rank() {
        for b in 0..t.rank() {
            for (c, poly) in t.entries[a][b].iter().enumerate() {
                for (e, _) in poly.terms() {
                    let lhs = t.degrees[c] as i64 + geom.maslov(e);
                    let rhs = (t.degrees[a] + t.degrees[b]) as i64;
                    r.check(lhs == rhs, || format!("{}∘{} has T^{e}·{}", t.names[a], t.names[b], t.names[c]));
                }
            }
        }
    }
    r
}

pub fn verify_unit(t: &StructureConstants) -> Report {
    let mut r = Report::new(format!("unit {} {:?}", t.space, t.side));
    for a in 0..t.rank() {
        let e = t.basis(a);
        r.check(t.mul(&t.unit(), &e) == e && t.mul(&e, &t.unit()) == e, || format!("unit fails on {}", t.names[a]));
    }
    r
}

fn generator(t: &StructureConstants, name: &str) -> Option<Element> {
    let by = |tag: &str| t.index_of(tag).map(|i| t.basis(i));
    let add = |a: &Element, b: &Element, s: i64| -> Element {
        a.iter().zip(b).map(|(x, y)| x.add(&y.scale(&Rational::from_integer(s.into())))).collect()
    };
    match (t.side, name) {
        (Side::Absolute, "x") => by("h1"),
        (Side::Relative, "x") => by("g1"),
        (Side::Absolute, "y") => by("pdl"),
        (Side::Relative, "y") => by("diamond"),
        (_, "l") => by("l"),
        (_, "ls") => by("ls"),
        (_, "u") => Some(add(&by("l")?, &by("ls")?, 1)),
        (_, "v") => Some(add(&by("l")?, &by("ls")?, -1)),
        _ => None,
    }
}

/// Every stated relation vanishes on the table's own powers of the
/// generators, and the stated monomials form a basis.
pub fn verify_presentation(t: &StructureConstants, stated: &StatedPresentation) -> Report {
    let p = &stated.presentation;
    let mut r = Report::new(format!("presentation {}", p.source));
    let gens: Option<Vec<Element>> = p.variables.iter().map(|v| generator(t, &v.name)).collect();
    let Some(gens) = gens else {
        r.check(false, || "generator missing from the basis".into());
        return r;
    };
    let half_q = t.space.family() == Family::ProjSpace;
    let monomial =
        |exps: &[u32]| -> Element { gens.iter().zip(exps).fold(t.unit(), |acc, (g, e)| t.mul(&acc, &t.pow(g, *e))) };
    for rel in &p.relations {
        let mut acc = t.zero();
        let mut ok = true;
        for term in &rel.terms {
            let e = if half_q {
                term.q_half
            } else if term.q_half % 2 == 0 {
                term.q_half / 2
            } else {
                ok = false;
                break;
            };
            let coeff = NovikovPoly::monomial(term.coeff.clone(), e);
            let m = monomial(&term.exps);
            for (slot, v) in acc.iter_mut().zip(&m) {
                *slot = slot.add(&coeff.mul(v));
            }
        }
        r.check(ok && is_zero(&acc), || format!("{rel} = {}", t.format(&acc)));
    }
    // A basis at T = 0 stays a basis over the Novikov field.
    let m: linalg::Matrix =
        stated.monomial_basis.iter().map(|e| monomial(e).iter().map(NovikovPoly::classical).collect()).collect();
    let n = stated.monomial_basis.len();
    r.check(n == t.rank() && linalg::rank(&m) == n, || "stated monomials do not form a basis".into());
    r
}

/// 𝔞(mem(Γ_a, Γ_b)) = ρ(Γ_a) * ρ(Γ_b), with 𝔞(Γ_⋄) = 0; ρ is injective
/// when [L] ≠ 0 and surjective when [L] = 0.
pub fn verify_homomorphism(abs: &StructureConstants, rel: &StructureConstants) -> Report {
    let geom = Geometry::new(rel.space);
    let mut r = Report::new(format!("homomorphism {}", rel.space));
    let rho: Vec<Vec<Rational>> = geom
        .rel_basis()
        .iter()
        .map(|c| {
            let mut row = vec![Rational::zero(); abs.rank()];
            for (k, a) in geom.rho(*c) {
                row[geom.abs_index(a).expect("basis class")] += k;
            }
            row
        })
        .collect();
    let apply = |e: &Element| -> Element {
        let mut out = abs.zero();
        for (c, poly) in e.iter().enumerate() {
            for (m, k) in rho[c].iter().enumerate() {
                if !k.is_zero() {
                    out[m] = out[m].add(&poly.scale(k));
                }
            }
        }
        out
    };
    for a in 0..rel.rank() {
        for b in 0..rel.rank() {
            let left = apply(&rel.entries[a][b]);
            let right = abs.mul(&apply(&rel.basis(a)), &apply(&rel.basis(b)));
            r.check(left == right, || {
                format!("{},{}: {} vs {}", rel.names[a], rel.names[b], abs.format(&left), abs.format(&right))
            });
        }
    }
    let rank = linalg::rank(&rho);
    if rel.space.lagrangian_trivial() {
        r.check(rank == abs.rank(), || format!("ρ has rank {rank}, not onto"));
        if let Some(d) = rel.index_of("diamond") {
            r.check(rho[d].iter().all(Zero::is_zero), || "y does not map to 0".into());
        }
    } else {
        r.check(rank == rel.rank(), || format!("ρ has rank {rank}, not injective"));
    }
    r
}
