use num::{One, Zero};

use super::novikov::{join_signed, NovikovPoly};
use crate::closed::ClosedEngine;
use crate::error::{Error, Result};
use crate::geometry::{AbsClass, RelClass, Side, Space};
use crate::key::Insertion;
use crate::open::OpenEngine;
use crate::rational::{int, Rational};
use crate::reduction::Ctx;

/// A ring element: one Novikov coefficient per basis class.
pub type Element = Vec<NovikovPoly>;

/// Structure constants of a small quantum product in a fixed basis:
/// `entries[a][b][c]` is the coefficient of basis class c in a∘b.
#[derive(Clone, Debug, PartialEq)]
pub struct StructureConstants {
    pub space: Space,
    pub side: Side,
    pub names: Vec<String>,
    pub degrees: Vec<u32>,
    pub entries: Vec<Vec<Element>>,
}

impl StructureConstants {
    pub fn rank(&self) -> usize {
        self.names.len()
    }

    pub fn zero(&self) -> Element {
        vec![NovikovPoly::zero(); self.rank()]
    }

    pub fn basis(&self, i: usize) -> Element {
        let mut e = self.zero();
        e[i] = NovikovPoly::constant(Rational::one());
        e
    }

    pub fn unit(&self) -> Element {
        self.basis(0)
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn mul(&self, a: &Element, b: &Element) -> Element {
        let mut out = self.zero();
        for (i, ai) in a.iter().enumerate() {
            if ai.is_zero() {
                continue;
            }
            for (j, bj) in b.iter().enumerate() {
                if bj.is_zero() {
                    continue;
                }
                let c = ai.mul(bj);
                for (k, e) in self.entries[i][j].iter().enumerate() {
                    if !e.is_zero() {
                        out[k] = out[k].add(&c.mul(e));
                    }
                }
            }
        }
        out
    }

    pub fn pow(&self, a: &Element, e: u32) -> Element {
        (0..e).fold(self.unit(), |acc, _| self.mul(&acc, a))
    }

    /// e.g. "T^2 - 1/2*T*diamond"; the unit class is left unnamed.
    pub fn format(&self, e: &Element) -> String {
        let mut terms = vec![];
        for (i, c) in e.iter().enumerate() {
            let name = if i == 0 { "" } else { self.names[i].as_str() };
            c.render_terms(name, &mut terms);
        }
        join_signed(&terms)
    }
}

/// Δ_v * Δ_u = Σ_d (−1)^{w_s(d)} T^{ϖ(d)} GW_d(Δ_v, Δ_u, Δ_l) g^{lm} Δ_m.
pub fn small_quantum_table(engine: &ClosedEngine) -> Result<StructureConstants> {
    let geom = engine.geometry();
    let basis = geom.abs_basis().to_vec();
    let rank = basis.len();
    let max_deg = basis.iter().map(|c| geom.abs_degree(*c)).max().unwrap_or(0) as i64;
    // Three insertions of degree ≤ max_deg bound c₁(d).
    let mut curves = vec![];
    for e in 0.. {
        let cs = geom.curves_of_energy(e);
        if cs.iter().all(|d| geom.chern(*d) > max_deg) {
            break;
        }
        curves.extend(cs);
    }
    let g_inv = &geom.pairing().g_inv;
    let mut entries = vec![vec![vec![NovikovPoly::zero(); rank]; rank]; rank];
    for (a, ca) in basis.iter().enumerate() {
        for (b, cb) in basis.iter().enumerate().skip(a) {
            let mut out = vec![NovikovPoly::zero(); rank];
            for d in &curves {
                let s = int(geom.spin_sign(*d));
                let t = geom.varpi(*d);
                for (l, cl) in basis.iter().enumerate() {
                    let v = engine.closed_invariant(*d, &[*ca, *cb, *cl])?;
                    if v.is_zero() {
                        continue;
                    }
                    for (m, slot) in out.iter_mut().enumerate() {
                        let g = &g_inv[l][m];
                        if !g.is_zero() {
                            slot.add_term(&s * &v * g, t);
                        }
                    }
                }
            }
            entries[a][b] = out.clone();
            entries[b][a] = out;
        }
    }
    Ok(StructureConstants {
        space: engine.space(),
        side: Side::Absolute,
        names: basis.iter().map(AbsClass::tag).collect(),
        degrees: basis.iter().map(|c| geom.abs_degree(*c)).collect(),
        entries,
    })
}

/// mem(Γ_v, Γ_u): the closed part over ρ(Γ_m), m ≤ K, plus the Γ_⋄ part
/// Σ_d T^d OGW-bar_{d,0}(Γ_v, Γ_u) when [L] = 0.
pub fn relative_quantum_table(engine: &OpenEngine) -> Result<StructureConstants> {
    let geom = engine.geometry();
    let closed = engine.closed();
    let basis = geom.rel_basis().to_vec();
    let rank = basis.len();
    let ad = geom.adapted();
    let max_deg = basis.iter().map(|c| geom.rel_degree(*c)).max().unwrap_or(0) as i64;
    let n = geom.n() as i64;
    let mut betas = vec![];
    for b in 0.. {
        // n − 3 + μ(β) + 4 ≤ |A| + |B| for k = 0, two insertions; the closed
        // part needs μ(β) ≤ 2·max_deg as well.
        if geom.maslov(b) > 2 * max_deg && geom.maslov(b) + n + 1 > 2 * max_deg {
            break;
        }
        betas.push(b);
    }
    let diamond = basis.iter().position(|c| *c == RelClass::Diamond);
    let mut entries: Vec<Vec<Option<Element>>> = vec![vec![None; rank]; rank];
    for (a, ca) in basis.iter().enumerate() {
        for (b, cb) in basis.iter().enumerate().skip(a) {
            let mut out = vec![NovikovPoly::zero(); rank];
            let (ra, rb) = (geom.rho(*ca), geom.rho(*cb));
            let mut supported = true;
            for &beta in &betas {
                if !ra.is_empty() && !rb.is_empty() {
                    for d in geom.varpi_preimages(beta) {
                        let s = int(geom.spin_sign(d));
                        for (l, vl) in ad.vectors.iter().enumerate() {
                            let lin = closed.normalize_combos(d, &[ra.clone(), rb.clone(), vl.clone()]);
                            if lin.is_zero() {
                                continue;
                            }
                            let v = closed.eval_linear(&lin, &mut Ctx::default())?;
                            if v.is_zero() {
                                continue;
                            }
                            for (m, slot) in out.iter_mut().enumerate().take(ad.k_cut + 1) {
                                let g = &ad.g_inv[l][m];
                                if !g.is_zero() {
                                    slot.add_term(&s * &v * g, beta);
                                }
                            }
                        }
                    }
                }
                if let Some(dm) = diamond {
                    match engine.enhanced_invariant(beta, 0, &[Insertion::Rel(*ca), Insertion::Rel(*cb)]) {
                        Ok(v) => out[dm].add_term(v, beta),
                        Err(Error::Unsupported(_)) => supported = false,
                        Err(e) => return Err(e),
                    }
                }
            }
            if supported {
                entries[a][b] = Some(out.clone());
                entries[b][a] = Some(out);
            }
        }
    }
    // On ℙⁿ the enhanced invariants beyond degree one are out of reach, but
    // Γ₁ generates: mem(Γ_i, ·) = mem(Γ₁, mem(Γ_{i−1}, ·)) by associativity.
    // Rows are rebuilt that way and checked against every direct entry.
    if entries.iter().flatten().any(Option::is_none) {
        let row1: Vec<Element> = entries[1]
            .iter()
            .map(|e| e.clone().ok_or_else(|| Error::Internal("products with Γ₁ must be computable".into())))
            .collect::<Result<_>>()?;
        for i in 2..rank {
            if basis[i] == RelClass::Diamond {
                continue;
            }
            for j in 0..rank {
                let prev = entries[i - 1][j].clone().ok_or_else(|| Error::Internal("row not yet derived".into()))?;
                let mut derived = vec![NovikovPoly::zero(); rank];
                for (k, c) in prev.iter().enumerate() {
                    for (m, e) in row1[k].iter().enumerate() {
                        derived[m] = derived[m].add(&c.mul(e));
                    }
                }
                match &entries[i][j] {
                    Some(direct) if *direct != derived => {
                        return Err(Error::Internal(format!(
                            "mem({},{}) disagrees with its value through Γ₁",
                            basis[i].tag(),
                            basis[j].tag()
                        )))
                    }
                    Some(_) => {}
                    None => {
                        entries[i][j] = Some(derived.clone());
                        entries[j][i] = Some(derived);
                    }
                }
            }
        }
    }
    let entries = entries
        .into_iter()
        .map(|row| row.into_iter().map(|e| e.ok_or_else(|| Error::Internal("incomplete table".into()))).collect())
        .collect::<Result<Vec<Vec<Element>>>>()?;
    Ok(StructureConstants {
        space: engine.space(),
        side: Side::Relative,
        names: basis.iter().map(|c| c.tag()).collect(),
        degrees: basis.iter().map(|c| geom.rel_degree(*c)).collect(),
        entries,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Space;

    #[test]
    fn spot_entries() {
        let q3 = Space::quadric(3).unwrap();
        let abs = small_quantum_table(&ClosedEngine::new(q3)).unwrap();
        let (h1, h3) = (abs.basis(1), abs.basis(3));
        assert_eq!(abs.format(&abs.mul(&h1, &h3)), "2*T*h1");

        let rel = relative_quantum_table(&OpenEngine::new(q3)).unwrap();
        let d = rel.index_of("diamond").unwrap();
        assert_eq!(rel.format(&rel.mul(&rel.basis(3), &rel.basis(d))), "-2*T*diamond");

        let q4 = Space::quadric(4).unwrap();
        let abs = small_quantum_table(&ClosedEngine::new(q4)).unwrap();
        let p = abs.basis(abs.index_of("pdl").unwrap());
        assert_eq!(abs.format(&abs.mul(&p, &p)), "-2*T + h4");
        let rel = relative_quantum_table(&OpenEngine::new(q4)).unwrap();
        let g1 = rel.basis(1);
        assert_eq!(rel.format(&rel.pow(&g1, 5)), "4*T*g1");

        let p3 = Space::projective(3).unwrap();
        let rel = relative_quantum_table(&OpenEngine::new(p3)).unwrap();
        assert_eq!(rel.format(&rel.mul(&rel.basis(1), &rel.basis(3))), "T^2 - 1/2*T*diamond");
    }
}
