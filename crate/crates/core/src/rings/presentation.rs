use std::fmt;

use num::{One, Signed, Zero};
use serde::{Serialize, Serializer};

use super::novikov::join_signed;
use crate::error::{invalid, Result};
use crate::geometry::{Family, Side, Space};
use crate::rational::{frac, int, sign, Rational};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Variable {
    pub name: String,
    pub degree: u32,
}

fn var(name: &str, degree: u32) -> Variable {
    Variable { name: name.into(), degree }
}

/// `coeff · q^{q_half/2} · Π vars^exps`.
#[derive(Clone, Debug, PartialEq)]
pub struct Term {
    pub coeff: Rational,
    pub q_half: u32,
    pub exps: Vec<u32>,
}

/// A relation polynomial over ℚ[q^{1/2}]. Terms keep the order they were
/// written in.
#[derive(Clone, Debug, PartialEq)]
pub struct Poly {
    pub vars: Vec<String>,
    pub terms: Vec<Term>,
}

impl Poly {
    pub fn new(vars: &[Variable]) -> Poly {
        Poly { vars: vars.iter().map(|v| v.name.clone()).collect(), terms: vec![] }
    }

    /// Append a term; `mono` lists (variable name, exponent).
    pub fn term(mut self, coeff: Rational, q_half: u32, mono: &[(&str, u32)]) -> Poly {
        if coeff.is_zero() {
            return self;
        }
        let mut exps = vec![0; self.vars.len()];
        for (name, e) in mono {
            let i = self.vars.iter().position(|v| v == name).expect("declared variable");
            exps[i] += e;
        }
        match self.terms.iter_mut().find(|t| t.q_half == q_half && t.exps == exps) {
            Some(t) => t.coeff += coeff,
            None => self.terms.push(Term { coeff, q_half, exps }),
        }
        self.terms.retain(|t| !t.coeff.is_zero());
        self
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut out = vec![];
        for t in &self.terms {
            let mut parts = vec![];
            let mag = t.coeff.abs();
            let bare = t.q_half == 0 && t.exps.iter().all(|e| *e == 0);
            if !mag.is_one() || bare {
                parts.push(mag.to_string());
            }
            match t.q_half {
                0 => {}
                2 => parts.push("q".into()),
                h if h % 2 == 0 => parts.push(format!("q^{}", h / 2)),
                h => parts.push(format!("q^({h}/2)")),
            }
            for (name, e) in self.vars.iter().zip(&t.exps) {
                match e {
                    0 => {}
                    1 => parts.push(name.clone()),
                    _ => parts.push(format!("{name}^{e}")),
                }
            }
            out.push((t.coeff.is_negative(), parts.join("*")));
        }
        f.write_str(&join_signed(&out))
    }
}

fn relations_as_strings<S: Serializer>(rels: &[Poly], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(rels.iter().map(|p| p.to_string()))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RingPresentation {
    pub variables: Vec<Variable>,
    #[serde(serialize_with = "relations_as_strings")]
    pub relations: Vec<Poly>,
    pub source: String,
}

/// A presentation claimed for a computed ring, with a monomial basis that
/// should span it as a module.
#[derive(Clone, Debug)]
pub struct StatedPresentation {
    pub presentation: RingPresentation,
    pub monomial_basis: Vec<Vec<u32>>,
}

fn powers_of_x(n: u32, nvars: usize) -> Vec<Vec<u32>> {
    (0..=n)
        .map(|j| {
            let mut e = vec![0; nvars];
            e[0] = j;
            e
        })
        .collect()
}

/// The presentations of the absolute or relative ring for one space.
pub fn stated_presentations(space: Space, side: Side) -> Vec<StatedPresentation> {
    let n = space.n();
    let one = || Rational::one();
    let source = |extra: &str| {
        let s = match side {
            Side::Absolute => "absolute",
            Side::Relative => "relative",
        };
        format!("{space} {s}{extra}")
    };
    let x = var("x", 2);
    let with_y = |vars: &[Variable], basis: &mut Vec<Vec<u32>>| {
        let mut e = vec![0; vars.len()];
        e[1] = 1;
        basis.push(e);
    };
    let mut out = vec![];
    match (space.family(), side) {
        (Family::QuadricOdd, Side::Absolute) => {
            let vars = vec![x];
            let r = Poly::new(&vars).term(one(), 0, &[("x", n + 1)]).term(int(-4), 2, &[("x", 1)]);
            out.push((vars, vec![r], powers_of_x(n, 1), source("")));
        }
        (Family::QuadricOdd, Side::Relative) => {
            let vars = vec![x, var("y", n + 1)];
            let rels = vec![
                Poly::new(&vars).term(one(), 0, &[("x", n + 1)]).term(int(-4), 2, &[("x", 1)]),
                Poly::new(&vars).term(one(), 0, &[("x", 1), ("y", 1)]),
                Poly::new(&vars).term(one(), 0, &[("y", 2)]),
            ];
            let mut basis = powers_of_x(n, 2);
            with_y(&vars, &mut basis);
            out.push((vars, rels, basis, source("")));
        }
        (Family::QuadricEven, Side::Absolute) => {
            let vars = vec![x, var("y", n)];
            let h = (n / 2) as i64;
            let rels = vec![
                Poly::new(&vars).term(one(), 0, &[("x", n + 1)]).term(int(-4), 2, &[("x", 1)]),
                Poly::new(&vars).term(one(), 0, &[("x", 1), ("y", 1)]),
                Poly::new(&vars).term(one(), 0, &[("y", 2)]).term(-sign(h + 1) * int(4), 2, &[]).term(
                    -sign(h),
                    0,
                    &[("x", n)],
                ),
            ];
            let mut basis = powers_of_x(n, 2);
            with_y(&vars, &mut basis);
            out.push((vars, rels, basis, source("")));
        }
        (Family::QuadricEven, Side::Relative) | (Family::QuadricSurface, Side::Relative) => {
            let vars = vec![x];
            let r = Poly::new(&vars).term(one(), 0, &[("x", n + 1)]).term(int(-4), 2, &[("x", 1)]);
            out.push((vars, vec![r], powers_of_x(n, 1), source("")));
        }
        (Family::QuadricSurface, Side::Absolute) => {
            let vars = vec![var("l", 2), var("ls", 2)];
            let rels = vec![
                Poly::new(&vars).term(one(), 0, &[("l", 2)]).term(-one(), 2, &[]),
                Poly::new(&vars).term(one(), 0, &[("ls", 2)]).term(-one(), 2, &[]),
            ];
            let basis = vec![vec![0, 0], vec![1, 0], vec![0, 1], vec![1, 1]];
            out.push((vars, rels, basis, source("")));
            let vars = vec![var("u", 2), var("v", 2)];
            let rels = vec![
                Poly::new(&vars).term(one(), 0, &[("u", 2)]).term(one(), 0, &[("v", 2)]).term(int(-4), 2, &[]),
                Poly::new(&vars).term(one(), 0, &[("u", 1), ("v", 1)]),
            ];
            let basis = vec![vec![0, 0], vec![1, 0], vec![0, 1], vec![2, 0]];
            out.push((vars, rels, basis, source(", u = l + ls, v = l - ls")));
        }
        (Family::ProjSpace, Side::Absolute) => {
            let vars = vec![x];
            let r = Poly::new(&vars).term(one(), 0, &[("x", n + 1)]).term(-sign((n as i64 + 1) / 2), 2, &[]);
            out.push((vars, vec![r], powers_of_x(n, 1), source("")));
        }
        (Family::ProjSpace, Side::Relative) => {
            let vars = vec![x, var("y", n + 1)];
            let rels = vec![
                Poly::new(&vars).term(one(), 0, &[("y", 2)]).term(int(-2), 1, &[("y", 1)]),
                Poly::new(&vars).term(one(), 0, &[("x", n + 1)]).term(-sign((n as i64 + 1) / 2), 2, &[]).term(
                    -sign((n as i64 - 1) / 2) * frac(1, 2),
                    1,
                    &[("y", 1)],
                ),
                Poly::new(&vars).term(one(), 0, &[("x", 1), ("y", 1)]),
            ];
            let mut basis = powers_of_x(n, 2);
            with_y(&vars, &mut basis);
            out.push((vars, rels, basis, source("")));
        }
    }
    out.into_iter()
        .map(|(variables, relations, monomial_basis, source)| StatedPresentation {
            presentation: RingPresentation { variables, relations, source },
            monomial_basis,
        })
        .collect()
}

/// The presentation of a complete intersection of the given degrees, with
/// `pairing` the intersection form on the chosen primitive middle classes.
pub fn ci_presentation(
    n: u32,
    degrees: &[u32],
    pairing: &[Vec<Rational>],
    l_trivial: bool,
) -> Result<RingPresentation> {
    if n < 3 {
        return invalid(format!("dimension {n} < 3"));
    }
    if degrees.is_empty() || degrees.iter().any(|d| *d < 2) {
        return invalid("every defining degree must be at least 2");
    }
    let p = pairing.len();
    if pairing.iter().any(|row| row.len() != p) {
        return invalid("the pairing must be a square matrix");
    }
    if (0..p).any(|i| (0..p).any(|j| pairing[i][j] != pairing[j][i])) {
        return invalid("the pairing must be symmetric");
    }
    let delta: u32 = degrees.iter().map(|d| d - 1).sum();
    let mu = 2 * (n as i64 + 1 - delta as i64);
    if mu <= n as i64 + 1 {
        return invalid(format!("minimal Chern number μ = {mu} must exceed n + 1 = {}", n + 1));
    }
    let d: Rational = degrees.iter().fold(Rational::one(), |acc, dj| acc * int(*dj as i64));
    let ups: Rational = degrees.iter().fold(Rational::one(), |acc, dj| acc * num::pow(int(*dj as i64), *dj as usize));
    let mut vars = vec![var("x", 2)];
    let w: Vec<String> = (1..=p).map(|j| format!("w{j}")).collect();
    vars.extend(w.iter().map(|name| var(name, n)));
    if l_trivial {
        vars.push(var("y", n + 1));
    }
    let one = Rational::one;
    let mut rels = vec![Poly::new(&vars).term(one(), 0, &[("x", n + 1)]).term(-ups.clone(), 2, &[("x", delta)])];
    for j in 0..p {
        for k in j..p {
            let c = &pairing[j][k] / &d;
            rels.push(
                Poly::new(&vars).term(one(), 0, &[(&w[j], 1), (&w[k], 1)]).term(-c.clone(), 0, &[("x", n)]).term(
                    &c * &ups,
                    2,
                    &[("x", delta - 1)],
                ),
            );
        }
    }
    for wj in &w {
        rels.push(Poly::new(&vars).term(one(), 0, &[("x", 1), (wj, 1)]));
    }
    if l_trivial {
        rels.push(Poly::new(&vars).term(one(), 0, &[("y", 2)]));
        rels.push(Poly::new(&vars).term(one(), 0, &[("y", 1), ("x", 1)]));
        for wj in &w {
            rels.push(Poly::new(&vars).term(one(), 0, &[("y", 1), (wj, 1)]));
        }
    }
    let source = format!(
        "complete intersection of degrees ({}) in dimension {n}, {}",
        degrees.iter().map(u32::to_string).collect::<Vec<_>>().join(","),
        if l_trivial { "[L] = 0" } else { "[L] != 0" }
    );
    Ok(RingPresentation { variables: vars, relations: rels, source })
}
