//! Topological data of the supported pairs (X, L): graded bases, the Poincaré
//! pairing, cup products, characteristic numbers of curve classes, and the maps
//! between absolute and relative cohomology.

use std::fmt;

use num::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::linalg::{self, Matrix};
use crate::rational::{frac, int, sign, Rational};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Family {
    /// Odd-dimensional ℙⁿ with L = ℝℙⁿ.
    ProjSpace,
    /// Quadric of odd dimension n ≥ 3 with L a Lagrangian sphere.
    QuadricOdd,
    /// Quadric of even dimension n ≥ 4.
    QuadricEven,
    /// ℙ¹ × ℙ¹ with the antidiagonal sphere.
    QuadricSurface,
}

impl Family {
    pub fn code(self) -> &'static str {
        match self {
            Family::ProjSpace => "PN",
            Family::QuadricOdd => "QO",
            Family::QuadricEven => "QE",
            Family::QuadricSurface => "Q2",
        }
    }

    pub fn from_code(code: &str) -> Result<Family> {
        Ok(match code {
            "PN" => Family::ProjSpace,
            "QO" => Family::QuadricOdd,
            "QE" => Family::QuadricEven,
            "Q2" => Family::QuadricSurface,
            _ => return invalid(format!("unknown family code {code:?}")),
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Space {
    family: Family,
    n: u32,
}

impl Space {
    pub fn new(family: Family, n: u32) -> Result<Space> {
        let ok = match family {
            Family::ProjSpace | Family::QuadricOdd => n >= 3 && n % 2 == 1,
            Family::QuadricEven => n >= 4 && n.is_multiple_of(2),
            Family::QuadricSurface => n == 2,
        };
        if !ok {
            return invalid(format!("dimension {n} not allowed for {family:?}"));
        }
        Ok(Space { family, n })
    }

    pub fn projective(n: u32) -> Result<Space> {
        Space::new(Family::ProjSpace, n)
    }

    /// The quadric of dimension n, whichever family that falls into.
    pub fn quadric(n: u32) -> Result<Space> {
        match n {
            2 => Space::new(Family::QuadricSurface, 2),
            n if n % 2 == 1 => Space::new(Family::QuadricOdd, n),
            n => Space::new(Family::QuadricEven, n),
        }
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    /// Whether [L] = 0 in H_n(X).
    pub fn lagrangian_trivial(&self) -> bool {
        matches!(self.family, Family::ProjSpace | Family::QuadricOdd)
    }

    pub fn is_quadric(&self) -> bool {
        self.family != Family::ProjSpace
    }
}

impl fmt::Display for Space {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.family.code(), self.n)
    }
}

/// Absolute cohomology basis classes. The derived order is the canonical
/// constraint order: h-powers ascending, then the exceptional classes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum AbsClass {
    HPower(u32),
    /// Poincaré dual of [L] on even quadrics.
    Pdl,
    SurfL,
    SurfLStar,
    /// l ∪ l*, the point class of the surface.
    SurfLL,
}

impl AbsClass {
    pub fn tag(&self) -> String {
        match self {
            AbsClass::HPower(j) => format!("h{j}"),
            AbsClass::Pdl => "pdl".into(),
            AbsClass::SurfL => "l".into(),
            AbsClass::SurfLStar => "ls".into(),
            AbsClass::SurfLL => "ll".into(),
        }
    }

    pub fn from_tag(tag: &str) -> Result<AbsClass> {
        Ok(match tag {
            "pdl" => AbsClass::Pdl,
            "l" => AbsClass::SurfL,
            "ls" => AbsClass::SurfLStar,
            "ll" => AbsClass::SurfLL,
            t => match t.strip_prefix('h').map(str::parse::<u32>) {
                Some(Ok(j)) => AbsClass::HPower(j),
                _ => return invalid(format!("unknown absolute class tag {t:?}")),
            },
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum RelClass {
    HhatPower(u32),
    /// y(1), present only when [L] = 0.
    Diamond,
}

impl RelClass {
    pub fn tag(&self) -> String {
        match self {
            RelClass::HhatPower(j) => format!("g{j}"),
            RelClass::Diamond => "diamond".into(),
        }
    }

    pub fn from_tag(tag: &str) -> Result<RelClass> {
        if tag == "diamond" {
            return Ok(RelClass::Diamond);
        }
        match tag.strip_prefix('g').map(str::parse::<u32>) {
            Some(Ok(j)) => Ok(RelClass::HhatPower(j)),
            _ => invalid(format!("unknown relative class tag {tag:?}")),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum AbsCurve {
    Degree(u32),
    Bidegree(u32, u32),
}

impl AbsCurve {
    pub fn is_zero(&self) -> bool {
        matches!(self, AbsCurve::Degree(0) | AbsCurve::Bidegree(0, 0))
    }

    pub fn energy(&self) -> u32 {
        match *self {
            AbsCurve::Degree(d) => d,
            AbsCurve::Bidegree(a, b) => a + b,
        }
    }

    /// All ordered decompositions β = β₁ + β₂ with nonnegative components.
    pub fn splits(&self) -> Vec<(AbsCurve, AbsCurve)> {
        match *self {
            AbsCurve::Degree(d) => (0..=d).map(|a| (AbsCurve::Degree(a), AbsCurve::Degree(d - a))).collect(),
            AbsCurve::Bidegree(a, b) => (0..=a)
                .flat_map(|i| (0..=b).map(move |j| (AbsCurve::Bidegree(i, j), AbsCurve::Bidegree(a - i, b - j))))
                .collect(),
        }
    }

    pub fn components(&self) -> Vec<u32> {
        match *self {
            AbsCurve::Degree(d) => vec![d],
            AbsCurve::Bidegree(a, b) => vec![a, b],
        }
    }
}

impl fmt::Display for AbsCurve {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AbsCurve::Degree(d) => write!(f, "{d}"),
            AbsCurve::Bidegree(a, b) => write!(f, "{a},{b}"),
        }
    }
}

pub type AbsCombo = Vec<(Rational, AbsClass)>;
pub type RelCombo = Vec<(Rational, RelClass)>;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    Absolute,
    Relative,
}

#[derive(Clone, Debug)]
pub struct PairingData {
    pub basis: Vec<AbsClass>,
    pub g: Matrix,
    pub g_inv: Matrix,
}

/// An absolute basis whose first K+1 vectors are ρ(Γ_j), completed by PD(L)
/// when [L] ≠ 0. Open WDVV and the relative product are written in it.
#[derive(Clone, Debug)]
pub struct AdaptedBasis {
    pub vectors: Vec<AbsCombo>,
    /// Index of the last ρ-image vector.
    pub k_cut: usize,
    pub g: Matrix,
    pub g_inv: Matrix,
}

#[derive(Clone, Debug)]
pub struct Geometry {
    space: Space,
    abs_basis: Vec<AbsClass>,
    rel_basis: Vec<RelClass>,
    pairing: PairingData,
    adapted: AdaptedBasis,
}

impl Geometry {
    pub fn new(space: Space) -> Geometry {
        let n = space.n;
        let abs_basis: Vec<AbsClass> = match space.family {
            Family::ProjSpace | Family::QuadricOdd => (0..=n).map(AbsClass::HPower).collect(),
            Family::QuadricEven => (0..=n).map(AbsClass::HPower).chain([AbsClass::Pdl]).collect(),
            Family::QuadricSurface => {
                vec![AbsClass::HPower(0), AbsClass::SurfL, AbsClass::SurfLStar, AbsClass::SurfLL]
            }
        };
        let mut rel_basis: Vec<RelClass> = (0..=n).map(RelClass::HhatPower).collect();
        if space.lagrangian_trivial() {
            rel_basis.push(RelClass::Diamond);
        }
        let mut geom = Geometry {
            space,
            abs_basis,
            rel_basis,
            pairing: PairingData { basis: vec![], g: vec![], g_inv: vec![] },
            adapted: AdaptedBasis { vectors: vec![], k_cut: 0, g: vec![], g_inv: vec![] },
        };
        let g: Matrix = geom
            .abs_basis
            .iter()
            .map(|a| geom.abs_basis.iter().map(|b| geom.integral(&geom.cup(*a, *b))).collect())
            .collect();
        let g_inv = linalg::inverse(&g).expect("Poincaré pairing is nondegenerate");
        geom.pairing = PairingData { basis: geom.abs_basis.clone(), g, g_inv };

        let mut vectors: Vec<AbsCombo> = (0..=n).map(|j| geom.rho(RelClass::HhatPower(j))).collect();
        let k_cut = vectors.len() - 1;
        if let Some(dl) = geom.delta_l() {
            vectors.push(dl);
        }
        let ga: Matrix = vectors.iter().map(|a| vectors.iter().map(|b| geom.pair(a, b)).collect()).collect();
        let ga_inv = linalg::inverse(&ga).expect("adapted basis is a basis");
        geom.adapted = AdaptedBasis { vectors, k_cut, g: ga, g_inv: ga_inv };
        geom
    }

    pub fn space(&self) -> Space {
        self.space
    }

    pub fn n(&self) -> u32 {
        self.space.n
    }

    pub fn abs_basis(&self) -> &[AbsClass] {
        &self.abs_basis
    }

    pub fn rel_basis(&self) -> &[RelClass] {
        &self.rel_basis
    }

    pub fn pairing(&self) -> &PairingData {
        &self.pairing
    }

    pub fn adapted(&self) -> &AdaptedBasis {
        &self.adapted
    }

    /// Basis tags with degrees, in the fixed order.
    pub fn enumerate_basis(&self, side: Side) -> Vec<(String, u32)> {
        match side {
            Side::Absolute => self.abs_basis.iter().map(|c| (c.tag(), self.abs_degree(*c))).collect(),
            Side::Relative => self.rel_basis.iter().map(|c| (c.tag(), self.rel_degree(*c))).collect(),
        }
    }

    pub fn abs_index(&self, c: AbsClass) -> Option<usize> {
        self.abs_basis.iter().position(|b| *b == c)
    }

    pub fn rel_index(&self, c: RelClass) -> Option<usize> {
        self.rel_basis.iter().position(|b| *b == c)
    }

    pub fn abs_degree(&self, c: AbsClass) -> u32 {
        match c {
            AbsClass::HPower(j) => 2 * j,
            AbsClass::Pdl => self.space.n,
            AbsClass::SurfL | AbsClass::SurfLStar => 2,
            AbsClass::SurfLL => 4,
        }
    }

    pub fn rel_degree(&self, c: RelClass) -> u32 {
        match c {
            RelClass::HhatPower(j) => 2 * j,
            RelClass::Diamond => self.space.n + 1,
        }
    }

    pub fn check_abs(&self, c: AbsClass) -> Result<()> {
        if self.abs_index(c).is_some() {
            Ok(())
        } else {
            invalid(format!("class {} is not in the absolute basis of {}", c.tag(), self.space))
        }
    }

    pub fn check_rel(&self, c: RelClass) -> Result<()> {
        if self.rel_index(c).is_some() {
            Ok(())
        } else {
            invalid(format!("class {} is not in the relative basis of {}", c.tag(), self.space))
        }
    }

    pub fn check_curve(&self, beta: AbsCurve) -> Result<()> {
        match (self.space.family, beta) {
            (Family::QuadricSurface, AbsCurve::Bidegree(..)) => Ok(()),
            (Family::QuadricSurface, _) => invalid("surface curve classes are bidegrees"),
            (_, AbsCurve::Degree(_)) => Ok(()),
            _ => invalid("bidegrees exist only on the quadric surface"),
        }
    }

    pub fn zero_curve(&self) -> AbsCurve {
        match self.space.family {
            Family::QuadricSurface => AbsCurve::Bidegree(0, 0),
            _ => AbsCurve::Degree(0),
        }
    }

    /// Absolute classes with energy exactly `e`.
    pub fn curves_of_energy(&self, e: u32) -> Vec<AbsCurve> {
        match self.space.family {
            Family::QuadricSurface => (0..=e).map(|a| AbsCurve::Bidegree(a, e - a)).collect(),
            _ => vec![AbsCurve::Degree(e)],
        }
    }

    /// Cup product of two basis classes, expanded in the basis.
    pub fn cup(&self, a: AbsClass, b: AbsClass) -> AbsCombo {
        use AbsClass::*;
        let n = self.space.n;
        let one = || Rational::one();
        match (a, b) {
            (HPower(0), x) | (x, HPower(0)) => vec![(one(), x)],
            (HPower(i), HPower(j)) => {
                if i + j <= n {
                    vec![(one(), HPower(i + j))]
                } else {
                    vec![]
                }
            }
            (Pdl, Pdl) => vec![(sign(n as i64 / 2), HPower(n))],
            (SurfL, SurfLStar) | (SurfLStar, SurfL) => vec![(one(), SurfLL)],
            _ => vec![],
        }
    }

    pub fn cup_combo(&self, a: &AbsCombo, b: &AbsCombo) -> AbsCombo {
        let mut out: AbsCombo = vec![];
        for (ca, xa) in a {
            for (cb, xb) in b {
                for (c, x) in self.cup(*xa, *xb) {
                    out.push((ca * cb * c, x));
                }
            }
        }
        collect_combo(out)
    }

    /// ∫_X of a combination: only the top class integrates nontrivially.
    pub fn integral(&self, c: &AbsCombo) -> Rational {
        let n = self.space.n;
        let mut acc = Rational::zero();
        for (coef, x) in c {
            let top = match (self.space.family, x) {
                (Family::ProjSpace, AbsClass::HPower(j)) if *j == n => int(1),
                (Family::QuadricOdd | Family::QuadricEven, AbsClass::HPower(j)) if *j == n => int(2),
                (Family::QuadricSurface, AbsClass::SurfLL) => int(1),
                _ => continue,
            };
            acc += coef * top;
        }
        acc
    }

    pub fn triple_integral(&self, a: AbsClass, b: AbsClass, c: AbsClass) -> Rational {
        let ab = self.cup(a, b);
        self.integral(&self.cup_combo(&ab, &vec![(Rational::one(), c)]))
    }

    pub fn pair(&self, a: &AbsCombo, b: &AbsCombo) -> Rational {
        self.integral(&self.cup_combo(a, b))
    }

    /// Coordinates of a combination in the adapted basis.
    pub fn adapted_coords(&self, c: &AbsCombo) -> Vec<Rational> {
        let pairings: Vec<Rational> = self.adapted.vectors.iter().map(|v| self.pair(c, v)).collect();
        self.adapted
            .g_inv
            .iter()
            .map(|row| row.iter().zip(&pairings).fold(Rational::zero(), |acc, (a, b)| acc + a * b))
            .collect()
    }

    pub fn chern(&self, beta: AbsCurve) -> i64 {
        let n = self.space.n as i64;
        match (self.space.family, beta) {
            (Family::ProjSpace, AbsCurve::Degree(d)) => (n + 1) * d as i64,
            (_, AbsCurve::Degree(d)) => n * d as i64,
            (_, AbsCurve::Bidegree(a, b)) => 2 * (a as i64 + b as i64),
        }
    }

    pub fn maslov(&self, beta: u32) -> i64 {
        let n = self.space.n as i64;
        match self.space.family {
            Family::ProjSpace => (n + 1) * beta as i64,
            _ => 2 * n * beta as i64,
        }
    }

    /// (−1)^{w_s(β̂)}.
    pub fn spin_sign(&self, beta: AbsCurve) -> i64 {
        match (self.space.family, beta) {
            (Family::ProjSpace, AbsCurve::Degree(d)) => {
                if ((self.space.n as i64 + 1) / 2 * d as i64) % 2 == 0 {
                    1
                } else {
                    -1
                }
            }
            _ => 1,
        }
    }

    pub fn varpi(&self, beta: AbsCurve) -> u32 {
        match (self.space.family, beta) {
            (Family::ProjSpace, AbsCurve::Degree(d)) => 2 * d,
            (_, AbsCurve::Degree(d)) => d,
            (_, AbsCurve::Bidegree(a, b)) => a + b,
        }
    }

    /// ϖ on arbitrary integral homology classes (components may be negative).
    pub fn varpi_lattice(&self, components: &[i64]) -> i64 {
        match self.space.family {
            Family::ProjSpace => 2 * components[0],
            Family::QuadricSurface => components[0] + components[1],
            _ => components[0],
        }
    }

    pub fn varpi_preimages(&self, beta: u32) -> Vec<AbsCurve> {
        match self.space.family {
            Family::ProjSpace if beta.is_multiple_of(2) => vec![AbsCurve::Degree(beta / 2)],
            Family::ProjSpace => vec![],
            Family::QuadricSurface => (0..=beta).map(|a| AbsCurve::Bidegree(a, beta - a)).collect(),
            _ => vec![AbsCurve::Degree(beta)],
        }
    }

    pub fn in_image_of_varpi(&self, beta: u32) -> bool {
        !self.varpi_preimages(beta).is_empty()
    }

    pub fn divisor_integral_abs(&self, beta: AbsCurve, d: AbsClass) -> Result<Rational> {
        match (d, beta) {
            (AbsClass::HPower(1), AbsCurve::Degree(b)) if self.space.family != Family::QuadricSurface => {
                Ok(int(b as i64))
            }
            (AbsClass::SurfL, AbsCurve::Bidegree(a, _)) => Ok(int(a as i64)),
            (AbsClass::SurfLStar, AbsCurve::Bidegree(_, b)) => Ok(int(b as i64)),
            _ => invalid(format!("{} is not a degree-2 class paired with {beta}", d.tag())),
        }
    }

    pub fn divisor_integral_rel(&self, beta: u32, d: RelClass) -> Result<Rational> {
        match d {
            RelClass::HhatPower(1) => Ok(match self.space.family {
                Family::ProjSpace => frac(beta as i64, 2),
                _ => int(beta as i64),
            }),
            _ => invalid(format!("{} is not a degree-2 relative class", d.tag())),
        }
    }

    pub fn rho(&self, c: RelClass) -> AbsCombo {
        match (self.space.family, c) {
            (_, RelClass::Diamond) => vec![],
            (Family::QuadricSurface, RelClass::HhatPower(0)) => vec![(int(1), AbsClass::HPower(0))],
            (Family::QuadricSurface, RelClass::HhatPower(1)) => {
                vec![(int(1), AbsClass::SurfL), (int(1), AbsClass::SurfLStar)]
            }
            (Family::QuadricSurface, RelClass::HhatPower(2)) => vec![(int(2), AbsClass::SurfLL)],
            (Family::QuadricSurface, RelClass::HhatPower(_)) => vec![],
            (_, RelClass::HhatPower(j)) => vec![(int(1), AbsClass::HPower(j))],
        }
    }

    /// The section of ρ induced by the splitting that kills all ĥ-powers.
    pub fn sigma(&self, c: AbsClass) -> Result<RelCombo> {
        self.check_abs(c)?;
        match (self.space.family, c) {
            (Family::QuadricSurface, AbsClass::HPower(0)) => Ok(vec![(int(1), RelClass::HhatPower(0))]),
            (Family::QuadricSurface, AbsClass::SurfLL) => Ok(vec![(frac(1, 2), RelClass::HhatPower(2))]),
            (_, AbsClass::HPower(j)) if self.space.family != Family::QuadricSurface => {
                Ok(vec![(int(1), RelClass::HhatPower(j))])
            }
            _ => Err(Error::Invalid(format!("no relative lift of {}", c.tag()))),
        }
    }

    /// PD([L]) when [L] ≠ 0.
    pub fn delta_l(&self) -> Option<AbsCombo> {
        match self.space.family {
            Family::QuadricEven => Some(vec![(int(1), AbsClass::Pdl)]),
            // [L] = A₁ − A₂, whose dual is l* − l.
            Family::QuadricSurface => Some(vec![(int(1), AbsClass::SurfLStar), (int(-1), AbsClass::SurfL)]),
            _ => None,
        }
    }

    /// Relative cup product on basis classes.
    pub fn rel_cup(&self, a: RelClass, b: RelClass) -> RelCombo {
        use RelClass::*;
        match (a, b) {
            (HhatPower(i), HhatPower(j)) => {
                if i + j <= self.space.n {
                    vec![(int(1), HhatPower(i + j))]
                } else {
                    vec![]
                }
            }
            (HhatPower(0), Diamond) | (Diamond, HhatPower(0)) => vec![(int(1), Diamond)],
            _ => vec![],
        }
    }

    /// P_ℝ for the splitting fixed by `sigma`: it only sees Γ_⋄.
    pub fn p_real(&self, c: &RelCombo) -> Rational {
        c.iter().filter(|(_, x)| *x == RelClass::Diamond).fold(Rational::zero(), |acc, (k, _)| acc + k)
    }
}

pub(crate) fn collect_combo<C: Ord + Copy>(mut v: Vec<(Rational, C)>) -> Vec<(Rational, C)> {
    v.sort_by_key(|a| a.1);
    let mut out: Vec<(Rational, C)> = vec![];
    for (c, x) in v {
        match out.last_mut() {
            Some((acc, y)) if *y == x => *acc += c,
            _ => out.push((c, x)),
        }
    }
    out.retain(|(c, _)| !c.is_zero());
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn qo(n: u32) -> Geometry {
        Geometry::new(Space::new(Family::QuadricOdd, n).unwrap())
    }
    fn qe(n: u32) -> Geometry {
        Geometry::new(Space::new(Family::QuadricEven, n).unwrap())
    }
    fn pn(n: u32) -> Geometry {
        Geometry::new(Space::new(Family::ProjSpace, n).unwrap())
    }
    fn q2() -> Geometry {
        Geometry::new(Space::new(Family::QuadricSurface, 2).unwrap())
    }

    #[test]
    fn construction_gates() {
        assert!(Space::new(Family::ProjSpace, 4).is_err());
        assert!(Space::new(Family::QuadricOdd, 1).is_err());
        assert!(Space::new(Family::QuadricEven, 2).is_err());
        assert!(Space::new(Family::QuadricSurface, 4).is_err());
        assert!(Space::quadric(5).unwrap().lagrangian_trivial());
        assert!(!Space::quadric(6).unwrap().lagrangian_trivial());
        assert!(!Space::quadric(2).unwrap().lagrangian_trivial());
        assert!(Space::projective(3).unwrap().lagrangian_trivial());
    }

    #[test]
    fn bases_and_degrees() {
        let rel: Vec<u32> = qo(3).enumerate_basis(Side::Relative).into_iter().map(|x| x.1).collect();
        assert_eq!(rel, vec![0, 2, 4, 6, 4]);
        let abs: Vec<u32> = qe(4).enumerate_basis(Side::Absolute).into_iter().map(|x| x.1).collect();
        assert_eq!(abs, vec![0, 2, 4, 6, 8, 4]);
        let s: Vec<(String, u32)> = q2().enumerate_basis(Side::Absolute);
        assert_eq!(s.iter().map(|x| x.1).collect::<Vec<_>>(), vec![0, 2, 2, 4]);
        assert_eq!(s[3].0, "ll");
        assert_eq!(q2().rel_basis().len(), 3);
    }

    #[test]
    fn pairings() {
        let g = qo(3);
        for i in 0..4 {
            for j in 0..4 {
                let want = if i + j == 3 { int(2) } else { int(0) };
                assert_eq!(g.pairing().g[i][j], want);
                let want = if i + j == 3 { frac(1, 2) } else { int(0) };
                assert_eq!(g.pairing().g_inv[i][j], want);
            }
        }
        let e = qe(4);
        assert_eq!(e.pairing().g[5][5], int(2));
        assert_eq!(qe(6).pairing().g[7][7], int(-2));
        for j in 0..5 {
            assert_eq!(e.pairing().g[5][j], int(0));
        }
        let p = pn(3);
        assert_eq!(p.pairing().g[0][3], int(1));
        assert_eq!(p.pairing().g[1][2], int(1));
        assert_eq!(p.pairing().g[1][1], int(0));
        let s = q2();
        assert_eq!(s.pairing().g[1][2], int(1));
        assert_eq!(s.pairing().g[1][1], int(0));
        for geom in [qo(3), qo(5), qe(4), qe(6), pn(3), pn(5), q2()] {
            let pd = geom.pairing();
            assert_eq!(linalg::mul(&pd.g, &pd.g_inv), linalg::identity(pd.basis.len()));
            let ad = geom.adapted();
            assert_eq!(linalg::mul(&ad.g, &ad.g_inv), linalg::identity(ad.vectors.len()));
        }
    }

    #[test]
    fn triple_integrals() {
        use AbsClass::*;
        assert_eq!(qo(5).triple_integral(HPower(1), HPower(2), HPower(2)), int(2));
        assert_eq!(qe(4).triple_integral(Pdl, Pdl, HPower(0)), int(2));
        assert_eq!(qe(4).triple_integral(Pdl, HPower(2), HPower(0)), int(0));
        assert_eq!(pn(3).triple_integral(HPower(0), HPower(1), HPower(1)), int(0));
        assert_eq!(pn(3).triple_integral(HPower(0), HPower(1), HPower(2)), int(1));
        assert_eq!(q2().triple_integral(HPower(0), SurfL, SurfLStar), int(1));
        assert_eq!(q2().triple_integral(HPower(0), SurfL, SurfL), int(0));
    }

    #[test]
    fn triple_integral_symmetric() {
        for geom in [qo(3), qe(4), qe(6), pn(5), q2()] {
            let b = geom.abs_basis().to_vec();
            for &x in &b {
                for &y in &b {
                    for &z in &b {
                        let v = geom.triple_integral(x, y, z);
                        for (p, q, r) in [(x, z, y), (y, x, z), (y, z, x), (z, x, y), (z, y, x)] {
                            assert_eq!(geom.triple_integral(p, q, r), v);
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn characteristic_numbers() {
        assert_eq!(qo(3).chern(AbsCurve::Degree(2)), 6);
        assert_eq!(qo(3).spin_sign(AbsCurve::Degree(2)), 1);
        assert_eq!(pn(3).spin_sign(AbsCurve::Degree(1)), 1);
        assert_eq!(pn(5).spin_sign(AbsCurve::Degree(1)), -1);
        assert_eq!(qo(5).maslov(1), 10);
        assert_eq!(q2().chern(AbsCurve::Bidegree(1, 2)), 6);
        for geom in [qo(3), qe(4), pn(3), pn(5), q2()] {
            for e in 0..=10 {
                for c in geom.curves_of_energy(e) {
                    assert_eq!(geom.maslov(geom.varpi(c)), 2 * geom.chern(c));
                }
            }
        }
    }

    #[test]
    fn varpi_maps() {
        assert_eq!(pn(3).varpi(AbsCurve::Degree(1)), 2);
        assert!(pn(3).varpi_preimages(3).is_empty());
        assert_eq!(
            q2().varpi_preimages(2),
            vec![AbsCurve::Bidegree(0, 2), AbsCurve::Bidegree(1, 1), AbsCurve::Bidegree(2, 0)]
        );
        assert_eq!(qo(3).varpi(AbsCurve::Degree(4)), 4);
        let s = q2();
        for k in -10i64..=10 {
            assert_eq!(s.varpi_lattice(&[k, -k]), 0);
        }
    }

    #[test]
    fn divisor_integrals() {
        assert_eq!(pn(3).divisor_integral_rel(3, RelClass::HhatPower(1)).unwrap(), frac(3, 2));
        assert_eq!(qo(3).divisor_integral_rel(2, RelClass::HhatPower(1)).unwrap(), int(2));
        assert_eq!(q2().divisor_integral_abs(AbsCurve::Bidegree(1, 2), AbsClass::SurfLStar).unwrap(), int(2));
        assert_eq!(q2().divisor_integral_abs(AbsCurve::Bidegree(1, 2), AbsClass::SurfL).unwrap(), int(1));
        assert!(qo(3).divisor_integral_abs(AbsCurve::Degree(1), AbsClass::HPower(2)).is_err());
        assert!(qo(3).divisor_integral_rel(1, RelClass::Diamond).is_err());
    }

    #[test]
    fn rho_and_sigma() {
        assert!(qo(3).rho(RelClass::Diamond).is_empty());
        assert_eq!(qe(4).rho(RelClass::HhatPower(2)), vec![(int(1), AbsClass::HPower(2))]);
        let err = qe(4).sigma(AbsClass::Pdl).unwrap_err();
        assert!(err.to_string().contains("no relative lift"));
        for geom in [qo(3), qe(4), pn(5), q2()] {
            for &c in geom.abs_basis() {
                let Ok(lift) = geom.sigma(c) else { continue };
                let mut back: AbsCombo = vec![];
                for (k, r) in lift {
                    for (k2, a) in geom.rho(r) {
                        back.push((&k * k2, a));
                    }
                }
                assert_eq!(collect_combo(back), vec![(int(1), c)]);
            }
        }
    }

    #[test]
    fn surface_lagrangian_class() {
        let s = q2();
        let dl = s.delta_l().unwrap();
        assert_eq!(s.pair(&dl, &dl), int(-2));
        // PD(L) pairs to zero with the image of ρ.
        for j in 0..=2 {
            assert_eq!(s.pair(&dl, &s.rho(RelClass::HhatPower(j))), int(0));
        }
    }
}
