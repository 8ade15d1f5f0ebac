use std::collections::BTreeMap;
use std::fmt;

use num::{One, Signed, Zero};

use crate::rational::Rational;

/// A polynomial in the Novikov variable T, keyed by the exponent of T.
/// On ℙⁿ, T plays the role of q^{1/2}; on quadrics T = q.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct NovikovPoly {
    terms: BTreeMap<u32, Rational>,
}

impl NovikovPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn monomial(c: Rational, e: u32) -> Self {
        let mut p = Self::zero();
        p.add_term(c, e);
        p
    }

    pub fn constant(c: Rational) -> Self {
        Self::monomial(c, 0)
    }

    pub fn add_term(&mut self, c: Rational, e: u32) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(e).or_insert_with(Rational::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&e);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, e: u32) -> Rational {
        self.terms.get(&e).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (u32, &Rational)> {
        self.terms.iter().map(|(e, c)| (*e, c))
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (e, c) in other.terms() {
            out.add_term(c.clone(), e);
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&-Rational::one()))
    }

    pub fn scale(&self, c: &Rational) -> Self {
        let mut out = Self::zero();
        for (e, v) in self.terms() {
            out.add_term(v * c, e);
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for (e1, c1) in self.terms() {
            for (e2, c2) in other.terms() {
                out.add_term(c1 * c2, e1 + e2);
            }
        }
        out
    }

    /// Value at T = 0.
    pub fn classical(&self) -> Rational {
        self.coeff(0)
    }

    /// Render with `name` appended to every term (empty for the unit).
    pub(crate) fn render_terms(&self, name: &str, out: &mut Vec<(bool, String)>) {
        for (e, c) in self.terms() {
            let mut parts = vec![];
            let mag = c.abs();
            let bare = e == 0 && name.is_empty();
            if !mag.is_one() || bare {
                parts.push(mag.to_string());
            }
            match e {
                0 => {}
                1 => parts.push("T".into()),
                _ => parts.push(format!("T^{e}")),
            }
            if !name.is_empty() {
                parts.push(name.to_string());
            }
            out.push((c.is_negative(), parts.join("*")));
        }
    }
}

pub(crate) fn join_signed(terms: &[(bool, String)]) -> String {
    if terms.is_empty() {
        return "0".into();
    }
    let mut s = String::new();
    for (i, (neg, t)) in terms.iter().enumerate() {
        match (i, neg) {
            (0, true) => s.push('-'),
            (0, false) => {}
            (_, true) => s.push_str(" - "),
            (_, false) => s.push_str(" + "),
        }
        s.push_str(t);
    }
    s
}

impl fmt::Display for NovikovPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut terms = vec![];
        self.render_terms("", &mut terms);
        f.write_str(&join_signed(&terms))
    }
}
