//! Linear combinations of core keys and the relations the recursions solve.

use std::collections::{HashMap, HashSet};

use num::Zero;

use crate::error::{Error, Result};
use crate::key::CoreKey;
use crate::rational::Rational;

/// `constant + Σ coeff·value(key)`: the output of normalizing an invariant.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Linear {
    pub constant: Rational,
    pub terms: Vec<(Rational, CoreKey)>,
}

impl Linear {
    pub fn zero() -> Linear {
        Linear::default()
    }

    pub fn constant(c: Rational) -> Linear {
        Linear { constant: c, terms: vec![] }
    }

    pub fn key(coeff: Rational, key: CoreKey) -> Linear {
        if coeff.is_zero() {
            return Linear::zero();
        }
        Linear { constant: Rational::zero(), terms: vec![(coeff, key)] }
    }

    pub fn is_zero(&self) -> bool {
        self.constant.is_zero() && self.terms.is_empty()
    }

    pub fn scaled(mut self, c: &Rational) -> Linear {
        if c.is_zero() {
            return Linear::zero();
        }
        self.constant *= c;
        for (k, _) in &mut self.terms {
            *k *= c;
        }
        self
    }

    pub fn add_assign(&mut self, other: Linear) {
        self.constant += other.constant;
        for (c, k) in other.terms {
            match self.terms.iter_mut().find(|(_, k2)| *k2 == k) {
                Some((c2, _)) => *c2 += c,
                None => self.terms.push((c, k)),
            }
        }
        self.terms.retain(|(c, _)| !c.is_zero());
    }

    /// Expand `weight · self · other` into products of at most two keys.
    pub fn times(&self, other: &Linear, weight: &Rational, out: &mut Vec<Product>) {
        let mut left: Vec<(Rational, Option<&CoreKey>)> = vec![];
        if !self.constant.is_zero() {
            left.push((self.constant.clone(), None));
        }
        left.extend(self.terms.iter().map(|(c, k)| (c.clone(), Some(k))));
        let mut right: Vec<(Rational, Option<&CoreKey>)> = vec![];
        if !other.constant.is_zero() {
            right.push((other.constant.clone(), None));
        }
        right.extend(other.terms.iter().map(|(c, k)| (c.clone(), Some(k))));
        for (a, ka) in &left {
            for (b, kb) in &right {
                let factors: Vec<CoreKey> = ka.iter().chain(kb.iter()).map(|k| (*k).clone()).collect();
                out.push(Product { coeff: weight * a * b, factors });
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Product {
    pub coeff: Rational,
    pub factors: Vec<CoreKey>,
}

/// `Σ pivot · target + Σ rest = 0`.
#[derive(Clone, Debug)]
pub struct Reduction {
    pub target: CoreKey,
    pub pivot: Vec<Product>,
    pub rest: Vec<Product>,
}

impl Reduction {
    /// Split a vanishing sum of products into the part linear in `target`
    /// and the rest. The target may not appear quadratically.
    pub fn from_relation(target: CoreKey, products: Vec<Product>) -> Result<Reduction> {
        let mut pivot = vec![];
        let mut rest = vec![];
        for mut p in merge(products) {
            let hits = p.factors.iter().filter(|k| **k == target).count();
            match hits {
                0 => rest.push(p),
                1 => {
                    p.factors.retain(|k| *k != target);
                    pivot.push(p);
                }
                _ => return Err(Error::Internal(format!("{target} appears nonlinearly in its own relation"))),
            }
        }
        Ok(Reduction { target, pivot, rest })
    }

    /// All keys the reduction depends on.
    pub fn dependencies(&self) -> Vec<CoreKey> {
        let mut seen: Vec<CoreKey> =
            self.pivot.iter().chain(&self.rest).flat_map(|p| p.factors.iter().cloned()).collect();
        seen.sort();
        seen.dedup();
        seen
    }
}

/// Combine products with identical factor lists.
pub fn merge(products: Vec<Product>) -> Vec<Product> {
    let mut index: HashMap<Vec<CoreKey>, usize> = HashMap::new();
    let mut out: Vec<Product> = vec![];
    for mut p in products {
        p.factors.sort();
        match index.get(&p.factors) {
            Some(&i) => out[i].coeff += p.coeff,
            None => {
                index.insert(p.factors.clone(), out.len());
                out.push(p);
            }
        }
    }
    out.retain(|p| !p.coeff.is_zero());
    out
}

/// Keys whose evaluation is in progress; re-entering one means the
/// recursion order is broken.
#[derive(Default)]
pub struct Ctx {
    in_progress: HashSet<CoreKey>,
}

impl Ctx {
    pub fn enter(&mut self, key: &CoreKey) -> Result<()> {
        if !self.in_progress.insert(key.clone()) {
            return Err(Error::Internal(format!("cyclic dependency through {key}")));
        }
        Ok(())
    }

    pub fn leave(&mut self, key: &CoreKey) {
        self.in_progress.remove(key);
    }
}

fn factor_rank(k: &CoreKey) -> (u8, u32) {
    match k {
        CoreKey::Closed(c) => (0, c.beta.energy()),
        CoreKey::Open(o) => (1, o.beta),
    }
}

/// Σ coeff · Π value(factor), evaluating cheap factors first and skipping a
/// product as soon as one factor vanishes.
pub fn sum_products<F>(products: &[Product], mut value: F) -> Result<Rational>
where
    F: FnMut(&CoreKey) -> Result<Rational>,
{
    let mut total = Rational::zero();
    for p in products {
        let mut order: Vec<&CoreKey> = p.factors.iter().collect();
        order.sort_by_key(|k| factor_rank(k));
        let mut acc = p.coeff.clone();
        for k in order {
            let v = value(k)?;
            if v.is_zero() {
                acc = Rational::zero();
                break;
            }
            acc *= v;
        }
        total += acc;
    }
    Ok(total)
}

/// Solve a reduction given a way to evaluate its dependencies.
pub fn solve<F>(red: &Reduction, mut value: F) -> Result<Rational>
where
    F: FnMut(&CoreKey) -> Result<Rational>,
{
    let pivot = sum_products(&red.pivot, &mut value)?;
    if pivot.is_zero() {
        return Err(Error::Internal(format!("zero pivot while solving for {}", red.target)));
    }
    let rest = sum_products(&red.rest, &mut value)?;
    Ok(-rest / pivot)
}
