//! Sorted multisets with labeled sub-splitting, as needed when extracting
//! coefficients of multiple derivatives of a product of potentials.

use crate::rational::{binomial, Rational};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Multiset<T: Ord + Copy> {
    counts: Vec<(T, u32)>,
}

impl<T: Ord + Copy> Default for Multiset<T> {
    fn default() -> Self {
        Multiset { counts: vec![] }
    }
}

impl<T: Ord + Copy> Multiset<T> {
    pub fn from_items(items: &[T]) -> Self {
        let mut v = items.to_vec();
        v.sort();
        let mut counts: Vec<(T, u32)> = vec![];
        for x in v {
            match counts.last_mut() {
                Some((y, c)) if *y == x => *c += 1,
                _ => counts.push((x, 1)),
            }
        }
        Multiset { counts }
    }

    pub fn len(&self) -> usize {
        self.counts.iter().map(|(_, c)| *c as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.counts.is_empty()
    }

    pub fn to_vec(&self) -> Vec<T> {
        self.counts.iter().flat_map(|(x, c)| std::iter::repeat_n(*x, *c as usize)).collect()
    }

    /// Every way of distributing the items over two labeled sides, grouped by
    /// the resulting pair of multisets, with the number of labeled
    /// assignments giving that pair.
    pub fn splits(&self) -> Vec<(Vec<T>, Vec<T>, Rational)> {
        let mut out = vec![(vec![], vec![], Rational::from_integer(1.into()))];
        for &(x, c) in &self.counts {
            let mut next = Vec::with_capacity(out.len() * (c as usize + 1));
            for (a, b, w) in &out {
                for i in 0..=c {
                    let mut a2 = a.clone();
                    let mut b2 = b.clone();
                    a2.extend(std::iter::repeat_n(x, i as usize));
                    b2.extend(std::iter::repeat_n(x, (c - i) as usize));
                    next.push((a2, b2, w * binomial(c, i)));
                }
            }
            out = next;
        }
        out
    }
}
