//! Invariant keys and their canonical string form.

use std::fmt;

use crate::error::{invalid, Result};
use crate::geometry::{AbsClass, AbsCurve, Family, RelClass, Space};

/// A constraint of an open invariant: a relative class, or PD(L) fed straight
/// into the open-closed relation (even quadrics only).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Insertion {
    Rel(RelClass),
    ExtPdl,
}

impl Insertion {
    pub fn tag(&self) -> String {
        match self {
            Insertion::Rel(r) => r.tag(),
            Insertion::ExtPdl => "PDL".into(),
        }
    }

    pub fn from_tag(tag: &str) -> Result<Insertion> {
        if tag == "PDL" {
            Ok(Insertion::ExtPdl)
        } else {
            RelClass::from_tag(tag).map(Insertion::Rel)
        }
    }

    pub fn g(j: u32) -> Insertion {
        Insertion::Rel(RelClass::HhatPower(j))
    }

    pub const DIAMOND: Insertion = Insertion::Rel(RelClass::Diamond);
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ClosedKey {
    pub space: Space,
    pub beta: AbsCurve,
    /// Sorted.
    pub constraints: Vec<AbsClass>,
}

impl ClosedKey {
    pub fn new(space: Space, beta: AbsCurve, constraints: &[AbsClass]) -> ClosedKey {
        let mut c = constraints.to_vec();
        c.sort();
        ClosedKey { space, beta, constraints: c }
    }

    pub fn canonical(&self) -> String {
        let tags: Vec<String> = self.constraints.iter().map(AbsClass::tag).collect();
        format!("{}|C|{}|-|{}|-", self.space, self.beta, tags.join(","))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct OpenKey {
    pub space: Space,
    pub beta: u32,
    pub k: u32,
    /// Sorted.
    pub constraints: Vec<Insertion>,
    pub enhanced: bool,
}

impl OpenKey {
    pub fn new(space: Space, beta: u32, k: u32, constraints: &[Insertion], enhanced: bool) -> OpenKey {
        let mut c = constraints.to_vec();
        c.sort();
        OpenKey { space, beta, k, constraints: c, enhanced }
    }

    pub fn canonical(&self) -> String {
        let tags: Vec<String> = self.constraints.iter().map(Insertion::tag).collect();
        let e = if self.enhanced { "E" } else { "-" };
        format!("{}|O|{}|{}|{}|{}", self.space, self.beta, self.k, tags.join(","), e)
    }
}

/// Keys the recursions actually solve for (everything else is settled by
/// normalization).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CoreKey {
    Closed(ClosedKey),
    Open(OpenKey),
}

impl CoreKey {
    pub fn canonical(&self) -> String {
        match self {
            CoreKey::Closed(k) => k.canonical(),
            CoreKey::Open(k) => k.canonical(),
        }
    }

    pub fn parse(s: &str) -> Result<CoreKey> {
        let parts: Vec<&str> = s.split('|').collect();
        if parts.len() != 6 {
            return invalid(format!("malformed key {s:?}"));
        }
        let (fam, n) =
            parts[0].split_once(':').ok_or_else(|| crate::Error::Invalid(format!("malformed space in {s:?}")))?;
        let n: u32 = n.parse().map_err(|_| crate::Error::Invalid(format!("bad dimension in {s:?}")))?;
        let space = Space::new(Family::from_code(fam)?, n)?;
        let nums = |t: &str| -> Result<Vec<u32>> {
            t.split(',')
                .map(|x| x.parse::<u32>().map_err(|_| crate::Error::Invalid(format!("bad number {x:?}"))))
                .collect()
        };
        let tags: Vec<&str> = if parts[4].is_empty() { vec![] } else { parts[4].split(',').collect() };
        let key = match parts[1] {
            "C" => {
                let b = nums(parts[2])?;
                let beta = match b.as_slice() {
                    [d] => AbsCurve::Degree(*d),
                    [a, c] => AbsCurve::Bidegree(*a, *c),
                    _ => return invalid(format!("bad curve class in {s:?}")),
                };
                let cs = tags.iter().map(|t| AbsClass::from_tag(t)).collect::<Result<Vec<_>>>()?;
                CoreKey::Closed(ClosedKey::new(space, beta, &cs))
            }
            "O" => {
                let beta = nums(parts[2])?;
                let k = nums(parts[3])?;
                if beta.len() != 1 || k.len() != 1 {
                    return invalid(format!("bad open key {s:?}"));
                }
                let cs = tags.iter().map(|t| Insertion::from_tag(t)).collect::<Result<Vec<_>>>()?;
                CoreKey::Open(OpenKey::new(space, beta[0], k[0], &cs, parts[5] == "E"))
            }
            _ => return invalid(format!("unknown key kind in {s:?}")),
        };
        if key.canonical() != s {
            return invalid(format!("key {s:?} is not in canonical form"));
        }
        Ok(key)
    }
}

impl fmt::Display for CoreKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.canonical())
    }
}
