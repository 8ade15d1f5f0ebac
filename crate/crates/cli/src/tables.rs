//! Reproduction of the four published tables of open invariants.

use std::collections::BTreeMap;
use std::sync::Arc;

use relqh_core::rational::{parse_fraction, to_fraction_string};
use relqh_core::{EngineConfig, Error, Insertion, OpenEngine, Rational, Result, SignConvention, Space, Store};
use serde::Deserialize;

const FIXTURE: &str = include_str!("../fixtures/tables.json");

/// Which cells of which table to compute.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TableSpec {
    pub table: u8,
    /// Table 1 only: the odd dimensions.
    pub ns: Vec<u32>,
    /// Table 1: m ≤ max_m. Table 4: the row index m ≤ max_m.
    pub max_m: u32,
    /// Tables 2–4: 1 ≤ β ≤ beta_max.
    pub beta_max: u32,
    /// Tables 2–3: 0 ≤ l₃ ≤ max_l3.
    pub max_l3: u32,
}

impl TableSpec {
    /// The full printed range of a table.
    pub fn published(table: u8) -> Result<TableSpec> {
        let (max_m, beta_max, max_l3) = match table {
            1 => (2, 0, 0),
            2 => (0, 5, 5),
            3 => (0, 4, 4),
            4 => (4, 3, 0),
            t => return Err(Error::Invalid(format!("there is no table {t}; choose 1–4"))),
        };
        let ns = if table == 1 { vec![3, 5, 7, 9, 11] } else { vec![] };
        Ok(TableSpec { table, ns, max_m, beta_max, max_l3 })
    }
}

/// One computed cell with its coordinates in the table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cell {
    pub table: u8,
    pub coords: Vec<(&'static str, i64)>,
    pub value: Rational,
}

impl Cell {
    fn coord(&self, name: &str) -> Option<i64> {
        self.coords.iter().find(|(k, _)| *k == name).map(|(_, v)| *v)
    }

    /// The coordinates the published table is indexed by.
    fn position(&self) -> BTreeMap<String, i64> {
        let names: &[&str] = match self.table {
            1 => &["n", "m"],
            4 => &["beta", "m"],
            _ => &["beta", "l3"],
        };
        names.iter().filter_map(|n| Some((n.to_string(), self.coord(n)?))).collect()
    }

    pub fn label(&self) -> String {
        let parts: Vec<String> = self.coords.iter().map(|(k, v)| format!("{k}={v}")).collect();
        format!("table {} [{}]", self.table, parts.join(", "))
    }
}

#[derive(Debug, Deserialize)]
struct FixtureFile {
    cells: Vec<FixtureCell>,
}

#[derive(Debug, Deserialize)]
struct FixtureCell {
    table: u8,
    coords: BTreeMap<String, i64>,
    value: String,
}

/// A table id with the coordinates it is printed under.
pub type Position = (u8, BTreeMap<String, i64>);

/// Published value of every printed cell.
pub fn published_values() -> Result<BTreeMap<Position, Rational>> {
    let file: FixtureFile = serde_json::from_str(FIXTURE).map_err(|e| Error::Parse(e.to_string()))?;
    file.cells.into_iter().map(|c| Ok(((c.table, c.coords), parse_fraction(&c.value)?))).collect()
}

fn repeat(c: Insertion, count: i64) -> impl Iterator<Item = Insertion> {
    std::iter::repeat_n(c, count as usize)
}

/// Compute the requested cells in row order, reporting each as it finishes.
pub fn compute(spec: &TableSpec, store: &Arc<Store>, mut progress: impl FnMut(&Cell)) -> Result<Vec<Cell>> {
    let engine =
        |space: Space| OpenEngine::with_store(space, store.clone(), EngineConfig::default(), SignConvention::default());
    let mut cells = vec![];
    let mut push = |cell: Cell| {
        progress(&cell);
        cells.push(cell);
    };
    match spec.table {
        1 => {
            for &n in &spec.ns {
                if n < 3 || n % 2 == 0 {
                    return Err(Error::Invalid(format!("table 1 covers odd n ≥ 3, not {n}")));
                }
                let e = engine(Space::quadric(n)?);
                for m in 0..=spec.max_m {
                    let (beta, k) = (1 + (n - 1) * m, 3 + 2 * n * m);
                    let value = e.open_invariant(beta, k, &[])?;
                    let coords = vec![("n", n as i64), ("m", m as i64), ("beta", beta as i64), ("k", k as i64)];
                    push(Cell { table: 1, coords, value });
                }
            }
        }
        2 | 3 => {
            let n = spec.table as u32 + 1;
            let e = engine(Space::quadric(n)?);
            for l3 in 0..=spec.max_l3 as i64 {
                for beta in 1..=spec.beta_max {
                    let l2 = n as i64 * beta as i64 - 1 - 2 * l3;
                    let value = if l2 < 0 {
                        Rational::from_integer(0.into())
                    } else {
                        let cs: Vec<Insertion> =
                            repeat(Insertion::g(2), l2).chain(repeat(Insertion::g(3), l3)).collect();
                        e.open_invariant(beta, 1, &cs)?
                    };
                    let coords = vec![("beta", beta as i64), ("l3", l3), ("l2", l2.max(0))];
                    push(Cell { table: spec.table, coords, value });
                }
            }
        }
        4 => {
            let e = engine(Space::quadric(4)?);
            for m in 0..=spec.max_m as i64 {
                for beta in 1..=spec.beta_max {
                    let (l2, ll) = (1 + 2 * m, 4 * beta as i64 - 2 - 2 * m);
                    let value = if ll < 0 {
                        Rational::from_integer(0.into())
                    } else {
                        let cs: Vec<Insertion> =
                            repeat(Insertion::g(2), l2).chain(repeat(Insertion::ExtPdl, ll)).collect();
                        e.open_invariant(beta, 1, &cs)?
                    };
                    let coords = vec![("beta", beta as i64), ("m", m), ("l2", l2), ("lL", ll.max(0))];
                    push(Cell { table: 4, coords, value });
                }
            }
        }
        t => return Err(Error::Invalid(format!("there is no table {t}; choose 1–4"))),
    }
    Ok(cells)
}

/// Cell-by-cell comparison against the published values. Cells outside the
/// printed range are reported as mismatches, never silently accepted.
pub fn check(cells: &[Cell]) -> Result<Vec<String>> {
    let published = published_values()?;
    let mut out = vec![];
    for c in cells {
        match published.get(&(c.table, c.position())) {
            Some(v) if *v == c.value => {}
            Some(v) => out.push(format!("{}: computed {}, published {}", c.label(), c.value, v)),
            None => out.push(format!("{}: no published value", c.label())),
        }
    }
    Ok(out)
}

pub fn to_csv(cells: &[Cell]) -> String {
    let mut s = String::new();
    if let Some(first) = cells.first() {
        let header: Vec<&str> = first.coords.iter().map(|(k, _)| *k).collect();
        s.push_str(&format!("table,{},value\n", header.join(",")));
    }
    for c in cells {
        let vals: Vec<String> = c.coords.iter().map(|(_, v)| v.to_string()).collect();
        s.push_str(&format!("{},{},{}\n", c.table, vals.join(","), to_fraction_string(&c.value)));
    }
    s
}

pub fn to_json(cells: &[Cell]) -> serde_json::Value {
    serde_json::Value::Array(
        cells
            .iter()
            .map(|c| {
                let mut obj = serde_json::Map::new();
                obj.insert("table".into(), c.table.into());
                for (k, v) in &c.coords {
                    obj.insert(k.to_string(), (*v).into());
                }
                obj.insert("value".into(), to_fraction_string(&c.value).into());
                serde_json::Value::Object(obj)
            })
            .collect(),
    )
}
