use relqh_core::{AbsClass, AbsCurve, Error, Family, Insertion, RelClass, Result, Space};

pub fn space(code: &str, n: u32) -> Result<Space> {
    let family = match code {
        "pn" => Family::ProjSpace,
        "q-odd" => Family::QuadricOdd,
        "q-even" => Family::QuadricEven,
        "q2" => Family::QuadricSurface,
        other => return Err(Error::Invalid(format!("unknown space '{other}' (pn, q-odd, q-even, q2)"))),
    };
    Space::new(family, n)
}

fn tags(csv: &str) -> impl Iterator<Item = &str> {
    csv.split(',').map(str::trim).filter(|t| !t.is_empty())
}

pub fn closed_constraints(csv: &str) -> Result<Vec<AbsClass>> {
    tags(csv).map(AbsClass::from_tag).collect()
}

/// Relative tags g0..gn and diamond; `pdl` is the PD(L) insertion of even quadrics.
pub fn open_constraints(csv: &str) -> Result<Vec<Insertion>> {
    tags(csv)
        .map(|t| match t {
            "pdl" | "PDL" => Ok(Insertion::ExtPdl),
            _ => RelClass::from_tag(t).map(Insertion::Rel),
        })
        .collect()
}

fn numbers(s: &str) -> Result<Vec<u32>> {
    s.split(',')
        .map(|x| x.trim().parse::<u32>().map_err(|_| Error::Invalid(format!("'{x}' is not a nonnegative integer"))))
        .collect()
}

pub fn closed_beta(s: &str, space: Space) -> Result<AbsCurve> {
    match (space.family(), numbers(s)?.as_slice()) {
        (Family::QuadricSurface, [a, b]) => Ok(AbsCurve::Bidegree(*a, *b)),
        (Family::QuadricSurface, _) => Err(Error::Invalid("the surface takes a bidegree A,B".into())),
        (_, [d]) => Ok(AbsCurve::Degree(*d)),
        _ => Err(Error::Invalid(format!("{space} takes a single degree"))),
    }
}

pub fn open_beta(s: &str) -> Result<u32> {
    match numbers(s)?.as_slice() {
        [b] => Ok(*b),
        _ => Err(Error::Invalid("relative degrees are single integers".into())),
    }
}

pub fn u32_list(s: &str) -> Result<Vec<u32>> {
    numbers(s)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_flags() {
        assert_eq!(space("q-odd", 3).unwrap(), Space::quadric(3).unwrap());
        assert!(space("q-odd", 4).is_err());
        assert!(space("cp", 3).is_err());
        assert_eq!(
            open_constraints("g2, pdl,diamond").unwrap(),
            vec![Insertion::g(2), Insertion::ExtPdl, Insertion::DIAMOND]
        );
        assert!(open_constraints("").unwrap().is_empty());
        assert_eq!(closed_constraints("h4,pdl").unwrap(), vec![AbsClass::HPower(4), AbsClass::Pdl]);
        assert_eq!(closed_beta("1,2", Space::quadric(2).unwrap()).unwrap(), AbsCurve::Bidegree(1, 2));
        assert!(closed_beta("1", Space::quadric(2).unwrap()).is_err());
        assert!(open_beta("x").is_err());
    }
}
