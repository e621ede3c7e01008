//! Rational-valued measures on the strata of the Picard scheme.

use std::fmt::Write as _;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::curve::HyperellipticModel;
use crate::error::{Error, Result};
use crate::places::enumerate_places;
use crate::qpoly::Rational;
use crate::strata::{strata_table, StratumTable};
use crate::zeta_one::{class_number, l_polynomial_from_counts, LPolynomial};

/// Values `v[n][nu]` for `0 <= n <= 2g - 2`, `0 <= nu <= g`, the measure of
/// `Pic^0`, and the measure of the affine line when known.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Measure {
    genus: usize,
    values: Vec<Vec<Rational>>,
    pic0: Rational,
    lefschetz: Option<Rational>,
}

impl Measure {
    pub fn genus(&self) -> usize {
        self.genus
    }

    pub fn pic0(&self) -> &Rational {
        &self.pic0
    }

    pub fn lefschetz(&self) -> Option<&Rational> {
        self.lefschetz.as_ref()
    }

    pub fn values(&self) -> &[Vec<Rational>] {
        &self.values
    }

    /// `v[n][nu]`, zero outside the table.
    pub fn value(&self, n: isize, nu: isize) -> Rational {
        if n < 0 || nu < 0 {
            return Rational::zero();
        }
        self.values
            .get(n as usize)
            .and_then(|r| r.get(nu as usize))
            .cloned()
            .unwrap_or_else(Rational::zero)
    }

    /// The genus-0 measure: no strata rows, `Pic^0` a point.
    pub fn genus_zero(lefschetz: Option<Rational>) -> Self {
        Measure {
            genus: 0,
            values: Vec::new(),
            pic0: Rational::one(),
            lefschetz,
        }
    }

    /// A measure that skips validation, for exercising downstream checks.
    #[cfg(test)]
    pub(crate) fn unchecked(genus: usize, values: Vec<Vec<Rational>>, pic0: Rational) -> Self {
        Measure {
            genus,
            values,
            pic0,
            lefschetz: None,
        }
    }

    /// Check every structural constraint, naming the first one violated.
    pub fn validate(&self) -> Result<()> {
        let g = self.genus as isize;
        let bad = |what: String| Err(Error::InvalidMeasure(what));
        if self.genus == 0 {
            if !self.values.is_empty() {
                return bad("genus 0 has no strata rows".into());
            }
            if !self.pic0.is_one() {
                return bad(format!("zero section: genus 0 needs pic0 = 1, got {}", self.pic0));
            }
            return Ok(());
        }
        let rows = 2 * self.genus - 1;
        if self.values.len() != rows || self.values.iter().any(|r| r.len() != self.genus + 1) {
            return bad(format!("table shape must be {rows} rows of {} values", self.genus + 1));
        }
        for (n, row) in self.values.iter().enumerate() {
            let sum: Rational = row.iter().sum();
            if sum != self.pic0 {
                return bad(format!("row sum: row {n} sums to {sum}, pic0 is {}", self.pic0));
            }
        }
        if !self.value(0, 1).is_one() || (2..=g).any(|nu| !self.value(0, nu).is_zero()) {
            return bad("zero section: need v[0][1] = 1 and v[0][nu] = 0 for nu >= 2".into());
        }
        for n in 0..=(2 * g - 2) {
            for nu in 0..=g {
                let v = self.value(n, nu);
                let d = self.value(2 * g - 2 - n, nu - n + g - 1);
                if v != d {
                    return bad(format!(
                        "duality: v[{n}][{nu}] = {v} but v[{}][{}] = {d}",
                        2 * g - 2 - n,
                        nu - n + g - 1
                    ));
                }
                if nu >= 1.max(n - g + 2) && 2 * nu > n + 2 && !v.is_zero() {
                    return bad(format!("Clifford vanishing: v[{n}][{nu}] = {v} must be 0"));
                }
                if nu < 0.max(n - g + 1) && !v.is_zero() {
                    return bad(format!("Riemann-Roch vanishing: v[{n}][{nu}] = {v} must be 0"));
                }
            }
        }
        Ok(())
    }

    /// Render in the measure-table file format.
    pub fn to_table_text(&self) -> String {
        let mut out = format!("g={}; pic0={}\n", self.genus, self.pic0);
        for (n, row) in self.values.iter().enumerate() {
            for (nu, v) in row.iter().enumerate() {
                if !v.is_zero() {
                    let _ = writeln!(out, "{n} {nu} {v}");
                }
            }
        }
        out
    }
}

/// The counting measure: `v[n][nu] = b[n][nu]`, `pic0 = h`, lefschetz `q`.
pub fn counting_measure(strata: &StratumTable) -> Result<Measure> {
    strata.check_invariants()?;
    let int = |v: u64| Rational::from_integer(BigInt::from(v));
    let m = Measure {
        genus: strata.genus(),
        values: strata.rows().iter().map(|r| r.iter().map(|&b| int(b)).collect()).collect(),
        pic0: int(strata.class_number()),
        lefschetz: Some(int(strata.q())),
    };
    m.validate()?;
    Ok(m)
}

/// Everything the counting measure over one field depends on.
#[derive(Clone, Debug)]
pub struct CountingData {
    pub model: HyperellipticModel,
    pub counts: Vec<u64>,
    pub l: LPolynomial,
    pub strata: StratumTable,
    pub measure: Measure,
}

/// Point counts, L-polynomial, stratum table and counting measure of `model`.
pub fn counting_data(model: &HyperellipticModel, max_work: u64) -> Result<CountingData> {
    let g = model.genus();
    let counts: Vec<u64> = (1..=g as u32)
        .map(|m| model.count_points(m, max_work))
        .collect::<Result<_>>()?;
    let l = l_polynomial_from_counts(&counts, model.q(), g)?;
    let places = enumerate_places(model, (2 * g - 2).max(1), max_work)?;
    let strata = strata_table(model, &places, &l)?;
    let measure = counting_measure(&strata)?;
    Ok(CountingData {
        model: model.clone(),
        counts,
        l,
        strata,
        measure,
    })
}

/// Counting measure of the model lifted to `F_{q^m}`. Its `pic0` is checked
/// against `L_m(1)`, where `L_m` has the `m`-th powers of the reciprocal
/// roots of `L`.
pub fn base_change_measure(model: &HyperellipticModel, m: u32, max_work: u64) -> Result<Measure> {
    Ok(base_change_data(model, m, max_work)?.measure)
}

pub fn base_change_data(model: &HyperellipticModel, m: u32, max_work: u64) -> Result<CountingData> {
    let lifted = model.base_change(m, max_work)?;
    let data = counting_data(&lifted, max_work)?;
    if m > 1 {
        let g = model.genus();
        let counts: Vec<u64> = (1..=g as u32)
            .map(|e| model.count_points(e, max_work))
            .collect::<Result<_>>()?;
        let lm = l_polynomial_from_counts(&counts, model.q(), g)?.base_change(m)?;
        if lm != data.l {
            return Err(Error::Consistency(format!(
                "L over F_q^{m} from direct counts differs from the base change of L"
            )));
        }
        let expected = Rational::from_integer(class_number(&lm));
        if data.measure.pic0 != expected {
            return Err(Error::Consistency(format!(
                "base-changed pic0 {} differs from L_m(1) = {expected}",
                data.measure.pic0
            )));
        }
    }
    Ok(data)
}

/// A user-supplied measure, validated.
pub fn table_measure(genus: usize, values: Vec<Vec<Rational>>, pic0: Rational) -> Result<Measure> {
    let m = Measure {
        genus,
        values,
        pic0,
        lefschetz: None,
    };
    m.validate()?;
    Ok(m)
}

fn parse_rational(text: &str, line: usize) -> Result<Rational> {
    let text = text.trim();
    let err = || Error::Syntax {
        line,
        column: 1,
        message: format!("`{text}` is not an integer or a/b rational"),
    };
    let (n, d) = match text.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (text, "1"),
    };
    let n = BigInt::from_str(n).map_err(|_| err())?;
    let d = BigInt::from_str(d).map_err(|_| err())?;
    if d.is_zero() {
        return Err(err());
    }
    Ok(Rational::new(n, d))
}

/// Parse `g=<int>; pic0=<rational>` followed by `n nu value` lines.
/// Entries not listed are zero. Blank lines and `#` comments are ignored.
pub fn parse_measure_table(text: &str) -> Result<Measure> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty());
    let syntax = |line: usize, message: String| Error::Syntax {
        line,
        column: 1,
        message,
    };
    let (hl, header) = lines
        .next()
        .ok_or_else(|| syntax(1, "missing header `g=<int>; pic0=<rational>`".into()))?;
    let (mut genus, mut pic0) = (None, None);
    for field in header.split(';').map(str::trim).filter(|f| !f.is_empty()) {
        match field.split_once('=').map(|(k, v)| (k.trim(), v.trim())) {
            Some(("g", v)) => {
                genus = Some(v.parse::<usize>().map_err(|_| syntax(hl, format!("bad genus `{v}`")))?)
            }
            Some(("pic0", v)) => pic0 = Some(parse_rational(v, hl)?),
            _ => return Err(syntax(hl, format!("unexpected header field `{field}`"))),
        }
    }
    let genus = genus.ok_or_else(|| syntax(hl, "header lacks `g=`".into()))?;
    let pic0 = pic0.ok_or_else(|| syntax(hl, "header lacks `pic0=`".into()))?;
    if genus == 0 {
        if let Some((line, _)) = lines.next() {
            return Err(syntax(line, "genus 0 takes no table entries".into()));
        }
        let m = Measure {
            pic0,
            ..Measure::genus_zero(None)
        };
        m.validate()?;
        return Ok(m);
    }
    let mut values = vec![vec![Rational::zero(); genus + 1]; 2 * genus - 1];
    let mut seen = vec![vec![false; genus + 1]; 2 * genus - 1];
    for (line, body) in lines {
        let parts: Vec<&str> = body.split_whitespace().collect();
        if parts.len() != 3 {
            return Err(syntax(line, "expected `n nu value`".into()));
        }
        let index = |s: &str| s.parse::<usize>().map_err(|_| syntax(line, format!("bad index `{s}`")));
        let (n, nu) = (index(parts[0])?, index(parts[1])?);
        if n > 2 * genus - 2 || nu > genus {
            return Err(syntax(
                line,
                format!("entry ({n}, {nu}) is outside 0..={} x 0..={genus}", 2 * genus - 2),
            ));
        }
        if std::mem::replace(&mut seen[n][nu], true) {
            return Err(syntax(line, format!("entry ({n}, {nu}) given twice")));
        }
        values[n][nu] = parse_rational(parts[2], line)?;
    }
    table_measure(genus, values, pic0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::tests::model;
    use crate::qpoly::{rat, rat_frac};

    fn ints(rows: &[&[i64]]) -> Vec<Vec<Rational>> {
        rows.iter().map(|r| r.iter().map(|&v| rat(v)).collect()).collect()
    }

    #[test]
    fn counting_examples() {
        for (spec, q) in [("p=3; f=x^3+x", 3), ("p=5; f=x^3+x", 5)] {
            let d = counting_data(&model(spec), 1_000_000).unwrap();
            assert_eq!(d.measure.values(), ints(&[&[3, 1]]).as_slice());
            assert_eq!(d.measure.pic0(), &rat(4));
            assert_eq!(d.measure.lefschetz(), Some(&rat(q)));
        }
    }

    #[test]
    fn base_change_example() {
        let m = base_change_measure(&model("p=3; f=x^3+x"), 2, 1_000_000).unwrap();
        assert_eq!(m.pic0(), &rat(16));
        assert_eq!(m.lefschetz(), Some(&rat(9)));
        assert_eq!(m.values(), ints(&[&[15, 1]]).as_slice());
        let same = base_change_measure(&model("p=3; f=x^3+x"), 1, 1_000_000).unwrap();
        assert_eq!(same, counting_data(&model("p=3; f=x^3+x"), 1_000_000).unwrap().measure);
        let g2 = base_change_measure(&model("p=3; f=x^5+1"), 2, 10_000_000).unwrap();
        assert_eq!(g2.genus(), 2);
    }

    #[test]
    fn table_constraints() {
        assert!(table_measure(1, ints(&[&[-1, 1]]), rat(0)).is_ok());
        let zero_section = table_measure(1, ints(&[&[2, 2]]), rat(4)).unwrap_err();
        assert!(zero_section.to_string().contains("zero section"), "{zero_section}");
        let row = table_measure(1, ints(&[&[1, 1]]), rat(3)).unwrap_err();
        assert!(row.to_string().contains("row sum"), "{row}");
        // Genus 2, rows 0..=2: row 2 must mirror row 0.
        let dual = table_measure(2, ints(&[&[3, 1, 0], &[2, 2, 0], &[3, 1, 0]]), rat(4)).unwrap_err();
        assert!(dual.to_string().contains("duality"), "{dual}");
        assert!(table_measure(2, ints(&[&[3, 1, 0], &[2, 2, 0], &[0, 3, 1]]), rat(4)).is_ok());
        assert!(matches!(table_measure(1, ints(&[&[1, 1]]), rat(3)), Err(Error::InvalidMeasure(_))));
    }

    #[test]
    fn parse_tables() {
        let m = parse_measure_table("g=1; pic0=0\n0 0 -1\n0 1 1\n").unwrap();
        assert_eq!(m.values(), ints(&[&[-1, 1]]).as_slice());
        let m = parse_measure_table("# half\ng=1; pic0=3/2\n0 0 1/2\n0 1 1\n").unwrap();
        assert_eq!(m.value(0, 0), rat_frac(1, 2));
        assert_eq!(parse_measure_table(&m.to_table_text()).unwrap(), m);
        assert!(matches!(parse_measure_table("g=1; pic0=4\n0 1 1\n"), Err(Error::InvalidMeasure(_))));
        assert!(matches!(parse_measure_table("g=1\n0 1 1\n"), Err(Error::Syntax { .. })));
        assert!(matches!(
            parse_measure_table("g=1; pic0=1\n0 1 1\n0 5 1\n"),
            Err(Error::Syntax { line: 3, .. })
        ));
        assert!(matches!(parse_measure_table("g=1; pic0=1\n0 1 x\n"), Err(Error::Syntax { .. })));
        assert_eq!(parse_measure_table("g=0; pic0=1\n").unwrap(), Measure::genus_zero(None));
    }
}
