//! The two-variable zeta function `Z(T, u) = P(T, u) / ((1 - T)(1 - uT))`.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::bipoly::BiPoly;
use crate::check::CheckReport;
use crate::error::{Error, Result};
use crate::measure::Measure;
use crate::qpoly::{QPoly, Rational};
use crate::strata::StratumTable;
use crate::zeta_one::{symmetric_product_counts, LPolynomial};

/// Numerator `P(T, u)` for a curve of genus `g`; the denominator is always
/// `(1 - T)(1 - uT)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwoVarZeta {
    numerator: BiPoly,
    genus: usize,
}

impl TwoVarZeta {
    pub fn numerator(&self) -> &BiPoly {
        &self.numerator
    }

    pub fn genus(&self) -> usize {
        self.genus
    }

    /// `P_i(u)`, the coefficient of `T^i`.
    pub fn coefficient(&self, i: usize) -> QPoly {
        self.numerator.t_coeff(i)
    }
}

fn int(v: i64) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

/// `G(T, u) = sum_{n <= 2g-2} sum_nu v[n][nu] u^nu T^n`.
pub fn assemble_g(measure: &Measure) -> BiPoly {
    let mut g = BiPoly::zero();
    for (n, row) in measure.values().iter().enumerate() {
        for (nu, v) in row.iter().enumerate() {
            g.add_term(n, nu, v);
        }
    }
    g
}

/// `Q = pic0 ((1 - T) u^g T^(2g-1) - (1 - uT)) + (1 - uT)(1 - T) G`,
/// checked to satisfy `Q(T, 1) = 0` and `Q(0, u) = u - 1`.
pub fn assemble_q(measure: &Measure) -> Result<BiPoly> {
    let g = measure.genus();
    if g == 0 {
        return Err(Error::Precondition("Q is only assembled for genus at least 1".into()));
    }
    let one_t = BiPoly::from_terms(&[(0, 0, 1), (1, 0, -1)]);
    let one_ut = BiPoly::from_terms(&[(0, 0, 1), (1, 1, -1)]);
    let head = one_t.shift(2 * g - 1, g).sub(&one_ut).scale(measure.pic0());
    let q = head.add(&one_ut.mul(&one_t).mul(&assemble_g(measure)));
    if !q.eval_u(&Rational::one()).is_zero() {
        return Err(Error::InvalidMeasure(format!(
            "Q(T, 1) = {} is not zero; a row does not sum to pic0",
            q.eval_u(&Rational::one())
        )));
    }
    let expected = QPoly::new(vec![int(-1), int(1)]);
    if q.eval_t(&Rational::zero()) != expected {
        return Err(Error::InvalidMeasure(format!(
            "Q(0, u) = {} instead of u - 1; the zero-section row is wrong",
            q.eval_t(&Rational::zero()).to_string_in("u")
        )));
    }
    Ok(q)
}

/// `P = Q / (u - 1)`, or `1` in genus 0. The measure is validated first.
pub fn numerator_p(measure: &Measure) -> Result<TwoVarZeta> {
    measure.validate()?;
    let g = measure.genus();
    if g == 0 {
        return Ok(TwoVarZeta {
            numerator: BiPoly::one(),
            genus: 0,
        });
    }
    let q = assemble_q(measure)?;
    let p = q
        .exact_div(&BiPoly::from_terms(&[(0, 0, -1), (0, 1, 1)]))
        .map_err(|e| match e {
            Error::NotDivisible { remainder } => {
                Error::InvalidMeasure(format!("Q is not divisible by u - 1, remainder {remainder}"))
            }
            other => other,
        })?;
    Ok(TwoVarZeta { numerator: p, genus: g })
}

/// `u^g T^(2g) P(1/(Tu), u)`, or `None` when a negative power of `u` appears.
fn dual_transform(p: &BiPoly, g: usize) -> Option<BiPoly> {
    let mut out = BiPoly::zero();
    for (i, j, c) in p.terms() {
        if i > 2 * g || g + j < i {
            return None;
        }
        out.add_term(2 * g - i, g + j - i, c);
    }
    Some(out)
}

/// Each structural property of `P`: constant and leading terms, degree
/// bounds, the coefficientwise functional equation, the value at `T = 1`,
/// and the series identity `u^(g-1) T^(2g-2) Z(1/(Tu), u) = Z(T, u)`.
pub fn verify_functional_equation(z: &TwoVarZeta, measure: &Measure) -> CheckReport {
    let g = z.genus;
    let p = &z.numerator;
    let mut report = CheckReport::new();
    let u_pow = |e: usize| BiPoly::one().shift(0, e).t_coeff(0);
    let p0 = z.coefficient(0);
    report.push("constant_term", p0 == QPoly::one(), format!("P_0 = {}", p0.to_string_in("u")));
    let top = z.coefficient(2 * g);
    report.push(
        "leading_term",
        top == u_pow(g) && p.deg_t() == Some(2 * g),
        format!("P_{} = {}", 2 * g, top.to_string_in("u")),
    );
    let bad_degree: Vec<String> = (0..=2 * g)
        .filter(|&i| z.coefficient(i).degree().is_some_and(|d| 2 * d > 2 + i))
        .map(|i| format!("deg P_{i} = {}", z.coefficient(i).degree().unwrap_or(0)))
        .collect();
    report.push(
        "degree_bound",
        bad_degree.is_empty(),
        if bad_degree.is_empty() {
            "deg P_i <= 1 + i/2 for all i".to_string()
        } else {
            bad_degree.join(", ")
        },
    );
    let bad_fe: Vec<usize> = (0..=g)
        .filter(|&i| z.coefficient(2 * g - i) != z.coefficient(i).mul(&u_pow(g - i)))
        .collect();
    report.push(
        "functional_equation",
        bad_fe.is_empty(),
        if bad_fe.is_empty() {
            "P_{2g-i} = u^(g-i) P_i for all i".to_string()
        } else {
            format!("fails for i in {bad_fe:?}")
        },
    );
    let at_one = p.eval_t(&Rational::one());
    report.push(
        "value_at_one",
        at_one == QPoly::constant(measure.pic0().clone()),
        format!("P(1, u) = {}, pic0 = {}", at_one.to_string_in("u"), measure.pic0()),
    );
    let series = dual_transform(p, g);
    report.push(
        "series_identity",
        series.as_ref() == Some(p),
        match &series {
            Some(s) => format!("u^g T^(2g) P(1/(Tu), u) = {s}"),
            None => "u^g T^(2g) P(1/(Tu), u) is not a polynomial".to_string(),
        },
    );
    report
}

/// `P(T, value)`.
pub fn specialize_u(z: &TwoVarZeta, value: &Rational) -> QPoly {
    z.numerator.eval_u(value)
}

/// `[X^(n)] = sum_nu [Pic^n_nu] (q^nu - 1)/(q - 1)` at the counting level:
/// compares the strata with the symmetric-product counts for `n <= order`.
/// Beyond `2g - 2` every class has `n - g + 1` sections.
pub fn kapranov_identity_check(strata: &StratumTable, l: &LPolynomial, order: usize) -> Result<CheckReport> {
    let g = strata.genus();
    let q = BigInt::from(strata.q());
    let s = symmetric_product_counts(l, order)?;
    let bracket = |nu: usize| -> BigInt { (0..nu as u32).map(|i| q.pow(i)).sum() };
    let h = BigInt::from(strata.class_number());
    let mut report = CheckReport::new();
    for (n, s_n) in s.iter().enumerate() {
        let predicted: BigInt = if n + 2 <= 2 * g {
            strata.rows()[n]
                .iter()
                .enumerate()
                .map(|(nu, &b)| BigInt::from(b) * bracket(nu))
                .sum()
        } else {
            &h * bracket(n + 1 - g)
        };
        report.push(
            format!("degree_{n}"),
            &predicted == s_n,
            format!("strata give {predicted}, symmetric product has {s_n}"),
        );
    }
    Ok(report)
}
