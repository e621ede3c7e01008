//! Counting absolutely irreducible factors of bivariate rational polynomials.
//!
//! The primary count is the dimension of the solution space of the linear
//! differential system `d/du (g/P) = d/dT (h/P)` with bounded degrees,
//! which equals the number of factors over an algebraic closure for a
//! squarefree input. A branch-lifting count in [`oracle`] cross-checks it.

mod linalg;
mod modp;
mod oracle;

use num_traits::{One, Zero};

pub use oracle::components_factor_count;

use crate::bipoly::BiPoly;
use crate::check::CheckReport;
use crate::error::{Error, Result};
use crate::measure::Measure;
use crate::qpoly::{rat, QPoly, Rational};
use crate::zeta_two::TwoVarZeta;
use linalg::rank;
use oracle::{t_content, u_content};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FactorReport {
    pub abs_factor_count: usize,
    pub squarefree: bool,
    /// A nontrivial factorization over the rationals, when one was found.
    pub witnesses: Option<(BiPoly, BiPoly)>,
}

fn sample_points() -> impl Iterator<Item = Rational> {
    (0..).map(|k: i64| rat(if k % 2 == 0 { -(k / 2) } else { k / 2 + 1 }))
}

/// Whether `p` has no repeated factor of positive degree.
///
/// Specializes `u` at points where the leading `T`-coefficient survives; the
/// discriminant in `u` has bounded degree, so enough failed samples prove a
/// repeated factor.
pub fn squarefree_check(p: &BiPoly) -> bool {
    if p.is_zero() {
        return false;
    }
    if !u_content(p).is_squarefree() {
        return false;
    }
    let m = p.deg_t().unwrap_or(0);
    if m == 0 {
        return true;
    }
    let n = p.deg_u().unwrap_or(0);
    let lead = p.t_coeff(m);
    let limit = n * (2 * m - 1) + 1;
    let mut failures = 0;
    for u0 in sample_points() {
        if lead.eval(&u0).is_zero() {
            continue;
        }
        let f = p.eval_u(&u0);
        if f.gcd(&f.derivative()).is_constant() {
            return true;
        }
        failures += 1;
        if failures >= limit {
            return false;
        }
    }
    unreachable!()
}

/// Factor count from the nullity of the differential system.
pub fn differential_factor_count(p: &BiPoly) -> Result<usize> {
    if !squarefree_check(p) {
        return Err(Error::Precondition("polynomial is not squarefree".into()));
    }
    let c = u_content(p);
    let count = c.degree().unwrap_or(0);
    let core = p.exact_div(&BiPoly::from_u_poly(&c))?;
    let m = core.deg_t().unwrap_or(0);
    let n = core.deg_u().unwrap_or(0);
    if m == 0 {
        return Ok(count);
    }
    if n == 0 {
        return Ok(count + m);
    }
    let pt = core.derivative_t();
    let pu = core.derivative_u();
    let mut columns: Vec<BiPoly> = Vec::new();
    for a in 0..m {
        for b in 0..=n {
            let mono = BiPoly::from_terms(&[(a, b, 1)]);
            columns.push(mono.derivative_u().mul(&core).sub(&mono.mul(&pu)));
        }
    }
    for a in 0..=m {
        for b in 0..n {
            let mono = BiPoly::from_terms(&[(a, b, 1)]);
            columns.push(mono.mul(&pt).sub(&mono.derivative_t().mul(&core)));
        }
    }
    let rows: Vec<Vec<Rational>> = (0..2 * m)
        .flat_map(|i| (0..2 * n).map(move |j| (i, j)))
        .map(|(i, j)| columns.iter().map(|col| col.coeff(i, j)).collect())
        .collect();
    let ncols = columns.len();
    Ok(count + ncols - rank(rows, ncols))
}

/// Differential count, cross-checked against the branch count.
pub fn abs_factor_count(p: &BiPoly) -> Result<FactorReport> {
    let primary = differential_factor_count(p)?;
    let (fallback, witnesses) = components_factor_count(p)?;
    if primary != fallback {
        return Err(Error::Consistency(format!(
            "factor counts disagree for {p}: {primary} vs {fallback}"
        )));
    }
    Ok(FactorReport {
        abs_factor_count: primary,
        squarefree: true,
        witnesses,
    })
}

/// Checks that tie the value at `T = 1` to absolute irreducibility: a
/// vanishing class mass forces `1 - T` to divide `P`, a nonzero one makes
/// `P` absolutely irreducible, and the reversed polynomial carries
/// `u^g (1 - T)` on top with value `pic0` at `T = 1`.
pub fn verify_irreducibility_criterion(z: &TwoVarZeta, measure: &Measure) -> Result<CheckReport> {
    let g = z.genus();
    if g == 0 {
        return Ok(CheckReport::not_applicable());
    }
    let p = z.numerator();
    let pic0 = measure.pic0();
    let mut report = CheckReport::new();
    let one_minus_t = BiPoly::from_terms(&[(0, 0, 1), (1, 0, -1)]);
    if pic0.is_zero() {
        let divides = p.exact_div(&one_minus_t).is_ok();
        report.push("zero_mass_divisible", divides, "1-T divides P when the class mass vanishes");
    } else {
        let rep = abs_factor_count(p)?;
        report.push(
            "absolutely_irreducible",
            rep.abs_factor_count == 1,
            format!("{} absolute factors", rep.abs_factor_count),
        );
    }
    // F(T, u) = T^{2g} P(1/T, u)
    let mut f = BiPoly::zero();
    for (i, j, c) in p.terms() {
        if i <= 2 * g {
            f.add_term(2 * g - i, j, c);
        }
    }
    let fits = p.deg_t().map_or(true, |d| d <= 2 * g);
    report.push("reversal_degree", fits && f.deg_u() == Some(g), format!("u-degree {}", f.deg_u().map_or("none".to_string(), |d| d.to_string())));
    let top = f.u_coeff(g);
    report.push(
        "reversal_top_coefficient",
        top == QPoly::new(vec![Rational::one(), -Rational::one()]),
        format!("u^{g} coefficient {}", top.to_string_in("T")),
    );
    let at_one = f.eval_t(&Rational::one());
    report.push(
        "reversal_value_at_one",
        at_one == QPoly::constant(pic0.clone()),
        format!("F(1,u) = {}", at_one.to_string_in("u")),
    );
    Ok(report)
}

/// Whether `p` has a factor depending on `T` alone or `u` alone.
pub fn has_content(p: &BiPoly) -> bool {
    !u_content(p).is_constant() || !t_content(p).is_constant()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measure::table_measure;
    use crate::zeta_two::numerator_p;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn bp(terms: &[(usize, usize, i64)]) -> BiPoly {
        BiPoly::from_terms(terms)
    }

    #[test]
    fn reference_examples() {
        let irr = bp(&[(0, 0, 1), (1, 0, 3), (1, 1, -1), (2, 1, 1)]);
        assert_eq!(abs_factor_count(&irr).unwrap().abs_factor_count, 1);
        let split = bp(&[(0, 0, 1), (1, 0, -1), (1, 1, -1), (2, 1, 1)]);
        let rep = abs_factor_count(&split).unwrap();
        assert_eq!(rep.abs_factor_count, 2);
        let (a, b) = rep.witnesses.unwrap();
        assert_eq!(a.mul(&b), split);
        assert_eq!(abs_factor_count(&bp(&[(0, 2, 1), (2, 0, -1)])).unwrap().abs_factor_count, 2);
        let square = bp(&[(0, 0, 1), (1, 0, -1)]).pow(2);
        assert!(!squarefree_check(&square));
        assert!(matches!(abs_factor_count(&square), Err(Error::Precondition(_))));
    }

    #[test]
    fn univariate_and_content_cases() {
        assert_eq!(differential_factor_count(&bp(&[(3, 0, 1), (0, 0, -2)])).unwrap(), 3);
        assert_eq!(differential_factor_count(&bp(&[(0, 2, 1), (0, 0, 1)])).unwrap(), 2);
        let p = bp(&[(0, 2, 1), (0, 0, -3)]).mul(&bp(&[(0, 1, 1), (2, 0, 1), (0, 0, 1)]));
        assert_eq!(abs_factor_count(&p).unwrap().abs_factor_count, 3);
        assert!(has_content(&p));
        assert!(!squarefree_check(&bp(&[(1, 2, 1)])));
    }

    #[test]
    fn hidden_conjugate_split() {
        // u^2 - 2 T^2 is irreducible over Q yet splits absolutely.
        let p = bp(&[(0, 2, 1), (2, 0, -2)]);
        let rep = abs_factor_count(&p).unwrap();
        assert_eq!(rep.abs_factor_count, 2);
        assert!(rep.witnesses.is_none());
    }

    fn random_factor(rng: &mut ChaCha8Rng, max_deg: usize) -> BiPoly {
        loop {
            let dt = rng.gen_range(0..=max_deg);
            let du = rng.gen_range(0..=max_deg - dt);
            let mut terms = Vec::new();
            for i in 0..=dt {
                for j in 0..=du.min(max_deg - i) {
                    if rng.gen_bool(0.6) {
                        terms.push((i, j, rng.gen_range(-3i64..=3)));
                    }
                }
            }
            let p = bp(&terms);
            if p.total_degree().unwrap_or(0) >= 1 {
                return p;
            }
        }
    }

    #[test]
    fn random_products_agree() {
        let mut rng = ChaCha8Rng::seed_from_u64(20261019);
        let mut checked = 0;
        let mut attempts = 0;
        while checked < 60 {
            attempts += 1;
            assert!(attempts < 2000);
            let k = rng.gen_range(1..=3);
            let mut p = BiPoly::one();
            for _ in 0..k {
                let left = 6 - p.total_degree().unwrap_or(0);
                if left == 0 {
                    break;
                }
                p = p.mul(&random_factor(&mut rng, left.min(3)));
            }
            if !squarefree_check(&p) {
                continue;
            }
            let a = differential_factor_count(&p).unwrap();
            let (b, w) = components_factor_count(&p).unwrap();
            assert_eq!(a, b, "{p}");
            if let Some((x, y)) = w {
                assert_eq!(x.mul(&y), p);
            }
            checked += 1;
        }
    }

    #[test]
    fn counts_are_multiplicative() {
        let f = bp(&[(0, 2, 1), (1, 0, -1), (0, 0, 1)]);
        let g = bp(&[(2, 0, 1), (0, 1, 1), (1, 1, 2), (0, 0, 3)]);
        let a = abs_factor_count(&f).unwrap().abs_factor_count;
        let b = abs_factor_count(&g).unwrap().abs_factor_count;
        assert_eq!(abs_factor_count(&f.mul(&g)).unwrap().abs_factor_count, a + b);
    }

    #[test]
    fn criterion_on_measures() {
        // Counting measure of a genus-1 curve with three rational points.
        let m = table_measure(1, vec![vec![rat(2), rat(1)]], rat(3)).unwrap();
        let z = numerator_p(&m).unwrap();
        let rep = verify_irreducibility_criterion(&z, &m).unwrap();
        assert!(rep.all_passed(), "{rep:?}");
        assert!(rep.get("absolutely_irreducible").is_some());
        // Zero mass.
        let m = table_measure(1, vec![vec![rat(-1), rat(1)]], rat(0)).unwrap();
        let z = numerator_p(&m).unwrap();
        let rep = verify_irreducibility_criterion(&z, &m).unwrap();
        assert!(rep.get("zero_mass_divisible").unwrap().passed, "{rep:?}");
        let g0 = Measure::genus_zero(None);
        let z = numerator_p(&g0).unwrap();
        assert!(verify_irreducibility_criterion(&z, &g0).unwrap().not_applicable);
    }
}
