//! Divisor classes of small degree grouped by their number of sections.

use std::collections::{BTreeMap, HashMap};

use num_traits::ToPrimitive;

use crate::curve::HyperellipticModel;
use crate::error::{Error, Result};
use crate::jacobian::{group_add, group_neg, place_to_jacobian, scalar_mul, MumfordRep};
use crate::places::{Place, PlaceTable};
use crate::zeta_one::{class_number, LPolynomial};

/// The class of `jac + degree * inf`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DivisorClassKey {
    pub jac: MumfordRep,
    pub degree: usize,
}

/// Class of `sum mult_i P_i`.
pub fn effective_divisor_class(divisor: &[(&Place, u32)], model: &HyperellipticModel) -> DivisorClassKey {
    let mut jac = MumfordRep::identity();
    let mut degree = 0;
    for &(place, mult) in divisor {
        let j = place_to_jacobian(place, model);
        jac = group_add(&jac, &scalar_mul(&j, &mult.into(), model), model);
        degree += place.degree * mult as usize;
    }
    DivisorClassKey { jac, degree }
}

/// `K - D` with the canonical class `K = (2g - 2) inf`.
pub fn dual_class_key(key: &DivisorClassKey, model: &HyperellipticModel) -> Result<DivisorClassKey> {
    let top = 2 * model.genus() - 2;
    if key.degree > top {
        return Err(Error::InvalidArgument(format!(
            "class degree {} is outside 0..={top}",
            key.degree
        )));
    }
    Ok(DivisorClassKey {
        jac: group_neg(&key.jac, model),
        degree: top - key.degree,
    })
}

/// `b[n][nu]`: number of degree-`n` classes with exactly `nu` independent
/// sections, `0 <= n <= 2g - 2`, `0 <= nu <= g`.
#[derive(Clone, Debug)]
pub struct StratumTable {
    genus: usize,
    q: u64,
    class_number: u64,
    entries: Vec<Vec<u64>>,
    /// `h0` of every class that has an effective representative.
    sections: BTreeMap<DivisorClassKey, u32>,
}

impl StratumTable {
    pub fn genus(&self) -> usize {
        self.genus
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn class_number(&self) -> u64 {
        self.class_number
    }

    pub fn rows(&self) -> &[Vec<u64>] {
        &self.entries
    }

    /// `b[n][nu]`, zero outside the table.
    pub fn entry(&self, n: isize, nu: isize) -> u64 {
        if n < 0 || nu < 0 {
            return 0;
        }
        self.entries
            .get(n as usize)
            .and_then(|row| row.get(nu as usize))
            .copied()
            .unwrap_or(0)
    }

    /// `h0` of a class of degree `0..=2g-2`.
    pub fn h0(&self, key: &DivisorClassKey) -> u32 {
        self.sections.get(key).copied().unwrap_or(0)
    }

    /// Row sums, zero section, duality, Clifford and Riemann-Roch vanishing.
    pub fn check_invariants(&self) -> Result<()> {
        let g = self.genus as isize;
        let fail = |what: String| Err(Error::Stratification(what));
        for (n, row) in self.entries.iter().enumerate() {
            let sum: u64 = row.iter().sum();
            if sum != self.class_number {
                return fail(format!("row {n} sums to {sum}, class number is {}", self.class_number));
            }
        }
        if self.entry(0, 1) != 1 || (2..=g).any(|nu| self.entry(0, nu) != 0) {
            return fail("degree-0 row must be a single class with one section".into());
        }
        for n in 0..=(2 * g - 2) {
            for nu in 0..=g {
                let b = self.entry(n, nu);
                let dual = self.entry(2 * g - 2 - n, nu - n + g - 1);
                if b != dual {
                    return fail(format!("duality fails at (n, nu) = ({n}, {nu}): {b} vs {dual}"));
                }
                let clifford = nu >= 1.max(n - g + 2) && 2 * nu > n + 2;
                if clifford && b != 0 {
                    return fail(format!("Clifford vanishing fails at ({n}, {nu})"));
                }
                if nu < 0.max(n - g + 1) && b != 0 {
                    return fail(format!("Riemann-Roch floor fails at ({n}, {nu})"));
                }
            }
        }
        Ok(())
    }

    /// `h0(K - c) = h0(c) - n + g - 1` for every class `c`, given the full
    /// list of Jacobian elements.
    pub fn check_class_duality(&self, elements: &[MumfordRep], model: &HyperellipticModel) -> Result<()> {
        let g = self.genus as i64;
        for n in 0..=(2 * self.genus - 2) {
            for jac in elements {
                let key = DivisorClassKey { jac: jac.clone(), degree: n };
                let dual = dual_class_key(&key, model)?;
                let (a, b) = (self.h0(&key) as i64, self.h0(&dual) as i64);
                if b != a - n as i64 + g - 1 {
                    return Err(Error::Stratification(format!(
                        "h0 = {a} for {} in degree {n} but its dual has h0 = {b}",
                        jac.encode(model)
                    )));
                }
            }
        }
        Ok(())
    }
}

/// `nu >= 1` with `1 + q + ... + q^(nu - 1) = count`.
fn sections_from_count(count: u64, q: u64) -> Option<u32> {
    let (mut nu, mut total, mut power) = (0u32, 0u64, 1u64);
    while total < count {
        total = total.checked_add(power)?;
        power = power.checked_mul(q)?;
        nu += 1;
    }
    (total == count && nu >= 1).then_some(nu)
}

/// Number of effective divisors in each class of degree `0..=max_n`.
///
/// Places are added one at a time with unbounded multiplicity, degree by
/// degree, so every multiset of places is counted exactly once.
pub fn effective_class_counts(
    model: &HyperellipticModel,
    places: &PlaceTable,
    max_n: usize,
) -> Result<Vec<HashMap<MumfordRep, u64>>> {
    if places.max_degree() < max_n {
        return Err(Error::Precondition(format!(
            "place table has depth {}, need {max_n}",
            places.max_degree()
        )));
    }
    let mut counts: Vec<HashMap<MumfordRep, u64>> = vec![HashMap::new(); max_n + 1];
    counts[0].insert(MumfordRep::identity(), 1);
    for d in 1..=max_n {
        for place in places.of_degree(d) {
            let j = place_to_jacobian(place, model);
            for k in d..=max_n {
                let shifted: Vec<(MumfordRep, u64)> = counts[k - d]
                    .iter()
                    .map(|(c, &m)| (group_add(c, &j, model), m))
                    .collect();
                for (c, m) in shifted {
                    *counts[k].entry(c).or_insert(0) += m;
                }
            }
        }
    }
    Ok(counts)
}

/// Build and certify the stratum table.
pub fn strata_table(model: &HyperellipticModel, places: &PlaceTable, l: &LPolynomial) -> Result<StratumTable> {
    let g = model.genus();
    let q = model.q();
    let h = class_number(l)
        .to_u64()
        .ok_or_else(|| Error::capacity("class number", u128::MAX, u64::MAX))?;
    let top = 2 * g - 2;
    let counts = effective_class_counts(model, places, top)?;
    let mut entries = vec![vec![0u64; g + 1]; top + 1];
    let mut sections = BTreeMap::new();
    for (n, buckets) in counts.into_iter().enumerate() {
        for (jac, c) in buckets {
            let nu = sections_from_count(c, q).ok_or_else(|| {
                Error::Stratification(format!(
                    "{c} effective divisors in the degree-{n} class {} is not 1 + q + ... + q^(nu-1)",
                    jac.encode(model)
                ))
            })?;
            if nu as usize > g {
                return Err(Error::Stratification(format!(
                    "degree-{n} class {} has {nu} sections, more than the genus",
                    jac.encode(model)
                )));
            }
            entries[n][nu as usize] += 1;
            sections.insert(DivisorClassKey { jac, degree: n }, nu);
        }
        let with_sections: u64 = entries[n][1..].iter().sum();
        if with_sections > h {
            return Err(Error::Stratification(format!(
                "{with_sections} effective classes of degree {n} exceed the class number {h}"
            )));
        }
        entries[n][0] = h - with_sections;
    }
    let table = StratumTable {
        genus: g,
        q,
        class_number: h,
        entries,
        sections,
    };
    table.check_invariants()?;
    Ok(table)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::tests::model;
    use crate::jacobian::jacobian_elements;
    use crate::places::{enumerate_places, PlaceKind};
    use crate::zeta_one::{l_polynomial_from_counts, symmetric_product_counts};

    fn pipeline(spec: &str) -> (HyperellipticModel, PlaceTable, LPolynomial, StratumTable) {
        let m = model(spec);
        let g = m.genus();
        let a: Vec<u64> = (1..=g as u32).map(|e| m.count_points(e, 1_000_000).unwrap()).collect();
        let l = l_polynomial_from_counts(&a, m.q(), g).unwrap();
        let places = enumerate_places(&m, (2 * g - 2).max(1), 1_000_000).unwrap();
        let t = strata_table(&m, &places, &l).unwrap();
        (m, places, l, t)
    }

    #[test]
    fn genus_one_tables() {
        for spec in ["p=3; f=x^3+x", "p=5; f=x^3+x"] {
            let (_, _, _, t) = pipeline(spec);
            assert_eq!(t.rows(), &[vec![3, 1]]);
        }
    }

    #[test]
    fn sections_inverse() {
        assert_eq!(sections_from_count(1, 3), Some(1));
        assert_eq!(sections_from_count(4, 3), Some(2));
        assert_eq!(sections_from_count(13, 3), Some(3));
        assert_eq!(sections_from_count(5, 3), None);
        assert_eq!(sections_from_count(0, 3), None);
    }

    #[test]
    fn genus_two_and_three_tables() {
        for spec in [
            "p=3; f=x^5+1",
            "p=5; f=x^5+x+1",
            "p=3; f=x^5+2*x+1",
            "p=2; f=x^5+x^2+1; h=x^2+x+1",
            "p=3; f=x^7+x+1",
        ] {
            let (m, _, l, t) = pipeline(spec);
            let g = m.genus();
            assert_eq!(t.entry((2 * g - 2) as isize, g as isize), 1, "{spec}");
            let elements = jacobian_elements(&m, 10_000_000).unwrap();
            t.check_class_duality(&elements, &m).unwrap();
            // Each class contributes (q^nu - 1)/(q - 1) divisors.
            let s = symmetric_product_counts(&l, 2 * g - 2).unwrap();
            for (n, row) in t.rows().iter().enumerate() {
                let total: u64 = row
                    .iter()
                    .enumerate()
                    .map(|(nu, b)| b * (0..nu as u32).map(|i| m.q().pow(i)).sum::<u64>())
                    .sum();
                assert_eq!(s[n], total.into(), "{spec} n={n}");
            }
        }
    }

    #[test]
    fn dual_keys() {
        let m = model("p=3; f=x^3+x");
        let id = DivisorClassKey { jac: MumfordRep::identity(), degree: 0 };
        assert_eq!(dual_class_key(&id, &m).unwrap(), id);
        let m2 = model("p=3; f=x^5+1");
        let places = enumerate_places(&m2, 1, 1_000_000).unwrap();
        let p = places
            .of_degree(1)
            .iter()
            .find(|p| matches!(p.kind, PlaceKind::Affine { .. }))
            .unwrap();
        let key = effective_divisor_class(&[(p, 1)], &m2);
        let dual = dual_class_key(&key, &m2).unwrap();
        assert_eq!(dual.degree, 1);
        assert_eq!(dual.jac, group_neg(&key.jac, &m2));
        assert_eq!(dual_class_key(&dual, &m2).unwrap(), key);
        let canonical = DivisorClassKey { jac: MumfordRep::identity(), degree: 2 };
        assert_eq!(dual_class_key(&canonical, &m2).unwrap().degree, 0);
        assert!(dual_class_key(&DivisorClassKey { jac: MumfordRep::identity(), degree: 3 }, &m2).is_err());
    }

    #[test]
    fn divisor_classes() {
        let m = model("p=3; f=x^5+1");
        assert_eq!(
            effective_divisor_class(&[], &m),
            DivisorClassKey { jac: MumfordRep::identity(), degree: 0 }
        );
        let places = enumerate_places(&m, 1, 1_000_000).unwrap();
        let affine: Vec<&Place> = places
            .of_degree(1)
            .iter()
            .filter(|p| matches!(p.kind, PlaceKind::Affine { .. }))
            .collect();
        let key = effective_divisor_class(&[(affine[0], 1), (affine[1], 1)], &m);
        assert_eq!(key.degree, 2);
        assert!(key.jac.is_valid(&m) && key.jac.u.deg() <= 2);
        let doubled = effective_divisor_class(&[(affine[0], 2)], &m);
        let pj = place_to_jacobian(affine[0], &m);
        assert_eq!(doubled.jac, group_add(&pj, &pj, &m));
    }

    #[test]
    fn corrupted_table_is_rejected() {
        let (_, _, _, mut t) = pipeline("p=3; f=x^5+1");
        t.entries[2][1] += 1;
        t.entries[2][2] -= 1;
        assert!(matches!(t.check_invariants(), Err(Error::Stratification(_))));
    }
}
