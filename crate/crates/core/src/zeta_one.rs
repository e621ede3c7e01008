//! One-variable zeta function: L-polynomial, class number and counts of
//! effective divisors.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::places::PlaceTable;
use crate::qpoly::{QPoly, Rational};
use crate::series::series_expand_rational;

/// `L(T) = sum c_i T^i` of degree `2g`, the numerator of
/// `Z(T) = L(T) / ((1 - T)(1 - qT))`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LPolynomial {
    coeffs: Vec<BigInt>,
    q: u64,
    genus: usize,
}

impl LPolynomial {
    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn genus(&self) -> usize {
        self.genus
    }

    pub fn to_qpoly(&self) -> QPoly {
        QPoly::new(self.coeffs.iter().cloned().map(Rational::from_integer).collect())
    }

    pub fn eval(&self, t: &BigInt) -> BigInt {
        self.coeffs.iter().rev().fold(BigInt::zero(), |acc, c| acc * t + c)
    }

    /// Power sums `s_m = sum alpha_i^m` of the reciprocal roots, `m = 1..=n`.
    fn power_sums(&self, n: usize) -> Vec<BigInt> {
        // m c_m + sum_{j=1}^{m} s_j c_{m-j} = 0, with c_m = 0 beyond 2g.
        let mut s: Vec<BigInt> = vec![BigInt::zero(); n + 1];
        for m in 1..=n {
            let c_m = self.coeffs.get(m).cloned().unwrap_or_default();
            let mut acc = -BigInt::from(m) * c_m;
            for j in 1..m {
                if let Some(c) = self.coeffs.get(m - j) {
                    acc -= &s[j] * c;
                }
            }
            s[m] = acc;
        }
        s
    }

    /// `|X(F_{q^m})| = q^m + 1 - s_m` for `m = 1..=n`.
    pub fn point_counts(&self, n: usize) -> Vec<BigInt> {
        let q = BigInt::from(self.q);
        self.power_sums(n)
            .into_iter()
            .enumerate()
            .skip(1)
            .map(|(m, s)| q.pow(m as u32) + 1 - s)
            .collect()
    }

    /// L-polynomial of the same curve over `F_{q^m}`, whose reciprocal roots
    /// are the `m`-th powers of these.
    pub fn base_change(&self, m: u32) -> Result<LPolynomial> {
        if m == 0 {
            return Err(Error::InvalidArgument("base-change exponent must be at least 1".into()));
        }
        let m = m as usize;
        let all = self.point_counts(self.genus * m);
        let counts: Vec<BigInt> = (1..=self.genus).map(|j| all[j * m - 1].clone()).collect();
        let qm = self
            .q
            .checked_pow(m as u32)
            .ok_or_else(|| Error::capacity("base-changed field order", u128::MAX, u64::MAX))?;
        l_polynomial_from_big_counts(&counts, qm, self.genus)
    }
}

/// Recover `L` from `a_1..a_g` by Newton's identities on the power sums
/// `s_m = q^m + 1 - a_m`, then complete with `c_{2g-i} = q^{g-i} c_i`.
pub fn l_polynomial_from_counts(a: &[u64], q: u64, genus: usize) -> Result<LPolynomial> {
    let a: Vec<BigInt> = a.iter().map(|&v| BigInt::from(v)).collect();
    l_polynomial_from_big_counts(&a, q, genus)
}

fn l_polynomial_from_big_counts(a: &[BigInt], q: u64, genus: usize) -> Result<LPolynomial> {
    if a.len() != genus {
        return Err(Error::InvalidArgument(format!(
            "need exactly {genus} point counts, got {}",
            a.len()
        )));
    }
    let qb = BigInt::from(q);
    let s: Vec<BigInt> = a
        .iter()
        .enumerate()
        .map(|(i, am)| qb.pow(i as u32 + 1) + 1 - am)
        .collect();
    let mut c = vec![BigInt::zero(); 2 * genus + 1];
    c[0] = BigInt::one();
    for m in 1..=genus {
        let mut acc = BigInt::zero();
        for j in 1..=m {
            acc -= &s[j - 1] * &c[m - j];
        }
        let (quot, rem) = acc.div_rem(&BigInt::from(m));
        if !rem.is_zero() {
            return Err(Error::InconsistentCounts(format!(
                "coefficient c_{m} = {acc}/{m} is not an integer"
            )));
        }
        c[m] = quot;
    }
    for i in 0..genus {
        c[2 * genus - i] = qb.pow((genus - i) as u32) * &c[i];
    }
    let g = BigInt::from(genus);
    if &c.get(1).cloned().unwrap_or_default().pow(2) > &(BigInt::from(4) * &g * &g * &qb) {
        return Err(Error::InconsistentCounts(format!(
            "c_1 = {} violates the Weil bound c_1^2 <= 4 g^2 q",
            c[1]
        )));
    }
    Ok(LPolynomial {
        coeffs: c,
        q,
        genus,
    })
}

/// `h = L(1)`.
pub fn class_number(l: &LPolynomial) -> BigInt {
    l.eval(&BigInt::one())
}

/// `s_0..s_N`, the Taylor coefficients of `L(T) / ((1 - T)(1 - qT))`,
/// i.e. the number of effective divisors of each degree.
pub fn symmetric_product_counts(l: &LPolynomial, order: usize) -> Result<Vec<BigInt>> {
    let factors = [Rational::one(), Rational::from_integer(BigInt::from(l.q))];
    series_expand_rational(&l.to_qpoly(), &factors, order)
        .into_iter()
        .enumerate()
        .map(|(n, c)| {
            if !c.is_integer() || c.is_negative() {
                Err(Error::InconsistentCounts(format!(
                    "symmetric-product count s_{n} = {c} is not a nonnegative integer"
                )))
            } else {
                Ok(c.to_integer())
            }
        })
        .collect()
}

/// Number of effective divisors of degree `n`: the `T^n` coefficient of
/// `prod_d (1 - T^d)^(-N_d)` over the places in `table`.
pub fn effective_divisor_count(table: &PlaceTable, n: usize) -> Result<BigInt> {
    Ok(effective_divisor_counts(table, n)?.pop().expect("n + 1 entries"))
}

/// `effective_divisor_count` for every degree `0..=n`.
pub fn effective_divisor_counts(table: &PlaceTable, n: usize) -> Result<Vec<BigInt>> {
    if n > table.max_degree() {
        return Err(Error::Precondition(format!(
            "place table has depth {}, need {n}",
            table.max_degree()
        )));
    }
    let mut series = vec![BigInt::zero(); n + 1];
    series[0] = BigInt::one();
    for d in 1..=n {
        for _ in 0..table.of_degree(d).len() {
            // Multiply by 1 / (1 - T^d).
            for k in d..=n {
                let prev = series[k - d].clone();
                series[k] += prev;
            }
        }
    }
    Ok(series)
}
