//! Univariate polynomials over an explicit finite field.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::field::{FieldDescriptor, FieldElement};

/// Dense polynomial, coefficients low to high, no trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct FqPoly(Vec<FieldElement>);

impl FqPoly {
    pub fn zero() -> Self {
        FqPoly(Vec::new())
    }

    pub fn one() -> Self {
        FqPoly(vec![FieldElement::ONE])
    }

    pub fn constant(c: FieldElement) -> Self {
        Self::from_coeffs(vec![c])
    }

    /// `c * x^n`.
    pub fn monomial(c: FieldElement, n: usize) -> Self {
        let mut v = vec![FieldElement::ZERO; n + 1];
        v[n] = c;
        Self::from_coeffs(v)
    }

    pub fn x() -> Self {
        Self::monomial(FieldElement::ONE, 1)
    }

    pub fn from_coeffs(mut coeffs: Vec<FieldElement>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        FqPoly(coeffs)
    }

    pub fn coeffs(&self) -> &[FieldElement] {
        &self.0
    }

    pub fn coeff(&self, i: usize) -> FieldElement {
        self.0.get(i).copied().unwrap_or(FieldElement::ZERO)
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.0.len() == 1 && self.0[0] == FieldElement::ONE
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    /// Degree with the convention `deg 0 = -1`.
    pub fn deg(&self) -> isize {
        self.0.len() as isize - 1
    }

    pub fn lead(&self) -> FieldElement {
        self.0.last().copied().unwrap_or(FieldElement::ZERO)
    }

    pub fn is_monic(&self) -> bool {
        self.lead() == FieldElement::ONE
    }
}

/// Arithmetic context for [`FqPoly`] over one field.
#[derive(Clone, Debug)]
pub struct FqPolyRing {
    field: FieldDescriptor,
}

impl FqPolyRing {
    pub fn new(field: FieldDescriptor) -> Self {
        FqPolyRing { field }
    }

    pub fn field(&self) -> &FieldDescriptor {
        &self.field
    }

    pub fn add(&self, a: &FqPoly, b: &FqPoly) -> FqPoly {
        let f = &self.field;
        let n = a.0.len().max(b.0.len());
        FqPoly::from_coeffs((0..n).map(|i| f.add(a.coeff(i), b.coeff(i))).collect())
    }

    pub fn sub(&self, a: &FqPoly, b: &FqPoly) -> FqPoly {
        let f = &self.field;
        let n = a.0.len().max(b.0.len());
        FqPoly::from_coeffs((0..n).map(|i| f.sub(a.coeff(i), b.coeff(i))).collect())
    }

    pub fn neg(&self, a: &FqPoly) -> FqPoly {
        FqPoly(a.0.iter().map(|&c| self.field.neg(c)).collect())
    }

    pub fn scale(&self, a: &FqPoly, c: FieldElement) -> FqPoly {
        FqPoly::from_coeffs(a.0.iter().map(|&x| self.field.mul(x, c)).collect())
    }

    pub fn mul(&self, a: &FqPoly, b: &FqPoly) -> FqPoly {
        if a.is_zero() || b.is_zero() {
            return FqPoly::zero();
        }
        let f = &self.field;
        let mut out = vec![FieldElement::ZERO; a.0.len() + b.0.len() - 1];
        for (i, &x) in a.0.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, &y) in b.0.iter().enumerate() {
                out[i + j] = f.add(out[i + j], f.mul(x, y));
            }
        }
        FqPoly::from_coeffs(out)
    }

    /// Quotient and remainder; panics on a zero divisor.
    pub fn div_rem(&self, a: &FqPoly, b: &FqPoly) -> (FqPoly, FqPoly) {
        assert!(!b.is_zero(), "polynomial division by zero");
        let f = &self.field;
        let db = b.0.len() - 1;
        if a.0.len() <= db {
            return (FqPoly::zero(), a.clone());
        }
        let inv_lead = f.inv(b.lead()).expect("nonzero leading coefficient");
        let mut rem = a.0.clone();
        let mut quo = vec![FieldElement::ZERO; a.0.len() - db];
        for i in (0..quo.len()).rev() {
            let c = f.mul(rem[i + db], inv_lead);
            quo[i] = c;
            if c.is_zero() {
                continue;
            }
            for (j, &bj) in b.0.iter().enumerate() {
                rem[i + j] = f.sub(rem[i + j], f.mul(c, bj));
            }
        }
        rem.truncate(db);
        (FqPoly::from_coeffs(quo), FqPoly::from_coeffs(rem))
    }

    pub fn rem(&self, a: &FqPoly, b: &FqPoly) -> FqPoly {
        self.div_rem(a, b).1
    }

    /// Exact quotient; `None` when `b` does not divide `a`.
    pub fn div_exact(&self, a: &FqPoly, b: &FqPoly) -> Option<FqPoly> {
        let (q, r) = self.div_rem(a, b);
        r.is_zero().then_some(q)
    }

    pub fn mul_mod(&self, a: &FqPoly, b: &FqPoly, m: &FqPoly) -> FqPoly {
        self.rem(&self.mul(a, b), m)
    }

    pub fn monic(&self, a: &FqPoly) -> FqPoly {
        if a.is_zero() || a.is_monic() {
            return a.clone();
        }
        let inv = self.field.inv(a.lead()).expect("nonzero leading coefficient");
        self.scale(a, inv)
    }

    /// Monic gcd (zero when both inputs are zero).
    pub fn gcd(&self, a: &FqPoly, b: &FqPoly) -> FqPoly {
        let (mut x, mut y) = (a.clone(), b.clone());
        while !y.is_zero() {
            let r = self.rem(&x, &y);
            x = y;
            y = r;
        }
        self.monic(&x)
    }

    /// `(g, s, t)` with `g = s a + t b` and `g` monic (or zero).
    pub fn xgcd(&self, a: &FqPoly, b: &FqPoly) -> (FqPoly, FqPoly, FqPoly) {
        let (mut r0, mut r1) = (a.clone(), b.clone());
        let (mut s0, mut s1) = (FqPoly::one(), FqPoly::zero());
        let (mut t0, mut t1) = (FqPoly::zero(), FqPoly::one());
        while !r1.is_zero() {
            let (q, r) = self.div_rem(&r0, &r1);
            let s = self.sub(&s0, &self.mul(&q, &s1));
            let t = self.sub(&t0, &self.mul(&q, &t1));
            r0 = std::mem::replace(&mut r1, r);
            s0 = std::mem::replace(&mut s1, s);
            t0 = std::mem::replace(&mut t1, t);
        }
        if r0.is_zero() {
            return (r0, s0, t0);
        }
        let inv = self.field.inv(r0.lead()).expect("nonzero leading coefficient");
        (self.scale(&r0, inv), self.scale(&s0, inv), self.scale(&t0, inv))
    }

    pub fn pow_mod(&self, base: &FqPoly, mut e: u64, m: &FqPoly) -> FqPoly {
        let mut acc = self.rem(&FqPoly::one(), m);
        let mut b = self.rem(base, m);
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul_mod(&acc, &b, m);
            }
            b = self.mul_mod(&b, &b, m);
            e >>= 1;
        }
        acc
    }

    pub fn eval(&self, a: &FqPoly, x: FieldElement) -> FieldElement {
        let f = &self.field;
        a.0.iter()
            .rev()
            .fold(FieldElement::ZERO, |acc, &c| f.add(f.mul(acc, x), c))
    }

    pub fn derivative(&self, a: &FqPoly) -> FqPoly {
        let f = &self.field;
        FqPoly::from_coeffs(
            a.0.iter()
                .enumerate()
                .skip(1)
                .map(|(i, &c)| f.mul(f.from_int(i as i64), c))
                .collect(),
        )
    }

    /// All monic polynomials of degree `d`, in increasing packed order of
    /// the lower coefficients (`c_0 + c_1 q + ...`).
    pub fn monic_polys_of_degree(&self, d: usize) -> impl Iterator<Item = FqPoly> + '_ {
        let q = self.field.order() as u64;
        let total = q.pow(d as u32);
        (0..total).map(move |idx| self.monic_from_index(idx, d))
    }

    /// The polynomial of degree `< d` whose packed coefficient index is `idx`.
    pub fn poly_from_index(&self, mut idx: u64, d: usize) -> FqPoly {
        let q = self.field.order() as u64;
        let mut v = Vec::with_capacity(d);
        for _ in 0..d {
            v.push(self.field.element((idx % q) as u32));
            idx /= q;
        }
        FqPoly::from_coeffs(v)
    }

    /// `x^d` plus the polynomial `poly_from_index(idx, d)`.
    pub fn monic_from_index(&self, mut idx: u64, d: usize) -> FqPoly {
        let q = self.field.order() as u64;
        let mut v = Vec::with_capacity(d + 1);
        for _ in 0..d {
            v.push(self.field.element((idx % q) as u32));
            idx /= q;
        }
        v.push(FieldElement::ONE);
        FqPoly(v)
    }

    /// `x^(q^j) mod m` for `j = 0..=n`.
    fn frobenius_powers(&self, m: &FqPoly, n: usize) -> Vec<FqPoly> {
        let q = self.field.order() as u64;
        let mut out = Vec::with_capacity(n + 1);
        let mut cur = self.rem(&FqPoly::x(), m);
        out.push(cur.clone());
        for _ in 0..n {
            cur = self.pow_mod(&cur, q, m);
            out.push(cur.clone());
        }
        out
    }

    /// Irreducibility by the distinct-degree criterion: no factor of degree
    /// `j <= d/2`, i.e. `gcd(f, x^(q^j) - x) = 1` for those `j`.
    pub fn is_irreducible(&self, f: &FqPoly) -> bool {
        let d = match f.degree() {
            None | Some(0) => return false,
            Some(1) => return true,
            Some(d) => d,
        };
        let q = self.field.order() as u64;
        let x = self.rem(&FqPoly::x(), f);
        let mut cur = x.clone();
        for _ in 1..=d / 2 {
            cur = self.pow_mod(&cur, q, f);
            if !self.gcd(f, &self.sub(&cur, &x)).is_one() {
                return false;
            }
        }
        true
    }

    /// Rabin's certificate: `f | x^(q^d) - x` and `gcd(f, x^(q^j) - x) = 1`
    /// for every proper divisor `j` of `d`.
    pub fn certify_irreducible(&self, f: &FqPoly) -> bool {
        let d = match f.degree() {
            None | Some(0) => return false,
            Some(d) => d,
        };
        let fr = self.frobenius_powers(f, d);
        let x = &fr[0];
        if !self.sub(&fr[d], x).is_zero() {
            return false;
        }
        (1..d)
            .filter(|j| d % j == 0)
            .all(|j| self.gcd(f, &self.sub(&fr[j], x)).is_one())
    }

    /// Monic irreducibles of degree `d`, in packed order, each certified.
    pub fn monic_irreducibles(&self, d: usize, max_work: u64) -> Result<Vec<FqPoly>> {
        if d == 0 {
            return Err(Error::InvalidArgument("degree must be positive".into()));
        }
        let q = self.field.order() as u128;
        let total = q.checked_pow(d as u32).unwrap_or(u128::MAX);
        if total > max_work as u128 {
            return Err(Error::capacity(
                format!("monic polynomials of degree {d} over F_{q}"),
                total,
                max_work,
            ));
        }
        let found: Vec<FqPoly> = (0..total as u64)
            .into_par_iter()
            .map(|idx| self.monic_from_index(idx, d))
            .filter(|f| self.is_irreducible(f))
            .collect();
        if let Some(bad) = found.iter().find(|f| !self.certify_irreducible(f)) {
            return Err(Error::Consistency(format!(
                "irreducibility certificate failed for {}",
                self.format(bad, 'x')
            )));
        }
        Ok(found)
    }

    /// Human-readable form, highest degree first, e.g. `x^3+2*x+1`.
    pub fn format(&self, a: &FqPoly, var: char) -> String {
        if a.is_zero() {
            return "0".into();
        }
        let mut parts = Vec::new();
        for (i, &c) in a.0.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let cs = self.field.format_element(c);
            let mono = match i {
                0 => String::new(),
                1 => var.to_string(),
                _ => format!("{var}^{i}"),
            };
            parts.push(match (i, c == FieldElement::ONE) {
                (0, _) => cs,
                (_, true) => mono,
                _ => format!("{cs}*{mono}"),
            });
        }
        parts.join("+")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::make_extension_field;

    fn ring(p: u64, k: u32) -> FqPolyRing {
        FqPolyRing::new(make_extension_field(p, k).unwrap())
    }

    fn poly(r: &FqPolyRing, cs: &[i64]) -> FqPoly {
        FqPoly::from_coeffs(cs.iter().map(|&c| r.field().from_int(c)).collect())
    }

    #[test]
    fn irreducibles_over_f2_degree_2() {
        let r = ring(2, 1);
        let irr = r.monic_irreducibles(2, 1000).unwrap();
        assert_eq!(irr, vec![poly(&r, &[1, 1, 1])]);
    }

    #[test]
    fn irreducibles_over_f3_degree_1() {
        let r = ring(3, 1);
        let irr = r.monic_irreducibles(1, 1000).unwrap();
        assert_eq!(
            irr,
            vec![poly(&r, &[0, 1]), poly(&r, &[1, 1]), poly(&r, &[2, 1])]
        );
    }

    #[test]
    fn cubic_irreducibles_over_f2() {
        let r = ring(2, 1);
        assert_eq!(r.monic_irreducibles(3, 1000).unwrap().len(), 2);
        // x^3+x+1 is coprime to x^4 - x.
        let f = poly(&r, &[1, 1, 0, 1]);
        let x4x = poly(&r, &[0, -1, 0, 0, 1]);
        assert!(r.gcd(&f, &x4x).is_one());
    }

    fn divisors(m: usize) -> impl Iterator<Item = usize> {
        (1..=m).filter(move |d| m % d == 0)
    }

    #[test]
    fn necklace_identity() {
        for (p, k, max_m) in [(2, 1, 8), (3, 1, 6), (2, 2, 4), (5, 1, 4), (3, 2, 3)] {
            let r = ring(p, k);
            let q = r.field().order() as u64;
            let counts: Vec<usize> = (1..=max_m)
                .map(|d| r.monic_irreducibles(d, 1_000_000).unwrap().len())
                .collect();
            for m in 1..=max_m {
                let total: u64 = divisors(m).map(|d| (d * counts[d - 1]) as u64).sum();
                assert_eq!(total, q.pow(m as u32), "p={p} k={k} m={m}");
            }
        }
    }

    #[test]
    fn capacity_is_enforced() {
        let r = ring(5, 1);
        assert!(matches!(
            r.monic_irreducibles(9, 1_000_000),
            Err(Error::Capacity { .. })
        ));
    }

    #[test]
    fn xgcd_bezout() {
        let r = ring(7, 1);
        let a = poly(&r, &[1, 2, 3, 4]);
        let b = poly(&r, &[5, 0, 1]);
        let (g, s, t) = r.xgcd(&a, &b);
        assert_eq!(r.add(&r.mul(&s, &a), &r.mul(&t, &b)), g);
        assert_eq!(g, r.gcd(&a, &b));
    }

    #[test]
    fn div_rem_reconstructs() {
        let r = ring(3, 2);
        let f = r.field().clone();
        let a = FqPoly::from_coeffs((0..7).map(|i| f.element((i * 5 + 1) % 9)).collect());
        let b = FqPoly::from_coeffs((0..3).map(|i| f.element((i * 2 + 3) % 9)).collect());
        let (q, rem) = r.div_rem(&a, &b);
        assert!(rem.deg() < b.deg());
        assert_eq!(r.add(&r.mul(&q, &b), &rem), a);
    }

    #[test]
    fn format_polynomial() {
        let r = ring(5, 1);
        assert_eq!(r.format(&poly(&r, &[1, 2, 0, 0, 0, 1]), 'x'), "x^5+2*x+1");
        assert_eq!(r.format(&FqPoly::zero(), 'x'), "0");
    }
}
