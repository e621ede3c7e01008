//! Finite fields `F_{p^k}` with table-driven multiplication.
//!
//! Elements are packed as integers: the element `c_0 + c_1 x + ... + c_{k-1} x^{k-1}`
//! of `F_p[x]/(modulus)` is stored as `c_0 + c_1 p + ... + c_{k-1} p^{k-1}`.
//! Multiplication goes through discrete log / antilog tables built against a
//! fixed primitive element, so every field handed out is fully enumerated
//! once at construction. Orders are therefore capped by a work bound.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::fq_poly::{FqPoly, FqPolyRing};

/// Default bound on enumeration work (field orders, candidate polynomials).
pub const DEFAULT_MAX_WORK: u64 = 1_000_000;

/// A packed element of some [`FieldDescriptor`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct FieldElement(u32);

impl FieldElement {
    pub const ZERO: FieldElement = FieldElement(0);
    pub const ONE: FieldElement = FieldElement(1);

    pub fn index(self) -> u32 {
        self.0
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

struct Inner {
    p: u32,
    k: u32,
    q: u32,
    /// Coefficients of the monic defining polynomial over `F_p`, low to high.
    modulus: Vec<u32>,
    /// `exp[i] = g^i` for `0 <= i < 2(q-1)`.
    exp: Vec<u32>,
    /// `log[a]` for nonzero `a`; `log[0]` is unused.
    log: Vec<u32>,
}

/// An explicit finite field `F_{p^k} = F_p[x]/(modulus)`.
///
/// Cheap to clone; all clones share the same tables.
#[derive(Clone)]
pub struct FieldDescriptor {
    inner: Arc<Inner>,
}

impl fmt::Debug for FieldDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F_{}^{} mod {:?}", self.p(), self.k(), self.inner.modulus)
    }
}

impl PartialEq for FieldDescriptor {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.inner, &other.inner)
            || (self.inner.p == other.inner.p && self.inner.modulus == other.inner.modulus)
    }
}

impl Eq for FieldDescriptor {}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut d = 3;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Build `F_{p^k}` with the default work bound.
pub fn make_extension_field(p: u64, k: u32) -> Result<FieldDescriptor> {
    make_extension_field_bounded(p, k, DEFAULT_MAX_WORK)
}

/// Build `F_{p^k}`, choosing the smallest monic irreducible modulus in the
/// packed ordering (so `(3, 1)` gives `x`, `(2, 3)` gives `x^3+x+1`).
pub fn make_extension_field_bounded(p: u64, k: u32, max_work: u64) -> Result<FieldDescriptor> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if k == 0 {
        return Err(Error::InvalidArgument("extension degree must be at least 1".into()));
    }
    let q = (p as u128).checked_pow(k).unwrap_or(u128::MAX);
    if q > max_work as u128 || q > u32::MAX as u128 / 2 {
        return Err(Error::capacity(format!("field F_{p}^{k}"), q, max_work));
    }
    let p = p as u32;
    if k == 1 {
        return Ok(FieldDescriptor::with_modulus(p, vec![0, 1]));
    }
    let prime = FieldDescriptor::with_modulus(p, vec![0, 1]);
    let ring = FqPolyRing::new(prime.clone());
    let modulus = ring
        .monic_polys_of_degree(k as usize)
        .find(|m| ring.is_irreducible(m))
        .expect("an irreducible polynomial of every degree exists");
    let coeffs = modulus.coeffs().iter().map(|c| c.index()).collect();
    Ok(FieldDescriptor::with_modulus(p, coeffs))
}

impl FieldDescriptor {
    /// Build tables for `F_p[x]/(modulus)`; `modulus` must be monic irreducible.
    fn with_modulus(p: u32, modulus: Vec<u32>) -> Self {
        let k = (modulus.len() - 1) as u32;
        let q = p.pow(k);
        let mut inner = Inner {
            p,
            k,
            q,
            modulus,
            exp: Vec::new(),
            log: Vec::new(),
        };
        let order = (q - 1) as u64;
        let factors = prime_factors(order);
        let generator = (1..q)
            .find(|&g| {
                factors
                    .iter()
                    .all(|&r| slow_pow(&inner, g, order / r) != 1)
            })
            .expect("multiplicative group of a finite field is cyclic");
        let n = (q - 1) as usize;
        let mut exp = vec![0u32; 2 * n];
        let mut log = vec![0u32; q as usize];
        let mut cur = 1u32;
        for i in 0..n {
            exp[i] = cur;
            exp[i + n] = cur;
            log[cur as usize] = i as u32;
            cur = slow_mul(&inner, cur, generator);
        }
        inner.exp = exp;
        inner.log = log;
        FieldDescriptor {
            inner: Arc::new(inner),
        }
    }

    pub fn p(&self) -> u32 {
        self.inner.p
    }

    pub fn k(&self) -> u32 {
        self.inner.k
    }

    /// Field order `p^k`.
    pub fn order(&self) -> u32 {
        self.inner.q
    }

    /// Defining polynomial coefficients over `F_p`, low to high, monic.
    pub fn modulus(&self) -> &[u32] {
        &self.inner.modulus
    }

    pub fn is_prime_field(&self) -> bool {
        self.inner.k == 1
    }

    pub fn elements(&self) -> impl Iterator<Item = FieldElement> + '_ {
        (0..self.inner.q).map(FieldElement)
    }

    /// Element with packed index `i`; panics when out of range.
    pub fn element(&self, i: u32) -> FieldElement {
        assert!(i < self.inner.q, "index {i} outside field of order {}", self.inner.q);
        FieldElement(i)
    }

    /// Image of an integer in the prime subfield.
    pub fn from_int(&self, n: i64) -> FieldElement {
        FieldElement(n.rem_euclid(self.inner.p as i64) as u32)
    }

    pub fn coeffs(&self, a: FieldElement) -> Vec<u32> {
        let p = self.inner.p;
        let mut v = a.0;
        (0..self.inner.k)
            .map(|_| {
                let c = v % p;
                v /= p;
                c
            })
            .collect()
    }

    pub fn from_coeffs(&self, coeffs: &[u32]) -> FieldElement {
        assert!(coeffs.len() <= self.inner.k as usize);
        let p = self.inner.p;
        let mut v = 0u32;
        for &c in coeffs.iter().rev() {
            v = v * p + c % p;
        }
        FieldElement(v)
    }

    /// `Some(c)` when `a` lies in the prime subfield.
    pub fn as_prime(&self, a: FieldElement) -> Option<u32> {
        (a.0 < self.inner.p).then_some(a.0)
    }

    pub fn add(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        let inner = &*self.inner;
        if inner.k == 1 {
            let s = a.0 + b.0;
            return FieldElement(if s >= inner.p { s - inner.p } else { s });
        }
        if inner.p == 2 {
            return FieldElement(a.0 ^ b.0);
        }
        let p = inner.p;
        let (mut x, mut y, mut out, mut place) = (a.0, b.0, 0u32, 1u32);
        while x > 0 || y > 0 {
            out += ((x % p + y % p) % p) * place;
            x /= p;
            y /= p;
            place *= p;
        }
        FieldElement(out)
    }

    pub fn neg(&self, a: FieldElement) -> FieldElement {
        let inner = &*self.inner;
        if inner.p == 2 {
            return a;
        }
        if inner.k == 1 {
            return FieldElement(if a.0 == 0 { 0 } else { inner.p - a.0 });
        }
        let p = inner.p;
        let (mut x, mut out, mut place) = (a.0, 0u32, 1u32);
        while x > 0 {
            out += ((p - x % p) % p) * place;
            x /= p;
            place *= p;
        }
        FieldElement(out)
    }

    pub fn sub(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        if a.0 == 0 || b.0 == 0 {
            return FieldElement::ZERO;
        }
        let inner = &*self.inner;
        let i = inner.log[a.0 as usize] + inner.log[b.0 as usize];
        FieldElement(inner.exp[i as usize])
    }

    pub fn inv(&self, a: FieldElement) -> Result<FieldElement> {
        if a.0 == 0 {
            return Err(Error::DivisionByZero);
        }
        let inner = &*self.inner;
        let n = inner.q - 1;
        let l = inner.log[a.0 as usize];
        Ok(FieldElement(inner.exp[((n - l) % n) as usize]))
    }

    pub fn div(&self, a: FieldElement, b: FieldElement) -> Result<FieldElement> {
        Ok(self.mul(a, self.inv(b)?))
    }

    pub fn pow(&self, a: FieldElement, e: u64) -> FieldElement {
        if e == 0 {
            return FieldElement::ONE;
        }
        if a.0 == 0 {
            return FieldElement::ZERO;
        }
        let inner = &*self.inner;
        let n = (inner.q - 1) as u64;
        let l = inner.log[a.0 as usize] as u64;
        FieldElement(inner.exp[((l * (e % n)) % n) as usize])
    }

    /// Discrete log against the table generator; `None` for zero.
    pub fn log(&self, a: FieldElement) -> Option<u32> {
        (a.0 != 0).then(|| self.inner.log[a.0 as usize])
    }

    /// Quadratic residue test (zero counts as a square).
    pub fn is_square(&self, a: FieldElement) -> bool {
        match self.log(a) {
            None => true,
            Some(l) => self.inner.p == 2 || l % 2 == 0,
        }
    }

    /// Some square root of `a`, if one exists.
    pub fn sqrt(&self, a: FieldElement) -> Option<FieldElement> {
        let l = match self.log(a) {
            None => return Some(FieldElement::ZERO),
            Some(l) => l,
        };
        let n = self.inner.q - 1;
        if self.inner.p == 2 {
            // q - 1 is odd, so halving the log is multiplication by (n + 1) / 2.
            let half = ((l as u64 * ((n as u64 + 1) / 2)) % n as u64) as u32;
            return Some(FieldElement(self.inner.exp[half as usize]));
        }
        (l % 2 == 0).then(|| FieldElement(self.inner.exp[(l / 2) as usize]))
    }

    /// Absolute trace to `F_p`, returned as an integer in `[0, p)`.
    pub fn trace(&self, a: FieldElement) -> u32 {
        let mut t = FieldElement::ZERO;
        let mut cur = a;
        for _ in 0..self.inner.k {
            t = self.add(t, cur);
            cur = self.pow(cur, self.inner.p as u64);
        }
        self.as_prime(t).expect("trace lies in the prime field")
    }

    /// Embed this field into `larger` (same characteristic, degree dividing).
    ///
    /// The image of the generator `x` is the smallest-index root of the
    /// modulus in `larger`, so the embedding is deterministic.
    pub fn embedding_into(&self, larger: &FieldDescriptor) -> Result<Embedding> {
        if self.p() != larger.p() || larger.k() % self.k() != 0 {
            return Err(Error::InvalidArgument(format!(
                "cannot embed F_{}^{} into F_{}^{}",
                self.p(),
                self.k(),
                larger.p(),
                larger.k()
            )));
        }
        let modulus: Vec<FieldElement> = self
            .modulus()
            .iter()
            .map(|&c| larger.from_int(c as i64))
            .collect();
        let ring = FqPolyRing::new(larger.clone());
        let m = FqPoly::from_coeffs(modulus);
        let root = larger
            .elements()
            .find(|&r| ring.eval(&m, r).is_zero())
            .expect("an irreducible polynomial splits in every extension of its degree");
        let mut powers = Vec::with_capacity(self.k() as usize);
        let mut cur = FieldElement::ONE;
        for _ in 0..self.k() {
            powers.push(cur);
            cur = larger.mul(cur, root);
        }
        let table = self
            .elements()
            .map(|a| {
                self.coeffs(a)
                    .iter()
                    .zip(&powers)
                    .fold(FieldElement::ZERO, |acc, (&c, &pw)| {
                        larger.add(acc, larger.mul(larger.from_int(c as i64), pw))
                    })
            })
            .collect();
        Ok(Embedding {
            source: self.clone(),
            target: larger.clone(),
            table,
        })
    }

    /// Render an element: plain integer in the prime subfield, else the
    /// coefficient vector in the power basis, e.g. `[1,2]` for `1+2a`.
    pub fn format_element(&self, a: FieldElement) -> String {
        match self.as_prime(a) {
            Some(c) => c.to_string(),
            None => {
                let cs: Vec<String> = self.coeffs(a).iter().map(|c| c.to_string()).collect();
                format!("[{}]", cs.join(","))
            }
        }
    }
}

/// A field embedding `F_q -> F_{q^m}`, stored as a lookup table.
#[derive(Clone, Debug)]
pub struct Embedding {
    source: FieldDescriptor,
    target: FieldDescriptor,
    table: Vec<FieldElement>,
}

impl Embedding {
    pub fn source(&self) -> &FieldDescriptor {
        &self.source
    }

    pub fn target(&self) -> &FieldDescriptor {
        &self.target
    }

    pub fn apply(&self, a: FieldElement) -> FieldElement {
        self.table[a.0 as usize]
    }

    pub fn apply_poly(&self, f: &FqPoly) -> FqPoly {
        FqPoly::from_coeffs(f.coeffs().iter().map(|&c| self.apply(c)).collect())
    }
}

fn slow_mul(inner: &Inner, a: u32, b: u32) -> u32 {
    let p = inner.p as u64;
    let k = inner.k as usize;
    let digits = |mut v: u32| {
        let mut d = vec![0u64; k];
        for slot in d.iter_mut() {
            *slot = (v % inner.p) as u64;
            v /= inner.p;
        }
        d
    };
    let (da, db) = (digits(a), digits(b));
    let mut prod = vec![0u64; 2 * k];
    for (i, &x) in da.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in db.iter().enumerate() {
            prod[i + j] = (prod[i + j] + x * y) % p;
        }
    }
    for deg in (k..2 * k).rev() {
        let c = prod[deg];
        if c == 0 {
            continue;
        }
        prod[deg] = 0;
        for (i, &m) in inner.modulus[..k].iter().enumerate() {
            let idx = deg - k + i;
            prod[idx] = (prod[idx] + p - (c * m as u64) % p) % p;
        }
    }
    prod[..k]
        .iter()
        .rev()
        .fold(0u32, |acc, &c| acc * inner.p + c as u32)
}

fn slow_pow(inner: &Inner, a: u32, mut e: u64) -> u32 {
    let (mut base, mut acc) = (a, 1u32);
    while e > 0 {
        if e & 1 == 1 {
            acc = slow_mul(inner, acc, base);
        }
        base = slow_mul(inner, base, base);
        e >>= 1;
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_field_has_modulus_x() {
        let f = make_extension_field(3, 1).unwrap();
        assert_eq!(f.modulus(), &[0, 1]);
        assert_eq!(f.order(), 3);
    }

    #[test]
    fn f8_modulus_is_x3_x_1() {
        let f = make_extension_field(2, 3).unwrap();
        assert_eq!(f.modulus(), &[1, 1, 0, 1]);
        // A cubic without roots in F_2 is irreducible.
        for x in 0..2u32 {
            let v = (x * x * x + x + 1) % 2;
            assert_ne!(v, 0);
        }
    }

    #[test]
    fn f9_modulus_is_x2_plus_1() {
        let f = make_extension_field(3, 2).unwrap();
        assert_eq!(f.modulus(), &[1, 0, 1]);
        // -1 = 2 is not a square mod 3.
        assert!((0..3u32).all(|x| (x * x) % 3 != 2));
    }

    #[test]
    fn rejects_composite_and_oversized() {
        assert!(matches!(make_extension_field(4, 1), Err(Error::NotPrime(4))));
        assert!(matches!(
            make_extension_field_bounded(2, 21, 1_000_000),
            Err(Error::Capacity { .. })
        ));
    }

    #[test]
    fn inverses() {
        let f5 = make_extension_field(5, 1).unwrap();
        assert_eq!(f5.inv(f5.from_int(2)).unwrap(), f5.from_int(3));
        assert_eq!(f5.inv(FieldElement::ONE).unwrap(), FieldElement::ONE);
        assert!(matches!(f5.inv(FieldElement::ZERO), Err(Error::DivisionByZero)));

        let f9 = make_extension_field(3, 2).unwrap();
        let x = f9.from_coeffs(&[0, 1]);
        assert_eq!(f9.inv(x).unwrap(), f9.from_coeffs(&[0, 2]));
    }

    #[test]
    fn every_nonzero_element_inverts_and_frobenius_closes() {
        for (p, k) in [(2, 4), (3, 3), (5, 2), (7, 1)] {
            let f = make_extension_field(p, k).unwrap();
            for a in f.elements() {
                if !a.is_zero() {
                    assert_eq!(f.mul(a, f.inv(a).unwrap()), FieldElement::ONE);
                }
                let mut b = a;
                for _ in 0..k {
                    b = f.pow(b, p);
                }
                assert_eq!(a, b);
            }
        }
    }

    #[test]
    fn table_mul_matches_schoolbook() {
        let f = make_extension_field(3, 3).unwrap();
        for a in f.elements() {
            for b in f.elements() {
                assert_eq!(f.mul(a, b).index(), slow_mul(&f.inner, a.index(), b.index()));
            }
        }
    }

    #[test]
    fn square_roots() {
        for (p, k) in [(2, 3), (3, 2), (5, 1), (7, 2)] {
            let f = make_extension_field(p, k).unwrap();
            for a in f.elements() {
                let sq = f.mul(a, a);
                let r = f.sqrt(sq).unwrap();
                assert_eq!(f.mul(r, r), sq);
            }
        }
    }

    #[test]
    fn embedding_is_a_ring_map() {
        let small = make_extension_field(2, 2).unwrap();
        let big = make_extension_field(2, 4).unwrap();
        let e = small.embedding_into(&big).unwrap();
        for a in small.elements() {
            for b in small.elements() {
                assert_eq!(e.apply(small.mul(a, b)), big.mul(e.apply(a), e.apply(b)));
                assert_eq!(e.apply(small.add(a, b)), big.add(e.apply(a), e.apply(b)));
            }
        }
    }
}
