//! Closed points (places) of a hyperelliptic model.

use crate::curve::HyperellipticModel;
use crate::error::{Error, Result};
use crate::field::FieldElement;
use crate::fq_poly::{FqPoly, FqPolyRing};

/// How a place sits over the `x`-line.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum PlaceKind {
    /// The unique point at infinity.
    Infinite,
    /// A split or ramified place: `u` monic irreducible, `deg v < deg u`,
    /// `v^2 + h v = f (mod u)`. Its degree is `deg u`.
    Affine { u: FqPoly, v: FqPoly },
    /// The whole fiber over the roots of `u` forms one place of degree
    /// `2 deg u`, because `y^2 + h y - f` stays irreducible over `F_q[x]/(u)`.
    Inert { u: FqPoly },
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Place {
    pub kind: PlaceKind,
    pub degree: usize,
}

impl Place {
    pub fn infinite() -> Self {
        Place {
            kind: PlaceKind::Infinite,
            degree: 1,
        }
    }
}

/// Places of degree `1..=max_degree`, grouped by degree.
#[derive(Clone, Debug)]
pub struct PlaceTable {
    max_degree: usize,
    by_degree: Vec<Vec<Place>>,
}

impl PlaceTable {
    pub fn max_degree(&self) -> usize {
        self.max_degree
    }

    /// Places of exactly degree `d` (empty outside `1..=max_degree`).
    pub fn of_degree(&self, d: usize) -> &[Place] {
        d.checked_sub(1)
            .and_then(|i| self.by_degree.get(i))
            .map_or(&[], Vec::as_slice)
    }

    /// `N_d` for `d = 1..=max_degree`.
    pub fn counts(&self) -> Vec<usize> {
        self.by_degree.iter().map(Vec::len).collect()
    }

    pub fn iter(&self) -> impl Iterator<Item = &Place> {
        self.by_degree.iter().flatten()
    }

    /// `sum_{d | m} d N_d = |X(F_{q^m})|` for every `m <= max_degree`, with
    /// the right side counted independently by exhaustion.
    pub fn verify_against_counts(&self, model: &HyperellipticModel, max_work: u64) -> Result<()> {
        for m in 1..=self.max_degree {
            let from_places: u64 = (1..=m)
                .filter(|d| m % d == 0)
                .map(|d| (d * self.of_degree(d).len()) as u64)
                .sum();
            let a_m = model.count_points(m as u32, max_work)?;
            if from_places != a_m {
                return Err(Error::Consistency(format!(
                    "places give {from_places} points over F_q^{m}, direct count gives {a_m}"
                )));
            }
        }
        Ok(())
    }
}

/// Enumerate every place of degree at most `max_degree`.
///
/// For each monic irreducible `u` the fiber equation is solved in the
/// residue field `F_q[x]/(u)`: two roots give two affine places, a double
/// root one ramified place, no root an inert place of degree `2 deg u`.
pub fn enumerate_places(
    model: &HyperellipticModel,
    max_degree: usize,
    max_work: u64,
) -> Result<PlaceTable> {
    if max_degree == 0 {
        return Err(Error::InvalidArgument("place table depth must be at least 1".into()));
    }
    let mut by_degree: Vec<Vec<Place>> = vec![Vec::new(); max_degree];
    by_degree[0].push(Place::infinite());
    let ring = model.ring();
    for d in 1..=max_degree {
        for u in ring.monic_irreducibles(d, max_work)? {
            let residue = Residue::new(ring, &u);
            match residue.fiber_roots(model) {
                Fiber::Split(v1, v2) => {
                    let (a, b) = if v1 <= v2 { (v1, v2) } else { (v2, v1) };
                    for v in [a, b] {
                        by_degree[d - 1].push(Place {
                            kind: PlaceKind::Affine { u: u.clone(), v },
                            degree: d,
                        });
                    }
                }
                Fiber::Ramified(v) => by_degree[d - 1].push(Place {
                    kind: PlaceKind::Affine { u: u.clone(), v },
                    degree: d,
                }),
                Fiber::Inert => {
                    if 2 * d <= max_degree {
                        by_degree[2 * d - 1].push(Place {
                            kind: PlaceKind::Inert { u: u.clone() },
                            degree: 2 * d,
                        });
                    }
                }
            }
        }
    }
    for places in &by_degree {
        for place in places {
            if let PlaceKind::Affine { u, v } = &place.kind {
                let lhs = ring.add(&ring.mul(v, v), &ring.mul(model.h(), v));
                if !ring.rem(&ring.sub(&lhs, model.f()), u).is_zero() {
                    return Err(Error::Consistency(format!(
                        "place (u={}, v={}) does not lie on the curve",
                        ring.format(u, 'x'),
                        ring.format(v, 'x')
                    )));
                }
            }
        }
    }
    Ok(PlaceTable {
        max_degree,
        by_degree,
    })
}

enum Fiber {
    Split(FqPoly, FqPoly),
    Ramified(FqPoly),
    Inert,
}

/// The field `F_q[x]/(u)` for irreducible `u`, order `q^deg u`.
struct Residue<'a> {
    ring: &'a FqPolyRing,
    modulus: &'a FqPoly,
    order: u64,
    degree: usize,
}

impl<'a> Residue<'a> {
    fn new(ring: &'a FqPolyRing, modulus: &'a FqPoly) -> Self {
        let degree = modulus.degree().expect("nonzero modulus");
        let order = (ring.field().order() as u64).pow(degree as u32);
        Residue {
            ring,
            modulus,
            order,
            degree,
        }
    }

    fn reduce(&self, a: &FqPoly) -> FqPoly {
        self.ring.rem(a, self.modulus)
    }

    fn mul(&self, a: &FqPoly, b: &FqPoly) -> FqPoly {
        self.ring.mul_mod(a, b, self.modulus)
    }

    fn pow(&self, a: &FqPoly, e: u64) -> FqPoly {
        self.ring.pow_mod(a, e, self.modulus)
    }

    fn inv(&self, a: &FqPoly) -> FqPoly {
        let (g, s, _) = self.ring.xgcd(a, self.modulus);
        debug_assert!(g.is_one());
        self.reduce(&s)
    }

    fn scalar(&self, c: FieldElement) -> FqPoly {
        FqPoly::constant(c)
    }

    /// Elements in packed order, skipping zero.
    fn nonzero_elements(&self) -> impl Iterator<Item = FqPoly> + '_ {
        let q = self.ring.field().order() as u64;
        (1..self.order).map(move |mut idx| {
            let mut cs = Vec::with_capacity(self.degree);
            for _ in 0..self.degree {
                cs.push(self.ring.field().element((idx % q) as u32));
                idx /= q;
            }
            FqPoly::from_coeffs(cs)
        })
    }

    /// Roots of `Y^2 + h Y - f` in this field.
    fn fiber_roots(&self, model: &HyperellipticModel) -> Fiber {
        let r = self.ring;
        let fld = r.field();
        let h = self.reduce(model.h());
        let f = self.reduce(model.f());
        if fld.p() != 2 {
            let four = self.scalar(fld.from_int(4));
            let disc = self.reduce(&r.add(&self.mul(&h, &h), &self.mul(&four, &f)));
            let half = fld.inv(fld.from_int(2)).expect("odd characteristic");
            let neg_h = r.neg(&h);
            if disc.is_zero() {
                return Fiber::Ramified(r.scale(&neg_h, half));
            }
            return match self.sqrt(&disc) {
                Some(s) => Fiber::Split(
                    r.scale(&r.add(&neg_h, &s), half),
                    r.scale(&r.sub(&neg_h, &s), half),
                ),
                None => Fiber::Inert,
            };
        }
        if h.is_zero() {
            // Squaring is bijective in characteristic 2.
            return Fiber::Ramified(self.pow(&f, self.order / 2));
        }
        // Y = h Z turns the equation into Z^2 + Z = f / h^2.
        let c = self.mul(&f, &self.inv(&self.mul(&h, &h)));
        if !self.trace_f2(&c).is_zero() {
            return Fiber::Inert;
        }
        let z = self.artin_schreier_root(&c);
        let v1 = self.mul(&h, &z);
        let v2 = r.add(&v1, &h);
        Fiber::Split(v1, v2)
    }

    fn is_square(&self, a: &FqPoly) -> bool {
        a.is_zero() || self.pow(a, (self.order - 1) / 2).is_one()
    }

    /// Tonelli-Shanks square root (odd characteristic).
    fn sqrt(&self, a: &FqPoly) -> Option<FqPoly> {
        if a.is_zero() {
            return Some(FqPoly::zero());
        }
        if !self.is_square(a) {
            return None;
        }
        let mut s = 0u32;
        let mut t = self.order - 1;
        while t % 2 == 0 {
            t /= 2;
            s += 1;
        }
        let non_residue = self
            .nonzero_elements()
            .find(|n| !self.is_square(n))
            .expect("half of the nonzero elements are non-squares");
        let mut m = s;
        let mut c = self.pow(&non_residue, t);
        let mut x = self.pow(a, (t + 1) / 2);
        let mut b = self.pow(a, t);
        while !b.is_one() {
            let mut i = 0u32;
            let mut b2 = b.clone();
            while !b2.is_one() {
                b2 = self.mul(&b2, &b2);
                i += 1;
            }
            let mut w = c.clone();
            for _ in 0..(m - i - 1) {
                w = self.mul(&w, &w);
            }
            x = self.mul(&x, &w);
            c = self.mul(&w, &w);
            b = self.mul(&b, &c);
            m = i;
        }
        Some(x)
    }

    /// Number of squarings that generate the Frobenius cycle over `F_2`.
    fn f2_degree(&self) -> u32 {
        self.order.trailing_zeros()
    }

    fn trace_f2(&self, a: &FqPoly) -> FqPoly {
        let mut acc = FqPoly::zero();
        let mut cur = a.clone();
        for _ in 0..self.f2_degree() {
            acc = self.ring.add(&acc, &cur);
            cur = self.mul(&cur, &cur);
        }
        acc
    }

    /// A root of `Z^2 + Z = c` when `Tr(c) = 0` (characteristic 2).
    fn artin_schreier_root(&self, c: &FqPoly) -> FqPoly {
        let r = self.ring;
        let n = self.f2_degree() as usize;
        let mut c_pows = Vec::with_capacity(n);
        let mut cur = c.clone();
        for _ in 0..n {
            c_pows.push(cur.clone());
            cur = self.mul(&cur, &cur);
        }
        let z = if n % 2 == 1 {
            // Half-trace.
            (0..n).step_by(2).fold(FqPoly::zero(), |acc, i| r.add(&acc, &c_pows[i]))
        } else {
            let delta = self
                .nonzero_elements()
                .find(|d| self.trace_f2(d).is_one())
                .expect("the trace map is onto F_2");
            let mut d_pows = Vec::with_capacity(n);
            let mut cur = delta;
            for _ in 0..n {
                d_pows.push(cur.clone());
                cur = self.mul(&cur, &cur);
            }
            // z = sum_{i<n} (sum_{j>i} delta^(2^j)) c^(2^i)
            let mut z = FqPoly::zero();
            let mut tail = FqPoly::zero();
            for i in (0..n).rev() {
                z = r.add(&z, &self.mul(&tail, &c_pows[i]));
                tail = r.add(&tail, &d_pows[i]);
            }
            z
        };
        debug_assert_eq!(self.reduce(&r.add(&self.mul(&z, &z), &z)), self.reduce(c));
        z
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::tests::model;

    #[test]
    fn degree_one_places() {
        let t = enumerate_places(&model("p=3; f=x^3+x"), 1, 1_000_000).unwrap();
        assert_eq!(t.of_degree(1).len(), 4);
        let affine = t
            .of_degree(1)
            .iter()
            .filter(|p| matches!(p.kind, PlaceKind::Affine { .. }))
            .count();
        assert_eq!(affine, 3);
        let t5 = enumerate_places(&model("p=5; f=x^3+x"), 1, 1_000_000).unwrap();
        assert_eq!(t5.of_degree(1).len(), 4);
    }

    #[test]
    fn degree_two_places() {
        let m = model("p=3; f=x^3+x");
        let t = enumerate_places(&m, 2, 1_000_000).unwrap();
        assert_eq!(t.of_degree(2).len(), 6);
        t.verify_against_counts(&m, 1_000_000).unwrap();
    }

    #[test]
    fn place_counts_match_point_counts() {
        for spec in [
            "p=3; f=x^5+1",
            "p=5; f=x^5+x+1",
            "p=2; f=x^3+1; h=x",
            "p=2; f=x^3+x; h=1",
            "p=2; f=x^5+x^2+1; h=x^2+x+1",
            "p=2; k=2; f=x^3+x; h=1",
            "p=3; k=2; f=x^3+x",
            "p=7; f=x^3+x+3",
        ] {
            let m = model(spec);
            let t = enumerate_places(&m, 4, 1_000_000).unwrap();
            t.verify_against_counts(&m, 1_000_000).unwrap();
        }
    }

    #[test]
    fn ramified_places_listed_once_split_twice() {
        let m = model("p=5; f=x^5+x+1");
        let t = enumerate_places(&m, 3, 1_000_000).unwrap();
        let r = m.ring();
        for place in t.iter() {
            if let PlaceKind::Affine { u, v } = &place.kind {
                let twov_h = r.add(&r.scale(v, m.field().from_int(2)), m.h());
                let ramified = r.rem(&twov_h, u).is_zero();
                let same_u = t
                    .of_degree(place.degree)
                    .iter()
                    .filter(|p| matches!(&p.kind, PlaceKind::Affine { u: w, .. } if w == u))
                    .count();
                assert_eq!(same_u, if ramified { 1 } else { 2 });
            }
        }
    }

    #[test]
    fn base_change_degree_one_places() {
        let m = model("p=3; f=x^3+x");
        let lifted = m.base_change(2, 1_000_000).unwrap();
        let t = enumerate_places(&lifted, 1, 1_000_000).unwrap();
        assert_eq!(t.of_degree(1).len() as u64, m.count_points(2, 1_000_000).unwrap());
    }
}
