//! Jacobian arithmetic in Mumford representation (Cantor's algorithm).

use std::fmt;

use num_bigint::BigInt;
use rayon::prelude::*;

use crate::curve::HyperellipticModel;
use crate::error::{Error, Result};
use crate::fq_poly::FqPoly;
use crate::places::{Place, PlaceKind};
use crate::zeta_one::{class_number, LPolynomial};

/// Reduced divisor class `(U, V)`: `U` monic, `deg V < deg U <= g`,
/// `U | V^2 + hV - f`. The identity is `(1, 0)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MumfordRep {
    pub u: FqPoly,
    pub v: FqPoly,
}

impl MumfordRep {
    pub fn identity() -> Self {
        MumfordRep {
            u: FqPoly::one(),
            v: FqPoly::zero(),
        }
    }

    pub fn is_identity(&self) -> bool {
        self.u.is_one()
    }

    /// `U=<poly>;V=<poly>` with field elements in the power basis.
    pub fn encode(&self, model: &HyperellipticModel) -> String {
        let r = model.ring();
        format!("U={};V={}", r.format(&self.u, 'x'), r.format(&self.v, 'x'))
    }

    /// Whether `(U, V)` satisfies every Mumford condition for `model`.
    pub fn is_valid(&self, model: &HyperellipticModel) -> bool {
        let r = model.ring();
        let du = self.u.deg();
        if !self.u.is_monic() || self.v.deg() >= du || du > model.genus() as isize {
            return false;
        }
        r.rem(&curve_residual(model, &self.v), &self.u).is_zero()
    }
}

impl fmt::Display for MumfordRep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({:?}, {:?})", self.u, self.v)
    }
}

/// `V^2 + hV - f`.
fn curve_residual(model: &HyperellipticModel, v: &FqPoly) -> FqPoly {
    let r = model.ring();
    r.sub(&r.add(&r.mul(v, v), &r.mul(model.h(), v)), model.f())
}

/// Cantor composition of two semi-reduced divisors, not yet reduced.
fn compose(a: &MumfordRep, b: &MumfordRep, model: &HyperellipticModel) -> MumfordRep {
    let r = model.ring();
    let (d1, e1, e2) = r.xgcd(&a.u, &b.u);
    let vsum = r.add(&r.add(&a.v, &b.v), model.h());
    let (d, c1, c2) = r.xgcd(&d1, &vsum);
    let s1 = r.mul(&c1, &e1);
    let s2 = r.mul(&c1, &e2);
    let s3 = c2;
    let u = r
        .div_exact(&r.mul(&a.u, &b.u), &r.mul(&d, &d))
        .expect("d^2 divides u1 u2");
    let num = r.add(
        &r.add(&r.mul(&r.mul(&s1, &a.u), &b.v), &r.mul(&r.mul(&s2, &b.u), &a.v)),
        &r.mul(&s3, &r.add(&r.mul(&a.v, &b.v), model.f())),
    );
    let v = r.div_exact(&num, &d).expect("d divides the composed numerator");
    let v = r.rem(&v, &u);
    MumfordRep { u, v }
}

/// Reduce a semi-reduced divisor until `deg U <= g`.
pub fn reduce(mut d: MumfordRep, model: &HyperellipticModel) -> MumfordRep {
    let r = model.ring();
    let g = model.genus() as isize;
    while d.u.deg() > g {
        let num = r.neg(&curve_residual(model, &d.v));
        let u = r.monic(&r.div_exact(&num, &d.u).expect("U divides f - vh - v^2"));
        let v = r.rem(&r.neg(&r.add(model.h(), &d.v)), &u);
        d = MumfordRep { u, v };
    }
    let u = r.monic(&d.u);
    let v = r.rem(&d.v, &u);
    MumfordRep { u, v }
}

pub fn group_add(a: &MumfordRep, b: &MumfordRep, model: &HyperellipticModel) -> MumfordRep {
    if a.is_identity() {
        return b.clone();
    }
    if b.is_identity() {
        return a.clone();
    }
    reduce(compose(a, b, model), model)
}

/// `(U, -h - V mod U)`.
pub fn group_neg(a: &MumfordRep, model: &HyperellipticModel) -> MumfordRep {
    let r = model.ring();
    MumfordRep {
        u: a.u.clone(),
        v: r.rem(&r.neg(&r.add(model.h(), &a.v)), &a.u),
    }
}

/// `n a` by double-and-add; negative `n` uses the inverse.
pub fn scalar_mul(a: &MumfordRep, n: &BigInt, model: &HyperellipticModel) -> MumfordRep {
    let (sign, mag) = n.to_u64_digits();
    let base = if sign == num_bigint::Sign::Minus {
        group_neg(a, model)
    } else {
        a.clone()
    };
    let mut acc = MumfordRep::identity();
    for word in mag.iter().rev() {
        for bit in (0..64).rev() {
            acc = group_add(&acc, &acc, model);
            if (word >> bit) & 1 == 1 {
                acc = group_add(&acc, &base, model);
            }
        }
    }
    acc
}

/// `[P - deg(P) inf]`. An inert place is `div(u(x)) + 2 deg(u) inf`, so it
/// maps to the identity, as does the point at infinity.
pub fn place_to_jacobian(place: &Place, model: &HyperellipticModel) -> MumfordRep {
    match &place.kind {
        PlaceKind::Infinite | PlaceKind::Inert { .. } => MumfordRep::identity(),
        PlaceKind::Affine { u, v } => reduce(
            MumfordRep {
                u: u.clone(),
                v: v.clone(),
            },
            model,
        ),
    }
}

/// Every reduced Mumford pair, found by scanning monic `U` with
/// `deg U <= g` and all `V` with `deg V < deg U`.
pub fn jacobian_elements(model: &HyperellipticModel, max_work: u64) -> Result<Vec<MumfordRep>> {
    let r = model.ring();
    let q = model.q() as u128;
    let g = model.genus();
    let work: u128 = (0..=g as u32).map(|d| q.saturating_pow(2 * d)).sum();
    if work > max_work as u128 {
        return Err(Error::capacity("Jacobian scan", work, max_work));
    }
    let mut out = Vec::new();
    for d in 0..=g {
        let qd = (q as u64).pow(d as u32);
        let found: Vec<MumfordRep> = (0..qd)
            .into_par_iter()
            .flat_map_iter(|ui| {
                let u = r.monic_from_index(ui, d);
                (0..qd).filter_map(move |vi| {
                    let v = r.poly_from_index(vi, d);
                    r.rem(&curve_residual(model, &v), &u)
                        .is_zero()
                        .then(|| MumfordRep { u: u.clone(), v })
                })
            })
            .collect();
        out.extend(found);
    }
    Ok(out)
}

/// Number of Jacobian elements, checked against `L(1)`.
pub fn jacobian_enumerate(model: &HyperellipticModel, l: &LPolynomial, max_work: u64) -> Result<u64> {
    let n = jacobian_elements(model, max_work)?.len() as u64;
    let h = class_number(l);
    if BigInt::from(n) != h {
        return Err(Error::Consistency(format!(
            "Jacobian scan found {n} elements but L(1) = {h}"
        )));
    }
    Ok(n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::tests::model;
    use crate::field::FieldElement;
    use crate::places::enumerate_places;
    use crate::zeta_one::l_polynomial_from_counts;
    use proptest::prelude::*;

    fn l_of(m: &HyperellipticModel) -> LPolynomial {
        let a: Vec<u64> = (1..=m.genus() as u32)
            .map(|e| m.count_points(e, 1_000_000).unwrap())
            .collect();
        l_polynomial_from_counts(&a, m.q(), m.genus()).unwrap()
    }

    const CORPUS: [&str; 6] = [
        "p=3; f=x^3+x",
        "p=5; f=x^3+x",
        "p=3; f=x^5+1",
        "p=5; f=x^5+x+1",
        "p=2; f=x^5+x^2+1; h=x^2+x+1",
        "p=2; f=x^3+1; h=x",
    ];

    #[test]
    fn enumerate_matches_class_number() {
        assert_eq!(jacobian_enumerate(&model("p=3; f=x^3+x"), &l_of(&model("p=3; f=x^3+x")), 1_000_000).unwrap(), 4);
        assert_eq!(jacobian_enumerate(&model("p=5; f=x^3+x"), &l_of(&model("p=5; f=x^3+x")), 1_000_000).unwrap(), 4);
        for spec in CORPUS {
            let m = model(spec);
            jacobian_enumerate(&m, &l_of(&m), 1_000_000).unwrap();
        }
    }

    #[test]
    fn enumerate_rejects_wrong_l() {
        let m = model("p=3; f=x^3+x");
        let wrong = l_polynomial_from_counts(&[5], 3, 1).unwrap();
        assert!(matches!(jacobian_enumerate(&m, &wrong, 1_000_000), Err(Error::Consistency(_))));
    }

    #[test]
    fn two_torsion_point_doubles_to_identity() {
        let m = model("p=3; f=x^3+x");
        let p = MumfordRep {
            u: FqPoly::x(),
            v: FqPoly::zero(),
        };
        assert!(p.is_valid(&m));
        assert!(group_add(&p, &p, &m).is_identity());
    }

    #[test]
    fn places_map_to_valid_reps() {
        for spec in CORPUS {
            let m = model(spec);
            let t = enumerate_places(&m, 2 * m.genus() + 1, 1_000_000).unwrap();
            for place in t.iter() {
                let j = place_to_jacobian(place, &m);
                assert!(j.is_valid(&m), "{spec}: {place:?}");
                if place.degree <= m.genus() {
                    if let PlaceKind::Affine { u, v } = &place.kind {
                        assert_eq!(&j.u, u);
                        assert_eq!(&j.v, v);
                    }
                }
            }
        }
    }

    #[test]
    fn two_degree_one_places_on_genus_two() {
        let m = model("p=3; f=x^5+1");
        let t = enumerate_places(&m, 1, 1_000_000).unwrap();
        let affine: Vec<_> = t
            .of_degree(1)
            .iter()
            .filter(|p| matches!(p.kind, PlaceKind::Affine { .. }))
            .collect();
        let sum = group_add(&place_to_jacobian(affine[0], &m), &place_to_jacobian(affine[1], &m), &m);
        assert!(sum.is_valid(&m));
        assert!(sum.u.deg() <= 2);
    }

    /// Chord-tangent addition on `y^2 = x^3 + a2 x^2 + a4 x + a6`, odd `p`.
    /// `None` is the point at infinity.
    type Pt = Option<(FieldElement, FieldElement)>;

    fn chord_tangent(m: &HyperellipticModel, p: Pt, q: Pt) -> Pt {
        let fld = m.field();
        let (a2, a4) = (m.f().coeff(2), m.f().coeff(1));
        let (Some((x1, y1)), Some((x2, y2))) = (p, q) else {
            return p.or(q);
        };
        let lambda = if x1 != x2 {
            fld.div(fld.sub(y2, y1), fld.sub(x2, x1)).unwrap()
        } else if fld.add(y1, y2).is_zero() {
            return None;
        } else {
            let three = fld.from_int(3);
            let two = fld.from_int(2);
            let num = fld.add(fld.add(fld.mul(three, fld.mul(x1, x1)), fld.mul(two, fld.mul(a2, x1))), a4);
            fld.div(num, fld.mul(two, y1)).unwrap()
        };
        let x3 = fld.sub(fld.sub(fld.sub(fld.mul(lambda, lambda), a2), x1), x2);
        let y3 = fld.neg(fld.add(y1, fld.mul(lambda, fld.sub(x3, x1))));
        Some((x3, y3))
    }

    fn to_rep(m: &HyperellipticModel, p: Pt) -> MumfordRep {
        match p {
            None => MumfordRep::identity(),
            Some((x, y)) => {
                let fld = m.field();
                MumfordRep {
                    u: FqPoly::from_coeffs(vec![fld.neg(x), FieldElement::ONE]),
                    v: FqPoly::constant(y),
                }
            }
        }
    }

    #[test]
    fn agrees_with_chord_tangent_law() {
        for spec in ["p=5; f=x^3+x", "p=7; f=x^3+2*x^2+3*x+1", "p=3; k=2; f=x^3+x"] {
            let m = model(spec);
            let fld = m.field().clone();
            let mut pts: Vec<Pt> = vec![None];
            for x in fld.elements() {
                for y in fld.elements() {
                    if m.equation_at(x, y).is_zero() {
                        pts.push(Some((x, y)));
                    }
                }
            }
            for &p in &pts {
                for &q in &pts {
                    assert_eq!(
                        group_add(&to_rep(&m, p), &to_rep(&m, q), &m),
                        to_rep(&m, chord_tangent(&m, p, q)),
                        "{spec}"
                    );
                }
            }
        }
    }

    #[test]
    fn degree_two_place_reduces_like_conjugate_points() {
        let m = model("p=5; f=x^3+x");
        let big = m.base_change(2, 1_000_000).unwrap();
        let emb = m.field().embedding_into(big.field()).unwrap();
        let t = enumerate_places(&m, 2, 1_000_000).unwrap();
        let mut checked = 0;
        for place in t.of_degree(2) {
            let PlaceKind::Affine { u, v } = &place.kind else { continue };
            let j = place_to_jacobian(place, &m);
            assert!(j.u.deg() <= 1);
            let (ub, vb) = (emb.apply_poly(u), emb.apply_poly(v));
            let fld = big.field();
            let r = big.ring();
            let pts: Vec<Pt> = fld
                .elements()
                .filter(|&x| r.eval(&ub, x).is_zero())
                .map(|x| Some((x, r.eval(&vb, x))))
                .collect();
            assert_eq!(pts.len(), 2);
            let sum = chord_tangent(&big, pts[0], pts[1]);
            let jb = MumfordRep {
                u: emb.apply_poly(&j.u),
                v: emb.apply_poly(&j.v),
            };
            assert_eq!(to_rep(&big, sum), jb);
            checked += 1;
        }
        assert!(checked > 0);
    }

    fn sample(spec: &'static str) -> (HyperellipticModel, Vec<MumfordRep>) {
        let m = model(spec);
        let els = jacobian_elements(&m, 1_000_000).unwrap();
        (m, els)
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]
        #[test]
        fn group_axioms(which in 0usize..CORPUS.len(), i in any::<usize>(), j in any::<usize>(), k in any::<usize>()) {
            let (m, els) = sample(CORPUS[which]);
            let (a, b, c) = (&els[i % els.len()], &els[j % els.len()], &els[k % els.len()]);
            let id = MumfordRep::identity();
            prop_assert_eq!(&group_add(a, &id, &m), a);
            prop_assert!(group_add(a, &group_neg(a, &m), &m).is_identity());
            prop_assert_eq!(group_add(a, b, &m), group_add(b, a, &m));
            prop_assert_eq!(
                group_add(&group_add(a, b, &m), c, &m),
                group_add(a, &group_add(b, c, &m), &m)
            );
            let s = group_add(a, b, &m);
            prop_assert!(s.is_valid(&m));
            let h = BigInt::from(els.len());
            prop_assert!(scalar_mul(a, &h, &m).is_identity());
            prop_assert_eq!(scalar_mul(a, &BigInt::from(-1), &m), group_neg(a, &m));
        }
    }
}
