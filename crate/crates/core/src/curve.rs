//! Odd-degree hyperelliptic models `y^2 + h(x) y = f(x)` over `F_q`.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::field::{make_extension_field_bounded, FieldDescriptor, FieldElement};
use crate::fq_poly::{FqPoly, FqPolyRing};
use crate::parse::CurveSpec;

/// A validated model with `f` monic of degree `2g+1` and `deg h <= g`.
///
/// Such a model is smooth at its single point at infinity, which is a
/// rational place of degree 1.
#[derive(Clone, Debug)]
pub struct HyperellipticModel {
    ring: FqPolyRing,
    f: FqPoly,
    h: FqPoly,
    genus: usize,
}

impl HyperellipticModel {
    /// Check shape and smoothness, returning the model with its genus.
    ///
    /// Smoothness uses a gcd certificate: in odd characteristic the model is
    /// smooth iff `h^2 + 4f` is squarefree; in characteristic 2 a singular
    /// point sits over a root of `h` where `h'^2 f + f'^2` also vanishes.
    pub fn validate(base: FieldDescriptor, f: FqPoly, h: FqPoly) -> Result<Self> {
        let ring = FqPolyRing::new(base);
        let deg_f = f
            .degree()
            .ok_or_else(|| Error::ModelShape("f must be nonzero".into()))?;
        if deg_f < 3 || deg_f % 2 == 0 {
            return Err(Error::ModelShape(format!(
                "deg f = {deg_f}; need an odd degree of at least 3"
            )));
        }
        if !f.is_monic() {
            return Err(Error::ModelShape("f must be monic".into()));
        }
        let genus = (deg_f - 1) / 2;
        if h.deg() > genus as isize {
            return Err(Error::ModelShape(format!(
                "deg h = {} exceeds the genus {genus}",
                h.deg()
            )));
        }
        let model = HyperellipticModel { ring, f, h, genus };
        model.check_smooth()?;
        Ok(model)
    }

    /// Build the base field and model from a parsed specification.
    pub fn from_spec(spec: &CurveSpec, max_work: u64) -> Result<Self> {
        let field = make_extension_field_bounded(spec.p, spec.k, max_work)?;
        let lift = |cs: &[i64]| FqPoly::from_coeffs(cs.iter().map(|&c| field.from_int(c)).collect());
        let (f, h) = (lift(&spec.f), lift(&spec.h));
        Self::validate(field.clone(), f, h)
    }

    fn check_smooth(&self) -> Result<()> {
        let r = &self.ring;
        let fld = r.field();
        if fld.p() != 2 {
            let four = FqPoly::constant(fld.from_int(4));
            let disc = r.add(&r.mul(&self.h, &self.h), &r.mul(&four, &self.f));
            let g = r.gcd(&disc, &r.derivative(&disc));
            if !g.is_one() {
                return Err(Error::SingularCurve(format!(
                    "gcd(h^2+4f, (h^2+4f)') = {} is not constant",
                    r.format(&g, 'x')
                )));
            }
            return Ok(());
        }
        if self.h.is_zero() {
            return Err(Error::SingularCurve(
                "h = 0 in characteristic 2 is singular at every root of f'".into(),
            ));
        }
        let dh = r.derivative(&self.h);
        let df = r.derivative(&self.f);
        let cert = r.add(&r.mul(&r.mul(&dh, &dh), &self.f), &r.mul(&df, &df));
        let g = r.gcd(&self.h, &cert);
        if !g.is_one() {
            return Err(Error::SingularCurve(format!(
                "gcd(h, h'^2 f + f'^2) = {} is not constant",
                r.format(&g, 'x')
            )));
        }
        Ok(())
    }

    pub fn ring(&self) -> &FqPolyRing {
        &self.ring
    }

    pub fn field(&self) -> &FieldDescriptor {
        self.ring.field()
    }

    pub fn f(&self) -> &FqPoly {
        &self.f
    }

    pub fn h(&self) -> &FqPoly {
        &self.h
    }

    pub fn genus(&self) -> usize {
        self.genus
    }

    /// Order of the base field.
    pub fn q(&self) -> u64 {
        self.field().order() as u64
    }

    /// `y^2 + h y - f` evaluated at an affine point of the base field.
    pub fn equation_at(&self, x: FieldElement, y: FieldElement) -> FieldElement {
        let fld = self.field();
        let lhs = fld.add(fld.mul(y, y), fld.mul(self.ring.eval(&self.h, x), y));
        fld.sub(lhs, self.ring.eval(&self.f, x))
    }

    /// The same equation over `F_{q^m}`, with coefficients pushed through a
    /// fixed embedding of the base field.
    pub fn base_change(&self, m: u32, max_work: u64) -> Result<HyperellipticModel> {
        if m == 0 {
            return Err(Error::InvalidArgument("base-change exponent must be at least 1".into()));
        }
        if m == 1 {
            return Ok(self.clone());
        }
        let base = self.field();
        let big = make_extension_field_bounded(base.p() as u64, base.k() * m, max_work)?;
        let emb = base.embedding_into(&big)?;
        HyperellipticModel::validate(big, emb.apply_poly(&self.f), emb.apply_poly(&self.h))
    }

    /// `|X(F_{q^m})|`: one point at infinity plus the affine solutions,
    /// found by running over every `x` in `F_{q^m}`.
    pub fn count_points(&self, m: u32, max_work: u64) -> Result<u64> {
        let lifted = self.base_change(m, max_work)?;
        Ok(1 + lifted.count_affine_points())
    }

    fn count_affine_points(&self) -> u64 {
        let fld = self.field();
        let r = &self.ring;
        let two_char = fld.p() == 2;
        let four = fld.from_int(4);
        (0..fld.order())
            .into_par_iter()
            .map(|i| {
                let x = fld.element(i);
                let hx = r.eval(&self.h, x);
                let fx = r.eval(&self.f, x);
                if two_char {
                    if hx.is_zero() {
                        return 1;
                    }
                    let hx2 = fld.mul(hx, hx);
                    let c = fld.div(fx, hx2).expect("hx is nonzero");
                    if fld.trace(c) == 0 {
                        2
                    } else {
                        0
                    }
                } else {
                    let disc = fld.add(fld.mul(hx, hx), fld.mul(four, fx));
                    if disc.is_zero() {
                        1
                    } else if fld.is_square(disc) {
                        2
                    } else {
                        0
                    }
                }
            })
            .sum()
    }

    /// `y^2 + h(x) y = f(x)` rendered with the base field's element notation.
    pub fn describe(&self) -> String {
        let r = &self.ring;
        let fld = self.field();
        let lhs = if self.h.is_zero() {
            "y^2".to_string()
        } else {
            format!("y^2 + ({})*y", r.format(&self.h, 'x'))
        };
        format!(
            "{lhs} = {} over F_{}",
            r.format(&self.f, 'x'),
            fld.order()
        )
    }
}
