//! Dense bivariate polynomials in `(T, u)` over the rationals.

use std::fmt;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::qpoly::{format_terms, rat, QPoly, Rational};

/// `c[i][j]` is the coefficient of `T^i u^j`.
///
/// Stored as a rectangle trimmed so that neither the last row nor the last
/// column is entirely zero; the zero polynomial has no rows.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct BiPoly {
    rows: Vec<Vec<Rational>>,
}

impl BiPoly {
    pub fn zero() -> Self {
        BiPoly { rows: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        Self::from_matrix(vec![vec![c]])
    }

    pub fn t() -> Self {
        Self::from_terms(&[(1, 0, 1)])
    }

    pub fn u() -> Self {
        Self::from_terms(&[(0, 1, 1)])
    }

    /// Build from `(T-degree, u-degree, integer coefficient)` triples.
    pub fn from_terms(terms: &[(usize, usize, i64)]) -> Self {
        let mut p = BiPoly::zero();
        for &(i, j, c) in terms {
            p.add_term(i, j, &rat(c));
        }
        p
    }

    pub fn from_matrix(rows: Vec<Vec<Rational>>) -> Self {
        let width = rows.iter().map(Vec::len).max().unwrap_or(0);
        let rows = rows
            .into_iter()
            .map(|mut r| {
                r.resize(width, Rational::zero());
                r
            })
            .collect();
        let mut p = BiPoly { rows };
        p.trim();
        p
    }

    /// `sum_i rows[i](u) T^i`.
    pub fn from_rows(rows: &[QPoly]) -> Self {
        Self::from_matrix(rows.iter().map(|r| r.coeffs().to_vec()).collect())
    }

    /// A polynomial in `T` alone.
    pub fn from_t_poly(p: &QPoly) -> Self {
        Self::from_matrix(p.coeffs().iter().map(|c| vec![c.clone()]).collect())
    }

    /// A polynomial in `u` alone.
    pub fn from_u_poly(p: &QPoly) -> Self {
        Self::from_matrix(vec![p.coeffs().to_vec()])
    }

    fn trim(&mut self) {
        loop {
            let last_row_zero = self.rows.last().is_some_and(|r| r.iter().all(Zero::is_zero));
            if last_row_zero {
                self.rows.pop();
            } else {
                break;
            }
        }
        if self.rows.is_empty() {
            return;
        }
        let mut width = self.rows[0].len();
        while width > 0 && self.rows.iter().all(|r| r[width - 1].is_zero()) {
            width -= 1;
        }
        for r in &mut self.rows {
            r.truncate(width);
        }
    }

    fn width(&self) -> usize {
        self.rows.first().map_or(0, Vec::len)
    }

    pub fn is_zero(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn deg_t(&self) -> Option<usize> {
        self.rows.len().checked_sub(1)
    }

    pub fn deg_u(&self) -> Option<usize> {
        self.width().checked_sub(1)
    }

    /// Total degree, `None` for zero.
    pub fn total_degree(&self) -> Option<usize> {
        self.terms().map(|(i, j, _)| i + j).max()
    }

    pub fn coeff(&self, i: usize, j: usize) -> Rational {
        self.rows
            .get(i)
            .and_then(|r| r.get(j))
            .cloned()
            .unwrap_or_else(Rational::zero)
    }

    /// Row-major coefficient matrix.
    pub fn matrix(&self) -> &[Vec<Rational>] {
        &self.rows
    }

    /// Nonzero terms as `(i, j, c)`.
    pub fn terms(&self) -> impl Iterator<Item = (usize, usize, &Rational)> {
        self.rows.iter().enumerate().flat_map(|(i, r)| {
            r.iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(move |(j, c)| (i, j, c))
        })
    }

    /// Coefficient of `T^i` as a polynomial in `u`.
    pub fn t_coeff(&self, i: usize) -> QPoly {
        self.rows.get(i).map_or_else(QPoly::zero, |r| QPoly::new(r.clone()))
    }

    /// Coefficient of `u^j` as a polynomial in `T`.
    pub fn u_coeff(&self, j: usize) -> QPoly {
        QPoly::new(self.rows.iter().map(|r| r.get(j).cloned().unwrap_or_default()).collect())
    }

    pub fn add_term(&mut self, i: usize, j: usize, c: &Rational) {
        if c.is_zero() {
            return;
        }
        let width = self.width().max(j + 1);
        for r in &mut self.rows {
            r.resize(width, Rational::zero());
        }
        while self.rows.len() <= i {
            self.rows.push(vec![Rational::zero(); width]);
        }
        self.rows[i][j] += c;
        self.trim();
    }

    fn zip(&self, other: &BiPoly, op: impl Fn(Rational, Rational) -> Rational) -> BiPoly {
        let h = self.rows.len().max(other.rows.len());
        let w = self.width().max(other.width());
        let rows = (0..h)
            .map(|i| (0..w).map(|j| op(self.coeff(i, j), other.coeff(i, j))).collect())
            .collect();
        BiPoly::from_matrix(rows)
    }

    pub fn add(&self, other: &BiPoly) -> BiPoly {
        self.zip(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &BiPoly) -> BiPoly {
        self.zip(other, |a, b| a - b)
    }

    pub fn neg(&self) -> BiPoly {
        self.scale(&-Rational::one())
    }

    pub fn scale(&self, c: &Rational) -> BiPoly {
        BiPoly::from_matrix(
            self.rows
                .iter()
                .map(|r| r.iter().map(|x| x * c).collect())
                .collect(),
        )
    }

    pub fn mul(&self, other: &BiPoly) -> BiPoly {
        if self.is_zero() || other.is_zero() {
            return BiPoly::zero();
        }
        let h = self.rows.len() + other.rows.len() - 1;
        let w = self.width() + other.width() - 1;
        let mut out = vec![vec![Rational::zero(); w]; h];
        for (i1, j1, a) in self.terms() {
            for (i2, j2, b) in other.terms() {
                out[i1 + i2][j1 + j2] += a * b;
            }
        }
        BiPoly::from_matrix(out)
    }

    pub fn pow(&self, e: u32) -> BiPoly {
        (0..e).fold(BiPoly::one(), |acc, _| acc.mul(self))
    }

    /// Multiply by `T^a u^b`.
    pub fn shift(&self, a: usize, b: usize) -> BiPoly {
        if self.is_zero() {
            return BiPoly::zero();
        }
        let w = self.width() + b;
        let mut rows = vec![vec![Rational::zero(); w]; a];
        for r in &self.rows {
            let mut row = vec![Rational::zero(); b];
            row.extend(r.iter().cloned());
            rows.push(row);
        }
        BiPoly::from_matrix(rows)
    }

    pub fn derivative_t(&self) -> BiPoly {
        BiPoly::from_matrix(
            self.rows
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, r)| r.iter().map(|c| c * rat(i as i64)).collect())
                .collect(),
        )
    }

    pub fn derivative_u(&self) -> BiPoly {
        BiPoly::from_matrix(
            self.rows
                .iter()
                .map(|r| {
                    r.iter()
                        .enumerate()
                        .skip(1)
                        .map(|(j, c)| c * rat(j as i64))
                        .collect()
                })
                .collect(),
        )
    }

    /// `P(T, value)` as a polynomial in `T`.
    pub fn eval_u(&self, value: &Rational) -> QPoly {
        QPoly::new(
            self.rows
                .iter()
                .map(|r| QPoly::new(r.clone()).eval(value))
                .collect(),
        )
    }

    /// `P(value, u)` as a polynomial in `u`.
    pub fn eval_t(&self, value: &Rational) -> QPoly {
        QPoly::new((0..self.width()).map(|j| self.u_coeff(j).eval(value)).collect())
    }

    pub fn eval(&self, t: &Rational, u: &Rational) -> Rational {
        self.eval_u(u).eval(t)
    }

    /// Exchange the roles of `T` and `u`.
    pub fn swap_vars(&self) -> BiPoly {
        let w = self.width();
        BiPoly::from_matrix(
            (0..w)
                .map(|j| self.rows.iter().map(|r| r[j].clone()).collect())
                .collect(),
        )
    }

    /// Leading term under lex order with `T > u`.
    fn leading(&self) -> Option<(usize, usize)> {
        let i = self.rows.len().checked_sub(1)?;
        let j = self.rows[i].iter().rposition(|c| !c.is_zero())?;
        Some((i, j))
    }

    /// Exact quotient `num / den`.
    ///
    /// Runs multivariate division by a single divisor in lex order; the
    /// remainder is zero exactly when `den` divides `num`, otherwise the
    /// nonzero remainder is returned inside [`Error::NotDivisible`].
    pub fn exact_div(&self, den: &BiPoly) -> Result<BiPoly> {
        let (a, b) = den.leading().ok_or(Error::DivisionByZero)?;
        let lc = den.coeff(a, b);
        let mut rem = self.clone();
        let mut quotient = BiPoly::zero();
        let mut leftover = BiPoly::zero();
        while let Some((i, j)) = rem.leading() {
            let c = rem.coeff(i, j);
            if i >= a && j >= b {
                let factor = &c / &lc;
                quotient.add_term(i - a, j - b, &factor);
                rem = rem.sub(&den.shift(i - a, j - b).scale(&factor));
            } else {
                leftover.add_term(i, j, &c);
                rem.add_term(i, j, &-c);
            }
        }
        if leftover.is_zero() {
            Ok(quotient)
        } else {
            Err(Error::NotDivisible { remainder: leftover })
        }
    }
}

impl fmt::Display for BiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut terms: Vec<(usize, usize, Rational)> =
            self.terms().map(|(i, j, c)| (i, j, c.clone())).collect();
        terms.sort_by_key(|&(i, j, _)| (i, j));
        let rendered = terms.into_iter().map(|(i, j, c)| {
            let t = match i {
                0 => String::new(),
                1 => "T".to_string(),
                _ => format!("T^{i}"),
            };
            let u = match j {
                0 => String::new(),
                1 => "u".to_string(),
                _ => format!("u^{j}"),
            };
            let mono = match (t.is_empty(), u.is_empty()) {
                (true, _) => u,
                (_, true) => t,
                _ => format!("{t}*{u}"),
            };
            (c, mono)
        });
        let v: Vec<_> = rendered.collect();
        f.write_str(&format_terms(v.into_iter()))
    }
}
