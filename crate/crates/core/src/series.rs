//! Truncated Taylor expansion of `num(T) / prod (1 - c_i T)`.

use num_traits::Zero;

use crate::qpoly::{QPoly, Rational};

/// First `order + 1` Taylor coefficients of `num / prod_i (1 - c_i T)`.
///
/// Each factor `1/(1 - cT)` is applied as the recurrence
/// `a_n <- a_n + c a_{n-1}`, which is exact over the rationals.
pub fn series_expand_rational(num: &QPoly, factors: &[Rational], order: usize) -> Vec<Rational> {
    let mut coeffs: Vec<Rational> = (0..=order).map(|i| num.coeff(i)).collect();
    for c in factors {
        if c.is_zero() {
            continue;
        }
        for n in 1..=order {
            let prev = coeffs[n - 1].clone();
            coeffs[n] += c * prev;
        }
    }
    coeffs
}
