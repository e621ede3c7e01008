//! Arithmetic in `F_p[z]/psi` for a word-sized prime `p`, used to certify
//! full rank cheaply before falling back to exact elimination.

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};

use crate::qpoly::{QPoly, Rational};

use std::sync::OnceLock;

use crate::field::is_prime;

/// The largest primes below `2^31`, in decreasing order.
pub(crate) fn primes() -> &'static [u64] {
    static PRIMES: OnceLock<Vec<u64>> = OnceLock::new();
    PRIMES.get_or_init(|| (1u64 << 20..1u64 << 31).rev().filter(|&n| is_prime(n)).take(48).collect())
}

type Poly = Vec<u64>;

fn pow_mod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    r
}

fn inv_mod(a: u64, p: u64) -> u64 {
    pow_mod(a, p - 2, p)
}

fn big_mod(n: &BigInt, p: u64) -> u64 {
    let r = n % BigInt::from(p);
    let r = if r < BigInt::zero() { r + p } else { r };
    r.to_u64().expect("residue fits")
}

fn trim(mut a: Poly) -> Poly {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

/// `F_p[z]/psi` with `psi` monic.
pub(crate) struct ModRing {
    p: u64,
    psi: Poly,
}

impl ModRing {
    /// `None` when `p` divides a denominator of `psi`.
    pub fn new(psi: &QPoly, p: u64) -> Option<Self> {
        let r = ModRing { p, psi: Vec::new() };
        let psi = r.embed(psi)?;
        Some(ModRing { p, psi })
    }

    /// The ring modulo a monic factor of this ring's modulus.
    fn quotient(&self, psi: Poly) -> Self {
        ModRing { p: self.p, psi }
    }

    #[cfg(test)]
    pub fn modulus(&self) -> &Poly {
        &self.psi
    }

    pub fn rational(&self, c: &Rational) -> Option<u64> {
        let d = big_mod(c.denom(), self.p);
        (d != 0).then(|| big_mod(c.numer(), self.p) * inv_mod(d, self.p) % self.p)
    }

    pub fn embed(&self, q: &QPoly) -> Option<Poly> {
        let v: Option<Poly> = q.coeffs().iter().map(|c| self.rational(c)).collect();
        let v = trim(v?);
        Some(if self.psi.is_empty() { v } else { self.rem(v) })
    }

    pub fn constant(&self, c: u64) -> Poly {
        trim(vec![c % self.p])
    }

    pub fn var(&self) -> Poly {
        self.rem(vec![0, 1])
    }

    fn rem_by(&self, mut a: Poly, m: &Poly) -> Poly {
        let dm = m.len() - 1;
        let lead_inv = inv_mod(m[dm], self.p);
        while a.len() > dm {
            let top = a.len() - 1;
            let c = a[top] * lead_inv % self.p;
            if c != 0 {
                for (i, &mi) in m.iter().enumerate() {
                    let idx = top - dm + i;
                    a[idx] = (a[idx] + self.p - c * mi % self.p) % self.p;
                }
            }
            a.pop();
            a = trim(a);
        }
        a
    }

    fn rem(&self, a: Poly) -> Poly {
        self.rem_by(trim(a), &self.psi)
    }

    pub fn add(&self, a: &Poly, b: &Poly) -> Poly {
        let mut out = vec![0; a.len().max(b.len())];
        for (i, o) in out.iter_mut().enumerate() {
            *o = (a.get(i).unwrap_or(&0) + b.get(i).unwrap_or(&0)) % self.p;
        }
        trim(out)
    }

    pub fn sub(&self, a: &Poly, b: &Poly) -> Poly {
        let mut out = vec![0; a.len().max(b.len())];
        for (i, o) in out.iter_mut().enumerate() {
            *o = (a.get(i).unwrap_or(&0) + self.p - b.get(i).unwrap_or(&0)) % self.p;
        }
        trim(out)
    }

    pub fn mul(&self, a: &Poly, b: &Poly) -> Poly {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut out = vec![0; a.len() + b.len() - 1];
        for (i, &x) in a.iter().enumerate() {
            for (j, &y) in b.iter().enumerate() {
                out[i + j] = (out[i + j] + x * y) % self.p;
            }
        }
        self.rem(out)
    }

    /// Inverse modulo `psi`, or `None` for a zero divisor.
    pub fn inv(&self, a: &Poly) -> Option<Poly> {
        let (mut r0, mut r1) = (self.psi.clone(), a.clone());
        let (mut s0, mut s1): (Poly, Poly) = (Vec::new(), vec![1]);
        while !r1.is_empty() {
            let (q, r) = self.div_rem(&r0, &r1);
            let s = self.sub(&s0, &self.raw_mul(&q, &s1));
            r0 = std::mem::replace(&mut r1, r);
            s0 = std::mem::replace(&mut s1, s);
        }
        if r0.len() != 1 {
            return None;
        }
        let c = inv_mod(r0[0], self.p);
        Some(self.rem(s0.iter().map(|x| x * c % self.p).collect()))
    }

    fn raw_mul(&self, a: &Poly, b: &Poly) -> Poly {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut out = vec![0; a.len() + b.len() - 1];
        for (i, &x) in a.iter().enumerate() {
            for (j, &y) in b.iter().enumerate() {
                out[i + j] = (out[i + j] + x * y) % self.p;
            }
        }
        trim(out)
    }

    fn monic(&self, a: Poly) -> Poly {
        let c = inv_mod(*a.last().expect("nonzero"), self.p);
        a.into_iter().map(|x| x * c % self.p).collect()
    }

    /// Monic gcd of `a` with the modulus.
    pub fn common_factor(&self, a: &Poly) -> Poly {
        self.gcd(&self.psi, a)
    }

    fn gcd(&self, a: &Poly, b: &Poly) -> Poly {
        let (mut r0, mut r1) = (a.clone(), b.clone());
        while !r1.is_empty() {
            let r = self.div_rem(&r0, &r1).1;
            r0 = std::mem::replace(&mut r1, r);
        }
        self.monic(r0)
    }

    fn div_rem(&self, a: &Poly, b: &Poly) -> (Poly, Poly) {
        let db = b.len() - 1;
        let lead_inv = inv_mod(b[db], self.p);
        let mut r = a.clone();
        let mut q = vec![0; a.len().saturating_sub(db)];
        while r.len() > db {
            let top = r.len() - 1;
            let c = r[top] * lead_inv % self.p;
            q[top - db] = c;
            for (i, &bi) in b.iter().enumerate() {
                let idx = top - db + i;
                r[idx] = (r[idx] + self.p - c * bi % self.p) % self.p;
            }
            r.pop();
            r = trim(r);
        }
        (trim(q), r)
    }
}

/// Truncated power series with coefficients in a [`ModRing`].
pub(crate) fn series_mul(ring: &ModRing, a: &[Poly], b: &[Poly], prec: usize) -> Vec<Poly> {
    let mut out = vec![Vec::new(); prec];
    for (i, x) in a.iter().enumerate().take(prec) {
        if x.is_empty() {
            continue;
        }
        for (j, y) in b.iter().enumerate().take(prec - i) {
            if !y.is_empty() {
                out[i + j] = ring.add(&out[i + j], &ring.mul(x, y));
            }
        }
    }
    out
}

fn series_inv(ring: &ModRing, a: &[Poly], prec: usize) -> Option<Vec<Poly>> {
    let a0 = ring.inv(&a[0])?;
    let mut out = vec![Vec::new(); prec];
    out[0] = a0.clone();
    for k in 1..prec {
        let mut acc = Vec::new();
        for i in 1..=k.min(a.len() - 1) {
            acc = ring.add(&acc, &ring.mul(&a[i], &out[k - i]));
        }
        out[k] = ring.mul(&ring.sub(&Vec::new(), &acc), &a0);
    }
    Some(out)
}

fn eval_series(ring: &ModRing, coeffs: &[Vec<Poly>], y: &[Poly], prec: usize) -> Vec<Poly> {
    let mut acc = vec![Vec::new(); prec];
    for c in coeffs.iter().rev() {
        acc = series_mul(ring, &acc, y, prec);
        for (x, ck) in acc.iter_mut().zip(c) {
            *x = ring.add(x, ck);
        }
    }
    acc
}

/// Branch `y(s)` with `y(0) = z`; `None` if the derivative is not a unit.
pub(crate) fn lift_branch(ring: &ModRing, coeffs: &[QPoly], prec: usize) -> Option<Vec<Poly>> {
    let embed_series = |c: &QPoly| -> Option<Vec<Poly>> {
        (0..prec).map(|k| ring.rational(&c.coeff(k)).map(|v| ring.constant(v))).collect()
    };
    let f: Vec<Vec<Poly>> = coeffs.iter().map(embed_series).collect::<Option<_>>()?;
    let fu: Vec<Vec<Poly>> = f
        .iter()
        .enumerate()
        .skip(1)
        .map(|(b, c)| c.iter().map(|x| ring.mul(x, &ring.constant(b as u64))).collect())
        .collect();
    let mut y = vec![ring.var()];
    let mut p = 1;
    while p < prec {
        p = (2 * p).min(prec);
        y.resize(p, Vec::new());
        let num = eval_series(ring, &f, &y, p);
        let den = series_inv(ring, &eval_series(ring, &fu, &y, p), p)?;
        let step = series_mul(ring, &num, &den, p);
        for (yk, sk) in y.iter_mut().zip(&step) {
            *yk = ring.sub(yk, sk);
        }
    }
    Some(y)
}

/// True when Gaussian elimination finds a unit pivot in every column.
/// Full rank with unit pivots modulo `p` forces a maximal minor whose norm
/// is nonzero, hence full rank over every root of `psi`.
pub(crate) fn unit_full_rank(ring: &ModRing, mut rows: Vec<Vec<Poly>>, ncols: usize) -> bool {
    let mut r = 0;
    for c in 0..ncols {
        let Some((i, inv)) = (r..rows.len()).find_map(|i| {
            if rows[i][c].is_empty() {
                None
            } else {
                ring.inv(&rows[i][c]).map(|inv| (i, inv))
            }
        }) else {
            return false;
        };
        rows.swap(r, i);
        let prow: Vec<Poly> = rows[r].iter().map(|x| ring.mul(x, &inv)).collect();
        for row in rows.iter_mut().skip(r + 1) {
            if row[c].is_empty() {
                continue;
            }
            let f = row[c].clone();
            for (x, y) in row.iter_mut().zip(&prow).skip(c) {
                if !y.is_empty() {
                    *x = ring.sub(x, &ring.mul(&f, y));
                }
            }
        }
        r += 1;
    }
    true
}

/// The kernel vector when it is one-dimensional and elimination only meets
/// unit pivots; `Some(None)` when the columns are independent, `None` when
/// this prime gives no clean answer.
pub(crate) fn kernel_line(ring: &ModRing, mut rows: Vec<Vec<Poly>>, ncols: usize) -> Option<Option<Vec<Poly>>> {
    let mut pivots = Vec::new();
    let mut r = 0;
    let mut free = Vec::new();
    for c in 0..ncols {
        let mut unit = None;
        let mut other = false;
        for i in r..rows.len() {
            if rows[i][c].is_empty() {
                continue;
            }
            match ring.inv(&rows[i][c]) {
                Some(inv) => {
                    unit = Some((i, inv));
                    break;
                }
                None => other = true,
            }
        }
        let Some((i, inv)) = unit else {
            if other {
                return None;
            }
            free.push(c);
            continue;
        };
        rows.swap(r, i);
        let prow: Vec<Poly> = rows[r].iter().map(|x| ring.mul(x, &inv)).collect();
        for (k, row) in rows.iter_mut().enumerate() {
            if k == r || row[c].is_empty() {
                continue;
            }
            let f = row[c].clone();
            for (x, y) in row.iter_mut().zip(&prow) {
                if !y.is_empty() {
                    *x = ring.sub(x, &ring.mul(&f, y));
                }
            }
        }
        rows[r] = prow;
        pivots.push(c);
        r += 1;
    }
    match free.as_slice() {
        [] => Some(None),
        [f] => {
            let mut v = vec![Vec::new(); ncols];
            v[*f] = ring.constant(1);
            for (k, &pc) in pivots.iter().enumerate() {
                v[pc] = ring.sub(&Vec::new(), &rows[k][*f]);
            }
            Some(Some(v))
        }
        _ => None,
    }
}

/// Monic factor of the modulus collecting the roots where the columns are
/// dependent, found by elimination that splits the modulus at every
/// zero-divisor pivot.
pub(crate) fn deficient_factor(ring: &ModRing, mut rows: Vec<Vec<Poly>>, ncols: usize) -> Poly {
    let mut r = 0;
    for c in 0..ncols {
        let mut unit = None;
        for i in r..rows.len() {
            if rows[i][c].is_empty() {
                continue;
            }
            match ring.inv(&rows[i][c]) {
                Some(inv) => {
                    unit = Some((i, inv));
                    break;
                }
                None => {
                    let g = ring.gcd(&ring.psi, &rows[i][c]);
                    let h = ring.div_rem(&ring.psi, &g).0;
                    let mut out = vec![1];
                    for part in [g, h] {
                        let sub = ring.quotient(part);
                        let reduced = rows.iter().map(|row| row.iter().map(|x| sub.rem(x.clone())).collect()).collect();
                        out = ring.raw_mul(&out, &deficient_factor(&sub, reduced, ncols));
                    }
                    return out;
                }
            }
        }
        let Some((i, inv)) = unit else {
            return ring.psi.clone();
        };
        rows.swap(r, i);
        let prow: Vec<Poly> = rows[r].iter().map(|x| ring.mul(x, &inv)).collect();
        for row in rows.iter_mut().skip(r + 1) {
            if row[c].is_empty() {
                continue;
            }
            let f = row[c].clone();
            for (x, y) in row.iter_mut().zip(&prow).skip(c) {
                if !y.is_empty() {
                    *x = ring.sub(x, &ring.mul(&f, y));
                }
            }
        }
        r += 1;
    }
    vec![1]
}

/// Rational `a/b` with `a = r * b (mod m)` and `|a|, b <= sqrt(m/2)`.
pub(crate) fn rational_reconstruct(r: &BigInt, m: &BigInt) -> Option<Rational> {
    let bound = (m / 2u32).sqrt();
    let (mut r0, mut r1) = (m.clone(), ((r % m) + m) % m);
    let (mut t0, mut t1) = (BigInt::zero(), BigInt::from(1));
    while r1 > bound {
        let q = &r0 / &r1;
        let r2 = &r0 - &q * &r1;
        let t2 = &t0 - &q * &t1;
        r0 = std::mem::replace(&mut r1, r2);
        t0 = std::mem::replace(&mut t1, t2);
    }
    if t1.is_zero() || t1.magnitude() > bound.magnitude() {
        return None;
    }
    Some(Rational::new(r1, t1))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qpoly::rat;

    #[test]
    fn inverses_modulo_psi() {
        let psi = QPoly::from_ints(&[-2, 0, 1]);
        let ring = ModRing::new(&psi, primes()[0]).unwrap();
        let a = ring.embed(&QPoly::from_ints(&[3, 5])).unwrap();
        let inv = ring.inv(&a).unwrap();
        assert_eq!(ring.mul(&a, &inv), vec![1]);
        let half = ring.rational(&(rat(1) / rat(2))).unwrap();
        assert_eq!(half * 2 % primes()[0], 1);
        // z - 1 divides z^2 - 1.
        let ring = ModRing::new(&QPoly::from_ints(&[-1, 0, 1]), primes()[1]).unwrap();
        assert!(ring.inv(&ring.embed(&QPoly::from_ints(&[-1, 1])).unwrap()).is_none());
    }

    #[test]
    fn splits_off_dependent_roots() {
        // Modulo z^2 - z the second column dies exactly at z = 0.
        let ring = ModRing::new(&QPoly::from_ints(&[0, -1, 1]), primes()[0]).unwrap();
        let (one, z) = (ring.constant(1), ring.var());
        let rows = vec![vec![one.clone(), Vec::new()], vec![Vec::new(), z.clone()]];
        assert_eq!(deficient_factor(&ring, rows, 2), vec![0, 1]);
        let rows = vec![vec![one.clone(), Vec::new()], vec![Vec::new(), one.clone()]];
        assert_eq!(deficient_factor(&ring, rows, 2), vec![1]);
        assert_eq!(deficient_factor(&ring, vec![vec![Vec::new()]], 1), ring.modulus().clone());
    }

    #[test]
    fn reconstructs_small_fractions() {
        let m = BigInt::from(primes()[0]) * BigInt::from(primes()[1]);
        let x = Rational::new(BigInt::from(-37), BigInt::from(1234));
        let inv = BigInt::from(1234).modinv(&m).unwrap();
        let r = (BigInt::from(-37) * inv % &m + &m) % &m;
        assert_eq!(rational_reconstruct(&r, &m), Some(x));
        assert_eq!(primes().len(), 48);
        assert!(primes().windows(2).all(|w| w[0] > w[1]));
    }
}
