//! Independent count of absolutely irreducible factors from a power-series
//! branch.
//!
//! Pick `t0` so that `psi(u) = P(t0, u)` is squarefree of full degree and
//! work in `R = Q[z]/psi`, where `z` stands for every root of `psi` at once.
//! Lift the branch `u = y(s)` of `P(t0 + s, u) = 0` with `y(0) = z`. The
//! factor of `P` through `(t0, z)` is irreducible over `Q(z)` with a smooth
//! rational point, hence absolutely irreducible, and its `u`-degree `e` is
//! the least `e` admitting a nonzero `C(T, u)` with `deg_T C <= m`,
//! `deg_u C <= e` and `C(t0 + s, y(s)) = O(s^N)`, `N = m (n + e) + 1`
//! (a resultant argument shows such `C` is a multiple of the factor). Each
//! root contributes `1/e` factors. `psi` is split whenever a pivot turns out
//! to be a zero divisor, so every root of one piece behaves alike.
//!
//! Most of the work runs modulo word-sized primes. Full rank is certified by
//! unit pivots, factors are rebuilt by rational reconstruction and proven by
//! exact division, and splittings of `psi` are kept only when they divide it
//! over `Q`. Exact elimination over `Q[z]/psi` is the last resort.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::linalg::nullspace;
use super::modp::{self, primes, ModRing};
use crate::bipoly::BiPoly;
use crate::error::{Error, Result};
use crate::qpoly::{rat, QPoly, Rational};

/// Arithmetic in `Q[z]/psi`.
#[derive(Clone, Debug)]
struct Ring {
    psi: QPoly,
}

impl Ring {
    fn reduce(&self, a: &QPoly) -> QPoly {
        a.rem(&self.psi)
    }

    fn mul(&self, a: &QPoly, b: &QPoly) -> QPoly {
        self.reduce(&a.mul(b))
    }

    /// `None` when `a` is a zero divisor.
    fn inv(&self, a: &QPoly) -> Option<QPoly> {
        let (g, s, _) = a.xgcd(&self.psi);
        (g.degree() == Some(0)).then(|| self.reduce(&s))
    }

    fn series_mul(&self, a: &[QPoly], b: &[QPoly], prec: usize) -> Vec<QPoly> {
        let mut out = vec![QPoly::zero(); prec];
        for (i, x) in a.iter().enumerate().take(prec) {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.iter().enumerate().take(prec - i) {
                if !y.is_zero() {
                    out[i + j] = out[i + j].add(&x.mul(y));
                }
            }
        }
        out.iter().map(|c| self.reduce(c)).collect()
    }

    fn series_inv(&self, a: &[QPoly], prec: usize) -> Vec<QPoly> {
        let a0 = self.inv(&a[0]).expect("unit constant term");
        let mut out = vec![QPoly::zero(); prec];
        out[0] = a0.clone();
        for k in 1..prec {
            let mut acc = QPoly::zero();
            for i in 1..=k.min(a.len() - 1) {
                acc = acc.add(&a[i].mul(&out[k - i]));
            }
            out[k] = self.mul(&self.reduce(&acc).neg(), &a0);
        }
        out
    }

    /// `sum_b coeffs[b](s) y^b` by Horner's rule.
    fn eval_series(&self, coeffs: &[QPoly], y: &[QPoly], prec: usize) -> Vec<QPoly> {
        let mut acc = vec![QPoly::zero(); prec];
        for c in coeffs.iter().rev() {
            acc = self.series_mul(&acc, y, prec);
            for (k, x) in acc.iter_mut().enumerate() {
                let ck = c.coeff(k);
                if !ck.is_zero() {
                    *x = x.add(&QPoly::constant(ck));
                }
            }
        }
        acc
    }
}

/// `core(t0 + s, u)` as `u`-coefficients, each a polynomial in `s`.
fn shifted_u_coeffs(core: &BiPoly, t0: &Rational) -> Vec<QPoly> {
    let n = core.deg_u().unwrap_or(0);
    (0..=n).map(|b| core.u_coeff(b).shift(t0)).collect()
}

/// Power-series root `y(s)` with `y(0) = z`, to precision `prec`.
fn lift_branch(ring: &Ring, coeffs: &[QPoly], prec: usize) -> Result<Vec<QPoly>> {
    let deriv: Vec<QPoly> = coeffs
        .iter()
        .enumerate()
        .skip(1)
        .map(|(b, c)| c.scale(&rat(b as i64)))
        .collect();
    let mut y = vec![ring.reduce(&QPoly::var())];
    let mut p = 1;
    while p < prec {
        p = (2 * p).min(prec);
        y.resize(p, QPoly::zero());
        let f = ring.eval_series(coeffs, &y, p);
        let fu = ring.eval_series(&deriv, &y, p);
        let step = ring.series_mul(&f, &ring.series_inv(&fu, p), p);
        for (yk, sk) in y.iter_mut().zip(&step) {
            *yk = ring.reduce(&yk.sub(sk));
        }
    }
    if ring.eval_series(coeffs, &y, prec).iter().any(|c| !c.is_zero()) {
        return Err(Error::Consistency("power-series branch failed to lift".into()));
    }
    Ok(y)
}

/// Outcome of row reduction on one piece of `psi`.
struct Piece {
    psi: QPoly,
    rank: usize,
}

/// Rank of `rows` over each field-like piece of `Q[z]/psi`.
fn rank_split(psi: QPoly, rows: Vec<Vec<QPoly>>, ncols: usize) -> Vec<Piece> {
    let mut out = Vec::new();
    let mut stack = vec![(psi, rows, 0usize, 0usize)];
    'outer: while let Some((psi, mut rows, mut r, start)) = stack.pop() {
        let ring = Ring { psi: psi.clone() };
        for c in start..ncols {
            let mut pivot = None;
            let mut divisor = None;
            for (i, row) in rows.iter().enumerate().skip(r) {
                if row[c].is_zero() {
                    continue;
                }
                match ring.inv(&row[c]) {
                    Some(inv) => {
                        pivot = Some((i, inv));
                        break;
                    }
                    None => divisor = divisor.or(Some(row[c].clone())),
                }
            }
            match (pivot, divisor) {
                (Some((i, inv)), _) => {
                    rows.swap(r, i);
                    let prow: Vec<QPoly> = rows[r].iter().map(|x| ring.mul(x, &inv)).collect();
                    for row in rows.iter_mut().skip(r + 1) {
                        if row[c].is_zero() {
                            continue;
                        }
                        let f = row[c].clone();
                        for (x, y) in row.iter_mut().zip(&prow).skip(c) {
                            if !y.is_zero() {
                                *x = ring.reduce(&x.sub(&f.mul(y)));
                            }
                        }
                    }
                    rows[r] = prow;
                    r += 1;
                    if r == rows.len() {
                        break;
                    }
                }
                (None, Some(a)) => {
                    let d = a.gcd(&psi);
                    let rest = psi.div_rem(&d).0.monic();
                    for part in [d, rest] {
                        let sub = Ring { psi: part.clone() };
                        let reduced = rows
                            .iter()
                            .map(|row| row.iter().map(|x| sub.reduce(x)).collect())
                            .collect();
                        stack.push((part, reduced, r, c));
                    }
                    continue 'outer;
                }
                (None, None) => {}
            }
        }
        out.push(Piece { psi, rank: r });
    }
    out
}

/// Squarefree part of the content, counted by its degree.
fn content_count(c: &QPoly) -> Result<usize> {
    if !c.is_squarefree() {
        return Err(Error::Precondition(format!(
            "content {} has a repeated factor",
            c.to_string_in("x")
        )));
    }
    Ok(c.degree().unwrap_or(0))
}

pub(crate) fn u_content(p: &BiPoly) -> QPoly {
    (0..=p.deg_t().unwrap_or(0)).fold(QPoly::zero(), |acc, i| acc.gcd(&p.t_coeff(i)))
}

pub(crate) fn t_content(p: &BiPoly) -> QPoly {
    (0..=p.deg_u().unwrap_or(0)).fold(QPoly::zero(), |acc, j| acc.gcd(&p.u_coeff(j)))
}

/// Number of absolutely irreducible factors of a squarefree `p`, with an
/// explicit factor pair when one is found over `Q`.
pub fn components_factor_count(p: &BiPoly) -> Result<(usize, Option<(BiPoly, BiPoly)>)> {
    if p.is_zero() {
        return Err(Error::Precondition("the zero polynomial has no factorization".into()));
    }
    let cu = u_content(p);
    let ct = t_content(p);
    let mut count = content_count(&cu)? + content_count(&ct)?;
    let contents = BiPoly::from_u_poly(&cu).mul(&BiPoly::from_t_poly(&ct));
    let core = p.exact_div(&contents)?;
    let mut witness = None;
    for c in [BiPoly::from_u_poly(&cu), BiPoly::from_t_poly(&ct)] {
        if witness.is_none() && c.total_degree().unwrap_or(0) > 0 && c.total_degree() != p.total_degree() {
            witness = Some((c.clone(), p.exact_div(&c)?));
        }
    }
    let (Some(m), Some(n)) = (core.deg_t(), core.deg_u()) else {
        return Ok((count, witness));
    };
    if m == 0 || n == 0 {
        return Ok((count, witness));
    }
    let lead = core.u_coeff(n);
    let candidates = (0..).map(|k: i64| if k % 2 == 0 { -(k / 2) } else { k / 2 + 1 });
    let bound = 2 * (2 * n * m + m + 1) + 1;
    let t0 = candidates
        .take(bound)
        .map(rat)
        .find(|t| !lead.eval(t).is_zero() && core.eval_t(t).is_squarefree())
        .ok_or_else(|| Error::Precondition("polynomial is not squarefree".into()))?;
    let psi = core.eval_t(&t0).monic();
    let coeffs = shifted_u_coeffs(&core, &t0);
    let tpows: Vec<QPoly> = (0..=m)
        .map(|a| QPoly::new(vec![t0.clone(), Rational::one()]).pow(a as u32))
        .collect();
    let mut pending = Vec::new();
    let mut rest = psi.clone();
    for r in rational_roots(&rest) {
        let lin = QPoly::new(vec![-r, Rational::one()]);
        rest = rest.div_rem(&lin).0;
        pending.push(lin);
    }
    if rest.degree() != Some(0) {
        pending.push(rest);
    }
    let mut total = Rational::zero();
    for e in 1..=n {
        let prec = m * (n + e) + 1;
        let mut next = Vec::new();
        while let Some(piece) = pending.pop() {
            // P itself vanishes on every branch.
            if e == n {
                total += Rational::new(piece.degree().unwrap_or(0).into(), e.into());
                continue;
            }
            if certify_full_rank(&piece, &coeffs, &tpows, e, prec) {
                next.push(piece);
                continue;
            }
            if let Some(h) = certified_factor(&piece, &coeffs, &tpows, &core, &t0, e, prec) {
                let d = piece.degree().unwrap_or(0);
                total += Rational::new(d.into(), e.into());
                if witness.is_none() && d == 1 {
                    let mut factor = BiPoly::zero();
                    for (a, b, c) in &h {
                        factor.add_term(*a, *b, &c.coeff(0));
                    }
                    witness = Some((factor.clone(), p.exact_div(&factor)?));
                }
                continue;
            }
            if let Some(g) = split_piece(&piece, &coeffs, &tpows, e, prec) {
                pending.push(piece.div_rem(&g).0);
                pending.push(g);
                continue;
            }
            let ring = Ring { psi: piece.clone() };
            let y = lift_branch(&ring, &coeffs, prec)?;
            let powers = |r: &Ring| -> Vec<Vec<QPoly>> {
                let mut one = vec![QPoly::zero(); prec];
                one[0] = QPoly::one();
                let mut out = vec![one];
                for b in 1..=e {
                    out.push(r.series_mul(&out[b - 1], &y, prec));
                }
                out
            };
            let ypows = powers(&ring);
            let ncols = (m + 1) * (e + 1);
            let mut rows = vec![vec![QPoly::zero(); ncols]; prec];
            for a in 0..=m {
                let ta: Vec<QPoly> = (0..prec).map(|k| QPoly::constant(tpows[a].coeff(k))).collect();
                for b in 0..=e {
                    let col = ring.series_mul(&ta, &ypows[b], prec);
                    for (k, v) in col.into_iter().enumerate() {
                        rows[k][a * (e + 1) + b] = v;
                    }
                }
            }
            for split in rank_split(piece, rows.clone(), ncols) {
                if split.rank < ncols {
                    let d = split.psi.degree().unwrap_or(0);
                    total += Rational::new(d.into(), e.into());
                    if witness.is_none() && d == 1 {
                        witness = linear_witness(&split.psi, &rows, ncols, m, e, &core, p)?;
                    }
                } else {
                    next.push(split.psi);
                }
            }
        }
        pending = next;
        if pending.is_empty() {
            break;
        }
    }
    if !pending.is_empty() || !total.is_integer() {
        return Err(Error::Consistency(format!(
            "branch analysis left {} unresolved pieces and a count of {total}",
            pending.len()
        )));
    }
    count += total.to_integer().try_into().unwrap_or(usize::MAX);
    Ok((count, witness))
}

/// Branch matrix modulo a prime: row `k` holds the `s^k` coefficients of
/// `(t0 + s)^a y(s)^b` for `a <= amax`, `b <= e`, column `a (e + 1) + b`.
fn mod_matrix(ring: &ModRing, coeffs: &[QPoly], tpows: &[QPoly], amax: usize, e: usize, prec: usize) -> Option<Vec<Vec<Vec<u64>>>> {
    let y = modp::lift_branch(ring, coeffs, prec)?;
    let mut one = vec![Vec::new(); prec];
    one[0] = ring.constant(1);
    let mut ypows = vec![one];
    for b in 1..=e {
        let next = modp::series_mul(ring, &ypows[b - 1], &y, prec);
        ypows.push(next);
    }
    let ncols = (amax + 1) * (e + 1);
    let mut rows = vec![vec![Vec::new(); ncols]; prec];
    for (a, ta) in tpows.iter().enumerate().take(amax + 1) {
        let ta: Vec<Vec<u64>> = (0..prec)
            .map(|k| ring.rational(&ta.coeff(k)).map(|v| ring.constant(v)))
            .collect::<Option<_>>()?;
        for (b, yb) in ypows.iter().enumerate() {
            for (k, v) in modp::series_mul(ring, &ta, yb, prec).into_iter().enumerate() {
                rows[k][a * (e + 1) + b] = v;
            }
        }
    }
    Some(rows)
}

/// Full column rank of the branch matrix on every root of `psi`, shown by
/// elimination modulo a word-sized prime. `false` only means unproven.
fn certify_full_rank(psi: &QPoly, coeffs: &[QPoly], tpows: &[QPoly], e: usize, prec: usize) -> bool {
    let m = tpows.len() - 1;
    primes().iter().take(3).any(|&prime| {
        ModRing::new(psi, prime)
            .and_then(|ring| mod_matrix(&ring, coeffs, tpows, m, e, prec).map(|rows| (ring, rows)))
            .is_some_and(|(ring, rows)| modp::unit_full_rank(&ring, rows, (m + 1) * (e + 1)))
    })
}

/// A factor `H` over `Q[z]/psi` through the branch, with `deg_u H <= e`,
/// as `(a, b, coefficient of T^a u^b)`. Found modulo many primes, rebuilt by
/// rational reconstruction, then proven exactly: `H(t0, z) = 0`, `H` has a
/// unit leading coefficient and divides `core`.
fn certified_factor(
    psi: &QPoly,
    coeffs: &[QPoly],
    tpows: &[QPoly],
    core: &BiPoly,
    t0: &Rational,
    e: usize,
    prec: usize,
) -> Option<Vec<(usize, usize, QPoly)>> {
    let m = tpows.len() - 1;
    let d = psi.degree()?;
    let kernel = |prime: u64, amax: usize| -> Option<(ModRing, Option<Vec<Vec<u64>>>)> {
        let ring = ModRing::new(psi, prime)?;
        let rows = mod_matrix(&ring, coeffs, tpows, amax, e, prec)?;
        let line = modp::kernel_line(&ring, rows, (amax + 1) * (e + 1))?;
        Some((ring, line))
    };
    // Least T-degree carrying a kernel; there the kernel is spanned by H.
    let amax = (0..=m).find_map(|a| match kernel(primes()[0], a) {
        Some((_, None)) => None,
        Some((_, Some(_))) => Some(Some(a)),
        None => Some(None),
    })??;
    let lead_of = |v: &[Vec<u64>]| {
        (0..v.len())
            .filter(|&c| !v[c].is_empty())
            .max_by_key(|&c| (c % (e + 1), c / (e + 1)))
    };
    let ncols = (amax + 1) * (e + 1);
    let mut crt = Crt::new(ncols * d);
    let mut lead = None;
    let mut previous: Option<Vec<QPoly>> = None;
    for &prime in primes() {
        let Some((ring, Some(v))) = kernel(prime, amax) else { continue };
        let l = lead_of(&v)?;
        if *lead.get_or_insert(l) != l {
            continue;
        }
        let Some(scale) = ring.inv(&v[l]) else { continue };
        let flat: Vec<u64> = v
            .iter()
            .flat_map(|x| {
                let x = ring.mul(x, &scale);
                (0..d).map(move |k| *x.get(k).unwrap_or(&0))
            })
            .collect();
        crt.push(prime, &flat)?;
        let Some(values) = crt.rebuild() else { continue };
        let rebuilt: Vec<QPoly> = values.chunks(d).map(|c| QPoly::new(c.to_vec())).collect();
        if previous.as_ref() == Some(&rebuilt) {
            let h: Vec<(usize, usize, QPoly)> = rebuilt
                .into_iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(|(c, q)| (c / (e + 1), c % (e + 1), q))
                .collect();
            return factor_is_proven(psi, &h, core, t0).then_some(h);
        }
        previous = Some(rebuilt);
    }
    None
}

/// Residues modulo a growing product of primes, rebuilt as rationals.
struct Crt {
    modulus: BigInt,
    residues: Vec<BigInt>,
}

impl Crt {
    fn new(len: usize) -> Self {
        Crt { modulus: BigInt::one(), residues: vec![BigInt::zero(); len] }
    }

    fn push(&mut self, prime: u64, values: &[u64]) -> Option<()> {
        let pm = BigInt::from(prime);
        let minv = (&self.modulus % &pm).modinv(&pm)?;
        for (r, &x) in self.residues.iter_mut().zip(values) {
            let t = (((BigInt::from(x) - &*r) % &pm + &pm) % &pm * &minv) % &pm;
            *r += &self.modulus * t;
        }
        self.modulus *= pm;
        Some(())
    }

    fn rebuild(&self) -> Option<Vec<Rational>> {
        self.residues.iter().map(|r| modp::rational_reconstruct(r, &self.modulus)).collect()
    }
}

/// A proper factor of `psi` over `Q` separating roots whose branch matrix
/// (for some `T`-degree bound) behaves differently: rank drops on one part
/// only, or the kernel line has its leading entry vanish on one part only.
/// Read off modulo several primes and kept only if it divides `psi` exactly.
fn split_piece(psi: &QPoly, coeffs: &[QPoly], tpows: &[QPoly], e: usize, prec: usize) -> Option<QPoly> {
    let m = tpows.len() - 1;
    let d = psi.degree()?;
    let candidate = |prime: u64, amax: usize| -> Option<Vec<u64>> {
        let ring = ModRing::new(psi, prime)?;
        let rows = mod_matrix(&ring, coeffs, tpows, amax, e, prec)?;
        let ncols = (amax + 1) * (e + 1);
        let g = modp::deficient_factor(&ring, rows.clone(), ncols);
        if g.len() - 1 < d {
            return Some(g);
        }
        let v = modp::kernel_line(&ring, rows, ncols)??;
        let lead = (0..ncols).filter(|&c| !v[c].is_empty()).max_by_key(|&c| (c % (e + 1), c / (e + 1)))?;
        Some(ring.common_factor(&v[lead]))
    };
    (0..=m).find_map(|amax| {
        let mut degree = None;
        let mut crt = Crt::new(d);
        let mut previous = None;
        let mut misses = 0;
        for &prime in primes() {
            let Some(g) = candidate(prime, amax) else { continue };
            let k = g.len() - 1;
            if k == 0 || k == d || *degree.get_or_insert(k) != k {
                misses += 1;
                if misses > 3 {
                    return None;
                }
                continue;
            }
            let mut values = g;
            values.resize(d, 0);
            crt.push(prime, &values)?;
            let Some(rebuilt) = crt.rebuild() else { continue };
            let rebuilt = QPoly::new(rebuilt[..k].to_vec()).add(&QPoly::var().pow(k as u32));
            if previous.as_ref() == Some(&rebuilt) {
                return psi.div_rem(&rebuilt).1.is_zero().then_some(rebuilt);
            }
            previous = Some(rebuilt);
        }
        None
    })
}

fn factor_is_proven(psi: &QPoly, h: &[(usize, usize, QPoly)], core: &BiPoly, t0: &Rational) -> bool {
    use std::collections::BTreeMap;
    let ring = Ring { psi: psi.clone() };
    let z = ring.reduce(&QPoly::var());
    let mut at_point = QPoly::zero();
    for (a, b, c) in h {
        let mut term = c.scale(&num_traits::pow(t0.clone(), *a));
        for _ in 0..*b {
            term = ring.mul(&term, &z);
        }
        at_point = at_point.add(&term);
    }
    if !ring.reduce(&at_point).is_zero() {
        return false;
    }
    // Division with respect to lex order on (u-degree, T-degree).
    let Some(&(ha, hb, ref hc)) = h.iter().max_by_key(|(a, b, _)| (*b, *a)) else { return false };
    if *hc != QPoly::one() {
        return false;
    }
    let mut rem: BTreeMap<(usize, usize), QPoly> =
        core.terms().map(|(a, b, c)| ((b, a), QPoly::constant(c.clone()))).collect();
    while let Some((&(b, a), c)) = rem.iter().next_back() {
        if b < hb || a < ha {
            return false;
        }
        let c = c.clone();
        for (ta, tb, tc) in h {
            let key = (b - hb + tb, a - ha + ta);
            let entry = rem.entry(key).or_insert_with(QPoly::zero);
            *entry = ring.reduce(&entry.sub(&c.mul(tc)));
            if entry.is_zero() {
                rem.remove(&key);
            }
        }
    }
    true
}

/// Rational roots of `f`, found by the rational root test when the extreme
/// coefficients are small enough to factor by trial division.
fn rational_roots(f: &QPoly) -> Vec<Rational> {
    let Some(d) = f.degree() else { return Vec::new() };
    let denom = f.coeffs().iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let ints: Vec<BigInt> = f.coeffs().iter().map(|c| (c * &denom).to_integer()).collect();
    let low = ints.iter().position(|c| !c.is_zero()).unwrap_or(0);
    let mut roots = Vec::new();
    if low > 0 {
        roots.push(Rational::zero());
    }
    let divisors = |n: &BigInt| -> Option<Vec<i64>> {
        let n = n.abs().to_i64().filter(|&n| n <= 1_000_000)?;
        Some((1..=n).filter(|k| n % k == 0).collect())
    };
    let (Some(num), Some(den)) = (divisors(&ints[low]), divisors(&ints[d])) else {
        return roots;
    };
    let mut seen = std::collections::BTreeSet::new();
    for a in &num {
        for b in &den {
            for sign in [1, -1] {
                let r = Rational::new((sign * a).into(), (*b).into());
                if seen.insert(r.clone()) && f.eval(&r).is_zero() {
                    roots.push(r);
                }
            }
        }
    }
    roots
}

/// For a rational root: recover the factor through it from the kernel and
/// split `p` as `factor * cofactor`.
fn linear_witness(
    psi: &QPoly,
    rows: &[Vec<QPoly>],
    ncols: usize,
    m: usize,
    e: usize,
    core: &BiPoly,
    p: &BiPoly,
) -> Result<Option<(BiPoly, BiPoly)>> {
    let ring = Ring { psi: psi.clone() };
    let numeric: Vec<Vec<Rational>> = rows
        .iter()
        .map(|row| row.iter().map(|x| ring.reduce(x).coeff(0)).collect())
        .collect();
    let Some(v) = nullspace(numeric, ncols).into_iter().next() else {
        return Ok(None);
    };
    let mut c = BiPoly::zero();
    for a in 0..=m {
        for b in 0..=e {
            c.add_term(a, b, &v[a * (e + 1) + b]);
        }
    }
    let factor = c.exact_div(&BiPoly::from_t_poly(&t_content(&c)))?;
    if core.exact_div(&factor).is_err() {
        return Ok(None);
    }
    Ok(Some((factor.clone(), p.exact_div(&factor)?)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bp(terms: &[(usize, usize, i64)]) -> BiPoly {
        BiPoly::from_terms(terms)
    }

    #[test]
    fn small_cases() {
        // 1 + (3 - u) T + u T^2
        assert_eq!(components_factor_count(&bp(&[(0, 0, 1), (1, 0, 3), (1, 1, -1), (2, 1, 1)])).unwrap().0, 1);
        // (1 - T)(1 - uT)
        let (n, w) = components_factor_count(&bp(&[(0, 0, 1), (1, 0, -1), (1, 1, -1), (2, 1, 1)])).unwrap();
        assert_eq!(n, 2);
        let (a, b) = w.unwrap();
        assert_eq!(a.mul(&b), bp(&[(0, 0, 1), (1, 0, -1), (1, 1, -1), (2, 1, 1)]));
        // u^2 - T^2
        let (n, w) = components_factor_count(&bp(&[(0, 2, 1), (2, 0, -1)])).unwrap();
        assert_eq!(n, 2);
        assert!(w.is_some());
        // u^2 - 2 T^2 splits only over Q(sqrt 2).
        let (n, w) = components_factor_count(&bp(&[(0, 2, 1), (2, 0, -2)])).unwrap();
        assert_eq!(n, 2);
        assert!(w.is_none());
        // u^2 - T is irreducible.
        assert_eq!(components_factor_count(&bp(&[(0, 2, 1), (1, 0, -1)])).unwrap().0, 1);
        // u^2 + T^2 + 1: a smooth conic.
        assert_eq!(components_factor_count(&bp(&[(0, 2, 1), (2, 0, 1), (0, 0, 1)])).unwrap().0, 1);
    }

    #[test]
    fn contents_are_counted() {
        // (u^2 - 2)(T^3 - T)
        let p = bp(&[(0, 2, 1), (0, 0, -2)]).mul(&bp(&[(3, 0, 1), (1, 0, -1)]));
        assert_eq!(components_factor_count(&p).unwrap().0, 5);
        assert!(components_factor_count(&bp(&[(0, 2, 1)])).is_err());
        assert_eq!(components_factor_count(&BiPoly::one()).unwrap().0, 0);
    }

    #[test]
    fn conjugate_components_split_psi() {
        // (u^2 - 2 T^2)(u - T - 1): psi(u) at t0 has a rational root and a
        // quadratic pair, so the ring must split.
        let p = bp(&[(0, 2, 1), (2, 0, -2)]).mul(&bp(&[(0, 1, 1), (1, 0, -1), (0, 0, -1)]));
        let (n, w) = components_factor_count(&p).unwrap();
        assert_eq!(n, 3);
        let (a, b) = w.unwrap();
        assert_eq!(a.mul(&b), p);
    }

    #[test]
    fn non_squarefree_rejected() {
        let sq = bp(&[(0, 1, 1), (1, 0, -1)]).pow(2);
        assert!(matches!(components_factor_count(&sq), Err(Error::Precondition(_))));
    }
}
