//! Univariate factorization: Zassenhaus over the rationals (Berlekamp mod p,
//! Hensel lifting, subset recombination) and Trager norm descent over
//! extension towers. Degrees at the scales this crate meets stay small, so
//! the plain quadratic-time versions of every step are the right trade.

use std::sync::Arc;

use num_bigint::{BigInt, Sign};
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::field::{extend_unchecked, FieldDescriptor, FieldElem};
use crate::poly1::Poly1;

/// Factors a nonzero univariate polynomial into monic irreducibles with
/// multiplicities. The product of the factors, times the leading coefficient,
/// equals the input.
pub fn factor_univariate(p: &Poly1) -> Vec<(Poly1, usize)> {
    assert!(!p.is_zero(), "factor of zero polynomial");
    let mut out = Vec::new();
    if p.degree() == 0 {
        return out;
    }
    for (part, mult) in p.squarefree_decomposition() {
        for f in factor_squarefree(&part) {
            out.push((f, mult));
        }
    }
    // Deterministic order: by degree, then by printed form.
    out.sort_by(|a, b| {
        (a.0.degree(), format!("{}", a.0)).cmp(&(b.0.degree(), format!("{}", b.0)))
    });
    out
}

/// Extends the tower by `minpoly` after verifying irreducibility.
/// Returns the extended descriptor; elements embed with [`FieldElem::embed`].
pub fn extend_field(
    fd: &Arc<FieldDescriptor>,
    name: &str,
    minpoly: &Poly1,
) -> Result<Arc<FieldDescriptor>> {
    if minpoly.is_zero() || minpoly.degree() < 2 {
        return Err(Error::ReducibleMinimalPolynomial);
    }
    let monic = minpoly.monic();
    let factors = factor_univariate(&monic);
    if factors.len() != 1 || factors[0].1 != 1 {
        return Err(Error::ReducibleMinimalPolynomial);
    }
    extend_unchecked(fd, name, &monic.coeffs)
}

fn factor_squarefree(p: &Poly1) -> Vec<Poly1> {
    if p.degree() <= 1 {
        return vec![p.monic()];
    }
    if p.field.is_rationals() {
        factor_squarefree_q(p)
    } else {
        factor_squarefree_tower(p)
    }
}

// ---------------------------------------------------------------------------
// Rational case: Zassenhaus
// ---------------------------------------------------------------------------

fn factor_squarefree_q(p: &Poly1) -> Vec<Poly1> {
    // Clear denominators to a primitive integer polynomial.
    let rats: Vec<BigRational> = p.coeffs.iter().map(|c| c.to_rational().unwrap()).collect();
    let mut denom = BigInt::one();
    for r in &rats {
        denom = lcm(&denom, r.denom());
    }
    let mut ints: Vec<BigInt> = rats.iter().map(|r| (r * BigRational::from_integer(denom.clone())).to_integer()).collect();
    let content = ints
        .iter()
        .fold(BigInt::zero(), |acc, c| gcd_int(&acc, c));
    if !content.is_zero() && !content.is_one() {
        for c in ints.iter_mut() {
            *c /= &content;
        }
    }
    // Monic-ize: G(x) = L^{n-1} F(x/L) has integer coefficients and is monic.
    let n = ints.len() - 1;
    let lc = ints[n].clone();
    let mut monic: Vec<BigInt> = Vec::with_capacity(n + 1);
    // G_i = F_i * L^{n-1-i}
    for (i, c) in ints.iter().enumerate() {
        let e = (n as i64 - 1 - i as i64).max(0) as u32;
        monic.push(c * lc.pow(e));
    }
    // normalize leading coefficient of G to 1 exactly
    monic[n] = BigInt::one();
    if n >= 1 {
        // With the scaling above G is monic already when lc | lc^{n-1-i}... it
        // is: G_n = lc * lc^{-1}; the formula with e clamped handles n=i.
    }
    let g_factors = zassenhaus_monic(&monic);
    // Map back through x -> lc * x and renormalize to monic over Q.
    let q = FieldDescriptor::rationals();
    let mut out = Vec::new();
    for g in g_factors {
        let deg = g.len() - 1;
        let mut coeffs = Vec::with_capacity(deg + 1);
        for (i, c) in g.iter().enumerate() {
            // substitute x -> lc*x: coefficient_i scales by lc^i
            coeffs.push(BigRational::from_integer(c * lc.pow(i as u32)));
        }
        let poly = Poly1::from_coeffs(
            &q,
            coeffs
                .into_iter()
                .map(|r| FieldElem::from_rational(&q, r))
                .collect(),
        );
        out.push(poly.monic());
    }
    out
}

fn gcd_int(a: &BigInt, b: &BigInt) -> BigInt {
    use num_integer::Integer;
    a.gcd(b)
}

fn lcm(a: &BigInt, b: &BigInt) -> BigInt {
    use num_integer::Integer;
    a.lcm(b)
}

/// Zassenhaus on a monic squarefree integer polynomial; returns monic integer
/// factors.
fn zassenhaus_monic(f: &[BigInt]) -> Vec<Vec<BigInt>> {
    let f: ZPoly = f.to_vec();
    let f = &f;
    let n = f.len() - 1;
    if n <= 1 {
        return vec![f.to_vec()];
    }
    // Pick a prime keeping f squarefree mod p.
    const PRIMES: [u64; 20] = [
        3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73,
    ];
    let mut chosen = None;
    for &p in &PRIMES {
        let fp = reduce_mod(f, p);
        if fp.len() != f.len() {
            continue; // lc vanished (cannot happen: monic), or degree drop
        }
        let d = gcd_mod(&fp, &derivative_mod(&fp, p), p);
        if d.len() == 1 {
            chosen = Some(p);
            break;
        }
    }
    let p = chosen.expect("no small prime keeps the polynomial squarefree");
    let modular = berlekamp(&reduce_mod(f, p), p);
    if modular.len() == 1 {
        return vec![f.to_vec()];
    }
    // Landau-Mignotte bound and lifting exponent.
    let norm2: f64 = f
        .iter()
        .map(|c| c.to_f64().unwrap_or(1e300).abs().powi(2))
        .sum::<f64>()
        .sqrt();
    let bound = 2.0f64.powi(n as i32) * norm2 * 2.0 + 2.0;
    let mut k = 1u32;
    let mut pk = BigInt::from(p);
    while pk.to_f64().unwrap_or(f64::MAX) < bound {
        pk = &pk * BigInt::from(p);
        k += 1;
    }
    let lifted = hensel_lift_tree(f, &modular, p, k);
    let pk = BigInt::from(p).pow(k);

    // Subset recombination.
    let mut remaining: Vec<Vec<BigInt>> = lifted;
    let mut rest = f.to_vec();
    let mut out = Vec::new();
    let mut size = 1usize;
    'outer: while 2 * size <= remaining.len() {
        let idxs: Vec<usize> = (0..remaining.len()).collect();
        for subset in subsets(&idxs, size) {
            let mut cand = vec![BigInt::one()];
            for &i in &subset {
                cand = mul_mod_bigint(&cand, &remaining[i], &pk);
            }
            symmetrize(&mut cand, &pk);
            if let Some(quot) = exact_div_z(&rest, &cand) {
                out.push(cand);
                rest = quot;
                let mut keep = Vec::new();
                for (i, g) in remaining.into_iter().enumerate() {
                    if !subset.contains(&i) {
                        keep.push(g);
                    }
                }
                remaining = keep;
                continue 'outer;
            }
        }
        size += 1;
    }
    if rest.len() > 1 {
        out.push(rest);
    }
    out
}

fn subsets(items: &[usize], size: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn rec(items: &[usize], size: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == size {
            out.push(cur.clone());
            return;
        }
        for i in start..items.len() {
            cur.push(items[i]);
            rec(items, size, i + 1, cur, out);
            cur.pop();
        }
    }
    rec(items, size, 0, &mut cur, &mut out);
    out
}

fn symmetrize(poly: &mut [BigInt], m: &BigInt) {
    let half = m / 2;
    for c in poly.iter_mut() {
        let mut r = c.clone() % m;
        if r.sign() == Sign::Minus {
            r += m;
        }
        if r > half {
            r -= m;
        }
        *c = r;
    }
}

/// Exact division of integer polynomials (monic divisor), None if not exact.
fn exact_div_z(num: &[BigInt], den: &[BigInt]) -> Option<Vec<BigInt>> {
    if den.len() > num.len() {
        return None;
    }
    let mut rem: Vec<BigInt> = num.to_vec();
    let dn = den.len() - 1;
    let mut quot = vec![BigInt::zero(); num.len() - dn];
    for i in (0..quot.len()).rev() {
        let c = rem[i + dn].clone();
        if c.is_zero() {
            continue;
        }
        // monic divisor: quotient coefficient = c
        quot[i] = c.clone();
        for (j, d) in den.iter().enumerate() {
            rem[i + j] -= &c * d;
        }
    }
    if rem.iter().all(|c| c.is_zero()) {
        Some(quot)
    } else {
        None
    }
}

// -- arithmetic over F_p (u64, p small) --------------------------------------

fn reduce_mod(f: &[BigInt], p: u64) -> Vec<u64> {
    let pb = BigInt::from(p);
    let mut out: Vec<u64> = f
        .iter()
        .map(|c| {
            let mut r = c % &pb;
            if r.sign() == Sign::Minus {
                r += &pb;
            }
            r.to_u64().unwrap()
        })
        .collect();
    while out.last().map_or(false, |&c| c == 0) {
        out.pop();
    }
    out
}

fn derivative_mod(f: &[u64], p: u64) -> Vec<u64> {
    let mut out: Vec<u64> = f
        .iter()
        .enumerate()
        .skip(1)
        .map(|(i, &c)| (c * (i as u64 % p)) % p)
        .collect();
    while out.last().map_or(false, |&c| c == 0) {
        out.pop();
    }
    out
}

fn inv_mod(a: u64, p: u64) -> u64 {
    // extended Euclid
    let (mut t, mut new_t) = (0i128, 1i128);
    let (mut r, mut new_r) = (p as i128, a as i128 % p as i128);
    while new_r != 0 {
        let q = r / new_r;
        (t, new_t) = (new_t, t - q * new_t);
        (r, new_r) = (new_r, r - q * new_r);
    }
    ((t % p as i128 + p as i128) % p as i128) as u64
}

fn mul_mod(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + x * y) % p;
        }
    }
    while out.last().map_or(false, |&c| c == 0) {
        out.pop();
    }
    out
}

fn rem_mod(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let mut rem = a.to_vec();
    let db = b.len() - 1;
    let lead_inv = inv_mod(b[db], p);
    while rem.len() > db {
        let c = (rem[rem.len() - 1] * lead_inv) % p;
        let shift = rem.len() - 1 - db;
        if c != 0 {
            for (j, &bc) in b.iter().enumerate() {
                let idx = shift + j;
                rem[idx] = (rem[idx] + p * p - (c * bc) % p) % p;
            }
        }
        rem.pop();
        while rem.last().map_or(false, |&x| x == 0) {
            rem.pop();
        }
    }
    rem
}

fn gcd_mod(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let (mut x, mut y) = (a.to_vec(), b.to_vec());
    while !y.is_empty() {
        let r = rem_mod(&x, &y, p);
        x = y;
        y = r;
    }
    if !x.is_empty() {
        let inv = inv_mod(x[x.len() - 1], p);
        for c in x.iter_mut() {
            *c = (*c * inv) % p;
        }
    }
    x
}

/// x^e mod f over F_p.
fn xpow_mod(e: u64, f: &[u64], p: u64) -> Vec<u64> {
    let mut result = vec![1u64];
    let mut base = vec![0u64, 1];
    base = rem_mod(&base, f, p);
    let mut exp = e;
    while exp > 0 {
        if exp & 1 == 1 {
            result = rem_mod(&mul_mod(&result, &base, p), f, p);
        }
        base = rem_mod(&mul_mod(&base, &base, p), f, p);
        exp >>= 1;
    }
    result
}

/// Berlekamp factorization of a monic squarefree polynomial over F_p.
fn berlekamp(f: &[u64], p: u64) -> Vec<Vec<u64>> {
    let n = f.len() - 1;
    if n <= 1 {
        return vec![f.to_vec()];
    }
    // Matrix of Frobenius - identity in the basis 1, x, ..., x^{n-1}.
    let mut m = vec![vec![0u64; n]; n];
    for i in 0..n {
        let row = xpow_mod((i as u64) * p, f, p);
        for (j, &c) in row.iter().enumerate() {
            m[j][i] = c; // column i = x^{ip} mod f
        }
        m[i][i] = (m[i][i] + p - 1) % p;
    }
    let kernel = kernel_mod(&m, p);
    if kernel.len() <= 1 {
        return vec![f.to_vec()];
    }
    // Split using kernel elements.
    let mut factors = vec![f.to_vec()];
    for w in kernel.iter() {
        if factors.len() == kernel.len() {
            break;
        }
        if w.iter().skip(1).all(|&c| c == 0) {
            continue; // constant
        }
        let wpoly: Vec<u64> = {
            let mut v = w.clone();
            while v.last().map_or(false, |&c| c == 0) {
                v.pop();
            }
            v
        };
        let mut next = Vec::new();
        for g in factors {
            if g.len() - 1 <= 1 {
                next.push(g);
                continue;
            }
            let mut pieces = Vec::new();
            let mut rest = g.clone();
            for c in 0..p {
                if rest.len() - 1 == 0 {
                    break;
                }
                let mut shifted = wpoly.clone();
                if shifted.is_empty() {
                    shifted = vec![0];
                }
                shifted[0] = (shifted[0] + p - c % p) % p;
                while shifted.last().map_or(false, |&x| x == 0) {
                    shifted.pop();
                }
                if shifted.is_empty() {
                    continue;
                }
                let d = gcd_mod(&rest, &shifted, p);
                if d.len() > 1 && d.len() < rest.len() {
                    let q = exact_div_mod(&rest, &d, p);
                    pieces.push(d);
                    rest = q;
                }
            }
            if rest.len() > 1 {
                pieces.push(rest);
            }
            if pieces.is_empty() {
                next.push(g);
            } else {
                next.extend(pieces);
            }
        }
        factors = next;
    }
    factors
}

fn exact_div_mod(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let mut rem = a.to_vec();
    let db = b.len() - 1;
    let lead_inv = inv_mod(b[db], p);
    let mut quot = vec![0u64; a.len() - db];
    for i in (0..quot.len()).rev() {
        let idx = i + db;
        if idx >= rem.len() {
            continue;
        }
        let c = (rem[idx] * lead_inv) % p;
        quot[i] = c;
        if c != 0 {
            for (j, &bc) in b.iter().enumerate() {
                rem[i + j] = (rem[i + j] + p * p - (c * bc) % p) % p;
            }
        }
    }
    quot
}

fn kernel_mod(m: &[Vec<u64>], p: u64) -> Vec<Vec<u64>> {
    let n = m.len();
    let mut a: Vec<Vec<u64>> = m.to_vec();
    let mut pivot_col_of_row = Vec::new();
    let mut rank_rows = 0usize;
    for col in 0..n {
        let mut piv = None;
        for row in rank_rows..n {
            if a[row][col] != 0 {
                piv = Some(row);
                break;
            }
        }
        let Some(piv) = piv else {
            continue;
        };
        a.swap(rank_rows, piv);
        let inv = inv_mod(a[rank_rows][col], p);
        for c in 0..n {
            a[rank_rows][c] = (a[rank_rows][c] * inv) % p;
        }
        for row in 0..n {
            if row != rank_rows && a[row][col] != 0 {
                let f = a[row][col];
                for c in 0..n {
                    a[row][c] = (a[row][c] + p * p - (f * a[rank_rows][c]) % p) % p;
                }
            }
        }
        pivot_col_of_row.push(col);
        rank_rows += 1;
    }
    let pivot_cols: std::collections::BTreeSet<usize> = pivot_col_of_row.iter().copied().collect();
    let mut kernel = Vec::new();
    for free in 0..n {
        if pivot_cols.contains(&free) {
            continue;
        }
        let mut v = vec![0u64; n];
        v[free] = 1;
        for (row, &pc) in pivot_col_of_row.iter().enumerate() {
            v[pc] = (p - a[row][free] % p) % p;
        }
        kernel.push(v);
    }
    kernel
}

// -- Hensel lifting -----------------------------------------------------------

type ZPoly = Vec<BigInt>;

fn zmod(poly: &mut ZPoly, m: &BigInt) {
    for c in poly.iter_mut() {
        let mut r = c.clone() % m;
        if r.sign() == Sign::Minus {
            r += m;
        }
        *c = r;
    }
    while poly.last().map_or(false, |c| c.is_zero()) {
        poly.pop();
    }
}

fn mul_mod_bigint(a: &ZPoly, b: &ZPoly, m: &BigInt) -> ZPoly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    zmod(&mut out, m);
    out
}

fn add_mod_bigint(a: &ZPoly, b: &ZPoly, m: &BigInt) -> ZPoly {
    let mut out = vec![BigInt::zero(); a.len().max(b.len())];
    for (i, c) in a.iter().enumerate() {
        out[i] += c;
    }
    for (i, c) in b.iter().enumerate() {
        out[i] += c;
    }
    zmod(&mut out, m);
    out
}

fn sub_mod_bigint(a: &ZPoly, b: &ZPoly, m: &BigInt) -> ZPoly {
    let mut out = vec![BigInt::zero(); a.len().max(b.len())];
    for (i, c) in a.iter().enumerate() {
        out[i] += c;
    }
    for (i, c) in b.iter().enumerate() {
        out[i] -= c;
    }
    zmod(&mut out, m);
    out
}

/// Division with remainder by a monic polynomial, coefficients mod m.
fn divrem_mod_bigint(a: &ZPoly, b: &ZPoly, m: &BigInt) -> (ZPoly, ZPoly) {
    let db = b.len() - 1;
    let mut rem = a.to_vec();
    zmod(&mut rem, m);
    if rem.len() <= db {
        return (Vec::new(), rem);
    }
    let mut quot = vec![BigInt::zero(); rem.len() - db];
    for i in (0..quot.len()).rev() {
        let idx = i + db;
        if idx >= rem.len() {
            continue;
        }
        let c = rem[idx].clone();
        if c.is_zero() {
            continue;
        }
        quot[i] = c.clone();
        for (j, bc) in b.iter().enumerate() {
            let v = &rem[i + j] - &c * bc;
            rem[i + j] = v;
        }
        zmod(&mut rem, m);
        if rem.len() <= idx {
            continue;
        }
    }
    zmod(&mut quot, m);
    zmod(&mut rem, m);
    (quot, rem)
}

/// Bezout cofactors s·g + t·h = 1 mod p for coprime monic g, h over F_p,
/// returned as integer polynomials with coefficients in [0, p).
fn bezout_mod_p(g: &[u64], h: &[u64], p: u64) -> (ZPoly, ZPoly) {
    // extended Euclid over F_p
    let to_z = |v: &[u64]| -> ZPoly { v.iter().map(|&c| BigInt::from(c)).collect() };
    let (mut r0, mut r1) = (g.to_vec(), h.to_vec());
    let (mut s0, mut s1): (Vec<u64>, Vec<u64>) = (vec![1], vec![]);
    let (mut t0, mut t1): (Vec<u64>, Vec<u64>) = (vec![], vec![1]);
    while !r1.is_empty() {
        // q, r = divmod(r0, r1)
        let mut rem = r0.clone();
        let db = r1.len() - 1;
        let lead_inv = inv_mod(r1[db], p);
        let mut q = vec![0u64; rem.len().saturating_sub(db).max(1)];
        while rem.len() > db {
            let c = (rem[rem.len() - 1] * lead_inv) % p;
            let shift = rem.len() - 1 - db;
            q[shift] = (q[shift] + c) % p;
            for (j, &bc) in r1.iter().enumerate() {
                let idx = shift + j;
                rem[idx] = (rem[idx] + p * p - (c * bc) % p) % p;
            }
            while rem.last().map_or(false, |&x| x == 0) {
                rem.pop();
            }
        }
        while q.last().map_or(false, |&x| x == 0) {
            q.pop();
        }
        let new_s = sub_u64(&s0, &mul_mod(&q, &s1, p), p);
        let new_t = sub_u64(&t0, &mul_mod(&q, &t1, p), p);
        r0 = r1;
        r1 = rem;
        s0 = s1;
        s1 = new_s;
        t0 = t1;
        t1 = new_t;
    }
    // r0 = constant gcd; normalize to 1
    let inv = inv_mod(r0[0], p);
    let s: Vec<u64> = s0.iter().map(|&c| (c * inv) % p).collect();
    let t: Vec<u64> = t0.iter().map(|&c| (c * inv) % p).collect();
    (to_z(&s), to_z(&t))
}

fn sub_u64(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let mut out = vec![0u64; a.len().max(b.len())];
    for (i, &c) in a.iter().enumerate() {
        out[i] = c % p;
    }
    for (i, &c) in b.iter().enumerate() {
        out[i] = (out[i] + p - c % p) % p;
    }
    while out.last().map_or(false, |&x| x == 0) {
        out.pop();
    }
    out
}

/// Lifts f ≡ g·h (mod p) to mod p^(2^rounds·...) ≥ p^k for monic f, g, h.
fn hensel_pair(f: &ZPoly, g0: &[u64], h0: &[u64], p: u64, k: u32) -> (ZPoly, ZPoly) {
    let (mut s, mut t) = bezout_mod_p(g0, h0, p);
    let mut g: ZPoly = g0.iter().map(|&c| BigInt::from(c)).collect();
    let mut h: ZPoly = h0.iter().map(|&c| BigInt::from(c)).collect();
    let mut modulus = BigInt::from(p);
    let target = BigInt::from(p).pow(k);
    while modulus < target {
        let m2 = &modulus * &modulus;
        // e = f - g h (mod m2)
        let gh = mul_mod_bigint(&g, &h, &m2);
        let f_red = {
            let mut fr = f.clone();
            zmod(&mut fr, &m2);
            fr
        };
        let e = sub_mod_bigint(&f_red, &gh, &m2);
        // q, r = divrem(s e, h)
        let se = mul_mod_bigint(&s, &e, &m2);
        let (q, r) = divrem_mod_bigint(&se, &h, &m2);
        // g* = g + t e + q g ; h* = h + r
        let te = mul_mod_bigint(&t, &e, &m2);
        let qg = mul_mod_bigint(&q, &g, &m2);
        g = add_mod_bigint(&add_mod_bigint(&g, &te, &m2), &qg, &m2);
        h = add_mod_bigint(&h, &r, &m2);
        // update Bezout: b = s g* + t h* - 1
        let sg = mul_mod_bigint(&s, &g, &m2);
        let th = mul_mod_bigint(&t, &h, &m2);
        let mut b = add_mod_bigint(&sg, &th, &m2);
        b = sub_mod_bigint(&b, &vec![BigInt::one()], &m2);
        let sb = mul_mod_bigint(&s, &b, &m2);
        let (c, d) = divrem_mod_bigint(&sb, &h, &m2);
        s = sub_mod_bigint(&s, &d, &m2);
        let tb = mul_mod_bigint(&t, &b, &m2);
        let cg = mul_mod_bigint(&c, &g, &m2);
        t = sub_mod_bigint(&sub_mod_bigint(&t, &tb, &m2), &cg, &m2);
        modulus = m2;
    }
    // reduce to exactly p^k
    zmod(&mut g, &target);
    zmod(&mut h, &target);
    (g, h)
}

/// Lifts the full modular factor list of a monic f to mod p^k.
fn hensel_lift_tree(f: &ZPoly, factors: &[Vec<u64>], p: u64, k: u32) -> Vec<ZPoly> {
    if factors.len() == 1 {
        let mut g = f.clone();
        zmod(&mut g, &BigInt::from(p).pow(k));
        return vec![g];
    }
    let mid = factors.len() / 2;
    let (left, right) = factors.split_at(mid);
    let mut gl = vec![1u64];
    for fac in left {
        gl = mul_mod(&gl, fac, p);
    }
    let mut gr = vec![1u64];
    for fac in right {
        gr = mul_mod(&gr, fac, p);
    }
    let (glift, hlift) = hensel_pair(f, &gl, &gr, p, k);
    let mut out = hensel_lift_tree(&glift, left, p, k);
    out.extend(hensel_lift_tree(&hlift, right, p, k));
    out
}

// ---------------------------------------------------------------------------
// Tower case: Trager
// ---------------------------------------------------------------------------

fn factor_squarefree_tower(p: &Poly1) -> Vec<Poly1> {
    let fd = Arc::clone(&p.field);
    let nlev = fd.levels.len();
    let sub = Arc::new(FieldDescriptor {
        levels: fd.levels[..nlev - 1].to_vec(),
    });
    let f = p.monic();
    // Shift by multiples of the top generator until the norm is squarefree.
    let alpha = FieldElem::generator(&fd, nlev - 1);
    for s in 0..64i64 {
        let shift = alpha.mul_rat(&crate::rat::int(s)).neg();
        let g = f.shift(&shift); // g(v) = f(v − s·α)
        let norm = norm_to_subfield(&g, &sub);
        if norm.is_zero() {
            continue;
        }
        if norm.gcd(&norm.derivative()).degree() == 0 {
            let norm_factors = factor_squarefree_sub(&norm);
            let mut out = Vec::new();
            let back = alpha.mul_rat(&crate::rat::int(s)); // v + s·α
            for nf in norm_factors {
                let nf_up = nf.embed(&fd);
                let cand = nf_up.shift(&back); // N_i(v + s·α)
                let h = f.gcd(&cand);
                if h.degree() > 0 {
                    out.push(h.monic());
                }
            }
            // Exactness check: product must reproduce f.
            let mut prod = Poly1::constant(FieldElem::one(&fd));
            for h in &out {
                prod = prod.mul(h);
            }
            assert!(
                prod.monic() == f,
                "norm descent lost factors; increase the shift range"
            );
            return out;
        }
    }
    panic!("no squarefree norm found within the shift range");
}

fn factor_squarefree_sub(p: &Poly1) -> Vec<Poly1> {
    let mut out = Vec::new();
    for (part, _mult) in p.squarefree_decomposition() {
        out.extend(factor_squarefree(&part));
    }
    out
}

/// Norm from K_sub(α) down to K_sub: Res_α(minpoly, g) computed by evaluating
/// v at enough rational points and interpolating over K_sub.
fn norm_to_subfield(g: &Poly1, sub: &Arc<FieldDescriptor>) -> Poly1 {
    let fd = &g.field;
    let nlev = fd.levels.len();
    let top = &fd.levels[nlev - 1];
    let d = top.degree();
    let blk = sub.dim();
    // minpoly as Poly1 over sub with a formal variable α: represented as
    // coefficients in sub.
    let mut mp: Vec<FieldElem> = top
        .minpoly_low
        .iter()
        .map(|v| FieldElem {
            field: Arc::clone(sub),
            coords: v.clone(),
        })
        .collect();
    mp.push(FieldElem::one(sub));
    let minpoly_sub = Poly1::from_coeffs(sub, mp);

    let deg_v = if g.is_zero() { 0 } else { g.degree() };
    let npoints = deg_v * d + 1;
    let mut xs = Vec::with_capacity(npoints);
    let mut ys = Vec::with_capacity(npoints);
    for i in 0..npoints {
        let c = FieldElem::from_int(sub, i as i64);
        // G(α, c): collapse the v-variable, leaving a polynomial in α over sub.
        let mut galpha = vec![FieldElem::zero(sub); d];
        let mut cpow = FieldElem::one(sub);
        for coeff in &g.coeffs {
            // coeff is an element of fd = sub(α): split into α-coordinates.
            for ai in 0..d {
                let sub_elem = FieldElem {
                    field: Arc::clone(sub),
                    coords: coeff.coords[ai * blk..(ai + 1) * blk].to_vec(),
                };
                galpha[ai] = galpha[ai].add(&sub_elem.mul(&cpow));
            }
            cpow = cpow.mul(&c);
        }
        let galpha_poly = Poly1::from_coeffs(sub, galpha);
        xs.push(c);
        ys.push(resultant(&minpoly_sub, &galpha_poly));
    }
    lagrange_interpolate(sub, &xs, &ys)
}

/// Resultant of two univariate polynomials over a field.
pub fn resultant(a: &Poly1, b: &Poly1) -> FieldElem {
    let field = Arc::clone(&a.field);
    if a.is_zero() || b.is_zero() {
        return FieldElem::zero(&field);
    }
    fn go(a: &Poly1, b: &Poly1) -> FieldElem {
        let field = Arc::clone(&a.field);
        if b.degree() == 0 {
            // Res(a, c) = c^{deg a}
            let mut acc = FieldElem::one(&field);
            for _ in 0..a.degree() {
                acc = acc.mul(&b.coeff(0));
            }
            return acc;
        }
        let r = a.divrem(b).1;
        if r.is_zero() {
            return FieldElem::zero(&field);
        }
        // Res(a,b) = (-1)^{da db} lc(b)^{da - dr} Res(b, r)
        let da = a.degree();
        let db = b.degree();
        let dr = if r.is_zero() { 0 } else { r.degree() };
        let mut acc = go(b, &r);
        let mut lead_pow = FieldElem::one(&field);
        for _ in 0..(da - dr) {
            lead_pow = lead_pow.mul(b.lead());
        }
        acc = acc.mul(&lead_pow);
        if (da * db) % 2 == 1 {
            acc = acc.neg();
        }
        acc
    }
    go(a, b)
}

fn lagrange_interpolate(field: &Arc<FieldDescriptor>, xs: &[FieldElem], ys: &[FieldElem]) -> Poly1 {
    let mut acc = Poly1::zero(field);
    for (i, yi) in ys.iter().enumerate() {
        if yi.is_zero() {
            continue;
        }
        let mut num = Poly1::constant(FieldElem::one(field));
        let mut den = FieldElem::one(field);
        for (j, xj) in xs.iter().enumerate() {
            if i == j {
                continue;
            }
            num = num.mul(&Poly1::from_coeffs(
                field,
                vec![xj.neg(), FieldElem::one(field)],
            ));
            den = den.mul(&xs[i].sub(xj));
        }
        acc = acc.add(&num.scale(&yi.mul(&den.inv().unwrap())));
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::FieldDescriptor;

    fn qpoly(coeffs: &[i64]) -> Poly1 {
        let q = FieldDescriptor::rationals();
        Poly1::from_coeffs(
            &q,
            coeffs.iter().map(|&c| FieldElem::from_int(&q, c)).collect(),
        )
    }

    #[test]
    fn factor_over_q() {
        // v² − 1 = (v−1)(v+1)
        let f = factor_univariate(&qpoly(&[-1, 0, 1]));
        assert_eq!(f.len(), 2);
        assert!(f.iter().all(|(p, m)| p.degree() == 1 && *m == 1));

        // v² − 2 irreducible
        let f = factor_univariate(&qpoly(&[-2, 0, 1]));
        assert_eq!(f.len(), 1);
        assert_eq!(f[0].0.degree(), 2);
        assert_eq!(f[0].1, 1);

        // (v−1)²
        let f = factor_univariate(&qpoly(&[1, -2, 1]));
        assert_eq!(f.len(), 1);
        assert_eq!(f[0].1, 2);
        assert_eq!(f[0].0, qpoly(&[-1, 1]));
    }

    #[test]
    fn factor_bigger_over_q() {
        // (v²+1)(v²−2)(v−3)
        let p = qpoly(&[1, 0, 1]).mul(&qpoly(&[-2, 0, 1])).mul(&qpoly(&[-3, 1]));
        let f = factor_univariate(&p);
        assert_eq!(f.len(), 3);
        let mut prod = Poly1::constant(FieldElem::one(&p.field));
        for (g, m) in &f {
            for _ in 0..*m {
                prod = prod.mul(g);
            }
        }
        assert_eq!(prod, p.monic());
    }

    #[test]
    fn extend_and_refactor() {
        let q = FieldDescriptor::rationals();
        // degree-1 extension rejected
        assert!(extend_field(&q, "v", &qpoly(&[-7, 1])).is_err());
        // Q(√2)
        let k = extend_field(&q, "r2", &qpoly(&[-2, 0, 1])).unwrap();
        assert_eq!(k.dim(), 2);
        // 3/5 embeds with non-constant coordinates zero
        let e = FieldElem::from_rational(&q, crate::rat::rat(3, 5)).embed(&k);
        assert_eq!(e.to_rational(), Some(crate::rat::rat(3, 5)));
        // w² − 2 factors over Q(√2): extension must be rejected
        let w2 = Poly1::from_coeffs(
            &k,
            vec![
                FieldElem::from_int(&k, -2),
                FieldElem::zero(&k),
                FieldElem::one(&k),
            ],
        );
        match extend_field(&k, "w", &w2) {
            Err(Error::ReducibleMinimalPolynomial) => {}
            other => panic!("expected ReducibleMinimalPolynomial, got {:?}", other.map(|_| ())),
        }
        // and the factorization itself splits
        let f = factor_univariate(&w2);
        assert_eq!(f.len(), 2);
        assert!(f.iter().all(|(p, _)| p.degree() == 1));
    }

    #[test]
    fn trager_keeps_irreducible() {
        let q = FieldDescriptor::rationals();
        let k = extend_field(&q, "r2", &qpoly(&[-2, 0, 1])).unwrap();
        // v² − 3 stays irreducible over Q(√2)
        let p = Poly1::from_coeffs(
            &k,
            vec![
                FieldElem::from_int(&k, -3),
                FieldElem::zero(&k),
                FieldElem::one(&k),
            ],
        );
        let f = factor_univariate(&p);
        assert_eq!(f.len(), 1);
        assert_eq!(f[0].0.degree(), 2);
    }
}
