//! Towers of simple algebraic extensions over the rationals.
//!
//! A [`FieldDescriptor`] is a (possibly empty) tower Q ⊂ Q(α₁) ⊂ Q(α₁)(α₂) ⊂ …
//! where each level is cut out by a monic irreducible polynomial over the
//! previous level. A [`FieldElem`] stores its coordinates in the flat power
//! basis α₁^{i₁}·α₂^{i₂}·… with i_k below the level degree, so the coordinate
//! vector has length equal to the product of the tower degrees.
//!
//! Arithmetic works recursively level by level: an element of the top level is
//! a polynomial in the top generator whose coefficients are elements of the
//! sub-tower.

use std::fmt;
use std::sync::Arc;

use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

/// One extension step: a generator name and its monic minimal polynomial over
/// the tower below, stored through the non-leading coefficients (each a flat
/// coordinate vector over the sub-tower).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Level {
    pub name: String,
    /// Coefficients of 1, α, …, α^{d-1}; the minimal polynomial is
    /// α^d + low[d-1]·α^{d-1} + … + low[0].
    pub minpoly_low: Vec<Vec<BigRational>>,
}

impl Level {
    pub fn degree(&self) -> usize {
        self.minpoly_low.len()
    }
}

/// A tower of simple extensions; the empty tower is the rationals.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct FieldDescriptor {
    pub levels: Vec<Level>,
}

impl FieldDescriptor {
    pub fn rationals() -> Arc<FieldDescriptor> {
        Arc::new(FieldDescriptor { levels: Vec::new() })
    }

    pub fn is_rationals(&self) -> bool {
        self.levels.is_empty()
    }

    /// Product of the tower degrees; dimension over Q.
    pub fn dim(&self) -> usize {
        self.levels.iter().map(|l| l.degree()).product()
    }

    /// Dimension over Q of the sub-tower with the top `levels.len() - k`
    /// levels removed, i.e. of the first `k` levels.
    fn dim_upto(&self, k: usize) -> usize {
        self.levels[..k].iter().map(|l| l.degree()).product()
    }

    /// True if `self` is a (weak) prefix of `other`.
    pub fn is_prefix_of(&self, other: &FieldDescriptor) -> bool {
        self.levels.len() <= other.levels.len()
            && self.levels[..] == other.levels[..self.levels.len()]
    }
}

/// An element of a [`FieldDescriptor`] tower.
#[derive(Clone)]
pub struct FieldElem {
    pub field: Arc<FieldDescriptor>,
    /// Flat coordinates, length `field.dim()`; index i₁ + d₁·(i₂ + d₂·(…)).
    pub coords: Vec<BigRational>,
}

impl PartialEq for FieldElem {
    fn eq(&self, other: &Self) -> bool {
        debug_assert!(same_field(&self.field, &other.field));
        self.coords == other.coords
    }
}
impl Eq for FieldElem {}

pub fn same_field(a: &Arc<FieldDescriptor>, b: &Arc<FieldDescriptor>) -> bool {
    Arc::ptr_eq(a, b) || a == b
}

// ---- raw slice arithmetic, recursive over levels -------------------------

/// Multiplies two flat coordinate slices of the first `nlev` levels of `fd`.
fn mul_raw(fd: &FieldDescriptor, nlev: usize, a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    if nlev == 0 {
        return vec![&a[0] * &b[0]];
    }
    let level = &fd.levels[nlev - 1];
    let d = level.degree();
    let blk = fd.dim_upto(nlev - 1);
    // Convolution of the two degree-<d block polynomials.
    let mut conv: Vec<Vec<BigRational>> = vec![vec![BigRational::zero(); blk]; 2 * d - 1];
    for i in 0..d {
        let ai = &a[i * blk..(i + 1) * blk];
        if ai.iter().all(|c| c.is_zero()) {
            continue;
        }
        for j in 0..d {
            let bj = &b[j * blk..(j + 1) * blk];
            if bj.iter().all(|c| c.is_zero()) {
                continue;
            }
            let prod = mul_raw(fd, nlev - 1, ai, bj);
            for (t, p) in conv[i + j].iter_mut().zip(prod) {
                *t += p;
            }
        }
    }
    // Reduce by the minimal polynomial: α^k = α^{k-d}·(-Σ low[j] α^j).
    for k in (d..2 * d - 1).rev() {
        let head = std::mem::replace(&mut conv[k], Vec::new());
        if head.iter().all(|c| c.is_zero()) {
            continue;
        }
        for j in 0..d {
            let lo = &level.minpoly_low[j];
            if lo.iter().all(|c| c.is_zero()) {
                continue;
            }
            let prod = mul_raw(fd, nlev - 1, &head, lo);
            for (t, p) in conv[k - d + j].iter_mut().zip(prod) {
                *t -= p;
            }
        }
    }
    let mut out = Vec::with_capacity(d * blk);
    for blk_vec in conv.into_iter().take(d) {
        out.extend(blk_vec);
    }
    out
}

/// Inverse of a nonzero flat slice over the first `nlev` levels, via extended
/// Euclid against the top minimal polynomial.
fn inv_raw(fd: &FieldDescriptor, nlev: usize, a: &[BigRational]) -> Vec<BigRational> {
    if nlev == 0 {
        assert!(!a[0].is_zero(), "inverse of zero");
        return vec![a[0].recip()];
    }
    let level = &fd.levels[nlev - 1];
    let d = level.degree();
    let blk = fd.dim_upto(nlev - 1);

    // Polynomials over the sub-tower, as vectors of blocks (low to high).
    type P = Vec<Vec<BigRational>>;
    let zero_blk = |_: ()| vec![BigRational::zero(); blk];
    let is_zero_p = |p: &P| p.iter().all(|c| c.iter().all(|x| x.is_zero()));
    let trim = |mut p: P| -> P {
        while p.len() > 0 && p.last().unwrap().iter().all(|x| x.is_zero()) {
            p.pop();
        }
        p
    };

    let a_poly: P = trim((0..d).map(|i| a[i * blk..(i + 1) * blk].to_vec()).collect());
    assert!(!is_zero_p(&a_poly), "inverse of zero");
    let mut m_poly: P = level.minpoly_low.clone();
    m_poly.push({
        let mut one = zero_blk(());
        one[0] = BigRational::one();
        one
    });

    // Extended Euclid: maintain r0 = m, r1 = a with cofactors u (w.r.t. a).
    let mut r0 = m_poly;
    let mut r1 = a_poly;
    let mut u0: P = Vec::new(); // coefficient of `a` producing r0
    let mut u1: P = vec![{
        let mut one = zero_blk(());
        one[0] = BigRational::one();
        one
    }];
    while !is_zero_p(&r1) {
        // Divide r0 by r1 over the sub-field.
        let lead_inv = inv_raw(fd, nlev - 1, r1.last().unwrap());
        let mut q: P = vec![zero_blk(()); r0.len().saturating_sub(r1.len()) + 1];
        let mut rem = r0.clone();
        while rem.len() >= r1.len() && !is_zero_p(&rem) {
            let shift = rem.len() - r1.len();
            let factor = mul_raw(fd, nlev - 1, rem.last().unwrap(), &lead_inv);
            for (t, f) in q[shift].iter_mut().zip(factor.iter()) {
                *t += f;
            }
            for (i, c) in r1.iter().enumerate() {
                let sub = mul_raw(fd, nlev - 1, &factor, c);
                for (t, s) in rem[shift + i].iter_mut().zip(sub) {
                    *t -= s;
                }
            }
            rem = trim(rem);
            if rem.len() >= r1.len() + (r0.len() - r1.len()) + 2 {
                unreachable!();
            }
        }
        // u_new = u0 - q * u1
        let mut u_new: P = u0.clone();
        let need = q.len() + u1.len();
        while u_new.len() < need.max(1) - 1 + 1 {
            u_new.push(zero_blk(()));
        }
        for (i, qc) in q.iter().enumerate() {
            if qc.iter().all(|x| x.is_zero()) {
                continue;
            }
            for (j, uc) in u1.iter().enumerate() {
                let prod = mul_raw(fd, nlev - 1, qc, uc);
                while u_new.len() <= i + j {
                    u_new.push(zero_blk(()));
                }
                for (t, p) in u_new[i + j].iter_mut().zip(prod) {
                    *t -= p;
                }
            }
        }
        r0 = r1;
        r1 = rem;
        u0 = u1;
        u1 = trim(u_new);
    }
    // r0 is a nonzero constant gcd (minpoly irreducible): inverse = u0 / r0.
    assert_eq!(r0.len(), 1, "minimal polynomial not irreducible over its base");
    let c_inv = inv_raw(fd, nlev - 1, &r0[0]);
    let mut out = vec![BigRational::zero(); d * blk];
    for (i, uc) in u0.iter().enumerate().take(d) {
        let scaled = mul_raw(fd, nlev - 1, uc, &c_inv);
        for (t, s) in out[i * blk..(i + 1) * blk].iter_mut().zip(scaled) {
            *t = s;
        }
    }
    out
}

// ---- FieldElem API --------------------------------------------------------

impl FieldElem {
    pub fn zero(field: &Arc<FieldDescriptor>) -> FieldElem {
        FieldElem {
            field: Arc::clone(field),
            coords: vec![BigRational::zero(); field.dim()],
        }
    }

    pub fn one(field: &Arc<FieldDescriptor>) -> FieldElem {
        Self::from_rational(field, BigRational::one())
    }

    pub fn from_rational(field: &Arc<FieldDescriptor>, q: BigRational) -> FieldElem {
        let mut coords = vec![BigRational::zero(); field.dim()];
        coords[0] = q;
        FieldElem {
            field: Arc::clone(field),
            coords,
        }
    }

    pub fn from_int(field: &Arc<FieldDescriptor>, n: i64) -> FieldElem {
        Self::from_rational(field, crate::rat::int(n))
    }

    /// The generator of tower level `k` (0-based).
    pub fn generator(field: &Arc<FieldDescriptor>, k: usize) -> FieldElem {
        let mut coords = vec![BigRational::zero(); field.dim()];
        coords[field.dim_upto(k)] = BigRational::one();
        FieldElem {
            field: Arc::clone(field),
            coords,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|c| c.is_zero())
    }

    pub fn is_one(&self) -> bool {
        self.coords[0].is_one() && self.coords[1..].iter().all(|c| c.is_zero())
    }

    /// Some(q) when the element lies in the prime field.
    pub fn to_rational(&self) -> Option<BigRational> {
        if self.coords[1..].iter().all(|c| c.is_zero()) {
            Some(self.coords[0].clone())
        } else {
            None
        }
    }

    pub fn add(&self, other: &FieldElem) -> FieldElem {
        debug_assert!(same_field(&self.field, &other.field));
        FieldElem {
            field: Arc::clone(&self.field),
            coords: self
                .coords
                .iter()
                .zip(&other.coords)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn sub(&self, other: &FieldElem) -> FieldElem {
        debug_assert!(same_field(&self.field, &other.field));
        FieldElem {
            field: Arc::clone(&self.field),
            coords: self
                .coords
                .iter()
                .zip(&other.coords)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }

    pub fn neg(&self) -> FieldElem {
        FieldElem {
            field: Arc::clone(&self.field),
            coords: self.coords.iter().map(|a| -a).collect(),
        }
    }

    pub fn mul(&self, other: &FieldElem) -> FieldElem {
        debug_assert!(same_field(&self.field, &other.field));
        FieldElem {
            field: Arc::clone(&self.field),
            coords: mul_raw(&self.field, self.field.levels.len(), &self.coords, &other.coords),
        }
    }

    pub fn mul_rat(&self, q: &BigRational) -> FieldElem {
        FieldElem {
            field: Arc::clone(&self.field),
            coords: self.coords.iter().map(|c| c * q).collect(),
        }
    }

    pub fn inv(&self) -> Option<FieldElem> {
        if self.is_zero() {
            return None;
        }
        Some(FieldElem {
            field: Arc::clone(&self.field),
            coords: inv_raw(&self.field, self.field.levels.len(), &self.coords),
        })
    }

    pub fn div(&self, other: &FieldElem) -> FieldElem {
        self.mul(&other.inv().expect("division by zero"))
    }

    /// Re-expresses the element in `target`, of which its own field must be a
    /// prefix. The power basis of a prefix occupies the low coordinates.
    pub fn embed(&self, target: &Arc<FieldDescriptor>) -> FieldElem {
        assert!(self.field.is_prefix_of(target), "embed: not a subtower");
        let mut coords = vec![BigRational::zero(); target.dim()];
        coords[..self.coords.len()].clone_from_slice(&self.coords);
        FieldElem {
            field: Arc::clone(target),
            coords,
        }
    }

    /// Trace of the multiplication-by-self endomorphism of the tower as a
    /// Q-vector space. For a rational element this is dim·value.
    pub fn trace_to_q(&self) -> BigRational {
        let n = self.field.dim();
        let mut tr = BigRational::zero();
        for j in 0..n {
            let mut basis = vec![BigRational::zero(); n];
            basis[j] = BigRational::one();
            let col = mul_raw(&self.field, self.field.levels.len(), &self.coords, &basis);
            tr += &col[j];
        }
        tr
    }
}

impl fmt::Debug for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(q) = self.to_rational() {
            return write!(f, "{}", crate::rat::fmt_rat(&q));
        }
        // Multi-index rendering c·a^i·b^j + …
        let mut parts = Vec::new();
        for (idx, c) in self.coords.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let mut rem = idx;
            let mut mono = String::new();
            for lvl in &self.field.levels {
                let d = lvl.degree();
                let e = rem % d;
                rem /= d;
                if e > 0 {
                    if !mono.is_empty() {
                        mono.push('*');
                    }
                    mono.push_str(&lvl.name);
                    if e > 1 {
                        mono.push_str(&format!("^{}", e));
                    }
                }
            }
            let cs = crate::rat::fmt_rat(c);
            parts.push(if mono.is_empty() {
                cs
            } else if c.is_one() {
                mono
            } else {
                format!("{}*{}", cs, mono)
            });
        }
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

/// Extends `fd` by one level with the given monic minimal polynomial
/// (coefficients over `fd`, low to high, leading 1 included). Irreducibility
/// is the caller's responsibility to have verified; degree must be ≥ 2.
///
/// Returns the new descriptor; old elements embed via [`FieldElem::embed`].
pub fn extend_unchecked(
    fd: &Arc<FieldDescriptor>,
    name: &str,
    monic_coeffs: &[FieldElem],
) -> Result<Arc<FieldDescriptor>> {
    let d = monic_coeffs.len() - 1;
    if d < 2 {
        return Err(Error::ReducibleMinimalPolynomial);
    }
    assert!(monic_coeffs.last().unwrap().is_one(), "minimal polynomial must be monic");
    let minpoly_low = monic_coeffs[..d].iter().map(|c| c.coords.clone()).collect();
    let mut levels = fd.levels.clone();
    levels.push(Level {
        name: name.to_string(),
        minpoly_low,
    });
    Ok(Arc::new(FieldDescriptor { levels }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::{int, rat};

    fn q_sqrt2() -> Arc<FieldDescriptor> {
        let q = FieldDescriptor::rationals();
        let coeffs = vec![
            FieldElem::from_int(&q, -2),
            FieldElem::zero(&q),
            FieldElem::one(&q),
        ];
        extend_unchecked(&q, "r2", &coeffs).unwrap()
    }

    #[test]
    fn sqrt2_arithmetic() {
        let k = q_sqrt2();
        let a = FieldElem::generator(&k, 0); // √2
        let sq = a.mul(&a);
        assert_eq!(sq.to_rational(), Some(int(2)));
        let inv = a.inv().unwrap(); // √2/2
        assert!(a.mul(&inv).is_one());
        assert_eq!(a.trace_to_q(), int(0));
        let b = a.add(&FieldElem::from_int(&k, 3)); // 3 + √2
        assert_eq!(b.trace_to_q(), int(6));
        assert!(b.mul(&b.inv().unwrap()).is_one());
    }

    #[test]
    fn tower_of_height_two() {
        // Q(√2)(β) with β² = √2, so β is a 4th root of 2.
        let k1 = q_sqrt2();
        let r2 = FieldElem::generator(&k1, 0);
        let coeffs = vec![r2.neg(), FieldElem::zero(&k1), FieldElem::one(&k1)];
        let k2 = extend_unchecked(&k1, "b", &coeffs).unwrap();
        assert_eq!(k2.dim(), 4);
        let b = FieldElem::generator(&k2, 1);
        let b2 = b.mul(&b);
        assert_eq!(b2, FieldElem::generator(&k2, 0)); // β² = √2
        let b4 = b2.mul(&b2);
        assert_eq!(b4.to_rational(), Some(int(2)));
        // (1 + β)⁻¹ sanity
        let e = b.add(&FieldElem::one(&k2));
        assert!(e.mul(&e.inv().unwrap()).is_one());
        // embedding respects arithmetic
        let x = r2.embed(&k2);
        assert_eq!(x.mul(&x).to_rational(), Some(int(2)));
        let q = FieldElem::from_rational(&FieldDescriptor::rationals(), rat(3, 5));
        assert_eq!(q.embed(&k2).to_rational(), Some(rat(3, 5)));
    }
}
