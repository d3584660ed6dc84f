//! Dense univariate polynomials over a field tower.

use std::fmt;
use std::sync::Arc;

use crate::field::{same_field, FieldDescriptor, FieldElem};

/// Coefficients low to high; no trailing zeros; `coeffs` empty means 0.
#[derive(Clone, PartialEq, Eq)]
pub struct Poly1 {
    pub field: Arc<FieldDescriptor>,
    pub coeffs: Vec<FieldElem>,
}

impl Poly1 {
    pub fn zero(field: &Arc<FieldDescriptor>) -> Poly1 {
        Poly1 {
            field: Arc::clone(field),
            coeffs: Vec::new(),
        }
    }

    pub fn from_coeffs(field: &Arc<FieldDescriptor>, coeffs: Vec<FieldElem>) -> Poly1 {
        let mut p = Poly1 {
            field: Arc::clone(field),
            coeffs,
        };
        p.trim();
        p
    }

    pub fn constant(c: FieldElem) -> Poly1 {
        let field = Arc::clone(&c.field);
        Poly1::from_coeffs(&field, vec![c])
    }

    pub fn monomial(field: &Arc<FieldDescriptor>, c: FieldElem, deg: usize) -> Poly1 {
        let mut coeffs = vec![FieldElem::zero(field); deg + 1];
        coeffs[deg] = c;
        Poly1::from_coeffs(field, coeffs)
    }

    fn trim(&mut self) {
        while self.coeffs.last().map_or(false, |c| c.is_zero()) {
            self.coeffs.pop();
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree of a nonzero polynomial; callers check `is_zero` first.
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn lead(&self) -> &FieldElem {
        self.coeffs.last().expect("lead of zero polynomial")
    }

    pub fn coeff(&self, i: usize) -> FieldElem {
        self.coeffs
            .get(i)
            .cloned()
            .unwrap_or_else(|| FieldElem::zero(&self.field))
    }

    pub fn add(&self, other: &Poly1) -> Poly1 {
        debug_assert!(same_field(&self.field, &other.field));
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut coeffs = Vec::with_capacity(n);
        for i in 0..n {
            coeffs.push(self.coeff(i).add(&other.coeff(i)));
        }
        Poly1::from_coeffs(&self.field, coeffs)
    }

    pub fn sub(&self, other: &Poly1) -> Poly1 {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Poly1 {
        Poly1 {
            field: Arc::clone(&self.field),
            coeffs: self.coeffs.iter().map(|c| c.neg()).collect(),
        }
    }

    pub fn mul(&self, other: &Poly1) -> Poly1 {
        debug_assert!(same_field(&self.field, &other.field));
        if self.is_zero() || other.is_zero() {
            return Poly1::zero(&self.field);
        }
        let mut coeffs =
            vec![FieldElem::zero(&self.field); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                coeffs[i + j] = coeffs[i + j].add(&a.mul(b));
            }
        }
        Poly1::from_coeffs(&self.field, coeffs)
    }

    pub fn scale(&self, c: &FieldElem) -> Poly1 {
        Poly1::from_coeffs(&self.field, self.coeffs.iter().map(|a| a.mul(c)).collect())
    }

    /// Euclidean division; the divisor's leading coefficient is inverted.
    pub fn divrem(&self, divisor: &Poly1) -> (Poly1, Poly1) {
        assert!(!divisor.is_zero(), "division by zero polynomial");
        let lead_inv = divisor.lead().inv().unwrap();
        let mut rem = self.clone();
        let mut quot = Poly1::zero(&self.field);
        while !rem.is_zero() && rem.degree() >= divisor.degree() {
            let shift = rem.degree() - divisor.degree();
            let factor = rem.lead().mul(&lead_inv);
            let term = Poly1::monomial(&self.field, factor, shift);
            quot = quot.add(&term);
            rem = rem.sub(&term.mul(divisor));
        }
        (quot, rem)
    }

    pub fn divides(&self, other: &Poly1) -> bool {
        if self.is_zero() {
            return other.is_zero();
        }
        other.divrem(self).1.is_zero()
    }

    pub fn monic(&self) -> Poly1 {
        if self.is_zero() {
            return self.clone();
        }
        self.scale(&self.lead().inv().unwrap())
    }

    pub fn gcd(&self, other: &Poly1) -> Poly1 {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let r = a.divrem(&b).1;
            a = b;
            b = r;
        }
        if a.is_zero() {
            a
        } else {
            a.monic()
        }
    }

    pub fn derivative(&self) -> Poly1 {
        if self.coeffs.len() <= 1 {
            return Poly1::zero(&self.field);
        }
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| c.mul_rat(&crate::rat::int(i as i64)))
            .collect();
        Poly1::from_coeffs(&self.field, coeffs)
    }

    pub fn eval(&self, x: &FieldElem) -> FieldElem {
        let mut acc = FieldElem::zero(&self.field);
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(x).add(c);
        }
        acc
    }

    /// Composition self(v + c).
    pub fn shift(&self, c: &FieldElem) -> Poly1 {
        let lin = Poly1::from_coeffs(&self.field, vec![c.clone(), FieldElem::one(&self.field)]);
        self.compose(&lin)
    }

    pub fn compose(&self, inner: &Poly1) -> Poly1 {
        let mut acc = Poly1::zero(&self.field);
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(inner).add(&Poly1::constant(c.clone()));
        }
        acc
    }

    pub fn embed(&self, target: &Arc<FieldDescriptor>) -> Poly1 {
        Poly1::from_coeffs(
            target,
            self.coeffs.iter().map(|c| c.embed(target)).collect(),
        )
    }

    /// Square-free part: self / gcd(self, self').
    pub fn squarefree_part(&self) -> Poly1 {
        let g = self.gcd(&self.derivative());
        if g.is_zero() || g.degree() == 0 {
            return self.monic();
        }
        self.divrem(&g).0.monic()
    }

    /// Yun square-free decomposition: monic pairwise-coprime factors with
    /// their multiplicities; the product of factor^mult is `self.monic()`.
    pub fn squarefree_decomposition(&self) -> Vec<(Poly1, usize)> {
        let mut out = Vec::new();
        let p = self.monic();
        if p.is_zero() || p.degree() == 0 {
            return out;
        }
        let dp = p.derivative();
        let g = p.gcd(&dp);
        let mut c = p.divrem(&g).0;
        let mut d = dp.divrem(&g).0.sub(&c.derivative());
        let mut i = 1usize;
        while c.degree() > 0 {
            let f = c.gcd(&d);
            if f.degree() > 0 {
                out.push((f.monic(), i));
            }
            c = c.divrem(&f).0;
            d = d.divrem(&f).0.sub(&c.derivative());
            i += 1;
        }
        out
    }
}

impl fmt::Debug for Poly1 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for Poly1 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut parts = Vec::new();
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let v = match i {
                0 => format!("{}", c),
                1 => format!("({})*v", c),
                _ => format!("({})*v^{}", c, i),
            };
            parts.push(v);
        }
        write!(f, "{}", parts.join(" + "))
    }
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
    fn divrem_and_gcd() {
        let p = qpoly(&[-1, 0, 1]); // v² − 1
        let a = qpoly(&[-1, 1]); // v − 1
        let (q, r) = p.divrem(&a);
        assert!(r.is_zero());
        assert_eq!(q, qpoly(&[1, 1]));
        assert_eq!(p.gcd(&a), a.monic());
    }

    #[test]
    fn yun_decomposition() {
        // (v−1)²(v+2)
        let p = qpoly(&[-1, 1]).mul(&qpoly(&[-1, 1])).mul(&qpoly(&[2, 1]));
        let dec = p.squarefree_decomposition();
        assert_eq!(dec.len(), 2);
        let mut prod = Poly1::constant(FieldElem::one(&p.field));
        for (f, m) in &dec {
            for _ in 0..*m {
                prod = prod.mul(f);
            }
        }
        assert_eq!(prod, p.monic());
        assert!(dec.iter().any(|(f, m)| *m == 2 && f.degree() == 1));
    }
}
