//! Sparse bivariate polynomials over a field tower, 1-forms, and the
//! linear-part / eigenvalue-ratio analysis that drives the reduced test.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Signed;

use crate::field::{same_field, FieldDescriptor, FieldElem};
use crate::poly1::Poly1;
use crate::rat::perfect_square;

/// Order of a polynomial: minimal total degree, or `Infinite` for 0.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Order {
    Finite(u32),
    Infinite,
}

impl Order {
    pub fn finite(self) -> Option<u32> {
        match self {
            Order::Finite(n) => Some(n),
            Order::Infinite => None,
        }
    }
}

/// Sparse bivariate polynomial; no zero coefficients are stored.
#[derive(Clone, PartialEq, Eq)]
pub struct Poly2 {
    pub field: Arc<FieldDescriptor>,
    pub terms: BTreeMap<(u32, u32), FieldElem>,
}

impl Poly2 {
    pub fn zero(field: &Arc<FieldDescriptor>) -> Poly2 {
        Poly2 {
            field: Arc::clone(field),
            terms: BTreeMap::new(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn monomial(field: &Arc<FieldDescriptor>, c: FieldElem, i: u32, j: u32) -> Poly2 {
        let mut p = Poly2::zero(field);
        p.add_term(i, j, c);
        p
    }

    pub fn constant(c: FieldElem) -> Poly2 {
        let field = Arc::clone(&c.field);
        Poly2::monomial(&field, c, 0, 0)
    }

    pub fn add_term(&mut self, i: u32, j: u32, c: FieldElem) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry((i, j)) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                let s = e.get().add(&c);
                if s.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = s;
                }
            }
        }
    }

    pub fn add(&self, other: &Poly2) -> Poly2 {
        debug_assert!(same_field(&self.field, &other.field));
        let mut out = self.clone();
        for (&(i, j), c) in &other.terms {
            out.add_term(i, j, c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Poly2) -> Poly2 {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Poly2 {
        Poly2 {
            field: Arc::clone(&self.field),
            terms: self
                .terms
                .iter()
                .map(|(&k, c)| (k, c.neg()))
                .collect(),
        }
    }

    pub fn mul(&self, other: &Poly2) -> Poly2 {
        debug_assert!(same_field(&self.field, &other.field));
        let mut out = Poly2::zero(&self.field);
        for (&(i1, j1), c1) in &self.terms {
            for (&(i2, j2), c2) in &other.terms {
                out.add_term(i1 + i2, j1 + j2, c1.mul(c2));
            }
        }
        out
    }

    pub fn scale(&self, c: &FieldElem) -> Poly2 {
        if c.is_zero() {
            return Poly2::zero(&self.field);
        }
        Poly2 {
            field: Arc::clone(&self.field),
            terms: self
                .terms
                .iter()
                .map(|(&k, v)| (k, v.mul(c)))
                .collect(),
        }
    }

    pub fn mul_monomial(&self, di: u32, dj: u32) -> Poly2 {
        Poly2 {
            field: Arc::clone(&self.field),
            terms: self
                .terms
                .iter()
                .map(|(&(i, j), c)| ((i + di, j + dj), c.clone()))
                .collect(),
        }
    }

    /// Minimal total degree of a stored monomial.
    pub fn order(&self) -> Order {
        self.terms
            .keys()
            .map(|&(i, j)| i + j)
            .min()
            .map_or(Order::Infinite, Order::Finite)
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|&(i, j)| i + j).max()
    }

    /// Order in the first variable alone (min exponent of x).
    pub fn order_x(&self) -> Option<u32> {
        self.terms.keys().map(|&(i, _)| i).min()
    }

    pub fn order_y(&self) -> Option<u32> {
        self.terms.keys().map(|&(_, j)| j).min()
    }

    pub fn coeff(&self, i: u32, j: u32) -> FieldElem {
        self.terms
            .get(&(i, j))
            .cloned()
            .unwrap_or_else(|| FieldElem::zero(&self.field))
    }

    /// Homogeneous part of total degree d.
    pub fn homogeneous_part(&self, d: u32) -> Poly2 {
        Poly2 {
            field: Arc::clone(&self.field),
            terms: self
                .terms
                .iter()
                .filter(|(&(i, j), _)| i + j == d)
                .map(|(&k, c)| (k, c.clone()))
                .collect(),
        }
    }

    /// Truncation: keep terms of total degree < n.
    pub fn truncate_below(&self, n: u32) -> Poly2 {
        Poly2 {
            field: Arc::clone(&self.field),
            terms: self
                .terms
                .iter()
                .filter(|(&(i, j), _)| i + j < n)
                .map(|(&k, c)| (k, c.clone()))
                .collect(),
        }
    }

    pub fn deriv_x(&self) -> Poly2 {
        let mut out = Poly2::zero(&self.field);
        for (&(i, j), c) in &self.terms {
            if i > 0 {
                out.add_term(i - 1, j, c.mul_rat(&crate::rat::int(i as i64)));
            }
        }
        out
    }

    pub fn deriv_y(&self) -> Poly2 {
        let mut out = Poly2::zero(&self.field);
        for (&(i, j), c) in &self.terms {
            if j > 0 {
                out.add_term(i, j - 1, c.mul_rat(&crate::rat::int(j as i64)));
            }
        }
        out
    }

    /// Exact division by x^k; panics if not divisible.
    pub fn div_x_pow(&self, k: u32) -> Poly2 {
        Poly2 {
            field: Arc::clone(&self.field),
            terms: self
                .terms
                .iter()
                .map(|(&(i, j), c)| {
                    assert!(i >= k, "not divisible by x^{}", k);
                    ((i - k, j), c.clone())
                })
                .collect(),
        }
    }

    pub fn div_y_pow(&self, k: u32) -> Poly2 {
        Poly2 {
            field: Arc::clone(&self.field),
            terms: self
                .terms
                .iter()
                .map(|(&(i, j), c)| {
                    assert!(j >= k, "not divisible by y^{}", k);
                    ((i, j - k), c.clone())
                })
                .collect(),
        }
    }

    /// Restriction to the x-axis {y = 0}, as a univariate polynomial in x.
    pub fn restrict_y0(&self) -> Poly1 {
        let deg = self
            .terms
            .keys()
            .filter(|&&(_, j)| j == 0)
            .map(|&(i, _)| i)
            .max();
        let Some(deg) = deg else {
            return Poly1::zero(&self.field);
        };
        let mut coeffs = vec![FieldElem::zero(&self.field); deg as usize + 1];
        for (&(i, j), c) in &self.terms {
            if j == 0 {
                coeffs[i as usize] = c.clone();
            }
        }
        Poly1::from_coeffs(&self.field, coeffs)
    }

    /// Restriction to the y-axis {x = 0}, as a univariate polynomial in y.
    pub fn restrict_x0(&self) -> Poly1 {
        let deg = self
            .terms
            .keys()
            .filter(|&&(i, _)| i == 0)
            .map(|&(_, j)| j)
            .max();
        let Some(deg) = deg else {
            return Poly1::zero(&self.field);
        };
        let mut coeffs = vec![FieldElem::zero(&self.field); deg as usize + 1];
        for (&(i, j), c) in &self.terms {
            if i == 0 {
                coeffs[j as usize] = c.clone();
            }
        }
        Poly1::from_coeffs(&self.field, coeffs)
    }

    /// Substitution (x, y) -> (u, u·w) for the x-directed blow-up chart.
    pub fn subst_x_chart(&self) -> Poly2 {
        Poly2 {
            field: Arc::clone(&self.field),
            terms: {
                let mut t = BTreeMap::new();
                for (&(i, j), c) in &self.terms {
                    let key = (i + j, j);
                    insert_add(&mut t, key, c.clone());
                }
                t
            },
        }
    }

    /// Substitution (x, y) -> (t·v, v) for the y-directed blow-up chart.
    pub fn subst_y_chart(&self) -> Poly2 {
        Poly2 {
            field: Arc::clone(&self.field),
            terms: {
                let mut t = BTreeMap::new();
                for (&(i, j), c) in &self.terms {
                    let key = (i, i + j);
                    insert_add(&mut t, key, c.clone());
                }
                t
            },
        }
    }

    /// Substitution y -> y + c.
    pub fn shift_y(&self, c: &FieldElem) -> Poly2 {
        let mut out = Poly2::zero(&self.field);
        for (&(i, j), coeff) in &self.terms {
            // (y + c)^j expansion
            let mut cpow = FieldElem::one(&self.field);
            let mut binom = BigRational::from_integer(BigInt::from(1));
            for k in (0..=j).rev() {
                // term coeff * C(j, k) * c^{j-k} * x^i y^k ; iterate k from j down
                let contrib = coeff.mul(&cpow).mul_rat(&binom);
                out.add_term(i, k, contrib);
                if k > 0 {
                    cpow = cpow.mul(c);
                    // C(j, k-1) = C(j,k) * k / (j-k+1)
                    binom = binom * BigRational::new(BigInt::from(k), BigInt::from(j - k + 1));
                }
            }
        }
        out
    }

    pub fn shift_x(&self, c: &FieldElem) -> Poly2 {
        self.swap_xy().shift_y(c).swap_xy()
    }

    pub fn swap_xy(&self) -> Poly2 {
        Poly2 {
            field: Arc::clone(&self.field),
            terms: self
                .terms
                .iter()
                .map(|(&(i, j), c)| ((j, i), c.clone()))
                .collect(),
        }
    }

    /// General substitution x -> px, y -> py for arbitrary bivariate images.
    pub fn subst(&self, px: &Poly2, py: &Poly2) -> Poly2 {
        self.subst_truncated(px, py, u32::MAX)
    }

    /// Substitution with every intermediate product truncated to total degree
    /// ≤ max_deg; exact on the truncation window whenever the images have
    /// positive order. Horner over y keeps the cost linear in the y-degree.
    pub fn subst_truncated(&self, px: &Poly2, py: &Poly2, max_deg: u32) -> Poly2 {
        let cap = |p: Poly2| {
            if max_deg == u32::MAX {
                p
            } else {
                p.truncate_below(max_deg.saturating_add(1))
            }
        };
        if self.is_zero() {
            return Poly2::zero(&self.field);
        }
        let maxi = self.terms.keys().map(|&(i, _)| i).max().unwrap() as usize;
        let maxj = self.terms.keys().map(|&(_, j)| j).max().unwrap() as usize;
        let mut xpows: Vec<Poly2> = vec![Poly2::constant(FieldElem::one(&self.field))];
        for _ in 0..maxi {
            let last = cap(xpows.last().unwrap().mul(px));
            xpows.push(last);
        }
        // rows[j](x) = Σ_i c_{ij}·px^i, then Horner over py
        let mut rows: Vec<Poly2> = vec![Poly2::zero(&self.field); maxj + 1];
        for (&(i, j), c) in &self.terms {
            rows[j as usize] = rows[j as usize].add(&xpows[i as usize].scale(c));
        }
        let mut acc = Poly2::zero(&self.field);
        for j in (0..=maxj).rev() {
            acc = cap(acc.mul(py)).add(&rows[j]);
        }
        cap(acc)
    }

    /// Evaluation at a point.
    pub fn eval(&self, x: &FieldElem, y: &FieldElem) -> FieldElem {
        let mut acc = FieldElem::zero(&self.field);
        for (&(i, j), c) in &self.terms {
            let mut term = c.clone();
            for _ in 0..i {
                term = term.mul(x);
            }
            for _ in 0..j {
                term = term.mul(y);
            }
            acc = acc.add(&term);
        }
        acc
    }

    pub fn embed(&self, target: &Arc<FieldDescriptor>) -> Poly2 {
        Poly2 {
            field: Arc::clone(target),
            terms: self
                .terms
                .iter()
                .map(|(&k, c)| (k, c.embed(target)))
                .collect(),
        }
    }

    /// Views the polynomial as univariate in y with Poly1-in-x coefficients.
    fn as_y_poly(&self) -> Vec<Poly1> {
        let dy = self.terms.keys().map(|&(_, j)| j).max().map_or(0, |d| d as usize);
        let mut rows: Vec<Vec<(u32, FieldElem)>> = vec![Vec::new(); dy + 1];
        for (&(i, j), c) in &self.terms {
            rows[j as usize].push((i, c.clone()));
        }
        rows.into_iter()
            .map(|row| {
                let deg = row.iter().map(|&(i, _)| i).max().unwrap_or(0);
                let mut coeffs = vec![FieldElem::zero(&self.field); deg as usize + 1];
                for (i, c) in row {
                    coeffs[i as usize] = c;
                }
                Poly1::from_coeffs(&self.field, coeffs)
            })
            .collect()
    }

    fn from_y_poly(field: &Arc<FieldDescriptor>, rows: &[Poly1]) -> Poly2 {
        let mut out = Poly2::zero(field);
        for (j, row) in rows.iter().enumerate() {
            for (i, c) in row.coeffs.iter().enumerate() {
                out.add_term(i as u32, j as u32, c.clone());
            }
        }
        out
    }

    /// Bivariate gcd via primitive-part Euclid in y over K[x]; the result is
    /// normalized only up to a unit.
    pub fn gcd(&self, other: &Poly2) -> Poly2 {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        let a = self.as_y_poly();
        let b = other.as_y_poly();
        let g = gcd_ypolys(&self.field, &a, &b);
        Poly2::from_y_poly(&self.field, &g)
    }

    /// Exact division, when `divisor` divides `self`; leading-term elimination
    /// in lex order.
    pub fn div_exact(&self, divisor: &Poly2) -> Option<Poly2> {
        assert!(!divisor.is_zero());
        let mut rem = self.clone();
        let mut quot = Poly2::zero(&self.field);
        let (&(di, dj), dlead) = divisor.terms.iter().next_back().unwrap();
        let dlead_inv = dlead.inv().unwrap();
        while !rem.is_zero() {
            let (&(ri, rj), rlead) = rem.terms.iter().next_back().unwrap();
            if ri < di || rj < dj {
                return None;
            }
            let c = rlead.mul(&dlead_inv);
            let term = Poly2::monomial(&self.field, c, ri - di, rj - dj);
            quot = quot.add(&term);
            rem = rem.sub(&term.mul(divisor));
        }
        Some(quot)
    }
}

fn insert_add(t: &mut BTreeMap<(u32, u32), FieldElem>, key: (u32, u32), c: FieldElem) {
    use std::collections::btree_map::Entry;
    match t.entry(key) {
        Entry::Vacant(e) => {
            if !c.is_zero() {
                e.insert(c);
            }
        }
        Entry::Occupied(mut e) => {
            let s = e.get().add(&c);
            if s.is_zero() {
                e.remove();
            } else {
                *e.get_mut() = s;
            }
        }
    }
}

fn content(field: &Arc<FieldDescriptor>, rows: &[Poly1]) -> Poly1 {
    let mut g = Poly1::zero(field);
    for r in rows {
        g = g.gcd(r);
    }
    g
}

fn primitive(field: &Arc<FieldDescriptor>, rows: &[Poly1]) -> (Poly1, Vec<Poly1>) {
    let c = content(field, rows);
    if c.is_zero() || c.degree() == 0 {
        return (Poly1::constant(FieldElem::one(field)), rows.to_vec());
    }
    let prim = rows.iter().map(|r| r.divrem(&c).0).collect();
    (c, prim)
}

fn gcd_ypolys(field: &Arc<FieldDescriptor>, a: &[Poly1], b: &[Poly1]) -> Vec<Poly1> {
    let trim = |mut v: Vec<Poly1>| -> Vec<Poly1> {
        while v.last().map_or(false, |p| p.is_zero()) {
            v.pop();
        }
        v
    };
    let mut a = trim(a.to_vec());
    let mut b = trim(b.to_vec());
    if a.is_empty() {
        return b;
    }
    if b.is_empty() {
        return a;
    }
    if a.len() == 1 && b.len() == 1 {
        return vec![a[0].gcd(&b[0])];
    }
    let (ca, pa) = primitive(field, &a);
    let (cb, pb) = primitive(field, &b);
    let cont_gcd = ca.gcd(&cb);
    a = pa;
    b = pb;
    // pseudo-remainder Euclid on primitive parts
    while !b.is_empty() {
        if b.len() == 1 {
            // primitive degree-0 in y: gcd of primitive parts is constant in y
            b = vec![Poly1::constant(FieldElem::one(field))];
            std::mem::swap(&mut a, &mut b);
            break;
        }
        let r = pseudo_rem(field, &a, &b);
        let r = trim(r);
        a = b;
        b = if r.is_empty() {
            Vec::new()
        } else {
            primitive(field, &r).1
        };
    }
    // result: cont_gcd * a (a primitive)
    let mut out = Vec::with_capacity(a.len());
    for r in &a {
        out.push(r.mul(&cont_gcd));
    }
    out
}

/// Pseudo-remainder of a by b as y-polynomials with K[x] coefficients.
fn pseudo_rem(_field: &Arc<FieldDescriptor>, a: &[Poly1], b: &[Poly1]) -> Vec<Poly1> {
    let da = a.len() - 1;
    let db = b.len() - 1;
    if da < db {
        return a.to_vec();
    }
    let lead_b = b[db].clone();
    let mut rem: Vec<Poly1> = a.to_vec();
    for _ in 0..(da - db + 1) {
        let dr = rem.len().saturating_sub(1);
        if rem.iter().all(|p| p.is_zero()) || dr < db {
            break;
        }
        let lead_r = rem[dr].clone();
        // rem = lead_b * rem - lead_r * y^{dr-db} * b
        let mut new_rem: Vec<Poly1> = rem.iter().map(|p| p.mul(&lead_b)).collect();
        for (i, bc) in b.iter().enumerate() {
            let idx = dr - db + i;
            new_rem[idx] = new_rem[idx].sub(&bc.mul(&lead_r));
        }
        while new_rem.last().map_or(false, |p| p.is_zero()) {
            new_rem.pop();
        }
        rem = new_rem;
    }
    rem
}

impl fmt::Debug for Poly2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for Poly2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut parts = Vec::new();
        for (&(i, j), c) in self.terms.iter().rev() {
            let mut s = String::new();
            let coeff_str = format!("{}", c);
            let is_unit_one = coeff_str == "1";
            let needs_parens = coeff_str.contains('+') || coeff_str.contains('*');
            if !(is_unit_one && (i > 0 || j > 0)) {
                if needs_parens {
                    s.push_str(&format!("({})", coeff_str));
                } else {
                    s.push_str(&coeff_str);
                }
            }
            if i > 0 {
                if !s.is_empty() {
                    s.push('*');
                }
                s.push('x');
                if i > 1 {
                    s.push_str(&format!("^{}", i));
                }
            }
            if j > 0 {
                if !s.is_empty() {
                    s.push('*');
                }
                s.push('y');
                if j > 1 {
                    s.push_str(&format!("^{}", j));
                }
            }
            parts.push(s);
        }
        write!(f, "{}", parts.join(" + "))
    }
}

// ---------------------------------------------------------------------------
// 1-forms and linear parts
// ---------------------------------------------------------------------------

/// ω = a·dx + b·dy over a common field; not both coefficients zero.
#[derive(Clone, PartialEq, Eq)]
pub struct OneForm {
    pub a: Poly2,
    pub b: Poly2,
}

impl OneForm {
    pub fn new(a: Poly2, b: Poly2) -> OneForm {
        assert!(
            !(a.is_zero() && b.is_zero()),
            "1-form must not be identically zero"
        );
        debug_assert!(same_field(&a.field, &b.field));
        OneForm { a, b }
    }

    pub fn field(&self) -> &Arc<FieldDescriptor> {
        &self.a.field
    }

    /// Algebraic multiplicity: min of the coefficient orders.
    pub fn order(&self) -> u32 {
        let oa = self.a.order();
        let ob = self.b.order();
        match (oa, ob) {
            (Order::Finite(x), Order::Finite(y)) => x.min(y),
            (Order::Finite(x), Order::Infinite) => x,
            (Order::Infinite, Order::Finite(y)) => y,
            (Order::Infinite, Order::Infinite) => unreachable!(),
        }
    }

    /// Degree-1 coefficients of a and b, plus the dual-field trace and
    /// determinant used by the eigenvalue analysis.
    pub fn linear_part(&self) -> LinearPart {
        let a10 = self.a.coeff(1, 0);
        let a01 = self.a.coeff(0, 1);
        let b10 = self.b.coeff(1, 0);
        let b01 = self.b.coeff(0, 1);
        LinearPart::new(a10, a01, b10, b01)
    }

    pub fn embed(&self, target: &Arc<FieldDescriptor>) -> OneForm {
        OneForm {
            a: self.a.embed(target),
            b: self.b.embed(target),
        }
    }

    /// Dual vector field components (X, Y) with X = -b, Y = a; the field
    /// ω·(X∂x + Y∂y) = 0.
    pub fn dual_field(&self) -> (Poly2, Poly2) {
        (self.b.neg(), self.a.clone())
    }

    /// ω·R where R is the radial field x∂x + y∂y: x·a + y·b.
    pub fn radial_pairing(&self) -> Poly2 {
        self.a.mul_monomial(1, 0).add(&self.b.mul_monomial(0, 1))
    }
}

impl fmt::Debug for OneForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}) dx + ({}) dy", self.a, self.b)
    }
}

/// Linear data of a 1-form at the origin. The stored matrix is the Jacobian
/// of the dual vector field -b∂x + a∂y, rows (-b10, -b01) and (a10, a01);
/// its eigenvalues decide reducedness.
#[derive(Clone, Debug)]
pub struct LinearPart {
    pub a10: FieldElem,
    pub a01: FieldElem,
    pub neg_b10: FieldElem,
    pub neg_b01: FieldElem,
    pub trace: FieldElem,
    pub det: FieldElem,
}

impl LinearPart {
    pub fn new(a10: FieldElem, a01: FieldElem, b10: FieldElem, b01: FieldElem) -> LinearPart {
        let trace = a01.sub(&b10);
        let det = a10.mul(&b01).sub(&a01.mul(&b10));
        LinearPart {
            a10,
            a01,
            neg_b10: b10.neg(),
            neg_b01: b01.neg(),
            trace,
            det,
        }
    }

    pub fn ratio_class(&self) -> RatioClass {
        ratio_class(&self.trace, &self.det)
    }

    /// Eigenvalues are distinct iff trace² − 4·det ≠ 0.
    pub fn has_distinct_eigenvalues(&self) -> bool {
        let disc = self.trace.mul(&self.trace).sub(&self.det.mul_rat(&crate::rat::int(4)));
        !disc.is_zero()
    }

    pub fn is_nilpotent_or_zero(&self) -> bool {
        self.trace.is_zero() && self.det.is_zero()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RatioSign {
    Positive,
    Negative,
}

/// Classification of the eigenvalue ratio of the dual linear part.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RatioClass {
    /// Both eigenvalues vanish (nilpotent or zero linear part).
    BothZeroEigen,
    /// det = 0, trace ≠ 0: eigenvalues (trace, 0).
    SaddleNodeCandidate,
    /// Rational ratio p/q (|p| ≥ q > 0, coprime); sign Positive means the
    /// eigenvalues have equal signs (not reduced), Negative a resonant saddle.
    RationalRatio {
        p: BigInt,
        q: BigInt,
        sign: RatioSign,
        witness: BigRational,
    },
    /// The ratio is irrational or non-real; witness s = trace²/det when the
    /// quantity is rational, None when it already lives upstairs.
    IrrationalOrComplexRatio { witness: Option<BigRational> },
}

impl RatioClass {
    /// Reduced in the sense of the eigenvalue test: some eigenvalue nonzero
    /// and the ratio not a positive rational.
    pub fn is_reduced(&self) -> bool {
        match self {
            RatioClass::BothZeroEigen => false,
            RatioClass::SaddleNodeCandidate => true,
            RatioClass::RationalRatio { sign, .. } => *sign == RatioSign::Negative,
            RatioClass::IrrationalOrComplexRatio { .. } => true,
        }
    }

    /// The resonance pair (p, q) of a negative rational ratio −p/q.
    pub fn resonance(&self) -> Option<(u64, u64)> {
        match self {
            RatioClass::RationalRatio {
                p,
                q,
                sign: RatioSign::Negative,
                ..
            } => Some((
                p.magnitude().try_into().expect("resonance overflow"),
                q.magnitude().try_into().expect("resonance overflow"),
            )),
            _ => None,
        }
    }
}

/// Classifies the eigenvalue ratio from trace and determinant. With det ≠ 0
/// and s = trace²/det, the ratio r solves r² + (2−s)r + 1 = 0; r is rational
/// iff s is rational and s(s−4) is a perfect square.
pub fn ratio_class(trace: &FieldElem, det: &FieldElem) -> RatioClass {
    if det.is_zero() {
        return if trace.is_zero() {
            RatioClass::BothZeroEigen
        } else {
            RatioClass::SaddleNodeCandidate
        };
    }
    let s_elem = trace.mul(trace).div(det);
    let Some(s) = s_elem.to_rational() else {
        return RatioClass::IrrationalOrComplexRatio { witness: None };
    };
    let four = crate::rat::int(4);
    let disc = &s * (&s - &four);
    let Some(root) = perfect_square(&disc) else {
        return RatioClass::IrrationalOrComplexRatio { witness: Some(s) };
    };
    // r = ((s-2) ± root) / 2; the two roots are reciprocal. Keep |r| ≥ 1.
    let two = crate::rat::int(2);
    let r1 = (&s - &two + &root) / &two;
    let r2 = (&s - &two - &root) / &two;
    let r = if r1.abs() >= r2.abs() { r1 } else { r2 };
    let sign = if s > four || s == four {
        RatioSign::Positive
    } else {
        RatioSign::Negative
    };
    RatioClass::RationalRatio {
        p: r.numer().clone(),
        q: r.denom().clone(),
        sign,
        witness: s,
    }
}

/// Spec-level polynomial order: exposed as a free function.
pub fn poly_order(p: &Poly2) -> Order {
    p.order()
}


/// A coordinate axis used as a local curve: `X` is the x-axis {y = 0},
/// `Y` is the y-axis {x = 0}.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Axis {
    X,
    Y,
}

impl Axis {
    pub fn other(self) -> Axis {
        match self {
            Axis::X => Axis::Y,
            Axis::Y => Axis::X,
        }
    }
}

impl OneForm {
    /// True when the given axis is an invariant curve: the restriction of the
    /// form to the axis vanishes identically.
    pub fn axis_invariant(&self, axis: Axis) -> bool {
        match axis {
            Axis::X => self.a.restrict_y0().is_zero(),
            Axis::Y => self.b.restrict_x0().is_zero(),
        }
    }
}
