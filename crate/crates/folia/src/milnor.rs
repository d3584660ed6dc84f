//! Milnor numbers by exact local algebra.
//!
//! The local dimension dim Ô/(a, b) is computed as the stable value of
//! d_N = dim( polynomials of degree < N modulo the truncations of all
//! monomial multiples of a and b ). That quotient is Ô/((a,b) + m^N); once
//! d_{N+1} = d_N, Nakayama forces m^N ⊆ (a, b) locally and d_N is the Milnor
//! number. Truncation is what localizes: unit factors away from the origin
//! get inverted by their own geometric series.

use crate::linalg::Mat;
use crate::poly2::{Axis, OneForm, Poly2};

pub const DEFAULT_MILNOR_CAP: usize = 256;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Milnor {
    Finite(usize),
    /// The coefficients share a factor vanishing at the origin.
    NotIsolated,
    /// Stabilization ran past the configured cap.
    CapExceeded,
}

impl Milnor {
    pub fn finite(self) -> Option<usize> {
        match self {
            Milnor::Finite(n) => Some(n),
            _ => None,
        }
    }
}

/// Milnor number of the ideal (a, b) at the origin.
pub fn milnor_number(a: &Poly2, b: &Poly2, cap: usize) -> Milnor {
    if a.is_zero() && b.is_zero() {
        return Milnor::NotIsolated;
    }
    let field = &a.field;
    let zero_at_origin = |p: &Poly2| p.coeff(0, 0).is_zero();
    if !zero_at_origin(a) || !zero_at_origin(b) {
        return Milnor::Finite(0); // unit ideal locally
    }
    let g = a.gcd(b);
    if g.total_degree().unwrap_or(0) >= 1 && g.coeff(0, 0).is_zero() {
        return Milnor::NotIsolated;
    }

    let mut prev: Option<usize> = None;
    let mut n: u32 = 1;
    loop {
        let monomials: Vec<(u32, u32)> = (0..n)
            .flat_map(|i| (0..n - i).map(move |j| (i, j)))
            .collect();
        let col_of = |i: u32, j: u32| -> usize {
            monomials.iter().position(|&m| m == (i, j)).unwrap()
        };
        let mut rows: Vec<Poly2> = Vec::new();
        for g in [a, b] {
            if g.is_zero() {
                continue;
            }
            let ord = g.order().finite().unwrap_or(0);
            for &(i, j) in &monomials {
                if i + j + ord >= n {
                    continue;
                }
                let m = g.mul_monomial(i, j).truncate_below(n);
                if !m.is_zero() {
                    rows.push(m);
                }
            }
        }
        let mut mat = Mat::zero(field, rows.len(), monomials.len());
        for (r, poly) in rows.iter().enumerate() {
            for (&(i, j), c) in &poly.terms {
                mat.set(r, col_of(i, j), c.clone());
            }
        }
        let rank = mat.rank();
        let d = monomials.len() - rank;
        if d > cap || n as usize > cap {
            return Milnor::CapExceeded;
        }
        if prev == Some(d) {
            return Milnor::Finite(d);
        }
        prev = Some(d);
        n += 1;
    }
}

/// Vanishing order at the origin of the dual vector field restricted to an
/// invariant axis; `None` when the axis is not invariant or lies in the
/// singular locus.
pub fn milnor_along_axis(form: &OneForm, axis: Axis) -> Option<usize> {
    if !form.axis_invariant(axis) {
        return None;
    }
    // On {y=0} the tangent component is −b(x,0)∂x; on {x=0} it is a(0,y)∂y.
    let restricted = match axis {
        Axis::X => form.b.restrict_y0(),
        Axis::Y => form.a.restrict_x0(),
    };
    if restricted.is_zero() {
        return None;
    }
    restricted.coeffs.iter().position(|c| !c.is_zero())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{FieldDescriptor, FieldElem};
    use std::sync::Arc;

    fn q() -> Arc<FieldDescriptor> {
        FieldDescriptor::rationals()
    }

    fn mono(c: i64, i: u32, j: u32) -> Poly2 {
        Poly2::monomial(&q(), FieldElem::from_int(&q(), c), i, j)
    }

    #[test]
    fn monomial_pairs() {
        // (−3x², 2y) → 2
        assert_eq!(
            milnor_number(&mono(-3, 2, 0), &mono(2, 0, 1), 256),
            Milnor::Finite(2)
        );
        // (y, x) → 1
        assert_eq!(
            milnor_number(&mono(1, 0, 1), &mono(1, 1, 0), 256),
            Milnor::Finite(1)
        );
        // (x, x) → NotIsolated
        assert_eq!(
            milnor_number(&mono(1, 1, 0), &mono(1, 1, 0), 256),
            Milnor::NotIsolated
        );
        // (p x^{p-1}, q y^{q-1}) → (p−1)(q−1) spot check
        assert_eq!(
            milnor_number(&mono(4, 3, 0), &mono(3, 0, 2), 256),
            Milnor::Finite(6)
        );
    }

    #[test]
    fn localization_inverts_units() {
        // (y(y−1), x): global scheme has two points but μ₀ = 1.
        let a = mono(1, 0, 2).add(&mono(-1, 0, 1)); // y² − y
        let b = mono(1, 1, 0);
        assert_eq!(milnor_number(&a, &b, 256), Milnor::Finite(1));
    }

    #[test]
    fn along_axis() {
        // ω = −x dy + y² dx: strong branch {y=0} → 1, weak branch {x=0} → 2
        let form = OneForm::new(mono(1, 0, 2), mono(-1, 1, 0));
        assert_eq!(milnor_along_axis(&form, Axis::X), Some(1));
        assert_eq!(milnor_along_axis(&form, Axis::Y), Some(2));
        // non-invariant axis
        let form2 = OneForm::new(mono(1, 0, 0), mono(1, 1, 0));
        assert_eq!(milnor_along_axis(&form2, Axis::X), None);
    }
}
