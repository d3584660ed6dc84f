//! Exact linear algebra over a field tower: row reduction, rank, solving.

use std::sync::Arc;

use crate::field::{FieldDescriptor, FieldElem};

/// Dense matrix with row-major storage.
#[derive(Clone, Debug)]
pub struct Mat {
    pub field: Arc<FieldDescriptor>,
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<FieldElem>,
}

impl Mat {
    pub fn zero(field: &Arc<FieldDescriptor>, rows: usize, cols: usize) -> Mat {
        Mat {
            field: Arc::clone(field),
            rows,
            cols,
            data: vec![FieldElem::zero(field); rows * cols],
        }
    }

    pub fn at(&self, r: usize, c: usize) -> &FieldElem {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: FieldElem) {
        self.data[r * self.cols + c] = v;
    }

    /// In-place Gauss-Jordan; returns the pivot columns.
    pub fn row_reduce(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut row = 0usize;
        for col in 0..self.cols {
            if row == self.rows {
                break;
            }
            let mut sel = None;
            for r in row..self.rows {
                if !self.at(r, col).is_zero() {
                    sel = Some(r);
                    break;
                }
            }
            let Some(sel) = sel else { continue };
            for c in 0..self.cols {
                self.data.swap(row * self.cols + c, sel * self.cols + c);
            }
            let inv = self.at(row, col).inv().unwrap();
            for c in col..self.cols {
                let v = self.at(row, c).mul(&inv);
                self.set(row, c, v);
            }
            for r in 0..self.rows {
                if r != row && !self.at(r, col).is_zero() {
                    let f = self.at(r, col).clone();
                    for c in col..self.cols {
                        let v = self.at(r, c).sub(&f.mul(self.at(row, c)));
                        self.set(r, c, v);
                    }
                }
            }
            pivots.push(col);
            row += 1;
        }
        pivots
    }

    pub fn rank(mut self) -> usize {
        self.row_reduce().len()
    }

    /// Solves self·x = rhs; returns None when inconsistent. Free variables
    /// are set to zero.
    pub fn solve(mut self, rhs: &[FieldElem]) -> Option<Vec<FieldElem>> {
        assert_eq!(rhs.len(), self.rows);
        let n = self.cols;
        let mut aug = Mat::zero(&self.field, self.rows, n + 1);
        for r in 0..self.rows {
            for c in 0..n {
                aug.set(r, c, self.at(r, c).clone());
            }
            aug.set(r, n, rhs[r].clone());
        }
        self.data.clear();
        let pivots = aug.row_reduce();
        if pivots.contains(&n) {
            return None; // pivot in the rhs column
        }
        let mut x = vec![FieldElem::zero(&aug.field); n];
        for (r, &pc) in pivots.iter().enumerate() {
            x[pc] = aug.at(r, n).clone();
        }
        Some(x)
    }

    /// Basis of the right kernel.
    pub fn kernel(mut self) -> Vec<Vec<FieldElem>> {
        let pivots = self.row_reduce();
        let pivot_set: std::collections::BTreeSet<usize> = pivots.iter().copied().collect();
        let mut out = Vec::new();
        for free in 0..self.cols {
            if pivot_set.contains(&free) {
                continue;
            }
            let mut v = vec![FieldElem::zero(&self.field); self.cols];
            v[free] = FieldElem::one(&self.field);
            for (r, &pc) in pivots.iter().enumerate() {
                v[pc] = self.at(r, free).neg();
            }
            out.push(v);
        }
        out
    }
}
