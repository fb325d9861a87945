//! Smith normal form with transformation matrices.
//!
//! The reduction keeps two invariants throughout:
//! `A = U · D · V` and `D = U⁻¹ · A · V⁻¹`, so both the factorization and
//! the change-of-basis needed for homology coordinates come out together.
//! The pivot is always the entry of smallest size in the remaining block,
//! ties broken in row-major order, which makes the transforms reproducible.

use super::matrix::{Coeff, IntMatrix, Matrix};

#[derive(Clone, Debug)]
pub struct SmithForm<R: Coeff> {
    pub u: Matrix<R>,
    pub d: Matrix<R>,
    pub v: Matrix<R>,
    pub u_inv: Matrix<R>,
    pub v_inv: Matrix<R>,
    pub rank: usize,
}

impl<R: Coeff> SmithForm<R> {
    /// Nonzero diagonal entries d₁ | d₂ | … in order.
    pub fn diagonal(&self) -> Vec<R> {
        (0..self.rank).map(|i| self.d[(i, i)].clone()).collect()
    }
}

/// `(U, D, V)` with `A = U·D·V`, `U` and `V` unimodular, `D` diagonal with a
/// divisibility chain of nonnegative entries.
pub fn smith_normal_form(a: &IntMatrix) -> (IntMatrix, IntMatrix, IntMatrix) {
    let f = smith(a);
    (f.u, f.d, f.v)
}

pub fn smith<R: Coeff>(a: &Matrix<R>) -> SmithForm<R> {
    let (m, n) = a.shape();
    let mut w = Work {
        d: a.clone(),
        u: Matrix::identity(m),
        u_inv: Matrix::identity(m),
        v: Matrix::identity(n),
        v_inv: Matrix::identity(n),
    };
    let mut rank = 0;
    for t in 0..m.min(n) {
        if !w.reduce_block(t) {
            break;
        }
        rank += 1;
    }
    SmithForm {
        u: w.u,
        d: w.d,
        v: w.v,
        u_inv: w.u_inv,
        v_inv: w.v_inv,
        rank,
    }
}

struct Work<R> {
    d: Matrix<R>,
    u: Matrix<R>,
    u_inv: Matrix<R>,
    v: Matrix<R>,
    v_inv: Matrix<R>,
}

impl<R: Coeff> Work<R> {
    fn pivot(&self, t: usize) -> Option<(usize, usize)> {
        let (m, n) = self.d.shape();
        let mut best: Option<(usize, usize)> = None;
        for i in t..m {
            for j in t..n {
                let x = &self.d[(i, j)];
                if x.is_zero() {
                    continue;
                }
                match best {
                    Some((bi, bj)) if x.cmp_size(&self.d[(bi, bj)]).is_ge() => {}
                    _ => best = Some((i, j)),
                }
            }
        }
        best
    }

    // row[target] += c * row[source]
    fn row_add(&mut self, target: usize, source: usize, c: &R) {
        self.d.add_row_multiple(target, source, c);
        self.u_inv.add_row_multiple(target, source, c);
        self.u.add_col_multiple(source, target, &c.negate());
    }

    // col[target] += c * col[source]
    fn col_add(&mut self, target: usize, source: usize, c: &R) {
        self.d.add_col_multiple(target, source, c);
        self.v_inv.add_col_multiple(target, source, c);
        self.v.add_row_multiple(source, target, &c.negate());
    }

    fn row_swap(&mut self, a: usize, b: usize) {
        self.d.swap_rows(a, b);
        self.u_inv.swap_rows(a, b);
        self.u.swap_cols(a, b);
    }

    fn col_swap(&mut self, a: usize, b: usize) {
        self.d.swap_cols(a, b);
        self.v_inv.swap_cols(a, b);
        self.v.swap_rows(a, b);
    }

    fn row_negate(&mut self, i: usize) {
        self.d.negate_row(i);
        self.u_inv.negate_row(i);
        self.u.negate_col(i);
    }

    /// Reduce the block starting at `(t, t)`; false when it is entirely zero.
    fn reduce_block(&mut self, t: usize) -> bool {
        let (m, n) = self.d.shape();
        loop {
            let Some((pi, pj)) = self.pivot(t) else {
                return false;
            };
            self.row_swap(t, pi);
            self.col_swap(t, pj);

            let mut clean = true;
            for i in t + 1..m {
                if self.d[(i, t)].is_zero() {
                    continue;
                }
                let q = self.d[(i, t)].quotient(&self.d[(t, t)]);
                self.row_add(i, t, &q.negate());
                clean &= self.d[(i, t)].is_zero();
            }
            for j in t + 1..n {
                if self.d[(t, j)].is_zero() {
                    continue;
                }
                let q = self.d[(t, j)].quotient(&self.d[(t, t)]);
                self.col_add(j, t, &q.negate());
                clean &= self.d[(t, j)].is_zero();
            }
            if !clean {
                continue;
            }

            let pivot = self.d[(t, t)].clone();
            let offender = (t + 1..m)
                .find(|&i| (t + 1..n).any(|j| !pivot.divides(&self.d[(i, j)])));
            if let Some(i) = offender {
                self.row_add(t, i, &R::one());
                continue;
            }

            if self.d[(t, t)].needs_negation() {
                self.row_negate(t);
            }
            return true;
        }
    }
}
