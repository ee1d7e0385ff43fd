//! Sparse exact elimination for systems with a rational matrix and a
//! parameter-polynomial right-hand side.
//!
//! The matrix is factored once; the row operations are recorded and replayed
//! on each right-hand side, so repeated solves at one degree share the work.

use std::collections::{BTreeMap, BTreeSet};

use num_traits::{One, Zero};

use crate::coeffring::{ParamPolynomial, Rational};

/// Row that reduced to `0 = remainder` with a nonzero remainder.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Inconsistent {
    pub row: usize,
    pub remainder: ParamPolynomial,
}

#[derive(Clone, Debug, Default)]
pub struct SparseMatrix {
    ncols: usize,
    rows: Vec<BTreeMap<usize, Rational>>,
}

impl SparseMatrix {
    pub fn new(ncols: usize) -> Self {
        SparseMatrix {
            ncols,
            rows: Vec::new(),
        }
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    pub fn push_row(&mut self, coeffs: BTreeMap<usize, Rational>) -> usize {
        debug_assert!(coeffs.keys().all(|&c| c < self.ncols));
        self.rows
            .push(coeffs.into_iter().filter(|(_, v)| !v.is_zero()).collect());
        self.rows.len() - 1
    }

    /// Adds `v` at `(row, col)`.
    pub fn add_entry(&mut self, row: usize, col: usize, v: &Rational) {
        let e = self.rows[row].entry(col).or_insert_with(Rational::zero);
        *e += v;
        if e.is_zero() {
            self.rows[row].remove(&col);
        }
    }

    /// Eliminates columns in the given priority order. Columns that never
    /// find a pivot are free.
    pub fn factor(self, order: &[usize]) -> Factorization {
        debug_assert_eq!(order.len(), self.ncols);
        let nrows = self.rows.len();
        let mut rows = self.rows;
        let mut col_rows: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); self.ncols];
        for (r, row) in rows.iter().enumerate() {
            for &c in row.keys() {
                col_rows[c].insert(r);
            }
        }
        let mut is_pivot = vec![false; nrows];
        let mut pivots: Vec<(usize, usize)> = Vec::new();
        let mut ops: Vec<RowOp> = Vec::new();

        for &c in order {
            let Some(pr) = col_rows[c]
                .iter()
                .copied()
                .filter(|&r| !is_pivot[r])
                .min_by_key(|&r| rows[r].len())
            else {
                continue;
            };
            is_pivot[pr] = true;
            pivots.push((c, pr));

            let inv = rows[pr][&c].recip();
            if !inv.is_one() {
                for v in rows[pr].values_mut() {
                    *v *= &inv;
                }
                ops.push(RowOp::Scale { row: pr, factor: inv });
            }
            let pivot_row = rows[pr].clone();

            let targets: Vec<usize> = col_rows[c]
                .iter()
                .copied()
                .filter(|&r| !is_pivot[r])
                .collect();
            for r in targets {
                let factor = rows[r][&c].clone();
                let row = &mut rows[r];
                for (&cc, v) in &pivot_row {
                    let entry = row.entry(cc).or_insert_with(Rational::zero);
                    *entry -= &factor * v;
                    if entry.is_zero() {
                        row.remove(&cc);
                        col_rows[cc].remove(&r);
                    } else {
                        col_rows[cc].insert(r);
                    }
                }
                ops.push(RowOp::Eliminate {
                    target: r,
                    pivot: pr,
                    factor,
                });
            }
        }

        let free_rows = (0..nrows).filter(|&r| !is_pivot[r]).collect();
        let reduced = pivots.iter().map(|&(_, r)| std::mem::take(&mut rows[r])).collect();
        Factorization {
            nrows,
            ncols: self.ncols,
            ops,
            pivots,
            reduced,
            free_rows,
        }
    }
}

#[derive(Clone, Debug)]
enum RowOp {
    Scale { row: usize, factor: Rational },
    Eliminate { target: usize, pivot: usize, factor: Rational },
}

#[derive(Clone, Debug)]
pub struct Factorization {
    nrows: usize,
    ncols: usize,
    ops: Vec<RowOp>,
    pivots: Vec<(usize, usize)>,
    reduced: Vec<BTreeMap<usize, Rational>>,
    free_rows: Vec<usize>,
}

impl Factorization {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    pub fn pivot_columns(&self) -> impl Iterator<Item = usize> + '_ {
        self.pivots.iter().map(|&(c, _)| c)
    }

    /// Solution with free variables set to zero.
    pub fn solve(&self, rhs: &[ParamPolynomial]) -> Result<Vec<ParamPolynomial>, Inconsistent> {
        assert_eq!(rhs.len(), self.nrows);
        let mut b = rhs.to_vec();
        for op in &self.ops {
            match op {
                RowOp::Scale { row, factor } => {
                    if !b[*row].is_zero() {
                        b[*row] = b[*row].scale(factor);
                    }
                }
                RowOp::Eliminate {
                    target,
                    pivot,
                    factor,
                } => {
                    if !b[*pivot].is_zero() {
                        let p = b[*pivot].clone();
                        b[*target].add_scaled(&p, &-factor);
                    }
                }
            }
        }
        if let Some(&r) = self.free_rows.iter().find(|&&r| !b[r].is_zero()) {
            return Err(Inconsistent {
                row: r,
                remainder: b[r].clone(),
            });
        }
        let mut x = vec![ParamPolynomial::zero(); self.ncols];
        for (i, &(c, r)) in self.pivots.iter().enumerate().rev() {
            let mut v = std::mem::take(&mut b[r]);
            for (&cc, coef) in &self.reduced[i] {
                if cc != c && !x[cc].is_zero() {
                    v.add_scaled(&x[cc], &-coef);
                }
            }
            x[c] = v;
        }
        Ok(x)
    }
}

/// A matrix together with one right-hand side.
#[derive(Clone, Debug)]
pub struct SparseSystem {
    matrix: SparseMatrix,
    rhs: Vec<ParamPolynomial>,
}

impl SparseSystem {
    pub fn new(ncols: usize) -> Self {
        SparseSystem {
            matrix: SparseMatrix::new(ncols),
            rhs: Vec::new(),
        }
    }

    pub fn add_row(&mut self, coeffs: BTreeMap<usize, Rational>, rhs: ParamPolynomial) {
        self.matrix.push_row(coeffs);
        self.rhs.push(rhs);
    }

    pub fn solve(self, order: &[usize]) -> Result<Vec<ParamPolynomial>, Inconsistent> {
        self.matrix.factor(order).solve(&self.rhs)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeffring::rational::{int, rat};

    fn row(entries: &[(usize, i64)]) -> BTreeMap<usize, Rational> {
        entries.iter().map(|&(c, v)| (c, int(v))).collect()
    }

    #[test]
    fn square_system() {
        let a = ParamPolynomial::var(0);
        let mut s = SparseSystem::new(2);
        s.add_row(row(&[(0, 1), (1, 1)]), a.clone());
        s.add_row(row(&[(0, 1), (1, -1)]), ParamPolynomial::one());
        let x = s.solve(&[0, 1]).unwrap();
        let half = rat(1, 2);
        assert_eq!(x[0], (&a + &ParamPolynomial::one()).scale(&half));
        assert_eq!(x[1], (&a - &ParamPolynomial::one()).scale(&half));
    }

    #[test]
    fn free_columns_are_zero() {
        let mut s = SparseSystem::new(3);
        s.add_row(row(&[(0, 1), (2, 1)]), ParamPolynomial::constant(int(4)));
        let x = s.solve(&[2, 0, 1]).unwrap();
        assert_eq!(x[2], ParamPolynomial::constant(int(4)));
        assert!(x[0].is_zero() && x[1].is_zero());
    }

    #[test]
    fn inconsistency_is_reported() {
        let mut s = SparseSystem::new(1);
        s.add_row(row(&[(0, 2)]), ParamPolynomial::one());
        s.add_row(row(&[(0, 4)]), ParamPolynomial::one());
        let e = s.solve(&[0]).unwrap_err();
        assert_eq!(e.remainder, ParamPolynomial::constant(int(-1)));
    }

    #[test]
    fn factorization_is_reusable() {
        let mut m = SparseMatrix::new(3);
        m.push_row(row(&[(0, 2), (1, 1)]));
        m.push_row(row(&[(1, 3), (2, -1)]));
        m.push_row(row(&[(0, 1), (2, 5)]));
        let f = m.clone().factor(&[0, 1, 2]);
        assert_eq!(f.rank(), 3);
        for seed in 0..4i64 {
            let x: Vec<Rational> = (0..3).map(|i| rat(seed * 7 - i, i + 2)).collect();
            let b: Vec<ParamPolynomial> = m
                .rows
                .iter()
                .map(|r| {
                    let mut acc = Rational::zero();
                    for (&c, v) in r {
                        acc += v * &x[c];
                    }
                    ParamPolynomial::constant(acc)
                })
                .collect();
            let got = f.solve(&b).unwrap();
            let want: Vec<ParamPolynomial> =
                x.into_iter().map(ParamPolynomial::constant).collect();
            assert_eq!(got, want);
        }
    }
}
