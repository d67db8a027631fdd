//! Smith normal form over Z_(2).
//!
//! Z_(2) is a discrete valuation ring, so an entry of minimal 2-adic valuation
//! divides every other entry and each pivot step eliminates its row and column
//! in one pass. Odd factors are scaled into the transforms, leaving a diagonal
//! of powers of two.

use crate::matrix::IntMatrix;
use crate::scalar::TwoLocalScalar;

/// `d = u · m · v`, with `u`, `v` invertible over Z_(2).
#[derive(Debug, Clone)]
pub struct SmithForm {
    pub u: IntMatrix,
    pub d: IntMatrix,
    pub v: IntMatrix,
    pub u_inv: IntMatrix,
    pub v_inv: IntMatrix,
    /// Exponents of the nonzero diagonal entries `2^e`, nondecreasing.
    pub exponents: Vec<u32>,
}

impl SmithForm {
    pub fn rank(&self) -> usize {
        self.exponents.len()
    }
}

pub fn smith_normal_form(m: &IntMatrix) -> SmithForm {
    let (rows, cols) = (m.rows(), m.cols());
    let mut d = m.clone();
    let mut u = IntMatrix::identity(rows);
    let mut u_inv = IntMatrix::identity(rows);
    let mut v = IntMatrix::identity(cols);
    let mut v_inv = IntMatrix::identity(cols);
    let mut exponents = Vec::new();

    for k in 0..rows.min(cols) {
        let mut best: Option<(u32, usize, usize)> = None;
        'search: for i in k..rows {
            for j in k..cols {
                if let Some(val) = d.get(i, j).valuation() {
                    if best.is_none_or(|(b, _, _)| val < b) {
                        best = Some((val, i, j));
                        if val == 0 {
                            break 'search;
                        }
                    }
                }
            }
        }
        let Some((val, pi, pj)) = best else { break };

        d.swap_rows(k, pi);
        u.swap_rows(k, pi);
        u_inv.swap_cols(k, pi);
        d.swap_cols(k, pj);
        v.swap_cols(k, pj);
        v_inv.swap_rows(k, pj);

        let (_, unit) = d.get(k, k).split().expect("pivot is nonzero");
        let unit_inv = unit.inverse().expect("unit part is invertible");
        d.scale_row(k, &unit_inv);
        u.scale_row(k, &unit_inv);
        u_inv.scale_col(k, &unit);

        let pivot = d.get(k, k).clone();
        for i in k + 1..rows {
            if d.get(i, k).is_zero() {
                continue;
            }
            let f = d.get(i, k).checked_div(&pivot).expect("pivot has minimal valuation");
            let neg = -&f;
            d.add_row_multiple(i, k, &neg);
            u.add_row_multiple(i, k, &neg);
            u_inv.add_col_multiple(k, i, &f);
        }
        for j in k + 1..cols {
            if d.get(k, j).is_zero() {
                continue;
            }
            let g = d.get(k, j).checked_div(&pivot).expect("pivot has minimal valuation");
            let neg = -&g;
            d.add_col_multiple(j, k, &neg);
            v.add_col_multiple(j, k, &neg);
            v_inv.add_row_multiple(k, j, &g);
        }
        exponents.push(val);
    }

    SmithForm { u, d, v, u_inv, v_inv, exponents }
}

/// Solves `m · x = b` over Z_(2), returning one solution if any exists.
pub fn solve(m: &IntMatrix, b: &[TwoLocalScalar]) -> Option<Vec<TwoLocalScalar>> {
    let snf = smith_normal_form(m);
    solve_with(&snf, m.cols(), b)
}

/// As [`solve`], reusing a precomputed form of the coefficient matrix.
pub fn solve_with(snf: &SmithForm, cols: usize, b: &[TwoLocalScalar]) -> Option<Vec<TwoLocalScalar>> {
    // d · (v⁻¹x) = u · b
    let ub = snf.u.apply(b);
    let mut y = vec![TwoLocalScalar::zero(); cols];
    for (i, c) in ub.iter().enumerate() {
        match snf.exponents.get(i) {
            Some(&e) => y[i] = c.checked_div(&TwoLocalScalar::pow2(e))?,
            None if c.is_zero() => {}
            None => return None,
        }
    }
    Some(snf.v.apply(&y))
}
