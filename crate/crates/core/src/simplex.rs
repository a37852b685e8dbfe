//! Dense exact-rational primal simplex with Bland's anti-cycling rule.
//!
//! Problems arrive in the form max c'x subject to Ax <= b, x >= 0 with
//! b >= 0, so the slack basis is feasible and no phase-1 is needed. Intended
//! for small cutting-plane models (on the order of a hundred variables).

use num::{Signed, Zero};

use crate::instance::Rat;
use crate::{Error, Result};

pub struct SimplexResult {
    pub value: Rat,
    pub point: Vec<Rat>,
    pub pivots: u64,
}

/// Maximizes `objective . x` over `rows` (sparse `a . x <= rhs` constraints,
/// all rhs nonnegative) and `x >= 0`.
pub fn maximize(
    objective: &[Rat],
    rows: &[(Vec<(usize, Rat)>, Rat)],
) -> Result<SimplexResult> {
    let n = objective.len();
    let m = rows.len();
    let cols = n + m + 1; // structural + slack + rhs
    let mut tableau: Vec<Vec<Rat>> = Vec::with_capacity(m + 1);
    for (i, (coeffs, rhs)) in rows.iter().enumerate() {
        debug_assert!(!rhs.is_negative(), "rhs must be nonnegative");
        let mut row = vec![Rat::zero(); cols];
        for (var, a) in coeffs {
            row[*var] += a.clone();
        }
        row[n + i] = Rat::from_integer(1.into());
        row[cols - 1] = rhs.clone();
        tableau.push(row);
    }
    // Objective row holds reduced costs; entering while any is positive.
    let mut zrow = vec![Rat::zero(); cols];
    zrow[..n].clone_from_slice(objective);

    let mut basis: Vec<usize> = (n..n + m).collect();
    let mut pivots = 0u64;
    loop {
        // Bland: entering = smallest-index column with positive reduced cost.
        let entering = match (0..cols - 1).find(|&j| zrow[j].is_positive()) {
            Some(j) => j,
            None => break,
        };
        // Ratio test; ties by smallest basic variable index.
        let mut leaving: Option<(usize, Rat)> = None;
        for i in 0..m {
            if !tableau[i][entering].is_positive() {
                continue;
            }
            let ratio = &tableau[i][cols - 1] / &tableau[i][entering];
            let replace = match &leaving {
                None => true,
                Some((best_i, best_ratio)) => {
                    ratio < *best_ratio
                        || (ratio == *best_ratio && basis[i] < basis[*best_i])
                }
            };
            if replace {
                leaving = Some((i, ratio));
            }
        }
        let (pivot_row, _) = leaving.ok_or_else(|| {
            Error::Argument("linear program is unbounded".into())
        })?;
        pivot(&mut tableau, &mut zrow, pivot_row, entering, cols);
        basis[pivot_row] = entering;
        pivots += 1;
    }

    let mut point = vec![Rat::zero(); n];
    let mut value = Rat::zero();
    for i in 0..m {
        if basis[i] < n {
            point[basis[i]] = tableau[i][cols - 1].clone();
        }
    }
    for (j, c) in objective.iter().enumerate() {
        value += c * &point[j];
    }
    Ok(SimplexResult {
        value,
        point,
        pivots,
    })
}

fn pivot(
    tableau: &mut [Vec<Rat>],
    zrow: &mut [Rat],
    pivot_row: usize,
    entering: usize,
    cols: usize,
) {
    let inv = tableau[pivot_row][entering].recip();
    for j in 0..cols {
        if !tableau[pivot_row][j].is_zero() {
            tableau[pivot_row][j] = &tableau[pivot_row][j] * &inv;
        }
    }
    let m = tableau.len();
    for i in 0..m {
        if i == pivot_row || tableau[i][entering].is_zero() {
            continue;
        }
        let factor = std::mem::replace(&mut tableau[i][entering], Rat::zero());
        for j in 0..cols {
            if !tableau[pivot_row][j].is_zero() {
                let delta = &tableau[pivot_row][j] * &factor;
                tableau[i][j] = &tableau[i][j] - delta;
            }
        }
        tableau[i][entering] = Rat::zero();
    }
    if !zrow[entering].is_zero() {
        let factor = std::mem::replace(&mut zrow[entering], Rat::zero());
        for j in 0..cols {
            if !tableau[pivot_row][j].is_zero() {
                let delta = &tableau[pivot_row][j] * &factor;
                zrow[j] = &zrow[j] - delta;
            }
        }
        zrow[entering] = Rat::zero();
    }
}
