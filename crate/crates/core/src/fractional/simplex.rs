//! A small dense simplex over exact rationals.
//!
//! Solves max c.x subject to A x <= b, x >= 0 with b >= 0, which is all
//! the tiling LP needs: the all-slack basis is feasible and Bland's rule
//! guarantees termination. Desk-scale tableaus only.

use num_rational::BigRational;
use num_traits::Zero;

use crate::search::Budget;
use crate::{Error, Result};

pub struct LpSolution {
    pub objective: BigRational,
    pub values: Vec<BigRational>,
}

pub fn maximize(
    a: &[Vec<BigRational>],
    b: &[BigRational],
    c: &[BigRational],
    budget: &mut Budget,
) -> Result<LpSolution> {
    let m = a.len();
    let n = c.len();
    if b.len() != m || a.iter().any(|row| row.len() != n) {
        return Err(Error::invalid("simplex: dimension mismatch"));
    }
    if b.iter().any(|bi| bi < &BigRational::zero()) {
        return Err(Error::invalid("simplex: needs b >= 0"));
    }
    let width = n + m + 1;
    // rows 0..m constraints, basis starts as the slacks
    let mut tab: Vec<Vec<BigRational>> = Vec::with_capacity(m);
    for i in 0..m {
        let mut row = Vec::with_capacity(width);
        row.extend(a[i].iter().cloned());
        for j in 0..m {
            row.push(if i == j { BigRational::from_integer(1.into()) } else { BigRational::zero() });
        }
        row.push(b[i].clone());
        tab.push(row);
    }
    let mut cost: Vec<BigRational> = Vec::with_capacity(width);
    cost.extend(c.iter().cloned());
    cost.resize(width, BigRational::zero());
    let mut basis: Vec<usize> = (n..n + m).collect();

    loop {
        budget.spend("simplex", 1)?;
        // Bland: entering = smallest index with positive reduced cost
        let Some(enter) = (0..n + m).find(|&j| cost[j] > BigRational::zero()) else {
            break;
        };
        // ratio test; ties to the smallest basis variable (Bland)
        let mut pivot_row: Option<usize> = None;
        let mut best_ratio: Option<BigRational> = None;
        for i in 0..m {
            if tab[i][enter] > BigRational::zero() {
                let ratio = &tab[i][width - 1] / &tab[i][enter];
                let better = match &best_ratio {
                    None => true,
                    Some(r) => {
                        ratio < *r || (ratio == *r && basis[i] < basis[pivot_row.unwrap()])
                    }
                };
                if better {
                    best_ratio = Some(ratio);
                    pivot_row = Some(i);
                }
            }
        }
        let Some(r) = pivot_row else {
            return Err(Error::invalid("simplex: unbounded objective"));
        };
        // pivot on (r, enter)
        let pivot = tab[r][enter].clone();
        for x in tab[r].iter_mut() {
            *x /= &pivot;
        }
        for i in 0..m {
            if i != r && !tab[i][enter].is_zero() {
                let factor = tab[i][enter].clone();
                for j in 0..width {
                    let delta = &factor * &tab[r][j];
                    tab[i][j] -= delta;
                }
            }
        }
        if !cost[enter].is_zero() {
            let factor = cost[enter].clone();
            for j in 0..width {
                let delta = &factor * &tab[r][j];
                cost[j] -= delta;
            }
        }
        basis[r] = enter;
    }

    let mut values = vec![BigRational::zero(); n];
    for (i, &bv) in basis.iter().enumerate() {
        if bv < n {
            values[bv] = tab[i][width - 1].clone();
        }
    }
    // cost[width-1] accumulated -objective during eliminations
    Ok(LpSolution { objective: -cost[width - 1].clone(), values })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(p: i64, q: i64) -> BigRational {
        BigRational::new(p.into(), q.into())
    }

    #[test]
    fn tiny_lp() {
        // max x + y st x <= 1, y <= 2, x + y <= 2
        let a = vec![
            vec![r(1, 1), r(0, 1)],
            vec![r(0, 1), r(1, 1)],
            vec![r(1, 1), r(1, 1)],
        ];
        let b = vec![r(1, 1), r(2, 1), r(2, 1)];
        let c = vec![r(1, 1), r(1, 1)];
        let sol = maximize(&a, &b, &c, &mut Budget::default()).unwrap();
        assert_eq!(sol.objective, r(2, 1));
    }

    #[test]
    fn fractional_optimum() {
        // max 3x + 2y st x + y <= 4, x + 3y <= 6 -> x = 4, y = 0, obj 12?
        // check: x=4,y=0 satisfies both (4 <= 4, 4 <= 6), obj = 12
        let a = vec![vec![r(1, 1), r(1, 1)], vec![r(1, 1), r(3, 1)]];
        let b = vec![r(4, 1), r(6, 1)];
        let c = vec![r(3, 1), r(2, 1)];
        let sol = maximize(&a, &b, &c, &mut Budget::default()).unwrap();
        assert_eq!(sol.objective, r(12, 1));
    }

    #[test]
    fn degenerate_ties_terminate() {
        // degenerate vertices exercise Bland's rule
        let a = vec![
            vec![r(1, 1), r(1, 1), r(1, 1)],
            vec![r(1, 1), r(0, 1), r(0, 1)],
            vec![r(0, 1), r(1, 1), r(0, 1)],
        ];
        let b = vec![r(1, 1), r(1, 1), r(1, 1)];
        let c = vec![r(1, 1), r(1, 1), r(0, 1)];
        let sol = maximize(&a, &b, &c, &mut Budget::default()).unwrap();
        assert_eq!(sol.objective, r(1, 1));
    }
}
