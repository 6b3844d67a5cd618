//! Exact rational linear programming via two-phase primal simplex.
//!
//! Small dense problems only: the properness tests solve systems with a
//! dozen variables, so simplicity and exactness beat sparsity here. Bland's
//! rule prevents cycling, making termination unconditional.

use num::{Signed, Zero};

use crate::exactgeom::Rational;

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) enum LpOutcome {
    Infeasible,
    Optimal(Rational),
    Unbounded,
}

/// Maximize `c . x` subject to `a x = b`, `x >= 0`.
///
/// `a` is row-major with `a.len()` constraints over `c.len()` variables.
pub(crate) fn maximize(a: &[Vec<Rational>], b: &[Rational], c: &[Rational]) -> LpOutcome {
    let m = a.len();
    let n = c.len();
    debug_assert!(a.iter().all(|row| row.len() == n));
    debug_assert_eq!(b.len(), m);

    // tableau columns: n original variables, m artificials, 1 rhs
    let cols = n + m + 1;
    let mut t: Vec<Vec<Rational>> = Vec::with_capacity(m);
    for i in 0..m {
        let mut row = vec![Rational::zero(); cols];
        let flip = b[i].is_negative();
        for j in 0..n {
            row[j] = if flip { -a[i][j].clone() } else { a[i][j].clone() };
        }
        row[n + i] = Rational::from_integer(1.into());
        row[cols - 1] = if flip { -b[i].clone() } else { b[i].clone() };
        t.push(row);
    }
    let mut basis: Vec<usize> = (n..n + m).collect();

    // phase 1: maximize -(sum of artificials); feasible iff optimum is zero
    let mut cost1 = vec![Rational::zero(); n + m];
    for cj in cost1.iter_mut().skip(n) {
        *cj = -Rational::from_integer(1.into());
    }
    match simplex(&mut t, &mut basis, &cost1, n + m) {
        SimplexEnd::Optimal => {}
        SimplexEnd::Unbounded => unreachable!("phase 1 objective is bounded above by zero"),
    }
    let phase1: Rational = basis
        .iter()
        .zip(&t)
        .map(|(&bi, row)| cost1[bi].clone() * &row[cols - 1])
        .sum();
    if !phase1.is_zero() {
        return LpOutcome::Infeasible;
    }

    // drive artificials out of the basis; rows that cannot pivot on an
    // original column are redundant constraints and are dropped
    let mut i = 0;
    while i < t.len() {
        if basis[i] >= n {
            match (0..n).find(|&j| !t[i][j].is_zero()) {
                Some(j) => pivot(&mut t, &mut basis, i, j),
                None => {
                    t.remove(i);
                    basis.remove(i);
                    continue;
                }
            }
        }
        i += 1;
    }

    // phase 2 over the original variables only
    let mut cost2 = vec![Rational::zero(); n + m];
    cost2[..n].clone_from_slice(c);
    match simplex(&mut t, &mut basis, &cost2, n) {
        SimplexEnd::Optimal => {}
        SimplexEnd::Unbounded => return LpOutcome::Unbounded,
    }
    let last = t.first().map_or(0, |r| r.len() - 1);
    let obj: Rational = basis
        .iter()
        .zip(&t)
        .map(|(&bi, row)| cost2[bi].clone() * &row[last])
        .sum();
    LpOutcome::Optimal(obj)
}

enum SimplexEnd {
    Optimal,
    Unbounded,
}

/// Primal simplex with Bland's anti-cycling rule. Only columns `< enterable`
/// may enter the basis.
fn simplex(
    t: &mut Vec<Vec<Rational>>,
    basis: &mut [usize],
    cost: &[Rational],
    enterable: usize,
) -> SimplexEnd {
    let m = t.len();
    if m == 0 {
        return SimplexEnd::Optimal;
    }
    let last = t[0].len() - 1;
    loop {
        // reduced cost r_j = c_j - c_B . column_j; recomputed per iteration,
        // which is fine at these sizes and removes update bookkeeping
        let mut entering = None;
        for j in 0..enterable {
            if basis.contains(&j) {
                continue;
            }
            let mut r = cost[j].clone();
            for i in 0..m {
                if !t[i][j].is_zero() {
                    r -= cost[basis[i]].clone() * &t[i][j];
                }
            }
            if r > Rational::zero() {
                entering = Some(j);
                break;
            }
        }
        let Some(je) = entering else {
            return SimplexEnd::Optimal;
        };
        // Bland's leaving rule: minimum ratio, ties by smallest basis index
        let mut leave: Option<(usize, Rational)> = None;
        for i in 0..m {
            if t[i][je] > Rational::zero() {
                let ratio = t[i][last].clone() / &t[i][je];
                let better = match &leave {
                    None => true,
                    Some((li, lr)) => ratio < *lr || (ratio == *lr && basis[i] < basis[*li]),
                };
                if better {
                    leave = Some((i, ratio));
                }
            }
        }
        let Some((li, _)) = leave else {
            return SimplexEnd::Unbounded;
        };
        pivot(t, basis, li, je);
    }
}

fn pivot(t: &mut [Vec<Rational>], basis: &mut [usize], row: usize, col: usize) {
    let p = t[row][col].clone();
    debug_assert!(!p.is_zero());
    for x in t[row].iter_mut() {
        *x /= &p;
    }
    for i in 0..t.len() {
        if i == row || t[i][col].is_zero() {
            continue;
        }
        let f = t[i][col].clone();
        for j in 0..t[i].len() {
            let sub = f.clone() * &t[row][j];
            t[i][j] -= sub;
        }
    }
    basis[row] = col;
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactgeom::{rat, rat_frac};

    #[test]
    fn feasible_with_positive_optimum() {
        // max x + y subject to x + y + s = 1
        let a = vec![vec![rat(1), rat(1), rat(1)]];
        let b = vec![rat(1)];
        let c = vec![rat(1), rat(1), rat(0)];
        assert_eq!(maximize(&a, &b, &c), LpOutcome::Optimal(rat(1)));
    }

    #[test]
    fn infeasible_system() {
        // x = 1 and x = 2 cannot both hold
        let a = vec![vec![rat(1)], vec![rat(1)]];
        let b = vec![rat(1), rat(2)];
        let c = vec![rat(0)];
        assert_eq!(maximize(&a, &b, &c), LpOutcome::Infeasible);
    }

    #[test]
    fn unbounded_direction() {
        // max x - y subject to x - y = free via x - y + 0 s = 0 is bounded;
        // use x unconstrained upward: max x with y - x = 1
        let a = vec![vec![rat(-1), rat(1)]];
        let b = vec![rat(1)];
        let c = vec![rat(1), rat(0)];
        assert_eq!(maximize(&a, &b, &c), LpOutcome::Unbounded);
    }

    #[test]
    fn negative_rhs_is_normalized() {
        // -x = -3 has solution x = 3
        let a = vec![vec![rat(-1)]];
        let b = vec![rat(-3)];
        let c = vec![rat(1)];
        assert_eq!(maximize(&a, &b, &c), LpOutcome::Optimal(rat(3)));
    }

    #[test]
    fn redundant_rows_are_dropped() {
        // duplicated constraint keeps the same optimum
        let a = vec![vec![rat(1), rat(1)], vec![rat(1), rat(1)]];
        let b = vec![rat(1), rat(1)];
        let c = vec![rat_frac(1, 2), rat(0)];
        assert_eq!(maximize(&a, &b, &c), LpOutcome::Optimal(rat_frac(1, 2)));
    }

    #[test]
    fn mixture_point_membership() {
        // is (1/2, 1/2) a convex combination of (0,0),(1,0),(0,1)?
        // lambda_1 (1,0) + lambda_2 (0,1) = (1/2,1/2), sum lambda = 1
        let a = vec![
            vec![rat(0), rat(1), rat(0)],
            vec![rat(0), rat(0), rat(1)],
            vec![rat(1), rat(1), rat(1)],
        ];
        let b = vec![rat_frac(1, 2), rat_frac(1, 2), rat(1)];
        let c = vec![rat(0), rat(0), rat(0)];
        assert_eq!(maximize(&a, &b, &c), LpOutcome::Optimal(rat(0)));
        // (2,0) is not
        let b2 = vec![rat(2), rat(0), rat(1)];
        assert_eq!(maximize(&a, &b2, &c), LpOutcome::Infeasible);
    }
}
