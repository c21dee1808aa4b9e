//! Dense exact linear algebra: row reduction, consistent-system solving, rank.

use num_traits::Zero;

use crate::rational::Rational;

/// Reduced row echelon form of `matrix` (rows of equal length), in place.
/// Returns the pivot column of each nonzero row, in order.
pub fn row_reduce(matrix: &mut [Vec<Rational>]) -> Vec<usize> {
    let rows = matrix.len();
    let cols = matrix.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !matrix[i][c].is_zero()) else {
            continue;
        };
        matrix.swap(r, p);
        let inv = matrix[r][c].recip();
        for v in matrix[r].iter_mut() {
            *v *= &inv;
        }
        for i in 0..rows {
            if i != r && !matrix[i][c].is_zero() {
                let factor = matrix[i][c].clone();
                let (pivot_row, row) = if i < r {
                    let (lo, hi) = matrix.split_at_mut(r);
                    (&hi[0], &mut lo[i])
                } else {
                    let (lo, hi) = matrix.split_at_mut(i);
                    (&lo[r], &mut hi[0])
                };
                for (x, y) in row.iter_mut().zip(pivot_row) {
                    if !y.is_zero() {
                        *x -= &factor * y;
                    }
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank(rows: &[Vec<Rational>]) -> usize {
    let mut m = rows.to_vec();
    row_reduce(&mut m).len()
}

/// Solves `a x = b`. Free variables are set to zero, so the answer is a
/// deterministic basic solution. Returns `None` when the system is inconsistent.
pub fn solve(a: &[Vec<Rational>], b: &[Rational], unknowns: usize) -> Option<Vec<Rational>> {
    debug_assert_eq!(a.len(), b.len());
    let mut aug: Vec<Vec<Rational>> = a
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            debug_assert_eq!(row.len(), unknowns);
            let mut r = row.clone();
            r.push(rhs.clone());
            r
        })
        .collect();
    let pivots = row_reduce(&mut aug);
    if pivots.last() == Some(&unknowns) {
        return None;
    }
    let mut x = vec![Rational::zero(); unknowns];
    for (row, &c) in pivots.iter().enumerate() {
        x[c] = aug[row][unknowns].clone();
    }
    Some(x)
}

/// Solves a square system, returning `None` unless the matrix is nonsingular.
pub fn solve_unique(a: &[Vec<Rational>], b: &[Rational]) -> Option<Vec<Rational>> {
    let n = b.len();
    let mut aug: Vec<Vec<Rational>> = a
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            let mut r = row.clone();
            r.push(rhs.clone());
            r
        })
        .collect();
    let pivots = row_reduce(&mut aug);
    if pivots.len() != n || pivots.iter().enumerate().any(|(i, &c)| c != i) {
        return None;
    }
    Some(aug.into_iter().map(|mut row| row.pop().unwrap()).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};

    fn m(rows: &[&[i64]]) -> Vec<Vec<Rational>> {
        rows.iter()
            .map(|r| r.iter().map(|&v| int(v)).collect())
            .collect()
    }

    #[test]
    fn solves_consistent_underdetermined_system() {
        let a = m(&[&[1, 1, 0], &[0, 1, 1]]);
        let b = vec![int(2), int(3)];
        let x = solve(&a, &b, 3).unwrap();
        assert_eq!(x, vec![int(-1), int(3), int(0)]);
    }

    #[test]
    fn detects_inconsistency() {
        let a = m(&[&[1, 1], &[2, 2]]);
        assert!(solve(&a, &[int(1), int(3)], 2).is_none());
    }

    #[test]
    fn unique_solution_requires_full_rank() {
        let a = m(&[&[1, 1], &[1, -1]]);
        assert_eq!(
            solve_unique(&a, &[int(1), int(0)]).unwrap(),
            vec![ratio(1, 2), ratio(1, 2)]
        );
        assert!(solve_unique(&m(&[&[1, 1], &[2, 2]]), &[int(1), int(2)]).is_none());
        assert_eq!(rank(&m(&[&[1, 2], &[2, 4], &[0, 1]])), 2);
    }
}
