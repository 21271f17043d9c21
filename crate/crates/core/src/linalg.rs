//! Exact Gaussian elimination.

use crate::scalar::Scalar;

/// Solves `A x = b` exactly. Free variables are set to zero; returns `None`
/// if the system is inconsistent.
pub fn solve<T: Scalar>(mut a: Vec<Vec<T>>, mut b: Vec<T>) -> Option<Vec<T>> {
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..cols {
        let Some(p) = (row..rows).find(|&i| !a[i][col].is_zero()) else { continue };
        a.swap(row, p);
        b.swap(row, p);
        for i in 0..rows {
            if i != row && !a[i][col].is_zero() {
                let factor = a[i][col].clone() / a[row][col].clone();
                let pivot = a[row].clone();
                for (cell, p) in a[i][col..].iter_mut().zip(&pivot[col..]) {
                    *cell = cell.clone() - factor.clone() * p.clone();
                }
                b[i] = b[i].clone() - factor * b[row].clone();
            }
        }
        pivots.push((row, col));
        row += 1;
        if row == rows {
            break;
        }
    }
    if b[row..].iter().any(|x| !x.is_zero()) {
        return None;
    }
    let mut x = vec![T::zero(); cols];
    for (r, c) in pivots {
        x[c] = b[r].clone() / a[r][c].clone();
    }
    Some(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Rational;

    fn q(n: i64) -> Rational {
        Rational::from_int(n)
    }

    #[test]
    fn solves_a_small_system() {
        let a = vec![vec![q(2), q(1)], vec![q(1), q(3)]];
        let x = solve(a, vec![q(3), q(5)]).unwrap();
        assert_eq!(x, vec![Rational::new(4.into(), 5.into()), Rational::new(7.into(), 5.into())]);
    }

    #[test]
    fn inconsistent_and_underdetermined() {
        let a = vec![vec![q(1), q(1)], vec![q(2), q(2)]];
        assert!(solve(a.clone(), vec![q(1), q(3)]).is_none());
        assert_eq!(solve(a, vec![q(1), q(2)]).unwrap(), vec![q(1), q(0)]);
    }

    #[test]
    fn works_over_floats_too() {
        let x = solve(vec![vec![4.0, 0.0], vec![0.0, 2.0]], vec![2.0, 1.0]).unwrap();
        assert_eq!(x, vec![0.5, 0.5]);
    }
}
