//! Dense Gaussian elimination over the rationals.

use num_traits::Zero;

use crate::scalars::Scalar;

/// Solves `A X = B` for square `A` with several right-hand sides.
/// Returns `None` when `A` is singular.
pub fn solve(mut a: Vec<Vec<Scalar>>, mut b: Vec<Vec<Scalar>>) -> Option<Vec<Vec<Scalar>>> {
    let n = a.len();
    assert!(a.iter().all(|row| row.len() == n), "matrix must be square");
    assert_eq!(b.len(), n);
    for col in 0..n {
        let piv = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, piv);
        b.swap(col, piv);
        let inv = a[col][col].recip();
        for v in a[col].iter_mut() {
            *v *= &inv;
        }
        for v in b[col].iter_mut() {
            *v *= &inv;
        }
        for r in 0..n {
            if r == col || a[r][col].is_zero() {
                continue;
            }
            let f = a[r][col].clone();
            for c in col..n {
                let d = &f * &a[col][c];
                a[r][c] -= d;
            }
            for c in 0..b[r].len() {
                let d = &f * &b[col][c];
                b[r][c] -= d;
            }
        }
    }
    Some(b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::int;

    #[test]
    fn solves_small_system() {
        let a = vec![vec![int(2), int(1)], vec![int(1), int(3)]];
        let b = vec![vec![int(3)], vec![int(5)]];
        let x = solve(a, b).unwrap();
        assert_eq!(x, vec![vec![Scalar::new(4.into(), 5.into())], vec![Scalar::new(7.into(), 5.into())]]);
    }

    #[test]
    fn detects_singular() {
        let a = vec![vec![int(1), int(2)], vec![int(2), int(4)]];
        assert!(solve(a, vec![vec![int(1)], vec![int(1)]]).is_none());
    }
}
