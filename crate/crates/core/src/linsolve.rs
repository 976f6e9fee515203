//! Exact dense Gauss–Jordan elimination over the rationals.

use num_traits::Zero;

use crate::Rat;

/// Solves `A x = b` exactly. Columns are scanned left to right, so the
/// leftmost independent columns become pivots; free variables are set to
/// zero. Returns `None` when the system is inconsistent.
pub(crate) fn solve_exact(mut a: Vec<Vec<Rat>>, mut b: Vec<Rat>) -> Option<Vec<Rat>> {
    let rows = a.len();
    debug_assert_eq!(rows, b.len());
    let cols = a.first().map_or(0, Vec::len);
    let mut pivots: Vec<usize> = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        b.swap(r, p);
        let inv = a[r][c].recip();
        for v in a[r][c..].iter_mut() {
            *v *= &inv;
        }
        b[r] *= &inv;
        let pivot_row = a[r].clone();
        for i in 0..rows {
            if i == r || a[i][c].is_zero() {
                continue;
            }
            let f = a[i][c].clone();
            for (dst, src) in a[i][c..].iter_mut().zip(&pivot_row[c..]) {
                if !src.is_zero() {
                    *dst -= &f * src;
                }
            }
            let delta = &f * &b[r];
            b[i] -= delta;
        }
        pivots.push(c);
        r += 1;
    }
    if b[r..].iter().any(|v| !v.is_zero()) {
        return None;
    }
    let mut x = vec![Rat::zero(); cols];
    for (i, &c) in pivots.iter().enumerate() {
        x[c] = b[i].clone();
    }
    Some(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::rat;

    #[test]
    fn free_variables_are_zero() {
        // x + y = 1 with x leftmost → x = 1, y = 0
        let x = solve_exact(vec![vec![rat(1), rat(-1)]], vec![rat(1)]).unwrap();
        assert_eq!(x, vec![rat(1), rat(0)]);
    }

    #[test]
    fn inconsistent_system() {
        let a = vec![vec![rat(1), rat(1)], vec![rat(2), rat(2)]];
        assert!(solve_exact(a, vec![rat(1), rat(3)]).is_none());
    }

    #[test]
    fn square_system() {
        let a = vec![vec![rat(2), rat(1)], vec![rat(1), rat(3)]];
        let x = solve_exact(a, vec![rat(3), rat(5)]).unwrap();
        assert_eq!(x, vec![Rat::new(4.into(), 5.into()), Rat::new(7.into(), 5.into())]);
    }
}
