//! Exact dense linear algebra over the rationals: reduced row echelon form,
//! nullspaces, and linear solves. Sizes here are desk scale (tens of rows),
//! so plain Gaussian elimination with exact pivoting is the right tool.

use num_traits::{One, Zero};

use crate::series::Rational;

/// Reduced row echelon form together with the pivot columns.
pub struct Rref {
    pub rows: Vec<Vec<Rational>>,
    pub pivots: Vec<usize>,
}

/// Compute the reduced row echelon form. Zero rows are dropped.
pub fn rref(mut rows: Vec<Vec<Rational>>) -> Rref {
    let ncols = rows.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = rows[r][c].clone().recip();
        for x in rows[r].iter_mut() {
            *x *= &inv;
        }
        for i in 0..rows.len() {
            if i != r && !rows[i][c].is_zero() {
                let f = rows[i][c].clone();
                for j in 0..ncols {
                    let t = &rows[r][j] * &f;
                    rows[i][j] -= t;
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    rows.truncate(r);
    Rref { rows, pivots }
}

/// Basis of the nullspace { x : rows * x = 0 }.
pub fn nullspace(rows: &[Vec<Rational>], ncols: usize) -> Vec<Vec<Rational>> {
    let e = rref(rows.to_vec());
    let mut basis = Vec::new();
    let mut piv_iter = e.pivots.iter().peekable();
    let free: Vec<usize> = (0..ncols)
        .filter(|c| {
            if piv_iter.peek() == Some(&c) {
                piv_iter.next();
                false
            } else {
                true
            }
        })
        .collect();
    for &f in &free {
        let mut v = vec![Rational::zero(); ncols];
        v[f] = Rational::one();
        for (i, &p) in e.pivots.iter().enumerate() {
            v[p] = -e.rows[i][f].clone();
        }
        basis.push(v);
    }
    basis
}

pub enum SolveOutcome {
    Inconsistent,
    Unique(Vec<Rational>),
    /// A particular solution of an underdetermined but consistent system
    /// (free variables set to zero).
    Underdetermined(Vec<Rational>),
}

/// Solve `a * x = b` exactly.
pub fn solve(a: &[Vec<Rational>], b: &[Rational]) -> SolveOutcome {
    let ncols = a.first().map_or(0, Vec::len);
    let aug: Vec<Vec<Rational>> = a
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            let mut r = row.clone();
            r.push(rhs.clone());
            r
        })
        .collect();
    let e = rref(aug);
    if e.pivots.contains(&ncols) {
        return SolveOutcome::Inconsistent;
    }
    let mut x = vec![Rational::zero(); ncols];
    for (i, &p) in e.pivots.iter().enumerate() {
        x[p] = e.rows[i][ncols].clone();
    }
    if e.pivots.len() == ncols {
        SolveOutcome::Unique(x)
    } else {
        SolveOutcome::Underdetermined(x)
    }
}

/// Reduce `v` against an echelonized spanning set (rows of an rref); the
/// remainder is the canonical representative of `v` modulo the row span.
pub fn reduce_mod_rowspan(e: &Rref, v: &mut [Rational]) {
    for (i, &p) in e.pivots.iter().enumerate() {
        if !v[p].is_zero() {
            let f = v[p].clone();
            for j in 0..v.len() {
                let t = &e.rows[i][j] * &f;
                v[j] -= t;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::rat;

    #[test]
    fn nullspace_of_simple_system() {
        // x + y + z = 0, y - z = 0 -> span{(-2, 1, 1)}
        let rows = vec![
            vec![rat(1), rat(1), rat(1)],
            vec![rat(0), rat(1), rat(-1)],
        ];
        let ns = nullspace(&rows, 3);
        assert_eq!(ns.len(), 1);
        let v = &ns[0];
        assert_eq!(&v[0] + &v[1] + &v[2], rat(0));
        assert_eq!(&v[1] - &v[2], rat(0));
    }

    #[test]
    fn solve_unique() {
        let a = vec![vec![rat(2), rat(1)], vec![rat(1), rat(-1)]];
        let b = vec![rat(5), rat(1)];
        match solve(&a, &b) {
            SolveOutcome::Unique(x) => {
                assert_eq!(x, vec![rat(2), rat(1)]);
            }
            _ => panic!("expected unique solution"),
        }
    }

    #[test]
    fn solve_inconsistent() {
        let a = vec![vec![rat(1), rat(1)], vec![rat(2), rat(2)]];
        let b = vec![rat(1), rat(3)];
        assert!(matches!(solve(&a, &b), SolveOutcome::Inconsistent));
    }
}
