//! Dense row-reduction helpers over a [`Field`].

use crate::gf::{Elem, Field};

pub type Matrix = Vec<Vec<Elem>>;

/// Reduces `m` in place to reduced row-echelon form, scanning columns in the
/// given order. Zero rows are removed. Returns the pivot column of each
/// remaining row.
pub fn rref_with_order(f: &Field, m: &mut Matrix, columns: &[usize]) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut row = 0;
    for &col in columns {
        if row == m.len() {
            break;
        }
        let Some(r) = (row..m.len()).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(row, r);
        let inv = f.inv(m[row][col]).expect("pivot is nonzero");
        for x in m[row].iter_mut() {
            *x = f.mul(*x, inv);
        }
        let pivot_row = m[row].clone();
        for (i, other) in m.iter_mut().enumerate() {
            if i == row || other[col].is_zero() {
                continue;
            }
            let c = f.neg(other[col]);
            for (x, &p) in other.iter_mut().zip(&pivot_row) {
                if !p.is_zero() {
                    *x = f.add(*x, f.mul(c, p));
                }
            }
        }
        pivots.push(col);
        row += 1;
    }
    m.truncate(row);
    pivots
}

/// Reduced row-echelon form with the natural column order.
pub fn rref(f: &Field, m: &mut Matrix) -> Vec<usize> {
    let ncols = m.first().map_or(0, |r| r.len());
    let order: Vec<usize> = (0..ncols).collect();
    rref_with_order(f, m, &order)
}

pub fn rank(f: &Field, m: &Matrix) -> usize {
    let mut c = m.clone();
    rref(f, &mut c).len()
}

/// A basis of `{ x : m x^T = 0 }` for vectors of length `ncols`.
pub fn nullspace(f: &Field, m: &Matrix, ncols: usize) -> Matrix {
    let mut r = m.clone();
    let pivots = rref(f, &mut r);
    let free: Vec<usize> = (0..ncols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&fc| {
            let mut v = vec![Elem::ZERO; ncols];
            v[fc] = Elem::ONE;
            for (row, &pc) in r.iter().zip(&pivots) {
                v[pc] = f.neg(row[fc]);
            }
            v
        })
        .collect()
}

/// `a * b^T` for row-major `a` (r x n) and `b` (s x n).
pub fn mul_transpose(f: &Field, a: &Matrix, b: &Matrix) -> Matrix {
    a.iter().map(|ra| b.iter().map(|rb| f.dot(ra, rb)).collect()).collect()
}

/// `v * m` for a row vector `v` of length `m.len()`.
pub fn vec_mul(f: &Field, v: &[Elem], m: &Matrix) -> Vec<Elem> {
    let ncols = m.first().map_or(0, |r| r.len());
    let mut out = vec![Elem::ZERO; ncols];
    for (&c, row) in v.iter().zip(m) {
        if c.is_zero() {
            continue;
        }
        for (o, &x) in out.iter_mut().zip(row) {
            *o = f.add(*o, f.mul(c, x));
        }
    }
    out
}

/// Solves `x * m = target` for `x`, where the rows of `m` are independent.
pub fn solve_left(f: &Field, m: &Matrix, target: &[Elem]) -> Option<Vec<Elem>> {
    let k = m.len();
    let n = target.len();
    // Augment rows of m^T | target^T and row reduce.
    let mut aug: Matrix = (0..n)
        .map(|c| {
            let mut row: Vec<Elem> = m.iter().map(|r| r[c]).collect();
            row.push(target[c]);
            row
        })
        .collect();
    let order: Vec<usize> = (0..=k).collect();
    let pivots = rref_with_order(f, &mut aug, &order);
    if pivots.contains(&k) {
        return None;
    }
    let mut x = vec![Elem::ZERO; k];
    for (row, &pc) in aug.iter().zip(&pivots) {
        x[pc] = row[k];
    }
    Some(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nullspace_is_orthogonal() {
        let f = Field::new(3, 2).unwrap();
        let m: Matrix = vec![
            vec![Elem(1), Elem(2), Elem(3), Elem(4)],
            vec![Elem(5), Elem(6), Elem(7), Elem(8)],
        ];
        let ns = nullspace(&f, &m, 4);
        assert_eq!(ns.len() + rank(&f, &m), 4);
        for row in mul_transpose(&f, &m, &ns) {
            assert!(row.iter().all(|x| x.is_zero()));
        }
    }

    #[test]
    fn solve_left_round_trip() {
        let f = Field::prime(7).unwrap();
        let m: Matrix = vec![vec![Elem(1), Elem(2), Elem(3)], vec![Elem(0), Elem(1), Elem(4)]];
        let target = vec_mul(&f, &[Elem(3), Elem(5)], &m);
        assert_eq!(solve_left(&f, &m, &target), Some(vec![Elem(3), Elem(5)]));
        assert_eq!(solve_left(&f, &m, &[Elem(0), Elem(0), Elem(1)]), None);
    }
}
