//! MDS certification without distance search.
//!
//! A code with systematic generator `[I | A]` is MDS exactly when every
//! square submatrix of `A` is nonsingular. Minors are visited depth first:
//! a node `(R, C)` keeps the Schur complement of `A[R, C]` on the rows after
//! `max R` and the columns after `max C`, and each entry of that complement is
//! the ratio `det A[R+i, C+j] / det A[R, C]`. Checking that the complement has
//! no zero entry therefore checks every child minor at once.

use std::sync::atomic::{AtomicBool, Ordering};

use rayon::prelude::*;

use crate::gf::{Elem, Field};

trait Ops: Sync {
    fn mul(&self, a: u16, b: u16) -> u16;
    fn sub(&self, a: u16, b: u16) -> u16;
    fn inv(&self, a: u16) -> u16;
}

struct Tables {
    q: usize,
    mul: Vec<u16>,
    sub: Vec<u16>,
    inv: Vec<u16>,
}

impl Tables {
    fn new(f: &Field) -> Tables {
        let q = f.order() as usize;
        let mut mul = vec![0u16; q * q];
        let mut sub = vec![0u16; q * q];
        for a in 0..q {
            for b in 0..q {
                let (ea, eb) = (Elem(a as u32), Elem(b as u32));
                mul[a * q + b] = f.mul(ea, eb).raw() as u16;
                sub[a * q + b] = f.sub(ea, eb).raw() as u16;
            }
        }
        let inv = (0..q)
            .map(|a| {
                if a == 0 {
                    0
                } else {
                    f.inv(Elem(a as u32)).unwrap().raw() as u16
                }
            })
            .collect();
        Tables { q, mul, sub, inv }
    }
}

impl Ops for Tables {
    #[inline(always)]
    fn mul(&self, a: u16, b: u16) -> u16 {
        self.mul[a as usize * self.q + b as usize]
    }
    #[inline(always)]
    fn sub(&self, a: u16, b: u16) -> u16 {
        self.sub[a as usize * self.q + b as usize]
    }
    #[inline(always)]
    fn inv(&self, a: u16) -> u16 {
        self.inv[a as usize]
    }
}

struct FieldOps<'a>(&'a Field);

impl Ops for FieldOps<'_> {
    fn mul(&self, a: u16, b: u16) -> u16 {
        self.0.mul(Elem(a as u32), Elem(b as u32)).raw() as u16
    }
    fn sub(&self, a: u16, b: u16) -> u16 {
        self.0.sub(Elem(a as u32), Elem(b as u32)).raw() as u16
    }
    fn inv(&self, a: u16) -> u16 {
        self.0.inv(Elem(a as u32)).unwrap().raw() as u16
    }
}

/// Number of square submatrices (of every size >= 1) of a `k x r` matrix.
pub fn minor_count(k: usize, r: usize) -> u128 {
    // sum_t C(k,t) C(r,t) = C(k+r, k) - 1
    let n = (k + r) as u128;
    let mut c: u128 = 1;
    for i in 0..k.min(r) as u128 {
        c = c * (n - i) / (i + 1);
    }
    c - 1
}

/// Whether every square submatrix of `a` is nonsingular.
pub fn all_minors_nonzero(f: &Field, a: &[Vec<Elem>]) -> bool {
    let k = a.len();
    if k == 0 {
        return true;
    }
    let r = a[0].len();
    if r == 0 {
        return true;
    }
    if f.order() > u16::MAX as u32 + 1 {
        panic!("field too large for the minor search");
    }
    let flat: Vec<u16> = a.iter().flat_map(|row| row.iter().map(|e| e.raw() as u16)).collect();
    if flat.contains(&0) {
        return false;
    }
    if f.order() <= 256 {
        Search::new(&Tables::new(f), k, r).run(&flat)
    } else {
        Search::new(&FieldOps(f), k, r).run(&flat)
    }
}

struct Search<'a, O: Ops> {
    ops: &'a O,
    k: usize,
    r: usize,
    failed: AtomicBool,
}

impl<'a, O: Ops> Search<'a, O> {
    fn new(ops: &'a O, k: usize, r: usize) -> Self {
        Search {
            ops,
            k,
            r,
            failed: AtomicBool::new(false),
        }
    }

    fn run(&self, a: &[u16]) -> bool {
        // Top-level children (i, j) are independent subtrees.
        let pairs: Vec<(usize, usize)> = (0..self.k).flat_map(|i| (0..self.r).map(move |j| (i, j))).collect();
        pairs.par_iter().for_each(|&(i, j)| {
            if self.failed.load(Ordering::Relaxed) {
                return;
            }
            let (rows, cols) = (self.k - 1 - i, self.r - 1 - j);
            if rows == 0 || cols == 0 {
                return;
            }
            let child = self.complement(a, self.r, i, j, i + 1, j + 1);
            if !self.descend(&child, rows, cols) {
                self.failed.store(true, Ordering::Relaxed);
            }
        });
        !self.failed.load(Ordering::Relaxed)
    }

    /// Schur complement of pivot `(pi, pj)` of matrix `s` (row stride
    /// `stride`), restricted to rows from `r0` and columns from `c0`.
    fn complement(&self, s: &[u16], stride: usize, pi: usize, pj: usize, r0: usize, c0: usize) -> Vec<u16> {
        let nrows = s.len() / stride;
        let o = self.ops;
        let pivot_row = &s[pi * stride..(pi + 1) * stride];
        let inv = o.inv(pivot_row[pj]);
        let mut out = Vec::with_capacity((nrows - r0) * (stride - c0));
        for ii in r0..nrows {
            let row = &s[ii * stride..(ii + 1) * stride];
            let factor = o.mul(row[pj], inv);
            for jj in c0..stride {
                out.push(o.sub(row[jj], o.mul(factor, pivot_row[jj])));
            }
        }
        out
    }

    /// `s` is a `rows x cols` complement; every entry is a child minor ratio.
    fn descend(&self, s: &[u16], rows: usize, cols: usize) -> bool {
        if s.contains(&0) {
            return false;
        }
        if self.failed.load(Ordering::Relaxed) {
            return true;
        }
        for i in 0..rows.saturating_sub(1) {
            for j in 0..cols.saturating_sub(1) {
                let child = self.complement(s, cols, i, j, i + 1, j + 1);
                if !self.descend(&child, rows - 1 - i, cols - 1 - j) {
                    return false;
                }
            }
        }
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute_det(f: &Field, m: &[Vec<Elem>]) -> Elem {
        let n = m.len();
        if n == 1 {
            return m[0][0];
        }
        let mut acc = Elem::ZERO;
        for j in 0..n {
            let minor: Vec<Vec<Elem>> = m[1..]
                .iter()
                .map(|row| {
                    row.iter()
                        .enumerate()
                        .filter(|&(c, _)| c != j)
                        .map(|(_, &x)| x)
                        .collect()
                })
                .collect();
            let term = f.mul(m[0][j], brute_det(f, &minor));
            acc = if j % 2 == 0 { f.add(acc, term) } else { f.sub(acc, term) };
        }
        acc
    }

    fn brute_all_minors(f: &Field, a: &[Vec<Elem>]) -> bool {
        let k = a.len();
        let r = a[0].len();
        for rmask in 1u32..(1 << k) {
            for cmask in 1u32..(1 << r) {
                if rmask.count_ones() != cmask.count_ones() {
                    continue;
                }
                let rows: Vec<usize> = (0..k).filter(|i| rmask >> i & 1 == 1).collect();
                let cols: Vec<usize> = (0..r).filter(|j| cmask >> j & 1 == 1).collect();
                let sub: Vec<Vec<Elem>> = rows.iter().map(|&i| cols.iter().map(|&j| a[i][j]).collect()).collect();
                if brute_det(f, &sub).is_zero() {
                    return false;
                }
            }
        }
        true
    }

    #[test]
    fn minor_count_formula() {
        assert_eq!(minor_count(13, 13), 10_400_599);
        assert_eq!(minor_count(1, 1), 1);
        assert_eq!(minor_count(2, 3), 9);
    }

    #[test]
    fn cauchy_matrix_is_superregular() {
        let f = Field::prime(13).unwrap();
        let xs: Vec<Elem> = (1..5).map(Elem).collect();
        let ys: Vec<Elem> = (5..10).map(Elem).collect();
        let a: Vec<Vec<Elem>> = xs
            .iter()
            .map(|&x| ys.iter().map(|&y| f.inv(f.sub(x, y)).unwrap()).collect())
            .collect();
        assert!(all_minors_nonzero(&f, &a));
        assert!(brute_all_minors(&f, &a));
    }

    #[test]
    fn agrees_with_brute_force_on_random_matrices() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for q in [7u64, 8, 9, 11] {
            let f = Field::of_order(q).unwrap();
            for _ in 0..200 {
                let k = rng.gen_range(1..=4);
                let r = rng.gen_range(1..=4);
                let a: Vec<Vec<Elem>> = (0..k)
                    .map(|_| (0..r).map(|_| Elem(rng.gen_range(1..q as u32))).collect())
                    .collect();
                assert_eq!(all_minors_nonzero(&f, &a), brute_all_minors(&f, &a));
            }
        }
    }
}
