//! Linear codes given by generator matrices.

pub mod distance;
pub mod io;
pub mod matrix;
pub mod mds;

use thiserror::Error;

use crate::gf::{Elem, Field, GfError};
pub use distance::{DistanceCertificate, DistanceMethod, DistanceOptions};
pub use matrix::Matrix;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CodeError {
    #[error("generator row {row} has length {len}, expected {n}")]
    RowLength { row: usize, len: usize, n: usize },
    #[error("generator matrix has rank {rank} < {rows} rows")]
    RankDeficient { rank: usize, rows: usize },
    #[error("entry outside the field")]
    ForeignEntry,
    #[error("twist vector has length {len}, expected {n}")]
    TwistLength { len: usize, n: usize },
    #[error("twist vector has a zero entry at position {0}")]
    ZeroTwist(usize),
    #[error("self-dual codes need even length, got {0}")]
    OddLength(usize),
    #[error("code is not self-dual")]
    NotSelfDual,
    #[error("the zero code has no minimum distance")]
    EmptyCode,
    #[error("GF({0}) is too large for the distance search")]
    FieldTooLarge(u32),
    #[error("exhaustive search over {q}^{k} messages exceeds the budget {max}")]
    BudgetExceeded { q: u32, k: usize, max: u128 },
    #[error("codes have different fields or lengths")]
    Incompatible,
    #[error(transparent)]
    Field(#[from] GfError),
    #[error("{0}")]
    Format(String),
}

#[derive(Clone, Debug)]
pub struct LinearCode {
    field: Field,
    n: usize,
    gen: Matrix,
}

/// A generator in systematic form `[I | A]` up to a column permutation.
#[derive(Clone, Debug)]
pub struct Systematic {
    /// Information-set columns; row `i` has its identity entry at `info[i]`.
    pub info: Vec<usize>,
    /// The remaining columns, in increasing order.
    pub redundancy: Vec<usize>,
    /// `A`, restricted to the redundancy columns.
    pub a: Matrix,
}

impl LinearCode {
    /// A code from a full-rank generator matrix.
    pub fn new(field: &Field, n: usize, gen: Matrix) -> Result<LinearCode, CodeError> {
        for (row, r) in gen.iter().enumerate() {
            if r.len() != n {
                return Err(CodeError::RowLength { row, len: r.len(), n });
            }
            if r.iter().any(|&x| !field.contains(x)) {
                return Err(CodeError::ForeignEntry);
            }
        }
        let rank = matrix::rank(field, &gen);
        if rank < gen.len() {
            return Err(CodeError::RankDeficient { rank, rows: gen.len() });
        }
        Ok(LinearCode {
            field: field.clone(),
            n,
            gen,
        })
    }

    /// The code spanned by `rows`, which may be dependent. The generator is
    /// the reduced row-echelon basis.
    pub fn from_spanning(field: &Field, n: usize, rows: Matrix) -> Result<LinearCode, CodeError> {
        let mut m = rows;
        for (row, r) in m.iter().enumerate() {
            if r.len() != n {
                return Err(CodeError::RowLength { row, len: r.len(), n });
            }
        }
        matrix::rref(field, &mut m);
        Ok(LinearCode {
            field: field.clone(),
            n,
            gen: m,
        })
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.gen.len()
    }

    pub fn generator(&self) -> &Matrix {
        &self.gen
    }

    /// Reduced row-echelon generator and its pivot columns.
    pub fn rref(&self) -> (Matrix, Vec<usize>) {
        let mut m = self.gen.clone();
        let pivots = matrix::rref(&self.field, &mut m);
        (m, pivots)
    }

    /// Systematic form with pivots chosen greedily left to right.
    pub fn systematic(&self) -> Systematic {
        let (m, info) = self.rref();
        let redundancy: Vec<usize> = (0..self.n).filter(|c| !info.contains(c)).collect();
        let a = m
            .iter()
            .map(|row| redundancy.iter().map(|&c| row[c]).collect())
            .collect();
        Systematic { info, redundancy, a }
    }

    /// The Euclidean dual.
    pub fn dual(&self) -> LinearCode {
        let ns = matrix::nullspace(&self.field, &self.gen, self.n);
        LinearCode {
            field: self.field.clone(),
            n: self.n,
            gen: ns,
        }
    }

    pub fn is_self_orthogonal(&self) -> bool {
        let f = &self.field;
        self.gen
            .iter()
            .enumerate()
            .all(|(i, a)| self.gen[i..].iter().all(|b| f.dot(a, b).is_zero()))
    }

    pub fn is_self_dual(&self) -> bool {
        2 * self.k() == self.n && self.is_self_orthogonal()
    }

    pub fn contains(&self, v: &[Elem]) -> bool {
        if v.len() != self.n {
            return false;
        }
        let mut m = self.gen.clone();
        m.push(v.to_vec());
        matrix::rank(&self.field, &m) == self.k()
    }

    pub fn row_space_equal(&self, other: &LinearCode) -> bool {
        self.field == other.field && self.n == other.n && self.rref().0 == other.rref().0
    }

    pub fn encode(&self, msg: &[Elem]) -> Vec<Elem> {
        matrix::vec_mul(&self.field, msg, &self.gen)
    }

    /// Scales coordinate `i` by `a[i]`.
    pub fn twist(&self, a: &[Elem]) -> Result<LinearCode, CodeError> {
        if a.len() != self.n {
            return Err(CodeError::TwistLength {
                len: a.len(),
                n: self.n,
            });
        }
        if let Some(i) = a.iter().position(|x| x.is_zero()) {
            return Err(CodeError::ZeroTwist(i));
        }
        let f = &self.field;
        let gen = self
            .gen
            .iter()
            .map(|row| row.iter().zip(a).map(|(&x, &s)| f.mul(x, s)).collect())
            .collect();
        Ok(LinearCode {
            field: f.clone(),
            n: self.n,
            gen,
        })
    }

    /// Appends `extra` zero coordinates to every codeword.
    pub fn pad_zeros(&self, extra: usize) -> LinearCode {
        let gen = self
            .gen
            .iter()
            .map(|row| {
                let mut r = row.clone();
                r.resize(self.n + extra, Elem::ZERO);
                r
            })
            .collect();
        LinearCode {
            field: self.field.clone(),
            n: self.n + extra,
            gen,
        }
    }

    /// The code spanned by this one and `rows`.
    pub fn extend_with(&self, rows: &[Vec<Elem>]) -> Result<LinearCode, CodeError> {
        let mut gen = self.gen.clone();
        gen.extend(rows.iter().cloned());
        LinearCode::new(&self.field, self.n, gen)
    }

    pub fn weight(v: &[Elem]) -> usize {
        v.iter().filter(|x| !x.is_zero()).count()
    }

    pub fn min_distance_exhaustive(&self, opts: &DistanceOptions) -> Result<DistanceCertificate, CodeError> {
        distance::min_distance_exhaustive(self, opts)
    }

    pub fn min_distance_bz(&self, opts: &DistanceOptions) -> Result<DistanceCertificate, CodeError> {
        distance::min_distance_bz(self, opts)
    }

    /// `d = n - k + 1`, decided by the minors of the systematic part.
    pub fn is_mds(&self) -> bool {
        if self.k() == 0 || self.k() == self.n {
            return true;
        }
        let sys = self.systematic();
        mds::all_minors_nonzero(&self.field, &sys.a)
    }

    /// Number of square minors `is_mds` may have to examine.
    pub fn mds_minor_count(&self) -> u128 {
        mds::minor_count(self.k(), self.n - self.k())
    }
}

/// A code certified self-dual at construction.
#[derive(Clone, Debug)]
pub struct SelfDualCode(LinearCode);

impl SelfDualCode {
    pub fn new(code: LinearCode) -> Result<SelfDualCode, CodeError> {
        if code.n() % 2 == 1 {
            return Err(CodeError::OddLength(code.n()));
        }
        if !code.is_self_dual() {
            return Err(CodeError::NotSelfDual);
        }
        Ok(SelfDualCode(code))
    }

    pub fn code(&self) -> &LinearCode {
        &self.0
    }

    pub fn into_code(self) -> LinearCode {
        self.0
    }
}
