//! One-point evaluation codes `C_L(D, s P∞)`, residue twists and the
//! embeddings of self-orthogonal codes into self-dual ones.

use thiserror::Error;

use crate::curve::{AffinePoint, Curve, CurveFamily};
use crate::gf::{Elem, Field};
use crate::lincode::matrix::{self, Matrix};
use crate::lincode::{CodeError, LinearCode};
use crate::poly::{Poly, PolyError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AgError {
    #[error("pole bound s={s} must exceed 2g-2={bound}")]
    PoleBound { s: u32, bound: i64 },
    #[error("evaluation is not injective: rank {rank} of {rows} basis functions on {n} points")]
    RankDeficit { rank: usize, rows: usize, n: usize },
    #[error("point {0} is not on the curve")]
    NotOnCurve(usize),
    #[error("place list must be a union of complete fibers (fiber over x-coordinate index {0} is incomplete)")]
    IncompleteFiber(usize),
    #[error("empty support")]
    EmptySupport,
    #[error("duplicate place at index {0}")]
    DuplicatePlace(usize),
    #[error("x-coordinate index {0} has an empty fiber")]
    EmptyFiber(usize),
    #[error("residue at place {0} is zero")]
    ZeroResidue(usize),
    #[error("residue at place {0} is not a square")]
    NonSquareResidue(usize),
    #[error("no twist exists: the solution space of G diag(z) G^T = 0 has no vector with all entries nonzero squares")]
    NoTwist,
    #[error("twist search budget exhausted after {0} candidates")]
    TwistBudget(u64),
    #[error("input code is not self-orthogonal")]
    NotSelfOrthogonal,
    #[error("length {0} is odd; a self-dual code needs even length")]
    OddLength(usize),
    #[error("no isotropic vector in the quotient of dimension {0}")]
    NoIsotropic(usize),
    #[error("witness row {0} breaks self-orthogonality or is already in the code")]
    BadWitness(usize),
    #[error("extension row is not orthogonal to the code")]
    NotOrthogonal,
    #[error("-(v.v) is not a square; no extension coordinate exists")]
    NoExtension,
    #[error(transparent)]
    Code(#[from] CodeError),
    #[error(transparent)]
    Poly(#[from] PolyError),
}

/// The divisors `D` (a list of places) and `G = s P∞`, with
/// `h = ∏_{α ∈ U} (x - α)` over the x-support `U` of `D`.
#[derive(Clone, Debug)]
pub struct EvalData {
    curve: Curve,
    support_x: Vec<Elem>,
    places: Vec<AffinePoint>,
    s: u32,
    h: Poly,
}

impl EvalData {
    /// `D` = the fibers over `support_x`, in the given x order.
    pub fn new(curve: &Curve, support_x: &[Elem], s: u32) -> Result<EvalData, AgError> {
        let mut places = Vec::new();
        for (i, &a) in support_x.iter().enumerate() {
            let fib = curve.x_fiber(a);
            if fib.is_empty() {
                return Err(AgError::EmptyFiber(i));
            }
            places.extend(fib);
        }
        Self::with_places(curve, places, s)
    }

    /// `D` given explicitly; it must be a union of complete fibers.
    pub fn with_places(curve: &Curve, places: Vec<AffinePoint>, s: u32) -> Result<EvalData, AgError> {
        if places.is_empty() {
            return Err(AgError::EmptySupport);
        }
        let mut support_x: Vec<Elem> = Vec::new();
        for (i, p) in places.iter().enumerate() {
            if !curve.contains(p) {
                return Err(AgError::NotOnCurve(i));
            }
            if places[..i].contains(p) {
                return Err(AgError::DuplicatePlace(i));
            }
            if !support_x.contains(&p.x) {
                support_x.push(p.x);
            }
        }
        for (i, &a) in support_x.iter().enumerate() {
            let fib = curve.x_fiber(a);
            if fib.iter().any(|p| !places.contains(p)) {
                return Err(AgError::IncompleteFiber(i));
            }
        }
        let h = Poly::from_roots(curve.field(), &support_x)?;
        Ok(EvalData {
            curve: curve.clone(),
            support_x,
            places,
            s,
            h,
        })
    }

    pub fn with_s(&self, s: u32) -> EvalData {
        EvalData { s, ..self.clone() }
    }

    pub fn curve(&self) -> &Curve {
        &self.curve
    }

    pub fn field(&self) -> &Field {
        self.curve.field()
    }

    pub fn support_x(&self) -> &[Elem] {
        &self.support_x
    }

    pub fn places(&self) -> &[AffinePoint] {
        &self.places
    }

    pub fn n(&self) -> usize {
        self.places.len()
    }

    pub fn s(&self) -> u32 {
        self.s
    }

    pub fn h(&self) -> &Poly {
        &self.h
    }

    pub fn genus(&self) -> u32 {
        self.curve.genus()
    }

    /// `deg (ω)` on the `P∞` side: `(ω) = (2g - 2 + |D|) P∞ - D`.
    pub fn canonical_pole(&self) -> i64 {
        2 * self.genus() as i64 - 2 + self.n() as i64
    }
}

/// Monomials `x^i y^j` spanning `L(s P∞)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RrBasis {
    pub monomials: Vec<(u32, u32)>,
}

/// All `x^i y^j` with `j < deg_y` and `i pole_x + j pole_y <= s`, ordered by `(j, i)`.
pub fn rr_basis(curve: &Curve, s: u32) -> Result<RrBasis, AgError> {
    let g = curve.genus() as i64;
    if (s as i64) <= 2 * g - 2 {
        return Err(AgError::PoleBound { s, bound: 2 * g - 2 });
    }
    let (px, py) = (curve.pole_x(), curve.pole_y());
    let mut monomials = Vec::new();
    let jmax = if matches!(curve.family(), CurveFamily::Line) {
        1
    } else {
        curve.y_degree()
    };
    for j in 0..jmax {
        if j * py > s {
            break;
        }
        let mut i = 0;
        while i * px + j * py <= s {
            monomials.push((i, j));
            i += 1;
        }
    }
    debug_assert_eq!(monomials.len() as i64, s as i64 - g + 1);
    Ok(RrBasis { monomials })
}

/// Rows `(f(P_1), ..., f(P_n))` for each basis monomial `f`.
pub fn evaluation_matrix(ed: &EvalData, basis: &RrBasis) -> Matrix {
    let f = ed.field();
    let max_i = basis.monomials.iter().map(|m| m.0).max().unwrap_or(0) as usize;
    let max_j = basis.monomials.iter().map(|m| m.1).max().unwrap_or(0) as usize;
    let powers = |v: Elem, e: usize| {
        let mut out = Vec::with_capacity(e + 1);
        let mut acc = Elem::ONE;
        for _ in 0..=e {
            out.push(acc);
            acc = f.mul(acc, v);
        }
        out
    };
    let columns: Vec<Vec<Elem>> = ed
        .places
        .iter()
        .map(|p| {
            let xp = powers(p.x, max_i);
            let yp = powers(p.y, max_j);
            basis
                .monomials
                .iter()
                .map(|&(i, j)| f.mul(xp[i as usize], yp[j as usize]))
                .collect()
        })
        .collect();
    (0..basis.monomials.len())
        .map(|r| columns.iter().map(|c| c[r]).collect())
        .collect()
}

/// `C_L(D, s P∞)`, checked to have dimension `s - g + 1`.
pub fn evaluate_code(ed: &EvalData) -> Result<LinearCode, AgError> {
    let basis = rr_basis(&ed.curve, ed.s)?;
    let m = evaluation_matrix(ed, &basis);
    let rank = matrix::rank(ed.field(), &m);
    if rank < m.len() {
        return Err(AgError::RankDeficit {
            rank,
            rows: m.len(),
            n: ed.n(),
        });
    }
    Ok(LinearCode::new(ed.field(), ed.n(), m)?)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Criterion {
    SelfDual,
    SelfOrthogonal,
    Neither,
}

/// Compares `2 s` with the pole order of `(ω)`, `ω = dx/h` (or `dx/(y h)` on
/// Kummer curves).
pub fn divisor_criterion(ed: &EvalData) -> Criterion {
    let two_s = 2 * ed.s as i64;
    let c = ed.canonical_pole();
    if two_s == c {
        Criterion::SelfDual
    } else if two_s < c {
        Criterion::SelfOrthogonal
    } else {
        Criterion::Neither
    }
}

/// `Res_P(ω)` for each place of `D`.
pub fn residues(ed: &EvalData) -> Result<Vec<Elem>, AgError> {
    let f = ed.field();
    let dh = ed.h.derivative();
    ed.places
        .iter()
        .enumerate()
        .map(|(i, p)| {
            let mut denom = dh.eval(p.x);
            if matches!(ed.curve.family(), CurveFamily::Kummer { .. }) {
                denom = f.mul(denom, p.y);
            }
            f.inv(denom).map_err(|_| AgError::ZeroResidue(i))
        })
        .collect()
}

/// `a` with `a_i^2 = c Res_{P_i}(ω)`; `c = 1` gives the plain residue twist.
pub fn residue_twist_scaled(ed: &EvalData, c: Elem) -> Result<Vec<Elem>, AgError> {
    let f = ed.field();
    residues(ed)?
        .into_iter()
        .enumerate()
        .map(|(i, r)| f.sqrt(f.mul(c, r)).map_err(|_| AgError::NonSquareResidue(i)))
        .collect()
}

pub fn residue_twist(ed: &EvalData) -> Result<Vec<Elem>, AgError> {
    residue_twist_scaled(ed, Elem::ONE)
}

/// Candidate scalings tried when searching for a twist.
pub const TWIST_SEARCH_BUDGET: u64 = 1 << 22;

/// A twist `a` making `C` self-orthogonal (self-dual when `2k = n`):
/// solves the linear system `G diag(z) G^T = 0` and returns `a_i = sqrt(z_i)`
/// for the first solution (in token order of the coordinates with respect to
/// a nullspace basis) whose entries are all nonzero squares. `z = 1` is
/// tried first.
pub fn solve_twist(code: &LinearCode) -> Result<Vec<Elem>, AgError> {
    solve_twist_with_budget(code, TWIST_SEARCH_BUDGET)
}

pub fn solve_twist_with_budget(code: &LinearCode, budget: u64) -> Result<Vec<Elem>, AgError> {
    let f = code.field();
    let n = code.n();
    if code.is_self_orthogonal() {
        return Ok(vec![Elem::ONE; n]);
    }
    let g = code.generator();
    let k = g.len();
    let mut eqs: Matrix = Vec::with_capacity(k * (k + 1) / 2);
    for i in 0..k {
        for j in i..k {
            eqs.push((0..n).map(|l| f.mul(g[i][l], g[j][l])).collect());
        }
    }
    let basis = matrix::nullspace(f, &eqs, n);
    let d = basis.len();
    if d == 0 {
        return Err(AgError::NoTwist);
    }
    let admissible = |z: &[Elem]| z.iter().all(|&x| !x.is_zero() && f.is_square(x));
    // A coordinate that vanishes on the whole solution space rules out every z.
    if (0..n).any(|l| basis.iter().all(|b| b[l].is_zero())) {
        return Err(AgError::NoTwist);
    }
    let tokens = f.elements_zero_first();
    // z and c z are equally admissible for square c, so one projective
    // representative and one nonsquare multiple cover each line.
    let nonsquare = tokens.iter().copied().find(|&x| !x.is_zero() && !f.is_square(x));
    let mut tried = 0u64;
    for idx in ProjectiveScan::new(tokens.len(), d) {
        if tried >= budget {
            return Err(AgError::TwistBudget(tried));
        }
        tried += 1;
        let coeffs: Vec<Elem> = idx.iter().map(|&i| tokens[i]).collect();
        let z = matrix::vec_mul(f, &coeffs, &basis);
        let scaled = nonsquare.map(|c| z.iter().map(|&x| f.mul(c, x)).collect::<Vec<_>>());
        for cand in std::iter::once(z).chain(scaled) {
            if admissible(&cand) {
                return Ok(cand.iter().map(|&x| f.sqrt(x).expect("square")).collect());
            }
        }
    }
    Err(AgError::NoTwist)
}

/// Points of projective `dim`-space over a field of `q` tokens (token 0 is
/// zero, token 1 is one), as index vectors whose first nonzero entry is 1,
/// in lexicographic order.
struct ProjectiveScan {
    q: usize,
    dim: usize,
    lead: usize,
    idx: Vec<usize>,
    done: bool,
}

impl ProjectiveScan {
    fn new(q: usize, dim: usize) -> ProjectiveScan {
        let mut s = ProjectiveScan {
            q,
            dim,
            lead: dim.wrapping_sub(1),
            idx: vec![0; dim],
            done: dim == 0,
        };
        if !s.done {
            s.idx[s.lead] = 1;
        }
        s
    }
}

impl Iterator for ProjectiveScan {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        if self.done {
            return None;
        }
        let out = self.idx.clone();
        // Advance the suffix after the lead as a base-q counter.
        let mut pos = self.dim;
        loop {
            if pos == self.lead + 1 {
                if self.lead == 0 {
                    self.done = true;
                } else {
                    self.idx.iter_mut().for_each(|x| *x = 0);
                    self.lead -= 1;
                    self.idx[self.lead] = 1;
                }
                break;
            }
            pos -= 1;
            self.idx[pos] += 1;
            if self.idx[pos] < self.q {
                break;
            }
            self.idx[pos] = 0;
        }
        Some(out)
    }
}

/// Appends one zero coordinate.
pub fn lengthen_zero(code: &LinearCode) -> LinearCode {
    code.pad_zeros(1)
}

/// A self-dual code containing a self-orthogonal one, with the rows adjoined.
#[derive(Clone, Debug)]
pub struct Embedding {
    pub code: LinearCode,
    pub added: Vec<Vec<Elem>>,
    /// Rows that came from the caller rather than the search.
    pub witness_rows: usize,
}

/// Adjoins isotropic vectors of `C⊥/C` until the code is self-dual. Witness
/// rows, when given, are tried first.
pub fn embed_self_dual(c0: &LinearCode, witness: &[Vec<Elem>]) -> Result<Embedding, AgError> {
    let f = c0.field().clone();
    let n = c0.n();
    if n % 2 == 1 {
        return Err(AgError::OddLength(n));
    }
    if !c0.is_self_orthogonal() {
        return Err(AgError::NotSelfOrthogonal);
    }
    let mut code = c0.clone();
    let mut added = Vec::new();
    for (i, w) in witness.iter().enumerate() {
        if w.len() != n || code.contains(w) {
            return Err(AgError::BadWitness(i));
        }
        let next = code.extend_with(std::slice::from_ref(w))?;
        if !next.is_self_orthogonal() {
            return Err(AgError::BadWitness(i));
        }
        code = next;
        added.push(w.clone());
    }
    let witness_rows = added.len();
    while 2 * code.k() < n {
        let v = isotropic_in_quotient(&f, &code)?;
        code = code.extend_with(std::slice::from_ref(&v))?;
        added.push(v);
    }
    Ok(Embedding {
        code,
        added,
        witness_rows,
    })
}

/// A vector of `C⊥ \ C` with `x.x = 0`, assuming `C ⊂ C⊥`.
fn isotropic_in_quotient(f: &Field, code: &LinearCode) -> Result<Vec<Elem>, AgError> {
    let n = code.n();
    let dual = code.dual();
    // Complement of C inside C⊥: dual basis vectors that raise the rank.
    let mut span = code.generator().clone();
    let mut comp: Matrix = Vec::new();
    for v in dual.generator() {
        let mut trial = span.clone();
        trial.push(v.clone());
        if matrix::rank(f, &trial) > span.len() {
            span = trial;
            comp.push(v.clone());
        }
    }
    let r = comp.len();
    if r == 0 {
        return Err(AgError::NoIsotropic(0));
    }
    // Any form in three or more variables is isotropic, so three suffice.
    let dim = r.min(3);
    let gram: Vec<Vec<Elem>> = (0..dim)
        .map(|i| (0..dim).map(|j| f.dot(&comp[i], &comp[j])).collect())
        .collect();
    let tokens = f.elements_zero_first();
    let q = tokens.len();
    let quad = |x: &[Elem]| {
        let mut acc = Elem::ZERO;
        for i in 0..dim {
            for j in 0..dim {
                acc = f.add(acc, f.mul(f.mul(x[i], x[j]), gram[i][j]));
            }
        }
        acc
    };
    for idx in ProjectiveScan::new(q, dim) {
        let x: Vec<Elem> = idx.iter().map(|&i| tokens[i]).collect();
        if quad(&x).is_zero() {
            let v = matrix::vec_mul(f, &x, &comp[..dim].to_vec());
            debug_assert_eq!(v.len(), n);
            return Ok(v);
        }
    }
    Err(AgError::NoIsotropic(r))
}

/// Extends a self-orthogonal `[N, k]` code by the row `(v, c)` with
/// `c^2 = -(v.v)`, after padding the code with a zero coordinate. `v` must be
/// orthogonal to the code.
pub fn extend_by_row(c0: &LinearCode, v: &[Elem]) -> Result<(LinearCode, Elem), AgError> {
    let f = c0.field();
    if c0.generator().iter().any(|r| !f.dot(r, v).is_zero()) {
        return Err(AgError::NotOrthogonal);
    }
    let vv = f.dot(v, v);
    let c = f.sqrt(f.neg(vv)).map_err(|_| AgError::NoExtension)?;
    let mut row = v.to_vec();
    row.push(c);
    let code = c0.pad_zeros(1).extend_with(&[row])?;
    Ok((code, c))
}

/// Designed distance `|D| - s` of `C_L(D, s P∞)`.
pub fn ag_distance_bound(ed: &EvalData) -> usize {
    (ed.n() as i64 - ed.s as i64).max(0) as usize
}

/// Lower bound for a self-dual code obtained from `C_L(D, s P∞)` with `|D|`
/// odd by lengthening and embedding: the result lies in the dual of the
/// lengthened code, whose distance is at least `(|D| + 1)/2 - g`.
pub fn dual_distance_bound(ed: &EvalData) -> usize {
    let v = (ed.n() as i64 + 1) / 2 - ed.genus() as i64;
    v.max(0) as usize
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::AsForm;

    fn line(q: u64) -> (Field, Curve) {
        let f = Field::of_order(q).unwrap();
        let c = Curve::new(&f, CurveFamily::Line).unwrap();
        (f, c)
    }

    #[test]
    fn line_basis_is_powers_of_x() {
        let (_, c) = line(7);
        let b = rr_basis(&c, 3).unwrap();
        assert_eq!(b.monomials, vec![(0, 0), (1, 0), (2, 0), (3, 0)]);
    }

    #[test]
    fn basis_sizes_follow_riemann_roch() {
        let f16 = Field::of_order(16).unwrap();
        let f9 = Field::of_order(9).unwrap();
        let f25 = Field::of_order(25).unwrap();
        let cases = [
            (
                Curve::new(
                    &f16,
                    CurveFamily::ArtinSchreier2(AsForm::Cubic {
                        b: Elem::ONE,
                        c: Elem::ZERO,
                    }),
                )
                .unwrap(),
                9,
            ),
            (
                Curve::new(&f16, CurveFamily::ArtinSchreier2(AsForm::Quintic)).unwrap(),
                14,
            ),
            (Curve::new(&f9, CurveFamily::Hermitian { q0: 3 }).unwrap(), 15),
            (Curve::new(&f9, CurveFamily::HalfHermitian { q0: 3 }).unwrap(), 7),
            (Curve::new(&f25, CurveFamily::Kummer { t: 5 }).unwrap(), 7),
        ];
        for (c, s) in cases {
            let b = rr_basis(&c, s).unwrap();
            assert_eq!(b.monomials.len() as i64, s as i64 - c.genus() as i64 + 1, "{c:?}");
            // pole orders are distinct, hence the monomials independent
            let mut poles: Vec<u32> = b
                .monomials
                .iter()
                .map(|&(i, j)| i * c.pole_x() + j * c.pole_y())
                .collect();
            poles.sort();
            poles.dedup();
            assert_eq!(poles.len(), b.monomials.len());
        }
    }

    #[test]
    fn pole_bound_rejected() {
        let f = Field::of_order(9).unwrap();
        let c = Curve::new(&f, CurveFamily::Hermitian { q0: 3 }).unwrap();
        assert!(matches!(rr_basis(&c, 4), Err(AgError::PoleBound { .. })));
    }

    #[test]
    fn criterion_arithmetic() {
        let (f, c) = line(13);
        let u = f.mul_subgroup(6).unwrap();
        let ed = EvalData::new(&c, &u, 2).unwrap();
        assert_eq!(divisor_criterion(&ed), Criterion::SelfDual);
        assert_eq!(divisor_criterion(&ed.with_s(1)), Criterion::SelfOrthogonal);
        assert_eq!(divisor_criterion(&ed.with_s(3)), Criterion::Neither);
    }

    #[test]
    fn roots_of_unity_residues() {
        // h = x^n - 1, so 1/h'(α) = α/n.
        let (f, c) = line(13);
        let n = 6u64;
        let u = f.mul_subgroup(n).unwrap();
        let ed = EvalData::new(&c, &u, 2).unwrap();
        let res = residues(&ed).unwrap();
        let nn = f.from_int(n as i64);
        for (r, &a) in res.iter().zip(&u) {
            assert_eq!(*r, f.div(a, nn).unwrap());
        }
    }

    #[test]
    fn residue_twist_gives_self_dual_grs() {
        // U_6 in GF(13) is the group of squares and 6 is a nonsquare, so the
        // residues α/6 are uniformly nonsquare.
        let (f, c) = line(13);
        let u = f.mul_subgroup(6).unwrap();
        let ed = EvalData::new(&c, &u, 2).unwrap();
        let code = evaluate_code(&ed).unwrap();
        assert_eq!(code.k(), 3);
        assert!(residue_twist(&ed).is_err());
        let twisted = match residue_twist(&ed) {
            Ok(a) => code.twist(&a).unwrap(),
            Err(_) => code.twist(&residue_twist_scaled(&ed, f.w()).unwrap()).unwrap(),
        };
        assert!(twisted.is_self_dual());
    }

    #[test]
    fn solve_twist_prefers_ones_and_detects_impossible() {
        let f = Field::prime(5).unwrap();
        let sd = LinearCode::new(&f, 2, vec![vec![Elem(1), Elem(2)]]).unwrap();
        assert_eq!(solve_twist(&sd).unwrap(), vec![Elem::ONE, Elem::ONE]);
        let id = LinearCode::new(&f, 2, vec![vec![Elem(1), Elem(0)], vec![Elem(0), Elem(1)]]).unwrap();
        assert_eq!(solve_twist(&id), Err(AgError::NoTwist));
    }

    #[test]
    fn solve_twist_recovers_scaling() {
        let f = Field::prime(13).unwrap();
        // [1 5] is self-dual over GF(13) since 1 + 25 = 26 = 0.
        let c = LinearCode::new(&f, 2, vec![vec![Elem(1), Elem(5)]]).unwrap();
        let scaled = c.twist(&[Elem(2), Elem(7)]).unwrap();
        assert!(!scaled.is_self_dual());
        let a = solve_twist(&scaled).unwrap();
        assert!(scaled.twist(&a).unwrap().is_self_dual());
    }

    #[test]
    fn lengthen_and_embed() {
        let f = Field::prime(5).unwrap();
        let c = LinearCode::new(&f, 2, vec![vec![Elem(1), Elem(2)]]).unwrap();
        let l = lengthen_zero(&c);
        assert_eq!(l.generator(), &vec![vec![Elem(1), Elem(2), Elem(0)]]);
        let empty = LinearCode::new(&f, 3, vec![]).unwrap();
        assert_eq!(lengthen_zero(&empty).n(), 4);
        let e = embed_self_dual(&empty.pad_zeros(1), &[]).unwrap();
        assert!(e.code.is_self_dual());
        let already = embed_self_dual(&c, &[]).unwrap();
        assert!(already.added.is_empty());
        assert!(already.code.row_space_equal(&c));
    }

    #[test]
    fn embedding_fails_for_anisotropic_plane() {
        // Over GF(3), x^2 + y^2 has no nontrivial zero.
        let f = Field::prime(3).unwrap();
        let empty = LinearCode::new(&f, 2, vec![]).unwrap();
        assert_eq!(embed_self_dual(&empty, &[]).unwrap_err(), AgError::NoIsotropic(2));
    }

    #[test]
    fn extension_row_completes_grs() {
        // U = U_4 ∪ {0} in GF(13), s = 1 gives a self-orthogonal [5,2] code;
        // adjoining x^2 with c^2 = -1 gives a self-dual [6,3].
        let (f, c) = line(13);
        let mut u = f.mul_subgroup(4).unwrap();
        u.push(Elem::ZERO);
        let ed = EvalData::new(&c, &u, 1).unwrap();
        let a = residue_twist(&ed).unwrap();
        let c0 = evaluate_code(&ed).unwrap().twist(&a).unwrap();
        assert!(c0.is_self_orthogonal());
        let v: Vec<Elem> = ed
            .places()
            .iter()
            .zip(&a)
            .map(|(p, &ai)| f.mul(ai, f.mul(p.x, p.x)))
            .collect();
        assert_eq!(f.dot(&v, &v), Elem::ONE);
        let (code, _) = extend_by_row(&c0, &v).unwrap();
        assert!(code.is_self_dual());
        assert!(code.is_mds());
    }
}
