//! Curve families with a single place at infinity.
//!
//! Each family is given by an equation `A(y) = B(x)` with `A` additive (or
//! `y^2`) in `y`; points are enumerated fiber by fiber over the x-line. Only
//! the pole orders of `x` and `y` at the unique place `P∞` are recorded, which
//! is all the Riemann–Roch spaces `L(s P∞)` need.

use std::fmt;
use std::sync::{Arc, OnceLock};

use thiserror::Error;

use crate::gf::{Elem, Field};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CurveError {
    #[error("{family} requires characteristic {expected}, got {actual}")]
    Characteristic {
        family: &'static str,
        expected: &'static str,
        actual: u32,
    },
    #[error("{0}")]
    Parameter(String),
}

/// Right-hand side of `y^2 + y = f(x)` in characteristic 2.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AsForm {
    /// `x^3 + b x + c`
    Cubic { b: Elem, c: Elem },
    /// `x^5`
    Quintic,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CurveFamily {
    /// The projective line, points are `x` values.
    Line,
    /// `y^2 + y = f(x)` over GF(2^m).
    ArtinSchreier2(AsForm),
    /// `y^2 = x^t`, odd characteristic, `t` odd.
    Kummer { t: u32 },
    /// `y^q0 + y = x^(q0+1)` over GF(q0^2).
    Hermitian { q0: u32 },
    /// `y^q0 + y = x^((q0+1)/2)` over GF(q0^2), `q0` odd.
    HalfHermitian { q0: u32 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct AffinePoint {
    pub x: Elem,
    pub y: Elem,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Place {
    Affine(AffinePoint),
    Infinity,
}

#[derive(Clone)]
pub struct Curve {
    field: Field,
    family: CurveFamily,
    /// Solutions of the additive equation, indexed by right-hand side.
    solutions: Arc<OnceLock<Vec<Vec<Elem>>>>,
}

impl fmt::Debug for Curve {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Curve({:?} over {:?})", self.family, self.field)
    }
}

impl Curve {
    pub fn new(field: &Field, family: CurveFamily) -> Result<Curve, CurveError> {
        let p = field.characteristic();
        let q = field.order();
        let char_err = |family, expected| CurveError::Characteristic {
            family,
            expected,
            actual: p,
        };
        match family {
            CurveFamily::Line => {}
            CurveFamily::ArtinSchreier2(form) => {
                if p != 2 {
                    return Err(char_err("Artin-Schreier curve", "2"));
                }
                if let AsForm::Cubic { b, c } = form {
                    if !field.contains(b) || !field.contains(c) {
                        return Err(CurveError::Parameter("coefficient outside the field".into()));
                    }
                }
            }
            CurveFamily::Kummer { t } => {
                if p == 2 {
                    return Err(char_err("Kummer curve", "odd"));
                }
                if t < 3 || t % 2 == 0 {
                    return Err(CurveError::Parameter(format!(
                        "exponent t={t} must be odd and at least 3"
                    )));
                }
            }
            CurveFamily::Hermitian { q0 } | CurveFamily::HalfHermitian { q0 } => {
                if (q0 as u64) * (q0 as u64) != q as u64 {
                    return Err(CurveError::Parameter(format!(
                        "q0={q0} is not the square root of q={q}"
                    )));
                }
                if matches!(family, CurveFamily::HalfHermitian { .. }) && p == 2 {
                    return Err(char_err("half-Hermitian curve", "odd"));
                }
            }
        }
        Ok(Curve {
            field: field.clone(),
            family,
            solutions: Arc::new(OnceLock::new()),
        })
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn family(&self) -> CurveFamily {
        self.family
    }

    pub fn genus(&self) -> u32 {
        match self.family {
            CurveFamily::Line => 0,
            CurveFamily::ArtinSchreier2(AsForm::Cubic { .. }) => 1,
            CurveFamily::ArtinSchreier2(AsForm::Quintic) => 2,
            CurveFamily::Kummer { t } => (t - 1) / 2,
            CurveFamily::Hermitian { q0 } => q0 * (q0 - 1) / 2,
            CurveFamily::HalfHermitian { q0 } => (q0 - 1) * (q0 - 1) / 4,
        }
    }

    /// Pole order of `x` at `P∞`.
    pub fn pole_x(&self) -> u32 {
        match self.family {
            CurveFamily::Line => 1,
            CurveFamily::ArtinSchreier2(_) | CurveFamily::Kummer { .. } => 2,
            CurveFamily::Hermitian { q0 } | CurveFamily::HalfHermitian { q0 } => q0,
        }
    }

    /// Pole order of `y` at `P∞` (zero for the line).
    pub fn pole_y(&self) -> u32 {
        match self.family {
            CurveFamily::Line => 0,
            CurveFamily::ArtinSchreier2(AsForm::Cubic { .. }) => 3,
            CurveFamily::ArtinSchreier2(AsForm::Quintic) => 5,
            CurveFamily::Kummer { t } => t,
            CurveFamily::Hermitian { q0 } => q0 + 1,
            CurveFamily::HalfHermitian { q0 } => q0.div_ceil(2),
        }
    }

    /// Degree of the defining equation in `y`; monomials `x^i y^j` with
    /// `j` below it form a basis of the coordinate ring.
    pub fn y_degree(&self) -> u32 {
        match self.family {
            CurveFamily::Line => 1,
            CurveFamily::ArtinSchreier2(_) | CurveFamily::Kummer { .. } => 2,
            CurveFamily::Hermitian { q0 } | CurveFamily::HalfHermitian { q0 } => q0,
        }
    }

    /// `B(x)`, the right-hand side of the defining equation.
    pub fn rhs(&self, x: Elem) -> Elem {
        let f = &self.field;
        match self.family {
            CurveFamily::Line => Elem::ZERO,
            CurveFamily::ArtinSchreier2(AsForm::Cubic { b, c }) => f.add(f.add(f.pow(x, 3), f.mul(b, x)), c),
            CurveFamily::ArtinSchreier2(AsForm::Quintic) => f.pow(x, 5),
            CurveFamily::Kummer { t } => f.pow(x, t as u64),
            CurveFamily::Hermitian { q0 } => f.pow(x, q0 as u64 + 1),
            CurveFamily::HalfHermitian { q0 } => f.pow(x, (q0 as u64).div_ceil(2)),
        }
    }

    /// `A(y)`, the left-hand side.
    pub fn lhs(&self, y: Elem) -> Elem {
        let f = &self.field;
        match self.family {
            CurveFamily::Line => Elem::ZERO,
            CurveFamily::ArtinSchreier2(_) => f.add(f.mul(y, y), y),
            CurveFamily::Kummer { .. } => f.mul(y, y),
            CurveFamily::Hermitian { q0 } | CurveFamily::HalfHermitian { q0 } => f.add(f.pow(y, q0 as u64), y),
        }
    }

    pub fn contains(&self, p: &AffinePoint) -> bool {
        match self.family {
            CurveFamily::Line => p.y.is_zero(),
            _ => self.lhs(p.y) == self.rhs(p.x),
        }
    }

    fn additive_exponent(&self) -> Option<u32> {
        match self.family {
            CurveFamily::ArtinSchreier2(_) => Some(2),
            CurveFamily::Hermitian { q0 } | CurveFamily::HalfHermitian { q0 } => Some(q0),
            _ => None,
        }
    }

    fn solution_table(&self) -> &[Vec<Elem>] {
        self.solutions.get_or_init(|| {
            let f = &self.field;
            let mut table = vec![Vec::new(); f.order() as usize];
            if self.additive_exponent().is_some() {
                for y in f.elements_zero_first() {
                    table[self.lhs(y).raw() as usize].push(y);
                }
            }
            table
        })
    }

    /// All `y` with `y^e + y = rhs`, where `e` is 2 for the Artin–Schreier
    /// families and `q0` for the Hermitian ones; zero first, then by
    /// discrete log. Empty for families without an additive equation.
    pub fn solve_artin_schreier(&self, rhs: Elem) -> Vec<Elem> {
        if self.additive_exponent().is_none() {
            return Vec::new();
        }
        self.solution_table()[rhs.raw() as usize].clone()
    }

    /// Points with first coordinate `alpha`, ordered by `y` (zero first, then
    /// discrete log).
    pub fn x_fiber(&self, alpha: Elem) -> Vec<AffinePoint> {
        let f = &self.field;
        let ys: Vec<Elem> = match self.family {
            CurveFamily::Line => vec![Elem::ZERO],
            CurveFamily::Kummer { .. } => {
                let r = self.rhs(alpha);
                if r.is_zero() {
                    vec![Elem::ZERO]
                } else if f.quadratic_character(r) == 1 {
                    let b = f.sqrt(r).expect("square");
                    let mut v = vec![b, f.neg(b)];
                    v.sort_by_key(|&y| f.log_key(y));
                    v
                } else {
                    Vec::new()
                }
            }
            _ => self.solve_artin_schreier(self.rhs(alpha)),
        };
        ys.into_iter().map(|y| AffinePoint { x: alpha, y }).collect()
    }

    /// All affine points: fibers over `w^0, w^1, ..., w^(q-2)` and then `0`.
    pub fn enumerate_points(&self) -> Vec<AffinePoint> {
        self.field
            .nonzero_by_log()
            .chain(std::iter::once(Elem::ZERO))
            .flat_map(|a| self.x_fiber(a))
            .collect()
    }

    /// Text dump: one `( x : y : 1 )` line per point, then `( 1 : 0 : 0 )`.
    pub fn dump_points(&self, points: &[AffinePoint]) -> String {
        let f = &self.field;
        let mut out = String::new();
        for p in points {
            out.push_str(&format!("( {} : {} : 1 )\n", f.format(p.x), f.format(p.y)));
        }
        out.push_str("( 1 : 0 : 0 )\n");
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gf(q: u64) -> Field {
        Field::of_order(q).unwrap()
    }

    fn pt(f: &Field, x: &str, y: &str) -> AffinePoint {
        AffinePoint {
            x: f.parse(x).unwrap(),
            y: f.parse(y).unwrap(),
        }
    }

    #[test]
    fn elliptic_fiber_over_w3() {
        let f = gf(16);
        let c = Curve::new(
            &f,
            CurveFamily::ArtinSchreier2(AsForm::Cubic {
                b: Elem::ONE,
                c: Elem::ZERO,
            }),
        )
        .unwrap();
        assert_eq!(c.x_fiber(f.pow_w(3)), vec![pt(&f, "w^3", "w^7"), pt(&f, "w^3", "w^9")]);
    }

    #[test]
    fn hermitian_fiber_over_zero() {
        let f = gf(9);
        let c = Curve::new(&f, CurveFamily::Hermitian { q0: 3 }).unwrap();
        assert_eq!(
            c.x_fiber(Elem::ZERO),
            vec![pt(&f, "0", "0"), pt(&f, "0", "w^2"), pt(&f, "0", "w^6")]
        );
        assert_eq!(
            c.solve_artin_schreier(Elem::ZERO),
            vec![Elem::ZERO, f.pow_w(2), f.pow_w(6)]
        );
    }

    #[test]
    fn kummer_fiber_over_zero() {
        let f = gf(25);
        let c = Curve::new(&f, CurveFamily::Kummer { t: 5 }).unwrap();
        assert_eq!(c.x_fiber(Elem::ZERO), vec![pt(&f, "0", "0")]);
    }

    #[test]
    fn artin_schreier_solutions_and_trace() {
        let f = gf(16);
        let c = Curve::new(&f, CurveFamily::ArtinSchreier2(AsForm::Quintic)).unwrap();
        assert_eq!(c.solve_artin_schreier(Elem::ZERO), vec![Elem::ZERO, Elem::ONE]);
        for k in f.elements() {
            let sols = c.solve_artin_schreier(k);
            if f.abs_trace(k) == Elem::ONE {
                assert!(sols.is_empty());
            } else {
                assert_eq!(sols.len(), 2);
            }
        }
    }

    #[test]
    fn genus_values() {
        assert_eq!(Curve::new(&gf(9), CurveFamily::Hermitian { q0: 3 }).unwrap().genus(), 3);
        assert_eq!(
            Curve::new(&gf(16), CurveFamily::ArtinSchreier2(AsForm::Quintic))
                .unwrap()
                .genus(),
            2
        );
        assert_eq!(Curve::new(&gf(7), CurveFamily::Line).unwrap().genus(), 0);
        assert_eq!(
            Curve::new(&gf(25), CurveFamily::HalfHermitian { q0: 5 })
                .unwrap()
                .genus(),
            4
        );
        assert_eq!(Curve::new(&gf(25), CurveFamily::Kummer { t: 5 }).unwrap().genus(), 2);
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(Curve::new(&gf(9), CurveFamily::ArtinSchreier2(AsForm::Quintic)).is_err());
        assert!(Curve::new(&gf(16), CurveFamily::Kummer { t: 5 }).is_err());
        assert!(Curve::new(&gf(25), CurveFamily::Kummer { t: 4 }).is_err());
        assert!(Curve::new(&gf(27), CurveFamily::Hermitian { q0: 3 }).is_err());
        assert!(Curve::new(&gf(16), CurveFamily::HalfHermitian { q0: 4 }).is_err());
    }

    #[test]
    fn cubic_over_gf4_has_eight_affine_points() {
        let f = gf(4);
        let c = Curve::new(
            &f,
            CurveFamily::ArtinSchreier2(AsForm::Cubic {
                b: Elem::ZERO,
                c: Elem::ZERO,
            }),
        )
        .unwrap();
        assert_eq!(c.enumerate_points().len(), 8);
    }

    #[test]
    fn kummer_over_gf25() {
        let f = gf(25);
        let c = Curve::new(&f, CurveFamily::Kummer { t: 5 }).unwrap();
        let pts = c.enumerate_points();
        // y^2 = x^5 is solvable exactly when x is a square: 12 nonzero squares
        // with two points each, plus the origin
        assert_eq!(pts.len(), 25);
        assert!(pts.iter().all(|p| c.contains(p)));
        let u6 = f.mul_subgroup(6).unwrap();
        let over_u6: Vec<_> = pts.iter().filter(|p| u6.contains(&p.x)).collect();
        assert_eq!(over_u6.len(), 12);
    }

    #[test]
    fn hermitian_counts() {
        for q0 in [3u32, 5] {
            let f = gf((q0 * q0) as u64);
            let c = Curve::new(&f, CurveFamily::Hermitian { q0 }).unwrap();
            let pts = c.enumerate_points();
            assert_eq!(pts.len() as u32, q0 * q0 * q0);
            assert!(pts.iter().all(|p| c.contains(p)));
            for a in f.elements() {
                assert_eq!(c.x_fiber(a).len() as u32, q0);
            }
            let h = Curve::new(&f, CurveFamily::HalfHermitian { q0 }).unwrap();
            let pts = h.enumerate_points();
            assert_eq!(pts.len() as u32, q0 * (q0 * q0 + 1) / 2);
            assert!(pts.iter().all(|p| h.contains(p)));
        }
    }

    #[test]
    fn artin_schreier_fibers_follow_trace() {
        for m in 2..=6 {
            let f = Field::new(2, m).unwrap();
            for form in [
                AsForm::Cubic {
                    b: Elem::ZERO,
                    c: Elem::ZERO,
                },
                AsForm::Cubic {
                    b: Elem::ONE,
                    c: Elem::ZERO,
                },
                AsForm::Quintic,
            ] {
                let c = Curve::new(&f, CurveFamily::ArtinSchreier2(form)).unwrap();
                for a in f.elements() {
                    let nonempty = !c.x_fiber(a).is_empty();
                    assert_eq!(nonempty, f.abs_trace(c.rhs(a)).is_zero());
                }
            }
        }
    }

    #[test]
    fn elliptic_point_counts() {
        let total = |f: &Field, b: Elem, c: Elem| {
            let curve = Curve::new(f, CurveFamily::ArtinSchreier2(AsForm::Cubic { b, c })).unwrap();
            curve.enumerate_points().len() as i64 + 1
        };
        for m in 1..=6u32 {
            let f = Field::new(2, m).unwrap();
            let q = 1i64 << m;
            let n0 = total(&f, Elem::ZERO, Elem::ZERO);
            if m % 2 == 0 {
                let r = 1i64 << (m / 2);
                let expected = if m % 4 == 0 { q + 1 - 2 * r } else { q + 1 + 2 * r };
                assert_eq!(n0, expected, "y^2+y=x^3, m={m}");
                let b = f.elements().find(|&b| f.abs_trace(b) == Elem::ONE).unwrap();
                assert_eq!(total(&f, b, Elem::ZERO), q + 1, "y^2+y=x^3+bx, m={m}");
                let c = b;
                let expected = if m % 4 == 0 { q + 1 + 2 * r } else { q + 1 - 2 * r };
                assert_eq!(total(&f, Elem::ZERO, c), expected, "y^2+y=x^3+c, m={m}");
            } else {
                println!(
                    "m={m}: #E(x^3)={n0} #E(x^3+x)={} #E(x^3+x+1)={}",
                    total(&f, Elem::ONE, Elem::ZERO),
                    total(&f, Elem::ONE, Elem::ONE)
                );
            }
        }
    }

    #[test]
    fn dump_format() {
        let f = gf(9);
        let c = Curve::new(&f, CurveFamily::Hermitian { q0: 3 }).unwrap();
        let d = c.dump_points(&c.x_fiber(Elem::ZERO));
        assert_eq!(d, "( 0 : 0 : 1 )\n( 0 : w^2 : 1 )\n( 0 : w^6 : 1 )\n( 1 : 0 : 0 )\n");
    }
}
