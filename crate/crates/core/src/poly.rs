//! Dense univariate polynomials over a [`Field`].

use thiserror::Error;

use crate::gf::{Elem, Field};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PolyError {
    #[error("root {0} appears more than once")]
    DuplicateRoot(String),
}

/// Coefficients constant term first, without trailing zeros. The zero
/// polynomial has no coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Poly {
    field: Field,
    coeffs: Vec<Elem>,
}

impl Poly {
    pub fn new(field: &Field, mut coeffs: Vec<Elem>) -> Poly {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly {
            field: field.clone(),
            coeffs,
        }
    }

    pub fn zero(field: &Field) -> Poly {
        Poly::new(field, Vec::new())
    }

    pub fn constant(field: &Field, c: Elem) -> Poly {
        Poly::new(field, vec![c])
    }

    /// `c * x^k`.
    pub fn monomial(field: &Field, c: Elem, k: usize) -> Poly {
        let mut coeffs = vec![Elem::ZERO; k + 1];
        coeffs[k] = c;
        Poly::new(field, coeffs)
    }

    /// Monic polynomial with the given distinct roots, built by a product tree.
    pub fn from_roots(field: &Field, roots: &[Elem]) -> Result<Poly, PolyError> {
        let mut sorted = roots.to_vec();
        sorted.sort_unstable();
        if let Some(w) = sorted.windows(2).find(|w| w[0] == w[1]) {
            return Err(PolyError::DuplicateRoot(field.format(w[0])));
        }
        let mut layer: Vec<Poly> = roots
            .iter()
            .map(|&r| Poly::new(field, vec![field.neg(r), Elem::ONE]))
            .collect();
        if layer.is_empty() {
            return Ok(Poly::constant(field, Elem::ONE));
        }
        while layer.len() > 1 {
            layer = layer
                .chunks(2)
                .map(|pair| match pair {
                    [a, b] => a.mul(b),
                    [a] => a.clone(),
                    _ => unreachable!(),
                })
                .collect();
        }
        Ok(layer.pop().unwrap())
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn coeffs(&self) -> &[Elem] {
        &self.coeffs
    }

    /// Coefficient of `x^k` (zero past the degree).
    pub fn coeff(&self, k: usize) -> Elem {
        self.coeffs.get(k).copied().unwrap_or(Elem::ZERO)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Elem {
        self.coeffs.last().copied().unwrap_or(Elem::ZERO)
    }

    pub fn eval(&self, x: Elem) -> Elem {
        let f = &self.field;
        self.coeffs
            .iter()
            .rev()
            .fold(Elem::ZERO, |acc, &c| f.add(f.mul(acc, x), c))
    }

    pub fn derivative(&self) -> Poly {
        let f = &self.field;
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, &c)| f.mul(f.from_int(i as i64), c))
            .collect();
        Poly::new(f, coeffs)
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let f = &self.field;
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n).map(|i| f.add(self.coeff(i), other.coeff(i))).collect();
        Poly::new(f, coeffs)
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        self.add(&other.scale(self.field.neg(Elem::ONE)))
    }

    pub fn scale(&self, c: Elem) -> Poly {
        let f = &self.field;
        Poly::new(f, self.coeffs.iter().map(|&a| f.mul(a, c)).collect())
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        let f = &self.field;
        if self.is_zero() || other.is_zero() {
            return Poly::zero(f);
        }
        let mut out = vec![Elem::ZERO; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                out[i + j] = f.add(out[i + j], f.mul(a, b));
            }
        }
        Poly::new(f, out)
    }

    /// Token form, constant term first.
    pub fn tokens(&self) -> Vec<String> {
        self.coeffs.iter().map(|&c| self.field.format(c)).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn x_pow_n_minus(f: &Field, n: usize, c: Elem) -> Poly {
        Poly::monomial(f, Elem::ONE, n).sub(&Poly::constant(f, c))
    }

    #[test]
    fn single_zero_root_is_x() {
        let f = Field::prime(37).unwrap();
        let h = Poly::from_roots(&f, &[Elem::ZERO]).unwrap();
        assert_eq!(h, Poly::monomial(&f, Elem::ONE, 1));
    }

    #[test]
    fn roots_of_unity_give_binomial() {
        let f = Field::prime(37).unwrap();
        let u = f.mul_subgroup(12).unwrap();
        let h = Poly::from_roots(&f, &u).unwrap();
        assert_eq!(h, x_pow_n_minus(&f, 12, Elem::ONE));
        assert!(u.iter().all(|&a| h.eval(a).is_zero()));
        let d = h.derivative();
        assert_eq!(d, Poly::monomial(&f, f.from_int(12), 11));
    }

    #[test]
    fn union_of_cosets_and_zero() {
        let f = Field::prime(37).unwrap();
        let n: usize = 12;
        let u = f.mul_subgroup(n as u64).unwrap();
        let beta = f.w();
        let mut roots = u.clone();
        roots.extend(u.iter().map(|&a| f.mul(beta, a)));
        roots.push(Elem::ZERO);
        let h = Poly::from_roots(&f, &roots).unwrap();
        let bn = f.pow(beta, n as u64);
        let expected = Poly::monomial(&f, Elem::ONE, 1)
            .mul(&x_pow_n_minus(&f, n, Elem::ONE))
            .mul(&x_pow_n_minus(&f, n, bn));
        assert_eq!(h, expected);

        // h'(x) = ((n+1)x^n - 1)(x^n - b^n) + n x^n (x^n - 1)
        let d = h.derivative();
        for a in f.elements() {
            let xn = f.pow(a, n as u64);
            let t1 = f.mul(f.sub(f.mul(f.from_int(n as i64 + 1), xn), Elem::ONE), f.sub(xn, bn));
            let t2 = f.mul(f.mul(f.from_int(n as i64), xn), f.sub(xn, Elem::ONE));
            assert_eq!(d.eval(a), f.add(t1, t2));
        }
    }

    #[test]
    fn characteristic_kills_x_to_the_p() {
        let f = Field::new(3, 2).unwrap();
        assert!(Poly::monomial(&f, Elem::ONE, 3).derivative().is_zero());
        let g = Field::new(2, 4).unwrap();
        assert!(Poly::monomial(&g, Elem::ONE, 2).derivative().is_zero());
    }

    #[test]
    fn duplicate_roots_rejected() {
        let f = Field::prime(5).unwrap();
        assert!(matches!(
            Poly::from_roots(&f, &[Elem(1), Elem(2), Elem(1)]),
            Err(PolyError::DuplicateRoot(_))
        ));
    }

    #[test]
    fn eval_vanishes_exactly_on_roots() {
        let f = Field::new(2, 4).unwrap();
        let roots: Vec<Elem> = f.elements().filter(|a| a.0 % 3 == 1).collect();
        let h = Poly::from_roots(&f, &roots).unwrap();
        assert_eq!(h.degree(), Some(roots.len()));
        for a in f.elements() {
            assert_eq!(h.eval(a).is_zero(), roots.contains(&a));
        }
    }

    #[test]
    fn derivative_at_root_is_product_of_differences() {
        for q in [9u64, 16, 25, 37] {
            let f = Field::of_order(q).unwrap();
            let roots: Vec<Elem> = f.elements().step_by(2).collect();
            let d = Poly::from_roots(&f, &roots).unwrap().derivative();
            for &a in &roots {
                let prod = f.product(roots.iter().filter(|&&b| b != a).map(|&b| f.sub(a, b)));
                assert_eq!(d.eval(a), prod);
            }
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]
        #[test]
        fn leibniz_rule(
            a in proptest::collection::vec(0u32..25, 0..8),
            b in proptest::collection::vec(0u32..25, 0..8),
        ) {
            let f = Field::new(5, 2).unwrap();
            let pa = Poly::new(&f, a.into_iter().map(Elem).collect());
            let pb = Poly::new(&f, b.into_iter().map(Elem).collect());
            let lhs = pa.mul(&pb).derivative();
            let rhs = pa.derivative().mul(&pb).add(&pa.mul(&pb.derivative()));
            prop_assert_eq!(lhs, rhs);
            if !pa.is_zero() && !pb.is_zero() {
                prop_assert_eq!(pa.mul(&pb).degree().unwrap(), pa.degree().unwrap() + pb.degree().unwrap());
            }
        }
    }
}
