//! Exact arithmetic in GF(p^m).
//!
//! A [`Field`] is an immutable, cheaply clonable handle to the tables of one
//! finite field. Elements are plain [`Elem`] values: the integer encoding
//! `c_0 + c_1 p + ... + c_{m-1} p^{m-1}` of the coefficient vector of the
//! element in the basis `1, w, ..., w^{m-1}`, where `w` is the residue of the
//! indeterminate modulo the field's (primitive) modulus. Zero encodes as `0`
//! and one as `1`.
//!
//! The default modulus for `(p, m)` is the Conway polynomial, so the printed
//! `w^k` tokens agree with those produced by standard computer algebra
//! systems.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use thiserror::Error;

/// Largest field order accepted by [`Field::new`].
pub const MAX_FIELD_ORDER: u64 = 1 << 20;

/// Largest order for which a Conway modulus is derived on demand.
pub const MAX_CONWAY_ORDER: u64 = 1 << 16;

/// Fields up to this order carry full addition and multiplication tables.
const TABLE_LIMIT: u32 = 256;

const NO_LOG: u32 = u32::MAX;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GfError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("extension degree must be at least 1")]
    ZeroDegree,
    #[error("field order {p}^{m} exceeds the supported bound {MAX_FIELD_ORDER}")]
    TooLarge { p: u64, m: u32 },
    #[error("no canonical modulus for GF({p}^{m}); supply an explicit modulus")]
    NoCanonicalModulus { p: u32, m: u32 },
    #[error("modulus {0:?} is not a monic primitive polynomial")]
    NotPrimitive(Vec<u32>),
    #[error("operands belong to different fields")]
    MixedFields,
    #[error("division by zero")]
    DivisionByZero,
    #[error("{0} is not a square")]
    NonSquare(String),
    #[error("degree {target} does not divide the extension degree {m}")]
    NotASubfield { target: u32, m: u32 },
    #[error("{n} does not divide the multiplicative order {order}")]
    NotASubgroup { n: u64, order: u64 },
    #[error("cannot parse field element {0:?}")]
    Parse(String),
}

/// A field element, encoded relative to its [`Field`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Elem(pub u32);

impl Elem {
    pub const ZERO: Elem = Elem(0);
    pub const ONE: Elem = Elem(1);

    #[inline]
    pub fn is_zero(self) -> bool {
        self.0 == 0
    }

    #[inline]
    pub fn raw(self) -> u32 {
        self.0
    }
}

struct Inner {
    p: u32,
    m: u32,
    q: u32,
    /// Monic modulus, constant term first (length m + 1).
    modulus: Vec<u32>,
    /// exp[k] = w^k for k in 0..2(q-1).
    exp: Vec<u32>,
    /// log[a] for a != 0.
    log: Vec<u32>,
    /// Zech logarithms: zech[k] = log(1 + w^k), NO_LOG when 1 + w^k = 0.
    zech: Vec<u32>,
    add_table: Option<Vec<u16>>,
    mul_table: Option<Vec<u16>>,
    neg: Vec<u32>,
}

/// Handle to the tables of GF(p^m). Clones share the same tables.
#[derive(Clone)]
pub struct Field {
    inner: Arc<Inner>,
}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF({}^{})", self.inner.p, self.inner.m)
    }
}

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.inner, &other.inner)
            || (self.inner.p == other.inner.p && self.inner.modulus == other.inner.modulus)
    }
}

impl Eq for Field {}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Distinct prime factors in increasing order.
pub fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

fn checked_order(p: u64, m: u32) -> Result<u64, GfError> {
    if !is_prime(p) {
        return Err(GfError::NotPrime(p));
    }
    if m == 0 {
        return Err(GfError::ZeroDegree);
    }
    let mut q: u64 = 1;
    for _ in 0..m {
        q = q.saturating_mul(p);
        if q > MAX_FIELD_ORDER {
            return Err(GfError::TooLarge { p, m });
        }
    }
    Ok(q)
}

// ---------------------------------------------------------------------------
// Polynomials over GF(p) modulo a monic f, used only while choosing moduli.

struct PrimeQuotient<'a> {
    p: u64,
    f: &'a [u32],
}

impl PrimeQuotient<'_> {
    fn deg(&self) -> usize {
        self.f.len() - 1
    }

    fn mul(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        let m = self.deg();
        let mut prod = vec![0u64; 2 * m];
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                prod[i + j] = (prod[i + j] + x * y) % self.p;
            }
        }
        for top in (m..2 * m).rev() {
            let c = prod[top];
            if c == 0 {
                continue;
            }
            prod[top] = 0;
            for i in 0..m {
                let sub = c * self.f[i] as u64 % self.p;
                let slot = &mut prod[top - m + i];
                *slot = (*slot + self.p - sub) % self.p;
            }
        }
        prod.truncate(m);
        prod
    }

    fn pow_x(&self, mut e: u64) -> Vec<u64> {
        let m = self.deg();
        let mut result = vec![0u64; m];
        result[0] = 1;
        let mut base = vec![0u64; m];
        if m == 1 {
            base[0] = (self.p - self.f[0] as u64) % self.p;
        } else {
            base[1] = 1;
        }
        while e > 0 {
            if e & 1 == 1 {
                result = self.mul(&result, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        result
    }

    fn is_one(v: &[u64]) -> bool {
        v[0] == 1 && v[1..].iter().all(|&c| c == 0)
    }

    /// Evaluates the polynomial `g` (constant first) at `y` in the quotient ring.
    fn eval(&self, g: &[u32], y: &[u64]) -> Vec<u64> {
        let m = self.deg();
        let mut acc = vec![0u64; m];
        for &c in g.iter().rev() {
            acc = self.mul(&acc, y);
            acc[0] = (acc[0] + c as u64) % self.p;
        }
        acc
    }
}

fn is_primitive_modulus(p: u64, f: &[u32]) -> bool {
    let m = f.len() - 1;
    if f[m] != 1 || f[0] == 0 {
        return false;
    }
    let q = p.pow(m as u32);
    let ring = PrimeQuotient { p, f };
    if !PrimeQuotient::is_one(&ring.pow_x(q - 1)) {
        return false;
    }
    prime_factors(q - 1)
        .into_iter()
        .all(|r| !PrimeQuotient::is_one(&ring.pow_x((q - 1) / r)))
}

fn least_primitive_root(p: u64) -> u64 {
    if p == 2 {
        return 1;
    }
    let factors = prime_factors(p - 1);
    (2..p)
        .find(|&g| factors.iter().all(|&r| pow_mod(g, (p - 1) / r, p) != 1))
        .expect("every prime has a primitive root")
}

fn pow_mod(mut b: u64, mut e: u64, n: u64) -> u64 {
    let mut r = 1 % n;
    b %= n;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % n;
        }
        b = b * b % n;
        e >>= 1;
    }
    r
}

fn conway_cache() -> &'static Mutex<HashMap<(u32, u32), Vec<u32>>> {
    static CACHE: OnceLock<Mutex<HashMap<(u32, u32), Vec<u32>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(bundled_conway().into_iter().collect()))
}

/// Conway polynomials shipped with the crate (constant term first). Anything
/// else up to [`MAX_CONWAY_ORDER`] is derived by [`conway_polynomial`].
pub fn bundled_conway() -> Vec<((u32, u32), Vec<u32>)> {
    vec![
        ((2, 2), vec![1, 1, 1]),
        ((2, 3), vec![1, 1, 0, 1]),
        ((2, 4), vec![1, 1, 0, 0, 1]),
        ((2, 5), vec![1, 0, 1, 0, 0, 1]),
        ((2, 6), vec![1, 1, 0, 1, 1, 0, 1]),
        ((2, 8), vec![1, 0, 1, 1, 1, 0, 0, 0, 1]),
        ((3, 2), vec![2, 2, 1]),
        ((3, 3), vec![1, 2, 0, 1]),
        ((3, 4), vec![2, 0, 0, 2, 1]),
        ((5, 2), vec![2, 4, 1]),
        ((7, 2), vec![3, 6, 1]),
        ((11, 2), vec![2, 7, 1]),
        ((13, 2), vec![2, 12, 1]),
    ]
}

/// Returns the Conway polynomial for GF(p^m), constant term first.
///
/// Candidates are scanned in Conway order (coefficients of `x^{m-1}` down to
/// `x^0`, each with sign `(-1)^{m-i}`); the first primitive polynomial whose
/// root is norm-compatible with the Conway polynomials of every proper
/// subfield wins.
pub fn conway_polynomial(p: u32, m: u32) -> Result<Vec<u32>, GfError> {
    let q = checked_order(p as u64, m)?;
    if let Some(f) = conway_cache().lock().unwrap().get(&(p, m)) {
        return Ok(f.clone());
    }
    if m == 1 {
        let g = least_primitive_root(p as u64) as u32;
        let f = vec![(p - g) % p, 1];
        conway_cache().lock().unwrap().insert((p, m), f.clone());
        return Ok(f);
    }
    if q > MAX_CONWAY_ORDER {
        return Err(GfError::NoCanonicalModulus { p, m });
    }
    let subfields: Vec<(u32, Vec<u32>)> = (1..m)
        .filter(|d| m.is_multiple_of(*d))
        .map(|d| conway_polynomial(p, d).map(|f| (d, f)))
        .collect::<Result<_, _>>()?;
    let pm = p as u64;
    let mu = m as usize;
    let mut key = vec![0u32; mu];
    loop {
        // key[0] is the coefficient c_{m-1}, key[m-1] is c_0.
        let mut f = vec![0u32; mu + 1];
        f[mu] = 1;
        for (pos, &c) in key.iter().enumerate() {
            let i = mu - 1 - pos;
            let sign_neg = (mu - i) % 2 == 1;
            f[i] = if sign_neg { (p - c) % p } else { c };
        }
        if f[0] != 0 && is_primitive_modulus(pm, &f) {
            let ring = PrimeQuotient { p: pm, f: &f };
            let compatible = subfields.iter().all(|(d, g)| {
                let e = (q - 1) / (pm.pow(*d) - 1);
                let y = ring.pow_x(e);
                ring.eval(g, &y).iter().all(|&c| c == 0)
            });
            if compatible {
                conway_cache().lock().unwrap().insert((p, m), f.clone());
                return Ok(f);
            }
        }
        // advance the key odometer, last position fastest
        let mut pos = mu;
        loop {
            if pos == 0 {
                return Err(GfError::NoCanonicalModulus { p, m });
            }
            pos -= 1;
            key[pos] += 1;
            if key[pos] < p {
                break;
            }
            key[pos] = 0;
        }
    }
}

impl Field {
    /// GF(p^m) with its Conway modulus.
    pub fn new(p: u32, m: u32) -> Result<Field, GfError> {
        checked_order(p as u64, m)?;
        let modulus = conway_polynomial(p, m)?;
        Field::with_modulus(p, &modulus)
    }

    /// The prime field GF(p) with `w` its least primitive root.
    pub fn prime(p: u32) -> Result<Field, GfError> {
        Field::new(p, 1)
    }

    /// GF(p^m) for `q = p^m`.
    pub fn of_order(q: u64) -> Result<Field, GfError> {
        let factors = prime_factors(q);
        if factors.len() != 1 {
            return Err(GfError::NotPrime(q));
        }
        let p = factors[0];
        let mut m = 0;
        let mut r = q;
        while r > 1 {
            r /= p;
            m += 1;
        }
        Field::new(p as u32, m)
    }

    /// GF(p^m) with an explicit monic primitive modulus (constant term first).
    pub fn with_modulus(p: u32, modulus: &[u32]) -> Result<Field, GfError> {
        if modulus.len() < 2 {
            return Err(GfError::ZeroDegree);
        }
        let m = (modulus.len() - 1) as u32;
        let q = checked_order(p as u64, m)? as u32;
        if modulus.iter().any(|&c| c >= p) || !is_primitive_modulus(p as u64, modulus) {
            return Err(GfError::NotPrimitive(modulus.to_vec()));
        }
        Ok(Field {
            inner: Arc::new(build_tables(p, m, q, modulus.to_vec())),
        })
    }

    #[inline]
    pub fn characteristic(&self) -> u32 {
        self.inner.p
    }

    #[inline]
    pub fn degree(&self) -> u32 {
        self.inner.m
    }

    #[inline]
    pub fn order(&self) -> u32 {
        self.inner.q
    }

    pub fn modulus(&self) -> &[u32] {
        &self.inner.modulus
    }

    #[inline]
    pub fn zero(&self) -> Elem {
        Elem::ZERO
    }

    #[inline]
    pub fn one(&self) -> Elem {
        Elem::ONE
    }

    /// The designated primitive element.
    #[inline]
    pub fn w(&self) -> Elem {
        Elem(self.inner.exp[1])
    }

    #[inline]
    pub fn contains(&self, a: Elem) -> bool {
        a.0 < self.inner.q
    }

    /// `w^k`, with `k` taken modulo `q - 1`.
    #[inline]
    pub fn pow_w(&self, k: u64) -> Elem {
        Elem(self.inner.exp[(k % (self.inner.q as u64 - 1)) as usize])
    }

    /// Discrete logarithm to base `w`; `None` for zero.
    #[inline]
    pub fn log(&self, a: Elem) -> Option<u32> {
        if a.is_zero() {
            None
        } else {
            Some(self.inner.log[a.0 as usize])
        }
    }

    /// The image of an integer in the prime subfield.
    pub fn from_int(&self, v: i64) -> Elem {
        Elem(v.rem_euclid(self.inner.p as i64) as u32)
    }

    /// All elements in encoding order (`0, 1, ...`).
    pub fn elements(&self) -> impl Iterator<Item = Elem> + '_ {
        (0..self.inner.q).map(Elem)
    }

    /// Nonzero elements in increasing discrete-log order.
    pub fn nonzero_by_log(&self) -> impl Iterator<Item = Elem> + '_ {
        (0..self.inner.q - 1).map(move |k| Elem(self.inner.exp[k as usize]))
    }

    /// Zero followed by the nonzero elements in discrete-log order.
    pub fn elements_zero_first(&self) -> Vec<Elem> {
        std::iter::once(Elem::ZERO).chain(self.nonzero_by_log()).collect()
    }

    /// Ordering key: zero first, then by discrete log.
    #[inline]
    pub fn log_key(&self, a: Elem) -> u64 {
        match self.log(a) {
            None => 0,
            Some(k) => k as u64 + 1,
        }
    }

    #[inline]
    pub fn add(&self, a: Elem, b: Elem) -> Elem {
        let inner = &*self.inner;
        if inner.p == 2 {
            return Elem(a.0 ^ b.0);
        }
        if let Some(t) = &inner.add_table {
            return Elem(t[(a.0 * inner.q + b.0) as usize] as u32);
        }
        self.zech_add(a, b)
    }

    fn zech_add(&self, a: Elem, b: Elem) -> Elem {
        if a.is_zero() {
            return b;
        }
        if b.is_zero() {
            return a;
        }
        let inner = &*self.inner;
        let ord = inner.q - 1;
        let la = inner.log[a.0 as usize];
        let lb = inner.log[b.0 as usize];
        let d = (lb + ord - la) % ord;
        let z = inner.zech[d as usize];
        if z == NO_LOG {
            Elem::ZERO
        } else {
            Elem(inner.exp[(la + z) as usize])
        }
    }

    #[inline]
    pub fn neg(&self, a: Elem) -> Elem {
        Elem(self.inner.neg[a.0 as usize])
    }

    #[inline]
    pub fn sub(&self, a: Elem, b: Elem) -> Elem {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        let inner = &*self.inner;
        if let Some(t) = &inner.mul_table {
            return Elem(t[(a.0 * inner.q + b.0) as usize] as u32);
        }
        if a.is_zero() || b.is_zero() {
            return Elem::ZERO;
        }
        Elem(inner.exp[(inner.log[a.0 as usize] + inner.log[b.0 as usize]) as usize])
    }

    pub fn inv(&self, a: Elem) -> Result<Elem, GfError> {
        if a.is_zero() {
            return Err(GfError::DivisionByZero);
        }
        let inner = &*self.inner;
        let l = inner.log[a.0 as usize];
        Ok(Elem(inner.exp[((inner.q - 1 - l) % (inner.q - 1)) as usize]))
    }

    pub fn div(&self, a: Elem, b: Elem) -> Result<Elem, GfError> {
        Ok(self.mul(a, self.inv(b)?))
    }

    pub fn pow(&self, a: Elem, e: u64) -> Elem {
        if e == 0 {
            return Elem::ONE;
        }
        match self.log(a) {
            None => Elem::ZERO,
            Some(l) => self.pow_w(l as u64 * (e % (self.inner.q as u64 - 1))),
        }
    }

    /// Sum of a slice of elements.
    pub fn sum<I: IntoIterator<Item = Elem>>(&self, it: I) -> Elem {
        it.into_iter().fold(Elem::ZERO, |acc, x| self.add(acc, x))
    }

    /// Product of a slice of elements.
    pub fn product<I: IntoIterator<Item = Elem>>(&self, it: I) -> Elem {
        it.into_iter().fold(Elem::ONE, |acc, x| self.mul(acc, x))
    }

    /// Euclidean inner product of two equal-length vectors.
    pub fn dot(&self, a: &[Elem], b: &[Elem]) -> Elem {
        debug_assert_eq!(a.len(), b.len());
        a.iter()
            .zip(b)
            .fold(Elem::ZERO, |acc, (&x, &y)| self.add(acc, self.mul(x, y)))
    }

    /// Quadratic character: `0` for zero, `1` for nonzero squares, `-1` otherwise.
    pub fn quadratic_character(&self, a: Elem) -> i8 {
        match self.log(a) {
            None => 0,
            Some(_) if self.inner.p == 2 => 1,
            Some(l) if l % 2 == 0 => 1,
            Some(_) => -1,
        }
    }

    pub fn is_square(&self, a: Elem) -> bool {
        self.quadratic_character(a) >= 0
    }

    /// A square root of `a`; of the two roots, the one with smaller discrete log.
    pub fn sqrt(&self, a: Elem) -> Result<Elem, GfError> {
        let ord = self.inner.q as u64 - 1;
        match self.log(a) {
            None => Ok(Elem::ZERO),
            Some(l) if self.inner.p == 2 => {
                // squaring is a bijection; ord is odd so 2 is invertible mod ord
                let half = (l as u64 * ord.div_ceil(2)) % ord;
                Ok(self.pow_w(half))
            }
            Some(l) if l % 2 == 0 => Ok(self.pow_w(l as u64 / 2)),
            Some(_) => Err(GfError::NonSquare(self.format(a))),
        }
    }

    /// `a^(p^k)`.
    pub fn frobenius(&self, a: Elem, k: u32) -> Elem {
        self.pow(a, (self.inner.p as u64).pow(k % self.inner.m))
    }

    /// Relative trace from GF(p^m) down to GF(p^t): the sum of `a^(p^(t i))`
    /// over `i = 0 .. m/t - 1`.
    pub fn trace(&self, a: Elem, target_degree: u32) -> Result<Elem, GfError> {
        let m = self.inner.m;
        if target_degree == 0 || !m.is_multiple_of(target_degree) {
            return Err(GfError::NotASubfield {
                target: target_degree,
                m,
            });
        }
        let mut acc = Elem::ZERO;
        let mut term = a;
        for _ in 0..m / target_degree {
            acc = self.add(acc, term);
            term = self.frobenius(term, target_degree);
        }
        Ok(acc)
    }

    /// Absolute trace to the prime field.
    pub fn abs_trace(&self, a: Elem) -> Elem {
        self.trace(a, 1).expect("1 divides every degree")
    }

    /// True when `a` lies in the subfield GF(p^d).
    pub fn in_subfield(&self, a: Elem, d: u32) -> bool {
        self.frobenius(a, d) == a
    }

    /// The `n` n-th roots of unity, `w^((q-1)/n * i)` for `i = 0..n`.
    pub fn mul_subgroup(&self, n: u64) -> Result<Vec<Elem>, GfError> {
        let order = self.inner.q as u64 - 1;
        if n == 0 || !order.is_multiple_of(n) {
            return Err(GfError::NotASubgroup { n, order });
        }
        let step = order / n;
        Ok((0..n).map(|i| self.pow_w(step * i)).collect())
    }

    /// Coefficient vector (length m, constant first) of an element.
    pub fn coefficients(&self, a: Elem) -> Vec<u32> {
        let mut v = a.0;
        (0..self.inner.m)
            .map(|_| {
                let c = v % self.inner.p;
                v /= self.inner.p;
                c
            })
            .collect()
    }

    pub fn from_coefficients(&self, coeffs: &[u32]) -> Elem {
        let mut v = 0u32;
        for &c in coeffs.iter().rev() {
            v = v * self.inner.p + (c % self.inner.p);
        }
        Elem(v)
    }

    /// Token for an element: decimal for the prime subfield, `w` or `w^k` otherwise.
    pub fn format(&self, a: Elem) -> String {
        if a.0 < self.inner.p {
            return a.0.to_string();
        }
        match self.log(a) {
            Some(1) => "w".to_string(),
            Some(k) => format!("w^{k}"),
            None => "0".to_string(),
        }
    }

    /// Coefficient form, e.g. `2*w^3+w+1`.
    pub fn format_poly(&self, a: Elem) -> String {
        let coeffs = self.coefficients(a);
        let mut terms = Vec::new();
        for (i, &c) in coeffs.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            let t = match (i, c) {
                (0, c) => c.to_string(),
                (1, 1) => "w".to_string(),
                (1, c) => format!("{c}*w"),
                (i, 1) => format!("w^{i}"),
                (i, c) => format!("{c}*w^{i}"),
            };
            terms.push(t);
        }
        if terms.is_empty() {
            "0".to_string()
        } else {
            terms.join("+")
        }
    }

    /// Parses a token in either the power form (`0`, `3`, `w`, `w^17`) or
    /// the coefficient form (`2*w^3+w+1`).
    pub fn parse(&self, token: &str) -> Result<Elem, GfError> {
        let err = || GfError::Parse(token.to_string());
        let s: String = token.chars().filter(|c| !c.is_whitespace()).collect();
        if s.is_empty() {
            return Err(err());
        }
        let mut acc = Elem::ZERO;
        for term in s.split('+') {
            if term.is_empty() {
                return Err(err());
            }
            let (coef_part, power_part) = match term.find('w') {
                None => (term, None),
                Some(pos) => (&term[..pos], Some(&term[pos + 1..])),
            };
            let coef_part = coef_part.strip_suffix('*').unwrap_or(coef_part);
            let coef = if coef_part.is_empty() {
                Elem::ONE
            } else {
                let v: u64 = coef_part.parse().map_err(|_| err())?;
                Elem((v % self.inner.p as u64) as u32)
            };
            let value = match power_part {
                None => coef,
                Some(rest) => {
                    let k: u64 = if rest.is_empty() {
                        1
                    } else {
                        let digits = rest.strip_prefix('^').ok_or_else(err)?;
                        digits.parse().map_err(|_| err())?
                    };
                    self.mul(coef, self.pow_w(k))
                }
            };
            acc = self.add(acc, value);
        }
        Ok(acc)
    }

    /// Wraps an element together with its field.
    pub fn elem(&self, a: Elem) -> FieldElem {
        FieldElem {
            field: self.clone(),
            value: a,
        }
    }

    /// Addition table, when the field is small enough to carry one.
    pub(crate) fn add_table(&self) -> Option<&[u16]> {
        self.inner.add_table.as_deref()
    }
}

fn build_tables(p: u32, m: u32, q: u32, modulus: Vec<u32>) -> Inner {
    let ord = (q - 1) as usize;
    let mu = m as usize;
    let encode = |v: &[u32]| -> u32 { v.iter().rev().fold(0u32, |acc, &c| acc * p + c) };

    let mut exp = vec![0u32; 2 * ord.max(1)];
    let mut log = vec![NO_LOG; q as usize];
    let mut state = vec![0u32; mu];
    state[0] = 1;
    for k in 0..ord {
        let v = encode(&state);
        exp[k] = v;
        log[v as usize] = k as u32;
        // multiply by x modulo the modulus
        let top = state[mu - 1];
        for i in (1..mu).rev() {
            state[i] = state[i - 1];
        }
        state[0] = 0;
        for i in 0..mu {
            let sub = top * modulus[i] % p;
            state[i] = (state[i] + p - sub) % p;
        }
    }
    for k in ord..exp.len() {
        exp[k] = exp[k - ord];
    }

    let digit_add = |a: u32, b: u32| -> u32 {
        let (mut a, mut b) = (a, b);
        let mut out = 0u32;
        let mut scale = 1u32;
        for _ in 0..m {
            out += ((a % p + b % p) % p) * scale;
            a /= p;
            b /= p;
            scale *= p;
        }
        out
    };

    let neg: Vec<u32> = (0..q)
        .map(|a| {
            let mut v = a;
            let mut out = 0u32;
            let mut scale = 1u32;
            for _ in 0..m {
                out += ((p - v % p) % p) * scale;
                v /= p;
                scale *= p;
            }
            out
        })
        .collect();

    let zech: Vec<u32> = (0..ord)
        .map(|k| {
            let s = digit_add(exp[k], 1);
            if s == 0 {
                NO_LOG
            } else {
                log[s as usize]
            }
        })
        .collect();

    let (add_table, mul_table) = if q <= TABLE_LIMIT {
        let mut add = vec![0u16; (q * q) as usize];
        let mut mul = vec![0u16; (q * q) as usize];
        for a in 0..q {
            for b in 0..q {
                add[(a * q + b) as usize] = digit_add(a, b) as u16;
                mul[(a * q + b) as usize] = if a == 0 || b == 0 {
                    0
                } else {
                    exp[(log[a as usize] + log[b as usize]) as usize] as u16
                };
            }
        }
        (Some(add), Some(mul))
    } else {
        (None, None)
    };

    Inner {
        p,
        m,
        q,
        modulus,
        exp,
        log,
        zech,
        add_table,
        mul_table,
        neg,
    }
}

/// An element bundled with its field, for callers that want operator syntax
/// and mixed-field detection. Hot loops use [`Field`] methods on [`Elem`].
#[derive(Clone, PartialEq, Eq)]
pub struct FieldElem {
    field: Field,
    value: Elem,
}

impl fmt::Debug for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.field.format(self.value))
    }
}

impl fmt::Display for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.field.format(self.value))
    }
}

impl FieldElem {
    pub fn value(&self) -> Elem {
        self.value
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    fn same_field(&self, other: &FieldElem) -> Result<(), GfError> {
        if self.field == other.field {
            Ok(())
        } else {
            Err(GfError::MixedFields)
        }
    }

    pub fn try_add(&self, other: &FieldElem) -> Result<FieldElem, GfError> {
        self.same_field(other)?;
        Ok(self.field.elem(self.field.add(self.value, other.value)))
    }

    pub fn try_sub(&self, other: &FieldElem) -> Result<FieldElem, GfError> {
        self.same_field(other)?;
        Ok(self.field.elem(self.field.sub(self.value, other.value)))
    }

    pub fn try_mul(&self, other: &FieldElem) -> Result<FieldElem, GfError> {
        self.same_field(other)?;
        Ok(self.field.elem(self.field.mul(self.value, other.value)))
    }

    pub fn try_div(&self, other: &FieldElem) -> Result<FieldElem, GfError> {
        self.same_field(other)?;
        Ok(self.field.elem(self.field.div(self.value, other.value)?))
    }

    pub fn inv(&self) -> Result<FieldElem, GfError> {
        Ok(self.field.elem(self.field.inv(self.value)?))
    }

    pub fn pow(&self, e: u64) -> FieldElem {
        self.field.elem(self.field.pow(self.value, e))
    }

    pub fn neg(&self) -> FieldElem {
        self.field.elem(self.field.neg(self.value))
    }
}

macro_rules! field_elem_op {
    ($trait:ident, $method:ident, $checked:ident) => {
        impl std::ops::$trait for &FieldElem {
            type Output = FieldElem;
            fn $method(self, rhs: &FieldElem) -> FieldElem {
                self.$checked(rhs).expect("field element operation")
            }
        }
        impl std::ops::$trait for FieldElem {
            type Output = FieldElem;
            fn $method(self, rhs: FieldElem) -> FieldElem {
                (&self).$checked(&rhs).expect("field element operation")
            }
        }
    };
}

field_elem_op!(Add, add, try_add);
field_elem_op!(Sub, sub, try_sub);
field_elem_op!(Mul, mul, try_mul);
field_elem_op!(Div, div, try_div);

/// Nontrivial solutions of `a^2 + b^2 = 1`, i.e. excluding `(0, ±1)` and
/// `(±1, 0)`, ordered by `(a, b)` with zero first and then increasing log.
pub fn circle_solutions(field: &Field) -> Vec<(Elem, Elem)> {
    let one = field.one();
    let minus_one = field.neg(one);
    let trivial = |a: Elem, b: Elem| {
        (a.is_zero() && (b == one || b == minus_one)) || (b.is_zero() && (a == one || a == minus_one))
    };
    let order = field.elements_zero_first();
    let mut out = Vec::new();
    for &a in &order {
        let a2 = field.mul(a, a);
        for &b in &order {
            if field.add(a2, field.mul(b, b)) == one && !trivial(a, b) {
                out.push((a, b));
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute_order(f: &Field, a: Elem) -> u32 {
        let mut x = a;
        let mut k = 1;
        while x != f.one() {
            x = f.mul(x, a);
            k += 1;
        }
        k
    }

    #[test]
    fn gf9_modulus_and_primitive_order() {
        let f = Field::new(3, 2).unwrap();
        assert_eq!(f.modulus(), &[2, 2, 1]);
        assert_eq!(brute_order(&f, f.w()), 8);
        // w is a root of x^2 + 2x + 2
        let w = f.w();
        let v = f.add(f.add(f.mul(w, w), f.mul(f.from_int(2), w)), f.from_int(2));
        assert!(v.is_zero());
    }

    #[test]
    fn gf37_uses_least_primitive_root() {
        let f = Field::new(37, 1).unwrap();
        assert_eq!(f.w(), Elem(2));
        assert_eq!(brute_order(&f, f.w()), 36);
        for g in 2..37u32 {
            let o = brute_order(&f, Elem(g));
            if o == 36 {
                assert_eq!(g, 2);
                break;
            }
        }
    }

    #[test]
    fn gf16_primitive_order() {
        let f = Field::new(2, 4).unwrap();
        assert_eq!(brute_order(&f, f.w()), 15);
    }

    #[test]
    fn basic_identities() {
        let f9 = Field::new(3, 2).unwrap();
        assert_eq!(f9.mul(f9.w(), f9.pow_w(7)), f9.one());
        let f37 = Field::prime(37).unwrap();
        assert!(f37.add(Elem(36), Elem(1)).is_zero());
        let f16 = Field::new(2, 4).unwrap();
        assert!(f16.add(f16.pow_w(5), f16.pow_w(5)).is_zero());
    }

    #[test]
    fn errors() {
        assert_eq!(Field::new(4, 1).unwrap_err(), GfError::NotPrime(4));
        assert!(matches!(Field::new(2, 21), Err(GfError::TooLarge { .. })));
        assert!(matches!(Field::new(2, 17), Err(GfError::NoCanonicalModulus { .. })));
        let f = Field::new(5, 1).unwrap();
        assert_eq!(f.inv(Elem::ZERO), Err(GfError::DivisionByZero));
        let g = Field::new(7, 1).unwrap();
        assert_eq!(f.elem(Elem(1)).try_add(&g.elem(Elem(1))), Err(GfError::MixedFields));
        assert!(Field::with_modulus(3, &[1, 0, 1]).is_err()); // x^2+1: order 4 only
    }

    #[test]
    fn quadratic_character_examples() {
        let f37 = Field::prime(37).unwrap();
        assert_eq!(f37.quadratic_character(Elem(36)), 1);
        assert_eq!(f37.quadratic_character(Elem(0)), 0);
        let f9 = Field::new(3, 2).unwrap();
        assert_eq!(f9.quadratic_character(f9.w()), -1);
        let f16 = Field::new(2, 4).unwrap();
        assert!(f16.nonzero_by_log().all(|a| f16.quadratic_character(a) == 1));
    }

    #[test]
    fn square_root_examples() {
        let f9 = Field::new(3, 2).unwrap();
        assert_eq!(f9.sqrt(f9.pow_w(2)).unwrap(), f9.w());
        let f16 = Field::new(2, 4).unwrap();
        assert_eq!(f16.sqrt(f16.pow_w(3)).unwrap(), f16.pow_w(9));
        let f37 = Field::prime(37).unwrap();
        let brute: Vec<u32> = (0..37).filter(|&b| b * b % 37 == 36).collect();
        assert_eq!(brute, vec![6, 31]);
        // 31 = w^9 and 6 = w^27; the smaller discrete log wins
        assert_eq!(f37.log(Elem(31)), Some(9));
        assert_eq!(f37.sqrt(Elem(36)).unwrap(), Elem(31));
        assert!(matches!(f37.sqrt(f37.w()), Err(GfError::NonSquare(_))));
    }

    #[test]
    fn trace_examples() {
        let f16 = Field::new(2, 4).unwrap();
        assert!(f16.abs_trace(Elem::ZERO).is_zero());
        for a in f16.elements().filter(|&a| f16.in_subfield(a, 2)) {
            let v = f16.add(a, f16.pow(a, 3));
            assert!(f16.abs_trace(v).is_zero());
        }
        let f9 = Field::new(3, 2).unwrap();
        for a in f9.elements() {
            let brute = f9.add(a, f9.pow(a, 3));
            assert_eq!(f9.abs_trace(a), brute);
        }
        // w^4 = -1 = 2, so its trace is 2 + 2 = 1
        assert_eq!(f9.abs_trace(f9.pow_w(4)), Elem(1));
        assert!(matches!(f16.trace(Elem(1), 3), Err(GfError::NotASubfield { .. })));
    }

    #[test]
    fn subgroups() {
        let f37 = Field::prime(37).unwrap();
        let u12 = f37.mul_subgroup(12).unwrap();
        let brute: Vec<Elem> = f37.nonzero_by_log().filter(|&a| f37.pow(a, 12) == f37.one()).collect();
        assert_eq!(u12.len(), 12);
        assert_eq!(u12, brute);
        assert_eq!(f37.mul_subgroup(1).unwrap(), vec![f37.one()]);
        let f81 = Field::new(3, 4).unwrap();
        let u8 = f81.mul_subgroup(8).unwrap();
        assert_eq!(u8.len(), 8);
        assert!(u8.iter().all(|&a| f81.pow(a, 8) == f81.one()));
        assert!(f37.mul_subgroup(5).is_err());
    }

    #[test]
    fn tokens_round_trip() {
        for f in [
            Field::new(3, 2).unwrap(),
            Field::new(2, 4).unwrap(),
            Field::prime(41).unwrap(),
            Field::new(3, 4).unwrap(),
        ] {
            for a in f.elements() {
                assert_eq!(f.parse(&f.format(a)).unwrap(), a);
                assert_eq!(f.parse(&f.format_poly(a)).unwrap(), a);
            }
        }
        let f9 = Field::new(3, 2).unwrap();
        assert_eq!(f9.format(f9.pow_w(4)), "2");
        assert_eq!(f9.format(f9.w()), "w");
        assert_eq!(f9.parse("w^9").unwrap(), f9.w());
        assert!(f9.parse("x^2").is_err());
        assert!(f9.parse("").is_err());
    }

    #[test]
    fn conway_derivation_matches_bundled_table() {
        for ((p, m), expected) in bundled_conway() {
            // bypass the cache by searching from scratch
            let derived = derive_uncached(p, m);
            assert_eq!(derived, expected, "GF({p}^{m})");
        }
    }

    fn derive_uncached(p: u32, m: u32) -> Vec<u32> {
        let q = (p as u64).pow(m);
        let pm = p as u64;
        let mu = m as usize;
        let subs: Vec<(u32, Vec<u32>)> = (1..m)
            .filter(|d| m.is_multiple_of(*d))
            .map(|d| (d, conway_polynomial(p, d).unwrap()))
            .collect();
        let total = pm.pow(m);
        for idx in 0..total {
            let mut key = vec![0u32; mu];
            let mut v = idx;
            for pos in (0..mu).rev() {
                key[pos] = (v % pm) as u32;
                v /= pm;
            }
            let mut f = vec![0u32; mu + 1];
            f[mu] = 1;
            for (pos, &c) in key.iter().enumerate() {
                let i = mu - 1 - pos;
                f[i] = if (mu - i) % 2 == 1 { (p - c) % p } else { c };
            }
            if f[0] == 0 || !is_primitive_modulus(pm, &f) {
                continue;
            }
            let ring = PrimeQuotient { p: pm, f: &f };
            if subs.iter().all(|(d, g)| {
                let y = ring.pow_x((q - 1) / (pm.pow(*d) - 1));
                ring.eval(g, &y).iter().all(|&c| c == 0)
            }) {
                return f;
            }
        }
        panic!("no Conway polynomial found");
    }

    #[test]
    fn larger_fields_build() {
        let f = Field::new(2, 16).unwrap();
        assert_eq!(f.order(), 65536);
        let g = Field::new(251, 2).unwrap();
        let a = g.pow_w(12345);
        assert_eq!(g.mul(a, g.inv(a).unwrap()), g.one());
        let b = g.pow_w(777);
        assert_eq!(g.sub(g.add(a, b), b), a);
    }

    #[test]
    fn circle_solution_counts() {
        for (q, expected) in [(5u64, 0usize), (13, 8), (37, 32)] {
            let f = Field::of_order(q).unwrap();
            assert_eq!(circle_solutions(&f).len(), expected, "q={q}");
        }
    }
}
