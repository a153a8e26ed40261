//! Exact arithmetic in GF(p^h).
//!
//! Elements are stored as their base-p index in `[0, q)`: the coefficient
//! vector `(c_0, .., c_{h-1})` of the polynomial representative maps to
//! `c_0 + c_1 p + .. + c_{h-1} p^{h-1}`. Multiplication reduces modulo a
//! monic irreducible polynomial of degree `h`.
//!
//! For `q <= 4096` the full addition and multiplication tables are built at
//! construction, above that products are reduced on the fly. Inverses are
//! always tabulated.

use std::fmt;

use thiserror::Error;

/// Largest supported field order.
pub const MAX_ORDER: u64 = 1 << 31;

/// Orders up to this size get dense q×q lookup tables.
const TABLE_LIMIT: u32 = 4096;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GfError {
    #[error("{0} is not prime")]
    NotPrime(u32),
    #[error("extension degree must be at least 1")]
    DegreeZero,
    #[error("field order p^h exceeds 2^31")]
    OrderOverflow,
    #[error("zero has no multiplicative inverse")]
    ZeroInverse,
    #[error("modulus is not a monic irreducible polynomial of degree {0}")]
    ReducibleModulus(u32),
    #[error("element index {0} is out of range for GF({1})")]
    OutOfRange(u64, u32),
    #[error("{0} is not a prime power")]
    NotPrimePower(u64),
}

/// An element of a [`Field`], identified by its base-p index.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct FieldElement(u32);

impl FieldElement {
    pub const ZERO: FieldElement = FieldElement(0);
    pub const ONE: FieldElement = FieldElement(1);

    #[inline]
    pub(crate) const fn from_raw(index: u32) -> Self {
        FieldElement(index)
    }

    #[inline]
    pub fn index(self) -> u32 {
        self.0
    }

    #[inline]
    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// The finite field GF(p^h).
#[derive(Clone)]
pub struct Field {
    p: u32,
    h: u32,
    q: u32,
    /// Monic modulus, `h + 1` coefficients, constant term first.
    modulus: Vec<u32>,
    add_table: Option<Vec<u16>>,
    mul_table: Option<Vec<u16>>,
    inv_table: Vec<u32>,
    neg_table: Vec<u32>,
}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Field")
            .field("p", &self.p)
            .field("h", &self.h)
            .field("q", &self.q)
            .field("modulus", &self.modulus)
            .finish()
    }
}

/// Deterministic trial-division primality test.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n.is_multiple_of(2) {
        return n == 2;
    }
    let mut d = 3u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

/// Splits `q` into `(p, h)` with `q = p^h`, if `q` is a prime power.
pub fn factor_prime_power(q: u64) -> Option<(u32, u32)> {
    if q < 2 {
        return None;
    }
    let mut p = 2u64;
    while p * p <= q && !q.is_multiple_of(p) {
        p += 1;
    }
    if !q.is_multiple_of(p) {
        // q itself is prime
        p = q;
    }
    let mut rest = q;
    let mut h = 0u32;
    while rest.is_multiple_of(p) {
        rest /= p;
        h += 1;
    }
    (rest == 1 && p <= u32::MAX as u64).then_some((p as u32, h))
}

fn checked_order(p: u32, h: u32) -> Result<u32, GfError> {
    let mut q: u64 = 1;
    for _ in 0..h {
        q *= p as u64;
        if q > MAX_ORDER {
            return Err(GfError::OrderOverflow);
        }
    }
    Ok(q as u32)
}

impl Field {
    /// Builds GF(p^h) over the lexicographically least monic irreducible
    /// polynomial of degree `h` (coefficients compared from degree h-1 down).
    pub fn new(p: u32, h: u32) -> Result<Self, GfError> {
        if !is_prime(p as u64) {
            return Err(GfError::NotPrime(p));
        }
        if h == 0 {
            return Err(GfError::DegreeZero);
        }
        let q = checked_order(p, h)?;
        // Ordering (c_{h-1}, .., c_0) lexicographically is the numeric order
        // of the base-p index of the lower coefficients.
        let modulus = (0..q)
            .map(|low| {
                let mut coeffs = poly::digits(low, p, h as usize);
                coeffs.push(1);
                coeffs
            })
            .find(|m| h == 1 || poly::is_irreducible(m, p))
            .expect("an irreducible polynomial exists for every degree");
        Ok(Self::build(p, h, q, modulus))
    }

    /// Builds GF(p^h) over a caller-supplied modulus (`h + 1` coefficients,
    /// constant term first). Any monic irreducible modulus is accepted.
    pub fn with_modulus(p: u32, h: u32, modulus: &[u32]) -> Result<Self, GfError> {
        if !is_prime(p as u64) {
            return Err(GfError::NotPrime(p));
        }
        if h == 0 {
            return Err(GfError::DegreeZero);
        }
        let q = checked_order(p, h)?;
        let monic = modulus.len() == h as usize + 1 && modulus[h as usize] == 1;
        if !monic || modulus.iter().any(|&c| c >= p) || !poly::is_irreducible(modulus, p) {
            return Err(GfError::ReducibleModulus(h));
        }
        Ok(Self::build(p, h, q, modulus.to_vec()))
    }

    /// Builds GF(q) for a prime power `q`.
    pub fn from_order(q: u64) -> Result<Self, GfError> {
        if q > MAX_ORDER {
            return Err(GfError::OrderOverflow);
        }
        let (p, h) = factor_prime_power(q).ok_or(GfError::NotPrimePower(q))?;
        Self::new(p, h)
    }

    fn build(p: u32, h: u32, q: u32, modulus: Vec<u32>) -> Self {
        let mut field = Field {
            p,
            h,
            q,
            modulus,
            add_table: None,
            mul_table: None,
            inv_table: Vec::new(),
            neg_table: Vec::new(),
        };
        if h == 1 {
            field.inv_table = (0..q)
                .map(|a| if a == 0 { 0 } else { mod_inverse(a, p) })
                .collect();
        } else {
            // Powers of a primitive element give log and antilog tables.
            let n = q as usize;
            let g = field.primitive_element_slow();
            let mut exp = vec![0u32; n - 1];
            let mut log = vec![0u32; n];
            let mut x = 1;
            for (i, e) in exp.iter_mut().enumerate() {
                *e = x;
                log[x as usize] = i as u32;
                x = field.mul_slow(x, g);
            }
            field.inv_table = (0..n)
                .map(|a| match a {
                    0 => 0,
                    _ => exp[(n - 1 - log[a] as usize) % (n - 1)],
                })
                .collect();
            if q <= TABLE_LIMIT {
                let mut add = vec![0u16; n * n];
                let mut mul = vec![0u16; n * n];
                for a in 0..n {
                    for b in 0..n {
                        add[a * n + b] = add_digits(a as u32, b as u32, p, h) as u16;
                        if a != 0 && b != 0 {
                            mul[a * n + b] = exp[(log[a] + log[b]) as usize % (n - 1)] as u16;
                        }
                    }
                }
                field.add_table = Some(add);
                field.mul_table = Some(mul);
            }
        }
        field.neg_table = (0..q).map(|a| field.neg_slow(a)).collect();
        field
    }

    #[inline]
    pub fn p(&self) -> u32 {
        self.p
    }

    #[inline]
    pub fn h(&self) -> u32 {
        self.h
    }

    #[inline]
    pub fn order(&self) -> u32 {
        self.q
    }

    /// Modulus coefficients, constant term first, `h + 1` entries.
    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    pub fn element(&self, index: u64) -> Result<FieldElement, GfError> {
        if index < self.q as u64 {
            Ok(FieldElement(index as u32))
        } else {
            Err(GfError::OutOfRange(index, self.q))
        }
    }

    pub fn from_coeffs(&self, coeffs: &[u32]) -> Result<FieldElement, GfError> {
        if coeffs.len() > self.h as usize || coeffs.iter().any(|&c| c >= self.p) {
            return Err(GfError::OutOfRange(poly::index(coeffs, self.p), self.q));
        }
        Ok(FieldElement(poly::index(coeffs, self.p) as u32))
    }

    /// The `h` base-p coefficients of `a`, constant term first.
    pub fn coeffs(&self, a: FieldElement) -> Vec<u32> {
        poly::digits(a.0, self.p, self.h as usize)
    }

    pub fn elements(&self) -> impl Iterator<Item = FieldElement> {
        (0..self.q).map(FieldElement)
    }

    #[inline]
    pub fn add(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        if self.h == 1 {
            let s = a.0 as u64 + b.0 as u64;
            let p = self.p as u64;
            return FieldElement(if s >= p { s - p } else { s } as u32);
        }
        if self.p == 2 {
            return FieldElement(a.0 ^ b.0);
        }
        match &self.add_table {
            Some(t) => FieldElement(t[a.0 as usize * self.q as usize + b.0 as usize] as u32),
            None => FieldElement(self.add_slow(a.0, b.0)),
        }
    }

    #[inline]
    pub fn neg(&self, a: FieldElement) -> FieldElement {
        FieldElement(self.neg_table[a.0 as usize])
    }

    #[inline]
    pub fn sub(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        if self.h == 1 {
            return FieldElement((a.0 as u64 * b.0 as u64 % self.p as u64) as u32);
        }
        match &self.mul_table {
            Some(t) => FieldElement(t[a.0 as usize * self.q as usize + b.0 as usize] as u32),
            None => FieldElement(self.mul_slow(a.0, b.0)),
        }
    }

    pub fn inv(&self, a: FieldElement) -> Result<FieldElement, GfError> {
        if a.0 == 0 {
            return Err(GfError::ZeroInverse);
        }
        Ok(FieldElement(self.inv_table[a.0 as usize]))
    }

    /// Inverse without the zero check; zero maps to zero.
    #[inline]
    pub(crate) fn inv_or_zero(&self, a: FieldElement) -> FieldElement {
        FieldElement(self.inv_table[a.0 as usize])
    }

    pub fn pow(&self, a: FieldElement, mut e: u64) -> FieldElement {
        let mut base = a;
        let mut acc = FieldElement::ONE;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    fn add_slow(&self, a: u32, b: u32) -> u32 {
        let x = poly::digits(a, self.p, self.h as usize);
        let y = poly::digits(b, self.p, self.h as usize);
        let s: Vec<u32> = x.iter().zip(&y).map(|(u, v)| (u + v) % self.p).collect();
        poly::index(&s, self.p) as u32
    }

    fn neg_slow(&self, a: u32) -> u32 {
        let coeffs: Vec<u32> = poly::digits(a, self.p, self.h as usize)
            .into_iter()
            .map(|c| (self.p - c) % self.p)
            .collect();
        poly::index(&coeffs, self.p) as u32
    }

    fn mul_slow(&self, a: u32, b: u32) -> u32 {
        if self.h == 1 {
            return (a as u64 * b as u64 % self.p as u64) as u32;
        }
        let x = poly::digits(a, self.p, self.h as usize);
        let y = poly::digits(b, self.p, self.h as usize);
        let prod = poly::mul(&x, &y, self.p);
        let r = poly::rem(&prod, &self.modulus, self.p);
        poly::index(&r, self.p) as u32
    }

    /// Least index generating the multiplicative group, using only the
    /// polynomial product.
    fn primitive_element_slow(&self) -> u32 {
        let order = self.q as u64 - 1;
        let mut primes = Vec::new();
        let mut rest = order;
        let mut d = 2;
        while d * d <= rest {
            if rest.is_multiple_of(d) {
                primes.push(d);
                while rest.is_multiple_of(d) {
                    rest /= d;
                }
            }
            d += 1;
        }
        if rest > 1 {
            primes.push(rest);
        }
        (1..self.q)
            .find(|&g| primes.iter().all(|&r| self.pow_slow(g, order / r) != 1))
            .expect("the multiplicative group is cyclic")
    }

    fn pow_slow(&self, a: u32, mut e: u64) -> u32 {
        let (mut base, mut acc) = (a, 1);
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul_slow(acc, base);
            }
            base = self.mul_slow(base, base);
            e >>= 1;
        }
        acc
    }
}

/// Coefficient-wise sum of two base-p element indices.
fn add_digits(mut a: u32, mut b: u32, p: u32, h: u32) -> u32 {
    if p == 2 {
        return a ^ b;
    }
    let (mut sum, mut place) = (0, 1);
    for _ in 0..h {
        sum += (a % p + b % p) % p * place;
        a /= p;
        b /= p;
        place *= p;
    }
    sum
}

fn mod_inverse(a: u32, p: u32) -> u32 {
    let (mut r0, mut r1) = (p as i64, a as i64);
    let (mut t0, mut t1) = (0i64, 1i64);
    while r1 != 0 {
        let k = r0 / r1;
        (r0, r1) = (r1, r0 - k * r1);
        (t0, t1) = (t1, t0 - k * t1);
    }
    t0.rem_euclid(p as i64) as u32
}

/// Dense polynomials over GF(p), little-endian coefficient vectors.
pub(crate) mod poly {
    pub fn digits(mut n: u32, p: u32, len: usize) -> Vec<u32> {
        let mut out = Vec::with_capacity(len + 1);
        for _ in 0..len {
            out.push(n % p);
            n /= p;
        }
        out
    }

    pub fn index(coeffs: &[u32], p: u32) -> u64 {
        coeffs
            .iter()
            .rev()
            .fold(0u64, |acc, &c| acc * p as u64 + c as u64)
    }

    pub fn degree(a: &[u32]) -> Option<usize> {
        a.iter().rposition(|&c| c != 0)
    }

    pub fn mul(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
        let mut out = vec![0u64; a.len() + b.len()];
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                out[i + j] = (out[i + j] + x as u64 * y as u64) % p as u64;
            }
        }
        out.into_iter().map(|c| c as u32).collect()
    }

    /// Remainder of `a` modulo the monic-or-not nonzero polynomial `m`.
    pub fn rem(a: &[u32], m: &[u32], p: u32) -> Vec<u32> {
        let dm = degree(m).expect("division by the zero polynomial");
        let lead_inv = super::mod_inverse(m[dm], p) as u64;
        let mut r: Vec<u64> = a.iter().map(|&c| c as u64).collect();
        let pp = p as u64;
        for i in (dm..r.len()).rev() {
            let c = r[i] % pp;
            if c == 0 {
                continue;
            }
            let f = c * lead_inv % pp;
            for (j, &mc) in m[..=dm].iter().enumerate() {
                let k = i - dm + j;
                r[k] = (r[k] + pp * pp - f * mc as u64 % pp) % pp;
            }
        }
        r.truncate(dm);
        r.resize(dm, 0);
        r.into_iter().map(|c| c as u32).collect()
    }

    /// Irreducibility over GF(p): no monic factor of degree `1..=deg/2`.
    pub fn is_irreducible(m: &[u32], p: u32) -> bool {
        let Some(d) = degree(m) else { return false };
        if d == 0 {
            return false;
        }
        if d == 1 {
            return true;
        }
        // Roots first: cheap and catches most reducible candidates.
        if (0..p).any(|x| eval(m, x, p) == 0) {
            return false;
        }
        for fd in 2..=d / 2 {
            let count = (p as u64).pow(fd as u32);
            for low in 0..count {
                let mut f = digits(low as u32, p, fd);
                f.push(1);
                if rem(m, &f, p).iter().all(|&c| c == 0) {
                    return false;
                }
            }
        }
        true
    }

    pub fn eval(m: &[u32], x: u32, p: u32) -> u32 {
        m.iter()
            .rev()
            .fold(0u64, |acc, &c| (acc * x as u64 + c as u64) % p as u64) as u32
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e(f: &Field, i: u64) -> FieldElement {
        f.element(i).unwrap()
    }

    #[test]
    fn prime_field_uses_formal_x() {
        let f = Field::new(7, 1).unwrap();
        assert_eq!(f.order(), 7);
        assert_eq!(f.modulus(), &[0, 1]);
    }

    #[test]
    fn gf4_modulus_is_x2_x_1() {
        let f = Field::new(2, 2).unwrap();
        assert_eq!(f.modulus(), &[1, 1, 1]);
    }

    /// Brute force over the 9 monic quadratics of GF(3), least one without roots.
    #[test]
    fn gf9_modulus_matches_brute_force() {
        let mut least = None;
        'outer: for c1 in 0..3u32 {
            for c0 in 0..3u32 {
                let has_root = (0..3u32).any(|x| (x * x + c1 * x + c0) % 3 == 0);
                if !has_root {
                    least = Some(vec![c0, c1, 1]);
                    break 'outer;
                }
            }
        }
        let f = Field::new(3, 2).unwrap();
        assert_eq!(Some(f.modulus().to_vec()), least);
        assert_eq!(f.modulus(), &[1, 0, 1]);
    }

    #[test]
    fn construction_errors() {
        assert_eq!(Field::new(6, 1).unwrap_err(), GfError::NotPrime(6));
        assert_eq!(Field::new(1, 1).unwrap_err(), GfError::NotPrime(1));
        assert_eq!(Field::new(5, 0).unwrap_err(), GfError::DegreeZero);
        assert_eq!(Field::new(2, 32).unwrap_err(), GfError::OrderOverflow);
        assert_eq!(Field::new(3, 20).unwrap_err(), GfError::OrderOverflow);
    }

    #[test]
    fn add_examples() {
        let f7 = Field::new(7, 1).unwrap();
        assert_eq!(f7.add(e(&f7, 3), e(&f7, 5)), e(&f7, 1));
        let f2 = Field::new(2, 1).unwrap();
        assert_eq!(f2.add(e(&f2, 1), e(&f2, 1)), e(&f2, 0));
        // GF(4): x + (x+1) = 1
        let f4 = Field::new(2, 2).unwrap();
        let x = f4.from_coeffs(&[0, 1]).unwrap();
        let x1 = f4.from_coeffs(&[1, 1]).unwrap();
        assert_eq!(f4.add(x, x1), FieldElement::ONE);
    }

    #[test]
    fn mul_examples() {
        let f7 = Field::new(7, 1).unwrap();
        assert_eq!(f7.mul(e(&f7, 3), e(&f7, 5)), e(&f7, 1));
        let f4 = Field::new(2, 2).unwrap();
        let x = f4.from_coeffs(&[0, 1]).unwrap();
        // x^2 mod (x^2+x+1) by long division: x^2 - (x^2+x+1) = -x-1 = x+1
        let oracle = poly::rem(&[0, 0, 1], &[1, 1, 1], 2);
        assert_eq!(oracle, vec![1, 1]);
        assert_eq!(f4.mul(x, x), f4.from_coeffs(&oracle).unwrap());
        for q in [8u64, 9, 25, 27] {
            let f = Field::from_order(q).unwrap();
            for a in f.elements() {
                assert_eq!(f.mul(a, FieldElement::ONE), a);
            }
        }
    }

    #[test]
    fn inverse_examples() {
        let f2 = Field::new(2, 1).unwrap();
        assert_eq!(f2.inv(FieldElement::ONE).unwrap(), FieldElement::ONE);
        let f7 = Field::new(7, 1).unwrap();
        assert_eq!(f7.inv(e(&f7, 3)).unwrap(), e(&f7, 5));
        assert_eq!(f7.inv(FieldElement::ZERO), Err(GfError::ZeroInverse));
        let f9 = Field::new(3, 2).unwrap();
        for a in f9.elements().skip(1) {
            assert_eq!(f9.mul(a, f9.inv(a).unwrap()), FieldElement::ONE);
        }
    }

    #[test]
    fn negation_examples() {
        let f7 = Field::new(7, 1).unwrap();
        assert_eq!(f7.neg(e(&f7, 3)), e(&f7, 4));
        let f16 = Field::new(2, 4).unwrap();
        for a in f16.elements() {
            assert_eq!(f16.neg(a), a);
        }
        let f9 = Field::new(3, 2).unwrap();
        for a in f9.elements() {
            assert_eq!(f9.add(a, f9.neg(a)), FieldElement::ZERO);
        }
    }

    const SMALL_ORDERS: [u64; 19] = [
        2, 3, 4, 5, 7, 8, 9, 11, 13, 16, 25, 27, 32, 49, 64, 81, 121, 125, 128,
    ];

    #[test]
    fn field_axioms_exhaustive_up_to_128() {
        for q in SMALL_ORDERS {
            let f = Field::from_order(q).unwrap();
            let els: Vec<_> = f.elements().collect();
            for &a in &els {
                assert_eq!(f.add(a, FieldElement::ZERO), a);
                assert_eq!(f.mul(a, FieldElement::ONE), a);
                assert_eq!(f.add(a, f.neg(a)), FieldElement::ZERO);
                if !a.is_zero() {
                    assert_eq!(f.mul(a, f.inv(a).unwrap()), FieldElement::ONE);
                }
                for &b in &els {
                    assert_eq!(f.add(a, b), f.add(b, a));
                    assert_eq!(f.mul(a, b), f.mul(b, a));
                    for &c in &els {
                        assert_eq!(f.add(f.add(a, b), c), f.add(a, f.add(b, c)));
                        assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
                        assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
                    }
                }
            }
        }
    }

    #[test]
    fn multiplicative_group_order() {
        for q in SMALL_ORDERS {
            let f = Field::from_order(q).unwrap();
            for a in f.elements().skip(1) {
                assert_eq!(f.pow(a, q - 1), FieldElement::ONE, "q={q} a={a}");
            }
        }
    }

    #[test]
    fn index_encoding_round_trips() {
        for q in [9u64, 27, 64, 125] {
            let f = Field::from_order(q).unwrap();
            for a in f.elements() {
                assert_eq!(f.from_coeffs(&f.coeffs(a)).unwrap(), a);
            }
        }
    }

    #[test]
    fn moduli_have_no_small_factors() {
        for q in SMALL_ORDERS
            .iter()
            .copied()
            .chain([243, 343, 729, 1024, 2187, 4096, 8192])
        {
            let f = Field::from_order(q).unwrap();
            let m = f.modulus();
            let (p, h) = (f.p(), f.h() as usize);
            assert_eq!(m.len(), h + 1);
            assert_eq!(m[h], 1);
            if h > 1 {
                assert!((0..p).all(|x| poly::eval(m, x, p) != 0));
                assert!(poly::is_irreducible(m, p));
            }
        }
    }

    #[test]
    fn untabulated_extension_matches_slow_path() {
        // 8192 > table limit: products go through on-the-fly reduction.
        let f = Field::from_order(8192).unwrap();
        assert!(f.mul_table.is_none());
        for a in (1..8192u64).step_by(97) {
            let a = e(&f, a);
            assert_eq!(f.mul(a, f.inv(a).unwrap()), FieldElement::ONE);
        }
    }

    #[test]
    fn tables_match_polynomial_arithmetic() {
        for q in [9u64, 64, 243, 625, 2401, 4096] {
            let f = Field::from_order(q).unwrap();
            assert!(f.mul_table.is_some());
            for a in (0..q as u32).step_by(7) {
                for b in (0..q as u32).step_by(13) {
                    assert_eq!(f.mul(e(&f, a as u64), e(&f, b as u64)).0, f.mul_slow(a, b));
                    assert_eq!(f.add(e(&f, a as u64), e(&f, b as u64)).0, f.add_slow(a, b));
                }
                if a != 0 {
                    assert_eq!(f.mul_slow(a, f.inv_table[a as usize]), 1);
                }
            }
        }
    }

    #[test]
    fn custom_modulus_is_checked() {
        // x^2 + 2 is irreducible over GF(5): -2 = 3 is not a square mod 5.
        assert!(Field::with_modulus(5, 2, &[2, 0, 1]).is_ok());
        // x^2 - 1 = (x-1)(x+1)
        assert_eq!(
            Field::with_modulus(5, 2, &[4, 0, 1]).unwrap_err(),
            GfError::ReducibleModulus(2)
        );
        assert!(Field::with_modulus(5, 2, &[2, 0, 2]).is_err());
        // x^4 + x^2 + 1 = (x^2+x+1)^2 over GF(2): no roots but reducible
        assert!(Field::with_modulus(2, 4, &[1, 0, 1, 0, 1]).is_err());
    }

    #[test]
    fn prime_power_factoring() {
        assert_eq!(factor_prime_power(9109), Some((9109, 1)));
        assert_eq!(factor_prime_power(1024), Some((2, 10)));
        assert_eq!(factor_prime_power(2401), Some((7, 4)));
        assert_eq!(factor_prime_power(6), None);
        assert_eq!(factor_prime_power(1), None);
        assert_eq!(factor_prime_power(4), Some((2, 2)));
    }
}
