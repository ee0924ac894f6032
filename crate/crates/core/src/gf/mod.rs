//! Exact arithmetic in finite fields `F_{p^k}`.
//!
//! Elements are stored in the polynomial basis `1, g, ..., g^{k-1}` where `g`
//! is the class of `x` modulo the context's monic irreducible modulus. The
//! modulus for a given `(p, k)` is the least irreducible polynomial in the
//! order that compares the highest non-leading coefficient first, so two
//! independently built contexts for the same `(p, k)` are equal.

mod embed;
mod poly;
mod roots;

pub use embed::Embedding;
pub use poly::UniPoly;
pub(crate) use roots::{conjugates, minimal_polynomial};
pub use roots::{degree_parts, find_roots, root_orbits, roots_in_field, Root, RootOrbit, RootSet};

use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FieldError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("extension degree must be at least 1")]
    ZeroDegree,
    #[error("modulus is not a monic irreducible polynomial of degree {0}")]
    Reducible(usize),
    #[error("division by zero")]
    DivisionByZero,
    #[error("field mismatch: {left} vs {right}")]
    ContextMismatch { left: String, right: String },
    #[error("cannot embed {src} into {dst}")]
    BadEmbedding { src: String, dst: String },
    #[error("invalid field spec {0:?}, expected \"p^k\"")]
    BadSpec(String),
    #[error("field order {0} too large")]
    TooLarge(String),
    #[error("the zero polynomial has no finite root set")]
    ZeroPolynomial,
}

/// A finite field `F_p[x] / (modulus)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FieldCtx {
    p: u32,
    k: usize,
    /// Low-degree first, monic, length `k + 1`.
    modulus: Vec<u32>,
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

impl FieldCtx {
    /// The field `F_{p^k}` with the least irreducible modulus of degree `k`.
    pub fn new(p: u32, k: usize) -> Result<Arc<Self>, FieldError> {
        if !is_prime(p as u64) {
            return Err(FieldError::NotPrime(p as u64));
        }
        if k == 0 {
            return Err(FieldError::ZeroDegree);
        }
        check_order(p, k)?;
        if k == 1 {
            return Ok(Arc::new(FieldCtx { p, k, modulus: vec![0, 1] }));
        }
        let prime = FieldCtx::new(p, 1)?;
        // Enumerate the k lower coefficients as base-p digits, most significant
        // digit being the coefficient of x^{k-1}.
        let total = (p as u128).pow(k as u32);
        for idx in 0..total {
            let mut modulus = Vec::with_capacity(k + 1);
            let mut rest = idx;
            for _ in 0..k {
                modulus.push((rest % p as u128) as u32);
                rest /= p as u128;
            }
            if modulus[0] == 0 {
                continue;
            }
            modulus.push(1);
            if is_irreducible(&prime, &modulus) {
                return Ok(Arc::new(FieldCtx { p, k, modulus }));
            }
        }
        unreachable!("irreducible polynomials exist in every degree")
    }

    /// A field with an explicitly chosen modulus (low-degree first, monic).
    pub fn with_modulus(p: u32, modulus: Vec<u32>) -> Result<Arc<Self>, FieldError> {
        if !is_prime(p as u64) {
            return Err(FieldError::NotPrime(p as u64));
        }
        let k = modulus.len().saturating_sub(1);
        if k == 0 {
            return Err(FieldError::ZeroDegree);
        }
        check_order(p, k)?;
        if modulus.last() != Some(&1) || modulus.iter().any(|&c| c >= p) {
            return Err(FieldError::Reducible(k));
        }
        let prime = FieldCtx::new(p, 1)?;
        if k > 1 && !is_irreducible(&prime, &modulus) {
            return Err(FieldError::Reducible(k));
        }
        Ok(Arc::new(FieldCtx { p, k, modulus }))
    }

    /// Parses `"p^k"` (or a bare prime `"p"`).
    pub fn parse(spec: &str) -> Result<Arc<Self>, FieldError> {
        let bad = || FieldError::BadSpec(spec.to_string());
        let s = spec.trim();
        let (p, k) = match s.split_once('^') {
            Some((p, k)) => (p.trim(), k.trim()),
            None => (s, "1"),
        };
        let p: u32 = p.parse().map_err(|_| bad())?;
        let k: usize = k.parse().map_err(|_| bad())?;
        FieldCtx::new(p, k)
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    /// Number of elements, `p^k`.
    pub fn order(&self) -> u128 {
        (self.p as u128).pow(self.k as u32)
    }

    pub fn label(&self) -> String {
        format!("{}^{}", self.p, self.k)
    }
}

impl fmt::Display for FieldCtx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F_{}^{}", self.p, self.k)
    }
}

fn check_order(p: u32, k: usize) -> Result<(), FieldError> {
    let bits = (p as f64).log2() * k as f64;
    if bits > 120.0 {
        return Err(FieldError::TooLarge(format!("{p}^{k}")));
    }
    Ok(())
}

/// Rabin's test over the prime field.
fn is_irreducible(prime: &Arc<FieldCtx>, modulus: &[u32]) -> bool {
    let k = modulus.len() - 1;
    let f = UniPoly::from_coeffs(
        prime,
        modulus.iter().map(|&c| FieldElem::from_int(prime, c as i64)).collect(),
    );
    let x = UniPoly::x(prime);
    let p = prime.p as u128;
    // X^{p^i} mod f for i = 1..=k
    let mut frob = Vec::with_capacity(k + 1);
    frob.push(x.rem(&f).expect("nonzero modulus"));
    for i in 1..=k {
        let next = frob[i - 1].pow_mod(p, &f).expect("nonzero modulus");
        frob.push(next);
    }
    if frob[k] != x.rem(&f).expect("nonzero modulus") {
        return false;
    }
    let mut n = k;
    let mut r = 2;
    let mut prime_divisors = Vec::new();
    while r * r <= n {
        if n % r == 0 {
            prime_divisors.push(r);
            while n % r == 0 {
                n /= r;
            }
        }
        r += 1;
    }
    if n > 1 {
        prime_divisors.push(n);
    }
    prime_divisors.into_iter().all(|r| {
        let h = &frob[k / r] - &x;
        f.gcd(&h).degree() == Some(0)
    })
}

/// An element of a finite field, tied to its context.
#[derive(Clone)]
pub struct FieldElem {
    ctx: Arc<FieldCtx>,
    coeffs: Vec<u32>,
}

fn same_field(a: &Arc<FieldCtx>, b: &Arc<FieldCtx>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

impl FieldElem {
    pub fn zero(ctx: &Arc<FieldCtx>) -> Self {
        FieldElem { ctx: ctx.clone(), coeffs: vec![0; ctx.k] }
    }

    pub fn one(ctx: &Arc<FieldCtx>) -> Self {
        Self::from_int(ctx, 1)
    }

    /// Image of an integer in the prime field.
    pub fn from_int(ctx: &Arc<FieldCtx>, n: i64) -> Self {
        let mut e = Self::zero(ctx);
        e.coeffs[0] = n.rem_euclid(ctx.p as i64) as u32;
        e
    }

    /// Builds an element from basis coefficients (reduced mod p, zero-padded).
    pub fn from_coeffs(ctx: &Arc<FieldCtx>, coeffs: &[i64]) -> Self {
        assert!(coeffs.len() <= ctx.k, "too many coefficients for {ctx}");
        let mut e = Self::zero(ctx);
        for (slot, &c) in e.coeffs.iter_mut().zip(coeffs) {
            *slot = c.rem_euclid(ctx.p as i64) as u32;
        }
        e
    }

    /// The class `g` of `x`. For a prime field this is the root of the linear modulus.
    pub fn generator(ctx: &Arc<FieldCtx>) -> Self {
        if ctx.k == 1 {
            return Self::from_int(ctx, -(ctx.modulus[0] as i64));
        }
        let mut e = Self::zero(ctx);
        e.coeffs[1] = 1;
        e
    }

    /// The element whose base-p digits are the basis coefficients of `idx`.
    pub fn from_index(ctx: &Arc<FieldCtx>, idx: u128) -> Self {
        let mut e = Self::zero(ctx);
        let mut rest = idx;
        for c in e.coeffs.iter_mut() {
            *c = (rest % ctx.p as u128) as u32;
            rest /= ctx.p as u128;
        }
        e
    }

    pub fn to_index(&self) -> u128 {
        self.coeffs
            .iter()
            .rev()
            .fold(0u128, |acc, &c| acc * self.ctx.p as u128 + c as u128)
    }

    pub fn ctx(&self) -> &Arc<FieldCtx> {
        &self.ctx
    }

    pub fn coeffs(&self) -> &[u32] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }

    pub fn is_one(&self) -> bool {
        self.coeffs[0] == 1 && self.coeffs[1..].iter().all(|&c| c == 0)
    }

    /// The integer value when the element lies in the prime field.
    pub fn as_prime(&self) -> Option<u32> {
        self.coeffs[1..].iter().all(|&c| c == 0).then_some(self.coeffs[0])
    }

    fn check(&self, other: &Self) -> Result<(), FieldError> {
        if same_field(&self.ctx, &other.ctx) {
            Ok(())
        } else {
            Err(FieldError::ContextMismatch { left: self.ctx.label(), right: other.ctx.label() })
        }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self, FieldError> {
        self.check(other)?;
        let p = self.ctx.p;
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(&a, &b)| ((a as u64 + b as u64) % p as u64) as u32)
            .collect();
        Ok(FieldElem { ctx: self.ctx.clone(), coeffs })
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self, FieldError> {
        self.check(other)?;
        let p = self.ctx.p as u64;
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(&a, &b)| ((a as u64 + p - b as u64) % p) as u32)
            .collect();
        Ok(FieldElem { ctx: self.ctx.clone(), coeffs })
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self, FieldError> {
        self.check(other)?;
        let k = self.ctx.k;
        let p = self.ctx.p as u64;
        if k == 1 {
            let c = (self.coeffs[0] as u64 * other.coeffs[0] as u64) % p;
            return Ok(FieldElem { ctx: self.ctx.clone(), coeffs: vec![c as u32] });
        }
        let mut prod = vec![0u64; 2 * k - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                prod[i + j] = (prod[i + j] + a as u64 * b as u64) % p;
            }
        }
        let m = &self.ctx.modulus;
        for top in (k..prod.len()).rev() {
            let c = prod[top] % p;
            if c == 0 {
                continue;
            }
            prod[top] = 0;
            for j in 0..k {
                let sub = c * m[j] as u64 % p;
                prod[top - k + j] = (prod[top - k + j] + p - sub) % p;
            }
        }
        let coeffs = prod[..k].iter().map(|&c| c as u32).collect();
        Ok(FieldElem { ctx: self.ctx.clone(), coeffs })
    }

    /// Multiplication by an integer of the prime field.
    pub fn scale(&self, n: u64) -> Self {
        let p = self.ctx.p as u64;
        let n = n % p;
        let coeffs = self.coeffs.iter().map(|&c| (c as u64 * n % p) as u32).collect();
        FieldElem { ctx: self.ctx.clone(), coeffs }
    }

    pub fn pow(&self, mut exp: u128) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one(&self.ctx);
        while exp > 0 {
            if exp & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            exp >>= 1;
        }
        acc
    }

    /// Signed power; negative exponents require a nonzero base.
    pub fn pow_i(&self, exp: i64) -> Result<Self, FieldError> {
        if exp >= 0 {
            Ok(self.pow(exp as u128))
        } else {
            Ok(self.inv()?.pow(exp.unsigned_abs() as u128))
        }
    }

    pub fn inv(&self) -> Result<Self, FieldError> {
        if self.is_zero() {
            return Err(FieldError::DivisionByZero);
        }
        Ok(self.pow(self.ctx.order() - 2))
    }

    pub fn try_div(&self, other: &Self) -> Result<Self, FieldError> {
        self.check(other)?;
        self.try_mul(&other.inv()?)
    }

    /// `a -> a^p`.
    pub fn frobenius(&self) -> Self {
        self.pow(self.ctx.p as u128)
    }

    /// The unique `b` with `b^p = a`, computed as `a^{p^{k-1}}`.
    pub fn pth_root(&self) -> Self {
        let mut r = self.clone();
        for _ in 1..self.ctx.k {
            r = r.frobenius();
        }
        r
    }

    /// Nonzero basis coefficients as `(coefficient, power of g)`.
    pub fn basis_terms(&self) -> Vec<(u32, usize)> {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .map(|(i, &c)| (c, i))
            .collect()
    }
}

impl PartialEq for FieldElem {
    fn eq(&self, other: &Self) -> bool {
        same_field(&self.ctx, &other.ctx) && self.coeffs == other.coeffs
    }
}

impl Eq for FieldElem {}

impl Hash for FieldElem {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.ctx.p.hash(state);
        self.coeffs.hash(state);
    }
}

impl PartialOrd for FieldElem {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for FieldElem {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.ctx.p, self.ctx.k)
            .cmp(&(other.ctx.p, other.ctx.k))
            .then_with(|| self.coeffs.iter().rev().cmp(other.coeffs.iter().rev()))
    }
}

impl fmt::Debug for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self} in {}", self.ctx)
    }
}

impl fmt::Display for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(c) = self.as_prime() {
            return write!(f, "{c}");
        }
        let parts: Vec<String> = self
            .basis_terms()
            .into_iter()
            .rev()
            .map(|(c, i)| match (c, i) {
                (c, 0) => format!("{c}"),
                (1, 1) => "g".to_string(),
                (c, 1) => format!("{c}*g"),
                (1, i) => format!("g^{i}"),
                (c, i) => format!("{c}*g^{i}"),
            })
            .collect();
        write!(f, "{}", parts.join("+"))
    }
}

macro_rules! forward_binop {
    ($tr:ident, $method:ident, $checked:ident) => {
        impl $tr<&FieldElem> for &FieldElem {
            type Output = FieldElem;
            /// Panics when the operands live in different fields; use the
            /// `try_*` form to get an error instead.
            fn $method(self, rhs: &FieldElem) -> FieldElem {
                self.$checked(rhs).expect("field operands must share a context")
            }
        }
        impl $tr<FieldElem> for FieldElem {
            type Output = FieldElem;
            fn $method(self, rhs: FieldElem) -> FieldElem {
                (&self).$method(&rhs)
            }
        }
        impl $tr<&FieldElem> for FieldElem {
            type Output = FieldElem;
            fn $method(self, rhs: &FieldElem) -> FieldElem {
                (&self).$method(rhs)
            }
        }
    };
}

forward_binop!(Add, add, try_add);
forward_binop!(Sub, sub, try_sub);
forward_binop!(Mul, mul, try_mul);

impl Neg for &FieldElem {
    type Output = FieldElem;
    fn neg(self) -> FieldElem {
        FieldElem::zero(&self.ctx) - self
    }
}

impl Neg for FieldElem {
    type Output = FieldElem;
    fn neg(self) -> FieldElem {
        -&self
    }
}

/// `C(n, k) mod p` by Lucas' theorem.
pub fn binomial_mod(n: u64, k: u64, p: u32) -> u64 {
    let p = p as u64;
    let (mut n, mut k) = (n, k);
    let mut acc = 1u64;
    while k > 0 || n > 0 {
        let (ni, ki) = (n % p, k % p);
        if ki > ni {
            return 0;
        }
        // small binomial via multiplicative formula with inverses mod p
        let mut num = 1u64;
        let mut den = 1u64;
        for j in 0..ki {
            num = num * ((ni - j) % p) % p;
            den = den * ((j + 1) % p) % p;
        }
        acc = acc * num % p * mod_pow(den, p - 2, p) % p;
        n /= p;
        k /= p;
    }
    acc
}

fn mod_pow(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % m;
        }
        b = b * b % m;
        e >>= 1;
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f4() -> Arc<FieldCtx> {
        FieldCtx::new(2, 2).unwrap()
    }

    #[test]
    fn moduli_are_least_irreducible() {
        assert_eq!(f4().modulus(), &[1, 1, 1]);
        assert_eq!(FieldCtx::new(3, 2).unwrap().modulus(), &[1, 0, 1]);
        assert_eq!(FieldCtx::new(2, 3).unwrap().modulus(), &[1, 1, 0, 1]);
        assert_eq!(FieldCtx::new(2, 4).unwrap().modulus(), &[1, 1, 0, 0, 1]);
        assert!(FieldCtx::new(4, 1).is_err());
        assert!(FieldCtx::new(3, 0).is_err());
    }

    #[test]
    fn parse_field_spec() {
        let f = FieldCtx::parse("3^2").unwrap();
        assert_eq!((f.p(), f.k()), (3, 2));
        assert_eq!(FieldCtx::parse(" 5 ").unwrap().k(), 1);
        assert!(FieldCtx::parse("x^2").is_err());
        assert!(FieldCtx::parse("6^1").is_err());
    }

    #[test]
    fn char_two_identity() {
        let f2 = FieldCtx::new(2, 1).unwrap();
        let one = FieldElem::one(&f2);
        assert!((&one + &one).is_zero());
    }

    #[test]
    fn f4_multiplication_table() {
        let ctx = f4();
        let g = FieldElem::generator(&ctx);
        let one = FieldElem::one(&ctx);
        // g^2 = g + 1
        assert_eq!(&g * &g, &g + &one);
        assert!((&g * &(&g + &one)).is_one());
        // every nonzero element has an inverse
        for idx in 1..4 {
            let a = FieldElem::from_index(&ctx, idx);
            assert!((&a * &a.inv().unwrap()).is_one());
        }
    }

    #[test]
    fn inverse_in_f5() {
        let f5 = FieldCtx::new(5, 1).unwrap();
        assert_eq!(FieldElem::from_int(&f5, 2).inv().unwrap(), FieldElem::from_int(&f5, 3));
        assert_eq!(FieldElem::zero(&f5).inv(), Err(FieldError::DivisionByZero));
    }

    #[test]
    fn context_mismatch_is_an_error() {
        let a = FieldElem::one(&FieldCtx::new(3, 1).unwrap());
        let b = FieldElem::one(&FieldCtx::new(5, 1).unwrap());
        assert!(matches!(a.try_add(&b), Err(FieldError::ContextMismatch { .. })));
        // equal (p, k) contexts built separately are interchangeable
        let c = FieldElem::one(&FieldCtx::new(3, 1).unwrap());
        assert!(a.try_add(&c).is_ok());
    }

    #[test]
    fn pth_roots_small_examples() {
        let f2 = FieldCtx::new(2, 1).unwrap();
        assert!(FieldElem::one(&f2).pth_root().is_one());
        let ctx = f4();
        let g = FieldElem::generator(&ctx);
        assert_eq!(g.pth_root(), &g + &FieldElem::one(&ctx));
        let f3 = FieldCtx::new(3, 1).unwrap();
        assert_eq!(FieldElem::from_int(&f3, 2).pth_root(), FieldElem::from_int(&f3, 2));
    }

    #[test]
    fn frobenius_is_bijective_exhaustively() {
        for (p, k) in [(2, 1), (2, 2), (2, 3), (2, 4), (2, 6), (3, 1), (3, 2), (3, 4), (5, 1), (5, 2), (7, 2)] {
            let ctx = FieldCtx::new(p, k).unwrap();
            if ctx.order() > 81 && (p, k) != (2, 6) {
                continue;
            }
            for idx in 0..ctx.order() {
                let a = FieldElem::from_index(&ctx, idx);
                assert_eq!(a.pth_root().frobenius(), a);
                assert_eq!(a.frobenius().pth_root(), a);
            }
        }
    }

    #[test]
    fn lucas_binomials() {
        assert_eq!(binomial_mod(2, 1, 3), 2);
        assert_eq!(binomial_mod(5, 2, 5), 0);
        assert_eq!(binomial_mod(6, 3, 7), 20 % 7);
        assert_eq!(binomial_mod(10, 4, 3), 210 % 3);
        assert_eq!(binomial_mod(3, 5, 2), 0);
    }

    #[test]
    fn display_uses_generator_notation() {
        let ctx = FieldCtx::new(3, 2).unwrap();
        let e = FieldElem::from_coeffs(&ctx, &[1, 2]);
        assert_eq!(e.to_string(), "2*g+1");
        assert_eq!(FieldElem::from_int(&ctx, 2).to_string(), "2");
    }
}
