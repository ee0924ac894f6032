use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use super::{same_field, Embedding, FieldCtx, FieldElem, FieldError};

/// Dense univariate polynomial over a finite field, low degree first, with no
/// trailing zero coefficients.
#[derive(Clone, PartialEq, Eq)]
pub struct UniPoly {
    ctx: Arc<FieldCtx>,
    coeffs: Vec<FieldElem>,
}

impl UniPoly {
    pub fn zero(ctx: &Arc<FieldCtx>) -> Self {
        UniPoly { ctx: ctx.clone(), coeffs: Vec::new() }
    }

    pub fn one(ctx: &Arc<FieldCtx>) -> Self {
        Self::constant(FieldElem::one(ctx))
    }

    pub fn x(ctx: &Arc<FieldCtx>) -> Self {
        UniPoly { ctx: ctx.clone(), coeffs: vec![FieldElem::zero(ctx), FieldElem::one(ctx)] }
    }

    pub fn constant(c: FieldElem) -> Self {
        let ctx = c.ctx().clone();
        Self::from_coeffs(&ctx, vec![c])
    }

    /// `x - a`
    pub fn linear_root(a: &FieldElem) -> Self {
        let ctx = a.ctx().clone();
        Self::from_coeffs(&ctx, vec![-a, FieldElem::one(&ctx)])
    }

    pub fn from_coeffs(ctx: &Arc<FieldCtx>, mut coeffs: Vec<FieldElem>) -> Self {
        debug_assert!(coeffs.iter().all(|c| same_field(c.ctx(), ctx)));
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        UniPoly { ctx: ctx.clone(), coeffs }
    }

    /// Builds `sum c_i x^i` from `(i, c_i)` pairs; repeated exponents add up.
    pub fn from_terms(ctx: &Arc<FieldCtx>, terms: impl IntoIterator<Item = (usize, FieldElem)>) -> Self {
        let mut coeffs: Vec<FieldElem> = Vec::new();
        for (i, c) in terms {
            if coeffs.len() <= i {
                coeffs.resize(i + 1, FieldElem::zero(ctx));
            }
            coeffs[i] = &coeffs[i] + &c;
        }
        Self::from_coeffs(ctx, coeffs)
    }

    pub fn ctx(&self) -> &Arc<FieldCtx> {
        &self.ctx
    }

    pub fn coeffs(&self) -> &[FieldElem] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> FieldElem {
        self.coeffs.get(i).cloned().unwrap_or_else(|| FieldElem::zero(&self.ctx))
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn lead(&self) -> Option<&FieldElem> {
        self.coeffs.last()
    }

    pub fn scale(&self, c: &FieldElem) -> Self {
        Self::from_coeffs(&self.ctx, self.coeffs.iter().map(|a| a * c).collect())
    }

    pub fn monic(&self) -> Self {
        match self.lead() {
            None => self.clone(),
            Some(l) => self.scale(&l.inv().expect("leading coefficient is nonzero")),
        }
    }

    pub fn eval(&self, x: &FieldElem) -> FieldElem {
        self.coeffs
            .iter()
            .rev()
            .fold(FieldElem::zero(&self.ctx), |acc, c| &(&acc * x) + c)
    }

    pub fn derivative(&self) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| c.scale(i as u64))
            .collect();
        Self::from_coeffs(&self.ctx, coeffs)
    }

    /// Multiplies by `x^n`.
    pub fn shift(&self, n: usize) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let mut coeffs = vec![FieldElem::zero(&self.ctx); n];
        coeffs.extend(self.coeffs.iter().cloned());
        UniPoly { ctx: self.ctx.clone(), coeffs }
    }

    pub fn divrem(&self, divisor: &Self) -> Result<(Self, Self), FieldError> {
        let dlead = divisor.lead().ok_or(FieldError::DivisionByZero)?;
        let dinv = dlead.inv()?;
        let ddeg = divisor.coeffs.len() - 1;
        let mut rem = self.coeffs.clone();
        if rem.len() <= ddeg {
            return Ok((Self::zero(&self.ctx), self.clone()));
        }
        let mut quot = vec![FieldElem::zero(&self.ctx); rem.len() - ddeg];
        for top in (ddeg..rem.len()).rev() {
            let c = &rem[top] * &dinv;
            if c.is_zero() {
                continue;
            }
            for (j, d) in divisor.coeffs.iter().enumerate() {
                let idx = top - ddeg + j;
                rem[idx] = &rem[idx] - &(&c * d);
            }
            quot[top - ddeg] = c;
        }
        rem.truncate(ddeg);
        Ok((Self::from_coeffs(&self.ctx, quot), Self::from_coeffs(&self.ctx, rem)))
    }

    pub fn rem(&self, divisor: &Self) -> Result<Self, FieldError> {
        Ok(self.divrem(divisor)?.1)
    }

    /// Exact quotient; panics if the division leaves a remainder.
    pub fn div_exact(&self, divisor: &Self) -> Self {
        let (q, r) = self.divrem(divisor).expect("nonzero divisor");
        assert!(r.is_zero(), "inexact polynomial division");
        q
    }

    /// Monic gcd (zero only if both inputs are zero).
    pub fn gcd(&self, other: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.rem(&b).expect("nonzero divisor");
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn pow_mod(&self, mut exp: u128, modulus: &Self) -> Result<Self, FieldError> {
        let mut base = self.rem(modulus)?;
        let mut acc = Self::one(&self.ctx).rem(modulus)?;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = (&acc * &base).rem(modulus)?;
            }
            base = (&base * &base).rem(modulus)?;
            exp >>= 1;
        }
        Ok(acc)
    }

    pub fn pow(&self, exp: u32) -> Self {
        let mut acc = Self::one(&self.ctx);
        for _ in 0..exp {
            acc = &acc * self;
        }
        acc
    }

    /// Applies a field embedding coefficientwise.
    pub fn embed(&self, emb: &Embedding) -> Self {
        Self::from_coeffs(emb.dst(), self.coeffs.iter().map(|c| emb.apply(c)).collect())
    }

    /// Number of times `x - a` divides the polynomial (the polynomial must be nonzero).
    pub fn root_multiplicity(&self, a: &FieldElem) -> usize {
        let lin = Self::linear_root(a);
        let mut cur = self.clone();
        let mut m = 0;
        while !cur.is_zero() {
            let (q, r) = cur.divrem(&lin).expect("nonzero divisor");
            if !r.is_zero() {
                break;
            }
            cur = q;
            m += 1;
        }
        m
    }

    /// True when every exponent with a nonzero coefficient is divisible by p.
    pub fn is_pth_power(&self) -> bool {
        let p = self.ctx.p() as usize;
        self.coeffs.iter().enumerate().all(|(i, c)| c.is_zero() || i % p == 0)
    }

    /// The p-th root of a polynomial satisfying [`UniPoly::is_pth_power`].
    pub fn pth_root(&self) -> Self {
        let p = self.ctx.p() as usize;
        let coeffs = self.coeffs.iter().step_by(p).map(|c| c.pth_root()).collect();
        Self::from_coeffs(&self.ctx, coeffs)
    }
}

impl fmt::Debug for UniPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for UniPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .rev()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| match i {
                0 => format!("({c})"),
                1 => format!("({c})*X"),
                _ => format!("({c})*X^{i}"),
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl Add<&UniPoly> for &UniPoly {
    type Output = UniPoly;
    fn add(self, rhs: &UniPoly) -> UniPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let coeffs = (0..n).map(|i| &self.coeff(i) + &rhs.coeff(i)).collect();
        UniPoly::from_coeffs(&self.ctx, coeffs)
    }
}

impl Sub<&UniPoly> for &UniPoly {
    type Output = UniPoly;
    fn sub(self, rhs: &UniPoly) -> UniPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let coeffs = (0..n).map(|i| &self.coeff(i) - &rhs.coeff(i)).collect();
        UniPoly::from_coeffs(&self.ctx, coeffs)
    }
}

impl Mul<&UniPoly> for &UniPoly {
    type Output = UniPoly;
    fn mul(self, rhs: &UniPoly) -> UniPoly {
        if self.is_zero() || rhs.is_zero() {
            return UniPoly::zero(&self.ctx);
        }
        let mut coeffs = vec![FieldElem::zero(&self.ctx); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                coeffs[i + j] = &coeffs[i + j] + &(a * b);
            }
        }
        UniPoly::from_coeffs(&self.ctx, coeffs)
    }
}

impl Neg for &UniPoly {
    type Output = UniPoly;
    fn neg(self) -> UniPoly {
        UniPoly::from_coeffs(&self.ctx, self.coeffs.iter().map(|c| -c).collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poly(ctx: &Arc<FieldCtx>, cs: &[i64]) -> UniPoly {
        UniPoly::from_coeffs(ctx, cs.iter().map(|&c| FieldElem::from_int(ctx, c)).collect())
    }

    #[test]
    fn divrem_reconstructs() {
        let f5 = FieldCtx::new(5, 1).unwrap();
        let a = poly(&f5, &[1, 2, 3, 4, 1]);
        let b = poly(&f5, &[2, 0, 1]);
        let (q, r) = a.divrem(&b).unwrap();
        assert_eq!(&(&q * &b) + &r, a);
        assert!(r.degree().unwrap() < 2);
    }

    #[test]
    fn gcd_is_monic_common_factor() {
        let f3 = FieldCtx::new(3, 1).unwrap();
        // (x+1)(x+2) and (x+1)x
        let a = &poly(&f3, &[1, 1]) * &poly(&f3, &[2, 1]);
        let b = &poly(&f3, &[1, 1]) * &UniPoly::x(&f3);
        assert_eq!(a.gcd(&b), poly(&f3, &[1, 1]));
    }

    #[test]
    fn multiplicity_and_derivative() {
        let f2 = FieldCtx::new(2, 1).unwrap();
        let one = FieldElem::one(&f2);
        // (x+1)^3
        let cube = poly(&f2, &[1, 1]).pow(3);
        assert_eq!(cube.root_multiplicity(&one), 3);
        assert_eq!(cube.derivative(), poly(&f2, &[1, 0, 1]));
        assert!(poly(&f2, &[1, 0, 1]).is_pth_power());
        assert_eq!(poly(&f2, &[1, 0, 1]).pth_root(), poly(&f2, &[1, 1]));
    }
}
