use std::fmt;
use std::sync::Arc;

use crate::gf::{FieldCtx, FieldElem, UniPoly};

/// A univariate rational function `num / den` in lowest terms with `den` monic.
///
/// These are the coefficients of a Laurent expansion along a coordinate
/// divisor: the residue field there is the rational function field in the
/// other coordinate.
#[derive(Clone, PartialEq, Eq)]
pub struct RatFn {
    num: UniPoly,
    den: UniPoly,
}

impl RatFn {
    pub fn new(num: UniPoly, den: UniPoly) -> Self {
        assert!(!den.is_zero(), "rational function with zero denominator");
        if num.is_zero() {
            let ctx = num.ctx().clone();
            return RatFn { num, den: UniPoly::one(&ctx) };
        }
        let g = num.gcd(&den);
        let (num, den) = (num.div_exact(&g), den.div_exact(&g));
        let lead_inv = den.lead().expect("nonzero").inv().expect("nonzero");
        RatFn { num: num.scale(&lead_inv), den: den.scale(&lead_inv) }
    }

    pub fn zero(ctx: &Arc<FieldCtx>) -> Self {
        RatFn { num: UniPoly::zero(ctx), den: UniPoly::one(ctx) }
    }

    pub fn constant(c: FieldElem) -> Self {
        let ctx = c.ctx().clone();
        RatFn::new(UniPoly::constant(c), UniPoly::one(&ctx))
    }

    pub fn from_poly(p: UniPoly) -> Self {
        let ctx = p.ctx().clone();
        RatFn::new(p, UniPoly::one(&ctx))
    }

    /// From a one-variable Laurent polynomial given as `(exponent, coeff)` pairs.
    pub fn from_laurent(ctx: &Arc<FieldCtx>, terms: impl IntoIterator<Item = (i64, FieldElem)>) -> Self {
        let terms: Vec<(i64, FieldElem)> = terms.into_iter().collect();
        let s = terms.iter().map(|(e, _)| -*e).max().unwrap_or(0).max(0);
        let num = UniPoly::from_terms(ctx, terms.into_iter().map(|(e, c)| ((e + s) as usize, c)));
        RatFn::new(num, UniPoly::x(ctx).pow(s as u32))
    }

    pub fn ctx(&self) -> &Arc<FieldCtx> {
        self.num.ctx()
    }

    pub fn num(&self) -> &UniPoly {
        &self.num
    }

    pub fn den(&self) -> &UniPoly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn add(&self, o: &RatFn) -> RatFn {
        if self.den == o.den {
            return RatFn::new(&self.num + &o.num, self.den.clone());
        }
        RatFn::new(&(&self.num * &o.den) + &(&o.num * &self.den), &self.den * &o.den)
    }

    pub fn neg(&self) -> RatFn {
        RatFn { num: -&self.num, den: self.den.clone() }
    }

    pub fn sub(&self, o: &RatFn) -> RatFn {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &RatFn) -> RatFn {
        if self.is_zero() || o.is_zero() {
            return RatFn::zero(self.ctx());
        }
        RatFn::new(&self.num * &o.num, &self.den * &o.den)
    }

    /// Panics on division by zero.
    pub fn div(&self, o: &RatFn) -> RatFn {
        assert!(!o.is_zero(), "rational function division by zero");
        RatFn::new(&self.num * &o.den, &self.den * &o.num)
    }

    pub fn derivative(&self) -> RatFn {
        let n = &(&self.num.derivative() * &self.den) - &(&self.num * &self.den.derivative());
        RatFn::new(n, &self.den * &self.den)
    }

    /// A p-th power in `F(x)`: in lowest terms with monic denominator that
    /// means both parts only use exponents divisible by `p` (finite-field
    /// coefficients are always p-th powers).
    pub fn is_pth_power(&self) -> bool {
        self.num.is_pth_power() && self.den.is_pth_power()
    }

    pub fn pth_root(&self) -> RatFn {
        debug_assert!(self.is_pth_power());
        RatFn::new(self.num.pth_root(), self.den.pth_root())
    }
}

impl fmt::Debug for RatFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for RatFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.degree() == Some(0) {
            write!(f, "{}", self.num)
        } else {
            write!(f, "[{}] / [{}]", self.num, self.den)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poly(ctx: &Arc<FieldCtx>, cs: &[i64]) -> UniPoly {
        UniPoly::from_coeffs(ctx, cs.iter().map(|&c| FieldElem::from_int(ctx, c)).collect())
    }

    #[test]
    fn lowest_terms() {
        let f3 = FieldCtx::new(3, 1).unwrap();
        // (x^2 - 1) / (2x + 2) = (x - 1) / 2 = 2x + 1 over F_3
        let r = RatFn::new(poly(&f3, &[2, 0, 1]), poly(&f3, &[2, 2]));
        assert_eq!(r, RatFn::from_poly(poly(&f3, &[1, 2])));
    }

    #[test]
    fn pth_powers() {
        let f2 = FieldCtx::new(2, 1).unwrap();
        let x = UniPoly::x(&f2);
        // (x+1)^2 / x^2 = (x^2+1)/x^2
        let r = RatFn::new(poly(&f2, &[1, 0, 1]), x.pow(2));
        assert!(r.is_pth_power());
        assert_eq!(r.pth_root(), RatFn::new(poly(&f2, &[1, 1]), x.clone()));
        assert!(!RatFn::new(poly(&f2, &[1, 1]), x.pow(2)).is_pth_power());
        // x^2 (x + 1) / (x+1)^3 reduces to x^2/(x+1)^2
        let r = RatFn::new(&x.pow(2) * &poly(&f2, &[1, 1]), poly(&f2, &[1, 1]).pow(3));
        assert!(r.is_pth_power());
    }

    #[test]
    fn laurent_input_and_derivative() {
        let f5 = FieldCtx::new(5, 1).unwrap();
        let r = RatFn::from_laurent(&f5, [(-2, FieldElem::one(&f5)), (1, FieldElem::one(&f5))]);
        // x^-2 + x, derivative -2 x^-3 + 1
        let d = RatFn::from_laurent(&f5, [(-3, FieldElem::from_int(&f5, -2)), (0, FieldElem::one(&f5))]);
        assert_eq!(r.derivative(), d);
        assert!(r.sub(&r).is_zero());
        assert_eq!(r.mul(&RatFn::from_laurent(&f5, [(2, FieldElem::one(&f5))])).den().degree(), Some(0));
    }
}
