use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use super::{Chart, CornerPoint, LaurentError, LaurentPoly};
use crate::gf::{Embedding, FieldCtx, FieldElem};
use crate::polygon::StairSeq;

/// An exact local function `num / den` where `den` is a polynomial that does
/// not vanish at the origin, so `1/den` is a unit power series.
///
/// Translating a Laurent polynomial with `t2` poles to a point `t2 = a` turns
/// `t2^{-s}` into the unit `(t2 + a)^{-s}`; keeping it as a denominator avoids
/// series truncation entirely. Charts and translations act on numerator and
/// denominator separately.
#[derive(Clone, PartialEq, Eq, Serialize)]
pub struct Germ {
    num: LaurentPoly,
    den: LaurentPoly,
}

impl Germ {
    pub fn new(num: LaurentPoly, den: LaurentPoly) -> Result<Self, LaurentError> {
        if !num.is_exact() || !den.is_exact() {
            return Err(LaurentError::TruncatedInput);
        }
        if den.terms().any(|((m, n), _)| m < 0 || n < 0) || den.coeff(0, 0).is_zero() {
            return Err(LaurentError::BadDenominator);
        }
        let num = num.lift_to(den.ctx())?;
        Ok(Germ { num, den })
    }

    pub fn from_poly(f: LaurentPoly) -> Self {
        assert!(f.is_exact(), "germ from a truncated series");
        let den = LaurentPoly::one(f.ctx());
        Germ { num: f, den }
    }

    pub fn num(&self) -> &LaurentPoly {
        &self.num
    }

    pub fn den(&self) -> &LaurentPoly {
        &self.den
    }

    pub fn ctx(&self) -> &Arc<FieldCtx> {
        self.num.ctx()
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// Value of the denominator at the origin.
    pub fn unit(&self) -> FieldElem {
        self.den.coeff(0, 0)
    }

    /// The Laurent polynomial itself when the denominator is a constant.
    pub fn to_poly(&self) -> Option<LaurentPoly> {
        if self.den.len() != 1 {
            return None;
        }
        let inv = self.unit().inv().expect("unit at the origin");
        Some(self.num.scale(&inv))
    }

    /// Minimal corners of the expansion with their coefficients. Multiplying
    /// by the unit `1/den` only adds terms above existing ones, so the corners
    /// are those of `num`, scaled by `1/den(0,0)`.
    pub fn corner_terms(&self) -> Vec<(CornerPoint, FieldElem)> {
        let inv = self.unit().inv().expect("unit at the origin");
        self.num.corner_terms().into_iter().map(|(c, a)| (c, &a * &inv)).collect()
    }

    pub fn min_corners(&self) -> StairSeq {
        self.num.min_corners()
    }

    /// `self + r` for a Laurent polynomial `r`.
    pub fn add_poly(&self, r: &LaurentPoly) -> Germ {
        Germ { num: &self.num + &(&self.den * r), den: self.den.clone() }
    }

    pub fn sub_poly(&self, r: &LaurentPoly) -> Germ {
        Germ { num: &self.num - &(&self.den * r), den: self.den.clone() }
    }

    pub fn substitute_chart(&self, chart: Chart) -> Germ {
        Germ { num: self.num.substitute_chart(chart), den: self.den.substitute_chart(chart) }
    }

    pub fn swap_vars(&self) -> Germ {
        Germ { num: self.num.swap_vars(), den: self.den.swap_vars() }
    }

    pub fn embed(&self, emb: &Embedding) -> Germ {
        Germ { num: self.num.embed(emb), den: self.den.embed(emb) }
    }

    pub fn lift_to(&self, ctx: &Arc<FieldCtx>) -> Result<Germ, LaurentError> {
        Ok(Germ { num: self.num.lift_to(ctx)?, den: self.den.lift_to(ctx)? })
    }

    /// Exact substitution `t2 -> t2 + a`: writing `num = t2^{-s} P`, the result
    /// is `P(t1, t2 + a) / (den(t1, t2 + a) (t2 + a)^s)`. Fails if the new
    /// denominator vanishes at the origin.
    pub fn translate_t2(&self, a: &FieldElem) -> Result<Germ, LaurentError> {
        let s = (-self.num.valuation_along(super::Divisor::T2).unwrap_or(0)).max(0);
        let num = self.num.shift(0, s).translate_t2_poly(a)?;
        let shift = LaurentPoly::monomial(FieldElem::one(self.ctx()), 0, s).translate_t2_poly(a)?;
        let den = &self.den.translate_t2_poly(a)? * &shift;
        if den.coeff(0, 0).is_zero() {
            return Err(LaurentError::BadDenominator);
        }
        Ok(Germ { num, den })
    }
}

impl From<LaurentPoly> for Germ {
    fn from(f: LaurentPoly) -> Self {
        Germ::from_poly(f)
    }
}

impl fmt::Debug for Germ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self} over {}", self.ctx())
    }
}

impl fmt::Display for Germ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.len() == 1 && self.unit().is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({}) / ({})", self.num, self.den)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::laurent::PrecisionBudget;

    fn mono(ctx: &Arc<FieldCtx>, c: i64, m: i64, n: i64) -> LaurentPoly {
        LaurentPoly::monomial(FieldElem::from_int(ctx, c), m, n)
    }

    #[test]
    fn translation_agrees_with_truncated_series() {
        let f3 = FieldCtx::new(3, 1).unwrap();
        let f = &mono(&f3, 1, -2, -3) + &mono(&f3, 2, -1, 1);
        let a = FieldElem::from_int(&f3, 2);
        let germ = Germ::from_poly(f.clone()).translate_t2(&a).unwrap();
        let series = f.translate_t2(&a, PrecisionBudget { n_terms: 12 }).unwrap();
        // num == den * series below the truncation order
        let lhs = germ.num().clone();
        let rhs = germ.den() * &series;
        let diff = &lhs - &rhs;
        assert!(diff.is_zero(), "{diff:?}");
    }

    #[test]
    fn corners_scale_by_the_unit() {
        let f5 = FieldCtx::new(5, 1).unwrap();
        let den = &mono(&f5, 2, 0, 0) + &mono(&f5, 1, 0, 1);
        let g = Germ::new(mono(&f5, 1, -3, 0), den).unwrap();
        let corners = g.corner_terms();
        assert_eq!(corners.len(), 1);
        assert_eq!(corners[0].1, FieldElem::from_int(&f5, 3));
    }

    #[test]
    fn rejects_vanishing_denominator() {
        let f5 = FieldCtx::new(5, 1).unwrap();
        assert_eq!(Germ::new(mono(&f5, 1, 0, 0), mono(&f5, 1, 0, 1)), Err(LaurentError::BadDenominator));
        assert_eq!(Germ::new(mono(&f5, 1, 0, 0), mono(&f5, 1, 0, -1)), Err(LaurentError::BadDenominator));
    }
}
