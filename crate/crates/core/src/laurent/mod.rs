//! Sparse bivariate Laurent polynomials over `F_{p^k}`.
//!
//! A [`LaurentPoly`] maps exponent pairs `(m, n)` (the powers of `t1`, `t2`)
//! to nonzero coefficients. Results of translating negative powers of `t2`
//! are power series cut off at a budget; such values carry a [`Truncation`]
//! describing where their coefficients stop being known, and the checked
//! accessors refuse to answer questions that depend on unknown terms.

mod chart;
mod germ;

pub use germ::Germ;

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use serde::ser::SerializeStruct;
use serde::{Deserialize, Serialize, Serializer};
use thiserror::Error;

use crate::gf::{Embedding, FieldCtx, FieldElem, FieldError};
pub use crate::polygon::CornerPoint;
use crate::polygon::StairSeq;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LaurentError {
    #[error("answer depends on terms beyond the valid order {order} (column floor {column_floor})")]
    PrecisionExceeded { order: i64, column_floor: i64 },
    #[error("cannot translate a truncated series")]
    TruncatedInput,
    #[error("translation by zero is the chart origin, no translation needed")]
    ZeroTranslation,
    #[error("germ denominator must be a polynomial with nonzero constant term")]
    BadDenominator,
    #[error(transparent)]
    Field(#[from] FieldError),
}

/// Coordinate divisors: `t1 = 0`, `t2 = 0`, and the exceptional divisor of the
/// blow-up at the origin.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Divisor {
    T1,
    T2,
    E,
}

impl fmt::Display for Divisor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Divisor::T1 => "T1",
            Divisor::T2 => "T2",
            Divisor::E => "E",
        })
    }
}

/// The two standard charts of the blow-up at the origin:
/// `A: (t1, t2) = (u, uv)` and `B: (t1, t2) = (uv, v)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Chart {
    A,
    B,
}

impl Chart {
    pub fn map(self, (m, n): (i64, i64)) -> (i64, i64) {
        match self {
            Chart::A => (m + n, n),
            Chart::B => (m, m + n),
        }
    }
}

/// How many terms of a series expansion to keep.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrecisionBudget {
    pub n_terms: u32,
}

impl Default for PrecisionBudget {
    fn default() -> Self {
        PrecisionBudget { n_terms: 16 }
    }
}

/// Coefficients at `(m, n)` with `m >= column_floor` and `n >= order` are unknown.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Truncation {
    pub order: i64,
    pub column_floor: i64,
}

impl Truncation {
    fn hides(&self, (m, n): (i64, i64)) -> bool {
        m >= self.column_floor && n >= self.order
    }

    fn merge(a: Option<Truncation>, b: Option<Truncation>) -> Option<Truncation> {
        match (a, b) {
            (None, x) | (x, None) => x,
            (Some(x), Some(y)) => Some(Truncation {
                order: x.order.min(y.order),
                column_floor: x.column_floor.min(y.column_floor),
            }),
        }
    }
}

#[derive(Clone, PartialEq, Eq)]
pub struct LaurentPoly {
    ctx: Arc<FieldCtx>,
    terms: BTreeMap<(i64, i64), FieldElem>,
    truncation: Option<Truncation>,
}

impl LaurentPoly {
    pub fn zero(ctx: &Arc<FieldCtx>) -> Self {
        LaurentPoly { ctx: ctx.clone(), terms: BTreeMap::new(), truncation: None }
    }

    pub fn constant(c: FieldElem) -> Self {
        Self::monomial(c, 0, 0)
    }

    pub fn one(ctx: &Arc<FieldCtx>) -> Self {
        Self::constant(FieldElem::one(ctx))
    }

    /// `c * t1^m * t2^n`
    pub fn monomial(c: FieldElem, m: i64, n: i64) -> Self {
        let ctx = c.ctx().clone();
        Self::from_terms(&ctx, [((m, n), c)])
    }

    /// Sums the given terms; like terms combine and zeros are dropped.
    pub fn from_terms(ctx: &Arc<FieldCtx>, terms: impl IntoIterator<Item = ((i64, i64), FieldElem)>) -> Self {
        let mut out = Self::zero(ctx);
        for (e, c) in terms {
            out.add_term(e, &c);
        }
        out
    }

    pub(crate) fn add_term(&mut self, e: (i64, i64), c: &FieldElem) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&e) {
            Some(v) => {
                *v = &*v + c;
                if v.is_zero() {
                    self.terms.remove(&e);
                }
            }
            None => {
                self.terms.insert(e, c.clone());
            }
        }
    }

    pub fn ctx(&self) -> &Arc<FieldCtx> {
        &self.ctx
    }

    /// Terms in increasing `(m, n)` order.
    pub fn terms(&self) -> impl Iterator<Item = ((i64, i64), &FieldElem)> {
        self.terms.iter().map(|(&e, c)| (e, c))
    }

    pub fn coeff(&self, m: i64, n: i64) -> FieldElem {
        self.terms.get(&(m, n)).cloned().unwrap_or_else(|| FieldElem::zero(&self.ctx))
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn truncation(&self) -> Option<Truncation> {
        self.truncation
    }

    pub fn is_exact(&self) -> bool {
        self.truncation.is_none()
    }

    /// Drops the truncation tag; the caller vouches the result is wanted as-is.
    pub fn into_exact_part(mut self) -> Self {
        self.truncation = None;
        self
    }

    pub fn scale(&self, c: &FieldElem) -> Self {
        let mut out = Self::from_terms(&self.ctx, self.terms().map(|(e, a)| (e, a * c)));
        out.truncation = self.truncation;
        out
    }

    /// Multiplies by `t1^dm * t2^dn`.
    pub fn shift(&self, dm: i64, dn: i64) -> Self {
        LaurentPoly {
            ctx: self.ctx.clone(),
            terms: self.terms.iter().map(|(&(m, n), c)| ((m + dm, n + dn), c.clone())).collect(),
            truncation: self.truncation.map(|t| Truncation { order: t.order + dn, column_floor: t.column_floor + dm }),
        }
    }

    /// `h^p`: Frobenius on coefficients, exponents times `p`.
    pub fn frobenius(&self) -> Self {
        let p = self.ctx.p() as i64;
        LaurentPoly {
            ctx: self.ctx.clone(),
            terms: self.terms.iter().map(|(&(m, n), c)| ((p * m, p * n), c.frobenius())).collect(),
            truncation: self.truncation.map(|t| Truncation { order: p * t.order, column_floor: p * t.column_floor }),
        }
    }

    /// Exchanges the roles of `t1` and `t2`.
    pub fn swap_vars(&self) -> Self {
        assert!(self.truncation.is_none(), "swap_vars on a truncated series");
        LaurentPoly {
            ctx: self.ctx.clone(),
            terms: self.terms.iter().map(|(&(m, n), c)| ((n, m), c.clone())).collect(),
            truncation: None,
        }
    }

    pub fn embed(&self, emb: &Embedding) -> Self {
        LaurentPoly {
            ctx: emb.dst().clone(),
            terms: self.terms.iter().map(|(&e, c)| (e, emb.apply(c))).collect(),
            truncation: self.truncation,
        }
    }

    /// Minimal corners of the support, ignoring any truncation.
    pub fn min_corners(&self) -> StairSeq {
        StairSeq::new(self.corner_terms().into_iter().map(|(c, _)| c).collect())
            .expect("minimal elements form a staircase")
    }

    /// Minimal corners with their coefficients, sorted by `a` ascending.
    pub fn corner_terms(&self) -> Vec<(CornerPoint, FieldElem)> {
        // Scan m ascending; the lowest point of a column is minimal iff its n
        // is below every n in the earlier columns.
        let mut out: Vec<(CornerPoint, FieldElem)> = Vec::new();
        let mut best_n: Option<i64> = None;
        let mut last_m: Option<i64> = None;
        for (&(m, n), c) in &self.terms {
            if last_m == Some(m) {
                continue;
            }
            last_m = Some(m);
            if best_n.is_none_or(|b| n < b) {
                best_n = Some(n);
                out.push((CornerPoint::from_exponent(m, n), c.clone()));
            }
        }
        out.reverse();
        out
    }

    /// As [`LaurentPoly::min_corners`], but fails when unknown terms could
    /// change the answer.
    pub fn min_corners_checked(&self) -> Result<StairSeq, LaurentError> {
        if let Some(t) = self.truncation {
            let covered = self.terms.keys().any(|&(m, n)| m <= t.column_floor && n <= t.order);
            if !covered {
                return Err(self.exceeded());
            }
        }
        Ok(self.min_corners())
    }

    /// `v_D(f)`: least `m` (T1), `n` (T2) or `m + n` (E) over the support;
    /// `None` stands for `+infinity`.
    pub fn valuation_along(&self, divisor: Divisor) -> Option<i64> {
        self.terms.keys().map(|&(m, n)| match divisor {
            Divisor::T1 => m,
            Divisor::T2 => n,
            Divisor::E => m + n,
        })
        .min()
    }

    pub fn valuation_along_checked(&self, divisor: Divisor) -> Result<Option<i64>, LaurentError> {
        let v = self.valuation_along(divisor);
        if let Some(t) = self.truncation {
            let bound = match divisor {
                Divisor::T1 => t.column_floor,
                Divisor::T2 => t.order,
                Divisor::E => t.column_floor + t.order,
            };
            if v.is_none_or(|v| v > bound) {
                return Err(self.exceeded());
            }
        }
        Ok(v)
    }

    fn exceeded(&self) -> LaurentError {
        let t = self.truncation.expect("truncated");
        LaurentError::PrecisionExceeded { order: t.order, column_floor: t.column_floor }
    }

    fn drop_hidden(mut self) -> Self {
        if let Some(t) = self.truncation {
            self.terms.retain(|&e, _| !t.hides(e));
        }
        self
    }

    pub fn try_add(&self, rhs: &Self) -> Result<Self, LaurentError> {
        self.check_ctx(rhs)?;
        let mut out = self.clone();
        for (e, c) in rhs.terms() {
            out.add_term(e, c);
        }
        out.truncation = Truncation::merge(self.truncation, rhs.truncation);
        Ok(out.drop_hidden())
    }

    pub fn try_mul(&self, rhs: &Self) -> Result<Self, LaurentError> {
        self.check_ctx(rhs)?;
        let mut out = Self::zero(&self.ctx);
        for (&(m1, n1), a) in &self.terms {
            for (&(m2, n2), b) in &rhs.terms {
                out.add_term((m1 + m2, n1 + n2), &(a * b));
            }
        }
        let spread = |t: Option<Truncation>, other: &Self| {
            t.map(|t| {
                let mm = other.valuation_along(Divisor::T1).unwrap_or(0);
                let nn = other.valuation_along(Divisor::T2).unwrap_or(0);
                Truncation { order: t.order + nn, column_floor: t.column_floor + mm }
            })
        };
        out.truncation = Truncation::merge(spread(self.truncation, rhs), spread(rhs.truncation, self));
        Ok(out.drop_hidden())
    }

    fn check_ctx(&self, rhs: &Self) -> Result<(), LaurentError> {
        if self.ctx != rhs.ctx && *self.ctx != *rhs.ctx {
            return Err(FieldError::ContextMismatch { left: self.ctx.label(), right: rhs.ctx.label() }.into());
        }
        Ok(())
    }

    /// Sorted `(m, n, coefficient)` triples.
    pub fn triples(&self) -> Vec<(i64, i64, String)> {
        self.terms.iter().map(|(&(m, n), c)| (m, n, c.to_string())).collect()
    }
}

impl fmt::Debug for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self} over {}", self.ctx)?;
        if let Some(t) = self.truncation {
            write!(f, " (+ O(t2^{}) from t1^{})", t.order, t.column_floor)?;
        }
        Ok(())
    }
}

fn push_factor(parts: &mut Vec<String>, var: &str, e: i64) {
    match e {
        0 => {}
        1 => parts.push(var.to_string()),
        _ => parts.push(format!("{var}^{e}")),
    }
}

/// Prints in the input grammar: every coefficient is split into basis terms
/// `c * g^i`, so the output re-parses to the same polynomial.
impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut out = Vec::new();
        for (&(m, n), c) in &self.terms {
            for (digit, i) in c.basis_terms() {
                let mut parts = Vec::new();
                if digit != 1 || (i == 0 && m == 0 && n == 0) {
                    parts.push(digit.to_string());
                }
                push_factor(&mut parts, "g", i as i64);
                push_factor(&mut parts, "t1", m);
                push_factor(&mut parts, "t2", n);
                out.push(parts.join("*"));
            }
        }
        write!(f, "{}", out.join(" + "))
    }
}

impl Serialize for LaurentPoly {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("LaurentPoly", 3)?;
        st.serialize_field("field", &self.ctx.label())?;
        st.serialize_field("terms", &self.triples())?;
        st.serialize_field("truncation", &self.truncation)?;
        st.end()
    }
}

impl Add<&LaurentPoly> for &LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, rhs: &LaurentPoly) -> LaurentPoly {
        self.try_add(rhs).expect("field mismatch in LaurentPoly addition")
    }
}

impl Sub<&LaurentPoly> for &LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, rhs: &LaurentPoly) -> LaurentPoly {
        self.try_add(&-rhs).expect("field mismatch in LaurentPoly subtraction")
    }
}

impl Mul<&LaurentPoly> for &LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, rhs: &LaurentPoly) -> LaurentPoly {
        self.try_mul(rhs).expect("field mismatch in LaurentPoly multiplication")
    }
}

impl Neg for &LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        LaurentPoly {
            ctx: self.ctx.clone(),
            terms: self.terms.iter().map(|(&e, c)| (e, -c)).collect(),
            truncation: self.truncation,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mono(ctx: &Arc<FieldCtx>, c: i64, m: i64, n: i64) -> LaurentPoly {
        LaurentPoly::monomial(FieldElem::from_int(ctx, c), m, n)
    }

    #[test]
    fn min_corners_examples() {
        let f5 = FieldCtx::new(5, 1).unwrap();
        let f = &mono(&f5, 1, -3, -1) + &mono(&f5, 1, -1, -2);
        assert_eq!(f.min_corners(), StairSeq::from_pairs(&[(1, -2), (3, -1)]).unwrap());
        let f = &mono(&f5, 1, -3, -1) + &mono(&f5, 1, -1, 2);
        assert_eq!(f.min_corners(), StairSeq::from_pairs(&[(3, -1)]).unwrap());
        assert!(LaurentPoly::zero(&f5).min_corners().is_empty());
    }

    #[test]
    fn min_corners_skips_dominated_columns() {
        let f3 = FieldCtx::new(3, 1).unwrap();
        let f = LaurentPoly::from_terms(
            &f3,
            [(-4, 2), (-4, 5), (-3, 3), (-2, 0), (-2, 1), (0, -1), (1, -1), (2, -3)]
                .into_iter()
                .map(|e| (e, FieldElem::one(&f3))),
        );
        // exponents (-4,2), (-2,0), (0,-1), (2,-3)
        assert_eq!(f.min_corners(), StairSeq::from_pairs(&[(-2, -3), (0, -1), (2, 0), (4, 2)]).unwrap());
    }

    #[test]
    fn valuation_examples() {
        let f5 = FieldCtx::new(5, 1).unwrap();
        let f = &mono(&f5, 1, -3, 0) + &mono(&f5, 1, 0, -2);
        assert_eq!(f.valuation_along(Divisor::T1), Some(-3));
        assert_eq!(f.valuation_along(Divisor::T2), Some(-2));
        assert_eq!(LaurentPoly::zero(&f5).valuation_along(Divisor::T1), None);
    }

    #[test]
    fn like_terms_cancel() {
        let f5 = FieldCtx::new(5, 1).unwrap();
        let f = &mono(&f5, 1, -1, 0) + &mono(&f5, 4, -1, 0);
        assert!(f.is_zero());
    }

    #[test]
    fn frobenius_multiplies_exponents() {
        let f3 = FieldCtx::new(3, 1).unwrap();
        let h = mono(&f3, 2, -1, -1);
        assert_eq!(h.frobenius(), mono(&f3, 2, -3, -3));
    }

    #[test]
    fn display_uses_basis_terms() {
        let f4 = FieldCtx::new(2, 2).unwrap();
        let g = FieldElem::generator(&f4);
        let f = &LaurentPoly::monomial(&g + &FieldElem::one(&f4), -2, 1) + &LaurentPoly::one(&f4);
        assert_eq!(f.to_string(), "t1^-2*t2 + g*t1^-2*t2 + 1");
        let f3 = FieldCtx::new(3, 1).unwrap();
        assert_eq!(mono(&f3, 2, 0, 0).to_string(), "2");
        assert_eq!(LaurentPoly::zero(&f3).to_string(), "0");
    }

    #[test]
    fn serializes_sorted_triples() {
        let f5 = FieldCtx::new(5, 1).unwrap();
        let f = &mono(&f5, 2, -3, 0) + &mono(&f5, 1, 0, -2);
        let json = serde_json::to_string(&f).unwrap();
        assert_eq!(json, r#"{"field":"5^1","terms":[[-3,0,"2"],[0,-2,"1"]],"truncation":null}"#);
    }
}
