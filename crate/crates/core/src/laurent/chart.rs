use std::sync::Arc;

use super::{Chart, LaurentError, LaurentPoly, PrecisionBudget, Truncation};
use crate::gf::{binomial_mod, Embedding, FieldCtx, FieldElem};

impl LaurentPoly {
    /// Exponent substitution for one blow-up chart; exact, like terms summed.
    pub fn substitute_chart(&self, chart: Chart) -> LaurentPoly {
        let mut out = LaurentPoly::from_terms(self.ctx(), self.terms().map(|(e, c)| (chart.map(e), c.clone())));
        out.truncation = self.truncation.map(|t| match chart {
            Chart::A => Truncation { order: t.order, column_floor: t.column_floor + t.order },
            Chart::B => Truncation { order: t.column_floor + t.order, column_floor: t.column_floor },
        });
        out.drop_hidden()
    }

    /// Coefficients moved into the field of `a` when they live in a subfield.
    pub(crate) fn lift_to(&self, ctx: &Arc<FieldCtx>) -> Result<LaurentPoly, LaurentError> {
        if **self.ctx() == **ctx {
            return Ok(self.clone());
        }
        Ok(self.embed(&Embedding::new(self.ctx(), ctx)?))
    }

    /// Substitutes `t2 -> t2 + a`. Nonnegative powers expand exactly; each
    /// negative power becomes a series cut after `budget.n_terms` terms, and
    /// the result records which coefficients are unknown.
    pub fn translate_t2(&self, a: &FieldElem, budget: PrecisionBudget) -> Result<LaurentPoly, LaurentError> {
        if !self.is_exact() {
            return Err(LaurentError::TruncatedInput);
        }
        if a.is_zero() {
            return Err(LaurentError::ZeroTranslation);
        }
        let f = self.lift_to(a.ctx())?;
        let ctx = a.ctx().clone();
        let p = ctx.p();
        let n_terms = budget.n_terms as i64;
        let mut out = LaurentPoly::zero(&ctx);
        let mut floor: Option<i64> = None;
        for ((m, n), c) in f.terms() {
            if n >= 0 {
                for j in 0..=n {
                    let b = binomial_mod(n as u64, j as u64, p);
                    if b != 0 {
                        let coef = c * &a.pow((n - j) as u128).scale(b);
                        out.add_term((m, j), &coef);
                    }
                }
            } else {
                floor = Some(floor.map_or(m, |x: i64| x.min(m)));
                // (t2 + a)^n = a^n * sum_j C(-n-1+j, j) (-1)^j (t2/a)^j
                let an = a.pow_i(n)?;
                let ainv = a.inv()?;
                let mut pw = FieldElem::one(&ctx);
                for j in 0..n_terms {
                    let b = binomial_mod((-n - 1 + j) as u64, j as u64, p);
                    if b != 0 {
                        let mut coef = &(c * &an) * &pw.scale(b);
                        if j % 2 == 1 {
                            coef = -&coef;
                        }
                        out.add_term((m, j), &coef);
                    }
                    pw = &pw * &ainv;
                }
            }
        }
        out.truncation = floor.map(|column_floor| Truncation { order: n_terms, column_floor });
        Ok(out)
    }

    /// `t2 -> t2 + a` for a polynomial in `t2` (all `n >= 0`); always exact.
    pub(crate) fn translate_t2_poly(&self, a: &FieldElem) -> Result<LaurentPoly, LaurentError> {
        debug_assert!(self.terms().all(|((_, n), _)| n >= 0));
        if a.is_zero() {
            return self.lift_to(a.ctx());
        }
        self.translate_t2(a, PrecisionBudget { n_terms: 1 })
    }
}
