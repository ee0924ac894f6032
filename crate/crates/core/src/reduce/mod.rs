//! Artin–Schreier algebra: the map `beta(h) = h^p - h`, reduction to good
//! representatives, cleanness, and Swan conductors.

mod ratfn;
mod swan;

pub use ratfn::RatFn;
pub(crate) use swan::dvr_along;
pub use swan::{swan, swan_exceptional, swan_germ, SwanReport};

use serde::Serialize;
use thiserror::Error;

use crate::laurent::{CornerPoint, Germ, LaurentPoly};
use crate::polygon::{is_clean_shape, PointType, StairSeq};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ReduceError {
    #[error("corner reduction did not settle after {0} steps")]
    NoConvergence(usize),
    #[error("witness identity f - g = beta(h) failed")]
    WitnessMismatch,
}

const MAX_REDUCTIONS: usize = 10_000;

pub fn beta(h: &LaurentPoly) -> LaurentPoly {
    &h.frobenius() - h
}

/// A representative `g` of `f` modulo `beta` whose staircase avoids `p Z^2`
/// (apart from the origin) and meets the quadrant `a >= 0, b <= 0`.
///
/// `f - g = beta(h)`, except that when `constant_added` is set the constant 1
/// was added as well: `f - g = beta(h) - 1`. Constants are Artin–Schreier
/// trivial over the algebraic closure.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GoodRep {
    pub g: LaurentPoly,
    pub h: LaurentPoly,
    pub pg: StairSeq,
    pub quadrant_ok: bool,
    pub constant_added: bool,
    /// Corners removed, in order.
    pub reductions: Vec<CornerPoint>,
}

/// [`GoodRep`] for a germ `num / den`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GermRep {
    pub g: Germ,
    pub h: LaurentPoly,
    pub pg: StairSeq,
    pub quadrant_ok: bool,
    pub constant_added: bool,
    pub reductions: Vec<CornerPoint>,
}

pub fn good_rep_germ(f: &Germ) -> Result<GermRep, ReduceError> {
    let ctx = f.ctx().clone();
    let p = ctx.p() as i64;
    let mut g = f.clone();
    let mut h = LaurentPoly::zero(&ctx);
    let mut reductions = Vec::new();
    loop {
        let target = g
            .corner_terms()
            .into_iter()
            .filter(|(c, _)| (c.a, c.b) != (0, 0) && c.in_lattice(p))
            .max_by_key(|(c, _)| c.a);
        let Some((corner, coeff)) = target else { break };
        if reductions.len() >= MAX_REDUCTIONS {
            return Err(ReduceError::NoConvergence(MAX_REDUCTIONS));
        }
        let (m, n) = corner.exponent();
        let r = LaurentPoly::monomial(coeff.pth_root(), m / p, n / p);
        g = g.sub_poly(&beta(&r));
        h = &h + &r;
        reductions.push(corner);
    }
    let mut pg = g.min_corners();
    let mut constant_added = false;
    if !g.is_zero() && !pg.meets_quadrant() {
        g = g.add_poly(&LaurentPoly::one(&ctx));
        constant_added = true;
        pg = g.min_corners();
    }
    let quadrant_ok = pg.meets_quadrant();
    // num_f - num_g = den * (beta(h) - [constant_added])
    let mut rhs = beta(&h);
    if constant_added {
        rhs = &rhs - &LaurentPoly::one(&ctx);
    }
    if &(f.num() - g.num()) - &(f.den() * &rhs) != LaurentPoly::zero(&ctx) {
        return Err(ReduceError::WitnessMismatch);
    }
    Ok(GermRep { g, h, pg, quadrant_ok, constant_added, reductions })
}

pub fn good_rep(f: &LaurentPoly) -> GoodRep {
    let r = good_rep_germ(&Germ::from_poly(f.clone())).expect("corner reduction of a Laurent polynomial terminates");
    GoodRep {
        g: r.g.to_poly().expect("denominator stays 1"),
        h: r.h,
        pg: r.pg,
        quadrant_ok: r.quadrant_ok,
        constant_added: r.constant_added,
        reductions: r.reductions,
    }
}

pub fn is_clean(f: &LaurentPoly, t: PointType) -> bool {
    is_clean_shape(&good_rep(f).pg, t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf::{FieldCtx, FieldElem};
    use std::sync::Arc;

    fn mono(ctx: &Arc<FieldCtx>, c: i64, m: i64, n: i64) -> LaurentPoly {
        LaurentPoly::monomial(FieldElem::from_int(ctx, c), m, n)
    }

    #[test]
    fn beta_examples() {
        let f2 = FieldCtx::new(2, 1).unwrap();
        assert_eq!(beta(&mono(&f2, 1, -1, 0)), &mono(&f2, 1, -2, 0) + &mono(&f2, 1, -1, 0));
        let f3 = FieldCtx::new(3, 1).unwrap();
        assert_eq!(beta(&mono(&f3, 1, -1, -1)), &mono(&f3, 1, -3, -3) - &mono(&f3, 1, -1, -1));
        assert!(beta(&LaurentPoly::zero(&f3)).is_zero());
    }

    #[test]
    fn good_rep_examples() {
        let f2 = FieldCtx::new(2, 1).unwrap();
        let r = good_rep(&mono(&f2, 1, -2, 0));
        assert_eq!(r.g, mono(&f2, 1, -1, 0));
        assert_eq!(r.h, mono(&f2, 1, -1, 0));
        assert_eq!(r.pg, StairSeq::from_pairs(&[(1, 0)]).unwrap());
        assert!(!r.constant_added);

        let f3 = FieldCtx::new(3, 1).unwrap();
        let r = good_rep(&mono(&f3, 1, -3, -3));
        assert_eq!(r.g, mono(&f3, 1, -1, -1));
        assert_eq!(r.pg, StairSeq::from_pairs(&[(1, -1)]).unwrap());

        for p in [2, 3, 5] {
            let ctx = FieldCtx::new(p, 1).unwrap();
            let r = good_rep(&mono(&ctx, 1, -2, 1));
            assert!(r.constant_added);
            assert_eq!(r.g, &LaurentPoly::one(&ctx) + &mono(&ctx, 1, -2, 1));
            assert_eq!(r.pg, StairSeq::from_pairs(&[(0, 0), (2, 1)]).unwrap());
            assert!(r.quadrant_ok);
        }
    }

    #[test]
    fn clean_examples() {
        let f3 = FieldCtx::new(3, 1).unwrap();
        assert!(is_clean(&mono(&f3, 1, -2, -1), PointType::Two));
        assert!(!is_clean(&(&LaurentPoly::one(&f3) + &mono(&f3, 1, -2, 1)), PointType::Two));
        assert!(is_clean(&mono(&f3, 1, -1, 0), PointType::One));
    }

    #[test]
    fn germ_reduction_keeps_witness() {
        let f2 = FieldCtx::new(2, 1).unwrap();
        let den = &LaurentPoly::one(&f2) + &mono(&f2, 1, 0, 1);
        let g = Germ::new(&mono(&f2, 1, -4, 0) + &mono(&f2, 1, -2, 3), den).unwrap();
        let r = good_rep_germ(&g).unwrap();
        assert!(r.pg.points().iter().all(|c| !c.in_lattice(2) || (c.a, c.b) == (0, 0)));
        assert!(r.quadrant_ok);
    }

    #[test]
    fn zero_stays_zero() {
        let f5 = FieldCtx::new(5, 1).unwrap();
        let r = good_rep(&LaurentPoly::zero(&f5));
        assert!(r.g.is_zero() && r.pg.is_empty() && !r.constant_added);
    }
}
