use std::collections::BTreeMap;

use serde::Serialize;

use super::RatFn;
use crate::gf::UniPoly;
use crate::laurent::{Chart, Divisor, Germ, LaurentPoly};

/// Swan conductor of `f` along one divisor.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SwanReport {
    pub divisor: Divisor,
    pub value: u64,
    pub reductions_applied: usize,
}

/// Outcome of reducing a principal part in the discrete valuation ring of a
/// divisor: the final pole order and its leading coefficient.
#[derive(Clone, Debug)]
pub(crate) struct DvrOutcome {
    pub value: u64,
    pub leading: Option<RatFn>,
    pub reductions: usize,
}

/// Principal part along `t1 = 0`: pole order `e >= 1` mapped to the
/// coefficient of `t1^{-e}`, a rational function of `t2`.
fn principal_part_t1(g: &Germ) -> BTreeMap<i64, RatFn> {
    let ctx = g.ctx().clone();
    let mut out = BTreeMap::new();
    let Some(vmin) = g.num().valuation_along(Divisor::T1) else { return out };
    if vmin >= 0 {
        return out;
    }
    let depth = (-vmin) as usize;
    let mut cols: BTreeMap<i64, Vec<(i64, crate::gf::FieldElem)>> = BTreeMap::new();
    for ((m, n), c) in g.num().terms() {
        if m < 0 {
            cols.entry(m).or_default().push((n, c.clone()));
        }
    }
    let num_cols: BTreeMap<i64, RatFn> =
        cols.into_iter().map(|(m, ts)| (m, RatFn::from_laurent(&ctx, ts))).collect();
    // den = sum_i t1^i Q_i(t2), then 1/den = sum_i S_i t1^i
    let mut q: Vec<UniPoly> = vec![UniPoly::zero(&ctx); depth];
    for ((m, n), c) in g.den().terms() {
        if (m as usize) < depth {
            q[m as usize] = &q[m as usize] + &UniPoly::constant(c.clone()).shift(n as usize);
        }
    }
    let q: Vec<RatFn> = q.into_iter().map(RatFn::from_poly).collect();
    let q0_inv = RatFn::constant(crate::gf::FieldElem::one(&ctx)).div(&q[0]);
    let mut s: Vec<RatFn> = vec![q0_inv.clone()];
    for i in 1..depth {
        let mut acc = RatFn::zero(&ctx);
        for j in 1..=i {
            if !q[j].is_zero() {
                acc = acc.add(&q[j].mul(&s[i - j]));
            }
        }
        s.push(acc.mul(&q0_inv).neg());
    }
    for e in 1..=(depth as i64) {
        let mut acc = RatFn::zero(&ctx);
        for (&m, nm) in num_cols.range(..=-e) {
            let i = (-e - m) as usize;
            if !s[i].is_zero() {
                acc = acc.add(&nm.mul(&s[i]));
            }
        }
        if !acc.is_zero() {
            out.insert(e, acc);
        }
    }
    out
}

/// While the pole order is divisible by `p` and its coefficient is a p-th
/// power `c^p`, replace `c^p t^{-A}` by `c t^{-A/p}` (subtracting `beta`).
fn dvr_reduce(mut pp: BTreeMap<i64, RatFn>, p: i64) -> DvrOutcome {
    let mut reductions = 0;
    loop {
        let Some((&a, c)) = pp.iter().next_back() else {
            return DvrOutcome { value: 0, leading: None, reductions };
        };
        if a % p != 0 || !c.is_pth_power() {
            return DvrOutcome { value: a as u64, leading: Some(c.clone()), reductions };
        }
        let root = c.pth_root();
        pp.remove(&a);
        let slot = pp.entry(a / p).or_insert_with(|| RatFn::zero(root.ctx()));
        *slot = slot.add(&root);
        if slot.is_zero() {
            pp.remove(&(a / p));
        }
        reductions += 1;
    }
}

pub(crate) fn dvr_along(g: &Germ, divisor: Divisor) -> DvrOutcome {
    let p = g.ctx().p() as i64;
    match divisor {
        Divisor::T1 => dvr_reduce(principal_part_t1(g), p),
        Divisor::T2 => dvr_reduce(principal_part_t1(&g.swap_vars()), p),
        Divisor::E => dvr_reduce(principal_part_t1(&g.substitute_chart(Chart::A)), p),
    }
}

pub fn swan_germ(g: &Germ, divisor: Divisor) -> SwanReport {
    let out = dvr_along(g, divisor);
    SwanReport { divisor, value: out.value, reductions_applied: out.reductions }
}

/// `Sw_D(f)`: the least pole order along `D` over all `f + beta(h)`.
pub fn swan(f: &LaurentPoly, divisor: Divisor) -> SwanReport {
    swan_germ(&Germ::from_poly(f.clone()), divisor)
}

/// Swan conductor along the exceptional divisor of the blow-up at the origin.
pub fn swan_exceptional(f: &LaurentPoly) -> SwanReport {
    swan(f, Divisor::E)
}
