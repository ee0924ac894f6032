use std::collections::HashMap;
use std::sync::Arc;

use super::{SimConfig, SimError, SimMode};
use crate::gf::{conjugates, minimal_polynomial, root_orbits, Embedding, FieldCtx, FieldElem, UniPoly};
use crate::laurent::Germ;
use crate::polygon::{is_clean_shape, PointType};
use crate::reduce::{good_rep_germ, RatFn};

/// Largest field a sweep will enumerate.
const SWEEP_LIMIT: u128 = 1 << 16;

/// A certified non-clean point `v = point` on the exceptional divisor, away
/// from both chart origins.
#[derive(Clone, Debug)]
pub struct OffOriginPoint {
    pub point: FieldElem,
    /// Degree of the point's field over the node's field (the orbit size).
    pub degree: usize,
    pub minpoly: UniPoly,
    /// The chart-A germ translated to the point.
    pub local: Germ,
}

#[derive(Debug, Default)]
pub struct Scan {
    pub points: Vec<OffOriginPoint>,
    pub tested: usize,
    pub partial: bool,
}

struct Tester<'a> {
    germ_a: &'a Germ,
    base: Arc<FieldCtx>,
    embeddings: HashMap<usize, (Arc<FieldCtx>, Embedding, Germ)>,
}

impl<'a> Tester<'a> {
    fn lifted(&mut self, d: usize) -> Result<&(Arc<FieldCtx>, Embedding, Germ), SimError> {
        if !self.embeddings.contains_key(&d) {
            let ctx = FieldCtx::new(self.base.p(), self.base.k() * d)?;
            let emb = Embedding::new(&self.base, &ctx)?;
            let germ = self.germ_a.embed(&emb);
            self.embeddings.insert(d, (ctx, emb, germ));
        }
        Ok(&self.embeddings[&d])
    }

    /// The translated germ when the point is not clean.
    fn certify(&mut self, point: &FieldElem, degree: usize) -> Result<Option<Germ>, SimError> {
        let (_, _, germ) = self.lifted(degree)?;
        let local = germ.translate_t2(point)?;
        let rep = good_rep_germ(&local)?;
        Ok((!is_clean_shape(&rep.pg, PointType::One)).then_some(local))
    }
}

/// Non-clean points `v = a != 0` of `E` in chart A. `pole` and `leading` are
/// the Swan conductor of the chart-A germ along `u = 0` and the leading
/// coefficient left after reduction.
///
/// In candidate mode only zeros of `leading` (and of its derivative when `p`
/// divides `pole`) are tested; in sweep mode every point of exact degree up to
/// `sweep_degree` over the node's field is. Either way each returned point is
/// certified by the full local test.
pub fn noncleans_on_e(germ_a: &Germ, pole: u64, leading: Option<&RatFn>, cfg: &SimConfig) -> Result<Scan, SimError> {
    let base = germ_a.ctx().clone();
    let mut tester = Tester { germ_a, base: base.clone(), embeddings: HashMap::new() };
    let mut scan = Scan::default();
    let mut found: Vec<OffOriginPoint> = Vec::new();
    match cfg.mode {
        SimMode::Candidates => {
            let Some(c) = leading.filter(|_| pole > 0) else { return Ok(scan) };
            let mut polys = vec![c.num().clone()];
            if pole % base.p() as u64 == 0 {
                polys.push(c.derivative().num().clone());
            }
            let mut seen: Vec<UniPoly> = Vec::new();
            for q in polys.iter().filter(|q| q.degree().is_some_and(|d| d > 0)) {
                let (orbits, partial) = root_orbits(q, cfg.ext_cap)?;
                scan.partial |= partial;
                for orb in orbits {
                    if orb.rep.is_zero() || seen.contains(&orb.minpoly) {
                        continue;
                    }
                    seen.push(orb.minpoly.clone());
                    scan.tested += 1;
                    if let Some(local) = tester.certify(&orb.rep, orb.degree)? {
                        found.push(OffOriginPoint { point: orb.rep, degree: orb.degree, minpoly: orb.minpoly, local });
                    }
                }
            }
        }
        SimMode::Sweep => {
            for d in 1..=cfg.sweep_degree {
                let size = base.order().checked_pow(d as u32).unwrap_or(u128::MAX);
                if size > SWEEP_LIMIT {
                    return Err(SimError::SweepTooLarge(size));
                }
                let (ctx, emb) = {
                    let (ctx, emb, _) = tester.lifted(d)?;
                    (ctx.clone(), emb.clone())
                };
                for idx in 1..size {
                    let x = FieldElem::from_index(&ctx, idx);
                    let conj = conjugates(&x, base.order());
                    if conj.len() != d || conj.iter().any(|c| c < &x) {
                        continue;
                    }
                    scan.tested += 1;
                    if let Some(local) = tester.certify(&x, d)? {
                        let minpoly = minimal_polynomial(&conj, &emb)?;
                        found.push(OffOriginPoint { point: x, degree: d, minpoly, local });
                    }
                }
            }
        }
    }
    found.sort_by(|a, b| (a.degree, a.minpoly.coeffs()).cmp(&(b.degree, b.minpoly.coeffs())));
    scan.points = found;
    Ok(scan)
}
