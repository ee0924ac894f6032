use std::collections::BTreeMap;
use std::sync::Arc;

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{parse_poly, CliError};
use crate::blowup::{simulate, SimConfig, SimMode, SimResult, Step};
use crate::gf::{FieldCtx, FieldElem};
use crate::laurent::{Divisor, LaurentPoly};
use crate::polygon::{
    e_value, ess, kato_bound, r_prime, r_prime_closed, r_prime_with_rule, CornerPoint, JaRule, PointType, StairSeq,
};
use crate::reduce::{beta, good_rep, swan};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CorpusMode {
    /// Random staircases: recursion vs closed form, `ess` invariance.
    Staircase,
    /// Random polynomials: Swan invariance, witness identity, `e` identity.
    Algebra,
    /// Random polynomials through the simulator: oracle, bound, mode agreement.
    Simulate,
}

#[derive(Clone, Debug, Serialize)]
pub struct CorpusParams {
    pub mode: CorpusMode,
    pub seed: u64,
    pub count: usize,
    /// Field specs to draw from, e.g. `["2", "3", "5"]`.
    pub fields: Vec<String>,
    /// Largest pole order of a generated polynomial.
    pub max_pole: i64,
    pub max_terms: usize,
    /// Staircase length and coordinate bound.
    pub max_len: usize,
    pub max_coord: i64,
    pub sim: SimConfig,
    /// Rerun every simulation in sweep mode and compare the point sets.
    pub compare_sweep: bool,
    /// Run the staircase checks with the printed `J_a` filter.
    #[serde(skip_serializing_if = "std::ops::Not::not")]
    pub mutant: bool,
}

impl CorpusParams {
    pub fn new(mode: CorpusMode, seed: u64, count: usize) -> Self {
        let max_pole = if mode == CorpusMode::Simulate { 4 } else { 9 };
        CorpusParams {
            mode,
            seed,
            count,
            fields: vec!["2".into(), "3".into(), "5".into()],
            max_pole,
            max_terms: 4,
            max_len: 6,
            max_coord: 40,
            sim: SimConfig::default(),
            compare_sweep: mode == CorpusMode::Simulate,
            mutant: false,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct CheckTally {
    pub pass: u64,
    pub fail: u64,
    /// Not applicable to the item (e.g. outside the good regime).
    pub skipped: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Counterexample {
    pub check: String,
    /// Finer classification of the failure, empty when there is none.
    pub kind: String,
    pub index: usize,
    pub input: String,
    pub minimized: String,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CorpusSummary {
    pub mode: CorpusMode,
    pub seed: u64,
    pub count: usize,
    pub checks: BTreeMap<String, CheckTally>,
    /// Labels for items that were not judged or that failed for a known reason.
    pub classifications: BTreeMap<String, u64>,
    /// The first few counterexamples per check and kind, by item index.
    pub counterexamples: Vec<Counterexample>,
}

const KEPT_PER_CHECK: usize = 5;

impl CorpusSummary {
    pub fn all_pass(&self) -> bool {
        self.checks.values().all(|t| t.fail == 0)
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("serializable")
    }

    pub fn table(&self) -> String {
        let mut s = format!("{:?} corpus, seed {}, {} items\n", self.mode, self.seed, self.count);
        for (name, t) in &self.checks {
            s += &format!("  {name:<24} pass {:>6}  fail {:>6}  skipped {:>6}\n", t.pass, t.fail, t.skipped);
        }
        for (label, n) in &self.classifications {
            s += &format!("  [{label}] {n}\n");
        }
        for c in &self.counterexamples {
            s += &format!("  counterexample {} #{}: {} (minimized {}) {}\n", c.check, c.index, c.input, c.minimized, c.detail);
        }
        s
    }
}

#[derive(Clone, Debug)]
enum Outcome {
    Pass,
    /// Detail and kind.
    Fail(String, &'static str),
    Skip,
}

#[derive(Default)]
struct ItemResult {
    input: String,
    checks: Vec<(&'static str, Outcome)>,
    labels: Vec<String>,
    minimized: BTreeMap<&'static str, String>,
}

/// A random valid staircase of length `1..=max_len` with coordinates in
/// `[-max_coord, max_coord]` that meets the quadrant `a >= 0, b <= 0`.
pub fn random_staircase(rng: &mut impl Rng, max_len: usize, max_coord: i64) -> StairSeq {
    let span = (2 * max_coord + 1) as usize;
    loop {
        let k = rng.gen_range(1..=max_len.min(span));
        let mut a: Vec<i64> = sample(rng, span, k).into_iter().map(|i| i as i64 - max_coord).collect();
        let mut b: Vec<i64> = sample(rng, span, k).into_iter().map(|i| i as i64 - max_coord).collect();
        a.sort_unstable();
        b.sort_unstable();
        let seq = StairSeq::new(a.into_iter().zip(b).map(|(a, b)| CornerPoint::new(a, b)).collect())
            .expect("sorted distinct coordinates");
        if seq.meets_quadrant() {
            return seq;
        }
    }
}

/// A random Laurent polynomial with `1..=max_terms` terms and pole orders at
/// most `max_pole`; type I inputs have no `t2` pole.
pub fn random_laurent(
    rng: &mut impl Rng,
    ctx: &Arc<FieldCtx>,
    t: PointType,
    max_pole: i64,
    max_terms: usize,
) -> LaurentPoly {
    let mut f = LaurentPoly::zero(ctx);
    for _ in 0..rng.gen_range(1..=max_terms) {
        let m = rng.gen_range(-max_pole..=2);
        let n = match t {
            PointType::Two => rng.gen_range(-max_pole..=2),
            PointType::One => rng.gen_range(0..=3),
        };
        let c = FieldElem::from_index(ctx, rng.gen_range(1..ctx.order()));
        f = &f + &LaurentPoly::monomial(c, m, n);
    }
    f
}

fn random_type(rng: &mut impl Rng) -> PointType {
    if rng.gen_bool(0.5) {
        PointType::One
    } else {
        PointType::Two
    }
}

/// Deterministic given `params`; items run in parallel.
pub fn corpus_run(params: &CorpusParams) -> Result<CorpusSummary, CliError> {
    if params.count == 0 {
        return Err(CliError::Usage("count must be at least 1".into()));
    }
    let fields: Vec<Arc<FieldCtx>> = params
        .fields
        .iter()
        .map(|f| FieldCtx::parse(f).map_err(|e| CliError::Stage("field", e.to_string())))
        .collect::<Result<_, _>>()?;
    if fields.is_empty() {
        return Err(CliError::Usage("at least one field is required".into()));
    }
    let items: Vec<ItemResult> = (0..params.count)
        .into_par_iter()
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
            rng.set_stream(i as u64);
            match params.mode {
                CorpusMode::Staircase => staircase_item(&mut rng, params),
                CorpusMode::Algebra => algebra_item(&mut rng, params, &fields),
                CorpusMode::Simulate => simulate_item(&mut rng, params, &fields),
            }
        })
        .collect();

    let mut summary = CorpusSummary {
        mode: params.mode,
        seed: params.seed,
        count: params.count,
        checks: BTreeMap::new(),
        classifications: BTreeMap::new(),
        counterexamples: Vec::new(),
    };
    let mut kept: BTreeMap<(&str, &str), usize> = BTreeMap::new();
    for (index, item) in items.iter().enumerate() {
        for label in &item.labels {
            *summary.classifications.entry(label.clone()).or_default() += 1;
        }
        for (name, outcome) in &item.checks {
            let tally = summary.checks.entry(name.to_string()).or_default();
            match outcome {
                Outcome::Pass => tally.pass += 1,
                Outcome::Skip => tally.skipped += 1,
                Outcome::Fail(detail, kind) => {
                    tally.fail += 1;
                    let n = kept.entry((name, kind)).or_default();
                    if *n < KEPT_PER_CHECK {
                        *n += 1;
                        summary.counterexamples.push(Counterexample {
                            check: name.to_string(),
                            kind: kind.to_string(),
                            index,
                            input: item.input.clone(),
                            minimized: item.minimized.get(name).cloned().unwrap_or_else(|| item.input.clone()),
                            detail: detail.clone(),
                        });
                    }
                }
            }
        }
    }
    summary.counterexamples.sort_by(|a, b| (&a.check, &a.kind, a.index).cmp(&(&b.check, &b.kind, b.index)));
    Ok(summary)
}

fn judge(ok: bool, detail: impl FnOnce() -> String) -> Outcome {
    if ok {
        Outcome::Pass
    } else {
        Outcome::Fail(detail(), "")
    }
}

// ---- staircases

fn staircase_checks(seq: &StairSeq, t: PointType, rule: JaRule) -> Vec<(&'static str, Outcome)> {
    let rec = r_prime_with_rule(seq, t, rule);
    let closed = r_prime_closed(seq, t);
    let closed_form = match &rec {
        Ok(tr) => judge(tr.total as i64 == closed, || format!("recursion {} vs closed form {closed}", tr.total)),
        Err(e) => Outcome::Fail(format!("recursion failed: {e}"), ""),
    };
    let hull = ess(seq).expect("nonempty");
    let ess_inv = match (&rec, &r_prime_with_rule(&hull, t, rule)) {
        (Ok(a), Ok(b)) => judge(a.total == b.total, || format!("r' = {} but r'(ess) = {}", a.total, b.total)),
        (Err(e), _) | (_, Err(e)) => Outcome::Fail(format!("recursion failed: {e}"), ""),
    };
    vec![("closed_form", closed_form), ("ess_invariance", ess_inv)]
}

fn fails(checks: &[(&'static str, Outcome)], name: &str) -> bool {
    checks.iter().any(|(n, o)| *n == name && matches!(o, Outcome::Fail(..)))
}

/// The first staircase in a canonical order (length, depth, points) that
/// starts at the origin, takes steps of 1..=4 and still fails `check`.
fn minimal_staircase(check: &str, t: PointType, rule: JaRule) -> Option<StairSeq> {
    let mut all = vec![StairSeq::from_pairs(&[(0, 0)]).expect("valid")];
    let mut frontier = all.clone();
    for _ in 1..3 {
        let mut next = Vec::new();
        for s in &frontier {
            let last = s.last().expect("nonempty");
            for da in 1..=4 {
                for db in 1..=4 {
                    let mut pts = s.points().to_vec();
                    pts.push(CornerPoint::new(last.a + da, last.b + db));
                    next.push(StairSeq::new(pts).expect("increasing"));
                }
            }
        }
        all.extend(next.iter().cloned());
        frontier = next;
    }
    let key = |s: &StairSeq| (s.len(), crate::polygon::depth(s), s.points().iter().map(|c| (c.a, c.b)).collect::<Vec<_>>());
    all.sort_by_key(key);
    all.into_iter().find(|s| fails(&staircase_checks(s, t, rule), check))
}

fn staircase_item(rng: &mut ChaCha8Rng, params: &CorpusParams) -> ItemResult {
    let seq = random_staircase(rng, params.max_len, params.max_coord);
    let t = random_type(rng);
    let rule = if params.mutant { JaRule::Printed } else { JaRule::Corrected };
    let checks = staircase_checks(&seq, t, rule);
    let mut item = ItemResult { input: format!("{seq} type {t}"), ..Default::default() };
    for (name, outcome) in &checks {
        if matches!(outcome, Outcome::Fail(..)) {
            let m = minimal_staircase(name, t, rule).map_or_else(|| item.input.clone(), |s| format!("{s} type {t}"));
            item.minimized.insert(name, m);
        }
    }
    item.checks = checks;
    item
}

// ---- polynomials

fn describe(f: &LaurentPoly, t: PointType) -> String {
    format!("{} over {} type {t}", f, f.ctx())
}

/// Drops terms one at a time while `still_fails` holds.
fn shrink_poly(f: &LaurentPoly, still_fails: impl Fn(&LaurentPoly) -> bool) -> LaurentPoly {
    let mut cur = f.clone();
    'outer: loop {
        let terms: Vec<((i64, i64), FieldElem)> = cur.terms().map(|(k, c)| (k, c.clone())).collect();
        for skip in 0..terms.len() {
            let smaller = LaurentPoly::from_terms(
                cur.ctx(),
                terms.iter().enumerate().filter(|(i, _)| *i != skip).map(|(_, x)| x.clone()),
            );
            if still_fails(&smaller) {
                cur = smaller;
                continue 'outer;
            }
        }
        return cur;
    }
}

/// A random `h` whose `beta(h)` keeps pole orders within `max_pole`.
fn random_h(rng: &mut ChaCha8Rng, ctx: &Arc<FieldCtx>, t: PointType, max_pole: i64) -> LaurentPoly {
    let reach = (max_pole / ctx.p() as i64).max(1);
    let mut h = LaurentPoly::zero(ctx);
    for _ in 0..rng.gen_range(1..=3) {
        let m = rng.gen_range(-reach..=1);
        let n = if t == PointType::Two { rng.gen_range(-reach..=1) } else { rng.gen_range(0..=1) };
        let c = FieldElem::from_index(ctx, rng.gen_range(1..ctx.order()));
        h = &h + &LaurentPoly::monomial(c, m, n);
    }
    h
}

fn algebra_checks(f: &LaurentPoly, h: &LaurentPoly, t: PointType) -> Vec<(&'static str, Outcome)> {
    let mut out = Vec::new();
    let shifted = f + &beta(h);
    for (name, d) in [("swan_beta_t1", Divisor::T1), ("swan_beta_t2", Divisor::T2), ("swan_beta_e", Divisor::E)] {
        let (a, b) = (swan(f, d).value, swan(&shifted, d).value);
        out.push((name, judge(a == b, || format!("Sw(f) = {a}, Sw(f + beta(h)) = {b} with h = {h}"))));
    }
    let rep = good_rep(f);
    let mut rhs = beta(&rep.h);
    if rep.constant_added {
        rhs = &rhs - &LaurentPoly::one(f.ctx());
    }
    let diff = f - &rep.g;
    out.push(("witness", judge(diff == rhs, || format!("f - g = {diff}, beta(h) = {rhs}"))));
    let again = good_rep(&rep.g);
    out.push(("idempotent", judge(again.g == rep.g, || format!("good_rep(g) = {}", again.g))));
    let e_identity = if t == PointType::Two && rep.quadrant_ok && !rep.pg.is_empty() {
        let e = e_value(&rep.pg).expect("nonempty");
        let (s1, s2, se) = (swan(&rep.g, Divisor::T1).value, swan(&rep.g, Divisor::T2).value, swan(&rep.g, Divisor::E).value);
        let rhs = s1 as i64 + s2 as i64 - se as i64;
        judge(e == rhs, || format!("e = {e}, Sw1 + Sw2 - SwE = {s1} + {s2} - {se}"))
    } else {
        Outcome::Skip
    };
    out.push(("e_identity", e_identity));
    let printed = f.to_string();
    let round_trip = match parse_poly(&printed, f.ctx()) {
        Ok(back) => judge(&back == f, || format!("{printed} reparses as {back}")),
        Err(e) => Outcome::Fail(format!("{printed} does not reparse: {e}"), ""),
    };
    out.push(("round_trip", round_trip));
    out
}

fn pick_field<'a>(rng: &mut ChaCha8Rng, fields: &'a [Arc<FieldCtx>]) -> &'a Arc<FieldCtx> {
    &fields[rng.gen_range(0..fields.len())]
}

fn algebra_item(rng: &mut ChaCha8Rng, params: &CorpusParams, fields: &[Arc<FieldCtx>]) -> ItemResult {
    let ctx = pick_field(rng, fields).clone();
    let t = random_type(rng);
    let f = random_laurent(rng, &ctx, t, params.max_pole, params.max_terms);
    let h = random_h(rng, &ctx, t, params.max_pole);
    let checks = algebra_checks(&f, &h, t);
    let mut item = ItemResult { input: describe(&f, t), ..Default::default() };
    for (name, outcome) in &checks {
        if matches!(outcome, Outcome::Fail(..)) {
            let small = shrink_poly(&f, |g| fails(&algebra_checks(g, &h, t), name));
            item.minimized.insert(name, describe(&small, t));
        }
    }
    item.checks = checks;
    item
}

fn max_offorigin_degree(result: &SimResult) -> usize {
    result
        .tree
        .walk()
        .iter()
        .flat_map(|n| n.provenance.iter())
        .filter_map(|s| match s {
            Step::OffOrigin { degree, .. } => Some(*degree),
            Step::Origin { .. } => None,
        })
        .max()
        .unwrap_or(0)
}

fn classify_non_good(result: &SimResult) -> Vec<String> {
    let nodes = result.tree.walk();
    let mut out = Vec::new();
    if nodes.iter().any(|n| !n.off_origin.is_empty()) {
        out.push("non_good:off_origin_points".into());
    }
    if nodes.iter().any(|n| n.chart_consistent == Some(false)) {
        out.push("non_good:chart_inconsistent".into());
    }
    out
}

fn simulate_checks(
    f: &LaurentPoly,
    t: PointType,
    params: &CorpusParams,
    labels: &mut Vec<String>,
) -> Vec<(&'static str, Outcome)> {
    let mut out = Vec::new();
    let rep = good_rep(f);
    let pg = rep.pg.clone();
    let rp = if pg.is_empty() { 0 } else { r_prime(&pg, t).map(|tr| tr.total).unwrap_or(u64::MAX) };
    let bound = kato_bound(&pg, t);
    let result = match simulate(f, t, &params.sim) {
        Ok(r) => r,
        Err(e) => {
            out.push(("simulate", Outcome::Fail(e.to_string(), "")));
            return out;
        }
    };
    out.push(("simulate", Outcome::Pass));
    if result.flags.constant_added_anywhere {
        labels.push("constant_added".into());
    }
    let rx = result.r_x;
    if result.good_regime() {
        out.push(("oracle", judge(rx == rp, || format!("r_x = {rx}, r' = {rp}, pg = {pg}"))));
    } else {
        out.push(("oracle", Outcome::Skip));
        labels.extend(classify_non_good(&result));
        if rx != rp {
            labels.push(format!("non_good:discrepancy_{:+}", rx as i64 - rp as i64));
        }
    }
    let singleton_one = t == PointType::One && pg.len() == 1;
    for (name, value) in [("bound_simulation", rx as i64), ("bound_recursion", rp as i64)] {
        let outcome = if value <= bound {
            Outcome::Pass
        } else {
            let kind = if singleton_one { "type1_singleton" } else { "other" };
            labels.push(format!("{name}_fail_{kind}"));
            let regime = if result.good_regime() { "good" } else { "non-good" };
            Outcome::Fail(format!("{value} > bound {bound}, pg = {pg}, type {t}, {regime} regime"), kind)
        };
        out.push((name, outcome));
    }
    if params.compare_sweep {
        let degree = params.sim.sweep_degree.max(max_offorigin_degree(&result));
        let sweep_cfg = SimConfig { mode: SimMode::Sweep, sweep_degree: degree, ..params.sim.clone() };
        let outcome = match simulate(f, t, &sweep_cfg) {
            Ok(sw) => {
                let (a, b) = (result.noncleans_by_node(), sw.noncleans_by_node());
                judge(a == b, || format!("candidates {a:?} vs sweep {b:?}"))
            }
            Err(crate::blowup::SimError::SweepTooLarge(_)) => Outcome::Skip,
            Err(e) => Outcome::Fail(format!("sweep failed: {e}"), ""),
        };
        out.push(("sweep_agreement", outcome));
    }
    out
}

fn simulate_item(rng: &mut ChaCha8Rng, params: &CorpusParams, fields: &[Arc<FieldCtx>]) -> ItemResult {
    let ctx = pick_field(rng, fields).clone();
    let t = random_type(rng);
    let f = random_laurent(rng, &ctx, t, params.max_pole, params.max_terms);
    let mut labels = Vec::new();
    let checks = simulate_checks(&f, t, params, &mut labels);
    let mut item = ItemResult { input: describe(&f, t), labels, ..Default::default() };
    for (name, outcome) in &checks {
        if matches!(outcome, Outcome::Fail(..)) {
            let small = shrink_poly(&f, |g| fails(&simulate_checks(g, t, params, &mut Vec::new()), name));
            item.minimized.insert(name, describe(&small, t));
        }
    }
    item.checks = checks;
    item
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn staircases_are_valid_and_in_quadrant() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..200 {
            let s = random_staircase(&mut rng, 6, 40);
            assert!(s.meets_quadrant());
            assert!(s.len() <= 6);
            assert!(s.points().iter().all(|c| c.a.abs() <= 40 && c.b.abs() <= 40));
        }
    }

    #[test]
    fn mutant_minimizes_to_known_case() {
        for t in [PointType::One, PointType::Two] {
            let s = minimal_staircase("closed_form", t, JaRule::Printed).unwrap();
            assert_eq!(s, StairSeq::from_pairs(&[(0, 0), (1, 2)]).unwrap());
            assert!(minimal_staircase("closed_form", t, JaRule::Corrected).is_none());
        }
    }

    #[test]
    fn deterministic() {
        let p = CorpusParams::new(CorpusMode::Algebra, 3, 20);
        assert_eq!(corpus_run(&p).unwrap(), corpus_run(&p).unwrap());
    }
}
