use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::{parse_poly, CliError};
use crate::blowup::{simulate, SimConfig, SimResult};
use crate::gf::{FieldCtx, FieldElem};
use crate::laurent::{Divisor, LaurentPoly};
use crate::polygon::{e_value, ess, kato_bound, r_prime, r_prime_closed, PointType, RPrimeTrace, StairSeq};
use crate::reduce::{beta, good_rep, swan, GoodRep, SwanReport};

/// One invocation: field, point type, expression, simulator settings, seed.
#[derive(Clone, Debug, Serialize)]
pub struct InputSpec {
    pub field: String,
    pub t: PointType,
    pub expr: String,
    pub sim: SimConfig,
    pub seed: u64,
}

#[derive(Clone, Debug, Serialize)]
pub struct SwanValues {
    pub t1: SwanReport,
    pub t2: SwanReport,
    pub e: SwanReport,
}

impl SwanValues {
    fn of(f: &LaurentPoly) -> Self {
        SwanValues { t1: swan(f, Divisor::T1), t2: swan(f, Divisor::T2), e: swan(f, Divisor::E) }
    }

    fn values(&self) -> [u64; 3] {
        [self.t1.value, self.t2.value, self.e.value]
    }
}

/// The same pipeline rerun on `f + beta(h)`.
#[derive(Clone, Debug, Serialize)]
pub struct Perturbation {
    pub h: LaurentPoly,
    pub pg: StairSeq,
    pub swan: SwanValues,
    pub r_prime: u64,
    pub r_x: u64,
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub spec: InputSpec,
    pub input: LaurentPoly,
    pub good_rep: GoodRep,
    pub pg: StairSeq,
    pub ess: StairSeq,
    pub swan: SwanValues,
    pub e_value: Option<i64>,
    pub r_prime: RPrimeTrace,
    pub r_prime_closed: i64,
    pub kato_bound: i64,
    pub simulation: SimResult,
    pub perturbation: Perturbation,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Verdicts {
    pub closed_form: bool,
    /// Only checked for type II with the quadrant condition.
    pub e_identity: Option<bool>,
    pub good_regime: bool,
    /// Only a verdict in the good regime; otherwise the difference is reported.
    pub oracle: Option<bool>,
    pub oracle_discrepancy: i64,
    pub bound_simulation: bool,
    pub bound_recursion: bool,
    pub perturbation: bool,
}

impl Verdicts {
    pub fn all_pass(&self) -> bool {
        self.closed_form
            && self.e_identity != Some(false)
            && self.oracle != Some(false)
            && self.bound_simulation
            && self.bound_recursion
            && self.perturbation
    }
}

impl Report {
    /// Recomputed from the report's own values on every call.
    pub fn verdicts(&self) -> Verdicts {
        let t = self.spec.t;
        let e_identity = (t == PointType::Two && self.good_rep.quadrant_ok).then(|| {
            let [t1, t2, e] = self.swan.values();
            self.e_value == Some(t1 as i64 + t2 as i64 - e as i64)
        });
        let good_regime = self.simulation.good_regime();
        let r_x = self.simulation.r_x as i64;
        let rp = self.r_prime.total as i64;
        Verdicts {
            closed_form: rp == self.r_prime_closed,
            e_identity,
            good_regime,
            oracle: good_regime.then_some(r_x == rp),
            oracle_discrepancy: r_x - rp,
            bound_simulation: r_x <= self.kato_bound,
            bound_recursion: rp <= self.kato_bound,
            perturbation: self.perturbation.pg == self.pg
                && self.perturbation.swan.values() == self.swan.values()
                && self.perturbation.r_prime == self.r_prime.total
                && self.perturbation.r_x == self.simulation.r_x,
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        let mut v = serde_json::to_value(self).expect("serializable");
        v["verdicts"] = serde_json::to_value(self.verdicts()).expect("serializable");
        v
    }

    pub fn summary_table(&self) -> String {
        let v = self.verdicts();
        let ok = |b: bool| if b { "pass" } else { "FAIL" };
        let opt = |b: Option<bool>| b.map_or("n/a", ok);
        let [t1, t2, e] = self.swan.values();
        let mut s = String::new();
        s += &format!("field           {}\n", self.spec.field);
        s += &format!("type            {}\n", self.spec.t);
        s += &format!("f               {}\n", self.input);
        s += &format!("good rep g      {}\n", self.good_rep.g);
        s += &format!("witness h       {}\n", self.good_rep.h);
        s += &format!("constant added  {}\n", self.good_rep.constant_added);
        s += &format!("pg              {}\n", self.pg);
        s += &format!("ess             {}\n", self.ess);
        s += &format!("Sw T1/T2/E      {t1} / {t2} / {e}\n");
        s += &format!("e               {}\n", self.e_value.map_or("-".into(), |e| e.to_string()));
        s += &format!("r' recursion    {}\n", self.r_prime.total);
        s += &format!("r' closed form  {}\n", self.r_prime_closed);
        s += &format!("r_x simulated   {}\n", self.simulation.r_x);
        s += &format!("Kato bound      {}\n", self.kato_bound);
        s += &format!("good regime     {}\n", v.good_regime);
        s += "verdicts\n";
        s += &format!("  recursion == closed form   {}\n", ok(v.closed_form));
        s += &format!("  e == Sw1 + Sw2 - SwE       {}\n", opt(v.e_identity));
        s += &format!("  r_x == r'                  {}", opt(v.oracle));
        if v.oracle.is_none() && v.oracle_discrepancy != 0 {
            s += &format!(" (outside good regime: r_x - r' = {})", v.oracle_discrepancy);
        }
        s += "\n";
        s += &format!("  r_x <= bound               {}\n", ok(v.bound_simulation));
        s += &format!("  r' <= bound                {}\n", ok(v.bound_recursion));
        s += &format!("  beta-perturbed rerun       {}\n", ok(v.perturbation));
        s
    }
}

fn pg_invariants(pg: &StairSeq, t: PointType) -> (StairSeq, Option<i64>, RPrimeTrace, i64, i64) {
    if pg.is_empty() {
        let trace = RPrimeTrace { total: 0, steps: Vec::new() };
        return (StairSeq::empty(), None, trace, 0, 0);
    }
    let trace = r_prime(pg, t).expect("valid staircase");
    (
        ess(pg).expect("nonempty"),
        Some(e_value(pg).expect("nonempty")),
        trace,
        r_prime_closed(pg, t),
        kato_bound(pg, t),
    )
}

/// A small random `h` with poles only: every exponent is `<= 0`, and in Case
/// (I) there is no `t2` pole at all.
pub fn random_pole_witness(rng: &mut ChaCha8Rng, ctx: &std::sync::Arc<FieldCtx>, t: PointType) -> LaurentPoly {
    let mut h = LaurentPoly::zero(ctx);
    for _ in 0..rng.gen_range(1..=3) {
        let m = rng.gen_range(-3..=0);
        let n = if t == PointType::Two { rng.gen_range(-3..=0) } else { 0 };
        let c = FieldElem::from_index(ctx, rng.gen_range(1..ctx.order()));
        h = &h + &LaurentPoly::monomial(c, m, n);
    }
    h
}

pub fn run_report(spec: &InputSpec) -> Result<Report, CliError> {
    let ctx = FieldCtx::parse(&spec.field).map_err(|e| CliError::Stage("field", e.to_string()))?;
    let input = parse_poly(&spec.expr, &ctx).map_err(|e| CliError::Stage("parse", e.to_string()))?;
    if spec.t == PointType::One && input.valuation_along(Divisor::T2).is_some_and(|v| v < 0) {
        return Err(CliError::Stage("parse", "a type I input cannot have poles along t2".into()));
    }
    let rep = good_rep(&input);
    let pg = rep.pg.clone();
    let (ess_pg, e, trace, closed, bound) = pg_invariants(&pg, spec.t);
    let swan_values = SwanValues::of(&rep.g);
    let simulation = simulate(&input, spec.t, &spec.sim).map_err(|e| CliError::Stage("simulate", e.to_string()))?;

    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let h = random_pole_witness(&mut rng, &ctx, spec.t);
    let shifted = &input + &beta(&h);
    let rep2 = good_rep(&shifted);
    let (_, _, trace2, _, _) = pg_invariants(&rep2.pg, spec.t);
    let sim2 = simulate(&shifted, spec.t, &spec.sim).map_err(|e| CliError::Stage("perturbed simulate", e.to_string()))?;
    let perturbation = Perturbation {
        h,
        pg: rep2.pg.clone(),
        swan: SwanValues::of(&rep2.g),
        r_prime: trace2.total,
        r_x: sim2.r_x,
    };
    Ok(Report {
        spec: spec.clone(),
        input,
        good_rep: rep,
        pg,
        ess: ess_pg,
        swan: swan_values,
        e_value: e,
        r_prime: trace,
        r_prime_closed: closed,
        kato_bound: bound,
        simulation,
        perturbation,
    })
}
