//! Kato's `r_x` by explicit blow-up: at every non-clean point, blow up,
//! find the non-clean points on the exceptional divisor, recurse, and add up
//! the `mu` contributions.
//!
//! Points on the exceptional divisor that are not rational over the current
//! field come in Galois orbits; one representative per orbit is simulated and
//! its contribution is weighted by the orbit size.

mod export;
mod points;

pub use export::to_dot;
pub use points::{noncleans_on_e, OffOriginPoint};

use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::gf::FieldError;
use crate::laurent::{Chart, Divisor, Germ, LaurentError, LaurentPoly, PrecisionBudget};
use crate::polygon::{chart_a_child, chart_b_child, e_value, is_clean_shape, mu, PointType, PolygonError, StairSeq};
use crate::reduce::{dvr_along, good_rep_germ, ReduceError};

#[derive(Debug, Error)]
pub enum SimError {
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("e mismatch at {at}: staircase {pg} gives {formula}, Swan values T1={sw_t1} T2={sw_t2} E={sw_e} give {swan}")]
    EMismatch { at: String, pg: StairSeq, formula: i64, swan: i64, sw_t1: u64, sw_t2: u64, sw_e: u64 },
    #[error("blow-up depth cap {cap} exceeded")]
    DepthCap { cap: usize, partial: Box<SimResult> },
    #[error("sweep over {0} points is too large")]
    SweepTooLarge(u128),
    #[error(transparent)]
    Polygon(#[from] PolygonError),
    #[error(transparent)]
    Reduce(#[from] ReduceError),
    #[error(transparent)]
    Laurent(#[from] LaurentError),
    #[error(transparent)]
    Field(#[from] FieldError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SimMode {
    /// Test roots of the leading coefficient along `E` (and of its derivative).
    Candidates,
    /// Test every point of `E` over small extensions.
    Sweep,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SimConfig {
    pub mode: SimMode,
    pub ext_cap: usize,
    pub sweep_degree: usize,
    pub depth_cap: usize,
    /// Kept for interface compatibility; the simulator works with exact germs.
    pub precision: PrecisionBudget,
}

impl Default for SimConfig {
    fn default() -> Self {
        SimConfig {
            mode: SimMode::Candidates,
            ext_cap: 6,
            sweep_degree: 2,
            depth_cap: 32,
            precision: PrecisionBudget::default(),
        }
    }
}

/// One step from a node to a child.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Step {
    /// The origin of a chart: `A` keeps `t2`'s strict transform, `B` meets
    /// the strict transform of `t1 = 0`.
    Origin { chart: Chart },
    /// `v = point` in chart `A`, one representative of a Galois orbit.
    OffOrigin { point: String, degree: usize, minpoly: String },
}

impl fmt::Display for Step {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Step::Origin { chart } => write!(f, "{chart:?}0"),
            Step::OffOrigin { point, .. } => write!(f, "A[v={point}]"),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SwanTriple {
    pub t1: u64,
    pub t2: u64,
    pub e: u64,
}

#[derive(Clone, Debug, Serialize)]
pub struct BlowupNode {
    pub provenance: Vec<Step>,
    pub t: PointType,
    pub field: String,
    /// Local good representative.
    pub local: String,
    pub pg: StairSeq,
    pub e: i64,
    pub mu: u64,
    /// Size of the Galois orbit this point stands for, over the parent's field.
    pub weight: u64,
    pub clean: bool,
    pub constant_added: bool,
    pub swan: SwanTriple,
    /// Whether the local staircase equals the transformed parent staircase
    /// (only for chart origins).
    pub chart_consistent: Option<bool>,
    /// Minimal polynomials of certified non-clean points off the chart origins.
    pub off_origin: Vec<String>,
    pub points_tested: usize,
    pub partial_roots: bool,
    /// Set when the depth cap stopped the recursion here.
    pub truncated: bool,
    pub children: Vec<BlowupNode>,
}

impl BlowupNode {
    /// `mu` here plus the orbit-weighted contributions below.
    pub fn weighted_mu(&self) -> u64 {
        self.mu + self.children.iter().map(|c| c.weight * c.weighted_mu()).sum::<u64>()
    }

    /// Number of blow-up levels below and including this node.
    pub fn blowup_depth(&self) -> usize {
        if self.clean {
            0
        } else {
            1 + self.children.iter().map(|c| c.blowup_depth()).max().unwrap_or(0)
        }
    }

    pub fn walk(&self) -> Vec<&BlowupNode> {
        let mut out = vec![self];
        for c in &self.children {
            out.extend(c.walk());
        }
        out
    }

    pub fn label(&self) -> String {
        if self.provenance.is_empty() {
            "root".to_string()
        } else {
            self.provenance.iter().map(|s| s.to_string()).collect::<Vec<_>>().join("/")
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SimFlags {
    pub constant_added_anywhere: bool,
    pub partial_roots: bool,
    /// Always 0: germs are exact, no series are truncated.
    pub precision_escalations: u32,
}

#[derive(Clone, Debug, Serialize)]
pub struct SimResult {
    pub r_x: u64,
    pub tree: BlowupNode,
    pub flags: SimFlags,
}

impl SimResult {
    /// Every chart origin reproduces the transformed staircase and no
    /// non-clean points appear off the chart origins: the situation the
    /// combinatorial recursion models.
    pub fn good_regime(&self) -> bool {
        self.tree
            .walk()
            .iter()
            .all(|n| n.chart_consistent != Some(false) && n.off_origin.is_empty())
    }

    /// `(node label, off-origin minimal polynomials)` for every node.
    pub fn noncleans_by_node(&self) -> Vec<(String, Vec<String>)> {
        self.tree.walk().iter().map(|n| (n.label(), n.off_origin.clone())).collect()
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("serializable")
    }
}

struct NodeInput {
    germ: Germ,
    t: PointType,
    provenance: Vec<Step>,
    weight: u64,
    expected_pg: Option<StairSeq>,
}

pub fn simulate(f: &LaurentPoly, t: PointType, cfg: &SimConfig) -> Result<SimResult, SimError> {
    if cfg.depth_cap == 0 || cfg.sweep_degree == 0 || cfg.ext_cap == 0 {
        return Err(SimError::InvalidInput("depth_cap, sweep_degree and ext_cap must be at least 1".into()));
    }
    if !f.is_exact() {
        return Err(SimError::InvalidInput("input must be an exact Laurent polynomial".into()));
    }
    if t == PointType::One && f.valuation_along(Divisor::T2).is_some_and(|v| v < 0) {
        return Err(SimError::InvalidInput("a type I point has no pole along t2".into()));
    }
    let root = NodeInput { germ: Germ::from_poly(f.clone()), t, provenance: Vec::new(), weight: 1, expected_pg: None };
    let tree = simulate_node(root, cfg, 0)?;
    let nodes = tree.walk();
    let flags = SimFlags {
        constant_added_anywhere: nodes.iter().any(|n| n.constant_added),
        partial_roots: nodes.iter().any(|n| n.partial_roots),
        precision_escalations: 0,
    };
    let truncated = nodes.iter().any(|n| n.truncated);
    let result = SimResult { r_x: tree.weighted_mu(), tree, flags };
    if truncated {
        return Err(SimError::DepthCap { cap: cfg.depth_cap, partial: Box::new(result) });
    }
    Ok(result)
}

fn simulate_node(input: NodeInput, cfg: &SimConfig, depth: usize) -> Result<BlowupNode, SimError> {
    let NodeInput { germ, t, provenance, weight, expected_pg } = input;
    let rep = good_rep_germ(&germ)?;
    let g = rep.g;
    let pg = rep.pg;
    let clean = is_clean_shape(&pg, t);
    let sw_t1 = dvr_along(&g, Divisor::T1).value;
    let sw_t2 = dvr_along(&g, Divisor::T2).value;
    let along_e = dvr_along(&g, Divisor::E);
    let swan_e = sw_t1 as i64 + if t == PointType::Two { sw_t2 as i64 } else { 0 } - along_e.value as i64;
    let formula = if pg.is_empty() { 0 } else { e_value(&pg)? };
    let at = || {
        if provenance.is_empty() {
            "root".to_string()
        } else {
            provenance.iter().map(|s| s.to_string()).collect::<Vec<_>>().join("/")
        }
    };
    if formula != swan_e {
        return Err(SimError::EMismatch {
            at: at(),
            pg,
            formula,
            swan: swan_e,
            sw_t1,
            sw_t2,
            sw_e: along_e.value,
        });
    }
    let mu_here = mu(formula, t)?;
    let mut node = BlowupNode {
        chart_consistent: expected_pg.map(|e| e == pg),
        provenance,
        t,
        field: g.ctx().label(),
        local: g.to_string(),
        pg: pg.clone(),
        e: formula,
        mu: mu_here,
        weight,
        clean,
        constant_added: rep.constant_added,
        swan: SwanTriple { t1: sw_t1, t2: sw_t2, e: along_e.value },
        off_origin: Vec::new(),
        points_tested: 0,
        partial_roots: false,
        truncated: false,
        children: Vec::new(),
    };
    if clean {
        return Ok(node);
    }
    if depth + 1 > cfg.depth_cap {
        node.truncated = true;
        return Ok(node);
    }
    let germ_a = g.substitute_chart(Chart::A);
    let germ_b = g.substitute_chart(Chart::B);
    let scan = noncleans_on_e(&germ_a, along_e.value, along_e.leading.as_ref(), cfg)?;
    node.points_tested = scan.tested;
    node.partial_roots = scan.partial;
    node.off_origin = scan.points.iter().map(|p| p.minpoly.to_string()).collect();

    let child_path = |step: Step| {
        let mut p = node.provenance.clone();
        p.push(step);
        p
    };
    let mut inputs = vec![
        NodeInput {
            germ: germ_b,
            t: PointType::Two,
            provenance: child_path(Step::Origin { chart: Chart::B }),
            weight: 1,
            expected_pg: Some(chart_b_child(&pg)),
        },
        NodeInput {
            germ: germ_a,
            t,
            provenance: child_path(Step::Origin { chart: Chart::A }),
            weight: 1,
            expected_pg: Some(chart_a_child(&pg)),
        },
    ];
    for pt in scan.points {
        inputs.push(NodeInput {
            provenance: child_path(Step::OffOrigin {
                point: pt.point.to_string(),
                degree: pt.degree,
                minpoly: pt.minpoly.to_string(),
            }),
            germ: pt.local,
            t: PointType::One,
            weight: pt.degree as u64,
            expected_pg: None,
        });
    }
    node.children = inputs
        .into_par_iter()
        .map(|i| simulate_node(i, cfg, depth + 1))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(node)
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
    fn worked_example_two_blowups() {
        for p in [2, 3, 5] {
            let ctx = FieldCtx::new(p, 1).unwrap();
            let r = simulate(&mono(&ctx, 1, -2, 1), PointType::Two, &SimConfig::default()).unwrap();
            assert_eq!(r.r_x, 2, "p = {p}");
            assert_eq!(r.tree.blowup_depth(), 2);
            assert!(r.good_regime());
            let non_clean: Vec<_> = r.tree.walk().into_iter().filter(|n| !n.clean).collect();
            assert_eq!(non_clean.len(), 2);
            assert_eq!(non_clean[1].pg, StairSeq::from_pairs(&[(0, 0), (1, 1)]).unwrap());
        }
    }

    #[test]
    fn clean_and_trivial_inputs() {
        let f5 = FieldCtx::new(5, 1).unwrap();
        let r = simulate(&mono(&f5, 1, -1, 0), PointType::One, &SimConfig::default()).unwrap();
        assert_eq!((r.r_x, r.tree.children.len()), (0, 0));
        let r = simulate(&LaurentPoly::zero(&f5), PointType::Two, &SimConfig::default()).unwrap();
        assert_eq!(r.r_x, 0);
    }

    #[test]
    fn case_one_rejects_t2_poles() {
        let f3 = FieldCtx::new(3, 1).unwrap();
        assert!(matches!(
            simulate(&mono(&f3, 1, -1, -1), PointType::One, &SimConfig::default()),
            Err(SimError::InvalidInput(_))
        ));
    }

    #[test]
    fn depth_cap_returns_partial_tree() {
        let f3 = FieldCtx::new(3, 1).unwrap();
        let cfg = SimConfig { depth_cap: 1, ..SimConfig::default() };
        match simulate(&mono(&f3, 1, -2, 1), PointType::Two, &cfg) {
            Err(SimError::DepthCap { cap: 1, partial }) => assert_eq!(partial.tree.mu, 1),
            other => panic!("unexpected {other:?}"),
        }
    }
}
