//! Integer combinatorics of pole staircases.
//!
//! A [`StairSeq`] lists the corners `(a, b)` of the pole geometry of a local
//! equation, where `(a, b)` stands for the monomial `t1^{-a} t2^{b}`. Both
//! coordinates increase strictly along the sequence. Everything here is pure
//! integer arithmetic; no field elements enter.

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PolygonError {
    #[error("operation needs a nonempty staircase")]
    Empty,
    #[error("staircase not strictly increasing at index {index}: {prev} then {next}")]
    NotIncreasing { index: usize, prev: CornerPoint, next: CornerPoint },
    #[error("negative e = {0}")]
    NegativeE(i64),
    #[error("r' recursion did not shrink: parent {parent} (len {parent_len}, depth {parent_depth}) produced {child}")]
    NonTerminating { parent: StairSeq, parent_len: usize, parent_depth: i64, child: StairSeq },
    #[error("point type must be 1 or 2, got {0}")]
    BadType(i64),
}

/// A corner `(a, b)`: pole order `a` along `t1`, exponent `b` of `t2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(from = "[i64; 2]", into = "[i64; 2]")]
pub struct CornerPoint {
    pub a: i64,
    pub b: i64,
}

impl CornerPoint {
    pub const fn new(a: i64, b: i64) -> Self {
        CornerPoint { a, b }
    }

    /// Corner of the monomial `t1^m t2^n`.
    pub const fn from_exponent(m: i64, n: i64) -> Self {
        CornerPoint { a: -m, b: n }
    }

    /// The exponent pair `(m, n)` of the corner monomial.
    pub const fn exponent(self) -> (i64, i64) {
        (-self.a, self.b)
    }

    pub fn in_lattice(self, p: i64) -> bool {
        self.a.rem_euclid(p) == 0 && self.b.rem_euclid(p) == 0
    }
}

impl From<[i64; 2]> for CornerPoint {
    fn from([a, b]: [i64; 2]) -> Self {
        CornerPoint { a, b }
    }
}

impl From<CornerPoint> for [i64; 2] {
    fn from(c: CornerPoint) -> Self {
        [c.a, c.b]
    }
}

impl fmt::Display for CornerPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.a, self.b)
    }
}

/// A staircase of corners, strictly increasing in both coordinates.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<CornerPoint>", into = "Vec<CornerPoint>")]
pub struct StairSeq {
    points: Vec<CornerPoint>,
}

impl TryFrom<Vec<CornerPoint>> for StairSeq {
    type Error = PolygonError;
    fn try_from(points: Vec<CornerPoint>) -> Result<Self, Self::Error> {
        StairSeq::new(points)
    }
}

impl From<StairSeq> for Vec<CornerPoint> {
    fn from(s: StairSeq) -> Self {
        s.points
    }
}

impl StairSeq {
    pub fn new(points: Vec<CornerPoint>) -> Result<Self, PolygonError> {
        for (index, w) in points.windows(2).enumerate() {
            if !(w[0].a < w[1].a && w[0].b < w[1].b) {
                return Err(PolygonError::NotIncreasing { index: index + 1, prev: w[0], next: w[1] });
            }
        }
        Ok(StairSeq { points })
    }

    pub fn from_pairs(pairs: &[(i64, i64)]) -> Result<Self, PolygonError> {
        Self::new(pairs.iter().map(|&(a, b)| CornerPoint::new(a, b)).collect())
    }

    pub fn empty() -> Self {
        StairSeq { points: Vec::new() }
    }

    pub fn points(&self) -> &[CornerPoint] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn first(&self) -> Option<CornerPoint> {
        self.points.first().copied()
    }

    pub fn last(&self) -> Option<CornerPoint> {
        self.points.last().copied()
    }

    /// Some corner lies in `a >= 0, b <= 0`.
    pub fn meets_quadrant(&self) -> bool {
        self.points.iter().any(|c| c.a >= 0 && c.b <= 0)
    }

    fn pick(&self, idx: &[usize], f: impl Fn(CornerPoint) -> CornerPoint) -> Result<StairSeq, PolygonError> {
        StairSeq::new(idx.iter().map(|&i| f(self.points[i])).collect())
    }
}

impl fmt::Display for StairSeq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.points.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

/// type I: one boundary branch through the point; type II: two.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum PointType {
    #[serde(rename = "I")]
    One,
    #[serde(rename = "II")]
    Two,
}

impl PointType {
    pub fn from_number(t: i64) -> Result<Self, PolygonError> {
        match t {
            1 => Ok(PointType::One),
            2 => Ok(PointType::Two),
            other => Err(PolygonError::BadType(other)),
        }
    }

    pub fn number(self) -> i64 {
        match self {
            PointType::One => 1,
            PointType::Two => 2,
        }
    }
}

impl fmt::Display for PointType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PointType::One => "I",
            PointType::Two => "II",
        })
    }
}

/// `(b1 - b0) / (a1 - a0)` compared exactly; denominators are positive.
fn cmp_slope(from: CornerPoint, x: CornerPoint, y: CornerPoint) -> Ordering {
    let (nx, dx) = ((x.b - from.b) as i128, (x.a - from.a) as i128);
    let (ny, dy) = ((y.b - from.b) as i128, (y.a - from.a) as i128);
    (nx * dy).cmp(&(ny * dx))
}

/// Essential vertices: from each chosen vertex jump to the farthest index
/// attaining the minimal slope.
pub fn ess(seq: &StairSeq) -> Result<StairSeq, PolygonError> {
    let pts = seq.points();
    if pts.is_empty() {
        return Err(PolygonError::Empty);
    }
    let k = pts.len() - 1;
    let mut out = vec![pts[0]];
    let mut cur = 0;
    while cur < k {
        let mut best = cur + 1;
        for j in cur + 2..=k {
            if cmp_slope(pts[cur], pts[j], pts[best]) != Ordering::Greater {
                best = j;
            }
        }
        out.push(pts[best]);
        cur = best;
    }
    StairSeq::new(out)
}

/// `sum_t (a_{t+1} - a_t)(b_{t+1} + b_t - 2 b_0)`: twice the area between the
/// polyline and the horizontal line through the first vertex.
pub fn area(seq: &StairSeq) -> i64 {
    let pts = seq.points();
    let Some(first) = pts.first() else { return 0 };
    pts.windows(2)
        .map(|w| (w[1].a - w[0].a) * (w[1].b + w[0].b - 2 * first.b))
        .sum()
}

/// `max(a_k, 0) + max(-b_0, 0) - max(max_i (a_i - b_i), 0)`.
pub fn e_value(seq: &StairSeq) -> Result<i64, PolygonError> {
    let (first, last) = seq.first().zip(seq.last()).ok_or(PolygonError::Empty)?;
    let max_diff = seq.points().iter().map(|c| c.a - c.b).max().expect("nonempty");
    Ok(last.a.max(0) + (-first.b).max(0) - max_diff.max(0))
}

/// `e(e-1)` in type I, `e^2` in type II.
pub fn mu(e: i64, t: PointType) -> Result<u64, PolygonError> {
    if e < 0 {
        return Err(PolygonError::NegativeE(e));
    }
    let e = e as u64;
    Ok(match t {
        PointType::One => e * e.saturating_sub(1),
        PointType::Two => e * e,
    })
}

pub fn depth(seq: &StairSeq) -> i64 {
    match (seq.first(), seq.last()) {
        (Some(f), Some(l)) => l.a - f.a + l.b - f.b,
        _ => 0,
    }
}

/// Index sets selecting the minimal corners of the two transformed staircases
/// `(a_j, b_j - a_j)` (the `J_a` child) and `(a_j - b_j, b_j)` (the `J_b` child).
pub fn j_sets(seq: &StairSeq) -> (Vec<usize>, Vec<usize>) {
    j_sets_with(seq, JaRule::Corrected)
}

/// Which reading of the `J_a` filter the recursion uses. Only
/// [`JaRule::Corrected`] agrees with the closed form; the other exists so the
/// corpus runner can demonstrate that it does not.
#[doc(hidden)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum JaRule {
    Corrected,
    /// `b_j - a_j < max_{j < i <= k} (b_i - a_i)`, empty max = -infinity.
    Printed,
}

fn j_sets_with(seq: &StairSeq, rule: JaRule) -> (Vec<usize>, Vec<usize>) {
    let pts = seq.points();
    let k = pts.len();
    let mut ja = Vec::new();
    // suffix extremum of b_i - a_i over i > j
    let mut suffix: Option<i64> = None;
    for j in (0..k).rev() {
        let d = pts[j].b - pts[j].a;
        let keep = match (rule, suffix) {
            (JaRule::Corrected, None) => true,
            (JaRule::Corrected, Some(m)) => d < m,
            (JaRule::Printed, None) => false,
            (JaRule::Printed, Some(m)) => d < m,
        };
        if keep {
            ja.push(j);
        }
        suffix = Some(match (rule, suffix) {
            (_, None) => d,
            (JaRule::Corrected, Some(m)) => m.min(d),
            (JaRule::Printed, Some(m)) => m.max(d),
        });
    }
    ja.reverse();
    let mut jb = Vec::new();
    let mut prefix_max: Option<i64> = None;
    for (j, c) in pts.iter().enumerate() {
        let d = c.a - c.b;
        if prefix_max.is_none_or(|m| d > m) {
            jb.push(j);
        }
        prefix_max = Some(prefix_max.map_or(d, |m| m.max(d)));
    }
    (ja, jb)
}

/// The staircase seen at the origin of the chart where the exceptional divisor
/// becomes the new `t2` (always type II).
pub fn chart_b_child(seq: &StairSeq) -> StairSeq {
    let (ja, _) = j_sets(seq);
    seq.pick(&ja, |c| CornerPoint::new(c.a, c.b - c.a)).expect("J_a selects a staircase")
}

/// The staircase seen at the origin of the chart where the exceptional divisor
/// becomes the new `t1` (keeps the point type).
pub fn chart_a_child(seq: &StairSeq) -> StairSeq {
    let (_, jb) = j_sets(seq);
    seq.pick(&jb, |c| CornerPoint::new(c.a - c.b, c.b)).expect("J_b selects a staircase")
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RPrimeStep {
    pub input: StairSeq,
    pub t: PointType,
    pub e: i64,
    pub mu: u64,
    pub j_a: Vec<usize>,
    pub j_b: Vec<usize>,
}

/// Result of the recursive invariant with one record per non-singleton call.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RPrimeTrace {
    pub total: u64,
    pub steps: Vec<RPrimeStep>,
}

pub fn r_prime(seq: &StairSeq, t: PointType) -> Result<RPrimeTrace, PolygonError> {
    r_prime_with_rule(seq, t, JaRule::Corrected)
}

#[doc(hidden)]
pub fn r_prime_with_rule(seq: &StairSeq, t: PointType, rule: JaRule) -> Result<RPrimeTrace, PolygonError> {
    let mut steps = Vec::new();
    let total = r_prime_rec(seq, t, rule, &mut steps)?;
    Ok(RPrimeTrace { total, steps })
}

fn r_prime_rec(seq: &StairSeq, t: PointType, rule: JaRule, steps: &mut Vec<RPrimeStep>) -> Result<u64, PolygonError> {
    if seq.len() <= 1 {
        return Ok(0);
    }
    let e = e_value(seq)?;
    let m = mu(e, t)?;
    let (ja, jb) = j_sets_with(seq, rule);
    let child_b = seq.pick(&ja, |c| CornerPoint::new(c.a, c.b - c.a))?;
    let child_a = seq.pick(&jb, |c| CornerPoint::new(c.a - c.b, c.b))?;
    let measure = |s: &StairSeq| (s.len(), depth(s));
    for child in [&child_b, &child_a] {
        if measure(child) >= measure(seq) {
            return Err(PolygonError::NonTerminating {
                parent: seq.clone(),
                parent_len: seq.len(),
                parent_depth: depth(seq),
                child: child.clone(),
            });
        }
    }
    steps.push(RPrimeStep { input: seq.clone(), t, e, mu: m, j_a: ja, j_b: jb });
    let rb = r_prime_rec(&child_b, PointType::Two, rule, steps)?;
    let ra = r_prime_rec(&child_a, t, rule, steps)?;
    Ok(m + rb + ra)
}

/// `area(ess(A)) + (t - 2)(a_k - a_0)`.
pub fn r_prime_closed(seq: &StairSeq, t: PointType) -> i64 {
    if seq.is_empty() {
        return 0;
    }
    let hull = ess(seq).expect("nonempty");
    let (first, last) = (seq.first().expect("nonempty"), seq.last().expect("nonempty"));
    area(&hull) + (t.number() - 2) * (last.a - first.a)
}

/// Upper bound for `r_x` in absolute coordinates `(A_i, B_i)`:
/// type I `A_k (B_k - 1)`, type II `A_k (B_k - B_0) + (-B_0)(A_k - A_0)`.
pub fn kato_bound(seq: &StairSeq, t: PointType) -> i64 {
    let (Some(first), Some(last)) = (seq.first(), seq.last()) else { return 0 };
    match t {
        PointType::One => last.a * (last.b - 1),
        PointType::Two => last.a * (last.b - first.b) + (-first.b) * (last.a - first.a),
    }
}

/// Clean shapes: a singleton, or in type I also `((a_0, b_0), (a_1, b_0 + 1))`.
/// The empty staircase (trivial character) counts as clean.
pub fn is_clean_shape(seq: &StairSeq, t: PointType) -> bool {
    match (seq.points(), t) {
        ([] | [_], _) => true,
        ([c0, c1], PointType::One) => c1.b == c0.b + 1,
        _ => false,
    }
}
