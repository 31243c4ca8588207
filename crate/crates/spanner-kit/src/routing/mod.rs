//! Local routing on the half-Θ6-graph and simulated routing on G12 / G9.
//!
//! Negative routing from `s` to `t` works inside `T(t→s)`, split by the cones
//! of `s` into `X0` (the negative cone holding `t`), `X1` (the positive cone
//! on the side of corner `a`) and `X2` (the positive cone on the side of `b`).
//! Corner `a` is the counter-clockwise corner of `T(t→s)`.

mod engine;
mod substrate;

use serde::{Deserialize, Serialize};

use crate::build::{half_cones, GraphKind, SpannerGraph};
use crate::error::{Result, SpannerError};
use crate::geom::{CanonicalTriangle, ConeIndex, Vec2, EPS};

pub use engine::{route_g12, route_g9, route_stateful};

/// Case of a routing step.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CaseLabel {
    A,
    B,
    C,
    D,
    #[serde(rename = "cal_A")]
    CalA,
    #[serde(rename = "cal_B")]
    CalB,
    #[serde(rename = "cal_C")]
    CalC,
}

/// A positive-cone region of `T(t→s)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Side {
    X1,
    X2,
}

impl Side {
    pub fn other(self) -> Self {
        match self {
            Side::X1 => Side::X2,
            Side::X2 => Side::X1,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MemoryBudget {
    Zero,
    Constant,
}

/// What a router knows when it stands at `current`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RoutingState {
    pub current: u32,
    pub destination: u32,
    pub case_label: CaseLabel,
    pub preferred_side: Option<Side>,
    pub memory_budget: MemoryBudget,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PotentialValue {
    pub vertical: f64,
    pub horizontal: f64,
    pub total: f64,
}

impl PotentialValue {
    fn new(vertical: f64, horizontal: f64) -> Self {
        Self { vertical, horizontal, total: vertical + horizontal }
    }

    fn zero() -> Self {
        Self::new(0.0, 0.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Algo {
    Stateless,
    Stateful,
    G12,
    G9,
}

impl std::str::FromStr for Algo {
    type Err = SpannerError;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "stateless" => Ok(Algo::Stateless),
            "stateful" => Ok(Algo::Stateful),
            "g12" => Ok(Algo::G12),
            "g9" => Ok(Algo::G9),
            _ => Err(SpannerError::InvalidParameter(format!("unknown routing algorithm {s}"))),
        }
    }
}

/// One step along a half-Θ6 edge `(from, to)`. For simulated routing `len`
/// is the distance actually walked in the sparse graph and `walk` lists the
/// vertices visited, exploration included.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RoutingStep {
    pub from: u32,
    pub to: u32,
    pub case: CaseLabel,
    pub phi_before: f64,
    pub phi_after: f64,
    pub len: f64,
    pub edge_len: f64,
    #[serde(default)]
    pub exploration: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub preferred_side: Option<Side>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub walk: Vec<u32>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RoutingTrace {
    pub algo: Algo,
    pub source: u32,
    pub target: u32,
    pub steps: Vec<RoutingStep>,
    pub total: f64,
    pub exploration: f64,
    /// Ratio bound of the half-Θ6 engines for this pair.
    pub ratio_bound: f64,
    /// One-time additive allowance charged by a failed side probe.
    pub slack: f64,
    /// Allowed `total + exploration`.
    pub bound: f64,
    pub pass: bool,
    pub success: bool,
}

impl RoutingTrace {
    /// Vertex ids from source to target along the logical half-Θ6 steps.
    pub fn vertices(&self) -> Vec<u32> {
        let mut v = vec![self.source];
        v.extend(self.steps.iter().map(|s| s.to));
        v
    }

    /// Every vertex walked, exploration included.
    pub fn walked(&self) -> Vec<u32> {
        let mut v = vec![self.source];
        for s in &self.steps {
            if s.walk.is_empty() {
                v.push(s.to);
            } else {
                v.extend(&s.walk[1..]);
            }
        }
        v
    }

    pub fn starts_positive(&self) -> bool {
        matches!(self.steps.first().map(|s| s.case), Some(CaseLabel::A | CaseLabel::CalA))
    }
}

/// `T(t→s)` and the cones of `s` splitting it.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Regions {
    pub tri: CanonicalTriangle,
    pub neg: ConeIndex,
    pub a: Vec2,
    pub b: Vec2,
    pub s: Vec2,
}

impl Regions {
    pub fn new(g: &SpannerGraph, s: usize, t: usize) -> Result<Self> {
        let tri = half_cones().canonical_triangle(g.points().get(t), g.points().get(s))?;
        Ok(Self { tri, neg: g.cone6(s, t), a: tri.corner_a(), b: tri.corner_b(), s: g.pos(s) })
    }

    pub fn side_cone(&self, side: Side) -> ConeIndex {
        match side {
            Side::X1 => ConeIndex((self.neg.0 + 1) % 6),
            Side::X2 => ConeIndex((self.neg.0 + 5) % 6),
        }
    }

    pub fn corner(&self, side: Side) -> Vec2 {
        match side {
            Side::X1 => self.a,
            Side::X2 => self.b,
        }
    }

    pub fn corner_dist(&self, side: Side) -> f64 {
        self.s.dist(self.corner(side))
    }

    /// The side whose corner is nearer to `s`; ties go to `X2`.
    pub fn smaller(&self) -> Side {
        if self.corner_dist(Side::X1) < self.corner_dist(Side::X2) {
            Side::X1
        } else {
            Side::X2
        }
    }

    fn cone_of(&self, p: Vec2) -> ConeIndex {
        half_cones().cone_of_angle((p - self.s).angle())
    }

    pub fn in_x0(&self, p: Vec2) -> bool {
        p != self.s && self.cone_of(p) == self.neg && self.tri.contains(p)
    }

    pub fn in_side(&self, side: Side, p: Vec2) -> bool {
        p != self.s && self.cone_of(p) == self.side_cone(side) && self.tri.contains(p)
    }

    /// Clockwise angular offset of `p` inside the negative cone.
    pub fn clockwise_offset(&self, p: Vec2) -> f64 {
        crate::geom::normalize_angle((p - self.s).angle() - half_cones().ccw_boundary(self.neg.0))
    }

    /// True when `p` (in the negative cone, outside `X0`) is beyond the
    /// `b`-side boundary of `T(t→s)`.
    pub fn beyond_b(&self, p: Vec2) -> bool {
        self.tri.lateral(p) > 0.0
    }

    /// Potential of case B, C (with `x` the corner of `nonempty`) or D.
    pub fn potential(&self, case: CaseLabel, nonempty: Option<Side>) -> PotentialValue {
        let ta = self.tri.size();
        let (sa, sb) = (self.corner_dist(Side::X1), self.corner_dist(Side::X2));
        match case {
            CaseLabel::B => PotentialValue::new(ta, sa.min(sb)),
            CaseLabel::C | CaseLabel::CalC => {
                PotentialValue::new(ta, self.corner_dist(nonempty.expect("case C names a side")))
            }
            _ => PotentialValue::new(ta, self.a.dist(self.b) + sa.min(sb)),
        }
    }
}

fn require_half(h: &SpannerGraph) -> Result<()> {
    if h.kind() != GraphKind::HalfTheta6 {
        return Err(SpannerError::InvalidParameter(format!("expected a half_theta6 graph, got {}", h.kind().name())));
    }
    Ok(())
}

fn check_pair(g: &SpannerGraph, s: usize, t: usize) -> Result<()> {
    if s >= g.len() || t >= g.len() {
        return Err(SpannerError::InvalidParameter("vertex index out of range".into()));
    }
    if s == t {
        return Err(SpannerError::AlreadyArrived);
    }
    Ok(())
}

/// Potential of case A with `T(s→t)`.
pub(crate) fn potential_a(g: &SpannerGraph, s: usize, t: usize) -> Result<PotentialValue> {
    let tri = half_cones().canonical_triangle(g.points().get(s), g.points().get(t))?;
    let pt = g.pos(t);
    Ok(PotentialValue::new(tri.size(), tri.corner_a().dist(pt).max(pt.dist(tri.corner_b()))))
}

/// Locally decided emptiness of a side region: the single positive-cone edge
/// of `s` for that cone is absent or leaves the region.
fn side_edge(h: &SpannerGraph, s: usize, r: &Regions, side: Side) -> Option<usize> {
    h.neighbor_in_cone(s, r.side_cone(side)).filter(|&v| r.in_side(side, h.pos(v)))
}

/// `X0` neighbours of `s`, in clockwise order.
fn x0_edges(h: &SpannerGraph, s: usize, r: &Regions) -> Vec<usize> {
    let mut v: Vec<usize> = h.neighbors(s).iter().copied().filter(|&y| r.in_x0(h.pos(y))).collect();
    v.sort_by(|&x, &y| r.clockwise_offset(h.pos(x)).total_cmp(&r.clockwise_offset(h.pos(y))));
    v
}

/// Stateless case of routing from `s` to `t`.
pub fn classify_case(h: &SpannerGraph, s: usize, t: usize) -> Result<CaseLabel> {
    require_half(h)?;
    check_pair(h, s, t)?;
    if h.cone6(s, t).is_positive() {
        return Ok(CaseLabel::A);
    }
    let r = Regions::new(h, s, t)?;
    let e1 = side_edge(h, s, &r, Side::X1).is_none();
    let e2 = side_edge(h, s, &r, Side::X2).is_none();
    Ok(match (e1, e2) {
        (true, true) => CaseLabel::B,
        (false, false) => CaseLabel::D,
        _ => CaseLabel::C,
    })
}

/// Potential of the given case at `s`; in case C the corner used is the one
/// of the non-empty side. `cal_B` uses the case D formula; `cal_C` depends on
/// the preferred side and is rejected here.
pub fn potential(h: &SpannerGraph, s: usize, t: usize, case: CaseLabel) -> Result<PotentialValue> {
    let actual = classify_case(h, s, t)?;
    let inapplicable = || SpannerError::InvalidParameter(format!("case {case:?} does not apply here (actual {actual:?})"));
    let ok = match case {
        CaseLabel::A | CaseLabel::CalA => actual == CaseLabel::A,
        CaseLabel::B | CaseLabel::C | CaseLabel::D => actual == case,
        CaseLabel::CalB => actual != CaseLabel::A,
        CaseLabel::CalC => false,
    };
    if !ok {
        return Err(inapplicable());
    }
    if actual == CaseLabel::A {
        return potential_a(h, s, t);
    }
    let r = Regions::new(h, s, t)?;
    let nonempty = [Side::X1, Side::X2].into_iter().find(|&x| side_edge(h, s, &r, x).is_some());
    Ok(r.potential(if case == CaseLabel::CalB { CaseLabel::D } else { case }, nonempty))
}

/// Ratio bound for routing from `s` to `t`: `√3cosα + sinα` when `t` lies in
/// a positive cone of `s`, else `5/√3·cosα − sinα`.
pub fn routing_bound(g: &SpannerGraph, s: usize, t: usize) -> Result<f64> {
    let cs = half_cones();
    let alpha = cs.angle_alpha(g.pos(s), g.pos(t))?;
    Ok(if g.cone6(s, t).is_positive() {
        3f64.sqrt() * alpha.cos() + alpha.sin()
    } else {
        5.0 / 3f64.sqrt() * alpha.cos() - alpha.sin()
    })
}

pub(crate) fn finish(
    g: &SpannerGraph,
    algo: Algo,
    s: usize,
    t: usize,
    steps: Vec<RoutingStep>,
    factor: f64,
    slack: f64,
) -> Result<RoutingTrace> {
    let total: f64 = steps.iter().map(|x| x.len).sum();
    let exploration: f64 = steps.iter().map(|x| x.exploration).sum();
    let ratio_bound = routing_bound(g, s, t)?;
    let bound = factor * ratio_bound * g.dist(s, t) + slack;
    Ok(RoutingTrace {
        algo,
        source: g.id(s),
        target: g.id(t),
        success: steps.last().is_some_and(|x| x.to == g.id(t)),
        steps,
        total,
        exploration,
        ratio_bound,
        slack,
        pass: total + exploration <= bound + EPS,
        bound,
    })
}

fn stateless_next(h: &SpannerGraph, s: usize, t: usize, case: CaseLabel) -> Result<Option<usize>> {
    if case == CaseLabel::A {
        return Ok(h.neighbor_in_cone(s, h.cone6(s, t)));
    }
    let r = Regions::new(h, s, t)?;
    let x0 = x0_edges(h, s, &r);
    let (first, last) = (x0.first().copied(), x0.last().copied());
    let e1 = side_edge(h, s, &r, Side::X1);
    let e2 = side_edge(h, s, &r, Side::X2);
    Ok(match case {
        CaseLabel::B => {
            if r.corner_dist(Side::X1) >= r.corner_dist(Side::X2) {
                last
            } else {
                first
            }
        }
        CaseLabel::C => {
            if e1.is_none() {
                last.or(e2)
            } else {
                first.or(e1)
            }
        }
        _ => first.or(match r.smaller() {
            Side::X1 => e1,
            Side::X2 => e2,
        }),
    })
}

/// Memoryless routing on a half-Θ6-graph.
pub fn route_stateless(h: &SpannerGraph, s: usize, t: usize) -> Result<RoutingTrace> {
    require_half(h)?;
    check_pair(h, s, t)?;
    let mut steps = Vec::new();
    let mut seen = vec![false; h.len()];
    let mut cur = s;
    let mut case = classify_case(h, cur, t)?;
    let mut phi = potential(h, cur, t, case)?;
    while cur != t {
        seen[cur] = true;
        let v = stateless_next(h, cur, t, case)?.ok_or_else(|| {
            SpannerError::InternalInvariantViolation(format!("no edge to follow at {} in case {case:?}", h.id(cur)))
        })?;
        if seen[v] {
            return Err(SpannerError::InternalInvariantViolation(format!("route revisits {}", h.id(v))));
        }
        let (next_case, next_phi) = if v == t {
            (case, PotentialValue::zero())
        } else {
            let c = classify_case(h, v, t)?;
            (c, potential(h, v, t, c)?)
        };
        steps.push(RoutingStep {
            from: h.id(cur),
            to: h.id(v),
            case,
            phi_before: phi.total,
            phi_after: next_phi.total,
            len: h.dist(cur, v),
            edge_len: h.dist(cur, v),
            exploration: 0.0,
            preferred_side: None,
            walk: Vec::new(),
        });
        cur = v;
        case = next_case;
        phi = next_phi;
    }
    finish(h, Algo::Stateless, s, t, steps, 1.0, 0.0)
}

/// Dispatches on `algo`; `g` must be of the matching kind.
pub fn route(g: &SpannerGraph, algo: Algo, s: usize, t: usize) -> Result<RoutingTrace> {
    match algo {
        Algo::Stateless => route_stateless(g, s, t),
        Algo::Stateful => route_stateful(g, s, t),
        Algo::G12 => route_g12(g, s, t),
        Algo::G9 => route_g9(g, s, t),
    }
}

#[cfg(test)]
mod tests;
