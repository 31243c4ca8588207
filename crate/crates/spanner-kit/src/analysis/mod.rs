//! Exact spanning-ratio measurement and theorem-bound checks.

mod theta5;

pub use theta5::{theta5_witness_path, WITNESS_CONSTANT};

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::f64::consts::PI;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::build::{build_half_theta6, canonical_path, GraphKind, SpannerGraph};
use crate::error::{Result, SpannerError};
use crate::geom::EPS;

/// One row of the optional per-pair table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairRow {
    pub u: u32,
    pub v: u32,
    pub graph_distance: f64,
    pub euclidean: f64,
    pub ratio: f64,
}

/// Result of a spanning-ratio measurement.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RatioReport {
    pub max_ratio: f64,
    /// Pair attaining `max_ratio`; absent for single-vertex graphs.
    pub witness: Option<[u32; 2]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bound: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub pass: Option<bool>,
    #[serde(skip)]
    pub per_pair: Option<Vec<PairRow>>,
}

#[derive(PartialEq)]
struct HeapItem(f64, usize);

impl Eq for HeapItem {}

impl Ord for HeapItem {
    fn cmp(&self, o: &Self) -> Ordering {
        o.0.total_cmp(&self.0).then(o.1.cmp(&self.1))
    }
}

impl PartialOrd for HeapItem {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}

/// Single-source shortest paths; `allowed` restricts the usable vertices.
/// Equal-length alternatives keep the predecessor with the smaller id.
pub fn dijkstra(g: &SpannerGraph, src: usize, allowed: Option<&[bool]>) -> (Vec<f64>, Vec<Option<usize>>) {
    let n = g.len();
    let mut dist = vec![f64::INFINITY; n];
    let mut pred = vec![None; n];
    let mut done = vec![false; n];
    let mut heap = BinaryHeap::new();
    dist[src] = 0.0;
    heap.push(HeapItem(0.0, src));
    while let Some(HeapItem(d, u)) = heap.pop() {
        if done[u] {
            continue;
        }
        done[u] = true;
        for &v in g.neighbors(u) {
            if done[v] || allowed.is_some_and(|a| !a[v]) {
                continue;
            }
            let nd = d + g.dist(u, v);
            let better = nd < dist[v]
                || (nd == dist[v] && pred[v].is_some_and(|p: usize| g.id(u) < g.id(p)));
            if better {
                dist[v] = nd;
                pred[v] = Some(u);
                heap.push(HeapItem(nd, v));
            }
        }
    }
    (dist, pred)
}

fn unwind(pred: &[Option<usize>], src: usize, dst: usize) -> Vec<usize> {
    let mut path = vec![dst];
    let mut cur = dst;
    while cur != src {
        cur = pred[cur].expect("reachable vertex has a predecessor");
        path.push(cur);
    }
    path.reverse();
    path
}

/// Shortest `s`–`t` path as (length, vertices), or `None` if disconnected.
pub fn shortest_path(g: &SpannerGraph, s: usize, t: usize) -> Option<(f64, Vec<usize>)> {
    shortest_path_within(g, s, t, None)
}

fn shortest_path_within(g: &SpannerGraph, s: usize, t: usize, allowed: Option<&[bool]>) -> Option<(f64, Vec<usize>)> {
    let (d, p) = dijkstra(g, s, allowed);
    d[t].is_finite().then(|| (d[t], unwind(&p, s, t)))
}

/// Length of a vertex path.
pub fn path_length(g: &SpannerGraph, path: &[usize]) -> f64 {
    path.windows(2).map(|w| g.dist(w[0], w[1])).sum()
}

/// Maximum over all pairs of graph distance divided by Euclidean distance.
pub fn spanning_ratio(g: &SpannerGraph) -> Result<RatioReport> {
    measure(g, false)
}

/// As [`spanning_ratio`] and also fills the per-pair table.
pub fn spanning_ratio_with_pairs(g: &SpannerGraph) -> Result<RatioReport> {
    measure(g, true)
}

fn measure(g: &SpannerGraph, per_pair: bool) -> Result<RatioReport> {
    let n = g.len();
    if n == 0 {
        return Err(SpannerError::InvalidParameter("empty graph".into()));
    }
    let rows: Vec<(f64, usize, usize, Vec<PairRow>)> = (0..n)
        .into_par_iter()
        .map(|u| {
            let (dist, _) = dijkstra(g, u, None);
            let mut best = (f64::NEG_INFINITY, usize::MAX, usize::MAX);
            let mut table = Vec::new();
            for v in u + 1..n {
                let e = g.dist(u, v);
                let r = dist[v] / e;
                if r > best.0 {
                    best = (r, u, v);
                }
                if per_pair {
                    table.push(PairRow { u: g.id(u), v: g.id(v), graph_distance: dist[v], euclidean: e, ratio: r });
                }
            }
            (best.0, best.1, best.2, table)
        })
        .collect();
    let mut best = (f64::NEG_INFINITY, None);
    for (r, u, v, _) in &rows {
        if *u != usize::MAX && *r > best.0 {
            best = (*r, Some([g.id(*u), g.id(*v)]));
        }
    }
    let (max_ratio, witness) = if best.1.is_some() { best } else { (1.0, None) };
    let per_pair = per_pair.then(|| rows.into_iter().flat_map(|r| r.3).collect());
    Ok(RatioReport { max_ratio, witness, bound: None, pass: None, per_pair })
}

/// Outcome of [`restricted_pair_check`].
#[derive(Debug, Clone, PartialEq)]
pub struct RestrictedCheck {
    pub path: Vec<usize>,
    pub length: f64,
    pub bound: f64,
    pub ok: bool,
}

/// Shortest `u`–`w` path through vertices of T(u→w) only, compared with
/// `(√3 cos α + sin α)|uw|`.
pub fn restricted_pair_check(h: &SpannerGraph, u: usize, w: usize) -> Result<RestrictedCheck> {
    if u == w {
        return Err(SpannerError::DegenerateInput("identical endpoints".into()));
    }
    if !h.cone6(u, w).is_positive() {
        return Err(SpannerError::InvalidParameter("target not in a positive cone".into()));
    }
    let cs = crate::build::half_cones();
    let tri = cs.canonical_triangle(h.points().get(u), h.points().get(w))?;
    let allowed: Vec<bool> = (0..h.len()).map(|x| x == u || x == w || tri.contains(h.pos(x))).collect();
    let (length, path) = shortest_path_within(h, u, w, Some(&allowed)).ok_or_else(|| {
        SpannerError::InternalInvariantViolation(format!(
            "no path inside the canonical triangle between {} and {}",
            h.id(u),
            h.id(w)
        ))
    })?;
    let alpha = cs.angle_alpha(h.pos(u), h.pos(w))?;
    let bound = half_theta6_alpha_bound(alpha) * h.dist(u, w);
    Ok(RestrictedCheck { path, length, bound, ok: length <= bound + EPS })
}

/// `√3 cos α + sin α`.
pub fn half_theta6_alpha_bound(alpha: f64) -> f64 {
    3f64.sqrt() * alpha.cos() + alpha.sin()
}

/// `5/√3 cos α − sin α`.
pub fn negative_routing_bound(alpha: f64) -> f64 {
    5.0 / 3f64.sqrt() * alpha.cos() - alpha.sin()
}

/// A closed-form spanning-ratio upper bound.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "name", rename_all = "snake_case")]
pub enum BoundSpec {
    /// `1/(1 − 2 sin(θ/2))` for Yao graphs, k ≥ 7.
    YaoEven { k: usize },
    /// `1/(1 − 2 sin(3θ/8))` for Yao graphs, odd k ≥ 5.
    YaoOdd { k: usize },
    /// `1/(1 − 2 sin(θ/2))` for Θ-graphs, k ≥ 7.
    Theta { k: usize },
    /// `√(50 + 22√5)`.
    Theta5,
    /// 2.
    HalfTheta6,
    /// `√3 cos α + sin α`.
    HalfTheta6Alpha { alpha: f64 },
    /// `√3 cos(π/6m) + sin(π/6m)`.
    RotatedUnion { m: usize },
    /// 3, measured against the half-Θ6 distances.
    G9OfH,
}

impl BoundSpec {
    pub fn name(&self) -> &'static str {
        match self {
            BoundSpec::YaoEven { .. } => "yao_even",
            BoundSpec::YaoOdd { .. } => "yao_odd",
            BoundSpec::Theta { .. } => "theta",
            BoundSpec::Theta5 => "theta5",
            BoundSpec::HalfTheta6 => "half_theta6",
            BoundSpec::HalfTheta6Alpha { .. } => "half_theta6_alpha",
            BoundSpec::RotatedUnion { .. } => "rotated_union",
            BoundSpec::G9OfH => "g9_of_h",
        }
    }

    pub fn value(&self) -> Result<f64> {
        let theta = |k: usize| 2.0 * PI / k as f64;
        let v = match *self {
            BoundSpec::YaoEven { k } | BoundSpec::Theta { k } => {
                if k < 7 {
                    return Err(SpannerError::InvalidParameter(format!("bound needs k >= 7, got {k}")));
                }
                1.0 / (1.0 - 2.0 * (theta(k) / 2.0).sin())
            }
            BoundSpec::YaoOdd { k } => {
                if k < 5 || k % 2 == 0 {
                    return Err(SpannerError::InvalidParameter(format!("bound needs odd k >= 5, got {k}")));
                }
                1.0 / (1.0 - 2.0 * (3.0 * theta(k) / 8.0).sin())
            }
            BoundSpec::Theta5 => (50.0 + 22.0 * 5f64.sqrt()).sqrt(),
            BoundSpec::HalfTheta6 => 2.0,
            BoundSpec::HalfTheta6Alpha { alpha } => {
                if !(0.0..=PI / 6.0 + EPS).contains(&alpha) {
                    return Err(SpannerError::InvalidParameter(format!("alpha {alpha} outside [0, π/6]")));
                }
                half_theta6_alpha_bound(alpha)
            }
            BoundSpec::RotatedUnion { m } => {
                if m < 1 {
                    return Err(SpannerError::InvalidParameter("need m >= 1".into()));
                }
                half_theta6_alpha_bound(PI / (6.0 * m as f64))
            }
            BoundSpec::G9OfH => 3.0,
        };
        Ok(v)
    }

    fn check_applicable(&self, g: &SpannerGraph) -> Result<()> {
        let ok = match *self {
            BoundSpec::YaoEven { k } | BoundSpec::YaoOdd { k } => g.kind() == GraphKind::Yao && g.k() == Some(k),
            BoundSpec::Theta { k } => g.kind() == GraphKind::Theta && g.k() == Some(k),
            BoundSpec::Theta5 => g.kind() == GraphKind::Theta && g.k() == Some(5),
            BoundSpec::HalfTheta6 | BoundSpec::HalfTheta6Alpha { .. } => g.kind() == GraphKind::HalfTheta6,
            BoundSpec::RotatedUnion { m } => {
                (g.kind() == GraphKind::RotatedUnion && g.copies() == Some(m))
                    || (m == 1 && g.kind() == GraphKind::HalfTheta6)
            }
            BoundSpec::G9OfH => g.kind() == GraphKind::G9,
        };
        if ok {
            Ok(())
        } else {
            Err(SpannerError::InvalidParameter(format!(
                "bound {} does not apply to a {} graph",
                self.name(),
                g.kind().name()
            )))
        }
    }
}

/// Checks a graph against a bound; the report's witness is the worst pair.
pub fn verify_bound(g: &SpannerGraph, spec: BoundSpec) -> Result<RatioReport> {
    spec.check_applicable(g)?;
    let bound = spec.value()?;
    let mut report = match spec {
        BoundSpec::G9OfH => relative_ratio(g, &build_half_theta6(g.points())?)?,
        BoundSpec::HalfTheta6Alpha { alpha } => {
            // Worst ratio over positive pairs whose α does not exceed `alpha`.
            let mut r = spanning_ratio(g)?;
            r.max_ratio = alpha_limited_ratio(g, alpha)?;
            r
        }
        _ => spanning_ratio(g)?,
    };
    report.bound = Some(bound);
    report.pass = Some(report.max_ratio <= bound + EPS);
    Ok(report)
}

fn alpha_limited_ratio(g: &SpannerGraph, alpha: f64) -> Result<f64> {
    let cs = crate::build::half_cones();
    let mut worst: f64 = 1.0;
    for u in 0..g.len() {
        let (d, _) = dijkstra(g, u, None);
        for w in 0..g.len() {
            if w != u && g.cone6(u, w).is_positive() && cs.angle_alpha(g.pos(u), g.pos(w))? <= alpha + EPS {
                worst = worst.max(d[w] / g.dist(u, w));
            }
        }
    }
    Ok(worst)
}

/// Max over pairs of `d_sub(u,v) / d_sup(u,v)`.
fn relative_ratio(sub: &SpannerGraph, sup: &SpannerGraph) -> Result<RatioReport> {
    let n = sub.len();
    let mut best = (1.0, None);
    for u in 0..n {
        let (a, _) = dijkstra(sub, u, None);
        let (b, _) = dijkstra(sup, u, None);
        for v in u + 1..n {
            if b[v].is_finite() {
                let r = a[v] / b[v];
                if r > best.0 {
                    best = (r, Some([sub.id(u), sub.id(v)]));
                }
            }
        }
    }
    Ok(RatioReport { max_ratio: best.0, witness: best.1, bound: None, pass: None, per_pair: None })
}

/// Summary of [`g9_approximation_check`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ApproximationReport {
    pub edges_checked: usize,
    /// Largest approximation-path length divided by `|sv|`.
    pub max_ratio: f64,
    /// Largest canonical-path portion divided by `|sv|`.
    pub max_canonical_ratio: f64,
    pub pass: bool,
}

/// Approximation path of the half-Θ6 edge `(s, v)` with `v` in a negative
/// cone of `s`: the edge to the closest vertex followed by the canonical path
/// to `v`. Returns the vertex sequence.
pub fn approximation_path(h: &SpannerGraph, s: usize, v: usize) -> Result<Vec<usize>> {
    let cone = h.cone6(s, v);
    if cone.is_positive() {
        return Err(SpannerError::InvalidParameter("edge endpoint lies in a positive cone".into()));
    }
    let cp = canonical_path(h, s, cone)
        .ok_or_else(|| SpannerError::InvalidParameter("no neighbours in that cone".into()))?;
    let ci = cp.path.iter().position(|&x| x == cp.closest).expect("closest on path");
    let vi = cp.path.iter().position(|&x| x == v).ok_or_else(|| {
        SpannerError::InvalidParameter("edge is not part of the half-Θ6 graph".into())
    })?;
    let mut out = vec![s];
    if ci <= vi {
        out.extend_from_slice(&cp.path[ci..=vi]);
    } else {
        out.extend(cp.path[vi..=ci].iter().rev());
    }
    Ok(out)
}

/// Verifies that every discarded half-Θ6 edge has an approximation path in
/// G9 of length at most `3|sv|`, whose canonical part is at most `2|sv|`.
pub fn g9_approximation_check(h: &SpannerGraph, g9: &SpannerGraph) -> Result<ApproximationReport> {
    if h.kind() != GraphKind::HalfTheta6 || g9.kind() != GraphKind::G9 {
        return Err(SpannerError::InvalidParameter("need a half-Θ6 graph and its G9".into()));
    }
    let mut rep = ApproximationReport { edges_checked: 0, max_ratio: 1.0, max_canonical_ratio: 0.0, pass: true };
    for (a, b) in h.edges() {
        let (s, v) = if h.cone6(a, b).is_positive() { (b, a) } else { (a, b) };
        let path = approximation_path(h, s, v)?;
        for w in path.windows(2) {
            if !g9.has_edge(w[0], w[1]) {
                return Err(SpannerError::InternalInvariantViolation(format!(
                    "approximation path of ({}, {}) uses a missing edge",
                    h.id(s),
                    h.id(v)
                )));
            }
        }
        let sv = h.dist(s, v);
        let total = path_length(h, &path);
        let canonical = total - h.dist(path[0], path[1]);
        rep.edges_checked += 1;
        rep.max_ratio = rep.max_ratio.max(total / sv);
        rep.max_canonical_ratio = rep.max_canonical_ratio.max(canonical / sv);
        if total > 3.0 * sv + EPS || canonical > 2.0 * sv + EPS {
            rep.pass = false;
        }
    }
    Ok(rep)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::build::{build_mst, build_yao};
    use crate::geom::PointSet;

    #[test]
    fn complete_graph_is_one() {
        let ps = PointSet::from_coords(&[(0.0, 0.0), (1.0, 0.2), (0.3, 0.9), (-0.5, 0.4)]).unwrap();
        let n = ps.len();
        let edges: Vec<_> = (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b))).collect();
        let g = SpannerGraph::from_edges(ps, GraphKind::Tree, None, edges).unwrap();
        assert_eq!(spanning_ratio(&g).unwrap().max_ratio, 1.0);
    }

    #[test]
    fn single_edge() {
        let ps = PointSet::from_coords(&[(0.0, 0.0), (1.0, 0.2)]).unwrap();
        let g = build_mst(&ps).unwrap();
        let r = spanning_ratio(&g).unwrap();
        assert_eq!(r.max_ratio, 1.0);
        assert_eq!(r.witness, Some([0, 1]));
    }

    #[test]
    fn disconnected_is_infinite() {
        let ps = PointSet::from_coords(&[(0.0, 0.0), (1.0, 0.2), (3.0, 3.0)]).unwrap();
        let g = SpannerGraph::from_edges(ps, GraphKind::Tree, None, [(0, 1)]).unwrap();
        let r = spanning_ratio(&g).unwrap();
        assert!(r.max_ratio.is_infinite());
        assert!(r.witness.is_some());
    }

    #[test]
    fn bound_values() {
        assert!((BoundSpec::Theta { k: 7 }.value().unwrap() - 7.5625).abs() < 1e-3);
        assert!((BoundSpec::YaoOdd { k: 5 }.value().unwrap() - 10.867).abs() < 1e-3);
        assert!((BoundSpec::Theta5.value().unwrap() - 9.9596).abs() < 1e-4);
        assert!((BoundSpec::RotatedUnion { m: 2 }.value().unwrap() - 1.93185).abs() < 1e-5);
        assert!((BoundSpec::RotatedUnion { m: 3 }.value().unwrap() - 1.8794).abs() < 1e-4);
        assert!(BoundSpec::Theta { k: 6 }.value().is_err());
        assert!(BoundSpec::YaoOdd { k: 6 }.value().is_err());
    }

    #[test]
    fn inapplicable_bound() {
        let ps = PointSet::from_coords(&[(0.0, 0.0), (1.0, 0.2)]).unwrap();
        let g = build_yao(&ps, 8).unwrap();
        assert!(matches!(verify_bound(&g, BoundSpec::Theta5), Err(SpannerError::InvalidParameter(_))));
        assert!(verify_bound(&g, BoundSpec::YaoEven { k: 8 }).unwrap().pass.unwrap());
    }
}
