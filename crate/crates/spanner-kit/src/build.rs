//! Construction of Yao, Θ, half-Θ6, rotated unions, the minimum spanning tree
//! and the bounded-degree subgraphs G12 and G9.

use std::collections::BTreeSet;
use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Result, SpannerError};
use crate::geom::{normalize_angle, ConeIndex, ConeSystem, Point, PointSet, Vec2};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GraphKind {
    Yao,
    Theta,
    HalfTheta6,
    G12,
    G9,
    RotatedUnion,
    Mst,
    Tree,
}

impl GraphKind {
    pub fn name(self) -> &'static str {
        match self {
            GraphKind::Yao => "yao",
            GraphKind::Theta => "theta",
            GraphKind::HalfTheta6 => "half_theta6",
            GraphKind::G12 => "g12",
            GraphKind::G9 => "g9",
            GraphKind::RotatedUnion => "rotated_union",
            GraphKind::Mst => "mst",
            GraphKind::Tree => "tree",
        }
    }
}

impl std::str::FromStr for GraphKind {
    type Err = SpannerError;
    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "yao" => GraphKind::Yao,
            "theta" => GraphKind::Theta,
            "half_theta6" => GraphKind::HalfTheta6,
            "g12" => GraphKind::G12,
            "g9" => GraphKind::G9,
            "rotated_union" => GraphKind::RotatedUnion,
            "mst" => GraphKind::Mst,
            "tree" => GraphKind::Tree,
            other => {
                return Err(SpannerError::InvalidParameter(format!("unknown graph kind {other}")))
            }
        })
    }
}

/// Which neighbour next to a cone to step to when walking a canonical path.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PathSide {
    /// The first neighbour counter-clockwise of the cone.
    Ccw,
    /// The first neighbour clockwise of the cone.
    Cw,
}

impl PathSide {
    pub fn flip(self) -> Self {
        match self {
            PathSide::Ccw => PathSide::Cw,
            PathSide::Cw => PathSide::Ccw,
        }
    }
}

/// Routing hints stored at a vertex of G9.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct VertexHints {
    /// Per positive cone (triple index): direction along the canonical path
    /// toward the closest vertex, set only when the half-Θ6 edge in that cone
    /// was discarded.
    pub toward_closest: [Option<PathSide>; 3],
    /// Per negative cone (triple index): the first and last vertices of the
    /// canonical path in clockwise order.
    pub path_ends: [Option<[Point; 2]>; 3],
}

/// Neighbours of `anchor` inside one negative cone, in clockwise order.
#[derive(Debug, Clone, PartialEq)]
pub struct CanonicalPathInfo {
    pub anchor: usize,
    pub negative_cone: ConeIndex,
    pub path: Vec<usize>,
    pub closest: usize,
}

/// Embedded undirected graph with adjacency lists in counter-clockwise order.
#[derive(Debug, Clone, PartialEq)]
pub struct SpannerGraph {
    points: PointSet,
    kind: GraphKind,
    k: Option<usize>,
    copies: Option<usize>,
    adj: Vec<Vec<usize>>,
    hints: Option<Vec<VertexHints>>,
}

impl SpannerGraph {
    /// Builds a graph from index pairs; self-loops are rejected and duplicate
    /// edges merged.
    pub fn from_edges(
        points: PointSet,
        kind: GraphKind,
        k: Option<usize>,
        edges: impl IntoIterator<Item = (usize, usize)>,
    ) -> Result<Self> {
        let n = points.len();
        let mut set = BTreeSet::new();
        for (a, b) in edges {
            if a >= n || b >= n {
                return Err(SpannerError::InvalidParameter(format!("edge ({a},{b}) out of range")));
            }
            if a == b {
                return Err(SpannerError::InvalidParameter(format!("self-loop at {a}")));
            }
            set.insert((a.min(b), a.max(b)));
        }
        let mut adj = vec![Vec::new(); n];
        for &(a, b) in &set {
            adj[a].push(b);
            adj[b].push(a);
        }
        for (u, list) in adj.iter_mut().enumerate() {
            let pu = points.pos(u);
            list.sort_by(|&x, &y| {
                let ax = (points.pos(x) - pu).y.atan2((points.pos(x) - pu).x);
                let ay = (points.pos(y) - pu).y.atan2((points.pos(y) - pu).x);
                ax.total_cmp(&ay).then(x.cmp(&y))
            });
        }
        Ok(Self { points, kind, k, copies: None, adj, hints: None })
    }

    pub fn with_copies(mut self, m: usize) -> Self {
        self.copies = Some(m);
        self
    }

    pub fn with_hints(mut self, hints: Vec<VertexHints>) -> Self {
        self.hints = Some(hints);
        self
    }

    pub fn points(&self) -> &PointSet {
        &self.points
    }

    pub fn kind(&self) -> GraphKind {
        self.kind
    }

    pub fn k(&self) -> Option<usize> {
        self.k
    }

    pub fn copies(&self) -> Option<usize> {
        self.copies
    }

    pub fn hints(&self) -> Option<&[VertexHints]> {
        self.hints.as_deref()
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn pos(&self, u: usize) -> Vec2 {
        self.points.pos(u)
    }

    pub fn id(&self, u: usize) -> u32 {
        self.points.get(u).id
    }

    pub fn dist(&self, a: usize, b: usize) -> f64 {
        self.points.dist(a, b)
    }

    /// Neighbours of `u` in counter-clockwise angular order.
    pub fn neighbors(&self, u: usize) -> &[usize] {
        &self.adj[u]
    }

    pub fn degree(&self, u: usize) -> usize {
        self.adj[u].len()
    }

    pub fn max_degree(&self) -> usize {
        self.adj.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        self.adj[a].contains(&b)
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(Vec::len).sum::<usize>() / 2
    }

    /// Edges as index pairs `(a, b)` with `a < b`, sorted.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut e: Vec<_> = self
            .adj
            .iter()
            .enumerate()
            .flat_map(|(a, l)| l.iter().filter(move |&&b| a < b).map(move |&b| (a, b)))
            .collect();
        e.sort_unstable();
        e
    }

    /// Edges as id pairs, each sorted and the list sorted.
    pub fn edge_ids(&self) -> Vec<[u32; 2]> {
        let mut e: Vec<[u32; 2]> = self
            .edges()
            .into_iter()
            .map(|(a, b)| {
                let (x, y) = (self.id(a), self.id(b));
                [x.min(y), x.max(y)]
            })
            .collect();
        e.sort_unstable();
        e
    }

    /// Total Euclidean edge length.
    pub fn total_length(&self) -> f64 {
        self.edges().iter().map(|&(a, b)| self.dist(a, b)).sum()
    }

    /// Half-Θ6 cone of `u` containing `v`.
    pub fn cone6(&self, u: usize, v: usize) -> ConeIndex {
        half_cones().cone_of_angle((self.pos(v) - self.pos(u)).angle())
    }

    /// Neighbour of `x` in cone `cone` (six-cone index), if any. For the
    /// half-Θ6 family there is at most one per positive cone.
    pub fn neighbor_in_cone(&self, x: usize, cone: ConeIndex) -> Option<usize> {
        self.adj[x].iter().copied().find(|&y| self.cone6(x, y) == cone)
    }

    /// The neighbour of `x` met first when rotating away from `cone` on the
    /// given side, ignoring neighbours inside the cone.
    pub fn side_neighbor(&self, x: usize, cone: ConeIndex, side: PathSide) -> Option<usize> {
        let cs = half_cones();
        let px = self.pos(x);
        self.adj[x]
            .iter()
            .copied()
            .filter(|&y| self.cone6(x, y) != cone)
            .map(|y| {
                let phi = (self.pos(y) - px).angle();
                let off = match side {
                    PathSide::Ccw => normalize_angle(cs.ccw_boundary(cone.0) - phi),
                    PathSide::Cw => normalize_angle(phi - cs.cw_boundary(cone.0)),
                };
                (off, y)
            })
            .min_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)))
            .map(|(_, y)| y)
    }

    fn require_kind(&self, kind: GraphKind) -> Result<()> {
        if self.kind != kind {
            return Err(SpannerError::InvalidParameter(format!(
                "expected a {} graph, got {}",
                kind.name(),
                self.kind.name()
            )));
        }
        Ok(())
    }
}

/// The unrotated six-cone system used by the half-Θ6 family.
pub fn half_cones() -> ConeSystem {
    ConeSystem::new(6).expect("six cones are valid")
}

/// How "closest vertex in a cone" is measured.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Closeness {
    /// Euclidean distance (Yao).
    Euclidean,
    /// Projection on the cone bisector (Θ).
    Projection,
}

/// For every vertex, the closest vertex in each cone (ties by id).
pub fn closest_per_cone(ps: &PointSet, cs: &ConeSystem, how: Closeness) -> Vec<Vec<Option<usize>>> {
    let n = ps.len();
    (0..n)
        .map(|u| {
            let mut best: Vec<Option<(f64, u32, usize)>> = vec![None; cs.k()];
            let pu = ps.pos(u);
            for v in 0..n {
                if v == u {
                    continue;
                }
                let pv = ps.pos(v);
                let c = cs.cone_of_angle((pv - pu).angle());
                let key = match how {
                    Closeness::Euclidean => pu.dist(pv),
                    Closeness::Projection => cs.projection_in(c, pu, pv),
                };
                let id = ps.get(v).id;
                let slot = &mut best[c.0];
                let better = match slot {
                    None => true,
                    Some((d, bid, _)) => key < *d || (key == *d && id < *bid),
                };
                if better {
                    *slot = Some((key, id, v));
                }
            }
            best.into_iter().map(|b| b.map(|(_, _, v)| v)).collect()
        })
        .collect()
}

fn cone_graph(ps: PointSet, k: usize, how: Closeness, kind: GraphKind) -> Result<SpannerGraph> {
    if k < 2 {
        return Err(SpannerError::InvalidParameter(format!("k = {k}, need k >= 2")));
    }
    let cs = ConeSystem::new(k)?;
    let best = closest_per_cone(&ps, &cs, how);
    let edges: Vec<_> = best
        .iter()
        .enumerate()
        .flat_map(|(u, row)| row.iter().flatten().map(move |&v| (u, v)))
        .collect();
    SpannerGraph::from_edges(ps, kind, Some(k), edges)
}

/// Yao graph: an edge to the Euclidean-closest vertex in every cone.
pub fn build_yao(ps: &PointSet, k: usize) -> Result<SpannerGraph> {
    cone_graph(ps.clone(), k, Closeness::Euclidean, GraphKind::Yao)
}

/// Θ-graph: an edge to the projection-closest vertex in every cone.
pub fn build_theta(ps: &PointSet, k: usize) -> Result<SpannerGraph> {
    cone_graph(ps.clone(), k, Closeness::Projection, GraphKind::Theta)
}

fn half_theta6_edges(ps: &PointSet, cs: &ConeSystem) -> Vec<(usize, usize)> {
    closest_per_cone(ps, cs, Closeness::Projection)
        .iter()
        .enumerate()
        .flat_map(|(u, row)| {
            row.iter()
                .enumerate()
                .filter(|(c, _)| c % 2 == 0)
                .filter_map(move |(_, v)| v.map(|v| (u, v)))
        })
        .collect()
}

/// Half-Θ6 graph: edges to the projection-closest vertex in the three
/// positive cones only.
pub fn build_half_theta6(ps: &PointSet) -> Result<SpannerGraph> {
    let edges = half_theta6_edges(ps, &half_cones());
    SpannerGraph::from_edges(ps.clone(), GraphKind::HalfTheta6, Some(6), edges)
}

/// Union of `m` half-Θ6 graphs with cone systems rotated by `i·π/(3m)`.
pub fn build_rotated_union(ps: &PointSet, m: usize) -> Result<SpannerGraph> {
    if m < 1 {
        return Err(SpannerError::InvalidParameter("need at least one copy".into()));
    }
    if m == 1 {
        return build_half_theta6(ps);
    }
    let mut edges = Vec::new();
    for i in 0..m {
        let cs = ConeSystem::rotated(6, i as f64 * PI / (3.0 * m as f64))?;
        edges.extend(half_theta6_edges(ps, &cs));
    }
    Ok(SpannerGraph::from_edges(ps.clone(), GraphKind::RotatedUnion, Some(6), edges)?.with_copies(m))
}

/// Euclidean minimum spanning tree (Prim, ties broken by index).
pub fn build_mst(ps: &PointSet) -> Result<SpannerGraph> {
    let n = ps.len();
    let mut in_tree = vec![false; n];
    let mut best = vec![(f64::INFINITY, usize::MAX); n];
    let mut edges = Vec::with_capacity(n.saturating_sub(1));
    best[0] = (0.0, usize::MAX);
    for _ in 0..n {
        let u = (0..n)
            .filter(|&v| !in_tree[v])
            .min_by(|&a, &b| best[a].0.total_cmp(&best[b].0).then(a.cmp(&b)))
            .expect("a vertex remains");
        in_tree[u] = true;
        if best[u].1 != usize::MAX {
            edges.push((best[u].1, u));
        }
        for v in 0..n {
            if !in_tree[v] {
                let d = ps.dist(u, v);
                if d < best[v].0 {
                    best[v] = (d, u);
                }
            }
        }
    }
    SpannerGraph::from_edges(ps.clone(), GraphKind::Mst, None, edges)
}

fn clockwise_offset(cs: &ConeSystem, cone: ConeIndex, from: Vec2, to: Vec2) -> f64 {
    normalize_angle((to - from).angle() - cs.ccw_boundary(cone.0))
}

/// Canonical path of `u` in the negative cone `cone` (six-cone index), or
/// `None` when the cone holds no neighbour.
pub fn canonical_path(h: &SpannerGraph, u: usize, cone: ConeIndex) -> Option<CanonicalPathInfo> {
    let cs = half_cones();
    let pu = h.pos(u);
    let mut nb: Vec<usize> = h.neighbors(u).iter().copied().filter(|&v| h.cone6(u, v) == cone).collect();
    if nb.is_empty() {
        return None;
    }
    nb.sort_by(|&a, &b| {
        clockwise_offset(&cs, cone, pu, h.pos(a)).total_cmp(&clockwise_offset(&cs, cone, pu, h.pos(b)))
    });
    let closest = *nb
        .iter()
        .min_by(|&&a, &&b| {
            cs.projection_in(cone, pu, h.pos(a))
                .total_cmp(&cs.projection_in(cone, pu, h.pos(b)))
                .then(h.id(a).cmp(&h.id(b)))
        })
        .expect("non-empty");
    Some(CanonicalPathInfo { anchor: u, negative_cone: cone, path: nb, closest })
}

/// All canonical paths, one per (vertex, non-empty negative cone).
pub fn canonical_paths(h: &SpannerGraph) -> Vec<CanonicalPathInfo> {
    (0..h.len())
        .flat_map(|u| [1, 3, 5].into_iter().filter_map(move |c| canonical_path(h, u, ConeIndex(c))))
        .collect()
}

/// Keeps, per vertex and negative cone, the first, last and closest edges.
pub fn build_g12(h: &SpannerGraph) -> Result<SpannerGraph> {
    h.require_kind(GraphKind::HalfTheta6)?;
    let mut keep = Vec::new();
    for cp in canonical_paths(h) {
        let u = cp.anchor;
        keep.push((u, cp.path[0]));
        keep.push((u, *cp.path.last().expect("non-empty")));
        keep.push((u, cp.closest));
    }
    // Edges in no negative cone of either endpoint do not exist in half-Θ6,
    // so every edge is covered by exactly one canonical path.
    SpannerGraph::from_edges(h.points.clone(), GraphKind::G12, Some(6), keep)
}

/// Keeps, per vertex and negative cone, the closest edge and the canonical
/// path, and records routing hints.
pub fn build_g9(h: &SpannerGraph) -> Result<SpannerGraph> {
    h.require_kind(GraphKind::HalfTheta6)?;
    let paths = canonical_paths(h);
    let mut keep = Vec::new();
    for cp in &paths {
        keep.push((cp.anchor, cp.closest));
        for w in cp.path.windows(2) {
            if h.has_edge(w[0], w[1]) {
                keep.push((w[0], w[1]));
            }
        }
    }
    let g = SpannerGraph::from_edges(h.points.clone(), GraphKind::G9, Some(6), keep)?;
    let hints = g9_hints(h, &g, &paths)?;
    Ok(g.with_hints(hints))
}

fn g9_hints(h: &SpannerGraph, g: &SpannerGraph, paths: &[CanonicalPathInfo]) -> Result<Vec<VertexHints>> {
    let mut hints = vec![VertexHints::default(); h.len()];
    for cp in paths {
        let v = cp.anchor;
        let neg = cp.negative_cone;
        let t = neg.half_label().triple_index;
        let first = *h.points.get(cp.path[0]);
        let last = *h.points.get(*cp.path.last().expect("non-empty"));
        hints[v].path_ends[t] = Some([first, last]);
        let pos_cone = neg.opposite6();
        let ci = cp.path.iter().position(|&x| x == cp.closest).expect("closest on path");
        for (i, &s) in cp.path.iter().enumerate() {
            if g.has_edge(s, v) {
                continue;
            }
            // Clockwise-later path vertices sit on the counter-clockwise side.
            let (step, side) = if ci > i { (cp.path[i + 1], PathSide::Ccw) } else { (cp.path[i - 1], PathSide::Cw) };
            if g.side_neighbor(s, pos_cone, side) != Some(step) {
                return Err(SpannerError::InternalInvariantViolation(format!(
                    "canonical path of {} is not adjacent to the cone at {}",
                    h.id(v),
                    h.id(s)
                )));
            }
            hints[s].toward_closest[pos_cone.half_label().triple_index] = Some(side);
        }
    }
    Ok(hints)
}
