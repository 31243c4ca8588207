//! Realizations of the stateful router's primitive moves on a concrete graph.

use crate::build::{half_cones, PathSide, SpannerGraph};
use crate::error::{Result, SpannerError};
use crate::geom::{ConeIndex, EPS};

use super::{Regions, Side};

/// Reaching a half-Θ6 neighbour; `walk` starts at the source.
#[derive(Debug, Clone)]
pub(crate) struct Hop {
    pub to: usize,
    pub len: f64,
    pub exploration: f64,
    pub walk: Vec<usize>,
}

/// Outcome of looking for a side-region edge.
pub(crate) struct Probe {
    pub hop: Option<Hop>,
    pub wasted: f64,
    pub walk: Vec<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum X0Pick {
    /// Any edge: the first in clockwise order when the graph is complete.
    Any,
    /// The edge closest to the given side in clockwise order.
    Toward(Side),
}

pub(crate) trait Substrate {
    fn graph(&self) -> &SpannerGraph;
    fn positive_hop(&self, s: usize, cone: ConeIndex) -> Result<Option<Hop>>;
    fn x0_exists(&self, s: usize, r: &Regions) -> Result<bool>;
    fn x0_hop(&self, s: usize, r: &Regions, pick: X0Pick) -> Result<Hop>;
    fn side_probe(&self, s: usize, r: &Regions, side: Side) -> Result<Probe>;
}

fn direct(g: &SpannerGraph, s: usize, v: usize) -> Hop {
    Hop { to: v, len: g.dist(s, v), exploration: 0.0, walk: vec![s, v] }
}

fn invariant(msg: String) -> SpannerError {
    SpannerError::InternalInvariantViolation(msg)
}

/// Neighbours of `s` in a negative cone, in clockwise order.
fn negative_neighbors(g: &SpannerGraph, s: usize, r: &Regions) -> Vec<usize> {
    let mut v: Vec<usize> = g.neighbors(s).iter().copied().filter(|&y| g.cone6(s, y) == r.neg).collect();
    v.sort_by(|&x, &y| r.clockwise_offset(g.pos(x)).total_cmp(&r.clockwise_offset(g.pos(y))));
    v
}

/// The half-Θ6-graph itself: every move is a single edge.
pub(crate) struct Complete<'a>(pub &'a SpannerGraph);

impl Substrate for Complete<'_> {
    fn graph(&self) -> &SpannerGraph {
        self.0
    }

    fn positive_hop(&self, s: usize, cone: ConeIndex) -> Result<Option<Hop>> {
        Ok(self.0.neighbor_in_cone(s, cone).map(|v| direct(self.0, s, v)))
    }

    fn x0_exists(&self, s: usize, r: &Regions) -> Result<bool> {
        Ok(self.0.neighbors(s).iter().any(|&y| r.in_x0(self.0.pos(y))))
    }

    fn x0_hop(&self, s: usize, r: &Regions, pick: X0Pick) -> Result<Hop> {
        let g = self.0;
        let x0: Vec<usize> = negative_neighbors(g, s, r).into_iter().filter(|&y| r.in_x0(g.pos(y))).collect();
        let v = match pick {
            X0Pick::Toward(Side::X1) => x0.last(),
            _ => x0.first(),
        };
        v.map(|&v| direct(g, s, v)).ok_or_else(|| invariant(format!("no X0 edge at {}", g.id(s))))
    }

    fn side_probe(&self, s: usize, r: &Regions, side: Side) -> Result<Probe> {
        let g = self.0;
        let hop = g.neighbor_in_cone(s, r.side_cone(side)).filter(|&v| r.in_side(side, g.pos(v))).map(|v| direct(g, s, v));
        Ok(Probe { hop, wasted: 0.0, walk: Vec::new() })
    }
}

/// Stored knowledge of `s` about its canonical path in the negative cone:
/// the closest vertex and the first and last vertices in clockwise order.
struct PathView {
    closest: usize,
    first: usize,
    last: usize,
}

/// Walks `s`'s canonical path from its closest vertex to reach `X0` as the
/// pick asks. Clockwise-later path vertices lie on the counter-clockwise
/// side of the cone holding `s`.
fn walk_to_x0(g: &SpannerGraph, s: usize, r: &Regions, view: &PathView, pick: X0Pick) -> Result<Hop> {
    let up = r.neg.opposite6();
    let inside = |x: usize| r.in_x0(g.pos(x));
    let c = view.closest;
    let mut walk = vec![s, c];
    let mut len = g.dist(s, c);
    // Direction to walk, and whether to keep going while the next vertex
    // stays inside X0.
    let (dir, greedy) = if inside(c) {
        match pick {
            X0Pick::Any => return Ok(Hop { to: c, len, exploration: 0.0, walk }),
            X0Pick::Toward(Side::X1) => (PathSide::Ccw, true),
            X0Pick::Toward(Side::X2) => (PathSide::Cw, true),
        }
    } else if r.beyond_b(g.pos(c)) {
        (PathSide::Ccw, matches!(pick, X0Pick::Toward(Side::X1)))
    } else {
        (PathSide::Cw, matches!(pick, X0Pick::Toward(Side::X2)))
    };
    let end = if dir == PathSide::Ccw { view.last } else { view.first };
    let mut cur = c;
    let mut entered = inside(c);
    for _ in 0..g.len() {
        if cur == end {
            break;
        }
        let Some(next) = g.side_neighbor(cur, up, dir) else { break };
        if entered && !(greedy && inside(next)) {
            break;
        }
        len += g.dist(cur, next);
        walk.push(next);
        cur = next;
        if inside(cur) {
            entered = true;
            if !greedy {
                break;
            }
        }
    }
    if !entered {
        return Err(invariant(format!("canonical path of {} never enters X0", g.id(s))));
    }
    Ok(Hop { to: cur, len, exploration: 0.0, walk })
}

/// Walks from `s` along one side of `cone` until a vertex with a neighbour in
/// `cone` appears, the path ends, or the next edge would pass `cap`.
/// Returns the found vertex (if any), the path walked and its length.
fn side_walk(g: &SpannerGraph, s: usize, cone: ConeIndex, dir: PathSide, cap: f64) -> (Option<usize>, Vec<usize>, f64, bool) {
    let mut path = vec![s];
    let mut d = 0.0;
    let mut cur = s;
    for _ in 0..g.len() {
        let Some(next) = g.side_neighbor(cur, cone, dir) else { return (None, path, d, true) };
        let e = g.dist(cur, next);
        if d + e > cap + EPS {
            return (None, path, d, false);
        }
        d += e;
        path.push(next);
        cur = next;
        if g.neighbor_in_cone(cur, cone).is_some() {
            return (Some(cur), path, d, false);
        }
    }
    (None, path, d, true)
}

struct Search {
    found: Option<(usize, Vec<usize>, f64)>,
    exploration: f64,
    walk: Vec<usize>,
}

fn push_return(walk: &mut Vec<usize>, path: &[usize]) {
    walk.extend(&path[1..]);
    walk.extend(path.iter().rev().skip(1));
}

/// Exponential search along the canonical path through `s` for a vertex with
/// an edge in `cone`, travelling at most `limit` away from `s`.
fn exponential_search(g: &SpannerGraph, s: usize, cone: ConeIndex, limit: f64) -> Search {
    let mut out = Search { found: None, exploration: 0.0, walk: vec![s] };
    let first = |side| g.side_neighbor(s, cone, side).map(|x| g.dist(s, x));
    let (lc, lw) = (first(PathSide::Ccw), first(PathSide::Cw));
    let (mut side, mut budget) = match (lc, lw) {
        (None, None) => return out,
        (Some(a), Some(b)) if b < a => (PathSide::Cw, b),
        (Some(a), _) => (PathSide::Ccw, a),
        (None, Some(b)) => (PathSide::Cw, b),
    };
    let mut done = [lc.is_none(), lw.is_none()];
    let slot = |side| if side == PathSide::Ccw { 0 } else { 1 };
    while !(done[0] && done[1]) {
        if !done[slot(side)] {
            let cap = budget.min(limit);
            let (hit, path, d, exhausted) = side_walk(g, s, cone, side, cap);
            if let Some(x) = hit {
                out.found = Some((x, path, d));
                return out;
            }
            out.exploration += 2.0 * d;
            push_return(&mut out.walk, &path);
            if exhausted || cap >= limit {
                done[slot(side)] = true;
            }
        }
        budget *= 2.0;
        side = side.flip();
    }
    out
}

fn search_limit(g: &SpannerGraph) -> f64 {
    2.0 * g.total_length() + 1.0
}

/// Extends the search outcome with the final edge into `cone`.
fn finish_search(g: &SpannerGraph, cone: ConeIndex, mut sr: Search) -> Option<Hop> {
    let (x, path, d) = sr.found.take()?;
    let v = g.neighbor_in_cone(x, cone).filter(|&v| v != path[0])?;
    let mut walk = sr.walk;
    walk.extend(&path[1..]);
    walk.push(v);
    Some(Hop { to: v, len: d + g.dist(x, v), exploration: sr.exploration, walk })
}

/// Probe of a side region by a bounded search; a miss costs the travel out
/// and back.
fn probe_result(g: &SpannerGraph, r: &Regions, side: Side, cone: ConeIndex, sr: Search) -> Probe {
    let mut walk = sr.walk.clone();
    let base = sr.exploration;
    match &sr.found {
        Some((x, path, d)) => {
            let (x, d) = (*x, *d);
            let path = path.clone();
            let v = g.neighbor_in_cone(x, cone).expect("found vertex has a cone edge");
            if r.in_side(side, g.pos(v)) {
                return Probe { hop: finish_search(g, cone, sr), wasted: 0.0, walk: Vec::new() };
            }
            push_return(&mut walk, &path);
            Probe { hop: None, wasted: base + 2.0 * d, walk }
        }
        None => Probe { hop: None, wasted: base, walk },
    }
}

/// G12: first, last and closest edges per negative cone.
pub(crate) struct G12<'a>(pub &'a SpannerGraph);

impl G12<'_> {
    fn view(&self, s: usize, r: &Regions) -> Option<PathView> {
        let g = self.0;
        let nb = negative_neighbors(g, s, r);
        let cs = half_cones();
        let closest = *nb.iter().min_by(|&&a, &&b| {
            cs.projection_in(r.neg, r.s, g.pos(a))
                .total_cmp(&cs.projection_in(r.neg, r.s, g.pos(b)))
                .then(g.id(a).cmp(&g.id(b)))
        })?;
        Some(PathView { closest, first: nb[0], last: *nb.last()? })
    }
}

/// Decides from the first and last canonical-path vertices whether `s` had
/// an edge into `X0`.
fn x0_from_ends(r: &Regions, first: crate::geom::Vec2, last: crate::geom::Vec2) -> bool {
    if first == last {
        return r.in_x0(first);
    }
    if r.in_x0(first) || r.in_x0(last) {
        return true;
    }
    r.beyond_b(first) && !r.beyond_b(last)
}

impl Substrate for G12<'_> {
    fn graph(&self) -> &SpannerGraph {
        self.0
    }

    fn positive_hop(&self, s: usize, cone: ConeIndex) -> Result<Option<Hop>> {
        let g = self.0;
        if let Some(v) = g.neighbor_in_cone(s, cone) {
            return Ok(Some(direct(g, s, v)));
        }
        Ok(finish_search(g, cone, exponential_search(g, s, cone, search_limit(g))))
    }

    fn x0_exists(&self, s: usize, r: &Regions) -> Result<bool> {
        let g = self.0;
        Ok(self.view(s, r).is_some_and(|v| x0_from_ends(r, g.pos(v.first), g.pos(v.last))))
    }

    fn x0_hop(&self, s: usize, r: &Regions, pick: X0Pick) -> Result<Hop> {
        let view = self.view(s, r).ok_or_else(|| invariant(format!("empty negative cone at {}", self.0.id(s))))?;
        walk_to_x0(self.0, s, r, &view, pick)
    }

    fn side_probe(&self, s: usize, r: &Regions, side: Side) -> Result<Probe> {
        let g = self.0;
        let cone = r.side_cone(side);
        if let Some(v) = g.neighbor_in_cone(s, cone) {
            let hop = r.in_side(side, g.pos(v)).then(|| direct(g, s, v));
            return Ok(Probe { hop, wasted: 0.0, walk: Vec::new() });
        }
        let sr = exponential_search(g, s, cone, 2.0 * r.corner_dist(side));
        Ok(probe_result(g, r, side, cone, sr))
    }
}

/// G9: closest edges and canonical paths, plus per-vertex hints.
pub(crate) struct G9<'a>(pub &'a SpannerGraph);

impl G9<'_> {
    fn hints(&self) -> Result<&[crate::build::VertexHints]> {
        self.0.hints().ok_or_else(|| SpannerError::InvalidParameter("G9 graph has no hint metadata".into()))
    }

    fn ends(&self, s: usize, r: &Regions) -> Result<Option<[usize; 2]>> {
        let g = self.0;
        let t = r.neg.half_label().triple_index;
        match self.hints()?[s].path_ends[t] {
            None => Ok(None),
            Some([f, l]) => {
                let idx = |id| g.points().index_of(id).ok_or_else(|| invariant(format!("hint names unknown id {id}")));
                Ok(Some([idx(f.id)?, idx(l.id)?]))
            }
        }
    }

    /// Walks in the hinted direction toward the closest vertex of the
    /// canonical path through `s` in `cone`.
    fn hinted_walk(&self, s: usize, cone: ConeIndex, cap: f64) -> Result<Search> {
        let g = self.0;
        let mut out = Search { found: None, exploration: 0.0, walk: vec![s] };
        let t = cone.half_label().triple_index;
        let Some(dir) = self.hints()?[s].toward_closest[t] else { return Ok(out) };
        let (hit, path, d, _) = side_walk(g, s, cone, dir, cap);
        match hit {
            Some(x) => out.found = Some((x, path, d)),
            None => {
                out.exploration = 2.0 * d;
                push_return(&mut out.walk, &path);
            }
        }
        Ok(out)
    }
}

impl Substrate for G9<'_> {
    fn graph(&self) -> &SpannerGraph {
        self.0
    }

    fn positive_hop(&self, s: usize, cone: ConeIndex) -> Result<Option<Hop>> {
        let g = self.0;
        if let Some(v) = g.neighbor_in_cone(s, cone) {
            return Ok(Some(direct(g, s, v)));
        }
        Ok(finish_search(g, cone, self.hinted_walk(s, cone, f64::INFINITY)?))
    }

    fn x0_exists(&self, s: usize, r: &Regions) -> Result<bool> {
        let g = self.0;
        Ok(self.ends(s, r)?.is_some_and(|[f, l]| x0_from_ends(r, g.pos(f), g.pos(l))))
    }

    fn x0_hop(&self, s: usize, r: &Regions, pick: X0Pick) -> Result<Hop> {
        let g = self.0;
        let [first, last] = self.ends(s, r)?.ok_or_else(|| invariant(format!("empty negative cone at {}", g.id(s))))?;
        let cs = half_cones();
        let closest = negative_neighbors(g, s, r)
            .into_iter()
            .min_by(|&a, &b| {
                cs.projection_in(r.neg, r.s, g.pos(a))
                    .total_cmp(&cs.projection_in(r.neg, r.s, g.pos(b)))
                    .then(g.id(a).cmp(&g.id(b)))
            })
            .ok_or_else(|| invariant(format!("closest edge missing at {}", g.id(s))))?;
        walk_to_x0(g, s, r, &PathView { closest, first, last }, pick)
    }

    fn side_probe(&self, s: usize, r: &Regions, side: Side) -> Result<Probe> {
        let g = self.0;
        let cone = r.side_cone(side);
        if let Some(v) = g.neighbor_in_cone(s, cone) {
            let hop = r.in_side(side, g.pos(v)).then(|| direct(g, s, v));
            return Ok(Probe { hop, wasted: 0.0, walk: Vec::new() });
        }
        let sr = self.hinted_walk(s, cone, 2.0 * r.corner_dist(side))?;
        Ok(probe_result(g, r, side, cone, sr))
    }
}
