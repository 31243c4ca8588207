//! Brute-force references shared by the integration tests.

use std::collections::BTreeSet;
use std::f64::consts::PI;

use spanner_kit::{PointSet, SpannerGraph};

/// Shortest `u`–`v` distance over all simple paths, summed from `u`.
pub fn brute_distance(g: &SpannerGraph, u: usize, v: usize) -> f64 {
    fn dfs(g: &SpannerGraph, x: usize, v: usize, acc: f64, seen: &mut Vec<bool>, best: &mut f64) {
        if x == v {
            *best = best.min(acc);
            return;
        }
        for &y in g.neighbors(x) {
            if !seen[y] {
                seen[y] = true;
                dfs(g, y, v, acc + g.dist(x, y), seen, best);
                seen[y] = false;
            }
        }
    }
    let mut seen = vec![false; g.len()];
    seen[u] = true;
    let mut best = f64::INFINITY;
    dfs(g, u, v, 0.0, &mut seen, &mut best);
    best
}

/// Cone of `v` around `u` for `k` cones, bisector of cone 0 pointing up.
fn cone(ps: &PointSet, u: usize, v: usize, k: usize) -> (usize, f64) {
    let (a, b) = (ps.pos(u), ps.pos(v));
    let phi = (b.x - a.x).atan2(b.y - a.y);
    let theta = 2.0 * PI / k as f64;
    let c = ((phi + theta / 2.0).rem_euclid(2.0 * PI) / theta).floor() as usize % k;
    (c, phi - c as f64 * theta)
}

pub fn scan_edges(ps: &PointSet, k: usize, projection: bool) -> BTreeSet<(usize, usize)> {
    let n = ps.len();
    let mut out = BTreeSet::new();
    for u in 0..n {
        let mut best: Vec<Option<(f64, usize)>> = vec![None; k];
        for v in (0..n).filter(|&v| v != u) {
            let (c, off) = cone(ps, u, v, k);
            let d = ps.dist(u, v);
            let key = if projection { d * off.cos() } else { d };
            if best[c].is_none_or(|(b, _)| key < b) {
                best[c] = Some((key, v));
            }
        }
        for (_, v) in best.into_iter().flatten() {
            out.insert((u.min(v), u.max(v)));
        }
    }
    out
}

pub fn edge_set(g: &SpannerGraph) -> BTreeSet<(usize, usize)> {
    g.edges().into_iter().collect()
}
