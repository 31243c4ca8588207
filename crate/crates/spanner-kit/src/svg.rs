//! Deterministic SVG drawings of graphs, routes and canonical triangles.

use std::fmt::Write;

use crate::build::SpannerGraph;
use crate::geom::{ConeSystem, Vec2};
use crate::routing::RoutingTrace;

const SIZE: f64 = 800.0;
const MARGIN: f64 = 20.0;

struct View {
    min: Vec2,
    scale: f64,
    height: f64,
}

impl View {
    fn new(g: &SpannerGraph) -> Self {
        let pts = g.points().points();
        let (mut lo, mut hi) = (Vec2::new(f64::INFINITY, f64::INFINITY), Vec2::new(f64::NEG_INFINITY, f64::NEG_INFINITY));
        for p in pts {
            lo = Vec2::new(lo.x.min(p.x), lo.y.min(p.y));
            hi = Vec2::new(hi.x.max(p.x), hi.y.max(p.y));
        }
        let span = (hi.x - lo.x).max(hi.y - lo.y).max(1e-12);
        let scale = (SIZE - 2.0 * MARGIN) / span;
        Self { min: lo, scale, height: (hi.y - lo.y) * scale + 2.0 * MARGIN }
    }

    /// Maps to screen coordinates with y pointing up.
    fn map(&self, p: Vec2) -> (f64, f64) {
        (MARGIN + (p.x - self.min.x) * self.scale, self.height - MARGIN - (p.y - self.min.y) * self.scale)
    }
}

/// Renders `g`, optionally with the logical steps of `overlay` as
/// `<line class="route">` elements and the outline of `T(u→w)` for `pair`.
pub fn render_svg(g: &SpannerGraph, overlay: Option<&RoutingTrace>, pair: Option<(usize, usize)>) -> String {
    let v = View::new(g);
    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{SIZE:.0}" height="{:.0}" viewBox="0 0 {SIZE:.0} {:.0}">"#,
        v.height, v.height
    );
    out.push_str("<style>.edge{stroke:#888;stroke-width:1}.route{stroke:#d22;stroke-width:3}.tri{fill:none;stroke:#26c;stroke-dasharray:4 3}.pt{fill:#000}</style>\n");
    let line = |out: &mut String, class: &str, a: Vec2, b: Vec2| {
        let ((x1, y1), (x2, y2)) = (v.map(a), v.map(b));
        let _ = writeln!(out, r#"<line class="{class}" x1="{x1:.3}" y1="{y1:.3}" x2="{x2:.3}" y2="{y2:.3}"/>"#);
    };
    for (a, b) in g.edges() {
        line(&mut out, "edge", g.pos(a), g.pos(b));
    }
    if let Some((a, b)) = pair {
        let k = g.k().unwrap_or(6).max(2);
        if let Ok(tri) = ConeSystem::new(k).and_then(|cs| cs.canonical_triangle(g.points().get(a), g.points().get(b))) {
            let pts: Vec<String> = [tri.apex.pos(), tri.corner_a(), tri.corner_b()]
                .iter()
                .map(|&p| {
                    let (x, y) = v.map(p);
                    format!("{x:.3},{y:.3}")
                })
                .collect();
            let _ = writeln!(out, r#"<polygon class="tri" points="{}"/>"#, pts.join(" "));
        }
    }
    if let Some(trace) = overlay {
        let pos = |id: u32| g.points().index_of(id).map(|i| g.pos(i));
        for st in &trace.steps {
            if let (Some(a), Some(b)) = (pos(st.from), pos(st.to)) {
                line(&mut out, "route", a, b);
            }
        }
    }
    for p in g.points().points() {
        let (x, y) = v.map(p.pos());
        let _ = writeln!(out, r#"<circle class="pt" cx="{x:.3}" cy="{y:.3}" r="3"><title>{}</title></circle>"#, p.id);
    }
    out.push_str("</svg>\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::build::build_half_theta6;
    use crate::io::{gen_random, RunConfig};
    use crate::routing::route_stateless;

    #[test]
    fn route_lines_match_steps() {
        let h = build_half_theta6(&gen_random(&RunConfig { seed: 4, n: 30, ..Default::default() }).unwrap()).unwrap();
        let plain = render_svg(&h, None, None);
        assert_eq!(plain.matches(r#"class="route""#).count(), 0);
        assert_eq!(plain, render_svg(&h, None, None));
        let r = route_stateless(&h, 0, 9).unwrap();
        let svg = render_svg(&h, Some(&r), Some((0, 9)));
        assert_eq!(svg.matches(r#"<line class="route""#).count(), r.steps.len());
        assert_eq!(svg.matches("<polygon").count(), 1);
    }
}
