//! Instance generators: evenly spaced circles, the Θ5 lower-bound
//! configuration and the half-Θ6 routing gadgets.

use std::f64::consts::{PI, TAU};

use serde::{Deserialize, Serialize};

use crate::error::{Result, SpannerError};
use crate::geom::{ConeSystem, Point, PointSet, Vec2};

/// `n` points evenly spaced on a circle of the given radius around the
/// origin, the first one on the positive x-axis.
pub fn gen_circle(n: usize, radius: f64) -> Result<PointSet> {
    if n < 3 {
        return Err(SpannerError::InvalidParameter(format!("circle needs n >= 3, got {n}")));
    }
    if !(radius > 0.0 && radius.is_finite()) {
        return Err(SpannerError::InvalidParameter("radius must be positive".into()));
    }
    let coords: Vec<_> = (0..n)
        .map(|i| {
            let a = TAU * i as f64 / n as f64;
            (radius * a.cos(), radius * a.sin())
        })
        .collect();
    PointSet::from_coords(&coords)
}

/// Moves `corner` a distance `delta` into the triangle along the bisector of
/// its interior angle; `p` and `q` are the other two vertices.
fn into_corner(corner: Vec2, p: Vec2, q: Vec2, delta: f64) -> Vec2 {
    let a = p - corner;
    let b = q - corner;
    let d = a.scale(1.0 / a.norm()) + b.scale(1.0 / b.norm());
    corner + d.scale(delta / d.norm())
}

/// Where one vertex of the Θ5 construction is placed.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Placement {
    /// Near the counter-clockwise (`ccw`) or clockwise corner of T(from→to).
    Corner { from: usize, to: usize, ccw: bool },
    /// Inside both T(a→b) and T(b→a), near a crossing of their boundaries.
    Crossing { a: usize, b: usize },
    /// Near the crossing of the top boundary of cone 1 of `up` with the
    /// bottom boundary of cone 1 reflected through `low`.
    ConeMeet { up: usize, low: usize },
}

/// One row of the stepwise Θ5 construction: the vertices added and the
/// shortest v1–v2 path expected afterwards (1-based vertex numbers).
#[derive(Debug, Clone, PartialEq)]
pub struct Theta5Step {
    pub added: Vec<Placement>,
    pub expected_path: Vec<usize>,
}

fn corner(from: usize, to: usize, ccw: bool) -> Placement {
    Placement::Corner { from: from - 1, to: to - 1, ccw }
}

/// Steps 3 to 18 of the construction; v1 and v2 are placed first.
pub fn theta5_steps() -> Vec<Theta5Step> {
    let s = |added: Vec<Placement>, path: &[usize]| Theta5Step { added, expected_path: path.to_vec() };
    vec![
        s(vec![corner(1, 2, true), corner(2, 1, true)], &[1, 4, 2]),
        s(vec![corner(1, 4, false), corner(4, 1, true)], &[1, 3, 2]),
        s(vec![corner(2, 3, false), corner(3, 2, true)], &[1, 6, 4, 2]),
        s(vec![corner(1, 6, false), corner(6, 1, true)], &[1, 5, 4, 2]),
        s(vec![corner(4, 5, true), corner(5, 4, false)], &[1, 5, 6, 4, 2]),
        s(vec![corner(5, 6, true), corner(6, 5, false)], &[1, 5, 14, 6, 4, 2]),
        s(vec![corner(5, 14, true), corner(14, 5, false)], &[1, 5, 13, 6, 4, 2]),
        s(vec![corner(6, 13, false), corner(13, 6, true)], &[1, 3, 8, 2]),
        s(vec![Placement::Crossing { a: 1, b: 7 }], &[1, 3, 7, 2]),
        s(vec![corner(3, 7, true), corner(7, 3, false)], &[1, 5, 12, 2]),
        s(vec![corner(2, 12, true)], &[1, 10, 6, 4, 2]),
        s(vec![Placement::ConeMeet { up: 9, low: 0 }], &[1, 5, 12, 4, 2]),
        s(vec![corner(4, 12, true), corner(12, 4, false)], &[1, 5, 13, 14, 6, 4, 2]),
        s(vec![corner(13, 14, false), corner(14, 13, true)], &[1, 9, 18, 6, 4, 2]),
        s(vec![corner(9, 18, false), corner(18, 9, true)], &[1, 5, 16, 11, 4, 2]),
        s(vec![corner(11, 16, true), corner(16, 11, false)], &[1, 23, 10, 6, 4, 2]),
    ]
}

/// Coordinates of the Θ5 construction after each step, starting with the
/// two-point configuration; the last entry is the full 31-point instance.
pub fn theta5_construction(delta: f64) -> Result<Vec<Vec<Vec2>>> {
    if !(delta > 0.0 && delta.is_finite()) {
        return Err(SpannerError::InvalidParameter(format!("nudge must be positive, got {delta}")));
    }
    let cs = ConeSystem::new(5)?;
    let half = cs.theta() / 2.0;
    let v1 = Vec2::new(0.0, 0.0);
    // v2 near the clockwise corner of T(v1→v2), with the side normalised to 1.
    let b = Vec2::from_angle(half);
    let v2 = into_corner(b, v1, Vec2::from_angle(-half), delta);
    let mut pts = vec![v1, v2];
    let mut snapshots = vec![pts.clone()];
    for step in theta5_steps() {
        let mut added = Vec::new();
        for pl in &step.added {
            added.push(place(&cs, &pts, *pl, delta)?);
        }
        pts.extend(added);
        snapshots.push(pts.clone());
    }
    Ok(snapshots)
}

fn place(cs: &ConeSystem, pts: &[Vec2], pl: Placement, delta: f64) -> Result<Vec2> {
    let tri = |a: usize, b: usize| {
        cs.canonical_triangle(&Point::new(0, pts[a].x, pts[a].y), &Point::new(1, pts[b].x, pts[b].y))
    };
    Ok(match pl {
        Placement::Corner { from, to, ccw } => {
            let t = tri(from, to)?;
            let (c, other) = if ccw { (t.corner_a(), t.corner_b()) } else { (t.corner_b(), t.corner_a()) };
            into_corner(c, pts[from], other, delta)
        }
        Placement::Crossing { a, b } => {
            let (t1, t2) = (tri(a, b)?, tri(b, a)?);
            let region = clip(
                &[pts[a], t1.corner_a(), t1.corner_b()],
                &[pts[b], t2.corner_a(), t2.corner_b()],
            );
            let far = region
                .iter()
                .copied()
                .max_by(|p, q| {
                    let d = |x: Vec2| x.dist(pts[a]).min(x.dist(pts[b]));
                    d(*p).total_cmp(&d(*q))
                })
                .ok_or_else(|| SpannerError::InternalInvariantViolation("triangles do not overlap".into()))?;
            let centre = region.iter().fold(Vec2::default(), |s, p| s + *p).scale(1.0 / region.len() as f64);
            far + (centre - far).scale(delta / (centre - far).norm())
        }
        Placement::ConeMeet { up, low } => {
            let eta = delta;
            let d1 = Vec2::from_angle(cs.theta() / 2.0 + eta);
            let d2 = Vec2::from_angle(PI + 3.0 * cs.theta() / 2.0 - eta);
            let (p, q) = (pts[up], pts[low]);
            // p + s·d1 = q + r·d2
            let den = d1.cross(d2);
            let s = (q - p).cross(d2) / den;
            p + d1.scale(s)
        }
    })
}

/// Intersection of two convex polygons given in either orientation.
fn clip(subject: &[Vec2], window: &[Vec2]) -> Vec<Vec2> {
    let orient = |poly: &[Vec2]| {
        let a: f64 = (0..poly.len()).map(|i| poly[i].cross(poly[(i + 1) % poly.len()])).sum();
        if a < 0.0 {
            poly.iter().rev().copied().collect::<Vec<_>>()
        } else {
            poly.to_vec()
        }
    };
    let window = orient(window);
    let mut out = orient(subject);
    for i in 0..window.len() {
        let (e0, e1) = (window[i], window[(i + 1) % window.len()]);
        let inside = |p: Vec2| (e1 - e0).cross(p - e0) >= 0.0;
        let input = std::mem::take(&mut out);
        for j in 0..input.len() {
            let (cur, prev) = (input[j], input[(j + input.len() - 1) % input.len()]);
            let hit = |a: Vec2, b: Vec2| {
                let d = b - a;
                let t = (e1 - e0).cross(e0 - a) / (e1 - e0).cross(d);
                a + d.scale(t)
            };
            if inside(cur) {
                if !inside(prev) {
                    out.push(hit(prev, cur));
                }
                out.push(cur);
            } else if inside(prev) {
                out.push(hit(prev, cur));
            }
        }
    }
    out
}

/// `½(11√5 − 17)`.
pub fn theta5_lower_bound_value() -> f64 {
    0.5 * (11.0 * 5f64.sqrt() - 17.0)
}

/// The 31-vertex Θ5 configuration; v1 and v2 have ids 1 and 2.
pub fn gen_theta5_lower_bound(delta: f64) -> Result<PointSet> {
    let last = theta5_construction(delta)?.pop().expect("at least one snapshot");
    to_point_set(&last)
}

fn to_point_set(pts: &[Vec2]) -> Result<PointSet> {
    PointSet::new(pts.iter().enumerate().map(|(i, p)| Point::new(i as u32 + 1, p.x, p.y)).collect())
}

/// Variant of the half-Θ6 routing gadget.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RoutingGadget {
    Positive,
    NegativeA,
    NegativeB,
}

impl std::str::FromStr for RoutingGadget {
    type Err = SpannerError;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "positive" => Ok(RoutingGadget::Positive),
            "negative_a" => Ok(RoutingGadget::NegativeA),
            "negative_b" => Ok(RoutingGadget::NegativeB),
            _ => Err(SpannerError::InvalidParameter(format!("unknown gadget {s}"))),
        }
    }
}

/// Half-Θ6 routing gadget with `u` (id 0) at the origin and `w` (id 1) on the
/// top side of T(u→w), which has side length 1; `alpha` is the angle at `u`
/// between `uw` and the vertical, with `w` right of the midpoint.
pub fn gen_routing_lb(kind: RoutingGadget, alpha: f64, nudge: f64) -> Result<PointSet> {
    if !(0.0..=PI / 6.0 + 1e-12).contains(&alpha) {
        return Err(SpannerError::InvalidParameter(format!("alpha {alpha} outside [0, π/6]")));
    }
    if !(nudge > 0.0 && nudge.is_finite()) {
        return Err(SpannerError::InvalidParameter("nudge must be positive".into()));
    }
    let h = 3f64.sqrt() / 2.0;
    let u = Vec2::new(0.0, 0.0);
    let w = Vec2::new(h * alpha.min(PI / 6.0).tan(), h);
    let a = Vec2::new(-0.5, h);
    let b = Vec2::new(0.5, h);
    let d = nudge;
    let mut pts = vec![u, w];
    match kind {
        RoutingGadget::Positive => pts.push(into_corner(a, u, b, d)),
        RoutingGadget::NegativeA | RoutingGadget::NegativeB => {
            // The corner points are w's only neighbours in both instances;
            // the lower points, mirrored between the two, decide which
            // corner leads on to u.
            let a_up = into_corner(a, u, b, d);
            let b_up = into_corner(b, u, a, d);
            let down = (u - a).scale(1.0 / (u - a).norm());
            let out = Vec2::new(down.y, -down.x);
            let near_a = a_up + down.scale(2.0 * d) + out.scale(0.1 * d);
            let near_b = b_up + Vec2::new(-0.2 * d, -0.4 * d);
            let mirror = |p: Vec2| Vec2::new(-p.x, p.y);
            let (a_low, b_low) = match kind {
                RoutingGadget::NegativeA => (near_a, near_b),
                _ => (mirror(near_b), mirror(near_a)),
            };
            pts.extend([a_up, b_up, a_low, b_low]);
        }
    }
    PointSet::new(pts.iter().enumerate().map(|(i, p)| Point::new(i as u32, p.x, p.y)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn square() {
        let ps = gen_circle(4, 1.0).unwrap();
        assert!((ps.pos(1).y - 1.0).abs() < 1e-12);
        assert!(gen_circle(2, 1.0).is_err());
    }

    #[test]
    fn bad_nudge() {
        assert!(gen_theta5_lower_bound(0.0).is_err());
        assert!(gen_routing_lb(RoutingGadget::Positive, 1.0, 1e-4).is_err());
    }

    #[test]
    fn clip_overlapping_squares() {
        let a = [Vec2::new(0.0, 0.0), Vec2::new(2.0, 0.0), Vec2::new(2.0, 2.0), Vec2::new(0.0, 2.0)];
        let b: Vec<_> = a.iter().map(|p| *p + Vec2::new(1.0, 1.0)).collect();
        let r = clip(&a, &b);
        let area: f64 = (0..r.len()).map(|i| r[i].cross(r[(i + 1) % r.len()])).sum::<f64>() / 2.0;
        assert!((area.abs() - 1.0).abs() < 1e-12);
    }
}
