//! Constructive spanning paths in the Θ5-graph.
//!
//! The recursion works in a frame where `w` lies in the right half of cone 0
//! of `u`: global cone labels are shifted so the cone of `u` holding `w`
//! becomes 0, and mirrored when `w` sits in the left half.

use crate::build::{closest_per_cone, Closeness, GraphKind, SpannerGraph};
use crate::error::{Result, SpannerError};
use crate::geom::{ConeSystem, Vec2, EPS};

/// `2(2 + √5)`: witness paths are at most this times `|T(u→w)|`.
pub const WITNESS_CONSTANT: f64 = 8.472_135_954_999_58;

struct Ctx<'a> {
    g: &'a SpannerGraph,
    cs: ConeSystem,
    closest: Vec<Vec<Option<usize>>>,
    limit: usize,
}

#[derive(Clone, Copy)]
struct Frame {
    shift: usize,
    mirror: bool,
}

impl Frame {
    fn local(self, global: usize) -> usize {
        if self.mirror {
            (self.shift + 5 - global) % 5
        } else {
            (global + 5 - self.shift) % 5
        }
    }
}

impl Ctx<'_> {
    fn cone(&self, a: Vec2, b: Vec2) -> usize {
        self.cs.cone_of_angle((b - a).angle()).0
    }

    fn size(&self, a: usize, b: usize) -> Result<f64> {
        let p = self.g.points();
        Ok(self.cs.canonical_triangle(p.get(a), p.get(b))?.size())
    }

    fn fail(&self, what: &str, u: usize, w: usize) -> SpannerError {
        SpannerError::InternalInvariantViolation(format!(
            "{what} while building a witness path from {} to {}",
            self.g.id(u),
            self.g.id(w)
        ))
    }

    fn path(&self, u: usize, w: usize, depth: usize) -> Result<Vec<usize>> {
        if depth > self.limit {
            return Err(self.fail("recursion depth exceeded", u, w));
        }
        if self.g.has_edge(u, w) {
            return Ok(vec![u, w]);
        }
        let g = self.g;
        let (pu, pw) = (g.pos(u), g.pos(w));
        let tri = self.cs.canonical_triangle(g.points().get(u), g.points().get(w))?;
        let cu = tri.cone.0;
        let frame = Frame { shift: cu, mirror: tri.lateral(pw) < 0.0 };

        // Left of the balance point: the reverse triangle is smaller.
        if self.cs.angle_alpha(pu, pw)? < self.cs.theta() / 4.0 - EPS {
            let mut p = self.path(w, u, depth + 1)?;
            p.reverse();
            return Ok(p);
        }

        let vw = self.closest[w][self.cone(pw, pu)].ok_or_else(|| self.fail("empty cone at w", u, w))?;
        if vw == u {
            return Err(self.fail("missing edge to closest vertex", u, w));
        }
        let via_vw = |this: &Self| -> Result<Vec<usize>> {
            let mut p = this.path(u, vw, depth + 1)?;
            p.push(w);
            Ok(p)
        };
        match frame.local(self.cone(pu, g.pos(vw))) {
            0..=2 => return via_vw(self),
            4 => {}
            _ => return Err(self.fail("closest vertex in an impossible cone", u, w)),
        }
        // v_w in local cone 4.
        let b = if frame.mirror { tri.corner_a() } else { tri.corner_b() };
        if b == g.pos(vw) || frame.local(self.cone(b, g.pos(vw))) == 3 {
            return via_vw(self);
        }
        let vu = self.closest[u][cu].ok_or_else(|| self.fail("empty cone at u", u, w))?;
        let pvu = g.pos(vu);
        match frame.local(self.cone(pvu, pw)) {
            4 | 0 => {
                let mut p = vec![u];
                p.extend(self.path(vu, w, depth + 1)?);
                Ok(p)
            }
            1 => match frame.local(self.cone(pw, pvu)) {
                3 => {
                    let mut p = vec![u];
                    p.extend(self.path(vu, vw, depth + 1)?);
                    p.push(w);
                    Ok(p)
                }
                4 => {
                    let c = WITNESS_CONSTANT;
                    let mut p = vec![u];
                    if self.size(w, vu)? <= (c - 1.0) / c * tri.size() {
                        let mut q = self.path(w, vu, depth + 1)?;
                        q.reverse();
                        p.extend(q);
                    } else {
                        let mut q = self.path(vw, vu, depth + 1)?;
                        q.reverse();
                        p.extend(q);
                        p.push(w);
                    }
                    Ok(p)
                }
                _ => Err(self.fail("v_u in an impossible cone of w", u, w)),
            },
            _ => Err(self.fail("w in an impossible cone of v_u", u, w)),
        }
    }
}

/// Builds a `u`–`w` path in a Θ5-graph following the inductive proof; its
/// length is at most [`WITNESS_CONSTANT`] times `|T(u→w)|`. The path may
/// revisit vertices.
pub fn theta5_witness_path(g: &SpannerGraph, u: usize, w: usize) -> Result<Vec<usize>> {
    if g.kind() != GraphKind::Theta || g.k() != Some(5) {
        return Err(SpannerError::InvalidParameter("need a Θ5-graph".into()));
    }
    if u == w {
        return Err(SpannerError::DegenerateInput("identical endpoints".into()));
    }
    let cs = ConeSystem::new(5)?;
    let n = g.len();
    let ctx = Ctx {
        g,
        cs,
        closest: closest_per_cone(g.points(), &cs, Closeness::Projection),
        limit: n * (n - 1) / 2,
    };
    ctx.path(u, w, 0)
}
