//! Cone geometry, canonical triangles and the predicates shared by the
//! builders, the analysis code and the routers.
//!
//! Angles are measured clockwise from the positive y-axis. Cone `C_i` has its
//! bisector at angle `i * theta` (plus an optional rotation) and a point lying
//! exactly on the boundary between two cones belongs to the counter-clockwise
//! one, i.e. the cone with the smaller label.

use std::collections::HashMap;
use std::f64::consts::{PI, TAU};

use serde::{Deserialize, Serialize};

use crate::error::{Result, SpannerError};

/// Tolerance used for angle and region-membership decisions.
pub const EPS: f64 = 1e-9;

/// A vector or location in the plane without identity.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Vec2 {
    pub x: f64,
    pub y: f64,
}

impl Vec2 {
    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    /// Unit vector pointing at clockwise angle `phi` from +y.
    pub fn from_angle(phi: f64) -> Self {
        Self::new(phi.sin(), phi.cos())
    }

    pub fn dot(self, o: Vec2) -> f64 {
        self.x * o.x + self.y * o.y
    }

    pub fn cross(self, o: Vec2) -> f64 {
        self.x * o.y - self.y * o.x
    }

    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }

    pub fn dist(self, o: Vec2) -> f64 {
        (self - o).norm()
    }

    /// Clockwise angle from +y in `[0, 2π)`.
    pub fn angle(self) -> f64 {
        normalize_angle(self.x.atan2(self.y))
    }

    pub fn scale(self, s: f64) -> Self {
        Self::new(self.x * s, self.y * s)
    }

    pub fn lerp(self, o: Vec2, t: f64) -> Self {
        self + (o - self).scale(t)
    }
}

impl std::ops::Add for Vec2 {
    type Output = Vec2;
    fn add(self, o: Vec2) -> Vec2 {
        Vec2::new(self.x + o.x, self.y + o.y)
    }
}

impl std::ops::Sub for Vec2 {
    type Output = Vec2;
    fn sub(self, o: Vec2) -> Vec2 {
        Vec2::new(self.x - o.x, self.y - o.y)
    }
}

/// Reduce an angle to `[0, 2π)`.
pub fn normalize_angle(a: f64) -> f64 {
    let r = a.rem_euclid(TAU);
    if r >= TAU {
        0.0
    } else {
        r
    }
}

/// A labelled point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Point {
    pub id: u32,
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub const fn new(id: u32, x: f64, y: f64) -> Self {
        Self { id, x, y }
    }

    pub fn pos(&self) -> Vec2 {
        Vec2::new(self.x, self.y)
    }

    pub fn dist(&self, o: &Point) -> f64 {
        self.pos().dist(o.pos())
    }
}

/// An assumption of general position that the input breaks.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "violation", rename_all = "snake_case")]
pub enum GeneralPositionViolation {
    /// Two points at equal distance from a common apex.
    Equidistant { apex: u32, a: u32, b: u32 },
    /// Two points on a line parallel or perpendicular to a cone boundary.
    BoundaryAligned { a: u32, b: u32 },
}

/// Validated, non-empty set of points with unique ids and coordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct PointSet {
    points: Vec<Point>,
    by_id: HashMap<u32, usize>,
}

impl PointSet {
    pub fn new(points: Vec<Point>) -> Result<Self> {
        if points.is_empty() {
            return Err(SpannerError::DegenerateInput("empty point set".into()));
        }
        let mut by_id = HashMap::with_capacity(points.len());
        let mut coords = HashMap::with_capacity(points.len());
        for (i, p) in points.iter().enumerate() {
            if !p.x.is_finite() || !p.y.is_finite() {
                return Err(SpannerError::DegenerateInput(format!(
                    "point {} has non-finite coordinates",
                    p.id
                )));
            }
            if by_id.insert(p.id, i).is_some() {
                return Err(SpannerError::DegenerateInput(format!("duplicate id {}", p.id)));
            }
            // -0.0 and 0.0 compare equal, so normalise before hashing bits.
            let key = ((p.x + 0.0).to_bits(), (p.y + 0.0).to_bits());
            if let Some(&j) = coords.get(&key) {
                let other: &Point = &points[j];
                return Err(SpannerError::DegenerateInput(format!(
                    "points {} and {} share coordinates",
                    other.id, p.id
                )));
            }
            coords.insert(key, i);
        }
        Ok(Self { points, by_id })
    }

    /// Points with ids `0..n` in the given order.
    pub fn from_coords(coords: &[(f64, f64)]) -> Result<Self> {
        Self::new(
            coords
                .iter()
                .enumerate()
                .map(|(i, &(x, y))| Point::new(i as u32, x, y))
                .collect(),
        )
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn get(&self, idx: usize) -> &Point {
        &self.points[idx]
    }

    pub fn pos(&self, idx: usize) -> Vec2 {
        self.points[idx].pos()
    }

    pub fn index_of(&self, id: u32) -> Option<usize> {
        self.by_id.get(&id).copied()
    }

    pub fn dist(&self, a: usize, b: usize) -> f64 {
        self.pos(a).dist(self.pos(b))
    }

    /// Lists every violated general-position assumption relative to `cs`.
    pub fn general_position_report(&self, cs: &ConeSystem) -> Vec<GeneralPositionViolation> {
        let mut out = Vec::new();
        let n = self.len();
        for a in 0..n {
            for b in a + 1..n {
                if cs.is_boundary_aligned(self.pos(a), self.pos(b)) {
                    out.push(GeneralPositionViolation::BoundaryAligned {
                        a: self.points[a].id,
                        b: self.points[b].id,
                    });
                }
            }
        }
        for apex in 0..n {
            let mut d: Vec<(f64, usize)> = (0..n)
                .filter(|&j| j != apex)
                .map(|j| (self.dist(apex, j), j))
                .collect();
            d.sort_by(|x, y| x.0.total_cmp(&y.0));
            for w in d.windows(2) {
                if (w[1].0 - w[0].0).abs() <= 1e-12 * w[1].0.max(1.0) {
                    out.push(GeneralPositionViolation::Equidistant {
                        apex: self.points[apex].id,
                        a: self.points[w[0].1].id,
                        b: self.points[w[1].1].id,
                    });
                }
            }
        }
        out
    }
}

/// Sign of a half-Θ6 cone.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ConeSign {
    Positive,
    Negative,
}

/// Half-Θ6 relabelling of a six-cone index.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct HalfLabel {
    pub sign: ConeSign,
    pub triple_index: usize,
}

/// Index of a cone within a [`ConeSystem`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ConeIndex(pub usize);

impl ConeIndex {
    pub fn index(self) -> usize {
        self.0
    }

    /// Clockwise sequence C0+, C1−, C2+, C0−, C1+, C2− (six cones only).
    pub fn half_label(self) -> HalfLabel {
        debug_assert!(self.0 < 6);
        HalfLabel {
            sign: if self.0 % 2 == 0 { ConeSign::Positive } else { ConeSign::Negative },
            triple_index: self.0 % 3,
        }
    }

    /// True for the positive cones of the half-Θ6 labelling.
    pub fn is_positive(self) -> bool {
        self.0 % 2 == 0
    }

    /// The six-cone index of the opposite cone.
    pub fn opposite6(self) -> ConeIndex {
        ConeIndex((self.0 + 3) % 6)
    }
}

/// `k` equiangular cones labelled clockwise, with C0's bisector at
/// `rotation` radians clockwise from +y.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConeSystem {
    k: usize,
    theta: f64,
    rotation: f64,
}

impl ConeSystem {
    pub fn new(k: usize) -> Result<Self> {
        Self::rotated(k, 0.0)
    }

    pub fn rotated(k: usize, rotation: f64) -> Result<Self> {
        if k < 2 {
            return Err(SpannerError::InvalidParameter(format!("cone count {k} < 2")));
        }
        if !rotation.is_finite() {
            return Err(SpannerError::InvalidParameter("non-finite rotation".into()));
        }
        Ok(Self { k, theta: TAU / k as f64, rotation })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn rotation(&self) -> f64 {
        self.rotation
    }

    /// Clockwise angle of the bisector of cone `i`.
    pub fn bisector_angle(&self, i: usize) -> f64 {
        normalize_angle(i as f64 * self.theta + self.rotation)
    }

    /// Angle of the counter-clockwise boundary ray of cone `i`.
    pub fn ccw_boundary(&self, i: usize) -> f64 {
        normalize_angle(self.bisector_angle(i) - self.theta / 2.0)
    }

    /// Angle of the clockwise boundary ray of cone `i`.
    pub fn cw_boundary(&self, i: usize) -> f64 {
        normalize_angle(self.bisector_angle(i) + self.theta / 2.0)
    }

    /// Cone containing direction `phi`; boundary rays go counter-clockwise.
    pub fn cone_of_angle(&self, phi: f64) -> ConeIndex {
        let t = normalize_angle(phi - self.rotation + self.theta / 2.0) / self.theta;
        let r = t.round();
        let i = if (t - r).abs() * self.theta <= EPS {
            r as i64 - 1
        } else {
            t.ceil() as i64 - 1
        };
        ConeIndex(i.rem_euclid(self.k as i64) as usize)
    }

    /// The cone of `u` that contains `v`.
    pub fn cone_index(&self, u: Vec2, v: Vec2) -> Result<ConeIndex> {
        if u == v {
            return Err(SpannerError::DegenerateInput("identical points".into()));
        }
        Ok(self.cone_of_angle((v - u).angle()))
    }

    /// Length of the projection of `v - u` on the bisector of `cone`.
    pub fn projection_in(&self, cone: ConeIndex, u: Vec2, v: Vec2) -> f64 {
        (v - u).dot(Vec2::from_angle(self.bisector_angle(cone.0)))
    }

    /// Distance from `u` to the projection of `v` on the bisector of the cone
    /// of `u` containing `v`.
    pub fn theta_projection(&self, u: Vec2, v: Vec2) -> Result<f64> {
        let c = self.cone_index(u, v)?;
        Ok(self.projection_in(c, u, v))
    }

    /// Unsigned angle between `uw` and the bisector of the cone of `u`
    /// containing `w`, in `[0, θ/2]`.
    pub fn angle_alpha(&self, u: Vec2, w: Vec2) -> Result<f64> {
        let c = self.cone_index(u, w)?;
        let d = normalize_angle((w - u).angle() - self.bisector_angle(c.0));
        let d = if d > PI { TAU - d } else { d };
        Ok(d.min(self.theta / 2.0))
    }

    pub fn canonical_triangle(&self, u: &Point, w: &Point) -> Result<CanonicalTriangle> {
        let cone = self.cone_index(u.pos(), w.pos())?;
        Ok(CanonicalTriangle {
            apex: *u,
            target: *w,
            cone,
            bisector: self.bisector_angle(cone.0),
            half_angle: self.theta / 2.0,
        })
    }

    /// True if segment `ab` is parallel or perpendicular to a cone boundary.
    pub fn is_boundary_aligned(&self, a: Vec2, b: Vec2) -> bool {
        let psi = (b - a).angle().rem_euclid(PI);
        (0..self.k).any(|i| {
            let bd = self.ccw_boundary(i).rem_euclid(PI);
            [psi, (psi + PI / 2.0).rem_euclid(PI)].iter().any(|&p| {
                let d = (p - bd).abs();
                d.min(PI - d) <= EPS
            })
        })
    }
}

/// The triangle bounded by the cone of `apex` containing `target` and the
/// line through `target` perpendicular to the cone bisector.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CanonicalTriangle {
    pub apex: Point,
    pub target: Point,
    pub cone: ConeIndex,
    bisector: f64,
    half_angle: f64,
}

impl CanonicalTriangle {
    /// Distance from the apex to the midpoint of the far side.
    pub fn height(&self) -> f64 {
        (self.target.pos() - self.apex.pos()).dot(Vec2::from_angle(self.bisector))
    }

    /// Length of either apex-incident side.
    pub fn size(&self) -> f64 {
        self.height() / self.half_angle.cos()
    }

    /// Clockwise angle of the bisector.
    pub fn bisector_angle(&self) -> f64 {
        self.bisector
    }

    /// Counter-clockwise corner.
    pub fn corner_a(&self) -> Vec2 {
        self.apex.pos() + Vec2::from_angle(self.bisector - self.half_angle).scale(self.size())
    }

    /// Clockwise corner.
    pub fn corner_b(&self) -> Vec2 {
        self.apex.pos() + Vec2::from_angle(self.bisector + self.half_angle).scale(self.size())
    }

    pub fn midpoint_m(&self) -> Vec2 {
        self.apex.pos() + Vec2::from_angle(self.bisector).scale(self.height())
    }

    /// Intersection of `ab` with the bisector of angle(m, apex, b).
    pub fn balance_x(&self) -> Vec2 {
        self.balance_toward(true)
    }

    /// Balance point on the half containing corner b (`true`) or corner a.
    pub fn balance_toward(&self, b_side: bool) -> Vec2 {
        let q = self.half_angle / 2.0;
        let phi = if b_side { self.bisector + q } else { self.bisector - q };
        self.apex.pos() + Vec2::from_angle(phi).scale(self.height() / q.cos())
    }

    /// Signed offset of `p` from the bisector, positive toward corner b.
    pub fn lateral(&self, p: Vec2) -> f64 {
        (p - self.apex.pos()).dot(Vec2::from_angle(self.bisector + PI / 2.0))
    }

    /// Projection of `p - apex` on the bisector.
    pub fn depth(&self, p: Vec2) -> f64 {
        (p - self.apex.pos()).dot(Vec2::from_angle(self.bisector))
    }

    /// Closed membership with tolerance [`EPS`].
    pub fn contains(&self, p: Vec2) -> bool {
        let d = self.depth(p);
        d <= self.height() + EPS && self.lateral(p).abs() <= d * self.half_angle.tan() + EPS
    }

    /// Open membership: strictly inside by more than [`EPS`].
    pub fn contains_strictly(&self, p: Vec2) -> bool {
        let d = self.depth(p);
        d < self.height() - EPS && self.lateral(p).abs() < d * self.half_angle.tan() - EPS
    }

    /// Area of the triangle.
    pub fn area(&self) -> f64 {
        let h = self.height();
        h * h * self.half_angle.tan()
    }
}
