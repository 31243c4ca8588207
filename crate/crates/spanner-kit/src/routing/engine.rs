//! The stateful router, run over any substrate.

use crate::build::{GraphKind, SpannerGraph};
use crate::error::{Result, SpannerError};

use super::substrate::{Complete, Substrate, X0Pick, G12, G9};
use super::{check_pair, finish, potential_a, require_half, Algo, CaseLabel, PotentialValue, Regions, RoutingStep, Side};

/// Case and potential of the stateful router at `v` with preferred side `pref`.
fn state_at(g: &SpannerGraph, v: usize, t: usize, pref: Option<Side>) -> Result<(CaseLabel, PotentialValue)> {
    if g.cone6(v, t).is_positive() {
        return Ok((CaseLabel::CalA, potential_a(g, v, t)?));
    }
    let r = Regions::new(g, v, t)?;
    Ok(match pref {
        None => (CaseLabel::CalB, r.potential(CaseLabel::D, None)),
        Some(p) => (CaseLabel::CalC, r.potential(CaseLabel::CalC, Some(p.other()))),
    })
}

/// Preferred side after a positive step from `s` to `v` that leaves `t` in a
/// negative cone of `v`: the side region of `v` inside the empty `T(s→v)`.
fn side_after_positive(g: &SpannerGraph, s: usize, v: usize, t: usize) -> Result<Option<Side>> {
    if g.cone6(v, t).is_positive() {
        return Ok(None);
    }
    let used = g.cone6(s, t);
    let r = Regions::new(g, v, t)?;
    if r.side_cone(Side::X2) == used {
        Ok(Some(Side::X1))
    } else if r.side_cone(Side::X1) == used {
        Ok(Some(Side::X2))
    } else {
        Err(SpannerError::InternalInvariantViolation(format!(
            "positive step {}→{} leaves the destination in an unexpected cone",
            g.id(s),
            g.id(v)
        )))
    }
}

fn missing(g: &SpannerGraph, s: usize, what: &str) -> SpannerError {
    SpannerError::InternalInvariantViolation(format!("no {what} at {}", g.id(s)))
}

pub(crate) fn run<S: Substrate>(sub: &S, algo: Algo, s: usize, t: usize, factor: f64, slack_factor: f64) -> Result<crate::routing::RoutingTrace> {
    let g = sub.graph();
    check_pair(g, s, t)?;
    let n = g.len();
    let mut seen = vec![false; n];
    let mut steps = Vec::new();
    let mut slack = 0.0;
    let mut pref: Option<Side> = None;
    let mut cur = s;
    let (mut case, mut phi) = state_at(g, cur, t, pref)?;
    while cur != t {
        seen[cur] = true;
        let mut extra = 0.0;
        let mut prefix: Vec<usize> = Vec::new();
        let mut next_pref = pref;
        let hop = match case {
            CaseLabel::CalA => {
                let hop = sub.positive_hop(cur, g.cone6(cur, t))?.ok_or_else(|| missing(g, cur, "positive edge"))?;
                if hop.to != t {
                    next_pref = side_after_positive(g, cur, hop.to, t)?;
                }
                hop
            }
            CaseLabel::CalB => {
                let r = Regions::new(g, cur, t)?;
                if sub.x0_exists(cur, &r)? {
                    sub.x0_hop(cur, &r, X0Pick::Any)?
                } else {
                    let small = r.smaller();
                    let probe = sub.side_probe(cur, &r, small)?;
                    match probe.hop {
                        Some(h) => h,
                        None => {
                            let large = small.other();
                            let h = sub
                                .positive_hop(cur, r.side_cone(large))?
                                .filter(|h| r.in_side(large, g.pos(h.to)))
                                .ok_or_else(|| missing(g, cur, "edge into either side region"))?;
                            extra = probe.wasted;
                            prefix = probe.walk;
                            if extra > 0.0 {
                                slack += slack_factor * r.corner_dist(small);
                            }
                            next_pref = Some(small);
                            h
                        }
                    }
                }
            }
            _ => {
                let p = pref.expect("case C has a preferred side");
                let r = Regions::new(g, cur, t)?;
                if sub.x0_exists(cur, &r)? {
                    sub.x0_hop(cur, &r, X0Pick::Toward(p))?
                } else {
                    sub.positive_hop(cur, r.side_cone(p.other()))?
                        .ok_or_else(|| missing(g, cur, "edge on the non-preferred side"))?
                }
            }
        };
        let v = hop.to;
        if seen[v] {
            return Err(SpannerError::InternalInvariantViolation(format!("route revisits {}", g.id(v))));
        }
        let (next_case, next_phi) = if v == t { (case, PotentialValue::new(0.0, 0.0)) } else { state_at(g, v, t, next_pref)? };
        let mut walk: Vec<usize> = prefix;
        if walk.is_empty() {
            walk = hop.walk.clone();
        } else {
            walk.extend(&hop.walk[1..]);
        }
        let simulated = walk.len() > 2;
        steps.push(RoutingStep {
            from: g.id(cur),
            to: g.id(v),
            case,
            phi_before: phi.total,
            phi_after: next_phi.total,
            len: hop.len,
            edge_len: g.dist(cur, v),
            exploration: hop.exploration + extra,
            preferred_side: next_pref,
            walk: if simulated { walk.iter().map(|&x| g.id(x)).collect() } else { Vec::new() },
        });
        cur = v;
        pref = next_pref;
        case = next_case;
        phi = next_phi;
    }
    finish(g, algo, s, t, steps, factor, slack)
}

/// Routing with a constant-size memory (the preferred side) on a half-Θ6-graph.
pub fn route_stateful(h: &SpannerGraph, s: usize, t: usize) -> Result<crate::routing::RoutingTrace> {
    require_half(h)?;
    run(&Complete(h), Algo::Stateful, s, t, 1.0, 0.0)
}

/// Stateful routing simulated on G12 with exponential search.
pub fn route_g12(g: &SpannerGraph, s: usize, t: usize) -> Result<crate::routing::RoutingTrace> {
    if g.kind() != GraphKind::G12 {
        return Err(SpannerError::InvalidParameter(format!("expected a g12 graph, got {}", g.kind().name())));
    }
    run(&G12(g), Algo::G12, s, t, 19.0, 20.0)
}

/// Stateful routing simulated on G9 using the stored hints.
pub fn route_g9(g: &SpannerGraph, s: usize, t: usize) -> Result<crate::routing::RoutingTrace> {
    if g.kind() != GraphKind::G9 {
        return Err(SpannerError::InvalidParameter(format!("expected a g9 graph, got {}", g.kind().name())));
    }
    if g.hints().is_none() {
        return Err(SpannerError::InvalidParameter("G9 graph has no hint metadata".into()));
    }
    run(&G9(g), Algo::G9, s, t, 3.0, 4.0)
}
