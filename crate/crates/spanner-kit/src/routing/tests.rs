use super::*;
use crate::build::{build_g12, build_g9, build_half_theta6, canonical_paths, PathSide};
use crate::geom::PointSet;
use crate::io::{gen_random, RunConfig};

const H: f64 = 0.866_025_403_784_438_6;

fn half(coords: &[(f64, f64)]) -> SpannerGraph {
    build_half_theta6(&PointSet::from_coords(coords).unwrap()).unwrap()
}

fn random_half(seed: u64, n: usize) -> SpannerGraph {
    build_half_theta6(&gen_random(&RunConfig { seed, n, ..Default::default() }).unwrap()).unwrap()
}

#[test]
fn two_points_above_is_case_a() {
    let h = half(&[(0.0, 0.0), (0.1, 1.0)]);
    assert_eq!(classify_case(&h, 0, 1).unwrap(), CaseLabel::A);
    assert_eq!(classify_case(&h, 1, 0).unwrap(), CaseLabel::B);
    assert!(matches!(classify_case(&h, 0, 0), Err(SpannerError::AlreadyArrived)));
}

#[test]
fn potential_a_at_corner_b() {
    // T(s→t) of side 1 with t at its clockwise corner.
    let h = half(&[(0.0, 0.0), (0.5 - 1e-12, H)]);
    let p = potential(&h, 0, 1, CaseLabel::A).unwrap();
    assert!((p.total - 2.0).abs() < 1e-9);
}

#[test]
fn potential_d_at_midpoint() {
    // s at the midpoint of the top side of T(t→s), both corners occupied.
    let h = half(&[(0.0, H), (0.0, 0.0), (-0.5 + 1e-4, H - 1e-4), (0.5 - 1e-4, H - 1e-4)]);
    assert_eq!(classify_case(&h, 0, 1).unwrap(), CaseLabel::D);
    let p = potential(&h, 0, 1, CaseLabel::D).unwrap();
    assert!((p.total - 2.5).abs() < 1e-9);
    assert!(potential(&h, 0, 1, CaseLabel::B).is_err());
}

#[test]
fn case_b_potential_uses_nearer_corner() {
    let h = half(&[(0.2, H), (0.0, 0.0)]);
    assert_eq!(classify_case(&h, 0, 1).unwrap(), CaseLabel::B);
    let p = potential(&h, 0, 1, CaseLabel::B).unwrap();
    assert!((p.total - (1.0 + 0.3)).abs() < 1e-9);
}

#[test]
fn one_sided_is_case_c() {
    // No X0 edge, X1 occupied, X2 empty.
    let h = half(&[(0.0, H), (0.0, 0.0), (-0.4, H - 0.1)]);
    assert_eq!(classify_case(&h, 0, 1).unwrap(), CaseLabel::C);
    let r = route_stateless(&h, 0, 1).unwrap();
    assert_eq!(r.vertices(), vec![0, 2, 1]);
}

#[test]
fn direct_edge_one_step() {
    let h = half(&[(0.0, 0.0), (0.3, 1.0)]);
    for algo in [Algo::Stateless, Algo::Stateful] {
        let r = route(&h, algo, 0, 1).unwrap();
        assert_eq!(r.steps.len(), 1);
        assert!((r.total - h.dist(0, 1)).abs() < 1e-12);
        assert!(r.pass && r.success);
    }
}

#[test]
fn wrong_graph_kind_rejected() {
    let h = random_half(1, 10);
    assert!(matches!(route_g12(&h, 0, 1), Err(SpannerError::InvalidParameter(_))));
    assert!(matches!(route_g9(&h, 0, 1), Err(SpannerError::InvalidParameter(_))));
    let g12 = build_g12(&h).unwrap();
    assert!(matches!(route_stateless(&g12, 0, 1), Err(SpannerError::InvalidParameter(_))));
}

#[test]
fn ccw_side_walks_clockwise_later() {
    let h = random_half(5, 60);
    let g9 = build_g9(&h).unwrap();
    for cp in canonical_paths(&h) {
        let up = cp.negative_cone.opposite6();
        for w in cp.path.windows(2) {
            assert_eq!(g9.side_neighbor(w[0], up, PathSide::Ccw), Some(w[1]));
            assert_eq!(g9.side_neighbor(w[1], up, PathSide::Cw), Some(w[0]));
        }
    }
}

#[test]
fn g12_x0_test_matches_half_theta6() {
    use super::substrate::{Complete, Substrate, G12, G9};
    for seed in 0..5 {
        let h = random_half(seed, 40);
        let g12 = build_g12(&h).unwrap();
        let g9 = build_g9(&h).unwrap();
        for s in 0..h.len() {
            for t in 0..h.len() {
                if s == t || h.cone6(s, t).is_positive() {
                    continue;
                }
                let r = Regions::new(&h, s, t).unwrap();
                let truth = Complete(&h).x0_exists(s, &r).unwrap();
                assert_eq!(G12(&g12).x0_exists(s, &r).unwrap(), truth, "seed {seed} s {s} t {t}");
                assert_eq!(G9(&g9).x0_exists(s, &r).unwrap(), truth, "seed {seed} s {s} t {t}");
            }
        }
    }
}

fn check_half_trace(h: &SpannerGraph, r: &RoutingTrace) {
    assert!(r.success && r.pass, "{r:?}");
    let mut seen = std::collections::HashSet::new();
    for v in r.vertices() {
        assert!(seen.insert(v), "revisit in {r:?}");
    }
    let mut left_d = false;
    for st in &r.steps {
        assert!(st.phi_before - st.phi_after >= st.len - 1e-9, "{st:?}");
        if st.case == CaseLabel::D {
            assert!(!left_d && !r.starts_positive());
        } else {
            left_d = true;
        }
    }
    assert!(r.steps.len() < h.len());
}

#[test]
fn random_routes_respect_bounds() {
    for seed in 0..6 {
        let h = random_half(seed, 40);
        let g12 = build_g12(&h).unwrap();
        let g9 = build_g9(&h).unwrap();
        for s in 0..h.len() {
            for t in 0..h.len() {
                if s == t {
                    continue;
                }
                check_half_trace(&h, &route_stateless(&h, s, t).unwrap());
                let sf = route_stateful(&h, s, t).unwrap();
                check_half_trace(&h, &sf);
                // Preferred side stays fixed and empty.
                let mut fixed: Option<Side> = None;
                for st in &sf.steps {
                    if let Some(p) = st.preferred_side {
                        assert!(fixed.is_none() || fixed == Some(p));
                        fixed = Some(p);
                        if st.to != sf.target {
                            let v = h.points().index_of(st.to).unwrap();
                            let reg = Regions::new(&h, v, t).unwrap();
                            assert!((0..h.len()).all(|x| x == v || !reg.in_side(p, h.pos(x))));
                        }
                    }
                }
                for tr in [route_g12(&g12, s, t).unwrap(), route_g9(&g9, s, t).unwrap()] {
                    assert!(tr.success && tr.pass, "{tr:?}");
                }
            }
        }
    }
}

#[test]
fn complete_sparse_graph_routes_like_half_theta6() {
    // With few points no edge is dropped, so G12 repeats the stateful route.
    let h = half(&[(0.0, 0.0), (0.3, 1.0), (-0.2, 0.5), (0.6, 0.4)]);
    let g12 = build_g12(&h).unwrap();
    assert_eq!(g12.edge_count(), h.edge_count());
    for s in 0..4 {
        for t in 0..4 {
            if s != t {
                let a = route_stateful(&h, s, t).unwrap();
                let b = route_g12(&g12, s, t).unwrap();
                assert_eq!(a.vertices(), b.vertices());
                assert_eq!(b.exploration, 0.0);
            }
        }
    }
}

#[test]
fn trace_json_round_trip() {
    let h = random_half(2, 30);
    let g9 = build_g9(&h).unwrap();
    let r = route_g9(&g9, 0, 7).unwrap();
    let back: RoutingTrace = serde_json::from_str(&serde_json::to_string(&r).unwrap()).unwrap();
    assert_eq!(back, r);
}

