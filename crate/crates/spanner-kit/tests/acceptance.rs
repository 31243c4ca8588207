//! Numbered acceptance checks. Prints one PASS/FAIL line per criterion and
//! exits non-zero if any fails.

mod common;

use std::f64::consts::PI;
use std::process::ExitCode;
use std::time::Instant;

use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use spanner_kit::analysis::{
    g9_approximation_check, half_theta6_alpha_bound, negative_routing_bound, path_length, restricted_pair_check,
    shortest_path, spanning_ratio, spanning_ratio_with_pairs, theta5_witness_path, verify_bound, BoundSpec,
};
use spanner_kit::build::{build_g12, build_g9, build_half_theta6, build_mst, build_rotated_union, build_theta, build_yao, half_cones};
use spanner_kit::generate::{gen_circle, gen_routing_lb, gen_theta5_lower_bound, theta5_construction, theta5_steps, RoutingGadget};
use spanner_kit::geom::{ConeSystem, Point, PointSet};
use spanner_kit::io::{gen_random, RunConfig};
use spanner_kit::routing::{route_g12, route_g9, route_stateful, route_stateless, CaseLabel, RoutingTrace};
use spanner_kit::SpannerGraph;

use common::{brute_distance, edge_set, scan_edges};

const TOL: f64 = 1e-9;
const SETS: u64 = 100;
const PAIRS: usize = 200;

fn random(seed: u64, n: usize, k: usize) -> PointSet {
    gen_random(&RunConfig { seed, n, k, ..Default::default() }).unwrap()
}

/// `count` distinct ordered pairs, fixed by `seed`.
fn pairs(n: usize, count: usize, seed: u64) -> Vec<(usize, usize)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let all = n * (n - 1);
    sample(&mut rng, all, count.min(all))
        .into_iter()
        .map(|i| {
            let (s, r) = (i / (n - 1), i % (n - 1));
            (s, if r >= s { r + 1 } else { r })
        })
        .collect()
}

struct Outcome {
    ok: bool,
    detail: String,
}

fn outcome(ok: bool, detail: String) -> Outcome {
    Outcome { ok, detail }
}

fn criterion_1() -> Outcome {
    let mut worst: f64 = 0.0;
    let mut restricted = 0;
    let mut bad = 0;
    for seed in 0..SETS {
        let h = build_half_theta6(&random(seed, 64, 6)).unwrap();
        worst = worst.max(spanning_ratio(&h).unwrap().max_ratio);
        for u in 0..h.len() {
            for w in (0..h.len()).filter(|&w| w != u && h.cone6(u, w).is_positive()) {
                restricted += 1;
                if !restricted_pair_check(&h, u, w).unwrap().ok {
                    bad += 1;
                }
            }
        }
    }
    outcome(worst <= 2.0 + TOL && bad == 0, format!("max ratio {worst:.6}, {restricted} restricted pairs, {bad} over"))
}

fn criterion_2() -> Outcome {
    let delta = 1e-4;
    let mut ok = true;
    let mut parts = Vec::new();
    for alpha in [0.0, PI / 12.0, PI / 6.0] {
        let ps = gen_routing_lb(RoutingGadget::Positive, alpha, delta).unwrap();
        let h = build_half_theta6(&ps).unwrap();
        let r = shortest_path(&h, 0, 1).unwrap().0 / ps.dist(0, 1);
        let want = half_theta6_alpha_bound(alpha);
        ok &= r >= want - 10.0 * delta;
        parts.push(format!("{r:.6}/{want:.6}"));
    }
    outcome(ok, format!("measured/bound {}", parts.join(", ")))
}

/// Pair bound for the exact half-Θ6 routing engines.
fn routing_bound(h: &SpannerGraph, s: usize, t: usize) -> f64 {
    let cs = half_cones();
    if h.cone6(s, t).is_positive() {
        half_theta6_alpha_bound(cs.angle_alpha(h.pos(s), h.pos(t)).unwrap())
    } else {
        negative_routing_bound(cs.angle_alpha(h.pos(t), h.pos(s)).unwrap())
    }
}

/// Returns the number of potential-accounting violations in `r`.
fn potential_violations(r: &RoutingTrace) -> usize {
    let mut bad = 0;
    let mut left_d = false;
    for st in &r.steps {
        if st.phi_before - st.phi_after < st.len - TOL {
            bad += 1;
        }
        if st.case == CaseLabel::D {
            if left_d || r.starts_positive() {
                bad += 1;
            }
        } else {
            left_d = true;
        }
    }
    bad
}

struct RoutingTally {
    runs: usize,
    worst: [f64; 2],
    over: usize,
    potential_bad: usize,
    g_runs: usize,
    g_worst: [f64; 2],
    g_over: usize,
}

fn routing_sweep() -> RoutingTally {
    let mut t = RoutingTally { runs: 0, worst: [0.0; 2], over: 0, potential_bad: 0, g_runs: 0, g_worst: [0.0; 2], g_over: 0 };
    for seed in 0..SETS {
        let h = build_half_theta6(&random(seed, 64, 6)).unwrap();
        let g12 = build_g12(&h).unwrap();
        let g9 = build_g9(&h).unwrap();
        for (s, d) in pairs(h.len(), PAIRS, seed) {
            let bound = routing_bound(&h, s, d);
            let dist = h.dist(s, d);
            for r in [route_stateless(&h, s, d).unwrap(), route_stateful(&h, s, d).unwrap()] {
                t.runs += 1;
                let slot = usize::from(!h.cone6(s, d).is_positive());
                t.worst[slot] = t.worst[slot].max(r.total / (bound * dist));
                if !r.success || r.total > bound * dist + TOL {
                    t.over += 1;
                }
                t.potential_bad += potential_violations(&r);
            }
            for (i, (r, factor, slack)) in
                [(route_g12(&g12, s, d).unwrap(), 19.0, 20.0), (route_g9(&g9, s, d).unwrap(), 3.0, 4.0)].into_iter().enumerate()
            {
                t.g_runs += 1;
                let paid = r.total + r.exploration;
                t.g_worst[i] = t.g_worst[i].max((paid - r.slack) / (factor * bound * dist));
                // The slack is 20|as| or 4|as| for a corner a of a triangle
                // inside T(t→s), so it never exceeds that multiple of its size.
                let room = half_cones()
                    .canonical_triangle(h.points().get(d), h.points().get(s))
                    .map(|tri| tri.size())
                    .unwrap_or(dist);
                let cap = if h.cone6(s, d).is_positive() { 0.0 } else { slack * room };
                if !r.success || r.slack > cap + TOL || paid > factor * bound * dist + r.slack + TOL {
                    t.g_over += 1;
                }
            }
        }
    }
    t
}

fn criterion_3(t: &RoutingTally) -> Outcome {
    let ps = gen_routing_lb(RoutingGadget::NegativeA, 0.0, 1e-4).unwrap();
    let h = build_half_theta6(&ps).unwrap();
    let r = route_stateless(&h, 1, 0).unwrap().total / ps.dist(0, 1);
    outcome(
        t.over == 0 && (2.87..=2.88676).contains(&r),
        format!(
            "{} runs, worst total/bound positive {:.6} negative {:.6}, {} over; negative_a ratio {r:.6}",
            t.runs, t.worst[0], t.worst[1], t.over
        ),
    )
}

fn criterion_4(t: &RoutingTally) -> Outcome {
    outcome(t.potential_bad == 0, format!("{} runs, {} violations", t.runs, t.potential_bad))
}

fn criterion_5() -> Outcome {
    let bound = BoundSpec::Theta5.value().unwrap();
    let mut worst: f64 = 0.0;
    let mut ok = true;
    let mut witness_pairs = 0;
    let cs = ConeSystem::new(5).unwrap();
    let factor = 2.0 * (2.0 + 5f64.sqrt());
    for seed in 0..SETS {
        let ps = random(seed, 40, 5);
        let g = build_theta(&ps, 5).unwrap();
        let rep = verify_bound(&g, BoundSpec::Theta5).unwrap();
        worst = worst.max(rep.max_ratio);
        ok &= rep.pass == Some(true);
        for (u, w) in pairs(ps.len(), 5, seed) {
            let p = theta5_witness_path(&g, u, w).unwrap();
            let tri = cs.canonical_triangle(ps.get(u), ps.get(w)).unwrap();
            let valid = p.first() == Some(&u) && p.last() == Some(&w) && p.windows(2).all(|e| g.has_edge(e[0], e[1]));
            ok &= valid && path_length(&g, &p) <= factor * tri.size() + TOL;
            witness_pairs += 1;
        }
    }
    let ps = gen_theta5_lower_bound(1e-4).unwrap();
    let lb = shortest_path(&build_theta(&ps, 5).unwrap(), 0, 1).unwrap().0 / ps.dist(0, 1);
    let steps = theta5_steps();
    let snaps = theta5_construction(1e-4).unwrap();
    let mut steps_ok = snaps.len() == steps.len() + 1;
    for (i, snap) in snaps.iter().enumerate().skip(1) {
        let ps = PointSet::new(snap.iter().enumerate().map(|(j, p)| Point::new(j as u32 + 1, p.x, p.y)).collect()).unwrap();
        let (_, path) = shortest_path(&build_theta(&ps, 5).unwrap(), 0, 1).unwrap();
        steps_ok &= path.iter().map(|x| x + 1).collect::<Vec<_>>() == steps[i - 1].expected_path;
    }
    outcome(
        ok && worst <= bound + TOL && lb >= 3.79 && steps_ok,
        format!("max ratio {worst:.4} <= {bound:.4}, {witness_pairs} witness pairs, lower bound {lb:.5}, table steps match: {steps_ok}"),
    )
}

fn criterion_6() -> Outcome {
    let mut ok = true;
    let mut parts = Vec::new();
    let mut run = |label: &str, k: usize, build: fn(&PointSet, usize) -> spanner_kit::Result<SpannerGraph>, spec: BoundSpec| {
        let mut worst: f64 = 0.0;
        for seed in 0..50 {
            let rep = verify_bound(&build(&random(seed, 48, k), k).unwrap(), spec).unwrap();
            worst = worst.max(rep.max_ratio);
            ok &= rep.pass == Some(true);
        }
        parts.push(format!("{label}{k} {worst:.4}/{:.4}", spec.value().unwrap()));
    };
    for k in [7, 9, 12] {
        run("yao", k, build_yao, BoundSpec::YaoEven { k });
        run("theta", k, build_theta, BoundSpec::Theta { k });
    }
    for k in [5, 7, 9] {
        run("yao_odd", k, build_yao, BoundSpec::YaoOdd { k });
    }
    outcome(ok, parts.join(", "))
}

fn criterion_7() -> Outcome {
    let mut ok = true;
    let (mut d12, mut d9, mut approx) = (0, 0, 0.0f64);
    for seed in 0..SETS {
        let h = build_half_theta6(&random(seed, 64, 6)).unwrap();
        let g12 = build_g12(&h).unwrap();
        let g9 = build_g9(&h).unwrap();
        d12 = d12.max(g12.max_degree());
        d9 = d9.max(g9.max_degree());
        ok &= edge_set(&g9).is_subset(&edge_set(&g12)) && edge_set(&g12).is_subset(&edge_set(&h));
        let rep = g9_approximation_check(&h, &g9).unwrap();
        approx = approx.max(rep.max_ratio);
        ok &= rep.pass;
    }
    outcome(ok && d12 <= 12 && d9 <= 9, format!("max degree G12 {d12}, G9 {d9}, worst approximation {approx:.4}"))
}

fn criterion_8(t: &RoutingTally) -> Outcome {
    outcome(
        t.g_over == 0,
        format!(
            "{} runs, worst (paid - slack)/(factor·bound) G12 {:.4} G9 {:.4}, {} over",
            t.g_runs, t.g_worst[0], t.g_worst[1], t.g_over
        ),
    )
}

fn criterion_9() -> Outcome {
    let n = 100;
    let t = build_mst(&gen_circle(n, 1.0).unwrap()).unwrap();
    let ratio = spanning_ratio(&t).unwrap().max_ratio;
    let missing = (0..n).map(|i| (i, (i + 1) % n)).find(|&(a, b)| !t.has_edge(a, b)).unwrap();
    let gap = shortest_path(&t, missing.0, missing.1).unwrap().0 / t.dist(missing.0, missing.1);
    outcome(
        ratio >= n as f64 / (2.0 * PI) && (gap - 99.0).abs() < 1e-6,
        format!("max ratio {ratio:.4}, missing-edge pair ratio {gap:.6}"),
    )
}

fn criterion_10() -> Outcome {
    let mut mismatches = 0;
    for seed in 0..50u64 {
        let n = 3 + (seed as usize % 6);
        let ps = random(seed, n, 6);
        for g in [build_half_theta6(&ps).unwrap(), build_theta(&ps, 6).unwrap(), build_yao(&ps, 6).unwrap()] {
            let rep = spanning_ratio_with_pairs(&g).unwrap();
            let mut worst: f64 = 1.0;
            for row in rep.per_pair.as_ref().unwrap() {
                let (u, v) = (ps.index_of(row.u).unwrap(), ps.index_of(row.v).unwrap());
                let d = brute_distance(&g, u, v);
                mismatches += usize::from(row.graph_distance != d);
                worst = worst.max(d / ps.dist(u, v));
            }
            mismatches += usize::from(rep.max_ratio != worst);
        }
        for k in [4, 5, 7, 9] {
            let ps = random(seed, n, k);
            mismatches += usize::from(edge_set(&build_yao(&ps, k).unwrap()) != scan_edges(&ps, k, false));
            mismatches += usize::from(edge_set(&build_theta(&ps, k).unwrap()) != scan_edges(&ps, k, true));
        }
    }
    outcome(mismatches == 0, format!("50 sets, {mismatches} mismatches"))
}

fn criterion_11() -> Outcome {
    let mut worst: f64 = 0.0;
    let mut same = true;
    for seed in 0..50 {
        let ps = random(seed, 64, 6);
        worst = worst.max(spanning_ratio(&build_rotated_union(&ps, 2).unwrap()).unwrap().max_ratio);
        same &= build_rotated_union(&ps, 1).unwrap() == build_half_theta6(&ps).unwrap();
    }
    outcome(worst <= 1.9320 + 1e-6 && same, format!("m=2 max ratio {worst:.6}, m=1 equals half-Θ6: {same}"))
}

fn main() -> ExitCode {
    let start = Instant::now();
    let tally = routing_sweep();
    let checks: Vec<(usize, Box<dyn Fn() -> Outcome + '_>)> = vec![
        (1, Box::new(criterion_1)),
        (2, Box::new(criterion_2)),
        (3, Box::new(|| criterion_3(&tally))),
        (4, Box::new(|| criterion_4(&tally))),
        (5, Box::new(criterion_5)),
        (6, Box::new(criterion_6)),
        (7, Box::new(criterion_7)),
        (8, Box::new(|| criterion_8(&tally))),
        (9, Box::new(criterion_9)),
        (10, Box::new(criterion_10)),
        (11, Box::new(criterion_11)),
    ];
    let mut failed = 0;
    for (i, check) in checks {
        let o = check();
        failed += usize::from(!o.ok);
        println!("criterion {i:>2}: {} ({})", if o.ok { "PASS" } else { "FAIL" }, o.detail);
    }
    println!("acceptance: {} of 11 passed in {:.1}s", 11 - failed, start.elapsed().as_secs_f64());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
