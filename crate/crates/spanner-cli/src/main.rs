use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{anyhow, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use spanner_kit::analysis::{g9_approximation_check, spanning_ratio_with_pairs, verify_bound, BoundSpec, RatioReport};
use spanner_kit::build::{
    build_g12, build_g9, build_half_theta6, build_mst, build_rotated_union, build_theta, build_yao, GraphKind,
};
use spanner_kit::generate::{gen_circle, gen_routing_lb, gen_theta5_lower_bound, RoutingGadget};
use spanner_kit::io::{gen_random, graph_from_json, graph_to_json, point_set_from_json, point_set_to_json, RunConfig};
use spanner_kit::routing::{route, Algo, RoutingTrace};
use spanner_kit::svg::render_svg;
use spanner_kit::{PointSet, SpannerError, SpannerGraph};

#[derive(Parser)]
#[command(name = "spanner-kit", version, about = "Cone-based geometric spanners: build, measure, route")]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args)]
struct Common {
    /// Seed for all generated point sets.
    #[arg(long, global = true, env = "SPANNER_KIT_SEED", default_value_t = 1)]
    seed: u64,
    /// Number of random points.
    #[arg(long, global = true, default_value_t = 64)]
    n: usize,
    /// Number of cones.
    #[arg(long, global = true, default_value_t = 6)]
    k: usize,
    /// Side of the square random points are drawn from.
    #[arg(long, global = true, default_value_t = 1.0)]
    bbox: f64,
    /// Absolute tolerance for bound checks.
    #[arg(long, global = true, default_value_t = 1e-9)]
    tolerance: f64,
    /// Read points or a graph from this JSON file instead of generating.
    #[arg(long, global = true)]
    input: Option<PathBuf>,
    /// Write the result here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
#[value(rename_all = "snake_case")]
enum GenKind {
    Random,
    Circle,
    Theta5Lb,
    RoutingLb,
}

#[derive(Clone, Copy, ValueEnum)]
#[value(rename_all = "snake_case")]
enum Gadget {
    Positive,
    NegativeA,
    NegativeB,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
#[value(rename_all = "snake_case")]
enum GraphArg {
    Yao,
    Theta,
    HalfTheta6,
    RotatedUnion,
    G12,
    G9,
    Mst,
}

#[derive(Clone, Copy, ValueEnum)]
#[value(rename_all = "snake_case")]
enum AlgoArg {
    Stateless,
    Stateful,
    G12,
    G9,
}

#[derive(Subcommand)]
enum Cmd {
    /// Emit a point set.
    Gen {
        #[arg(long, value_enum, default_value = "random")]
        kind: GenKind,
        #[arg(long, value_enum, default_value = "positive")]
        gadget: Gadget,
        #[arg(long, default_value_t = 0.0)]
        alpha: f64,
        /// Nudge used by the lower-bound constructions.
        #[arg(long, default_value_t = 1e-4)]
        delta: f64,
    },
    /// Build a graph over generated or given points.
    Build {
        #[arg(long, value_enum)]
        graph: GraphArg,
        /// Rotated copies for the rotated union.
        #[arg(long, default_value_t = 2)]
        m: usize,
    },
    /// Measure the spanning ratio of a graph.
    Analyze {
        #[arg(long, value_enum)]
        graph: Option<GraphArg>,
        #[arg(long, default_value_t = 2)]
        m: usize,
        /// Also write every pair to this CSV file.
        #[arg(long)]
        per_pair: Option<PathBuf>,
        /// Exit with status 1 when the bound fails.
        #[arg(long)]
        check: bool,
    },
    /// Route between two vertex ids.
    Route {
        #[arg(long, value_enum)]
        algo: AlgoArg,
        #[arg(long)]
        from: u32,
        #[arg(long)]
        to: u32,
        /// Also write an SVG with the route highlighted.
        #[arg(long)]
        svg: Option<PathBuf>,
        #[arg(long)]
        check: bool,
    },
    /// Check theorem bounds over seeded random trials.
    Verify {
        #[arg(long, value_enum)]
        graph: GraphArg,
        #[arg(long, default_value_t = 20)]
        trials: usize,
        #[arg(long, default_value_t = 2)]
        m: usize,
    },
    /// Draw a graph as SVG.
    Render {
        #[arg(long, value_enum)]
        graph: Option<GraphArg>,
        #[arg(long, default_value_t = 2)]
        m: usize,
        /// Routing trace JSON to overlay.
        #[arg(long)]
        trace: Option<PathBuf>,
        /// Outline T(u→w) for the ids `u,w`.
        #[arg(long, value_delimiter = ',')]
        pair: Option<Vec<u32>>,
    },
}

/// Failure with its exit status.
struct Failure(u8, anyhow::Error);

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        let code = match e.downcast_ref::<SpannerError>() {
            Some(SpannerError::InternalInvariantViolation(_)) => 1,
            _ => 2,
        };
        Failure(code, e)
    }
}

impl From<SpannerError> for Failure {
    fn from(e: SpannerError) -> Self {
        anyhow::Error::from(e).into()
    }
}

type Outcome = Result<bool, Failure>;

impl Common {
    fn config(&self) -> RunConfig {
        RunConfig { seed: self.seed, n: self.n, k: self.k, bbox: self.bbox, tolerance: self.tolerance }
    }

    fn read_input(&self) -> anyhow::Result<Option<String>> {
        self.input
            .as_ref()
            .map(|p| std::fs::read_to_string(p).with_context(|| format!("reading {}", p.display())))
            .transpose()
    }

    fn points(&self) -> Result<PointSet, Failure> {
        match self.read_input()? {
            Some(s) => Ok(point_set_from_json(&s)?),
            None => Ok(gen_random(&self.config())?),
        }
    }

    fn write(&self, text: &str) -> anyhow::Result<()> {
        match &self.out {
            Some(p) => std::fs::write(p, text).with_context(|| format!("writing {}", p.display())),
            None => {
                let mut out = std::io::stdout().lock();
                let res = out.write_all(text.as_bytes()).and_then(|_| {
                    if text.ends_with('\n') {
                        Ok(())
                    } else {
                        out.write_all(b"\n")
                    }
                });
                match res {
                    Err(e) if e.kind() == std::io::ErrorKind::BrokenPipe => Ok(()),
                    r => r.context("writing to stdout"),
                }
            }
        }
    }
}

fn build(kind: GraphArg, ps: &PointSet, k: usize, m: usize) -> Result<SpannerGraph, SpannerError> {
    match kind {
        GraphArg::Yao => build_yao(ps, k),
        GraphArg::Theta => build_theta(ps, k),
        GraphArg::HalfTheta6 => build_half_theta6(ps),
        GraphArg::RotatedUnion => build_rotated_union(ps, m),
        GraphArg::G12 => build_g12(&build_half_theta6(ps)?),
        GraphArg::G9 => build_g9(&build_half_theta6(ps)?),
        GraphArg::Mst => build_mst(ps),
    }
}

/// A graph from `--input` if it holds one, else built from the points.
fn graph(c: &Common, kind: Option<GraphArg>, m: usize) -> Result<SpannerGraph, Failure> {
    if let Some(text) = c.read_input()? {
        if let Ok(g) = graph_from_json(&text) {
            return Ok(g);
        }
        let ps = point_set_from_json(&text)?;
        let kind = kind.ok_or_else(|| anyhow!("--input holds points; pass --graph"))?;
        return Ok(build(kind, &ps, c.k, m)?);
    }
    let kind = kind.ok_or_else(|| anyhow!("pass --graph or --input"))?;
    Ok(build(kind, &gen_random(&c.config())?, c.k, m)?)
}

/// The theorem bound that applies to `g`, if any.
fn default_bound(g: &SpannerGraph) -> Option<BoundSpec> {
    match (g.kind(), g.k()) {
        (GraphKind::Theta, Some(5)) => Some(BoundSpec::Theta5),
        (GraphKind::Theta, Some(k)) if k >= 7 => Some(BoundSpec::Theta { k }),
        (GraphKind::Yao, Some(k)) if k >= 7 => Some(BoundSpec::YaoEven { k }),
        (GraphKind::Yao, Some(k)) if k >= 5 && k % 2 == 1 => Some(BoundSpec::YaoOdd { k }),
        (GraphKind::HalfTheta6, _) => Some(BoundSpec::HalfTheta6),
        (GraphKind::RotatedUnion, _) => g.copies().map(|m| BoundSpec::RotatedUnion { m }),
        (GraphKind::G9, _) => Some(BoundSpec::G9OfH),
        _ => None,
    }
}

fn report(g: &SpannerGraph, tol: f64) -> Result<RatioReport, SpannerError> {
    let mut r = match default_bound(g) {
        Some(spec) => verify_bound(g, spec)?,
        None => spanning_ratio_with_pairs(g)?,
    };
    if let Some(b) = r.bound {
        r.pass = Some(r.max_ratio <= b + tol);
    }
    Ok(r)
}

fn gen(c: &Common, kind: GenKind, gadget: Gadget, alpha: f64, delta: f64) -> Outcome {
    let ps = match kind {
        GenKind::Random => gen_random(&c.config())?,
        GenKind::Circle => gen_circle(c.n, c.bbox)?,
        GenKind::Theta5Lb => gen_theta5_lower_bound(delta)?,
        GenKind::RoutingLb => {
            let g = match gadget {
                Gadget::Positive => RoutingGadget::Positive,
                Gadget::NegativeA => RoutingGadget::NegativeA,
                Gadget::NegativeB => RoutingGadget::NegativeB,
            };
            gen_routing_lb(g, alpha, delta)?
        }
    };
    c.write(&point_set_to_json(&ps))?;
    Ok(true)
}

fn analyze(c: &Common, kind: Option<GraphArg>, m: usize, per_pair: Option<&PathBuf>, check: bool) -> Outcome {
    let g = graph(c, kind, m)?;
    let r = report(&g, c.tolerance)?;
    if let Some(path) = per_pair {
        let rows = match &r.per_pair {
            Some(rows) => rows.clone(),
            None => spanning_ratio_with_pairs(&g)?.per_pair.unwrap_or_default(),
        };
        let mut csv = String::from("u,v,graph_distance,euclidean,ratio\n");
        for row in rows {
            csv.push_str(&format!("{},{},{},{},{}\n", row.u, row.v, row.graph_distance, row.euclidean, row.ratio));
        }
        std::fs::write(path, csv).with_context(|| format!("writing {}", path.display()))?;
    }
    c.write(&serde_json::to_string_pretty(&r).map_err(anyhow::Error::from)?)?;
    Ok(!check || r.pass != Some(false))
}

fn route_cmd(c: &Common, algo: AlgoArg, from: u32, to: u32, svg: Option<&PathBuf>, check: bool) -> Outcome {
    let (kind, algo) = match algo {
        AlgoArg::Stateless => (GraphArg::HalfTheta6, Algo::Stateless),
        AlgoArg::Stateful => (GraphArg::HalfTheta6, Algo::Stateful),
        AlgoArg::G12 => (GraphArg::G12, Algo::G12),
        AlgoArg::G9 => (GraphArg::G9, Algo::G9),
    };
    let g = graph(c, Some(kind), 1)?;
    let idx = |id: u32| g.points().index_of(id).ok_or_else(|| anyhow!("no vertex with id {id}"));
    let (s, t) = (idx(from)?, idx(to)?);
    let trace = route(&g, algo, s, t)?;
    if let Some(path) = svg {
        std::fs::write(path, render_svg(&g, Some(&trace), Some((t, s))))
            .with_context(|| format!("writing {}", path.display()))?;
    }
    c.write(&serde_json::to_string_pretty(&trace).map_err(anyhow::Error::from)?)?;
    Ok(!check || trace.pass)
}

fn verify(c: &Common, kind: GraphArg, trials: usize, m: usize) -> Outcome {
    let mut worst: f64 = 1.0;
    let mut bound = None;
    let mut failures = Vec::new();
    for i in 0..trials {
        let seed = c.seed.wrapping_add(i as u64);
        let ps = gen_random(&RunConfig { seed, ..c.config() })?;
        let g = build(kind, &ps, c.k, m)?;
        let r = report(&g, c.tolerance)?;
        worst = worst.max(r.max_ratio);
        bound = r.bound.or(bound);
        let mut ok = r.pass != Some(false);
        if kind == GraphArg::G9 {
            ok &= g9_approximation_check(&build_half_theta6(&ps)?, &g)?.pass;
        }
        if !ok {
            failures.push(json!({"seed": seed, "max_ratio": r.max_ratio, "witness": r.witness}));
        }
    }
    let pass = failures.is_empty();
    let out = json!({
        "graph": kind.to_possible_value().map(|v| v.get_name().to_string()),
        "trials": trials,
        "n": c.n,
        "seed": c.seed,
        "worst_ratio": worst,
        "bound": bound,
        "failures": failures,
        "pass": pass,
    });
    c.write(&serde_json::to_string_pretty(&out).map_err(anyhow::Error::from)?)?;
    Ok(pass)
}

fn render(c: &Common, kind: Option<GraphArg>, m: usize, trace: Option<&PathBuf>, pair: Option<&Vec<u32>>) -> Outcome {
    let g = graph(c, kind, m)?;
    let trace: Option<RoutingTrace> = match trace {
        Some(p) => {
            let s = std::fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))?;
            Some(serde_json::from_str(&s).map_err(|e| SpannerError::DegenerateInput(format!("malformed trace: {e}")))?)
        }
        None => None,
    };
    let pair = match pair {
        Some(v) if v.len() == 2 => {
            let idx = |id: u32| g.points().index_of(id).ok_or_else(|| anyhow!("no vertex with id {id}"));
            Some((idx(v[0])?, idx(v[1])?))
        }
        Some(_) => return Err(anyhow!("--pair takes two ids, e.g. 0,5").into()),
        None => None,
    };
    c.write(&render_svg(&g, trace.as_ref(), pair))?;
    Ok(true)
}

fn run(cli: &Cli) -> Outcome {
    let c = &cli.common;
    match &cli.cmd {
        Cmd::Gen { kind, gadget, alpha, delta } => gen(c, *kind, *gadget, *alpha, *delta),
        Cmd::Build { graph, m } => {
            let g = build(*graph, &c.points()?, c.k, *m)?;
            c.write(&graph_to_json(&g))?;
            Ok(true)
        }
        Cmd::Analyze { graph, m, per_pair, check } => analyze(c, *graph, *m, per_pair.as_ref(), *check),
        Cmd::Route { algo, from, to, svg, check } => route_cmd(c, *algo, *from, *to, svg.as_ref(), *check),
        Cmd::Verify { graph, trials, m } => verify(c, *graph, *trials, *m),
        Cmd::Render { graph, m, trace, pair } => render(c, *graph, *m, trace.as_ref(), pair.as_ref()),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Failure(code, e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(code)
        }
    }
}
