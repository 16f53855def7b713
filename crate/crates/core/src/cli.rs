//! Command-line front end. Every command prints a JSON run report and exits
//! with 0 when all checks pass, 1 when a check fails or a computation is
//! refused, and 2 on usage or schema errors.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use crate::contact::{contact_set, Classification, ContactComponent};
use crate::distance::{check_complement_identity, eval_distance, gradient, projection_lipschitz_probe, Domain};
use crate::error::{Error, Result};
use crate::geometry::{Point2, Shape};
use crate::normal::{lambda_profile, verify_convex_ball, verify_high_equals_cut};
use crate::parallel::{mu_profile, offset_boundary, tube_area, tube_lemma_check, OffsetMethod};
use crate::reach::{estimate_reach, exterior_sphere_check, is_proximally_smooth, ReachParams};
use crate::report::round12;
use crate::scene::{parse_scene, Expect, Scene};
use crate::singular::{analyze, inclusion_chain_report, SingularSetReport};
use crate::svg::{emit_svg, Item, Layer};
use crate::{gallery, normal};

#[derive(Debug, Parser)]
#[command(name = "planar-reach", version, about = "Distance functions, reach and singular sets of planar sets")]
pub struct Cli {
    /// Grid spacing for field-based commands.
    #[arg(long, global = true, default_value_t = 0.02)]
    pub grid: f64,
    /// Seed for sampled probes.
    #[arg(long, global = true, default_value_t = 1)]
    pub seed: u64,
    /// Directory receiving report.json and any figures or tables.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Also write an SVG figure (requires --out).
    #[arg(long, global = true)]
    pub svg: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, clap::Args)]
pub struct Target {
    /// Scene file, or `gallery:<name>` for a built-in scene.
    pub scene: String,
    /// Index of the shape or domain inside the scene.
    #[arg(long, default_value_t = 0)]
    pub index: usize,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum Method {
    Analytic,
    Contour,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Check {
    Chain,
    HighEqCut,
    ConvexBall,
    TubeLemma,
    Identities,
    Lipschitz,
    ExteriorSphere,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Distance, projections and gradient at a query point.
    Distance {
        #[command(flatten)]
        target: Target,
        #[arg(long, value_parser = parse_point)]
        query: Point2,
    },
    /// High ridge, skeleton, central set and cut locus of a domain.
    Skeleton {
        #[command(flatten)]
        target: Target,
    },
    /// Reach bounds with a witness.
    Reach {
        #[command(flatten)]
        target: Target,
    },
    /// Offset boundary at distance r with its μ profile.
    Offset {
        #[command(flatten)]
        target: Target,
        #[arg(long)]
        r: f64,
        #[arg(long, value_enum, default_value_t = Method::Analytic)]
        method: Method,
    },
    /// Contact set of a point of the set.
    Contact {
        #[command(flatten)]
        target: Target,
        #[arg(long)]
        r: f64,
        #[arg(long, value_parser = parse_point)]
        at: Point2,
        #[arg(long, default_value_t = crate::contact::ANGULAR_STEP)]
        step: f64,
    },
    /// Normal distance profile along a domain boundary.
    Lambda {
        #[command(flatten)]
        target: Target,
        #[arg(long, default_value_t = 200)]
        samples: usize,
    },
    /// Tube areas and their quadratic fit.
    TubeArea {
        #[command(flatten)]
        target: Target,
        #[arg(long, value_delimiter = ',', required = true)]
        r: Vec<f64>,
    },
    /// Runs one verification check.
    Verify {
        #[command(flatten)]
        target: Target,
        #[arg(long, value_enum)]
        check: Check,
        /// Radius for radius-dependent checks (default: half the reach).
        #[arg(long)]
        r: Option<f64>,
    },
    /// Writes the built-in scenes as JSON files into --out.
    Gallery,
}

fn parse_point(s: &str) -> std::result::Result<Point2, String> {
    let v: Vec<&str> = s.split(',').collect();
    match v.as_slice() {
        [x, y] => Ok(Point2::new(
            x.trim().parse().map_err(|e| format!("bad x: {e}"))?,
            y.trim().parse().map_err(|e| format!("bad y: {e}"))?,
        )),
        _ => Err("expected x,y".into()),
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CheckResult {
    pub name: String,
    pub pass: bool,
    pub tolerance: Value,
    pub value: Value,
}

#[derive(Debug, Clone, Serialize)]
pub struct RunReport {
    pub command: String,
    pub parameters: BTreeMap<String, Value>,
    pub checks: Vec<CheckResult>,
    pub metrics: Value,
    pub artifacts: Vec<String>,
}

impl RunReport {
    fn new(command: &str) -> Self {
        RunReport { command: command.into(), parameters: BTreeMap::new(), checks: Vec::new(), metrics: Value::Null, artifacts: Vec::new() }
    }

    fn param(&mut self, k: &str, v: impl Serialize) {
        self.parameters.insert(k.into(), to_value(&v));
    }

    fn check(&mut self, name: &str, pass: bool, tolerance: impl Serialize, value: impl Serialize) {
        self.checks.push(CheckResult { name: name.into(), pass, tolerance: to_value(&tolerance), value: to_value(&value) });
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }
}

/// Non-finite reals become strings; finite ones are rounded to 12 digits.
fn to_value(v: &impl Serialize) -> Value {
    serde_json::to_value(v).map(normalize).unwrap_or(Value::Null)
}

fn num(x: f64) -> Value {
    if x.is_finite() {
        json!(round12(x))
    } else if x.is_nan() {
        json!("nan")
    } else if x > 0.0 {
        json!("inf")
    } else {
        json!("-inf")
    }
}

fn normalize(v: Value) -> Value {
    match v {
        Value::Number(n) if n.is_f64() => num(n.as_f64().unwrap()),
        Value::Array(a) => Value::Array(a.into_iter().map(normalize).collect()),
        Value::Object(o) => Value::Object(o.into_iter().map(|(k, v)| (k, normalize(v))).collect()),
        other => other,
    }
}

fn load(spec: &str) -> Result<Scene> {
    match spec.strip_prefix("gallery:") {
        Some(name) => gallery::scene(name).map_err(|e| Error::Schema { path: spec.into(), message: e.to_string() }),
        None => parse_scene(&std::fs::read_to_string(spec)?),
    }
}

fn pick_shape(scene: &Scene, i: usize) -> Result<(Shape, Expect)> {
    let s = scene.shapes.get(i).ok_or_else(|| Error::Schema { path: format!("shapes[{i}]"), message: "no such shape".into() })?;
    Ok((s.build()?, s.expect.clone()))
}

fn pick_domain(scene: &Scene, i: usize) -> Result<(Domain, Expect)> {
    let d = scene.domains.get(i).ok_or_else(|| Error::Schema { path: format!("domains[{i}]"), message: "no such domain".into() })?;
    Ok((d.build()?, d.expect.clone()))
}

fn expected_f64(e: &Expect, key: &str) -> Option<f64> {
    match e.get(key)? {
        Value::String(s) if s == "inf" => Some(f64::INFINITY),
        v => v.as_f64(),
    }
}

/// Radius standing in for the reach when it is infinite.
fn finite_reach(shape: &Shape) -> f64 {
    let r = estimate_reach(shape, &ReachParams::default()).lower;
    if r.is_finite() {
        r
    } else {
        1.0
    }
}

struct Ctx {
    grid: f64,
    seed: u64,
    out: Option<PathBuf>,
    svg: bool,
}

impl Ctx {
    fn write(&self, rep: &mut RunReport, name: &str, body: impl FnOnce(&Path) -> Result<()>) -> Result<()> {
        if let Some(dir) = &self.out {
            std::fs::create_dir_all(dir)?;
            let p = dir.join(name);
            body(&p)?;
            rep.artifacts.push(p.display().to_string());
        }
        Ok(())
    }

    fn figure(&self, rep: &mut RunReport, layers: &[Layer]) -> Result<()> {
        if self.svg {
            self.write(rep, "figure.svg", |p| emit_svg(layers, p))?;
        }
        Ok(())
    }
}

fn shape_layer(shape: &Shape) -> Layer {
    let mut l = Layer::new("set", "black");
    for c in shape.components().items {
        match c {
            crate::geometry::Component::Isolated(q) => l.items.push(Item::Points(vec![q], 0.02)),
            crate::geometry::Component::Chain(ch) => {
                let pts: Vec<Point2> = crate::geometry::build_arclength_with(&ch.pieces, 0.01, std::f64::consts::PI)
                    .map(|c| c.points())
                    .unwrap_or_default();
                l.items.push(Item::Polyline { points: pts, closed: ch.closed });
            }
        }
    }
    l
}

fn domain_layer(d: &Domain) -> Layer {
    let mut l = Layer::new("boundary", "black");
    for c in d.curves() {
        l.items.push(Item::Polyline { points: c.points(), closed: true });
    }
    l
}

fn chain_layers(d: &Domain, rep: &SingularSetReport, h: f64) -> Vec<Layer> {
    let dot = 0.4 * h;
    vec![
        domain_layer(d),
        Layer::new("cut", "#999999").with(Item::Points(rep.cut.clone(), dot)),
        Layer::new("central", "#1f77b4").with(Item::Points(rep.central.clone(), dot)),
        Layer::new("skeleton", "#d62728").with(Item::Points(rep.skeleton.clone(), 0.7 * dot)),
        Layer::new("high_ridge", "#2ca02c").with(Item::Points(rep.high_ridge.clone(), dot)),
    ]
}

/// Relations `<` (strict) or `=` between consecutive sets of the chain.
fn expected_chain(e: &Expect) -> Option<Vec<bool>> {
    let s = e.get("chain")?.as_str()?;
    Some(s.chars().filter(|c| *c == '<' || *c == '=').map(|c| c == '<').collect())
}

fn run_verify(ctx: &Ctx, rep: &mut RunReport, scene: &Scene, index: usize, check: Check, r: Option<f64>) -> Result<()> {
    let h = ctx.grid;
    let tol = 2.0 * h * (1.0 + 1e-9);
    match check {
        Check::Chain => {
            let (d, e) = pick_domain(scene, index)?;
            let sf = analyze(&d, h)?;
            let cr = inclusion_chain_report(&d, &sf)?;
            rep.check("inclusions", cr.chain.inclusions_ok, tol, cr.chain.inclusion);
            if let Some(c2) = cr.chain.c2_central_eq_cut {
                rep.check("c2_central_eq_cut", c2, tol, cr.chain.gaps[2]);
            }
            if let Some(want) = expected_chain(&e) {
                let names = ["high_vs_skeleton", "skeleton_vs_central", "central_vs_cut"];
                for (k, w) in want.iter().enumerate().take(3) {
                    let relation = if *w { "strict" } else { "equal" };
                    rep.check(&format!("{}_{relation}", names[k]), cr.chain.strict[k] == *w, cr.chain.strict_tol, cr.chain.gaps[k]);
                }
            }
            ctx.figure(rep, &chain_layers(&d, &cr, h))?;
            rep.metrics = to_value(&json!({"rho": cr.rho, "chain": cr.chain, "components": cr.components,
                "counts": [cr.high_ridge.len(), cr.skeleton.len(), cr.central.len(), cr.cut.len()]}));
        }
        Check::HighEqCut | Check::ConvexBall => {
            let (d, e) = pick_domain(scene, index)?;
            let sf = analyze(&d, h)?;
            let v = if check == Check::HighEqCut { verify_high_equals_cut(&d, &sf)? } else { verify_convex_ball(&d, &sf)? };
            if let Some(want) = e.get("high_eq_cut").and_then(Value::as_bool) {
                rep.check("hypothesis_matches_expectation", v.hypothesis_ok == want, tol, v.high_cut_distance);
            }
            if let Some(t) = v.tube_hausdorff {
                rep.check("tube_hausdorff", t <= tol, tol, t);
            }
            if let Some(c) = v.class_consistent {
                rep.check("c2_class", c, json!(null), v.shape_class);
            }
            if let Some(dv) = v.disk_verdict {
                let want = e.get("disk").and_then(Value::as_bool).unwrap_or(dv);
                rep.check("disk_verdict", dv == want, normal::ISO_TOL, v.isoperimetric_ratio);
            }
            if let Some(b) = v.ball_verdict {
                rep.check("ball_verdict", b, normal::ISO_TOL, v.isoperimetric_ratio);
            }
            let s_layer = Layer::new("S", "#d62728").with(Item::Points(v.s_points.clone(), 0.4 * h));
            ctx.figure(rep, &[domain_layer(&d), s_layer])?;
            let mut m = to_value(&v);
            if let Value::Object(o) = &mut m {
                o.remove("s_points");
                o.insert("s_count".into(), json!(v.s_points.len()));
            }
            rep.metrics = m;
        }
        Check::TubeLemma => {
            let (s, _) = pick_shape(scene, index)?;
            let r = r.unwrap_or_else(|| 0.5 * finite_reach(&s));
            rep.param("r", r);
            let t = tube_lemma_check(&s, r, h)?;
            rep.check("sets_near_core", t.sets_ok, tol, t.set_distance);
            rep.check("lambda_equals_r", t.lambda_ok, tol, [t.lambda_min, t.lambda_max]);
            rep.metrics = to_value(&t);
        }
        Check::Identities => {
            let (s, _) = pick_shape(scene, index)?;
            let r = r.unwrap_or_else(|| 0.5 * finite_reach(&s));
            rep.param("r", r);
            let id = check_complement_identity(&s, r, 10_000, ctx.seed)?;
            rep.check("complement_identities", id.max_violation() <= 5e-6, 5e-6, id.max_violation());
            rep.metrics = to_value(&id);
        }
        Check::Lipschitz => {
            let (s, _) = pick_shape(scene, index)?;
            let rs = finite_reach(&s);
            let mut all = Vec::new();
            for f in [0.25, 0.5, 0.75] {
                let l = projection_lipschitz_probe(&s, f * rs, rs, 2000, ctx.seed)?;
                rep.check(&format!("lipschitz_{f}"), l.passes(), l.bound + 1e-3, l.max_ratio);
                all.push(l);
            }
            rep.metrics = to_value(&all);
        }
        Check::ExteriorSphere => {
            let (s, _) = pick_shape(scene, index)?;
            let r = r.unwrap_or(0.5);
            rep.param("r", r);
            let (ext, ext_w) = exterior_sphere_check(&s, r, 1000);
            let (prox, prox_w) = is_proximally_smooth(&s, r, 1000);
            rep.check("exterior_sphere", ext, 1e-9, ext_w);
            rep.metrics = to_value(&json!({"exterior_sphere": ext, "proximally_smooth": prox, "witness": prox_w}));
        }
    }
    Ok(())
}

fn run(cli: Cli, rep: &mut RunReport) -> Result<()> {
    let ctx = Ctx { grid: cli.grid, seed: cli.seed, out: cli.out.clone(), svg: cli.svg };
    rep.param("grid", cli.grid);
    rep.param("seed", cli.seed);
    let h = cli.grid;
    match cli.command {
        Command::Gallery => {
            let dir = cli.out.ok_or_else(|| Error::Schema { path: "--out".into(), message: "gallery needs --out".into() })?;
            rep.artifacts = gallery::write_all(&dir)?;
        }
        Command::Distance { target, query } => {
            let (s, _) = pick_shape(&load(&target.scene)?, target.index)?;
            let pr = eval_distance(&s, query);
            let g = gradient(&s, query).ok();
            rep.param("query", query);
            rep.metrics = to_value(&json!({"distance": pr.distance, "projections": pr.projections,
                "multiplicity": pr.multiplicity, "continuum": pr.continuum, "gradient": g}));
        }
        Command::Skeleton { target } => {
            let (d, _) = pick_domain(&load(&target.scene)?, target.index)?;
            let sf = analyze(&d, h)?;
            let cr = inclusion_chain_report(&d, &sf)?;
            rep.check("inclusions", cr.chain.inclusions_ok, cr.chain.inclusion_tol, cr.chain.inclusion);
            ctx.figure(rep, &chain_layers(&d, &cr, h))?;
            rep.metrics = to_value(&cr);
        }
        Command::Reach { target } => {
            let (s, e) = pick_shape(&load(&target.scene)?, target.index)?;
            let est = estimate_reach(&s, &ReachParams::default());
            if let Some(want) = expected_f64(&e, "reach") {
                let ok = if want.is_infinite() { est.is_infinite() } else { (est.upper - want).abs() <= 1e-3 * want.max(1.0) };
                rep.check("reach_matches_expectation", ok, 1e-3, est.upper);
            }
            rep.metrics = to_value(&est);
        }
        Command::Offset { target, r, method } => {
            let (s, _) = pick_shape(&load(&target.scene)?, target.index)?;
            let m = match method {
                Method::Analytic => OffsetMethod::Analytic,
                Method::Contour => OffsetMethod::Contour { h },
            };
            rep.param("r", r);
            let ob = offset_boundary(&s, r, m)?;
            let err = ob.max_level_error();
            let tol = if matches!(method, Method::Analytic) { 1e-6 } else { 2.0 * h };
            rep.check("level_error", err <= tol, tol, err);
            let mu: Vec<f64> = ob.loops.iter().map(|l| mu_profile(l, r).min_mu).collect();
            let mut layers = vec![shape_layer(&s)];
            let mut l = Layer::new("offset", "#1f77b4");
            for c in &ob.loops {
                l.items.push(Item::Polyline { points: c.points(), closed: c.closed });
            }
            layers.push(l);
            ctx.figure(rep, &layers)?;
            rep.metrics = to_value(&json!({"loops": ob.loops.len(), "length": ob.length(), "level_error": err, "min_mu": mu}));
        }
        Command::Contact { target, r, at, step } => {
            let (s, _) = pick_shape(&load(&target.scene)?, target.index)?;
            rep.param("r", r);
            rep.param("at", at);
            let cs = contact_set(&s, r, at, step)?;
            rep.check("dichotomy", cs.classification != Classification::Other, crate::contact::TOL_ANGLE, cs.classification);
            let mut hl = Layer::new("contact", "#d62728");
            hl.width = 3.0;
            for c in &cs.components {
                match *c {
                    ContactComponent::Point { angle } => hl.items.push(Item::Points(vec![Point2::from_polar(at, r, angle)], 0.03 * r)),
                    ContactComponent::Arc { start, sweep } => hl.items.push(Item::Arc { center: at, radius: r, start, sweep }),
                }
            }
            let circle = Layer::new("sphere", "#999999").with(Item::Arc { center: at, radius: r, start: 0.0, sweep: std::f64::consts::TAU });
            ctx.figure(rep, &[shape_layer(&s), circle, hl])?;
            rep.metrics = to_value(&cs);
        }
        Command::Lambda { target, samples } => {
            let (d, e) = pick_domain(&load(&target.scene)?, target.index)?;
            let prof = lambda_profile(&d, samples, h)?;
            if let Some(want) = e.get("lambda_constant").and_then(Value::as_bool) {
                rep.check("constancy_matches_expectation", prof.constant == want, prof.tol, prof.max - prof.min);
            }
            ctx.write(rep, "lambda.csv", |p| Ok(std::fs::write(p, prof.to_csv())?))?;
            let mut chords = Layer::new("chords", "#1f77b4");
            for s in &prof.samples {
                chords.items.push(Item::Polyline { points: vec![s.y, s.y + s.nu.as_vec() * s.lambda], closed: false });
            }
            ctx.figure(rep, &[domain_layer(&d), chords])?;
            rep.metrics = to_value(&json!({"min": prof.min, "max": prof.max, "mean": prof.mean, "constant": prof.constant,
                "tol": prof.tol, "excluded_corners": prof.excluded_corners, "note": prof.note, "samples": prof.samples.len()}));
        }
        Command::TubeArea { target, r } => {
            let (s, e) = pick_shape(&load(&target.scene)?, target.index)?;
            rep.param("radii", &r);
            let ta = tube_area(&s, &r)?;
            let amax = ta.areas.iter().cloned().fold(0.0, f64::max);
            rep.check("fit_residual", ta.residual <= 1e-2 * amax, 1e-2 * amax, ta.residual);
            if let Some(want) = e.get("tube_area").and_then(Value::as_array) {
                let w: Vec<f64> = want.iter().filter_map(Value::as_f64).collect();
                if w.len() == 3 {
                    let err = (ta.fit[1] - w[1]).abs().max((ta.fit[2] - w[2]).abs());
                    rep.check("fit_matches_expectation", err <= 5e-2, 5e-2, ta.fit);
                }
            }
            rep.metrics = to_value(&ta);
        }
        Command::Verify { target, check, r } => {
            let scene = load(&target.scene)?;
            rep.param("check", format!("{check:?}"));
            run_verify(&ctx, rep, &scene, target.index, check, r)?;
        }
    }
    Ok(())
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Schema { .. } | Error::Io(_) => 2,
        _ => 1,
    }
}

/// Parses arguments, runs the command and returns the exit code together
/// with the report text written to stdout.
pub fn run_command<I, T>(args: I) -> (i32, String)
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            return (code, e.to_string());
        }
    };
    let name = match &cli.command {
        Command::Distance { .. } => "distance",
        Command::Skeleton { .. } => "skeleton",
        Command::Reach { .. } => "reach",
        Command::Offset { .. } => "offset",
        Command::Contact { .. } => "contact",
        Command::Lambda { .. } => "lambda",
        Command::TubeArea { .. } => "tube-area",
        Command::Verify { .. } => "verify",
        Command::Gallery => "gallery",
    };
    let out = cli.out.clone().filter(|_| name != "gallery");
    let mut rep = RunReport::new(name);
    let result = run(cli, &mut rep);
    let (code, text) = match result {
        Ok(()) => {
            let code = if rep.passed() { 0 } else { 1 };
            let failures: Vec<&str> = rep.checks.iter().filter(|c| !c.pass).map(|c| c.name.as_str()).collect();
            let mut v = to_value(&rep);
            v["failures"] = json!(failures);
            (code, serde_json::to_string_pretty(&v).unwrap())
        }
        Err(e) => {
            let v = json!({"command": name, "error": e.to_string(), "failures": ["error"]});
            (exit_code(&e), serde_json::to_string_pretty(&v).unwrap())
        }
    };
    if let Some(dir) = out {
        if std::fs::create_dir_all(&dir).and_then(|_| std::fs::write(dir.join("report.json"), format!("{text}\n"))).is_err() {
            return (2, text);
        }
    }
    (code, text)
}
