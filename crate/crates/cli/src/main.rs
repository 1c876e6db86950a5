//! `pwave`: manifold configs in, JSON reports and CSV curves out.

mod report;
mod verify;

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand};
use nalgebra::DMatrix;
use pwave_core::analysis::{evaluate_invariant, weyl_eval, InvariantId, WeylSchema};
use pwave_core::families::ManifoldSpec;
use pwave_core::flows::{self, Curve, FourierLoop, HolonomyElement};
use pwave_core::geometry::nabla_r;
use pwave_core::sampling;
use serde_json::{json, Map, Value};

use report::{entries, matrix, num, vector, Record, Report};
use verify::Suite;

#[derive(Parser)]
#[command(name = "pwave", version, about = "Curvature, geodesics, holonomy and invariants of generalized plane wave manifolds")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// Manifold config (JSON).
    #[arg(long, value_name = "PATH")]
    config: PathBuf,
    /// Seed for every sampled quantity.
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args)]
struct CurveArgs {
    /// BVP start point.
    #[arg(long, allow_hyphen_values = true, requires = "to", conflicts_with_all = ["point", "velocity"])]
    from: Option<String>,
    /// BVP end point.
    #[arg(long, allow_hyphen_values = true, requires = "from")]
    to: Option<String>,
    /// IVP initial point.
    #[arg(long, allow_hyphen_values = true, requires = "velocity")]
    point: Option<String>,
    /// IVP initial velocity.
    #[arg(long, allow_hyphen_values = true, requires = "point")]
    velocity: Option<String>,
    /// IVP final time.
    #[arg(long, default_value_t = 1.0)]
    time: f64,
    /// Number of time steps.
    #[arg(long, default_value_t = 2000)]
    steps: usize,
}

#[derive(Subcommand)]
enum Command {
    /// Dimension, signature, coordinates and hypothesis warnings.
    Info {
        #[command(flatten)]
        common: Common,
    },
    /// Metric, Christoffel symbols, R and covariant derivatives at a point.
    Eval {
        #[command(flatten)]
        common: Common,
        #[arg(long, allow_hyphen_values = true)]
        point: String,
        /// Highest covariant derivative of R.
        #[arg(long, default_value_t = 1)]
        order: usize,
    },
    /// Geodesic by IVP (--point, --velocity) or BVP (--from, --to), as CSV.
    Geodesic {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        curve: CurveArgs,
        /// Write the CSV here and print a JSON summary instead.
        #[arg(long, value_name = "PATH")]
        out: Option<PathBuf>,
    },
    /// Parallel transport of the coordinate frame along a geodesic.
    Transport {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        curve: CurveArgs,
        #[arg(long, default_value_t = 1e-7)]
        tol: f64,
        /// Also write the transported curve as CSV.
        #[arg(long, value_name = "PATH")]
        out: Option<PathBuf>,
    },
    /// Holonomy of loops based at a point.
    Holonomy {
        #[command(flatten)]
        common: Common,
        #[arg(long, allow_hyphen_values = true)]
        point: String,
        /// `fourier` for random smooth loops or `rect:I,J,A,B` for a
        /// coordinate rectangle in the (x_I, x_J) plane with sides A, B.
        #[arg(long = "loop", default_value = "fourier")]
        loop_kind: String,
        /// Number of random loops.
        #[arg(long, default_value_t = 1)]
        samples: usize,
        /// Size of the random loops.
        #[arg(long, default_value_t = 1.0)]
        amp: f64,
        #[arg(long, default_value_t = 800)]
        steps: usize,
        #[arg(long, default_value_t = 1e-7)]
        tol: f64,
    },
    /// Evaluates a Weyl contraction schema (text form or tau, rho2, R2, gradR2).
    Weyl {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        schema: String,
        /// May be repeated.
        #[arg(long, allow_hyphen_values = true, required = true)]
        point: Vec<String>,
    },
    /// Evaluates an invariant (alpha16, alpha3, alpha4[:P], alpha4lit[:P], alpha5[:K], alpha6).
    Invariant {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        id: String,
        /// May be repeated.
        #[arg(long, allow_hyphen_values = true, required = true)]
        point: Vec<String>,
    },
    /// Runs property suites and reports pass/fail records.
    Verify {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum, default_value = "all")]
        suite: Suite,
        /// Overrides every suite tolerance.
        #[arg(long)]
        tol: Option<f64>,
        /// Sample points per suite.
        #[arg(long, default_value_t = 5)]
        samples: usize,
    },
}

enum Outcome {
    Ok,
    ChecksFailed,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let start = Instant::now();
    let argv: Vec<String> = std::env::args().skip(1).collect();
    let result = run(cli.command, argv);
    eprintln!("elapsed: {:.3} s", start.elapsed().as_secs_f64());
    match result {
        Ok(Outcome::Ok) => ExitCode::SUCCESS,
        Ok(Outcome::ChecksFailed) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn load(common: &Common) -> anyhow::Result<ManifoldSpec> {
    let src = fs::read_to_string(&common.config).with_context(|| format!("reading {}", common.config.display()))?;
    ManifoldSpec::from_json(&src).with_context(|| format!("loading {}", common.config.display()))
}

fn parse_point(s: &str, dim: usize) -> anyhow::Result<Vec<f64>> {
    let v = s
        .split(',')
        .map(|t| t.trim().parse::<f64>().with_context(|| format!("bad number `{t}` in `{s}`")))
        .collect::<anyhow::Result<Vec<_>>>()?;
    if v.len() != dim {
        bail!("`{s}` has {} components, the manifold has dimension {dim}", v.len());
    }
    Ok(v)
}

fn emit(text: &str) -> anyhow::Result<()> {
    let mut out = io::stdout().lock();
    out.write_all(text.as_bytes()).and_then(|_| out.flush()).context("writing to stdout")
}

fn print(v: &Value) -> anyhow::Result<()> {
    emit(&format!("{}\n", serde_json::to_string_pretty(v)?))
}

fn write_file(path: &Path, contents: &str) -> anyhow::Result<()> {
    fs::write(path, contents).with_context(|| format!("writing {}", path.display()))
}

/// One value for a single point, otherwise the list and its spread.
fn point_values(out: &mut Map<String, Value>, key: &str, values: &[f64]) {
    if let [v] = values {
        out.insert(key.into(), num(*v));
    } else {
        out.insert(key.into(), vector(values));
        let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let min = values.iter().copied().fold(f64::INFINITY, f64::min);
        out.insert("spread".into(), num(max - min));
    }
}

fn solve_curve(spec: &ManifoldSpec, args: &CurveArgs) -> anyhow::Result<(Map<String, Value>, Curve)> {
    let m = spec.dim();
    let mut info = Map::new();
    let curve = match (&args.from, &args.to, &args.point, &args.velocity) {
        (Some(p), Some(q), None, None) => {
            let (p, q) = (parse_point(p, m)?, parse_point(q, m)?);
            let (v0, curve) = flows::geodesic_bvp(spec, &p, &q, args.steps)?;
            let err = curve.end().iter().zip(&q).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
            info.insert("mode".into(), json!("bvp"));
            info.insert("initial_velocity".into(), vector(&v0));
            info.insert("endpoint_error".into(), num(err));
            curve
        }
        (None, None, Some(x), Some(v)) => {
            let (x, v) = (parse_point(x, m)?, parse_point(v, m)?);
            info.insert("mode".into(), json!("ivp"));
            flows::geodesic_ivp(spec, &x, &v, args.time, args.steps)?
        }
        _ => bail!("give either --from and --to, or --point and --velocity"),
    };
    info.insert("steps".into(), json!(curve.len() - 1));
    info.insert("start".into(), vector(curve.start()));
    info.insert("end".into(), vector(curve.end()));
    info.insert("geodesic_residual".into(), num(flows::geodesic_residual(spec, &curve)?));
    Ok((info, curve))
}

fn holonomy_records(report: &mut Report, h: &HolonomyElement, g: &DMatrix<f64>, tol: f64) {
    let (d, b) = h.triangularity();
    let metric = (&h.matrix * g * h.matrix.transpose() - g).amax();
    report.records.push(Record::check(format!("{}: diagonal", h.descriptor), d, tol));
    report.records.push(Record::check(format!("{}: below diagonal", h.descriptor), b, tol));
    report.records.push(Record::check(format!("{}: metric preserved", h.descriptor), metric, tol));
}

fn run(command: Command, argv: Vec<String>) -> anyhow::Result<Outcome> {
    match command {
        Command::Info { common } => {
            let spec = load(&common)?;
            print(&report::spec_summary(&spec))?;
        }
        Command::Eval { common, point, order } => {
            let spec = load(&common)?;
            let x = parse_point(&point, spec.dim())?;
            let jet = nabla_r(&spec, &x, order)?;
            let nabla = (1..=order).map(|k| jet.nabla(k).map(|t| entries(t.nonzeros()))).collect::<Result<Vec<_>, _>>()?;
            print(&json!({
                "point": vector(&x),
                "metric": matrix(&spec.metric_matrix(&x)?),
                "christoffel": entries(spec.christoffel_at(&x)?.nonzeros()),
                "curvature": entries(jet.r().nonzeros()),
                "nabla": nabla,
            }))?;
        }
        Command::Geodesic { common, curve, out } => {
            let spec = load(&common)?;
            let (mut info, c) = solve_curve(&spec, &curve)?;
            match out {
                Some(path) => {
                    write_file(&path, &c.to_csv())?;
                    info.insert("out".into(), json!(path.display().to_string()));
                    print(&Value::Object(info))?;
                }
                None => emit(&c.to_csv())?,
            }
        }
        Command::Transport { common, curve, tol, out } => {
            let spec = load(&common)?;
            let (info, c) = solve_curve(&spec, &curve)?;
            if let Some(path) = &out {
                write_file(path, &c.to_csv())?;
            }
            let m = spec.dim();
            let frames = flows::transport_frame(&spec, &c, &DMatrix::identity(m, m))?;
            let last = frames.last().expect("nonempty curve");
            let mut report = Report::new(argv, &spec);
            report.payload.insert("curve".into(), Value::Object(info));
            report.payload.insert("frame".into(), matrix(last));
            let h = HolonomyElement {
                matrix: last.transpose(),
                descriptor: "transport".into(),
            };
            let (d, b) = h.triangularity();
            report.records.push(Record::check("transport: diagonal", d, tol));
            report.records.push(Record::check("transport: below diagonal", b, tol));
            let (g0, g1) = (spec.metric_matrix(c.start())?, spec.metric_matrix(c.end())?);
            let metric = (last.transpose() * g1 * last - g0).amax();
            report.records.push(Record::check("transport: metric preserved", metric, tol));
            return finish(&report);
        }
        Command::Holonomy {
            common,
            point,
            loop_kind,
            samples,
            amp,
            steps,
            tol,
        } => {
            let spec = load(&common)?;
            let base = parse_point(&point, spec.dim())?;
            let g = spec.metric_matrix(&base)?;
            let mut report = Report::new(argv, &spec);
            let mut elements = Vec::new();
            let loops: Vec<(String, Curve)> = if loop_kind == "fourier" {
                let mut rng = sampling::rng(common.seed);
                (0..samples.max(1))
                    .map(|k| (format!("fourier #{k}"), FourierLoop::random(&mut rng, &base, amp).sample(steps)))
                    .collect()
            } else if let Some(rest) = loop_kind.strip_prefix("rect:") {
                let parts: Vec<&str> = rest.split(',').collect();
                let [i, j, a, b] = parts[..] else {
                    bail!("expected rect:I,J,A,B, got `{loop_kind}`");
                };
                let (i, j): (usize, usize) = (i.parse()?, j.parse()?);
                if i >= spec.dim() || j >= spec.dim() || i == j {
                    bail!("rectangle needs two distinct coordinate indices below {}", spec.dim());
                }
                let (a, b): (f64, f64) = (a.parse()?, b.parse()?);
                vec![(format!("rect {i},{j}"), flows::rectangle_loop(&base, i, j, a, b, steps))]
            } else {
                bail!("unknown loop `{loop_kind}`, expected `fourier` or `rect:I,J,A,B`");
            };
            for (name, lp) in loops {
                let h = flows::holonomy_loop(&spec, &lp, &name)?;
                holonomy_records(&mut report, &h, &g, tol);
                elements.push(json!({ "loop": name, "matrix": matrix(&h.matrix) }));
            }
            report.payload.insert("base".into(), vector(&base));
            report.payload.insert("holonomy".into(), Value::Array(elements));
            return finish(&report);
        }
        Command::Weyl { common, schema, point } => {
            let spec = load(&common)?;
            let schema = WeylSchema::parse(&schema)?;
            let values = point
                .iter()
                .map(|p| Ok(weyl_eval(&spec, &parse_point(p, spec.dim())?, &schema)?))
                .collect::<anyhow::Result<Vec<_>>>()?;
            let mut out = Map::new();
            out.insert("schema".into(), json!(schema.to_string()));
            point_values(&mut out, "value", &values);
            print(&Value::Object(out))?;
        }
        Command::Invariant { common, id, point } => {
            let spec = load(&common)?;
            let id = InvariantId::parse(&id)?;
            let values = point
                .iter()
                .map(|p| Ok(evaluate_invariant(&spec, id, &parse_point(p, spec.dim())?)?))
                .collect::<anyhow::Result<Vec<_>>>()?;
            let mut out = Map::new();
            point_values(&mut out, &id.name(), &values);
            print(&Value::Object(out))?;
        }
        Command::Verify {
            common,
            suite,
            tol,
            samples,
        } => {
            let spec = load(&common)?;
            let mut report = Report::new(argv, &spec);
            for w in spec.warnings() {
                report.records.push(Record::warn(format!("config: {w}")));
            }
            let opts = verify::Options {
                tol,
                samples,
                seed: common.seed,
            };
            report.records.extend(verify::run(&spec, suite, &opts)?);
            report.payload.insert("suite".into(), json!(suite.name()));
            report.payload.insert("seed".into(), json!(common.seed));
            return finish(&report);
        }
    }
    Ok(Outcome::Ok)
}

fn finish(report: &Report) -> anyhow::Result<Outcome> {
    print(&report.to_json())?;
    Ok(if report.failed() { Outcome::ChecksFailed } else { Outcome::Ok })
}
