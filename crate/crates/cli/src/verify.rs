use clap::ValueEnum;
use pwave_core::analysis::{nilpotency_report, random_schema, weyl_eval_jet, WeylSchema};
use pwave_core::families::ManifoldSpec;
use pwave_core::flows::{self, FourierLoop};
use pwave_core::geometry::{self, curvature_at, fd_pipeline, is_plane_wave_form, nabla_r};
use pwave_core::sampling::{self, SampleRng};
use pwave_core::Result;

use crate::report::Record;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    RicciFlat,
    Vsi,
    Nilpotency,
    PlaneWave,
    Holonomy,
    Oracle,
    All,
}

impl Suite {
    const EACH: [Suite; 6] = [
        Suite::RicciFlat,
        Suite::Vsi,
        Suite::Nilpotency,
        Suite::PlaneWave,
        Suite::Holonomy,
        Suite::Oracle,
    ];

    fn default_tol(self) -> f64 {
        match self {
            Suite::RicciFlat => 1e-9,
            Suite::Vsi | Suite::Nilpotency => 1e-8,
            Suite::Holonomy => 1e-7,
            Suite::Oracle => 1e-6,
            Suite::PlaneWave | Suite::All => 0.5,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Suite::RicciFlat => "ricci-flat",
            Suite::Vsi => "vsi",
            Suite::Nilpotency => "nilpotency",
            Suite::PlaneWave => "plane-wave",
            Suite::Holonomy => "holonomy",
            Suite::Oracle => "oracle",
            Suite::All => "all",
        }
    }
}

pub struct Options {
    pub tol: Option<f64>,
    pub samples: usize,
    pub seed: u64,
}

/// Runs `suite` (every suite for [`Suite::All`]), each on its own RNG stream
/// derived from the seed so that suite outcomes do not depend on each other.
pub fn run(spec: &ManifoldSpec, suite: Suite, opts: &Options) -> Result<Vec<Record>> {
    let list: Vec<Suite> = if suite == Suite::All { Suite::EACH.to_vec() } else { vec![suite] };
    let mut records = Vec::new();
    for s in list {
        let offset = Suite::EACH.iter().position(|&e| e == s).unwrap_or(0) as u64;
        let mut rng = sampling::rng(opts.seed.wrapping_mul(16).wrapping_add(offset));
        let tol = opts.tol.unwrap_or(s.default_tol());
        records.extend(run_one(spec, s, tol, opts.samples.max(1), &mut rng)?);
    }
    Ok(records)
}

fn run_one(spec: &ManifoldSpec, suite: Suite, tol: f64, n: usize, rng: &mut SampleRng) -> Result<Vec<Record>> {
    let m = spec.dim();
    let name = suite.name();
    let mut out = Vec::new();
    match suite {
        Suite::RicciFlat => {
            let (mut rho, mut tau) = (0.0f64, 0.0f64);
            for _ in 0..n {
                let jet = nabla_r(spec, &sampling::point(rng, m, 2.0), 0)?;
                rho = rho.max(geometry::ricci(&jet).amax());
                tau = tau.max(geometry::scalar(&jet).abs());
            }
            out.push(Record::check(format!("{name}: max |rho|"), rho, tol));
            out.push(Record::check(format!("{name}: max |tau|"), tau, tol));
        }
        Suite::Vsi => {
            let mut schemas: Vec<WeylSchema> =
                ["tau", "rho2", "R2", "gradR2"].iter().map(|s| WeylSchema::parse(s)).collect::<Result<_>>()?;
            schemas.extend((0..10).map(|_| random_schema(rng, 3, 2)));
            let mut worst = 0.0f64;
            for _ in 0..n {
                let jet = nabla_r(spec, &sampling::point(rng, m, 1.0), 2)?;
                for s in &schemas {
                    worst = worst.max(weyl_eval_jet(&jet, s)?.abs());
                }
            }
            out.push(Record::check(format!("{name}: max |invariant| over {} schemas", schemas.len()), worst, tol));
        }
        Suite::Nilpotency => {
            let mut worst = 0.0f64;
            for _ in 0..n {
                let x = sampling::point(rng, m, 1.0);
                worst = worst.max(nilpotency_report(spec, &x, 20, rng)?.max_residual());
            }
            out.push(Record::check(format!("{name}: max scaled residual"), worst, tol));
        }
        Suite::PlaneWave => {
            let report = is_plane_wave_form(spec, n.min(5), rng)?;
            out.push(Record::check(format!("{name}: violations"), report.violations.len() as f64, tol));
        }
        Suite::Holonomy => {
            let (mut tri, mut metric) = (0.0f64, 0.0f64);
            for _ in 0..n {
                let base = sampling::point(rng, m, 1.0);
                let lp = FourierLoop::random(rng, &base, 1.0).sample(800);
                let h = flows::holonomy_loop(spec, &lp, "verify")?;
                let (d, b) = h.triangularity();
                tri = tri.max(d).max(b);
                metric = metric.max(h.metric_residual(&spec.metric_at(&base)?));
            }
            out.push(Record::check(format!("{name}: unipotent upper triangular"), tri, tol));
            out.push(Record::check(format!("{name}: metric preserved"), metric, tol));
        }
        Suite::Oracle => {
            let mut worst = 0.0f64;
            for _ in 0..n {
                let x = sampling::point(rng, m, 2.0);
                let exact = curvature_at(spec, &x)?;
                let fd = fd_pipeline(|y: &[f64]| spec.metric_matrix(y), &x, 0)?;
                worst = worst.max(exact.max_abs_diff(fd.r()));
            }
            out.push(Record::check(format!("{name}: max |R - R_fd|"), worst, tol));
        }
        Suite::All => unreachable!("expanded by run"),
    }
    Ok(out)
}
