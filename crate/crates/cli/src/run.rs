use std::fs::File;
use std::io::{self, BufWriter, Write};

use relhur::hopfion::{gamma_h_curve, A_MAX, A_MIN};
use relhur::hydrogen::{
    d_parameter, max_z_finite, quadrature_oracle, uncertainty_product_closed, uncertainty_product_exact, CoulombState,
    FINE_STRUCTURE,
};
use relhur::quadrature::QuadConfig;
use relhur::uncertainty::{solve, sweep};
use relhur::RelativisticScale;
use serde::Serialize;
use thiserror::Error;

use crate::args::{Cli, Command, Format, HopfionArgs, SweepArgs};
use crate::emit::{sig, write_json, write_rows, Row};
use crate::verify;

pub const THREADS_ENV: &str = "REL_HUR_THREADS";

#[derive(Debug, Error)]
pub enum Failure {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] relhur::Error),
    #[error("write failed: {0}")]
    Write(String),
    #[error("{failed} of {total} checks failed")]
    Checks { failed: usize, total: usize },
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Write(e.to_string())
    }
}

impl Failure {
    pub fn exit_code(&self) -> u8 {
        match self {
            Failure::Usage(_) => 2,
            Failure::Core(e) if e.is_numerical() => 1,
            Failure::Core(_) => 2,
            Failure::Write(_) | Failure::Checks { .. } => 1,
        }
    }
}

fn usage(msg: impl Into<String>) -> Failure {
    Failure::Usage(msg.into())
}

/// Fully validated work item; building it performs no numerics.
enum Job {
    Bound { d: RelativisticScale, tol: f64 },
    Sweep { d: Vec<RelativisticScale>, tol: f64 },
    Hydrogen { state: CoulombState, oracle: bool },
    Hopfion { a: Vec<f64>, single: bool },
    Verify { strict: bool },
}

impl Job {
    fn default_format(&self) -> Option<Format> {
        match self {
            Job::Bound { .. } | Job::Hydrogen { .. } => Some(Format::Json),
            Job::Hopfion { single, .. } => Some(if *single { Format::Json } else { Format::Csv }),
            Job::Sweep { .. } => Some(Format::Csv),
            Job::Verify { .. } => None,
        }
    }
}

fn check_tol(tol: f64) -> Result<f64, Failure> {
    if (1e-8..1.0).contains(&tol) {
        Ok(tol)
    } else {
        Err(usage(format!("--tol {tol:e}: expected 1e-8 <= tol < 1")))
    }
}

fn grid(min: f64, max: f64, points: usize, log: bool, name: &str) -> Result<Vec<f64>, Failure> {
    if points < 2 {
        return Err(usage(format!("--points {points}: at least 2 points are needed")));
    }
    if !(min.is_finite() && max.is_finite() && min < max) {
        return Err(usage(format!(
            "--{name}-min {min} --{name}-max {max}: expected finite min < max"
        )));
    }
    if log && min <= 0.0 {
        return Err(usage(format!("--log needs --{name}-min > 0, got {min}")));
    }
    let n = points - 1;
    let mut values: Vec<f64> = (0..=n)
        .map(|i| {
            let t = i as f64 / n as f64;
            if log {
                (min.ln() + t * (max / min).ln()).exp()
            } else {
                min + t * (max - min)
            }
        })
        .collect();
    values[0] = min;
    values[n] = max;
    Ok(values)
}

fn scale(d: f64) -> Result<RelativisticScale, Failure> {
    RelativisticScale::finite(d).map_err(|_| usage(format!("--d {d}: expected a finite d >= 0")))
}

fn plan_sweep(args: &SweepArgs) -> Result<Job, Failure> {
    let d = grid(args.d_min, args.d_max, args.points, args.log, "d")?
        .into_iter()
        .map(scale)
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Job::Sweep {
        d,
        tol: check_tol(args.tol)?,
    })
}

fn plan_hopfion(args: &HopfionArgs) -> Result<Job, Failure> {
    let (a, single) = match (args.a, args.a_min, args.a_max, args.points) {
        (Some(a), _, _, _) => (vec![a], true),
        (None, Some(min), Some(max), Some(points)) => (grid(min, max, points, args.log, "a")?, false),
        _ => return Err(usage("hopfion needs --a or --a-min, --a-max and --points")),
    };
    if let Some(bad) = a.iter().find(|a| !(A_MIN..=A_MAX).contains(*a)) {
        return Err(usage(format!("a = {bad}: expected {A_MIN} <= a <= {A_MAX}")));
    }
    Ok(Job::Hopfion { a, single })
}

fn plan(cli: &Cli) -> Result<Job, Failure> {
    Ok(match &cli.command {
        Command::Bound(b) => Job::Bound {
            d: match b.d {
                Some(d) => scale(d)?,
                None => RelativisticScale::Infinite,
            },
            tol: check_tol(b.tol)?,
        },
        Command::Sweep(s) => plan_sweep(s)?,
        Command::Hydrogen(h) => {
            let alpha = h.alpha.unwrap_or(FINE_STRUCTURE);
            let state = CoulombState::with_alpha(h.z, alpha).map_err(|e| usage(format!("--Z {}: {e}", h.z)))?;
            if state.gamma_c() <= 0.5 {
                let limit = max_z_finite(alpha).map_or("none".to_string(), |z| z.to_string());
                return Err(usage(format!(
                    "--Z {}: gamma_c = {} <= 1/2, the momentum dispersion diverges (largest finite Z: {limit})",
                    h.z,
                    state.gamma_c()
                )));
            }
            Job::Hydrogen {
                state,
                oracle: h.oracle,
            }
        }
        Command::Hopfion(h) => plan_hopfion(h)?,
        Command::Verify(v) => Job::Verify { strict: v.strict },
    })
}

fn configure_threads() -> Result<(), Failure> {
    let Ok(raw) = std::env::var(THREADS_ENV) else {
        return Ok(());
    };
    let n: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| usage(format!("{THREADS_ENV}={raw}: expected a positive integer")))?;
    // a pool already exists only if this is called twice in one process
    let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    Ok(())
}

fn open_output(cli: &Cli) -> Result<Box<dyn Write>, Failure> {
    Ok(match &cli.output {
        Some(path) => {
            let f = File::create(path).map_err(|e| usage(format!("--output {}: {e}", path.display())))?;
            Box::new(BufWriter::new(f))
        }
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

#[derive(Serialize)]
struct BoundRecord {
    #[serde(serialize_with = "sig")]
    d: f64,
    #[serde(serialize_with = "sig")]
    gamma: f64,
    #[serde(serialize_with = "sig")]
    tol: f64,
}

#[derive(Serialize)]
struct HopfionRecord {
    #[serde(serialize_with = "sig")]
    a: f64,
    #[serde(serialize_with = "sig")]
    gamma: f64,
    #[serde(serialize_with = "sig")]
    err_est: f64,
}

#[derive(Serialize)]
struct OracleRecord {
    #[serde(serialize_with = "sig")]
    gamma: f64,
    #[serde(serialize_with = "sig")]
    delta_r_sq: f64,
    #[serde(serialize_with = "sig")]
    delta_p_sq: f64,
}

#[derive(Serialize)]
struct HydrogenRecord {
    #[serde(rename = "Z")]
    z: u32,
    #[serde(serialize_with = "sig")]
    alpha: f64,
    #[serde(serialize_with = "sig")]
    gamma_c: f64,
    /// Printed closed form.
    #[serde(serialize_with = "sig")]
    gamma: f64,
    /// Product of the Γ-function moments of the same state.
    #[serde(serialize_with = "sig")]
    gamma_exact: f64,
    #[serde(serialize_with = "sig")]
    d: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    oracle: Option<OracleRecord>,
}

fn execute(job: Job, format: Option<Format>, out: &mut dyn Write) -> Result<(), Failure> {
    let format = format.or(job.default_format());
    match job {
        Job::Bound { d, tol } => {
            let (point, _) = solve(d, tol)?;
            match format {
                Some(Format::Csv) => write_rows(
                    out,
                    &[Row {
                        param: d.as_f64(),
                        gamma: point.gamma,
                        err_est: point.est_error,
                    }],
                    Format::Csv,
                ),
                _ => write_json(
                    out,
                    &BoundRecord {
                        d: d.as_f64(),
                        gamma: point.gamma,
                        tol,
                    },
                ),
            }
        }
        Job::Sweep { d, tol } => {
            let table = sweep(&d, tol)?.to_table();
            let rows: Vec<Row> = table
                .rows
                .iter()
                .map(|r| Row {
                    param: r.param,
                    gamma: r.gamma,
                    err_est: r.err_est,
                })
                .collect();
            write_rows(out, &rows, format.unwrap_or(Format::Csv))
        }
        Job::Hydrogen { state, oracle } => {
            let closed = uncertainty_product_closed(&state)?;
            let oracle = if oracle {
                let rep = quadrature_oracle(&state, &QuadConfig::default())?;
                Some(OracleRecord {
                    gamma: rep.gamma,
                    delta_r_sq: rep.delta_r_sq,
                    delta_p_sq: rep.delta_p_sq,
                })
            } else {
                None
            };
            let z = state.z().unwrap_or_default();
            match format {
                Some(Format::Csv) => write_rows(
                    out,
                    &[Row {
                        param: z as f64,
                        gamma: closed,
                        err_est: 0.0,
                    }],
                    Format::Csv,
                ),
                _ => write_json(
                    out,
                    &HydrogenRecord {
                        z,
                        alpha: state.alpha(),
                        gamma_c: state.gamma_c(),
                        gamma: closed,
                        gamma_exact: uncertainty_product_exact(&state)?,
                        d: d_parameter(&state)?,
                        oracle,
                    },
                ),
            }
        }
        Job::Hopfion { a, single } => {
            let table = gamma_h_curve(&a, &QuadConfig::default())?;
            let rows: Vec<Row> = table
                .rows
                .iter()
                .map(|r| Row {
                    param: r.param,
                    gamma: r.gamma,
                    err_est: r.err_est,
                })
                .collect();
            match (single, format) {
                (true, Some(Format::Json)) => write_json(
                    out,
                    &HopfionRecord {
                        a: rows[0].param,
                        gamma: rows[0].gamma,
                        err_est: rows[0].err_est,
                    },
                ),
                (_, f) => write_rows(out, &rows, f.unwrap_or(Format::Csv)),
            }
        }
        Job::Verify { strict } => verify::run(strict, format, out),
    }
}

pub fn run(cli: &Cli) -> Result<(), Failure> {
    let job = plan(cli)?;
    configure_threads()?;
    let mut out = open_output(cli)?;
    let result = execute(job, cli.format, &mut *out);
    out.flush()?;
    result
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exit_codes_separate_numerics_from_usage() {
        let nc = relhur::Error::NonConvergence {
            what: "radial eigensolver",
            estimate: 1.0,
            error: 1e-3,
            tolerance: 1e-8,
        };
        assert_eq!(Failure::Core(nc).exit_code(), 1);
        let div = relhur::Error::Divergence {
            what: "hydrogen",
            reason: "gamma_c <= 1/2",
        };
        assert_eq!(Failure::Core(div).exit_code(), 2);
        assert_eq!(usage("x").exit_code(), 2);
        assert_eq!(Failure::Checks { failed: 1, total: 2 }.exit_code(), 1);
    }

    #[test]
    fn grids_hit_both_ends() {
        let g = grid(0.01, 100.0, 5, true, "d").unwrap();
        for (got, want) in g.iter().zip([0.01, 0.1, 1.0, 10.0, 100.0]) {
            assert!((got - want).abs() <= 1e-14 * want);
        }
        assert_eq!((g[0], g[4]), (0.01, 100.0));
        assert_eq!(grid(0.0, 1.0, 3, false, "d").unwrap(), vec![0.0, 0.5, 1.0]);
        assert!(grid(1.0, 1.0, 3, false, "d").is_err());
        assert!(grid(0.0, 1.0, 1, false, "d").is_err());
    }
}
