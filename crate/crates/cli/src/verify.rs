use std::io::Write;

use relhur::hydrogen::{quadrature_oracle, uncertainty_product_closed, CoulombState};
use relhur::quadrature::QuadConfig;
use relhur::specfun::bessel_k;
use relhur::uncertainty::{gamma_ultrarelativistic, gaussian_limit_residual, GAMMA_NONRELATIVISTIC};
use relhur::{gamma_bound, RelativisticScale, Result};
use serde::Serialize;

use crate::args::Format;
use crate::emit::{sig, write_rows};
use crate::run::Failure;

#[derive(Debug, Serialize)]
pub struct Check {
    pub check: &'static str,
    #[serde(serialize_with = "sig")]
    pub value: f64,
    #[serde(serialize_with = "sig")]
    pub target: f64,
    #[serde(serialize_with = "sig")]
    pub tol: f64,
    pub pass: bool,
}

impl Check {
    fn new(check: &'static str, value: f64, target: f64, tol: f64) -> Self {
        Self {
            check,
            value,
            target,
            tol,
            pass: (value - target).abs() <= tol,
        }
    }
}

/// Largest `|K₂ - K₀ - (2/x)K₁| / K₂` over a log grid on `[1e-3, 200]`.
fn k2_recurrence() -> Result<f64> {
    let mut worst: f64 = 0.0;
    for i in 0..=400 {
        let x = 1e-3 * 2e5f64.powf(i as f64 / 400.0);
        let (k0, k1, k2) = (bessel_k(0, x)?.value, bessel_k(1, x)?.value, bessel_k(2, x)?.value);
        worst = worst.max((k2 - k0 - 2.0 / x * k1).abs() / k2);
    }
    Ok(worst)
}

pub fn checks(strict: bool) -> Result<Vec<Check>> {
    let sqrt_7_2 = 3.5f64.sqrt();
    let mut out = vec![
        Check::new(
            "gamma_bound(d=0)",
            gamma_bound(RelativisticScale::Finite(0.0), 1e-7)?,
            GAMMA_NONRELATIVISTIC,
            1e-7,
        ),
        Check::new(
            "gamma_bound(d=inf)",
            gamma_bound(RelativisticScale::Infinite, 1e-6)?,
            gamma_ultrarelativistic(),
            1e-6,
        ),
        Check::new(
            "hydrogen closed form, gamma_c=1",
            uncertainty_product_closed(&CoulombState::from_gamma(1.0)?)?,
            sqrt_7_2,
            1e-9,
        ),
        Check::new(
            "hydrogen closed form, Z=1",
            uncertainty_product_closed(&CoulombState::new(1)?)?,
            sqrt_7_2,
            1e-4,
        ),
        Check::new("K2 recurrence, max rel residual", k2_recurrence()?, 0.0, 1e-10),
    ];
    if strict {
        let s = CoulombState::new(1)?;
        let closed = uncertainty_product_closed(&s)?;
        let oracle = quadrature_oracle(&s, &QuadConfig::default())?.gamma;
        out.push(Check::new(
            "hydrogen oracle/closed - 1, Z=1",
            oracle / closed - 1.0,
            0.0,
            1e-6,
        ));
        out.push(Check::new(
            "residual of exp(-3q^2/4) at d=0",
            gaussian_limit_residual(GAMMA_NONRELATIVISTIC),
            0.0,
            1e-10,
        ));
    }
    Ok(out)
}

fn write_table(out: &mut dyn Write, checks: &[Check]) -> std::io::Result<()> {
    let w = checks.iter().map(|c| c.check.len()).max().unwrap_or(5).max(5);
    writeln!(
        out,
        "{:<w$}  {:>18}  {:>18}  {:>8}  status",
        "check", "value", "target", "tol"
    )?;
    for c in checks {
        writeln!(
            out,
            "{:<w$}  {:>18.11e}  {:>18.11e}  {:>8.0e}  {}",
            c.check,
            c.value,
            c.target,
            c.tol,
            if c.pass { "PASS" } else { "FAIL" }
        )?;
    }
    Ok(())
}

pub fn run(strict: bool, format: Option<Format>, out: &mut dyn Write) -> std::result::Result<(), Failure> {
    let checks = checks(strict)?;
    match format {
        Some(f) => write_rows(out, &checks, f)?,
        None => write_table(out, &checks)?,
    }
    let failed = checks.iter().filter(|c| !c.pass).count();
    if failed > 0 {
        return Err(Failure::Checks {
            failed,
            total: checks.len(),
        });
    }
    Ok(())
}
