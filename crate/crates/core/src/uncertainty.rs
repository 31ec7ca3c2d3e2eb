//! The relativistic uncertainty bound γ(d).
//!
//! For spherically symmetric electron amplitudes the minimum of
//! `√(Δr²Δp²)` at fixed `d = (Δp²/Δr²)^{1/4}/m` (ħ = c = 1) is the ground
//! state of the radial problem with
//!
//! ```text
//! V(q; d) = 1/q² - 1/(q²√(1+d²q²)) + d²/(4(1+d²q²)²) + q².
//! ```
//!
//! `d = 0` is the Schrödinger oscillator (γ = 3/2); `d = ∞` keeps a bare
//! `1/q²` and gives γ = 1 + √5/2.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::radial::{self, EigenResult, RadialPotential};
use crate::table::{SweepRow, SweepTable};

pub const GAMMA_NONRELATIVISTIC: f64 = 1.5;

/// `1 + √5/2`.
pub fn gamma_ultrarelativistic() -> f64 {
    1.0 + 0.5 * 5f64.sqrt()
}

/// The dimensionless scale `d`. Infinity is a separate state because the
/// limiting operator has a `1/q²` singularity that no finite `d` has.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize)]
pub enum RelativisticScale {
    Finite(f64),
    Infinite,
}

impl RelativisticScale {
    pub fn finite(d: f64) -> Result<Self> {
        if d >= 0.0 && d.is_finite() {
            Ok(Self::Finite(d))
        } else {
            Err(Error::domain("RelativisticScale", d, "0 <= d < inf"))
        }
    }

    /// `f64::INFINITY` for the ultrarelativistic limit.
    pub fn as_f64(self) -> f64 {
        match self {
            Self::Finite(d) => d,
            Self::Infinite => f64::INFINITY,
        }
    }
}

impl std::fmt::Display for RelativisticScale {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Self::Finite(d) => write!(f, "{d}"),
            Self::Infinite => f.write_str("inf"),
        }
    }
}

fn finite_potential(q: f64, d: f64) -> f64 {
    // 1/q² - 1/(q²√(1+x)) = d²/((1+√(1+x))√(1+x)) with x = d²q², which
    // avoids cancellation as q → 0
    let d2 = d * d;
    let x = d2 * q * q;
    let root = (1.0 + x).sqrt();
    d2 / ((1.0 + root) * root) + d2 / (4.0 * (1.0 + x) * (1.0 + x)) + q * q
}

/// `V(q; d)`.
pub fn potential_v(q: f64, d: RelativisticScale) -> Result<f64> {
    if !(q > 0.0) || !q.is_finite() {
        return Err(Error::domain("potential_v", q, "q > 0"));
    }
    Ok(match d {
        RelativisticScale::Finite(d) => finite_potential(q, d),
        RelativisticScale::Infinite => 1.0 / (q * q) + q * q,
    })
}

/// Coefficient of `1/q²` in `V` at the origin: 0 for finite `d`, 1 at infinity.
pub fn singular_strength(d: RelativisticScale) -> f64 {
    match d {
        RelativisticScale::Finite(_) => 0.0,
        RelativisticScale::Infinite => 1.0,
    }
}

pub fn radial_potential(d: RelativisticScale) -> RadialPotential {
    match d {
        RelativisticScale::Finite(dv) => RadialPotential::new(move |q| finite_potential(q, dv), 0.0),
        RelativisticScale::Infinite => RadialPotential::new(|q| 1.0 / (q * q) + q * q, 1.0),
    }
}

/// One solved point of the bound curve.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BoundPoint {
    pub d: RelativisticScale,
    pub gamma: f64,
    pub est_error: f64,
    /// `⟨q²⟩ / ⟨f'² + (V - q²) f²⟩` for the minimizer. Equal to 1 exactly when
    /// the solution's own dispersion ratio reproduces the input `d`.
    pub virial_ratio: f64,
}

pub fn solve(d: RelativisticScale, tol: f64) -> Result<(BoundPoint, EigenResult)> {
    if !(tol >= 1e-8) {
        return Err(Error::domain("gamma_bound", tol, "tol >= 1e-8"));
    }
    let pot = radial_potential(d);
    let res = radial::ground_state_default(&pot, tol)?;
    let q2 = res.moment(|q| q * q)?;
    let rest = res.kinetic_moment() + res.moment(|q| pot.evaluate(q) - q * q)?;
    let point = BoundPoint {
        d,
        gamma: res.gamma,
        est_error: res.diagnostics.est_error,
        virial_ratio: q2 / rest,
    };
    Ok((point, res))
}

/// Lowest eigenvalue γ(d), accurate to `tol` (at least 1e-8).
pub fn gamma_bound(d: RelativisticScale, tol: f64) -> Result<f64> {
    solve(d, tol).map(|(p, _)| p.gamma)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundCurve {
    pub rows: Vec<BoundPoint>,
    pub gamma_at_0: f64,
    pub gamma_at_inf: f64,
}

impl BoundCurve {
    pub fn is_strictly_increasing(&self) -> bool {
        self.rows.windows(2).all(|w| w[1].gamma > w[0].gamma)
    }

    pub fn to_table(&self) -> SweepTable {
        let mut table = SweepTable::new("d");
        table.rows = self
            .rows
            .iter()
            .map(|r| SweepRow {
                param: r.d.as_f64(),
                gamma: r.gamma,
                err_est: r.est_error,
            })
            .collect();
        table.metadata.insert("gamma_at_0".into(), self.gamma_at_0);
        table.metadata.insert("gamma_at_inf".into(), self.gamma_at_inf);
        table
    }
}

/// Solves every `d` independently (in parallel); rows keep input order.
pub fn sweep(d_values: &[RelativisticScale], tol: f64) -> Result<BoundCurve> {
    if d_values.windows(2).any(|w| !(w[0] < w[1])) {
        return Err(Error::InvalidInput("d values must be strictly ascending".into()));
    }
    let rows = d_values
        .par_iter()
        .map(|&d| solve(d, tol).map(|(p, _)| p))
        .collect::<Result<Vec<_>>>()?;
    Ok(BoundCurve {
        rows,
        gamma_at_0: GAMMA_NONRELATIVISTIC,
        gamma_at_inf: gamma_ultrarelativistic(),
    })
}

/// Reference sweep grid for the bound curve.
pub const REFERENCE_D: [f64; 5] = [0.5, 1.0, 2.0, 4.0, 8.0];

/// Sample points `q ∈ [0.01, 8]` used by the residual checks.
fn residual_grid() -> impl Iterator<Item = f64> {
    (0..=2000).map(|i| 0.01 + (8.0 - 0.01) * i as f64 / 2000.0)
}

/// Max over `q ∈ [0.01, 8]` of
/// `|(1/2)(-f'' - (2/q) f' + V f) - γ f|` for a trial `f` given with its
/// first two derivatives.
pub fn radial_residual<F, V>(trial: F, potential: V, gamma: f64) -> f64
where
    F: Fn(f64) -> (f64, f64, f64),
    V: Fn(f64) -> f64,
{
    residual_grid()
        .map(|q| {
            let (f, df, d2f) = trial(q);
            (0.5 * (-d2f - 2.0 / q * df + potential(q) * f) - gamma * f).abs()
        })
        .fold(0.0, f64::max)
}

/// Residual of `f₀ = exp(-γ₀ q²/2)` in the `d = 0` equation with eigenvalue
/// `γ₀`.
///
/// The Gaussian is an eigenfunction only for `γ₀ = 1`, and then with
/// eigenvalue 3/2, so this residual never vanishes; at `γ₀ = 3/2` it is of
/// order one. [`oscillator_ground_residual`] is the exact solution.
pub fn gaussian_limit_residual(gamma0: f64) -> f64 {
    let trial = move |q: f64| {
        let f = (-0.5 * gamma0 * q * q).exp();
        (f, -gamma0 * q * f, (gamma0 * gamma0 * q * q - gamma0) * f)
    };
    radial_residual(trial, |q| q * q, gamma0)
}

/// Residual of the oscillator ground state `exp(-q²/2)` in the `d = 0`
/// equation with trial eigenvalue `gamma`.
pub fn oscillator_ground_residual(gamma: f64) -> f64 {
    let trial = |q: f64| {
        let f = (-0.5 * q * q).exp();
        (f, -q * f, (q * q - 1.0) * f)
    };
    radial_residual(trial, |q| q * q, gamma)
}

/// Residual of `f∞ = q^s exp(-q²/2)`, `s = (√5-1)/2`, in the `d = ∞`
/// equation with trial eigenvalue `gamma`.
pub fn ultrarelativistic_limit_residual(gamma: f64) -> f64 {
    let s = 0.5 * (5f64.sqrt() - 1.0);
    let trial = move |q: f64| {
        let f = q.powf(s) * (-0.5 * q * q).exp();
        let g = s / q - q;
        (f, g * f, (g * g - s / (q * q) - 1.0) * f)
    };
    radial_residual(trial, |q| 1.0 / (q * q) + q * q, gamma)
}
